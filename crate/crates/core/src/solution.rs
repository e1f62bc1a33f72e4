//! One-call solve of a channel: expansion, closed forms from both methods,
//! classification, wavefunction normalization and optional shooting check.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::nu::{self, DimensionlessTriple, Status};
use crate::numerov::{self, Hamiltonian, OracleResult, ShootingConfig};
use crate::pekeris::PekerisExpansion;
use crate::potential::{ChannelSpec, Model};
use crate::susy::Superpotential;
use crate::wavefunction::{Measure, WavefunctionDescriptor};

/// Agreement required between the two closed-form routes, relative to
/// max(|E|, V0).
pub const CROSS_CHECK_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SolveOptions {
    /// Run the shooting solver with this Hamiltonian.
    pub oracle: Option<Hamiltonian>,
    /// Shooting configuration; the model's default when `None`.
    pub shooting: Option<ShootingConfig>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    /// The quantized energy sits on the branch with ε + η = n′.
    pub proper_branch: Option<bool>,
    /// Largest relative gap between the two algebraic forms of the K's.
    pub hyperbolic_gap: f64,
    /// Share of the normalized density at r < 0.
    pub negative_r_share: Option<f64>,
    /// max difference among the closed-form energies over max(|E|, V0).
    pub cross_check: Option<f64>,
    /// The SUSY recursion stays at B − n_r/a > 0.
    pub susy_recursion_valid: Option<bool>,
    pub messages: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChannelSolution {
    pub channel: ChannelSpec,
    pub status: Status,
    pub expansion: Option<PekerisExpansion>,
    pub energy: Option<f64>,
    pub energy_susy: Option<f64>,
    pub max_nr: i64,
    pub triple: Option<DimensionlessTriple>,
    pub wavefunction: Option<WavefunctionDescriptor>,
    pub oracle: Option<OracleResult>,
    pub diagnostics: Diagnostics,
}

impl ChannelSolution {
    fn empty(channel: ChannelSpec, status: Status) -> Self {
        Self {
            channel,
            status,
            expansion: None,
            energy: None,
            energy_susy: None,
            max_nr: -1,
            triple: None,
            wavefunction: None,
            oracle: None,
            diagnostics: Diagnostics::default(),
        }
    }

    /// Extremum radius r_l, when the barrier is present.
    pub fn r_l(&self) -> Option<f64> {
        self.expansion.and_then(|px| px.extremum).map(|e| e.r)
    }

    pub fn veff_min(&self) -> Option<f64> {
        self.expansion.and_then(|px| px.extremum).map(|e| e.veff_min)
    }

    /// False only when both closed forms were evaluated and disagree.
    pub fn cross_check_ok(&self) -> bool {
        self.diagnostics.cross_check.is_none_or(|d| d <= CROSS_CHECK_TOL)
    }
}

/// Difference relative to the larger energy, floored at `scale`: levels near
/// threshold are differences of terms of order V0, so their rounding error
/// does not shrink with |E|.
fn rel(a: f64, b: f64, scale: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(scale)
}

pub fn solve_channel(model: &Model, c: &ChannelSpec) -> Result<ChannelSolution> {
    solve_channel_with(model, c, &SolveOptions::default())
}

pub fn solve_channel_with(model: &Model, c: &ChannelSpec, opts: &SolveOptions) -> Result<ChannelSolution> {
    let px = match PekerisExpansion::build(model, c) {
        Ok(px) => px,
        Err(Error::NoExtremum) => {
            let mut s = ChannelSolution::empty(*c, Status::NoExtremum);
            s.diagnostics
                .messages
                .push("effective potential has no interior minimum".into());
            return Ok(s);
        }
        Err(e) => return Err(e),
    };
    let cl = nu::classify(model, c, &px);
    let mut sol = ChannelSolution::empty(*c, cl.status);
    sol.expansion = Some(px);
    sol.energy = cl.energy;
    sol.max_nr = nu::max_nr(model, &px);
    sol.diagnostics.hyperbolic_gap = px.hyperbolic_gap;
    sol.diagnostics.messages = cl.diagnostics;

    if let Some(e) = sol.energy {
        if let Ok(sp) = Superpotential::new(model, c, &px) {
            match sp.level(c.nr) {
                Ok(level) => {
                    sol.energy_susy = Some(level.energy);
                    sol.diagnostics.susy_recursion_valid = Some(level.recursion_valid);
                    let via_eps = nu::energy_via_epsilon(model, c, &px)?;
                    let v0 = model.params.v0;
                    let gap = rel(e, level.energy, v0)
                        .max(rel(e, via_eps, v0))
                        .max(rel(e, level.telescoped, v0));
                    sol.diagnostics.cross_check = Some(gap);
                    if gap > CROSS_CHECK_TOL {
                        sol.diagnostics
                            .messages
                            .push(format!("closed forms disagree by {gap:e} (relative)"));
                    }
                }
                Err(err) => sol.diagnostics.messages.push(format!("superpotential: {err}")),
            }
        }
        if let Ok(t) = DimensionlessTriple::quantized(model, c, &px) {
            sol.diagnostics.proper_branch = Some(t.proper_branch());
            if !t.proper_branch() {
                sol.diagnostics
                    .messages
                    .push("z^eps (1-z)^eta P(z) is not an exact solution at this energy".into());
            }
            sol.triple = Some(t);
            match WavefunctionDescriptor::from_triple(&t, c.nr, &model.params) {
                Ok(wf) => {
                    sol.diagnostics.negative_r_share = Some(wf.negative_r_weight(&model.params));
                    let resid = wf.quadrature_residual(Measure::Radial);
                    if resid.abs() > 1e-8 {
                        sol.diagnostics
                            .messages
                            .push(format!("normalization quadrature residual {resid:e}"));
                    }
                    sol.wavefunction = Some(wf);
                }
                Err(err) => sol.diagnostics.messages.push(err.to_string()),
            }
        }
    }

    if let Some(ham) = opts.oracle {
        let cfg = opts.shooting.unwrap_or_else(|| ShootingConfig::new(&model.params));
        match numerov::shoot(ham, model, c, &px, &cfg) {
            Ok(o) => sol.oracle = Some(o),
            Err(err) => sol.diagnostics.messages.push(format!("shooting: {err}")),
        }
    }
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::PhysicalConstants;
    use crate::potential::PotentialParams;

    fn fe() -> Model {
        Model::new(PotentialParams::fe56(), PhysicalConstants::rounded_si())
    }

    #[test]
    fn p_wave_ground_state() {
        let m = fe();
        let s = solve_channel(&m, &ChannelSpec::new(0, 1, 3).unwrap()).unwrap();
        assert_eq!(s.status, Status::Bound);
        assert!(s.cross_check_ok(), "{:?}", s.diagnostics);
        assert!(s.wavefunction.is_some());
        assert!(s.diagnostics.negative_r_share.unwrap() > 0.0);
        assert!((s.r_l().unwrap() - 2.955_785).abs() < 1e-5);
    }

    #[test]
    fn two_dimensional_s_wave_has_no_minimum() {
        let s = solve_channel(&fe(), &ChannelSpec::new(0, 0, 2).unwrap()).unwrap();
        assert_eq!(s.status, Status::NoExtremum);
        assert!(s.energy.is_none() && s.expansion.is_none());
    }

    #[test]
    fn bare_s_wave_is_evaluated() {
        let s = solve_channel(&fe(), &ChannelSpec::new(0, 0, 3).unwrap()).unwrap();
        assert!(s.expansion.unwrap().extremum.is_none());
        // no z² term: √(1+4γ²) − 1 = 0 leaves no admissible n_r
        assert_eq!(s.status, Status::NoAdmissibleNr);
        assert_eq!(s.max_nr, -1);
    }

    #[test]
    fn excessive_nr_is_not_bound() {
        let m = fe();
        let c = ChannelSpec::new(0, 1, 3).unwrap();
        let top = solve_channel(&m, &c).unwrap().max_nr;
        let s = solve_channel(&m, &c.with_nr(top as u32 + 1)).unwrap();
        assert_ne!(s.status, Status::Bound);
    }

    #[test]
    fn oracle_attached_on_request() {
        let m = fe();
        let opts = SolveOptions {
            oracle: Some(Hamiltonian::ExactEffective),
            shooting: None,
        };
        let s = solve_channel_with(&m, &ChannelSpec::new(0, 1, 3).unwrap(), &opts).unwrap();
        let o = s.oracle.unwrap();
        assert!(o.converged && o.energy < 0.0 && o.energy > -m.params.v0);
    }
}
