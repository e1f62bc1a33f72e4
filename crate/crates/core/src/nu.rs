//! Closed-form spectrum of the expanded Hamiltonian and the bound-state
//! admissibility rules.
//!
//! In the variable z = 1/(1 + e^{(r−R₀)/a}) the radial equation becomes a
//! hypergeometric-type equation whose polynomial solutions quantize
//! ε + η = n′ with n′ = −n_r + (√(1+4γ²) − 1)/2.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pekeris::PekerisExpansion;
use crate::potential::{ChannelSpec, Model};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Bound,
    /// Evaluable, but the energy lies outside (−V₀, 0).
    #[serde(rename = "Unbound")]
    UnboundEnergyRange,
    #[serde(rename = "NoBoundStates")]
    NoAdmissibleNr,
    NoExtremum,
    FormulaInvalid,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Bound => "Bound",
            Status::UnboundEnergyRange => "Unbound",
            Status::NoAdmissibleNr => "NoBoundStates",
            Status::NoExtremum => "NoExtremum",
            Status::FormulaInvalid => "FormulaInvalid",
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Status {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "Bound" => Status::Bound,
            "Unbound" => Status::UnboundEnergyRange,
            "NoBoundStates" => Status::NoAdmissibleNr,
            "NoExtremum" => Status::NoExtremum,
            "FormulaInvalid" => Status::FormulaInvalid,
            other => return Err(Error::InvalidRange(format!("unknown status `{other}`"))),
        })
    }
}

/// 2μa²/ħ², the factor turning MeV into the dimensionless parameters.
pub fn energy_scale(model: &Model) -> f64 {
    1.0 / model.surface_energy()
}

/// √(1 + 4γ²), or an error when the radicand is negative.
fn root_gamma(gamma_sq: f64) -> Result<f64> {
    let rad = 1.0 + 4.0 * gamma_sq;
    if rad < 0.0 {
        return Err(Error::FormulaInvalid(format!("1 + 4γ² = {rad} < 0")));
    }
    Ok(rad.sqrt())
}

/// n′ = −n_r + (√(1+4γ²) − 1)/2
pub fn n_prime(gamma_sq: f64, nr: u32) -> Result<f64> {
    Ok(-(nr as f64) + 0.5 * (root_gamma(gamma_sq)? - 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DimensionlessTriple {
    pub epsilon: f64,
    pub beta_sq: f64,
    pub gamma_sq: f64,
    /// √(ε² − β² + γ²), evaluated as |n′ − ε| to avoid cancellation when the
    /// energy comes from the quantization condition.
    pub eta: f64,
    pub n_prime: f64,
    /// ε with the sign given by ½(n′ + (β² − γ²)/n′) at a quantized energy;
    /// equals `epsilon` otherwise.
    pub epsilon_signed: f64,
}

impl DimensionlessTriple {
    /// Parameters for an arbitrary energy E < K₀.
    pub fn from_energy(model: &Model, c: &ChannelSpec, px: &PekerisExpansion, e: f64) -> Result<Self> {
        let k = energy_scale(model);
        let [k0, k1, k2] = px.k;
        let eps_sq = k * (k0 - e);
        if !(eps_sq > 0.0) {
            return Err(Error::FormulaInvalid(format!("E = {e} MeV is not below K0 = {k0} MeV")));
        }
        let (beta_sq, gamma_sq) = (k * k1, k * k2);
        let eta_sq = eps_sq - beta_sq + gamma_sq;
        Ok(Self {
            epsilon: eps_sq.sqrt(),
            beta_sq,
            gamma_sq,
            eta: eta_sq.max(0.0).sqrt(),
            n_prime: n_prime(gamma_sq, c.nr)?,
            epsilon_signed: eps_sq.sqrt(),
        })
    }

    /// Parameters at the quantized energy of channel `c`.
    pub fn quantized(model: &Model, c: &ChannelSpec, px: &PekerisExpansion) -> Result<Self> {
        let e = nu_energy(model, c, px)?;
        let mut t = Self::from_energy(model, c, px, e)?;
        let eps = 0.5 * (t.n_prime + (t.beta_sq - t.gamma_sq) / t.n_prime);
        t.epsilon_signed = eps.signum() * t.epsilon;
        t.eta = (t.n_prime - t.epsilon_signed).abs();
        Ok(t)
    }

    /// ε + η − n′; zero when the energy sits on the branch whose
    /// wavefunction z^ε(1−z)^η solves the radial equation.
    pub fn root_residual(&self) -> f64 {
        self.epsilon_signed + self.eta - self.n_prime
    }

    /// 0 < ε < n′, i.e. η = n′ − ε > 0 and the polynomial solution is genuine.
    pub fn proper_branch(&self) -> bool {
        self.epsilon_signed > 0.0 && self.n_prime - self.epsilon_signed > 0.0
    }

    /// |β² − γ²| < n′², the second inequality accompanying ε, η > 0.
    pub fn coupling_bounded(&self) -> bool {
        (self.beta_sq - self.gamma_sq).abs() < self.n_prime * self.n_prime
    }
}

/// √(1 + 4γ²) − 2n_r − 1, the quantity whose square sets the level.
fn level_root(model: &Model, c: &ChannelSpec, px: &PekerisExpansion) -> Result<f64> {
    let s = root_gamma(energy_scale(model) * px.k[2])? - 2.0 * c.nr as f64 - 1.0;
    if s <= 0.0 {
        return Err(Error::FormulaInvalid(format!(
            "√(1+4γ²) − 2n_r − 1 = {s} is not positive for n_r = {}",
            c.nr
        )));
    }
    Ok(s)
}

/// Closed-form energy,
/// E = K₀ − (K₁−K₂)/2 − S²/(16k) − k(K₁−K₂)²/S²
/// with k = 2μa²/ħ² and S = √(1+4kK₂) − 2n_r − 1.
pub fn nu_energy(model: &Model, c: &ChannelSpec, px: &PekerisExpansion) -> Result<f64> {
    let k = energy_scale(model);
    let s = level_root(model, c, px)?;
    let [k0, k1, k2] = px.k;
    let d = k1 - k2;
    Ok(k0 - 0.5 * d - s * s / (16.0 * k) - k * d * d / (s * s))
}

/// Same level through ε = ½(n′ + (β² − γ²)/n′) and E = K₀ − ε²/k.
pub fn energy_via_epsilon(model: &Model, c: &ChannelSpec, px: &PekerisExpansion) -> Result<f64> {
    let k = energy_scale(model);
    let np = 0.5 * level_root(model, c, px)?;
    let eps = 0.5 * (np + k * (px.k[1] - px.k[2]) / np);
    Ok(px.k[0] - eps * eps / k)
}

/// Largest n_r with n_r < (√(1+4γ²) − 1)/2, or −1 when there is none.
pub fn max_nr(model: &Model, px: &PekerisExpansion) -> i64 {
    let Ok(np0) = n_prime(energy_scale(model) * px.k[2], 0) else {
        return -1;
    };
    if np0 <= 0.0 {
        return -1;
    }
    np0.ceil() as i64 - 1
}

/// V₀R₀³ ≥ 8(ħ²/2μ) l̃(l̃+1) a, with l̃(l̃+1) clamped at zero. Returns the
/// verdict and whether the clamp was applied.
pub fn strength_condition(model: &Model, c: &ChannelSpec) -> (bool, bool) {
    let lam = c.centrifugal_factor();
    let p = &model.params;
    let ok = p.v0 * p.r0.powi(3) >= 8.0 * model.hbar2_2mu() * lam.max(0.0) * p.a;
    (ok, lam < 0.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub status: Status,
    pub energy: Option<f64>,
    pub diagnostics: Vec<String>,
}

/// Evaluate the closed form for one channel and decide its status.
///
/// Order of checks: evaluability of √(1+4γ²); existence of any admissible
/// n_r; positivity of S for this n_r; the window −V₀ < E < 0; the strength
/// condition on V₀R₀³.
pub fn classify(model: &Model, c: &ChannelSpec, px: &PekerisExpansion) -> Classification {
    let mut diagnostics = Vec::new();
    let invalid = |msg: String| Classification {
        status: Status::FormulaInvalid,
        energy: None,
        diagnostics: vec![msg],
    };
    if let Err(e) = root_gamma(energy_scale(model) * px.k[2]) {
        return invalid(e.to_string());
    }
    if max_nr(model, px) < 0 {
        return Classification {
            status: Status::NoAdmissibleNr,
            energy: None,
            diagnostics: vec!["no radial quantum number satisfies n_r < (√(1+4γ²) − 1)/2".into()],
        };
    }
    let energy = match nu_energy(model, c, px) {
        Ok(e) => e,
        Err(e) => return invalid(e.to_string()),
    };
    let v0 = model.params.v0;
    let (strong, clamped) = strength_condition(model, c);
    if clamped {
        diagnostics.push("l~(l~+1) < 0 clamped to 0 in the depth condition".into());
    }
    let status = if !(energy > -v0 && energy < 0.0) {
        diagnostics.push(format!("energy {energy} MeV outside (-V0, 0) = ({}, 0)", -v0));
        Status::UnboundEnergyRange
    } else if !strong {
        diagnostics.push("depth condition V0 R0^3 >= 4 hbar^2 l~(l~+1) a / mu fails".into());
        Status::NoAdmissibleNr
    } else {
        Status::Bound
    };
    Classification {
        status,
        energy: Some(energy),
        diagnostics,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::PhysicalConstants;
    use crate::potential::PotentialParams;
    use proptest::prelude::*;

    fn fe() -> Model {
        Model::new(PotentialParams::fe56(), PhysicalConstants::rounded_si())
    }

    fn solve(m: &Model, nr: u32, l: u32, d: u32) -> (ChannelSpec, PekerisExpansion, Classification) {
        let c = ChannelSpec::new(nr, l, d).unwrap();
        let px = PekerisExpansion::build(m, &c).unwrap();
        let cl = classify(m, &c, &px);
        (c, px, cl)
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a / b - 1.0).abs()
    }

    #[test]
    fn published_levels() {
        let m = fe();
        for (nr, l, d, e) in [
            (0, 1, 3, -42.898_049_4),
            (1, 1, 3, -164.008_369_1),
            (0, 1, 4, -37.022_596_4),
            (0, 2, 4, -24.723_146_1),
            (1, 3, 3, -209.161_106_2),
        ] {
            let (_, _, cl) = solve(&m, nr, l, d);
            assert!(rel(cl.energy.unwrap(), e) < 5e-4, "({nr},{l},{d})");
        }
    }

    #[test]
    fn codata_levels_within_tolerance() {
        let m = Model::new(PotentialParams::fe56(), PhysicalConstants::CODATA_2018);
        let (_, _, cl) = solve(&m, 0, 1, 3);
        assert!(rel(cl.energy.unwrap(), -42.898_049_4) < 5e-4);
    }

    #[test]
    fn published_statuses() {
        let m = fe();
        assert_eq!(solve(&m, 0, 1, 3).2.status, Status::Bound);
        assert_eq!(solve(&m, 0, 0, 4).2.status, Status::UnboundEnergyRange);
        let (_, _, cl) = solve(&m, 0, 5, 3);
        assert_eq!(cl.status, Status::UnboundEnergyRange);
        assert!(rel(cl.energy.unwrap(), 8.031_907_91) < 5e-4);
    }

    #[test]
    fn s_wave_in_three_dimensions_has_no_levels() {
        let m = fe();
        let (_, px, cl) = solve(&m, 0, 0, 3);
        assert_eq!(cl.status, Status::NoAdmissibleNr);
        assert_eq!(max_nr(&m, &px), -1);
    }

    #[test]
    fn epsilon_and_eta_of_l1() {
        let m = fe();
        let (c, px, _) = solve(&m, 0, 1, 3);
        let t = DimensionlessTriple::quantized(&m, &c, &px).unwrap();
        assert!(rel(t.epsilon, 3.913_357_119) < 1e-4);
        assert!(rel(t.eta, 0.283_520_748_7) < 1e-3);
        // The published level lies on the ε − η = n′ branch.
        assert!(!t.proper_branch());
        assert!((t.epsilon - t.eta - t.n_prime).abs() < 1e-10);
    }

    #[test]
    fn inverting_the_unit_energy() {
        let m = fe();
        let (c, px, _) = solve(&m, 0, 2, 3);
        let e = px.k[0] - m.surface_energy();
        let t = DimensionlessTriple::from_energy(&m, &c, &px, e).unwrap();
        assert!((t.epsilon - 1.0).abs() < 1e-14);
        assert!(DimensionlessTriple::from_energy(&m, &c, &px, px.k[0]).is_err());
    }

    #[test]
    fn max_nr_follows_strict_bound() {
        let m = fe();
        let (_, px, _) = solve(&m, 0, 1, 3);
        let np0 = n_prime(energy_scale(&m) * px.k[2], 0).unwrap();
        assert!((np0 - 3.63).abs() < 0.01);
        assert_eq!(max_nr(&m, &px), 3);
        let (c4, px4, cl) = solve(&m, 4, 1, 3);
        assert_eq!(cl.status, Status::FormulaInvalid);
        assert!(nu_energy(&m, &c4, &px4).is_err());
    }

    #[test]
    fn max_nr_grows_with_depth() {
        let mut prev = -1;
        for i in 0..40 {
            let p = PotentialParams::new(30.0 + 10.0 * i as f64, 4.9162, 0.65, 0.990814).unwrap();
            let m = Model::new(p, PhysicalConstants::rounded_si());
            let c = ChannelSpec::new(0, 2, 3).unwrap();
            let px = PekerisExpansion::build(&m, &c).unwrap();
            let n = max_nr(&m, &px);
            assert!(n >= prev);
            prev = n;
        }
    }

    #[test]
    fn five_dimensional_s_wave_equals_three_dimensional_p_wave() {
        let m = fe();
        let a = solve(&m, 0, 0, 5).2.energy.unwrap();
        let b = solve(&m, 0, 1, 3).2.energy.unwrap();
        assert!(rel(a, b) < 1e-12);
        assert!(rel(a, -42.898_049_4) < 5e-4);
    }

    #[test]
    fn two_dimensional_s_wave_clamps_depth_condition() {
        let m = fe();
        let c = ChannelSpec::new(0, 0, 2).unwrap();
        assert_eq!(strength_condition(&m, &c), (true, true));
    }

    #[test]
    fn status_strings_round_trip() {
        for s in [
            Status::Bound,
            Status::UnboundEnergyRange,
            Status::NoAdmissibleNr,
            Status::NoExtremum,
            Status::FormulaInvalid,
        ] {
            assert_eq!(s.as_str().parse::<Status>().unwrap(), s);
            assert_eq!(serde_json::to_string(&s).unwrap(), format!("\"{}\"", s.as_str()));
        }
    }

    fn arb_channel() -> impl Strategy<Value = (Model, ChannelSpec)> {
        (10.0f64..100.0, 2.0f64..8.0, 0.4f64..0.9, 0.5f64..2.0, 3u32..7, 0u32..7, 0u32..4).prop_map(
            |(v0, r0, a, mu, d, l, nr)| {
                let p = PotentialParams::new(v0, r0, a, mu).unwrap();
                (Model::new(p, PhysicalConstants::CODATA_2018), ChannelSpec::new(nr, l, d).unwrap())
            },
        )
    }

    proptest! {
        #[test]
        fn two_routes_agree((m, c) in arb_channel()) {
            if let Ok(px) = PekerisExpansion::build(&m, &c) {
                if let (Ok(a), Ok(b)) = (nu_energy(&m, &c, &px), energy_via_epsilon(&m, &c, &px)) {
                    prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
                    let t = DimensionlessTriple::quantized(&m, &c, &px).unwrap();
                    let eps13 = 0.5 * (t.n_prime + (t.beta_sq - t.gamma_sq) / t.n_prime);
                    prop_assert!((eps13.abs() - t.epsilon).abs() <= 1e-10 * t.epsilon.max(1.0));
                    let eta_sq = t.epsilon.powi(2) - t.beta_sq + t.gamma_sq;
                    let size = t.epsilon.powi(2) + t.beta_sq.abs() + t.gamma_sq.abs();
                    prop_assert!((eta_sq - t.eta * t.eta).abs() <= 1e-12 * size.max(1.0));
                    if t.proper_branch() {
                        prop_assert!(t.root_residual().abs() <= 1e-10 * t.n_prime.max(1.0));
                    }
                }
            }
        }

        #[test]
        fn degenerate_across_dimensions((m, c) in arb_channel()) {
            prop_assume!(c.l >= 1);
            let partner = ChannelSpec::new(c.nr, c.l - 1, c.dim + 2).unwrap();
            let a = PekerisExpansion::build(&m, &c).ok().and_then(|px| nu_energy(&m, &c, &px).ok());
            let b = PekerisExpansion::build(&m, &partner).ok().and_then(|px| nu_energy(&m, &partner, &px).ok());
            prop_assert_eq!(a.is_some(), b.is_some());
            if let (Some(a), Some(b)) = (a, b) {
                prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
            }
        }

        #[test]
        fn deeper_well_lowers_bound_level(v0 in 40.0f64..90.0, dv in 0.01f64..5.0, l in 1u32..4) {
            let c = ChannelSpec::new(0, l, 3).unwrap();
            let level = |v: f64| {
                let m = Model::new(PotentialParams::new(v, 4.9162, 0.65, 0.990814).unwrap(),
                    PhysicalConstants::CODATA_2018);
                let px = PekerisExpansion::build(&m, &c).ok()?;
                let cl = classify(&m, &c, &px);
                (cl.status == Status::Bound).then(|| cl.energy.unwrap())
            };
            if let (Some(a), Some(b)) = (level(v0), level(v0 + dv)) {
                prop_assert!(b < a);
            }
        }
    }
}
