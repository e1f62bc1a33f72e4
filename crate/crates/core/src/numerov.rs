//! Numerov shooting for u'' = ((V(r) − E)/(ħ²/2μ)) u with u → 0 at both
//! ends of [r_min, r_max].
//!
//! A level is isolated by bisecting on the node count of the outward solution
//! (the number of levels below E), then refined by bisecting on the sign of
//! the Casoratian of the outward and inward solutions at the outermost
//! classical turning point. Unlike the log-derivative difference the
//! Casoratian has no poles, so its sign change marks the level exactly.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pekeris::PekerisExpansion;
use crate::potential::{ChannelSpec, Model, PotentialParams};

const RESCALE: f64 = 1e150;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Hamiltonian {
    /// K₀ − K₁z + K₂z².
    PekerisApprox,
    /// Woods-Saxon plus the exact centrifugal barrier.
    ExactEffective,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShootingConfig {
    pub r_min: f64,
    pub r_max: f64,
    pub step: f64,
    /// Search window; the potential's range on the grid when `None`.
    pub energy_bracket: Option<(f64, f64)>,
    pub tol_energy: f64,
    pub max_iter: usize,
}

impl ShootingConfig {
    /// r ∈ [10⁻⁶, R₀ + 25a] fm, step a/50.
    pub fn new(p: &PotentialParams) -> Self {
        Self {
            r_min: 1e-6,
            r_max: p.r0 + 25.0 * p.a,
            step: p.a / 50.0,
            energy_bracket: None,
            tol_energy: 1e-9,
            max_iter: 200,
        }
    }

    /// The whole line in z ∈ (0, 1): r from R₀ − 60a. Only meaningful for
    /// the expanded Hamiltonian, which is regular at r ≤ 0.
    pub fn full_line(p: &PotentialParams) -> Self {
        Self {
            r_min: p.r0 - 60.0 * p.a,
            ..Self::new(p)
        }
    }

    pub fn with_step(self, step: f64) -> Self {
        Self { step, ..self }
    }

    fn validate(&self) -> Result<()> {
        if !(self.r_min < self.r_max && self.step > 0.0 && self.tol_energy > 0.0) {
            return Err(Error::InvalidRange(format!(
                "need r_min < r_max, step > 0, tol > 0; got {self:?}"
            )));
        }
        if (self.r_max - self.r_min) / self.step < 8.0 {
            return Err(Error::InvalidRange("fewer than 8 grid steps".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleResult {
    pub energy: f64,
    pub node_count: u32,
    /// |W| / (|u_out(m)u_in(m+1)| + |u_out(m+1)u_in(m)|) at the final energy.
    pub matching_residual: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Outward start: u ∝ r^power, or u(r_min) = 0 with unit slope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Seed {
    Power(f64),
    Linear,
}

/// Discretized radial problem on a uniform grid.
#[derive(Debug, Clone)]
pub struct Problem {
    r: Vec<f64>,
    v: Vec<f64>,
    h: f64,
    hbar2_2mu: f64,
    seed: Seed,
}

impl Problem {
    pub fn new<V: Fn(f64) -> Result<f64>>(
        v: V,
        hbar2_2mu: f64,
        seed: Seed,
        cfg: &ShootingConfig,
    ) -> Result<Self> {
        cfg.validate()?;
        let n = ((cfg.r_max - cfg.r_min) / cfg.step).round() as usize;
        let h = (cfg.r_max - cfg.r_min) / n as f64;
        let r: Vec<f64> = (0..=n)
            .map(|i| if i == n { cfg.r_max } else { cfg.r_min + h * i as f64 })
            .collect();
        let v = r.iter().map(|&x| v(x)).collect::<Result<Vec<_>>>()?;
        Ok(Self {
            r,
            v,
            h,
            hbar2_2mu,
            seed,
        })
    }

    pub fn for_channel(
        ham: Hamiltonian,
        model: &Model,
        c: &ChannelSpec,
        px: &PekerisExpansion,
        cfg: &ShootingConfig,
    ) -> Result<Self> {
        let h2 = model.hbar2_2mu();
        match ham {
            Hamiltonian::PekerisApprox => {
                Self::new(|r| Ok(px.approx_effective_potential(r)), h2, Seed::Linear, cfg)
            }
            Hamiltonian::ExactEffective => {
                if cfg.r_min <= 0.0 {
                    return Err(Error::InvalidRange(
                        "the exact effective potential needs r_min > 0".into(),
                    ));
                }
                let seed = Seed::Power(c.l_tilde() + 1.0);
                Self::new(|r| model.effective_potential(r, c), h2, seed, cfg)
            }
        }
    }

    fn len(&self) -> usize {
        self.r.len()
    }

    /// h²Q/12 at every grid point for energy `e`.
    fn k_factors(&self, e: f64) -> Vec<f64> {
        let s = self.h * self.h / (12.0 * self.hbar2_2mu);
        self.v.iter().map(|v| s * (v - e)).collect()
    }

    fn seeds(&self) -> (f64, f64) {
        match self.seed {
            Seed::Linear => (0.0, self.h),
            Seed::Power(p) => (self.r[0].powf(p), self.r[1].powf(p)),
        }
    }

    /// Integrate outward up to index `stop`; returns (u[stop−1], u[stop], sign changes).
    fn outward(&self, k: &[f64], stop: usize) -> (f64, f64, u32) {
        let (mut u0, mut u1) = self.seeds();
        let mut nodes = 0;
        let mut last_sign = if u1 != 0.0 { u1.signum() } else { 0.0 };
        for i in 1..stop {
            let u2 = ((2.0 + 10.0 * k[i]) * u1 - (1.0 - k[i - 1]) * u0) / (1.0 - k[i + 1]);
            u0 = u1;
            u1 = u2;
            if u1 != 0.0 {
                let s = u1.signum();
                if last_sign != 0.0 && s != last_sign {
                    nodes += 1;
                }
                last_sign = s;
            }
            if u1.abs() > RESCALE {
                u0 /= RESCALE;
                u1 /= RESCALE;
            }
        }
        (u0, u1, nodes)
    }

    /// Integrate inward from u(r_max) = 0 down to index `stop`; returns
    /// (u[stop], u[stop+1], sign changes above stop+1).
    fn inward(&self, k: &[f64], stop: usize) -> (f64, f64, u32) {
        let n = self.len() - 1;
        let (mut u2, mut u1) = (0.0, 1e-30);
        let mut nodes = 0;
        for i in (stop + 1..n).rev() {
            let u0 = ((2.0 + 10.0 * k[i]) * u1 - (1.0 - k[i + 1]) * u2) / (1.0 - k[i - 1]);
            if i > stop + 1 && u0 != 0.0 && u0.signum() != u1.signum() {
                nodes += 1;
            }
            u2 = u1;
            u1 = u0;
            if u1.abs() > RESCALE {
                u1 /= RESCALE;
                u2 /= RESCALE;
            }
        }
        (u1, u2, nodes)
    }

    /// Number of levels below `e`.
    pub fn node_count(&self, e: f64) -> u32 {
        let k = self.k_factors(e);
        self.outward(&k, self.len() - 1).2
    }

    /// Index of the outermost point with V < E, kept away from the ends.
    fn matching_index(&self, e: f64) -> usize {
        let n = self.len();
        let idx = self.v.iter().rposition(|&v| v < e).unwrap_or_else(|| {
            self.v
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.total_cmp(b.1))
                .map(|(i, _)| i)
                .unwrap()
        });
        idx.clamp(2, n - 4)
    }

    /// Normalized Casoratian of the outward and inward solutions, and the
    /// node count of the matched pair.
    fn mismatch(&self, e: f64) -> (f64, f64, u32) {
        let k = self.k_factors(e);
        let m = self.matching_index(e);
        let (o0, o1, n_out) = self.outward(&k, m + 1);
        let (i0, i1, n_in) = self.inward(&k, m);
        let w = o0 * i1 - o1 * i0;
        let scale = (o0 * i1).abs() + (o1 * i0).abs();
        (w, if scale > 0.0 { w.abs() / scale } else { 0.0 }, n_out + n_in)
    }

    /// Smallest and largest potential values on the grid.
    pub fn potential_range(&self) -> (f64, f64) {
        self.v
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }

    /// Level with `nodes` nodes inside [lo, hi].
    pub fn solve(&self, nodes: u32, lo: f64, hi: f64, tol: f64, max_iter: usize) -> Result<OracleResult> {
        let not_found = || Error::NoEigenvalueInBracket { nodes, lo, hi };
        if !(lo < hi) || self.node_count(lo) > nodes || self.node_count(hi) <= nodes {
            return Err(not_found());
        }
        let (mut a, mut b) = (lo, hi);
        let mut iterations = 0;
        // Isolate: exactly `nodes` levels below a, `nodes + 1` below b.
        while self.node_count(b) > nodes + 1 || self.node_count(a) < nodes {
            if iterations >= max_iter {
                return Err(Error::NotConverged(iterations));
            }
            iterations += 1;
            let mid = 0.5 * (a + b);
            if self.node_count(mid) <= nodes {
                a = mid;
            } else {
                b = mid;
            }
        }
        let sa = self.mismatch(a).0.signum();
        while b - a > tol {
            if iterations >= max_iter {
                return Err(Error::NotConverged(iterations));
            }
            iterations += 1;
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if self.mismatch(mid).0.signum() == sa {
                a = mid;
            } else {
                b = mid;
            }
        }
        let energy = 0.5 * (a + b);
        let (_, matching_residual, node_count) = self.mismatch(energy);
        Ok(OracleResult {
            energy,
            node_count,
            matching_residual,
            converged: true,
            iterations,
        })
    }

    /// Brackets (lo, hi, nodes) for every level in [e_lo, e_hi], one per level.
    pub fn scan(&self, e_lo: f64, e_hi: f64, n_steps: usize) -> Vec<(f64, f64, u32)> {
        if !(e_lo < e_hi) || n_steps == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let step = (e_hi - e_lo) / n_steps as f64;
        let mut prev = (e_lo, self.node_count(e_lo));
        for i in 1..=n_steps {
            let e = if i == n_steps { e_hi } else { e_lo + step * i as f64 };
            let n = self.node_count(e);
            if n > prev.1 {
                self.split(prev.0, prev.1, e, n, &mut out);
            }
            prev = (e, n);
        }
        out
    }

    fn split(&self, lo: f64, n_lo: u32, hi: f64, n_hi: u32, out: &mut Vec<(f64, f64, u32)>) {
        if n_hi == n_lo + 1 || hi - lo < 1e-12 * hi.abs().max(1.0) {
            out.push((lo, hi, n_lo));
            return;
        }
        let mid = 0.5 * (lo + hi);
        let n_mid = self.node_count(mid);
        if n_mid > n_lo {
            self.split(lo, n_lo, mid, n_mid, out);
        }
        if n_hi > n_mid {
            self.split(mid, n_mid, hi, n_hi, out);
        }
    }
}

fn window(problem: &Problem, cfg: &ShootingConfig) -> (f64, f64) {
    cfg.energy_bracket.unwrap_or_else(|| {
        let (lo, _) = problem.potential_range();
        (lo, *problem.v.last().unwrap())
    })
}

/// Level n_r of channel `c` for the chosen Hamiltonian.
pub fn shoot(
    ham: Hamiltonian,
    model: &Model,
    c: &ChannelSpec,
    px: &PekerisExpansion,
    cfg: &ShootingConfig,
) -> Result<OracleResult> {
    let problem = Problem::for_channel(ham, model, c, px, cfg)?;
    let (lo, hi) = window(&problem, cfg);
    problem.solve(c.nr, lo, hi, cfg.tol_energy, cfg.max_iter)
}

/// Energy brackets of all levels in [e_lo, e_hi].
#[allow(clippy::too_many_arguments)]
pub fn node_count_scan(
    ham: Hamiltonian,
    model: &Model,
    c: &ChannelSpec,
    px: &PekerisExpansion,
    cfg: &ShootingConfig,
    e_lo: f64,
    e_hi: f64,
    n_steps: usize,
) -> Result<Vec<(f64, f64, u32)>> {
    let problem = Problem::for_channel(ham, model, c, px, cfg)?;
    Ok(problem.scan(e_lo, e_hi, n_steps))
}
