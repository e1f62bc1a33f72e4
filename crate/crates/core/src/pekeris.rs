//! Second-order expansion of the centrifugal barrier in powers of the
//! Woods-Saxon form factor, matched at the minimum of the effective potential.
//!
//! With x = (r − R₀)/R₀ and s = 1/(1 + e^{αx}) the barrier δ̃/(1+x)² is replaced
//! by δ̃(C₀ + C₁s + C₂s²), so that the effective potential takes the shape
//! K₀ − K₁s + K₂s² and stays exactly solvable.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::{logistic, ChannelSpec, Model, PotentialParams};
use crate::roots::brent;

const SCAN_POINTS: usize = 400;
const X_FLOOR: f64 = -0.999;
const X_TOL: f64 = 1e-14;

/// Location of the effective-potential minimum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extremum {
    /// (r_l − R₀)/R₀
    pub x: f64,
    /// r_l in fm.
    pub r: f64,
    /// Exact effective potential at r_l, MeV.
    pub veff_min: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PekerisExpansion {
    /// `None` for a vanishing barrier, where no expansion is needed.
    pub extremum: Option<Extremum>,
    pub delta_tilde: f64,
    pub c: [f64; 3],
    /// K₀, K₁, K₂ in MeV.
    pub k: [f64; 3],
    /// Largest relative disagreement between the K's built from the C's and
    /// the hyperbolic forms obtained by eliminating δ̃ with the extremum
    /// condition. Zero when there is no extremum.
    pub hyperbolic_gap: f64,
    #[serde(skip)]
    params: PotentialParams,
}

/// dV_eff/dx in MeV, in a form that does not overflow for large |αx|.
fn extremum_condition(p: &PotentialParams, delta: f64, x: f64) -> f64 {
    let al = p.alpha();
    let ch = (0.5 * al * x).cosh();
    al * p.v0 / (4.0 * ch * ch) - 2.0 * delta / (1.0 + x).powi(3)
}

/// Locate the minimum of the effective potential in x = (r − R₀)/R₀.
///
/// Sign changes of dV_eff/dx are bracketed on a grid geometric in (1 + x) and
/// refined with Brent's method. Only minima are kept; if several exist the
/// deepest wins.
pub fn solve_extremum(model: &Model, c: &ChannelSpec) -> Result<Extremum> {
    let p = &model.params;
    let delta = model.delta_tilde(c);
    if delta == 0.0 {
        return Err(Error::NoExtremum);
    }
    let x_hi = 5.0 + 30.0 / p.alpha();
    let (q_lo, q_hi) = (1.0 + X_FLOOR, 1.0 + x_hi);
    let ratio = (q_hi / q_lo).powf(1.0 / (SCAN_POINTS - 1) as f64);
    let grid: Vec<f64> = (0..SCAN_POINTS)
        .map(|i| match i {
            0 => X_FLOOR,
            i if i == SCAN_POINTS - 1 => x_hi,
            i => q_lo * ratio.powi(i as i32) - 1.0,
        })
        .collect();

    let f = |x: f64| extremum_condition(p, delta, x);
    let mut best: Option<Extremum> = None;
    let mut prev = (grid[0], f(grid[0]));
    for &x in &grid[1..] {
        let fx = f(x);
        // dV/dx going from negative to positive marks a minimum.
        if prev.1 < 0.0 && fx >= 0.0 {
            let root = brent(f, prev.0, x, X_TOL, 200)?;
            let cand = Extremum {
                x: root,
                r: p.r0 * (1.0 + root),
                veff_min: model.effective_potential_x(root, c),
            };
            if best.is_none_or(|b| cand.veff_min < b.veff_min) {
                best = Some(cand);
            }
        }
        prev = (x, fx);
    }
    best.ok_or(Error::NoExtremum)
}

/// C₀, C₁, C₂ for an expansion point x_l > −1.
pub fn pekeris_coefficients(alpha: f64, x: f64) -> Result<[f64; 3]> {
    if !(x > -1.0) {
        return Err(Error::InvalidRange(format!("expansion point must exceed -1, got {x}")));
    }
    let e = (alpha * x).exp();
    let em = (-alpha * x).exp();
    let q = 1.0 + x;
    let pre = (1.0 + e) * (1.0 + e) / (alpha * e * q.powi(3));
    let c0 = 1.0 / (q * q) + pre * ((em - 3.0) / (1.0 + e) + 3.0 * em / (alpha * q));
    let c1 = 2.0 * pre * (2.0 - em - 3.0 * (1.0 + em) / (alpha * q));
    let c2 = pre * (1.0 + e) * (em - 1.0 + 3.0 * (1.0 + em) / (alpha * q));
    Ok([c0, c1, c2])
}

/// K₀ = δ̃C₀, K₁ = V₀ − δ̃C₁, K₂ = δ̃C₂.
pub fn k_coefficients(v0: f64, delta: f64, c: [f64; 3]) -> [f64; 3] {
    [delta * c[0], v0 - delta * c[1], delta * c[2]]
}

/// K's rewritten with δ̃ eliminated through the extremum condition. Only
/// meaningful when `x` is an actual root of dV_eff/dx.
pub fn hyperbolic_k(v0: f64, alpha: f64, x: f64) -> [f64; 3] {
    let ax = alpha * x;
    let e = ax.exp();
    let em = (-ax).exp();
    let q = 1.0 + x;
    let ch2 = (0.5 * ax).cosh().powi(2);
    let k0 = 0.5 * v0 * (alpha * q / (4.0 * ch2) + (em - 3.0) / (1.0 + e) + 3.0 * em / (alpha * q));
    let k1 = v0 * (em - 1.0 + 3.0 * (1.0 + em) / (alpha * q));
    let k2 = v0 * (6.0 * ch2 / (alpha * q) - ax.sinh());
    [k0, k1, k2]
}

fn rel_diff(a: f64, b: f64, scale: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(scale)
}

impl PekerisExpansion {
    /// Full construction: extremum, C's and K's. A vanishing barrier bypasses
    /// the expansion with C = 0 and K = (0, V₀, 0).
    pub fn build(model: &Model, c: &ChannelSpec) -> Result<Self> {
        let p = model.params;
        let delta = model.delta_tilde(c);
        if delta == 0.0 {
            return Ok(Self {
                extremum: None,
                delta_tilde: 0.0,
                c: [0.0; 3],
                k: [0.0, p.v0, 0.0],
                hyperbolic_gap: 0.0,
                params: p,
            });
        }
        let ext = solve_extremum(model, c)?;
        let cs = pekeris_coefficients(p.alpha(), ext.x)?;
        let k = k_coefficients(p.v0, delta, cs);
        let kh = hyperbolic_k(p.v0, p.alpha(), ext.x);
        let scale = 1e-3 * p.v0;
        let hyperbolic_gap = (0..3).map(|i| rel_diff(k[i], kh[i], scale)).fold(0.0, f64::max);
        Ok(Self {
            extremum: Some(ext),
            delta_tilde: delta,
            c: cs,
            k,
            hyperbolic_gap,
            params: p,
        })
    }

    pub fn params(&self) -> &PotentialParams {
        &self.params
    }

    /// K₀ − K₁z + K₂z² as a function of the form factor z.
    pub fn potential_z(&self, z: f64) -> f64 {
        let [k0, k1, k2] = self.k;
        k0 - k1 * z + k2 * z * z
    }

    /// The approximated effective potential at radius r (any real r).
    pub fn approx_effective_potential(&self, r: f64) -> f64 {
        self.potential_z(self.params.form_factor(r))
    }

    /// Expanded barrier δ̃(C₀ + C₁s + C₂s²) and its first two x-derivatives.
    pub fn approx_barrier_derivatives(&self, x: f64) -> [f64; 3] {
        let al = self.params.alpha();
        let s = logistic(-al * x);
        let ds = -al * s * (1.0 - s);
        let dds = al * al * s * (1.0 - s) * (1.0 - 2.0 * s);
        let [c0, c1, c2] = self.c;
        let d = self.delta_tilde;
        [
            d * (c0 + c1 * s + c2 * s * s),
            d * (c1 + 2.0 * c2 * s) * ds,
            d * ((c1 + 2.0 * c2 * s) * dds + 2.0 * c2 * ds * ds),
        ]
    }

    /// Exact barrier δ̃/(1+x)² and its first two x-derivatives.
    pub fn barrier_derivatives(&self, x: f64) -> [f64; 3] {
        let q = 1.0 + x;
        let d = self.delta_tilde;
        [d / (q * q), -2.0 * d / q.powi(3), 6.0 * d / q.powi(4)]
    }

    /// Largest relative mismatch of value, slope and curvature between the
    /// expanded and exact barrier at the expansion point.
    pub fn taylor_mismatch(&self) -> f64 {
        let Some(ext) = self.extremum else { return 0.0 };
        let a = self.approx_barrier_derivatives(ext.x);
        let b = self.barrier_derivatives(ext.x);
        (0..3).map(|i| rel_diff(a[i], b[i], 0.0)).fold(0.0, f64::max)
    }

    /// Residual of the linear matching system solved by the C's, relative to
    /// the size of its terms.
    pub fn system_residual(&self) -> f64 {
        let Some(ext) = self.extremum else { return 0.0 };
        let al = self.params.alpha();
        let x = ext.x;
        let s = logistic(-al * x);
        let ds = -al * s * (1.0 - s);
        let dds = al * al * s * (1.0 - s) * (1.0 - 2.0 * s);
        let q = 1.0 + x;
        let [c0, c1, c2] = self.c;
        let rows = [
            ([c0, c1 * s, c2 * s * s], 1.0 / (q * q)),
            ([0.0, c1 * ds, 2.0 * c2 * s * ds], -2.0 / q.powi(3)),
            ([0.0, c1 * dds, 2.0 * c2 * (s * dds + ds * ds)], 6.0 / q.powi(4)),
        ];
        rows.iter()
            .map(|(terms, rhs)| {
                let lhs: f64 = terms.iter().sum();
                let scale = terms.iter().map(|t| t.abs()).fold(rhs.abs(), f64::max);
                (lhs - rhs).abs() / scale
            })
            .fold(0.0, f64::max)
    }

    /// Residual of the extremum condition relative to its natural scale.
    pub fn extremum_residual(&self) -> f64 {
        let Some(ext) = self.extremum else { return 0.0 };
        let p = &self.params;
        let scale = (p.alpha() * p.v0 / 4.0).max(2.0 * self.delta_tilde.abs());
        extremum_condition(p, self.delta_tilde, ext.x).abs() / scale
    }
}
