//! Radial wavefunctions u(z) = C z^ε (1−z)^η P_n^{(2ε,2η)}(1−2z) and the
//! map between r and z = 1/(1 + e^{(r−R₀)/a}).

use serde::{Deserialize, Serialize};
use statrs::function::beta::ln_beta;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::nu::DimensionlessTriple;
use crate::potential::{logistic, PotentialParams};
use crate::quadrature::{beta_weighted, endpoint_weighted_scaled, log_peak};

pub fn z_of_r(r: f64, p: &PotentialParams) -> f64 {
    p.form_factor(r)
}

pub fn r_of_z(z: f64, p: &PotentialParams) -> f64 {
    p.r0 + p.a * ((1.0 - z) / z).ln()
}

/// P_n^{(α,β)}(x) by the three-term recurrence.
pub fn jacobi(n: u32, alpha: f64, beta: f64, x: f64) -> f64 {
    let mut p0 = 1.0;
    if n == 0 {
        return p0;
    }
    let mut p1 = (alpha + 1.0) + (alpha + beta + 2.0) * (x - 1.0) / 2.0;
    let ab = alpha + beta;
    for k in 1..n {
        let k = k as f64;
        let c = 2.0 * k + ab;
        let a1 = 2.0 * (k + 1.0) * (k + ab + 1.0) * c;
        let a2 = (c + 1.0) * (alpha * alpha - beta * beta);
        let a3 = c * (c + 1.0) * (c + 2.0);
        let a4 = 2.0 * (k + alpha) * (k + beta) * (c + 2.0);
        let p2 = ((a2 + a3 * x) * p1 - a4 * p0) / a1;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Coefficients c_j with P_n^{(α,β)}(1−2z) = Σ c_j z^j, from the
/// hypergeometric series.
pub fn jacobi_z_coefficients(n: u32, alpha: f64, beta: f64) -> Vec<f64> {
    let nf = n as f64;
    let mut lead = 1.0;
    for i in 0..n {
        lead *= (alpha + 1.0 + i as f64) / (i as f64 + 1.0);
    }
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut term = lead;
    for j in 0..=n {
        out.push(term);
        let jf = j as f64;
        term *= (jf - nf) * (nf + alpha + beta + 1.0 + jf) / ((alpha + 1.0 + jf) * (jf + 1.0));
    }
    out
}

fn poly_square(c: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; 2 * c.len() - 1];
    for (i, a) in c.iter().enumerate() {
        for (j, b) in c.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

/// ∫₀¹ z^{p}(1−z)^{q} Q(z) dz / B(p+1, q+1) for polynomial Q, termwise.
fn beta_moment_ratio(p: f64, q: f64, coeffs: &[f64]) -> f64 {
    let mut ratio = 1.0;
    let mut sum = 0.0;
    for (j, c) in coeffs.iter().enumerate() {
        sum += c * ratio;
        let jf = j as f64;
        ratio *= (p + 1.0 + jf) / (p + q + 2.0 + jf);
    }
    sum
}

/// Measure used in the normalization integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Measure {
    /// a ∫ u² dz / (z(1−z)), i.e. ∫ u² dr over the whole line.
    Radial,
    /// a ∫ u² dz.
    Flat,
}

impl Measure {
    /// Powers (p, q) of z and 1−z multiplying P² in the integrand.
    fn powers(self, eps: f64, eta: f64) -> (f64, f64) {
        match self {
            Measure::Radial => (2.0 * eps - 1.0, 2.0 * eta - 1.0),
            Measure::Flat => (2.0 * eps, 2.0 * eta),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WavefunctionDescriptor {
    pub epsilon: f64,
    pub eta: f64,
    pub nr: u32,
    /// Normalization constant for a∫u²/(z(1−z))dz = 1.
    pub norm_const: f64,
    /// Normalization constant for a∫u²dz = 1.
    pub norm_const_flat: f64,
    /// Diffuseness a in fm.
    pub a: f64,
    #[serde(skip)]
    coeffs: Vec<f64>,
}

impl WavefunctionDescriptor {
    pub fn new(epsilon: f64, eta: f64, nr: u32, a: f64) -> Result<Self> {
        if !(epsilon > 0.0 && eta > 0.0) {
            return Err(Error::DivergentNormalization(format!(
                "exponents must be positive, got ε = {epsilon}, η = {eta}"
            )));
        }
        let coeffs = jacobi_z_coefficients(nr, 2.0 * epsilon, 2.0 * eta);
        let mut w = Self {
            epsilon,
            eta,
            nr,
            norm_const: 0.0,
            norm_const_flat: 0.0,
            a,
            coeffs,
        };
        w.norm_const = w.analytic_norm(Measure::Radial);
        w.norm_const_flat = w.analytic_norm(Measure::Flat);
        Ok(w)
    }

    pub fn from_triple(t: &DimensionlessTriple, nr: u32, p: &PotentialParams) -> Result<Self> {
        Self::new(t.epsilon, t.eta, nr, p.a)
    }

    /// C from the closed-form Jacobi integrals. With α = 2ε, β = 2η and
    /// G = Γ(n+α+1)Γ(n+β+1) / (n! Γ(n+α+β+1)):
    /// ∫ z^α(1−z)^β P² dz = G/(2n+α+β+1) and, splitting 1/(z(1−z)) into
    /// 1/z + 1/(1−z), ∫ z^{α−1}(1−z)^{β−1} P² dz = G(α+β)/(αβ).
    pub fn analytic_norm(&self, m: Measure) -> f64 {
        (-0.5 * (self.a.ln() + self.ln_integral(m))).exp()
    }

    /// ln ∫ u²/C² in z for the chosen measure, from the closed form above.
    pub fn ln_integral(&self, m: Measure) -> f64 {
        let n = self.nr as f64;
        let (al, be) = (2.0 * self.epsilon, 2.0 * self.eta);
        let ln_g = ln_gamma(n + al + 1.0) + ln_gamma(n + be + 1.0)
            - ln_gamma(n + 1.0)
            - ln_gamma(n + al + be + 1.0);
        match m {
            Measure::Flat => ln_g - (2.0 * n + al + be + 1.0).ln(),
            Measure::Radial => ln_g + (al + be).ln() - al.ln() - be.ln(),
        }
    }

    /// Same constant from expanding P² in powers of z and integrating each
    /// term as a Beta function. Loses digits to cancellation as n grows.
    pub fn termwise_norm(&self, m: Measure) -> f64 {
        let (p, q) = m.powers(self.epsilon, self.eta);
        let sq = poly_square(&self.coeffs);
        let ln_i = ln_beta(p + 1.0, q + 1.0) + beta_moment_ratio(p, q, &sq).ln();
        (-0.5 * (self.a.ln() + ln_i)).exp()
    }

    pub fn norm(&self, m: Measure) -> f64 {
        match m {
            Measure::Radial => self.norm_const,
            Measure::Flat => self.norm_const_flat,
        }
    }

    fn poly(&self, z: f64) -> f64 {
        jacobi(self.nr, 2.0 * self.epsilon, 2.0 * self.eta, 1.0 - 2.0 * z)
    }

    /// u(z); zero at both ends.
    pub fn evaluate(&self, z: f64) -> f64 {
        self.norm_const * self.shape(z)
    }

    /// u(z) scaled for the flat measure.
    pub fn evaluate_flat(&self, z: f64) -> f64 {
        self.norm_const_flat * self.shape(z)
    }

    fn shape(&self, z: f64) -> f64 {
        self.shape_split(z, 1.0 - z)
    }

    /// Shape with z and 1 − z supplied separately, so that neither loses
    /// digits near its own endpoint.
    fn shape_split(&self, z: f64, w: f64) -> f64 {
        let x = if z < 0.5 { 1.0 - 2.0 * z } else { 2.0 * w - 1.0 };
        z.powf(self.epsilon) * w.powf(self.eta) * jacobi(self.nr, 2.0 * self.epsilon, 2.0 * self.eta, x)
    }

    /// u at radius r (any real r).
    pub fn evaluate_r(&self, r: f64, p: &PotentialParams) -> f64 {
        let t = p.surface_coordinate(r);
        self.norm_const * self.shape_split(logistic(-t), logistic(t))
    }

    /// a·C²·∫ (quadrature) − 1 for the chosen measure. Both sides are
    /// compared in logarithms, since for large exponents C² overflows.
    pub fn quadrature_residual(&self, m: Measure) -> f64 {
        let (p, q) = m.powers(self.epsilon, self.eta);
        let shift = log_peak(p, q);
        let i = endpoint_weighted_scaled(p, q, shift, |z| self.poly(z).powi(2));
        (i.ln() + shift - self.ln_integral(m)).exp_m1()
    }

    /// Share of the radial normalization lying at r < 0, i.e. z > z(0).
    pub fn negative_r_weight(&self, p: &PotentialParams) -> f64 {
        let y_max = logistic(p.surface_coordinate(0.0));
        let (pz, qz) = Measure::Radial.powers(self.epsilon, self.eta);
        let shift = log_peak(qz, pz);
        let i = beta_weighted(qz, pz, shift, |y| self.poly(1.0 - y).powi(2), y_max);
        (i.ln() + shift - self.ln_integral(Measure::Radial)).exp()
    }

    /// Sign changes of u on a uniform interior grid of `n` points.
    pub fn node_count(&self, n: usize) -> usize {
        let vals: Vec<f64> = (1..=n)
            .map(|i| self.poly(i as f64 / (n + 1) as f64))
            .filter(|v| *v != 0.0)
            .collect();
        vals.windows(2).filter(|w| w[0].signum() != w[1].signum()).count()
    }

    pub fn sample_curve(&self, n: usize, coord: Coordinate, p: &PotentialParams) -> Result<RadialCurve> {
        if n < 2 {
            return Err(Error::InvalidRange(format!("need at least 2 samples, got {n}")));
        }
        let (lo, hi) = match coord {
            Coordinate::Z => (0.0, 1.0),
            Coordinate::R => (0.0, p.r0 + 20.0 * p.a),
        };
        let step = (hi - lo) / (n - 1) as f64;
        let samples = (0..n)
            .map(|i| {
                let x = if i == n - 1 { hi } else { lo + step * i as f64 };
                let u = match coord {
                    Coordinate::Z => self.evaluate(x),
                    Coordinate::R => self.evaluate_r(x, p),
                };
                (x, u)
            })
            .collect();
        Ok(RadialCurve { coordinate: coord, samples })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coordinate {
    Z,
    R,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialCurve {
    pub coordinate: Coordinate,
    pub samples: Vec<(f64, f64)>,
}
