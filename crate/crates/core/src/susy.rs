//! Spectrum from a shape-invariant superpotential
//! W(r) = −(ħ/√2μ)(A + B z(r)), z = 1/(1 + e^{(r−R₀)/a}).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::nu::energy_scale;
use crate::pekeris::PekerisExpansion;
use crate::potential::{ChannelSpec, Model, PotentialParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Superpotential {
    /// A in fm⁻¹.
    pub a_coef: f64,
    /// B in fm⁻¹.
    pub b_coef: f64,
    pub beta_sq: f64,
    pub gamma_sq: f64,
    pub k0: f64,
    pub hbar2_2mu: f64,
    #[serde(skip)]
    params: PotentialParams,
    #[serde(skip)]
    root: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SusyLevel {
    /// Closed form K₀ − (ħ²/2μ) g(B − n/a)².
    pub energy: f64,
    /// E₀ plus the shape-invariance remainders R(B₁), …, R(B_n).
    pub telescoped: f64,
    /// B − n_r/a ≥ 0.
    pub recursion_valid: bool,
}

impl Superpotential {
    /// The channel enters only through the expansion `px`.
    pub fn new(model: &Model, _c: &ChannelSpec, px: &PekerisExpansion) -> Result<Self> {
        let p = model.params;
        let k = energy_scale(model);
        let (beta_sq, gamma_sq) = (k * px.k[1], k * px.k[2]);
        let rad = 1.0 + 4.0 * gamma_sq;
        if rad < 0.0 {
            return Err(Error::FormulaInvalid(format!("1 + 4γ² = {rad} < 0")));
        }
        let den = rad.sqrt() - 1.0;
        if den == 0.0 {
            return Err(Error::FormulaInvalid("√(1+4γ²) = 1 makes A singular".into()));
        }
        Ok(Self {
            a_coef: 0.5 / p.a - beta_sq / (p.a * den),
            b_coef: den / (2.0 * p.a),
            beta_sq,
            gamma_sq,
            k0: px.k[0],
            hbar2_2mu: model.hbar2_2mu(),
            params: p,
            root: rad.sqrt(),
        })
    }

    /// A < 0 and B > 0: the ground state vanishes at both ends.
    pub fn valid(&self) -> bool {
        self.a_coef < 0.0 && self.b_coef > 0.0
    }

    /// Largest relative residual of A² = ε₀²/a², 2AB − B/a = −β²/a²,
    /// B² + B/a = γ²/a², with ε₀ taken from the ground energy.
    pub fn constraint_residuals(&self) -> [f64; 3] {
        let a = self.params.a;
        let (aa, bb) = (self.a_coef, self.b_coef);
        let eps0_sq = a * a / self.hbar2_2mu * (self.k0 - self.ground_energy());
        let rel = |l: f64, r: f64, s: f64| (l - r).abs() / s.max(1e-300);
        [
            rel(aa * aa, eps0_sq / (a * a), aa * aa),
            rel(2.0 * aa * bb - bb / a, -self.beta_sq / (a * a), (2.0 * aa * bb).abs() + (bb / a).abs()),
            rel(bb * bb + bb / a, self.gamma_sq / (a * a), bb * bb + (bb / a).abs()),
        ]
    }

    /// B − i/a, written as (√(1+4γ²) − 1 − 2i)/(2a) so that a single
    /// subtraction carries the cancellation near the last level.
    fn shifted_b(&self, i: f64) -> f64 {
        (self.root - 1.0 - 2.0 * i) / (2.0 * self.params.a)
    }

    /// g(b) = (γ² − β²)/(2a²b) − b/2; g(B) = A.
    fn g(&self, b: f64) -> f64 {
        let a = self.params.a;
        (self.gamma_sq - self.beta_sq) / (2.0 * a * a * b) - 0.5 * b
    }

    /// E₀ = K₀ − (ħ²/2μ)A²
    pub fn ground_energy(&self) -> f64 {
        self.k0 - self.hbar2_2mu * self.a_coef * self.a_coef
    }

    /// R(B_i) = V₂(B − (i−1)/a) − V₁(B − i/a), evaluated symbolically.
    pub fn remainder(&self, i: u32) -> f64 {
        let lo = self.g(self.shifted_b(i as f64));
        let hi = self.g(self.shifted_b(i as f64 - 1.0));
        -self.hbar2_2mu * (lo * lo - hi * hi)
    }

    pub fn level(&self, nr: u32) -> Result<SusyLevel> {
        let bn = self.shifted_b(nr as f64);
        if bn == 0.0 {
            return Err(Error::FormulaInvalid(format!("B − n_r/a vanishes at n_r = {nr}")));
        }
        let g = self.g(bn);
        let energy = if nr == 0 {
            self.ground_energy()
        } else {
            self.k0 - self.hbar2_2mu * g * g
        };
        let telescoped = self.ground_energy() + (1..=nr).map(|i| self.remainder(i)).sum::<f64>();
        Ok(SusyLevel {
            energy,
            telescoped,
            recursion_valid: bn >= 0.0,
        })
    }

    /// Largest n_r with B − n_r/a > 0; −1 if none.
    pub fn max_nr(&self) -> i64 {
        let ab = self.params.a * self.b_coef;
        if ab <= 0.0 {
            -1
        } else {
            ab.ceil() as i64 - 1
        }
    }

    /// W(r) in MeV^{1/2}.
    pub fn w(&self, r: f64) -> f64 {
        -self.hbar2_2mu.sqrt() * (self.a_coef + self.b_coef * self.params.form_factor(r))
    }

    /// dW/dr.
    pub fn w_prime(&self, r: f64) -> f64 {
        let z = self.params.form_factor(r);
        self.hbar2_2mu.sqrt() * self.b_coef * z * (1.0 - z) / self.params.a
    }

    /// V₁, V₂ = W² ∓ (ħ/√2μ)W′ + E₀, so that V₁ reproduces the expanded
    /// effective potential.
    pub fn partner_potentials(&self, r: f64) -> (f64, f64) {
        let z = self.params.form_factor(r);
        let (aa, bb, a) = (self.a_coef, self.b_coef, self.params.a);
        let e0 = self.ground_energy();
        let v1 = self.hbar2_2mu * (aa * aa + (2.0 * aa * bb - bb / a) * z + (bb * bb + bb / a) * z * z);
        let v2 = self.hbar2_2mu * (aa * aa + (2.0 * aa * bb + bb / a) * z + (bb * bb - bb / a) * z * z);
        (v1 + e0, v2 + e0)
    }

    /// ln of the unnormalized ground state e^{Ar}(1 + e^{−(r−R₀)/a})^{−aB}.
    pub fn ln_ground_state(&self, r: f64) -> f64 {
        let t = self.params.surface_coordinate(r);
        let softplus = if -t > 0.0 { -t + t.exp().ln_1p() } else { (-t).exp().ln_1p() };
        self.a_coef * r - self.params.a * self.b_coef * softplus
    }
}

/// Ground energy through the superpotential.
pub fn susy_ground_energy(model: &Model, c: &ChannelSpec, px: &PekerisExpansion) -> Result<f64> {
    Ok(Superpotential::new(model, c, px)?.ground_energy())
}

/// Level n_r of channel `c` through the superpotential.
pub fn susy_energy(model: &Model, c: &ChannelSpec, px: &PekerisExpansion) -> Result<SusyLevel> {
    Superpotential::new(model, c, px)?.level(c.nr)
}
