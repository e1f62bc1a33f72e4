//! Woods-Saxon potential, centrifugal barrier and the hyper-radial reduction.

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{invalid, Error, Result};

/// Above this a/R₀ ratio the thin-surface assumption is considered violated.
pub const DIFFUSENESS_WARN_RATIO: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialParams {
    /// Depth V₀ (MeV).
    pub v0: f64,
    /// Radius R₀ (fm).
    pub r0: f64,
    /// Surface diffuseness a (fm).
    pub a: f64,
    /// Reduced mass μ (u).
    pub mu: f64,
    /// α = R₀/a.
    #[serde(skip_deserializing)]
    alpha: f64,
}

impl PotentialParams {
    pub fn new(v0: f64, r0: f64, a: f64, mu: f64) -> Result<Self> {
        for (name, v) in [("V0", v0), ("R0", r0), ("a", a), ("mu", mu)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(name, format!("must be positive and finite, got {v}")));
            }
        }
        if a / r0 > DIFFUSENESS_WARN_RATIO {
            log::warn!(
                "diffuseness a = {a} fm is not small compared to R0 = {r0} fm (a/R0 = {:.3})",
                a / r0
            );
        }
        Ok(Self {
            v0,
            r0,
            a,
            mu,
            alpha: r0 / a,
        })
    }

    /// ⁵⁶Fe + n parameters used for the published tables.
    pub fn fe56() -> Self {
        Self::new(47.78, 4.9162, 0.65, 0.990814).expect("valid preset")
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn thin_surface(&self) -> bool {
        self.a / self.r0 <= DIFFUSENESS_WARN_RATIO
    }

    /// (r − R₀)/a
    #[inline]
    pub fn surface_coordinate(&self, r: f64) -> f64 {
        (r - self.r0) / self.a
    }

    /// 1/(1 + e^{(r−R₀)/a}), the Woods-Saxon form factor.
    #[inline]
    pub fn form_factor(&self, r: f64) -> f64 {
        logistic(-self.surface_coordinate(r))
    }

    pub fn woods_saxon(&self, r: f64) -> f64 {
        -self.v0 * self.form_factor(r)
    }
}

/// 1/(1 + e^{−t}) without overflow.
#[inline]
pub(crate) fn logistic(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// Quantum numbers of one radial channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub nr: u32,
    pub l: u32,
    #[serde(rename = "D")]
    pub dim: u32,
}

impl ChannelSpec {
    pub fn new(nr: u32, l: u32, dim: u32) -> Result<Self> {
        if dim < 2 {
            return Err(invalid("D", format!("dimension must be at least 2, got {dim}")));
        }
        Ok(Self { nr, l, dim })
    }

    /// l̃ = l + (D − 3)/2
    pub fn l_tilde(&self) -> f64 {
        self.l as f64 + (self.dim as f64 - 3.0) / 2.0
    }

    /// l̃(l̃ + 1), computed exactly from integers: (2l + D − 3)(2l + D − 1)/4.
    pub fn centrifugal_factor(&self) -> f64 {
        let two_lt = 2 * self.l as i64 + self.dim as i64 - 3;
        (two_lt * (two_lt + 2)) as f64 / 4.0
    }

    pub fn with_nr(self, nr: u32) -> Self {
        Self { nr, ..self }
    }
}

/// Potential parameters bound to a set of physical constants; every solver
/// works from this.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Model {
    pub params: PotentialParams,
    pub constants: PhysicalConstants,
    hbar2_2mu: f64,
}

impl Model {
    pub fn new(params: PotentialParams, constants: PhysicalConstants) -> Self {
        Self {
            params,
            constants,
            hbar2_2mu: constants.hbar2_over_2mu(params.mu),
        }
    }

    /// ħ²/(2μ), MeV·fm².
    pub fn hbar2_2mu(&self) -> f64 {
        self.hbar2_2mu
    }

    /// ħ²/(2μa²), the energy unit of the dimensionless parameters.
    pub fn surface_energy(&self) -> f64 {
        self.hbar2_2mu / (self.params.a * self.params.a)
    }

    /// δ̃ = ħ² l̃(l̃+1) / (2μR₀²)
    pub fn delta_tilde(&self, c: &ChannelSpec) -> f64 {
        self.hbar2_2mu * c.centrifugal_factor() / (self.params.r0 * self.params.r0)
    }

    pub fn woods_saxon(&self, r: f64) -> f64 {
        self.params.woods_saxon(r)
    }

    /// ħ² l̃(l̃+1) / (2μr²)
    pub fn centrifugal(&self, r: f64, c: &ChannelSpec) -> Result<f64> {
        let lam = c.centrifugal_factor();
        if lam == 0.0 {
            return Ok(0.0);
        }
        if r == 0.0 {
            return Err(Error::CentrifugalSingularity(lam));
        }
        Ok(self.hbar2_2mu * lam / (r * r))
    }

    pub fn effective_potential(&self, r: f64, c: &ChannelSpec) -> Result<f64> {
        if !(r >= 0.0) {
            return Err(Error::InvalidRange(format!("r must be non-negative, got {r}")));
        }
        Ok(self.woods_saxon(r) + self.centrifugal(r, c)?)
    }

    /// Effective potential in terms of x = (r − R₀)/R₀.
    pub fn effective_potential_x(&self, x: f64, c: &ChannelSpec) -> f64 {
        let p = &self.params;
        -p.v0 * logistic(-p.alpha * x) + self.delta_tilde(c) / ((1.0 + x) * (1.0 + x))
    }

    /// `n` uniformly spaced samples of V_eff on [r_min, r_max], endpoints exact.
    pub fn potential_curve(
        &self,
        c: &ChannelSpec,
        r_min: f64,
        r_max: f64,
        n: usize,
    ) -> Result<Vec<(f64, f64)>> {
        if !(r_min > 0.0 && r_min < r_max && r_max.is_finite()) {
            return Err(Error::InvalidRange(format!(
                "need 0 < r_min < r_max, got [{r_min}, {r_max}]"
            )));
        }
        if n < 2 {
            return Err(Error::InvalidRange(format!("need at least 2 samples, got {n}")));
        }
        let step = (r_max - r_min) / (n - 1) as f64;
        (0..n)
            .map(|i| {
                let r = if i == n - 1 { r_max } else { r_min + step * i as f64 };
                Ok((r, self.effective_potential(r, c)?))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fe() -> Model {
        Model::new(PotentialParams::fe56(), PhysicalConstants::CODATA_2018)
    }

    #[test]
    fn half_depth_at_radius() {
        let p = PotentialParams::fe56();
        assert_eq!(p.woods_saxon(p.r0), -p.v0 / 2.0);
    }

    #[test]
    fn vanishes_far_outside() {
        let p = PotentialParams::fe56();
        let v = p.woods_saxon(p.r0 + 30.0 * p.a + 1e-9);
        assert!(v < 0.0 && v.abs() < 1e-12 * p.v0);
    }

    #[test]
    fn value_at_origin() {
        // 30-digit evaluation: 47.78 / (1 + exp(-4.9162/0.65))
        let v = PotentialParams::fe56().woods_saxon(0.0);
        assert!((v + 47.755_209_541_904_33).abs() < 1e-12);
        assert!((v + 47.755).abs() < 0.01);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(PotentialParams::new(-1.0, 4.0, 0.6, 1.0).is_err());
        assert!(PotentialParams::new(40.0, 0.0, 0.6, 1.0).is_err());
        assert!(PotentialParams::new(40.0, 4.0, f64::NAN, 1.0).is_err());
        assert!(ChannelSpec::new(0, 0, 1).is_err());
    }

    #[test]
    fn thick_surface_is_accepted() {
        let p = PotentialParams::new(40.0, 1.0, 0.5, 1.0).unwrap();
        assert!(!p.thin_surface());
        assert!(PotentialParams::fe56().thin_surface());
    }

    #[test]
    fn l_tilde_and_factor() {
        let c = ChannelSpec::new(0, 2, 3).unwrap();
        assert_eq!(c.l_tilde(), 2.0);
        assert_eq!(c.centrifugal_factor(), 6.0);
        let c2 = ChannelSpec::new(0, 0, 2).unwrap();
        assert_eq!(c2.l_tilde(), -0.5);
        assert_eq!(c2.centrifugal_factor(), -0.25);
        let c4 = ChannelSpec::new(0, 1, 4).unwrap();
        assert_eq!(c4.centrifugal_factor(), 1.5 * 2.5);
    }

    #[test]
    fn s_wave_d3_is_bare_woods_saxon() {
        let m = fe();
        let c = ChannelSpec::new(0, 0, 3).unwrap();
        for i in 0..100 {
            let r = 0.2 * i as f64;
            assert_eq!(m.effective_potential(r, &c).unwrap(), m.woods_saxon(r));
        }
    }

    #[test]
    fn origin_is_singular_with_barrier() {
        let m = fe();
        let c = ChannelSpec::new(0, 1, 3).unwrap();
        assert!(matches!(
            m.effective_potential(0.0, &c),
            Err(Error::CentrifugalSingularity(_))
        ));
    }

    #[test]
    fn l8_d3_is_monotone_decreasing() {
        let m = Model::new(PotentialParams::fe56(), PhysicalConstants::rounded_si());
        let c = ChannelSpec::new(0, 8, 3).unwrap();
        let curve = m.potential_curve(&c, 0.5, 15.0, 2000).unwrap();
        assert!(curve.windows(2).all(|w| w[1].1 < w[0].1));
    }

    #[test]
    fn curve_endpoints_and_ordering() {
        let m = fe();
        let c = ChannelSpec::new(0, 1, 3).unwrap();
        let two = m.potential_curve(&c, 0.7, 9.3, 2).unwrap();
        assert_eq!(two.len(), 2);
        assert_eq!(two[0].0, 0.7);
        assert_eq!(two[1].0, 9.3);
        let many = m.potential_curve(&c, 0.7, 9.3, 777).unwrap();
        assert!(many.windows(2).all(|w| w[1].0 > w[0].0));
        assert_eq!(many.last().unwrap().0, 9.3);
        assert!(m.potential_curve(&c, 0.0, 1.0, 10).is_err());
        assert!(m.potential_curve(&c, 2.0, 1.0, 10).is_err());
        assert!(m.potential_curve(&c, 0.5, 1.0, 1).is_err());
    }

    #[test]
    fn l1_curve_has_single_interior_minimum() {
        let m = Model::new(PotentialParams::fe56(), PhysicalConstants::rounded_si());
        let c = ChannelSpec::new(0, 1, 3).unwrap();
        let curve = m.potential_curve(&c, 0.5, 15.0, 4000).unwrap();
        let minima: Vec<f64> = curve
            .windows(3)
            .filter(|w| w[1].1 < w[0].1 && w[1].1 < w[2].1)
            .map(|w| w[1].0)
            .collect();
        assert_eq!(minima.len(), 1);
        assert!((minima[0] - 2.9558).abs() < 0.01);
    }

    proptest! {
        #[test]
        fn woods_saxon_monotone_and_bounded(r1 in 0.0f64..40.0, dr in 1e-6f64..5.0) {
            let p = PotentialParams::fe56();
            let (v1, v2) = (p.woods_saxon(r1), p.woods_saxon(r1 + dr));
            prop_assert!(v1 < v2);
            prop_assert!(v1 > -p.v0 && v2 < 0.0);
        }

        #[test]
        fn barrier_identity(r in 0.05f64..30.0, l in 0u32..8, dim in 2u32..7) {
            let m = fe();
            let c = ChannelSpec::new(0, l, dim).unwrap();
            let diff = m.effective_potential(r, &c).unwrap() - m.woods_saxon(r);
            let expected = m.delta_tilde(&c) * m.params.r0 * m.params.r0 / (r * r);
            prop_assert!((diff - expected).abs() <= 1e-12 * expected.abs().max(1e-300) + 1e-15);
        }

        #[test]
        fn equal_l_tilde_equal_potential(r in 0.05f64..30.0, l in 1u32..8, dim in 2u32..6) {
            let m = fe();
            let a = ChannelSpec::new(0, l, dim).unwrap();
            let b = ChannelSpec::new(0, l - 1, dim + 2).unwrap();
            prop_assert_eq!(m.delta_tilde(&a), m.delta_tilde(&b));
            prop_assert_eq!(m.effective_potential(r, &a).unwrap(), m.effective_potential(r, &b).unwrap());
        }
    }
}
