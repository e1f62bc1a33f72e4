use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Physical constants in the MeV / fm / u unit system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// ħc in MeV·fm.
    pub hbar_c: f64,
    /// Energy equivalent of one atomic mass unit, MeV.
    pub amu_c2: f64,
}

impl PhysicalConstants {
    /// CODATA 2018.
    pub const CODATA_2018: Self = Self {
        hbar_c: 197.326_980_4,
        amu_c2: 931.494_102_42,
    };

    pub fn new(hbar_c: f64, amu_c2: f64) -> Result<Self> {
        if !(hbar_c.is_finite() && hbar_c > 0.0) {
            return Err(invalid("hbar_c", format!("must be positive, got {hbar_c}")));
        }
        if !(amu_c2.is_finite() && amu_c2 > 0.0) {
            return Err(invalid("amu_c2", format!("must be positive, got {amu_c2}")));
        }
        Ok(Self { hbar_c, amu_c2 })
    }

    /// SI-derived set with ħ = 1.054571817e-34 J·s, u = 1.66e-27 kg and
    /// 1 MeV = 1.6e-13 J. The published ⁵⁶Fe tables are consistent with
    /// ħ²/(2μ) computed from these rounded values.
    pub fn rounded_si() -> Self {
        const HBAR: f64 = 1.054_571_817e-34;
        const C: f64 = 299_792_458.0;
        const AMU_KG: f64 = 1.66e-27;
        const MEV_J: f64 = 1.6e-13;
        Self {
            hbar_c: HBAR * C / MEV_J / 1e-15,
            amu_c2: AMU_KG * C * C / MEV_J,
        }
    }

    /// ħ²/(2μ) in MeV·fm² for a reduced mass `mu` in u.
    pub fn hbar2_over_2mu(&self, mu: f64) -> f64 {
        self.hbar_c * self.hbar_c / (2.0 * mu * self.amu_c2)
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA_2018
    }
}
