//! Closed-form Prasad–Sommerfield and Dirac monopoles.
//!
//! Both are written in hedgehog form around a center `p` with `y = x − p`:
//!
//! ```text
//! a = f(|y|) ε_ijk ŷ_i dx_j ½σ_k,     Φ = h(|y|) ŷ_i ½σ_i
//! ```
//!
//! For the rescaled PS pair `f = 1/ρ − r/sinh(rρ)` and `h = r coth(rρ) − 1/ρ`;
//! for the Dirac pair `f = 1/ρ` and `h = r_res − 1/ρ`.

use serde::{Deserialize, Serialize};

use crate::su2::{AlgOneForm, AlgVec};
use crate::{Error, Point, Result};

/// Below this value of `s = r|x − p|` the PS profiles switch to Taylor series.
pub const SERIES_THRESHOLD: f64 = 1e-3;

/// A translated and rescaled PS monopole; `scale` is the asymptotic `|Φ|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledMonopole {
    pub center: Point,
    pub scale: f64,
}

impl ScaledMonopole {
    pub fn new(center: Point, scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidParameter(format!("monopole scale must be positive, got {scale}")));
        }
        Ok(ScaledMonopole { center, scale })
    }

    /// The charge-one solution centred at the origin.
    pub fn unit() -> Self {
        ScaledMonopole { center: Point::zeros(), scale: 1.0 }
    }
}

/// Connection coefficients relative to the product connection, plus the Higgs value.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FieldSample {
    pub a: AlgOneForm,
    pub phi: AlgVec,
}

impl FieldSample {
    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.phi.is_finite()
    }
}

/// Anything that yields a gauge field pair at a point.
pub trait PairField: Sync {
    fn sample(&self, x: &Point) -> FieldSample;
}

impl<F> PairField for F
where
    F: Fn(&Point) -> FieldSample + Sync,
{
    fn sample(&self, x: &Point) -> FieldSample {
        self(x)
    }
}

impl PairField for ScaledMonopole {
    fn sample(&self, x: &Point) -> FieldSample {
        ps_pair(x, self)
    }
}

/// A Dirac monopole with Higgs `(residue − 1/|x − p|) σ̂`. Singular at `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiracMonopole {
    pub center: Point,
    pub residue: f64,
}

impl PairField for DiracMonopole {
    /// Returns NaN fields at the center.
    fn sample(&self, x: &Point) -> FieldSample {
        dirac_pair(x, &self.center, self.residue)
            .unwrap_or(FieldSample { a: AlgOneForm([AlgVec([f64::NAN; 3]); 3]), phi: AlgVec([f64::NAN; 3]) })
    }
}

/// `coth(s) − 1/s`.
pub fn coth_minus_inv(s: f64) -> f64 {
    if s.abs() < SERIES_THRESHOLD {
        let s2 = s * s;
        s * (1.0 / 3.0 - s2 / 45.0 + 2.0 * s2 * s2 / 945.0)
    } else {
        1.0 / s.tanh() - 1.0 / s
    }
}

/// `1/s − 1/sinh(s)`.
pub fn inv_minus_csch(s: f64) -> f64 {
    if s.abs() < SERIES_THRESHOLD {
        let s2 = s * s;
        s * (1.0 / 6.0 - 7.0 * s2 / 360.0 + 31.0 * s2 * s2 / 15120.0)
    } else {
        1.0 / s - 1.0 / s.sinh()
    }
}

/// The 1-form `ε_ijk w_i dx_j ½σ_k`; component `j` is `w × e_j`.
pub fn hedgehog_form(w: &Point) -> AlgOneForm {
    AlgOneForm([AlgVec([0.0, w.z, -w.y]), AlgVec([-w.z, 0.0, w.x]), AlgVec([w.y, -w.x, 0.0])])
}

pub fn point_to_alg(w: &Point) -> AlgVec {
    AlgVec([w.x, w.y, w.z])
}

/// The rescaled, translated PS pair. Regular at the center.
pub fn ps_pair(x: &Point, mono: &ScaledMonopole) -> FieldSample {
    let r = mono.scale;
    let y = x - mono.center;
    let rho = y.norm();
    let s = r * rho;
    // Write f ŷ = (f/ρ) y so the small-s branch stays finite at ρ = 0:
    // f/ρ = r²·(inv_minus_csch(s)/s), h/ρ = r²·(coth_minus_inv(s)/s).
    let (fa, fh) = if s < SERIES_THRESHOLD {
        let s2 = s * s;
        (
            r * r * (1.0 / 6.0 - 7.0 * s2 / 360.0 + 31.0 * s2 * s2 / 15120.0),
            r * r * (1.0 / 3.0 - s2 / 45.0 + 2.0 * s2 * s2 / 945.0),
        )
    } else {
        (r * inv_minus_csch(s) / rho, r * coth_minus_inv(s) / rho)
    };
    FieldSample { a: hedgehog_form(&(y * fa)), phi: point_to_alg(&(y * fh)) }
}

/// Unit Higgs direction `(x − p)_i/|x − p| ½σ_i`.
pub fn sigma_hat(x: &Point, p: &Point) -> Result<AlgVec> {
    let y = x - p;
    let rho = y.norm();
    if rho == 0.0 {
        return Err(Error::SingularEvaluation(*x));
    }
    Ok(point_to_alg(&(y / rho)))
}

/// The Dirac pair centred at `p` with asymptotic Higgs scale `r_res`.
pub fn dirac_pair(x: &Point, p: &Point, r_res: f64) -> Result<FieldSample> {
    let y = x - p;
    let rho = y.norm();
    if rho == 0.0 {
        return Err(Error::SingularEvaluation(*x));
    }
    let u = y / rho;
    Ok(FieldSample { a: hedgehog_form(&(u / rho)), phi: point_to_alg(&(u * (r_res - 1.0 / rho))) })
}
