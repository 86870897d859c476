//! Classification of the deformation parameter: zero, rational, the special quadratic
//! values λℓ + (λ−1)β_r mod 1, fully generic (symbolic only), or an explicit real
//! snapped to an exact rational.

use crate::matrix::HyperbolicMatrix;
use crate::quadratic::Quad;
use crate::rat::{frac, rational_from_f64, to_f64};
use crate::{Error, Result};
use num_rational::BigRational;
use num_traits::Zero;

#[derive(Debug, Clone)]
pub enum ThetaParameter {
    Zero,
    Rational(BigRational),
    SpecialQuadratic { l: i64, r: i64, value: Quad },
    /// A member of the full-measure set where all nonconstant phase orbits average to
    /// zero; carries no numeric value and supports only symbolic evaluation.
    GenericIrrational,
    /// Arbitrary numeric θ, stored as the exact rational the input float denotes.
    ExplicitReal(BigRational),
}

impl ThetaParameter {
    pub fn rational(x: BigRational) -> Self {
        let f = frac(&x);
        if f.is_zero() {
            ThetaParameter::Zero
        } else {
            ThetaParameter::Rational(f)
        }
    }

    pub fn explicit_real(x: f64) -> Result<Self> {
        let r = rational_from_f64(x)?;
        let f = frac(&r);
        if f.is_zero() {
            Ok(ThetaParameter::Zero)
        } else {
            Ok(ThetaParameter::ExplicitReal(f))
        }
    }

    /// θ^r_ℓ = λℓ + (λ−1)β_r mod 1 in the quadratic field of `t`.
    pub fn special(t: &HyperbolicMatrix, l: i64, r: i64) -> Result<Self> {
        let br = t.beta_r(r)?;
        let lam = t.lambda();
        let ell = Quad::from_rational(BigRational::from_integer(l.into()), t.disc.clone());
        let one = Quad::from_rational(BigRational::from_integer(1.into()), t.disc.clone());
        let raw = lam.mul(&ell).add(&lam.sub(&one).scale(&br));
        let value = raw.frac()?;
        if value.is_rational() {
            // only happens for ℓ = 0, r = 0 (irrational λ-coefficient otherwise)
            return Ok(ThetaParameter::rational(value.p));
        }
        Ok(ThetaParameter::SpecialQuadratic { l, r, value })
    }

    /// Exact rational value when θ has one (Zero, Rational, ExplicitReal).
    pub fn exact_rational(&self) -> Option<BigRational> {
        match self {
            ThetaParameter::Zero => Some(BigRational::zero()),
            ThetaParameter::Rational(x) | ThetaParameter::ExplicitReal(x) => Some(x.clone()),
            _ => None,
        }
    }

    /// Numeric embedding; None only for the symbolic generic variant.
    pub fn to_f64(&self) -> Option<f64> {
        match self {
            ThetaParameter::Zero => Some(0.0),
            ThetaParameter::Rational(x) | ThetaParameter::ExplicitReal(x) => Some(to_f64(x)),
            ThetaParameter::SpecialQuadratic { value, .. } => Some(value.to_f64()),
            ThetaParameter::GenericIrrational => None,
        }
    }

    pub fn is_numeric(&self) -> bool {
        !matches!(self, ThetaParameter::GenericIrrational)
    }

    pub fn require_numeric(&self) -> Result<f64> {
        self.to_f64()
            .ok_or_else(|| Error::Unsupported("θ has no numeric value".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn special_values_embed_correctly() {
        let cat = HyperbolicMatrix::cat_map();
        let th = ThetaParameter::special(&cat, 1, 0).unwrap();
        let v = th.to_f64().unwrap();
        assert!((v - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-12);

        let t4 = HyperbolicMatrix::new(3, 1, 2, 1).unwrap();
        let th = ThetaParameter::special(&t4, 0, 1).unwrap();
        // (λ−1)/2 mod 1 with λ = (4+√12)/2 = 2+√3 → (1+√3)/2 − 1 = (√3−1)/2
        assert!((th.to_f64().unwrap() - (3f64.sqrt() - 1.0) / 2.0).abs() < 1e-12);

        let classical = ThetaParameter::special(&cat, 0, 0).unwrap();
        assert!(matches!(classical, ThetaParameter::Zero));
        assert!(ThetaParameter::special(&cat, 0, 1).is_err());
    }

    #[test]
    fn rational_reduction_and_snap() {
        assert!(matches!(
            ThetaParameter::rational(rat(7, 1)),
            ThetaParameter::Zero
        ));
        let th = ThetaParameter::rational(rat(-1, 3));
        assert_eq!(th.exact_rational().unwrap(), rat(2, 3));
        let th = ThetaParameter::explicit_real(0.375).unwrap();
        assert_eq!(th.exact_rational().unwrap(), rat(3, 8));
    }
}
