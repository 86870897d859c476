//! Exact arithmetic in a real quadratic field Q(√d), with certified floor / fractional
//! part via interval refinement (no floating point in the decision path).

use crate::rat::{rat_int, to_f64};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// p + q√d with p, q rational and d a positive non-square integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quad {
    pub p: BigRational,
    pub q: BigRational,
    pub d: BigInt,
}

impl Quad {
    pub fn new(p: BigRational, q: BigRational, d: BigInt) -> Self {
        Quad { p, q, d }
    }

    pub fn from_rational(p: BigRational, d: BigInt) -> Self {
        Quad {
            p,
            q: BigRational::zero(),
            d,
        }
    }

    pub fn sqrt_term(d: BigInt) -> Self {
        Quad {
            p: BigRational::zero(),
            q: BigRational::one(),
            d,
        }
    }

    pub fn add(&self, other: &Quad) -> Quad {
        debug_assert_eq!(self.d, other.d);
        Quad {
            p: &self.p + &other.p,
            q: &self.q + &other.q,
            d: self.d.clone(),
        }
    }

    pub fn sub(&self, other: &Quad) -> Quad {
        debug_assert_eq!(self.d, other.d);
        Quad {
            p: &self.p - &other.p,
            q: &self.q - &other.q,
            d: self.d.clone(),
        }
    }

    pub fn mul(&self, other: &Quad) -> Quad {
        debug_assert_eq!(self.d, other.d);
        let cross = &self.p * &other.q + &self.q * &other.p;
        Quad {
            p: &self.p * &other.p + &self.q * &other.q * BigRational::from_integer(self.d.clone()),
            q: cross,
            d: self.d.clone(),
        }
    }

    pub fn scale(&self, r: &BigRational) -> Quad {
        Quad {
            p: &self.p * r,
            q: &self.q * r,
            d: self.d.clone(),
        }
    }

    pub fn neg(&self) -> Quad {
        Quad {
            p: -self.p.clone(),
            q: -self.q.clone(),
            d: self.d.clone(),
        }
    }

    /// Multiplicative inverse via the field norm p² − q²d.
    pub fn inv(&self) -> Result<Quad> {
        let norm = &self.p * &self.p
            - &self.q * &self.q * BigRational::from_integer(self.d.clone());
        if norm.is_zero() {
            return Err(Error::Unsupported("division by zero in quadratic field".into()));
        }
        Ok(Quad {
            p: &self.p / &norm,
            q: -&self.q / &norm,
            d: self.d.clone(),
        })
    }

    pub fn div(&self, other: &Quad) -> Result<Quad> {
        Ok(self.mul(&other.inv()?))
    }

    /// Galois conjugate p − q√d.
    pub fn conjugate(&self) -> Quad {
        Quad {
            p: self.p.clone(),
            q: -self.q.clone(),
            d: self.d.clone(),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    /// Rational interval [lo, hi] containing √d with width 2^-bits.
    fn sqrt_interval(d: &BigInt, bits: u32) -> (BigRational, BigRational) {
        let scale = BigInt::one() << (2 * bits);
        let s = (d * &scale).sqrt();
        let denom = BigInt::one() << bits;
        (
            BigRational::new(s.clone(), denom.clone()),
            BigRational::new(s + BigInt::one(), denom),
        )
    }

    /// Rational interval containing the value, width shrinking with `bits`.
    fn interval(&self, bits: u32) -> (BigRational, BigRational) {
        if self.q.is_zero() {
            return (self.p.clone(), self.p.clone());
        }
        let (slo, shi) = Quad::sqrt_interval(&self.d, bits);
        if self.q.is_positive() {
            (&self.p + &self.q * slo, &self.p + &self.q * shi)
        } else {
            (&self.p + &self.q * shi, &self.p + &self.q * slo)
        }
    }

    /// Certified floor. Fails with PrecisionExhausted only if the value sits on an
    /// integer to within 2^-4096, which cannot happen for genuinely irrational inputs
    /// of the sizes handled here.
    pub fn floor(&self) -> Result<BigInt> {
        if self.q.is_zero() {
            return Ok(self.p.floor().to_integer());
        }
        let mut bits = 64u32;
        while bits <= 4096 {
            let (lo, hi) = self.interval(bits);
            let flo = lo.floor().to_integer();
            let fhi = hi.floor().to_integer();
            if flo == fhi {
                return Ok(flo);
            }
            bits *= 2;
        }
        Err(Error::PrecisionExhausted)
    }

    /// Certified fractional part, as an exact element of the field.
    pub fn frac(&self) -> Result<Quad> {
        let f = self.floor()?;
        Ok(Quad {
            p: &self.p - BigRational::from_integer(f),
            q: self.q.clone(),
            d: self.d.clone(),
        })
    }

    pub fn cmp_rational(&self, r: &BigRational) -> Result<std::cmp::Ordering> {
        // sign of (self - r): rational part exact, irrational part certified.
        let shifted = Quad {
            p: &self.p - r,
            q: self.q.clone(),
            d: self.d.clone(),
        };
        if shifted.q.is_zero() {
            return Ok(shifted.p.cmp(&BigRational::zero()));
        }
        let mut bits = 64u32;
        while bits <= 4096 {
            let (lo, hi) = shifted.interval(bits);
            if lo.is_positive() {
                return Ok(std::cmp::Ordering::Greater);
            }
            if hi.is_negative() {
                return Ok(std::cmp::Ordering::Less);
            }
            if lo.is_zero() && hi.is_zero() {
                return Ok(std::cmp::Ordering::Equal);
            }
            bits *= 2;
        }
        Err(Error::PrecisionExhausted)
    }

    pub fn to_f64(&self) -> f64 {
        // interval width is |q|·2^-bits; pick bits so it is far below f64 resolution
        // even when p and q are huge and cancel
        let qbits = self.q.numer().bits().max(self.q.denom().bits()) as u32;
        let (lo, hi) = self.interval(96 + qbits);
        (to_f64(&lo) + to_f64(&hi)) / 2.0
    }

    /// High-precision rational approximation with |error| ≤ 2^-bits (for seeding
    /// fixed-point orbit recursions).
    pub fn approx_rational(&self, bits: u32) -> BigRational {
        let (lo, hi) = self.interval(bits + 2);
        (lo + hi) / rat_int(2)
    }
}
