//! Exact scalar values: finite sums Σ c · e^{2πi(θ·a + e/n)} with Gaussian-rational
//! coefficients c, symbolic θ-multiples a, and roots of unity handled as elements of
//! Q(i)[ζ_n] canonicalized modulo the n-th cyclotomic polynomial (so cancellations like
//! 1 + ζ₃ + ζ₃² = 0 are detected exactly).

use crate::phase::Phase;
use crate::rat::{frac, to_f64};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

pub type GaussRat = Complex<BigRational>;
pub type C64 = Complex<f64>;

pub fn gauss(re: BigRational, im: BigRational) -> GaussRat {
    Complex::new(re, im)
}

pub fn gauss_conj(z: &GaussRat) -> GaussRat {
    Complex::new(z.re.clone(), -&z.im)
}

pub fn gauss_to_c64(z: &GaussRat) -> C64 {
    Complex::new(to_f64(&z.re), to_f64(&z.im))
}

thread_local! {
    static CYCLOTOMIC_CACHE: RefCell<HashMap<u64, Vec<BigInt>>> = RefCell::new(HashMap::new());
}

/// Coefficients of the n-th cyclotomic polynomial, ascending degree, monic.
pub fn cyclotomic_poly(n: u64) -> Vec<BigInt> {
    if let Some(hit) = CYCLOTOMIC_CACHE.with(|c| c.borrow().get(&n).cloned()) {
        return hit;
    }
    // (x^n - 1) / prod_{d|n, d<n} Phi_d, exact division by monic divisors.
    let mut poly = vec![BigInt::zero(); (n + 1) as usize];
    poly[0] = -BigInt::one();
    poly[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_poly(d);
            poly = divide_monic(&poly, &phi_d);
        }
    }
    CYCLOTOMIC_CACHE.with(|c| c.borrow_mut().insert(n, poly.clone()));
    poly
}

fn divide_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = rem.len() - 1;
    let mut quot = vec![BigInt::zero(); nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let c = rem[k + dd].clone();
        if !c.is_zero() {
            quot[k] = c.clone();
            for (j, dj) in den.iter().enumerate() {
                rem[k + j] -= &c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quot
}

/// An element of Q(i)[ζ_n], stored sparsely as exponent ↦ coefficient.
#[derive(Debug, Clone)]
pub struct Cyc {
    order: u64,
    coeffs: BTreeMap<u64, GaussRat>,
}

impl Cyc {
    pub fn zero() -> Self {
        Cyc {
            order: 1,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_gauss(c: GaussRat) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(0, c);
        }
        Cyc { order: 1, coeffs }
    }

    pub fn one() -> Self {
        Cyc::from_gauss(Complex::new(BigRational::one(), BigRational::zero()))
    }

    /// e^{2πi r} for rational r (reduced mod 1).
    pub fn root_of_unity(r: &BigRational) -> Self {
        let r = frac(r);
        let order = r.denom().to_u64().expect("phase denominator fits in u64");
        let exp = r.numer().to_u64().unwrap_or(0);
        let mut coeffs = BTreeMap::new();
        coeffs.insert(exp % order.max(1), Complex::new(BigRational::one(), BigRational::zero()));
        Cyc { order: order.max(1), coeffs }
    }

    fn lifted(&self, order: u64) -> Cyc {
        debug_assert!(order % self.order == 0);
        let k = order / self.order;
        Cyc {
            order,
            coeffs: self.coeffs.iter().map(|(e, c)| (e * k, c.clone())).collect(),
        }
    }

    pub fn add(&self, other: &Cyc) -> Cyc {
        let order = self.order.lcm(&other.order);
        let mut out = self.lifted(order);
        for (e, c) in other.lifted(order).coeffs {
            let entry = out.coeffs.entry(e).or_insert_with(|| Complex::new(BigRational::zero(), BigRational::zero()));
            *entry = entry.clone() + c;
            if entry.is_zero() {
                out.coeffs.remove(&e);
            }
        }
        out
    }

    pub fn neg(&self) -> Cyc {
        Cyc {
            order: self.order,
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Cyc) -> Cyc {
        let order = self.order.lcm(&other.order);
        let a = self.lifted(order);
        let b = other.lifted(order);
        let mut coeffs: BTreeMap<u64, GaussRat> = BTreeMap::new();
        for (ea, ca) in &a.coeffs {
            for (eb, cb) in &b.coeffs {
                let e = (ea + eb) % order;
                let c = ca.clone() * cb.clone();
                let entry = coeffs.entry(e).or_insert_with(|| Complex::new(BigRational::zero(), BigRational::zero()));
                *entry = entry.clone() + c;
                if entry.is_zero() {
                    coeffs.remove(&e);
                }
            }
        }
        Cyc { order, coeffs }
    }

    pub fn scale(&self, c: &GaussRat) -> Cyc {
        if c.is_zero() {
            return Cyc::zero();
        }
        Cyc {
            order: self.order,
            coeffs: self.coeffs.iter().map(|(e, x)| (*e, x.clone() * c.clone())).collect(),
        }
    }

    pub fn conj(&self) -> Cyc {
        Cyc {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, c)| ((self.order - e) % self.order, gauss_conj(c)))
                .collect(),
        }
    }

    /// Canonical representative: exponents shrunk by their gcd with the order, then the
    /// dense polynomial reduced modulo Φ_order.
    pub fn canonicalize(&self) -> Cyc {
        if self.coeffs.is_empty() {
            return Cyc::zero();
        }
        let mut g = self.order;
        for e in self.coeffs.keys() {
            g = g.gcd(e);
        }
        let order = self.order / g;
        let mut dense: Vec<GaussRat> =
            vec![Complex::new(BigRational::zero(), BigRational::zero()); order as usize];
        for (e, c) in &self.coeffs {
            let idx = ((e / g) % order) as usize;
            dense[idx] = dense[idx].clone() + c.clone();
        }
        if order > 1 {
            let phi = cyclotomic_poly(order);
            let deg = phi.len() - 1;
            for k in (deg..order as usize).rev() {
                let c = dense[k].clone();
                if !c.is_zero() {
                    for (j, pj) in phi.iter().enumerate() {
                        let adj = c.clone() * Complex::new(BigRational::from_integer(pj.clone()), BigRational::zero());
                        dense[k - deg + j] = dense[k - deg + j].clone() - adj;
                    }
                }
            }
        }
        let coeffs: BTreeMap<u64, GaussRat> = dense
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e as u64, c))
            .collect();
        if coeffs.is_empty() {
            Cyc::zero()
        } else {
            Cyc { order, coeffs }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.canonicalize().coeffs.is_empty()
    }

    pub fn to_c64(&self) -> C64 {
        let mut acc = Complex::new(0.0, 0.0);
        for (e, c) in &self.coeffs {
            let ang = 2.0 * std::f64::consts::PI * (*e as f64) / (self.order as f64);
            acc += gauss_to_c64(c) * Complex::new(ang.cos(), ang.sin());
        }
        acc
    }

    /// The value as a plain Gaussian rational, when the canonical form has no
    /// genuine root of unity left.
    pub fn try_gauss(&self) -> Option<GaussRat> {
        let c = self.canonicalize();
        if c.coeffs.is_empty() {
            return Some(Complex::new(BigRational::zero(), BigRational::zero()));
        }
        // ζ4 = i and ζ2 = −1 are still Gaussian
        match c.order {
            1 => c.coeffs.get(&0).cloned(),
            2 if c.coeffs.len() == 1 => c
                .coeffs
                .get(&1)
                .map(|g| -g.clone())
                .or_else(|| c.coeffs.get(&0).cloned()),
            4 => {
                let mut acc = Complex::new(BigRational::zero(), BigRational::zero());
                for (e, g) in &c.coeffs {
                    let unit = match e % 4 {
                        0 => Complex::new(BigRational::one(), BigRational::zero()),
                        1 => Complex::new(BigRational::zero(), BigRational::one()),
                        2 => Complex::new(-BigRational::one(), BigRational::zero()),
                        _ => Complex::new(BigRational::zero(), -BigRational::one()),
                    };
                    acc = acc + g * unit;
                }
                Some(acc)
            }
            _ => None,
        }
    }
}

/// Exact symbolic scalar: map θ-multiple (in turns) ↦ cyclotomic value.
#[derive(Debug, Clone)]
pub struct Scalar {
    terms: BTreeMap<BigRational, Cyc>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Scalar::from_cyc(BigRational::zero(), Cyc::one())
    }

    fn from_cyc(theta_mult: BigRational, c: Cyc) -> Self {
        let mut terms = BTreeMap::new();
        if !c.coeffs.is_empty() {
            terms.insert(theta_mult, c);
        }
        Scalar { terms }
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar::from_gauss(Complex::new(r, BigRational::zero()))
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_gauss(c: GaussRat) -> Self {
        Scalar::from_cyc(BigRational::zero(), Cyc::from_gauss(c))
    }

    /// e^{2πi r} for rational r.
    pub fn root_of_unity(r: &BigRational) -> Self {
        Scalar::from_cyc(BigRational::zero(), Cyc::root_of_unity(r))
    }

    pub fn from_phase(p: &Phase) -> Self {
        Scalar::from_cyc(p.theta_mult.clone(), Cyc::root_of_unity(&p.turns))
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        let mut terms = self.terms.clone();
        for (a, c) in &other.terms {
            let merged = match terms.get(a) {
                Some(prev) => prev.add(c),
                None => c.clone(),
            };
            if merged.coeffs.is_empty() {
                terms.remove(a);
            } else {
                terms.insert(a.clone(), merged);
            }
        }
        Scalar { terms }
    }

    pub fn neg(&self) -> Scalar {
        Scalar {
            terms: self.terms.iter().map(|(a, c)| (a.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (a1, c1) in &self.terms {
            for (a2, c2) in &other.terms {
                out = out.add(&Scalar::from_cyc(a1 + a2, c1.mul(c2)));
            }
        }
        out
    }

    pub fn mul_phase(&self, p: &Phase) -> Scalar {
        self.mul(&Scalar::from_phase(p))
    }

    pub fn scale(&self, c: &GaussRat) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            terms: self.terms.iter().map(|(a, x)| (a.clone(), x.scale(c))).collect(),
        }
    }

    pub fn scale_rat(&self, r: &BigRational) -> Scalar {
        self.scale(&Complex::new(r.clone(), BigRational::zero()))
    }

    pub fn conj(&self) -> Scalar {
        Scalar {
            terms: self.terms.iter().map(|(a, c)| (-a.clone(), c.conj())).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| c.is_zero())
    }

    pub fn eq_scalar(&self, other: &Scalar) -> bool {
        self.sub(other).is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.eq_scalar(&Scalar::one())
    }

    /// True when no symbolic θ-multiple survives (after exact cancellation).
    pub fn is_theta_free(&self) -> bool {
        self.terms
            .iter()
            .all(|(a, c)| a.is_zero() || c.is_zero())
    }

    /// Substitute an exact rational θ, folding symbolic multiples into roots of unity.
    pub fn with_rational_theta(&self, theta: &BigRational) -> Scalar {
        let mut out = Scalar::zero();
        for (a, c) in &self.terms {
            let t = Scalar::from_cyc(BigRational::zero(), c.clone())
                .mul(&Scalar::root_of_unity(&(a * theta)));
            out = out.add(&t);
        }
        out
    }

    /// Numeric value. `theta` supplies the deformation parameter when symbolic multiples
    /// remain; without it a surviving θ-multiple is an error.
    pub fn to_c64(&self, theta: Option<f64>) -> Result<C64> {
        let mut acc = Complex::new(0.0, 0.0);
        for (a, c) in &self.terms {
            if a.is_zero() {
                acc += c.to_c64();
            } else {
                match theta {
                    Some(t) => {
                        let ang = 2.0 * std::f64::consts::PI * to_f64(a) * t;
                        acc += c.to_c64() * Complex::new(ang.cos(), ang.sin());
                    }
                    None => {
                        if !c.is_zero() {
                            return Err(Error::SymbolicPhase);
                        }
                    }
                }
            }
        }
        Ok(acc)
    }

    /// |value| when it is computable without a numeric θ: either θ-free, or a single
    /// unimodular-phase-times-coefficient term.
    pub fn abs_certain(&self) -> Option<f64> {
        let live: Vec<&Cyc> = self.terms.values().filter(|c| !c.is_zero()).collect();
        if self.is_theta_free() {
            return self.to_c64(None).ok().map(|z| z.norm());
        }
        if live.len() == 1 {
            return Some(live[0].to_c64().norm());
        }
        None
    }

    /// θ-free Gaussian-rational value, when the scalar is one.
    pub fn try_gauss(&self) -> Option<GaussRat> {
        let mut acc = Complex::new(BigRational::zero(), BigRational::zero());
        for (a, c) in &self.terms {
            if c.is_zero() {
                continue;
            }
            if !a.is_zero() {
                return None;
            }
            acc = acc + c.try_gauss()?;
        }
        Some(acc)
    }
}
