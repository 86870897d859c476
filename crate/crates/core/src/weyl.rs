//! Weyl monomials W(m), finitely supported observables, the matrix dynamics, and the
//! tracial state, all in exact arithmetic. Products pick up the symplectic phase
//! e^{iπθσ(m,n)}; for rational θ the phase folds into an exact root of unity, otherwise
//! it stays symbolic as a θ-multiple.

pub use crate::matrix::symplectic;
use crate::matrix::{HyperbolicMatrix, IntVec2};
use crate::phase::Phase;
use crate::rat::{frac, to_f64};
use crate::scalar::Scalar;
use crate::theta::ThetaParameter;
use crate::Result;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::BTreeMap;

/// coeff · W(vector)
#[derive(Debug, Clone)]
pub struct WeylMonomial {
    pub coeff: Scalar,
    pub vector: IntVec2,
}

impl WeylMonomial {
    pub fn generator(vector: IntVec2) -> Self {
        WeylMonomial {
            coeff: Scalar::one(),
            vector,
        }
    }

    pub fn identity() -> Self {
        WeylMonomial::generator(IntVec2::zero())
    }

    pub fn with_coeff(coeff: Scalar, vector: IntVec2) -> Self {
        WeylMonomial { coeff, vector }
    }

    pub fn is_identity(&self) -> bool {
        self.vector.is_zero() && self.coeff.is_one()
    }

    pub fn adjoint(&self) -> WeylMonomial {
        WeylMonomial {
            coeff: self.coeff.conj(),
            vector: self.vector.neg(),
        }
    }

    pub fn evolve(&self, t_mat: &HyperbolicMatrix, t: i64) -> WeylMonomial {
        WeylMonomial {
            coeff: self.coeff.clone(),
            vector: t_mat.apply_power(&self.vector, t),
        }
    }
}

/// The product phase of W(m)·W(n): e^{iπθσ(m,n)}, i.e. θ·σ(m,n)/2 turns.
pub fn product_phase(m: &IntVec2, n: &IntVec2) -> Phase {
    let half_sigma = BigRational::new(symplectic(m, n), BigInt::from(2));
    Phase::theta_turns(half_sigma)
}

fn resolve_phase(p: &Phase, theta: &ThetaParameter) -> Scalar {
    match theta.exact_rational() {
        Some(t) => Scalar::from_phase(&p.with_rational_theta(&t)),
        None => Scalar::from_phase(p),
    }
}

pub fn mul_monomials(
    a: &WeylMonomial,
    b: &WeylMonomial,
    theta: &ThetaParameter,
) -> WeylMonomial {
    let phase = resolve_phase(&product_phase(&a.vector, &b.vector), theta);
    WeylMonomial {
        coeff: a.coeff.mul(&b.coeff).mul(&phase),
        vector: a.vector.add(&b.vector),
    }
}

/// Finitely supported f: Z² → C, representing W(f) = Σ f(m)·W(m).
#[derive(Debug, Clone)]
pub struct WeylObservable {
    support: BTreeMap<IntVec2, Scalar>,
}

impl WeylObservable {
    pub fn zero() -> Self {
        WeylObservable {
            support: BTreeMap::new(),
        }
    }

    pub fn identity() -> Self {
        WeylObservable::from_monomial(WeylMonomial::identity())
    }

    pub fn from_monomial(m: WeylMonomial) -> Self {
        let mut o = WeylObservable::zero();
        o.accumulate(m.vector, m.coeff);
        o
    }

    pub fn generator(v: IntVec2) -> Self {
        WeylObservable::from_monomial(WeylMonomial::generator(v))
    }

    /// W(n) + W(−n): the basic centred self-adjoint observable.
    pub fn cosine(v: IntVec2) -> Self {
        let mut o = WeylObservable::generator(v.clone());
        o.accumulate(v.neg(), Scalar::one());
        o
    }

    fn accumulate(&mut self, v: IntVec2, c: Scalar) {
        let merged = match self.support.get(&v) {
            Some(prev) => prev.add(&c),
            None => c,
        };
        if merged.is_zero() {
            self.support.remove(&v);
        } else {
            self.support.insert(v, merged);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IntVec2, &Scalar)> {
        self.support.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = WeylMonomial> + '_ {
        self.support
            .iter()
            .map(|(v, c)| WeylMonomial::with_coeff(c.clone(), v.clone()))
    }

    pub fn support_radius(&self) -> BigInt {
        self.support
            .keys()
            .map(|v| v.linf())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.support.values().all(|c| c.is_zero())
    }

    pub fn coefficient(&self, v: &IntVec2) -> Scalar {
        self.support.get(v).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add(&self, other: &WeylObservable) -> WeylObservable {
        let mut out = self.clone();
        for (v, c) in &other.support {
            out.accumulate(v.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> WeylObservable {
        let mut out = WeylObservable::zero();
        for (v, x) in &self.support {
            out.accumulate(v.clone(), x.mul(c));
        }
        out
    }

    pub fn adjoint(&self) -> WeylObservable {
        let mut out = WeylObservable::zero();
        for (v, c) in &self.support {
            out.accumulate(v.neg(), c.conj());
        }
        out
    }

    pub fn evolve(&self, t_mat: &HyperbolicMatrix, t: i64) -> WeylObservable {
        let p = t_mat.power(t);
        let mut out = WeylObservable::zero();
        for (v, c) in &self.support {
            out.accumulate(p.apply(v), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &WeylObservable, theta: &ThetaParameter) -> WeylObservable {
        let mut out = WeylObservable::zero();
        for (va, ca) in &self.support {
            for (vb, cb) in &other.support {
                let phase = resolve_phase(&product_phase(va, vb), theta);
                out.accumulate(va.add(vb), ca.mul(cb).mul(&phase));
            }
        }
        out
    }

    /// The tracial state φ(W(f)) = f(0).
    pub fn trace_state(&self) -> Scalar {
        self.coefficient(&IntVec2::zero())
    }

    /// f(0) removed.
    pub fn centred(&self) -> WeylObservable {
        let mut out = self.clone();
        out.support.remove(&IntVec2::zero());
        out
    }

    pub fn is_centred(&self) -> bool {
        self.trace_state().is_zero()
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.sub_is_zero(&self.adjoint())
    }

    fn sub_is_zero(&self, other: &WeylObservable) -> bool {
        self.add(&other.scale(&Scalar::from_int(-1))).is_zero()
    }
}

pub fn mul_observables(
    x: &WeylObservable,
    y: &WeylObservable,
    theta: &ThetaParameter,
) -> WeylObservable {
    x.mul(y, theta)
}

/// φ([W(m), W(T^t n)]* [W(m), W(T^t n)]) = 4 sin²(πθσ(m, T^t n)), reduced mod 1 exactly
/// before any floating point enters.
pub fn commutator_defect(
    m: &IntVec2,
    n: &IntVec2,
    t: i64,
    t_mat: &HyperbolicMatrix,
    theta: &ThetaParameter,
) -> Result<f64> {
    let s = symplectic(m, &t_mat.apply_power(n, t));
    let x = match theta {
        ThetaParameter::SpecialQuadratic { value, .. } => {
            value.scale(&BigRational::from_integer(s)).frac()?.to_f64()
        }
        _ => {
            let tr = theta
                .exact_rational()
                .ok_or_else(|| crate::Error::Unsupported("defect needs a numeric θ".into()))?;
            to_f64(&frac(&(tr * BigRational::from_integer(s))))
        }
    };
    let sn = (std::f64::consts::PI * x).sin();
    Ok(4.0 * sn * sn)
}
