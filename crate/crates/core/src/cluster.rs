//! The clustering hierarchy for the quantized automorphism: weak clustering of
//! three-point functions, strong clustering via the commutator defect, the
//! unmatched-middle-letter vanishing condition, the freeness average, and the
//! equidistribution of symplectic phase orbits.

use crate::matrix::{symplectic, HyperbolicMatrix, IntVec2};
use crate::orbit::phase_table;
use crate::rat::frac;
use crate::scalar::{Scalar, C64};
use crate::state::DeltaConvention;
use crate::theta::ThetaParameter;
use crate::weyl::{commutator_defect, WeylObservable};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Exact decay (delta factors that die, λ^{−t} rates).
pub const TOL_EXACT: f64 = 1e-6;
/// Cesàro averages (1/T rates).
pub const TOL_CESARO: f64 = 1e-2;

#[derive(Debug, Clone)]
pub struct ClusterScan {
    pub times: Vec<i64>,
    pub values: Vec<C64>,
    pub target: C64,
    pub tolerance: f64,
    pub converged: bool,
}

impl ClusterScan {
    pub fn new(times: Vec<i64>, values: Vec<C64>, target: C64, tolerance: f64) -> Self {
        // converged ⇔ the last quarter of the scan stays within tolerance of the target
        let n = values.len();
        let start = n - n / 4;
        let converged = n > 0
            && values[start.min(n - 1)..]
                .iter()
                .all(|v| (v - target).norm() <= tolerance);
        ClusterScan {
            times,
            values,
            target,
            tolerance,
            converged,
        }
    }
}

fn scalar_to_c64(v: &Scalar, theta: &ThetaParameter) -> Result<C64> {
    match theta.to_f64() {
        Some(tf) => v.to_c64(Some(tf)),
        None => {
            // generic θ: the scan only needs magnitudes that are certain symbolically
            let a = v.abs_certain().ok_or(Error::SymbolicPhase)?;
            Ok(Complex::new(a, 0.0))
        }
    }
}

/// φ(X·Θ_t(Y)·Z) − φ(XZ)·φ(Y) over t in `t_range`; the deltas die once the evolved
/// support of Y escapes the supports of X and Z.
pub fn weak_clustering_scan(
    x: &WeylObservable,
    y: &WeylObservable,
    z: &WeylObservable,
    h: &HyperbolicMatrix,
    theta: &ThetaParameter,
    t_range: std::ops::RangeInclusive<i64>,
) -> Result<ClusterScan> {
    let disconnected = x.mul(z, theta).trace_state().mul(&y.trace_state());
    let mut times = Vec::new();
    let mut values = Vec::new();
    for t in t_range {
        let yt = y.evolve(h, t);
        let full = x.mul(&yt, theta).mul(z, theta).trace_state();
        let defect = full.sub(&disconnected);
        times.push(t);
        values.push(scalar_to_c64(&defect, theta)?);
    }
    Ok(ClusterScan::new(
        times,
        values,
        Complex::new(0.0, 0.0),
        TOL_EXACT,
    ))
}

/// ‖[W(m), Θ_t(W(n))]‖²-type defect 4sin²(πθσ(m, T^t n)); → 0 iff θ lies on the
/// λℓ lattice mod 1.
pub fn strong_clustering_scan(
    m: &IntVec2,
    n: &IntVec2,
    h: &HyperbolicMatrix,
    theta: &ThetaParameter,
    t_range: std::ops::RangeInclusive<i64>,
) -> Result<ClusterScan> {
    let mut times = Vec::new();
    let mut values = Vec::new();
    for t in t_range {
        times.push(t);
        values.push(Complex::new(commutator_defect(m, n, t, h, theta)?, 0.0));
    }
    Ok(ClusterScan::new(
        times,
        values,
        Complex::new(0.0, 0.0),
        TOL_EXACT,
    ))
}

/// Vanishing of expectations with one unmatched centred letter: beyond the returned
/// separation, the evolved middle support cannot be cancelled by the outer letters,
/// so every monomial expectation is exactly 0. Returns (true, separation bound).
pub fn condition_3_8_witness(
    surround: &[WeylObservable],
    middle: &WeylObservable,
    h: &HyperbolicMatrix,
) -> Result<(bool, i64)> {
    if !middle.is_centred() || middle.is_zero() {
        return Err(Error::NotCentred);
    }
    let mut outer_sum = BigInt::zero();
    let mut letters = 0u64;
    for obs in surround {
        outer_sum += obs.support_radius();
        letters += 1;
    }
    let radius = middle
        .support_radius()
        .max(outer_sum.clone())
        .to_u64()
        .ok_or_else(|| Error::Unsupported("support radius too large".into()))?;
    let bound = 2 * radius * (letters + 1).max(1);
    let d = h.escape_time(radius.max(1), bound);
    // verify the witness: every middle support vector, pushed past the bound, has
    // ∞-norm strictly larger than anything the outer supports can sum to
    let reach = BigInt::from(bound);
    for (v, _) in middle.terms() {
        if v.is_zero() {
            return Err(Error::NotCentred);
        }
        let fwd = h.apply_power(v, d).linf();
        let bwd = h.apply_power(v, -d).linf();
        if fwd <= reach || bwd <= reach {
            return Ok((false, d));
        }
    }
    Ok((true, d))
}

/// Asymptotic freeness average φ(W(p)W(−n))·Avg_t e^{2πiθσ(T^t m, n)}, exact:
/// 0 for generic θ, a periodic root-of-unity average for rational θ, and the
/// cyclotomic Δ-average for special θ.
pub fn condition_3_12_average(
    p: &IntVec2,
    m: &IntVec2,
    n: &IntVec2,
    h: &HyperbolicMatrix,
    theta: &ThetaParameter,
    convention: DeltaConvention,
) -> Result<Scalar> {
    if m.is_zero() || n.is_zero() {
        return Err(Error::Unsupported("m and n must be nonzero".into()));
    }
    if p != n {
        return Ok(Scalar::zero());
    }
    match theta {
        ThetaParameter::GenericIrrational => Ok(Scalar::zero()),
        ThetaParameter::Zero => Ok(Scalar::one()),
        ThetaParameter::Rational(q) | ThetaParameter::ExplicitReal(q) => {
            // σ(T^t m, n) = −σ(n, T^t m) is periodic mod denominator; average one period
            let modulus = q.denom().abs();
            let s = |t: i64| -> BigRational {
                frac(&(q * BigRational::from_integer(symplectic(&h.apply_power(m, t), n))))
            };
            let mut total = Scalar::zero();
            let mut period = 0i64;
            let (s0, s1) = (s(0), s(1));
            loop {
                total = total.add(&Scalar::root_of_unity(&s(period)));
                period += 1;
                if s(period) == s0 && s(period + 1) == s1 {
                    break;
                }
                if BigInt::from(period) > &modulus * &modulus {
                    return Err(Error::Unsupported("period search overran bound".into()));
                }
            }
            Ok(total.scale_rat(&BigRational::new(BigInt::from(1), BigInt::from(period))))
        }
        ThetaParameter::SpecialQuadratic { r, .. } => {
            let br = h.beta_r(*r)?;
            let modulus = h.modulus().max(1);
            let mut total = Scalar::zero();
            for s in 0..modulus {
                let ms = h.apply_power(m, s);
                let exponent = -&br * BigRational::from_integer(h.delta(convention, n, &ms));
                total = total.add(&Scalar::root_of_unity(&frac(&exponent)));
            }
            Ok(total.scale_rat(&BigRational::new(BigInt::from(1), BigInt::from(modulus))))
        }
    }
}

/// Direct Cesàro average (1/T)Σ_{t=1}^T e^{2πiθσ(T^t m, n)} — the brute-force check
/// against the closed forms above.
pub fn condition_3_12_numeric(
    m: &IntVec2,
    n: &IntVec2,
    h: &HyperbolicMatrix,
    theta: &ThetaParameter,
    t_max: usize,
) -> Result<C64> {
    // σ(T^t m, n) = −σ(n, T^t m): reuse the (u, T^x v) orbit table with u = n, v = m
    let table = phase_table(h, theta, &[(n.clone(), m.clone())], t_max)?;
    let mut acc = Complex::new(0.0, 0.0);
    for x in 1..=t_max {
        let angle = -2.0 * std::f64::consts::PI * table[x];
        acc += Complex::new(angle.cos(), angle.sin());
    }
    Ok(acc / t_max as f64)
}

#[derive(Debug, Clone)]
pub struct WeylSumReport {
    pub harmonics: Vec<(u64, C64)>,
    pub n_terms: usize,
}

/// Weyl sums (1/N)Σ_{t=1}^N e^{2πikθσ(m, T^t n)} for k = 1..k_max; equidistribution
/// drives all harmonics to 0, and over random θ the mean square is 1/N.
pub fn equidistribution_test(
    m: &IntVec2,
    n: &IntVec2,
    h: &HyperbolicMatrix,
    theta: &ThetaParameter,
    n_terms: usize,
    k_max: u64,
) -> Result<WeylSumReport> {
    let mut harmonics = Vec::new();
    if n.is_zero() || matches!(theta, ThetaParameter::Zero) {
        for k in 1..=k_max {
            harmonics.push((k, Complex::new(1.0, 0.0)));
        }
        return Ok(WeylSumReport { harmonics, n_terms });
    }
    let table = phase_table(h, theta, &[(m.clone(), n.clone())], n_terms)?;
    for k in 1..=k_max {
        let mut acc = Complex::new(0.0, 0.0);
        for x in 1..=n_terms {
            let angle = 2.0 * std::f64::consts::PI * (k as f64) * table[x];
            acc += Complex::new(angle.cos(), angle.sin());
        }
        harmonics.push((k, acc / n_terms as f64));
    }
    Ok(WeylSumReport { harmonics, n_terms })
}
