//! Tables of fractional parts frac(θ·Σ_e σ(u_e, T^x v_e)) for x = 0..x_max, computed
//! without ever forming the exponentially growing integers σ(u, T^x v). The combined
//! integer sequence obeys s(x+1) = β(1)·s(x) − s(x−1), so the phase can be tracked
//! modulo 1: exactly mod the denominator for rational θ, and in wide fixed point for the
//! quadratic special values (the recursion multiplies errors by ~β(1) per step, hence
//! the x_max·log2(β(1)+1) bit budget).

use crate::matrix::{symplectic, HyperbolicMatrix, IntVec2};
use crate::rat::to_f64;
use crate::theta::ThetaParameter;
use crate::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

/// frac(θ·s(x)) for x = 0..=x_max, where s(x) = Σ_e σ(u_e, T^x v_e).
pub fn phase_table(
    h: &HyperbolicMatrix,
    theta: &ThetaParameter,
    pairs: &[(IntVec2, IntVec2)],
    x_max: usize,
) -> Result<Vec<f64>> {
    let s0: BigInt = pairs.iter().map(|(u, v)| symplectic(u, v)).sum();
    let s1: BigInt = pairs
        .iter()
        .map(|(u, v)| symplectic(u, &h.mat.apply(v)))
        .sum();
    match theta {
        ThetaParameter::GenericIrrational => Err(Error::Unsupported(
            "phase orbits need a numeric θ".into(),
        )),
        ThetaParameter::SpecialQuadratic { value, .. } => {
            fixed_point_table(h, |s: &BigInt| {
                value.scale(&BigRational::from_integer(s.clone())).frac()
            }, &s0, &s1, x_max)
        }
        _ => {
            let t = theta.exact_rational().unwrap();
            rational_table(h, &t, &s0, &s1, x_max)
        }
    }
}

/// Exact path: track p·s(x) mod q.
fn rational_table(
    h: &HyperbolicMatrix,
    theta: &BigRational,
    s0: &BigInt,
    s1: &BigInt,
    x_max: usize,
) -> Result<Vec<f64>> {
    let q = theta.denom().clone();
    let p = theta.numer().clone();
    let beta1 = BigInt::from(h.beta1);
    // small-denominator fast path in i128
    if let (Some(qi), Some(b1)) = (q.to_i128(), h.beta1.to_i128()) {
        if qi > 0 && qi < (1i128 << 55) {
            let reduce = |x: &BigInt| -> i128 { (x * &p).mod_floor(&q).to_i128().unwrap() };
            let mut a = reduce(s0);
            let mut b = reduce(s1);
            let qf = qi as f64;
            let mut out = Vec::with_capacity(x_max + 1);
            out.push(a as f64 / qf);
            if x_max >= 1 {
                out.push(b as f64 / qf);
            }
            for _ in 2..=x_max {
                let next = (b1 * b - a).rem_euclid(qi);
                a = b;
                b = next;
                out.push(b as f64 / qf);
            }
            return Ok(out);
        }
    }
    // general path in BigInt
    let reduce = |x: &BigInt| -> BigInt { (x * &p).mod_floor(&q) };
    let mut a = reduce(s0);
    let mut b = reduce(s1);
    let qf = to_f64(&BigRational::from_integer(q.clone()));
    let mut out = Vec::with_capacity(x_max + 1);
    out.push(to_f64(&BigRational::from_integer(a.clone())) / qf);
    if x_max >= 1 {
        out.push(to_f64(&BigRational::from_integer(b.clone())) / qf);
    }
    for _ in 2..=x_max {
        let next = (&beta1 * &b - &a).mod_floor(&q);
        a = b;
        b = next;
        out.push(to_f64(&BigRational::from_integer(b.clone())) / qf);
    }
    Ok(out)
}

/// Fixed-point path: X(x) ≈ frac(θ·s(x))·2^N tracked mod 2^N with N large enough that
/// the error stays below 2⁻⁶⁰ at x = x_max.
fn fixed_point_table(
    h: &HyperbolicMatrix,
    frac_of: impl Fn(&BigInt) -> Result<crate::quadratic::Quad>,
    s0: &BigInt,
    s1: &BigInt,
    x_max: usize,
) -> Result<Vec<f64>> {
    let growth = ((h.beta1 + 1) as f64).log2();
    let bits = (x_max as f64 * growth).ceil() as u32 + 128;
    let scale = BigUint::one() << bits;
    let mask = &scale - BigUint::one();
    let to_fixed = |s: &BigInt| -> Result<BigUint> {
        let f = frac_of(s)?; // in [0,1)
        let approx = f.approx_rational(bits + 4);
        let scaled = approx * BigRational::from_integer(BigInt::from(scale.clone()));
        let rounded = scaled.round().to_integer();
        Ok(rounded.mod_floor(&BigInt::from(scale.clone())).to_biguint().unwrap())
    };
    let mut a = to_fixed(s0)?;
    let mut b = to_fixed(s1)?;
    let beta1 = BigUint::from(h.beta1 as u64);
    let emit = |x: &BigUint| -> f64 {
        let top = (x >> (bits - 63)).to_u64().unwrap_or(0);
        top as f64 / (1u64 << 63) as f64
    };
    let mut out = Vec::with_capacity(x_max + 1);
    out.push(emit(&a));
    if x_max >= 1 {
        out.push(emit(&b));
    }
    let pad = &scale * &beta1;
    for _ in 2..=x_max {
        // β1·b − a mod 2^bits (pad keeps the subtraction non-negative)
        let next = ((&beta1 * &b + &pad) - &a) & mask.clone();
        a = b;
        b = next;
        out.push(emit(&b));
    }
    Ok(out)
}

/// e^{2πi·f} for each table entry.
pub fn unit_phases(table: &[f64]) -> Vec<num_complex::Complex<f64>> {
    table
        .iter()
        .map(|f| {
            let ang = 2.0 * std::f64::consts::PI * f;
            num_complex::Complex::new(ang.cos(), ang.sin())
        })
        .collect()
}
