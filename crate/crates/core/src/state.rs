//! Evaluators for the asymptotic state φ∞ on free words, defined by iterated Cesàro
//! time averages with the innermost average over the lowest copy index.
//!
//! * generic: survival of a monomial word is a decidable exact condition — for every
//!   pair of copies the ledger exponent Σσ(u, T^δ v) must vanish identically in the
//!   time gap δ, which (two independent eigendirections) reduces to vanishing at
//!   δ = 0 and δ = 1.
//! * special: each inner limit leaves a residual phase β_r·Δ(T^s u, v) attached to the
//!   later-averaged copy; the later average over s mod β(1)−2 is an exact cyclotomic
//!   D-factor.
//! * numeric: the iterated limits are emulated by strictly positive time gaps
//!   (inner times race ahead), reducing everything to averages of phase-orbit tables;
//!   the three-copy case is a cross-correlation computed by FFT.

use crate::matrix::{symplectic, HyperbolicMatrix, IntVec2};
pub use crate::matrix::DeltaConvention;
use crate::orbit::{phase_table, unit_phases};
use crate::rat::frac;
use crate::regroup::RegroupedWord;
use crate::scalar::{Scalar, C64};
use crate::theta::ThetaParameter;
use crate::word::FreeWord;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Zero;
use rustfft::FftPlanner;
use std::collections::BTreeMap;

pub const DEFAULT_BUDGET: u128 = 20_000_000_000_000;

#[derive(Debug, Clone, Copy)]
pub struct NumericParams {
    pub t_max: usize,
    /// separation window: gaps ≤ d are masked out
    pub d: usize,
}

impl Default for NumericParams {
    fn default() -> Self {
        NumericParams { t_max: 10_000, d: 10 }
    }
}

#[derive(Debug, Clone)]
pub enum Evaluator {
    Generic,
    Special {
        l: i64,
        r: i64,
        convention: DeltaConvention,
        group_prefactor: bool,
    },
    Numeric {
        theta: ThetaParameter,
        params: NumericParams,
    },
}

impl Evaluator {
    pub fn special(l: i64, r: i64) -> Self {
        Evaluator::Special {
            l,
            r,
            convention: DeltaConvention::Corrected,
            group_prefactor: true,
        }
    }

    /// Numeric value of φ∞(w); `theta_hint` resolves symbolic phases left by the exact
    /// evaluators. Second component is a convergence estimate (0 for exact paths).
    pub fn phi_complex(
        &self,
        w: &FreeWord,
        h: &HyperbolicMatrix,
        theta_hint: Option<f64>,
        budget: u128,
    ) -> Result<(C64, f64)> {
        match self {
            Evaluator::Generic => {
                let s = phi_inf_generic(w, h, budget)?;
                Ok((s.to_c64(theta_hint)?, 0.0))
            }
            Evaluator::Special {
                l,
                r,
                convention,
                group_prefactor,
            } => {
                let theta = ThetaParameter::special(h, *l, *r)?;
                let s = phi_inf_special_with(w, h, *r, *convention, *group_prefactor, budget)?;
                Ok((s.to_c64(theta_hint.or(theta.to_f64()))?, 0.0))
            }
            Evaluator::Numeric { theta, params } => phi_inf_numeric(w, h, theta, *params, budget),
        }
    }
}

fn pair_survives(h: &HyperbolicMatrix, entries: &[(IntVec2, IntVec2)]) -> bool {
    let s0: BigInt = entries.iter().map(|(u, v)| symplectic(u, v)).sum();
    let s1: BigInt = entries
        .iter()
        .map(|(u, v)| symplectic(u, &h.mat.apply(v)))
        .sum();
    s0.is_zero() && s1.is_zero()
}

/// φ∞ for θ in the measure-one generic set: exact, symbolic in θ where within-group
/// phases survive.
pub fn phi_inf_generic(w: &FreeWord, h: &HyperbolicMatrix, budget: u128) -> Result<Scalar> {
    let wn = w.normalize(&ThetaParameter::GenericIrrational);
    let mut total = wn.coeff.clone();
    if !wn.is_scalar() {
        total = Scalar::zero();
        for mono in wn.monomial_words(budget)? {
            let rg = RegroupedWord::from_monomial_word(&mono);
            if !rg.all_group_sums_zero() {
                continue;
            }
            let survives = rg
                .copy_pairs()
                .iter()
                .all(|(hi, lo)| pair_survives(h, &rg.pair_entries(*hi, *lo)));
            if survives {
                total = total.add(&mono.coeff.mul(&Scalar::from_phase(&rg.group_phase())));
            }
        }
    }
    Ok(total)
}

/// Contribution of one monomial word at special θ, with the time averages taken in the
/// explicit `order` of copies (first entry averaged innermost).
fn special_monomial_value(
    rg: &RegroupedWord,
    h: &HyperbolicMatrix,
    r: i64,
    order: &[usize],
    convention: DeltaConvention,
    group_prefactor: bool,
) -> Result<Scalar> {
    if group_prefactor && !rg.all_group_sums_zero() {
        return Ok(Scalar::zero());
    }
    let br = h.beta_r(r)?;
    let pos: BTreeMap<usize, usize> = order.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    // residual limit phases attached to the later-averaged copy of each entry
    let mut residuals: BTreeMap<usize, Vec<(i64, IntVec2, IntVec2)>> = BTreeMap::new();
    for e in &rg.ledger {
        if pos[&e.lo] < pos[&e.hi] {
            residuals
                .entry(e.hi)
                .or_default()
                .push((1, e.u.clone(), e.v.clone()));
        } else {
            residuals
                .entry(e.lo)
                .or_default()
                .push((-1, e.v.clone(), e.u.clone()));
        }
    }
    let modulus = h.modulus().max(1);
    let mut value = Scalar::one();
    for copy in order {
        if let Some(res) = residuals.get(copy) {
            let mut d = Scalar::zero();
            for s in 0..modulus {
                let mut exponent = BigRational::zero();
                for (sign, u, v) in res {
                    let us = h.apply_power(u, s);
                    let dl = BigRational::from_integer(h.delta(convention, &us, v));
                    exponent += &br * dl * BigRational::from_integer(BigInt::from(*sign));
                }
                d = d.add(&Scalar::root_of_unity(&frac(&exponent)));
            }
            d = d.scale_rat(&BigRational::new(BigInt::from(1), BigInt::from(modulus)));
            value = value.mul(&d);
        }
    }
    if group_prefactor {
        value = value.mul(&Scalar::from_phase(&rg.group_phase()));
    }
    Ok(value)
}

pub fn phi_inf_special(
    w: &FreeWord,
    h: &HyperbolicMatrix,
    l: i64,
    r: i64,
    budget: u128,
) -> Result<Scalar> {
    let _ = ThetaParameter::special(h, l, r)?; // validates r; value itself not needed
    phi_inf_special_with(w, h, r, DeltaConvention::Corrected, true, budget)
}

pub fn phi_inf_special_with(
    w: &FreeWord,
    h: &HyperbolicMatrix,
    r: i64,
    convention: DeltaConvention,
    group_prefactor: bool,
    budget: u128,
) -> Result<Scalar> {
    h.beta_r(r)?;
    let wn = w.normalize(&ThetaParameter::GenericIrrational);
    if wn.is_scalar() {
        return Ok(wn.coeff);
    }
    let mut total = Scalar::zero();
    for mono in wn.monomial_words(budget)? {
        let rg = RegroupedWord::from_monomial_word(&mono);
        let order: Vec<usize> = rg.groups.keys().copied().collect();
        let v = special_monomial_value(&rg, h, r, &order, convention, group_prefactor)?;
        total = total.add(&mono.coeff.mul(&v));
    }
    Ok(total)
}

/// Iterated averages in a caller-specified order of copies (`order[0]` innermost).
/// With β_r = 0 every order gives the same value.
pub fn average_order_experiment(
    w: &FreeWord,
    h: &HyperbolicMatrix,
    r: i64,
    order: &[usize],
    convention: DeltaConvention,
    budget: u128,
) -> Result<Scalar> {
    h.beta_r(r)?;
    let wn = w.normalize(&ThetaParameter::GenericIrrational);
    if wn.is_scalar() {
        return Ok(wn.coeff);
    }
    let mut total = Scalar::zero();
    for mono in wn.monomial_words(budget)? {
        let rg = RegroupedWord::from_monomial_word(&mono);
        for copy in rg.groups.keys() {
            if !order.contains(copy) {
                return Err(Error::Unsupported(format!(
                    "averaging order misses copy {copy}"
                )));
            }
        }
        let v = special_monomial_value(&rg, h, r, order, convention, true)?;
        total = total.add(&mono.coeff.mul(&v));
    }
    Ok(total)
}

fn numeric_budget(letters: usize, copies: usize, t_max: usize) -> u128 {
    (letters.max(1) as u128) * (t_max as u128).pow(copies as u32)
}

/// Brute-force nested Cesàro averaging, inner times strictly ahead of outer ones by
/// more than the separation window d.
pub fn phi_inf_numeric(
    w: &FreeWord,
    h: &HyperbolicMatrix,
    theta: &ThetaParameter,
    params: NumericParams,
    budget: u128,
) -> Result<(C64, f64)> {
    let theta_f = theta.require_numeric()?;
    let wn = w.normalize(theta);
    if wn.is_scalar() {
        return Ok((wn.coeff.to_c64(Some(theta_f))?, 0.0));
    }
    let copies = wn.copies().len();
    let required = numeric_budget(wn.letters.len(), copies, params.t_max);
    if required > budget {
        return Err(Error::BudgetExceeded {
            required,
            allowed: budget,
        });
    }
    let mut full = Complex::new(0.0, 0.0);
    let mut half = Complex::new(0.0, 0.0);
    for mono in wn.monomial_words(budget)? {
        let rg = RegroupedWord::from_monomial_word(&mono);
        if !rg.all_group_sums_zero() {
            continue;
        }
        let base = mono
            .coeff
            .mul(&Scalar::from_phase(&rg.group_phase()))
            .to_c64(Some(theta_f))?;
        let (avg_full, avg_half) = ledger_average(&rg, h, theta, params)?;
        full += base * avg_full;
        half += base * avg_half;
    }
    Ok((full, (full - half).norm()))
}

/// Average of the ledger phase over masked positive gaps, at T and T/2 truncations.
fn ledger_average(
    rg: &RegroupedWord,
    h: &HyperbolicMatrix,
    theta: &ThetaParameter,
    params: NumericParams,
) -> Result<(C64, C64)> {
    let copies: Vec<usize> = rg.groups.keys().copied().collect();
    let t = params.t_max;
    let d = params.d;
    if t <= 2 * d + 2 {
        return Err(Error::Unsupported("T_max too small for the separation window".into()));
    }
    match copies.len() {
        1 => Ok((Complex::new(1.0, 0.0), Complex::new(1.0, 0.0))),
        2 => {
            // one gap x = t_inner − t_outer ∈ [d+1, T]
            let entries = rg.pair_entries(copies[1], copies[0]);
            let table = phase_table(h, theta, &entries, t)?;
            let e = unit_phases(&table);
            let mean = |hi: usize| -> C64 {
                let mut acc = Complex::new(0.0, 0.0);
                for x in (d + 1)..=hi {
                    acc += e[x];
                }
                acc / (hi - d) as f64
            };
            Ok((mean(t), mean(t / 2)))
        }
        3 => {
            // gaps x = t_{c1} − t_{c2}, y = t_{c2} − t_{c3}, both in [d+1, T]
            let (c1, c2, c3) = (copies[0], copies[1], copies[2]);
            let e21 = unit_phases(&phase_table(h, theta, &rg.pair_entries(c2, c1), t)?);
            let e31 = unit_phases(&phase_table(h, theta, &rg.pair_entries(c3, c1), 2 * t)?);
            let e32 = unit_phases(&phase_table(h, theta, &rg.pair_entries(c3, c2), t)?);
            let eval_at = |tt: usize| -> C64 {
                // corr(y) = Σ_{x=d+1}^{tt} e21(x)·e31(x+y), then average e32(y)·corr(y)
                let mut a = vec![Complex::new(0.0, 0.0); tt + 1];
                a[(d + 1)..=tt].copy_from_slice(&e21[(d + 1)..=tt]);
                let b = &e31[..=2 * tt];
                let corr = cross_correlation(&a, b);
                let mut acc = Complex::new(0.0, 0.0);
                for y in (d + 1)..=tt {
                    acc += e32[y] * corr[y];
                }
                let m = (tt - d) as f64;
                acc / (m * m)
            };
            Ok((eval_at(t), eval_at(t / 2)))
        }
        n => Err(Error::BudgetExceeded {
            required: (params.t_max as u128).pow(n as u32),
            allowed: (params.t_max as u128).pow(3),
        }),
    }
}

/// corr[y] = Σ_x a[x]·b[x+y] for y = 0..b.len()−a.len(), via FFT.
fn cross_correlation(a: &[C64], b: &[C64]) -> Vec<C64> {
    let n = (a.len() + b.len()).next_power_of_two();
    let mut fa = vec![Complex::new(0.0, 0.0); n];
    let mut fb = vec![Complex::new(0.0, 0.0); n];
    // time-reverse a so that convolution computes correlation
    for (i, &x) in a.iter().enumerate() {
        fa[(n - i) % n] = x;
    }
    fb[..b.len()].copy_from_slice(b);
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);
    fft.process(&mut fa);
    fft.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(fb.iter()) {
        *x *= y;
    }
    let ifft = planner.plan_fft_inverse(n);
    ifft.process(&mut fa);
    let scale = 1.0 / n as f64;
    fa.truncate(b.len());
    for x in fa.iter_mut() {
        *x *= scale;
    }
    fa
}

/// φ∞(w) compared with φ∞(π·w).
pub fn permutation_invariance_test(
    w: &FreeWord,
    pi: &dyn Fn(usize) -> usize,
    evaluator: &Evaluator,
    h: &HyperbolicMatrix,
    tolerance: f64,
    budget: u128,
) -> Result<bool> {
    let wp = w.permute_copies(pi);
    match evaluator {
        Evaluator::Generic => {
            Ok(phi_inf_generic(w, h, budget)?.eq_scalar(&phi_inf_generic(&wp, h, budget)?))
        }
        Evaluator::Special {
            r,
            convention,
            group_prefactor,
            ..
        } => {
            let a = phi_inf_special_with(w, h, *r, *convention, *group_prefactor, budget)?;
            let b = phi_inf_special_with(&wp, h, *r, *convention, *group_prefactor, budget)?;
            Ok(a.eq_scalar(&b))
        }
        Evaluator::Numeric { theta, params } => {
            let (a, _) = phi_inf_numeric(w, h, theta, *params, budget)?;
            let (b, _) = phi_inf_numeric(&wp, h, theta, *params, budget)?;
            Ok((a - b).norm() <= tolerance)
        }
    }
}

/// The six-letter word (n)₁(n)₂(−2n)₁(n)₂(n)₁(−2n)₂ whose expectation is 1 rather
/// than the product of single-copy expectations — the non-freeness witness.
pub fn counterexample_word(n: &IntVec2) -> FreeWord {
    let m2 = IntVec2::new(-2 * &n.m1, -2 * &n.m2);
    FreeWord::from_generators(&[
        (1, n.clone()),
        (2, n.clone()),
        (1, m2.clone()),
        (2, n.clone()),
        (1, n.clone()),
        (2, m2),
    ])
}
