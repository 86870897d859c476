//! Moments of centred sums S_N = N^{-1/2} (b₁ + … + b_N), one copy of the same
//! self-adjoint observable per factor, against the asymptotic state.
//!
//! In the limit N → ∞ only pair partitions survive; the weight of each pair partition
//! is the evaluator value of the word whose copy labels follow the partition blocks.
//! At finite N the moment is an exact sum over ordered set partitions.

use crate::matrix::HyperbolicMatrix;
use crate::scalar::Scalar;
use crate::state::{phi_inf_generic, phi_inf_special_with, Evaluator};
use crate::theta::ThetaParameter;
use crate::weyl::WeylObservable;
use crate::word::{FreeLetter, FreeWord};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairPartition {
    /// pairs (i, j), i < j, sorted by opener
    pub pairs: Vec<(usize, usize)>,
}

/// All pair partitions of {0, …, p−1}, lexicographic in the opener of each block.
/// Empty for odd p; (p−1)!! partitions for even p.
pub fn enumerate_pair_partitions(p: usize) -> Vec<PairPartition> {
    if p % 2 != 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut pairs = Vec::with_capacity(p / 2);
    let mut used = vec![false; p];
    fn rec(
        used: &mut Vec<bool>,
        pairs: &mut Vec<(usize, usize)>,
        out: &mut Vec<PairPartition>,
    ) {
        let Some(i) = used.iter().position(|u| !u) else {
            out.push(PairPartition {
                pairs: pairs.clone(),
            });
            return;
        };
        used[i] = true;
        for j in (i + 1)..used.len() {
            if !used[j] {
                used[j] = true;
                pairs.push((i, j));
                rec(used, pairs, out);
                pairs.pop();
                used[j] = false;
            }
        }
        used[i] = false;
    }
    rec(&mut used, &mut pairs, &mut out);
    out
}

/// Number of crossing pairs: (a,b), (c,d) with a < c < b < d.
pub fn crossing_count(p: &PairPartition) -> usize {
    let mut count = 0;
    for (x, &(a, b)) in p.pairs.iter().enumerate() {
        for &(c, d) in &p.pairs[x + 1..] {
            if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                count += 1;
            }
        }
    }
    count
}

pub fn is_noncrossing(p: &PairPartition) -> bool {
    crossing_count(p) == 0
}

/// Σ over pair partitions of q^{crossings}; interpolates 1 ⇒ (p−1)!!,
/// 0 ⇒ Catalan(p/2).
pub fn q_moment(p: usize, q: &BigRational) -> BigRational {
    let mut total = BigRational::zero();
    for part in enumerate_pair_partitions(p) {
        let mut term = BigRational::one();
        for _ in 0..crossing_count(&part) {
            term *= q;
        }
        total += term;
    }
    total
}

pub fn catalan(n: usize) -> BigInt {
    let mut c = BigInt::one();
    for k in 0..n {
        c = c * BigInt::from(2 * (2 * k + 1)) / BigInt::from(k + 2);
    }
    c
}

fn double_factorial_odd(p: usize) -> BigInt {
    // 1·3·5·…·(p−1)
    let mut d = BigInt::one();
    let mut k = 3usize;
    while k < p {
        d *= BigInt::from(k);
        k += 2;
    }
    d
}

/// Semicircle moment: Catalan(n)·var^n for p = 2n, 0 for odd p.
pub fn semicircle_moment(p: usize, variance: &BigRational) -> BigRational {
    if p % 2 != 0 {
        return BigRational::zero();
    }
    let mut v = BigRational::from_integer(catalan(p / 2));
    for _ in 0..p / 2 {
        v *= variance;
    }
    v
}

/// Gaussian moment: (p−1)!!·var^{p/2} for even p, 0 for odd.
pub fn gaussian_moment(p: usize, variance: &BigRational) -> BigRational {
    if p % 2 != 0 {
        return BigRational::zero();
    }
    let mut v = BigRational::from_integer(double_factorial_odd(p));
    for _ in 0..p / 2 {
        v *= variance;
    }
    v
}

fn check_payload(payload: &WeylObservable) -> Result<()> {
    if !payload.is_self_adjoint() {
        return Err(Error::NotSelfAdjoint);
    }
    if !payload.is_centred() {
        return Err(Error::NotCentred);
    }
    Ok(())
}

fn word_with_labels(payload: &WeylObservable, labels: &[usize]) -> FreeWord {
    FreeWord::new(
        labels
            .iter()
            .map(|&c| FreeLetter::new(payload.clone(), c))
            .collect(),
    )
}

fn exact_phi(
    w: &FreeWord,
    h: &HyperbolicMatrix,
    evaluator: &Evaluator,
    budget: u128,
) -> Result<Scalar> {
    match evaluator {
        Evaluator::Generic => phi_inf_generic(w, h, budget),
        Evaluator::Special {
            r,
            convention,
            group_prefactor,
            ..
        } => phi_inf_special_with(w, h, *r, *convention, *group_prefactor, budget),
        Evaluator::Numeric { .. } => Err(Error::Unsupported(
            "moment computations need an exact evaluator".into(),
        )),
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for mut tail in permutations(n - 1) {
        for slot in 0..n {
            let mut perm = tail.clone();
            perm.insert(slot, n - 1);
            out.push(perm);
        }
        tail.clear();
    }
    out
}

/// lim_N φ∞(S_N^p). `ordered = true` labels blocks by the rank of their opener only;
/// `ordered = false` averages over all relative orders of the block labels — the two
/// coincide exactly when φ∞ is exchangeable in the copies.
pub fn moment_limit(
    payload: &WeylObservable,
    h: &HyperbolicMatrix,
    evaluator: &Evaluator,
    p: usize,
    ordered: bool,
    budget: u128,
) -> Result<Scalar> {
    check_payload(payload)?;
    if p % 2 != 0 {
        return Ok(Scalar::zero());
    }
    let n = p / 2;
    let mut total = Scalar::zero();
    for part in enumerate_pair_partitions(p) {
        // block index of each position, blocks ordered by opener
        let mut block = vec![0usize; p];
        for (b, &(i, j)) in part.pairs.iter().enumerate() {
            block[i] = b;
            block[j] = b;
        }
        if ordered {
            let labels: Vec<usize> = block.iter().map(|&b| b + 1).collect();
            total = total.add(&exact_phi(&word_with_labels(payload, &labels), h, evaluator, budget)?);
        } else {
            let mut part_total = Scalar::zero();
            for perm in permutations(n) {
                let labels: Vec<usize> = block.iter().map(|&b| perm[b] + 1).collect();
                part_total = part_total
                    .add(&exact_phi(&word_with_labels(payload, &labels), h, evaluator, budget)?);
            }
            let mut fact = BigInt::one();
            for k in 2..=n {
                fact *= BigInt::from(k);
            }
            total = total.add(&part_total.scale_rat(&BigRational::new(BigInt::one(), fact)));
        }
    }
    Ok(total)
}

/// Surjections [p] → {1, …, b} for some b, i.e. ordered set partitions written as
/// label sequences whose image is an initial segment.
fn ordered_set_partitions(p: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut labels = vec![0usize; p];
    fn rec(labels: &mut Vec<usize>, i: usize, out: &mut Vec<Vec<usize>>) {
        if i == labels.len() {
            let b = *labels.iter().max().unwrap();
            if (1..=b).all(|l| labels.contains(&l)) {
                out.push(labels.clone());
            }
            return;
        }
        for l in 1..=labels.len() {
            labels[i] = l;
            rec(labels, i + 1, out);
        }
    }
    rec(&mut labels, 0, &mut out);
    out
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut c = BigInt::one();
    for i in 0..k {
        c = c * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    c
}

/// Exact φ∞(S_N^p) at finite N. Even p only; odd moments vanish term by term.
pub fn finite_n_moment(
    payload: &WeylObservable,
    h: &HyperbolicMatrix,
    evaluator: &Evaluator,
    p: usize,
    n_copies: usize,
    budget: u128,
) -> Result<Scalar> {
    check_payload(payload)?;
    let mut total = Scalar::zero();
    for labels in ordered_set_partitions(p) {
        let b = *labels.iter().max().unwrap_or(&0);
        if b > n_copies {
            continue;
        }
        let weight = BigRational::from_integer(binomial(n_copies, b));
        let v = exact_phi(&word_with_labels(payload, &labels), h, evaluator, budget)?;
        total = total.add(&v.scale_rat(&weight));
    }
    if p % 2 != 0 {
        if !total.is_zero() {
            return Err(Error::Unsupported(
                "odd moment did not vanish term by term".into(),
            ));
        }
        return Ok(total);
    }
    let mut scale = BigRational::one();
    for _ in 0..p / 2 {
        scale /= BigRational::from_integer(BigInt::from(n_copies));
    }
    Ok(total.scale_rat(&scale))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatisticsClass {
    Semicircle,
    Gaussian,
    PairPartitionLaw,
    Unclassified,
}

/// Which central limit law the copy-averaged sums follow for a given θ.
pub fn classify_statistics(h: &HyperbolicMatrix, theta: &ThetaParameter) -> StatisticsClass {
    match theta {
        ThetaParameter::GenericIrrational => StatisticsClass::Semicircle,
        ThetaParameter::Zero => StatisticsClass::Gaussian,
        ThetaParameter::SpecialQuadratic { r, .. } => {
            if h.beta_r(*r).map(|b| b.is_zero()).unwrap_or(false) {
                StatisticsClass::Gaussian
            } else {
                StatisticsClass::PairPartitionLaw
            }
        }
        _ => StatisticsClass::Unclassified,
    }
}

#[derive(Debug, Clone)]
pub struct MomentReport {
    pub order: usize,
    pub value: Scalar,
    pub numeric: f64,
}

pub fn moment_table(
    payload: &WeylObservable,
    h: &HyperbolicMatrix,
    evaluator: &Evaluator,
    orders: &[usize],
    ordered: bool,
    theta_hint: Option<f64>,
    budget: u128,
) -> Result<Vec<MomentReport>> {
    orders
        .iter()
        .map(|&p| {
            let value = moment_limit(payload, h, evaluator, p, ordered, budget)?;
            let numeric = value.to_c64(theta_hint)?.re;
            Ok(MomentReport {
                order: p,
                value,
                numeric,
            })
        })
        .collect()
}
