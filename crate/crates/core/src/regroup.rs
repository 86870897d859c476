//! Regrouping of a monomial word: commute all letters of each copy together (copies in
//! ascending order), recording every exchange in a phase ledger, then merge each copy's
//! block into a single generator with its within-group half-phase.
//!
//! For letters at times t_k (copy k) the exchange W(T^{t_k}u)·W(T^{t_p}v) =
//! e^{2πiθσ(T^{t_k}u, T^{t_p}v)}·W(T^{t_p}v)·W(T^{t_k}u) contributes one ledger entry
//! per inverted pair. All time dependence of the word's expectation lives in the ledger;
//! the groups carry only time-independent data.

use crate::matrix::{symplectic, IntVec2};
use crate::phase::Phase;
use crate::word::MonomialWord;
use num_bigint::BigInt;
use num_rational::BigRational;
use std::collections::BTreeMap;

/// One exchange: exponent θ·σ(T^{t_hi}u, T^{t_lo}v) turns, with hi > lo as copy indices.
#[derive(Debug, Clone)]
pub struct LedgerEntry {
    pub hi: usize,
    pub lo: usize,
    pub u: IntVec2,
    pub v: IntVec2,
}

/// A copy's gathered letters.
#[derive(Debug, Clone)]
pub struct Group {
    pub vectors: Vec<IntVec2>,
    pub sum: IntVec2,
    /// within-group merge phase: θ·(Σ_{i<j} σ(v_i, v_j))/2 turns
    pub phase: Phase,
}

#[derive(Debug, Clone)]
pub struct RegroupedWord {
    pub groups: BTreeMap<usize, Group>,
    pub ledger: Vec<LedgerEntry>,
}

impl RegroupedWord {
    pub fn from_monomial_word(w: &MonomialWord) -> Self {
        let mut ledger = Vec::new();
        for (i, (ci, ui)) in w.letters.iter().enumerate() {
            for (cj, uj) in w.letters.iter().skip(i + 1) {
                if ci > cj {
                    ledger.push(LedgerEntry {
                        hi: *ci,
                        lo: *cj,
                        u: ui.clone(),
                        v: uj.clone(),
                    });
                }
            }
        }
        let mut groups: BTreeMap<usize, Group> = BTreeMap::new();
        for copy in w.copies() {
            let vectors: Vec<IntVec2> = w
                .letters
                .iter()
                .filter(|(c, _)| *c == copy)
                .map(|(_, v)| v.clone())
                .collect();
            let mut sum = IntVec2::zero();
            let mut half_sigma = BigInt::from(0);
            for (i, vi) in vectors.iter().enumerate() {
                sum = sum.add(vi);
                for vj in vectors.iter().skip(i + 1) {
                    half_sigma += symplectic(vi, vj);
                }
            }
            groups.insert(
                copy,
                Group {
                    vectors,
                    sum,
                    phase: Phase::theta_turns(BigRational::new(half_sigma, BigInt::from(2))),
                },
            );
        }
        RegroupedWord { groups, ledger }
    }

    pub fn all_group_sums_zero(&self) -> bool {
        self.groups.values().all(|g| g.sum.is_zero())
    }

    /// Product of the within-group phases.
    pub fn group_phase(&self) -> Phase {
        self.groups
            .values()
            .fold(Phase::one(), |acc, g| acc.mul(&g.phase))
    }

    /// Ledger entries between one pair of copies, as (u, v) with u on the hi side.
    pub fn pair_entries(&self, hi: usize, lo: usize) -> Vec<(IntVec2, IntVec2)> {
        self.ledger
            .iter()
            .filter(|e| e.hi == hi && e.lo == lo)
            .map(|e| (e.u.clone(), e.v.clone()))
            .collect()
    }

    pub fn copy_pairs(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .ledger
            .iter()
            .map(|e| (e.hi, e.lo))
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::HyperbolicMatrix;
    use crate::rat::rat;
    use crate::scalar::Scalar;
    use crate::theta::ThetaParameter;
    use crate::weyl::{mul_monomials, WeylMonomial};
    use crate::word::FreeWord;

    /// φ of the word with explicit integer times per copy, multiplied out directly.
    fn direct_expectation(
        w: &MonomialWord,
        h: &HyperbolicMatrix,
        times: &BTreeMap<usize, i64>,
        theta: &ThetaParameter,
    ) -> Scalar {
        let mut acc = WeylMonomial::with_coeff(w.coeff.clone(), IntVec2::zero());
        for (copy, v) in &w.letters {
            let letter = WeylMonomial::generator(h.apply_power(v, times[copy]));
            acc = mul_monomials(&acc, &letter, theta);
        }
        if acc.vector.is_zero() {
            acc.coeff
        } else {
            Scalar::zero()
        }
    }

    /// φ reassembled from the regrouped data at the same explicit times.
    fn regrouped_expectation(
        w: &MonomialWord,
        h: &HyperbolicMatrix,
        times: &BTreeMap<usize, i64>,
        theta: &ThetaParameter,
    ) -> Scalar {
        let rg = RegroupedWord::from_monomial_word(w);
        let total: IntVec2 = rg
            .groups
            .iter()
            .fold(IntVec2::zero(), |acc, (copy, g)| {
                acc.add(&h.apply_power(&g.sum, times[copy]))
            });
        if !total.is_zero() {
            return Scalar::zero();
        }
        let t_rat = theta.exact_rational().unwrap();
        let mut phase = Phase::one();
        for e in &rg.ledger {
            let s = symplectic(
                &h.apply_power(&e.u, times[&e.hi]),
                &h.apply_power(&e.v, times[&e.lo]),
            );
            phase = phase.mul(&Phase::theta_turns(BigRational::from_integer(s)));
        }
        phase = phase.mul(&rg.group_phase());
        // blocks at distinct times still multiply with cross-block phases
        let mut blocks = WeylMonomial::identity();
        for (copy, g) in &rg.groups {
            let b = WeylMonomial::generator(h.apply_power(&g.sum, times[copy]));
            blocks = mul_monomials(&blocks, &b, theta);
        }
        w.coeff
            .mul(&Scalar::from_phase(&phase.with_rational_theta(&t_rat)))
            .mul(&blocks.coeff)
    }

    #[test]
    fn ledger_reassembles_the_original_expectation() {
        let h = HyperbolicMatrix::cat_map();
        let theta = ThetaParameter::rational(rat(2, 7));
        let n = IntVec2::from_i64(1, 1);
        let words = [
            // counterexample shape: copies 1,2 alternating, all group sums zero
            FreeWord::from_generators(&[
                (1, n.clone()),
                (2, n.clone()),
                (1, IntVec2::from_i64(-2, -2)),
                (2, n.clone()),
                (1, n.clone()),
                (2, IntVec2::from_i64(-2, -2)),
            ]),
            // three copies, unbalanced groups
            FreeWord::from_generators(&[
                (2, IntVec2::from_i64(1, 0)),
                (1, IntVec2::from_i64(0, 1)),
                (3, IntVec2::from_i64(1, -1)),
                (1, IntVec2::from_i64(2, 1)),
                (2, IntVec2::from_i64(-1, 0)),
            ]),
        ];
        for fw in &words {
            let mono = &fw.monomial_words(1 << 10).unwrap()[0];
            for (ta, tb, tc) in [(0i64, 0, 0), (3, 1, 0), (7, 2, 5), (1, 9, 4)] {
                let times: BTreeMap<usize, i64> = [(1, ta), (2, tb), (3, tc)].into();
                let d = direct_expectation(mono, &h, &times, &theta);
                let r = regrouped_expectation(mono, &h, &times, &theta);
                assert!(d.eq_scalar(&r), "times {ta},{tb},{tc}");
            }
        }
    }

    #[test]
    fn group_bookkeeping() {
        let fw = FreeWord::from_generators(&[
            (1, IntVec2::from_i64(1, 0)),
            (2, IntVec2::from_i64(0, 1)),
            (1, IntVec2::from_i64(-1, 0)),
        ]);
        let mono = &fw.monomial_words(8).unwrap()[0];
        let rg = RegroupedWord::from_monomial_word(mono);
        assert_eq!(rg.groups.len(), 2);
        assert!(rg.groups[&1].sum.is_zero());
        assert_eq!(rg.groups[&2].sum, IntVec2::from_i64(0, 1));
        assert!(!rg.all_group_sums_zero());
        // one inversion: the (2,·) letter before the final (1,·) letter
        assert_eq!(rg.ledger.len(), 1);
        assert_eq!((rg.ledger[0].hi, rg.ledger[0].lo), (2, 1));
    }
}
