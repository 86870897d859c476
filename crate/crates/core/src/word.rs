//! Words in the asymptotic free algebra: sequences of (observable, copy-index) letters
//! with an overall exact scalar, normalized so that no two consecutive letters share a
//! copy and no letter is a scalar multiple of the identity.

use crate::matrix::IntVec2;
use crate::scalar::Scalar;
use crate::theta::ThetaParameter;
use crate::weyl::{WeylMonomial, WeylObservable};
use crate::{Error, Result};
use std::collections::BTreeSet;

#[derive(Debug, Clone)]
pub struct FreeLetter {
    pub payload: WeylObservable,
    pub copy: usize,
}

impl FreeLetter {
    pub fn new(payload: WeylObservable, copy: usize) -> Self {
        FreeLetter { payload, copy }
    }
}

#[derive(Debug, Clone)]
pub struct FreeWord {
    pub coeff: Scalar,
    pub letters: Vec<FreeLetter>,
}

impl FreeWord {
    pub fn new(letters: Vec<FreeLetter>) -> Self {
        FreeWord {
            coeff: Scalar::one(),
            letters,
        }
    }

    pub fn scalar(coeff: Scalar) -> Self {
        FreeWord {
            coeff,
            letters: Vec::new(),
        }
    }

    /// Convenience: a word of single Weyl generators, one per (copy, vector) entry.
    pub fn from_generators(entries: &[(usize, IntVec2)]) -> Self {
        FreeWord::new(
            entries
                .iter()
                .map(|(copy, v)| FreeLetter::new(WeylObservable::generator(v.clone()), *copy))
                .collect(),
        )
    }

    pub fn is_scalar(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn copies(&self) -> BTreeSet<usize> {
        self.letters.iter().map(|l| l.copy).collect()
    }

    /// Merge consecutive same-copy letters inside the algebra, factor out scalar
    /// letters, drop nothing else. Idempotent.
    pub fn normalize(&self, theta: &ThetaParameter) -> FreeWord {
        let mut coeff = self.coeff.clone();
        let mut out: Vec<FreeLetter> = Vec::new();
        for letter in &self.letters {
            let mut pending = letter.payload.clone();
            let copy = letter.copy;
            loop {
                if pending.is_zero() {
                    return FreeWord::scalar(Scalar::zero());
                }
                if pending.centred().is_zero() {
                    // scalar multiple of the identity: commute out
                    coeff = coeff.mul(&pending.trace_state());
                    break;
                }
                match out.last() {
                    Some(top) if top.copy == copy => {
                        let merged = out.pop().unwrap().payload.mul(&pending, theta);
                        pending = merged;
                    }
                    _ => {
                        out.push(FreeLetter::new(pending, copy));
                        break;
                    }
                }
            }
        }
        FreeWord { coeff, letters: out }
    }

    /// Adjoint: conjugate scalar, reverse order, adjoint each letter.
    pub fn adjoint(&self) -> FreeWord {
        FreeWord {
            coeff: self.coeff.conj(),
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| FreeLetter::new(l.payload.adjoint(), l.copy))
                .collect(),
        }
    }

    pub fn concat(&self, other: &FreeWord) -> FreeWord {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        FreeWord {
            coeff: self.coeff.mul(&other.coeff),
            letters,
        }
    }

    /// Relabel copy indices through a bijection.
    pub fn permute_copies(&self, pi: &dyn Fn(usize) -> usize) -> FreeWord {
        FreeWord {
            coeff: self.coeff.clone(),
            letters: self
                .letters
                .iter()
                .map(|l| FreeLetter::new(l.payload.clone(), pi(l.copy)))
                .collect(),
        }
    }

    fn expansion_size(&self) -> u128 {
        self.letters
            .iter()
            .map(|l| l.payload.terms().count() as u128)
            .product()
    }

    /// Distribute every observable into its monomials. Letters in distinct copies pick
    /// up no cross phases, so each choice just multiplies coefficients.
    pub fn monomial_words(&self, budget: u128) -> Result<Vec<MonomialWord>> {
        let size = self.expansion_size();
        if size > budget {
            return Err(Error::BudgetExceeded {
                required: size,
                allowed: budget,
            });
        }
        let mut acc = vec![MonomialWord {
            coeff: self.coeff.clone(),
            letters: Vec::new(),
        }];
        for letter in &self.letters {
            let monos: Vec<WeylMonomial> = letter.payload.monomials().collect();
            let mut next = Vec::with_capacity(acc.len() * monos.len());
            for w in &acc {
                for m in &monos {
                    let mut letters = w.letters.clone();
                    letters.push((letter.copy, m.vector.clone()));
                    next.push(MonomialWord {
                        coeff: w.coeff.mul(&m.coeff),
                        letters,
                    });
                }
            }
            acc = next;
        }
        Ok(acc)
    }
}

/// A word whose letters are single Weyl generators.
#[derive(Debug, Clone)]
pub struct MonomialWord {
    pub coeff: Scalar,
    pub letters: Vec<(usize, IntVec2)>,
}

impl MonomialWord {
    pub fn copies(&self) -> BTreeSet<usize> {
        self.letters.iter().map(|(c, _)| *c).collect()
    }

    /// Σ of the vectors carried by one copy.
    pub fn group_sum(&self, copy: usize) -> IntVec2 {
        self.letters
            .iter()
            .filter(|(c, _)| *c == copy)
            .fold(IntVec2::zero(), |acc, (_, v)| acc.add(v))
    }
}
