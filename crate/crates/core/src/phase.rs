//! Unimodular phases in "turns": e^{2πi(θ·a + r)} with exact rational a (the symbolic
//! θ-multiple) and exact rational r reduced mod 1. Every phase in the system is exact;
//! float inputs are snapped to rationals at the boundary, so the approximate variant of a
//! phase never needs to exist at runtime.

use crate::rat::frac;
use num_rational::BigRational;
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Phase {
    /// Coefficient of θ, in turns (so a Weyl half-phase e^{iπθσ} has theta_mult = σ/2).
    pub theta_mult: BigRational,
    /// Exact offset in turns, always in [0, 1).
    pub turns: BigRational,
}

impl Phase {
    pub fn one() -> Self {
        Phase {
            theta_mult: BigRational::zero(),
            turns: BigRational::zero(),
        }
    }

    /// e^{2πi r}, r reduced mod 1.
    pub fn from_turns(r: BigRational) -> Self {
        Phase {
            theta_mult: BigRational::zero(),
            turns: frac(&r),
        }
    }

    /// e^{2πi θ a} with symbolic θ.
    pub fn theta_turns(a: BigRational) -> Self {
        Phase {
            theta_mult: a,
            turns: BigRational::zero(),
        }
    }

    pub fn mul(&self, other: &Phase) -> Phase {
        Phase {
            theta_mult: &self.theta_mult + &other.theta_mult,
            turns: frac(&(&self.turns + &other.turns)),
        }
    }

    pub fn conj(&self) -> Phase {
        Phase {
            theta_mult: -&self.theta_mult,
            turns: frac(&(-&self.turns)),
        }
    }

    /// True when the phase is a concrete scalar (no symbolic θ-multiple left).
    pub fn is_exact_scalar(&self) -> bool {
        self.theta_mult.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.theta_mult.is_zero() && self.turns.is_zero()
    }

    /// Substitute an exact rational value for θ, folding everything into turns.
    pub fn with_rational_theta(&self, theta: &BigRational) -> Phase {
        Phase::from_turns(&self.theta_mult * theta + &self.turns)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn group_law_and_involution() {
        let p = Phase::from_turns(rat(3, 4)).mul(&Phase::theta_turns(rat(1, 2)));
        let q = Phase::from_turns(rat(1, 2));
        let pq = p.mul(&q);
        assert_eq!(pq.turns, rat(1, 4));
        assert_eq!(pq.theta_mult, rat(1, 2));
        assert!(p.mul(&p.conj()).is_one());
    }

    #[test]
    fn turns_stay_reduced() {
        let p = Phase::from_turns(rat(-1, 3));
        assert_eq!(p.turns, rat(2, 3));
        let q = Phase::from_turns(rat(2, 3)).mul(&Phase::from_turns(rat(2, 3)));
        assert_eq!(q.turns, rat(1, 3));
    }

    #[test]
    fn theta_substitution() {
        let p = Phase::theta_turns(rat(3, 2)).mul(&Phase::from_turns(rat(1, 6)));
        let v = p.with_rational_theta(&rat(1, 3));
        assert_eq!(v.turns, rat(2, 3));
        assert!(v.is_exact_scalar());
    }
}
