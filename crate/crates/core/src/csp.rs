//! Constraint satisfaction instances `I(X(k), ỹ)`: one constraint `g(z|_s) = ỹ_s` per tuple.

use crate::error::{invalid, limit, Result};
use crate::lifting::LiftSpec;
use crate::words::{self, BinaryWord};
use crate::Rational;

pub const ASSIGNMENT_CAP: u64 = 1 << 24;

#[derive(Clone, Debug)]
pub struct XorInstance {
    spec: LiftSpec,
    rhs: BinaryWord,
}

impl XorInstance {
    pub fn new(spec: LiftSpec, rhs: BinaryWord) -> Result<Self> {
        if rhs.len() != spec.len() {
            return invalid(format!(
                "right-hand side has length {} but X(k) has {}",
                rhs.len(),
                spec.len()
            ));
        }
        Ok(Self { spec, rhs })
    }

    pub fn spec(&self) -> &LiftSpec {
        &self.spec
    }

    pub fn rhs(&self) -> &BinaryWord {
        &self.rhs
    }

    pub fn ground_size(&self) -> usize {
        self.spec.ground_size()
    }

    pub fn negated(&self) -> Self {
        Self {
            spec: self.spec.clone(),
            rhs: self.rhs.negated(),
        }
    }

    /// Fraction of satisfied constraints, `1 - Δ(lift(z), ỹ)`.
    pub fn sat_fraction(&self, z: &BinaryWord) -> Result<Rational> {
        let y = self.spec.lift_word(z)?;
        Ok(Rational::from_integer(1) - words::distance(&y, &self.rhs)?)
    }

    /// Exact optimum and every maximizing assignment.
    pub fn brute_opt(&self) -> Result<(Rational, Vec<BinaryWord>)> {
        let n = self.ground_size();
        if n >= 64 || (1u64 << n) > ASSIGNMENT_CAP {
            return limit(format!("2^{n} assignments exceed the cap"));
        }
        let total = self.rhs.len();
        let mut best = 0usize;
        let mut argmax = Vec::new();
        for z in 0..(1u64 << n) {
            let y = self.spec.lift_mask(z);
            let agree = y.bits().iter().zip(self.rhs.bits()).filter(|(a, b)| a == b).count();
            if agree > best {
                best = agree;
                argmax.clear();
            }
            if agree == best {
                argmax.push(BinaryWord::from_mask(n, z));
            }
        }
        Ok((Rational::new(best as i64, total as i64), argmax))
    }
}
