//! Small exact combinatorial helpers shared by the counting routes.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::ExactInteger;

/// `binomial(n, r)`, zero when `r > n`.
pub fn binomial(n: usize, r: usize) -> ExactInteger {
    if r > n {
        return BigInt::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigInt::one();
    for i in 0..r {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Binomial coefficient with a possibly negative upper argument,
/// `top*(top-1)*...*(top-r+1) / r!`.
pub fn binomial_signed(top: i64, r: usize) -> ExactInteger {
    if top >= 0 {
        return binomial(top as usize, r);
    }
    // C(-a, r) = (-1)^r C(a + r - 1, r)
    let a = (-top) as usize;
    let magnitude = binomial(a + r - 1, r);
    if r.is_multiple_of(2) {
        magnitude
    } else {
        -magnitude
    }
}

/// Factorials `0!..=bound!`, built once and then read-only.
#[derive(Debug, Clone)]
pub struct Factorials {
    table: Vec<ExactInteger>,
}

impl Factorials {
    pub fn up_to(bound: usize) -> Self {
        let mut table = Vec::with_capacity(bound + 1);
        table.push(BigInt::one());
        for i in 1..=bound {
            let next = &table[i - 1] * i;
            table.push(next);
        }
        Factorials { table }
    }

    pub fn bound(&self) -> usize {
        self.table.len() - 1
    }

    /// `i!`. Panics if `i` exceeds the bound the table was built for.
    pub fn get(&self, i: usize) -> &ExactInteger {
        assert!(
            i < self.table.len(),
            "factorial {i}! requested from a table bounded at {}",
            self.bound()
        );
        &self.table[i]
    }
}

pub fn factorial(i: usize) -> ExactInteger {
    (1..=i).fold(BigInt::one(), |acc, f| acc * f)
}
