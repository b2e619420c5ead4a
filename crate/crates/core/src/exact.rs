//! Closed-form and inclusion-exclusion counts.
//!
//! Everything here is exact integer or rational arithmetic. The alternating
//! sums cancel catastrophically in floating point, so no float ever enters.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::combinat::{binomial, Factorials};
use crate::table::{CountTable, TableKind};
use crate::{Error, ExactInteger, ExactRational, Result};

/// Counting routes for a fixed chord size, sharing one factorial table.
#[derive(Debug, Clone)]
pub struct ExactCounts {
    k: usize,
    n_max: usize,
    fact: Factorials,
}

impl ExactCounts {
    /// Supports every query with `n <= n_max`.
    pub fn new(k: usize, n_max: usize) -> Self {
        assert!(k >= 2, "chord size k must be at least 2");
        ExactCounts {
            k,
            n_max,
            fact: Factorials::up_to((k * n_max + 1).max(k)),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    fn k_fact_pow(&self, e: usize) -> ExactInteger {
        num_traits::pow(self.fact.get(self.k).clone(), e)
    }

    /// `N(k, n) = (kn)! / ((k!)^n n!)`.
    pub fn total_diagrams(&self, n: usize) -> ExactInteger {
        self.fact.get(self.k * n) / (self.k_fact_pow(n) * self.fact.get(n))
    }

    /// Ways to choose `j` pairwise disjoint `k`-vertex subpaths of a path
    /// on `path_len` vertices: `C(path_len - j(k-1), j)`.
    pub fn subpath_choices(&self, path_len: usize, j: usize) -> ExactInteger {
        subpath_choices(self.k, path_len, j)
    }

    /// Placements of `j` marked short chords with the other `n - j` chords
    /// arbitrary: `N(k, n-j) * C(kn - j(k-1), j)`.
    ///
    /// Each diagram with `q` short chords is counted `C(q, j)` times, so this
    /// is the binomial transform of `d(n, .)`, not a tail count.
    pub fn count_at_least(&self, n: usize, j: usize) -> ExactInteger {
        if j > n {
            return BigInt::zero();
        }
        self.total_diagrams(n - j) * self.subpath_choices(self.k * n, j)
    }

    /// `d(n, l)` from the alternating factorial sum
    /// `(1/l!) sum_{j=l}^{n} (k(n-j)+j)! (-1)^(j-l) / ((k!)^(n-j) (n-j)! (j-l)!)`.
    pub fn count_exact_short(&self, n: usize, l: usize) -> ExactInteger {
        if l > n {
            return BigInt::zero();
        }
        let k = self.k;
        // Scale by (n-l)! so every summand is an integer, divide at the end.
        let scale = self.fact.get(n - l);
        let mut acc = BigInt::zero();
        for j in l..=n {
            let head =
                self.fact.get(k * (n - j) + j) / (self.k_fact_pow(n - j) * self.fact.get(n - j));
            let term = head * (scale / self.fact.get(j - l));
            if (j - l).is_multiple_of(2) {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let denom = scale * self.fact.get(l);
        let (q, r) = acc.div_rem(&denom);
        debug_assert!(r.is_zero(), "alternating sum not divisible by (n-l)! l!");
        q
    }

    /// `d(n, 0)` by inclusion-exclusion over placed short chords:
    /// `sum_j (-1)^j N(k, n-j) rho_j`.
    pub fn count_zero_short(&self, n: usize) -> ExactInteger {
        let mut acc = BigInt::zero();
        for j in 0..=n {
            let term = self.total_diagrams(n - j) * self.subpath_choices(self.k * n, j);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    /// `c(n, q)` by expanding the component generating function in powers of
    /// `(z - 1)`:
    /// `B_l = sum_r (-1)^r N(k, n-l-r) C(k(n-l-r)+1, l-r) C(k(n-l-r)+r, r)`,
    /// `c(n, q) = sum_l (-1)^(l-q) C(l, q) B_l`.
    pub fn count_exact_components(&self, n: usize, q: usize) -> ExactInteger {
        if q > n {
            return BigInt::zero();
        }
        let b = self.component_moments(n);
        alternating_binomial_sum(&b, q)
    }

    /// Row `c(n, 0..=n)`, sharing the `B_l` sums across columns.
    pub fn component_row(&self, n: usize) -> Vec<ExactInteger> {
        let b = self.component_moments(n);
        (0..=n).map(|q| alternating_binomial_sum(&b, q)).collect()
    }

    fn component_moments(&self, n: usize) -> Vec<ExactInteger> {
        let k = self.k;
        let totals: Vec<BigInt> = (0..=n).map(|j| self.total_diagrams(j)).collect();
        (0..=n)
            .map(|l| {
                let mut b = BigInt::zero();
                for r in 0..=l.min(n - l) {
                    let j = n - l - r;
                    let term = &totals[j] * binomial(k * j + 1, l - r) * binomial(k * j + r, r);
                    if r % 2 == 0 {
                        b += term;
                    } else {
                        b -= term;
                    }
                }
                b
            })
            .collect()
    }

    /// `C(kn, k)^{-1} n (kn - (k-1))`.
    pub fn mean_short_chords(&self, n: usize) -> Result<ExactRational> {
        mean_from_parts(self.k, n)
    }

    pub fn short_table(&self) -> CountTable {
        let rows = (0..=self.n_max)
            .map(|n| (0..=n).map(|l| self.count_exact_short(n, l)).collect())
            .collect();
        CountTable::from_rows(self.k, TableKind::ShortChords, rows)
    }

    pub fn component_table(&self) -> CountTable {
        let rows = (0..=self.n_max).map(|n| self.component_row(n)).collect();
        CountTable::from_rows(self.k, TableKind::Components, rows)
    }
}

/// `sum_{l >= q} (-1)^(l-q) C(l, q) b[l]`.
fn alternating_binomial_sum(b: &[ExactInteger], q: usize) -> ExactInteger {
    let mut acc = BigInt::zero();
    for (l, bl) in b.iter().enumerate().skip(q) {
        let term = binomial(l, q) * bl;
        if (l - q).is_multiple_of(2) {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

fn mean_from_parts(k: usize, n: usize) -> Result<ExactRational> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "mean number of short chords needs n >= 1".into(),
        ));
    }
    let numer = BigInt::from(n) * BigInt::from(k * n - (k - 1));
    Ok(ExactRational::new(numer, binomial(k * n, k)))
}

pub fn total_diagrams(k: usize, n: usize) -> ExactInteger {
    ExactCounts::new(k, n).total_diagrams(n)
}

pub fn subpath_choices(k: usize, path_len: usize, j: usize) -> ExactInteger {
    if j == 0 {
        return BigInt::one();
    }
    match path_len.checked_sub(j * (k - 1)) {
        Some(top) => binomial(top, j),
        None => BigInt::zero(),
    }
}

pub fn count_at_least(k: usize, n: usize, j: usize) -> ExactInteger {
    ExactCounts::new(k, n).count_at_least(n, j)
}

pub fn count_exact_short(k: usize, n: usize, l: usize) -> ExactInteger {
    ExactCounts::new(k, n).count_exact_short(n, l)
}

pub fn count_zero_short(k: usize, n: usize) -> ExactInteger {
    ExactCounts::new(k, n).count_zero_short(n)
}

pub fn count_exact_components(k: usize, n: usize, q: usize) -> ExactInteger {
    ExactCounts::new(k, n).count_exact_components(n, q)
}

pub fn mean_short_chords(k: usize, n: usize) -> Result<ExactRational> {
    mean_from_parts(k, n)
}

/// `sum_l l * row[l] / sum_l row[l]`.
pub fn histogram_mean(row: &[ExactInteger]) -> ExactRational {
    let total: BigInt = row.iter().sum();
    let weighted: BigInt = row
        .iter()
        .enumerate()
        .map(|(l, c)| c * BigInt::from(l))
        .sum();
    ExactRational::new(weighted, total)
}

/// Guards the sign of counts that went through alternating sums.
pub fn is_count(x: &ExactInteger) -> bool {
    !x.is_negative()
}
