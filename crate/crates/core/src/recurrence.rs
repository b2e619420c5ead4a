//! Row-by-row triangles from recurrences, independent of the closed forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::combinat::{binomial, binomial_signed};
use crate::exact::ExactCounts;
use crate::table::{CountTable, TableKind};
use crate::ExactInteger;

/// Short-chord triangle from
/// `l d(n,l) = (kn - l(k-1)) d(n-1,l-1) + l(k-1) d(n-1,l)`.
///
/// The recurrence is vacuous at `l = 0`, so that column comes from the
/// inclusion-exclusion count of diagrams without short chords.
pub fn d_table_kp1(k: usize, n_max: usize) -> CountTable {
    let zero_col = ExactCounts::new(k, n_max);
    let mut table = CountTable::new(k, TableKind::ShortChords);
    table.push_row(vec![BigInt::one()]);
    for n in 1..=n_max {
        let mut row = Vec::with_capacity(n + 1);
        row.push(zero_col.count_zero_short(n));
        for l in 1..=n {
            let grow = BigInt::from(k * n - l * (k - 1)) * table.get(n - 1, l - 1);
            let keep = BigInt::from(l * (k - 1)) * table.get(n - 1, l);
            let (q, r) = (grow + keep).div_rem(&BigInt::from(l));
            debug_assert!(r.is_zero());
            row.push(q);
        }
        table.push_row(row);
    }
    table
}

/// `[x^j] ((1-x)^(1-k) - 1)^p`: ways to put `j` identical balls into `p`
/// bins of `k-1` sub-bins each, no bin empty.
fn filled_bins(j: usize, p: usize, k: usize) -> ExactInteger {
    // one bin: [x^i] = C(i+k-2, k-2) for i >= 1
    let one_bin: Vec<BigInt> = (0..=j)
        .map(|i| {
            if i == 0 {
                BigInt::zero()
            } else {
                binomial(i + k - 2, k - 2)
            }
        })
        .collect();
    let mut acc = vec![BigInt::zero(); j + 1];
    acc[0] = BigInt::one();
    for _ in 0..p {
        let mut next = vec![BigInt::zero(); j + 1];
        for (a, ca) in acc.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (b, cb) in one_bin.iter().enumerate().take(j + 1 - a) {
                next[a + b] += ca * cb;
            }
        }
        acc = next;
    }
    acc.swap_remove(j)
}

/// `[x^j y^p] (1 + y - y(1-x)^(1-k))^(-l-1)`: choose `p` of `l+p`
/// distinguishable bins, then fill each with at least one of `j` balls
/// spread over its `k-1` sub-bins.
pub fn balls_in_bins_coeff(j: usize, p: usize, l: usize, k: usize) -> ExactInteger {
    binomial(l + p, p) * filled_bins(j, p, k)
}

/// Coefficient of `d(n, l+p)` in the anchored-chord recurrence:
/// `sum_{h=1}^{k-p} sum_{f=0}^{k-p-h} C(kn-(k-1)(l+p)+f-1, f) * balls(k-h-f, p, l)`.
pub fn kp2_coefficient(n: usize, l: usize, p: usize, k: usize) -> ExactInteger {
    assert!(p >= 1 && p < k, "p must lie in 1..k");
    let forest = (k * n) as i64 - ((k - 1) * (l + p)) as i64;
    let mut acc = BigInt::zero();
    for h in 1..=k - p {
        for f in 0..=k - p - h {
            let placements = binomial_signed(forest + f as i64 - 1, f);
            if placements.is_zero() {
                continue;
            }
            acc += placements * balls_in_bins_coeff(k - h - f, p, l, k);
        }
    }
    acc
}

/// Short-chord triangle from the single seed `d(0,0) = 1` via
/// `d(n+1,l) = d(n,l-1) + d(n,l) sum_h C(kn-(k-1)l+k-h-1, k-h) + sum_p C_{n,l,p,k} d(n,l+p)`.
pub fn d_table_kp2(k: usize, n_max: usize) -> CountTable {
    // balls(j, p, l) = C(l+p, p) * fill[p][j]; fill does not depend on n or l
    let fill: Vec<Vec<BigInt>> = (0..k)
        .map(|p| (0..=k).map(|j| filled_bins(j, p, k)).collect())
        .collect();
    let coefficient = |n: usize, l: usize, p: usize| -> BigInt {
        let forest = (k * n) as i64 - ((k - 1) * (l + p)) as i64;
        let mut acc = BigInt::zero();
        for h in 1..=k - p {
            for f in 0..=k - p - h {
                let placements = binomial_signed(forest + f as i64 - 1, f);
                if placements.is_zero() {
                    continue;
                }
                acc += placements * &fill[p][k - h - f];
            }
        }
        acc * binomial(l + p, p)
    };

    let mut table = CountTable::new(k, TableKind::ShortChords);
    table.push_row(vec![BigInt::one()]);
    for n in 0..n_max {
        let mut row = Vec::with_capacity(n + 2);
        for l in 0..=n + 1 {
            let mut v = if l >= 1 {
                table.get(n, l - 1)
            } else {
                BigInt::zero()
            };
            if l <= n {
                let here = table.get(n, l);
                if !here.is_zero() {
                    let stay: BigInt = (1..k)
                        .map(|h| binomial(k * n - (k - 1) * l + k - h - 1, k - h))
                        .sum();
                    v += stay * here;
                }
            }
            for p in 1..k {
                if l + p > n {
                    break;
                }
                let broken = table.get(n, l + p);
                if !broken.is_zero() {
                    v += coefficient(n, l, p) * broken;
                }
            }
            row.push(v);
        }
        table.push_row(row);
    }
    table
}

/// Non-crossing triangle `T(m, l)` from
/// `T(m+1,l) = [x^m y^l] T^k - T(m,l) + T(m,l-1)`, `T(0,0) = 1`.
///
/// Row `m` of each power `T^i` only needs rows `0..=m` of `T`, so the powers
/// are extended one row at a time alongside the table.
pub fn noncrossing_table(k: usize, m_max: usize) -> CountTable {
    assert!(k >= 2, "chord size k must be at least 2");
    // powers[i - 1][m] = row m (a polynomial in y) of T^i
    let mut powers: Vec<Vec<Vec<BigInt>>> = vec![Vec::new(); k];
    let mut table = CountTable::new(k, TableKind::NoncrossingShort);
    table.push_row(vec![BigInt::one()]);
    for m in 0..=m_max {
        powers[0].push(table.row(m).to_vec());
        for i in 1..k {
            let mut row = vec![BigInt::zero(); m + 1];
            for a in 0..=m {
                let left = table.row(a);
                let right = &powers[i - 1][m - a];
                for (da, ca) in left.iter().enumerate() {
                    if ca.is_zero() {
                        continue;
                    }
                    for (db, cb) in right.iter().enumerate() {
                        if !cb.is_zero() {
                            row[da + db] += ca * cb;
                        }
                    }
                }
            }
            powers[i].push(row);
        }
        if m == m_max {
            break;
        }
        let conv = &powers[k - 1][m];
        let mut next = vec![BigInt::zero(); m + 2];
        for (l, v) in next.iter_mut().enumerate() {
            *v = conv.get(l).cloned().unwrap_or_default() - table.get(m, l);
            if l >= 1 {
                *v += table.get(m, l - 1);
            }
        }
        table.push_row(next);
    }
    table
}

/// `C(km, m) / ((k-1)m + 1)`.
pub fn fuss_catalan(k: usize, m: usize) -> ExactInteger {
    binomial(k * m, m) / BigInt::from((k - 1) * m + 1)
}

/// `C(n, l) C(n, l-1) / n`, zero outside `1 <= l <= n`.
pub fn narayana(n: usize, l: usize) -> ExactInteger {
    if n == 0 {
        return if l == 0 {
            BigInt::one()
        } else {
            BigInt::zero()
        };
    }
    if l == 0 || l > n {
        return BigInt::zero();
    }
    binomial(n, l) * binomial(n, l - 1) / BigInt::from(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::total_diagrams;

    fn big(v: u64) -> BigInt {
        BigInt::from(v)
    }

    /// Direct ball placement: assign `j` balls to `p` chosen bins, each bin
    /// non-empty, counting sub-bin fillings as weak compositions.
    fn brute_balls(j: usize, p: usize, l: usize, k: usize) -> u64 {
        fn compositions(balls: usize, parts: usize) -> u64 {
            if parts == 0 {
                return (balls == 0) as u64;
            }
            (0..=balls)
                .map(|b| compositions(balls - b, parts - 1))
                .sum()
        }
        fn fill(balls: usize, bins: usize, sub: usize) -> u64 {
            if bins == 0 {
                return (balls == 0) as u64;
            }
            (1..=balls)
                .map(|b| compositions(b, sub) * fill(balls - b, bins - 1, sub))
                .sum()
        }
        let choose: u64 = crate::combinat::binomial(l + p, p).try_into().unwrap();
        choose * fill(j, p, k - 1)
    }

    #[test]
    fn balls_in_bins_examples() {
        assert_eq!(balls_in_bins_coeff(1, 1, 0, 3), big(2));
        assert_eq!(balls_in_bins_coeff(0, 0, 4, 3), big(1));
        for l in 0..5 {
            for p in 0..5 {
                assert_eq!(balls_in_bins_coeff(p, p, l, 2), binomial(l + p, p));
            }
        }
        for k in 2..=5 {
            for j in 0..=k {
                for p in 0..k {
                    for l in 0..4 {
                        assert_eq!(
                            balls_in_bins_coeff(j, p, l, k),
                            big(brute_balls(j, p, l, k))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn kp2_coefficients_for_k3_and_k2() {
        for n in 1..8 {
            for l in 0..n {
                let expect = (l as i64 + 1) * (6 * n as i64 - 4 * l as i64 + 1);
                assert_eq!(kp2_coefficient(n, l, 1, 3), BigInt::from(expect));
                let expect2 = 2 * (l + 1) * (l + 2);
                assert_eq!(kp2_coefficient(n, l, 2, 3), big(expect2 as u64));
                assert_eq!(kp2_coefficient(n, l, 1, 2), big(l as u64 + 1));
            }
        }
        assert_eq!(kp2_coefficient(2, 0, 1, 3), big(13));
        assert_eq!(kp2_coefficient(2, 0, 2, 3), big(4));
    }

    #[test]
    fn kp1_reproduces_k3_rows() {
        let t = d_table_kp1(3, 6);
        assert_eq!(t.get(2, 1), big(2));
        assert_eq!(t.get(5, 4), big(30));
        assert_eq!(
            t.row(6),
            &[169509845u64, 19796274, 1228655, 53740, 1835, 50, 1].map(big)
        );
    }

    #[test]
    fn kp2_reproduces_k3_rows() {
        let t = d_table_kp2(3, 6);
        assert_eq!(t.row(3), &[219, 53, 7, 1].map(big));
        assert_eq!(t.get(6, 6), big(1));
        assert_eq!(t.row(5), &[1215794, 171785, 13080, 710, 30, 1].map(big));
        let t4 = d_table_kp2(4, 6);
        for n in 0..=6 {
            assert_eq!(t4.row_sum(n), total_diagrams(4, n));
        }
    }

    #[test]
    fn kp1_and_kp2_agree() {
        for k in 2..=5 {
            let a = d_table_kp1(k, 10);
            let b = d_table_kp2(k, 10);
            assert_eq!(a.first_mismatch(&b, 0, 10), None, "k={k}");
        }
    }

    #[test]
    fn noncrossing_rows() {
        let t = noncrossing_table(3, 7);
        assert_eq!(t.get(2, 1), big(2));
        assert_eq!(t.get(2, 2), big(1));
        assert_eq!(t.get(5, 3), big(122));
        assert_eq!(t.get(7, 4), big(2875));
        assert_eq!(t.row_sum(4), big(55));
        let n2 = noncrossing_table(2, 9);
        for m in 0..=9 {
            for l in 0..=m {
                assert_eq!(n2.get(m, l), narayana(m, l));
            }
        }
        assert_eq!(n2.trimmed_row(3), &[0, 1, 3, 1].map(big));
    }

    #[test]
    fn fuss_catalan_values() {
        assert_eq!(fuss_catalan(3, 4), big(55));
        assert_eq!(fuss_catalan(2, 3), big(5));
        assert_eq!(fuss_catalan(3, 0), big(1));
        let seq: Vec<BigInt> = (0..6).map(|m| fuss_catalan(3, m)).collect();
        assert_eq!(seq, [1, 1, 3, 12, 55, 273].map(big));
    }

    #[test]
    fn diagonal_and_first_column() {
        for k in 2..=5 {
            let t = noncrossing_table(k, 12);
            let d = d_table_kp2(k, 12);
            for m in 1..=12 {
                assert!(t.get(m, 0).is_zero());
                assert_eq!(t.get(m, m), big(1));
                assert_eq!(d.get(m, m), big(1));
            }
        }
    }
}
