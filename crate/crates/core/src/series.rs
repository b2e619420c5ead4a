//! Truncated bivariate formal power series over exact integers, and the
//! generating functions built from them.
//!
//! None of these series converge; they are only coefficient bookkeeping.
//! Every product drops terms beyond the truncation orders.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::combinat::binomial;
use crate::exact::{count_zero_short, ExactCounts};
use crate::table::{CountTable, TableKind, TripleTable};
use crate::{Error, ExactInteger, Result};

/// Dense `(order[0]+1) x (order[1]+1)` coefficient grid, row-major in the
/// first variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivariateSeries {
    order: [usize; 2],
    coeffs: Vec<ExactInteger>,
    var_names: [String; 2],
}

impl BivariateSeries {
    pub fn zero(order: [usize; 2], var_names: [&str; 2]) -> Self {
        BivariateSeries {
            order,
            coeffs: vec![BigInt::zero(); (order[0] + 1) * (order[1] + 1)],
            var_names: var_names.map(str::to_owned),
        }
    }

    pub fn one(order: [usize; 2], var_names: [&str; 2]) -> Self {
        Self::monomial(order, var_names, 0, 0, BigInt::one())
    }

    /// `c * a^i * b^j`, or zero if the monomial is beyond the orders.
    pub fn monomial(
        order: [usize; 2],
        var_names: [&str; 2],
        i: usize,
        j: usize,
        c: ExactInteger,
    ) -> Self {
        let mut s = Self::zero(order, var_names);
        if i <= order[0] && j <= order[1] {
            s.set(i, j, c);
        }
        s
    }

    pub fn order(&self) -> [usize; 2] {
        self.order
    }

    pub fn var_names(&self) -> [&str; 2] {
        [&self.var_names[0], &self.var_names[1]]
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        i * (self.order[1] + 1) + j
    }

    /// `[a^i b^j]`; zero beyond the orders.
    pub fn coeff(&self, i: usize, j: usize) -> ExactInteger {
        if i > self.order[0] || j > self.order[1] {
            return BigInt::zero();
        }
        self.coeffs[self.idx(i, j)].clone()
    }

    pub fn set(&mut self, i: usize, j: usize, c: ExactInteger) {
        let at = self.idx(i, j);
        self.coeffs[at] = c;
    }

    pub fn coeffs(&self) -> &[ExactInteger] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a -= b;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c = -std::mem::take(c);
        }
        out
    }

    pub fn scale(&self, c: &ExactInteger) -> Self {
        let mut out = self.clone();
        for x in &mut out.coeffs {
            *x *= c;
        }
        out
    }

    /// Multiplies by `a^i b^j`.
    pub fn shift(&self, i: usize, j: usize) -> Self {
        let mut out = Self::zero(self.order, self.var_names());
        for a in 0..=self.order[0].saturating_sub(i) {
            if a + i > self.order[0] {
                break;
            }
            for b in 0..=self.order[1] {
                if b + j > self.order[1] {
                    break;
                }
                let c = &self.coeffs[self.idx(a, b)];
                if !c.is_zero() {
                    out.set(a + i, b + j, c.clone());
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let [o1, o2] = self.order;
        let mut out = Self::zero(self.order, self.var_names());
        let rhs: Vec<(usize, usize, &BigInt)> = (0..=o1)
            .flat_map(|i| (0..=o2).map(move |j| (i, j)))
            .map(|(i, j)| (i, j, &other.coeffs[other.idx(i, j)]))
            .filter(|(_, _, c)| !c.is_zero())
            .collect();
        for i in 0..=o1 {
            for j in 0..=o2 {
                let a = &self.coeffs[self.idx(i, j)];
                if a.is_zero() {
                    continue;
                }
                for &(p, q, b) in &rhs {
                    if i + p <= o1 && j + q <= o2 {
                        let at = out.idx(i + p, j + q);
                        out.coeffs[at] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut e: usize) -> Self {
        let mut result = Self::one(self.order, self.var_names());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).expect("same orders");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same orders");
            }
        }
        result
    }

    /// `(1 + self)^(-r) = sum_i C(r+i-1, i) (-self)^i`; `self` must have a
    /// zero constant term so the sum is finite under truncation.
    pub fn neg_binomial_expand(&self, r: usize) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        if r == 0 {
            return Err(Error::InvalidParameter(
                "negative-binomial exponent must be >= 1".into(),
            ));
        }
        let minus = self.neg();
        let mut power = Self::one(self.order, self.var_names());
        let mut acc = power.clone();
        for i in 1.. {
            power = power.mul(&minus)?;
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power.scale(&binomial(r + i - 1, i)))?;
        }
        Ok(acc)
    }

    /// Column-major extraction `row n = [a^n b^0], [a^n b^1], ...` into a
    /// triangle, keeping `b`-degrees `0..=n`.
    pub fn to_table(&self, k: usize, kind: TableKind) -> CountTable {
        let rows = (0..=self.order[0])
            .map(|n| {
                (0..=n.min(self.order[1]))
                    .map(|j| self.coeff(n, j))
                    .collect()
            })
            .collect();
        CountTable::from_rows(k, kind, rows)
    }

    pub fn dump(&self, k: usize) -> SeriesDump {
        SeriesDump {
            k,
            var_names: self.var_names.clone(),
            order: self.order,
            coeffs: self.coeffs.iter().map(ToString::to_string).collect(),
        }
    }
}

/// JSON form of a series.
#[derive(Debug, Clone, Serialize)]
pub struct SeriesDump {
    pub k: usize,
    pub var_names: [String; 2],
    pub order: [usize; 2],
    pub coeffs: Vec<String>,
}

/// `L_k(x, y) = 1 / (1 - y(1 + x^k y^(k-1)))`; `[x^(kj) y^l]` counts
/// choices of `j` disjoint `k`-subpaths of an `l`-vertex path.
pub fn l_series(k: usize, order_x: usize, order_y: usize) -> BivariateSeries {
    let order = [order_x, order_y];
    let names = ["x", "y"];
    let y = BivariateSeries::monomial(order, names, 0, 1, BigInt::one());
    let inner = BivariateSeries::one(order, names)
        .add(&BivariateSeries::monomial(
            order,
            names,
            k,
            k - 1,
            BigInt::one(),
        ))
        .expect("same orders");
    let u = y.mul(&inner).expect("same orders").neg();
    u.neg_binomial_expand(1).expect("zero constant term")
}

/// `F_k(w, z) = sum_j N(k, j) w^j (1 + w(1-z))^(-(kj+1))`; `[w^n z^l] = d(n, l)`.
pub fn f_series(k: usize, n_max: usize) -> BivariateSeries {
    let order = [n_max, n_max];
    let names = ["w", "z"];
    let counts = ExactCounts::new(k, n_max);
    let w = BivariateSeries::monomial(order, names, 1, 0, BigInt::one());
    let wz = BivariateSeries::monomial(order, names, 1, 1, BigInt::one());
    let u = w.sub(&wz).expect("same orders");
    let mut acc = BivariateSeries::zero(order, names);
    for j in 0..=n_max {
        let expansion = u
            .neg_binomial_expand(k * j + 1)
            .expect("zero constant term");
        let term = expansion.shift(j, 0).scale(&counts.total_diagrams(j));
        acc = acc.add(&term).expect("same orders");
    }
    acc
}

/// `C_k(y, z) = sum_j N(k, j) y^j ((1 - y(1-z)) / (1 - y^2(1-z)))^(kj+1)`;
/// `[y^n z^q] = c(n, q)`.
pub fn c_series(k: usize, n_max: usize) -> BivariateSeries {
    let order = [n_max, n_max];
    let names = ["y", "z"];
    let counts = ExactCounts::new(k, n_max);
    let one = BivariateSeries::one(order, names);
    let mono = |i, j, c: i64| BivariateSeries::monomial(order, names, i, j, BigInt::from(c));
    // y(1-z) and y^2(1-z)
    let y1 = mono(1, 0, 1).sub(&mono(1, 1, 1)).expect("same orders");
    let y2 = mono(2, 0, 1).sub(&mono(2, 1, 1)).expect("same orders");
    let numer = one.sub(&y1).expect("same orders");
    let inv_denom = y2.neg().neg_binomial_expand(1).expect("zero constant term");
    let ratio = numer.mul(&inv_denom).expect("same orders");
    let ratio_k = ratio.pow(k);

    let mut acc = BivariateSeries::zero(order, names);
    let mut power = ratio.clone(); // ratio^(kj+1)
    for j in 0..=n_max {
        let term = power.shift(j, 0).scale(&counts.total_diagrams(j));
        acc = acc.add(&term).expect("same orders");
        power = power.mul(&ratio_k).expect("same orders");
    }
    acc
}

/// Fixpoint of `T = 1 + x T^k - x(1-y) T`; `[x^m y^l] = T(m, l)`.
///
/// Each pass fixes one more `x`-degree, so `order_x + 1` passes from `T = 1`
/// settle every kept coefficient.
pub fn t_series(k: usize, order_x: usize, order_y: usize) -> BivariateSeries {
    let order = [order_x, order_y];
    let names = ["x", "y"];
    let one = BivariateSeries::one(order, names);
    let x = BivariateSeries::monomial(order, names, 1, 0, BigInt::one());
    let xy = BivariateSeries::monomial(order, names, 1, 1, BigInt::one());
    let x_one_minus_y = x.sub(&xy).expect("same orders");
    let mut t = one.clone();
    for _ in 0..=order_x {
        let grow = t.pow(k).shift(1, 0);
        let damp = x_one_minus_y.mul(&t).expect("same orders");
        t = one
            .add(&grow)
            .and_then(|s| s.sub(&damp))
            .expect("same orders");
    }
    t
}

/// `1 + x T^k - x(1-y) T - T`, which vanishes up to the truncation orders
/// when `T` is the fixpoint.
pub fn t_residual(k: usize, t: &BivariateSeries) -> BivariateSeries {
    let order = t.order();
    let names = ["x", "y"];
    let one = BivariateSeries::one(order, names);
    let x = BivariateSeries::monomial(order, names, 1, 0, BigInt::one());
    let xy = BivariateSeries::monomial(order, names, 1, 1, BigInt::one());
    let damp = x.sub(&xy).and_then(|s| s.mul(t)).expect("same orders");
    one.add(&t.pow(k).shift(1, 0))
        .and_then(|s| s.sub(&damp))
        .and_then(|s| s.sub(t))
        .expect("same orders")
}

/// `d(n, l, m) = [x^m y^l] T^(kn-km+1) * d(n-m, 0)`.
pub fn triple_count(k: usize, n: usize, l: usize, m: usize) -> Result<ExactInteger> {
    if m > n {
        return Err(Error::InvalidParameter(format!(
            "non-crossing count m = {m} exceeds n = {n}"
        )));
    }
    if l > m {
        return Ok(BigInt::zero());
    }
    let t = t_series(k, m, m);
    let power = t.pow(k * (n - m) + 1);
    Ok(power.coeff(m, l) * count_zero_short(k, n - m))
}

/// Every `d(n, l, m)` for one `n`, sharing one `T` expansion.
pub fn triple_table(k: usize, n: usize) -> TripleTable {
    let t = t_series(k, n, n);
    let zero_short = ExactCounts::new(k, n);
    let mut out = TripleTable::zeros(k, n);
    for m in 0..=n {
        let d0 = zero_short.count_zero_short(n - m);
        if d0.is_zero() {
            continue;
        }
        let power = t.pow(k * (n - m) + 1);
        for l in 0..=m {
            out.set(l, m, power.coeff(m, l) * &d0);
        }
    }
    out
}

/// The `k = 2` closed form
/// `d(n,l,m) = (2n-2m+1)/m * C(m,l) C(2n-m,l-1) d(n-m,0)` for `m >= 1`,
/// with `d(n,0,0) = d(n,0)`.
pub fn triple_count_k2_closed_form(n: usize, l: usize, m: usize) -> ExactInteger {
    if m == 0 {
        return if l == 0 {
            count_zero_short(2, n)
        } else {
            BigInt::zero()
        };
    }
    if l == 0 || l > m || m > n {
        return BigInt::zero();
    }
    let numer = BigInt::from(2 * n - 2 * m + 1) * binomial(m, l) * binomial(2 * n - m, l - 1);
    numer / BigInt::from(m) * count_zero_short(2, n - m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn s(order: [usize; 2], terms: &[(usize, usize, i64)]) -> BivariateSeries {
        let mut out = BivariateSeries::zero(order, ["a", "b"]);
        for &(i, j, c) in terms {
            out.set(i, j, big(c));
        }
        out
    }

    #[test]
    fn ring_basics() {
        let o = [4, 4];
        let p = s(o, &[(0, 0, 1), (1, 0, 1)]);
        let m = s(o, &[(0, 0, 1), (1, 0, -1)]);
        assert_eq!(p.mul(&m).unwrap(), s(o, &[(0, 0, 1), (2, 0, -1)]));
        assert!(matches!(
            p.add(&s([3, 4], &[])),
            Err(Error::OrderMismatch { .. })
        ));
        assert_eq!(p.pow(0), BivariateSeries::one(o, ["a", "b"]));
        assert_eq!(p.pow(3).coeff(2, 0), big(3));
    }

    #[test]
    fn neg_binomial_of_single_variable() {
        let o = [6, 0];
        let w = s(o, &[(1, 0, 1)]);
        let e = w.neg_binomial_expand(2).unwrap();
        for j in 0..=6 {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            assert_eq!(e.coeff(j, 0), big(sign * (j as i64 + 1)));
        }
        assert!(matches!(
            s(o, &[(0, 0, 1)]).neg_binomial_expand(1),
            Err(Error::NonzeroConstantTerm)
        ));
    }

    #[test]
    fn l_series_counts_subpaths() {
        let l3 = l_series(3, 6, 8);
        assert_eq!(l3.coeff(3, 6), big(4));
        for len in 0..=8 {
            assert_eq!(l3.coeff(0, len), big(1));
        }
        let l2 = l_series(2, 4, 4);
        assert_eq!(l2.coeff(4, 4), big(1));
        for len in 0..=8 {
            for j in 0..=2 {
                assert_eq!(
                    l3.coeff(3 * j, len),
                    crate::exact::subpath_choices(3, len, j)
                );
            }
        }
    }

    #[test]
    fn f_series_k3() {
        let f = f_series(3, 6);
        assert_eq!(f.coeff(2, 0), big(7));
        assert_eq!(f.coeff(5, 2), big(13080));
        assert_eq!(f.coeff(0, 0), big(1));
    }

    #[test]
    fn c_series_k3() {
        let c = c_series(3, 6);
        assert_eq!(c.coeff(3, 2), big(5));
        assert_eq!(c.coeff(4, 1), big(2352));
        assert_eq!(c.coeff(1, 0), big(0));
        assert_eq!(c.coeff(6, 4), big(334));
    }

    #[test]
    fn t_series_k3() {
        let t = t_series(3, 7, 7);
        assert_eq!(t.coeff(4, 2), big(30));
        assert_eq!(t.coeff(0, 0), big(1));
        let row3: BigInt = (0..=3).map(|l| t.coeff(3, l)).sum();
        assert_eq!(row3, big(12));
        assert!(t_residual(3, &t).is_zero());
    }

    #[test]
    fn triple_count_checks() {
        assert!(triple_count(3, 2, 0, 3).is_err());
        let nc = crate::recurrence::noncrossing_table(3, 5);
        for n in 0..=5 {
            for l in 0..=n {
                assert_eq!(triple_count(3, n, l, n).unwrap(), nc.get(n, l));
            }
        }
        for n in 1..=6 {
            let t = triple_table(2, n);
            for m in 0..=n {
                for l in 0..=m {
                    assert_eq!(
                        t.get(l, m),
                        &triple_count_k2_closed_form(n, l, m),
                        "n={n} l={l} m={m}"
                    );
                }
            }
        }
        assert_eq!(triple_count_k2_closed_form(3, 1, 1), big(5));
    }
}
