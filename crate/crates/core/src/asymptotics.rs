//! Poisson and normal limit parameters, factorial moments of exact rows,
//! and convergence reports.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::combinat::factorial;
use crate::exact::{histogram_mean, ExactCounts};
use crate::interval::{exp_neg, Interval};
use crate::recurrence::{d_table_kp2, noncrossing_table};
use crate::{Error, ExactInteger, ExactRational, Result};

/// Binary precision of the Poisson mass enclosures.
const PRECISION_BITS: usize = 192;

fn rat(n: impl Into<BigInt>, d: impl Into<BigInt>) -> ExactRational {
    ExactRational::new(n.into(), d.into())
}

fn rat_pow(x: &ExactRational, e: usize) -> ExactRational {
    num_traits::pow(x.clone(), e)
}

/// `k! k^(1-k) n^(2-k)`.
pub fn poisson_lambda(k: usize, n: usize) -> Result<ExactRational> {
    if k < 2 || n < 1 {
        return Err(Error::InvalidParameter(format!(
            "poisson_lambda needs k >= 2 and n >= 1, got k = {k}, n = {n}"
        )));
    }
    let numer = factorial(k) * BigInt::from(n).pow(2);
    let denom = BigInt::from(k).pow((k - 1) as u32) * BigInt::from(n).pow(k as u32);
    Ok(ExactRational::new(numer, denom))
}

/// `E[X(X-1)...(X-j+1)]` under the distribution proportional to `row`.
pub fn factorial_moment(row: &[ExactInteger], j: usize) -> Result<ExactRational> {
    let total: BigInt = row.iter().sum();
    if !total.is_positive() {
        return Err(Error::InvalidParameter("row sum must be positive".into()));
    }
    let weighted: BigInt = row
        .iter()
        .enumerate()
        .filter(|(l, _)| *l >= j)
        .map(|(l, c)| {
            let falling: BigInt = (0..j).map(|i| BigInt::from(l - i)).product();
            falling * c
        })
        .sum();
    Ok(ExactRational::new(weighted, total))
}

/// Enclosure of the total-variation distance between `row / sum(row)` and
/// Poisson(`lambda`).
///
/// Values beyond the row's support contribute the Poisson tail
/// `1 - sum_{l < len} pi_l`, which is enclosed rather than truncated.
pub fn total_variation_to_poisson(row: &[ExactInteger], lambda: &ExactRational) -> Interval {
    let total: BigInt = row.iter().sum();
    let base = exp_neg(lambda, PRECISION_BITS);
    let mut mass = Interval::zero();
    let mut diff = Interval::zero();
    let mut lambda_pow_over_fact = ExactRational::one();
    for (l, count) in row.iter().enumerate() {
        if l > 0 {
            lambda_pow_over_fact =
                lambda_pow_over_fact * lambda / ExactRational::from_integer(BigInt::from(l));
        }
        let pi = base
            .scale(&lambda_pow_over_fact)
            .round_outward(PRECISION_BITS);
        let p = Interval::point(ExactRational::new(count.clone(), total.clone()));
        diff = diff.add(&p.sub(&pi).abs()).round_outward(PRECISION_BITS);
        mass = mass.add(&pi);
    }
    let tail = Interval::point(ExactRational::one()).sub(&mass);
    diff.add(&tail)
        .scale(&rat(1, 2))
        .round_outward(PRECISION_BITS)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportKind {
    /// `d(n, .)` against Poisson(lambda).
    ShortChords,
    /// `c(n, .)` against Poisson(lambda).
    Components,
    /// Mean of `T(n, .)` per chord against `((k-1)/k)^(k-1)`.
    NoncrossingMean,
}

impl ReportKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ReportKind::ShortChords => "short",
            ReportKind::Components => "components",
            ReportKind::NoncrossingMean => "nc-mean",
        }
    }
}

/// Convergence data along a sequence of `n`.
#[derive(Debug, Clone)]
pub struct AsymptoticReport {
    pub k: usize,
    pub kind: ReportKind,
    pub n: Vec<usize>,
    /// Exact finite-`n` statistic: the row mean (per chord for `NoncrossingMean`).
    pub exact: Vec<ExactRational>,
    /// Limit parameter at each `n`.
    pub limit: Vec<ExactRational>,
    /// Distance from the limit, as an enclosure.
    pub errors: Vec<Interval>,
    /// Every error enclosure lies strictly below the previous one.
    pub monotone: bool,
}

impl AsymptoticReport {
    fn finish(
        k: usize,
        kind: ReportKind,
        n: Vec<usize>,
        exact: Vec<ExactRational>,
        limit: Vec<ExactRational>,
        errors: Vec<Interval>,
    ) -> Self {
        let monotone = errors.windows(2).all(|w| w[1].strictly_below(&w[0]));
        AsymptoticReport {
            k,
            kind,
            n,
            exact,
            limit,
            errors,
            monotone,
        }
    }

    pub fn to_json(&self) -> ReportJson {
        ReportJson {
            k: self.k,
            kind: self.kind.as_str(),
            n: self.n.clone(),
            exact: self.exact.iter().map(ToString::to_string).collect(),
            limit: self.limit.iter().map(ToString::to_string).collect(),
            errors: self
                .errors
                .iter()
                .map(|e| format!("{:.12e}", e.hi_f64()))
                .collect(),
            monotone: self.monotone,
        }
    }

    /// CSV mirror: `n,exact,limit,abs_error`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,exact,limit,abs_error\n");
        for i in 0..self.n.len() {
            out.push_str(&format!(
                "{},{},{},{:.12e}\n",
                self.n[i],
                self.exact[i],
                self.limit[i],
                self.errors[i].hi_f64()
            ));
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportJson {
    pub k: usize,
    pub kind: &'static str,
    pub n: Vec<usize>,
    pub exact: Vec<String>,
    pub limit: Vec<String>,
    pub errors: Vec<String>,
    pub monotone: bool,
}

/// Total-variation distance of the short-chord or component distribution
/// from Poisson(`lambda(k, n)`) along `n_list`, rows from recurrences and the
/// component expansion rather than enumeration.
pub fn poisson_convergence_report(
    k: usize,
    kind: ReportKind,
    n_list: &[usize],
) -> Result<AsymptoticReport> {
    let n_max = n_list.iter().copied().max().unwrap_or(0);
    let rows: Vec<Vec<ExactInteger>> = match kind {
        ReportKind::ShortChords => {
            let table = d_table_kp2(k, n_max);
            n_list.iter().map(|&n| table.row(n).to_vec()).collect()
        }
        ReportKind::Components => {
            let counts = ExactCounts::new(k, n_max);
            n_list.iter().map(|&n| counts.component_row(n)).collect()
        }
        ReportKind::NoncrossingMean => {
            return Err(Error::InvalidParameter(
                "use noncrossing_mean_report for nc-mean".into(),
            ))
        }
    };
    let mut exact = Vec::new();
    let mut limit = Vec::new();
    let mut errors = Vec::new();
    for (&n, row) in n_list.iter().zip(&rows) {
        let lambda = poisson_lambda(k, n)?;
        errors.push(total_variation_to_poisson(row, &lambda));
        exact.push(factorial_moment(row, 1)?);
        limit.push(lambda);
    }
    Ok(AsymptoticReport::finish(
        k,
        kind,
        n_list.to_vec(),
        exact,
        limit,
        errors,
    ))
}

/// `|mean(T(n, .)) / n - ((k-1)/k)^(k-1)|` along `n_list`.
pub fn noncrossing_mean_report(k: usize, n_list: &[usize]) -> Result<AsymptoticReport> {
    if n_list.contains(&0) {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let n_max = n_list.iter().copied().max().unwrap_or(0);
    let table = noncrossing_table(k, n_max);
    let target = mean_coefficient(k);
    let mut exact = Vec::new();
    let mut errors = Vec::new();
    for &n in n_list {
        let per_chord = histogram_mean(table.row(n)) / ExactRational::from_integer(BigInt::from(n));
        errors.push(Interval::point((&per_chord - &target).abs()));
        exact.push(per_chord);
    }
    let limit = vec![target; n_list.len()];
    Ok(AsymptoticReport::finish(
        k,
        ReportKind::NoncrossingMean,
        n_list.to_vec(),
        exact,
        limit,
        errors,
    ))
}

/// `((k-1)/k)^(k-1)`, the mean number of short chords per chord.
pub fn mean_coefficient(k: usize) -> ExactRational {
    rat_pow(&rat(k - 1, k), k - 1)
}

/// `((k-1)/k)^(2k) k/(k-1)^2 (1 - 2k + (k-1)(k/(k-1))^k)`.
pub fn variance_coefficient(k: usize) -> ExactRational {
    let ratio = rat(k - 1, k);
    let inner = rat(1, 1) - rat(2 * k, 1) + rat(k - 1, 1) * rat_pow(&ratio.recip(), k);
    rat_pow(&ratio, 2 * k) * rat(k, (k - 1) * (k - 1)) * inner
}

/// Mean and variance of the short-chord count among non-crossing diagrams
/// with `n` chords.
pub fn nc_mean_variance(k: usize, n: usize) -> (ExactRational, ExactRational) {
    let n = rat(n, 1);
    (mean_coefficient(k) * &n, variance_coefficient(k) * n)
}

/// Truncated Taylor expansion `c0 + c1 s + c2 s^2` in `s = y - 1`.
type Jet = [ExactRational; 3];

fn jet_const(c: ExactRational) -> Jet {
    [c, ExactRational::zero(), ExactRational::zero()]
}

fn jet_add(a: &Jet, b: &Jet) -> Jet {
    [&a[0] + &b[0], &a[1] + &b[1], &a[2] + &b[2]]
}

fn jet_sub(a: &Jet, b: &Jet) -> Jet {
    [&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2]]
}

fn jet_mul(a: &Jet, b: &Jet) -> Jet {
    [
        &a[0] * &b[0],
        &a[0] * &b[1] + &a[1] * &b[0],
        &a[0] * &b[2] + &a[1] * &b[1] + &a[2] * &b[0],
    ]
}

fn jet_pow(a: &Jet, e: usize) -> Jet {
    (0..e).fold(jet_const(ExactRational::one()), |acc, _| jet_mul(&acc, a))
}

fn jet_recip(a: &Jet) -> Jet {
    let r0 = a[0].recip();
    let r1 = -(&a[1] * &r0 * &r0);
    let r2 = -((&a[1] * &r1 + &a[2] * &r0) * &r0);
    [r0, r1, r2]
}

fn jet_scale(a: &Jet, c: &ExactRational) -> Jet {
    [&a[0] * c, &a[1] * c, &a[2] * c]
}

/// `phi(u) = (1+u)^k - (1-y)(1+u)` and `phi'(u) = k(1+u)^(k-1) - (1-y)`.
fn phi(k: usize, u: &Jet) -> (Jet, Jet) {
    // 1 - y = -s
    let one_minus_y: Jet = [
        ExactRational::zero(),
        -ExactRational::one(),
        ExactRational::zero(),
    ];
    let one_plus_u = jet_add(&jet_const(ExactRational::one()), u);
    let value = jet_sub(
        &jet_pow(&one_plus_u, k),
        &jet_mul(&one_minus_y, &one_plus_u),
    );
    let slope = jet_sub(
        &jet_scale(&jet_pow(&one_plus_u, k - 1), &rat(k, 1)),
        &one_minus_y,
    );
    (value, slope)
}

/// `phi(tau) - tau phi'(tau)`.
fn characteristic(k: usize, tau: &Jet) -> Jet {
    let (value, slope) = phi(k, tau);
    jet_sub(&value, &jet_mul(tau, &slope))
}

/// Second-order expansions of `tau(y)` and `rho(y) = tau / phi(tau)` about
/// `y = 1`, where `tau` solves `phi(tau) - tau phi'(tau) = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacteristicExpansion {
    pub k: usize,
    /// Taylor coefficients `tau(1), tau'(1), tau''(1)/2`.
    pub tau: [ExactRational; 3],
    /// Taylor coefficients `rho(1), rho'(1), rho''(1)/2`.
    pub rho: [ExactRational; 3],
}

impl CharacteristicExpansion {
    /// `-rho'(1) / rho(1)`.
    pub fn mean_coefficient(&self) -> ExactRational {
        -(&self.rho[1] / &self.rho[0])
    }

    /// `-rho''(1)/rho(1) - rho'(1)/rho(1) + (rho'(1)/rho(1))^2`.
    pub fn variance_coefficient(&self) -> ExactRational {
        let first = &self.rho[1] / &self.rho[0];
        let second = rat(2, 1) * &self.rho[2] / &self.rho[0];
        -second - &first + &first * &first
    }
}

/// Solves the characteristic equation order by order in `s = y - 1`.
///
/// At `s = 0` it factors as `(1+tau)^(k-1) (1 - (k-1) tau)`, whose positive
/// root is `1/(k-1)`. Each higher coefficient enters its own order linearly,
/// so it is read off from two trial evaluations.
pub fn characteristic_expansion(k: usize) -> Result<CharacteristicExpansion> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("chord size k = {k} < 2")));
    }
    let mut tau: Jet = jet_const(rat(1, k - 1));
    debug_assert!(characteristic(k, &tau)[0].is_zero());
    for order in 1..=2 {
        let base = characteristic(k, &tau)[order].clone();
        let mut trial = tau.clone();
        trial[order] = ExactRational::one();
        let slope = characteristic(k, &trial)[order].clone() - &base;
        tau[order] = -(base / slope);
    }
    debug_assert!(characteristic(k, &tau).iter().all(Zero::is_zero));
    let (value, _) = phi(k, &tau);
    let rho = jet_mul(&tau, &jet_recip(&value));
    Ok(CharacteristicExpansion { k, tau, rho })
}

/// `(mu / n, sigma^2 / n)` as floats, for the large-`k` trend.
pub fn coefficients_f64(k: usize) -> (f64, f64) {
    (
        mean_coefficient(k).to_f64().unwrap_or(f64::NAN),
        variance_coefficient(k).to_f64().unwrap_or(f64::NAN),
    )
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn lambda_values() {
        for n in 1..20 {
            assert!(poisson_lambda(2, n).unwrap().is_one());
            assert_eq!(poisson_lambda(3, n).unwrap(), rat(2, 3 * n));
        }
        assert_eq!(poisson_lambda(4, 2).unwrap(), rat(3, 32));
        assert!(poisson_lambda(3, 0).is_err());
    }

    #[test]
    fn factorial_moments_of_a_known_row() {
        let row = [7u64, 2, 1].map(big);
        assert_eq!(factorial_moment(&row, 1).unwrap(), rat(2, 5));
        assert!(factorial_moment(&row, 0).unwrap().is_one());
        assert_eq!(factorial_moment(&row, 2).unwrap(), rat(2, 10));
        assert_eq!(factorial_moment(&row, 3).unwrap(), rat(0, 1));
        assert!(factorial_moment(&[BigInt::zero()], 1).is_err());
    }

    #[test]
    fn closed_form_parameters() {
        assert_eq!(nc_mean_variance(2, 8), (rat(4, 1), rat(1, 1)));
        assert_eq!(nc_mean_variance(3, 9).0, rat(4, 1));
    }

    #[test]
    fn characteristic_expansion_small_k() {
        let e3 = characteristic_expansion(3).unwrap();
        assert_eq!(e3.tau[0], rat(1, 2));
        assert_eq!(e3.tau[1], rat(2, 9));
        let e2 = characteristic_expansion(2).unwrap();
        assert_eq!(e2.rho[0], rat(1, 4));
        assert_eq!(e2.mean_coefficient(), rat(1, 2));
        assert_eq!(e2.variance_coefficient(), rat(1, 8));
        for k in 2..=10 {
            let e = characteristic_expansion(k).unwrap();
            assert_eq!(e.tau[0], rat(1, k - 1));
            assert_eq!(
                e.rho[0],
                ExactRational::new(
                    BigInt::from(k - 1).pow((k - 1) as u32),
                    BigInt::from(k).pow(k as u32)
                )
            );
            assert_eq!(e.mean_coefficient(), mean_coefficient(k));
            assert_eq!(e.variance_coefficient(), variance_coefficient(k));
        }
    }

    #[test]
    fn tv_of_exact_poisson_shape_is_small() {
        // Poisson(1) masses scaled to integers, distance only from rounding and tail
        let row: Vec<BigInt> = (0..30)
            .map(|l| BigInt::from(10u64).pow(40) / factorial(l))
            .collect();
        let tv = total_variation_to_poisson(&row, &rat(1, 1));
        assert!(tv.hi_f64() < 1e-30);
        assert!(!tv.lo.is_negative());
    }
}
