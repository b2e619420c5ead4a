use std::fmt;

use num_bigint::BigInt;

use super::config::{compute_table, Route, Stat};
use crate::diagram::{oracle_count_table, oracle_tables};
use crate::exact::total_diagrams;
use crate::recurrence::{fuss_catalan, narayana};
use crate::series::{triple_count_k2_closed_form, triple_table};
use crate::table::{CountTable, TableKind, TripleTable};
use crate::{ExactInteger, Result};

/// First disagreement found, with full coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub stat: String,
    pub k: usize,
    pub n: usize,
    /// `l=2`, `q=1`, `l=1 m=3` or `sum`.
    pub at: String,
    pub route_a: String,
    pub route_b: String,
    pub value_a: ExactInteger,
    pub value_b: ExactInteger,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "mismatch: stat={} k={} n={} {} route_a={} route_b={} value_a={} value_b={}",
            self.stat,
            self.k,
            self.n,
            self.at,
            self.route_a,
            self.route_b,
            self.value_a,
            self.value_b
        )
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub lines: Vec<String>,
    pub oracle_ran: bool,
    pub mismatch: Option<Mismatch>,
}

impl VerifyReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        match &self.mismatch {
            Some(m) => out.push_str(&format!("{m}\n")),
            None => out.push_str("all agree\n"),
        }
        out
    }
}

fn value_name(kind: TableKind) -> &'static str {
    match kind {
        TableKind::Components => "q",
        _ => "l",
    }
}

struct Checker {
    k: usize,
    n_max: usize,
    report: VerifyReport,
}

impl Checker {
    fn failed(&self) -> bool {
        self.report.mismatch.is_some()
    }

    fn tables(&mut self, a: &CountTable, route_a: &str, b: &CountTable, route_b: &str) {
        if self.failed() {
            return;
        }
        match a.first_mismatch(b, 0, self.n_max) {
            None => self.report.lines.push(format!(
                "ok {} {route_a} = {route_b} for n <= {}",
                a.kind, self.n_max
            )),
            Some((n, v, x, y)) => {
                self.report.mismatch = Some(Mismatch {
                    stat: a.kind.to_string(),
                    k: self.k,
                    n,
                    at: format!("{}={v}", value_name(a.kind)),
                    route_a: route_a.into(),
                    route_b: route_b.into(),
                    value_a: x,
                    value_b: y,
                })
            }
        }
    }

    fn value(
        &mut self,
        stat: &str,
        n: usize,
        at: String,
        (route_a, a): (&str, ExactInteger),
        (route_b, b): (&str, ExactInteger),
    ) {
        if self.failed() || a == b {
            return;
        }
        self.report.mismatch = Some(Mismatch {
            stat: stat.into(),
            k: self.k,
            n,
            at,
            route_a: route_a.into(),
            route_b: route_b.into(),
            value_a: a,
            value_b: b,
        });
    }

    fn triples(
        &mut self,
        n: usize,
        a: &TripleTable,
        route_a: &str,
        b: &TripleTable,
        route_b: &str,
    ) {
        for m in 0..=n {
            for l in 0..=n {
                self.value(
                    "triple",
                    n,
                    format!("l={l} m={m}"),
                    (route_a, a.get(l, m).clone()),
                    (route_b, b.get(l, m).clone()),
                );
            }
        }
    }
}

/// Runs every applicable route, and the enumeration oracle when
/// `N(k, n_max)` fits in `budget`, stopping at the first disagreement.
pub fn verify(k: usize, n_max: usize, budget: u64) -> Result<VerifyReport> {
    let mut c = Checker {
        k,
        n_max,
        report: VerifyReport::default(),
    };
    let mut tables = Vec::new();
    for stat in [Stat::Short, Stat::Components, Stat::NcShort] {
        let analytic: Vec<(Route, CountTable)> = stat
            .routes()
            .iter()
            .filter(|&&r| r != Route::Oracle)
            .map(|&r| compute_table(k, stat, n_max, r, budget).map(|t| (r, t)))
            .collect::<Result<_>>()?;
        let (ref_route, reference) = &analytic[0];
        for (route, t) in &analytic[1..] {
            c.tables(reference, ref_route.as_str(), t, route.as_str());
        }
        tables.push(reference.clone());
    }
    let (short, components, nc) = (&tables[0], &tables[1], &tables[2]);

    for m in 0..=n_max {
        c.value(
            "nc-short",
            m,
            "sum".into(),
            ("recurrence", nc.row_sum(m)),
            ("fuss-catalan", fuss_catalan(k, m)),
        );
        if k == 2 {
            for l in 0..=m {
                c.value(
                    "nc-short",
                    m,
                    format!("l={l}"),
                    ("recurrence", nc.get(m, l)),
                    ("narayana", narayana(m, l)),
                );
            }
        }
    }
    if !c.failed() {
        c.report.lines.push(format!(
            "ok nc-short row sums = fuss-catalan for m <= {n_max}"
        ));
        if k == 2 {
            c.report.lines.push(format!(
                "ok nc-short recurrence = narayana for m <= {n_max}"
            ));
        }
    }

    let mut triples = Vec::new();
    for n in 0..=n_max {
        let t = triple_table(k, n);
        for l in 0..=n {
            c.value(
                "triple",
                n,
                format!("l={l} m=*"),
                ("series", t.short_marginal(l)),
                ("closed-form", short.get(n, l)),
            );
            c.value(
                "triple",
                n,
                format!("l={l} m={n}"),
                ("series", t.get(l, n).clone()),
                ("recurrence", nc.get(n, l)),
            );
            if k == 2 {
                for m in 0..=n {
                    let closed = triple_count_k2_closed_form(n, l, m);
                    c.value(
                        "triple",
                        n,
                        format!("l={l} m={m}"),
                        ("series", t.get(l, m).clone()),
                        ("k2-closed-form", closed),
                    );
                }
            }
        }
        triples.push(t);
    }
    if !c.failed() {
        c.report.lines.push(format!(
            "ok triple marginals = short and nc-short for n <= {n_max}"
        ));
        if k == 2 {
            c.report.lines.push(format!(
                "ok triple series = k2-closed-form for n <= {n_max}"
            ));
        }
    }

    let required = total_diagrams(k, n_max);
    if c.failed() {
        return Ok(c.report);
    }
    if required > BigInt::from(budget) {
        c.report.lines.push(format!(
            "oracle skipped: N({k}, {n_max}) = {required} exceeds budget {budget}"
        ));
        return Ok(c.report);
    }
    let hists = oracle_tables(k, n_max);
    c.report.oracle_ran = true;
    c.tables(
        short,
        "closed-form",
        &oracle_count_table(&hists, TableKind::ShortChords),
        "oracle",
    );
    c.tables(
        components,
        "closed-form",
        &oracle_count_table(&hists, TableKind::Components),
        "oracle",
    );
    c.tables(
        nc,
        "recurrence",
        &oracle_count_table(&hists, TableKind::NoncrossingShort),
        "oracle",
    );
    for (n, h) in hists.iter().enumerate() {
        c.triples(n, &triples[n], "series", &h.triple_table(), "oracle");
    }
    if !c.failed() {
        c.report
            .lines
            .push(format!("ok triple series = oracle for n <= {n_max}"));
    }
    Ok(c.report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases_agree() {
        for (k, n) in [(2, 5), (3, 3), (4, 2)] {
            let r = verify(k, n, 10_000_000).unwrap();
            assert!(r.mismatch.is_none(), "{}", r.to_text());
            assert!(r.oracle_ran);
            assert!(r.to_text().ends_with("all agree\n"));
        }
    }

    #[test]
    fn oracle_is_skipped_over_budget() {
        let r = verify(3, 4, 100).unwrap();
        assert!(r.mismatch.is_none());
        assert!(!r.oracle_ran);
        assert!(r.to_text().contains("oracle skipped"));
    }

    #[test]
    fn mismatch_line_names_every_coordinate() {
        let m = Mismatch {
            stat: "short".into(),
            k: 3,
            n: 4,
            at: "l=2".into(),
            route_a: "kp1".into(),
            route_b: "kp2".into(),
            value_a: BigInt::from(226),
            value_b: BigInt::from(227),
        };
        assert_eq!(
            m.to_string(),
            "mismatch: stat=short k=3 n=4 l=2 route_a=kp1 route_b=kp2 value_a=226 value_b=227"
        );
    }
}
