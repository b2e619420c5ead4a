//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use kchord::asymptotics::{
    characteristic_expansion, mean_coefficient, noncrossing_mean_report,
    poisson_convergence_report, variance_coefficient, ReportKind,
};
use kchord::cli::{compute_table, Route, Stat};
use kchord::combinat::binomial;
use kchord::diagram::{oracle_count_table, oracle_tables, DiagramEnumerator};
use kchord::exact::{histogram_mean, mean_short_chords, total_diagrams, ExactCounts};
use kchord::memory::{
    exhaustive_distribution, mean_polyominoes, sample_placements, Board, DEFAULT_BUDGET,
};
use kchord::recurrence::{d_table_kp1, d_table_kp2, narayana, noncrossing_table};
use kchord::series::{c_series, f_series, t_series, triple_table};
use kchord::table::TableKind;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);
/// Statistic, routes, reference rows, first column index.
type TableCase<'a> = (&'a str, &'a [&'a str], &'a Vec<Vec<String>>, usize);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!("took {elapsed:.1?}, limit {limit:?}")
    })
}

fn literal(rows: &[&[u64]]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| r.iter().map(ToString::to_string).collect())
        .collect()
}

fn kchord(args: &[&str]) -> Result<String, String> {
    let o = Command::new(env!("CARGO_BIN_EXE_kchord"))
        .args(args)
        .env_remove("KCHORD_ORACLE_BUDGET")
        .output()
        .map_err(|e| e.to_string())?;
    if !o.status.success() {
        return Err(format!(
            "{args:?} exited {:?}: {}",
            o.status.code(),
            String::from_utf8_lossy(&o.stderr)
        ));
    }
    String::from_utf8(o.stdout).map_err(|e| e.to_string())
}

/// Parses `n,value,count` back into trimmed rows `1..`.
fn parse_csv(text: &str, first_value: usize) -> Vec<Vec<String>> {
    let mut out: Vec<Vec<String>> = Vec::new();
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let (n, v): (usize, usize) = (f[0].parse().unwrap(), f[1].parse().unwrap());
        while out.len() < n {
            out.push(Vec::new());
        }
        let row = &mut out[n - 1];
        while row.len() <= v - first_value {
            row.push("0".into());
        }
        row[v - first_value] = f[2].to_string();
    }
    out
}

fn table_reproduction() -> Check {
    let start = Instant::now();
    let table1 = literal(&[
        &[0, 1],
        &[7, 2, 1],
        &[219, 53, 7, 1],
        &[12861, 2296, 226, 16, 1],
        &[1215794, 171785, 13080, 710, 30, 1],
        &[169509845, 19796274, 1228655, 53740, 1835, 50, 1],
    ]);
    let table2 = literal(&[
        &[0, 1],
        &[7, 3],
        &[219, 56, 5],
        &[12861, 2352, 183, 4],
        &[1215794, 174137, 11145, 323, 1],
        &[169509845, 19970411, 1078977, 30833, 334],
    ]);
    let table3 = literal(&[
        &[1],
        &[2, 1],
        &[4, 7, 1],
        &[8, 30, 16, 1],
        &[16, 104, 122, 30, 1],
        &[32, 320, 660, 365, 50, 1],
        &[64, 912, 2920, 2875, 903, 77, 1],
    ]);
    let cases: [TableCase; 3] = [
        (
            "short",
            &["closed-form", "kp1", "kp2", "series"],
            &table1,
            0,
        ),
        ("components", &["closed-form", "series"], &table2, 0),
        ("nc-short", &["recurrence", "series", "oracle"], &table3, 1),
    ];
    let mut runs = 0;
    for (stat, routes, expected, first) in cases {
        let n = expected.len().to_string();
        for route in routes {
            let text = kchord(&[
                "table", "--k", "3", "--stat", stat, "--n-max", &n, "--route", route,
            ])?;
            ensure(parse_csv(&text, first) == *expected, || {
                format!("{stat} by {route} differs")
            })?;
            runs += 1;
        }
    }
    // enumeration fits the default budget up to n = 5
    for stat in ["short", "components"] {
        let text = kchord(&[
            "--threads",
            "4",
            "table",
            "--k",
            "3",
            "--stat",
            stat,
            "--n-max",
            "5",
            "--route",
            "oracle",
        ])?;
        let expected = if stat == "short" { &table1 } else { &table2 };
        ensure(parse_csv(&text, 0) == expected[..5], || {
            format!("{stat} by oracle differs")
        })?;
        runs += 1;
    }
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!(
        "{runs} route runs match the k=3 reference triangles in {:.1?}",
        start.elapsed()
    ))
}

fn four_routes() -> Check {
    let start = Instant::now();
    for k in 2..=5 {
        let n = 12;
        let closed = ExactCounts::new(k, n).short_table();
        let routes = [
            ("kp1", d_table_kp1(k, n)),
            ("kp2", d_table_kp2(k, n)),
            ("series", f_series(k, n).to_table(k, TableKind::ShortChords)),
        ];
        for (name, t) in &routes {
            if let Some((n, l, a, b)) = closed.first_mismatch(t, 0, n) {
                return Err(format!("k={k} n={n} l={l}: closed-form {a} vs {name} {b}"));
            }
        }
        let comp = ExactCounts::new(k, n).component_table();
        let comp_series = c_series(k, n).to_table(k, TableKind::Components);
        if let Some((n, q, a, b)) = comp.first_mismatch(&comp_series, 0, n) {
            return Err(format!("k={k} n={n} q={q}: closed-form {a} vs series {b}"));
        }
    }
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!(
        "k=2..5, n<=12, d and c, in {:.1?}",
        start.elapsed()
    ))
}

fn oracle_equivalence() -> Check {
    let start = Instant::now();
    let mut diagrams = 0u64;
    for (k, n_max) in [(2, 7), (3, 5), (4, 4)] {
        let hists = oracle_tables(k, n_max);
        diagrams += hists.iter().map(|h| h.total).sum::<u64>();
        let pairs = [
            (
                Stat::Short,
                TableKind::ShortChords,
                [Route::ClosedForm, Route::Kp1, Route::Kp2, Route::Series].as_slice(),
            ),
            (
                Stat::Components,
                TableKind::Components,
                [Route::ClosedForm, Route::Series].as_slice(),
            ),
            (
                Stat::NcShort,
                TableKind::NoncrossingShort,
                [Route::Recurrence, Route::Series].as_slice(),
            ),
        ];
        for (stat, kind, routes) in pairs {
            let oracle = oracle_count_table(&hists, kind);
            for &route in routes {
                let t = compute_table(k, stat, n_max, route, DEFAULT_BUDGET)
                    .map_err(|e| e.to_string())?;
                if let Some((n, v, a, b)) = t.first_mismatch(&oracle, 0, n_max) {
                    return Err(format!(
                        "k={k} {kind} n={n} value={v}: {} {a} vs oracle {b}",
                        route.as_str()
                    ));
                }
            }
        }
        for h in &hists {
            ensure(triple_table(k, h.n) == h.triple_table(), || {
                format!("k={k} n={}: d(n,l,m) differs", h.n)
            })?;
            ensure(BigInt::from(h.total) == total_diagrams(k, h.n), || {
                format!("k={k} n={}: total", h.n)
            })?;
        }
    }
    within(start.elapsed(), Duration::from_secs(300))?;
    Ok(format!(
        "{diagrams} diagrams enumerated, d, c, T and d(n,l,m) agree, in {:.1?}",
        start.elapsed()
    ))
}

fn fuss_catalan_identity() -> Check {
    let m_max = 40;
    for k in 2..=5 {
        let t = noncrossing_table(k, m_max);
        let series = t_series(k, 12, 12).to_table(k, TableKind::NoncrossingShort);
        if let Some((m, l, a, b)) = t.first_mismatch(&series, 0, 12) {
            return Err(format!("k={k} m={m} l={l}: recurrence {a} vs series {b}"));
        }
        for m in 0..=m_max {
            // C(km, m) / ((k-1)m + 1), written out here rather than imported
            let fc = binomial(k * m, m) / BigInt::from((k - 1) * m + 1);
            ensure(t.row_sum(m) == fc, || {
                format!("k={k} m={m}: row sum {} vs {fc}", t.row_sum(m))
            })?;
            if k == 2 {
                let catalan = binomial(2 * m, m) / BigInt::from(m + 1);
                ensure(fc == catalan, || format!("m={m}: not Catalan"))?;
                for l in 0..=m {
                    ensure(t.get(m, l) == narayana(m, l), || {
                        format!("m={m} l={l}: not Narayana")
                    })?;
                }
            }
        }
    }
    // a small enumeration cross-check of the same sums
    for (k, m) in [(3, 6), (4, 5), (5, 4)] {
        let mut count = 0u64;
        DiagramEnumerator::noncrossing(k, m).visit_all(|_| count += 1);
        let fc = binomial(k * m, m) / BigInt::from((k - 1) * m + 1);
        ensure(BigInt::from(count) == fc, || {
            format!("k={k} m={m}: enumerated {count}")
        })?;
    }
    Ok(format!("k<=5, m<={m_max}; Catalan and Narayana at k=2"))
}

fn mean_identities() -> Check {
    for k in 2..=4 {
        let n_max = 50;
        let table = d_table_kp2(k, n_max);
        for n in 1..=n_max {
            let row = table.row(n);
            let weighted: BigInt = row
                .iter()
                .enumerate()
                .map(|(l, c)| BigInt::from(l) * c)
                .sum();
            let mean = mean_short_chords(k, n).map_err(|e| e.to_string())?;
            let lhs = mean.clone() * BigRational::from_integer(total_diagrams(k, n));
            ensure(lhs == BigRational::from_integer(weighted), || {
                format!("k={k} n={n}")
            })?;
            ensure(histogram_mean(row) == mean, || {
                format!("k={k} n={n}: histogram mean")
            })?;
            if k == 2 {
                ensure(mean.is_one(), || format!("k=2 n={n}: mean {mean}"))?;
            }
        }
    }
    Ok("k<=4, n<=50 exact; k=2 mean is 1".into())
}

fn poisson_convergence() -> Check {
    let ns = [25, 50, 100, 200];
    let mut parts = Vec::new();
    for kind in [ReportKind::ShortChords, ReportKind::Components] {
        let r = poisson_convergence_report(2, kind, &ns).map_err(|e| e.to_string())?;
        ensure(r.limit.iter().all(One::is_one), || {
            "lambda is not 1 at k=2".into()
        })?;
        ensure(r.monotone, || {
            format!("{} errors not strictly decreasing", kind.as_str())
        })?;
        let last = &r.errors[ns.len() - 1];
        let bound = BigRational::new(BigInt::from(2), BigInt::from(100));
        ensure(last.hi < bound, || {
            format!("{} TV at n=200 is {last}", kind.as_str())
        })?;
        parts.push(format!(
            "{} TV(200) <= {:.2e}",
            kind.as_str(),
            last.hi_f64()
        ));
    }
    Ok(parts.join(", "))
}

fn normality_parameters() -> Check {
    for k in 2..=10 {
        let e = characteristic_expansion(k).map_err(|e| e.to_string())?;
        ensure(e.mean_coefficient() == mean_coefficient(k), || {
            format!("k={k}: mean")
        })?;
        ensure(e.variance_coefficient() == variance_coefficient(k), || {
            format!("k={k}: variance")
        })?;
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let eighth = BigRational::new(BigInt::one(), BigInt::from(8));
    ensure(
        mean_coefficient(2) == half && variance_coefficient(2) == eighth,
        || "k=2 parameters".into(),
    )?;
    let r = noncrossing_mean_report(3, &[50, 100]).map_err(|e| e.to_string())?;
    let target = BigRational::new(BigInt::from(4), BigInt::from(9));
    ensure(r.limit[0] == target, || "k=3 limit is not 4/9".into())?;
    let (e50, e100) = (&r.errors[0].hi, &r.errors[1].hi);
    ensure(e100 < e50, || "error at 100 not below error at 50".into())?;
    ensure(
        *e100 < BigRational::new(BigInt::from(2), BigInt::from(100)),
        || "error at 100 >= 0.02".into(),
    )?;
    ensure(!e100.is_zero(), || "suspicious zero error".into())?;
    Ok(format!(
        "closure for k=2..10; k=3 errors {:.3e} (n=50), {:.3e} (n=100)",
        r.errors[0].hi_f64(),
        r.errors[1].hi_f64()
    ))
}

fn memory_game() -> Check {
    let square = Board::grid(2, 2).map_err(|e| e.to_string())?;
    let exact = mean_polyominoes(&square, 2, 2).map_err(|e| e.to_string())?;
    ensure(
        exact == BigRational::new(BigInt::from(4), BigInt::from(3)),
        || format!("mean {exact}"),
    )?;
    let hist = exhaustive_distribution(&square, 2, 2, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    ensure(hist.total() == 3 && hist.polyomino_mean() == exact, || {
        "2x2 enumeration".into()
    })?;

    for (k, n_max) in [(2, 5), (3, 5)] {
        let short = d_table_kp2(k, n_max);
        let comp = ExactCounts::new(k, n_max).component_table();
        for n in 1..=n_max {
            let path = Board::path(k * n).map_err(|e| e.to_string())?;
            let h =
                exhaustive_distribution(&path, k, n, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
            for (l, c) in h.polyomino_marginal() {
                ensure(BigInt::from(c) == short.get(n, l), || {
                    format!("path k={k} n={n} l={l}")
                })?;
            }
            for (q, c) in h.component_marginal() {
                ensure(BigInt::from(c) == comp.get(n, q), || {
                    format!("path k={k} n={n} q={q}")
                })?;
            }
            ensure(BigInt::from(h.total()) == total_diagrams(k, n), || {
                format!("path k={k} n={n} total")
            })?;
        }
    }

    let boards = [
        ("grid 2x2 k=2", square.clone(), 2, 2),
        (
            "path 6 k=3",
            Board::path(6).map_err(|e| e.to_string())?,
            3,
            2,
        ),
        (
            "grid 3x4 k=3",
            Board::grid(3, 4).map_err(|e| e.to_string())?,
            3,
            4,
        ),
    ];
    let mut parts = Vec::new();
    for (name, board, k, n) in boards {
        let exact = mean_polyominoes(&board, k, n).map_err(|e| e.to_string())?;
        let exact = kchord::asymptotics::rational_to_f64(&exact);
        let mut inside = 0;
        for seed in 0..20 {
            let s =
                sample_placements(&board, k, n, 100_000, 1000 + seed).map_err(|e| e.to_string())?;
            if (s.mean - exact).abs() <= 3.0 * s.standard_error {
                inside += 1;
            }
        }
        ensure(inside >= 19, || {
            format!("{name}: only {inside}/20 seeds within 3 SE")
        })?;
        parts.push(format!("{name} {inside}/20"));
    }
    Ok(format!(
        "4/3 on 2x2, path marginals match, Monte Carlo {}",
        parts.join(", ")
    ))
}

fn oeis_prefixes() -> Check {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let mut files = 0;
    let ids = [
        "A091320", "A334056", "A334057", "A334058", "A334059", "A334060", "A334061", "A334062",
        "A334063",
    ];
    let mut jobs: Vec<(String, Vec<String>)> = ids
        .iter()
        .map(|id| {
            (
                format!("{id}.txt"),
                vec!["oeis".into(), "--id".into(), id.to_string()],
            )
        })
        .collect();
    for k in 2..=5 {
        jobs.push((
            format!("A062993_k{k}.txt"),
            vec![
                "oeis".into(),
                "--id".into(),
                "A062993".into(),
                "--k".into(),
                k.to_string(),
            ],
        ));
    }
    for (file, args) in jobs {
        let expected =
            std::fs::read_to_string(fixtures.join(&file)).map_err(|e| format!("{file}: {e}"))?;
        let terms = expected.lines().count();
        ensure(terms >= 20, || format!("{file}: only {terms} terms"))?;
        let mut args: Vec<&str> = args.iter().map(String::as_str).collect();
        let terms_text = terms.to_string();
        args.extend(["--terms", &terms_text]);
        let got = kchord(&args)?;
        ensure(got == expected, || format!("{file} differs"))?;
        files += 1;
    }
    Ok(format!("{files} b-files byte-exact"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("table reproduction", table_reproduction),
        ("four-route agreement", four_routes),
        ("oracle equivalence", oracle_equivalence),
        ("Fuss-Catalan identity", fuss_catalan_identity),
        ("mean identities", mean_identities),
        ("Poisson convergence", poisson_convergence),
        ("normality parameters", normality_parameters),
        ("memory game", memory_game),
        ("OEIS prefixes", oeis_prefixes),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
