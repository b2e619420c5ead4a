use std::fs;
use std::path::PathBuf;

use clap::ValueEnum;
use num_bigint::BigInt;

use super::{AsymptKind, Cli, Command, Format, SeriesWhich};
use crate::diagram::{oracle_count_table, oracle_tables, DiagramEnumerator};
use crate::exact::{total_diagrams, ExactCounts};
use crate::memory::{Board, BoardFile, DEFAULT_BUDGET};
use crate::recurrence::{d_table_kp1, d_table_kp2, fuss_catalan, noncrossing_table};
use crate::series::{c_series, f_series, t_series};
use crate::table::{CountTable, TableKind};
use crate::{Error, Result};

/// Overrides the default enumeration cap of `10^7` diagrams.
pub const BUDGET_ENV: &str = "KCHORD_ORACLE_BUDGET";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Stat {
    Short,
    Components,
    NcShort,
}

impl Stat {
    pub fn kind(self) -> TableKind {
        match self {
            Stat::Short => TableKind::ShortChords,
            Stat::Components => TableKind::Components,
            Stat::NcShort => TableKind::NoncrossingShort,
        }
    }

    pub fn routes(self) -> &'static [Route] {
        match self {
            Stat::Short => &[
                Route::ClosedForm,
                Route::Kp1,
                Route::Kp2,
                Route::Series,
                Route::Oracle,
            ],
            Stat::Components => &[Route::ClosedForm, Route::Series, Route::Oracle],
            Stat::NcShort => &[Route::Recurrence, Route::Series, Route::Oracle],
        }
    }

    fn default_route(self) -> Route {
        match self {
            Stat::Short => Route::Kp2,
            Stat::Components => Route::ClosedForm,
            Stat::NcShort => Route::Recurrence,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Route {
    #[value(alias = "closed_form")]
    ClosedForm,
    Kp1,
    Kp2,
    Series,
    Recurrence,
    Oracle,
}

impl Route {
    pub fn as_str(self) -> &'static str {
        match self {
            Route::ClosedForm => "closed-form",
            Route::Kp1 => "kp1",
            Route::Kp2 => "kp2",
            Route::Series => "series",
            Route::Recurrence => "recurrence",
            Route::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoardSpec {
    Path(usize),
    Grid(usize, usize),
    Torus(usize, usize),
    File(PathBuf),
}

impl BoardSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || {
            Error::InvalidParameter(format!(
                "board spec {text:?}: expected path:LEN, grid:RxC or torus:RxC"
            ))
        };
        let (shape, dims) = text.split_once(':').ok_or_else(bad)?;
        let dims2 = || -> Result<(usize, usize)> {
            let (r, c) = dims.split_once('x').ok_or_else(bad)?;
            Ok((r.parse().map_err(|_| bad())?, c.parse().map_err(|_| bad())?))
        };
        match shape {
            "path" => Ok(BoardSpec::Path(dims.parse().map_err(|_| bad())?)),
            "grid" => dims2().map(|(r, c)| BoardSpec::Grid(r, c)),
            "torus" => dims2().map(|(r, c)| BoardSpec::Torus(r, c)),
            _ => Err(bad()),
        }
    }

    pub fn build(&self) -> Result<Board> {
        match self {
            BoardSpec::Path(len) => Board::path(*len),
            BoardSpec::Grid(r, c) => Board::grid(*r, *c),
            BoardSpec::Torus(r, c) => Board::torus(*r, *c),
            BoardSpec::File(path) => {
                let text = fs::read_to_string(path)?;
                let file: BoardFile = serde_json::from_str(&text)?;
                Board::from_file(&file)
            }
        }
    }
}

/// A validated invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Action {
    Table {
        k: usize,
        stat: Stat,
        n_max: usize,
        route: Route,
        format: Format,
        offset: i64,
    },
    Verify {
        k: usize,
        n_max: usize,
    },
    Series {
        k: usize,
        which: SeriesWhich,
        n_max: usize,
    },
    OeisList,
    Oeis {
        id: String,
        k: Option<usize>,
        terms: usize,
        offset: Option<i64>,
    },
    Memory {
        board: BoardSpec,
        k: usize,
        n: Option<usize>,
        samples: u64,
        seed: u64,
        exhaustive: bool,
    },
    Asympt {
        k: usize,
        kind: AsymptKind,
        n: Vec<usize>,
        format: Format,
    },
    Stats {
        k: usize,
        word: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub action: Action,
    pub threads: usize,
    pub budget: u64,
}

fn check_k(k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("k must be >= 2, got {k}")));
    }
    Ok(())
}

fn check_n_max(n_max: usize) -> Result<()> {
    if n_max < 1 {
        return Err(Error::InvalidParameter("n-max must be >= 1".into()));
    }
    Ok(())
}

/// Reads [`BUDGET_ENV`], accepting plain integers or forms like `1e7`.
pub fn budget_from_env() -> Result<u64> {
    match std::env::var(BUDGET_ENV) {
        Err(_) => Ok(DEFAULT_BUDGET),
        Ok(text) => parse_budget(&text),
    }
}

fn parse_budget(text: &str) -> Result<u64> {
    let text = text.trim();
    if let Ok(v) = text.parse::<u64>() {
        return Ok(v);
    }
    match text.parse::<f64>() {
        Ok(v) if v.is_finite() && v >= 0.0 && v.fract() == 0.0 && v < 1.8e19 => Ok(v as u64),
        _ => Err(Error::InvalidParameter(format!(
            "{BUDGET_ENV}={text:?} is not a count"
        ))),
    }
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self> {
        if cli.threads == 0 {
            return Err(Error::InvalidParameter("threads must be >= 1".into()));
        }
        let action = match &cli.command {
            Command::Table(a) => {
                check_k(a.k)?;
                check_n_max(a.n_max)?;
                let route = a.route.unwrap_or(a.stat.default_route());
                if !a.stat.routes().contains(&route) {
                    return Err(Error::InvalidParameter(format!(
                        "route {} does not apply to statistic {}",
                        route.as_str(),
                        a.stat.kind()
                    )));
                }
                Action::Table {
                    k: a.k,
                    stat: a.stat,
                    n_max: a.n_max,
                    route,
                    format: a.format,
                    offset: a.offset,
                }
            }
            Command::Verify(a) => {
                check_k(a.k)?;
                check_n_max(a.n_max)?;
                Action::Verify {
                    k: a.k,
                    n_max: a.n_max,
                }
            }
            Command::Series(a) => {
                check_k(a.k)?;
                Action::Series {
                    k: a.k,
                    which: a.which,
                    n_max: a.n_max,
                }
            }
            Command::Oeis(a) => {
                if a.list {
                    Action::OeisList
                } else {
                    let id = a.id.clone().unwrap_or_default();
                    let seq = super::oeis::lookup(&id)?;
                    if seq.needs_k && a.k.is_none() {
                        return Err(Error::InvalidParameter(format!("{} needs --k", seq.id)));
                    }
                    if let Some(k) = a.k {
                        check_k(k)?;
                    }
                    if a.terms == 0 {
                        return Err(Error::InvalidParameter("terms must be >= 1".into()));
                    }
                    Action::Oeis {
                        id: seq.id.to_string(),
                        k: a.k,
                        terms: a.terms,
                        offset: a.offset,
                    }
                }
            }
            Command::Memory(a) => {
                check_k(a.k)?;
                let board = match (&a.board, &a.board_file) {
                    (Some(spec), None) => BoardSpec::parse(spec)?,
                    (None, Some(path)) => BoardSpec::File(path.clone()),
                    _ => {
                        return Err(Error::InvalidParameter(
                            "give exactly one of --board, --board-file".into(),
                        ))
                    }
                };
                Action::Memory {
                    board,
                    k: a.k,
                    n: a.n,
                    samples: a.samples,
                    seed: a.seed,
                    exhaustive: a.exhaustive,
                }
            }
            Command::Asympt(a) => {
                check_k(a.k)?;
                if a.format == Format::Bfile {
                    return Err(Error::InvalidParameter("asympt writes json or csv".into()));
                }
                if a.kind != AsymptKind::Characteristic && (a.n.is_empty() || a.n.contains(&0)) {
                    return Err(Error::InvalidParameter("n values must be >= 1".into()));
                }
                Action::Asympt {
                    k: a.k,
                    kind: a.kind,
                    n: a.n.clone(),
                    format: a.format,
                }
            }
            Command::Stats(a) => {
                check_k(a.k)?;
                Action::Stats {
                    k: a.k,
                    word: a.word.clone(),
                }
            }
        };
        Ok(RunConfig {
            action,
            threads: cli.threads,
            budget: budget_from_env()?,
        })
    }
}

/// Rows `0..=n_max` of one statistic by one route.
pub fn compute_table(
    k: usize,
    stat: Stat,
    n_max: usize,
    route: Route,
    budget: u64,
) -> Result<CountTable> {
    let kind = stat.kind();
    let table = match (stat, route) {
        (Stat::Short, Route::ClosedForm) => ExactCounts::new(k, n_max).short_table(),
        (Stat::Short, Route::Kp1) => d_table_kp1(k, n_max),
        (Stat::Short, Route::Kp2) => d_table_kp2(k, n_max),
        (Stat::Short, Route::Series) => f_series(k, n_max).to_table(k, kind),
        (Stat::Components, Route::ClosedForm) => ExactCounts::new(k, n_max).component_table(),
        (Stat::Components, Route::Series) => c_series(k, n_max).to_table(k, kind),
        (Stat::Short | Stat::Components, Route::Oracle) => {
            check_budget(total_diagrams(k, n_max), budget)?;
            oracle_count_table(&oracle_tables(k, n_max), kind)
        }
        (Stat::NcShort, Route::Recurrence) => noncrossing_table(k, n_max),
        (Stat::NcShort, Route::Series) => t_series(k, n_max, n_max).to_table(k, kind),
        (Stat::NcShort, Route::Oracle) => {
            check_budget(fuss_catalan(k, n_max), budget)?;
            noncrossing_oracle_table(k, n_max)
        }
        _ => {
            return Err(Error::InvalidParameter(format!(
                "route {} does not apply to statistic {}",
                route.as_str(),
                kind
            )))
        }
    };
    Ok(table)
}

pub(crate) fn check_budget(required: BigInt, budget: u64) -> Result<()> {
    if required > BigInt::from(budget) {
        return Err(Error::BudgetExceeded { required, budget });
    }
    Ok(())
}

/// `T(m, l)` by walking the non-crossing diagrams themselves.
pub(crate) fn noncrossing_oracle_table(k: usize, m_max: usize) -> CountTable {
    let rows = (0..=m_max)
        .map(|m| {
            let hist = DiagramEnumerator::noncrossing(k, m).par_fold(
                || vec![0u64; m + 1],
                |acc, d| acc[d.stats().short_chords] += 1,
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    a
                },
            );
            hist.into_iter().map(BigInt::from).collect()
        })
        .collect();
    CountTable::from_rows(k, TableKind::NoncrossingShort, rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_parsing() {
        assert_eq!(parse_budget("10000000").unwrap(), 10_000_000);
        assert_eq!(parse_budget("1e7").unwrap(), 10_000_000);
        assert!(parse_budget("-3").is_err());
        assert!(parse_budget("lots").is_err());
    }

    #[test]
    fn board_specs() {
        assert_eq!(BoardSpec::parse("path:6").unwrap(), BoardSpec::Path(6));
        assert_eq!(BoardSpec::parse("grid:2x3").unwrap(), BoardSpec::Grid(2, 3));
        assert_eq!(
            BoardSpec::parse("torus:3x3").unwrap(),
            BoardSpec::Torus(3, 3)
        );
        assert!(BoardSpec::parse("grid:2").is_err());
        assert!(BoardSpec::parse("ring:5").is_err());
    }

    #[test]
    fn every_route_gives_the_same_k3_rows() {
        for stat in [Stat::Short, Stat::Components, Stat::NcShort] {
            let tables: Vec<_> = stat
                .routes()
                .iter()
                .map(|&r| compute_table(3, stat, 4, r, DEFAULT_BUDGET).unwrap())
                .collect();
            for t in &tables[1..] {
                assert_eq!(tables[0].first_mismatch(t, 0, 4), None, "{stat:?}");
            }
        }
    }

    #[test]
    fn oracle_respects_the_budget() {
        let err = compute_table(3, Stat::Short, 5, Route::Oracle, 1000).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { budget: 1000, .. }));
    }
}
