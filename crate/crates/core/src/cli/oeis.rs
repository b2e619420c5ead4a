use crate::exact::ExactCounts;
use crate::recurrence::{d_table_kp2, fuss_catalan, noncrossing_table};
use crate::table::CountTable;
use crate::{Error, ExactInteger, Result};

use super::output::linearize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Short(usize),
    Components(usize),
    Noncrossing(usize),
    /// One `k` slice, `m = 0, 1, ...`.
    FussCatalan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OeisSequence {
    pub id: &'static str,
    pub description: &'static str,
    pub source: Source,
    /// Default index of the first term.
    pub offset: i64,
    pub needs_k: bool,
}

const fn triangle(id: &'static str, description: &'static str, source: Source) -> OeisSequence {
    OeisSequence {
        id,
        description,
        source,
        offset: 1,
        needs_k: false,
    }
}

pub const SEQUENCES: &[OeisSequence] = &[
    OeisSequence {
        id: "A062993",
        description: "Fuss-Catalan numbers C(km,m)/((k-1)m+1), one k per file",
        source: Source::FussCatalan,
        offset: 0,
        needs_k: true,
    },
    triangle(
        "A091320",
        "non-crossing diagrams by short chords, k=3",
        Source::Noncrossing(3),
    ),
    triangle("A334056", "diagrams by short chords, k=3", Source::Short(3)),
    triangle("A334057", "diagrams by short chords, k=4", Source::Short(4)),
    triangle("A334058", "diagrams by short chords, k=5", Source::Short(5)),
    triangle(
        "A334059",
        "diagrams by components, k=2",
        Source::Components(2),
    ),
    triangle(
        "A334060",
        "diagrams by components, k=3",
        Source::Components(3),
    ),
    triangle(
        "A334061",
        "diagrams by components, k=4",
        Source::Components(4),
    ),
    triangle(
        "A334062",
        "non-crossing diagrams by short chords, k=4",
        Source::Noncrossing(4),
    ),
    triangle(
        "A334063",
        "non-crossing diagrams by short chords, k=5",
        Source::Noncrossing(5),
    ),
];

pub fn lookup(id: &str) -> Result<&'static OeisSequence> {
    let id = id.trim();
    SEQUENCES
        .iter()
        .find(|s| s.id.eq_ignore_ascii_case(id))
        .ok_or_else(|| Error::UnknownSequence(id.to_string()))
}

/// The first `terms` entries, triangles read by rows from `n = 1`.
pub fn oeis_terms(seq: &OeisSequence, k: Option<usize>, terms: usize) -> Result<Vec<ExactInteger>> {
    if let Source::FussCatalan = seq.source {
        let k = k.ok_or_else(|| Error::InvalidParameter(format!("{} needs k", seq.id)))?;
        return Ok((0..terms).map(|m| fuss_catalan(k, m)).collect());
    }
    let build = |n_max: usize| -> CountTable {
        match seq.source {
            Source::Short(k) => d_table_kp2(k, n_max),
            Source::Components(k) => ExactCounts::new(k, n_max).component_table(),
            Source::Noncrossing(k) => noncrossing_table(k, n_max),
            Source::FussCatalan => unreachable!(),
        }
    };
    // every row n >= 1 holds at least one term
    let mut n_max = 1;
    loop {
        let mut values = linearize(&build(n_max), 1, n_max);
        if values.len() >= terms {
            values.truncate(terms);
            return Ok(values);
        }
        n_max = (n_max * 2).min(n_max + terms);
    }
}
