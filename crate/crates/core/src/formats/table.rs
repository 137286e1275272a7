//! JSON persistence for collision tables.

use std::io::Write;

use serde::Serialize;

use super::catalog::{entry_doc, to_pretty_json, EntryDoc};
use crate::collide::{CensusItem, CollisionOutcome, CollisionTable};
use crate::error::Result;

pub const TABLE_VERSION: u64 = 1;

#[derive(Serialize)]
struct TableDoc<'a> {
    version: u64,
    a: &'a str,
    b: &'a str,
    window: u64,
    horizon: u64,
    rows: Vec<RowDoc<'a>>,
    extensions: Vec<EntryDoc>,
}

#[derive(Serialize)]
struct RowDoc<'a> {
    offset: [i64; 2],
    phase_a: u64,
    phase_b: u64,
    onset: Option<u64>,
    status: &'static str,
    settled_at: Option<u64>,
    census: Vec<CensusDoc<'a>>,
    escaping: Vec<CensusDoc<'a>>,
    diagnostic: Option<&'a str>,
}

#[derive(Serialize)]
struct CensusDoc<'a> {
    id: &'a str,
    anchor: [i64; 2],
    phase: u64,
    velocity: [&'a str; 2],
}

fn census_doc(c: &CensusItem) -> CensusDoc<'_> {
    CensusDoc { id: &c.id, anchor: [c.anchor.x, c.anchor.y], phase: c.phase, velocity: [&c.velocity.0, &c.velocity.1] }
}

fn row_doc(r: &CollisionOutcome) -> RowDoc<'_> {
    RowDoc {
        offset: [r.spec.offset.0, r.spec.offset.1],
        phase_a: r.spec.phase_a,
        phase_b: r.spec.phase_b,
        onset: r.onset,
        status: r.status.as_str(),
        settled_at: r.settled_at,
        census: r.census.iter().map(census_doc).collect(),
        escaping: r.escaping.iter().map(census_doc).collect(),
        diagnostic: r.diagnostic.as_deref(),
    }
}

/// Serializes a table; equal tables give byte-equal output.
pub fn table_to_json(t: &CollisionTable) -> String {
    to_pretty_json(&TableDoc {
        version: TABLE_VERSION,
        a: &t.a,
        b: &t.b,
        window: t.window,
        horizon: t.horizon,
        rows: t.rows.iter().map(row_doc).collect(),
        extensions: t.extensions.iter().map(entry_doc).collect(),
    })
}

pub fn save_table<W: Write>(t: &CollisionTable, mut sink: W) -> Result<()> {
    sink.write_all(table_to_json(t).as_bytes())?;
    Ok(())
}
