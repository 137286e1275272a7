//! JSON persistence for catalogs.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::rle::{decode_rle_body, encode_rle_body};
use crate::enumerate::{Catalog, CatalogEntry, CatalogParameters, Discovery};
use crate::error::{Error, Result};
use crate::lcg::{canonicalize, KeyMode};
use crate::pattern::{Classification, Offspring};

pub const CATALOG_VERSION: u64 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogDoc {
    version: u64,
    parameters: ParamsDoc,
    complete: bool,
    entries: Vec<EntryDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsDoc {
    max_cells: usize,
    budget: u64,
    closure: bool,
    entry_cap: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct EntryDoc {
    id: String,
    cells: String,
    population: usize,
    classification: ClassificationDoc,
    velocity: Option<[String; 2]>,
    discovered_from: Option<DiscoveryDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum ClassificationDoc {
    Terminating { length: u64 },
    Repeating { transient: u64, period: u64, displacement: [i64; 2] },
    Branching { at: u64, offspring: Vec<OffspringDoc> },
    Unresolved { budget: u64 },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OffspringDoc {
    id: String,
    cells: String,
    offset: [i64; 2],
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiscoveryDoc {
    parent: String,
    generation: u64,
}

fn classification_doc(c: &Classification) -> ClassificationDoc {
    match c {
        Classification::Terminating { length } => ClassificationDoc::Terminating { length: *length },
        Classification::Repeating { transient, period, displacement } => ClassificationDoc::Repeating {
            transient: *transient,
            period: *period,
            displacement: [displacement.0, displacement.1],
        },
        Classification::Branching { at, offspring } => ClassificationDoc::Branching {
            at: *at,
            offspring: offspring
                .iter()
                .map(|o| OffspringDoc { id: o.id.hex(), cells: encode_rle_body(&o.cells), offset: [o.offset.0, o.offset.1] })
                .collect(),
        },
        Classification::Unresolved { budget } => ClassificationDoc::Unresolved { budget: *budget },
    }
}

pub(crate) fn entry_doc(e: &CatalogEntry) -> EntryDoc {
    EntryDoc {
        id: e.hex(),
        cells: encode_rle_body(e.cells()),
        population: e.population(),
        classification: classification_doc(&e.classification),
        velocity: e.velocity().map(|v| [v.dx.to_string(), v.dy.to_string()]),
        discovered_from: e
            .discovered_from
            .as_ref()
            .map(|d| DiscoveryDoc { parent: d.parent.clone(), generation: d.generation }),
    }
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

fn decode_cells(id: &str, body: &str) -> Result<Vec<crate::universe::Coord>> {
    decode_rle_body(body).map_err(|e| schema(format!("entry {id}: bad cells `{body}`: {e}")))
}

fn entry_from_doc(d: EntryDoc) -> Result<CatalogEntry> {
    let cells = decode_cells(&d.id, &d.cells)?;
    let key = canonicalize(&cells, KeyMode::TranslationSymmetry).map_err(|_| schema(format!("entry {}: no cells", d.id)))?;
    if key.hex() != d.id {
        return Err(schema(format!("entry {}: id does not match its cells", d.id)));
    }
    if key.normal_form() != cells {
        return Err(schema(format!("entry {}: cells are not in normal form", d.id)));
    }
    if d.population != cells.len() {
        return Err(schema(format!("entry {}: population {} but {} cells", d.id, d.population, cells.len())));
    }
    let classification = match d.classification {
        ClassificationDoc::Terminating { length } => Classification::Terminating { length },
        ClassificationDoc::Repeating { transient, period, displacement } => {
            if period == 0 {
                return Err(schema(format!("entry {}: zero period", d.id)));
            }
            Classification::Repeating { transient, period, displacement: (displacement[0], displacement[1]) }
        }
        ClassificationDoc::Branching { at, offspring } => {
            let offspring = offspring
                .into_iter()
                .map(|o| {
                    let cells = decode_cells(&o.id, &o.cells)?;
                    let id = canonicalize(&cells, KeyMode::TranslationSymmetry)
                        .map_err(|_| schema(format!("offspring {}: no cells", o.id)))?;
                    if id.hex() != o.id {
                        return Err(schema(format!("offspring {}: id does not match its cells", o.id)));
                    }
                    Ok(Offspring { id, offset: (o.offset[0], o.offset[1]), cells })
                })
                .collect::<Result<_>>()?;
            Classification::Branching { at, offspring }
        }
        ClassificationDoc::Unresolved { budget } => Classification::Unresolved { budget },
    };
    let expected_velocity = classification.velocity().map(|v| [v.dx.to_string(), v.dy.to_string()]);
    if d.velocity != expected_velocity {
        return Err(schema(format!("entry {}: velocity does not match classification", d.id)));
    }
    Ok(CatalogEntry {
        id: key,
        classification,
        discovered_from: d.discovered_from.map(|x| Discovery { parent: x.parent, generation: x.generation }),
    })
}

pub(crate) fn to_pretty_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

/// Writes `c` as a versioned JSON document with entries in catalog order.
pub fn save_catalog<W: Write>(c: &Catalog, mut sink: W) -> Result<()> {
    let p = c.parameters;
    let doc = CatalogDoc {
        version: CATALOG_VERSION,
        parameters: ParamsDoc { max_cells: p.max_cells, budget: p.budget, closure: p.closure, entry_cap: p.entry_cap },
        complete: c.complete,
        entries: c.entries().iter().map(entry_doc).collect(),
    };
    sink.write_all(to_pretty_json(&doc).as_bytes())?;
    Ok(())
}

/// Reads a catalog written by [`save_catalog`]. Nothing is returned unless
/// the whole document validates.
pub fn load_catalog<R: Read>(mut source: R) -> Result<Catalog> {
    let mut text = String::new();
    source.read_to_string(&mut text)?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| schema(e.to_string()))?;
    let version = value
        .get("version")
        .and_then(serde_json::Value::as_u64)
        .ok_or_else(|| schema("missing or non-integer `version`"))?;
    if version != CATALOG_VERSION {
        return Err(Error::Version { found: version, expected: CATALOG_VERSION });
    }
    let doc: CatalogDoc = serde_json::from_value(value).map_err(|e| schema(e.to_string()))?;
    let p = doc.parameters;
    let parameters = CatalogParameters { max_cells: p.max_cells, budget: p.budget, closure: p.closure, entry_cap: p.entry_cap };
    let entries: Vec<CatalogEntry> = doc.entries.into_iter().map(entry_from_doc).collect::<Result<_>>()?;
    let n = entries.len();
    let catalog = Catalog::from_entries(parameters, doc.complete, entries);
    if catalog.len() != n {
        return Err(schema("duplicate entry ids"));
    }
    Ok(catalog)
}
