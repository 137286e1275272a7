//! Exhaustive enumeration of small seeds and the catalog of their orbits.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::error::Result;
use crate::lcg::{canonicalize, CanonicalKey, KeyMode, LiveCellGroup};
use crate::pattern::{classify, replay, Classification, OrbitMode, ReplayMismatch, Velocity};
use crate::universe::{Coord, Stepper};

/// Default maximum number of catalog entries when following offspring.
pub const DEFAULT_ENTRY_CAP: usize = 10_000;

/// Where an offspring entry was first seen.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Discovery {
    /// Catalog id of the branching parent.
    pub parent: String,
    /// Generation of the parent's split.
    pub generation: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CatalogEntry {
    /// Symmetry-reduced key; its normal form is the entry's cell set.
    pub id: CanonicalKey,
    pub classification: Classification,
    pub discovered_from: Option<Discovery>,
}

impl CatalogEntry {
    pub fn cells(&self) -> &[Coord] {
        self.id.normal_form()
    }

    pub fn population(&self) -> usize {
        self.id.population()
    }

    pub fn hex(&self) -> String {
        self.id.hex()
    }

    pub fn velocity(&self) -> Option<Velocity> {
        self.classification.velocity()
    }

    pub fn group(&self) -> LiveCellGroup {
        LiveCellGroup::from_live(self.cells().to_vec()).expect("catalog cells are a group")
    }

    /// Re-derives the classification from the cells at `budget` and checks it
    /// with [`replay`].
    pub fn verify(&self, budget: u64, stepper: &Stepper) -> Result<(), ReplayMismatch> {
        let g = self.group();
        let record = classify(&g, budget, OrbitMode::Translation, stepper)
            .map_err(|e| ReplayMismatch { generation: 0, detail: e.to_string() })?;
        if record.classification != self.classification {
            return Err(ReplayMismatch {
                generation: record.trace.len() as u64 - 1,
                detail: format!("stored `{}` but simulation gives `{}`", self.classification, record.classification),
            });
        }
        replay(&record, &g, stepper)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CatalogParameters {
    pub max_cells: usize,
    pub budget: u64,
    pub closure: bool,
    pub entry_cap: usize,
}

/// Entries sorted by (population, normal form) with unique ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Catalog {
    pub parameters: CatalogParameters,
    /// False when the entry cap stopped the offspring closure early.
    pub complete: bool,
    entries: Vec<CatalogEntry>,
}

fn entry_order(e: &CatalogEntry) -> (usize, &CanonicalKey) {
    (e.population(), &e.id)
}

impl Catalog {
    pub fn new(parameters: CatalogParameters) -> Self {
        Catalog { parameters, complete: true, entries: Vec::new() }
    }

    /// Builds a catalog from arbitrary entries; later duplicates of an id are
    /// dropped.
    pub fn from_entries(parameters: CatalogParameters, complete: bool, entries: Vec<CatalogEntry>) -> Self {
        let mut c = Catalog { parameters, complete, entries: Vec::new() };
        for e in entries {
            c.insert(e);
        }
        c
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn position(&self, key: &CanonicalKey) -> std::result::Result<usize, usize> {
        self.entries.binary_search_by(|e| entry_order(e).cmp(&(key.population(), key)))
    }

    pub fn get(&self, key: &CanonicalKey) -> Option<&CatalogEntry> {
        self.position(key).ok().map(|i| &self.entries[i])
    }

    pub fn contains(&self, key: &CanonicalKey) -> bool {
        self.position(key).is_ok()
    }

    /// Looks up an entry by its hex id or a unique prefix of it.
    pub fn find_hex(&self, id: &str) -> Option<&CatalogEntry> {
        let id = id.to_ascii_lowercase();
        let mut hits = self.entries.iter().filter(|e| e.hex().starts_with(&id));
        let first = hits.next()?;
        hits.next().is_none().then_some(first)
    }

    /// Inserts in sorted position. Returns false if the id was present.
    pub fn insert(&mut self, entry: CatalogEntry) -> bool {
        match self.position(&entry.id) {
            Ok(_) => false,
            Err(i) => {
                self.entries.insert(i, entry);
                true
            }
        }
    }

    /// Counts per classification kind, in a fixed order.
    pub fn summary(&self) -> BTreeMap<&'static str, usize> {
        let mut m: BTreeMap<&'static str, usize> =
            ["terminating", "repeating", "branching", "unresolved"].iter().map(|&k| (k, 0)).collect();
        for e in &self.entries {
            *m.get_mut(e.classification.kind()).expect("known kind") += 1;
        }
        m
    }
}

/// One representative per symmetry class of single-group seeds with
/// 1..=`max_cells` live cells, ordered by (population, key).
pub fn enumerate_seeds(max_cells: usize) -> Vec<LiveCellGroup> {
    let mut out = Vec::new();
    if max_cells == 0 {
        return out;
    }
    let mut level: BTreeSet<CanonicalKey> = BTreeSet::new();
    level.insert(canonicalize(&[Coord::new(0, 0)], KeyMode::TranslationSymmetry).expect("non-empty"));
    for n in 1..=max_cells {
        out.extend(level.iter().map(|k| LiveCellGroup::from_live(k.normal_form().to_vec()).expect("connected")));
        if n == max_cells {
            break;
        }
        level = grow(&level);
    }
    out
}

/// Every connected set with one more cell contains a cell whose removal
/// leaves it connected (a leaf of a spanning tree), so extending each
/// representative by one cell within distance 2 reaches every class.
fn grow(level: &BTreeSet<CanonicalKey>) -> BTreeSet<CanonicalKey> {
    let level: Vec<&CanonicalKey> = level.iter().collect();
    level
        .par_iter()
        .map(|k| {
            let cells = k.normal_form();
            let mut found = BTreeSet::new();
            for c in cells {
                for dy in -2..=2 {
                    for dx in -2..=2 {
                        let n = Coord::new(c.x + dx, c.y + dy);
                        if cells.binary_search(&n).is_ok() {
                            continue;
                        }
                        let mut grown = cells.to_vec();
                        grown.push(n);
                        found.insert(canonicalize(&grown, KeyMode::TranslationSymmetry).expect("non-empty"));
                    }
                }
            }
            found
        })
        .reduce(BTreeSet::new, |mut a, b| {
            a.extend(b);
            a
        })
}

fn classify_entry(cells: &[Coord], budget: u64, stepper: &Stepper, discovered_from: Option<Discovery>) -> Result<CatalogEntry> {
    let g = LiveCellGroup::from_live(cells.to_vec())?;
    let record = classify(&g, budget, OrbitMode::Translation, stepper)?;
    Ok(CatalogEntry { id: record.seed, classification: record.classification, discovered_from })
}

/// Classifies every seed up to `max_cells`; with `closure`, also every
/// offspring of every branching entry, transitively, until a fixed point or
/// `entry_cap` entries.
pub fn build_catalog(max_cells: usize, budget: u64, closure: bool, entry_cap: usize, stepper: &Stepper) -> Result<Catalog> {
    let params = CatalogParameters { max_cells, budget, closure, entry_cap };
    let seeds = enumerate_seeds(max_cells);
    let seed_cells: Vec<Vec<Coord>> = seeds.iter().map(|g| g.id().normal_form().to_vec()).collect();
    catalog_from_seeds(params, &seed_cells, stepper)
}

/// Classifies the given seeds (in any orientation) and, when the parameters
/// ask for it, closes over branching offspring.
pub fn catalog_from_seeds(params: CatalogParameters, seeds: &[Vec<Coord>], stepper: &Stepper) -> Result<Catalog> {
    let mut catalog = Catalog::new(params);
    let entries: Vec<CatalogEntry> = seeds
        .par_iter()
        .map(|cells| classify_entry(cells, params.budget, stepper, None))
        .collect::<Result<_>>()?;
    let mut frontier = Vec::new();
    for e in entries {
        if catalog.len() >= params.entry_cap {
            catalog.complete = false;
            return Ok(catalog);
        }
        if catalog.insert(e.clone()) {
            frontier.push(e);
        }
    }
    if params.closure {
        close_offspring(&mut catalog, frontier, stepper)?;
    }
    Ok(catalog)
}

fn close_offspring(catalog: &mut Catalog, mut frontier: Vec<CatalogEntry>, stepper: &Stepper) -> Result<()> {
    let params = catalog.parameters;
    loop {
        // Collect unseen offspring in a deterministic order: by parent order
        // in the frontier, then by split order. The first parent to produce
        // an id is recorded as its discoverer.
        frontier.sort_by(|a, b| entry_order(a).cmp(&entry_order(b)));
        let mut pending: BTreeMap<CanonicalKey, Discovery> = BTreeMap::new();
        for parent in &frontier {
            if let Classification::Branching { at, offspring } = &parent.classification {
                for o in offspring {
                    if !catalog.contains(&o.id) && !pending.contains_key(&o.id) {
                        pending.insert(o.id.clone(), Discovery { parent: parent.hex(), generation: *at });
                    }
                }
            }
        }
        if pending.is_empty() {
            return Ok(());
        }
        let pending: Vec<(CanonicalKey, Discovery)> = pending.into_iter().collect();
        let new: Vec<CatalogEntry> = pending
            .par_iter()
            .map(|(k, d)| classify_entry(k.normal_form(), params.budget, stepper, Some(d.clone())))
            .collect::<Result<_>>()?;
        frontier.clear();
        for e in new {
            if catalog.len() >= params.entry_cap {
                catalog.complete = false;
                return Ok(());
            }
            catalog.insert(e.clone());
            frontier.push(e);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lcg::partition;

    #[test]
    fn one_cell() {
        let s = enumerate_seeds(1);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].live(), &[Coord::new(0, 0)]);
    }

    #[test]
    fn two_cells() {
        // Up to symmetry a second cell sits at (1,0), (1,1), (2,0), (2,1) or (2,2).
        let s = enumerate_seeds(2);
        assert_eq!(s.len(), 1 + 5);
        assert!(s.windows(2).all(|w| (w[0].population(), w[0].id()) < (w[1].population(), w[1].id())));
    }

    #[test]
    fn seeds_are_single_groups() {
        for g in enumerate_seeds(3) {
            assert_eq!(partition(&g.to_universe()).len(), 1);
        }
    }

    #[test]
    fn single_cell_catalog() {
        let c = build_catalog(1, 16, false, DEFAULT_ENTRY_CAP, &Stepper::default()).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.entries()[0].classification, Classification::Terminating { length: 1 });
        assert!(c.complete);
    }

    #[test]
    fn entry_cap_marks_incomplete() {
        let c = build_catalog(3, 16, false, 4, &Stepper::default()).unwrap();
        assert_eq!(c.len(), 4);
        assert!(!c.complete);
    }

    #[test]
    fn find_hex_prefix() {
        let c = build_catalog(2, 16, false, DEFAULT_ENTRY_CAP, &Stepper::default()).unwrap();
        let e = &c.entries()[3];
        assert_eq!(c.find_hex(&e.hex()).unwrap(), e);
        assert_eq!(c.find_hex(&e.hex()[..12]).unwrap(), e);
        assert!(c.find_hex("zz").is_none());
    }
}
