//! Pairwise encounters between repeating catalog entries.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::enumerate::{Catalog, CatalogEntry};
use crate::error::{Error, Result};
use crate::lcg::{canonicalize, partition, CanonicalKey, KeyMode, LiveCellGroup};
use crate::pattern::{classify, Classification, OrbitMode, Velocity};
use crate::settle::{min_distance, never_meet, settle_with_cache, Cycle, CycleCache, Placed, SettleConfig, SettleStatus, SettledGroup};
use crate::universe::{Coord, Stepper, Universe};

/// One arranged encounter: `b` is placed with its anchor at `offset` from
/// `a`'s anchor, each at the given phase of its cycle.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CollisionSpec {
    pub a: String,
    pub b: String,
    pub offset: (i64, i64),
    pub phase_a: u64,
    pub phase_b: u64,
    pub horizon: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CollideConfig {
    pub group_budget: u64,
    pub stepper: Stepper,
}

impl Default for CollideConfig {
    fn default() -> Self {
        CollideConfig { group_budget: crate::settle::DEFAULT_GROUP_BUDGET, stepper: Stepper::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CollisionStatus {
    Settled,
    NoInteraction,
    Unresolved,
}

impl CollisionStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CollisionStatus::Settled => "settled",
            CollisionStatus::NoInteraction => "no_interaction",
            CollisionStatus::Unresolved => "unresolved",
        }
    }
}

/// A settled group identified against the catalog.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CensusItem {
    /// Catalog id: the smallest cycle state already in the catalog, or the
    /// smallest cycle state overall when the cycle is new.
    pub id: String,
    pub anchor: Coord,
    /// Generations until the group next looks like `id`'s cells.
    pub phase: u64,
    pub velocity: (String, String),
}

impl CensusItem {
    pub fn is_moving(&self) -> bool {
        self.velocity.0 != "0" || self.velocity.1 != "0"
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollisionOutcome {
    pub spec: CollisionSpec,
    pub onset: Option<u64>,
    pub census: Vec<CensusItem>,
    pub escaping: Vec<CensusItem>,
    pub status: CollisionStatus,
    /// Generation at which the census was taken.
    pub settled_at: Option<u64>,
    pub diagnostic: Option<String>,
}

impl CollisionOutcome {
    /// Status plus the multiset of census ids, e.g. `settled:1a2b..x2`.
    pub fn class_label(&self) -> String {
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for c in &self.census {
            *counts.entry(c.id.as_str()).or_default() += 1;
        }
        let parts: Vec<String> = counts.iter().map(|(id, n)| format!("{}x{n}", &id[..id.len().min(12)])).collect();
        let body = if parts.is_empty() { "empty".to_string() } else { parts.join("+") };
        format!("{}:{body}", self.status.as_str())
    }
}

/// Rows plus catalog entries for cycles the catalog did not yet hold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollisionTable {
    pub a: String,
    pub b: String,
    pub window: u64,
    pub horizon: u64,
    pub rows: Vec<CollisionOutcome>,
    pub extensions: Vec<CatalogEntry>,
}

impl CollisionTable {
    /// Rows per outcome class, sorted by label.
    pub fn histogram(&self) -> BTreeMap<String, usize> {
        let mut h = BTreeMap::new();
        for r in &self.rows {
            *h.entry(r.class_label()).or_insert(0) += 1;
        }
        h
    }
}

fn repeating_entry<'c>(catalog: &'c Catalog, id: &str) -> Result<&'c CatalogEntry> {
    let e = catalog.find_hex(id).ok_or_else(|| Error::UnknownId(id.to_string()))?;
    if !e.classification.is_repeating() {
        return Err(Error::InvalidSpec(format!("{} is {}, not repeating", e.hex(), e.classification.kind())));
    }
    Ok(e)
}

/// The entry's cycle started at `phase`, with the phase state at the origin.
fn phase_cycle(entry: &CatalogEntry, phase: u64, cfg: &CollideConfig) -> Result<Cycle> {
    let Classification::Repeating { transient, period, .. } = entry.classification else {
        return Err(Error::InvalidSpec(format!("{} is not repeating", entry.hex())));
    };
    if phase >= period {
        return Err(Error::InvalidSpec(format!("phase {phase} out of range for period {period}")));
    }
    let mut cells = entry.cells().to_vec();
    cells = cfg.stepper.step_n(&Universe::from_cells(cells), transient + phase)?.into_cells();
    let g = LiveCellGroup::from_live(cells)?;
    let normal = LiveCellGroup::from_live(g.id().normal_form().to_vec())?;
    match Cycle::of(&normal, period + 1, &cfg.stepper)? {
        Ok(c) => Ok(c),
        Err(other) => Err(Error::InvalidSpec(format!("{} did not repeat as recorded: {other}", entry.hex()))),
    }
}

struct Arranged {
    a: Placed,
    b: Placed,
}

fn arranged(spec: &CollisionSpec, catalog: &Catalog, cfg: &CollideConfig) -> Result<Arranged> {
    let ea = repeating_entry(catalog, &spec.a)?;
    let eb = repeating_entry(catalog, &spec.b)?;
    let a = Placed::new(Arc::new(phase_cycle(ea, spec.phase_a, cfg)?), Coord::new(0, 0));
    let b = Placed::new(Arc::new(phase_cycle(eb, spec.phase_b, cfg)?), Coord::new(spec.offset.0, spec.offset.1));
    let ca = placed_cells(&a, 0);
    let cb = placed_cells(&b, 0);
    if min_distance(&ca, &cb) < 3 {
        return Err(Error::InvalidSpec(format!(
            "placement at offset ({},{}) does not start as two separate groups",
            spec.offset.0, spec.offset.1
        )));
    }
    Ok(Arranged { a, b })
}

fn placed_cells(p: &Placed, t: u64) -> Vec<Coord> {
    p.cells_at(t)
}

/// Places `a` at its anchor origin and `b` at `offset`.
pub fn arrange(spec: &CollisionSpec, catalog: &Catalog, cfg: &CollideConfig) -> Result<Universe> {
    let ar = arranged(spec, catalog, cfg)?;
    let u = Universe::from_cells(placed_cells(&ar.a, 0).into_iter().chain(placed_cells(&ar.b, 0)));
    debug_assert_eq!(partition(&u).len(), 2);
    Ok(u)
}

fn onset_of(ar: &Arranged, horizon: u64) -> Option<u64> {
    for t in 0..=horizon {
        if min_distance(&placed_cells(&ar.a, t), &placed_cells(&ar.b, t)) <= 2 {
            return Some(t);
        }
        // Checked every generation: cheap, and exits as soon as the two are
        // provably apart for good.
        if never_meet(&ar.a.advanced(t), &ar.b.advanced(t)) {
            return None;
        }
    }
    None
}

/// First generation at which the pair stops evolving as two independent
/// groups, if that happens within the encounter's horizon.
pub fn interaction_onset(spec: &CollisionSpec, catalog: &Catalog, cfg: &CollideConfig) -> Result<Option<u64>> {
    let ar = arranged(spec, catalog, cfg)?;
    Ok(onset_of(&ar, spec.horizon))
}

/// Resolves settled groups to catalog ids. Cycles the catalog lacks are
/// returned as new entries.
fn identify(groups: &[SettledGroup], catalog: &Catalog, budget: u64, stepper: &Stepper) -> Result<(Vec<CensusItem>, Vec<CatalogEntry>)> {
    let mut census = Vec::new();
    let mut novel = Vec::new();
    for g in groups {
        let keys = g.cycle().phase_keys();
        let known = keys.iter().filter(|k| catalog.contains(k)).min();
        let id: CanonicalKey = match known {
            Some(k) => k.clone(),
            None => {
                let k = keys.iter().min().expect("cycles are non-empty").clone();
                let rec = classify(&LiveCellGroup::from_live(k.normal_form().to_vec())?, budget, OrbitMode::Translation, stepper)?;
                novel.push(CatalogEntry { id: rec.seed, classification: rec.classification, discovered_from: None });
                k
            }
        };
        let phase = keys.iter().position(|k| *k == id).expect("id is a cycle state") as u64;
        let v: Velocity = g.cycle().velocity();
        census.push(CensusItem {
            id: id.hex(),
            anchor: g.anchor(),
            phase,
            velocity: (v.dx.to_string(), v.dy.to_string()),
        });
    }
    census.sort();
    Ok((census, novel))
}

fn census_of_pair(ar: &Arranged, catalog: &Catalog, cfg: &CollideConfig) -> Result<Vec<CensusItem>> {
    let groups: Vec<SettledGroup> = [&ar.a, &ar.b]
        .into_iter()
        .map(|p| SettledGroup { placed: p.clone(), cells: placed_cells(p, 0) })
        .collect();
    Ok(identify(&groups, catalog, cfg.group_budget, &cfg.stepper)?.0)
}

fn collide_inner(spec: &CollisionSpec, catalog: &Catalog, cfg: &CollideConfig) -> Result<(CollisionOutcome, Vec<CatalogEntry>)> {
    let ar = arranged(spec, catalog, cfg)?;
    let Some(onset) = onset_of(&ar, spec.horizon) else {
        let census = census_of_pair(&ar, catalog, cfg)?;
        let escaping = census.iter().filter(|c| c.is_moving()).cloned().collect();
        return Ok((
            CollisionOutcome {
                spec: spec.clone(),
                onset: None,
                census,
                escaping,
                status: CollisionStatus::NoInteraction,
                settled_at: Some(0),
                diagnostic: None,
            },
            Vec::new(),
        ));
    };
    let start = Universe::from_cells(placed_cells(&ar.a, onset).into_iter().chain(placed_cells(&ar.b, onset))).with_generation(onset);
    let scfg = SettleConfig { horizon: spec.horizon, group_budget: cfg.group_budget, stepper: cfg.stepper };
    let s = settle_with_cache(start, &scfg, &mut CycleCache::default());
    let outcome = |status, census: Vec<CensusItem>, settled_at, diagnostic| {
        let escaping = census.iter().filter(|c: &&CensusItem| c.is_moving()).cloned().collect();
        CollisionOutcome { spec: spec.clone(), onset: Some(onset), census, escaping, status, settled_at, diagnostic }
    };
    match s.status {
        SettleStatus::Settled { groups } => {
            let (census, novel) = identify(&groups, catalog, cfg.group_budget, &cfg.stepper)?;
            Ok((outcome(CollisionStatus::Settled, census, Some(s.generation), None), novel))
        }
        SettleStatus::Unresolved { reason } => Ok((
            outcome(
                CollisionStatus::Unresolved,
                Vec::new(),
                None,
                Some(format!("{reason}; population {} at generation {}", s.universe.population(), s.generation)),
            ),
            Vec::new(),
        )),
    }
}

/// Runs one encounter to its outcome.
pub fn collide(spec: &CollisionSpec, catalog: &Catalog, cfg: &CollideConfig) -> Result<CollisionOutcome> {
    collide_inner(spec, catalog, cfg).map(|(o, _)| o)
}

/// Offsets with `max(|dx|,|dy|) <= window`, ring by ring outward and
/// row-major within a ring, so a larger window only appends.
pub fn window_offsets(window: u64) -> Vec<(i64, i64)> {
    let w = window as i64;
    let mut out = Vec::with_capacity(((2 * w + 1) * (2 * w + 1)) as usize);
    for r in 0..=w {
        for dy in -r..=r {
            for dx in -r..=r {
                if dx.abs().max(dy.abs()) == r {
                    out.push((dx, dy));
                }
            }
        }
    }
    out
}

/// Every valid arrangement of `a` and `b` over the offset window and all
/// phase pairs, in (offset, phase_a, phase_b) order.
pub fn collision_table(a: &str, b: &str, window: u64, horizon: u64, catalog: &Catalog, cfg: &CollideConfig) -> Result<CollisionTable> {
    let ea = repeating_entry(catalog, a)?;
    let eb = repeating_entry(catalog, b)?;
    let period = |e: &CatalogEntry| match e.classification {
        Classification::Repeating { period, .. } => period,
        _ => unreachable!("checked above"),
    };
    let (pa, pb) = (period(ea), period(eb));
    let specs: Vec<CollisionSpec> = window_offsets(window)
        .into_iter()
        .flat_map(|offset| {
            (0..pa).flat_map(move |phase_a| {
                (0..pb).map(move |phase_b| CollisionSpec {
                    a: ea.hex(),
                    b: eb.hex(),
                    offset,
                    phase_a,
                    phase_b,
                    horizon,
                })
            })
        })
        .collect();
    let results: Vec<Option<(CollisionOutcome, Vec<CatalogEntry>)>> = specs
        .par_iter()
        .map(|spec| match collide_inner(spec, catalog, cfg) {
            Ok(r) => Ok(Some(r)),
            Err(Error::InvalidSpec(_)) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    let mut extensions: BTreeMap<(usize, CanonicalKey), CatalogEntry> = BTreeMap::new();
    for (outcome, novel) in results.into_iter().flatten() {
        rows.push(outcome);
        for e in novel {
            extensions.entry((e.population(), e.id.clone())).or_insert(e);
        }
    }
    Ok(CollisionTable {
        a: ea.hex(),
        b: eb.hex(),
        window,
        horizon,
        rows,
        extensions: extensions.into_values().collect(),
    })
}

/// Builds a repeating catalog entry from arbitrary cells (any phase, any
/// orientation), for patterns loaded from files.
pub fn entry_for_cells(cells: &[Coord], budget: u64, stepper: &Stepper) -> Result<CatalogEntry> {
    let key = canonicalize(cells, KeyMode::TranslationSymmetry)?;
    let g = LiveCellGroup::from_live(key.normal_form().to_vec())?;
    let rec = classify(&g, budget, OrbitMode::Translation, stepper)?;
    Ok(CatalogEntry { id: rec.seed, classification: rec.classification, discovered_from: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{CatalogParameters, DEFAULT_ENTRY_CAP};

    const GLIDER: [(i64, i64); 5] = [(1, 0), (2, 1), (0, 2), (1, 2), (2, 2)];
    const BLOCK: [(i64, i64); 4] = [(0, 0), (1, 0), (0, 1), (1, 1)];

    fn cells(v: &[(i64, i64)]) -> Vec<Coord> {
        v.iter().map(|&c| c.into()).collect()
    }

    fn catalog() -> (Catalog, String, String) {
        let s = Stepper::default();
        let g = entry_for_cells(&cells(&GLIDER), 64, &s).unwrap();
        let b = entry_for_cells(&cells(&BLOCK), 64, &s).unwrap();
        let (gh, bh) = (g.hex(), b.hex());
        let params = CatalogParameters { max_cells: 0, budget: 64, closure: false, entry_cap: DEFAULT_ENTRY_CAP };
        (Catalog::from_entries(params, true, vec![g, b]), gh, bh)
    }

    fn spec(a: &str, b: &str, offset: (i64, i64), phase_a: u64) -> CollisionSpec {
        CollisionSpec { a: a.into(), b: b.into(), offset, phase_a, phase_b: 0, horizon: 512 }
    }

    #[test]
    fn two_distant_blocks() {
        let (c, _, b) = catalog();
        let cfg = CollideConfig::default();
        let s = spec(&b, &b, (10, 0), 0);
        let u = arrange(&s, &c, &cfg).unwrap();
        assert_eq!(u.population(), 8);
        assert_eq!(partition(&u).len(), 2);
        assert_eq!(interaction_onset(&s, &c, &cfg).unwrap(), None);
        let o = collide(&s, &c, &cfg).unwrap();
        assert_eq!(o.status, CollisionStatus::NoInteraction);
        assert_eq!(o.census.len(), 2);
        assert!(o.census.iter().all(|i| i.id == b));
    }

    #[test]
    fn overlapping_placement_is_invalid() {
        let (c, g, b) = catalog();
        let cfg = CollideConfig::default();
        assert!(matches!(arrange(&spec(&g, &b, (4, 0), 0), &c, &cfg), Err(Error::InvalidSpec(_))));
        assert!(matches!(arrange(&spec(&g, &b, (1, 1), 0), &c, &cfg), Err(Error::InvalidSpec(_))));
        assert!(arrange(&spec(&g, &b, (6, 0), 0), &c, &cfg).is_ok());
    }

    #[test]
    fn phase_out_of_range_is_invalid() {
        let (c, g, b) = catalog();
        assert!(matches!(arrange(&spec(&g, &b, (10, 10), 4), &c, &CollideConfig::default()), Err(Error::InvalidSpec(_))));
    }

    fn heading(c: &Catalog, g: &str) -> (i64, i64) {
        match c.find_hex(g).unwrap().classification {
            Classification::Repeating { displacement: (dx, dy), .. } => (dx.signum(), dy.signum()),
            _ => unreachable!(),
        }
    }

    #[test]
    fn glider_into_block_interacts() {
        let (c, g, b) = catalog();
        let cfg = CollideConfig::default();
        let (sx, sy) = heading(&c, &g);
        let s = spec(&g, &b, (8 * sx, 8 * sy), 0);
        let onset = interaction_onset(&s, &c, &cfg).unwrap().expect("block sits on the glide path");
        assert!(onset > 0);
        // Translating the whole arrangement is invisible to the onset.
        let o = collide(&s, &c, &cfg).unwrap();
        assert_eq!(o.onset, Some(onset));
        assert_ne!(o.status, CollisionStatus::NoInteraction);
    }

    #[test]
    fn glider_moving_away_never_interacts() {
        let (c, g, b) = catalog();
        let (sx, sy) = heading(&c, &g);
        let o = collide(&spec(&g, &b, (-8 * sx, -8 * sy), 0), &c, &CollideConfig::default()).unwrap();
        assert_eq!(o.status, CollisionStatus::NoInteraction);
        assert_eq!(o.escaping.len(), 1);
        assert_eq!(o.escaping[0].id, g);
    }

    #[test]
    fn window_offsets_grow_by_appending() {
        let small = window_offsets(2);
        let big = window_offsets(3);
        assert_eq!(small.len(), 25);
        assert_eq!(big.len(), 49);
        assert_eq!(&big[..25], &small[..]);
        assert_eq!(small[0], (0, 0));
    }
}
