//! Orbit classification of a single live cell group.
//!
//! [`classify`] follows the chain of single successors from a seed group and
//! stops at the first of: extinction, a repeated state, a split into several
//! groups, or an exhausted budget. [`replay`] re-checks a finished record by
//! stepping whole universes and re-partitioning them, without going through
//! the successor machinery `classify` uses.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::lcg::{anchor, canonicalize, partition, partition_cells, CanonicalKey, KeyMode, LiveCellGroup};
use crate::universe::{Coord, Stepper};

/// Default generation budget for a single classification.
pub const DEFAULT_BUDGET: u64 = 4096;

/// How two states of a sequence are compared when looking for a repeat.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrbitMode {
    /// Equal up to translation; moving patterns repeat with a displacement.
    #[default]
    #[serde(rename = "T")]
    Translation,
    /// Equal including absolute position.
    #[serde(rename = "strict")]
    Strict,
}

impl std::str::FromStr for OrbitMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "T" | "t" => Ok(OrbitMode::Translation),
            "strict" => Ok(OrbitMode::Strict),
            other => Err(format!("unknown mode `{other}` (expected T or strict)")),
        }
    }
}

/// A reduced fraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ratio {
    pub num: i64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: i64, den: u64) -> Ratio {
        assert!(den > 0, "zero denominator");
        let g = gcd(num.unsigned_abs(), den).max(1);
        Ratio { num: num / g as i64, den: den / g }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b).max(1) * b
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl std::str::FromStr for Ratio {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let bad = || format!("bad ratio `{s}`");
        match s.split_once('/') {
            None => Ok(Ratio::new(s.parse().map_err(|_| bad())?, 1)),
            Some((n, d)) => {
                let d: u64 = d.parse().map_err(|_| bad())?;
                if d == 0 {
                    return Err(bad());
                }
                Ok(Ratio::new(n.parse().map_err(|_| bad())?, d))
            }
        }
    }
}

/// Displacement per generation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Velocity {
    pub dx: Ratio,
    pub dy: Ratio,
}

impl Velocity {
    pub fn is_zero(&self) -> bool {
        self.dx.num == 0 && self.dy.num == 0
    }
}

impl fmt::Display for Velocity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.dx, self.dy)
    }
}

/// A group produced by a split, positioned relative to the parent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Offspring {
    /// Symmetry-reduced key of the offspring's live cells.
    pub id: CanonicalKey,
    /// Offspring anchor minus the anchor of the last single-group state.
    pub offset: (i64, i64),
    /// The offspring's cells translated so that its anchor is the origin,
    /// in the orientation they actually appeared.
    pub cells: Vec<Coord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Classification {
    Terminating { length: u64 },
    Repeating { transient: u64, period: u64, displacement: (i64, i64) },
    Branching { at: u64, offspring: Vec<Offspring> },
    Unresolved { budget: u64 },
}

impl Classification {
    pub fn kind(&self) -> &'static str {
        match self {
            Classification::Terminating { .. } => "terminating",
            Classification::Repeating { .. } => "repeating",
            Classification::Branching { .. } => "branching",
            Classification::Unresolved { .. } => "unresolved",
        }
    }

    pub fn velocity(&self) -> Option<Velocity> {
        match *self {
            Classification::Repeating { period, displacement: (dx, dy), .. } => {
                Some(Velocity { dx: Ratio::new(dx, period), dy: Ratio::new(dy, period) })
            }
            _ => None,
        }
    }

    pub fn is_repeating(&self) -> bool {
        matches!(self, Classification::Repeating { .. })
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Terminating { length } => write!(f, "terminating length={length}"),
            Classification::Repeating { transient, period, displacement: (dx, dy) } => {
                let v = self.velocity().expect("repeating has a velocity");
                write!(
                    f,
                    "repeating transient={transient} period={period} displacement=({dx},{dy}) velocity={v}"
                )
            }
            Classification::Branching { at, offspring } => {
                write!(f, "branching at={at} offspring={}", offspring.len())
            }
            Classification::Unresolved { budget } => write!(f, "unresolved budget={budget}"),
        }
    }
}

/// One examined generation: translation key plus absolute anchor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TraceEntry {
    pub key: CanonicalKey,
    pub anchor: Coord,
}

impl TraceEntry {
    /// Absolute live cells of this state.
    pub fn cells(&self) -> Vec<Coord> {
        self.key
            .normal_form()
            .iter()
            .map(|c| Coord::new(c.x + self.anchor.x, c.y + self.anchor.y))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrbitRecord {
    /// Symmetry-reduced key of the seed.
    pub seed: CanonicalKey,
    pub mode: OrbitMode,
    pub budget: u64,
    /// Generations 0.. while the sequence was a single group.
    pub trace: Vec<TraceEntry>,
    pub classification: Classification,
}

impl OrbitRecord {
    pub fn velocity(&self) -> Option<Velocity> {
        self.classification.velocity()
    }
}

/// Classifies the sequence of successor groups starting at `seed`.
pub fn classify(seed: &LiveCellGroup, budget: u64, mode: OrbitMode, stepper: &Stepper) -> Result<OrbitRecord> {
    let seed_key = canonicalize(seed.live(), KeyMode::TranslationSymmetry)?;
    let mut trace = vec![TraceEntry { key: seed.id().clone(), anchor: seed.anchor() }];
    let mut seen: HashMap<(CanonicalKey, Option<Coord>), u64> = HashMap::new();
    let strict_anchor = |a: Coord| (mode == OrbitMode::Strict).then_some(a);
    seen.insert((seed.id().clone(), strict_anchor(seed.anchor())), 0);

    let mut cur = seed.live().to_vec();
    let mut classification = Classification::Unresolved { budget };
    for generation in 1..=budget {
        let next = stepper.step_cells(&cur)?;
        if next.is_empty() {
            classification = Classification::Terminating { length: generation };
            break;
        }
        let parts = partition_cells(&next);
        if parts.len() > 1 {
            let parent = anchor(&cur).expect("non-empty");
            let offspring = parts
                .into_iter()
                .map(|p| {
                    let a = anchor(&p).expect("non-empty");
                    Offspring {
                        id: canonicalize(&p, KeyMode::TranslationSymmetry).expect("non-empty"),
                        offset: (a.x - parent.x, a.y - parent.y),
                        cells: p.iter().map(|c| Coord::new(c.x - a.x, c.y - a.y)).collect(),
                    }
                })
                .collect();
            classification = Classification::Branching { at: generation, offspring };
            break;
        }
        let key = canonicalize(&next, KeyMode::Translation)?;
        let a = anchor(&next).expect("non-empty");
        if let Some(&first) = seen.get(&(key.clone(), strict_anchor(a))) {
            let prev = trace[first as usize].anchor;
            classification = Classification::Repeating {
                transient: first,
                period: generation - first,
                displacement: (a.x - prev.x, a.y - prev.y),
            };
            trace.push(TraceEntry { key, anchor: a });
            break;
        }
        seen.insert((key.clone(), strict_anchor(a)), generation);
        trace.push(TraceEntry { key, anchor: a });
        cur = next;
    }
    Ok(OrbitRecord { seed: seed_key, mode, budget, trace, classification })
}

/// Why a record failed [`replay`].
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("replay diverged at generation {generation}: {detail}")]
pub struct ReplayMismatch {
    pub generation: u64,
    pub detail: String,
}

/// Re-simulates `seed` and checks every field of `record` against it.
pub fn replay(record: &OrbitRecord, seed: &LiveCellGroup, stepper: &Stepper) -> Result<(), ReplayMismatch> {
    let fail = |generation: u64, detail: String| Err(ReplayMismatch { generation, detail });
    let seed_key = canonicalize(seed.live(), KeyMode::TranslationSymmetry).expect("groups are non-empty");
    if seed_key != record.seed {
        return fail(0, format!("seed key {} differs from recorded {}", seed_key, record.seed));
    }
    let mut u = seed.to_universe();
    for (generation, entry) in record.trace.iter().enumerate() {
        let generation = generation as u64;
        if generation > 0 {
            u = stepper.step(&u).map_err(|e| ReplayMismatch { generation, detail: e.to_string() })?;
        }
        if u.cells() != &entry.cells()[..] {
            return fail(generation, "state differs from trace".into());
        }
        if partition_cells(u.cells()).len() != 1 {
            return fail(generation, "traced state is not a single group".into());
        }
    }
    let last = record.trace.len() as u64 - 1;
    let distinct_prefix = |n: usize| -> Result<(), ReplayMismatch> {
        let mut seen = HashMap::new();
        for (i, e) in record.trace[..n].iter().enumerate() {
            let k = (e.key.clone(), (record.mode == OrbitMode::Strict).then_some(e.anchor));
            if let Some(j) = seen.insert(k, i) {
                return Err(ReplayMismatch {
                    generation: i as u64,
                    detail: format!("state repeats generation {j} earlier than recorded"),
                });
            }
        }
        Ok(())
    };
    match &record.classification {
        Classification::Terminating { length } => {
            if *length != last + 1 {
                return fail(last, format!("trace length {} does not match death at {length}", last + 1));
            }
            distinct_prefix(record.trace.len())?;
            let next = stepper.step(&u).map_err(|e| ReplayMismatch { generation: *length, detail: e.to_string() })?;
            if !next.is_empty() {
                return fail(*length, format!("{} cells alive", next.population()));
            }
        }
        Classification::Repeating { transient, period, displacement } => {
            if transient + period != last {
                return fail(last, "trace does not end at the first repeat".into());
            }
            distinct_prefix(record.trace.len() - 1)?;
            let start = &record.trace[*transient as usize];
            let end = &record.trace[last as usize];
            if start.key != end.key {
                return fail(last, "cycle does not close".into());
            }
            let d = (end.anchor.x - start.anchor.x, end.anchor.y - start.anchor.y);
            if d != *displacement {
                return fail(last, format!("displacement {d:?} differs from recorded {displacement:?}"));
            }
            if record.mode == OrbitMode::Strict && d != (0, 0) {
                return fail(last, "strict repeat with non-zero displacement".into());
            }
        }
        Classification::Branching { at, offspring } => {
            if *at != last + 1 {
                return fail(last, format!("trace length {} does not precede split at {at}", last + 1));
            }
            distinct_prefix(record.trace.len())?;
            let next = stepper.step(&u).map_err(|e| ReplayMismatch { generation: *at, detail: e.to_string() })?;
            let groups = partition(&next);
            if groups.len() < 2 || groups.len() != offspring.len() {
                return fail(*at, format!("{} groups, recorded {}", groups.len(), offspring.len()));
            }
            let parent = anchor(u.cells()).expect("non-empty");
            for (g, o) in groups.iter().zip(offspring) {
                let a = g.anchor();
                let key = canonicalize(g.live(), KeyMode::TranslationSymmetry).expect("non-empty");
                if key != o.id || (a.x - parent.x, a.y - parent.y) != o.offset {
                    return fail(*at, format!("offspring {} differs", o.id));
                }
            }
        }
        Classification::Unresolved { budget } => {
            if *budget != record.budget || last != *budget {
                return fail(last, "unresolved record does not span its budget".into());
            }
            distinct_prefix(record.trace.len())?;
        }
    }
    Ok(())
}
