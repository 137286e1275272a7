//! Running a universe until its groups have settled.
//!
//! A universe is settled when every live cell group, taken alone, is already
//! on its cycle (transient 0), and no pair of groups can ever meet again:
//!
//! * groups with equal velocity keep a periodic relative arrangement, so it
//!   is enough that their cells stay at least 3 apart over one common period;
//! * groups with different velocity are compared through their bounding
//!   boxes one common period `L` apart. The box gap at phase `s + kL` is a
//!   convex function of `k`, so if it is at least 3 now and grows over one
//!   period it never shrinks again.
//!
//! Cells at Chebyshev distance 3 or more share no neighbour, so neither
//! group can influence the other.

use std::collections::HashMap;
use std::sync::Arc;

use crate::lcg::{canonicalize, partition, CanonicalKey, KeyMode, LiveCellGroup};
use crate::pattern::{classify, lcm, Classification, OrbitMode, Velocity};
use crate::universe::{BoundingBox, Coord, Stepper, Universe};

/// Default classification budget for each group during settling.
pub const DEFAULT_GROUP_BUDGET: u64 = 256;

/// Common periods above this are not examined.
const MAX_JOINT_PERIOD: u64 = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SettleConfig {
    /// Last generation (absolute) that may be examined.
    pub horizon: u64,
    pub group_budget: u64,
    pub stepper: Stepper,
}

impl SettleConfig {
    pub fn new(horizon: u64, stepper: Stepper) -> Self {
        SettleConfig { horizon, group_budget: DEFAULT_GROUP_BUDGET, stepper }
    }
}

/// The cycle of a group that is already on it, relative to the group's
/// anchor at phase 0.
#[derive(Debug)]
pub struct Cycle {
    states: Vec<Vec<Coord>>,
    boxes: Vec<BoundingBox>,
    pub period: u64,
    pub displacement: (i64, i64),
}

impl Cycle {
    /// Builds the cycle of `g`, or `None` if `g` is not on a cycle within
    /// `budget` generations.
    pub fn of(g: &LiveCellGroup, budget: u64, stepper: &Stepper) -> crate::Result<Result<Cycle, Classification>> {
        let record = classify(g, budget, OrbitMode::Translation, stepper)?;
        match record.classification {
            Classification::Repeating { transient: 0, period, displacement } => {
                let origin = record.trace[0].anchor;
                let states: Vec<Vec<Coord>> = record.trace[..period as usize]
                    .iter()
                    .map(|e| e.cells().into_iter().map(|c| Coord::new(c.x - origin.x, c.y - origin.y)).collect())
                    .collect();
                let boxes = states.iter().map(|s| BoundingBox::of(s).expect("non-empty")).collect();
                Ok(Ok(Cycle { states, boxes, period, displacement }))
            }
            other => Ok(Err(other)),
        }
    }

    /// Cells at `t` generations after phase 0, relative to the phase-0 anchor.
    pub fn state_at(&self, t: u64) -> Vec<Coord> {
        let (k, s) = ((t / self.period) as i64, (t % self.period) as usize);
        let (dx, dy) = (self.displacement.0 * k, self.displacement.1 * k);
        self.states[s].iter().map(|c| Coord::new(c.x + dx, c.y + dy)).collect()
    }

    pub fn box_at(&self, t: u64) -> BoundingBox {
        let k = (t / self.period) as i64;
        self.boxes[(t % self.period) as usize].translated(self.displacement.0 * k, self.displacement.1 * k)
    }

    pub fn velocity(&self) -> Velocity {
        Classification::Repeating { transient: 0, period: self.period, displacement: self.displacement }
            .velocity()
            .expect("repeating")
    }

    /// Symmetry-reduced keys of the cycle's states, by phase.
    pub fn phase_keys(&self) -> Vec<CanonicalKey> {
        self.states.iter().map(|s| canonicalize(s, KeyMode::TranslationSymmetry).expect("non-empty")).collect()
    }
}

/// A cycle pinned in space and time: at `t = 0` the pattern shows phase
/// `phase`, and `anchor` is where the phase-0 state's anchor sits.
#[derive(Clone)]
pub struct Placed {
    pub cycle: Arc<Cycle>,
    pub anchor: Coord,
    pub phase: u64,
}

impl Placed {
    pub fn new(cycle: Arc<Cycle>, anchor: Coord) -> Self {
        Placed { cycle, anchor, phase: 0 }
    }

    pub fn cells_at(&self, t: u64) -> Vec<Coord> {
        self.cycle
            .state_at(self.phase + t)
            .into_iter()
            .map(|c| Coord::new(c.x + self.anchor.x, c.y + self.anchor.y))
            .collect()
    }

    pub fn box_at(&self, t: u64) -> BoundingBox {
        self.cycle.box_at(self.phase + t).translated(self.anchor.x, self.anchor.y)
    }

    /// The same pattern `t` generations later.
    pub fn advanced(&self, t: u64) -> Placed {
        Placed { cycle: self.cycle.clone(), anchor: self.anchor, phase: self.phase + t }
    }
}

pub(crate) fn min_distance(a: &[Coord], b: &[Coord]) -> u64 {
    let mut best = u64::MAX;
    for p in a {
        for q in b {
            best = best.min(p.chebyshev(*q));
        }
    }
    best
}

/// True when `a` and `b`, each evolving alone from now on, never come within
/// distance 2 of each other.
pub fn never_meet(a: &Placed, b: &Placed) -> bool {
    let l = lcm(a.cycle.period, b.cycle.period);
    if l > MAX_JOINT_PERIOD {
        return false;
    }
    if a.cycle.velocity() == b.cycle.velocity() {
        (0..l).all(|t| a.box_at(t).gap(&b.box_at(t)) >= 3 || min_distance(&a.cells_at(t), &b.cells_at(t)) >= 3)
    } else {
        (0..l).all(|t| {
            let now = a.box_at(t).gap(&b.box_at(t));
            let later = a.box_at(t + l).gap(&b.box_at(t + l));
            now >= 3 && later > now
        })
    }
}

/// One group of a settled universe.
#[derive(Clone)]
pub struct SettledGroup {
    pub placed: Placed,
    pub cells: Vec<Coord>,
}

impl SettledGroup {
    pub fn anchor(&self) -> Coord {
        crate::lcg::anchor(&self.cells).expect("groups are non-empty")
    }

    pub fn cycle(&self) -> &Cycle {
        &self.placed.cycle
    }
}

#[derive(Clone)]
pub enum SettleStatus {
    Settled { groups: Vec<SettledGroup> },
    Unresolved { reason: String },
}

#[derive(Clone)]
pub struct Settlement {
    /// Generation at which the status was decided.
    pub generation: u64,
    pub universe: Universe,
    pub status: SettleStatus,
}

enum Verdict {
    Settled(Vec<SettledGroup>),
    /// Not settled; earliest generation offset worth checking again.
    Wait(u64),
}

#[derive(Clone)]
enum Cached {
    OnCycle(Arc<Cycle>),
    Wait(u64),
}

/// Cycle detection results keyed by translation-normal form; shared by all
/// checks of one settle run.
#[derive(Default)]
pub struct CycleCache {
    map: HashMap<CanonicalKey, Cached>,
}

impl CycleCache {
    fn lookup(&mut self, g: &LiveCellGroup, cfg: &SettleConfig) -> crate::Result<Cached> {
        if let Some(c) = self.map.get(g.id()) {
            return Ok(c.clone());
        }
        let normal = LiveCellGroup::from_live(g.id().normal_form().to_vec())?;
        let cached = match Cycle::of(&normal, cfg.group_budget, &cfg.stepper)? {
            Ok(cycle) => Cached::OnCycle(Arc::new(cycle)),
            Err(Classification::Repeating { transient, .. }) => Cached::Wait(transient),
            Err(Classification::Terminating { length }) => Cached::Wait(length),
            Err(Classification::Branching { at, .. }) => Cached::Wait(at),
            Err(Classification::Unresolved { budget }) => Cached::Wait(budget),
        };
        self.map.insert(g.id().clone(), cached.clone());
        Ok(cached)
    }
}

fn check(u: &Universe, cfg: &SettleConfig, cache: &mut CycleCache) -> crate::Result<Verdict> {
    let groups = partition(u);
    let mut placed = Vec::with_capacity(groups.len());
    let mut wait = u64::MAX;
    for g in &groups {
        match cache.lookup(g, cfg)? {
            Cached::OnCycle(cycle) => placed.push(SettledGroup {
                placed: Placed::new(cycle, g.anchor()),
                cells: g.live().to_vec(),
            }),
            Cached::Wait(w) => wait = wait.min(w.max(1)),
        }
    }
    if wait != u64::MAX {
        return Ok(Verdict::Wait(wait));
    }
    for i in 0..placed.len() {
        for j in i + 1..placed.len() {
            if !never_meet(&placed[i].placed, &placed[j].placed) {
                return Ok(Verdict::Wait(1));
            }
        }
    }
    Ok(Verdict::Settled(placed))
}

/// Steps `u` until it settles or `cfg.horizon` passes.
pub fn settle(u: Universe, cfg: &SettleConfig) -> Settlement {
    settle_with_cache(u, cfg, &mut CycleCache::default())
}

pub fn settle_with_cache(mut u: Universe, cfg: &SettleConfig, cache: &mut CycleCache) -> Settlement {
    let mut next_check = u.generation();
    loop {
        if u.generation() >= next_check {
            match check(&u, cfg, cache) {
                Ok(Verdict::Settled(groups)) => {
                    return Settlement { generation: u.generation(), universe: u, status: SettleStatus::Settled { groups } }
                }
                Ok(Verdict::Wait(w)) => next_check = u.generation() + w,
                Err(e) => {
                    return Settlement {
                        generation: u.generation(),
                        universe: u,
                        status: SettleStatus::Unresolved { reason: e.to_string() },
                    }
                }
            }
        }
        if u.generation() >= cfg.horizon {
            return Settlement {
                generation: u.generation(),
                universe: u,
                status: SettleStatus::Unresolved { reason: format!("horizon {} reached", cfg.horizon) },
            };
        }
        match cfg.stepper.step(&u) {
            Ok(next) => u = next,
            Err(e) => {
                return Settlement {
                    generation: u.generation(),
                    universe: u,
                    status: SettleStatus::Unresolved { reason: e.to_string() },
                }
            }
        }
    }
}
