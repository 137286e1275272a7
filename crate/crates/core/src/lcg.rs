//! Live cell groups.
//!
//! Two cells are connected when a chain of Moore neighbours joins them in
//! which every consecutive pair contains at least one live cell. Classes that
//! contain a live cell are live cell groups. Because a chain may pass through
//! a single dead cell but never two dead cells in a row, two live cells share
//! a group exactly when they are joined by a chain of live cells whose
//! consecutive members are at Chebyshev distance at most 2; [`partition`]
//! runs union-find over that relation and then attaches the dead boundary.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::universe::{Coord, Stepper, Universe, MOORE};

/// One of the 8 symmetries of the square, acting on coordinates about the
/// origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symmetry {
    Identity,
    Rot90,
    Rot180,
    Rot270,
    FlipX,
    FlipY,
    Transpose,
    AntiTranspose,
}

impl Symmetry {
    pub const ALL: [Symmetry; 8] = [
        Symmetry::Identity,
        Symmetry::Rot90,
        Symmetry::Rot180,
        Symmetry::Rot270,
        Symmetry::FlipX,
        Symmetry::FlipY,
        Symmetry::Transpose,
        Symmetry::AntiTranspose,
    ];

    pub fn apply(self, c: Coord) -> Coord {
        let (x, y) = (c.x, c.y);
        let (x, y) = match self {
            Symmetry::Identity => (x, y),
            Symmetry::Rot90 => (-y, x),
            Symmetry::Rot180 => (-x, -y),
            Symmetry::Rot270 => (y, -x),
            Symmetry::FlipX => (-x, y),
            Symmetry::FlipY => (x, -y),
            Symmetry::Transpose => (y, x),
            Symmetry::AntiTranspose => (-y, -x),
        };
        Coord::new(x, y)
    }

    /// Applies the symmetry to a displacement vector.
    pub fn apply_vec(self, (dx, dy): (i64, i64)) -> (i64, i64) {
        let c = self.apply(Coord::new(dx, dy));
        (c.x, c.y)
    }
}

/// Equivalence used when canonicalizing a cell set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KeyMode {
    /// Translations only.
    Translation,
    /// Translations composed with the 8 square symmetries.
    TranslationSymmetry,
}

/// Canonical representative of a cell set under a [`KeyMode`].
///
/// Equality, hashing and ordering go through the normal form; the fingerprint
/// is a short SHA-256 digest used as a printable id.
#[derive(Clone, Debug)]
pub struct CanonicalKey {
    normal_form: Vec<Coord>,
    fingerprint: [u8; 16],
}

impl CanonicalKey {
    fn from_normal_form(normal_form: Vec<Coord>) -> Self {
        let mut h = Sha256::new();
        for c in &normal_form {
            h.update(c.x.to_le_bytes());
            h.update(c.y.to_le_bytes());
        }
        let digest = h.finalize();
        let mut fingerprint = [0u8; 16];
        fingerprint.copy_from_slice(&digest[..16]);
        CanonicalKey { normal_form, fingerprint }
    }

    /// Cells translated to the origin, row-major sorted.
    pub fn normal_form(&self) -> &[Coord] {
        &self.normal_form
    }

    pub fn population(&self) -> usize {
        self.normal_form.len()
    }

    pub fn fingerprint(&self) -> &[u8; 16] {
        &self.fingerprint
    }

    /// Lowercase hex of the fingerprint; this is the catalog id.
    pub fn hex(&self) -> String {
        self.fingerprint.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl PartialEq for CanonicalKey {
    fn eq(&self, other: &Self) -> bool {
        self.normal_form == other.normal_form
    }
}

impl Eq for CanonicalKey {}

impl std::hash::Hash for CanonicalKey {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.fingerprint.hash(state);
    }
}

impl Ord for CanonicalKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.normal_form.cmp(&other.normal_form)
    }
}

impl PartialOrd for CanonicalKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.hex())
    }
}

/// Min corner of the bounding box of a non-empty cell set.
pub fn anchor(cells: &[Coord]) -> Option<Coord> {
    let first = cells.first()?;
    let mut a = *first;
    for c in cells {
        a.x = a.x.min(c.x);
        a.y = a.y.min(c.y);
    }
    Some(a)
}

fn normalize_translation(cells: impl Iterator<Item = Coord> + Clone) -> Vec<Coord> {
    let min_x = cells.clone().map(|c| c.x).min().unwrap_or(0);
    let min_y = cells.clone().map(|c| c.y).min().unwrap_or(0);
    let mut out: Vec<Coord> = cells.map(|c| Coord::new(c.x - min_x, c.y - min_y)).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Canonical key of `cells` under `mode`.
pub fn canonicalize(cells: &[Coord], mode: KeyMode) -> Result<CanonicalKey> {
    canonical_with_symmetry(cells, mode).map(|(k, _)| k)
}

/// Canonical key together with the symmetry that produced it.
pub fn canonical_with_symmetry(cells: &[Coord], mode: KeyMode) -> Result<(CanonicalKey, Symmetry)> {
    if cells.is_empty() {
        return Err(Error::EmptyPattern);
    }
    let syms: &[Symmetry] = match mode {
        KeyMode::Translation => &Symmetry::ALL[..1],
        KeyMode::TranslationSymmetry => &Symmetry::ALL,
    };
    let mut best: Option<(Vec<Coord>, Symmetry)> = None;
    for &s in syms {
        let nf = normalize_translation(cells.iter().map(|&c| s.apply(c)));
        if best.as_ref().is_none_or(|(b, _)| nf < *b) {
            best = Some((nf, s));
        }
    }
    let (nf, s) = best.expect("at least one symmetry");
    Ok((CanonicalKey::from_normal_form(nf), s))
}

/// One connectedness class containing at least one live cell.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LiveCellGroup {
    live: Vec<Coord>,
    boundary: Vec<Coord>,
    id: CanonicalKey,
}

impl LiveCellGroup {
    /// Builds a group from its live cells, which must be non-empty and
    /// connected (checked in debug builds).
    pub fn from_live(mut live: Vec<Coord>) -> Result<Self> {
        live.sort_unstable();
        live.dedup();
        let id = canonicalize(&live, KeyMode::Translation)?;
        let boundary = boundary_of(&live);
        debug_assert_eq!(partition_cells(&live).len(), 1, "cells do not form a single group");
        Ok(LiveCellGroup { live, boundary, id })
    }

    pub fn live(&self) -> &[Coord] {
        &self.live
    }

    pub fn boundary(&self) -> &[Coord] {
        &self.boundary
    }

    /// Translation-only key of the live set.
    pub fn id(&self) -> &CanonicalKey {
        &self.id
    }

    pub fn anchor(&self) -> Coord {
        anchor(&self.live).expect("group is non-empty")
    }

    pub fn population(&self) -> usize {
        self.live.len()
    }

    pub fn to_universe(&self) -> Universe {
        Universe::from_sorted(self.live.clone(), 0)
    }
}

/// Dead cells with at least one live neighbour in `live` (which must be sorted).
fn boundary_of(live: &[Coord]) -> Vec<Coord> {
    let mut out = BTreeSet::new();
    for c in live {
        for (dx, dy) in MOORE {
            let n = Coord::new(c.x + dx, c.y + dy);
            if live.binary_search(&n).is_err() {
                out.insert(n);
            }
        }
    }
    out.into_iter().collect()
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), rank: vec![0; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

/// Groups live cells (sorted, unique) into classes; each class is sorted and
/// classes are ordered by their first cell.
pub(crate) fn partition_cells(live: &[Coord]) -> Vec<Vec<Coord>> {
    let index: HashMap<Coord, usize> = live.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut uf = UnionFind::new(live.len());
    for (i, c) in live.iter().enumerate() {
        // Half of the 5x5 window suffices since the relation is symmetric.
        for dy in 0..=2i64 {
            for dx in -2..=2i64 {
                if dy == 0 && dx <= 0 {
                    continue;
                }
                if let Some(&j) = index.get(&Coord::new(c.x + dx, c.y + dy)) {
                    uf.union(i, j);
                }
            }
        }
    }
    let mut classes: HashMap<usize, Vec<Coord>> = HashMap::new();
    let mut order = Vec::new();
    for (i, &c) in live.iter().enumerate() {
        let r = uf.find(i);
        classes
            .entry(r)
            .or_insert_with(|| {
                order.push(r);
                Vec::new()
            })
            .push(c);
    }
    // `live` is sorted, so each class is already sorted and `order` follows
    // first cells.
    order.into_iter().map(|r| classes.remove(&r).unwrap()).collect()
}

/// Splits a universe into its live cell groups, ordered by first live cell.
pub fn partition(u: &Universe) -> Vec<LiveCellGroup> {
    partition_cells(u.cells())
        .into_iter()
        .map(|live| {
            let id = canonicalize(&live, KeyMode::Translation).expect("classes are non-empty");
            let boundary = boundary_of(&live);
            LiveCellGroup { live, boundary, id }
        })
        .collect()
}

/// Evolves `g` alone on an empty grid for one generation and partitions the
/// result.
pub fn lcg_successors(g: &LiveCellGroup, stepper: &Stepper) -> Result<Vec<LiveCellGroup>> {
    let next = stepper.step(&g.to_universe())?;
    Ok(partition(&next))
}
