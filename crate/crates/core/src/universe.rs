//! The unbounded B3/S23 universe and its two stepping engines.
//!
//! A [`Universe`] is a sorted, duplicate-free list of live [`Coord`]s plus a
//! generation counter. [`step`] is the reference engine: it counts neighbours
//! in a hash map. [`step_fast`] packs the bounding box into 64-bit words and
//! evaluates the rule with a bit-sliced adder. Both obey the same contract and
//! every other module only ever talks to [`Stepper`].

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default safety limit on the number of live cells in one universe.
pub const DEFAULT_POPULATION_LIMIT: usize = 10_000_000;

/// A grid cell. `x` grows rightward, `y` grows downward.
///
/// Ordering is row-major: `y` first, then `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coord {
    pub x: i64,
    pub y: i64,
}

impl Coord {
    pub const fn new(x: i64, y: i64) -> Self {
        Coord { x, y }
    }

    pub fn checked_offset(self, dx: i64, dy: i64) -> Option<Coord> {
        Some(Coord {
            x: self.x.checked_add(dx)?,
            y: self.y.checked_add(dy)?,
        })
    }

    /// Chebyshev (king-move) distance.
    pub fn chebyshev(self, other: Coord) -> u64 {
        self.x.abs_diff(other.x).max(self.y.abs_diff(other.y))
    }
}

impl Ord for Coord {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.y, self.x).cmp(&(other.y, other.x))
    }
}

impl PartialOrd for Coord {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl From<(i64, i64)> for Coord {
    fn from((x, y): (i64, i64)) -> Self {
        Coord { x, y }
    }
}

pub(crate) const MOORE: [(i64, i64); 8] = [
    (-1, -1),
    (0, -1),
    (1, -1),
    (-1, 0),
    (1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
];

/// The 8 Moore neighbours of `c`, in row-major order.
///
/// # Panics
///
/// Panics if `c` lies on the edge of the `i64` range; use
/// [`checked_neighbors`] where that can happen.
pub fn neighbors(c: Coord) -> [Coord; 8] {
    checked_neighbors(c).expect("coordinate at the edge of the representable range")
}

pub fn checked_neighbors(c: Coord) -> Option<[Coord; 8]> {
    let mut out = [c; 8];
    for (slot, (dx, dy)) in out.iter_mut().zip(MOORE) {
        *slot = c.checked_offset(dx, dy)?;
    }
    Some(out)
}

/// Inclusive bounding box of a non-empty cell set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoundingBox {
    pub min: Coord,
    pub max: Coord,
}

impl BoundingBox {
    pub fn of(cells: &[Coord]) -> Option<BoundingBox> {
        let first = *cells.first()?;
        let mut b = BoundingBox { min: first, max: first };
        for c in &cells[1..] {
            b.min.x = b.min.x.min(c.x);
            b.min.y = b.min.y.min(c.y);
            b.max.x = b.max.x.max(c.x);
            b.max.y = b.max.y.max(c.y);
        }
        Some(b)
    }

    pub fn width(&self) -> u64 {
        self.max.x.abs_diff(self.min.x) + 1
    }

    pub fn height(&self) -> u64 {
        self.max.y.abs_diff(self.min.y) + 1
    }

    /// Chebyshev gap between two boxes: a lower bound on the distance between
    /// any cell of one and any cell of the other. Non-positive when the
    /// projections overlap on both axes.
    pub fn gap(&self, other: &BoundingBox) -> i64 {
        let gx = (other.min.x - self.max.x).max(self.min.x - other.max.x);
        let gy = (other.min.y - self.max.y).max(self.min.y - other.max.y);
        gx.max(gy)
    }

    pub fn translated(&self, dx: i64, dy: i64) -> BoundingBox {
        BoundingBox {
            min: Coord::new(self.min.x + dx, self.min.y + dy),
            max: Coord::new(self.max.x + dx, self.max.y + dy),
        }
    }
}

impl fmt::Display for BoundingBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.min, self.max)
    }
}

/// A finite set of live cells on the unbounded grid, with a generation count.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Universe {
    live: Vec<Coord>,
    generation: u64,
}

impl Universe {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a universe at generation 0; duplicates are collapsed.
    pub fn from_cells<I: IntoIterator<Item = Coord>>(cells: I) -> Self {
        let mut live: Vec<Coord> = cells.into_iter().collect();
        live.sort_unstable();
        live.dedup();
        Universe { live, generation: 0 }
    }

    pub(crate) fn from_sorted(live: Vec<Coord>, generation: u64) -> Self {
        debug_assert!(live.windows(2).all(|w| w[0] < w[1]));
        Universe { live, generation }
    }

    pub fn with_generation(mut self, generation: u64) -> Self {
        self.generation = generation;
        self
    }

    /// Live cells in row-major order.
    pub fn cells(&self) -> &[Coord] {
        &self.live
    }

    pub fn into_cells(self) -> Vec<Coord> {
        self.live
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn population(&self) -> usize {
        self.live.len()
    }

    pub fn is_empty(&self) -> bool {
        self.live.is_empty()
    }

    pub fn contains(&self, c: Coord) -> bool {
        self.live.binary_search(&c).is_ok()
    }

    pub fn bounding_box(&self) -> Option<BoundingBox> {
        BoundingBox::of(&self.live)
    }

    /// Same live set, ignoring the generation counter.
    pub fn same_cells(&self, other: &Universe) -> bool {
        self.live == other.live
    }

    pub fn translated(&self, dx: i64, dy: i64) -> Universe {
        Universe {
            live: self.live.iter().map(|c| Coord::new(c.x + dx, c.y + dy)).collect(),
            generation: self.generation,
        }
    }

    /// Applies one of the 8 square symmetries about the origin.
    pub fn transformed(&self, sym: crate::lcg::Symmetry) -> Universe {
        let mut live: Vec<Coord> = self.live.iter().map(|&c| sym.apply(c)).collect();
        live.sort_unstable();
        Universe { live, generation: self.generation }
    }

    /// Union of two universes; the generation counter of `self` is kept.
    pub fn union(&self, other: &Universe) -> Universe {
        let mut live = Vec::with_capacity(self.live.len() + other.live.len());
        live.extend_from_slice(&self.live);
        live.extend_from_slice(&other.live);
        live.sort_unstable();
        live.dedup();
        Universe { live, generation: self.generation }
    }
}

/// Which engine a [`Stepper`] runs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Naive,
    #[default]
    Fast,
}

impl std::str::FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "naive" => Ok(Engine::Naive),
            "fast" => Ok(Engine::Fast),
            other => Err(format!("unknown engine `{other}` (expected naive or fast)")),
        }
    }
}

/// Engine choice plus resource limits. Cheap to copy and shared by every
/// module that advances patterns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Stepper {
    pub engine: Engine,
    pub population_limit: usize,
}

impl Default for Stepper {
    fn default() -> Self {
        Stepper { engine: Engine::Fast, population_limit: DEFAULT_POPULATION_LIMIT }
    }
}

impl Stepper {
    pub fn new(engine: Engine, population_limit: usize) -> Self {
        Stepper { engine, population_limit }
    }

    pub fn step(&self, u: &Universe) -> Result<Universe> {
        check_range(u)?;
        let next = match self.engine {
            Engine::Naive => naive_next(&u.live),
            Engine::Fast => fast_next(&u.live),
        };
        if next.len() > self.population_limit {
            return Err(Error::PopulationLimit { population: next.len(), limit: self.population_limit });
        }
        Ok(Universe::from_sorted(next, u.generation + 1))
    }

    pub fn step_n(&self, u: &Universe, n: u64) -> Result<Universe> {
        let mut cur = u.clone();
        for _ in 0..n {
            cur = self.step(&cur)?;
        }
        Ok(cur)
    }

    /// Steps a bare cell set in isolation.
    pub fn step_cells(&self, cells: &[Coord]) -> Result<Vec<Coord>> {
        Ok(self.step(&Universe::from_sorted(cells.to_vec(), 0))?.live)
    }
}

/// Reference engine with the default population limit.
pub fn step(u: &Universe) -> Result<Universe> {
    Stepper::new(Engine::Naive, DEFAULT_POPULATION_LIMIT).step(u)
}

/// `n`-fold [`step`]; `step_n(u, 0)` is `u`.
pub fn step_n(u: &Universe, n: u64) -> Result<Universe> {
    Stepper::new(Engine::Naive, DEFAULT_POPULATION_LIMIT).step_n(u, n)
}

/// Bit-parallel engine with the default population limit.
pub fn step_fast(u: &Universe) -> Result<Universe> {
    Stepper::new(Engine::Fast, DEFAULT_POPULATION_LIMIT).step(u)
}

fn check_range(u: &Universe) -> Result<()> {
    if let Some(b) = u.bounding_box() {
        // Births reach one cell past the box and the fast engine pads by one
        // more, so keep two cells of headroom on every side.
        let lo = i64::MIN + 2;
        let hi = i64::MAX - 2;
        if b.min.x < lo || b.min.y < lo || b.max.x > hi || b.max.y > hi {
            return Err(Error::CoordinateOverflow);
        }
    }
    Ok(())
}

fn naive_next(live: &[Coord]) -> Vec<Coord> {
    let mut counts: HashMap<Coord, u8> = HashMap::with_capacity(live.len() * 8);
    for &c in live {
        for (dx, dy) in MOORE {
            *counts.entry(Coord::new(c.x + dx, c.y + dy)).or_insert(0) += 1;
        }
    }
    let mut next: Vec<Coord> = counts
        .into_iter()
        .filter(|&(c, n)| n == 3 || (n == 2 && live.binary_search(&c).is_ok()))
        .map(|(c, _)| c)
        .collect();
    next.sort_unstable();
    next
}

/// Dense bit grid over the bounding box, padded by one dead cell on each side.
struct BitGrid {
    origin: Coord,
    words_per_row: usize,
    rows: usize,
    bits: Vec<u64>,
}

impl BitGrid {
    fn from_cells(live: &[Coord]) -> Option<BitGrid> {
        let b = BoundingBox::of(live)?;
        let origin = Coord::new(b.min.x - 1, b.min.y - 1);
        let width = (b.width() + 2) as usize;
        let rows = (b.height() + 2) as usize;
        let words_per_row = width.div_ceil(64);
        let mut bits = vec![0u64; words_per_row * rows];
        for c in live {
            let col = (c.x - origin.x) as usize;
            let row = (c.y - origin.y) as usize;
            bits[row * words_per_row + col / 64] |= 1 << (col % 64);
        }
        Some(BitGrid { origin, words_per_row, rows, bits })
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.bits[r * self.words_per_row..(r + 1) * self.words_per_row]
    }
}

#[inline]
fn full_add(a: u64, b: u64, c: u64) -> (u64, u64) {
    let t = a ^ b;
    (t ^ c, (a & b) | (c & t))
}

fn fast_next(live: &[Coord]) -> Vec<Coord> {
    let Some(grid) = BitGrid::from_cells(live) else {
        return Vec::new();
    };
    let wpr = grid.words_per_row;
    let zero = vec![0u64; wpr];
    let mut out = Vec::new();
    // Bit k of word w is column 64*w + k; "west" means column - 1.
    let west = |row: &[u64], w: usize| (row[w] << 1) | if w > 0 { row[w - 1] >> 63 } else { 0 };
    let east = |row: &[u64], w: usize| (row[w] >> 1) | if w + 1 < row.len() { row[w + 1] << 63 } else { 0 };
    for r in 0..grid.rows {
        let above = if r > 0 { grid.row(r - 1) } else { &zero[..] };
        let below = if r + 1 < grid.rows { grid.row(r + 1) } else { &zero[..] };
        let cur = grid.row(r);
        for w in 0..wpr {
            let (s0, c0) = full_add(west(above, w), above[w], east(above, w));
            let (s1, c1) = full_add(west(cur, w), east(cur, w), west(below, w));
            let (s2, c2) = (below[w] ^ east(below, w), below[w] & east(below, w));
            let (ones, c3) = full_add(s0, s1, s2);
            let (t, c4) = full_add(c0, c1, c2);
            let twos = t ^ c3;
            let c5 = t & c3;
            let mut next = twos & !c4 & !c5 & (ones | cur[w]);
            while next != 0 {
                let k = next.trailing_zeros() as usize;
                next &= next - 1;
                let col = (w * 64 + k) as i64;
                out.push(Coord::new(grid.origin.x + col, grid.origin.y + r as i64));
            }
        }
    }
    out
}
