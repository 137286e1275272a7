//! Test-only oracles, written from the definitions and sharing no code with
//! the library's partition, canonicalization or stepping paths.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet};

use lcg_core::{Coord, Universe};
use rand::Rng;

pub type Cell = (i64, i64);

pub const GLIDER: [Cell; 5] = [(1, 0), (2, 1), (0, 2), (1, 2), (2, 2)];
pub const BLOCK: [Cell; 4] = [(0, 0), (1, 0), (0, 1), (1, 1)];

pub fn universe(cells: &[Cell]) -> Universe {
    Universe::from_cells(cells.iter().map(|&c| c.into()))
}

pub fn coords(cells: &[Cell]) -> Vec<Coord> {
    let mut v: Vec<Coord> = cells.iter().map(|&c| c.into()).collect();
    v.sort();
    v
}

/// Classes of the literal connectedness relation: two neighbouring cells are
/// linked when at least one of them is alive. Union-find runs over live cells
/// and every dead cell next to one; only classes with a live cell are kept,
/// and each class is reported as its sorted live cells.
pub fn literal_partition(live: &[Cell]) -> BTreeSet<Vec<Cell>> {
    let alive: HashSet<Cell> = live.iter().copied().collect();
    let mut cells: Vec<Cell> = Vec::new();
    let mut index: HashMap<Cell, usize> = HashMap::new();
    let mut add = |c: Cell, cells: &mut Vec<Cell>| -> usize {
        *index.entry(c).or_insert_with(|| {
            cells.push(c);
            cells.len() - 1
        })
    };
    for &c in live {
        add(c, &mut cells);
        for dy in -1..=1 {
            for dx in -1..=1 {
                add((c.0 + dx, c.1 + dy), &mut cells);
            }
        }
    }
    let mut parent: Vec<usize> = (0..cells.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let lookup: HashMap<Cell, usize> = cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    for (i, &c) in cells.iter().enumerate() {
        for dy in -1..=1 {
            for dx in -1..=1 {
                if (dx, dy) == (0, 0) {
                    continue;
                }
                let n = (c.0 + dx, c.1 + dy);
                if let Some(&j) = lookup.get(&n) {
                    if alive.contains(&c) || alive.contains(&n) {
                        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                        parent[a] = b;
                    }
                }
            }
        }
    }
    let mut classes: HashMap<usize, Vec<Cell>> = HashMap::new();
    for &c in live {
        let r = find(&mut parent, lookup[&c]);
        classes.entry(r).or_default().push(c);
    }
    classes
        .into_values()
        .map(|mut v| {
            v.sort();
            v.dedup();
            v
        })
        .collect()
}

/// Smallest origin-normalized image under the 8 square symmetries, as a
/// sorted list of (x, y) pairs.
pub fn brute_symmetry_key(cells: &[Cell]) -> Vec<Cell> {
    let maps: [fn(Cell) -> Cell; 8] = [
        |(x, y)| (x, y),
        |(x, y)| (-y, x),
        |(x, y)| (-x, -y),
        |(x, y)| (y, -x),
        |(x, y)| (-x, y),
        |(x, y)| (x, -y),
        |(x, y)| (y, x),
        |(x, y)| (-y, -x),
    ];
    maps.iter()
        .map(|m| {
            let t: Vec<Cell> = cells.iter().map(|&c| m(c)).collect();
            let mx = t.iter().map(|c| c.0).min().unwrap();
            let my = t.iter().map(|c| c.1).min().unwrap();
            let mut n: Vec<Cell> = t.iter().map(|&(x, y)| (x - mx, y - my)).collect();
            n.sort();
            n
        })
        .min()
        .unwrap()
}

/// Counts symmetry classes of single-group live sets with exactly `n` cells
/// by trying every `n`-subset of a `(2k-1)^2` box.
pub fn brute_seed_count(n: usize, k: usize) -> usize {
    let side = 2 * k as i64 - 1;
    let box_cells: Vec<Cell> = (0..side).flat_map(|y| (0..side).map(move |x| (x, y))).collect();
    let mut classes: HashSet<Vec<Cell>> = HashSet::new();
    let mut chosen = Vec::with_capacity(n);
    fn rec(
        start: usize,
        n: usize,
        box_cells: &[Cell],
        chosen: &mut Vec<Cell>,
        classes: &mut HashSet<Vec<Cell>>,
    ) {
        if chosen.len() == n {
            if literal_partition(chosen).len() == 1 {
                classes.insert(brute_symmetry_key(chosen));
            }
            return;
        }
        for i in start..box_cells.len() {
            chosen.push(box_cells[i]);
            rec(i + 1, n, box_cells, chosen, classes);
            chosen.pop();
        }
    }
    rec(0, n, &box_cells, &mut chosen, &mut classes);
    classes.len()
}

/// Reference rule applied cell by cell on a padded dense grid.
pub fn dense_step(live: &[Cell]) -> BTreeSet<Cell> {
    let set: HashSet<Cell> = live.iter().copied().collect();
    let mut out = BTreeSet::new();
    if live.is_empty() {
        return out;
    }
    let (x0, x1) = (live.iter().map(|c| c.0).min().unwrap() - 1, live.iter().map(|c| c.0).max().unwrap() + 1);
    let (y0, y1) = (live.iter().map(|c| c.1).min().unwrap() - 1, live.iter().map(|c| c.1).max().unwrap() + 1);
    for y in y0..=y1 {
        for x in x0..=x1 {
            let mut n = 0;
            for dy in -1..=1 {
                for dx in -1..=1 {
                    if (dx, dy) != (0, 0) && set.contains(&(x + dx, y + dy)) {
                        n += 1;
                    }
                }
            }
            let alive = set.contains(&(x, y));
            if n == 3 || (alive && n == 2) {
                out.insert((x, y));
            }
        }
    }
    out
}

pub fn soup<R: Rng>(rng: &mut R, w: i64, h: i64, density: f64) -> Vec<Cell> {
    let mut v = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if rng.gen_bool(density) {
                v.push((x, y));
            }
        }
    }
    v
}

/// Several small random clusters spread over a grid so that most universes
/// hold more than one group.
pub fn clustered<R: Rng>(rng: &mut R) -> Vec<Cell> {
    let mut v = Vec::new();
    let n = rng.gen_range(2..6);
    for i in 0..n {
        let (ox, oy) = ((i % 3) * 12 + rng.gen_range(0..3), (i / 3) * 12 + rng.gen_range(0..3));
        for _ in 0..rng.gen_range(3..9) {
            v.push((ox + rng.gen_range(0..5), oy + rng.gen_range(0..5)));
        }
    }
    v.sort();
    v.dedup();
    v
}

pub fn cells_of(u: &Universe) -> Vec<Cell> {
    u.cells().iter().map(|c| (c.x, c.y)).collect()
}
