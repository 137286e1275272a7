//! Acceptance criteria. Each test prints one `criterion N: PASS|FAIL` line.
//!
//!     cargo test -p lcg-core --test acceptance -- --nocapture --test-threads 1

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use common::*;
use lcg_core::enumerate::catalog_from_seeds;
use lcg_core::formats::{emit_plaintext, emit_rle, load_catalog, parse_plaintext, parse_rle, save_catalog, table_to_json};
use lcg_core::settle::SettledGroup;
use lcg_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(n: u32, ok: bool, elapsed: Duration, limit: Duration, detail: &str) {
    let within = elapsed <= limit;
    let verdict = if ok && within { "PASS" } else { "FAIL" };
    println!("criterion {n}: {verdict} ({:.2?} of {:.0?}) {detail}", elapsed, limit);
    assert!(ok, "criterion {n} failed: {detail}");
    assert!(within, "criterion {n} exceeded its time limit: {elapsed:.2?} > {limit:.0?}");
}

fn group(cells: &[Cell]) -> LiveCellGroup {
    LiveCellGroup::from_live(coords(cells)).unwrap()
}

#[test]
fn criterion_01_glider_law() {
    let t = Instant::now();
    let s = Stepper::default();
    let r = classify(&group(&GLIDER), DEFAULT_BUDGET, OrbitMode::Translation, &s).unwrap();
    let Classification::Repeating { transient, period, displacement } = r.classification else {
        return report(1, false, t.elapsed(), Duration::from_secs(1), &format!("got {}", r.classification));
    };
    let shape_ok = transient == 0 && period == 4 && displacement.0.abs() == 1 && displacement.1.abs() == 1;
    let moved = step_n(&universe(&GLIDER), 4).unwrap();
    let expected = universe(&GLIDER).translated(displacement.0, displacement.1);
    let ok = shape_ok && moved.same_cells(&expected);
    report(1, ok, t.elapsed(), Duration::from_secs(1), &format!("{}", r.classification));
}

#[test]
fn criterion_02_strict_mode_contrast() {
    let t = Instant::now();
    let r = classify(&group(&GLIDER), 4096, OrbitMode::Strict, &Stepper::default()).unwrap();
    let ok = r.classification == Classification::Unresolved { budget: 4096 };
    report(2, ok, t.elapsed(), Duration::from_secs(1), &format!("{}", r.classification));
}

#[test]
fn criterion_03_taxonomy_completeness() {
    let t = Instant::now();
    let s = Stepper::default();
    let c = build_catalog(4, 4096, true, DEFAULT_ENTRY_CAP, &s).unwrap();
    let summary = c.summary();
    let failures: Vec<String> = c
        .entries()
        .iter()
        .filter_map(|e| e.verify(4096, &s).err().map(|m| format!("{}: {m}", e.hex())))
        .collect();
    let ok = c.complete && summary["unresolved"] == 0 && failures.is_empty();
    report(3, ok, t.elapsed(), Duration::from_secs(60), &format!("{} entries {summary:?} replay failures {failures:?}", c.len()));
}

#[test]
fn criterion_04_seed_count_oracle() {
    let t = Instant::now();
    let mut detail = Vec::new();
    let mut ok = true;
    for k in 1..=4 {
        let seeds = enumerate_seeds(k);
        let expected: usize = (1..=k).map(|n| brute_seed_count(n, k)).sum();
        detail.push(format!("K={k}: {} vs brute {expected}", seeds.len()));
        ok &= seeds.len() == expected;
    }
    report(4, ok, t.elapsed(), Duration::from_secs(60), &detail.join(", "));
}

#[test]
fn criterion_05_triomino_facts() {
    let t = Instant::now();
    let s = Stepper::default();
    let straight = classify(&group(&[(0, 0), (1, 0), (2, 0)]), 64, OrbitMode::Translation, &s).unwrap();
    let ell = classify(&group(&[(0, 0), (1, 0), (0, 1)]), 64, OrbitMode::Translation, &s).unwrap();
    let straight_ok = matches!(straight.classification, Classification::Repeating { transient: 1, period: 2, .. });
    let ell_ok = matches!(ell.classification, Classification::Repeating { transient: 1, period: 1, .. });
    report(
        5,
        straight_ok && ell_ok,
        t.elapsed(),
        Duration::from_secs(1),
        &format!(
            "straight: {} (required transient=1 period=2); L: {} (required transient=1 period=1)",
            straight.classification, ell.classification
        ),
    );
}

/// Census of a settled universe as (symmetry-reduced id of the smallest cycle
/// state, anchor, period, velocity), sorted.
fn census(groups: &[SettledGroup]) -> Vec<(String, Coord, u64, String)> {
    let mut v: Vec<_> = groups
        .iter()
        .map(|g| {
            let id = g.cycle().phase_keys().into_iter().min().unwrap().hex();
            (id, g.anchor(), g.cycle().period, g.cycle().velocity().to_string())
        })
        .collect();
    v.sort();
    v
}

#[test]
fn criterion_06_branching_census() {
    let t = Instant::now();
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, rle) in [("B-heptomino", "x = 4, y = 3\nob2o$3o$bo!"), ("R-pentomino", "x = 3, y = 3\nb2o$2o$bo!")] {
        let cells = parse_rle(rle).unwrap().cells;
        let seed = LiveCellGroup::from_live(cells.clone()).unwrap();
        let rec = classify(&seed, DEFAULT_BUDGET, OrbitMode::Translation, &Stepper::default()).unwrap();
        let branching = matches!(rec.classification, Classification::Branching { .. });
        let params = CatalogParameters { max_cells: 0, budget: DEFAULT_BUDGET, closure: true, entry_cap: DEFAULT_ENTRY_CAP };
        let closure = catalog_from_seeds(params, std::slice::from_ref(&cells), &Stepper::default()).unwrap();

        let mut runs = Vec::new();
        for engine in [Engine::Naive, Engine::Fast, Engine::Fast] {
            let cfg = SettleConfig::new(5000, Stepper::new(engine, 1_000_000));
            let s = settle(Universe::from_cells(cells.clone()), &cfg);
            match s.status {
                SettleStatus::Settled { groups } => runs.push(Some((s.generation, census(&groups)))),
                SettleStatus::Unresolved { .. } => runs.push(None),
            }
        }
        let settled = runs.iter().all(Option::is_some);
        let identical = runs.windows(2).all(|w| w[0] == w[1]);
        ok &= branching && closure.complete && settled && identical;
        if let Some((generation, c)) = &runs[0] {
            let still = c.iter().filter(|(_, _, p, v)| *p == 1 && v == "(0,0)").count();
            let osc = c.iter().filter(|(_, _, p, v)| *p > 1 && v == "(0,0)").count();
            let ships = c.iter().filter(|(_, _, _, v)| v != "(0,0)").count();
            let versus = if name == "B-heptomino" {
                format!(" [reference claim 4 still lifes + 2 gliders: {}]", if still == 4 && osc == 0 && ships == 2 { "matches" } else { "differs" })
            } else {
                String::new()
            };
            detail.push(format!(
                "{name}: splits at {}, closure {} entries, settled at {generation}: {still} still lifes, {osc} oscillators, {ships} spaceships{versus}",
                match rec.classification { Classification::Branching { at, .. } => at, _ => 0 },
                closure.len()
            ));
        } else {
            detail.push(format!("{name}: did not settle"));
        }
    }
    report(6, ok, t.elapsed(), Duration::from_secs(60), &detail.join("; "));
}

#[test]
fn criterion_07_engine_differential() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let naive = Stepper::new(Engine::Naive, 1_000_000);
    let fast = Stepper::new(Engine::Fast, 1_000_000);
    let mut mismatch = None;
    'soups: for i in 0..100 {
        let mut a = universe(&soup(&mut rng, 32, 32, 0.35));
        let mut b = a.clone();
        for g in 0..256 {
            a = naive.step(&a).unwrap();
            b = fast.step(&b).unwrap();
            if a != b {
                mismatch = Some((i, g));
                break 'soups;
            }
        }
    }
    report(7, mismatch.is_none(), t.elapsed(), Duration::from_secs(30), &format!("first mismatch {mismatch:?}"));
}

#[test]
fn criterion_08_isolation_fuzz() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut bad = Vec::new();
    for i in 0..1000 {
        let cells = if i % 2 == 0 {
            let density = rng.gen_range(0.05..0.3);
            soup(&mut rng, 20, 20, density)
        } else { clustered(&mut rng) };
        let u = universe(&cells);
        let groups = partition(&u);
        let mut owner: BTreeMap<Coord, usize> = BTreeMap::new();
        for (gi, g) in groups.iter().enumerate() {
            for c in g.live() {
                owner.insert(*c, gi);
            }
        }
        // No dead cell touches two groups.
        for g in &groups {
            for d in g.boundary() {
                let touching: std::collections::BTreeSet<usize> =
                    neighbors(*d).iter().filter_map(|n| owner.get(n).copied()).collect();
                if touching.len() != 1 {
                    bad.push(format!("universe {i}: dead {d} touches {} groups", touching.len()));
                }
            }
        }
        // Idempotence: each group re-partitions to itself, and the union of
        // the groups partitions back to the same groups.
        let again = partition(&Universe::from_cells(groups.iter().flat_map(|g| g.live().to_vec())));
        if again != groups || groups.iter().any(|g| partition(&g.to_universe()) != vec![g.clone()]) {
            bad.push(format!("universe {i}: partition not idempotent"));
        }
    }
    report(8, bad.is_empty(), t.elapsed(), Duration::from_secs(30), &format!("{} violations {:?}", bad.len(), bad.first()));
}

#[test]
fn criterion_09_compositionality() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let s = Stepper::new(Engine::Naive, 1_000_000);
    let mut bad = Vec::new();
    let mut multi = 0;
    let mut checked = 0;
    for i in 0..100 {
        let mut u = loop {
            let u = universe(&clustered(&mut rng));
            if partition(&u).len() > 1 {
                break u;
            }
        };
        multi += 1;
        for gen in 0..64 {
            let groups = partition(&u);
            let joint = s.step(&u).unwrap();
            checked += groups.len();
            for g in &groups {
                let alone = s.step(&g.to_universe()).unwrap();
                let mut region: Vec<Coord> = g.live().iter().chain(g.boundary()).copied().collect();
                region.sort();
                let restricted: Vec<Coord> = region.iter().copied().filter(|c| joint.contains(*c)).collect();
                if restricted != alone.cells() {
                    bad.push(format!("universe {i} generation {gen}"));
                }
            }
            u = joint;
        }
    }
    report(9, bad.is_empty() && multi == 100, t.elapsed(), Duration::from_secs(30), &format!("{checked} group steps checked, {} violations {:?}", bad.len(), bad.first()));
}

fn glider_block_catalog() -> (Catalog, String, String) {
    let s = Stepper::default();
    let g = entry_for_cells(&coords(&GLIDER), 64, &s).unwrap();
    let b = entry_for_cells(&coords(&BLOCK), 64, &s).unwrap();
    let (gh, bh) = (g.hex(), b.hex());
    let params = CatalogParameters { max_cells: 0, budget: 64, closure: false, entry_cap: DEFAULT_ENTRY_CAP };
    (Catalog::from_entries(params, true, vec![g, b]), gh, bh)
}

#[test]
fn criterion_10_collision_sweep() {
    let t = Instant::now();
    let (catalog, g, b) = glider_block_catalog();
    let cfg = CollideConfig::default();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| collision_table(&g, &b, 15, 2048, &catalog, &cfg).unwrap())
    };
    let first = run(4);
    let second = run(2);
    let bytes_equal = table_to_json(&first) == table_to_json(&second);
    let hist = first.histogram();
    let settled_classes = hist.keys().filter(|k| k.starts_with("settled:")).count();
    let phases_ok = first.rows.iter().all(|r| r.spec.phase_a < 4 && r.spec.phase_b == 0);
    let ok = bytes_equal && settled_classes >= 2 && phases_ok;
    let top: Vec<String> = {
        let mut v: Vec<(&String, &usize)> = hist.iter().collect();
        v.sort_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(b.0)));
        v.iter().take(6).map(|(k, n)| format!("{n} {k}")).collect()
    };
    report(
        10,
        ok,
        t.elapsed(),
        Duration::from_secs(300),
        &format!(
            "{} rows, {} classes ({} settled), byte-identical {bytes_equal}; top: {}",
            first.rows.len(),
            hist.len(),
            settled_classes,
            top.join(", ")
        ),
    );
}

#[test]
fn criterion_11_format_round_trips() {
    let t = Instant::now();
    let s = Stepper::default();
    let c = build_catalog(4, 4096, true, DEFAULT_ENTRY_CAP, &s).unwrap();
    let mut bad = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut patterns: Vec<Vec<Coord>> = c.entries().iter().map(|e| e.cells().to_vec()).collect();
    for _ in 0..100 {
        let (w, h) = (rng.gen_range(1..40), rng.gen_range(1..12));
        let (ox, oy) = (rng.gen_range(-50..50), rng.gen_range(-50..50));
        patterns.push(coords(&soup(&mut rng, w, h, 0.4)).into_iter().map(|p| Coord::new(p.x + ox, p.y + oy)).collect());
    }
    for (i, p) in patterns.iter().enumerate() {
        let origin = match BoundingBox::of(p) {
            Some(b) => Universe::from_cells(p.clone()).translated(-b.min.x, -b.min.y).into_cells(),
            None => Vec::new(),
        };
        if parse_rle(&emit_rle(p)).map(|f| f.cells) != Ok(origin.clone()) {
            bad.push(format!("rle #{i}"));
        }
        if parse_plaintext(&emit_plaintext(p)).map(|f| f.cells) != Ok(origin) {
            bad.push(format!("plaintext #{i}"));
        }
    }
    let mut a = Vec::new();
    let mut b = Vec::new();
    save_catalog(&c, &mut a).unwrap();
    save_catalog(&c, &mut b).unwrap();
    let loaded = load_catalog(&a[..]).unwrap();
    let ok = bad.is_empty() && a == b && loaded == c;
    report(
        11,
        ok,
        t.elapsed(),
        Duration::from_secs(30),
        &format!("{} patterns, {} failures {:?}; catalog bytes equal {}, load(save) equal {}", patterns.len(), bad.len(), bad.first(), a == b, loaded == c),
    );
}
