//! Runs an RLE pattern until it settles and prints the census.
//!
//!     cargo run --example ash -- pattern.rle [horizon]

use std::collections::BTreeMap;

use lcg_core::formats::parse_rle;
use lcg_core::{settle, SettleConfig, SettleStatus, Stepper, Universe};

fn main() {
    let mut args = std::env::args().skip(1);
    let path = args.next().expect("usage: ash <file.rle> [horizon]");
    let horizon = args.next().map(|h| h.parse().expect("horizon")).unwrap_or(5000);
    let text = std::fs::read_to_string(&path).expect("readable file");
    let p = parse_rle(&text).expect("valid RLE");
    let s = settle(Universe::from_cells(p.cells), &SettleConfig::new(horizon, Stepper::default()));
    match s.status {
        SettleStatus::Settled { groups } => {
            println!("settled at generation {} with {} groups", s.generation, groups.len());
            let mut kinds: BTreeMap<String, usize> = BTreeMap::new();
            for g in &groups {
                let c = g.cycle();
                let label = format!("pop={} period={} velocity={}", g.cells.len(), c.period, c.velocity());
                *kinds.entry(label).or_default() += 1;
            }
            for (k, n) in kinds {
                println!("{n:4}  {k}");
            }
        }
        SettleStatus::Unresolved { reason } => println!("unresolved at {}: {reason}", s.generation),
    }
}
