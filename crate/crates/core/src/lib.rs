//! Live cell groups for Conway's Game of Life.
//!
//! The crate splits a B3/S23 universe into live cell groups, follows each
//! group's sequence of successors until it dies, repeats, or splits,
//! enumerates small seeds into a catalog, and tabulates what happens when two
//! repeating patterns meet.
//!
//! ```
//! use lcg_core::{classify, Classification, LiveCellGroup, OrbitMode, Stepper};
//! use lcg_core::formats::parse_rle;
//!
//! let glider = parse_rle("x = 3, y = 3\nbob$2bo$3o!").unwrap();
//! let g = LiveCellGroup::from_live(glider.cells).unwrap();
//! let r = classify(&g, 16, OrbitMode::Translation, &Stepper::default()).unwrap();
//! assert_eq!(
//!     r.classification,
//!     Classification::Repeating { transient: 0, period: 4, displacement: (1, 1) }
//! );
//! ```

pub mod collide;
pub mod enumerate;
pub mod error;
pub mod formats;
pub mod lcg;
pub mod pattern;
pub mod settle;
pub mod universe;

pub use collide::{
    arrange, collide, collision_table, entry_for_cells, interaction_onset, CensusItem, CollideConfig,
    CollisionOutcome, CollisionSpec, CollisionStatus, CollisionTable,
};
pub use enumerate::{build_catalog, enumerate_seeds, Catalog, CatalogEntry, CatalogParameters, DEFAULT_ENTRY_CAP};
pub use error::{Error, Result};
pub use lcg::{canonicalize, lcg_successors, partition, CanonicalKey, KeyMode, LiveCellGroup, Symmetry};
pub use pattern::{classify, replay, Classification, OrbitMode, OrbitRecord, ReplayMismatch, Velocity, DEFAULT_BUDGET};
pub use settle::{settle, SettleConfig, SettleStatus, Settlement};
pub use universe::{neighbors, step, step_fast, step_n, BoundingBox, Coord, Engine, Stepper, Universe};
