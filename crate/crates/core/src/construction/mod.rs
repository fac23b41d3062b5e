//! Level families, unit cheeses, the regular layer and the full assembly.

pub mod assembly;
pub mod config;
pub mod family;
pub mod regular;
pub mod unit;

pub use assembly::{assemble_cheese, length_budget, level_scale, EmptyWermer, StubWermer, WermerProvider};
pub use config::{BuildParams, CheeseConfig, Deletion, IndexEntry, Ledger, Provenance, Recomputed, WermerLevel};
pub use family::{build_level_family, build_level_family_capped, overlapping_pairs, LevelFamily, DEFAULT_DISC_CAP};
pub use regular::{boundary_from_cross, build_regular_cheese, epsilon_for_index, index_entry};
pub use unit::{
    build_unit_cheese, build_unit_cheese_capped, inverse_square_tail, select_start_index, transplant, Transplant,
    UnitCheese,
};

/// Truncation level and disc cap shared by the builders.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub n_cap: u64,
    pub disc_cap: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { n_cap: 6, disc_cap: DEFAULT_DISC_CAP }
    }
}
