//! Bitmask sets over `[n]`, set families, and cover queries.

pub mod cover;
pub mod family;
pub mod format;
pub mod mask;

pub use cover::{build_cover_table, can_cover, Arithmetic, CoverBound, CoverSearch, CoverTable};
pub use family::{make_star, Family};
pub use format::{format_family, parse_family};
pub use mask::{SetMask, Universe};

/// `{ [n] \ X : X in f }`.
pub fn complement_family(f: &Family) -> Family {
    f.complement()
}

pub fn is_downset(f: &Family) -> bool {
    f.is_downset()
}

pub fn downset_closure(f: &Family) -> Family {
    f.downset_closure()
}

pub fn maximal_elements(f: &Family) -> Family {
    f.maximal_elements()
}
