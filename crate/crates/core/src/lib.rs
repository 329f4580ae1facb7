//! Maximal k-wise intersecting set families over `[n]`.
//!
//! A family is k-wise intersecting when any k of its members (repetition
//! allowed) share an element. Everything here works in the *complement
//! world*: a family is k-wise intersecting exactly when no k of the
//! complemented members have union `[n]`, which turns every question into
//! a set-cover query over the subset lattice.
//!
//! - [`setcore`]: bitmask sets, families, down-sets and the cover engine.
//! - [`construction`]: the block construction of small maximal families.
//! - [`verifier`]: witness-producing checks of the k-wise and maximality
//!   properties.
//! - [`search`]: exhaustive and randomized generators used as oracles.

pub mod construction;
pub mod error;
pub mod search;
pub mod setcore;
pub mod verifier;

pub use construction::{
    build_f1, build_f2, build_family, expected_size, make_partition, BlockPartition,
    Construction, ConstructionParams,
};
pub use error::{Error, Result};
pub use setcore::{
    build_cover_table, can_cover, make_star, CoverBound, CoverSearch, CoverTable, Family,
    SetMask, Universe,
};
pub use verifier::{
    check_kwise, check_saturated, is_maximal_kwise, verify_witness, Backend, Verdict, Verifier,
    Witness, World,
};
