//! Generators and oracles that are independent of the block construction.

pub mod distance;
pub mod downsets;
pub mod greedy;
pub mod oracle;
pub mod table;

pub use distance::{cube_distance, minimize_cube_distance, CubeReport};
pub use downsets::{enumerate_downsets, Downsets};
pub use greedy::{greedy_saturate, GreedyOrder};
pub use oracle::{oracle_min_size, OracleResult};
pub use table::{size_table, SizeRow, TableOptions};
