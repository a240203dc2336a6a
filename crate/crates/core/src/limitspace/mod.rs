//! Limit-space artifacts: Schreier graphs of level actions, asymptotic
//! equivalence of eventually periodic sequences, and digit-tile clouds.

mod schreier;
mod sequence;
mod tile;

pub use schreier::{schreier_graph, LevelGraph};
pub use sequence::{asymptotic_equivalent, SequenceSpec};
pub use tile::{tile_cloud, tile_ifs_check, PointCloud, TileCheck};
