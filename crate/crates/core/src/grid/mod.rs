//! Tiling systems on labeled grids and a logical characterization of grids.

mod characterization;
mod tiling;

pub use characterization::{grid_characterization, grid_properties, GridProperty};
pub use tiling::{
    border_formula, check_run, find_run, grid_letters, left_symbol, parse_tiling_system, recognizes, state_symbol,
    tile_formula, top_symbol, ts_to_sigma1_hg, Cell, Pattern, Tile, TilePartition, TilingError, TilingSystem,
};

#[cfg(test)]
mod tests;
