//! Fixtures shared by the benchmarks.

use uigraph_core::{build_grid, synthetic, PatchGrid, Screenshot};

/// The 1344x756 page used throughout: 27x48 merged patches.
pub fn sparse_page() -> Screenshot {
    synthetic::sparse_ui(1344, 756, 10, 7).expect("fixed dimensions are valid")
}

pub fn noisy_page() -> Screenshot {
    synthetic::dense_noise(1344, 756, 7).expect("fixed dimensions are valid")
}

pub fn merged_grid(shot: &Screenshot) -> PatchGrid {
    build_grid(shot, 14, 2).expect("page is larger than one patch")
}
