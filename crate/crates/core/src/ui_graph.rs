//! The UI connected graph: patch nodes joined when neighbouring
//! representatives are nearly identical, partitioned with union-find.

use std::collections::BTreeMap;

use image::RgbImage;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::patch_grid::PatchGrid;
use crate::rng::mix64;

/// Default similarity threshold in 0-255 channel units.
pub const DEFAULT_DELTA: f64 = 1.0;

/// How two patch representatives are compared.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Metric {
    /// Euclidean distance between mean-RGB representatives.
    #[default]
    #[serde(rename = "l2-mean-rgb")]
    L2MeanRgb,
}

impl Metric {
    pub fn distance(self, a: [f64; 3], b: [f64; 3]) -> f64 {
        match self {
            Metric::L2MeanRgb => {
                let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
                (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
            }
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::L2MeanRgb => "l2-mean-rgb",
        }
    }
}

/// Disjoint-set forest with path compression and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        assert!(n <= u32::MAX as usize, "union-find capacity exceeded");
        Self {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] as usize != root {
            root = self.parent[root] as usize;
        }
        let mut cur = x;
        while self.parent[cur] as usize != root {
            let next = self.parent[cur] as usize;
            self.parent[cur] = root as u32;
            cur = next;
        }
        root
    }

    /// Merges the sets holding `a` and `b`; returns false if already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra as u32;
        self.size[ra] += self.size[rb];
        true
    }
}

/// Assignment of every patch node to a connected component.
///
/// Component ids are canonical: ids are handed out in order of first
/// appearance during a row-major scan, so node 0 always has label 0.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentMap {
    grid_h: usize,
    grid_w: usize,
    labels: Vec<u32>,
    component_sizes: Vec<usize>,
    delta: f64,
    metric: Metric,
}

impl ComponentMap {
    /// Rebuilds a map from exported labels, checking every structural invariant.
    ///
    /// Labels are canonicalized, so any surjective labelling whose classes are
    /// 4-connected is accepted.
    pub fn from_labels(
        grid_h: usize,
        grid_w: usize,
        labels: &[u32],
        delta: f64,
        metric: Metric,
    ) -> Result<Self> {
        if grid_h == 0 || grid_w == 0 {
            return Err(Error::InvalidParameter(format!(
                "grid must be non-empty, got {grid_h}x{grid_w}"
            )));
        }
        let n = grid_h * grid_w;
        if labels.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: labels.len(),
            });
        }
        // Joining equal-labelled neighbours must reproduce exactly one class
        // per distinct label, otherwise some label is split in the grid.
        let mut uf = UnionFind::new(n);
        for r in 0..grid_h {
            for c in 0..grid_w {
                let i = r * grid_w + c;
                if c + 1 < grid_w && labels[i] == labels[i + 1] {
                    uf.union(i, i + 1);
                }
                if r + 1 < grid_h && labels[i] == labels[i + grid_w] {
                    uf.union(i, i + grid_w);
                }
            }
        }
        let map = Self::canonical(grid_h, grid_w, &mut uf, delta, metric);
        let mut distinct = labels.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() != map.k() {
            return Err(Error::InvalidParameter(
                "labels do not form 4-connected components".into(),
            ));
        }
        Ok(map)
    }

    fn canonical(grid_h: usize, grid_w: usize, uf: &mut UnionFind, delta: f64, metric: Metric) -> Self {
        let n = grid_h * grid_w;
        let mut root_label = vec![u32::MAX; n];
        let mut labels = Vec::with_capacity(n);
        let mut component_sizes = Vec::new();
        for i in 0..n {
            let root = uf.find(i);
            if root_label[root] == u32::MAX {
                root_label[root] = component_sizes.len() as u32;
                component_sizes.push(0);
            }
            let label = root_label[root];
            component_sizes[label as usize] += 1;
            labels.push(label);
        }
        Self {
            grid_h,
            grid_w,
            labels,
            component_sizes,
            delta,
            metric,
        }
    }

    pub fn grid_h(&self) -> usize {
        self.grid_h
    }

    pub fn grid_w(&self) -> usize {
        self.grid_w
    }

    /// Flat row-major component ids.
    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn component_sizes(&self) -> &[usize] {
        &self.component_sizes
    }

    /// Number of components, K.
    pub fn k(&self) -> usize {
        self.component_sizes.len()
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn token_count(&self) -> usize {
        self.labels.len()
    }

    /// Flat indices of each component's members, ascending, indexed by id.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self
            .component_sizes
            .iter()
            .map(|&s| Vec::with_capacity(s))
            .collect();
        for (i, &l) in self.labels.iter().enumerate() {
            out[l as usize].push(i);
        }
        out
    }
}

/// Summary of how strongly a graph compresses its grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphStats {
    pub token_count: usize,
    pub component_count: usize,
    pub reduction_ratio: f64,
    pub size_histogram: BTreeMap<usize, usize>,
    pub singleton_count: usize,
}

/// Runs union-find over right and down neighbours whose representatives
/// are closer than `delta`.
pub fn build_components(grid: &PatchGrid, delta: f64) -> Result<ComponentMap> {
    build_components_with(grid, delta, Metric::L2MeanRgb)
}

pub fn build_components_with(grid: &PatchGrid, delta: f64, metric: Metric) -> Result<ComponentMap> {
    if delta.is_nan() || delta < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "delta must be non-negative, got {delta}"
        )));
    }
    let (h, w) = (grid.grid_h, grid.grid_w);
    if grid.representatives.len() != h * w || h == 0 || w == 0 {
        return Err(Error::LengthMismatch {
            expected: h * w,
            actual: grid.representatives.len(),
        });
    }
    let reps = &grid.representatives;
    let mut uf = UnionFind::new(h * w);
    for r in 0..h {
        for c in 0..w {
            let i = r * w + c;
            if c + 1 < w && metric.distance(reps[i], reps[i + 1]) < delta {
                uf.union(i, i + 1);
            }
            if r + 1 < h && metric.distance(reps[i], reps[i + w]) < delta {
                uf.union(i, i + w);
            }
        }
    }
    Ok(ComponentMap::canonical(h, w, &mut uf, delta, metric))
}

pub fn component_stats(map: &ComponentMap) -> GraphStats {
    let mut size_histogram = BTreeMap::new();
    for &s in map.component_sizes() {
        *size_histogram.entry(s).or_insert(0) += 1;
    }
    GraphStats {
        token_count: map.token_count(),
        component_count: map.k(),
        reduction_ratio: map.k() as f64 / map.token_count() as f64,
        singleton_count: size_histogram.get(&1).copied().unwrap_or(0),
        size_histogram,
    }
}

/// Stable display color for a component id.
pub fn component_color(id: u32) -> [u8; 3] {
    let h = mix64(id as u64);
    let hue = (h % 360) as f64;
    let sat = 0.55 + ((h >> 16) % 40) as f64 / 100.0;
    let val = 0.70 + ((h >> 32) % 30) as f64 / 100.0;
    hsv_to_rgb(hue, sat, val)
}

fn hsv_to_rgb(hue: f64, sat: f64, val: f64) -> [u8; 3] {
    let c = val * sat;
    let hp = hue / 60.0;
    let x = c * (1.0 - (hp % 2.0 - 1.0).abs());
    let (r, g, b) = match hp as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = val - c;
    let to_u8 = |v: f64| ((v + m) * 255.0).round().clamp(0.0, 255.0) as u8;
    [to_u8(r), to_u8(g), to_u8(b)]
}

/// Paints each patch with its component's color.
pub fn render_overlay(map: &ComponentMap, patch_size: u32) -> RgbImage {
    let p = patch_size.max(1);
    let w = map.grid_w() as u32 * p;
    let h = map.grid_h() as u32 * p;
    RgbImage::from_fn(w, h, |x, y| {
        let i = (y / p) as usize * map.grid_w() + (x / p) as usize;
        image::Rgb(component_color(map.labels()[i]))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(h: usize, w: usize, reps: Vec<[f64; 3]>) -> PatchGrid {
        PatchGrid::from_representatives(h, w, 28, reps).unwrap()
    }

    #[test]
    fn uniform_grid_is_one_component() {
        let map = build_components(&grid(2, 2, vec![[7.0; 3]; 4]), 1.0).unwrap();
        assert_eq!(map.k(), 1);
        assert_eq!(map.component_sizes(), &[4]);
        let stats = component_stats(&map);
        assert_eq!(stats.reduction_ratio, 0.25);
        assert_eq!(stats.singleton_count, 0);
    }

    #[test]
    fn checkerboard_is_all_singletons() {
        let b = [0.0; 3];
        let w = [255.0; 3];
        let map = build_components(&grid(2, 2, vec![b, w, w, b]), 1.0).unwrap();
        assert_eq!(map.k(), 4);
        assert_eq!(map.labels(), &[0, 1, 2, 3]);
        let stats = component_stats(&map);
        assert_eq!(stats.reduction_ratio, 1.0);
        assert_eq!(stats.singleton_count, 4);
    }

    #[test]
    fn threshold_is_strict() {
        let reps = vec![[0.0; 3], [1.0, 0.0, 0.0]];
        assert_eq!(build_components(&grid(1, 2, reps.clone()), 1.0).unwrap().k(), 2);
        assert_eq!(build_components(&grid(1, 2, reps), 1.0001).unwrap().k(), 1);
    }

    #[test]
    fn zero_delta_never_joins() {
        let map = build_components(&grid(2, 3, vec![[5.0; 3]; 6]), 0.0).unwrap();
        assert_eq!(map.k(), 6);
    }

    #[test]
    fn diagonals_are_not_neighbours() {
        let b = [0.0; 3];
        let w = [255.0; 3];
        // b w
        // w b  -> the two blacks touch only diagonally
        let map = build_components(&grid(2, 2, vec![b, w, w, b]), 500.0).unwrap();
        assert_eq!(map.k(), 1, "large delta joins everything through edges");
        let map = build_components(&grid(2, 2, vec![b, w, w, b]), 1.0).unwrap();
        assert_ne!(map.labels()[0], map.labels()[3]);
    }

    #[test]
    fn canonical_labels_follow_scan_order() {
        let a = [0.0; 3];
        let b = [100.0; 3];
        // b a a
        // b b a
        let map = build_components(&grid(2, 3, vec![b, a, a, b, b, a]), 1.0).unwrap();
        assert_eq!(map.labels(), &[0, 1, 1, 0, 0, 1]);
        assert_eq!(map.component_sizes(), &[3, 3]);
    }

    #[test]
    fn negative_delta_rejected() {
        let g = grid(1, 1, vec![[0.0; 3]]);
        assert!(matches!(build_components(&g, -1.0), Err(Error::InvalidParameter(_))));
        assert!(build_components(&g, f64::NAN).is_err());
    }

    #[test]
    fn from_labels_round_trip_and_rejects_split_labels() {
        let map = build_components(&grid(2, 2, vec![[1.0; 3], [1.0; 3], [9.0; 3], [9.0; 3]]), 1.0).unwrap();
        let back = ComponentMap::from_labels(2, 2, map.labels(), 1.0, Metric::L2MeanRgb).unwrap();
        assert_eq!(back, map);
        // Relabelled but equivalent input canonicalizes.
        let relabelled = ComponentMap::from_labels(2, 2, &[5, 5, 2, 2], 1.0, Metric::L2MeanRgb).unwrap();
        assert_eq!(relabelled.labels(), map.labels());
        // Label 0 appears in two disconnected corners.
        assert!(ComponentMap::from_labels(2, 2, &[0, 1, 1, 0], 1.0, Metric::L2MeanRgb).is_err());
        assert!(ComponentMap::from_labels(2, 2, &[0, 0, 0], 1.0, Metric::L2MeanRgb).is_err());
    }

    #[test]
    fn union_find_basics() {
        let mut uf = UnionFind::new(5);
        assert!(uf.union(0, 1));
        assert!(uf.union(3, 4));
        assert!(!uf.union(1, 0));
        assert!(uf.union(1, 4));
        assert_eq!(uf.find(0), uf.find(3));
        assert_ne!(uf.find(2), uf.find(0));
    }

    #[test]
    fn overlay_is_stable_and_sized() {
        let map = build_components(&grid(2, 3, vec![[0.0; 3]; 6]), 1.0).unwrap();
        let a = render_overlay(&map, 4);
        assert_eq!(a.dimensions(), (12, 8));
        assert_eq!(a, render_overlay(&map, 4));
        assert_eq!(a.get_pixel(0, 0).0, component_color(0));
        assert_ne!(component_color(0), component_color(1));
    }
}
