//! Independent oracles and generators shared by the integration tests.
//!
//! Nothing here calls into the union-find, selection or PRNG-derivation code
//! paths it is used to check.

#![allow(dead_code)]

use std::collections::{BTreeMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use uigraph_core::PatchGrid;

pub fn test_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Edge predicate written out independently: Euclidean distance strictly
/// below delta.
pub fn joined(a: [f64; 3], b: [f64; 3], delta: f64) -> bool {
    let sq: f64 = a.iter().zip(&b).map(|(x, y)| (x - y) * (x - y)).sum();
    sq.sqrt() < delta
}

/// BFS flood fill over 4-neighbours; labels in order of first appearance.
pub fn bfs_labels(grid: &PatchGrid, delta: f64) -> Vec<u32> {
    let (h, w) = (grid.grid_h, grid.grid_w);
    let mut labels = vec![u32::MAX; h * w];
    let mut next = 0u32;
    for start in 0..h * w {
        if labels[start] != u32::MAX {
            continue;
        }
        labels[start] = next;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let (r, c) = (i / w, i % w);
            let mut neighbours = Vec::with_capacity(4);
            if r > 0 {
                neighbours.push(i - w);
            }
            if r + 1 < h {
                neighbours.push(i + w);
            }
            if c > 0 {
                neighbours.push(i - 1);
            }
            if c + 1 < w {
                neighbours.push(i + 1);
            }
            for j in neighbours {
                if labels[j] == u32::MAX
                    && joined(grid.representatives[i], grid.representatives[j], delta)
                {
                    labels[j] = next;
                    queue.push_back(j);
                }
            }
        }
        next += 1;
    }
    labels
}

/// Random grid drawn from a small jittered palette so that every delta in
/// {0, 1, 10, 50} produces non-trivial partitions.
pub fn random_grid(rng: &mut ChaCha8Rng, max_side: usize) -> PatchGrid {
    let h = rng.gen_range(1..=max_side);
    let w = rng.gen_range(1..=max_side);
    let palette_size = rng.gen_range(1..=6);
    let mut palette = Vec::with_capacity(palette_size);
    for _ in 0..palette_size {
        let mut color = [0.0; 3];
        for v in &mut color {
            let base = if rng.gen_bool(0.5) { 0.0 } else { 255.0 };
            *v = (base + rng.gen_range(-60.0..60.0f64)).clamp(0.0, 255.0);
        }
        palette.push(color);
    }
    let jitter = [0.0, 0.4, 3.0, 20.0][rng.gen_range(0..4)];
    let reps = (0..h * w)
        .map(|_| {
            let base = palette[rng.gen_range(0..palette.len())];
            base.map(|v| {
                let j = if jitter > 0.0 { rng.gen_range(-jitter..=jitter) } else { 0.0 };
                (v + j).clamp(0.0, 255.0)
            })
        })
        .collect();
    PatchGrid::from_representatives(h, w, 28, reps).unwrap()
}

/// Binary {0, 255} per channel representatives.
pub fn binary_grid(rng: &mut ChaCha8Rng, h: usize, w: usize) -> PatchGrid {
    let reps = (0..h * w)
        .map(|_| [0, 1, 2].map(|_| if rng.gen_bool(0.5) { 0.0 } else { 255.0 }))
        .collect();
    PatchGrid::from_representatives(h, w, 28, reps).unwrap()
}

/// Group-by mean oracle for token merging.
pub fn group_means(labels: &[u32], features: &[Vec<f64>]) -> BTreeMap<u32, Vec<f64>> {
    let mut acc: BTreeMap<u32, (Vec<f64>, usize)> = BTreeMap::new();
    for (l, f) in labels.iter().zip(features) {
        let e = acc.entry(*l).or_insert_with(|| (vec![0.0; f.len()], 0));
        for (a, v) in e.0.iter_mut().zip(f) {
            *a += v;
        }
        e.1 += 1;
    }
    acc.into_iter()
        .map(|(l, (s, n))| (l, s.into_iter().map(|v| v / n as f64).collect()))
        .collect()
}

/// Kept-count formula: singletons stay; others keep max(1, round-half-up((1 - r) m)).
pub fn expected_kept(sizes: &[usize], ratio: f64) -> usize {
    sizes
        .iter()
        .map(|&m| {
            if m == 1 {
                1
            } else {
                (((1.0 - ratio) * m as f64 + 0.5).floor() as usize).clamp(1, m)
            }
        })
        .sum()
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Re-runs the documented per-component draw: ChaCha8 seeded with
/// SplitMix64(seed ^ SplitMix64(component id)), partial Fisher-Yates over
/// member ranks.
pub fn reexecute_component_draw(seed: u64, component: u64, members: &[usize], keep: usize) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix(seed ^ splitmix(component)));
    let mut ranks: Vec<usize> = (0..members.len()).collect();
    for i in 0..keep {
        let j = rng.gen_range(i..members.len());
        ranks.swap(i, j);
    }
    let mut out: Vec<usize> = ranks[..keep].iter().map(|&r| members[r]).collect();
    out.sort_unstable();
    out
}

/// Same re-execution for the component-agnostic baseline stream.
pub fn reexecute_baseline(total: usize, keep: usize, seed: u64) -> Vec<usize> {
    let members: Vec<usize> = (0..total).collect();
    reexecute_component_draw(seed, u64::MAX, &members, keep)
}
