//! Generated screenshots for demos, benchmarks and tests.

use rand::Rng;

use crate::error::Result;
use crate::patch_grid::Screenshot;
use crate::rng::seeded;

const BACKGROUND: [u8; 3] = [246, 246, 248];

/// A flat page with `widgets` small textured rectangles.
///
/// Each widget gets its own fill color and is sprinkled with dark "glyph"
/// pixels, so it breaks into many small components while the background
/// stays one large component.
pub fn sparse_ui(width: u32, height: u32, widgets: usize, seed: u64) -> Result<Screenshot> {
    let mut rng = seeded(seed);
    let (w, h) = (width as usize, height as usize);
    let mut pixels: Vec<u8> = BACKGROUND.iter().copied().cycle().take(w * h * 3).collect();

    let max_w = (w / 8).max(2);
    let max_h = (h / 10).max(2);
    for _ in 0..widgets {
        let ww = rng.gen_range(max_w / 2..=max_w).min(w);
        let wh = rng.gen_range(max_h / 2..=max_h).min(h);
        let x0 = rng.gen_range(0..=w - ww);
        let y0 = rng.gen_range(0..=h - wh);
        let fill = [rng.gen_range(40..200), rng.gen_range(40..200), rng.gen_range(40..200)];
        for y in y0..y0 + wh {
            for x in x0..x0 + ww {
                let glyph = rng.gen_bool(0.08);
                let px = if glyph { [20, 20, 20] } else { fill };
                let i = (y * w + x) * 3;
                pixels[i..i + 3].copy_from_slice(&px);
            }
        }
    }
    Screenshot::new(width, height, pixels, format!("sparse-ui-{seed}"))
}

/// A page densely covered by random noise, the opposite extreme.
pub fn dense_noise(width: u32, height: u32, seed: u64) -> Result<Screenshot> {
    let mut rng = seeded(seed);
    let pixels = (0..width as usize * height as usize * 3).map(|_| rng.gen()).collect();
    Screenshot::new(width, height, pixels, format!("noise-{seed}"))
}
