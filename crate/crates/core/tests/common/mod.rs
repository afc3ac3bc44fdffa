//! Independent reference implementations used as test oracles.

#![allow(dead_code)]

use std::collections::VecDeque;
use std::f64::consts::PI;

use fetal_doppler::synthgen::SplitMix64;
use fetal_doppler::{BinaryMask, BinaryRoi};

/// Breadth-first flood fill with 8-connectivity. Returns per-pixel labels
/// numbered in raster order of each region's first pixel, plus region sizes.
pub fn flood_fill(mask: &BinaryMask) -> (Vec<Option<usize>>, Vec<usize>) {
    let (w, h) = (mask.width(), mask.height());
    let mut labels = vec![None; w * h];
    let mut sizes = Vec::new();
    for start in 0..w * h {
        if !mask.bits()[start] || labels[start].is_some() {
            continue;
        }
        let id = sizes.len();
        let mut size = 0;
        let mut queue = VecDeque::from([start]);
        labels[start] = Some(id);
        while let Some(i) = queue.pop_front() {
            size += 1;
            let (x, y) = ((i % w) as i64, (i / w) as i64);
            for dy in -1..=1 {
                for dx in -1..=1 {
                    let (nx, ny) = (x + dx, y + dy);
                    if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                        continue;
                    }
                    let j = ny as usize * w + nx as usize;
                    if mask.bits()[j] && labels[j].is_none() {
                        labels[j] = Some(id);
                        queue.push_back(j);
                    }
                }
            }
        }
        sizes.push(size);
    }
    (labels, sizes)
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// Radial polynomial straight from its textbook factorial sum.
pub fn naive_radial(n: u32, m: u32, rho: f64) -> f64 {
    (0..=(n - m) / 2)
        .map(|s| {
            let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
            sign * factorial(n - s)
                / (factorial(s) * factorial((n + m) / 2 - s) * factorial((n - m) / 2 - s))
                * rho.powi((n - 2 * s) as i32)
        })
        .sum()
}

/// Complex moment `A(n, m)` by a plain double loop over every pixel, with
/// the angle taken from `atan2`.
pub fn naive_moment(roi: &BinaryRoi, n: u32, m: u32) -> (f64, f64) {
    let (w, h) = (roi.width(), roi.height());
    let (mut sx, mut sy, mut count) = (0.0, 0.0, 0.0);
    for y in 0..h {
        for x in 0..w {
            if roi.get(x, y) {
                sx += x as f64;
                sy += y as f64;
                count += 1.0;
            }
        }
    }
    let (cx, cy) = (sx / count, sy / count);
    let mut radius: f64 = 1.0;
    for y in 0..h {
        for x in 0..w {
            if roi.get(x, y) {
                radius = radius.max(((x as f64 - cx).powi(2) + (y as f64 - cy).powi(2)).sqrt());
            }
        }
    }
    let (mut re, mut im) = (0.0, 0.0);
    for y in 0..h {
        for x in 0..w {
            if !roi.get(x, y) {
                continue;
            }
            let (dx, dy) = (x as f64 - cx, y as f64 - cy);
            let rho = (dx * dx + dy * dy).sqrt() / radius;
            if rho > 1.0 {
                continue;
            }
            let theta = dy.atan2(dx);
            let r = naive_radial(n, m, rho);
            re += r * (m as f64 * theta).cos();
            im -= r * (m as f64 * theta).sin();
        }
    }
    let scale = (n as f64 + 1.0) / PI / (radius * radius);
    (re * scale, im * scale)
}

pub fn random_mask(rng: &mut SplitMix64, w: usize, h: usize, fill_percent: i64) -> BinaryMask {
    BinaryMask::from_fn(w, h, |_, _| rng.range(0, 99) < fill_percent)
}

pub fn assert_close(a: f64, b: f64, tol: f64, what: &str) {
    assert!((a - b).abs() <= tol, "{what}: {a} vs {b} (tol {tol})");
}
