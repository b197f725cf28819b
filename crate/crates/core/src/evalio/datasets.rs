//! Seeded generators for the three shape benchmarks used in tests and demos.
//!
//! They mimic the well-known "aggregation", "flame" and "spiral" sets (same
//! point counts, class sizes and rough layout) so that the test suite does not
//! depend on downloading anything. Coordinates are rounded to two decimals and
//! no two points coincide.

use super::{Dataset, GroundTruth};
use crate::geometry::Point2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;
use std::f64::consts::{PI, TAU};

pub const NAMES: [&str; 3] = ["aggregation", "flame", "spiral"];

pub fn by_name(name: &str) -> Option<Dataset> {
    match name {
        "aggregation" => Some(aggregation()),
        "flame" => Some(flame()),
        "spiral" => Some(spiral()),
        _ => None,
    }
}

/// Region a class is drawn from, with a normalized depth `t` that is 0 on
/// the region's core and 1 on its rim.
#[derive(Clone, Copy)]
enum Region {
    Ellipse { c: (f64, f64), r: (f64, f64) },
    /// Ellipse bent along a circular arc of radius `big_r`: half-width `h`
    /// across the arc, spanning angles `a0` to `a1` (radians,
    /// counterclockwise) along it.
    Arc {
        c: (f64, f64),
        big_r: f64,
        h: f64,
        a0: f64,
        a1: f64,
    },
}

impl Region {
    fn bbox(&self) -> ((f64, f64), (f64, f64)) {
        match *self {
            Region::Ellipse { c, r } => ((c.0 - r.0, c.1 - r.1), (c.0 + r.0, c.1 + r.1)),
            Region::Arc { c, big_r, h, .. } => {
                let e = big_r + h;
                ((c.0 - e, c.1 - e), (c.0 + e, c.1 + e))
            }
        }
    }

    fn depth(&self, x: f64, y: f64) -> Option<f64> {
        match *self {
            Region::Ellipse { c, r } => {
                let (u, v) = ((x - c.0) / r.0, (y - c.1) / r.1);
                let q = (u * u + v * v).sqrt();
                (q <= 1.0).then_some(q)
            }
            Region::Arc { c, big_r, h, a0, a1 } => {
                let (dx, dy) = (x - c.0, y - c.1);
                let across = (dx.hypot(dy) - big_r) / h;
                let along = (dy.atan2(dx).rem_euclid(TAU) - 0.5 * (a0 + a1)) / (0.5 * (a1 - a0));
                let t = across.hypot(along);
                (t <= 1.0).then_some(t)
            }
        }
    }
}

/// Extra spacing at a region's rim, relative to its core.
const RIM: f64 = 0.8;

fn round2(v: f64) -> f64 {
    (v * 100.0).round() / 100.0
}

/// Dart throwing with a spacing that grows from `spacing` at the core of a
/// region to (1 + RIM) × `spacing` at its rim, giving each class a density
/// peak. The spacing shrinks by 2% after every 2000 consecutive rejections.
fn scatter(rng: &mut ChaCha8Rng, classes: &[(Region, usize)], spacing: f64) -> Dataset {
    let mut points: Vec<Point2> = Vec::new();
    let mut class = Vec::new();
    let mut seen = HashSet::new();
    for (k, &(reg, n)) in classes.iter().enumerate() {
        let mut d = spacing;
        let mut misses = 0;
        let mut placed = 0;
        let (lo, hi) = reg.bbox();
        while placed < n {
            let x = round2(rng.random_range(lo.0..=hi.0));
            let y = round2(rng.random_range(lo.1..=hi.1));
            let ok = reg.depth(x, y).is_some_and(|t| {
                let need = d * (1.0 + RIM * t);
                points
                    .iter()
                    .all(|p| (p.x - x).hypot(p.y - y) >= need)
            }) && !seen.contains(&((x * 100.0) as i64, (y * 100.0) as i64));
            if ok {
                seen.insert(((x * 100.0) as i64, (y * 100.0) as i64));
                points.push(Point2::new(x, y));
                class.push(k);
                placed += 1;
                misses = 0;
            } else {
                misses += 1;
                if misses == 2000 {
                    d *= 0.98;
                    misses = 0;
                }
            }
        }
    }
    Dataset {
        points,
        truth: Some(GroundTruth { class }),
    }
}

/// 788 points, seven blobs of sizes 45, 170, 102, 273, 34, 130, 34. Two pairs
/// of blobs nearly touch.
pub fn aggregation() -> Dataset {
    aggregation_seeded(0xa66)
}

/// Same layout as [`aggregation`] drawn with another seed.
pub fn aggregation_seeded(seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e = |c, r| Region::Ellipse { c, r };
    scatter(
        &mut rng,
        &[
            (e((7.5, 8.5), (2.0, 2.1)), 45),
            (e((10.0, 22.0), (4.6, 3.5)), 170),
            (e((33.0, 22.5), (3.3, 3.0)), 102),
            (e((21.0, 7.5), (6.6, 3.8)), 273),
            (e((16.0, 23.0), (1.6, 1.9)), 34),
            (e((33.5, 8.5), (3.0, 4.0)), 130),
            (e((11.7, 8.8), (1.7, 1.8)), 34),
        ],
        0.42,
    )
}

/// 240 points: a 153-point flame body sitting in an 87-point bowl.
pub fn flame() -> Dataset {
    flame_seeded(0xf1a)
}

/// Same layout as [`flame`] drawn with another seed.
pub fn flame_seeded(seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let body = Region::Ellipse {
        c: (7.0, 23.5),
        r: (3.8, 4.2),
    };
    let bowl = Region::Arc {
        c: (7.0, 24.0),
        big_r: 6.5,
        h: 1.8,
        a0: 200f64.to_radians(),
        a1: 340f64.to_radians(),
    };
    scatter(&mut rng, &[(body, 153), (bowl, 87)], 0.5)
}

/// 312 points on three interleaved arms of an Archimedean spiral (106, 101
/// and 105 points), evenly spaced by arc length with a little jitter.
pub fn spiral() -> Dataset {
    spiral_seeded(0x5b1)
}

/// Same layout as [`spiral`] drawn with another seed.
pub fn spiral_seeded(seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (b, t0, t1) = (1.4, 0.5 * PI, 3.3 * PI);
    let mut points = Vec::new();
    let mut class = Vec::new();
    for (k, &m) in [106usize, 101, 105].iter().enumerate() {
        let offset = k as f64 * TAU / 3.0;
        for s in 0..m {
            // Arc length of r = bθ grows with θ², so step evenly in θ².
            let f = s as f64 / (m - 1) as f64;
            let t = (t0 * t0 + f * (t1 * t1 - t0 * t0)).sqrt();
            let r = b * t;
            let x = 16.0 + r * (t + offset).cos() + rng.random_range(-0.08..=0.08);
            let y = 16.0 + r * (t + offset).sin() + rng.random_range(-0.08..=0.08);
            points.push(Point2::new(round2(x), round2(y)));
            class.push(k);
        }
    }
    Dataset {
        points,
        truth: Some(GroundTruth { class }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sizes(ds: &Dataset) -> Vec<usize> {
        let gt = ds.truth.as_ref().unwrap();
        let mut s = vec![0; gt.num_classes()];
        for &c in &gt.class {
            s[c] += 1;
        }
        s
    }

    fn distinct(ds: &Dataset) -> usize {
        ds.points
            .iter()
            .map(|p| (p.x.to_bits(), p.y.to_bits()))
            .collect::<HashSet<_>>()
            .len()
    }

    #[test]
    fn shapes_and_counts() {
        let a = aggregation();
        assert_eq!(sizes(&a), vec![45, 170, 102, 273, 34, 130, 34]);
        let f = flame();
        assert_eq!(sizes(&f), vec![153, 87]);
        let s = spiral();
        assert_eq!(sizes(&s), vec![106, 101, 105]);
        for ds in [a, f, s] {
            assert_eq!(distinct(&ds), ds.points.len());
        }
    }

    #[test]
    fn deterministic() {
        assert_eq!(aggregation(), aggregation());
        assert_eq!(by_name("spiral"), Some(spiral()));
        assert!(by_name("iris").is_none());
    }
}
