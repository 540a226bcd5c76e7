//! Indexed and closed-form routines checked against slow, independent references.

use csa_core::engine::{define_csa, find_threshold, min_distances, min_distances_bruteforce};
use csa_core::mesh::{all_centroids, face_area, project_to_plane, shoelace_area};
use csa_core::{Point3, TriMesh};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A triangle soup with `n` faces; the layout varies with `style`.
fn random_soup(rng: &mut ChaCha8Rng, n: usize, style: u32, offset: Point3) -> TriMesh {
    let mut verts = Vec::with_capacity(3 * n);
    let mut tris = Vec::with_capacity(n);
    for i in 0..n {
        let base = match style {
            // uniform in a 40 mm box
            0 => Point3::new(rng.gen_range(0.0..40.0), rng.gen_range(0.0..40.0), rng.gen_range(0.0..40.0)),
            // flat sheet
            1 => Point3::new(rng.gen_range(0.0..40.0), rng.gen_range(0.0..40.0), 5.0),
            // tight clusters with long empty stretches between them
            2 => {
                let c = (i % 4) as f64 * 30.0;
                Point3::new(c + rng.gen_range(0.0..0.5), rng.gen_range(0.0..0.5), c)
            }
            // on a sphere, like a real surface
            _ => {
                let (u, v): (f64, f64) = (rng.gen_range(-1.0..1.0), rng.gen_range(0.0..std::f64::consts::TAU));
                let s = (1.0 - u * u).sqrt();
                Point3::new(12.0 * s * v.cos(), 12.0 * s * v.sin(), 12.0 * u)
            }
        } + offset;
        let jitter = |rng: &mut ChaCha8Rng| {
            Point3::new(rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4))
        };
        verts.push(base);
        verts.push(base + jitter(rng));
        verts.push(base + jitter(rng));
        let k = 3 * i as u32;
        tris.push([k, k + 1, k + 2]);
    }
    TriMesh::from_triangles(verts, &tris).unwrap()
}

#[test]
fn grid_nearest_neighbour_matches_brute_force_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..100 {
        let na = rng.gen_range(1..=5000);
        let nb = rng.gen_range(1..=5000);
        let style = rng.gen_range(0..4);
        let shift = Point3::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        let a = all_centroids(&random_soup(&mut rng, na, style, Point3::ZERO));
        let style_b = rng.gen_range(0..4);
        let b = all_centroids(&random_soup(&mut rng, nb, style_b, shift));
        let fast = min_distances(&a, &b);
        let slow = min_distances_bruteforce(&a, &b);
        assert_eq!(fast.small_is_first, slow.small_is_first, "case {case}");
        assert_eq!(fast.distances.len(), na.min(nb));
        for (i, (x, y)) in fast.distances.iter().zip(&slow.distances).enumerate() {
            assert_eq!(x.to_bits(), y.to_bits(), "case {case} ({na} x {nb}, style {style}) face {i}");
        }
    }
}

/// Exhaustive split search written from scratch: least squares via the
/// normal equations on raw sums, Cramer's rule, no shared code.
fn oracle_split(sorted: &[f64]) -> usize {
    let f = sorted.len();
    let fit_err = |lo: usize, hi: usize| -> f64 {
        // ranks lo+1 ..= hi (1-based), values sorted[lo..hi]
        let (mut n, mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for j in lo..hi {
            let x = (j + 1) as f64;
            let y = sorted[j];
            n += 1.0;
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        let det = n * sxx - sx * sx;
        let (m, c) = if det.abs() < 1e-300 {
            (0.0, sy / n)
        } else {
            ((n * sxy - sx * sy) / det, (sxx * sy - sx * sxy) / det)
        };
        (lo..hi).map(|j| (sorted[j] - (m * (j + 1) as f64 + c)).abs()).sum()
    };
    let mut best = (f64::INFINITY, 0);
    for split in 2..f {
        let e = fit_err(0, split) + fit_err(split, f);
        if e < best.0 {
            best = (e, split);
        }
    }
    best.1
}

#[test]
fn threshold_split_matches_exhaustive_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let cap = 10.0;
    for case in 0..1000 {
        let n1 = rng.gen_range(2..60);
        let n2 = rng.gen_range(2..120);
        let level = rng.gen_range(0.0..0.5);
        let slope1 = rng.gen_range(0.0..0.01);
        let jump = rng.gen_range(0.2..3.0);
        let slope2 = rng.gen_range(0.02..0.2);
        let noise = rng.gen_range(0.0..0.05);
        let mut d: Vec<f64> = (0..n1 + n2)
            .map(|k| {
                let clean = if k < n1 {
                    level + slope1 * k as f64
                } else {
                    level + jump + slope2 * (k - n1) as f64
                };
                (clean + noise * rng.gen_range(-1.0..1.0)).abs()
            })
            .collect();
        // a few samples beyond the cap must be ignored
        d.extend((0..rng.gen_range(0..5)).map(|_| cap + rng.gen_range(0.0..5.0)));

        let t = find_threshold(&d, cap).unwrap();
        let mut sorted: Vec<f64> = d.iter().copied().filter(|&x| x < cap).collect();
        sorted.sort_by(f64::total_cmp);
        assert_eq!(t.sorted, sorted, "case {case}");
        let want = oracle_split(&sorted);
        assert_eq!(t.split_index, want, "case {case}: errors {:?}", &t.cumulative_errors);

        // the threshold is the split's own sample, which `<` then excludes
        assert_eq!(t.tau, sorted[t.split_index - 1]);
        let below = define_csa(&d, t.tau);
        assert_eq!(below.len(), d.iter().filter(|&&x| x < t.tau).count());
        assert!(below.iter().all(|&i| d[i] < t.tau));
        assert!(below.len() < t.split_index);
    }
}

#[test]
fn shoelace_matches_cross_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let scale = 10f64.powf(rng.gen_range(-2.0..3.0));
        let p: Vec<Point3> = (0..3)
            .map(|_| {
                Point3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale
            })
            .collect();
        let m = TriMesh::from_triangles(p.clone(), &[[0, 1, 2]]).unwrap();
        let oracle = 0.5 * (p[1] - p[0]).cross(p[2] - p[0]).norm();
        let poly = project_to_plane(&m, 0).unwrap();
        let area = shoelace_area(&poly);
        let rel = (area - oracle).abs() / oracle;
        worst = worst.max(rel);
        assert!(rel <= 1e-12, "area {area} vs {oracle}");
        assert_eq!(face_area(&m, 0), area);
    }
    println!("worst relative deviation {worst:.2e}");
}
