use std::f64::consts::PI;
use std::sync::OnceLock;
use std::time::Instant;

use csa_core::engine::{compute_csa, pair_distances, CsaConfig};
use csa_core::mesh::{connected_components, edge_manifold_defects, mesh_total_area, mesh_volume};
use csa_core::synth::*;
use csa_core::{Point3, SynthError};

fn pct(computed: f64, truth: f64) -> f64 {
    100.0 * (computed - truth) / truth
}

fn suite() -> &'static [SuitePair] {
    static SUITE: OnceLock<Vec<SuitePair>> = OnceLock::new();
    SUITE.get_or_init(|| generate_suite(7, None).unwrap())
}

#[test]
fn spherical_cap_within_three_percent() {
    let start = Instant::now();
    let p = generate_sphere_pair(10.0, 5.0, 4, None).unwrap();
    let r = compute_csa(&p.organ, &p.tumor, &CsaConfig::default()).unwrap();
    let elapsed = start.elapsed();
    let truth = 2.0 * PI * 10.0 * 5.0;
    assert!((p.ground_truth_csa - 314.159).abs() < 1e-3);
    let err = pct(r.csa_area, truth);
    println!("csa {:.3} mm² vs {truth:.3} ({err:+.3}%) in {elapsed:?}", r.csa_area);
    assert!(err.abs() < 3.0);
    assert!(elapsed.as_secs_f64() < 10.0);
}

#[test]
fn threshold_separates_true_contact_faces() {
    for (r, h) in [(10.0, 5.0), (6.0, 3.0), (15.0, 12.0), (10.0, 2.0)] {
        let p = generate_sphere_pair(r, h, 4, None).unwrap();
        let res = compute_csa(&p.organ, &p.tumor, &CsaConfig::default()).unwrap();
        let d = pair_distances(&p.organ, &p.tumor);
        assert!(d.small_is_first, "tumor must be the measured mesh");
        let contact: std::collections::HashSet<usize> = p.contact_faces.iter().copied().collect();
        let max_contact = p.contact_faces.iter().map(|&i| d.distances[i]).fold(0.0, f64::max);
        let min_free = (0..p.tumor.face_count())
            .filter(|i| !contact.contains(i))
            .map(|i| d.distances[i])
            .fold(f64::INFINITY, f64::min);
        let tau = res.tau.unwrap();
        assert!(max_contact < min_free);
        assert!(max_contact <= tau && tau <= min_free, "r={r} h={h}: {max_contact} {tau} {min_free}");
        assert_eq!(res.csa_face_ids, p.contact_faces, "r={r} h={h}");
    }
}

#[test]
fn analytic_truths() {
    let hemi = generate_sphere_pair(10.0, 10.0, 3, None).unwrap();
    assert!((hemi.ground_truth_csa - 628.319).abs() < 1e-3);
    let whole = generate_sphere_pair(10.0, 20.0, 3, None).unwrap();
    assert!((whole.ground_truth_csa - 1256.637).abs() < 1e-3);
    assert!(matches!(
        generate_sphere_pair(10.0, 25.0, 3, None),
        Err(SynthError::InvalidGeometry(_))
    ));
    assert!(matches!(
        generate_ellipsoid_pair(5.0, 5.0, 5.0, 5.0, 3, None),
        Err(SynthError::InvalidGeometry(_))
    ));
}

#[test]
fn ellipsoid_quadrature_reduces_to_sphere() {
    for h in [2.0, 5.0, 10.0, 15.0] {
        let q = ellipsoid_area_below(10.0, 10.0, 10.0, h - 10.0);
        assert!(q.samples >= 1_000_000);
        assert!(q.relative_change() < 1e-6);
        let cap = 2.0 * PI * 10.0 * h;
        assert!((q.area - cap).abs() / cap < 1e-3);
    }
    let tiny = ellipsoid_area_below(7.0, 9.0, 4.0, -4.0 + 1e-6);
    assert!(tiny.area < 1e-4);
    let total = ellipsoid_area_below(10.0, 10.0, 5.0, 5.0).area;
    let half = ellipsoid_area_below(10.0, 10.0, 5.0, 0.0).area;
    assert!((2.0 * half - total).abs() / total < 1e-9);
}

#[test]
fn ellipsoid_pair_with_equal_axes_matches_sphere_pair() {
    let e = generate_ellipsoid_pair(10.0, 10.0, 10.0, -5.0, 3, None).unwrap();
    let s = generate_sphere_pair(10.0, 5.0, 3, None).unwrap();
    assert!((e.ground_truth_csa - s.ground_truth_csa).abs() / s.ground_truth_csa < 1e-3);
}

#[test]
fn generated_meshes_are_closed_and_outward() {
    for p in [
        generate_sphere_pair(8.0, 3.0, 3, None).unwrap(),
        generate_ellipsoid_pair(12.0, 7.0, 9.0, 2.0, 3, None).unwrap(),
        generate_sphere_pair(10.0, 20.0, 2, None).unwrap(),
    ] {
        for m in [&p.organ, &p.tumor] {
            assert_eq!(edge_manifold_defects(m), 0);
            assert!(mesh_volume(m).unwrap() > 0.0);
        }
        assert!(p.organ.face_count() > p.tumor.face_count());
        assert!(p.ground_truth_csa > 0.0);
    }
}

#[test]
fn error_shrinks_with_resolution() {
    let errs: Vec<f64> = (3..=5)
        .map(|s| {
            let p = generate_sphere_pair(10.0, 5.0, s, None).unwrap();
            let r = compute_csa(&p.organ, &p.tumor, &CsaConfig::default()).unwrap();
            pct(r.csa_area, p.ground_truth_csa).abs()
        })
        .collect();
    println!("|error| by subdiv 3..5: {errs:?}");
    for w in errs.windows(2) {
        assert!(w[1] <= w[0] + 0.5);
    }
}

#[test]
fn argument_order_does_not_matter() {
    let p = generate_sphere_pair(9.0, 4.0, 3, None).unwrap();
    let cfg = CsaConfig::default();
    let a = compute_csa(&p.organ, &p.tumor, &cfg).unwrap();
    let b = compute_csa(&p.tumor, &p.organ, &cfg).unwrap();
    assert_eq!(a.csa_area, b.csa_area);
    assert_eq!(a.csa_face_ids, b.csa_face_ids);
}

#[test]
fn separated_pair_has_no_contact() {
    let p = generate_sphere_pair(10.0, 5.0, 3, None).unwrap();
    let far = p.tumor.map_vertices(|v| v + Point3::new(100.0, 0.0, 0.0));
    let r = compute_csa(&p.organ, &far, &CsaConfig::default()).unwrap();
    assert!(r.insufficient_contact);
    assert_eq!(r.csa_area, 0.0);
    assert!(r.csa_face_ids.is_empty());
}

#[test]
fn suite_has_twenty_positive_truths() {
    let s = suite();
    assert_eq!(s.len(), 20);
    assert!(s.iter().all(|p| p.pair.ground_truth_csa > 0.0));
    let spheres = s.iter().filter(|p| p.pair.descriptor.shape.name() == "sphere").count();
    assert!(spheres > 0 && spheres < 20);
}

#[test]
fn suite_files_are_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    write_suite(a.path(), &generate_suite(11, Some(2)).unwrap()).unwrap();
    write_suite(b.path(), &generate_suite(11, Some(2)).unwrap()).unwrap();
    let mut names: Vec<_> = std::fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert_eq!(names.len(), 41);
    for n in names {
        let x = std::fs::read(a.path().join(&n)).unwrap();
        let y = std::fs::read(b.path().join(&n)).unwrap();
        assert!(x == y, "{n:?} differs");
    }
    let other = tempfile::tempdir().unwrap();
    write_suite(other.path(), &generate_suite(12, Some(2)).unwrap()).unwrap();
    assert_ne!(
        std::fs::read(a.path().join(MANIFEST_FILE)).unwrap(),
        std::fs::read(other.path().join(MANIFEST_FILE)).unwrap()
    );
}

#[test]
fn suite_reloads_identically() {
    let dir = tempfile::tempdir().unwrap();
    let generated = generate_suite(3, Some(2)).unwrap();
    write_suite(dir.path(), &generated).unwrap();
    let loaded = load_suite(dir.path()).unwrap();
    assert_eq!(loaded.len(), generated.len());
    for (l, g) in loaded.iter().zip(&generated) {
        assert_eq!(l.id, g.id);
        assert_eq!(l.organ, g.pair.organ);
        assert_eq!(l.tumor, g.pair.tumor);
        assert_eq!(l.ground_truth, g.pair.ground_truth_csa);
    }
    assert!(load_suite(tempfile::tempdir().unwrap().path()).is_err());
}

#[test]
fn benchmark_median_is_near_zero() {
    let cases: Vec<BenchCase> = suite().iter().map(BenchCase::from).collect();
    let report = run_benchmark(&cases, &CsaConfig::default());
    for r in &report.rows {
        println!("{} {:>9} truth {:9.3} error {:+.3}%", r.id, r.shape, r.truth, r.percent_error.unwrap());
        assert!(!r.insufficient_contact);
    }
    let a = &report.aggregate;
    assert_eq!(a.failed, 0);
    assert!(a.median.unwrap().abs() < 1.0);
    assert!(a.within_5_percent >= 15);
    assert_eq!(*a, BenchAggregate::from_rows(&report.rows));
    assert_eq!(report.to_csv().lines().count(), 21);
}

#[test]
fn refinement_leaves_one_free_component_on_suite() {
    for p in suite() {
        let r = compute_csa(&p.pair.organ, &p.pair.tumor, &CsaConfig::default()).unwrap();
        let refined: std::collections::HashSet<usize> = r.csa_face_ids.iter().copied().collect();
        assert!(r.csa_face_ids_pre_refinement.iter().all(|i| refined.contains(i)), "{}", p.id);
        let free: Vec<usize> = (0..p.pair.tumor.face_count()).filter(|i| !refined.contains(i)).collect();
        assert_eq!(connected_components(&p.pair.tumor, &free).len(), 1, "{}", p.id);
        assert!(r.csa_area <= mesh_total_area(&p.pair.tumor));
    }
}

#[test]
fn finer_suite_is_not_worse() {
    let median_abs = |subdiv| {
        let cases: Vec<BenchCase> = generate_suite(5, Some(subdiv)).unwrap().iter().map(BenchCase::from).collect();
        let mut e: Vec<f64> = run_benchmark(&cases, &CsaConfig::default())
            .rows
            .iter()
            .map(|r| r.percent_error.unwrap().abs())
            .collect();
        e.sort_by(f64::total_cmp);
        quantile(&e, 0.5)
    };
    let (coarse, fine) = (median_abs(3), median_abs(4));
    println!("median |error|: subdiv 3 {coarse:.3}%, subdiv 4 {fine:.3}%");
    assert!(fine <= coarse);
}
