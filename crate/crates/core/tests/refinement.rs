use csa_core::engine::{define_csa, refine_csa};
use csa_core::mesh::{all_centroids, connected_components};
use csa_core::synth::icosphere;

/// Unit sphere whose equatorial band is contact. The complement is the two
/// polar caps; the northern one reaches distance 8, the southern one 2.
fn banded_sphere() -> (csa_core::TriMesh, Vec<f64>) {
    let m = icosphere(3);
    let d = all_centroids(&m)
        .as_slice()
        .iter()
        .map(|c| match c.z {
            z if z.abs() < 0.25 => 0.1,
            z if z > 0.0 => 0.5 + 7.5 * z,
            z => 0.5 - 1.5 * z,
        })
        .collect();
    (m, d)
}

#[test]
fn nearer_cap_joins_the_contact() {
    let (m, d) = banded_sphere();
    let band = define_csa(&d, 0.2);
    let complement: Vec<usize> = (0..m.face_count()).filter(|i| !band.contains(i)).collect();
    let caps = connected_components(&m, &complement);
    assert_eq!(caps.len(), 2);
    let max_of = |c: &[usize]| c.iter().map(|&i| d[i]).fold(0.0, f64::max);
    let (mut far, mut near) = (&caps.components[0], &caps.components[1]);
    if max_of(far) < max_of(near) {
        std::mem::swap(&mut far, &mut near);
    }
    assert!((max_of(far) - 8.0).abs() < 0.5);
    assert!((max_of(near) - 2.0).abs() < 0.5);

    let r = refine_csa(&m, &band, &d);
    assert_eq!(r.discarded_component_count, 1);
    let mut want: Vec<usize> = band.iter().chain(near.iter()).copied().collect();
    want.sort_unstable();
    assert_eq!(r.face_ids, want);
    assert!(far.iter().all(|i| !r.face_ids.contains(i)));
}
