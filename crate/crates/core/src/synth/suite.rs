use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::pair::{build, OrganBox, PairDescriptor, ShapeSpec, SyntheticPair, DEFAULT_GAP_MM};
use crate::error::SynthError;
use crate::mesh::{load_stl, write_stl_file, RigidTransform, TriMesh, DEFAULT_WELD_EPSILON_MM};

pub const SUITE_SIZE: usize = 20;
pub const MANIFEST_FILE: &str = "manifest.json";

/// A generated pair with its position in the suite.
#[derive(Debug, Clone)]
pub struct SuitePair {
    pub id: String,
    pub pair: SyntheticPair,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    /// Paths relative to the manifest.
    pub organ_stl: String,
    pub tumor_stl: String,
    pub ground_truth_csa_mm2: f64,
    pub shape: String,
    pub params: PairDescriptor,
}

/// A pair ready for scoring, either freshly generated or read from disk.
#[derive(Debug, Clone)]
pub struct BenchCase {
    pub id: String,
    pub shape: String,
    pub organ: TriMesh,
    pub tumor: TriMesh,
    pub ground_truth: f64,
}

impl From<&SuitePair> for BenchCase {
    fn from(p: &SuitePair) -> Self {
        BenchCase {
            id: p.id.clone(),
            shape: p.pair.descriptor.shape.name().to_string(),
            organ: p.pair.organ.clone(),
            tumor: p.pair.tumor.clone(),
            ground_truth: p.pair.ground_truth_csa,
        }
    }
}

/// Twenty pairs drawn from `seed`: ten spheres, then ten ellipsoids, each
/// in a random pose.
///
/// Spheres have radius 6-15 mm and are submerged 30-140% of the radius.
/// Ellipsoid semi-axes are 6-14 mm with the cut between 50% below and 60%
/// above the center. Spheres alternate between `subdiv` 4 and 5 and
/// ellipsoids use 4, unless `subdiv` is given.
pub fn generate_suite(seed: u64, subdiv: Option<u32>) -> Result<Vec<SuitePair>, SynthError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(SUITE_SIZE);
    for k in 0..SUITE_SIZE {
        let mut attempts = 0;
        let pair = loop {
            attempts += 1;
            let sphere = k < SUITE_SIZE / 2;
            let (shape, level) = if sphere {
                let r: f64 = rng.gen_range(6.0..15.0);
                let h = r * rng.gen_range(0.3..1.4);
                (ShapeSpec::Sphere { r, h }, 4 + (k % 2) as u32)
            } else {
                let a: f64 = rng.gen_range(6.0..14.0);
                let b: f64 = rng.gen_range(6.0..14.0);
                let c: f64 = rng.gen_range(6.0..14.0);
                let z0 = c * rng.gen_range(-0.5..0.6);
                (ShapeSpec::Ellipsoid { a, b, c, z0 }, 4)
            };
            let (hx, hy, depth) = match shape {
                ShapeSpec::Sphere { r, h } => (r, r, h),
                ShapeSpec::Ellipsoid { a, b, c, z0 } => (a, b, c + z0),
            };
            let margin = rng.gen_range(0.3..0.8) * hx.max(hy) + 2.0;
            let placement = RigidTransform::random(&mut rng, 50.0);
            let desc = PairDescriptor {
                shape,
                subdiv: subdiv.unwrap_or(level),
                organ_box: OrganBox {
                    half_x: hx + margin,
                    half_y: hy + margin,
                    depth: depth + margin,
                },
                gap_mm: DEFAULT_GAP_MM,
                placement: Some(placement.into()),
            };
            // A draw whose cut folds a face is replaced by the next one.
            match build(desc) {
                Ok(p) => break p,
                Err(SynthError::InvalidGeometry(_)) if attempts < 100 => continue,
                Err(e) => return Err(e),
            }
        };
        out.push(SuitePair {
            id: format!("pair_{:02}", k + 1),
            pair,
        });
    }
    Ok(out)
}

/// Writes `<id>_organ.stl`, `<id>_tumor.stl` and `manifest.json` into `dir`.
pub fn write_suite(dir: impl AsRef<Path>, suite: &[SuitePair]) -> Result<PathBuf, SynthError> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| SynthError::Manifest(format!("{}: {e}", dir.display())))?;
    let mut manifest = Vec::with_capacity(suite.len());
    for p in suite {
        let organ = format!("{}_organ.stl", p.id);
        let tumor = format!("{}_tumor.stl", p.id);
        write_stl_file(&p.pair.organ, dir.join(&organ))?;
        write_stl_file(&p.pair.tumor, dir.join(&tumor))?;
        manifest.push(ManifestEntry {
            id: p.id.clone(),
            organ_stl: organ,
            tumor_stl: tumor,
            ground_truth_csa_mm2: p.pair.ground_truth_csa,
            shape: p.pair.descriptor.shape.name().to_string(),
            params: p.pair.descriptor.clone(),
        });
    }
    let path = dir.join(MANIFEST_FILE);
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(&path, json + "\n").map_err(|e| SynthError::Manifest(format!("{}: {e}", path.display())))?;
    Ok(path)
}

pub fn read_manifest(dir: impl AsRef<Path>) -> Result<Vec<ManifestEntry>, SynthError> {
    let path = dir.as_ref().join(MANIFEST_FILE);
    let text = fs::read_to_string(&path)
        .map_err(|e| SynthError::Manifest(format!("{}: {e}", path.display())))?;
    let entries: Vec<ManifestEntry> = serde_json::from_str(&text)
        .map_err(|e| SynthError::Manifest(format!("{}: {e}", path.display())))?;
    if entries.is_empty() {
        return Err(SynthError::Manifest(format!("{}: no pairs", path.display())));
    }
    Ok(entries)
}

/// Reads every pair listed in the manifest, welding like the CLI does.
pub fn load_suite(dir: impl AsRef<Path>) -> Result<Vec<BenchCase>, SynthError> {
    let dir = dir.as_ref();
    read_manifest(dir)?
        .into_iter()
        .map(|e| {
            let organ = load_stl(dir.join(&e.organ_stl), 1.0, DEFAULT_WELD_EPSILON_MM)?.mesh;
            let tumor = load_stl(dir.join(&e.tumor_stl), 1.0, DEFAULT_WELD_EPSILON_MM)?.mesh;
            Ok(BenchCase {
                id: e.id,
                shape: e.shape,
                organ,
                tumor,
                ground_truth: e.ground_truth_csa_mm2,
            })
        })
        .collect()
}
