//! Synthetic organ/tumor pairs with analytic contact area, and the benchmark
//! that scores the pipeline against them.

mod bench;
mod pair;
mod quadrature;
mod shapes;
mod suite;

pub use bench::{quantile, run_benchmark, BenchAggregate, BenchReport, BenchRow};
pub use pair::{
    build, generate_ellipsoid_pair, generate_sphere_pair, ground_truth, OrganBox,
    PairDescriptor, Placement, ShapeSpec, SyntheticPair, DEFAULT_GAP_MM,
};
pub use quadrature::{
    ellipsoid_area_below, ellipsoid_area_below_with, CapQuadrature, DEFAULT_PHI_SAMPLES,
    DEFAULT_U_SAMPLES,
};
pub use shapes::{ellipsoid, icosphere};
pub use suite::{
    generate_suite, load_suite, read_manifest, write_suite, BenchCase, ManifestEntry, SuitePair,
    MANIFEST_FILE, SUITE_SIZE,
};
