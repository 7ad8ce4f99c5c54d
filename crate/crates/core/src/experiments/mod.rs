//! Desk-scale versions of the two evaluation pipelines: community detection
//! on signed stochastic block model graphs, and clustering of servers by
//! geographic distance or measured latency. Also the synthetic workloads
//! used to check linear per-pass scaling.

pub mod bench;
pub mod geo;
pub mod sbm;
pub mod sweep;

pub use bench::{random_sparse_similarity, scaling_table, time_passes, BenchRow, PassTiming};
pub use geo::{haversine_km, haversine_matrix, latency_distance, GeoPoint, EARTH_RADIUS_KM};
pub use sbm::{
    edge_accuracy, sbm_generate, sbm_generate_with, similarity_from_signed, AccuracyReference, SbmParams,
    SignedEdge, SignedGraph,
};
pub use sweep::{accuracy_sweep, write_sweep_tsv, SweepConfig, SweepRow};

/// SplitMix64 finalizer; derives independent stream seeds from structured keys.
pub(crate) fn mix_seed(seed: u64, key: u64) -> u64 {
    let mut z = seed ^ key.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
