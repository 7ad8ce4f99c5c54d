//! K-sets+ clustering for data points that carry a symmetric similarity
//! measure or a semi-metric distance.
//!
//! The algorithm repeatedly moves each point to the set that is closest in
//! terms of the *adjusted* Δ-distance. With the incremental state kept by
//! [`engine::EngineState`], a full pass over `n` points costs `O(Kn + m)` where
//! `m` is the number of nonzero entries of the similarity matrix, and the
//! memory footprint is `O(Kn + m)`.
//!
//! Module map:
//!
//! - [`measure`]: sparse symmetric measures, partitions, dataset labels.
//! - [`transforms`]: semi-metric / semi-cohesion duality and the σ-lifting of
//!   an arbitrary similarity into a semi-cohesion measure.
//! - [`delta`]: naive reference Δ-distances, used as oracles.
//! - [`engine`]: the production K-sets+ iteration and restart driver.
//! - [`verify`]: executable cluster definitions and the pairwise isolation
//!   guarantee for converged partitions.
//! - [`experiments`]: signed stochastic block model, geographic distances,
//!   accuracy sweeps and scaling benchmarks.
//! - [`io`]: text formats (edge lists, dense CSV, partitions).
//!
//! All numerical code is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix it to `f64`.
//!
//! ```
//! use ksetsplus::{Measure, MeasureKind, RunConfig};
//!
//! // two triangles joined by nothing
//! let edges = [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0), (3, 4, 1.0), (4, 5, 1.0), (3, 5, 1.0)];
//! let g = Measure::from_triples(6, MeasureKind::Similarity, &edges).unwrap();
//! let out = ksetsplus::engine::run(&g, &RunConfig::new(2).with_restarts(4)).unwrap();
//! let p = out.partition.canonical();
//! assert_eq!(p.assign(), &[0, 0, 0, 1, 1, 1]);
//! ```

pub mod delta;
pub mod engine;
mod error;
pub mod experiments;
pub mod io;
pub mod measure;
mod scalar;
pub mod transforms;
pub mod verify;

pub use engine::{run, run_from, EngineState, Init, RunConfig, RunResult};
pub use error::{Error, Result};
pub use measure::{DataSet, MeasureKind, Partition, SparseSymmetricMeasure};
pub use scalar::Scalar;
pub use transforms::SemiCohesionMeasure;

/// Double-precision sparse symmetric measure.
pub type Measure = SparseSymmetricMeasure<f64>;
/// Single-precision sparse symmetric measure.
pub type MeasureF32 = SparseSymmetricMeasure<f32>;
/// Double-precision semi-cohesion measure.
pub type Cohesion = SemiCohesionMeasure<f64>;
/// Engine state over a double-precision measure.
pub type State<'g> = EngineState<'g, f64>;
