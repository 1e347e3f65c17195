//! Relative Density-based Outlier Score (RDOS).
//!
//! Local outlier detection built on kernel density estimates taken over an
//! extended neighborhood of each point: its k nearest neighbors, its reverse
//! nearest neighbors and its shared nearest neighbors. A point whose own
//! density is small compared to the average density of that neighborhood
//! gets a large score.
//!
//! The crate is organised as a pipeline:
//!
//! 1. [`data`] holds the [`Dataset`] type, Euclidean distance and min-max
//!    normalization.
//! 2. [`neighbors`] builds the [`KnnGraph`] (brute force or k-d tree) and
//!    derives [`NeighborSets`] from it.
//! 3. [`density`] evaluates the Gaussian kernel and the local density.
//! 4. [`rdos`] turns densities into scores, rankings and threshold flags.
//!
//! Around that core sit the comparison detectors in [`baselines`], ROC/AUC
//! evaluation in [`eval`], synthetic data in [`datagen`] and the false-alarm
//! bound plus Monte Carlo checks in [`theory`].
//!
//! ```
//! use rdos_core::{datagen, neighbors, rdos, KernelSpec};
//!
//! let data = datagen::gen_two_gaussians(&datagen::SynthSpec::two_gaussians(7)).unwrap();
//! let graph = neighbors::build_knn_graph_kdtree(&data, 21).unwrap();
//! let spec = KernelSpec::new(0.01, data.dim()).unwrap();
//! let report = rdos::rdos_scores(&data, &graph, &spec).unwrap();
//! let top = rdos::top_n(&report, 3).unwrap();
//! assert!(top.iter().all(|&i| i >= 200));
//! ```

pub mod baselines;
pub mod data;
pub mod datagen;
pub mod density;
pub mod error;
pub mod eval;
pub mod neighbors;
pub mod rdos;
pub mod theory;

pub use baselines::BaselineMethod;
pub use data::{euclidean_distance, minmax_normalize, Dataset, Label, Params, Point};
pub use density::{BandwidthConvention, KernelSpec};
pub use error::{Error, Result};
pub use eval::{Method, RocCurve};
pub use neighbors::{KnnGraph, NeighborSets};
pub use rdos::ScoreReport;
