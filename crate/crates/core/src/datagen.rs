//! Synthetic datasets with planted outliers.
//!
//! * `two_gaussians`: two isotropic Gaussian clusters centred at (0.5, 0.8)
//!   and (2, 0.5), 100 points each, plus three planted outliers.
//! * `cosine`: points along `x2 = cos(x1) + w`, `w ~ N(0, σ²)` with
//!   `σ² = 0.1`, `x1` uniform on `[0, 4π]`, plus four planted outliers.
//!
//! Generated points come first and carry inlier labels; planted outliers are
//! appended in the order given and carry outlier labels. The cluster spread
//! and the outlier coordinates are defaults, not measured values, and can be
//! overridden through [`SynthSpec`].

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::data::{Dataset, Label, Point};
use crate::error::{Error, Result};

pub const CLUSTER_CENTERS: [[f64; 2]; 2] = [[0.5, 0.8], [2.0, 0.5]];

/// Default per-axis variance of the Gaussian clusters (standard deviation
/// 0.05, half the effective kernel spread at `h = 0.01`).
pub const DEFAULT_CLUSTER_VARIANCE: f64 = 0.0025;

pub const DEFAULT_COSINE_VARIANCE: f64 = 0.1;

pub const DEFAULT_CURVE_POINTS: usize = 400;

/// Default outliers A, B, C for the two-cluster set.
pub const TWO_GAUSSIAN_OUTLIERS: [[f64; 2]; 3] = [[1.25, 1.3], [1.2, 0.2], [2.6, 1.1]];

/// Default outliers A, B, C, D for the cosine set.
pub const COSINE_OUTLIERS: [[f64; 2]; 4] = [[PI, 1.2], [2.0 * PI, -1.2], [3.0 * PI, 1.2], [4.0 * PI, -1.2]];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    TwoGaussians,
    Cosine,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub variant: Variant,
    /// Points per cluster (`TwoGaussians`) or along the curve (`Cosine`).
    pub n: usize,
    /// Per-axis cluster variance, or the variance of `w` for the curve.
    pub noise_sigma2: f64,
    pub outliers: Vec<Point>,
    /// `x1` interval of the curve; ignored for `TwoGaussians`.
    pub x1_range: (f64, f64),
    pub seed: u64,
}

fn points(raw: &[[f64; 2]]) -> Vec<Point> {
    raw.iter()
        .map(|c| Point::new(c.to_vec()).expect("finite constants"))
        .collect()
}

impl SynthSpec {
    pub fn two_gaussians(seed: u64) -> Self {
        SynthSpec {
            variant: Variant::TwoGaussians,
            n: 100,
            noise_sigma2: DEFAULT_CLUSTER_VARIANCE,
            outliers: points(&TWO_GAUSSIAN_OUTLIERS),
            x1_range: (0.0, 0.0),
            seed,
        }
    }

    pub fn cosine(seed: u64) -> Self {
        SynthSpec {
            variant: Variant::Cosine,
            n: DEFAULT_CURVE_POINTS,
            noise_sigma2: DEFAULT_COSINE_VARIANCE,
            outliers: points(&COSINE_OUTLIERS),
            x1_range: (0.0, 4.0 * PI),
            seed,
        }
    }

    pub fn without_outliers(mut self) -> Self {
        self.outliers.clear();
        self
    }

    fn check(&self) -> Result<()> {
        if !(self.noise_sigma2 >= 0.0 && self.noise_sigma2.is_finite()) {
            return Err(Error::param(
                "noise_sigma2",
                format!("must be >= 0, got {}", self.noise_sigma2),
            ));
        }
        if let Some(p) = self.outliers.iter().find(|p| p.dim() != 2) {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: p.dim(),
            });
        }
        Ok(())
    }
}

pub fn generate(spec: &SynthSpec) -> Result<Dataset> {
    match spec.variant {
        Variant::TwoGaussians => gen_two_gaussians(spec),
        Variant::Cosine => gen_cosine(spec),
    }
}

fn assemble(mut inliers: Vec<Point>, outliers: &[Point]) -> Result<Dataset> {
    let n_in = inliers.len();
    inliers.extend(outliers.iter().cloned());
    let labels = std::iter::repeat_n(Label::Inlier, n_in)
        .chain(std::iter::repeat_n(Label::Outlier, outliers.len()))
        .collect();
    Dataset::new(inliers)?
        .with_labels(labels)?
        .with_names(vec!["x1".into(), "x2".into()])
}

pub fn gen_two_gaussians(spec: &SynthSpec) -> Result<Dataset> {
    spec.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let noise = Normal::new(0.0, spec.noise_sigma2.sqrt()).expect("validated variance");
    let inliers = CLUSTER_CENTERS
        .iter()
        .flat_map(|c| std::iter::repeat_n(c, spec.n))
        .map(|c| Point::new(vec![c[0] + noise.sample(&mut rng), c[1] + noise.sample(&mut rng)]))
        .collect::<Result<Vec<_>>>()?;
    assemble(inliers, &spec.outliers)
}

pub fn gen_cosine(spec: &SynthSpec) -> Result<Dataset> {
    spec.check()?;
    let (lo, hi) = spec.x1_range;
    if !(lo < hi && lo.is_finite() && hi.is_finite()) {
        return Err(Error::param("x1_range", format!("need lo < hi, got ({lo}, {hi})")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let noise = Normal::new(0.0, spec.noise_sigma2.sqrt()).expect("validated variance");
    let inliers = (0..spec.n)
        .map(|_| {
            let x1 = rng.random_range(lo..hi);
            Point::new(vec![x1, x1.cos() + noise.sample(&mut rng)])
        })
        .collect::<Result<Vec<_>>>()?;
    assemble(inliers, &spec.outliers)
}
