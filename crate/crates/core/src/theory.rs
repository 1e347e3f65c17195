//! The false-alarm bound for the score and Monte Carlo checks of the two
//! statistical properties of RDOS:
//!
//! * points drawn from a continuous density score 1 in the large-sample
//!   limit ([`validate_theorem1`]);
//! * for a point whose `|S|` neighbors are uniform in a ball of radius `r`
//!   around it, under the Gaussian kernel of width `h`,
//!
//!   ```text
//!   P[rdos > γ] <= exp(-2 (γ-1)² (|S|+1)² (2π)^d h^(2d) / (|S| (2|S|+γ+1)² V²))
//!   ```
//!
//!   where `V` is the volume of the `n`-ball of radius `r` with `n = d - 1`
//!   ([`false_alarm_bound`], checked by [`validate_theorem2`]).

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::data::{squared_distance, Dataset};
use crate::density::{BandwidthConvention, KernelSpec};
use crate::error::{Error, Result};
use crate::neighbors::build_knn_graph_kdtree;
use crate::rdos::rdos_scores;

/// Independent RNG streams per Monte Carlo run. Results depend on the seed
/// and trial count only, never on the thread count.
const PARTITIONS: u64 = 64;

/// Inputs of the false-alarm bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundInput {
    /// Threshold γ, must exceed 1.
    pub gamma: f64,
    /// Neighborhood size |S|.
    pub s_size: usize,
    pub d: usize,
    pub h: f64,
    /// Radius of the ball holding the neighbors.
    pub r: f64,
}

impl BoundInput {
    pub fn validate(&self) -> Result<()> {
        if self.gamma.is_nan() || self.gamma <= 1.0 {
            return Err(Error::param("gamma", format!("must exceed 1, got {}", self.gamma)));
        }
        if self.s_size == 0 {
            return Err(Error::param("s_size", "neighborhood must be nonempty"));
        }
        if self.d == 0 {
            return Err(Error::param("d", "dimension must be at least 1"));
        }
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(Error::param("h", format!("must be positive, got {}", self.h)));
        }
        if !(self.r > 0.0 && self.r.is_finite()) {
            return Err(Error::param("r", format!("must be positive, got {}", self.r)));
        }
        Ok(())
    }

    /// `V`, the volume used by the bound: an `(d - 1)`-ball of radius `r`.
    pub fn volume(&self) -> f64 {
        ball_volume(self.r, self.d - 1)
    }
}

/// `Γ(n/2 + 1)` by the half-integer recurrence.
fn gamma_half_plus_one(n: usize) -> f64 {
    // Γ(1) = 1, Γ(3/2) = √π / 2, Γ(x + 1) = x Γ(x)
    let mut g = if n.is_multiple_of(2) { 1.0 } else { PI.sqrt() / 2.0 };
    let mut x = if n.is_multiple_of(2) { 1.0 } else { 1.5 };
    let target = n as f64 / 2.0 + 1.0;
    while x < target {
        g *= x;
        x += 1.0;
    }
    g
}

/// Volume of the `n`-dimensional ball of radius `r`:
/// `π^(n/2) r^n / Γ(n/2 + 1)`. `n = 0` gives 1.
pub fn ball_volume(r: f64, n: usize) -> f64 {
    PI.powf(n as f64 / 2.0) * r.powi(n as i32) / gamma_half_plus_one(n)
}

/// Upper bound on the probability that a point with uniformly scattered
/// neighbors scores above `gamma`. Always in `(0, 1]`.
pub fn false_alarm_bound(input: &BoundInput) -> Result<f64> {
    input.validate()?;
    let s = input.s_size as f64;
    let d = input.d as f64;
    let v = input.volume();
    let g1 = input.gamma - 1.0;
    let num = 2.0 * g1 * g1 * (s + 1.0).powi(2) * (2.0 * PI).powf(d) * input.h.powf(2.0 * d);
    let den = s * (2.0 * s + input.gamma + 1.0).powi(2) * v * v;
    Ok((-num / den).exp().clamp(f64::MIN_POSITIVE, 1.0))
}

/// Mean and spread of interior scores on uniform data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem1Summary {
    pub mean_rdos: f64,
    pub std_rdos: f64,
    /// Number of interior points the statistics cover.
    pub interior: usize,
}

/// Margin, as a fraction of the domain width, that separates interior
/// points from the boundary.
pub const INTERIOR_MARGIN: f64 = 0.1;

/// Samples `n_points` uniformly from the unit square, scores them with the
/// full pipeline and summarises the scores of interior points: those at
/// least [`INTERIOR_MARGIN`] away from every edge. Requires
/// `n_points >= 50 k`.
pub fn validate_theorem1(n_points: usize, k: usize, spec: &KernelSpec, seed: u64) -> Result<Theorem1Summary> {
    if k == 0 || n_points < 50 * k {
        return Err(Error::param(
            "n_points",
            format!("need n_points >= 50 k = {}, got {n_points}", 50 * k.max(1)),
        ));
    }
    if spec.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: spec.dim(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..n_points)
        .map(|_| vec![rng.random::<f64>(), rng.random::<f64>()])
        .collect();
    let data = Dataset::from_rows(rows)?;
    let graph = build_knn_graph_kdtree(&data, k)?;
    let report = rdos_scores(&data, &graph, spec)?;

    let lo = INTERIOR_MARGIN;
    let hi = 1.0 - INTERIOR_MARGIN;
    let interior: Vec<f64> = (0..n_points)
        .filter(|&i| data.coords(i).iter().all(|&c| (lo..=hi).contains(&c)))
        .map(|i| report.rdos[i])
        .collect();
    if interior.is_empty() {
        return Err(Error::InvalidData("no interior points sampled".into()));
    }
    let m = interior.len() as f64;
    let mean = interior.iter().sum::<f64>() / m;
    let var = interior.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / m;
    Ok(Theorem1Summary {
        mean_rdos: mean,
        std_rdos: var.sqrt(),
        interior: interior.len(),
    })
}

/// Empirical exceedance rate next to the analytic bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem2Summary {
    pub empirical_rate: f64,
    pub bound: f64,
    pub trials: usize,
}

/// Uniform sample from the `d`-ball of radius `r`: Gaussian direction,
/// radius `r U^(1/d)`.
pub fn sample_in_ball<R: Rng + ?Sized>(rng: &mut R, d: usize, r: f64) -> Vec<f64> {
    loop {
        let dir: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let radius = r * rng.random::<f64>().powf(1.0 / d as f64);
        return dir.into_iter().map(|x| x * radius / norm).collect();
    }
}

/// Score of a point at the origin whose neighborhood is `neighbors`, where
/// every neighbor's own neighborhood is the rest of the configuration
/// (the other neighbors plus the origin).
pub fn center_score(neighbors: &[Vec<f64>], spec: &KernelSpec) -> f64 {
    let m = neighbors.len();
    let origin = vec![0.0; spec.dim()];
    let all: Vec<&[f64]> = std::iter::once(origin.as_slice())
        .chain(neighbors.iter().map(Vec::as_slice))
        .collect();
    // every point's kernel set is the full configuration, self included
    let density = |i: usize| -> f64 {
        all.iter()
            .map(|x| spec.kernel_from_squared_norm(squared_distance(all[i], x)))
            .sum::<f64>()
            * spec.scale()
            / (m as f64 + 1.0)
    };
    let center = density(0);
    let mean_neighbor = (1..=m).map(density).sum::<f64>() / m as f64;
    mean_neighbor / center
}

/// Runs `trials` independent configurations of `s_size` neighbors uniform in
/// the ball and reports how often the center scores above `gamma`, under the
/// `Paper` kernel convention the bound is stated for.
pub fn validate_theorem2(trials: usize, input: &BoundInput, seed: u64) -> Result<Theorem2Summary> {
    if trials < 1000 {
        return Err(Error::param("trials", format!("need at least 1000, got {trials}")));
    }
    let bound = false_alarm_bound(input)?;
    let spec = KernelSpec::with_convention(input.h, input.d, BandwidthConvention::Paper)?;
    let per = trials as u64 / PARTITIONS;
    let extra = trials as u64 % PARTITIONS;
    let exceed: u64 = (0..PARTITIONS)
        .into_par_iter()
        .map(|part| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(part);
            let count = per + u64::from(part < extra);
            (0..count)
                .filter(|_| {
                    let neighbors: Vec<Vec<f64>> = (0..input.s_size)
                        .map(|_| sample_in_ball(&mut rng, input.d, input.r))
                        .collect();
                    center_score(&neighbors, &spec) > input.gamma
                })
                .count() as u64
        })
        .sum();
    Ok(Theorem2Summary {
        empirical_rate: exceed as f64 / trials as f64,
        bound,
        trials,
    })
}
