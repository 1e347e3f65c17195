//! Gaussian kernel and the local kernel density estimate.
//!
//! The density at a point is the average of kernel bumps centred on the
//! point itself and on every member of its extended neighborhood:
//!
//! ```text
//! p(x_p) = 1 / (|S| + 1) * Σ_{x ∈ S ∪ {x_p}} h^-d K(x - x_p)
//! K(u)   = (2π)^(-d/2) exp(-‖u‖² / (2h))      (BandwidthConvention::Paper)
//! K(u)   = (2π)^(-d/2) exp(-‖u‖² / (2h²))     (BandwidthConvention::Standard)
//! ```
//!
//! Under `Paper` the exponent divides by `h`, not `h²`. Together with the
//! `h^-d` prefactor that kernel does not integrate to one unless `h = 1`;
//! [`kernel_moment_check`] reports the actual mass. `Standard` is the usual
//! unit-mass Gaussian with bandwidth `h`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::data::{squared_distance, Dataset};
use crate::error::{Error, Result};
use crate::neighbors::NeighborSets;

/// How the kernel width enters the Gaussian exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum BandwidthConvention {
    /// `exp(-‖u‖² / (2h))`
    #[default]
    Paper,
    /// `exp(-‖u‖² / (2h²))`
    Standard,
}

impl fmt::Display for BandwidthConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BandwidthConvention::Paper => "paper",
            BandwidthConvention::Standard => "standard",
        })
    }
}

impl FromStr for BandwidthConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(BandwidthConvention::Paper),
            "standard" => Ok(BandwidthConvention::Standard),
            other => Err(Error::param(
                "convention",
                format!("expected `paper` or `standard`, got `{other}`"),
            )),
        }
    }
}

/// Gaussian kernel of width `h` in `d` dimensions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    h: f64,
    dim: usize,
    convention: BandwidthConvention,
}

impl KernelSpec {
    /// A kernel under the default (`Paper`) convention.
    pub fn new(h: f64, dim: usize) -> Result<Self> {
        Self::with_convention(h, dim, BandwidthConvention::Paper)
    }

    pub fn with_convention(h: f64, dim: usize, convention: BandwidthConvention) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::param("h", format!("must be positive and finite, got {h}")));
        }
        if dim == 0 {
            return Err(Error::param("d", "dimension must be at least 1"));
        }
        Ok(KernelSpec { h, dim, convention })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn convention(&self) -> BandwidthConvention {
        self.convention
    }

    /// `(2π)^(-d/2)`, the kernel's value at zero displacement.
    pub fn peak(&self) -> f64 {
        (2.0 * PI).powf(-(self.dim as f64) / 2.0)
    }

    /// The `h^-d` prefactor applied to every kernel term.
    pub fn scale(&self) -> f64 {
        self.h.powi(-(self.dim as i32))
    }

    fn exponent_divisor(&self) -> f64 {
        match self.convention {
            BandwidthConvention::Paper => 2.0 * self.h,
            BandwidthConvention::Standard => 2.0 * self.h * self.h,
        }
    }

    /// Kernel value for a squared displacement norm. Values below the
    /// smallest normal double are flushed to zero.
    #[inline]
    pub fn kernel_from_squared_norm(&self, norm2: f64) -> f64 {
        let v = self.peak() * (-norm2 / self.exponent_divisor()).exp();
        if v < f64::MIN_POSITIVE {
            0.0
        } else {
            v
        }
    }
}

/// `K(u)` for a displacement `u = x - x_i` (unscaled; the width is applied
/// inside according to the convention).
pub fn gaussian_kernel(u: &[f64], spec: &KernelSpec) -> Result<f64> {
    if u.len() != spec.dim {
        return Err(Error::DimensionMismatch {
            expected: spec.dim,
            found: u.len(),
        });
    }
    let norm2: f64 = u.iter().map(|x| x * x).sum();
    Ok(spec.kernel_from_squared_norm(norm2))
}

/// Local density of point `p` over `S(p) ∪ {p}`.
pub fn local_density(data: &Dataset, sets: &NeighborSets, p: usize, spec: &KernelSpec) -> Result<f64> {
    if spec.dim != data.dim() {
        return Err(Error::DimensionMismatch {
            expected: data.dim(),
            found: spec.dim,
        });
    }
    if p >= data.len() {
        return Err(Error::IndexOutOfRange {
            index: p,
            len: data.len(),
        });
    }
    if let Some(&bad) = sets.extended.iter().find(|&&i| i >= data.len()) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            len: data.len(),
        });
    }
    Ok(density_unchecked(data, &sets.extended, p, spec))
}

pub(crate) fn density_unchecked(data: &Dataset, extended: &[usize], p: usize, spec: &KernelSpec) -> f64 {
    let center = data.coords(p);
    let neighbors: f64 = extended
        .iter()
        .map(|&i| spec.kernel_from_squared_norm(squared_distance(data.coords(i), center)))
        .sum();
    // the self term contributes K(0)
    let total = spec.peak() + neighbors;
    spec.scale() * total / (extended.len() as f64 + 1.0)
}

/// Densities for every point, one neighborhood per point.
pub fn density_field(data: &Dataset, neighborhoods: &[NeighborSets], spec: &KernelSpec) -> Result<Vec<f64>> {
    if neighborhoods.len() != data.len() {
        return Err(Error::InvalidData(format!(
            "{} neighborhoods for {} points",
            neighborhoods.len(),
            data.len()
        )));
    }
    if spec.dim != data.dim() {
        return Err(Error::DimensionMismatch {
            expected: data.dim(),
            found: spec.dim,
        });
    }
    Ok(neighborhoods
        .par_iter()
        .enumerate()
        .map(|(p, s)| density_unchecked(data, &s.extended, p, spec))
        .collect())
}

/// Numerical moments of `h^-d K(x)` over `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMoments {
    /// Total mass.
    pub integral: f64,
    /// Mean, one entry per axis.
    pub first_moment: Vec<f64>,
    /// `∫ ‖x‖² h^-d K(x) dx`.
    pub second_moment: f64,
}

/// Integrates the implemented kernel on a midpoint grid with `resolution`
/// cells per axis over ±12 standard deviations. Only `d <= 3` is supported.
pub fn kernel_moment_check(spec: &KernelSpec, resolution: usize) -> Result<KernelMoments> {
    let d = spec.dim;
    if d > 3 {
        return Err(Error::Unsupported(format!(
            "grid quadrature limited to d <= 3, got d = {d}"
        )));
    }
    if resolution < 2 {
        return Err(Error::param("resolution", "need at least 2 cells per axis"));
    }
    let sigma = (spec.exponent_divisor() / 2.0).sqrt();
    let half = 12.0 * sigma;
    let step = 2.0 * half / resolution as f64;
    let cell = step.powi(d as i32);
    let axis: Vec<f64> = (0..resolution).map(|i| -half + (i as f64 + 0.5) * step).collect();

    let total = resolution.pow(d as u32);
    let (integral, first, second) = (0..total)
        .into_par_iter()
        .map(|flat| {
            let mut x = [0.0; 3];
            let mut rem = flat;
            for xj in x.iter_mut().take(d) {
                *xj = axis[rem % resolution];
                rem /= resolution;
            }
            let norm2: f64 = x[..d].iter().map(|v| v * v).sum();
            let w = spec.scale() * spec.kernel_from_squared_norm(norm2) * cell;
            (w, [w * x[0], w * x[1], w * x[2]], w * norm2)
        })
        .reduce(
            || (0.0, [0.0; 3], 0.0),
            |a, b| {
                (
                    a.0 + b.0,
                    [a.1[0] + b.1[0], a.1[1] + b.1[1], a.1[2] + b.1[2]],
                    a.2 + b.2,
                )
            },
        );
    Ok(KernelMoments {
        integral,
        first_moment: first[..d].to_vec(),
        second_moment: second,
    })
}
