//! Points, datasets and the distance primitive shared by every detector.

use std::fmt;
use std::ops::Index;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Ground-truth annotation attached to a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Inlier,
    Outlier,
}

impl Label {
    pub fn is_outlier(self) -> bool {
        matches!(self, Label::Outlier)
    }

    /// Swaps inlier and outlier.
    pub fn flipped(self) -> Self {
        match self {
            Label::Inlier => Label::Outlier,
            Label::Outlier => Label::Inlier,
        }
    }
}

/// A point in `R^d` with finite coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidData("point has no coordinates".into()));
        }
        if let Some(coord) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { point: 0, coord });
        }
        Ok(Point(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Index<usize> for Point {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// An ordered collection of at least two points of equal dimension,
/// optionally labeled.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    points: Vec<Point>,
    labels: Option<Vec<Label>>,
    names: Option<Vec<String>>,
}

impl Dataset {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidData(format!(
                "need at least 2 points, got {}",
                points.len()
            )));
        }
        let dim = points[0].dim();
        for p in &points[1..] {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
        }
        Ok(Dataset {
            points,
            labels: None,
            names: None,
        })
    }

    /// Builds a dataset from raw rows, reporting the offending cell on
    /// non-finite input.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let points = rows
            .into_iter()
            .enumerate()
            .map(|(i, row)| {
                Point::new(row).map_err(|e| match e {
                    Error::NonFinite { coord, .. } => Error::NonFinite { point: i, coord },
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Dataset::new(points)
    }

    pub fn with_labels(mut self, labels: Vec<Label>) -> Result<Self> {
        if labels.len() != self.points.len() {
            return Err(Error::InvalidData(format!(
                "{} labels for {} points",
                labels.len(),
                self.points.len()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.dim() {
            return Err(Error::InvalidData(format!(
                "{} feature names for dimension {}",
                names.len(),
                self.dim()
            )));
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Always false: a dataset holds at least two points.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn coords(&self, i: usize) -> &[f64] {
        self.points[i].coords()
    }

    pub fn labels(&self) -> Option<&[Label]> {
        self.labels.as_deref()
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// Returns the dataset with rows reordered so that row `i` of the result
    /// is row `order[i]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let n = self.len();
        let mut seen = vec![false; n];
        if order.len() != n {
            return Err(Error::param("order", format!("length {} != {n}", order.len())));
        }
        for &i in order {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::param("order", "not a permutation"));
            }
        }
        Ok(Dataset {
            points: order.iter().map(|&i| self.points[i].clone()).collect(),
            labels: self.labels.as_ref().map(|l| order.iter().map(|&i| l[i]).collect()),
            names: self.names.clone(),
        })
    }

    /// Hex digest of the coordinate bit patterns, used to tie a score report
    /// to the data it was computed from.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update((self.len() as u64).to_le_bytes());
        hasher.update((self.dim() as u64).to_le_bytes());
        for p in &self.points {
            for c in p.coords() {
                hasher.update(c.to_bits().to_le_bytes());
            }
        }
        let digest = hasher.finalize();
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Run parameters of the detector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    pub k: usize,
    pub h: f64,
    pub tau: Option<f64>,
    pub top_n: usize,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            k: 21,
            h: 0.01,
            tau: None,
            top_n: 1,
        }
    }
}

impl Params {
    /// Checks the parameters against a dataset of `n` points.
    pub fn validate(&self, n: usize) -> Result<()> {
        check_k(self.k, n)?;
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(Error::param(
                "h",
                format!("must be positive and finite, got {}", self.h),
            ));
        }
        if let Some(tau) = self.tau {
            if tau.is_nan() || tau <= 1.0 {
                return Err(Error::ThresholdTooLow(tau));
            }
        }
        if self.top_n == 0 || self.top_n > n {
            return Err(Error::param("top_n", format!("must be in 1..={n}, got {}", self.top_n)));
        }
        Ok(())
    }
}

pub(crate) fn check_k(k: usize, n: usize) -> Result<()> {
    if k == 0 || k >= n {
        return Err(Error::param(
            "k",
            format!("must satisfy 1 <= k <= N - 1 = {}, got {k}", n.saturating_sub(1)),
        ));
    }
    Ok(())
}

/// Squared Euclidean distance, summed in coordinate order.
///
/// Both neighbor builders order candidates by this exact value, which is
/// what makes their outputs bit-identical under ties.
#[inline]
pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

pub fn euclidean_distance(a: &Point, b: &Point) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(squared_distance(a.coords(), b.coords()).sqrt())
}

/// Rescales every feature to `[0, 1]` using the minimum and maximum over the
/// whole dataset. Constant features map to 0.
pub fn minmax_normalize(data: &Dataset) -> Dataset {
    let d = data.dim();
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for p in data.points() {
        for (j, &c) in p.coords().iter().enumerate() {
            lo[j] = lo[j].min(c);
            hi[j] = hi[j].max(c);
        }
    }
    let points = data
        .points()
        .iter()
        .map(|p| {
            let coords = p
                .coords()
                .iter()
                .enumerate()
                .map(|(j, &c)| {
                    let range = hi[j] - lo[j];
                    if range > 0.0 {
                        // min() guards the top end against rounding above 1
                        ((c - lo[j]) / range).min(1.0)
                    } else {
                        0.0
                    }
                })
                .collect();
            Point(coords)
        })
        .collect();
    Dataset {
        points,
        labels: data.labels.clone(),
        names: data.names.clone(),
    }
}
