//! ROC curves and AUC for labeled data, and AUC-versus-k sweeps across
//! detectors.
//!
//! Outliers are the positive class and a higher score means more outlying.
//! The threshold sweeps the distinct score values from high to low; all
//! points sharing a score enter in the same step, so a block of ties
//! contributes a straight diagonal segment to the curve (half credit in the
//! Mann–Whitney sense).

use std::fmt;
use std::str::FromStr;

use crate::baselines::BaselineMethod;
use crate::data::{Dataset, Label};
use crate::density::KernelSpec;
use crate::error::{Error, Result};
use crate::neighbors::{build_knn_graph_kdtree, KnnGraph};
use crate::rdos::rdos_scores;

/// Any of the five detectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Rdos,
    Baseline(BaselineMethod),
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Rdos,
        Method::Baseline(BaselineMethod::Lof),
        Method::Baseline(BaselineMethod::Inflo),
        Method::Baseline(BaselineMethod::Odin),
        Method::Baseline(BaselineMethod::Mnn),
    ];

    /// Outlierness of every point, larger = more outlying.
    pub fn scores(self, data: &Dataset, graph: &KnnGraph, spec: &KernelSpec) -> Result<Vec<f64>> {
        match self {
            Method::Rdos => Ok(rdos_scores(data, graph, spec)?.rdos),
            Method::Baseline(b) => b.scores(data, graph),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Rdos => f.write_str("rdos"),
            Method::Baseline(b) => b.fmt(f),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("rdos") {
            Ok(Method::Rdos)
        } else {
            s.parse().map(Method::Baseline)
        }
    }
}

/// ROC curve as `(false alarm rate, true positive rate)` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct RocCurve {
    pub points: Vec<(f64, f64)>,
    pub auc: f64,
}

/// Trapezoidal area under a polyline.
pub fn trapezoid_area(points: &[(f64, f64)]) -> f64 {
    points
        .windows(2)
        .map(|w| (w[1].0 - w[0].0) * (w[0].1 + w[1].1) / 2.0)
        .sum()
}

pub fn roc_auc(scores: &[f64], labels: &[Label]) -> Result<RocCurve> {
    if scores.len() != labels.len() {
        return Err(Error::InvalidData(format!(
            "{} scores for {} labels",
            scores.len(),
            labels.len()
        )));
    }
    if let Some(i) = scores.iter().position(|s| s.is_nan()) {
        return Err(Error::InvalidData(format!("score {i} is NaN")));
    }
    let positives = labels.iter().filter(|l| l.is_outlier()).count();
    let negatives = labels.len() - positives;
    if positives == 0 {
        return Err(Error::SingleClass("inlier"));
    }
    if negatives == 0 {
        return Err(Error::SingleClass("outlier"));
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));

    let mut points = vec![(0.0, 0.0)];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut i = 0;
    while i < order.len() {
        let s = scores[order[i]];
        while i < order.len() && scores[order[i]] == s {
            if labels[order[i]].is_outlier() {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push((fp as f64 / negatives as f64, tp as f64 / positives as f64));
    }
    let auc = trapezoid_area(&points);
    Ok(RocCurve { points, auc })
}

/// One row of an AUC-versus-k sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub k: usize,
    pub method: Method,
    pub auc: f64,
}

/// AUC of one method for each `k`, rebuilding the graph per `k`.
pub fn auc_vs_k_sweep(data: &Dataset, method: Method, k_values: &[usize], spec: &KernelSpec) -> Result<Vec<SweepRow>> {
    auc_sweep_methods(data, &[method], k_values, spec)
}

/// AUC of several methods per `k`. All methods for a given `k` are scored
/// on the same graph. Rows come out grouped by `k` in input order, methods
/// in the given order.
pub fn auc_sweep_methods(
    data: &Dataset,
    methods: &[Method],
    k_values: &[usize],
    spec: &KernelSpec,
) -> Result<Vec<SweepRow>> {
    let labels = data.labels().ok_or(Error::MissingLabels)?;
    let mut rows = Vec::with_capacity(methods.len() * k_values.len());
    for &k in k_values {
        let graph = build_knn_graph_kdtree(data, k)?;
        for &method in methods {
            let scores = method.scores(data, &graph, spec)?;
            rows.push(SweepRow {
                k,
                method,
                auc: roc_auc(&scores, labels)?.auc,
            });
        }
    }
    Ok(rows)
}
