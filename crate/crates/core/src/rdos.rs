//! Relative density-based outlier scores, top-n ranking and threshold
//! detection.
//!
//! `rdos(p) = Σ_{i ∈ S(p)} density(i) / (|S(p)| · density(p))`
//!
//! Scores are computed in two passes: every density first, then every ratio,
//! so each density is evaluated once and shared by all neighborhoods that
//! contain it.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::data::Dataset;
use crate::density::{density_field, BandwidthConvention, KernelSpec};
use crate::error::{Error, Result};
use crate::neighbors::{all_neighborhoods, KnnGraph, NeighborSets};

/// Provenance of a score report.
#[derive(Debug, Clone, PartialEq)]
pub struct RunMeta {
    pub k: usize,
    pub h: f64,
    pub convention: BandwidthConvention,
    pub fingerprint: String,
}

/// Per-point density, score and rank (1 = most outlying).
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreReport {
    pub densities: Vec<f64>,
    pub rdos: Vec<f64>,
    pub ranks: Vec<usize>,
    pub meta: RunMeta,
}

impl ScoreReport {
    pub fn len(&self) -> usize {
        self.rdos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rdos.is_empty()
    }

    /// Indices in rank order.
    pub fn ranking(&self) -> Vec<usize> {
        ranking(&self.rdos)
    }
}

/// Indices sorted by descending score, ties by ascending index.
pub fn ranking(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| match scores[b].total_cmp(&scores[a]) {
        Ordering::Equal => a.cmp(&b),
        o => o,
    });
    order
}

/// 1-based ranks under [`ranking`].
pub fn ranks_from_scores(scores: &[f64]) -> Vec<usize> {
    let mut ranks = vec![0; scores.len()];
    for (r, i) in ranking(scores).into_iter().enumerate() {
        ranks[i] = r + 1;
    }
    ranks
}

/// Second pass: ratio of mean neighborhood density to own density.
pub fn relative_scores(neighborhoods: &[NeighborSets], densities: &[f64]) -> Result<Vec<f64>> {
    if neighborhoods.len() != densities.len() {
        return Err(Error::InvalidData(format!(
            "{} neighborhoods for {} densities",
            neighborhoods.len(),
            densities.len()
        )));
    }
    neighborhoods
        .par_iter()
        .enumerate()
        .map(|(p, s)| {
            if s.extended.is_empty() {
                return Err(Error::InvalidData(format!("point {p} has an empty neighborhood")));
            }
            let mut sum = 0.0;
            for &i in &s.extended {
                sum += *densities.get(i).ok_or(Error::IndexOutOfRange {
                    index: i,
                    len: densities.len(),
                })?;
            }
            Ok(sum / (s.extended.len() as f64 * densities[p]))
        })
        .collect()
}

/// Scores every point of `data` over the neighborhoods of `graph`.
pub fn rdos_scores(data: &Dataset, graph: &KnnGraph, spec: &KernelSpec) -> Result<ScoreReport> {
    if graph.len() != data.len() {
        return Err(Error::InvalidData(format!(
            "graph has {} vertices, dataset has {} points",
            graph.len(),
            data.len()
        )));
    }
    let neighborhoods = all_neighborhoods(graph);
    let densities = density_field(data, &neighborhoods, spec)?;
    let rdos = relative_scores(&neighborhoods, &densities)?;
    let ranks = ranks_from_scores(&rdos);
    Ok(ScoreReport {
        densities,
        rdos,
        ranks,
        meta: RunMeta {
            k: graph.k(),
            h: spec.h(),
            convention: spec.convention(),
            fingerprint: data.fingerprint(),
        },
    })
}

/// The `n` most outlying points, in rank order.
pub fn top_n(report: &ScoreReport, n: usize) -> Result<Vec<usize>> {
    if n == 0 || n > report.len() {
        return Err(Error::param("n", format!("must be in 1..={}, got {n}", report.len())));
    }
    let mut order = report.ranking();
    order.truncate(n);
    Ok(order)
}

/// Flags points whose score strictly exceeds `tau`. Requires `tau > 1`.
pub fn threshold_detect(report: &ScoreReport, tau: f64) -> Result<Vec<bool>> {
    if tau.is_nan() || tau <= 1.0 {
        return Err(Error::ThresholdTooLow(tau));
    }
    Ok(report.rdos.iter().map(|&s| s > tau).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neighbors::build_knn_graph_kdtree;

    fn report_with(rdos: Vec<f64>) -> ScoreReport {
        ScoreReport {
            densities: vec![1.0; rdos.len()],
            ranks: ranks_from_scores(&rdos),
            rdos,
            meta: RunMeta {
                k: 1,
                h: 1.0,
                convention: BandwidthConvention::Paper,
                fingerprint: String::new(),
            },
        }
    }

    #[test]
    fn identical_points_score_one() {
        let ds = Dataset::from_rows(vec![vec![0.5, 0.5]; 12]).unwrap();
        let g = build_knn_graph_kdtree(&ds, 4).unwrap();
        let spec = KernelSpec::new(0.01, 2).unwrap();
        let r = rdos_scores(&ds, &g, &spec).unwrap();
        // every point sees the same neighborhood size, so densities coincide
        for s in &r.rdos {
            assert!((s - 1.0).abs() < 1e-12, "{s}");
        }
        assert_eq!(r.ranking(), (0..12).collect::<Vec<_>>());
    }

    #[test]
    fn symmetric_ring_scores_one() {
        let n = 10;
        let rows = (0..n)
            .map(|i| {
                let a = i as f64 * std::f64::consts::TAU / n as f64;
                vec![a.cos(), a.sin()]
            })
            .collect();
        let ds = Dataset::from_rows(rows).unwrap();
        let g = build_knn_graph_kdtree(&ds, 2).unwrap();
        let r = rdos_scores(&ds, &g, &KernelSpec::new(0.5, 2).unwrap()).unwrap();
        for s in &r.rdos {
            assert!((s - 1.0).abs() < 1e-9, "{s}");
        }
    }

    #[test]
    fn scaled_densities_leave_scores_unchanged() {
        let ds = Dataset::from_rows(vec![
            vec![0.0, 0.0],
            vec![0.1, 0.0],
            vec![0.0, 0.2],
            vec![0.3, 0.1],
            vec![2.0, 2.0],
            vec![0.2, 0.25],
        ])
        .unwrap();
        let g = build_knn_graph_kdtree(&ds, 2).unwrap();
        let hoods = all_neighborhoods(&g);
        let dens = density_field(&ds, &hoods, &KernelSpec::new(0.1, 2).unwrap()).unwrap();
        let base = relative_scores(&hoods, &dens).unwrap();
        for c in [1e-6, 0.37, 42.0, 1e9] {
            let scaled: Vec<f64> = dens.iter().map(|d| d * c).collect();
            let got = relative_scores(&hoods, &scaled).unwrap();
            for (a, b) in base.iter().zip(&got) {
                assert!((a - b).abs() <= 1e-12 * a);
            }
        }
    }

    #[test]
    fn top_n_and_ties() {
        let r = report_with(vec![0.5, 3.0, 1.0, 3.0, 2.0]);
        assert_eq!(top_n(&r, 3).unwrap(), vec![1, 3, 4]);
        let mut all = top_n(&r, 5).unwrap();
        all.sort_unstable();
        assert_eq!(all, vec![0, 1, 2, 3, 4]);
        assert!(top_n(&r, 0).is_err());
        assert!(top_n(&r, 6).is_err());

        let flat = report_with(vec![1.0; 6]);
        assert_eq!(top_n(&flat, 4).unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(flat.ranks, vec![1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn threshold_rules() {
        let r = report_with(vec![1.2, 5.0, 0.8, 5.0, 2.0]);
        assert_eq!(threshold_detect(&r, f64::INFINITY).unwrap(), vec![false; 5]);
        assert_eq!(
            threshold_detect(&r, 4.999_999).unwrap(),
            vec![false, true, false, true, false]
        );
        // strict inequality
        assert_eq!(
            threshold_detect(&r, 2.0).unwrap(),
            vec![false, true, false, true, false]
        );
        assert!(matches!(threshold_detect(&r, 1.0), Err(Error::ThresholdTooLow(_))));
        assert!(threshold_detect(&r, 0.5).is_err());
        assert!(threshold_detect(&r, f64::NAN).is_err());
    }

    #[test]
    fn report_carries_provenance() {
        let ds = Dataset::from_rows(vec![vec![0.0], vec![1.0], vec![3.0]]).unwrap();
        let g = build_knn_graph_kdtree(&ds, 1).unwrap();
        let spec = KernelSpec::with_convention(0.4, 1, BandwidthConvention::Standard).unwrap();
        let r = rdos_scores(&ds, &g, &spec).unwrap();
        assert_eq!(r.meta.k, 1);
        assert_eq!(r.meta.h, 0.4);
        assert_eq!(r.meta.convention, BandwidthConvention::Standard);
        assert_eq!(r.meta.fingerprint, ds.fingerprint());
        assert!(r.rdos.iter().all(|&s| s > 0.0));
    }

    #[test]
    fn graph_size_must_match() {
        let a = Dataset::from_rows(vec![vec![0.0], vec![1.0], vec![3.0]]).unwrap();
        let b = Dataset::from_rows(vec![vec![0.0], vec![1.0]]).unwrap();
        let g = build_knn_graph_kdtree(&b, 1).unwrap();
        assert!(rdos_scores(&a, &g, &KernelSpec::new(1.0, 1).unwrap()).is_err());
    }
}
