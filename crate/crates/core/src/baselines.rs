//! Comparison detectors that share the KNN graph with RDOS.
//!
//! All four return one finite value per point with larger meaning more
//! outlying:
//!
//! * **ODIN** (indegree number): `1 / (indegree(p) + 1)`.
//! * **LOF**: `reach(p, o) = max(kdist(o), d(p, o))`,
//!   `lrd(p) = k / Σ_{o ∈ kNN(p)} reach(p, o)`,
//!   `LOF(p) = mean_{o ∈ kNN(p)} lrd(o) / lrd(p)`.
//! * **INFLO**: influence space `IS(p) = kNN(p) ∪ RNN(p)`,
//!   `den(p) = 1 / kdist(p)`, `INFLO(p) = mean_{o ∈ IS(p)} den(o) / den(p)`.
//! * **MNN** (mutual nearest neighbors): with
//!   `m(p) = |{o ∈ kNN(p) : p ∈ kNN(o)}|`, the score is `1 / (m(p) + 1)`.
//!
//! ODIN and MNN count connectivity, where more means less outlying, so both
//! are passed through `x -> 1 / (x + 1)`. AUC is unaffected by that
//! monotone transform.
//!
//! Duplicates: when every reach distance of a point is zero its lrd is
//! infinite. Such a point gets LOF 1. A neighbor with infinite lrd
//! contributes [`DENSITY_CAP`] to the mean. INFLO caps `den` at the same
//! constant when the k-distance is zero.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::data::{squared_distance, Dataset};
use crate::error::{Error, Result};
use crate::neighbors::KnnGraph;

/// Stand-in for an infinite density caused by coincident points.
pub const DENSITY_CAP: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaselineMethod {
    Odin,
    Lof,
    Inflo,
    Mnn,
}

impl BaselineMethod {
    pub const ALL: [BaselineMethod; 4] = [
        BaselineMethod::Odin,
        BaselineMethod::Lof,
        BaselineMethod::Inflo,
        BaselineMethod::Mnn,
    ];

    pub fn scores(self, data: &Dataset, graph: &KnnGraph) -> Result<Vec<f64>> {
        match self {
            BaselineMethod::Odin => Ok(odin_scores(graph)),
            BaselineMethod::Lof => lof_scores(data, graph),
            BaselineMethod::Inflo => inflo_scores(data, graph),
            BaselineMethod::Mnn => mnn_scores(data, graph),
        }
    }
}

impl fmt::Display for BaselineMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BaselineMethod::Odin => "odin",
            BaselineMethod::Lof => "lof",
            BaselineMethod::Inflo => "inflo",
            BaselineMethod::Mnn => "mnn",
        })
    }
}

impl FromStr for BaselineMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "odin" => Ok(BaselineMethod::Odin),
            "lof" => Ok(BaselineMethod::Lof),
            "inflo" => Ok(BaselineMethod::Inflo),
            "mnn" => Ok(BaselineMethod::Mnn),
            other => Err(Error::param("method", format!("unknown baseline `{other}`"))),
        }
    }
}

fn check_sizes(data: &Dataset, graph: &KnnGraph) -> Result<()> {
    if data.len() != graph.len() {
        return Err(Error::InvalidData(format!(
            "graph has {} vertices, dataset has {} points",
            graph.len(),
            data.len()
        )));
    }
    Ok(())
}

pub fn odin_scores(graph: &KnnGraph) -> Vec<f64> {
    (0..graph.len())
        .map(|p| 1.0 / (graph.in_degree(p) as f64 + 1.0))
        .collect()
}

fn local_reachability_density(data: &Dataset, graph: &KnnGraph, p: usize) -> f64 {
    let k = graph.k();
    let reach_sum: f64 = graph
        .out_edges(p)
        .iter()
        .map(|&o| {
            let d = squared_distance(data.coords(p), data.coords(o)).sqrt();
            graph.k_distance(o).max(d)
        })
        .sum();
    if reach_sum > 0.0 {
        k as f64 / reach_sum
    } else {
        f64::INFINITY
    }
}

pub fn lof_scores(data: &Dataset, graph: &KnnGraph) -> Result<Vec<f64>> {
    check_sizes(data, graph)?;
    let lrd: Vec<f64> = (0..graph.len())
        .into_par_iter()
        .map(|p| local_reachability_density(data, graph, p))
        .collect();
    Ok((0..graph.len())
        .into_par_iter()
        .map(|p| {
            if lrd[p].is_infinite() {
                return 1.0;
            }
            let neigh = graph.out_edges(p);
            let mean = neigh.iter().map(|&o| lrd[o].min(DENSITY_CAP)).sum::<f64>() / neigh.len() as f64;
            mean / lrd[p]
        })
        .collect())
}

pub fn inflo_scores(data: &Dataset, graph: &KnnGraph) -> Result<Vec<f64>> {
    check_sizes(data, graph)?;
    let den: Vec<f64> = (0..graph.len())
        .map(|p| {
            let kd = graph.k_distance(p);
            if kd > 0.0 {
                (1.0 / kd).min(DENSITY_CAP)
            } else {
                DENSITY_CAP
            }
        })
        .collect();
    Ok((0..graph.len())
        .into_par_iter()
        .map(|p| {
            let mut influence: Vec<usize> = graph.out_edges(p).to_vec();
            influence.extend(graph.in_edges(p));
            influence.sort_unstable();
            influence.dedup();
            let mean = influence.iter().map(|&o| den[o]).sum::<f64>() / influence.len() as f64;
            mean / den[p]
        })
        .collect())
}

/// Number of mutual nearest-neighbor pairs each point takes part in.
pub fn mutual_counts(graph: &KnnGraph) -> Vec<usize> {
    (0..graph.len())
        .map(|p| {
            graph
                .out_edges(p)
                .iter()
                .filter(|&&o| graph.out_edges(o).contains(&p))
                .count()
        })
        .collect()
}

pub fn mnn_scores(data: &Dataset, graph: &KnnGraph) -> Result<Vec<f64>> {
    check_sizes(data, graph)?;
    Ok(mutual_counts(graph)
        .into_iter()
        .map(|m| 1.0 / (m as f64 + 1.0))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neighbors::build_knn_graph_bruteforce;

    fn line(xs: &[f64]) -> Dataset {
        Dataset::from_rows(xs.iter().map(|&x| vec![x]).collect()).unwrap()
    }

    fn argmax(v: &[f64]) -> usize {
        crate::rdos::ranking(v)[0]
    }

    #[test]
    fn odin_examples() {
        let g = build_knn_graph_bruteforce(&line(&[0.0, 1.0, 10.0]), 1).unwrap();
        assert_eq!(odin_scores(&g)[2], 1.0);
        let g = build_knn_graph_bruteforce(&line(&[0.0, 1.0]), 1).unwrap();
        assert_eq!(odin_scores(&g), vec![0.5, 0.5]);

        // hub plus five arms at unit radius, 72° apart (arm spacing 1.18)
        let mut rows = vec![vec![0.0, 0.0]];
        rows.extend((0..5).map(|i| {
            let a = i as f64 * std::f64::consts::TAU / 5.0;
            vec![a.cos(), a.sin()]
        }));
        let star = Dataset::from_rows(rows).unwrap();
        let g = build_knn_graph_bruteforce(&star, 1).unwrap();
        assert_eq!(g.in_degree(0), 5);
        assert!((odin_scores(&g)[0] - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn mnn_examples() {
        let pair = line(&[0.0, 1.0]);
        let g = build_knn_graph_bruteforce(&pair, 1).unwrap();
        assert_eq!(mnn_scores(&pair, &g).unwrap(), vec![0.5, 0.5]);

        // ends point at the middle; the middle points at the nearer end
        let chain = line(&[0.0, 1.0, 2.5]);
        let g = build_knn_graph_bruteforce(&chain, 1).unwrap();
        assert_eq!(mutual_counts(&g), vec![1, 1, 0]);

        let iso = line(&[0.0, 0.1, 0.2, 9.0]);
        let g = build_knn_graph_bruteforce(&iso, 1).unwrap();
        assert_eq!(mnn_scores(&iso, &g).unwrap()[3], 1.0);
    }

    /// LOF on five points of a line, evaluated by hand.
    ///
    /// x = [0, 1, 2, 4, 8], k = 2
    /// kNN: 0→{1,2} 1→{0,2} 2→{1,3}* 3→{2,1} 4→{3,2}
    /// (*2: d(2,1)=1, d(2,0)=2, d(2,3)=2 → tie, index 0 wins) so 2→{1,0}
    /// kdist: 0:2 1:1 2:2 3:3 4:6
    #[test]
    fn lof_hand_example() {
        let ds = line(&[0.0, 1.0, 2.0, 4.0, 8.0]);
        let g = build_knn_graph_bruteforce(&ds, 2).unwrap();
        assert_eq!(g.out_edges(2), &[1, 0]);
        assert_eq!(g.out_edges(3), &[2, 1]);
        // reach sums
        // 0: max(1,1)+max(2,2)=3      → lrd 2/3
        // 1: max(2,1)+max(2,1)=4      → lrd 1/2
        // 2: max(1,1)+max(2,2)=3      → lrd 2/3
        // 3: max(2,2)+max(1,3)=5      → lrd 2/5
        // 4: max(3,4)+max(2,6)=10     → lrd 1/5
        let lrd = [2.0 / 3.0, 0.5, 2.0 / 3.0, 0.4, 0.2];
        let expected = [
            (lrd[1] + lrd[2]) / 2.0 / lrd[0],
            (lrd[0] + lrd[2]) / 2.0 / lrd[1],
            (lrd[1] + lrd[0]) / 2.0 / lrd[2],
            (lrd[2] + lrd[1]) / 2.0 / lrd[3],
            (lrd[3] + lrd[2]) / 2.0 / lrd[4],
        ];
        let got = lof_scores(&ds, &g).unwrap();
        for (a, b) in got.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-9, "{got:?} vs {expected:?}");
        }
        assert_eq!(argmax(&got), 4);
    }

    #[test]
    fn lof_grid_interior_near_one() {
        let rows = (0..15)
            .flat_map(|i| (0..15).map(move |j| vec![i as f64, j as f64]))
            .collect();
        let ds = Dataset::from_rows(rows).unwrap();
        let g = build_knn_graph_bruteforce(&ds, 4).unwrap();
        let lof = lof_scores(&ds, &g).unwrap();
        for i in 2..13 {
            for j in 2..13 {
                let v = lof[i * 15 + j];
                assert!((0.8..=1.2).contains(&v), "({i},{j}) {v}");
            }
        }
    }

    #[test]
    fn lof_duplicates() {
        let ds = line(&[1.0, 1.0, 1.0, 2.0, 3.0]);
        let g = build_knn_graph_bruteforce(&ds, 2).unwrap();
        let lof = lof_scores(&ds, &g).unwrap();
        assert_eq!(lof[0], 1.0);
        assert!(lof.iter().all(|v| v.is_finite()));
    }

    /// INFLO on x = [0, 1, 2, 4, 8, 8.5], k = 2, computed from IS/den.
    #[test]
    fn inflo_hand_example() {
        let ds = line(&[0.0, 1.0, 2.0, 4.0, 8.0, 8.5]);
        let g = build_knn_graph_bruteforce(&ds, 2).unwrap();
        // kNN: 0→{1,2} 1→{0,2} 2→{1,0} 3→{2,1} 4→{5,3} 5→{4,3}
        // kdist: 0:2 1:1 2:2 3:3 4:4 5:4.5
        // RNN: 0←{1,2} 1←{0,2,3} 2←{0,1,3} 3←{4,5} 4←{5} 5←{4}
        let den = [0.5, 1.0, 0.5, 1.0 / 3.0, 0.25, 1.0 / 4.5];
        let is: [&[usize]; 6] = [&[1, 2], &[0, 2, 3], &[0, 1, 3], &[1, 2, 4, 5], &[3, 5], &[3, 4]];
        let got = inflo_scores(&ds, &g).unwrap();
        for p in 0..6 {
            let mean = is[p].iter().map(|&o| den[o]).sum::<f64>() / is[p].len() as f64;
            assert!((got[p] - mean / den[p]).abs() < 1e-9, "p={p}");
        }
    }

    #[test]
    fn inflo_symmetric_cluster_is_one() {
        let ds = Dataset::from_rows(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, 3f64.sqrt() / 2.0]]).unwrap();
        let g = build_knn_graph_bruteforce(&ds, 2).unwrap();
        for v in inflo_scores(&ds, &g).unwrap() {
            assert!((v - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn inflo_duplicates_stay_finite() {
        let ds = line(&[1.0, 1.0, 1.0, 5.0]);
        let g = build_knn_graph_bruteforce(&ds, 2).unwrap();
        assert!(inflo_scores(&ds, &g).unwrap().iter().all(|v| v.is_finite()));
    }

    #[test]
    fn every_baseline_ranks_far_outlier_first() {
        let mut rows: Vec<Vec<f64>> = (0..50)
            .map(|i| {
                let a = i as f64 * 2.399_963;
                let r = 0.1 * ((i as f64 + 0.5) / 50.0).sqrt();
                vec![r * a.cos(), r * a.sin()]
            })
            .collect();
        rows.push(vec![2.0, 0.0]);
        let ds = Dataset::from_rows(rows).unwrap();
        let g = build_knn_graph_bruteforce(&ds, 5).unwrap();
        for m in BaselineMethod::ALL {
            let s = m.scores(&ds, &g).unwrap();
            assert_eq!(argmax(&s), 50, "{m}");
        }
    }

    #[test]
    fn method_names_round_trip() {
        for m in BaselineMethod::ALL {
            assert_eq!(m.to_string().parse::<BaselineMethod>().unwrap(), m);
        }
        assert!("cof".parse::<BaselineMethod>().is_err());
    }
}
