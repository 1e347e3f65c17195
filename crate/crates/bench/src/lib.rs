//! Shared inputs for the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rdos_core::{Dataset, Label};

/// `n` points uniform on the unit cube in `d` dimensions.
pub fn uniform(n: usize, d: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..n).map(|_| (0..d).map(|_| rng.random::<f64>()).collect()).collect();
    Dataset::from_rows(rows).expect("n >= 2, finite coordinates")
}

/// Random scores with about 5% outlier labels, both classes present.
pub fn scored_labels(n: usize, seed: u64) -> (Vec<f64>, Vec<Label>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scores = (0..n).map(|_| rng.random::<f64>()).collect();
    let mut labels: Vec<Label> = (0..n)
        .map(|_| {
            if rng.random_bool(0.05) {
                Label::Outlier
            } else {
                Label::Inlier
            }
        })
        .collect();
    labels[0] = Label::Outlier;
    labels[1] = Label::Inlier;
    (scores, labels)
}
