use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rdos_cli::{gen_dataset, load_csv, GenConfig, GenVariant};
use rdos_core::Label;
use tempfile::TempDir;

fn rdos(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rdos"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn gen_file(dir: &TempDir, variant: &str, seed: u64) -> PathBuf {
    let path = dir.path().join(format!("{variant}-{seed}.csv"));
    let out = rdos(&[
        "gen",
        "--variant",
        variant,
        "--seed",
        &seed.to_string(),
        "--out",
        path_str(&path),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn gen_round_trips_exactly() {
    let dir = TempDir::new().unwrap();
    for (variant, v) in [
        ("two-gaussians", GenVariant::TwoGaussians),
        ("cosine", GenVariant::Cosine),
    ] {
        let path = gen_file(&dir, variant, 11);
        let loaded = load_csv(&path).unwrap();
        let expected = gen_dataset(&GenConfig {
            variant: v,
            seed: 11,
            n: None,
            noise_sigma2: None,
            outliers: true,
        })
        .unwrap();
        assert_eq!(loaded, expected);
    }
}

#[test]
fn defaults_rank_planted_outliers_first() {
    let dir = TempDir::new().unwrap();
    let path = gen_file(&dir, "two-gaussians", 3);
    let text = stdout(&rdos(&[
        "rank",
        "--input",
        path_str(&path),
        "--method",
        "rdos",
        "--k",
        "21",
        "--h",
        "0.01",
        "--top-n",
        "3",
    ]));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("index,score,density"));
    let mut top: Vec<usize> = lines.map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    top.sort();
    assert_eq!(top, vec![200, 201, 202]);
}

#[test]
fn score_columns_follow_method_and_tau() {
    let dir = TempDir::new().unwrap();
    let path = gen_file(&dir, "two-gaussians", 0);
    let p = path_str(&path);

    let plain = stdout(&rdos(&["score", "--input", p]));
    assert_eq!(plain.lines().count(), 204);
    assert_eq!(plain.lines().next(), Some("index,score,density"));

    let flagged = stdout(&rdos(&["score", "--input", p, "--tau", "2"]));
    assert_eq!(flagged.lines().next(), Some("index,score,density,flag"));
    let flags: Vec<&str> = flagged.lines().skip(1).map(|l| l.rsplit(',').next().unwrap()).collect();
    assert!(flags.iter().all(|f| *f == "0" || *f == "1"));
    assert_eq!(&flags[200..], &["1", "1", "1"]);

    let lof = stdout(&rdos(&["score", "--input", p, "--method", "lof"]));
    assert_eq!(lof.lines().next(), Some("index,score"));
}

#[test]
fn output_is_byte_identical_across_runs_and_threads() {
    let dir = TempDir::new().unwrap();
    let path = gen_file(&dir, "cosine", 5);
    let p = path_str(&path);
    let a = stdout(&rdos(&["score", "--input", p, "--k", "15"]));
    let b = stdout(&rdos(&["score", "--input", p, "--k", "15"]));
    let c = stdout(&rdos(&["--threads", "1", "score", "--input", p, "--k", "15"]));
    assert_eq!(a, b);
    assert_eq!(a, c);

    let g1 = stdout(&rdos(&["gen", "--variant", "cosine", "--seed", "9"]));
    let g2 = stdout(&rdos(&["--threads", "3", "gen", "--variant", "cosine", "--seed", "9"]));
    assert_eq!(g1, g2);
}

#[test]
fn scores_have_nine_significant_digits() {
    let dir = TempDir::new().unwrap();
    let path = gen_file(&dir, "two-gaussians", 0);
    let text = stdout(&rdos(&["score", "--input", path_str(&path)]));
    for line in text.lines().skip(1) {
        let score = line.split(',').nth(1).unwrap();
        let digits = score
            .split(['e', 'E'])
            .next()
            .unwrap()
            .chars()
            .filter(char::is_ascii_digit)
            .collect::<String>();
        assert!(digits.trim_start_matches('0').len() <= 9, "{score}");
        let v: f64 = score.parse().unwrap();
        assert!(v.is_finite() && v > 0.0);
    }
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let path = gen_file(&dir, "two-gaussians", 0);
    let p = path_str(&path);
    let code = |args: &[&str]| rdos(args).status.code().unwrap();

    assert_eq!(code(&["score", "--input", p, "--tau", "1.0"]), 2);
    assert_eq!(code(&["score", "--input", p, "--tau", "0.5"]), 2);
    assert_eq!(code(&["score", "--input", p, "--k", "203"]), 2);
    assert_eq!(code(&["score", "--input", p, "--h", "-1"]), 2);
    assert_eq!(code(&["score", "--input", p, "--method", "ldof"]), 2);
    assert_eq!(code(&["rank", "--input", p, "--top-n", "0"]), 2);
    assert_eq!(code(&["bogus"]), 2);

    let missing = dir.path().join("missing.csv");
    assert_eq!(code(&["score", "--input", path_str(&missing)]), 3);

    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "x,y\n1,2\n3,oops\n").unwrap();
    let out = rdos(&["score", "--input", path_str(&bad)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("row 3, column 2"));

    let unlabeled = dir.path().join("unlabeled.csv");
    std::fs::write(&unlabeled, "1,2\n3,4\n5,6\n7,8\n").unwrap();
    assert_eq!(code(&["eval", "--input", path_str(&unlabeled), "--k", "2"]), 3);
    assert_eq!(code(&["score", "--input", path_str(&unlabeled), "--k", "2"]), 0);
}

#[test]
fn eval_reports_auc() {
    let dir = TempDir::new().unwrap();
    let path = gen_file(&dir, "two-gaussians", 2);
    let out = rdos(&["eval", "--input", path_str(&path)]);
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("fpr,tpr"));
    assert_eq!(text.lines().nth(1), Some("0,0"));
    assert_eq!(text.lines().last(), Some("1,1"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("auc=1"));
}

#[test]
fn sweep_emits_one_row_per_pair() {
    let dir = TempDir::new().unwrap();
    let path = gen_file(&dir, "cosine", 1);
    let text = stdout(&rdos(&[
        "sweep",
        "--input",
        path_str(&path),
        "--methods",
        "rdos,lof,mnn",
        "--k-values",
        "5,10",
    ]));
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "k,method,auc");
    assert_eq!(rows.len(), 1 + 6);
    assert!(rows[1].starts_with("5,rdos,"));
    assert!(rows[6].starts_with("10,mnn,"));
}

#[test]
fn graph_dump_lists_k_edges_per_point() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("line.csv");
    std::fs::write(&path, "0\n1\n3\n").unwrap();
    let text = stdout(&rdos(&[
        "graph-dump",
        "--input",
        path_str(&path),
        "--k",
        "1",
        "--normalize",
        "false",
    ]));
    assert_eq!(text, "0 1 1\n1 0 1\n2 1 2\n");
}

#[test]
fn validate_subcommands_write_tables() {
    let text = stdout(&rdos(&[
        "validate",
        "uniform",
        "--n-points",
        "500",
        "--k",
        "10",
        "--seeds",
        "2",
    ]));
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "seed,n_points,k,h,interior,mean_rdos,std_rdos");
    assert_eq!(rows.len(), 3);

    let text = stdout(&rdos(&[
        "validate", "bound", "--gamma", "2", "--s-size", "10", "--d", "1", "--h", "0.1", "--r", "0.5,1", "--trials",
        "1000",
    ]));
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "gamma,s_size,d,h,r,trials,empirical_rate,bound,holds");
    assert_eq!(rows.len(), 3);
    assert!(rows[1..].iter().all(|r| r.ends_with(",true")));
}

#[test]
fn labels_survive_normalization() {
    let dir = TempDir::new().unwrap();
    let path = gen_file(&dir, "two-gaussians", 0);
    let ds = load_csv(&path).unwrap();
    let labels = ds.labels().unwrap();
    assert_eq!(labels.iter().filter(|l| **l == Label::Outlier).count(), 3);
    let n = rdos_core::minmax_normalize(&ds);
    assert_eq!(n.labels(), ds.labels());
}
