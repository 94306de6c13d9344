use std::path::Path;
use std::process::{Command, Output};

fn hyperphase(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperphase"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn sample_is_deterministic_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["sample", "--n", "30", "--m", "3", "--alpha", "2", "--seed", "7"];
    let a = hyperphase(&[&args[..], &["--out", "a"]].concat(), dir.path());
    let b = hyperphase(&[&args[..], &["--out", "b"]].concat(), dir.path());
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(stdout(&a), stdout(&b));
    for f in ["hypergraph.txt", "weights.txt", "metadata.toml"] {
        let x = std::fs::read(dir.path().join("a").join(f)).unwrap();
        let y = std::fs::read(dir.path().join("b").join(f)).unwrap();
        assert_eq!(x, y, "{f}");
    }
    let printed: u64 = stdout(&a).trim().parse().unwrap();
    let s = hyperphase(
        &["stats", "a/hypergraph.txt", "--config", "a/resolved_config.toml"],
        dir.path(),
    );
    assert_eq!(s.status.code(), Some(0));
    let out = stdout(&s);
    let mut lines = out.lines();
    assert_eq!(
        lines.next().unwrap(),
        "alpha,n,m,tau,rep,seed,edge_count,loose2_count,wall_ms"
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[6].parse::<u64>().unwrap(), printed);
    assert_eq!(row[5], "7");
    assert!(stderr(&a).contains("resolved config"));
}

#[test]
fn naive_guard_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let o = hyperphase(&["sample", "--method", "naive", "--n", "2000", "--m", "3"], dir.path());
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn tau_regime_is_noted() {
    let dir = tempfile::tempdir().unwrap();
    let o = hyperphase(
        &[
            "sample", "--n", "50", "--alpha", "0.5", "--tau", "2", "--m", "3", "--out", "t",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let meta = std::fs::read_to_string(dir.path().join("t/metadata.toml")).unwrap();
    assert!(meta.contains("inside"));
    let o = hyperphase(
        &[
            "sample", "--n", "50", "--alpha", "0.5", "--tau", "2.5", "--m", "3", "--out", "u",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("outside"));
}

#[test]
fn stats_reports_counts_and_rejects_malformed_files() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| std::fs::write(dir.path().join(name), text).unwrap();
    write("ok.txt", "3 5 2\n1 2 3\n1 2 4\n");
    write("empty.txt", "3 5 0\n");
    write("dup.txt", "3 5 2\n1 2 3\n1 2 3\n");
    write("unsorted.txt", "3 5 1\n2 1 3\n");
    write("range.txt", "3 5 1\n1 2 9\n");
    let row = |f: &str| {
        let o = hyperphase(&["stats", f], dir.path());
        assert_eq!(o.status.code(), Some(0));
        let s = stdout(&o);
        let fields: Vec<String> = s.lines().nth(1).unwrap().split(',').map(String::from).collect();
        (fields[6].clone(), fields[7].clone())
    };
    assert_eq!(row("ok.txt"), ("2".into(), "1".into()));
    assert_eq!(row("empty.txt"), ("0".into(), "0".into()));
    let mut messages = Vec::new();
    for (f, needle) in [
        ("dup.txt", "duplicate edge"),
        ("unsorted.txt", "unsorted tuple"),
        ("range.txt", "out-of-range index"),
    ] {
        let o = hyperphase(&["stats", f], dir.path());
        assert_eq!(o.status.code(), Some(2));
        let e = stderr(&o);
        assert!(e.contains(needle), "{e}");
        messages.push(e);
    }
    messages.dedup();
    assert_eq!(messages.len(), 3);
}

#[test]
fn theory_prints_prediction_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = hyperphase(&["theory", "--alpha", "4", "--m", "3"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(
        lines[0],
        "statistic,alpha,m,tau,n_exponent,log_exponent,constant_or_NA,upper_bound_flag,concentration"
    );
    assert!(lines[1].starts_with("edges,"));
    assert!(lines[2].starts_with("loose2,") && lines[2].ends_with(",true,true"));
    let o = hyperphase(
        &["theory", "--alpha", "1", "--m", "3", "--statistic", "edges"],
        dir.path(),
    );
    assert!(stdout(&o).lines().nth(1).unwrap().contains(",NA,false,"));
    let o = hyperphase(&["theory", "--alpha", "0.5", "--m", "2", "--tau", "3"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn compare_writes_report_and_mirrors_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let o = hyperphase(
        &["--workers", "2", "compare", "--alpha", "3", "--reps", "3", "--out", "c"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    for f in [
        "records.csv",
        "report.csv",
        "slopes.csv",
        "summary.csv",
        "resolved_config.toml",
    ] {
        assert!(dir.path().join("c").join(f).exists(), "{f}");
    }
    let report = std::fs::read_to_string(dir.path().join("c/report.csv")).unwrap();
    assert!(report.lines().nth(1).unwrap().ends_with(",pass"));
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("short.toml"), "[experiment]\nns = [64, 128, 256]\n").unwrap();
    let o = hyperphase(&["compare", "--config", "short.toml"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("need >= 4 grid points"));
    std::fs::write(
        dir.path().join("stat.toml"),
        "[experiment]\nstatistics = [\"triangles\"]\n",
    )
    .unwrap();
    let o = hyperphase(&["experiment", "--config", "stat.toml"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = hyperphase(&["sample", "--bogus"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn experiment_output_is_reproducible_across_workers() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["experiment", "--alpha", "1.5", "--reps", "3", "--seed", "5"];
    let a = hyperphase(&[&["--workers", "1"], &base[..], &["--out", "a"]].concat(), dir.path());
    let b = hyperphase(&[&["--workers", "4"], &base[..], &["--out", "b"]].concat(), dir.path());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    let x = std::fs::read(dir.path().join("a/records.csv")).unwrap();
    let y = std::fs::read(dir.path().join("b/records.csv")).unwrap();
    assert_eq!(x, y);
}

#[test]
fn example_config_is_valid() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/example.toml");
    let cfg = hyperphase::config::RunConfig::load(&path).unwrap();
    cfg.model().unwrap();
    cfg.experiment().unwrap();
    cfg.er().unwrap();
}
