use std::path::Path;
use std::process::{Command, Output};

use heatchain::output::{read_triplets, Table};

const BENCHMARK: [&str; 10] = [
    "--omega",
    "1",
    "--g",
    "1",
    "--rate-left",
    "1",
    "--t-left",
    "1",
    "--rate-right",
    "1",
];

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heatchain"))
        .current_dir(dir)
        .env("RUST_LOG", "warn")
        .args(args)
        .output()
        .unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn missing_physics_parameters_are_errors() {
    let dir = tempfile::tempdir().unwrap();
    // right bath temperature never given
    let mut args = vec!["solve", "--n-sites", "3", "--dephasing", "0"];
    args.extend(BENCHMARK);
    let out = run(dir.path(), &args);
    assert!(!out.status.success());
    assert!(
        stderr(&out).contains("temperature or an occupation"),
        "{}",
        stderr(&out)
    );

    let out = run(
        dir.path(),
        &[
            "solve",
            "--n-sites",
            "3",
            "--omega",
            "1",
            "--g",
            "1",
            "--dephasing",
            "0",
        ],
    );
    assert!(!out.status.success());
    assert!(stderr(&out).contains("--rate-left"), "{}", stderr(&out));

    let mut args = vec!["size-sweep", "--quantum-sizes", "2,3", "--t-right", "0"];
    args.extend(&BENCHMARK[2..]);
    let out = run(dir.path(), &args);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("--omega"), "{}", stderr(&out));
}

#[test]
fn solve_prints_currents_and_dumps_matrices() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec![
        "solve",
        "--n-sites",
        "2",
        "--dephasing",
        "0",
        "--t-right",
        "0",
        "--dump-state",
        "rho.txt",
        "--dump-liouvillian",
        "l.txt",
    ];
    args.extend(BENCHMARK);
    let out = run(dir.path(), &args);
    assert!(out.status.success(), "{}", stderr(&out));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("current_left       0.119364770133"), "{stdout}");
    let (rows, _, entries) = read_triplets(std::fs::read(dir.path().join("l.txt")).unwrap().as_slice()).unwrap();
    assert_eq!(rows, 16);
    assert!(!entries.is_empty());
    let (d, _, rho) = read_triplets(std::fs::read(dir.path().join("rho.txt")).unwrap().as_slice()).unwrap();
    assert_eq!(d, 4);
    let trace: f64 = rho.iter().filter(|(i, j, _)| i == j).map(|(_, _, z)| z.re).sum();
    assert!((trace - 1.0).abs() < 1e-12);
}

#[test]
fn config_file_and_flags_combine() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.toml"),
        "[chain]\nomega = 1.0\ng = 1.0\nrate_left = 1.0\nt_left = 1.0\nrate_right = 1.0\nt_right = 0.0\n\n\
         [size-sweep]\nquantum_sizes = [2, 3]\ndephasing = [0.0]\n",
    )
    .unwrap();
    // the flag overrides the file's dephasing list
    let out = run(
        dir.path(),
        &[
            "--config",
            "run.toml",
            "size-sweep",
            "--dephasing",
            "2",
            "--output-dir",
            "out",
        ],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let table = Table::read(std::fs::read(dir.path().join("out/size_sweep.csv")).unwrap().as_slice()).unwrap();
    let col = table.column_index("dephasing").unwrap();
    assert_eq!(table.rows.len(), 2);
    assert!(table.rows.iter().all(|r| r[col] == "2.0"));

    let out = run(dir.path(), &["fit", "out/size_sweep.csv"]);
    assert!(!out.status.success(), "two points cannot be fitted");
    assert!(stderr(&out).contains("at least 3"), "{}", stderr(&out));
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.toml"), "[chain]\nomgea = 1.0\n").unwrap();
    let out = run(dir.path(), &["--config", "bad.toml", "solve"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("omgea"), "{}", stderr(&out));
}
