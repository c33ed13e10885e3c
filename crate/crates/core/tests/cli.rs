use std::path::Path;
use std::process::{Command, Output};

fn radiocast(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_radiocast"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn simulate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let o = radiocast(&[
            "simulate",
            "--graph",
            "path:16",
            "--protocol",
            "gb",
            "--n",
            "16",
            "--trials",
            "10",
            "--seed",
            "1",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    let records = radiocast::harness::read_csv(&a).unwrap();
    assert_eq!(records.len(), 10);
    assert!(records.iter().all(|r| r.max_energy <= 19));
}

#[test]
fn worker_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for workers in ["1", "3"] {
        let path = dir.path().join(format!("w{workers}.csv"));
        let o = Command::new(env!("CARGO_BIN_EXE_radiocast"))
            .env("RADIOCAST_WORKERS", workers)
            .args([
                "simulate",
                "--graph",
                "gnp:40,0.2",
                "--graph-seed",
                "3",
                "--protocol",
                "ggb",
                "--phi",
                "2",
                "--eps",
                "0.1",
                "--trials",
                "25",
                "--seed",
                "8",
                "--out",
                path.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert!(o.status.success());
        outputs.push(std::fs::read(path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn printed_parameters_match_golden() {
    let o = radiocast(&[
        "simulate",
        "--graph",
        "path:64",
        "--n",
        "1024",
        "--protocol",
        "ggb",
        "--phi",
        "2",
        "--eps",
        "0.1",
        "--trials",
        "0",
    ]);
    assert!(o.status.success());
    let stderr = String::from_utf8_lossy(&o.stderr);
    assert!(stderr.contains("warning: --n 1024 differs from the graph's 64 nodes"));
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/simulate_ggb.txt");
    assert_eq!(stdout(&o), std::fs::read_to_string(golden).unwrap());

    let o = radiocast(&[
        "simulate",
        "--graph",
        "path:16",
        "--protocol",
        "gb",
        "--trials",
        "0",
    ]);
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/simulate_gb.txt");
    assert_eq!(stdout(&o), std::fs::read_to_string(golden).unwrap());
}

#[test]
fn invalid_flags_exit_2() {
    let o = radiocast(&[
        "simulate",
        "--graph",
        "path:16",
        "--protocol",
        "ggb",
        "--phi",
        "0",
        "--eps",
        "0.1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--phi"));
    assert_eq!(
        radiocast(&["simulate", "--graph", "torus:3", "--protocol", "gb"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        radiocast(&["simulate", "--graph", "path:8", "--protocol", "flood"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(radiocast(&["simulate", "--bogus"]).status.code(), Some(2));
}

#[test]
fn disconnected_file_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.el");
    std::fs::write(&path, "4 2\n0 1\n2 3\n").unwrap();
    let spec = format!("file:{}", path.display());
    let o = radiocast(&["simulate", "--graph", &spec, "--protocol", "gb"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn existing_output_needs_force() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    std::fs::write(&path, "keep me").unwrap();
    let args = [
        "sweep",
        "--graph",
        "path:16",
        "--protocol",
        "ggb",
        "--eps",
        "0.1",
        "--phi-list",
        "1,2",
        "--trials",
        "3",
        "--out",
        path.to_str().unwrap(),
    ];
    assert_eq!(radiocast(&args).status.code(), Some(4));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "keep me");
    let mut forced = args.to_vec();
    forced.push("--force");
    assert!(radiocast(&forced).status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.starts_with(&radiocast::harness::AGGREGATE_COLUMNS.join(",")));
}

#[test]
fn sweep_writes_json_aggregates() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("agg.json");
    let o = radiocast(&[
        "sweep",
        "--graph",
        "path:16",
        "--protocol",
        "ggb",
        "--eps",
        "0.1",
        "--phi-list",
        "1,2",
        "--trials",
        "3",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let value: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    let rows = value.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["max_energy"], 3);
    assert_eq!(rows[1]["max_energy"], 5);
}

#[test]
fn oracle_targets() {
    let o = radiocast(&["oracle", "alpha", "--T", "4", "--E", "2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("= 11 ≤ 29.5562 PASS"));

    let o = radiocast(&["oracle", "lemma1", "--n", "256", "--phi", "4"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("k=97 m=1..67 bound=0.125000"));
    assert!(stdout(&o).trim_end().ends_with("PASS"));

    let o = radiocast(&["oracle", "thm4", "--n", "1", "--k", "14"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("exact=1.000000 mc=1.000000"));

    let o = radiocast(&["oracle", "fact1", "--dist", "geometric:2"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS"));

    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("o.csv");
    let o = radiocast(&[
        "oracle",
        "alpha",
        "--T",
        "3",
        "--E",
        "1",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(csv).unwrap();
    assert!(text.starts_with("operation,params,value,bound,pass\nalpha,T=3;E=1,4,"));
}

#[test]
fn graph_generation() {
    let o = radiocast(&["graph", "--family", "pair-chain:8"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("n=25 m=32 D=16"));

    let first = stdout(&radiocast(&[
        "graph",
        "--family",
        "star-perm:7",
        "--seed",
        "1",
    ]));
    let second = stdout(&radiocast(&[
        "graph",
        "--family",
        "star-perm:7",
        "--seed",
        "1",
    ]));
    assert_eq!(first, second);
    assert!(first.starts_with("7 9\n"));

    assert_eq!(
        radiocast(&["graph", "--family", "star-perm:6"])
            .status
            .code(),
        Some(2)
    );
}
