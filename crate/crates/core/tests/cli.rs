use std::path::Path;
use std::process::{Command, Output};

fn arealpp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arealpp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn theory_table() {
    let o = arealpp(&["theory", "--tmax", "3", "--step", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,n_of_t,k_csr,error,abs_error_over_sqrt_t");
    assert_eq!(lines.len(), 4);
    assert!(lines[3].starts_with("3,29,28.2743,0.725666,"), "{}", lines[3]);
}

#[test]
fn theory_rejects_bad_step() {
    assert_eq!(
        arealpp(&["theory", "--tmax", "3", "--step", "0"]).status.code(),
        Some(2)
    );
}

#[test]
fn ann_on_lattice() {
    let dir = tempfile::tempdir().unwrap();
    let mut csv = String::from("x,y\n");
    for i in 0..10 {
        for j in 0..10 {
            csv.push_str(&format!("{i},{j}\n"));
        }
    }
    let pts = write(dir.path(), "pts.csv", &csv);
    let o = arealpp(&["ann", "--points", &pts, "--region", "rect:0,0,10,10"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "100");
    assert_eq!(row[5], "2");
    assert_eq!(row[7], "19.1307");
    assert_eq!(row[9], "true");
}

#[test]
fn invalid_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let pts = write(dir.path(), "pts.csv", "x,y\n1,1\n2,2\n");
    assert_eq!(
        arealpp(&["ann", "--points", &pts, "--region", "rect:0,0,1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        arealpp(&["ann", "--points", "/nonexistent.csv", "--region", "rect:0,0,3,3"])
            .status
            .code(),
        Some(2)
    );
    let line = write(dir.path(), "line.csv", "x,y\n1,1\n2,1\n");
    let o = arealpp(&[
        "ann",
        "--points",
        &line,
        "--region",
        "rect:0,0,3,3",
        "--window",
        "bbox",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("degenerate window"));
    assert_eq!(
        arealpp(&["gen", "--structure", "grid:5,5,1", "--dgm", "d2", "--n", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(arealpp(&["bogus"]).status.code(), Some(2));
}

#[test]
fn gen_and_kest_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let o = arealpp(&[
        "gen",
        "--structure",
        "grid:20,20,1",
        "--dgm",
        "d3",
        "--n",
        "tenth",
        "--seed",
        "9",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let draw = stdout(&o);
    assert_eq!(draw.lines().count(), 41);
    assert_eq!(draw.lines().next(), Some("id,x,y"));
    // same seed, same draw
    let again = arealpp(&[
        "gen",
        "--structure",
        "grid:20,20,1",
        "--dgm",
        "d3",
        "--n",
        "tenth",
        "--seed",
        "9",
    ]);
    assert_eq!(stdout(&again), draw);

    let pts = write(dir.path(), "draw.csv", &draw);
    let o = arealpp(&[
        "kest",
        "--points",
        &pts,
        "--region",
        "rect:0,0,20,20",
        "--radii",
        "auto:grid:20,20,1",
        "--nsim",
        "100",
        "--seed",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6);
    assert!(lines[1].starts_with("1,2,"));
    assert!(lines[5].starts_with("5,5,"));

    let o = arealpp(&[
        "kest",
        "--points",
        &pts,
        "--region",
        "rect:0,0,20,20",
        "--radii",
        "2,1",
        "--nsim",
        "100",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gen_d2_with_cluster() {
    let dir = tempfile::tempdir().unwrap();
    let ids = write(dir.path(), "ids.txt", "r0c0\nr0c1\nr1c0\nr1c1\n");
    let o = arealpp(&[
        "gen",
        "--structure",
        "grid:10,10,1",
        "--dgm",
        "d2",
        "--n",
        "4",
        "--cluster-file",
        &ids,
        "--ratio",
        "1e9",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let mut got: Vec<String> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().to_string())
        .collect();
    got.sort();
    assert_eq!(got, ["r0c0", "r0c1", "r1c0", "r1c1"]);
}

#[test]
fn simulate_writes_tables() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "m.toml",
        r#"
replicates = 20
[structures.g]
grid = { rows = 10, cols = 10 }
[[scenario]]
structure = "g"
dgm = "d1"
size = "quarter"
method = "ann"
[[scenario]]
structure = "g"
dgm = "d3"
size = "quarter"
method = "ripley"
n_sim = 100
"#,
    );
    let out = dir.path().join("out");
    let o = arealpp(&[
        "simulate",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
        "--threads",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("rates.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 1 + 5);
    assert!(std::fs::read_to_string(out.join("tables.txt"))
        .unwrap()
        .contains("Table 2"));
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("metadata.json")).unwrap()).unwrap();
    assert_eq!(meta.as_array().unwrap().len(), 2);

    // stdout mode with a seed override
    let a = arealpp(&["simulate", "--config", &cfg, "--seed", "5", "--threads", "1"]);
    let b = arealpp(&["simulate", "--config", &cfg, "--seed", "5", "--threads", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));

    let bad = write(
        dir.path(),
        "bad.toml",
        "[[scenario]]\nstructure = \"nope\"\ndgm = \"d1\"\nsize = \"tenth\"\nmethod = \"ann\"\n",
    );
    assert_eq!(arealpp(&["simulate", "--config", &bad]).status.code(), Some(2));
}
