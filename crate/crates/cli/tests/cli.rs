use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn grrap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grrap"))
        .args(args)
        .env("GRRAP_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn drop_timing(csv: &str) -> Vec<String> {
    // wall_time and t_avg are the last two columns.
    csv.lines()
        .map(|l| {
            let cols: Vec<&str> = l.split(',').collect();
            cols[..cols.len() - 2].join(",")
        })
        .collect()
}

#[test]
fn eval_reports_the_worked_example() {
    let o = grrap(&[
        "eval",
        "--network",
        &data("bridge.net"),
        "--instance",
        &data("bench3.inst"),
        "--solution",
        "4,2,2,2,2,3,0.8168,0.8534,0.8554,0.8740,0.8288,0.8781",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("cost     209.8747"), "{out}");
    assert!(out.contains("volume   152.0000"));
    assert!(out.contains("weight   119.3945"));
    assert!(out.contains("feasible yes"));
}

#[test]
fn eval_prints_ten_decimals_for_the_published_solution() {
    let o = grrap(&[
        "eval",
        "--bench",
        "3",
        "--solution",
        "4 2 2 2 2 3 0.822230 0.791277 0.899235 0.909321 0.752224 0.883995",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    let rs: f64 = out
        .lines()
        .find_map(|l| l.strip_prefix("Rs"))
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!((rs - 0.9964225431).abs() < 1e-6);
}

#[test]
fn wrong_arity_is_a_usage_error() {
    for sol in ["1,2,3", "1 2 0.5 0.5"] {
        let o = grrap(&["eval", "--bench", "3", "--solution", sol]);
        assert_eq!(o.status.code(), Some(2), "{sol}");
    }
    let o = grrap(&["solve", "--bench", "3", "--algo", "sa"]);
    assert_eq!(o.status.code(), Some(2));
    let o = grrap(&["solve", "--bench", "3", "--runs", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_files_are_runtime_errors() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("bad.net");
    fs::write(&net, "nodes 6\nsource 1\nsink 6\nedge 1 9\n").unwrap();
    let o = grrap(&[
        "eval",
        "--network",
        net.to_str().unwrap(),
        "--instance",
        &data("bench3.inst"),
        "--solution",
        "1 1 1 1 1 1 0.9 0.9 0.9 0.9 0.9 0.9",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 4"), "{err}");
}

#[test]
fn solve_is_reproducible_apart_from_timing() {
    let dir = tempfile::tempdir().unwrap();
    let mut outs = Vec::new();
    for name in ["a.csv", "b.csv"] {
        let path = dir.path().join(name);
        let o = grrap(&[
            "solve",
            "--bench",
            "3",
            "--algo",
            "bsso,ga",
            "--nsol",
            "15",
            "--ngen",
            "20",
            "--runs",
            "3",
            "--seed",
            "5",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        outs.push(fs::read_to_string(path).unwrap());
    }
    assert_eq!(drop_timing(&outs[0]), drop_timing(&outs[1]));
    let lines: Vec<&str> = outs[0].lines().collect();
    // header, 3 runs + summary per algorithm
    assert_eq!(lines.len(), 1 + 2 * 4);
    assert!(lines[4].starts_with("summary,bsso"));
    assert!(lines[1].contains(",0,5,"));
    assert!(lines[3].contains(",2,7,"));
}

#[test]
fn single_run_has_zero_deviation() {
    let o = grrap(&[
        "solve", "--bench", "1", "--nsol", "10", "--ngen", "5", "--runs", "1",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    let summary = out.lines().find(|l| l.starts_with("summary")).unwrap();
    let cols: Vec<&str> = summary.split(',').collect();
    assert_eq!(cols[15], "0.0000000000");
}

#[test]
fn config_file_is_read_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.cfg");
    fs::write(
        &cfg,
        format!(
            "network = {}\ninstance = {}\nalgorithm = pso\nruns = 4\nnsol = 10\nngen = 5\nseed = 100\n",
            data("bench3.net"),
            data("bench3.inst")
        ),
    )
    .unwrap();
    let o = grrap(&["solve", "--config", cfg.to_str().unwrap(), "--runs", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("run,pso")).count(), 2);
}

#[test]
fn factor_screen_writes_eight_rows() {
    let o = grrap(&[
        "factor-screen",
        "--bench",
        "3",
        "--nsol",
        "10",
        "--ngen",
        "6",
        "--runs",
        "1",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 8);
    let masks: Vec<&str> = rows.iter().map(|r| r.split(',').nth(3).unwrap()).collect();
    assert_eq!(
        masks,
        ["0000", "0011", "0101", "0110", "1001", "1010", "1100", "1111"]
    );
}

#[test]
fn custom_factors_run_the_swarm() {
    let o = grrap(&[
        "solve",
        "--bench",
        "3",
        "--algo",
        "bsso",
        "--factors",
        "AC",
        "--nsol",
        "10",
        "--ngen",
        "5",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().nth(1).unwrap().contains(",1010,"));
    let o = grrap(&["solve", "--bench", "3", "--algo", "ga", "--factors", "AC"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn comb_counts_and_dumps() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("comb.csv");
    let o = grrap(&["comb", "--bench", "3", "--out", dump.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("feasible count vectors: 1718"));
    assert_eq!(fs::read_to_string(dump).unwrap().lines().count(), 1 + 1718);
}

#[test]
fn comb_with_impossible_limits_warns_and_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("tight.inst");
    let text = fs::read_to_string(data("bench3.inst"))
        .unwrap()
        .replace("limits C 210 V 220 W 120", "limits C 210 V 5 W 120");
    fs::write(&inst, text).unwrap();
    let o = grrap(&[
        "comb",
        "--network",
        &data("bench3.net"),
        "--instance",
        inst.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("feasible count vectors: 0"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn reliability_cross_check() {
    let o = grrap(&[
        "reliability",
        "--network",
        &data("bridge.net"),
        "--rels",
        "0.9,0.8,0.8,0.7,0.7,0.9",
        "--samples",
        "200000",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    let value = |prefix: &str| -> f64 {
        out.lines()
            .find_map(|l| l.strip_prefix(prefix))
            .and_then(|rest| rest.split_whitespace().next())
            .unwrap()
            .parse()
            .unwrap()
    };
    let exact = value("exact");
    assert!((exact - value("brute force")).abs() < 1e-12, "{out}");
    assert!((exact - value("monte carlo")).abs() < 0.01, "{out}");
    let o = grrap(&[
        "reliability",
        "--network",
        &data("bridge.net"),
        "--rels",
        "0.9,0.8",
    ]);
    assert_eq!(o.status.code(), Some(2));
}
