//! End-to-end runs of the `dimerspin` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn dimerspin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dimerspin"))
        .args(args)
        .env_remove("DIMERSPIN_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = dimerspin(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

const HEADER: &str =
    "n,boundary,model,delta,theta,j,kbt,b,pair_index,site_a,site_b,pair_kind,concurrence";

#[test]
fn single_point_is_header_plus_one_row() {
    let text = stdout(&[
        "point",
        "--n",
        "2",
        "--boundary",
        "open",
        "--b",
        "0",
        "--kbt",
        "0.1",
        "--pair",
        "1",
    ]);
    let lines: Vec<&str> = text.split('\n').collect();
    assert_eq!(
        lines,
        [HEADER, "2,open,XXX,0.2,0,1,0.1,0,1,1,2,strong,1", ""]
    );
}

#[test]
fn golden_sweep_is_byte_identical() {
    let golden =
        fs::read(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/n8_delta0.2_b50.csv"))
            .unwrap();
    let args = [
        "sweep",
        "--n",
        "8",
        "--delta",
        "0.2",
        "--kbt",
        "0.1",
        "--b-min",
        "0",
        "--b-max",
        "4",
        "--b-steps",
        "50",
        "--pair",
        "1",
        "--pair",
        "2",
    ];
    for threads in ["1", "3"] {
        let mut a = args.to_vec();
        a.extend(["--threads", threads]);
        assert!(
            stdout(&a).as_bytes() == golden.as_slice(),
            "threads={threads}"
        );
    }
}

#[test]
fn output_is_independent_of_thread_count() {
    let base = [
        "sweep",
        "--n",
        "8",
        "--b-max",
        "4",
        "--b-steps",
        "9",
        "--delta-steps",
        "4",
        "--pair",
        "1",
        "--pair",
        "2",
    ];
    let runs: Vec<String> = ["1", "4", "8"]
        .iter()
        .map(|t| {
            let mut a = base.to_vec();
            a.extend(["--threads", t]);
            stdout(&a)
        })
        .collect();
    assert_eq!(runs[0].lines().count(), 1 + 9 * 4 * 2);
    assert!(runs.iter().all(|r| r == &runs[0]));

    let via_env = Command::new(env!("CARGO_BIN_EXE_dimerspin"))
        .args(base)
        .env("DIMERSPIN_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(via_env.stdout).unwrap(), runs[0]);
    let bad_env = Command::new(env!("CARGO_BIN_EXE_dimerspin"))
        .args(base)
        .env("DIMERSPIN_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(bad_env.status.code(), Some(2));
}

#[test]
fn rows_follow_axis_order() {
    let text = stdout(&[
        "sweep",
        "--n",
        "4",
        "--kbt-min",
        "0.1",
        "--kbt-max",
        "0.2",
        "--kbt-steps",
        "2",
        "--b-steps",
        "3",
        "--b-max",
        "2",
    ]);
    let cols: Vec<(String, String)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[6].to_owned(), f[7].to_owned())
        })
        .collect();
    let expected: Vec<(String, String)> = [
        ("0.1", "0"),
        ("0.1", "1"),
        ("0.1", "2"),
        ("0.2", "0"),
        ("0.2", "1"),
        ("0.2", "2"),
    ]
    .iter()
    .map(|(a, b)| (a.to_string(), b.to_string()))
    .collect();
    assert_eq!(cols, expected);
}

#[test]
fn tsv_uses_tabs() {
    let text = stdout(&["point", "--n", "4", "--format", "tsv"]);
    assert_eq!(text.lines().next().unwrap(), HEADER.replace(',', "\t"));
    assert_eq!(text.lines().nth(1).unwrap().split('\t').count(), 13);
}

#[test]
fn plot_scripts() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("curve.csv");
    stdout(&[
        "sweep",
        "--n",
        "6",
        "--b-steps",
        "11",
        "--pair",
        "1",
        "--pair",
        "2",
        "--emit-plot",
        "--out",
        csv.to_str().unwrap(),
    ]);
    let script = fs::read_to_string(dir.path().join("curve.gp")).unwrap();
    assert_eq!(script.matches("\nplot \"curve.csv\"").count(), 2);
    assert!(script.contains("set xlabel \"B\""));
    assert!(!script.contains("splot"));

    let surface = dir.path().join("surface.csv");
    stdout(&[
        "sweep",
        "--n",
        "6",
        "--b-steps",
        "5",
        "--kbt-steps",
        "4",
        "--emit-plot",
        "--out",
        surface.to_str().unwrap(),
    ]);
    let script = fs::read_to_string(dir.path().join("surface.gp")).unwrap();
    assert_eq!(
        script
            .matches("\nsplot \"surface.csv\" skip 1 using 8:7:")
            .count(),
        1
    );
    assert!(script.contains("set ylabel \"k_BT\""));

    let flat = dimerspin(&[
        "sweep",
        "--n",
        "6",
        "--emit-plot",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(flat.status.code(), Some(2));
}

#[test]
fn exit_codes() {
    assert_eq!(
        dimerspin(&[
            "sweep",
            "--b-steps",
            "2",
            "--kbt-steps",
            "2",
            "--theta-steps",
            "2"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(dimerspin(&["point", "--unknown"]).status.code(), Some(2));
    assert_eq!(dimerspin(&["point", "--n", "15"]).status.code(), Some(2));
    assert_eq!(
        dimerspin(&["point", "--n", "4", "--out", "/proc/forbidden/x.csv"])
            .status
            .code(),
        Some(4)
    );
    assert_eq!(dimerspin(&["--help"]).status.code(), Some(0));
}

#[test]
fn plateau_report_matches_ground_state_jumps() {
    let text = stdout(&[
        "plateaus",
        "--n",
        "8",
        "--kbt",
        "0.02",
        "--b-max",
        "5",
        "--b-steps",
        "200",
        "--pair",
        "1",
    ]);
    let spacing = 5.0 / 199.0;
    let steps: Vec<Vec<&str>> = text
        .lines()
        .map(|l| l.split(',').collect::<Vec<_>>())
        .filter(|f| f[2] == "step")
        .collect();
    assert_eq!(steps.len(), 4);
    for s in steps {
        let loc: f64 = s[3].parse().unwrap();
        let jump: f64 = s[7].parse().unwrap();
        assert!((loc - jump).abs() <= spacing, "{s:?}");
    }
    assert!(text.contains(",critical_field,"));
}

#[test]
fn spectrum_lists_every_level() {
    let text = stdout(&["spectrum", "--n", "4", "--b", "0.5"]);
    assert_eq!(text.lines().count(), 17);
    let energies: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(energies.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn figures_write_one_directory_each() {
    let dir = tempfile::tempdir().unwrap();
    let out = dimerspin(&[
        "figures",
        "fig3a",
        "fig6b",
        "fig8",
        "--n",
        "6",
        "--b-steps",
        "21",
        "--kbt-steps",
        "3",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    for (fig, rows, pair) in [
        ("fig3a", 21, "1"),
        ("fig6b", 21 * 3, "1"),
        ("fig8", 21, "5"),
    ] {
        let data = fs::read_to_string(dir.path().join(fig).join(format!("{fig}.csv"))).unwrap();
        assert_eq!(data.lines().count(), rows + 1, "{fig}");
        for line in data.lines().skip(1) {
            let f: Vec<&str> = line.split(',').collect();
            assert_eq!(f[8], pair);
            let c: f64 = f[12].parse().unwrap();
            assert!((0.0..=1.0).contains(&c));
        }
        assert!(dir.path().join(fig).join(format!("{fig}.gp")).exists());
    }
    let f6b = fs::read_to_string(dir.path().join("fig6b/fig6b.csv")).unwrap();
    assert!(f6b
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("6,closed,XX,0.2,0.785398163397,"));
}
