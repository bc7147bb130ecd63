use std::fs;
use std::process::{Command, Output};

use weakmean::filter::{read_pgm, write_pgm, GrayImage, PgmFormat};
use weakmean::verify::{PropertyReport, Verdict};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weakmean"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn aggregate_examples() {
    let o = run(&["aggregate", "lehmer", "--q", "1", "--", "1", "0.5"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "0.833333333333\n");
    assert_eq!(stdout(&run(&["aggregate", "mode", "--", "1", "1", "2", "2", "3", "3", "3"])), "3\n");
    assert_eq!(stdout(&run(&["aggregate", "shorth", "--", "0", "1", "2", "10", "11"])), "1\n");
    assert_eq!(
        stdout(&run(&["aggregate", "owa-penalty", "--delta", "chebyshev", "--", "0", "1", "10"])),
        "5\n"
    );
    assert_eq!(
        stdout(&run(&["aggregate", "mixture", "--w", "t^2", "--", "1", "2"])),
        "1.8\n"
    );
}

#[test]
fn aggregate_from_file_and_machine_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("values.txt");
    fs::write(&path, "# comment\n1\n2\n\n3\n10\n").unwrap();
    let o = run(&["aggregate", "median", "--file", path.to_str().unwrap(), "--format", "machine"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"], 2.5);
    assert_eq!(v["mean"], "median");

    fs::write(&path, "1\nx\n").unwrap();
    let o = run(&["aggregate", "median", "--file", path.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains(":2:"));
}

#[test]
fn aggregate_errors_exit_two() {
    for args in [
        &["aggregate", "lehmer", "--q", "1", "--", "-1", "2"][..],
        &["aggregate", "nope", "--", "1"],
        &["aggregate", "lehmer", "--", "1"],
        &["aggregate", "median"],
        &["aggregate", "order-statistic", "--k", "4", "--", "1", "2"],
        &["aggregate", "median", "--bogus", "--", "1"],
    ] {
        let o = run(args);
        assert_eq!(code(&o), 2, "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn check_exit_codes() {
    let o = run(&["check", "weak-monotone", "lehmer", "--q", "1", "--n", "3"]);
    assert_eq!(code(&o), 1);
    let r = PropertyReport::from_line(stdout(&o).trim()).unwrap();
    assert_eq!(r.verdict, Verdict::Violated);
    assert!(r.witness.is_some());

    assert_eq!(code(&run(&["check", "shift-invariant", "shorth", "--n", "5"])), 0);
    assert_eq!(code(&run(&["check", "weak-monotone", "mean", "--n", "4"])), 0);
    assert_eq!(code(&run(&["check", "monotone", "mode", "--samples", "20000"])), 1);
    assert_eq!(code(&run(&["check", "sideways", "mean"])), 2);
    assert_eq!(code(&run(&["check", "monotone", "mean", "--samples", "0"])), 2);
    assert_eq!(code(&run(&["check", "monotone", "mean", "--domain", "1,0"])), 2);
}

#[test]
fn check_machine_output_round_trips() {
    let o = run(&[
        "check", "weakly-monotone", "internal-switch", "--samples", "20000", "--seed", "5", "--format", "machine",
    ]);
    assert_eq!(code(&o), 1);
    let r = PropertyReport::from_json(stdout(&o).trim()).unwrap();
    assert_eq!(r.seed, 5);
    assert_eq!(PropertyReport::from_json(&r.to_json()).unwrap(), r);
    let w = r.witness.unwrap();
    assert!(w.x[0] + w.x[1] < 1.0);
}

#[test]
fn mixture_condition_via_check() {
    assert_eq!(code(&run(&["check", "mixture-condition", "mixture", "--w", "1"])), 0);
    assert_eq!(code(&run(&["check", "mixture-condition", "mixture", "--w", "t"])), 1);
}

#[test]
fn table_rows() {
    let o = run(&["table", "--q-list", "0.5,1,3", "--n-max", "5", "--samples", "20000"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let row = |q: &str| {
        text.lines()
            .find(|l| l.split_whitespace().next() == Some(q))
            .unwrap()
            .to_string()
    };
    assert!(row("1").contains("2.0000"));
    assert!(row("3").contains("5.0000"));
    assert!(row("0.5").contains("excluded"));

    let o = run(&["table", "--q-list", "1", "--n-max", "3", "--samples", "5000", "--format", "machine"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rows"][0]["bound"], 2.0);
}

#[test]
fn filter_files() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.pgm");
    let output = dir.path().join("out.pgm");
    let flat = GrayImage::constant(9, 7, 100.0 / 255.0, 255).unwrap();
    fs::write(&input, write_pgm(&flat, PgmFormat::P5)).unwrap();
    let o = run(&[
        "filter", "--in", input.to_str().unwrap(), "--out", output.to_str().unwrap(), "--estimator", "median",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("estimator=median"));
    assert_eq!(fs::read(&output).unwrap(), fs::read(&input).unwrap());

    // Shift invariance through the binary, for two estimators.
    let img = GrayImage::from_fn(12, 10, 255, |c, r| ((c * 7 + r * 13) % 40 + 60) as f64 / 255.0).unwrap();
    let shifted = img.shifted(30.0 / 255.0).unwrap();
    for est in ["center", "median"] {
        let mut outs = Vec::new();
        for (i, src) in [&img, &shifted].into_iter().enumerate() {
            let inp = dir.path().join(format!("{est}{i}.pgm"));
            let out = dir.path().join(format!("{est}{i}.out.pgm"));
            fs::write(&inp, write_pgm(src, PgmFormat::P2)).unwrap();
            let o = run(&[
                "filter", "--in", inp.to_str().unwrap(), "--out", out.to_str().unwrap(), "--estimator", est,
                "--pgm", "p2",
            ]);
            assert_eq!(code(&o), 0);
            outs.push(read_pgm(&fs::read(&out).unwrap()).unwrap());
        }
        let (a, b) = (outs[0].samples(), outs[1].samples());
        assert!(a.iter().zip(&b).all(|(x, y)| *y as i32 - *x as i32 == 30), "{est}");
    }

    fs::write(&input, b"P5\n4 4\n255\n\x01\x02").unwrap();
    let o = run(&["filter", "--in", input.to_str().unwrap(), "--out", output.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("truncated"));

    let o = run(&["filter", "--in", "/nonexistent.pgm", "--out", output.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let o = run(&[
        "filter", "--in", input.to_str().unwrap(), "--out", output.to_str().unwrap(), "--estimator", "mean",
    ]);
    assert_eq!(code(&o), 2);
}
