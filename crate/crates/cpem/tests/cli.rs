//! End-to-end checks of the command-line interface and its exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn cpem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cpem"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn tempdir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cpem-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn gen_solve_check_pipeline() {
    let dir = tempdir();
    let inst_path = dir.join("pipeline.cpem");
    let inst_str = inst_path.to_str().unwrap();

    let gen = cpem(&[
        "gen", "--na", "6", "--nb", "6", "-m", "10", "-k", "6", "--c", "1", "--seed", "11", "-o",
        inst_str,
    ]);
    assert!(gen.status.success(), "gen failed: {gen:?}");

    let solve = cpem(&["solve", inst_str]);
    assert!(solve.status.success());
    let solution = String::from_utf8(solve.stdout).unwrap();
    assert!(solution.starts_with("w "));

    let sol_path = dir.join("pipeline.sol");
    std::fs::write(&sol_path, &solution).unwrap();
    let check = cpem(&["check", inst_str, sol_path.to_str().unwrap()]);
    assert!(check.status.success(), "check failed: {check:?}");
    assert!(String::from_utf8(check.stdout).unwrap().starts_with("ok:"));

    // a tampered weight is rejected with exit code 1
    std::fs::write(&sol_path, solution.replace("w ", "w 9")).unwrap();
    let check = cpem(&["check", inst_str, sol_path.to_str().unwrap()]);
    assert_eq!(check.status.code(), Some(1));
}

#[test]
fn oracle_agrees_with_solver() {
    let dir = tempdir();
    let inst_path = dir.join("oracle.cpem");
    let inst_str = inst_path.to_str().unwrap();
    let gen = cpem(&[
        "gen", "--na", "5", "--nb", "5", "-m", "9", "-k", "5", "--c", "2", "--seed", "3", "-o",
        inst_str,
    ]);
    assert!(gen.status.success());

    let solve = cpem(&["solve", inst_str]);
    let brute = cpem(&["oracle", inst_str, "--method", "brute"]);
    let fpt = cpem(&["oracle", inst_str, "--method", "fpt2k"]);
    assert!(solve.status.success() && brute.status.success() && fpt.status.success());
    let weight_line = |out: &Output| {
        String::from_utf8_lossy(&out.stdout)
            .lines()
            .next()
            .unwrap()
            .to_string()
    };
    assert_eq!(weight_line(&solve), weight_line(&brute));
    assert_eq!(weight_line(&solve), weight_line(&fpt));
}

#[test]
fn render_and_svg_flag() {
    let dir = tempdir();
    let inst_path = dir.join("render.cpem");
    let inst_str = inst_path.to_str().unwrap();
    std::fs::write(
        &inst_path,
        "p cpem 2 2 2 1 1\ne 1 2 1.000000\ne 2 1 1.000000\nx 1 2\n",
    )
    .unwrap();

    let render = cpem(&["render", inst_str]);
    assert!(render.status.success());
    assert!(String::from_utf8(render.stdout)
        .unwrap()
        .starts_with("<svg"));

    let svg_path = dir.join("render.svg");
    let solve = cpem(&["solve", inst_str, "--svg", svg_path.to_str().unwrap()]);
    assert!(solve.status.success());
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.contains("stroke-width=\"3\""));
}

#[test]
fn exit_codes_distinguish_failures() {
    let dir = tempdir();
    let bad = dir.join("bad.cpem");
    std::fs::write(&bad, "p cpem 1 1 1 0 0\ne 1 1 0.000000\n").unwrap();
    let out = cpem(&["solve", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("weight"));

    let out = cpem(&["solve", dir.join("nope.cpem").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // budget override outside the supported range
    let good = dir.join("good.cpem");
    std::fs::write(&good, "p cpem 1 1 1 0 0\ne 1 1 1.000000\n").unwrap();
    let out = cpem(&["solve", good.to_str().unwrap(), "--c", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let out = cpem(&["solve", good.to_str().unwrap(), "--c", "2"]);
    assert!(out.status.success());
}

#[test]
fn gen_warns_when_clamping_pairs() {
    // a 1xN grid cannot cross at all
    let out = cpem(&[
        "gen", "--na", "1", "--nb", "4", "-m", "4", "-k", "5", "--seed", "0",
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("p cpem 1 4 4 0"));
}
