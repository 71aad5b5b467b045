use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BASE: &str = r#"
schema_version = 1

[system]
solvent_mode = "no_interaction"
convention = "w"

[[system.species]]
name = "W"
nu = 0
molar_mass = 0.018

[[system.species]]
name = "A"
nu = -1
molar_mass = 0.044
henry_constant = 3.0e5

[[system.species]]
name = "B"
nu = 2
molar_mass = 0.03
henry_constant = 0.7e5

[model]
lambda = -2500.0
eps = 3000.0
beta = 4.0

[errors]
regime = "henry_no_interaction"

[grid]
t_min = 290.0
t_max = 330.0
t_points = 5
p_min = 0.5e5
p_max = 2.0e5
p_points = 4

[trace]
t_start = 300.0
p_start = 2.0e5
step = 0.01
max_steps = 30

[dynamic]
level = 20.0
t_min = 290.0
t_max = 330.0
points = 9

[feasible]
reference_amounts = [0.2, 1.0, 1.0]
t_start = 300.0
p_start = 1.0e5
t_end = 320.0
p_end = 1.5e5
points = 21
"#;

struct Scratch(PathBuf);

impl Scratch {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("equilib-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn config(&self, text: &str) -> PathBuf {
        let p = self.0.join("run.toml");
        std::fs::write(&p, text).unwrap();
        p
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn run(config: &Path, extra: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_equilib")).arg("--config").arg(config).args(extra).output().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn quotient_grid_has_one_header_and_every_point() {
    let s = Scratch::new("grid");
    let out = stdout(&run(&s.config(BASE), &["--command", "quotient"]));
    let lines: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(lines[0], "T_K,P_Pa,quotient,dg_dxi_J_per_mol,eps_err_J_per_mol");
    assert_eq!(lines.iter().filter(|l| l.starts_with("T_K")).count(), 1);
    assert_eq!(lines.len(), 1 + 20);
}

#[test]
fn seeded_runs_are_identical_and_written_to_file() {
    let s = Scratch::new("seed");
    let cfg = s.config(BASE);
    let a = s.0.join("a.csv");
    let b = s.0.join("b.csv");
    for out in [&a, &b] {
        let o = run(&cfg, &["--command", "trace-max", "--seed", "7", "--out", out.to_str().unwrap()]);
        assert!(o.status.success());
        assert!(o.stdout.is_empty());
    }
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert_eq!(a, b);
    assert!(String::from_utf8(a).unwrap().contains("# stop_reason="));
}

#[test]
fn feasible_path_keeps_the_solvent_fixed() {
    let s = Scratch::new("feasible");
    let out = stdout(&run(&s.config(BASE), &["--command", "feasible"]));
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(out.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    assert_eq!(&headers[3], "n_0");
    let solvent: Vec<String> = rdr.records().map(|r| r.unwrap()[3].to_string()).collect();
    assert_eq!(solvent.len(), 21);
    assert!(solvent.iter().all(|v| v == &solvent[0]));
    assert!(out.contains("# stop_reason=converged"));
}

#[test]
fn dynamic_curve_holds_its_level() {
    let s = Scratch::new("dyn");
    let out = stdout(&run(&s.config(BASE), &["--command", "trace-dyn"]));
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(out.as_bytes());
    let col = rdr.headers().unwrap().iter().position(|h| h == "quotient").unwrap();
    for r in rdr.records() {
        let q: f64 = r.unwrap()[col].parse().unwrap();
        assert!((q - 20.0).abs() <= 1e-9 * 20.0);
    }
}

#[test]
fn config_problems_exit_with_code_two() {
    let s = Scratch::new("bad");
    let unknown = BASE.replace("[model]", "[model]\nkappa = 1.0");
    assert_eq!(run(&s.config(&unknown), &["--command", "quotient"]).status.code(), Some(2));
    let version = BASE.replace("schema_version = 1", "schema_version = 9");
    assert_eq!(run(&s.config(&version), &["--command", "quotient"]).status.code(), Some(2));
    assert_eq!(run(&s.config(BASE), &[]).status.code(), Some(2));
    assert_eq!(run(&s.config(BASE), &["--command", "cell"]).status.code(), Some(2));
    assert_eq!(run(&s.0.join("missing.toml"), &["--command", "quotient"]).status.code(), Some(2));
}

#[test]
fn starting_outside_the_region_exits_with_code_three() {
    let s = Scratch::new("region");
    let weak = BASE.replace("eps = 3000.0", "eps = 1.0");
    let o = run(&s.config(&weak), &["--command", "trace-max"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}
