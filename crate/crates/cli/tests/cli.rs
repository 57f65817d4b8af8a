use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_jacobi-cs"));
    cmd.args(args)
        .env("RUST_LOG", "error")
        .env_remove("JACOBI_CS_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn kernel_values() {
    let o = run(&[
        "kernel", "--z", "0", "--w", "0", "--zp", "0", "--wp", "0", "--k", "1",
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(num(&v["closed"]["re"]), 1.0);
    assert_eq!(num(&v["closed"]["im"]), 0.0);
    assert_eq!(v["k"], "1");

    let v = json(&run(&[
        "kernel", "--z", "0", "--w", "0.5", "--zp", "0", "--wp", "0.5", "--k", "1",
    ]));
    assert!((num(&v["closed"]["re"]) - 0.75f64.powi(-2)).abs() < 1e-14);
    assert!(num(&v["abs_err"]) < 1e-12);
    assert_eq!(v["cutoffs"]["n"], 60);
}

#[test]
fn kernel_error_shrinks_with_cutoff() {
    let errs: Vec<f64> = ["6", "12", "24"]
        .iter()
        .map(|n| {
            let o = run(&[
                "kernel", "--z", "1+0.5i", "--w", "0.5", "--zp", "-0.3i", "--wp", "0.4-0.2i",
                "--k", "3/2", "--cutoff", n,
            ]);
            num(&json(&o)["abs_err"])
        })
        .collect();
    assert!(
        errs[0] > errs[1] && errs[1] > errs[2] && errs[2] > 0.0,
        "{errs:?}"
    );
}

#[test]
fn exit_codes() {
    assert_eq!(code(&run(&["kernel", "--w", "1.2"])), 2);
    assert_eq!(code(&run(&["kernel", "--w", "-1"])), 2);
    assert_eq!(code(&run(&["kernel", "--z", "abc"])), 3);
    assert_eq!(code(&run(&["kernel", "--k", "x/2"])), 3);
    assert_eq!(code(&run(&["kernel", "--tol=-1"])), 2);
    assert_eq!(code(&run(&["kernel", "--cutoff", "1"])), 2);
    assert_eq!(code(&run(&["bogus"])), 3);
    assert_eq!(code(&run(&["verify", "--suite", "nope"])), 3);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn strict_weight_rejects_half() {
    let o = run(&["verify", "--suite", "all", "--k", "0.5"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("invalid weight"));
    // relaxed mode still requires k > 3/4
    assert_eq!(
        code(&run(&[
            "verify", "--suite", "algebra", "--k", "0.5", "--mode", "relaxed"
        ])),
        2
    );
}

#[test]
fn verify_diffops_is_exact() {
    let o = run(&["verify", "--suite", "diffops", "--k", "3/2"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["k"], "3/2");
    assert_eq!(v["passed"], true);
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.len() >= 10);
    for c in checks {
        assert_eq!(c["suite"], "diffops");
        assert_eq!(num(&c["residual"]), 0.0, "{c}");
    }
}

#[test]
fn verify_kernel_at_cutoff_sixty() {
    let o = run(&[
        "verify",
        "--suite",
        "kernel",
        "--k",
        "1",
        "--cutoff",
        "60",
        "--samples",
        "200000",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["passed"] == true));
}

#[test]
fn verify_reports_failures_with_exit_one() {
    // the truncated sum cannot reach 1e-8 with only two terms per factor
    let o = run(&[
        "verify",
        "--suite",
        "kernel",
        "--k",
        "1",
        "--cutoff",
        "2",
        "--samples",
        "1000",
    ]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["passed"], false);
}

#[test]
fn verify_is_deterministic() {
    let args = [
        "verify",
        "--suite",
        "algebra,coords,kernel",
        "--k",
        "2",
        "--seed",
        "17",
        "--samples",
        "50000",
    ];
    let a = run(&args);
    let b = run_env(&args, &[("JACOBI_CS_THREADS", "1")]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn threads_variable_is_validated() {
    assert_eq!(
        code(&run_env(&["kernel"], &[("JACOBI_CS_THREADS", "zero")])),
        3
    );
    assert_eq!(
        code(&run_env(&["kernel"], &[("JACOBI_CS_THREADS", "2")])),
        0
    );
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    std::fs::write(&conf, "k = 3/2\ncutoff = 10\n").unwrap();
    let conf = conf.to_str().unwrap();
    let v = json(&run(&["kernel", "--config", conf, "--w", "0.3"]));
    assert_eq!(v["k"], "3/2");
    assert_eq!(v["cutoffs"]["n"], 10);
    let v = json(&run(&[
        "kernel", "--config", conf, "--k", "2", "--w", "0.3",
    ]));
    assert_eq!(v["k"], "2");
    std::fs::write(dir.path().join("bad.conf"), "colour = blue\n").unwrap();
    assert_eq!(
        code(&run(&[
            "kernel",
            "--config",
            dir.path().join("bad.conf").to_str().unwrap()
        ])),
        3
    );
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,re_z,im_z,re_w,im_w"));
    lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

#[test]
fn evolve_zero_hamiltonian_is_constant() {
    let o = run(&[
        "evolve", "--z0", "0.3-0.2i", "--w0", "0.1+0.4i", "--t1", "2", "--dt", "0.01", "--format",
        "csv",
    ]);
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&String::from_utf8_lossy(&o.stdout));
    assert_eq!(rows.len(), 201);
    for r in &rows {
        assert_eq!(&r[1..], &[0.3, -0.2, 0.1, 0.4]);
    }
}

#[test]
fn evolve_rotation_keeps_modulus() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rot.csv");
    let o = run(&[
        "evolve",
        "--w0",
        "0.6+0.2i",
        "--z0",
        "0.5",
        "--eps0",
        "1.2",
        "--t1",
        "10",
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&std::fs::read_to_string(&out).unwrap());
    let r0 = rows[0][3].hypot(rows[0][4]);
    for r in &rows {
        assert!((r[3].hypot(r[4]) - r0).abs() < 1e-8);
    }
    let manifest: Value = serde_json::from_str(
        &std::fs::read_to_string(Path::new(&format!("{}.manifest.json", out.display()))).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["manifest"]["method"], "rk4-step-halving");
    assert_eq!(num(&manifest["manifest"]["H"]["eps_0"]["re"]), 1.2);
    assert_eq!(manifest["summary"]["status"]["kind"], "completed");
}

#[test]
fn evolve_squeezing_matches_tanh() {
    let v = json(&run(&["evolve", "--eps-plus", "0.5", "--t1", "4"]));
    let samples = v["trajectory"]["samples"].as_array().unwrap();
    for s in samples {
        let t = num(&s["t"]);
        assert!(num(&s["w"]["re"]).abs() < 1e-7);
        assert!((num(&s["w"]["im"]) + (0.5 * t).tanh()).abs() < 1e-7);
    }
}

#[test]
fn evolve_non_hermitian_exit() {
    let o = run(&[
        "evolve", "--w0", "0.5", "--eps0", "1.5i", "--t1", "5", "--format", "csv",
    ]);
    assert_eq!(code(&o), 4);
    let rows = csv_rows(&String::from_utf8_lossy(&o.stdout));
    assert!(rows.last().unwrap()[0] < 5.0);
}

#[test]
fn geodesic_summary() {
    let v = json(&run(&[
        "geodesic",
        "--k",
        "3/2",
        "--z0",
        "0.2",
        "--w0",
        "0.1i",
        "--vz",
        "0.3",
        "--vw",
        "0.1-0.05i",
        "--t1",
        "5",
    ]));
    assert!(num(&v["summary"]["speed_drift"]) < 1e-6);
    assert_eq!(v["summary"]["status"]["kind"], "completed");
    assert_eq!(v["manifest"]["H"], Value::Null);
    assert!(v["trajectory"]["velocities"].as_array().unwrap().len() > 100);
}

#[test]
fn transform_examples() {
    let v = json(&run(&["transform", "--v", "i", "--u", "0"]));
    assert_eq!(v["direction"], "half_plane_to_disk");
    assert!(num(&v["disk"]["z"]["re"]).abs() < 1e-15 && num(&v["disk"]["w"]["re"]).abs() < 1e-15);
    assert!(num(&v["disk"]["w"]["im"]).abs() < 1e-15);
    let v = json(&run(&["transform", "--v", "0.3+1.7i", "--u", "-1.2+0.4i"]));
    assert!(num(&v["roundtrip_residual"]) < 1e-12);
    let v = json(&run(&[
        "transform",
        "--z",
        "0.4-0.1i",
        "--w",
        "0.3+0.5i",
        "--sl2",
        "2,1,3,2",
    ]));
    assert_eq!(v["direction"], "disk_to_half_plane");
    assert!(num(&v["roundtrip_residual"]) < 1e-12);
    assert!(num(&v["iwasawa"]["residual"]) < 1e-12);
    assert_eq!(num(&v["iwasawa"]["matrix"]["c"]), 3.0);
    assert_eq!(code(&run(&["transform", "--v", "-i"])), 2);
    assert_eq!(code(&run(&["transform", "--sl2", "1,1,1,1"])), 2);
    assert_eq!(code(&run(&["transform", "--sl2", "1,2"])), 3);
}

#[test]
fn group_inverse_and_product() {
    let o = run(&[
        "group",
        "--zeta",
        "0.3-0.2i",
        "--theta",
        "0.4",
        "--alpha",
        "0.5+0.1i",
        "--phase",
        "0.2",
        "--with",
        "0.3-0.2i;0.4;0.5+0.1i;0.2",
        "--z",
        "0.1",
        "--w",
        "0.2i",
        "--k",
        "2",
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["h"], v["with"]);
    assert!(num(&v["action"]["multiplier"]["re"]).is_finite());
    let (h, inv) = (&v["h"], &v["inverse"]);
    assert_eq!(num(&inv["t"]), -num(&h["t"]));
    assert_eq!(num(&inv["g"]["a"]["im"]), -num(&h["g"]["a"]["im"]));
    assert_eq!(num(&inv["g"]["b"]["re"]), -num(&h["g"]["b"]["re"]));
    let p = &v["product"];
    let norm = |c: &Value| num(&c["re"]).powi(2) + num(&c["im"]).powi(2);
    assert!((norm(&p["g"]["a"]) - norm(&p["g"]["b"]) - 1.0).abs() < 1e-14);
    assert_eq!(code(&run(&["group", "--with", "0;0;0"])), 3);
}

#[test]
fn csv_only_where_supported() {
    assert_eq!(code(&run(&["kernel", "--format", "csv"])), 3);
    let o = run(&[
        "verify", "--suite", "diffops", "--k", "2", "--format", "csv",
    ]);
    assert_eq!(code(&o), 0);
    assert!(
        String::from_utf8_lossy(&o.stdout).starts_with("suite,check,residual,tolerance,passed\n")
    );
}
