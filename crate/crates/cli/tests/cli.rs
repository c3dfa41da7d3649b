use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;
use widthdecomp::generators::DomainTag;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_widthdecomp"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

fn write_domain(dir: &Path, tag: DomainTag) -> PathBuf {
    let p = dir.join(format!("{tag}-domain.pddl"));
    std::fs::write(&p, tag.domain_pddl()).unwrap();
    p
}

fn run(cmd: &mut Command) -> (i32, String, String) {
    let Output { status, stdout, stderr } = cmd.output().unwrap();
    (
        status.code().unwrap(),
        String::from_utf8(stdout).unwrap(),
        String::from_utf8(stderr).unwrap(),
    )
}

#[test]
fn solve_reference_delivery_instance() {
    let tmp = TempDir::new().unwrap();
    let dom = write_domain(tmp.path(), DomainTag::Delivery);
    let json = tmp.path().join("trace.json");
    let (code, out, _) = run(bin()
        .args(["solve", "--policy", "sketch:R2", "--width", "1", "--domain-file"])
        .arg(&dom)
        .arg("--problem-file")
        .arg(fixture("delivery_5x5_p4.pddl"))
        .arg("--json-out")
        .arg(&json));
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l == "Plan: 8"), "{out}");
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["subgoal_count"], 8);
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("trace.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"]["solve"]["policy"]["sketch"], "R2");
    assert_eq!(manifest["resolved"]["max_calls"], 20);
    assert_eq!(manifest["inputs"].as_array().unwrap().len(), 2);
}

#[test]
fn usage_errors_exit_2() {
    let tmp = TempDir::new().unwrap();
    let dom = write_domain(tmp.path(), DomainTag::Delivery);
    let (code, _, err) = run(bin()
        .args(["solve", "--width", "3", "--domain-file"])
        .arg(&dom)
        .arg("--problem-file")
        .arg(fixture("delivery_5x5_p4.pddl")));
    assert_eq!(code, 2);
    assert!(err.contains("width"), "{err}");
    assert_eq!(run(bin().args(["solve", "--policy", "magic"])).0, 2);
    assert_eq!(run(bin().arg("fly")).0, 2);
    let (code, _, err) = run(bin()
        .args(["solve", "--policy", "sketch:R4", "--domain-file"])
        .arg(&dom)
        .arg("--problem-file")
        .arg(fixture("delivery_5x5_p4.pddl")));
    assert_eq!(code, 2, "{err}");
}

#[test]
fn missing_input_is_internal_error() {
    let (code, _, _) = run(bin().args(["solve", "--domain-file", "/nonexistent/d.pddl", "--problem-file", "/nonexistent/p.pddl"]));
    assert_eq!(code, 3);
}

#[test]
fn unsolved_exits_1() {
    let tmp = TempDir::new().unwrap();
    let dom = write_domain(tmp.path(), DomainTag::Delivery);
    let (code, out, _) = run(bin()
        .args(["solve", "--policy", "sketch:R2", "--max-calls", "2", "--domain-file"])
        .arg(&dom)
        .arg("--problem-file")
        .arg(fixture("delivery_5x5_p4.pddl")));
    assert_eq!(code, 1);
    assert!(out.contains("Unsolved: max-calls"), "{out}");
}

#[test]
fn gen_train_solve_validate_round_trip() {
    let tmp = TempDir::new().unwrap();
    let inst = tmp.path().join("inst");
    let (code, out, _) = run(bin()
        .args(["gen", "--domain", "gripper", "--balls", "2", "--seed", "3", "--out-dir"])
        .arg(&inst));
    assert_eq!(code, 0);
    let problem = PathBuf::from(out.trim());
    assert!(problem.exists());
    assert!(inst.join("domain.pddl").exists());
    assert!(inst.join("run-manifest.json").exists());

    let pol = tmp.path().join("policy.json");
    let (code, out, _) = run(bin()
        .args(["train", "--iterations", "0", "--instances"])
        .arg(&inst)
        .arg("--out")
        .arg(&pol));
    assert_eq!(code, 0);
    assert!(out.contains("trained 0 iterations on 1 instances"), "{out}");
    let text = std::fs::read_to_string(&pol).unwrap();
    let policy = widthdecomp::policy::TabularPolicy::from_json(&text).unwrap();
    assert_eq!(policy.config.gamma, 0.999);
    assert_eq!(policy.config.alpha, 2e-4);
    assert!(tmp.path().join("policy.manifest.json").exists());

    let trace = tmp.path().join("trace.txt");
    let (code, _, _) = run(bin()
        .args(["solve", "--selection", "stochastic", "--max-calls", "500", "--policy"])
        .arg(format!("trained:{}", pol.display()))
        .arg("--domain-file")
        .arg(inst.join("domain.pddl"))
        .arg("--problem-file")
        .arg(&problem)
        .arg("--trace-out")
        .arg(&trace));
    assert_eq!(code, 0);
    assert!(std::fs::read_to_string(&trace).unwrap().starts_with("Primitive plan: "));

    let plan = tmp.path().join("plan.txt");
    std::fs::write(&plan, "(pick ball1 rooma left)\n(pick ball2 rooma right)\n(move rooma roomb)\n(drop ball1 roomb left)\n(drop ball2 roomb right)\n").unwrap();
    let validate = |plan: &Path| {
        run(bin()
            .args(["validate", "--plan"])
            .arg(plan)
            .arg("--domain-file")
            .arg(inst.join("domain.pddl"))
            .arg("--problem-file")
            .arg(&problem))
    };
    let (code, out, _) = validate(&plan);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("Plan valid (5 actions)"));
    std::fs::write(&plan, "(pick ball1 rooma left)\n").unwrap();
    assert_eq!(validate(&plan).0, 1);
}

#[test]
fn bench_writes_csv_files() {
    let tmp = TempDir::new().unwrap();
    let suite = tmp.path().join("delivery.json");
    std::fs::write(&suite, r#"{"seed": 1, "entries": [{"domain": "delivery", "x": 4, "y": 4, "packages": [1, 2, 3]}]}"#)
        .unwrap();
    let out_dir = tmp.path().join("out");
    let (code, out, _) = run(bin()
        .args(["bench", "--policy", "sketch:R2", "--jobs", "1", "--manifest"])
        .arg(&suite)
        .arg("--out-dir")
        .arg(&out_dir));
    assert_eq!(code, 0);
    assert!(out.starts_with("delivery: Cov 3/3 SL 4"), "{out}");
    for f in ["records.csv", "aggregate.csv", "curve.csv", "run-manifest.json"] {
        assert!(out_dir.join(f).exists(), "{f}");
    }
    let records = widthdecomp::bench::records_from_csv(&std::fs::read_to_string(out_dir.join("records.csv")).unwrap()).unwrap();
    let subgoals: Vec<usize> = records.iter().map(|r| r.subgoals).collect();
    assert_eq!(subgoals, [2, 4, 6]);
}

#[test]
fn check_sketch_reports() {
    let tmp = TempDir::new().unwrap();
    let dom = write_domain(tmp.path(), DomainTag::Delivery);
    let prob = tmp.path().join("p.pddl");
    std::fs::write(
        &prob,
        "(define (problem d) (:domain delivery) (:objects c0 c1 - cell p1 - package t - truck)
           (:init (adjacent c0 c1) (adjacent c1 c0) (at p1 c0) (at t c0) (empty t)) (:goal (at p1 c1)))",
    )
    .unwrap();
    let (code, out, _) = run(bin()
        .args(["check-sketch", "--ruleset", "R2", "--domain-file"])
        .arg(&dom)
        .arg("--problem-file")
        .arg(&prob));
    assert_eq!(code, 0);
    assert!(out.contains("safe and acyclic"), "{out}");

    let toggle = tmp.path().join("toggle.json");
    std::fs::write(
        &toggle,
        r#"{"name":"toggle","features":[{"name":"H","kind":"boolean","evaluator":"delivery.held"}],
            "rules":[{"conditions":["H"],"effects":["!H"]},{"conditions":["!H"],"effects":["H"]}]}"#,
    )
    .unwrap();
    let (code, out, _) = run(bin()
        .args(["check-sketch", "--ruleset"])
        .arg(&toggle)
        .arg("--domain-file")
        .arg(&dom)
        .arg("--problem-file")
        .arg(&prob));
    assert_eq!(code, 1);
    assert!(out.contains("violation: Cycle"), "{out}");
}
