use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use revpref::dataset::{generate_menu_collection, write_csv, Dataset};
use revpref::dot::parse_dot;
use revpref::models::{generate_dataset, ModelInstance, ModelKind};
use revpref::relation::BinaryRelation;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

fn revpref(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_revpref")).args(args).env_remove("REVPREF_JOBS").output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Three subjects whose choices come straight from weak orders.
fn rational_cohort(dir: &Path) -> PathBuf {
    let mc = generate_menu_collection(6, &[2, 3, 4]).unwrap();
    let orders = [
        vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)],
        vec![(5, 4), (4, 3), (3, 2), (2, 1), (1, 0)],
        vec![(0, 1), (1, 0), (1, 2), (2, 3), (3, 4), (4, 5)],
    ];
    let data: Vec<Dataset> = orders
        .iter()
        .enumerate()
        .map(|(i, pairs)| {
            let r = BinaryRelation::from_pairs(6, pairs.iter().copied()).unwrap().reflexive_closure().transitive_closure();
            let mut d = generate_dataset(&ModelInstance::new(ModelKind::RationalChoice, r).unwrap(), &mc).unwrap();
            d.subject_id = format!("r{i}");
            d
        })
        .collect();
    let p = dir.join("rational.csv");
    fs::write(&p, write_csv(&data)).unwrap();
    p
}

#[test]
fn rational_cohort_scores_zero_under_rc() {
    let dir = tempfile::tempdir().unwrap();
    let input = rational_cohort(dir.path());
    let summary = dir.path().join("cohort.json");
    let out = stdout(&revpref(&["score", "-i", path(&input), "--models", "rc", "--summary", path(&summary)]));
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.contains(",rc,0,1,")), "{out}");
    let cohort: serde_json::Value = serde_json::from_str(&fs::read_to_string(summary).unwrap()).unwrap();
    assert_eq!(cohort["cohort"][0]["score_zero"], 3);
    assert_eq!(cohort["cohort"][0]["within_threshold_pct"], 100.0);
}

#[test]
fn dominant_subject_is_classified_with_one_relation() {
    let out = stdout(&revpref(&["score", "-i", path(&fixture("dominant_subject.csv"))]));
    let row = out.lines().nth(1).unwrap();
    assert!(row.starts_with("dominant,false,dc,0,1,"), "{row}");
}

#[test]
fn report_writes_one_graph_per_subject_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let inputs = [fixture("dominant_subject.csv"), fixture("undominated_subject.csv")];
    let run = |name: &str, jobs: &str| {
        let out_dir = dir.path().join(name);
        let out = revpref(&["report", "-i", path(&inputs[0]), "-i", path(&inputs[1]), "-o", path(&out_dir), "--jobs", jobs]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        out_dir
    };
    let a = run("a", "1");
    let b = run("b", "2");
    let graphs: Vec<_> = fs::read_dir(a.join("graphs")).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(graphs.len(), 2);
    for entry in fs::read_dir(&a).unwrap() {
        let entry = entry.unwrap();
        if entry.path().is_file() {
            assert_eq!(fs::read(entry.path()).unwrap(), fs::read(b.join(entry.file_name())).unwrap(), "{:?}", entry.file_name());
        }
    }
    let dot = fs::read_to_string(a.join("graphs/dominant.dot")).unwrap();
    assert!(parse_dot(&dot).is_ok());
}

#[test]
fn report_rejects_empty_input() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.csv");
    fs::write(&empty, "").unwrap();
    let out = revpref(&["report", "-i", path(&empty), "-o", path(&dir.path().join("rep"))]);
    assert!(!out.status.success());
    fs::write(&empty, "subject,menu,choice\n").unwrap();
    let out = revpref(&["report", "-i", path(&empty), "-o", path(&dir.path().join("rep"))]);
    assert!(!out.status.success());
}

#[test]
fn forced_flag_rejects_deferrals_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("d.csv");
    fs::write(&p, "subject,menu,choice\ns,A;B,A\ns,A;C,\n").unwrap();
    assert!(revpref(&["validate", "-i", path(&p)]).status.success());
    let out = revpref(&["validate", "-i", path(&p), "--forced"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn enumerate_reports_both_incomplete_counts() {
    let out = stdout(&revpref(&["enumerate", "-n", "4"]));
    for line in ["weak-order,4,75", "strict-partial-order,4,219", "incomplete-preorder,4,280", "preorder,4,355"] {
        assert!(out.contains(line), "{out}");
    }
    let listed = stdout(&revpref(&["enumerate", "-n", "3", "--class", "weak-order", "--list"]));
    assert_eq!(listed.lines().count(), 1 + 13);
}

#[test]
fn simulation_is_seeded_and_documented() {
    let dir = tempfile::tempdir().unwrap();
    let sim = |name: &str, seed: &str| {
        let p = dir.path().join(name);
        stdout(&revpref(&["simulate", "--subjects", "5", "--seed", seed, "-o", path(&p)]));
        fs::read_to_string(p).unwrap()
    };
    let a = sim("a.csv", "9");
    assert_eq!(a, sim("b.csv", "9"));
    assert_ne!(a, sim("c.csv", "10"));
    assert_eq!(a.lines().count(), 1 + 5 * 50);
    let meta: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("a.csv.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["seed"], 9);
    assert!(meta["generator"].as_str().unwrap().contains("ChaCha8"));
}

#[test]
fn graph_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("r.txt");
    fs::write(&p, "# n=3\nA>B\nB>C\nA>C\n").unwrap();
    let dot = stdout(&revpref(&["graph", "-i", path(&p)]));
    assert_eq!(dot.matches("->").count(), 2);
    let back = parse_dot(&dot).unwrap().to_preorder().unwrap();
    assert_eq!(back, BinaryRelation::from_text("# n=3 reflexive\nA>B\nB>C\nA>C\n").unwrap());
    fs::write(&p, "# n=2\nA>B\nB>A\n").unwrap();
    assert!(!revpref(&["graph", "-i", path(&p)]).status.success());
}

#[test]
fn two_stage_switch_controls_screen_flags() {
    let dir = tempfile::tempdir().unwrap();
    // choosing everything everywhere is consistent with total indifference
    let mc = generate_menu_collection(6, &[2, 3, 4]).unwrap();
    let full = BinaryRelation::full(6).unwrap();
    let mut d = generate_dataset(&ModelInstance::new(ModelKind::RationalChoice, full).unwrap(), &mc).unwrap();
    d.subject_id = "all".into();
    let p = dir.path().join("all.csv");
    fs::write(&p, write_csv(&[d])).unwrap();
    let flag = |extra: &[&str]| {
        let mut args = vec!["metrics", "-i", path(&p)];
        args.extend_from_slice(extra);
        let out = stdout(&revpref(&args));
        out.lines().nth(1).unwrap().rsplit(',').next().unwrap().to_string()
    };
    assert_eq!(flag(&[]), "false");
    assert_eq!(flag(&["--no-two-stage"]), "true");
}

#[test]
fn separate_summarises_indifference() {
    let dir = tempfile::tempdir().unwrap();
    let summary = dir.path().join("s.json");
    let out = stdout(&revpref(&["separate", "-i", path(&fixture("dominant_subject.csv")), "--summary", path(&summary)]));
    assert!(out.contains("dominant,A,F,indifferent,dominant-choice"), "{out}");
    let s: serde_json::Value = serde_json::from_str(&fs::read_to_string(summary).unwrap()).unwrap();
    assert_eq!(s["with_indifference"], 1);
    assert_eq!(s["pair_counts"]["indecisive"], 2);
}

#[test]
fn json_tables_and_job_env() {
    let out = Command::new(env!("CARGO_BIN_EXE_revpref"))
        .args(["axioms", "-i", path(&fixture("dominant_subject.csv")), "--format", "json", "--axiom", "congruence"])
        .env("REVPREF_JOBS", "1")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["columns"][1], "axiom");
    assert_eq!(v["rows"][0][2], true);
}
