use std::path::PathBuf;
use std::process::Command as Process;

use eqtree::algebra::polynomial::canonicalize;
use eqtree::algebra::polynomial::VarTable;
use eqtree::algebra::text::parse_polynomial;
use eqtree::ideal::{tree_ideal, with_linear_cuts, StarIdealProvider};
use eqtree::io::read_tree;
use eqtree::Rational;
use eqtree_cli::{
    run, Command, Format, JobSpec, ProviderSpec, EXIT_INPUT, EXIT_OK, EXIT_UNRESOLVED,
};

fn tree(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../trees")
        .join(name)
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn generator_lines(stdout: &str) -> Vec<&str> {
    stdout
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split('\t').next().unwrap())
        .collect()
}

fn label(leaves: &[&str], subset: &str) -> String {
    let parts: Vec<&str> = leaves
        .iter()
        .map(|l| if subset.contains(l) { "s" } else { "t" })
        .collect();
    format!("z[{}]", parts.join(","))
}

#[test]
fn figure_one_file_shape() {
    let t = read_tree(&tree("figure1.json")).unwrap();
    assert_eq!(t.vertex_count(), 9);
    assert_eq!(t.edges().len(), 8);
    assert_eq!(t.symmetry().order(), 2);
}

#[test]
fn figure_one_ideal_contains_the_contracted_binomials() {
    let mut job = JobSpec::new(tree("figure1.json"), Command::Ideal);
    job.provider = ProviderSpec::Builtin;
    let out = run(&job);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let leaves = ["1", "2", "3", "5", "6", "7"];
    let mut vars = VarTable::default();
    let emitted = canonicalize(
        generator_lines(&out.stdout)
            .iter()
            .map(|l| parse_polynomial(l, &mut vars, true).unwrap())
            .collect::<Vec<_>>(),
    );
    let terms = [
        ("", "1235", "12", "35"),
        ("", "1236", "12", "36"),
        ("", "1237", "12", "37"),
        ("", "123567", "12", "3567"),
        ("56", "1235", "1256", "35"),
        ("57", "1235", "1257", "35"),
        ("67", "1235", "1267", "35"),
        ("56", "1236", "1256", "36"),
        ("57", "1236", "1257", "36"),
        ("67", "1236", "1267", "36"),
        ("56", "1237", "1256", "37"),
        ("57", "1237", "1257", "37"),
        ("67", "1237", "1267", "37"),
        ("56", "123567", "1256", "3567"),
        ("57", "123567", "1257", "3567"),
        ("67", "123567", "1267", "3567"),
    ];
    for (a, b, c, d) in terms {
        let text = format!(
            "{}*{} - {}*{}",
            label(&leaves, a),
            label(&leaves, b),
            label(&leaves, c),
            label(&leaves, d)
        );
        let p = canonicalize(vec![parse_polynomial(&text, &mut vars, true).unwrap()]).remove(0);
        assert!(emitted.contains(&p), "missing {text}");
    }
}

#[test]
fn verify_passes_on_the_four_star() {
    let out = run(&JobSpec::new(tree("z2_four_star.json"), Command::Verify));
    assert_eq!(out.code, EXIT_OK, "{}{}", out.stdout, out.stderr);
    assert_eq!(
        out.stdout.lines().filter(|l| l.starts_with("PASS")).count(),
        3
    );
}

#[test]
fn unknown_star_without_oracle_is_unresolved() {
    let mut job = JobSpec::new(data("z2_five_star_unknown.json"), Command::Ideal);
    job.provider = ProviderSpec::Builtin;
    let out = run(&job);
    assert_eq!(out.code, EXIT_UNRESOLVED);
    let diag: serde_json::Value = serde_json::from_str(out.stderr.trim()).unwrap();
    assert_eq!(diag["error"], "unresolved-star");
}

#[test]
fn empty_vertex_list_is_an_input_error() {
    let dir = std::env::temp_dir().join(format!("eqtree-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("empty.json");
    std::fs::write(&path, r#"{"group": "K81", "vertices": [], "edges": []}"#).unwrap();
    let out = run(&JobSpec::new(&path, Command::Ideal));
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("/vertices"), "{}", out.stderr);
}

#[test]
fn emitted_polynomials_round_trip() {
    let mut job = JobSpec::new(tree("figure1.json"), Command::Ideal);
    job.provider = ProviderSpec::Builtin;
    job.emit_linear_cuts = true;
    let out = run(&job);
    assert_eq!(out.code, EXIT_OK);
    let t = read_tree(&tree("figure1.json")).unwrap();
    let set = with_linear_cuts(&t, &tree_ideal(&t, &StarIdealProvider::builtin()).unwrap());
    let mut vars = set.vars.clone();
    let parsed: Vec<_> = generator_lines(&out.stdout)
        .iter()
        .map(|l| parse_polynomial(l, &mut vars, false).unwrap())
        .collect();
    assert_eq!(parsed, set.polys());
    for (p, line) in parsed.iter().zip(generator_lines(&out.stdout)) {
        assert_eq!(p.display(&vars), line);
    }
}

#[test]
fn json_listing_matches_text_listing() {
    let mut job = JobSpec::new(tree("z2_four_star.json"), Command::Ideal);
    let text = run(&job);
    job.format = Format::Json;
    let json = run(&job);
    let v: serde_json::Value = serde_json::from_str(&json.stdout).unwrap();
    let from_json: Vec<&str> = v["generators"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| g["polynomial"].as_str().unwrap())
        .collect();
    assert_eq!(from_json, generator_lines(&text.stdout));
}

#[test]
fn toric_listing_has_header_and_binomials() {
    let out = run(&JobSpec::new(tree("z2_four_star.json"), Command::Toric));
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let header: serde_json::Value =
        serde_json::from_str(out.stdout.lines().next().unwrap()).unwrap();
    assert!(header.is_object());
    assert!(out.stdout.contains("binomials up to degree 2"));
}

#[test]
fn toric_rejects_nonabelian_groups() {
    let out = run(&JobSpec::new(tree("jc69_three_star.json"), Command::Toric));
    assert_eq!(out.code, EXIT_INPUT);
}

#[test]
fn phi_is_a_probability_distribution() {
    let mut job = JobSpec::new(tree("k81_three_star.json"), Command::Phi);
    job.root = Some("1".into());
    let out = run(&job);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let zero: Rational = "0".parse().unwrap();
    let mut total = zero.clone();
    for line in out.stdout.lines() {
        let v: Rational = line.split('\t').nth(1).unwrap().parse().unwrap();
        assert!(v >= zero);
        total = total + v;
    }
    assert_eq!(total, "1".parse().unwrap());
}

#[test]
fn evaluate_lists_every_coordinate() {
    let out = run(&JobSpec::new(tree("z2_four_star.json"), Command::Evaluate));
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(out.stdout.lines().count(), 8);
}

#[test]
fn binary_output_is_deterministic() {
    let exe = env!("CARGO_BIN_EXE_eqtree");
    let go = |threads: &str| {
        Process::new(exe)
            .args([
                "ideal",
                tree("figure1.json").to_str().unwrap(),
                "--provider",
                "oracle",
                "--seed",
                "3",
            ])
            .env("RAYON_NUM_THREADS", threads)
            .output()
            .unwrap()
    };
    let a = go("1");
    let b = go("4");
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn binary_exit_codes() {
    let exe = env!("CARGO_BIN_EXE_eqtree");
    let status = |args: &[&str]| Process::new(exe).args(args).output().unwrap().status.code();
    let unknown = data("z2_five_star_unknown.json");
    assert_eq!(
        status(&["ideal", unknown.to_str().unwrap(), "--provider=builtin"]),
        Some(3)
    );
    assert_eq!(status(&["ideal", "/nonexistent/tree.json"]), Some(2));
    assert_eq!(status(&["frobnicate", "x"]), Some(2));
    assert_eq!(
        status(&[
            "ideal",
            tree("z2_four_star.json").to_str().unwrap(),
            "--provider=nonsense"
        ]),
        Some(2)
    );
}

#[test]
fn verify_passes_on_presets() {
    for name in [
        "k81_three_star.json",
        "cs05_three_star.json",
        "general_markov_quartet.json",
    ] {
        let out = run(&JobSpec::new(tree(name), Command::Verify));
        assert_eq!(out.code, EXIT_OK, "{name}: {}{}", out.stdout, out.stderr);
    }
}
