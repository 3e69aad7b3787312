//! End-to-end tests of the binary: exit codes, report content, fixture
//! consistency, and byte-determinism of the full suite.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../models")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cartan"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_model(args: &[&str], model: &str) -> Output {
    let path = fixture(model);
    let mut full: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    full.push(path.to_string_lossy().into_owned());
    Command::new(env!("CARGO_BIN_EXE_cartan"))
        .args(&full)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn validate_passes_on_good_models() {
    for model in [
        "circle.json",
        "t2.json",
        "t2_weighted.json",
        "su2_frame.json",
        "u1_weil_op.json",
        "u1_pair.json",
        "su2_weil_op.json",
    ] {
        let out = run_model(&["validate", "--max-degree", "4"], model);
        assert_eq!(out.status.code(), Some(0), "{model}: {}", stdout(&out));
        assert!(stdout(&out).contains("status: ok"));
    }
}

#[test]
fn validate_fails_with_witnesses() {
    let out = run_model(&["validate"], "broken_antisym.json");
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("antisymmetry fails at (i,j,k)=(1,2,3)"), "{text}");
    assert!(text.contains("status: fail"));

    let out = run_model(&["validate"], "broken_cartan.json");
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("(d4)"));
}

#[test]
fn input_errors_exit_two() {
    // unreadable file
    let out = run(&["validate", "/nonexistent/model.json"]);
    assert_eq!(out.status.code(), Some(2));
    // unknown flag (clap reports usage errors as 2)
    let out = run(&["validate", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
    // unknown connection name
    let out = run_model(
        &["transgress", "--theta0", "nope", "--theta1", "right", "--max-degree", "2"],
        "u1_pair.json",
    );
    assert_eq!(out.status.code(), Some(2));
    // malformed --t argument
    let out = run_model(&["kalkman", "--t", "sevens"], "circle.json");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn weil_reports_expected_dims() {
    let out = run_model(&["weil", "--max-degree", "4"], "u1.json");
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("dims weil-full: 1 0 0 0 0"), "{text}");
    assert!(text.contains("check acyclicity: ok"));

    let out = run_model(&["weil", "--max-degree", "3"], "su2.json");
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("dims weil-full: 1 0 0 0"));
}

#[test]
fn cohomology_dims_match_known_values() {
    let out = run_model(
        &["cohomology", "--model", "cartan", "--max-degree", "5"],
        "circle.json",
    );
    assert!(stdout(&out).contains("dims cartan: 1 0 0 0 0 0"));
    let out = run_model(
        &["cohomology", "--model", "weil-basic", "--max-degree", "5"],
        "circle.json",
    );
    assert!(stdout(&out).contains("dims weil-basic: 1 0 0 0 0 0"));
    let out = run_model(
        &["cohomology", "--model", "cartan", "--max-degree", "4"],
        "t2.json",
    );
    assert!(stdout(&out).contains("dims cartan: 1 0 1 0 1"));
}

#[test]
fn reduce_reports_reduction_values() {
    let out = run_model(&["reduce", "--max-degree", "4"], "t2.json");
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("value reduce(c1): 0"), "{text}");
    assert!(text.contains("value reduce(c2): Ps1"), "{text}");
    assert!(text.contains("dims g-basic: 1 0 1 0 1"));
    assert!(text.contains("check basic-dims-equal: ok"));
}

#[test]
fn char_class_matches_classical_form() {
    let out = run_model(
        &["char-class", "--poly", "c1sq", "--max-degree", "4"],
        "u1_weil_op.json",
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("value char-class(c1sq): v1^2"), "{text}");
    assert!(text.contains("check classical-chern-weil: ok"));
}

#[test]
fn kalkman_random_t_reports_correction_honestly() {
    // abelian: strict lemma holds for every T
    let out = run_model(
        &["kalkman", "--max-degree", "4", "--t", "seed:7"],
        "circle.json",
    );
    assert_eq!(out.status.code(), Some(0));
    // nonabelian with a generic matrix: the strict identity fails with a
    // witness while the curvature-corrected identity holds
    let out = run_model(
        &["kalkman", "--max-degree", "2", "--t", "seed:2"],
        "su2_weil_op.json",
    );
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("value t-intertwines-bracket: no"), "{text}");
    assert!(text.contains("check conjugation-with-correction[deg<=2]: ok"), "{text}");
    assert!(text.contains("check kalkman-conjugation[deg<=2]: FAIL"), "{text}");
}

/// The su2 operation fixture really is the Weil algebra of su(2) with
/// renamed generators: all structure maps agree on every generator.
#[test]
fn su2_fixture_is_the_weil_algebra() {
    use cartan_core::algebra::Element;
    use cartan_core::lie::LieAlgebraData;
    use cartan_core::weil::build_weil_named;

    let text = std::fs::read_to_string(fixture("su2_weil_op.json")).unwrap();
    let loaded = cartan_cli::model::ModelFile::parse(&text)
        .unwrap()
        .load()
        .unwrap();
    let op = loaded.operation.as_ref().unwrap();
    let reference = build_weil_named(&LieAlgebraData::su2(), "u", "v").unwrap().op;
    assert_eq!(op.algebra.generator_count(), reference.algebra.generator_count());
    for g in 0..reference.algebra.generator_count() {
        let name = &reference.algebra.generator(g).name;
        let here = Element::generator_named(&op.algebra, name).unwrap();
        let there = Element::generator_named(&reference.algebra, name).unwrap();
        let render_pair = |a: &Element, b: &Element| (a.render(), b.render());
        let (lhs, rhs) = render_pair(
            &op.d.evaluate(&here).unwrap(),
            &reference.d.evaluate(&there).unwrap(),
        );
        assert_eq!(lhs, rhs, "d on {name}");
        for k in 0..3 {
            let (lhs, rhs) = render_pair(
                &op.lie_derivative[k].evaluate(&here).unwrap(),
                &reference.lie_derivative[k].evaluate(&there).unwrap(),
            );
            assert_eq!(lhs, rhs, "L_{k} on {name}");
            let (lhs, rhs) = render_pair(
                &op.contraction[k].evaluate(&here).unwrap(),
                &reference.contraction[k].evaluate(&there).unwrap(),
            );
            assert_eq!(lhs, rhs, "I_{k} on {name}");
        }
    }
}
