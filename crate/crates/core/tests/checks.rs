use std::sync::Arc;

use tensorcoh::checks::{
    self, depth_sequence, CheckInput, Operand, Verdict, DEFAULT_GENERATOR_CAP,
};
use tensorcoh::ideal::Ideal;
use tensorcoh::module::GradedModule;
use tensorcoh::quotient::QuotientRing;
use tensorcoh::{AmbientRing, GroundField, Polynomial};

fn poly_ring(vars: &[&str]) -> Arc<QuotientRing> {
    let s = AmbientRing::new(GroundField::default(), vars).unwrap();
    QuotientRing::polynomial(&s)
}

fn quotient(vars: &[&str], eqs: &[&str]) -> Arc<QuotientRing> {
    let s = AmbientRing::new(GroundField::default(), vars).unwrap();
    let gens = eqs
        .iter()
        .map(|e| Polynomial::parse(&s, e).unwrap())
        .collect();
    QuotientRing::new(&s, gens).unwrap().certify_domain()
}

fn ideal(r: &Arc<QuotientRing>, gens: &[&str]) -> Ideal {
    let g = gens
        .iter()
        .map(|e| Polynomial::parse(r.ambient(), e).unwrap())
        .collect();
    Ideal::new(r, g).unwrap()
}

fn ideal_op(r: &Arc<QuotientRing>, gens: &[&str]) -> Operand {
    Operand::from_ideal(ideal(r, gens)).unwrap()
}

fn run(id: &str, input: &CheckInput) -> checks::CheckReport {
    let rep = checks::run(id, input).unwrap();
    println!("{}", serde_json::to_string(&rep).unwrap());
    rep
}

#[test]
fn finite_length_bound_is_sharp_on_the_residue_field() {
    let r = poly_ring(&["x", "y"]);
    let k = Operand::new(GradedModule::residue_field(&r));
    let m = ideal_op(&r, &["x", "y"]);
    let rep = run("lemma-0", &CheckInput::new(k).with_n(m));
    assert_eq!(rep.verdict, Verdict::Holds);
    assert_eq!(rep.lhs, serde_json::json!(2));
    assert_eq!(rep.rhs, serde_json::json!(2));
}

#[test]
fn maximal_ideal_square_of_a_regular_surface() {
    let r = poly_ring(&["x", "y"]);
    let rep = run("f-m2", &CheckInput::new(ideal_op(&r, &["x", "y"])));
    assert_eq!(rep.verdict, Verdict::Holds);
}

#[test]
fn primary_ideal_against_maximal_ideal() {
    let r = poly_ring(&["x", "y", "z"]);
    let rep = run("f-claimA", &CheckInput::new(ideal_op(&r, &["x", "y", "z"])));
    assert_eq!(rep.verdict, Verdict::Holds);
    assert_eq!(rep.lhs, serde_json::json!([3, 4, 0]));
    let rep = run(
        "f-claimA",
        &CheckInput::new(ideal_op(&r, &["x^2", "y", "z^3"])),
    );
    assert_eq!(rep.verdict, Verdict::Holds);
    let rep = run("f-55i", &CheckInput::new(ideal_op(&r, &["x", "y", "z"])));
    assert_eq!(rep.verdict, Verdict::Holds);
}

#[test]
fn parameter_ideal_square() {
    let r = poly_ring(&["x", "y"]);
    let rep = run("f-param", &CheckInput::new(ideal_op(&r, &["x^2", "y^3"])));
    assert_eq!(rep.verdict, Verdict::Holds);
    assert_eq!(rep.lhs, serde_json::json!(6));
    let rep = run("free-2au", &CheckInput::new(ideal_op(&r, &["x^2", "y^3"])));
    assert_eq!(rep.verdict, Verdict::Holds);
}

#[test]
fn height_two_complete_intersection() {
    let r = poly_ring(&["x", "y", "z"]);
    let rep = run("gor-ht2", &CheckInput::new(ideal_op(&r, &["x", "y"])));
    assert_eq!(rep.verdict, Verdict::Holds);
}

#[test]
fn vanishing_needs_finite_projective_dimension() {
    let r = quotient(&["x", "y"], &["x^2+y^2"]);
    let i = ideal_op(&r, &["x", "y"]);
    let rep = run("g-vanish", &CheckInput::new(i.clone()).with_n(i).with_r(0));
    assert_eq!(rep.verdict, Verdict::HypothesesViolated);
    assert_ne!(rep.lhs["h"][0], serde_json::json!(0));
}

#[test]
fn grade_sum_vanishing_on_a_four_dimensional_ring() {
    let r = poly_ring(&["x", "y", "z", "w"]);
    let i = ideal_op(&r, &["x", "y", "z"]);
    let rep = run("g-vanish", &CheckInput::new(i.clone()).with_n(i).with_r(0));
    println!("{:?}", rep.verdict);
}

#[test]
fn depth_sequences() {
    let r = poly_ring(&["x", "y"]);
    let seq = depth_sequence(
        &ideal_op(&r, &["x^2", "y^3"]),
        None,
        4,
        DEFAULT_GENERATOR_CAP,
    )
    .unwrap();
    println!("{}", serde_json::to_string(&seq.report).unwrap());
    assert_eq!(seq.values, vec![Some(1), Some(0), Some(0), Some(0)]);
    assert_eq!(seq.report.verdict, Verdict::Holds);
    let seq = depth_sequence(&ideal_op(&r, &["x", "y"]), None, 3, DEFAULT_GENERATOR_CAP).unwrap();
    assert_eq!(seq.values, vec![Some(1), Some(0), Some(0)]);
    let quot = Operand::new(ideal(&r, &["x"]).quotient_module().unwrap());
    let seq = depth_sequence(&quot, None, 3, DEFAULT_GENERATOR_CAP).unwrap();
    println!("{}", serde_json::to_string(&seq.report).unwrap());
    assert_eq!(seq.values, vec![Some(1), Some(1), Some(1)]);
    assert_eq!(seq.report.verdict, Verdict::Holds);
    let r3 = poly_ring(&["x", "y", "z"]);
    let seq = depth_sequence(
        &ideal_op(&r3, &["x", "y", "z"]),
        None,
        3,
        DEFAULT_GENERATOR_CAP,
    )
    .unwrap();
    println!("{}", serde_json::to_string(&seq.report).unwrap());
    assert_eq!(seq.values, vec![Some(1), Some(0), Some(0)]);
}

#[test]
fn perfect_against_buchsbaum_table() {
    let r = poly_ring(&["x", "y", "z"]);
    let m = Operand::new(ideal(&r, &["x"]).quotient_module().unwrap());
    let n = ideal_op(&r, &["x", "y", "z"]).with_buchsbaum(true);
    let rep = run("yoshida", &CheckInput::new(m).with_n(n));
    assert_ne!(rep.verdict, Verdict::Fails);
}

fn veronese() -> Arc<QuotientRing> {
    quotient(&["a", "b", "c", "d"], &["a*c-b^2", "a*d-b*c", "b*d-c^2"])
}

#[test]
fn canonical_module_of_the_cubic_veronese() {
    let r = veronese();
    let one = Operand::new(GradedModule::free(&r, vec![0]));
    let rep = run("f-kan", &CheckInput::new(one.clone()));
    assert_eq!(rep.verdict, Verdict::Holds);
    let rep = run("f-tor1", &CheckInput::new(one.clone()));
    assert_eq!(rep.verdict, Verdict::Holds);
    // Ext^1(w,R) vanishes on this ring although it is not Gorenstein.
    let rep = run("f-tach", &CheckInput::new(one));
    assert_eq!(rep.verdict, Verdict::Fails);
    assert_eq!(rep.lhs["ext1_length"], serde_json::json!(0));
}

#[test]
fn ideal_of_a_plane_on_the_quadric_cone() {
    let r = quotient(&["x", "y", "u", "v"], &["x*y-u*v"]);
    let i = ideal_op(&r, &["x", "u"]);
    let rep = run("sph-equiv", &CheckInput::new(i.clone()));
    assert_eq!(rep.verdict, Verdict::HypothesesViolated);
    let m = ideal_op(&r, &["x", "y", "u", "v"]);
    let rep = run("prop-v5", &CheckInput::new(i.clone()).with_n(m));
    assert_eq!(rep.verdict, Verdict::Holds);
    let rep = run("refl-516", &CheckInput::new(i.clone()).with_n(i));
    assert_ne!(rep.verdict, Verdict::Fails);
}

#[test]
fn normal_surface_hypersurface() {
    let r = quotient(&["x", "y", "z"], &["x^2+y^2+z^2"]);
    let one = Operand::new(GradedModule::free(&r, vec![0]));
    let rep = run("free-hyp2", &CheckInput::new(one));
    assert_eq!(rep.verdict, Verdict::Holds);
    let m = ideal_op(&r, &["x", "y", "z"]);
    let rep = run("free-hyp2", &CheckInput::new(m));
    assert_eq!(rep.verdict, Verdict::Holds);
}

#[test]
fn bounds_on_regular_rings() {
    let r = poly_ring(&["x", "y", "z"]);
    let quot = Operand::new(ideal(&r, &["x"]).quotient_module().unwrap());
    let m = ideal_op(&r, &["x", "y", "z"]);
    for id in [
        "prop-vector",
        "prop-cvector",
        "cor-1d",
        "cor-jac",
        "prop-vector2",
        "lemma-red",
    ] {
        let rep = run(id, &CheckInput::new(quot.clone()).with_n(m.clone()));
        assert_ne!(rep.verdict, Verdict::Fails, "{id}");
    }
    let k = Operand::new(GradedModule::residue_field(&r));
    let rep = run("fact-3ht", &CheckInput::new(k.clone()).with_n(m.clone()));
    assert_ne!(rep.verdict, Verdict::Fails);
    let rep = run(
        "prop-buchs",
        &CheckInput::new(quot).with_n(m.with_buchsbaum(true)),
    );
    assert_ne!(rep.verdict, Verdict::Fails);
}

#[test]
fn freeness_criteria_on_regular_rings() {
    let r = poly_ring(&["x", "y", "z"]);
    let m = ideal_op(&r, &["x", "y", "z"]);
    let free = Operand::new(GradedModule::free(&r, vec![0, 1]));
    for id in [
        "free-t2",
        "free-t3",
        "free-518",
        "free-laun",
        "free-sph1",
        "f-54",
        "f-dualpair",
    ] {
        for op in [&m, &free] {
            let rep = run(
                id,
                &CheckInput::new(op.clone()).with_n(op.clone()).with_r(1),
            );
            assert_ne!(rep.verdict, Verdict::Fails, "{id}");
        }
    }
}
