use std::collections::BTreeSet;

use lepage_core::cli::fixture;
use lepage_core::exterior::{coefficients, form, Form, Substitution};
use lepage_core::hamilton::hamilton_locus;
use lepage_core::pfaffian::PfaffianSystem;
use lepage_core::symcore::{random_rank, scalar, Chart, Role, Scalar, Var};
use proptest::prelude::*;

fn system(c: &Chart, gens: &[&str]) -> PfaffianSystem {
    let gs = gens.iter().map(|g| form(g, c).unwrap()).collect();
    PfaffianSystem::new(c.clone(), c.vars().collect(), gs).adapt_coframe().unwrap()
}

fn jet_chart(xs: &[&str], u: &str, ps: &[&str]) -> Chart {
    let mut c = Chart::new();
    for x in xs {
        c.add(x, Role::Independent, 0).unwrap();
    }
    c.add(u, Role::Field, 0).unwrap();
    for p in ps {
        c.add(p, Role::Jet, 0).unwrap();
    }
    c
}

fn names(c: &Chart, vs: &[Var]) -> Vec<String> {
    vs.iter().map(|&v| c.name(v).to_string()).collect()
}

#[test]
fn contact_on_first_jets_of_curves() {
    let c = jet_chart(&["t"], "q", &["v"]);
    let sys = system(&c, &["d(q) - v*d(t)"]);
    assert_eq!(names(&c, &sys.complement), vec!["v"]);
    assert!(sys.zero_forms.is_empty());
}

#[test]
fn contact_on_first_jets_of_three_variables() {
    let c = jet_chart(&["x", "y", "z"], "phi", &["p", "q", "r"]);
    let sys = system(&c, &["d(phi) - p*d(x) - q*d(y) - r*d(z)"]);
    assert_eq!(names(&c, &sys.complement), vec!["p", "q", "r"]);
    let se = sys.structure_equations().unwrap();
    // d(theta) = -dp/\dx - dq/\dy - dr/\dz
    for e in 0..3 {
        for i in 0..3 {
            let expected = if e == i { Scalar::from(-1) } else { Scalar::zero() };
            assert_eq!(se.tableau[0][e][i], expected);
        }
    }
    assert!(se.essential_torsion().is_empty());
    let ch = se.characters(1).unwrap();
    assert_eq!(ch.s, vec![1, 1, 1]);
    assert_eq!(ch.s0, 1);
    assert_eq!(se.prolongation_dim(1).unwrap(), 6);
    let report = sys.cartan_test(1).unwrap();
    assert!(report.involutive);
    assert_eq!(report.cartan_sum, 6);
    let (next, added) = sys.prolong().unwrap();
    assert_eq!(added.len(), 6);
    assert_eq!(next.generators.len(), 4);
}

#[test]
fn frobenius_system_is_trivially_involutive() {
    let c = jet_chart(&["x", "y"], "u", &[]);
    let sys = system(&c, &["d(u) - y*d(x) - x*d(y)"]);
    let report = sys.cartan_test(3).unwrap();
    assert!(report.torsion_essential.is_empty());
    assert_eq!(report.characters.s, vec![0, 0]);
    assert_eq!(report.prolongation_dim, 0);
    assert!(report.involutive);
}

#[test]
fn nonintegrable_plane_field_has_torsion() {
    let c = jet_chart(&["x", "y"], "u", &[]);
    let sys = system(&c, &["d(u) - y*d(x)"]);
    assert_eq!(sys.essential_torsion().unwrap(), vec![Scalar::one()]);
}

#[test]
fn coframe_inversion_examples() {
    let c = jet_chart(&["x"], "u", &["p"]);
    let v: Vec<Var> = c.vars().collect();
    let theta = form("d(u) - p*d(x)", &c).unwrap();
    let coframe = vec![theta.clone(), Form::dvar(v[0]), Form::dvar(v[2])];
    let coords = [v[1], v[0], v[2]];
    let du = coefficients(&Form::dvar(v[1]), &coframe, &coords, 1).unwrap();
    assert_eq!(du.get(&vec![0]), Some(&Scalar::one()));
    assert_eq!(du.get(&vec![1]), Some(&scalar("p", &c).unwrap()));
    let dt = coefficients(&theta.d(), &coframe, &coords, 1).unwrap();
    // -dp/\dx = dx/\dp
    assert_eq!(dt.len(), 1);
    assert_eq!(dt.get(&vec![1, 2]), Some(&Scalar::one()));
}

#[test]
fn zero_forms_and_restriction() {
    let c = jet_chart(&["x"], "u", &["p"]);
    let pure = system(&c, &["d(u) - p*d(x)"]);
    assert!(pure.extract_zero_forms().unwrap().is_empty());
    let (same, subst, assumed) = pure.restrict(&[], &pure.elimination_order()).unwrap();
    assert_eq!(same, pure);
    assert!(subst.is_identity() && assumed.is_empty());

    // d(u) - p d(x) and d(p) - d(x) on p = 1 leaves u free and p frozen
    let sys = system(&c, &["d(u) - p*d(x)", "d(p) - d(x)"]);
    assert!(sys.zero_forms.is_empty());
    let one = system(&c, &["d(u) - p*d(x)", "(p - 1)*d(x)"]);
    assert_eq!(one.zero_forms, vec![scalar("p - 1", &c).unwrap()]);
}

#[test]
fn case_two_a_restriction_freezes_q1() {
    let f = fixture("sundermeyer-2a").unwrap();
    let ls = f.document().unwrap().lepage_space().unwrap();
    let hl = hamilton_locus(&ls).unwrap();
    let sys = &hl.pfaffian;
    let c = &sys.chart;
    let q1 = c.var("q1").unwrap();
    let constraint = scalar("q2 - q1", c).unwrap();
    let (next, subst, _) = sys.restrict(&[constraint], &sys.elimination_order()).unwrap();
    assert_eq!(subst.bindings.get(&q1), Some(&scalar("q2", c).unwrap()));
    // the next zero-form relates the two velocities
    let v_diff = scalar("v1 - v2", c).unwrap();
    assert!(next.zero_forms.iter().any(|z| z.constraint_form() == v_diff.constraint_form()));
    assert_restriction_consistent(sys, &next, &subst);
}

/// Original generators pulled back lie in the span of the restricted ones, up
/// to independent-only remainders (which become zero-forms).
fn assert_restriction_consistent(before: &PfaffianSystem, after: &PfaffianSystem, s: &Substitution) {
    let xs = after.independence();
    for g in &before.generators {
        let mut r = g.pullback(s).unwrap();
        for (lead, gen) in after.leads.iter().zip(&after.generators) {
            let k = r.coefficient(&[*lead]);
            r = r.sub(&gen.scale(&k));
        }
        assert!(r.terms().keys().all(|k| k.iter().all(|v| xs.contains(v))));
        if after.zero_forms.is_empty() {
            assert!(r.is_zero(), "residual {}", r.display(&after.chart));
        }
    }
}

#[test]
fn integrability_fixture_torsion_is_one_grassmann_coordinate() {
    let ls = fixture("eds-integrability").unwrap().document().unwrap().lepage_space().unwrap();
    let hl = hamilton_locus(&ls).unwrap();
    let t = hl.pfaffian.essential_torsion().unwrap();
    let c = &hl.pfaffian.chart;
    assert_eq!(t.iter().map(|s| s.display(c)).collect::<Vec<_>>(), vec!["Z_u_z"]);
}

/// Rank of the constant coefficient rows of linear scalars over `vars`.
fn linear_rank(xs: &[Scalar], vars: &[Var]) -> usize {
    let rows: Vec<Vec<Scalar>> = xs.iter().map(|x| vars.iter().map(|&v| x.partial(v)).collect()).collect();
    random_rank(&rows, 9, 3).unwrap()
}

#[test]
fn essential_torsion_survives_a_complement_shift() {
    // shift every complement coordinate pi by 3*x_1 + 1: pi' = pi + 3 x_1 + 1
    let ls = fixture("eds-integrability").unwrap().document().unwrap().lepage_space().unwrap();
    let hl = hamilton_locus(&ls).unwrap();
    let sys = &hl.pfaffian;
    let x1 = sys.independence()[0];
    let mut chart = sys.chart.clone();
    let mut forward = Vec::new();
    let mut back = Vec::new();
    let mut active: BTreeSet<Var> = sys.active.clone();
    for &p in &sys.complement {
        let name = chart.fresh_name(&format!("{}_shift", chart.name(p)));
        let np = chart.add(&name, chart.role(p), chart.level(p)).unwrap();
        let shift = Scalar::from(3).mul(&Scalar::var(x1)).add(&Scalar::one());
        forward.push((p, Scalar::var(np).sub(&shift)));
        back.push((np, Scalar::var(p).add(&shift)));
        active.remove(&p);
        active.insert(np);
    }
    let fwd = Substitution::new(forward).unwrap();
    let bwd = Substitution::new(back).unwrap();
    let gens = sys.generators.iter().map(|g| g.pullback(&fwd).unwrap()).collect();
    let shifted = PfaffianSystem::new(chart.clone(), active, gens).adapt_coframe().unwrap();
    let t0 = sys.essential_torsion().unwrap();
    let t1: Vec<Scalar> = shifted.essential_torsion().unwrap().iter().map(|t| bwd.apply(t).unwrap()).collect();
    let vars: Vec<Var> = sys.chart.vars().collect();
    let r0 = linear_rank(&t0, &vars);
    assert_eq!(r0, linear_rank(&t1, &vars));
    let both: Vec<Scalar> = t0.iter().chain(&t1).cloned().collect();
    assert_eq!(linear_rank(&both, &vars), r0);
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 500, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    /// `d(u) - d(f)` for random polynomial `f(x, y)` is closed.
    #[test]
    fn exact_generators_are_frobenius(terms in prop::collection::vec((-3i64..=3, 0u32..=3, 0u32..=3), 1..5)) {
        let c = jet_chart(&["x", "y"], "u", &[]);
        let f: Vec<String> = terms.iter().map(|(k, a, b)| format!("({k})*x^{a}*y^{b}")).collect();
        let f = scalar(&f.join(" + "), &c).unwrap();
        let theta = Form::dvar(c.var("u").unwrap()).sub(&Form::scalar(f).d());
        let sys = PfaffianSystem::new(c.clone(), c.vars().collect(), vec![theta]).adapt_coframe().unwrap();
        let report = sys.cartan_test(1).unwrap();
        prop_assert!(report.torsion_essential.is_empty());
        prop_assert!(report.characters.s.iter().all(|&s| s == 0));
        prop_assert!(report.involutive);
    }
}
