use lepage_core::cli::{analyze, emit, Format, ProblemDocument, FIXTURES};
use lepage_core::exterior::{coefficients, Form};
use lepage_core::hamilton::{hamilton_locus, residual_check, HamiltonLocus};
use lepage_core::ladder::{run_system, run_system_observed, ConstraintLadder, LadderConfig, StepKind, Verdict};
use lepage_core::pfaffian::{PfaffianSystem, StructureEquations};
use lepage_core::symcore::Scalar;

fn config(doc: &ProblemDocument) -> LadderConfig {
    LadderConfig { seed: doc.seed, max_prolongations: doc.max_prolong, max_steps: doc.max_steps }
}

struct Run {
    name: &'static str,
    doc: ProblemDocument,
    locus: HamiltonLocus,
    ladder: ConstraintLadder,
    visited: Vec<(PfaffianSystem, StructureEquations)>,
}

fn run_all() -> Vec<Run> {
    FIXTURES
        .iter()
        .map(|f| {
            let doc = f.document().unwrap();
            let ls = doc.lepage_space().unwrap();
            let locus = hamilton_locus(&ls).unwrap();
            assert!(residual_check(&locus, &ls), "{}: locus leaves a residual", f.name);
            let mut visited = Vec::new();
            let ladder = run_system_observed(&locus.pfaffian, &config(&doc), &mut |s, se| visited.push((s.clone(), se.clone()))).unwrap();
            Run { name: f.name, doc, locus, ladder, visited }
        })
        .collect()
}

/// `d(theta^a)` minus its tableau and torsion parts, reduced modulo the generators.
fn reconstruction_residual(sys: &PfaffianSystem, se: &StructureEquations) -> Vec<Form> {
    let xs = &se.independent;
    let mut coframe = sys.generators.clone();
    coframe.extend(xs.iter().map(|&x| Form::dvar(x)));
    coframe.extend(se.complement.iter().map(|&p| Form::dvar(p)));
    let coords: Vec<_> = sys.leads.iter().chain(xs).chain(&se.complement).copied().collect();
    let ngen = sys.generators.len();
    let mut out = Vec::new();
    for (a, g) in sys.generators.iter().enumerate() {
        let mut model = Form::zero(2);
        for (e, &p) in se.complement.iter().enumerate() {
            for (i, &x) in xs.iter().enumerate() {
                model = model.add(&Form::dvar(p).wedge(&Form::dvar(x)).scale(&se.tableau[a][e][i]));
            }
        }
        for i in 0..xs.len() {
            for j in i + 1..xs.len() {
                model = model.add(&Form::dvar(xs[i]).wedge(&Form::dvar(xs[j])).scale(&se.torsion[a][i][j]));
            }
        }
        let diff = g.d().sub(&model);
        let c = coefficients(&diff, &coframe, &coords, 11).unwrap();
        let leftover = c.iter().filter(|(k, v)| k.iter().all(|&i| i >= ngen) && !v.is_zero());
        out.extend(leftover.map(|(k, v)| Form::from_terms(2, [(k.iter().map(|&i| coords[i]).collect(), v.clone())])));
    }
    out
}

#[test]
fn structure_equations_on_every_visited_system() {
    for r in run_all() {
        assert!(!r.visited.is_empty() || r.ladder.verdict == Verdict::Empty, "{}", r.name);
        for (sys, se) in &r.visited {
            let seed = r.doc.seed;
            let ch = se.characters(seed).unwrap();
            let dim = se.prolongation_dim(seed).unwrap();
            assert!(dim <= ch.weighted_sum(), "{}: dim {dim} > {}", r.name, ch.weighted_sum());
            assert_eq!(ch.s.iter().sum::<usize>(), se.complement.len(), "{}", r.name);
            assert!(ch.s.windows(2).all(|w| w[0] >= w[1]), "{}: characters {:?}", r.name, ch.s);
            if se.essential_torsion().is_empty() {
                let report = sys.cartan_test(seed).unwrap();
                assert_eq!(report.involutive, dim == ch.weighted_sum(), "{}", r.name);
                assert_eq!(report.cartan_sum, ch.weighted_sum());
            }
            // same inputs, same answers
            assert_eq!(&sys.structure_equations().unwrap(), se);
            assert_eq!(se.characters(seed).unwrap(), ch);
            let left = reconstruction_residual(sys, se);
            assert!(left.is_empty(), "{}: {}", r.name, left.iter().map(|f| f.display(&sys.chart)).collect::<Vec<_>>().join(", "));
        }
    }
}

#[test]
fn ladder_ends_where_it_claims() {
    for r in run_all() {
        assert_eq!(r.ladder.verdict.as_str(), FIXTURES.iter().find(|f| f.name == r.name).unwrap().expected_verdict);
        let last = r.ladder.steps.last().unwrap();
        match r.ladder.verdict {
            Verdict::Involutive => {
                assert_eq!(last.kind, StepKind::Involutive);
                let fin = r.ladder.final_system.as_ref().unwrap();
                assert!(fin.zero_forms.is_empty());
                assert!(fin.essential_torsion().unwrap().is_empty());
                // running again from the fixpoint changes nothing
                let again = run_system(fin, &config(&r.doc)).unwrap();
                assert_eq!(again.steps.len(), 1, "{}", r.name);
                assert_eq!(again.steps[0].kind, StepKind::Involutive);
                assert_eq!(again.steps[0].characters, last.characters);
                assert_eq!(again.final_system.as_ref(), Some(fin));
            }
            Verdict::Empty => assert_eq!(last.kind, StepKind::EmptyLocus),
            v => panic!("{}: unexpected verdict {v:?}", r.name),
        }
    }
}

#[test]
fn recorded_constraints_hold_under_the_composed_substitution() {
    for r in run_all().into_iter().filter(|r| r.ladder.verdict == Verdict::Involutive) {
        let total = r.ladder.steps.iter().try_fold(r.locus.solved.clone(), |acc, s| acc.then(&s.substitution)).unwrap();
        for step in &r.ladder.steps {
            for c in step.constraints() {
                assert!(total.apply(c).unwrap().is_zero(), "{}: {}", r.name, c.display(&r.ladder.chart));
            }
        }
        for c in &r.locus.base_constraints {
            assert!(total.apply(c).unwrap().is_zero());
        }
        // no bound coordinate survives in any image
        for img in total.bindings.values() {
            assert!(img.vars().iter().all(|v| !total.bindings.contains_key(v)), "{}", r.name);
        }
    }
}

#[test]
fn level_tags_match_the_step_structure() {
    for r in run_all() {
        let prolongations = r.ladder.steps.iter().filter(|s| s.kind == StepKind::Prolongation).count();
        assert_eq!(r.ladder.chart.max_level() as usize, prolongations + 1, "{}", r.name);
        for (k, s) in r.ladder.steps.iter().enumerate() {
            assert_eq!(s.level, k);
            if s.kind == StepKind::Prolongation {
                assert!(!s.added_coordinates.is_empty());
            } else {
                assert!(s.added_coordinates.is_empty());
            }
            let chart = &r.ladder.chart;
            assert!(s.new_base_constraints.iter().flat_map(Scalar::vars).all(|v| chart.level(v) == 0));
        }
    }
}

#[test]
fn characters_do_not_depend_on_the_seed() {
    for r in run_all() {
        let mut cfg = config(&r.doc);
        cfg.seed = cfg.seed.wrapping_mul(6364136223846793005).wrapping_add(17);
        let other = run_system(&r.locus.pfaffian, &cfg).unwrap();
        assert_eq!(other.verdict, r.ladder.verdict, "{}", r.name);
        assert_eq!(other.test_characters(), r.ladder.test_characters(), "{}", r.name);
    }
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for f in FIXTURES {
        let doc = f.document().unwrap();
        let a = analyze(&doc).unwrap();
        let b = analyze(&doc).unwrap();
        for fmt in [Format::Text, Format::Structured] {
            assert_eq!(emit(&a, fmt), emit(&b, fmt), "{}", f.name);
        }
    }
}
