use std::collections::BTreeMap;

use lepage_core::exterior::{assemble, coefficients, form, Form, MultiVector, Substitution, VectorField};
use lepage_core::symcore::{Chart, Role, Scalar, Var};
use proptest::prelude::*;

const N: usize = 4;

fn chart() -> (Chart, Vec<Var>) {
    let mut c = Chart::new();
    let vs = ["x", "y", "u", "v"].iter().enumerate().map(|(i, n)| c.add(n, if i < 2 { Role::Independent } else { Role::Field }, 0).unwrap()).collect();
    (c, vs)
}

/// Small polynomial from (coefficient, exponents) terms, optionally over `1 + x^2`.
fn scalar(vs: &[Var], terms: &[(i64, [u8; N])], rational: bool) -> Scalar {
    let mut s = Scalar::zero();
    for (c, e) in terms {
        let mut t = Scalar::from(*c);
        for (k, &p) in e.iter().enumerate() {
            t = t.mul(&Scalar::var(vs[k]).pow(p as i64).unwrap());
        }
        s = s.add(&t);
    }
    if rational {
        let den = Scalar::one().add(&Scalar::var(vs[0]).mul(&Scalar::var(vs[0])));
        s = s.div(&den).unwrap();
    }
    s
}

type RawForm = (usize, Vec<(u8, Vec<(i64, [u8; N])>)>, bool);

fn raw_form(max_degree: usize) -> impl Strategy<Value = RawForm> {
    let term = (-3i64..=3, prop::array::uniform4(0u8..=2));
    (0..=max_degree, prop::collection::vec((any::<u8>(), prop::collection::vec(term, 1..3)), 0..4), any::<bool>())
}

/// Index subset of the given size chosen by a mask seed.
fn subset(mask: u8, p: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..N).collect();
    let mut out = Vec::new();
    let mut m = mask as usize;
    for _ in 0..p {
        let i = m % all.len();
        m /= all.len().max(1);
        out.push(all.remove(i));
    }
    out.sort_unstable();
    out
}

fn build(vs: &[Var], raw: &RawForm) -> Form {
    let (p, terms, rational) = raw;
    let terms = terms.iter().map(|(mask, poly)| {
        let idx: Vec<Var> = subset(*mask, *p).into_iter().map(|i| vs[i]).collect();
        (idx, scalar(vs, poly, *rational))
    });
    Form::from_terms(*p, terms)
}

fn sign(k: usize) -> Scalar {
    if k % 2 == 0 {
        Scalar::one()
    } else {
        Scalar::from(-1)
    }
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 500, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn d_squared_vanishes(raw in raw_form(3)) {
        let (_, vs) = chart();
        let a = build(&vs, &raw);
        prop_assert!(a.d().d().is_zero());
    }

    #[test]
    fn wedge_is_graded_commutative(ra in raw_form(2), rb in raw_form(2)) {
        let (_, vs) = chart();
        let (a, b) = (build(&vs, &ra), build(&vs, &rb));
        let lhs = a.wedge(&b);
        let rhs = b.wedge(&a).scale(&sign(a.degree() * b.degree()));
        prop_assert_eq!(lhs.sub(&rhs).is_zero(), true);
    }

    #[test]
    fn d_is_an_antiderivation(ra in raw_form(2), rb in raw_form(1)) {
        let (_, vs) = chart();
        let (a, b) = (build(&vs, &ra), build(&vs, &rb));
        let lhs = a.wedge(&b).d();
        let rhs = a.d().wedge(&b).add(&a.wedge(&b.d()).scale(&sign(a.degree())));
        prop_assert!(lhs.sub(&rhs).is_zero());
    }

    #[test]
    fn pullback_commutes_with_d(raw in raw_form(2), image in prop::collection::vec((-3i64..=3, prop::array::uniform4(0u8..=2)), 1..3)) {
        let (_, vs) = chart();
        let a = build(&vs, &raw);
        // v := polynomial in x, y, u
        let image: Vec<(i64, [u8; N])> = image.into_iter().map(|(c, mut e)| { e[3] = 0; (c, e) }).collect();
        let s = Substitution::new([(vs[3], scalar(&vs, &image, false))]).unwrap();
        let lhs = a.pullback(&s).unwrap().d();
        let rhs = a.d().pullback(&s).unwrap();
        prop_assert!(lhs.sub(&rhs).is_zero());
    }

    #[test]
    fn coframe_coefficients_reassemble(raw in raw_form(3), shear in -3i64..=3) {
        let (_, vs) = chart();
        let a = build(&vs, &raw);
        // triangular coframe: dx, dy, du - shear*x*dx, dv - u*dy
        let coframe = vec![
            Form::dvar(vs[0]),
            Form::dvar(vs[1]),
            Form::dvar(vs[2]).sub(&Form::dvar(vs[0]).scale(&Scalar::from(shear).mul(&Scalar::var(vs[0])))),
            Form::dvar(vs[3]).sub(&Form::dvar(vs[1]).scale(&Scalar::var(vs[2]))),
        ];
        let c = coefficients(&a, &coframe, &vs, 7).unwrap();
        prop_assert_eq!(assemble(&c, &coframe, a.degree()), a);
    }

    #[test]
    fn contraction_is_an_antiderivation(ra in raw_form(2), rb in raw_form(2), comp in prop::array::uniform4(-2i64..=2)) {
        let (_, vs) = chart();
        let (a, b) = (build(&vs, &ra), build(&vs, &rb));
        let x: VectorField = vs.iter().zip(comp).filter(|(_, c)| *c != 0).map(|(v, c)| (*v, Scalar::from(c))).collect();
        let lhs = a.wedge(&b).contract_vector(&x);
        let rhs = a.contract_vector(&x).wedge(&b).add(&a.wedge(&b.contract_vector(&x)).scale(&sign(a.degree())));
        if a.degree() + b.degree() > 0 {
            prop_assert!(lhs.sub(&rhs).is_zero());
        }
    }
}

#[test]
fn integrability_generator_has_degree_three() {
    let (_, _) = chart();
    let mut c = Chart::new();
    for n in ["x", "y", "z"] {
        c.add(n, Role::Independent, 0).unwrap();
    }
    c.add("u", Role::Field, 0).unwrap();
    let t = form("d(u) /\\ d(y) /\\ (d(x) - y*d(z))", &c).unwrap();
    assert_eq!(t.degree(), 3);
    assert_eq!(t.terms().len(), 2);
    assert!(t.d().is_zero());
}

#[test]
fn multivector_contraction_pairs_with_volume() {
    let (c, vs) = chart();
    let vol = Form::basis(&vs[..2]);
    let unit = |v: Var| -> VectorField { BTreeMap::from([(v, Scalar::one())]) };
    let z = MultiVector::new(vec![unit(vs[0]), unit(vs[1])]);
    // first factor contracted first: dy(d/dy) after dx(d/dx)
    assert_eq!(vol.contract_multivector(&z).as_scalar(), Scalar::one());
    let z_rev = MultiVector::new(vec![unit(vs[1]), unit(vs[0])]);
    assert_eq!(vol.contract_multivector(&z_rev).as_scalar(), Scalar::from(-1));
    assert_eq!(form("d(x) /\\ d(x)", &c).unwrap().is_zero(), true);
}

#[test]
fn pullback_replaces_differentials() {
    let (c, vs) = chart();
    let s = Substitution::new([(vs[2], Scalar::var(vs[0]).mul(&Scalar::var(vs[1])))]).unwrap();
    let f = form("d(u) /\\ d(v)", &c).unwrap().pullback(&s).unwrap();
    let expected = form("y*d(x) /\\ d(v) + x*d(y) /\\ d(v)", &c).unwrap();
    assert_eq!(f, expected);
}
