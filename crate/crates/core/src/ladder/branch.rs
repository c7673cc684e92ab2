//! Sorting constraints into what the linear solver can take now and what
//! must wait, with the factor-branch policy for products.

use std::collections::BTreeMap;

use crate::symcore::linsolve::is_linear_in;
use crate::symcore::poly::{gcd, Monomial};
use crate::symcore::{Chart, Poly, Scalar, Var};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConstraintPlan {
    /// Affine-linear in the unknowns; ready for elimination.
    pub linear: Vec<Scalar>,
    /// Nonzero factors assumed by the branch policy.
    pub assumptions: Vec<Scalar>,
    /// Nonlinear and not resolvable by the policy on the current locus.
    pub blocked: Vec<Scalar>,
}

/// Splits `c` into (content, primitive part) with respect to the coordinates
/// of the highest level it mentions. `None` when the content is constant.
pub fn split_by_level(c: &Scalar, chart: &Chart) -> Option<(Scalar, Scalar)> {
    let num = c.numer();
    let top = num.vars().iter().map(|&v| chart.level(v)).max()?;
    let mut groups: BTreeMap<Vec<(Var, u32)>, Vec<(Monomial, crate::symcore::Rat)>> = BTreeMap::new();
    for (m, k) in num.terms() {
        let (hi, lo): (Vec<(Var, u32)>, Vec<(Var, u32)>) = m.0.iter().partition(|(v, _)| chart.level(*v) == top);
        groups.entry(hi).or_default().push((Monomial(lo), k.clone()));
    }
    if groups.len() < 2 && groups.keys().all(|k| k.is_empty()) {
        return None;
    }
    let mut content: Option<Poly> = None;
    for terms in groups.into_values() {
        let p = Poly::from_terms(terms);
        content = Some(match content {
            None => p.monic().0,
            Some(g) => gcd(&g, &p),
        });
        if content.as_ref().is_some_and(|g| g.is_constant()) {
            return None;
        }
    }
    let content = content?;
    let rest = num.div_exact(&content)?;
    Some((Scalar::from(content).constraint_form(), Scalar::from(rest).constraint_form()))
}

/// Applies the factor-branch policy: a product whose content is free of the
/// unknowns while the primitive part is linear keeps the primitive part and
/// assumes the content nonzero; anything more ambiguous is blocked.
pub fn plan(constraints: &[Scalar], unknowns: &[Var], chart: &Chart) -> ConstraintPlan {
    let mut out = ConstraintPlan::default();
    for c in constraints {
        if c.is_zero() {
            continue;
        }
        let c = c.constraint_form();
        if is_linear_in(&c, unknowns) {
            if !out.linear.contains(&c) {
                out.linear.push(c);
            }
            continue;
        }
        match split_by_level(&c, chart) {
            Some((content, rest)) => {
                let rest_ok = is_linear_in(&rest, unknowns);
                let content_ok = content.vars().iter().any(|v| unknowns.contains(v)) && is_linear_in(&content, unknowns);
                match (rest_ok, content_ok) {
                    (true, false) => {
                        out.linear.push(rest);
                        let a = content.assumption_form();
                        if !out.assumptions.contains(&a) {
                            out.assumptions.push(a);
                        }
                    }
                    (false, true) => {
                        out.linear.push(content);
                        let a = rest.assumption_form();
                        if !out.assumptions.contains(&a) {
                            out.assumptions.push(a);
                        }
                    }
                    _ => out.blocked.push(c),
                }
            }
            None => out.blocked.push(c),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::{scalar, Role};

    #[test]
    fn product_split_by_level() {
        let mut c = Chart::new();
        c.add("x", Role::Independent, 0).unwrap();
        c.add("y1", Role::Field, 0).unwrap();
        c.add("y2", Role::Field, 0).unwrap();
        c.add("Y1", Role::Fiber, 1).unwrap();
        c.add("Y2", Role::Fiber, 1).unwrap();
        let e = scalar("(y1 - y2)*(Y1 - Y2)", &c).unwrap();
        let (a, b) = split_by_level(&e, &c).unwrap();
        assert_eq!(a.display(&c), "y1 - y2");
        assert_eq!(b.display(&c), "Y1 - Y2");
        let u: Vec<Var> = ["Y1", "Y2", "y1", "y2"].iter().map(|n| c.var(n).unwrap()).collect();
        assert_eq!(plan(&[e], &u, &c).blocked.len(), 1);
        let p = plan(&[scalar("(y1 - y2)*(Y1^2 - Y2)", &c).unwrap()], &u, &c);
        assert_eq!(p.linear[0].display(&c), "y1 - y2");
        assert_eq!(p.assumptions[0].display(&c), "Y1^2 - Y2");
    }
}
