use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::exterior::{Form, Substitution};
use crate::symcore::linsolve::{is_linear_in, solve_linear};
use crate::symcore::{Chart, Role, Scalar, Var};

/// Linear Pfaffian system with independence condition `dx^1 /\ ... /\ dx^m`.
///
/// Generators are kept in reduced echelon form: generator `a` has
/// coefficient 1 on `d(leads[a])` and no other generator mentions that
/// differential. The complement coframe is the differentials of the active
/// dependent coordinates that are not leads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PfaffianSystem {
    pub chart: Chart,
    /// Coordinates the system lives on.
    pub active: BTreeSet<Var>,
    pub generators: Vec<Form>,
    pub leads: Vec<Var>,
    pub zero_forms: Vec<Scalar>,
    pub complement: Vec<Var>,
    /// Nonconstant pivots assumed nonzero so far.
    pub assumptions: Vec<Scalar>,
}

pub(crate) fn push_unique(list: &mut Vec<Scalar>, s: Scalar) {
    if !s.is_zero() && !list.contains(&s) {
        list.push(s);
    }
}

impl PfaffianSystem {
    /// An unadapted system; call [`PfaffianSystem::adapt_coframe`] before use.
    pub fn new(chart: Chart, active: BTreeSet<Var>, generators: Vec<Form>) -> Self {
        PfaffianSystem {
            chart,
            active,
            generators,
            leads: Vec::new(),
            zero_forms: Vec::new(),
            complement: Vec::new(),
            assumptions: Vec::new(),
        }
    }

    pub fn independence(&self) -> Vec<Var> {
        self.chart.independent()
    }

    pub fn active_dependent(&self) -> Vec<Var> {
        self.active.iter().copied().filter(|&v| self.chart.role(v) != Role::Independent).collect()
    }

    /// Echelonizes the generators, demotes generators without a differential
    /// part to zero-forms and fills the complement with the remaining
    /// dependent differentials.
    pub fn adapt_coframe(&self) -> Result<PfaffianSystem> {
        let mut order = self.active_dependent();
        order.sort_by_key(|&v| (self.chart.level(v), v));
        let mut rows: Vec<BTreeMap<Var, Scalar>> = Vec::new();
        for g in &self.generators {
            if g.degree() != 1 {
                return Err(Error::DegreeMismatch(format!("generator of degree {}", g.degree())));
            }
            let row: BTreeMap<Var, Scalar> = g.terms().iter().map(|(k, c)| (k[0], c.clone())).collect();
            for v in row.keys() {
                if !self.active.contains(v) {
                    return Err(Error::UnknownName(format!("{} is not on the locus", self.chart.name(*v))));
                }
            }
            if !row.is_empty() {
                rows.push(row);
            }
        }
        let mut assumptions = self.assumptions.clone();
        let mut used = vec![false; rows.len()];
        let mut leads: Vec<(Var, usize)> = Vec::new();
        for &col in &order {
            let mut best: Option<(usize, (bool, usize))> = None;
            for (i, r) in rows.iter().enumerate() {
                if used[i] {
                    continue;
                }
                if let Some(c) = r.get(&col) {
                    let key = (!c.is_constant(), r.len());
                    if best.as_ref().map_or(true, |b| key < b.1) {
                        best = Some((i, key));
                    }
                }
            }
            let Some((p, _)) = best else { continue };
            used[p] = true;
            let c = rows[p][&col].clone();
            if !c.is_constant() {
                push_unique(&mut assumptions, c.assumption_form());
            }
            if !c.is_one() {
                let inv = c.recip()?;
                for v in rows[p].values_mut() {
                    *v = v.mul(&inv);
                }
            }
            let prow = rows[p].clone();
            for (i, r) in rows.iter_mut().enumerate() {
                if i == p {
                    continue;
                }
                if let Some(f) = r.get(&col).cloned() {
                    for (k, v) in &prow {
                        let nv = r.remove(k).unwrap_or_default().sub(&f.mul(v));
                        if !nv.is_zero() {
                            r.insert(*k, nv);
                        }
                    }
                }
            }
            leads.push((col, p));
        }
        let mut zero_forms = self.zero_forms.clone();
        for (i, r) in rows.iter().enumerate() {
            if !used[i] {
                for c in r.values() {
                    push_unique(&mut zero_forms, c.constraint_form());
                }
            }
        }
        leads.sort_by_key(|&(v, _)| v);
        let lead_set: BTreeSet<Var> = leads.iter().map(|&(v, _)| v).collect();
        let generators = leads
            .iter()
            .map(|&(_, p)| Form::from_terms(1, rows[p].iter().map(|(k, c)| (vec![*k], c.clone()))))
            .collect();
        let complement = self.active_dependent().into_iter().filter(|v| !lead_set.contains(v)).collect();
        Ok(PfaffianSystem {
            chart: self.chart.clone(),
            active: self.active.clone(),
            generators,
            leads: leads.iter().map(|&(v, _)| v).collect(),
            zero_forms,
            complement,
            assumptions,
        })
    }

    /// Zero-forms carried by the system, including degenerate generators.
    pub fn extract_zero_forms(&self) -> Result<Vec<Scalar>> {
        Ok(self.adapt_coframe()?.zero_forms)
    }

    /// Default elimination order: highest prolongation level first, then
    /// multipliers, jets and fields, each in chart order.
    pub fn elimination_order(&self) -> Vec<Var> {
        let rank = |r: Role| match r {
            Role::Fiber => 0,
            Role::Multiplier => 1,
            Role::Jet => 2,
            Role::Field => 3,
            Role::Independent => 4,
        };
        let mut v = self.active_dependent();
        v.sort_by_key(|&x| (std::cmp::Reverse(self.chart.level(x)), rank(self.chart.role(x)), x));
        v
    }

    /// Restricts to the locus `constraints = 0`, solved over `elimination_order`.
    pub fn restrict(&self, constraints: &[Scalar], elimination_order: &[Var]) -> Result<(PfaffianSystem, Substitution, Vec<Scalar>)> {
        let unknowns: Vec<Var> = elimination_order.iter().copied().filter(|v| self.active.contains(v)).collect();
        for c in constraints {
            if !is_linear_in(c, &unknowns) {
                return Err(Error::NonLinearInUnknowns(c.display(&self.chart)));
            }
        }
        let sol = solve_linear(constraints, &unknowns)?;
        if let Some(r) = sol.residual.first() {
            return Err(Error::EmptyLocus(format!("{} = 0", r.constraint_form().display(&self.chart))));
        }
        let subst = Substitution::new(sol.solved.iter().cloned())?;
        let mut generators = Vec::with_capacity(self.generators.len());
        for g in &self.generators {
            let p = g.pullback(&subst)?;
            if !p.is_zero() {
                generators.push(p);
            }
        }
        let mut zero_forms = Vec::new();
        for z in &self.zero_forms {
            let s = subst.apply(z)?;
            if !s.is_zero() {
                push_unique(&mut zero_forms, s.constraint_form());
            }
        }
        let mut assumptions = Vec::new();
        for a in &self.assumptions {
            let s = subst.apply(a)?;
            if s.is_zero() {
                return Err(Error::EmptyLocus(format!("assumption {} != 0 is violated", a.display(&self.chart))));
            }
            push_unique(&mut assumptions, s.assumption_form());
        }
        for a in &sol.assumptions {
            push_unique(&mut assumptions, a.clone());
        }
        let mut active = self.active.clone();
        for v in subst.bindings.keys() {
            active.remove(v);
        }
        let sys = PfaffianSystem {
            chart: self.chart.clone(),
            active,
            generators,
            leads: Vec::new(),
            zero_forms,
            complement: Vec::new(),
            assumptions,
        };
        Ok((sys.adapt_coframe()?, subst, sol.assumptions))
    }

    pub fn display_generators(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.display(&self.chart)).collect()
    }
}
