//! Lepage-equivalent spaces, their Hamilton equations on the Grassmann
//! bundle and the Hamilton submanifold with its contact Pfaffian.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{eta, volume_form, Form, MultiVector, Substitution, VectorField};
use crate::ladder::branch;
use crate::pfaffian::PfaffianSystem;
use crate::symcore::linsolve::solve_linear;
use crate::symcore::{Chart, Role, Scalar, Var};

/// First-order jet data for one field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetField {
    pub field: Var,
    /// Jet coordinates in independent-coordinate order.
    pub jets: Vec<Var>,
    /// Multiplier names, one per independent coordinate; `p_<field>_<x>` if absent.
    pub momenta: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariationalProblem {
    pub chart: Chart,
    pub lagrangian: Form,
    pub generators: Vec<Form>,
    pub volume: Form,
    pub jets: Vec<JetField>,
}

impl VariationalProblem {
    pub fn new(chart: Chart, lagrangian: Form, generators: Vec<Form>) -> Self {
        let volume = volume_form(&chart);
        VariationalProblem { chart, lagrangian, generators, volume, jets: Vec::new() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Classical,
    Griffiths,
    Explicit,
}

/// Multipliers for one generator: coordinate name and basis form pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplierShape {
    pub generator: usize,
    pub basis: Vec<(String, Form)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LepageSpace {
    pub chart: Chart,
    pub theta: Form,
    pub omega: Form,
    pub provenance: Provenance,
    /// Admissibility and degeneracy notes gathered while building.
    pub diagnostics: Vec<String>,
}

impl LepageSpace {
    pub fn explicit(chart: Chart, theta: Form) -> Self {
        let omega = theta.d();
        let mut diagnostics = Vec::new();
        if omega.is_zero() {
            diagnostics.push(vacuous_note());
        }
        LepageSpace { chart, theta, omega, provenance: Provenance::Explicit, diagnostics }
    }
}

fn vacuous_note() -> String {
    "vacuous Lepage space: d(Theta) = 0, so every transverse plane solves the Hamilton equations and the original equations are lost".to_string()
}

/// `Theta = p_A^k du^A /\ eta_k + (L - p_A^l u^A_l) eta`.
pub fn build_lepage_classical(vp: &VariationalProblem) -> Result<LepageSpace> {
    if vp.jets.is_empty() {
        return Err(Error::MissingJetStructure("no field declares jet coordinates".into()));
    }
    let xs = vp.chart.independent();
    let m = xs.len();
    if vp.lagrangian.degree() != m {
        return Err(Error::DegreeMismatch(format!("the Lagrangian must be a {m}-form")));
    }
    let lag = vp.lagrangian.coefficient(&xs);
    if vp.lagrangian.terms().len() > 1 || (!vp.lagrangian.is_zero() && lag.is_zero()) {
        return Err(Error::MissingJetStructure("the Lagrangian must be a multiple of the volume form".into()));
    }
    let mut chart = vp.chart.clone();
    let mut theta = Form::zero(m);
    let mut hamiltonian = lag;
    for jf in &vp.jets {
        if jf.jets.len() != m {
            return Err(Error::MissingJetStructure(format!("{} needs {m} jet coordinates", chart.name(jf.field))));
        }
        for (k, &x) in xs.iter().enumerate() {
            let name = match &jf.momenta {
                Some(ns) => ns.get(k).cloned().ok_or_else(|| Error::MissingJetStructure("too few multiplier names".into()))?,
                None => format!("p_{}_{}", chart.name(jf.field), chart.name(x)),
            };
            let p = chart.add(&name, Role::Multiplier, 0)?;
            theta = theta.add(&Form::dvar(jf.field).wedge(&eta(&chart, &[x])).scale(&Scalar::var(p)));
            hamiltonian = hamiltonian.sub(&Scalar::var(p).mul(&Scalar::var(jf.jets[k])));
        }
    }
    theta = theta.add(&volume_form(&chart).scale(&hamiltonian));
    let omega = theta.d();
    Ok(LepageSpace { chart, theta, omega, provenance: Provenance::Classical, diagnostics: Vec::new() })
}

/// All horizontal `k`-forms `dx^I` with their default multiplier names.
pub fn horizontal_basis(chart: &Chart, k: usize, prefix: &str) -> Vec<(String, Form)> {
    let xs = chart.independent();
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > xs.len() {
        return out;
    }
    loop {
        let vars: Vec<Var> = idx.iter().map(|&i| xs[i]).collect();
        let suffix: Vec<&str> = vars.iter().map(|&v| chart.name(v)).collect();
        let name = if k == 0 { prefix.to_string() } else { format!("{prefix}_{}", suffix.join("")) };
        out.push((name, Form::basis(&vars)));
        // next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < xs.len() - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// `Theta = lambda + sum_s mu_s /\ beta_s` with multiplier coefficients as new
/// coordinates. Generators whose vertical degree exceeds `vertical_order`
/// are left out and reported.
pub fn build_lepage_griffiths(vp: &VariationalProblem, shapes: &[MultiplierShape], vertical_order: usize) -> Result<LepageSpace> {
    let m = vp.chart.independent().len();
    if vp.lagrangian.degree() != m && !vp.lagrangian.is_zero() {
        return Err(Error::DegreeMismatch(format!("the Lagrangian must be a {m}-form")));
    }
    let mut chart = vp.chart.clone();
    let xs = chart.independent();
    let mut theta = if vp.lagrangian.is_zero() { Form::zero(m) } else { vp.lagrangian.clone() };
    let mut diagnostics = Vec::new();
    for (s, beta) in vp.generators.iter().enumerate() {
        if beta.degree() > m {
            return Err(Error::DegreeMismatch(format!("generator {} has degree {} > {m}", s + 1, beta.degree())));
        }
        let vdeg = beta.vertical_degree(&xs);
        if vdeg > vertical_order {
            diagnostics.push(format!(
                "generator {} ({}) has vertical degree {vdeg} > {vertical_order} and is not admissible; it contributes no multipliers",
                s + 1,
                beta.display(&chart)
            ));
            continue;
        }
        let basis = match shapes.iter().find(|sh| sh.generator == s) {
            Some(sh) => sh.basis.clone(),
            None => horizontal_basis(&chart, m - beta.degree(), &format!("mu{}", s + 1)),
        };
        for (name, b) in basis {
            if b.degree() + beta.degree() != m {
                return Err(Error::DegreeMismatch(format!(
                    "multiplier {name} has degree {} but generator {} needs {}",
                    b.degree(),
                    s + 1,
                    m - beta.degree()
                )));
            }
            let v = chart.add(&name, Role::Multiplier, 0)?;
            theta = theta.add(&b.wedge(beta).scale(&Scalar::var(v)));
        }
    }
    let omega = theta.d();
    if omega.is_zero() {
        diagnostics.push(vacuous_note());
    }
    Ok(LepageSpace { chart, theta, omega, provenance: Provenance::Griffiths, diagnostics })
}

/// Name of the Grassmann coordinate for `dependent` along `independent`.
pub fn grassmann_name(chart: &Chart, dependent: Var, independent: Var) -> String {
    format!("Z_{}_{}", chart.name(dependent), chart.name(independent))
}

/// Adds one level-1 coordinate per (dependent, independent) pair.
pub fn grassmann_extend(ls: &LepageSpace) -> Result<Chart> {
    let mut chart = ls.chart.clone();
    let xs = ls.chart.independent();
    for a in ls.chart.dependent() {
        for &x in &xs {
            let name = grassmann_name(&ls.chart, a, x);
            chart.add(&name, Role::Fiber, ls.chart.level(a) + 1)?;
        }
    }
    Ok(chart)
}

fn grassmann_var(gchart: &Chart, base: &Chart, a: Var, x: Var) -> Var {
    gchart.var(&grassmann_name(base, a, x)).expect("grassmann coordinate")
}

/// `Z_1 /\ ... /\ Z_m` with `Z_i = d_i + Z^A_i d_A`.
pub fn grassmann_multivector(ls: &LepageSpace, gchart: &Chart) -> MultiVector {
    let deps = ls.chart.dependent();
    MultiVector::new(
        ls.chart
            .independent()
            .into_iter()
            .map(|x| {
                let mut f = VectorField::new();
                f.insert(x, Scalar::one());
                for &a in &deps {
                    f.insert(a, Scalar::var(grassmann_var(gchart, &ls.chart, a, x)));
                }
                f
            })
            .collect(),
    )
}

/// Coefficients of `Z _| Omega`: the `du^A` coefficients in chart order,
/// then the `dx^i` ones. The latter equal `-Z^A_i` times the former summed
/// over `A`, so they never add information.
pub fn hamilton_equations(ls: &LepageSpace, gchart: &Chart) -> Vec<Scalar> {
    if ls.omega.is_zero() {
        return Vec::new();
    }
    let one = ls.omega.contract_multivector(&grassmann_multivector(ls, gchart));
    let mut out = Vec::new();
    let order = ls.chart.dependent().into_iter().chain(ls.chart.independent());
    for v in order {
        let c = one.coefficient(&[v]);
        if !c.is_zero() {
            out.push(c);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HamiltonLocus {
    pub grassmann_chart: Chart,
    pub solved: Substitution,
    pub base_constraints: Vec<Scalar>,
    pub fiber_constraints: Vec<Scalar>,
    /// Nonconstant pivots and branch factors assumed nonzero.
    pub assumptions: Vec<Scalar>,
    pub pfaffian: PfaffianSystem,
}

/// Unknown order for the Hamilton equations: Grassmann coordinates, then
/// multipliers, jets and fields.
pub fn locus_order(ls: &LepageSpace, gchart: &Chart) -> Vec<Var> {
    let mut out: Vec<Var> = gchart.vars().filter(|&v| gchart.level(v) >= 1).collect();
    for role in [Role::Multiplier, Role::Jet, Role::Field] {
        out.extend(ls.chart.vars().filter(|&v| ls.chart.role(v) == role));
    }
    out
}

pub fn solve_hamilton_locus(ls: &LepageSpace, gchart: &Chart, eqs: &[Scalar]) -> Result<HamiltonLocus> {
    let order = locus_order(ls, gchart);
    let mut subst = Substitution::identity();
    let mut assumptions: Vec<Scalar> = Vec::new();
    let mut pending: Vec<Scalar> = eqs.iter().filter(|e| !e.is_zero()).map(|e| e.constraint_form()).collect();
    loop {
        let unknowns: Vec<Var> = order.iter().copied().filter(|v| !subst.bindings.contains_key(v)).collect();
        let plan = branch::plan(&pending, &unknowns, gchart);
        if plan.linear.is_empty() {
            pending = plan.blocked;
            break;
        }
        let sol = solve_linear(&plan.linear, &unknowns)?;
        if let Some(r) = sol.residual.first() {
            return Err(Error::EmptyLocus(format!("{} = 0", r.constraint_form().display(gchart))));
        }
        for a in sol.assumptions.into_iter().chain(plan.assumptions) {
            if !assumptions.contains(&a) {
                assumptions.push(a);
            }
        }
        subst = subst.then(&Substitution::new(sol.solved)?)?;
        let mut next = Vec::new();
        for e in plan.blocked {
            let s = subst.apply(&e)?;
            if !s.is_zero() {
                next.push(s.constraint_form());
            }
        }
        pending = next;
    }
    let mut base_constraints = Vec::new();
    let mut fiber_constraints = Vec::new();
    for (v, s) in &subst.bindings {
        let c = Scalar::var(*v).sub(s).constraint_form();
        if gchart.level(*v) == 0 && s.vars().iter().all(|&w| gchart.level(w) == 0) {
            base_constraints.push(c);
        } else {
            fiber_constraints.push(c);
        }
    }
    let mut generators = Vec::new();
    let xs = ls.chart.independent();
    for a in ls.chart.dependent() {
        let mut g = Form::dvar(a);
        for &x in &xs {
            g = g.sub(&Form::dvar(x).scale(&Scalar::var(grassmann_var(gchart, &ls.chart, a, x))));
        }
        generators.push(g.pullback(&subst)?);
    }
    let active: BTreeSet<Var> = gchart.vars().filter(|v| !subst.bindings.contains_key(v)).collect();
    let mut sys = PfaffianSystem::new(gchart.clone(), active, generators);
    sys.zero_forms = pending;
    sys.assumptions = assumptions.clone();
    let pfaffian = sys.adapt_coframe()?;
    Ok(HamiltonLocus { grassmann_chart: gchart.clone(), solved: subst, base_constraints, fiber_constraints, assumptions, pfaffian })
}

/// Whether every coefficient of `Z _| Omega` vanishes under the locus substitution.
pub fn residual_check(hl: &HamiltonLocus, ls: &LepageSpace) -> bool {
    hamilton_equations(ls, &hl.grassmann_chart)
        .iter()
        .all(|e| hl.solved.apply(e).map(|s| s.is_zero()).unwrap_or(false))
}

/// Lepage space, Grassmann chart, equations and locus in one call.
pub fn hamilton_locus(ls: &LepageSpace) -> Result<HamiltonLocus> {
    let gchart = grassmann_extend(ls)?;
    let eqs = hamilton_equations(ls, &gchart);
    solve_hamilton_locus(ls, &gchart, &eqs)
}
