//! The constraint algorithm: zero-form restriction, torsion restriction,
//! Cartan test and prolongation, recorded step by step.

pub mod branch;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::Substitution;
use crate::hamilton::HamiltonLocus;
use crate::pfaffian::{CharacterVector, PfaffianSystem, StructureEquations};
use crate::symcore::{Chart, Scalar, Var};

pub const DEFAULT_MAX_PROLONGATIONS: usize = 4;
pub const DEFAULT_MAX_STEPS: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    ZeroForms,
    Torsion,
    Prolongation,
    Involutive,
    EmptyLocus,
}

impl StepKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StepKind::ZeroForms => "zero_forms",
            StepKind::Torsion => "torsion",
            StepKind::Prolongation => "prolongation",
            StepKind::Involutive => "involutive",
            StepKind::EmptyLocus => "empty_locus",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Involutive,
    Empty,
    BudgetExceeded,
    NeedsUserBranch,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Involutive => "involutive",
            Verdict::Empty => "empty",
            Verdict::BudgetExceeded => "budget_exceeded",
            Verdict::NeedsUserBranch => "needs_user_branch",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstraintClass {
    Base,
    Fiber(u32),
}

/// Base iff every referenced coordinate has level 0.
pub fn classify_constraint(c: &Scalar, chart: &Chart) -> ConstraintClass {
    match c.vars().iter().map(|&v| chart.level(v)).max() {
        None | Some(0) => ConstraintClass::Base,
        Some(l) => ConstraintClass::Fiber(l),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LadderStep {
    pub level: usize,
    pub kind: StepKind,
    pub new_base_constraints: Vec<Scalar>,
    pub new_fiber_constraints: Vec<Scalar>,
    pub characters: Option<CharacterVector>,
    pub assumptions: Vec<Scalar>,
    pub added_coordinates: Vec<String>,
    pub substitution: Substitution,
    /// Essential torsion before restriction (torsion steps only).
    pub torsion: Vec<Scalar>,
    /// Why the step is terminal (empty locus, blocked constraint).
    pub note: Option<String>,
}

impl LadderStep {
    fn new(level: usize, kind: StepKind) -> Self {
        LadderStep {
            level,
            kind,
            new_base_constraints: Vec::new(),
            new_fiber_constraints: Vec::new(),
            characters: None,
            assumptions: Vec::new(),
            added_coordinates: Vec::new(),
            substitution: Substitution::identity(),
            torsion: Vec::new(),
            note: None,
        }
    }

    pub fn constraints(&self) -> impl Iterator<Item = &Scalar> {
        self.new_base_constraints.iter().chain(&self.new_fiber_constraints)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintLadder {
    pub steps: Vec<LadderStep>,
    pub final_system: Option<PfaffianSystem>,
    pub verdict: Verdict,
    /// Chart of the last system reached; every step's scalars live on it.
    pub chart: Chart,
    /// Substitution applied before the first step (the Hamilton locus).
    pub initial_substitution: Substitution,
    pub message: Option<String>,
}

impl ConstraintLadder {
    /// Composition of the initial substitution and every step substitution.
    pub fn total_substitution(&self) -> Result<Substitution> {
        self.steps.iter().try_fold(self.initial_substitution.clone(), |acc, s| acc.then(&s.substitution))
    }

    /// Characters reported by Cartan tests: prolongation and involutive steps.
    pub fn test_characters(&self) -> Vec<Vec<usize>> {
        self.steps
            .iter()
            .filter(|s| matches!(s.kind, StepKind::Prolongation | StepKind::Involutive))
            .filter_map(|s| s.characters.as_ref().map(|c| c.s.clone()))
            .collect()
    }

    pub fn all_assumptions(&self) -> Vec<Scalar> {
        let mut out: Vec<Scalar> = Vec::new();
        for s in &self.steps {
            for a in &s.assumptions {
                if !out.contains(a) {
                    out.push(a.clone());
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LadderConfig {
    pub seed: u64,
    pub max_prolongations: usize,
    pub max_steps: usize,
}

impl Default for LadderConfig {
    fn default() -> Self {
        LadderConfig { seed: 1, max_prolongations: DEFAULT_MAX_PROLONGATIONS, max_steps: DEFAULT_MAX_STEPS }
    }
}

/// Runs the algorithm from a Hamilton locus.
pub fn run(hl: &HamiltonLocus, seed: u64, max_prolongations: usize, max_steps: usize) -> Result<ConstraintLadder> {
    let cfg = LadderConfig { seed, max_prolongations, max_steps };
    let mut l = run_system(&hl.pfaffian, &cfg)?;
    l.initial_substitution = hl.solved.clone();
    if let Some(first) = l.steps.first_mut() {
        for a in &hl.assumptions {
            if !first.assumptions.contains(a) && !hl.pfaffian.assumptions.contains(a) {
                first.assumptions.push(a.clone());
            }
        }
    }
    Ok(l)
}

enum Restricted {
    Done(PfaffianSystem),
    Stop(Verdict),
}

fn restrict_step(sys: &PfaffianSystem, constraints: &[Scalar], mut step: LadderStep, steps: &mut Vec<LadderStep>) -> Result<Restricted> {
    let order = sys.elimination_order();
    let plan = branch::plan(constraints, &order, &sys.chart);
    if plan.linear.is_empty() {
        step.note = Some(format!(
            "no linear constraint to eliminate; blocked: {}",
            plan.blocked.iter().map(|c| c.display(&sys.chart)).collect::<Vec<_>>().join(", ")
        ));
        step.new_fiber_constraints = plan.blocked;
        steps.push(step);
        return Ok(Restricted::Stop(Verdict::NeedsUserBranch));
    }
    match sys.restrict(&plan.linear, &order) {
        Ok((next, subst, pivots)) => {
            for (v, s) in &subst.bindings {
                let c = Scalar::var(*v).sub(s).constraint_form();
                match classify_constraint(&c, &sys.chart) {
                    ConstraintClass::Base => step.new_base_constraints.push(c),
                    ConstraintClass::Fiber(_) => step.new_fiber_constraints.push(c),
                }
            }
            for a in pivots.into_iter().chain(plan.assumptions) {
                if !step.assumptions.contains(&a) && !sys.assumptions.contains(&a) {
                    step.assumptions.push(a);
                }
            }
            let mut next = next;
            for a in &step.assumptions {
                if !next.assumptions.contains(a) {
                    next.assumptions.push(a.clone());
                }
            }
            step.substitution = subst;
            steps.push(step);
            Ok(Restricted::Done(next))
        }
        Err(Error::EmptyLocus(msg)) => {
            step.kind = StepKind::EmptyLocus;
            step.new_fiber_constraints = plan.linear;
            step.note = Some(format!("there are no integral manifolds: {msg}"));
            steps.push(step);
            Ok(Restricted::Stop(Verdict::Empty))
        }
        Err(e) => Err(e),
    }
}

/// Runs the algorithm on an adapted Pfaffian system.
pub fn run_system(initial: &PfaffianSystem, cfg: &LadderConfig) -> Result<ConstraintLadder> {
    run_system_observed(initial, cfg, &mut |_, _| {})
}

/// As [`run_system`], calling `observe` on every system whose structure
/// equations are computed.
pub fn run_system_observed(
    initial: &PfaffianSystem,
    cfg: &LadderConfig,
    observe: &mut dyn FnMut(&PfaffianSystem, &StructureEquations),
) -> Result<ConstraintLadder> {
    let mut sys = initial.clone();
    let mut steps: Vec<LadderStep> = Vec::new();
    let mut prolongations = 0;
    let finish = |steps: Vec<LadderStep>, sys: &PfaffianSystem, verdict: Verdict, message: Option<String>| ConstraintLadder {
        steps,
        final_system: if verdict == Verdict::Involutive { Some(sys.clone()) } else { None },
        verdict,
        chart: sys.chart.clone(),
        initial_substitution: Substitution::identity(),
        message,
    };
    loop {
        if steps.len() >= cfg.max_steps {
            return Ok(finish(steps, &sys, Verdict::BudgetExceeded, Some(format!("step budget {} exhausted", cfg.max_steps))));
        }
        let level = steps.len();
        if !sys.zero_forms.is_empty() {
            let zf = sys.zero_forms.clone();
            match restrict_step(&sys, &zf, LadderStep::new(level, StepKind::ZeroForms), &mut steps)? {
                Restricted::Done(next) => sys = next,
                Restricted::Stop(v) => return Ok(finish(steps, &sys, v, None)),
            }
            continue;
        }
        let se = sys.structure_equations()?;
        observe(&sys, &se);
        let torsion = se.essential_torsion();
        if !torsion.is_empty() {
            let mut step = LadderStep::new(level, StepKind::Torsion);
            step.characters = Some(se.characters(cfg.seed)?);
            step.torsion = torsion.clone();
            match restrict_step(&sys, &torsion, step, &mut steps)? {
                Restricted::Done(next) => sys = next,
                Restricted::Stop(v) => return Ok(finish(steps, &sys, v, None)),
            }
            continue;
        }
        let characters = se.characters(cfg.seed)?;
        let dim = se.prolongation_dim(cfg.seed)?;
        let mut step = LadderStep::new(level, StepKind::Involutive);
        step.characters = Some(characters.clone());
        if dim == characters.weighted_sum() {
            steps.push(step);
            return Ok(finish(steps, &sys, Verdict::Involutive, None));
        }
        if prolongations >= cfg.max_prolongations {
            return Ok(finish(
                steps,
                &sys,
                Verdict::BudgetExceeded,
                Some(format!("prolongation budget {} exhausted", cfg.max_prolongations)),
            ));
        }
        let (next, added) = sys.prolong()?;
        step.kind = StepKind::Prolongation;
        step.added_coordinates = added;
        steps.push(step);
        prolongations += 1;
        sys = next;
    }
}

/// Coordinates referenced by any recorded constraint.
pub fn constrained_coordinates(l: &ConstraintLadder) -> Vec<Var> {
    let mut out: Vec<Var> = l.steps.iter().flat_map(|s| s.constraints().flat_map(|c| c.vars())).collect();
    out.sort_unstable();
    out.dedup();
    out
}
