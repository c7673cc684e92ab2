//! Running a document through the Hamilton locus and the constraint ladder,
//! and rendering the result.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::problem::ProblemDocument;
use crate::hamilton::{grassmann_extend, hamilton_equations, residual_check, solve_hamilton_locus};
use crate::ladder::{self, ConstraintLadder, Verdict};
use crate::symcore::{Chart, Scalar};

/// One ladder step with every expression rendered on the final chart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepReport {
    pub level: usize,
    pub kind: String,
    pub base_constraints: Vec<String>,
    pub fiber_constraints: Vec<String>,
    pub characters: Vec<usize>,
    pub assumptions: Vec<String>,
    pub added_coordinates: Vec<String>,
}

/// Frozen structured report. Field order is part of the format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub problem: String,
    pub seed: u64,
    pub verdict: String,
    pub steps: Vec<StepReport>,
    pub final_generators: Vec<String>,
}

/// Text-only detail that is not part of the structured format.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReportExtras {
    pub hamilton_base: Vec<String>,
    pub hamilton_fiber: Vec<String>,
    pub hamilton_assumptions: Vec<String>,
    pub diagnostics: Vec<String>,
    /// Per-step notes and essential torsion, indexed like `steps`.
    pub notes: Vec<Option<String>>,
    pub torsion: Vec<Vec<String>>,
    pub message: Option<String>,
    pub residual_ok: bool,
}

#[derive(Clone, Debug)]
pub struct Analysis {
    pub report: ReportDocument,
    pub extras: ReportExtras,
    pub ladder: ConstraintLadder,
    pub timing: Duration,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Structured,
}

fn render(xs: &[Scalar], chart: &Chart) -> Vec<String> {
    xs.iter().map(|x| x.display(chart)).collect()
}

fn render_assumptions(xs: &[Scalar], chart: &Chart) -> Vec<String> {
    xs.iter().map(|x| format!("{} != 0", x.display(chart))).collect()
}

/// Exit status for a verdict.
pub fn exit_code(v: Verdict) -> i32 {
    match v {
        Verdict::Involutive => 0,
        Verdict::Empty => 1,
        Verdict::NeedsUserBranch => 2,
        Verdict::BudgetExceeded => 3,
    }
}

/// Builds the Lepage space, solves the Hamilton locus and runs the ladder.
pub fn analyze(doc: &ProblemDocument) -> crate::Result<Analysis> {
    let start = Instant::now();
    let ls = doc.lepage_space()?;
    let g = grassmann_extend(&ls)?;
    let eqs = hamilton_equations(&ls, &g);
    let hl = solve_hamilton_locus(&ls, &g, &eqs)?;
    let ladder = ladder::run(&hl, doc.seed, doc.max_prolong, doc.max_steps)?;
    let chart = &ladder.chart;
    let steps = ladder
        .steps
        .iter()
        .map(|s| StepReport {
            level: s.level,
            kind: s.kind.as_str().to_string(),
            base_constraints: render(&s.new_base_constraints, chart),
            fiber_constraints: render(&s.new_fiber_constraints, chart),
            characters: s.characters.as_ref().map(|c| c.s.clone()).unwrap_or_default(),
            assumptions: render_assumptions(&s.assumptions, chart),
            added_coordinates: s.added_coordinates.clone(),
        })
        .collect();
    let final_generators = ladder.final_system.as_ref().map(|f| f.display_generators()).unwrap_or_default();
    let diagnostics = ls.diagnostics.clone();
    let extras = ReportExtras {
        hamilton_base: render(&hl.base_constraints, &g),
        hamilton_fiber: render(&hl.fiber_constraints, &g),
        hamilton_assumptions: render_assumptions(&hl.assumptions, &g),
        diagnostics,
        notes: ladder.steps.iter().map(|s| s.note.clone()).collect(),
        torsion: ladder.steps.iter().map(|s| render(&s.torsion, chart)).collect(),
        message: ladder.message.clone(),
        residual_ok: residual_check(&hl, &ls),
    };
    let report = ReportDocument {
        problem: doc.name.clone(),
        seed: doc.seed,
        verdict: ladder.verdict.as_str().to_string(),
        steps,
        final_generators,
    };
    Ok(Analysis { report, extras, ladder, timing: start.elapsed() })
}

fn list(out: &mut String, label: &str, xs: &[String]) {
    if !xs.is_empty() {
        let _ = writeln!(out, "  {label}:");
        for x in xs {
            let _ = writeln!(out, "    {x}");
        }
    }
}

/// Renders an analysis. Output is deterministic; timing is never included.
pub fn emit(a: &Analysis, format: Format) -> Vec<u8> {
    match format {
        Format::Structured => emit_structured(&a.report),
        Format::Text => emit_text(&a.report, Some(&a.extras)).into_bytes(),
    }
}

pub fn emit_structured(r: &ReportDocument) -> Vec<u8> {
    let mut v = serde_json::to_vec_pretty(r).expect("report serializes");
    v.push(b'\n');
    v
}

pub fn emit_text(r: &ReportDocument, extras: Option<&ReportExtras>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "problem: {}", r.problem);
    let _ = writeln!(out, "seed: {}", r.seed);
    if let Some(x) = extras {
        for d in &x.diagnostics {
            let _ = writeln!(out, "diagnostic: {d}");
        }
        let _ = writeln!(out, "hamilton locus:");
        list(&mut out, "base constraints", &x.hamilton_base);
        list(&mut out, "fiber constraints", &x.hamilton_fiber);
        list(&mut out, "assumptions", &x.hamilton_assumptions);
    }
    for (i, s) in r.steps.iter().enumerate() {
        let _ = writeln!(out, "step {}: {}", s.level, s.kind);
        list(&mut out, "base constraints", &s.base_constraints);
        list(&mut out, "fiber constraints", &s.fiber_constraints);
        if let Some(t) = extras.and_then(|x| x.torsion.get(i)) {
            list(&mut out, "torsion", t);
        }
        if !s.characters.is_empty() {
            let c: Vec<String> = s.characters.iter().map(|k| k.to_string()).collect();
            let _ = writeln!(out, "  characters: [{}]", c.join(", "));
        }
        list(&mut out, "assumptions", &s.assumptions);
        if !s.added_coordinates.is_empty() {
            let _ = writeln!(out, "  added coordinates: {}", s.added_coordinates.join(", "));
        }
        if let Some(Some(n)) = extras.and_then(|x| x.notes.get(i)) {
            let _ = writeln!(out, "  note: {n}");
        }
    }
    let _ = writeln!(out, "verdict: {}", r.verdict);
    if let Some(Some(m)) = extras.map(|x| &x.message) {
        let _ = writeln!(out, "message: {m}");
    }
    if !r.final_generators.is_empty() {
        let _ = writeln!(out, "final generators:");
        for g in &r.final_generators {
            let _ = writeln!(out, "  {g}");
        }
    }
    out
}
