//! Problem files: line-oriented `key = value` entries grouped in sections.
//!
//! Parsing expands index families and sums, then validates the result by
//! building the chart and every form, so a document that parses is ready
//! for [`ProblemDocument::lepage_space`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use super::index::{flat_name, IndexScope};
use crate::exterior::{eta, form_from_expr_with, volume_form, Form};
use crate::hamilton::{build_lepage_classical, build_lepage_griffiths, JetField, LepageSpace, MultiplierShape, VariationalProblem};
use crate::ladder::{DEFAULT_MAX_PROLONGATIONS, DEFAULT_MAX_STEPS};
use crate::symcore::chart::valid_identifier;
use crate::symcore::expr::rational;
use crate::symcore::{parse_expr, Chart, Expr, Rat, Role};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProblemErrorKind {
    Syntax,
    UndeclaredName,
    Degree,
    Invalid,
}

/// Parse or validation failure with a 1-based source position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemError {
    pub line: usize,
    pub col: usize,
    pub kind: ProblemErrorKind,
    pub msg: String,
}

impl std::fmt::Display for ProblemError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for ProblemError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LepageMode {
    Classical,
    Griffiths,
    Explicit,
}

impl LepageMode {
    pub fn as_str(self) -> &'static str {
        match self {
            LepageMode::Classical => "classical",
            LepageMode::Griffiths => "griffiths",
            LepageMode::Explicit => "explicit",
        }
    }
}

/// One `[chart]` declaration line after family expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Declaration {
    pub role: Role,
    /// For jets: the field they belong to.
    pub of: Option<String>,
    pub names: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplierSpec {
    /// 1-based generator index.
    pub generator: usize,
    /// Multiplier name and basis form expression.
    pub basis: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemDocument {
    pub name: String,
    pub declarations: Vec<Declaration>,
    pub params: Vec<(String, Rat)>,
    pub lagrangian: Option<String>,
    pub generators: Vec<String>,
    pub theta: Option<String>,
    pub mode: LepageMode,
    pub momenta: Vec<(String, Vec<String>)>,
    pub multipliers: Vec<MultiplierSpec>,
    pub vertical_order: usize,
    pub seed: u64,
    pub max_prolong: usize,
    pub max_steps: usize,
}

impl Default for ProblemDocument {
    fn default() -> Self {
        ProblemDocument {
            name: "problem".into(),
            declarations: Vec::new(),
            params: Vec::new(),
            lagrangian: None,
            generators: Vec::new(),
            theta: None,
            mode: LepageMode::Classical,
            momenta: Vec::new(),
            multipliers: Vec::new(),
            vertical_order: 1,
            seed: 1,
            max_prolong: DEFAULT_MAX_PROLONGATIONS,
            max_steps: DEFAULT_MAX_STEPS,
        }
    }
}

/// Source position of each validated entry, for diagnostics after parsing.
type Spans = BTreeMap<&'static str, Vec<(usize, usize)>>;

struct Entry {
    line: usize,
    /// Column where the value starts.
    col: usize,
    key: String,
    value: String,
    has_eq: bool,
}

fn perr(line: usize, col: usize, kind: ProblemErrorKind, msg: impl Into<String>) -> ProblemError {
    ProblemError { line, col, kind, msg: msg.into() }
}

fn role_name(r: Role) -> &'static str {
    match r {
        Role::Independent => "independent",
        Role::Field => "field",
        Role::Jet => "jet",
        Role::Multiplier => "multiplier",
        Role::Fiber => "fiber",
    }
}

fn split_list(value: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in value.chars() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            _ => {}
        }
        if c == ',' && depth == 0 {
            out.push(cur.trim().to_string());
            cur.clear();
        } else {
            cur.push(c);
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

/// Splits raw text into sectioned entries; indented lines continue the
/// previous value.
fn entries(text: &str) -> Result<Vec<(String, Entry)>, ProblemError> {
    let mut out: Vec<(String, Entry)> = Vec::new();
    let mut section = String::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        if body.starts_with([' ', '\t']) {
            match out.last_mut() {
                Some((_, e)) if e.has_eq => {
                    e.value.push(' ');
                    e.value.push_str(body.trim());
                    continue;
                }
                _ => return Err(perr(line, 1, ProblemErrorKind::Syntax, "continuation line without an entry")),
            }
        }
        let t = body.trim_end();
        if let Some(rest) = t.strip_prefix('[') {
            let Some(name) = rest.strip_suffix(']') else {
                return Err(perr(line, t.len(), ProblemErrorKind::Syntax, "expected `]`"));
            };
            if !["chart", "forms", "lepage", "params", "run"].contains(&name) {
                return Err(perr(line, 2, ProblemErrorKind::Syntax, format!("unknown section [{name}]")));
            }
            section = name.to_string();
            continue;
        }
        let (key, value, col, has_eq) = match t.find('=') {
            Some(p) => {
                let vstart = p + 1 + (t[p + 1..].len() - t[p + 1..].trim_start().len());
                (t[..p].trim().to_string(), t[p + 1..].trim().to_string(), vstart + 1, true)
            }
            None => {
                // Directive form: `antisym F[i,j]`.
                let mut it = t.splitn(2, char::is_whitespace);
                let k = it.next().unwrap_or("").to_string();
                let v = it.next().unwrap_or("").trim().to_string();
                (k.clone(), v, k.len() + 2, false)
            }
        };
        if key.is_empty() {
            return Err(perr(line, 1, ProblemErrorKind::Syntax, "missing key before `=`"));
        }
        out.push((section.clone(), Entry { line, col, key, value, has_eq }));
    }
    Ok(out)
}

fn parse_usize(e: &Entry) -> Result<usize, ProblemError> {
    e.value.parse().map_err(|_| perr(e.line, e.col, ProblemErrorKind::Syntax, format!("`{}` expects a non-negative integer", e.key)))
}

/// Parses and validates a problem file.
pub fn parse_problem(text: &str) -> Result<ProblemDocument, ProblemError> {
    parse_problem_with(text, &[])
}

/// Parses with parameter overrides applied before validation.
pub fn parse_problem_with(text: &str, overrides: &[(String, Rat)]) -> Result<ProblemDocument, ProblemError> {
    let mut doc = ProblemDocument::default();
    let mut scope = IndexScope::default();
    let mut spans: Spans = BTreeMap::new();
    let expand = |scope: &IndexScope, e: &Entry, v: &str| -> Result<String, ProblemError> {
        scope.expand(v).map_err(|ie| perr(e.line, e.col + ie.offset, ProblemErrorKind::Syntax, ie.msg))
    };
    for (section, e) in entries(text)? {
        let syntax = |msg: String| perr(e.line, e.col, ProblemErrorKind::Syntax, msg);
        if !e.has_eq && !(section == "chart" && (e.key == "antisym" || e.key.starts_with("range"))) {
            return Err(perr(e.line, 1, ProblemErrorKind::Syntax, format!("expected `key = value`, found `{}`", e.key)));
        }
        match (section.as_str(), e.key.as_str()) {
            ("", "name") | ("run", "name") => doc.name = e.value.clone(),
            ("", k) => return Err(syntax(format!("`{k}` outside any section"))),
            ("chart", "antisym") => {
                for item in split_list(&e.value) {
                    let fam = item.split('[').next().unwrap_or("").trim().to_string();
                    if !valid_identifier(&fam) {
                        return Err(syntax(format!("bad family `{item}`")));
                    }
                    scope.antisym.insert(fam);
                }
            }
            ("chart", k) if k.starts_with("range") => {
                let letters = split_list(k.trim_start_matches("range"));
                let value = if e.has_eq { e.value.clone() } else { return Err(syntax("range needs `= lo..hi`".into())) };
                let Some((lo, hi)) = value.split_once("..") else {
                    return Err(syntax("range needs `lo..hi`".into()));
                };
                let (Ok(lo), Ok(hi)) = (lo.trim().parse::<i64>(), hi.trim().parse::<i64>()) else {
                    return Err(syntax("range bounds must be integers".into()));
                };
                if letters.is_empty() {
                    return Err(syntax("range declares no index letters".into()));
                }
                for l in letters {
                    if !valid_identifier(&l) {
                        return Err(syntax(format!("bad index letter `{l}`")));
                    }
                    scope.ranges.insert(l, (lo, hi));
                }
            }
            ("chart", k) => {
                let (role, of) = match k.split_once('.') {
                    Some(("jet", f)) => (Role::Jet, Some(f.trim().to_string())),
                    None => match k {
                        "independent" => (Role::Independent, None),
                        "field" => (Role::Field, None),
                        "jet" => (Role::Jet, None),
                        "multiplier" => (Role::Multiplier, None),
                        _ => return Err(syntax(format!("unknown chart key `{k}`"))),
                    },
                    _ => return Err(syntax(format!("unknown chart key `{k}`"))),
                };
                let mut names = Vec::new();
                for item in split_list(&e.value) {
                    names.extend(scope.declare(&item).map_err(|ie| perr(e.line, e.col + ie.offset, ProblemErrorKind::Syntax, ie.msg))?);
                }
                doc.declarations.push(Declaration { role, of, names });
            }
            ("params", "metric") => {
                let inner = e
                    .value
                    .strip_prefix("diag(")
                    .and_then(|s| s.strip_suffix(')'))
                    .ok_or_else(|| syntax("metric expects diag(...)".into()))?;
                let diag: Vec<Rat> = split_list(inner)
                    .iter()
                    .map(|s| rational(s).ok_or_else(|| syntax(format!("`{s}` is not a rational number"))))
                    .collect::<Result<_, _>>()?;
                let n = diag.len() as i64;
                for i in 1..=n {
                    for j in 1..=n {
                        let (g, gi) = if i == j {
                            let d = &diag[(i - 1) as usize];
                            if num_traits::Zero::is_zero(d) {
                                return Err(syntax("degenerate metric".into()));
                            }
                            (d.clone(), num_traits::Inv::inv(d.clone()))
                        } else {
                            (Rat::from_integer(0.into()), Rat::from_integer(0.into()))
                        };
                        doc.params.push((flat_name("g", &[i, j]), g));
                        doc.params.push((flat_name("ginv", &[i, j]), gi));
                    }
                }
            }
            ("params", k) => {
                if !valid_identifier(k) {
                    return Err(perr(e.line, 1, ProblemErrorKind::Syntax, format!("bad parameter name `{k}`")));
                }
                let r = rational(&e.value).ok_or_else(|| syntax(format!("`{}` is not a rational number", e.value)))?;
                doc.params.push((k.to_string(), r));
            }
            ("forms", "lagrangian") => {
                doc.lagrangian = Some(expand(&scope, &e, &e.value)?);
                spans.entry("lagrangian").or_default().push((e.line, e.col));
            }
            ("forms", "generator") => {
                doc.generators.push(expand(&scope, &e, &e.value)?);
                spans.entry("generator").or_default().push((e.line, e.col));
            }
            ("forms", "theta") => {
                doc.theta = Some(expand(&scope, &e, &e.value)?);
                spans.entry("theta").or_default().push((e.line, e.col));
            }
            ("forms", k) => return Err(syntax(format!("unknown forms key `{k}`"))),
            ("lepage", "mode") => {
                doc.mode = match e.value.as_str() {
                    "classical" => LepageMode::Classical,
                    "griffiths" => LepageMode::Griffiths,
                    "explicit" => LepageMode::Explicit,
                    v => return Err(syntax(format!("unknown mode `{v}`"))),
                }
            }
            ("lepage", "vertical_order") => doc.vertical_order = parse_usize(&e)?,
            ("lepage", k) if k.starts_with("momenta.") => {
                let field = k["momenta.".len()..].trim().to_string();
                let mut names = Vec::new();
                for item in split_list(&e.value) {
                    names.extend(scope.declare(&item).map_err(|ie| perr(e.line, e.col + ie.offset, ProblemErrorKind::Syntax, ie.msg))?);
                }
                doc.momenta.push((field, names));
            }
            ("lepage", k) if k.starts_with("multiplier.") => {
                let generator: usize = k["multiplier.".len()..]
                    .trim()
                    .parse()
                    .ok()
                    .filter(|&g| g >= 1)
                    .ok_or_else(|| perr(e.line, 1, ProblemErrorKind::Syntax, "multiplier.<k> needs a generator number from 1"))?;
                let mut basis = Vec::new();
                for part in e.value.split(';').map(str::trim).filter(|s| !s.is_empty()) {
                    let Some((n, f)) = part.split_once(':') else {
                        return Err(syntax(format!("expected `name: form`, found `{part}`")));
                    };
                    basis.push((n.trim().to_string(), expand(&scope, &e, f.trim())?));
                }
                doc.multipliers.push(MultiplierSpec { generator, basis });
                spans.entry("multiplier").or_default().push((e.line, e.col));
            }
            ("lepage", k) => return Err(syntax(format!("unknown lepage key `{k}`"))),
            ("run", "seed") => doc.seed = e.value.parse().map_err(|_| syntax("seed expects an integer".into()))?,
            ("run", "max_prolong") => doc.max_prolong = parse_usize(&e)?,
            ("run", "max_steps") => doc.max_steps = parse_usize(&e)?,
            ("run", k) => return Err(syntax(format!("unknown run key `{k}`"))),
            (s, _) => return Err(syntax(format!("unknown section [{s}]"))),
        }
    }
    for (k, v) in overrides {
        match doc.params.iter_mut().find(|(n, _)| n == k) {
            Some(slot) => slot.1 = v.clone(),
            None => doc.params.push((k.clone(), v.clone())),
        }
    }
    doc.validate(&spans)?;
    Ok(doc)
}

/// Names in an expression tree.
fn names_in(e: &Expr, out: &mut BTreeSet<String>) {
    match e {
        Expr::Num(_) => {}
        Expr::Name(n) | Expr::D(n) => {
            out.insert(n.clone());
        }
        Expr::Neg(a) | Expr::Pow(a, _) => names_in(a, out),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Wedge(a, b) => {
            names_in(a, out);
            names_in(b, out);
        }
    }
}

/// `eta` and `eta_<digits>`: the volume form contracted with the listed
/// (1-based) independent directions in order.
fn named_forms(e: &Expr, chart: &Chart) -> BTreeMap<String, Form> {
    let mut names = BTreeSet::new();
    names_in(e, &mut names);
    let xs = chart.independent();
    let mut out = BTreeMap::new();
    for n in names {
        if chart.var(&n).is_some() || chart.param(&n).is_some() {
            continue;
        }
        if n == "eta" {
            out.insert(n, volume_form(chart));
        } else if let Some(d) = n.strip_prefix("eta_") {
            let idx: Option<Vec<_>> = d.chars().map(|c| c.to_digit(10).and_then(|k| xs.get((k as usize).checked_sub(1)?).copied())).collect();
            if let Some(ks) = idx.filter(|v| !v.is_empty()) {
                out.insert(n, eta(chart, &ks));
            }
        }
    }
    out
}

/// Parses and evaluates a form expression against `chart`.
pub fn eval_form(src: &str, chart: &Chart) -> crate::Result<Form> {
    let e = parse_expr(src).map_err(|pe| crate::Error::InvalidExpression(format!("`{src}`: {pe}")))?;
    form_from_expr_with(&e, chart, &named_forms(&e, chart))
}

fn classify(err: &crate::Error) -> ProblemErrorKind {
    match err {
        crate::Error::UnknownName(_) => ProblemErrorKind::UndeclaredName,
        crate::Error::DegreeMismatch(_) => ProblemErrorKind::Degree,
        crate::Error::InvalidExpression(_) => ProblemErrorKind::Syntax,
        _ => ProblemErrorKind::Invalid,
    }
}

impl ProblemDocument {
    /// The chart declared in `[chart]` with parameters bound.
    pub fn chart(&self) -> crate::Result<Chart> {
        let mut c = Chart::new();
        for d in &self.declarations {
            for n in &d.names {
                c.add(n, d.role, 0)?;
            }
        }
        for (n, v) in &self.params {
            c.bind_param(n, v.clone())?;
        }
        Ok(c)
    }

    fn validate(&self, spans: &Spans) -> Result<(), ProblemError> {
        let at = |key: &str, i: usize| spans.get(key).and_then(|v| v.get(i)).copied().unwrap_or((1, 1));
        let chart = self.chart().map_err(|e| perr(1, 1, classify(&e), e.to_string()))?;
        if chart.independent().is_empty() {
            return Err(perr(1, 1, ProblemErrorKind::Invalid, "at least one independent coordinate"));
        }
        for d in &self.declarations {
            if let Some(f) = &d.of {
                match chart.var(f) {
                    Some(v) if chart.role(v) == Role::Field => {}
                    _ => return Err(perr(1, 1, ProblemErrorKind::UndeclaredName, format!("jet.{f}: `{f}` is not a declared field"))),
                }
                if d.names.len() != chart.independent().len() {
                    return Err(perr(1, 1, ProblemErrorKind::Invalid, format!("jet.{f} needs one name per independent coordinate")));
                }
            }
        }
        let m = chart.independent().len();
        let check = |key: &'static str, i: usize, src: &str| -> Result<Form, ProblemError> {
            let (line, col) = at(key, i);
            eval_form(src, &chart).map_err(|e| perr(line, col, classify(&e), e.to_string()))
        };
        if let Some(l) = &self.lagrangian {
            let f = check("lagrangian", 0, l)?;
            if f.degree() != 0 && f.degree() != m {
                let (line, col) = at("lagrangian", 0);
                return Err(perr(line, col, ProblemErrorKind::Degree, format!("the Lagrangian must be a function or a {m}-form")));
            }
        }
        for (i, g) in self.generators.iter().enumerate() {
            check("generator", i, g)?;
        }
        match self.mode {
            LepageMode::Explicit => {
                let Some(t) = &self.theta else {
                    return Err(perr(1, 1, ProblemErrorKind::Invalid, "explicit mode needs `theta` in [forms]"));
                };
                let f = check("theta", 0, t)?;
                if f.degree() != m {
                    let (line, col) = at("theta", 0);
                    return Err(perr(line, col, ProblemErrorKind::Degree, format!("theta must be a {m}-form")));
                }
            }
            LepageMode::Classical => {
                if self.lagrangian.is_none() {
                    return Err(perr(1, 1, ProblemErrorKind::Invalid, "classical mode needs a lagrangian"));
                }
                if !self.declarations.iter().any(|d| d.of.is_some()) {
                    return Err(perr(1, 1, ProblemErrorKind::Invalid, "classical mode needs `jet.<field>` declarations"));
                }
            }
            LepageMode::Griffiths => {}
        }
        for (f, names) in &self.momenta {
            if !self.declarations.iter().any(|d| d.of.as_deref() == Some(f)) {
                return Err(perr(1, 1, ProblemErrorKind::UndeclaredName, format!("momenta.{f}: no jets declared for `{f}`")));
            }
            if names.len() != m {
                return Err(perr(1, 1, ProblemErrorKind::Invalid, format!("momenta.{f} needs {m} names")));
            }
        }
        for (i, ms) in self.multipliers.iter().enumerate() {
            if ms.generator > self.generators.len() {
                let (line, col) = at("multiplier", i);
                return Err(perr(line, col, ProblemErrorKind::Invalid, format!("there is no generator {}", ms.generator)));
            }
            for (n, b) in &ms.basis {
                let (line, col) = at("multiplier", i);
                if !valid_identifier(n) {
                    return Err(perr(line, col, ProblemErrorKind::Syntax, format!("bad multiplier name `{n}`")));
                }
                eval_form(b, &chart).map_err(|e| perr(line, col, classify(&e), e.to_string()))?;
            }
        }
        self.lepage_space().map_err(|e| perr(1, 1, classify(&e), e.to_string()))?;
        Ok(())
    }

    /// Builds the Lepage space the document describes.
    pub fn lepage_space(&self) -> crate::Result<LepageSpace> {
        let chart = self.chart()?;
        let m = chart.independent().len();
        let lag = match &self.lagrangian {
            None => Form::zero(m),
            Some(l) => {
                let f = eval_form(l, &chart)?;
                if f.degree() == 0 {
                    volume_form(&chart).scale(&f.as_scalar())
                } else {
                    f
                }
            }
        };
        let generators = self.generators.iter().map(|g| eval_form(g, &chart)).collect::<crate::Result<Vec<_>>>()?;
        match self.mode {
            LepageMode::Explicit => {
                let theta = eval_form(self.theta.as_deref().unwrap_or("0"), &chart)?;
                Ok(LepageSpace::explicit(chart, theta))
            }
            LepageMode::Classical => {
                let mut vp = VariationalProblem::new(chart.clone(), lag, generators);
                for d in &self.declarations {
                    if let Some(f) = &d.of {
                        let field = chart.expect_var(f)?;
                        let jets = d.names.iter().map(|n| chart.expect_var(n)).collect::<crate::Result<Vec<_>>>()?;
                        let momenta = self.momenta.iter().find(|(k, _)| k == f).map(|(_, v)| v.clone());
                        vp.jets.push(JetField { field, jets, momenta });
                    }
                }
                build_lepage_classical(&vp)
            }
            LepageMode::Griffiths => {
                let vp = VariationalProblem::new(chart.clone(), lag, generators);
                let shapes = self
                    .multipliers
                    .iter()
                    .map(|ms| {
                        let basis = ms.basis.iter().map(|(n, b)| Ok((n.clone(), eval_form(b, &chart)?))).collect::<crate::Result<Vec<_>>>()?;
                        Ok(MultiplierShape { generator: ms.generator - 1, basis })
                    })
                    .collect::<crate::Result<Vec<_>>>()?;
                build_lepage_griffiths(&vp, &shapes, self.vertical_order)
            }
        }
    }

    /// Canonical text; parsing it yields an identical document.
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "name = {}", self.name);
        s.push_str("\n[chart]\n");
        for d in &self.declarations {
            let key = match &d.of {
                Some(f) => format!("jet.{f}"),
                None => role_name(d.role).to_string(),
            };
            let _ = writeln!(s, "{key} = {}", d.names.join(", "));
        }
        if !self.params.is_empty() {
            s.push_str("\n[params]\n");
            for (n, v) in &self.params {
                let _ = writeln!(s, "{n} = {v}");
            }
        }
        s.push_str("\n[forms]\n");
        if let Some(l) = &self.lagrangian {
            let _ = writeln!(s, "lagrangian = {l}");
        }
        for g in &self.generators {
            let _ = writeln!(s, "generator = {g}");
        }
        if let Some(t) = &self.theta {
            let _ = writeln!(s, "theta = {t}");
        }
        s.push_str("\n[lepage]\n");
        let _ = writeln!(s, "mode = {}", self.mode.as_str());
        for (f, names) in &self.momenta {
            let _ = writeln!(s, "momenta.{f} = {}", names.join(", "));
        }
        for ms in &self.multipliers {
            let parts: Vec<String> = ms.basis.iter().map(|(n, b)| format!("{n}: {b}")).collect();
            let _ = writeln!(s, "multiplier.{} = {}", ms.generator, parts.join("; "));
        }
        let _ = writeln!(s, "vertical_order = {}", self.vertical_order);
        s.push_str("\n[run]\n");
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "max_prolong = {}", self.max_prolong);
        let _ = writeln!(s, "max_steps = {}", self.max_steps);
        s
    }
}

/// Parses `name=p/q` as given to `--param`.
pub fn parse_override(s: &str) -> Option<(String, Rat)> {
    let (n, v) = s.split_once('=')?;
    let n = n.trim();
    valid_identifier(n).then(|| Some((n.to_string(), rational(v.trim())?)))?
}
