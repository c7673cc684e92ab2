use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::symcore::chart::Names;
use crate::symcore::expr::Expr;
use crate::symcore::{Chart, Rat, Scalar, Var};

/// Sparse differential form: strictly increasing index tuples to nonzero scalars.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Form {
    degree: usize,
    terms: BTreeMap<Vec<Var>, Scalar>,
}

pub type VectorField = BTreeMap<Var, Scalar>;

/// Decomposable multivector `Z_1 /\ ... /\ Z_k`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MultiVector {
    pub factors: Vec<VectorField>,
}

impl MultiVector {
    pub fn new(factors: Vec<VectorField>) -> Self {
        MultiVector { factors }
    }

    pub fn degree(&self) -> usize {
        self.factors.len()
    }
}

/// Sign of the permutation sorting `idx`, or `None` on a repeated index.
fn sort_sign(idx: &mut [Var]) -> Option<bool> {
    let mut neg = false;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            neg = !neg;
            j -= 1;
        }
        if j > 0 && idx[j - 1] == idx[j] {
            return None;
        }
    }
    Some(neg)
}

impl Form {
    pub fn zero(degree: usize) -> Self {
        Form { degree, terms: BTreeMap::new() }
    }

    pub fn scalar(s: Scalar) -> Self {
        let mut f = Form::zero(0);
        if !s.is_zero() {
            f.terms.insert(Vec::new(), s);
        }
        f
    }

    pub fn one() -> Self {
        Form::scalar(Scalar::one())
    }

    /// `d(v)` for a coordinate `v`.
    pub fn dvar(v: Var) -> Self {
        let mut f = Form::zero(1);
        f.terms.insert(vec![v], Scalar::one());
        f
    }

    /// `d(v_1) /\ ... /\ d(v_k)` in the given order.
    pub fn basis(vars: &[Var]) -> Self {
        vars.iter().fold(Form::one(), |acc, &v| acc.wedge(&Form::dvar(v)))
    }

    pub fn from_terms(degree: usize, terms: impl IntoIterator<Item = (Vec<Var>, Scalar)>) -> Self {
        let mut f = Form::zero(degree);
        for (mut idx, c) in terms {
            assert_eq!(idx.len(), degree, "term degree");
            match sort_sign(&mut idx) {
                None => {}
                Some(neg) => f.add_term(idx, if neg { c.neg() } else { c }),
            }
        }
        f
    }

    fn add_term(&mut self, idx: Vec<Var>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&idx) {
            Some(e) => {
                *e = e.add(&c);
                if e.is_zero() {
                    self.terms.remove(&idx);
                }
            }
            None => {
                self.terms.insert(idx, c);
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Vec<Var>, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, idx: &[Var]) -> Scalar {
        let mut k = idx.to_vec();
        match sort_sign(&mut k) {
            None => Scalar::zero(),
            Some(neg) => {
                let c = self.terms.get(&k).cloned().unwrap_or_default();
                if neg {
                    c.neg()
                } else {
                    c
                }
            }
        }
    }

    /// Degree-0 value (zero for higher degree).
    pub fn as_scalar(&self) -> Scalar {
        if self.degree == 0 {
            self.terms.get(&Vec::new()).cloned().unwrap_or_default()
        } else {
            Scalar::zero()
        }
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut v: Vec<Var> = self.terms.iter().flat_map(|(k, c)| k.iter().copied().chain(c.vars())).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn add(&self, o: &Form) -> Form {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        assert_eq!(self.degree, o.degree, "adding forms of different degree");
        let mut f = self.clone();
        for (k, c) in &o.terms {
            f.add_term(k.clone(), c.clone());
        }
        f
    }

    pub fn sub(&self, o: &Form) -> Form {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Form {
        Form { degree: self.degree, terms: self.terms.iter().map(|(k, c)| (k.clone(), c.neg())).collect() }
    }

    pub fn scale(&self, s: &Scalar) -> Form {
        if s.is_zero() {
            return Form::zero(self.degree);
        }
        let mut f = Form::zero(self.degree);
        for (k, c) in &self.terms {
            f.add_term(k.clone(), c.mul(s));
        }
        f
    }

    pub fn wedge(&self, o: &Form) -> Form {
        let mut f = Form::zero(self.degree + o.degree);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &o.terms {
                let mut idx: Vec<Var> = ka.iter().chain(kb.iter()).copied().collect();
                if let Some(neg) = sort_sign(&mut idx) {
                    let c = ca.mul(cb);
                    f.add_term(idx, if neg { c.neg() } else { c });
                }
            }
        }
        f
    }

    /// Exterior derivative.
    pub fn d(&self) -> Form {
        let mut f = Form::zero(self.degree + 1);
        for (k, c) in &self.terms {
            for v in c.vars() {
                let mut idx = Vec::with_capacity(k.len() + 1);
                idx.push(v);
                idx.extend_from_slice(k);
                if let Some(neg) = sort_sign(&mut idx) {
                    let p = c.partial(v);
                    f.add_term(idx, if neg { p.neg() } else { p });
                }
            }
        }
        f
    }

    /// Interior product `X _| self`.
    pub fn contract_vector(&self, x: &VectorField) -> Form {
        if self.degree == 0 {
            return Form::zero(0);
        }
        let mut f = Form::zero(self.degree - 1);
        for (k, c) in &self.terms {
            for (p, v) in k.iter().enumerate() {
                if let Some(xv) = x.get(v) {
                    let mut idx = k.clone();
                    idx.remove(p);
                    let t = c.mul(xv);
                    f.add_term(idx, if p % 2 == 1 { t.neg() } else { t });
                }
            }
        }
        f
    }

    /// `Z_k _| ( ... (Z_2 _| (Z_1 _| self)))`: the first factor is contracted first.
    pub fn contract_multivector(&self, z: &MultiVector) -> Form {
        z.factors.iter().fold(self.clone(), |acc, x| acc.contract_vector(x))
    }

    pub fn pullback(&self, s: &Substitution) -> Result<Form> {
        if s.is_identity() {
            return Ok(self.clone());
        }
        let mut dcache: BTreeMap<Var, Form> = BTreeMap::new();
        let mut out = Form::zero(self.degree);
        for (k, c) in &self.terms {
            let c2 = c.substitute(&s.bindings)?;
            if c2.is_zero() {
                continue;
            }
            let mut acc = Form::scalar(c2);
            for v in k {
                let dv = dcache
                    .entry(*v)
                    .or_insert_with(|| match s.bindings.get(v) {
                        Some(b) => Form::scalar(b.clone()).d(),
                        None => Form::dvar(*v),
                    })
                    .clone();
                acc = acc.wedge(&dv);
                if acc.is_zero() {
                    break;
                }
            }
            if !acc.is_zero() {
                out = out.add(&acc);
            }
        }
        Ok(out)
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Result<Scalar>) -> Result<Form> {
        let mut out = Form::zero(self.degree);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Number of differentials in each term not belonging to `horizontal`, maximized.
    pub fn vertical_degree(&self, horizontal: &[Var]) -> usize {
        self.terms.keys().map(|k| k.iter().filter(|v| !horizontal.contains(v)).count()).max().unwrap_or(0)
    }

    pub fn display(&self, names: &dyn Names) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (n, (k, c)) in self.terms.iter().enumerate() {
            let basis: Vec<String> = k.iter().map(|v| format!("d({})", names.name_of(*v))).collect();
            let basis = basis.join("/\\");
            let single = c.numer().terms().len() == 1 && c.is_polynomial();
            let (neg, c) = if single && c.numer().lc() < Rat::from_integer(0.into()) { (true, c.neg()) } else { (false, c.clone()) };
            if n == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let cs = c.display(names);
            let cs = if single || k.is_empty() { cs } else { format!("({cs})") };
            if k.is_empty() {
                out.push_str(&cs);
            } else if c.is_one() {
                out.push_str(&basis);
            } else {
                out.push_str(&format!("{cs}*{basis}"));
            }
        }
        out
    }
}

/// Triangular coordinate substitution; pulling back replaces `d(v)` by `d(binding)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Substitution {
    pub bindings: BTreeMap<Var, Scalar>,
}

impl Substitution {
    pub fn identity() -> Self {
        Substitution::default()
    }

    /// Resolves chained bindings so that no right-hand side mentions a bound name.
    pub fn new(bindings: impl IntoIterator<Item = (Var, Scalar)>) -> Result<Self> {
        let mut b: BTreeMap<Var, Scalar> = bindings.into_iter().collect();
        for _ in 0..=b.len() {
            let bound: Vec<Var> = b.keys().copied().collect();
            let pending = b.values().any(|s| s.vars().iter().any(|v| bound.binary_search(v).is_ok()));
            if !pending {
                return Ok(Substitution { bindings: b });
            }
            let snapshot = b.clone();
            for s in b.values_mut() {
                *s = s.substitute(&snapshot)?;
            }
        }
        Err(Error::InvalidExpression("cyclic substitution".into()))
    }

    pub fn is_identity(&self) -> bool {
        self.bindings.is_empty()
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Substitution) -> Result<Substitution> {
        let mut b = BTreeMap::new();
        for (v, s) in &self.bindings {
            b.insert(*v, s.substitute(&next.bindings)?);
        }
        for (v, s) in &next.bindings {
            b.entry(*v).or_insert_with(|| s.clone());
        }
        Ok(Substitution { bindings: b })
    }

    pub fn apply(&self, s: &Scalar) -> Result<Scalar> {
        s.substitute(&self.bindings)
    }

    pub fn retained(&self, chart: &Chart) -> Vec<Var> {
        chart.vars().filter(|v| !self.bindings.contains_key(v)).collect()
    }
}

/// Evaluates an expression containing `d(..)` and `/\` to a form.
pub fn form_from_expr(e: &Expr, chart: &Chart) -> Result<Form> {
    form_from_expr_with(e, chart, &BTreeMap::new())
}

/// Like [`form_from_expr`], with names in `named` standing for whole forms.
pub fn form_from_expr_with(e: &Expr, chart: &Chart, named: &BTreeMap<String, Form>) -> Result<Form> {
    let rec = |x: &Expr| form_from_expr_with(x, chart, named);
    Ok(match e {
        Expr::Name(n) if named.contains_key(n) && chart.var(n).is_none() => named[n].clone(),
        Expr::Num(_) | Expr::Name(_) => Form::scalar(crate::symcore::normalize(e, chart)?),
        Expr::D(n) => Form::dvar(chart.expect_var(n)?),
        Expr::Neg(a) => rec(a)?.neg(),
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let fa = rec(a)?;
            let fb = rec(b)?;
            let fb = if matches!(e, Expr::Sub(..)) { fb.neg() } else { fb };
            if fa.is_zero() {
                return Ok(if fb.is_zero() { Form::zero(fa.degree.max(fb.degree)) } else { fb });
            }
            if fb.is_zero() {
                return Ok(fa);
            }
            if fa.degree != fb.degree {
                return Err(Error::DegreeMismatch(format!("cannot add a {}-form and a {}-form", fa.degree, fb.degree)));
            }
            fa.add(&fb)
        }
        Expr::Mul(a, b) | Expr::Wedge(a, b) => rec(a)?.wedge(&rec(b)?),
        Expr::Div(a, b) => {
            let d = crate::symcore::normalize(b, chart)?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            rec(a)?.scale(&d.recip()?)
        }
        Expr::Pow(..) => Form::scalar(crate::symcore::normalize(e, chart)?),
    })
}
