use std::collections::BTreeMap;

use super::poly::{Poly, Var};
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// One affine equation `sum coeffs[k] * u_k + constant = 0` over unknown ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinRow {
    pub coeffs: BTreeMap<usize, Scalar>,
    pub constant: Scalar,
}

impl LinRow {
    pub fn is_trivial(&self) -> bool {
        self.coeffs.is_empty() && self.constant.is_zero()
    }

    fn axpy(&mut self, factor: &Scalar, other: &LinRow) {
        for (k, c) in &other.coeffs {
            let v = self.coeffs.remove(k).unwrap_or_default().sub(&factor.mul(c));
            if !v.is_zero() {
                self.coeffs.insert(*k, v);
            }
        }
        self.constant = self.constant.sub(&factor.mul(&other.constant));
    }
}

/// Solution of a row system in terms of unknown ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RowSolution {
    /// `u_k = sum coeffs * free + constant`, in pivot order.
    pub solved: Vec<(usize, LinRow)>,
    pub residual: Vec<Scalar>,
    pub free: Vec<usize>,
    pub assumptions: Vec<Scalar>,
}

/// Gauss-Jordan elimination taking unknowns in id order. Constant pivots are
/// preferred; a nonconstant pivot is kept and reported as an assumption.
pub fn solve_rows(mut rows: Vec<LinRow>, n_unknowns: usize) -> RowSolution {
    rows.retain(|r| !r.is_trivial());
    let mut used = vec![false; rows.len()];
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut free = Vec::new();
    let mut assumptions: Vec<Scalar> = Vec::new();
    for k in 0..n_unknowns {
        let mut best: Option<(usize, (bool, usize, usize))> = None;
        for (i, r) in rows.iter().enumerate() {
            if used[i] {
                continue;
            }
            if let Some(c) = r.coeffs.get(&k) {
                let key = (!c.is_constant(), c.numer().terms().len() + c.denom().terms().len(), r.coeffs.len());
                if best.as_ref().map_or(true, |b| key < b.1) {
                    best = Some((i, key));
                }
            }
        }
        let Some((p, _)) = best else {
            free.push(k);
            continue;
        };
        used[p] = true;
        let c = rows[p].coeffs[&k].clone();
        if !c.is_constant() {
            let a = c.assumption_form();
            if !assumptions.contains(&a) {
                assumptions.push(a);
            }
        }
        if !c.is_one() {
            let inv = c.recip().expect("pivot is nonzero");
            let row = &mut rows[p];
            for v in row.coeffs.values_mut() {
                *v = v.mul(&inv);
            }
            row.constant = row.constant.mul(&inv);
        }
        let prow = rows[p].clone();
        for (i, r) in rows.iter_mut().enumerate() {
            if i == p {
                continue;
            }
            if let Some(f) = r.coeffs.get(&k).cloned() {
                r.axpy(&f, &prow);
            }
        }
        pivots.push((k, p));
    }
    let solved = pivots
        .iter()
        .map(|&(k, p)| {
            let mut row = rows[p].clone();
            row.coeffs.remove(&k);
            let coeffs = row.coeffs.into_iter().map(|(j, c)| (j, c.neg())).collect();
            (k, LinRow { coeffs, constant: row.constant.neg() })
        })
        .collect();
    let residual = rows
        .iter()
        .enumerate()
        .filter(|(i, r)| !used[*i] && !r.constant.is_zero())
        .map(|(_, r)| r.constant.clone())
        .collect();
    RowSolution { solved, residual, free, assumptions }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearSolveResult {
    /// Eliminated unknowns as functions of the rest, in pivot order.
    pub solved: Vec<(Var, Scalar)>,
    /// Compatibility conditions left once every unknown is eliminated.
    pub residual: Vec<Scalar>,
    pub free: Vec<Var>,
    /// Nonconstant pivots, each assumed nonzero.
    pub assumptions: Vec<Scalar>,
}

impl LinearSolveResult {
    pub fn bindings(&self) -> BTreeMap<Var, Scalar> {
        self.solved.iter().cloned().collect()
    }

    pub fn is_consistent(&self) -> bool {
        self.residual.is_empty()
    }
}

/// Splits the numerator of `eq` into an affine row over `unknowns`.
pub fn linear_row(eq: &Scalar, unknowns: &[Var]) -> Result<LinRow> {
    let pos: BTreeMap<Var, usize> = unknowns.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut parts: BTreeMap<Option<usize>, Vec<(super::poly::Monomial, super::poly::Rat)>> = BTreeMap::new();
    for (m, c) in eq.numer().terms() {
        let mut hit: Option<(usize, Var)> = None;
        let mut deg = 0;
        for &(v, e) in &m.0 {
            if let Some(&i) = pos.get(&v) {
                deg += e;
                hit = Some((i, v));
            }
        }
        match deg {
            0 => parts.entry(None).or_default().push((m.clone(), c.clone())),
            1 => {
                let (i, v) = hit.unwrap();
                let (_, rest) = m.split_var(v);
                parts.entry(Some(i)).or_default().push((rest, c.clone()));
            }
            _ => return Err(Error::NonLinearInUnknowns(format!("{eq:?}"))),
        }
    }
    let mut row = LinRow::default();
    for (k, terms) in parts {
        let p = Scalar::from(Poly::from_terms(terms));
        match k {
            None => row.constant = p,
            Some(i) => {
                row.coeffs.insert(i, p);
            }
        }
    }
    Ok(row)
}

/// Whether the numerator of `eq` has degree at most one in `unknowns`.
pub fn is_linear_in(eq: &Scalar, unknowns: &[Var]) -> bool {
    eq.numer().terms().iter().all(|(m, _)| m.0.iter().filter(|(v, _)| unknowns.contains(v)).map(|(_, e)| e).sum::<u32>() <= 1)
}

/// Fraction-free elimination of affine equations, pivots taken in the order
/// of `unknowns`.
pub fn solve_linear(eqs: &[Scalar], unknowns: &[Var]) -> Result<LinearSolveResult> {
    let mut rows = Vec::with_capacity(eqs.len());
    for e in eqs {
        rows.push(linear_row(e, unknowns)?);
    }
    let sol = solve_rows(rows, unknowns.len());
    let var_of = |k: usize| unknowns[k];
    let solved = sol
        .solved
        .into_iter()
        .map(|(k, row)| {
            let mut s = row.constant;
            for (j, c) in row.coeffs {
                s = s.add(&c.mul(&Scalar::var(var_of(j))));
            }
            (var_of(k), s)
        })
        .collect();
    Ok(LinearSolveResult {
        solved,
        residual: sol.residual,
        free: sol.free.into_iter().map(var_of).collect(),
        assumptions: sol.assumptions,
    })
}
