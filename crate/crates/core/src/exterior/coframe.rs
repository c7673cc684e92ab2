use std::collections::BTreeMap;

use super::form::Form;
use crate::error::{Error, Result};
use crate::symcore::linsolve::{solve_rows, LinRow};
use crate::symcore::rank::random_rank;
use crate::symcore::{Scalar, Var};

/// Expansion of `a` in wedges of `coframe`: sorted position tuples to coefficients.
///
/// `coords` lists the coordinates whose differentials span the cotangent
/// space; the coframe must have exactly that many members.
pub fn coefficients(a: &Form, coframe: &[Form], coords: &[Var], seed: u64) -> Result<BTreeMap<Vec<usize>, Scalar>> {
    let n = coords.len();
    if coframe.len() != n || coframe.iter().any(|f| f.degree() != 1) {
        return Err(Error::CoframeDegenerate);
    }
    let col: BTreeMap<Var, usize> = coords.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut m = vec![vec![Scalar::zero(); n]; n];
    for (k, f) in coframe.iter().enumerate() {
        for (idx, c) in f.terms() {
            let j = *col.get(&idx[0]).ok_or(Error::CoframeDegenerate)?;
            m[k][j] = c.clone();
        }
    }
    if random_rank(&m, seed, crate::symcore::DEFAULT_SAMPLES)? < n {
        return Err(Error::CoframeDegenerate);
    }
    // d(coords[j]) = sum_k inv[j][k] * coframe[k]: solve M^T-systems column by column
    let mut inv: Vec<BTreeMap<usize, Scalar>> = Vec::with_capacity(n);
    for j in 0..n {
        let rows: Vec<LinRow> = (0..n)
            .map(|i| LinRow {
                coeffs: (0..n).filter(|&k| !m[k][i].is_zero()).map(|k| (k, m[k][i].clone())).collect(),
                constant: if i == j { Scalar::from(-1) } else { Scalar::zero() },
            })
            .collect();
        let sol = solve_rows(rows, n);
        if !sol.residual.is_empty() || !sol.free.is_empty() {
            return Err(Error::CoframeDegenerate);
        }
        inv.push(sol.solved.into_iter().filter(|(_, r)| !r.constant.is_zero()).map(|(k, r)| (k, r.constant)).collect());
    }
    let mut out: BTreeMap<Vec<usize>, Scalar> = BTreeMap::new();
    for (idx, c) in a.terms() {
        // expand d(v_1)/\.../\d(v_p) multilinearly in the coframe
        let mut partial: BTreeMap<Vec<usize>, Scalar> = BTreeMap::from([(Vec::new(), c.clone())]);
        for v in idx {
            let j = *col.get(v).ok_or(Error::CoframeDegenerate)?;
            let mut next: BTreeMap<Vec<usize>, Scalar> = BTreeMap::new();
            for (key, val) in &partial {
                for (k, e) in &inv[j] {
                    if key.contains(k) {
                        continue;
                    }
                    let mut nk = key.clone();
                    nk.push(*k);
                    let t = val.mul(e);
                    let entry = next.entry(nk).or_default();
                    *entry = entry.add(&t);
                }
            }
            partial = next;
        }
        for (mut key, val) in partial {
            let neg = sort_positions(&mut key);
            let entry = out.entry(key).or_default();
            *entry = if neg { entry.sub(&val) } else { entry.add(&val) };
        }
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

fn sort_positions(k: &mut [usize]) -> bool {
    let mut neg = false;
    for i in 1..k.len() {
        let mut j = i;
        while j > 0 && k[j - 1] > k[j] {
            k.swap(j - 1, j);
            neg = !neg;
            j -= 1;
        }
    }
    neg
}

/// Rebuilds a form from its coframe coefficients.
pub fn assemble(coeffs: &BTreeMap<Vec<usize>, Scalar>, coframe: &[Form], degree: usize) -> Form {
    let mut out = Form::zero(degree);
    for (key, c) in coeffs {
        let mut f = Form::scalar(c.clone());
        for &k in key {
            f = f.wedge(&coframe[k]);
        }
        out = out.add(&f);
    }
    out
}
