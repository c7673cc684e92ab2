use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::system::{push_unique, PfaffianSystem};
use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::symcore::linsolve::{solve_rows, LinRow};
use crate::symcore::rank::{random_rank, SamplePoint};
use crate::symcore::{Role, Scalar, Var, DEFAULT_SAMPLES};

/// `d(theta^a) = A[a][e][i] pi^e /\ dx^i + sum_{i<j} T[a][i][j] dx^i /\ dx^j`
/// modulo the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureEquations {
    pub independent: Vec<Var>,
    pub complement: Vec<Var>,
    pub tableau: Vec<Vec<Vec<Scalar>>>,
    pub torsion: Vec<Vec<Vec<Scalar>>>,
}

/// Cartan characters `s_1..s_m` with `s_0` the number of generators.
///
/// `s_m` absorbs the complement not reached by the polar ranks, so that
/// `s_1 + ... + s_m` equals the complement dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterVector {
    pub s0: usize,
    pub s: Vec<usize>,
    /// Codimensions `c_0..c_{m-1}` of the polar spaces along the flag.
    pub polar_codims: Vec<usize>,
}

impl CharacterVector {
    pub fn weighted_sum(&self) -> usize {
        self.s.iter().enumerate().map(|(k, s)| (k + 1) * s).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvolutivityReport {
    pub characters: CharacterVector,
    pub prolongation_dim: usize,
    pub cartan_sum: usize,
    pub involutive: bool,
    pub torsion_essential: Vec<Scalar>,
}

type Combo = BTreeMap<Var, Scalar>;

impl PfaffianSystem {
    /// `d(lead_b)` rewritten modulo the generators; other differentials are kept.
    fn reduce_differential(&self, v: Var) -> Combo {
        match self.leads.iter().position(|&l| l == v) {
            Some(b) => self.generators[b]
                .terms()
                .iter()
                .filter(|(k, _)| k[0] != v)
                .map(|(k, c)| (k[0], c.neg()))
                .collect(),
            None => BTreeMap::from([(v, Scalar::one())]),
        }
    }

    pub fn structure_equations(&self) -> Result<StructureEquations> {
        let xs = self.independence();
        let m = xs.len();
        let xpos: BTreeMap<Var, usize> = xs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let ppos: BTreeMap<Var, usize> = self.complement.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let n = self.complement.len();
        let mut tableau = vec![vec![vec![Scalar::zero(); m]; n]; self.generators.len()];
        let mut torsion = vec![vec![vec![Scalar::zero(); m]; m]; self.generators.len()];
        let mut cache: BTreeMap<Var, Combo> = BTreeMap::new();
        for (a, g) in self.generators.iter().enumerate() {
            let dg = g.d();
            let mut two: BTreeMap<(Var, Var), Scalar> = BTreeMap::new();
            for (k, c) in dg.terms() {
                let r0 = cache.entry(k[0]).or_insert_with(|| self.reduce_differential(k[0])).clone();
                let r1 = cache.entry(k[1]).or_insert_with(|| self.reduce_differential(k[1])).clone();
                for (u, cu) in &r0 {
                    for (w, cw) in &r1 {
                        if u == w {
                            continue;
                        }
                        let t = c.mul(cu).mul(cw);
                        let (key, t) = if u < w { ((*u, *w), t) } else { ((*w, *u), t.neg()) };
                        let e = two.entry(key).or_default();
                        *e = e.add(&t);
                    }
                }
            }
            for ((u, w), c) in two {
                if c.is_zero() {
                    continue;
                }
                match (ppos.get(&u), ppos.get(&w), xpos.get(&u), xpos.get(&w)) {
                    (Some(_), Some(_), _, _) => {
                        return Err(Error::NotLinearPfaffian(format!(
                            "d(theta) has a d({})/\\d({}) term",
                            self.chart.name(u),
                            self.chart.name(w)
                        )))
                    }
                    (Some(&e), None, _, Some(&i)) => tableau[a][e][i] = tableau[a][e][i].add(&c),
                    (None, Some(&e), Some(&i), _) => tableau[a][e][i] = tableau[a][e][i].sub(&c),
                    (None, None, Some(&i), Some(&j)) => torsion[a][i][j] = torsion[a][i][j].add(&c),
                    _ => {
                        return Err(Error::NotLinearPfaffian(format!(
                            "differential of an inactive coordinate {} or {}",
                            self.chart.name(u),
                            self.chart.name(w)
                        )))
                    }
                }
            }
        }
        Ok(StructureEquations { independent: xs, complement: self.complement.clone(), tableau, torsion })
    }
}

impl StructureEquations {
    fn m(&self) -> usize {
        self.independent.len()
    }

    /// Integral-element equations in the unknowns `p[e*m + i]` (`pi^e = p^e_i dx^i`).
    pub fn integral_rows(&self, homogeneous: bool) -> Vec<LinRow> {
        let m = self.m();
        let mut rows = Vec::new();
        for a in 0..self.tableau.len() {
            for i in 0..m {
                for j in i + 1..m {
                    let mut row = LinRow::default();
                    for (e, coeffs) in self.tableau[a].iter().enumerate() {
                        if !coeffs[j].is_zero() {
                            let k = e * m + i;
                            let v = row.coeffs.remove(&k).unwrap_or_default().add(&coeffs[j]);
                            if !v.is_zero() {
                                row.coeffs.insert(k, v);
                            }
                        }
                        if !coeffs[i].is_zero() {
                            let k = e * m + j;
                            let v = row.coeffs.remove(&k).unwrap_or_default().sub(&coeffs[i]);
                            if !v.is_zero() {
                                row.coeffs.insert(k, v);
                            }
                        }
                    }
                    if !homogeneous {
                        row.constant = self.torsion[a][i][j].clone();
                    }
                    if !row.is_trivial() {
                        rows.push(row);
                    }
                }
            }
        }
        rows
    }

    /// Torsion that no choice of integral element absorbs.
    pub fn essential_torsion(&self) -> Vec<Scalar> {
        let sol = solve_rows(self.integral_rows(false), self.complement.len() * self.m());
        let mut out = Vec::new();
        for r in sol.residual {
            push_unique(&mut out, r.constraint_form());
        }
        out
    }

    /// Dimension of the space of integral elements over a point, i.e. of the
    /// first prolongation of the tableau.
    pub fn prolongation_dim(&self, seed: u64) -> Result<usize> {
        let n = self.complement.len() * self.m();
        let rows = self.integral_rows(true);
        if rows.is_empty() {
            return Ok(n);
        }
        let grid: Vec<Vec<Scalar>> =
            rows.iter().map(|r| (0..n).map(|k| r.coeffs.get(&k).cloned().unwrap_or_default()).collect()).collect();
        Ok(n - random_rank(&grid, seed, DEFAULT_SAMPLES)?)
    }

    /// Characters from polar ranks along seed-derived generic flags.
    /// Ranks `r_k` of the tableau restricted to the first `k+1` flag vectors;
    /// `flag[k][i]` is the `i`-th independent component of the `k`-th vector.
    fn flag_ranks(&self, flag: &[Vec<Scalar>], seed: u64) -> Result<Vec<usize>> {
        let m = self.m();
        let n = self.complement.len();
        let mut ranks = vec![0usize; m];
        let mut stacked: Vec<Vec<Scalar>> = Vec::new();
        for (k, v) in flag.iter().enumerate().take(m) {
            for rows in &self.tableau {
                let row: Vec<Scalar> = (0..n)
                    .map(|e| {
                        let mut acc = Scalar::zero();
                        for (i, c) in v.iter().enumerate() {
                            if !rows[e][i].is_zero() && !c.is_zero() {
                                acc = acc.add(&rows[e][i].mul(c));
                            }
                        }
                        acc
                    })
                    .collect();
                if row.iter().any(|s| !s.is_zero()) {
                    stacked.push(row);
                }
            }
            ranks[k] = if stacked.is_empty() { 0 } else { random_rank(&stacked, seed.wrapping_add(k as u64), DEFAULT_SAMPLES)? };
        }
        Ok(ranks)
    }

    fn assemble(&self, ranks: &[usize]) -> CharacterVector {
        let m = self.m();
        let n = self.complement.len();
        let s0 = self.tableau.len();
        let mut s = Vec::with_capacity(m);
        for k in 0..m {
            let prev = if k == 0 { 0 } else { ranks[k - 1] };
            if k + 1 == m {
                s.push(n - prev);
            } else {
                s.push(ranks[k] - prev);
            }
        }
        let polar_codims = (0..m).map(|k| s0 + if k == 0 { 0 } else { ranks[k - 1] }).collect();
        CharacterVector { s0, s, polar_codims }
    }

    /// Characters for a seed-derived generic flag (maximum over two draws).
    pub fn characters(&self, seed: u64) -> Result<CharacterVector> {
        let m = self.m();
        let mut ranks = vec![0usize; m];
        for draw in 0..2u64 {
            let fp = SamplePoint::new(seed ^ 0x5f1a_9c3d, draw);
            let flag: Vec<Vec<Scalar>> = (0..m).map(|k| (0..m).map(|i| Scalar::from(fp.extra((i * m + k) as u64))).collect()).collect();
            for (r, f) in ranks.iter_mut().zip(self.flag_ranks(&flag, seed)?) {
                *r = (*r).max(f);
            }
        }
        Ok(self.assemble(&ranks))
    }

    /// Characters for the coordinate flag `E_k = span(d/dx^{order[0]}, ..., d/dx^{order[k-1]})`,
    /// with `order` listing positions in the independent coordinates.
    pub fn characters_coordinate_flag(&self, order: &[usize], seed: u64) -> Result<CharacterVector> {
        let m = self.m();
        let flag: Vec<Vec<Scalar>> =
            order.iter().map(|&p| (0..m).map(|i| if i == p { Scalar::one() } else { Scalar::zero() }).collect()).collect();
        Ok(self.assemble(&self.flag_ranks(&flag, seed)?))
    }
}

impl PfaffianSystem {
    pub fn essential_torsion(&self) -> Result<Vec<Scalar>> {
        Ok(self.structure_equations()?.essential_torsion())
    }

    pub fn cartan_characters(&self, seed: u64) -> Result<CharacterVector> {
        self.structure_equations()?.characters(seed)
    }

    pub fn prolongation_dim(&self, seed: u64) -> Result<usize> {
        self.structure_equations()?.prolongation_dim(seed)
    }

    pub fn cartan_test(&self, seed: u64) -> Result<InvolutivityReport> {
        let se = self.structure_equations()?;
        let characters = se.characters(seed)?;
        let prolongation_dim = se.prolongation_dim(seed)?;
        let torsion_essential = se.essential_torsion();
        let cartan_sum = characters.weighted_sum();
        let involutive = torsion_essential.is_empty() && self.zero_forms.is_empty() && prolongation_dim == cartan_sum;
        Ok(InvolutivityReport { characters, prolongation_dim, cartan_sum, involutive, torsion_essential })
    }

    /// First prolongation: the free integral-element parameters become fiber
    /// coordinates named `<pi>_<x>` and `d(pi) - p_i dx^i` joins the generators.
    /// Returns the new system and the names of the added coordinates.
    pub fn prolong(&self) -> Result<(PfaffianSystem, Vec<String>)> {
        let se = self.structure_equations()?;
        let m = se.m();
        let sol = solve_rows(se.integral_rows(false), self.complement.len() * m);
        if let Some(r) = sol.residual.first() {
            return Err(Error::NotLinearPfaffian(format!(
                "prolongation needs torsion-free structure equations, {} remains",
                r.display(&self.chart)
            )));
        }
        let mut chart = self.chart.clone();
        let mut active: BTreeSet<Var> = self.active.clone();
        let mut fresh: BTreeMap<usize, Var> = BTreeMap::new();
        let mut added = Vec::new();
        for &k in &sol.free {
            let (e, i) = (k / m, k % m);
            let pi = self.complement[e];
            let name = chart.fresh_name(&format!("{}_{}", chart.name(pi), chart.name(se.independent[i])));
            let level = chart.level(pi) + 1;
            let v = chart.add(&name, Role::Fiber, level)?;
            active.insert(v);
            fresh.insert(k, v);
            added.push(name);
        }
        let value = |k: usize| -> Scalar {
            if let Some(v) = fresh.get(&k) {
                return Scalar::var(*v);
            }
            let row = &sol.solved.iter().find(|(j, _)| *j == k).expect("solved or free").1;
            let mut s = row.constant.clone();
            for (j, c) in &row.coeffs {
                s = s.add(&c.mul(&Scalar::var(fresh[j])));
            }
            s
        };
        let mut generators = self.generators.clone();
        for (e, &pi) in self.complement.iter().enumerate() {
            let mut g = Form::dvar(pi);
            for (i, &x) in se.independent.iter().enumerate() {
                let p = value(e * m + i);
                if !p.is_zero() {
                    g = g.sub(&Form::dvar(x).scale(&p));
                }
            }
            generators.push(g);
        }
        let mut assumptions = self.assumptions.clone();
        for a in sol.assumptions {
            push_unique(&mut assumptions, a);
        }
        let sys = PfaffianSystem {
            chart,
            active,
            generators,
            leads: Vec::new(),
            zero_forms: self.zero_forms.clone(),
            complement: Vec::new(),
            assumptions,
        };
        Ok((sys.adapt_coframe()?, added))
    }
}
