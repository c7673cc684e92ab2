//! Sparse multivariate polynomials over the rationals.
//!
//! Variables are plain indices; the monomial order is graded lexicographic
//! with variable 0 the largest, so a chart's declaration order fixes every
//! canonical form.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Var = u32;
pub type Rat = BigRational;

/// Exponent vector stored sparsely as `(var, exponent)` pairs sorted by var.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exp(&self, v: Var) -> u32 {
        match self.0.binary_search_by_key(&v, |&(w, _)| w) {
            Ok(i) => self.0[i].1,
            Err(_) => 0,
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == v {
                let f = other.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((v, e - f)),
                }
            } else {
                out.push((v, e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::new();
        for &(v, e) in &self.0 {
            let f = other.exp(v);
            if f > 0 {
                out.push((v, e.min(f)));
            }
        }
        Monomial(out)
    }

    /// Removes `v` from the monomial, returning its exponent.
    pub fn split_var(&self, v: Var) -> (u32, Monomial) {
        let mut rest = Vec::with_capacity(self.0.len());
        let mut e = 0;
        for &(w, f) in &self.0 {
            if w == v {
                e = f;
            } else {
                rest.push((w, f));
            }
        }
        (e, Monomial(rest))
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.iter().map(|&(v, _)| v)
    }
}

/// Graded lexicographic comparison; `Greater` means earlier in a sorted polynomial.
pub fn grlex(a: &Monomial, b: &Monomial) -> Ordering {
    let (da, db) = (a.degree(), b.degree());
    if da != db {
        return da.cmp(&db);
    }
    let (x, y) = (&a.0, &b.0);
    let n = x.len().min(y.len());
    for k in 0..n {
        if x[k].0 != y[k].0 {
            // the monomial carrying the smaller (more significant) variable wins
            return if x[k].0 < y[k].0 { Ordering::Greater } else { Ordering::Less };
        }
        if x[k].1 != y[k].1 {
            return x[k].1.cmp(&y[k].1);
        }
    }
    x.len().cmp(&y.len())
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Key(Monomial);

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        grlex(&other.0, &self.0)
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Terms sorted in decreasing grlex order, no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Monomial, Rat)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(Monomial::one(), c)] }
        }
    }

    pub fn from_int(n: i64) -> Self {
        Poly::constant(Rat::from_integer(BigInt::from(n)))
    }

    pub fn var(v: Var) -> Self {
        Poly { terms: vec![(Monomial::var(v), Rat::one())] }
    }

    pub fn monomial(m: Monomial, c: Rat) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    /// Builds from arbitrary terms, combining duplicates.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut map: BTreeMap<Key, Rat> = BTreeMap::new();
        for (m, c) in terms {
            if c.is_zero() {
                continue;
            }
            let e = map.entry(Key(m)).or_insert_with(Rat::zero);
            *e += c;
        }
        Poly {
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k.0, c)).collect(),
        }
    }

    pub fn terms(&self) -> &[(Monomial, Rat)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn constant_value(&self) -> Option<Rat> {
        if self.terms.is_empty() {
            Some(Rat::zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    pub fn lead(&self) -> Option<&(Monomial, Rat)> {
        self.terms.first()
    }

    pub fn lc(&self) -> Rat {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_else(Rat::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.iter().map(|(m, _)| m.exp(v)).max().unwrap_or(0)
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.terms.iter().flat_map(|(m, _)| m.vars()).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.iter().any(|(m, _)| m.exp(v) > 0)
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect() }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.merge(other, true)
    }

    fn merge(&self, other: &Poly, negate: bool) -> Poly {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match grlex(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let c = if negate { -&t.1 } else { t.1.clone() };
            out.push((t.0.clone(), c));
        }
        Poly { terms: out }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.constant_value() {
            return other.scale(&c);
        }
        if let Some(c) = other.constant_value() {
            return self.scale(&c);
        }
        let mut map: BTreeMap<Key, Rat> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let e = map.entry(Key(ma.mul(mb))).or_insert_with(Rat::zero);
                *e += ca * cb;
            }
        }
        Poly {
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k.0, c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rat) -> Poly {
        Poly { terms: self.terms.iter().map(|(n, d)| (n.mul(m), d * c)).collect() }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn derivative(&self, v: Var) -> Poly {
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e == 0 {
                continue;
            }
            let (_, rest) = m.split_var(v);
            let mono = if e > 1 { rest.mul(&Monomial(vec![(v, e - 1)])) } else { rest };
            terms.push((mono, c * Rat::from_integer(BigInt::from(e))));
        }
        Poly::from_terms(terms)
    }

    pub fn eval(&self, point: &dyn Fn(Var) -> Rat) -> Rat {
        let mut acc = Rat::zero();
        let mut cache: BTreeMap<Var, Rat> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in &m.0 {
                let x = cache.entry(v).or_insert_with(|| point(v)).clone();
                t *= num_traits::pow(x, e as usize);
            }
            acc += t;
        }
        acc
    }

    /// Makes the leading coefficient 1. Returns the divisor used.
    pub fn monic(&self) -> (Poly, Rat) {
        if self.is_zero() {
            return (Poly::zero(), Rat::one());
        }
        let lc = self.lc();
        (self.scale(&lc.recip()), lc)
    }

    /// Gcd of numerators over lcm of denominators, sign of the leading coefficient.
    pub fn rational_content(&self) -> Rat {
        if self.is_zero() {
            return Rat::one();
        }
        let mut g = BigInt::zero();
        let mut l = BigInt::one();
        for (_, c) in &self.terms {
            g = g.gcd(c.numer());
            l = l.lcm(c.denom());
        }
        let r = Rat::new(g, l);
        if self.lc().is_negative() {
            -r
        } else {
            r
        }
    }

    /// Integer coefficients, coprime, positive leading coefficient.
    pub fn primitive_integer(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&self.rational_content().recip())
    }

    /// Gcd of all monomials.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let mut g = match it.next() {
            Some((m, _)) => m.clone(),
            None => return Monomial::one(),
        };
        for (m, _) in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    pub fn div_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(n, c)| (n.div(m).expect("monomial divides"), c.clone())).collect(),
        }
    }

    /// Exact multivariate division; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        if d.terms.len() == 1 {
            let (dm, dc) = &d.terms[0];
            let inv = dc.recip();
            let mut terms = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                terms.push((m.div(dm)?, c * &inv));
            }
            return Some(Poly { terms });
        }
        let (dm, dc) = d.lead().unwrap().clone();
        let inv = dc.recip();
        let mut rem = self.clone();
        let mut quot: Vec<(Monomial, Rat)> = Vec::new();
        while let Some((m, c)) = rem.lead().cloned() {
            let q = m.div(&dm)?;
            let qc = c * &inv;
            rem = rem.sub(&d.mul_monomial(&q, &qc));
            quot.push((q, qc));
        }
        Some(Poly::from_terms(quot))
    }

    /// Coefficients as a polynomial in `v`: index = exponent.
    pub fn as_univariate(&self, v: Var) -> Vec<Poly> {
        let deg = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Monomial, Rat)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.split_var(v);
            buckets[e as usize].push((rest, c.clone()));
        }
        buckets.into_iter().map(Poly::from_terms).collect()
    }

    pub fn from_univariate(v: Var, coeffs: &[Poly]) -> Poly {
        let mut terms = Vec::new();
        for (e, c) in coeffs.iter().enumerate() {
            let vm = if e == 0 { Monomial::one() } else { Monomial(vec![(v, e as u32)]) };
            for (m, r) in c.terms() {
                terms.push((m.mul(&vm), r.clone()));
            }
        }
        Poly::from_terms(terms)
    }

    /// Renames variables through `f`; the map must be injective on the support.
    pub fn rename(&self, f: &dyn Fn(Var) -> Var) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| {
            let mut v: Vec<(Var, u32)> = m.0.iter().map(|&(x, e)| (f(x), e)).collect();
            v.sort_unstable();
            (Monomial(v), c.clone())
        }))
    }
}

/// Monic gcd (the zero polynomial only when both inputs are zero).
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic().0;
    }
    if b.is_zero() {
        return a.monic().0;
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mg = ma.gcd(&mb);
    let a1 = if ma.is_one() { a.clone() } else { a.div_monomial(&ma) };
    let b1 = if mb.is_one() { b.clone() } else { b.div_monomial(&mb) };
    let g = if provably_coprime(&a1, &b1) { Poly::one() } else { gcd_rec(&a1, &b1) };
    let g = if mg.is_one() { g } else { g.mul_monomial(&mg, &Rat::one()) };
    g.monic().0
}

fn gcd_rec(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a.terms.len() == 1 || b.terms.len() == 1 {
        let (m, other) = if a.terms.len() == 1 { (&a.terms[0].0, b) } else { (&b.terms[0].0, a) };
        return Poly::monomial(m.gcd(&other.monomial_content()), Rat::one());
    }
    if a == b {
        return a.clone();
    }
    let va = a.vars();
    let vb = b.vars();
    // a variable missing from one side can only live in the other's content
    if let Some(&v) = va.iter().find(|v| vb.binary_search(v).is_err()) {
        return gcd_rec(&content_in(a, v), b);
    }
    if let Some(&v) = vb.iter().find(|v| va.binary_search(v).is_err()) {
        return gcd_rec(a, &content_in(b, v));
    }
    // main variable: lowest degree keeps the remainder sequence short
    let v = *va.iter().min_by_key(|&&v| (a.degree_in(v).min(b.degree_in(v)), v)).unwrap();
    let ua = a.as_univariate(v);
    let ub = b.as_univariate(v);
    let ca = content_of(&ua);
    let cb = content_of(&ub);
    let cg = gcd_rec(&ca, &cb);
    let mut pa: Vec<Poly> = numeric_primitive(ua.iter().map(|c| c.div_exact(&ca).expect("content divides")).collect());
    let mut pb: Vec<Poly> = numeric_primitive(ub.iter().map(|c| c.div_exact(&cb).expect("content divides")).collect());
    if pa.len() < pb.len() {
        std::mem::swap(&mut pa, &mut pb);
    }
    loop {
        if pb.len() == 1 {
            // nonzero constant in v: primitive gcd is trivial
            return cg;
        }
        let r = prem(&pa, &pb);
        if r.is_empty() {
            let g = Poly::from_univariate(v, &pb);
            return cg.mul(&g.primitive_integer());
        }
        let cr = content_of(&r);
        let r: Vec<Poly> = r.iter().map(|c| c.div_exact(&cr).expect("content divides")).collect();
        pa = pb;
        pb = numeric_primitive(r);
    }
}

/// Images of `p` as a univariate polynomial in `keep`, every other variable
/// set by `point`.
fn specialize(p: &Poly, keep: Var, point: &dyn Fn(Var) -> Rat) -> Poly {
    let terms = p.terms.iter().map(|(m, c)| {
        let (e, rest) = m.split_var(keep);
        let mut k = c.clone();
        for (v, x) in &rest.0 {
            k *= num_traits::pow(point(*v), *x as usize);
        }
        (if e == 0 { Monomial::one() } else { Monomial(vec![(keep, e)]) }, k)
    });
    Poly::from_terms(terms.collect::<Vec<_>>())
}

/// True when a univariate image shows `deg_v gcd = 0` for every shared
/// variable `v`. The gcd divides both leading coefficients in `v`, so at a
/// point where those do not vanish its image keeps its degree and divides
/// the image gcd. `false` means unknown.
fn provably_coprime(a: &Poly, b: &Poly) -> bool {
    let vb = b.vars();
    for v in a.vars() {
        if vb.binary_search(&v).is_err() {
            continue;
        }
        let mut shown = false;
        for attempt in 0..3u64 {
            let point = |w: Var| -> Rat {
                let h = (w as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(attempt.wrapping_mul(0xbf58_476d_1ce4_e5b9));
                Rat::from_integer(BigInt::from((h >> 40) % 1009 + 2))
            };
            let (sa, sb) = (specialize(a, v, &point), specialize(b, v, &point));
            if sa.degree_in(v) != a.degree_in(v) || sb.degree_in(v) != b.degree_in(v) {
                continue;
            }
            shown = gcd_rec(&sa, &sb).degree_in(v) == 0;
            break;
        }
        if !shown {
            return false;
        }
    }
    true
}

/// Divides out the rational content shared by all coefficients; without this
/// a constant polynomial content lets the remainder coefficients grow
/// exponentially.
fn numeric_primitive(coeffs: Vec<Poly>) -> Vec<Poly> {
    let mut g = BigInt::zero();
    let mut l = BigInt::one();
    for c in &coeffs {
        for (_, r) in &c.terms {
            g = g.gcd(r.numer());
            l = l.lcm(r.denom());
        }
    }
    if g.is_zero() {
        return coeffs;
    }
    let k = Rat::new(l, g);
    coeffs.iter().map(|c| c.scale(&k)).collect()
}

fn content_in(p: &Poly, v: Var) -> Poly {
    content_of(&p.as_univariate(v))
}

fn content_of(coeffs: &[Poly]) -> Poly {
    let mut g = Poly::zero();
    let mut nz: Vec<&Poly> = coeffs.iter().filter(|c| !c.is_zero()).collect();
    nz.sort_by_key(|c| (c.terms.len(), c.total_degree()));
    for c in nz {
        g = if g.is_zero() { c.clone() } else { gcd_rec(&g, c) };
        if g.is_constant() {
            return Poly::one();
        }
    }
    if g.is_zero() {
        Poly::one()
    } else {
        g.primitive_integer()
    }
}

/// Pseudo-remainder of univariate polynomials with polynomial coefficients.
/// Returns an empty vector for a zero remainder, otherwise trimmed coefficients.
fn prem(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let mut r: Vec<Poly> = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        let mut next: Vec<Poly> = r.iter().map(|c| c.mul(lb)).collect();
        for (k, bc) in b.iter().enumerate() {
            next[k + shift] = next[k + shift].sub(&bc.mul(&lr));
        }
        next.pop();
        while next.last().map_or(false, |c| c.is_zero()) {
            next.pop();
        }
        r = next;
    }
    while r.last().map_or(false, |c| c.is_zero()) {
        r.pop();
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::var(0)
    }
    fn y() -> Poly {
        Poly::var(1)
    }
    fn z() -> Poly {
        Poly::var(2)
    }

    #[test]
    fn grlex_orders_by_degree_then_variable() {
        assert_eq!(grlex(&Monomial(vec![(1, 2)]), &Monomial(vec![(0, 1)])), Ordering::Greater);
        assert_eq!(grlex(&Monomial(vec![(0, 1)]), &Monomial(vec![(1, 1)])), Ordering::Greater);
        assert_eq!(grlex(&Monomial(vec![(0, 1), (2, 1)]), &Monomial(vec![(1, 2)])), Ordering::Greater);
    }

    #[test]
    fn gcd_of_difference_of_squares() {
        let a = x().mul(&x()).sub(&y().mul(&y()));
        let b = x().sub(&y());
        assert_eq!(gcd(&a, &b), b);
    }

    #[test]
    fn gcd_recovers_common_factor() {
        let f = x().mul(&y()).add(&z()).add(&Poly::from_int(3));
        let g1 = x().sub(&z().mul(&z()));
        let g2 = y().add(&Poly::from_int(2)).mul(&x());
        let a = f.mul(&g1);
        let b = f.mul(&g2).scale(&Rat::new(7.into(), 3.into()));
        assert_eq!(gcd(&a, &b), f.monic().0);
    }

    #[test]
    fn gcd_of_coprime_is_one() {
        let a = x().add(&y());
        let b = x().sub(&y());
        assert!(gcd(&a, &b).is_one());
    }

    #[test]
    fn exact_division() {
        let a = x().add(&y()).pow(3);
        let q = a.div_exact(&x().add(&y())).unwrap();
        assert_eq!(q, x().add(&y()).pow(2));
        assert!(x().div_exact(&y()).is_none());
    }
}
