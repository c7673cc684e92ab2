use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::chart::Names;
use super::poly::{gcd, Monomial, Poly, Rat, Var};
use crate::error::{Error, Result};

/// Canonical rational function: coprime numerator and monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<Poly> for Scalar {
    fn from(p: Poly) -> Self {
        Scalar { num: p, den: Poly::one() }
    }
}

impl From<Rat> for Scalar {
    fn from(c: Rat) -> Self {
        Scalar::from(Poly::constant(c))
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from(Poly::from_int(n))
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Scalar::from(Poly::one())
    }

    pub fn var(v: Var) -> Self {
        Scalar::from(Poly::var(v))
    }

    pub fn rational(n: i64, d: i64) -> Self {
        Scalar::from(Rat::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Scalar::zero();
        }
        if let Some(c) = den.constant_value() {
            return Scalar { num: num.scale(&c.recip()), den: Poly::one() };
        }
        if num.is_constant() {
            let (d, lc) = den.monic();
            return Scalar { num: num.scale(&lc.recip()), den: d };
        }
        let g = gcd(&num, &den);
        let (n, d) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let (d, lc) = d.monic();
        let n = n.scale(&lc.recip());
        if d.is_one() {
            Scalar { num: n, den: Poly::one() }
        } else {
            Scalar { num: n, den: d }
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }

    pub fn constant_value(&self) -> Option<Rat> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.num.contains_var(v) || self.den.contains_var(v)
    }

    pub fn neg(&self) -> Scalar {
        Scalar { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            if self.den.is_one() {
                return Scalar::from(self.num.add(&o.num));
            }
            return Self::canonical(self.num.add(&o.num), self.den.clone());
        }
        if o.den.is_one() {
            return Self::canonical(self.num.add(&o.num.mul(&self.den)), self.den.clone());
        }
        if self.den.is_one() {
            return Self::canonical(self.num.mul(&o.den).add(&o.num), o.den.clone());
        }
        let g = gcd(&self.den, &o.den);
        let a = self.den.div_exact(&g).expect("gcd divides");
        let b = o.den.div_exact(&g).expect("gcd divides");
        let num = self.num.mul(&b).add(&o.num.mul(&a));
        Self::canonical(num, a.mul(&o.den))
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        if let Some(c) = self.constant_value() {
            return o.scale(&c);
        }
        if let Some(c) = o.constant_value() {
            return self.scale(&c);
        }
        if self.den.is_one() && o.den.is_one() {
            return Scalar::from(self.num.mul(&o.num));
        }
        let g1 = gcd(&self.num, &o.den);
        let g2 = gcd(&o.num, &self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = o.den.div_exact(&g1).unwrap();
        let n2 = o.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        let (d, lc) = d1.mul(&d2).monic();
        let n = n1.mul(&n2).scale(&lc.recip());
        if d.is_one() {
            Scalar::from(n)
        } else {
            Scalar { num: n, den: d }
        }
    }

    pub fn scale(&self, c: &Rat) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn recip(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &Scalar) -> Result<Scalar> {
        Ok(self.mul(&o.recip()?))
    }

    pub fn pow(&self, e: i64) -> Result<Scalar> {
        if e < 0 {
            return self.recip()?.pow(-e);
        }
        let e = e as u32;
        Ok(Scalar { num: self.num.pow(e), den: self.den.pow(e) })
    }

    /// Formal partial derivative with respect to `v`.
    pub fn partial(&self, v: Var) -> Scalar {
        let dn = self.num.derivative(v);
        if self.den.is_one() {
            return Scalar::from(dn);
        }
        let dd = self.den.derivative(v);
        if dd.is_zero() {
            return Self::canonical(dn, self.den.clone());
        }
        let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
        Self::canonical(num, self.den.mul(&self.den))
    }

    /// Simultaneous substitution of variables by scalars.
    pub fn substitute(&self, bindings: &BTreeMap<Var, Scalar>) -> Result<Scalar> {
        if bindings.is_empty() || !self.vars().iter().any(|v| bindings.contains_key(v)) {
            return Ok(self.clone());
        }
        let n = subst_poly(&self.num, bindings);
        let d = subst_poly(&self.den, bindings);
        n.div(&d)
    }

    pub fn eval(&self, point: &dyn Fn(Var) -> Rat) -> Result<Rat> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval(point) / d)
    }

    /// Numerator scaled to coprime integer coefficients with a positive
    /// leading coefficient; the form used when reporting constraints.
    pub fn constraint_form(&self) -> Scalar {
        Scalar::from(self.num.primitive_integer())
    }

    /// Squarefree part of the numerator in constraint form: the condition
    /// `self != 0` with repeated factors dropped, so `y^2` and `y` agree.
    pub fn assumption_form(&self) -> Scalar {
        let mut g = self.num.clone();
        for v in self.num.vars() {
            g = gcd(&g, &self.num.derivative(v));
        }
        let sq = if g.is_constant() { self.num.clone() } else { self.num.div_exact(&g).expect("gcd divides") };
        Scalar::from(sq.primitive_integer())
    }

    pub fn rename(&self, f: &dyn Fn(Var) -> Var) -> Scalar {
        Self::canonical(self.num.rename(f), self.den.rename(f))
    }

    pub fn display(&self, names: &dyn Names) -> String {
        if self.den.is_one() {
            return fmt_poly(&self.num, names);
        }
        let n = fmt_poly(&self.num, names);
        let n = if self.num.terms().len() > 1 { format!("({n})") } else { n };
        let d = fmt_poly(&self.den, names);
        let d = if self.den.terms().len() == 1 && self.den.terms()[0].0 .0.len() == 1 {
            d
        } else {
            format!("({d})")
        };
        format!("{n}/{d}")
    }
}

fn subst_poly(p: &Poly, bindings: &BTreeMap<Var, Scalar>) -> Scalar {
    let all_poly = bindings.values().all(|s| s.is_polynomial());
    if all_poly {
        let mut acc = Poly::zero();
        let mut cache: BTreeMap<(Var, u32), Poly> = BTreeMap::new();
        for (m, c) in p.terms() {
            let mut keep = Vec::new();
            let mut t = Poly::constant(c.clone());
            for &(v, e) in &m.0 {
                match bindings.get(&v) {
                    Some(s) => {
                        let f = cache.entry((v, e)).or_insert_with(|| s.numer().pow(e));
                        t = t.mul(f);
                    }
                    None => keep.push((v, e)),
                }
            }
            acc = acc.add(&t.mul_monomial(&Monomial(keep), &Rat::one()));
        }
        return Scalar::from(acc);
    }
    let mut acc = Scalar::zero();
    for (m, c) in p.terms() {
        let mut keep = Vec::new();
        let mut t = Scalar::from(c.clone());
        for &(v, e) in &m.0 {
            match bindings.get(&v) {
                Some(s) => t = t.mul(&s.pow(e as i64).expect("nonnegative power")),
                None => keep.push((v, e)),
            }
        }
        acc = acc.add(&t.mul(&Scalar::from(Poly::monomial(Monomial(keep), Rat::one()))));
    }
    acc
}

fn fmt_rat(c: &Rat) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn fmt_monomial(m: &Monomial, names: &dyn Names) -> String {
    let mut s = String::new();
    for (k, &(v, e)) in m.0.iter().enumerate() {
        if k > 0 {
            s.push('*');
        }
        s.push_str(&names.name_of(v));
        if e > 1 {
            let _ = write!(s, "^{e}");
        }
    }
    s
}

pub fn fmt_poly(p: &Poly, names: &dyn Names) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (k, (m, c)) in p.terms().iter().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if k == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if m.is_one() {
            s.push_str(&fmt_rat(&a));
        } else if a.is_one() {
            s.push_str(&fmt_monomial(m, names));
        } else {
            let _ = write!(s, "{}*{}", fmt_rat(&a), fmt_monomial(m, names));
        }
    }
    s
}
