use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::{Rat, Var};
use super::scalar::Scalar;
use crate::error::{Error, Result};

pub const SAMPLE_BOUND: i64 = 10_000;
pub const DEFAULT_SAMPLES: usize = 3;
const RETRIES: u64 = 8;

/// Deterministic pseudo-random rational assignment to variables: the value of
/// a variable depends only on `(seed, stream, v)`, never on query order.
#[derive(Clone, Copy, Debug)]
pub struct SamplePoint {
    seed: u64,
    stream: u64,
}

impl SamplePoint {
    pub fn new(seed: u64, stream: u64) -> Self {
        SamplePoint { seed, stream }
    }

    fn rng(&self, tag: u64) -> ChaCha8Rng {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.seed.to_le_bytes());
        key[8..16].copy_from_slice(&self.stream.to_le_bytes());
        key[16..24].copy_from_slice(&tag.to_le_bytes());
        ChaCha8Rng::from_seed(key)
    }

    pub fn value(&self, v: Var) -> Rat {
        random_rational(&mut self.rng(v as u64))
    }

    /// An extra independent rational, keyed separately from variables.
    pub fn extra(&self, tag: u64) -> Rat {
        random_rational(&mut self.rng((1u64 << 40) + tag))
    }
}

pub fn random_rational(rng: &mut impl Rng) -> Rat {
    let n = loop {
        let n = rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND);
        if n != 0 {
            break n;
        }
    };
    let d = rng.gen_range(1..=SAMPLE_BOUND);
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Evaluates a grid at `point`, failing on a vanishing denominator.
pub fn eval_grid(matrix: &[Vec<Scalar>], point: &SamplePoint) -> Result<Vec<Vec<Rat>>> {
    matrix
        .iter()
        .map(|row| row.iter().map(|s| s.eval(&|v| point.value(v))).collect::<Result<Vec<_>>>())
        .collect()
}

/// Runs `f` on up to `samples` points derived from `seed`, retrying a point
/// whose evaluation hits a zero denominator, and collects the successes.
pub fn sample_points<T>(seed: u64, samples: usize, mut f: impl FnMut(&SamplePoint) -> Result<T>) -> Result<Vec<T>> {
    let mut out = Vec::new();
    for s in 0..samples.max(1) as u64 {
        for attempt in 0..RETRIES {
            let p = SamplePoint::new(seed, s * RETRIES + attempt);
            match f(&p) {
                Ok(t) => {
                    out.push(t);
                    break;
                }
                Err(Error::DivisionByZero) => continue,
                Err(e) => return Err(e),
            }
        }
    }
    if out.is_empty() {
        return Err(Error::AllSamplesDegenerate);
    }
    Ok(out)
}

/// Generic rank: the maximum exact rank over seed-derived sample points.
pub fn random_rank(matrix: &[Vec<Scalar>], seed: u64, samples: usize) -> Result<usize> {
    if matrix.iter().all(|r| r.iter().all(|s| s.is_constant())) {
        let m: Vec<Vec<Rat>> = matrix.iter().map(|r| r.iter().map(|s| s.constant_value().unwrap()).collect()).collect();
        return Ok(exact_rank(&m));
    }
    let ranks = sample_points(seed, samples, |p| Ok(exact_rank(&eval_grid(matrix, p)?)))?;
    Ok(ranks.into_iter().max().unwrap_or(0))
}

/// Exact rank of a rational matrix by integer elimination with row content
/// reduction; rows are kept sparse.
pub fn exact_rank(matrix: &[Vec<Rat>]) -> usize {
    let rows: Vec<Vec<(usize, BigInt)>> = matrix.iter().map(|r| integer_row(r.iter().cloned().enumerate())).collect();
    sparse_rank(rows)
}

pub fn integer_row(entries: impl Iterator<Item = (usize, Rat)>) -> Vec<(usize, BigInt)> {
    let entries: Vec<(usize, Rat)> = entries.filter(|(_, c)| !c.is_zero()).collect();
    let mut l = BigInt::one();
    for (_, c) in &entries {
        l = l.lcm(c.denom());
    }
    let mut row: Vec<(usize, BigInt)> = entries.into_iter().map(|(j, c)| (j, (c * Rat::from_integer(l.clone())).to_integer())).collect();
    row.sort_by_key(|e| e.0);
    reduce_content(&mut row);
    row
}

fn reduce_content(row: &mut [(usize, BigInt)]) {
    let mut g = BigInt::zero();
    for (_, c) in row.iter() {
        g = g.gcd(c);
        if g.is_one() {
            return;
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for (_, c) in row.iter_mut() {
        *c /= &g;
    }
}

pub fn sparse_rank(mut rows: Vec<Vec<(usize, BigInt)>>) -> usize {
    rows.retain(|r| !r.is_empty());
    let mut rank = 0;
    while !rows.is_empty() {
        // pivot: the row whose leading column is smallest, shortest first
        let (pi, _) = rows.iter().enumerate().min_by_key(|(_, r)| (r[0].0, r.len(), r[0].1.magnitude().bits())).unwrap();
        let pivot = rows.swap_remove(pi);
        let col = pivot[0].0;
        let pc = pivot[0].1.clone();
        rank += 1;
        for r in rows.iter_mut() {
            if r[0].0 != col {
                continue;
            }
            let rc = r[0].1.clone();
            let g = pc.gcd(&rc);
            let a = &pc / &g;
            let b = &rc / &g;
            *r = combine(r, &a, &pivot, &b);
            reduce_content(r);
        }
        rows.retain(|r| !r.is_empty());
    }
    rank
}

/// `a * x - b * y` on sparse rows.
fn combine(x: &[(usize, BigInt)], a: &BigInt, y: &[(usize, BigInt)], b: &BigInt) -> Vec<(usize, BigInt)> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take = match (x.get(i), y.get(j)) {
            (Some(p), Some(q)) => p.0.cmp(&q.0),
            (Some(_), None) => std::cmp::Ordering::Less,
            _ => std::cmp::Ordering::Greater,
        };
        match take {
            std::cmp::Ordering::Less => {
                out.push((x[i].0, a * &x[i].1));
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push((y[j].0, -(b * &y[j].1)));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let v = a * &x[i].1 - b * &y[j].1;
                if !v.is_zero() {
                    out.push((x[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rat {
        Rat::from_integer(BigInt::from(n))
    }

    #[test]
    fn exact_rank_small() {
        let id = vec![vec![q(1), q(0)], vec![q(0), q(1)]];
        assert_eq!(exact_rank(&id), 2);
        let dep = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(1), q(0), q(1)]];
        assert_eq!(exact_rank(&dep), 2);
        assert_eq!(exact_rank(&[vec![q(0), q(0)]]), 0);
    }

    #[test]
    fn proportional_symbolic_rows() {
        let x = Scalar::var(0);
        let m = vec![vec![x.clone(), x], vec![Scalar::one(), Scalar::one()]];
        assert_eq!(random_rank(&m, 7, 3).unwrap(), 1);
    }
}
