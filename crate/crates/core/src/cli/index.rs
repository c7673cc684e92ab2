//! Index-range preprocessing: `sum(i, j: ...)` expansion and flattening of
//! indexed names such as `F[1,2]` into `F_12`.

use std::collections::{BTreeMap, BTreeSet};

/// Index letters with their inclusive ranges, plus antisymmetric families.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IndexScope {
    pub ranges: BTreeMap<String, (i64, i64)>,
    pub antisym: BTreeSet<String>,
}

/// Failure with a 0-based character offset into the processed text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexError {
    pub offset: usize,
    pub msg: String,
}

fn err<T>(offset: usize, msg: impl Into<String>) -> Result<T, IndexError> {
    Err(IndexError { offset, msg: msg.into() })
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic()
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Offset of the bracket closing the one opened at `open`.
fn matching(chars: &[char], open: usize) -> Option<usize> {
    let (l, r) = (chars[open], if chars[open] == '(' { ')' } else { ']' });
    let mut depth = 0usize;
    for (i, &c) in chars.iter().enumerate().skip(open) {
        if c == l {
            depth += 1;
        } else if c == r {
            depth -= 1;
            if depth == 0 {
                return Some(i);
            }
        }
    }
    None
}

impl IndexScope {
    /// Expands sums, then flattens every indexed name.
    pub fn expand(&self, text: &str) -> Result<String, IndexError> {
        let summed = self.expand_sums(text, &BTreeMap::new())?;
        self.flatten(&summed)
    }

    fn range(&self, letter: &str, at: usize) -> Result<(i64, i64), IndexError> {
        match self.ranges.get(letter) {
            Some(&r) => Ok(r),
            None => err(at, format!("index `{letter}` has no declared range")),
        }
    }

    /// Replaces bound letters inside `[...]` groups and expands nested sums.
    fn expand_sums(&self, text: &str, bound: &BTreeMap<String, i64>) -> Result<String, IndexError> {
        let chars: Vec<char> = text.chars().collect();
        let mut out = String::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if is_ident_start(c) && (i == 0 || !is_ident_char(chars[i - 1])) {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i]) {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                let mut j = i;
                while j < chars.len() && chars[j] == ' ' {
                    j += 1;
                }
                if word == "sum" && j < chars.len() && chars[j] == '(' {
                    let close = matching(&chars, j).ok_or(IndexError { offset: j, msg: "unbalanced `(` in sum".into() })?;
                    let inner: String = chars[j + 1..close].iter().collect();
                    let Some(colon) = inner.find(':') else {
                        return err(j, "sum needs `letters: body`");
                    };
                    let letters: Vec<String> = inner[..colon].split(',').map(|s| s.trim().to_string()).collect();
                    let body = &inner[colon + 1..];
                    let mut ranges = Vec::new();
                    for l in &letters {
                        if l.is_empty() || !l.chars().all(is_ident_char) {
                            return err(j + 1, format!("bad summation index `{l}`"));
                        }
                        if bound.contains_key(l) {
                            return err(j + 1, format!("summation index `{l}` shadows an outer index"));
                        }
                        ranges.push(self.range(l, j + 1)?);
                    }
                    let mut terms = Vec::new();
                    for cur in cartesian(&ranges) {
                        let mut b = bound.clone();
                        for (l, &v) in letters.iter().zip(&cur) {
                            b.insert(l.clone(), v);
                        }
                        let t = self.expand_sums(body, &b).map_err(|e| IndexError { offset: e.offset + j + 2 + colon, msg: e.msg })?;
                        terms.push(format!("({})", t.trim()));
                    }
                    if terms.is_empty() {
                        out.push('0');
                    } else {
                        out.push('(');
                        out.push_str(&terms.join(" + "));
                        out.push(')');
                    }
                    i = close + 1;
                } else {
                    out.push_str(&word);
                }
                continue;
            }
            if c == '[' {
                let close = matching(&chars, i).ok_or(IndexError { offset: i, msg: "unbalanced `[`".into() })?;
                let inner: String = chars[i + 1..close].iter().collect();
                let items: Vec<String> = inner
                    .split(',')
                    .map(|s| {
                        let s = s.trim();
                        bound.get(s).map_or_else(|| s.to_string(), |v| v.to_string())
                    })
                    .collect();
                out.push('[');
                out.push_str(&items.join(","));
                out.push(']');
                i = close + 1;
                continue;
            }
            out.push(c);
            i += 1;
        }
        Ok(out)
    }

    /// Rewrites `Name[a,b]` with integer indices into flat names.
    fn flatten(&self, text: &str) -> Result<String, IndexError> {
        let chars: Vec<char> = text.chars().collect();
        let mut out = String::new();
        let mut i = 0;
        while i < chars.len() {
            if is_ident_start(chars[i]) && (i == 0 || !is_ident_char(chars[i - 1])) {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i]) {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                if i < chars.len() && chars[i] == '[' {
                    let close = matching(&chars, i).ok_or(IndexError { offset: i, msg: "unbalanced `[`".into() })?;
                    let inner: String = chars[i + 1..close].iter().collect();
                    let mut idx = Vec::new();
                    for s in inner.split(',') {
                        let s = s.trim();
                        match s.parse::<i64>() {
                            Ok(v) => idx.push(v),
                            Err(_) => return err(i + 1, format!("free index `{s}` in {word}[{inner}]")),
                        }
                    }
                    out.push_str(&self.flat_ref(&word, &idx));
                    i = close + 1;
                } else {
                    out.push_str(&word);
                }
                continue;
            }
            if chars[i] == '[' {
                return err(i, "index brackets must follow a name");
            }
            out.push(chars[i]);
            i += 1;
        }
        Ok(out)
    }

    /// Expression text for one family member, applying antisymmetry.
    fn flat_ref(&self, family: &str, idx: &[i64]) -> String {
        if self.antisym.contains(family) && idx.len() == 2 {
            if idx[0] == idx[1] {
                return "0".to_string();
            }
            if idx[0] > idx[1] {
                return format!("(-{})", flat_name(family, &[idx[1], idx[0]]));
            }
        }
        flat_name(family, idx)
    }

    /// Expands a declaration such as `A[i]` or `F[i,j]` into flat names.
    pub fn declare(&self, item: &str) -> Result<Vec<String>, IndexError> {
        let item = item.trim();
        let Some(open) = item.find('[') else {
            return Ok(vec![item.to_string()]);
        };
        if !item.ends_with(']') {
            return err(open, "expected `]` at the end of an indexed declaration");
        }
        let family = &item[..open];
        let letters: Vec<&str> = item[open + 1..item.len() - 1].split(',').map(str::trim).collect();
        let mut ranges = Vec::new();
        for l in &letters {
            ranges.push(match l.parse::<i64>() {
                Ok(v) => (v, v),
                Err(_) => self.range(l, open + 1)?,
            });
        }
        let anti = self.antisym.contains(family) && letters.len() == 2;
        Ok(cartesian(&ranges)
            .into_iter()
            .filter(|cur| !anti || cur[0] < cur[1])
            .map(|cur| flat_name(family, &cur))
            .collect())
    }
}

/// Every index tuple in the product of inclusive ranges, last index fastest.
fn cartesian(ranges: &[(i64, i64)]) -> Vec<Vec<i64>> {
    ranges.iter().fold(vec![Vec::new()], |acc, &(lo, hi)| {
        acc.into_iter()
            .flat_map(|prefix| {
                (lo..=hi).map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect()
    })
}

pub fn flat_name(family: &str, idx: &[i64]) -> String {
    let digits: Vec<String> = idx.iter().map(|v| v.to_string()).collect();
    format!("{family}_{}", digits.join(""))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scope() -> IndexScope {
        let mut s = IndexScope::default();
        for l in ["i", "j", "k"] {
            s.ranges.insert(l.into(), (1, 3));
        }
        s.antisym.insert("F".into());
        s
    }

    #[test]
    fn sums_and_antisymmetry() {
        let s = scope();
        assert_eq!(s.expand("sum(i: x[i])").unwrap(), "((x_1) + (x_2) + (x_3))");
        assert_eq!(s.expand("F[2,1] + F[1,1]").unwrap(), "(-F_12) + 0");
        assert_eq!(s.expand("sum(i: sum(j: g[i,j]))").unwrap().matches("g_").count(), 9);
        assert!(s.expand("F[i,2]").is_err());
    }

    #[test]
    fn declarations() {
        let s = scope();
        assert_eq!(s.declare("F[i,j]").unwrap(), vec!["F_12", "F_13", "F_23"]);
        assert_eq!(s.declare("A[k]").unwrap(), vec!["A_1", "A_2", "A_3"]);
        assert_eq!(s.declare("u").unwrap(), vec!["u"]);
    }
}
