use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::poly::{Rat, Var};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Independent,
    Field,
    Jet,
    Multiplier,
    /// Grassmann and prolongation coordinates.
    Fiber,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coordinate {
    pub name: String,
    pub role: Role,
    pub level: u32,
}

/// Append-only coordinate registry. A coordinate's index is its variable id
/// and its position in the monomial order, so extending a chart never
/// changes existing canonical forms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Chart {
    coords: Vec<Coordinate>,
    index: HashMap<String, Var>,
    params: BTreeMap<String, Rat>,
}

pub trait Names {
    fn name_of(&self, v: Var) -> String;
}

impl Names for Chart {
    fn name_of(&self, v: Var) -> String {
        self.coords.get(v as usize).map(|c| c.name.clone()).unwrap_or_else(|| format!("_v{v}"))
    }
}

pub fn valid_identifier(s: &str) -> bool {
    let mut ch = s.chars();
    matches!(ch.next(), Some(c) if c.is_ascii_alphabetic()) && ch.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Chart {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, name: &str, role: Role, level: u32) -> Result<Var> {
        if !valid_identifier(name) {
            return Err(Error::InvalidExpression(format!("`{name}` is not an identifier")));
        }
        if self.index.contains_key(name) || self.params.contains_key(name) {
            return Err(Error::DuplicateName(name.to_string()));
        }
        let v = self.coords.len() as Var;
        self.coords.push(Coordinate { name: name.to_string(), role, level });
        self.index.insert(name.to_string(), v);
        Ok(v)
    }

    pub fn bind_param(&mut self, name: &str, value: Rat) -> Result<()> {
        if self.index.contains_key(name) {
            return Err(Error::DuplicateName(name.to_string()));
        }
        self.params.insert(name.to_string(), value);
        Ok(())
    }

    pub fn params(&self) -> &BTreeMap<String, Rat> {
        &self.params
    }

    pub fn param(&self, name: &str) -> Option<&Rat> {
        self.params.get(name)
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn var(&self, name: &str) -> Option<Var> {
        self.index.get(name).copied()
    }

    pub fn expect_var(&self, name: &str) -> Result<Var> {
        self.var(name).ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn coord(&self, v: Var) -> &Coordinate {
        &self.coords[v as usize]
    }

    pub fn name(&self, v: Var) -> &str {
        &self.coords[v as usize].name
    }

    pub fn role(&self, v: Var) -> Role {
        self.coords[v as usize].role
    }

    pub fn level(&self, v: Var) -> u32 {
        self.coords[v as usize].level
    }

    pub fn coords(&self) -> &[Coordinate] {
        &self.coords
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> {
        0..self.coords.len() as Var
    }

    pub fn independent(&self) -> Vec<Var> {
        self.vars().filter(|&v| self.role(v) == Role::Independent).collect()
    }

    pub fn dependent(&self) -> Vec<Var> {
        self.vars().filter(|&v| self.role(v) != Role::Independent).collect()
    }

    pub fn max_level(&self) -> u32 {
        self.coords.iter().map(|c| c.level).max().unwrap_or(0)
    }

    /// A fresh name derived from `base` that is not yet taken.
    pub fn fresh_name(&self, base: &str) -> String {
        if !self.index.contains_key(base) && !self.params.contains_key(base) {
            return base.to_string();
        }
        (1..).map(|k| format!("{base}_{k}")).find(|n| !self.index.contains_key(n)).unwrap()
    }
}
