//! The bundled problem corpus.

use super::problem::{parse_problem_with, ProblemDocument, ProblemError};
use crate::symcore::expr::rational;

#[derive(Clone, Copy, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub file: &'static str,
    pub source: &'static str,
    /// Parameter overrides applied on top of the file.
    pub params: &'static [(&'static str, &'static str)],
    pub expected_verdict: &'static str,
}

macro_rules! prob {
    ($f:literal) => {
        include_str!(concat!("../../../../fixtures/", $f))
    };
}

pub const FIXTURES: &[Fixture] = &[
    Fixture { name: "sundermeyer-1a", file: "sundermeyer.prob", source: prob!("sundermeyer.prob"), params: &[("alpha", "1"), ("beta", "2")], expected_verdict: "involutive" },
    Fixture { name: "sundermeyer-1b", file: "sundermeyer.prob", source: prob!("sundermeyer.prob"), params: &[("alpha", "1"), ("beta", "1")], expected_verdict: "involutive" },
    Fixture { name: "sundermeyer-2a", file: "sundermeyer.prob", source: prob!("sundermeyer.prob"), params: &[("alpha", "0"), ("beta", "1")], expected_verdict: "involutive" },
    Fixture { name: "sundermeyer-2b", file: "sundermeyer.prob", source: prob!("sundermeyer.prob"), params: &[("alpha", "0"), ("beta", "0")], expected_verdict: "involutive" },
    Fixture { name: "maxwell", file: "maxwell.prob", source: prob!("maxwell.prob"), params: &[], expected_verdict: "involutive" },
    Fixture { name: "eds-integrability", file: "eds-integrability.prob", source: prob!("eds-integrability.prob"), params: &[], expected_verdict: "involutive" },
    Fixture { name: "eds-strong", file: "eds-strong.prob", source: prob!("eds-strong.prob"), params: &[], expected_verdict: "involutive" },
    Fixture { name: "field-prolong", file: "field-prolong.prob", source: prob!("field-prolong.prob"), params: &[], expected_verdict: "involutive" },
    Fixture { name: "affine", file: "affine.prob", source: prob!("affine.prob"), params: &[], expected_verdict: "involutive" },
    Fixture { name: "saunders", file: "saunders.prob", source: prob!("saunders.prob"), params: &[], expected_verdict: "involutive" },
    Fixture { name: "vacuous", file: "vacuous.prob", source: prob!("vacuous.prob"), params: &[], expected_verdict: "involutive" },
    Fixture { name: "inconsistent", file: "inconsistent.prob", source: prob!("inconsistent.prob"), params: &[], expected_verdict: "empty" },
];

pub fn fixture(name: &str) -> Option<&'static Fixture> {
    FIXTURES.iter().find(|f| f.name == name)
}

impl Fixture {
    pub fn document(&self) -> Result<ProblemDocument, ProblemError> {
        let overrides: Vec<_> = self.params.iter().map(|(n, v)| (n.to_string(), rational(v).expect("fixture parameter"))).collect();
        parse_problem_with(self.source, &overrides)
    }
}
