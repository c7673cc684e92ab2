//! Differential forms and decomposable multivectors on a chart.

pub mod coframe;
pub mod form;

pub use coframe::{assemble, coefficients};
pub use form::{form_from_expr, form_from_expr_with, Form, MultiVector, Substitution, VectorField};

use crate::error::Result;
use crate::symcore::{parse_expr, Chart};

/// Parses a form expression such as `d(u) /\ d(y) /\ (d(x) - y*d(z))`.
pub fn form(src: &str, chart: &Chart) -> Result<Form> {
    let e = parse_expr(src).map_err(|e| crate::Error::InvalidExpression(format!("`{src}`: {e}")))?;
    form_from_expr(&e, chart)
}

/// `dx^1 /\ ... /\ dx^m` over the independent coordinates of `chart`.
pub fn volume_form(chart: &Chart) -> Form {
    Form::basis(&chart.independent())
}

/// `d_{k_n} _| ( ... (d_{k_1} _| eta))`; `eta(chart, &[])` is the volume form.
pub fn eta(chart: &Chart, ks: &[crate::symcore::Var]) -> Form {
    ks.iter().fold(volume_form(chart), |acc, &k| {
        let mut x = VectorField::new();
        x.insert(k, crate::symcore::Scalar::one());
        acc.contract_vector(&x)
    })
}
