//! Coefficient systems of structure conditions.

use serde::Serialize;

use super::ansatz::Mode;
use crate::algebra::{Bidegree, Form, Scalar};
use crate::error::{Error, Result};
use crate::operators::{partial, partial_bar};
use crate::structures::AlgebraSpec;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualEntry {
    pub label: String,
    #[serde(skip)]
    pub mask: u32,
    #[serde(serialize_with = "as_text")]
    pub value: Scalar,
}

fn as_text<S: serde::Serializer>(v: &Scalar, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualSystem {
    pub condition: String,
    pub power: usize,
    pub entries: Vec<ResidualEntry>,
}

impl ResidualSystem {
    fn from_form(condition: String, power: usize, f: &Form) -> Self {
        let frame = f.frame();
        let entries = f.terms().map(|(m, c)| ResidualEntry { label: frame.label(m), mask: m, value: c.clone() }).collect();
        ResidualSystem { condition, power, entries }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, label: &str) -> Option<&Scalar> {
        self.entries.iter().find(|e| e.label == label).map(|e| &e.value)
    }

    pub fn equations(&self) -> Vec<Scalar> {
        self.entries.iter().map(|e| e.value.clone()).collect()
    }
}

fn require_closed(spec: &AlgebraSpec, theta: &Form) -> Result<()> {
    if !spec.reduce(&spec.d(theta)).is_zero() {
        return Err(Error::Validation("the Lee form is not closed".into()));
    }
    Ok(())
}

/// `dΩᵐ` and `θ∧Ωᵐ`, reduced by the parameter relations.
pub fn conformal_parts(spec: &AlgebraSpec, omega: &Form, theta: &Form, m: usize) -> Result<(Form, Form)> {
    require_closed(spec, theta)?;
    let p = omega.power(m);
    Ok((spec.reduce(&spec.d(&p)), spec.reduce(&theta.wedge(&p))))
}

/// Coefficients of `dΩᵐ − θ∧Ωᵐ`.
pub fn residual_conformal(spec: &AlgebraSpec, omega: &Form, theta: &Form, m: usize) -> Result<ResidualSystem> {
    let (d, t) = conformal_parts(spec, omega, theta, m)?;
    Ok(ResidualSystem::from_form(format!("d_theta Omega^{}", m), m, &spec.reduce(&d.sub(&t))))
}

pub fn ddbar(spec: &AlgebraSpec, f: &Form) -> Form {
    spec.reduce(&partial(spec, &partial_bar(spec, f)))
}

/// Residual system of `mode` for the given forms.
pub fn residual_for(spec: &AlgebraSpec, mode: Mode, omega: &Form, theta: &Form) -> Result<ResidualSystem> {
    let n = spec.frame().complex_rank().ok_or_else(|| Error::Structural("complex frame required".into()))?;
    match mode {
        Mode::Lck | Mode::Lcht => residual_conformal(spec, omega, theta, 1),
        Mode::Lcb => residual_conformal(spec, omega, theta, mode.power(n)),
        Mode::Kahler | Mode::Balanced => residual_conformal(spec, omega, &Form::zero(spec.frame()), mode.power(n)),
        Mode::Pluriclosed => Ok(ResidualSystem::from_form("ddbar omega".into(), 1, &ddbar(spec, omega))),
        Mode::KGauduchon(k) => {
            let k = if k == 0 { n - 1 } else { k };
            if k == 0 || k >= n {
                return Err(Error::Validation(format!("k = {} outside 1..{}", k, n - 1)));
            }
            let f = spec.reduce(&ddbar(spec, &omega.power(k)).wedge(&omega.power(n - k - 1)));
            let top = f.project_bidegree(Bidegree::new(n, n));
            Ok(ResidualSystem::from_form(format!("ddbar omega^{} omega^{}", k, n - k - 1), k, &top))
        }
    }
}

/// Coefficient of `label` in a form, zero when absent.
pub fn coefficient_at(f: &Form, label: &str) -> Scalar {
    let frame = f.frame();
    f.terms().find(|(m, _)| frame.label(*m) == label).map(|(_, c)| c.clone()).unwrap_or_else(Scalar::zero)
}
