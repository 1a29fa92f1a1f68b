//! Parameter registries and the constraints attached to them.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::expr::Context;
use crate::algebra::{GaussRat, Monomial, Scalar, Var};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamKind {
    Real,
    Complex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Param {
    pub name: String,
    pub kind: ParamKind,
    pub nonzero: bool,
    pub positive: bool,
}

impl Param {
    pub fn var(&self) -> Var {
        match self.kind {
            ParamKind::Real => Var::real(&self.name),
            ParamKind::Complex => Var::complex(&self.name),
        }
    }

    pub fn scalar(&self) -> Scalar {
        Scalar::var(self.var())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Constraint {
    /// `p = 0`.
    Relation(Scalar),
    /// `p != 0`.
    Nonzero(Scalar),
    /// Not every listed polynomial vanishes.
    NotAllZero(Vec<Scalar>),
}

impl Constraint {
    /// DSL line describing the constraint.
    pub fn to_line(&self) -> String {
        match self {
            Constraint::Relation(p) => format!("relation {}", p),
            Constraint::Nonzero(p) => format!("nonzero {}", p),
            Constraint::NotAllZero(ps) => {
                format!("notallzero {}", ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", "))
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParamRegistry {
    params: Vec<Param>,
    constraints: Vec<Constraint>,
}

impl ParamRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, name: &str, kind: ParamKind, nonzero: bool, positive: bool) -> Result<&mut Self> {
        if self.get(name).is_some() {
            return Err(Error::Validation(format!("parameter {} declared twice", name)));
        }
        if positive && kind == ParamKind::Complex {
            return Err(Error::Validation(format!("complex parameter {} cannot be positive", name)));
        }
        self.params.push(Param { name: name.to_string(), kind, nonzero: nonzero || positive, positive });
        Ok(self)
    }

    pub fn real(&mut self, name: &str) -> &mut Self {
        self.add(name, ParamKind::Real, false, false).expect("fresh parameter")
    }

    pub fn complex(&mut self, name: &str) -> &mut Self {
        self.add(name, ParamKind::Complex, false, false).expect("fresh parameter")
    }

    pub fn constrain(&mut self, c: Constraint) -> &mut Self {
        self.constraints.push(c);
        self
    }

    pub fn params(&self) -> &[Param] {
        &self.params
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&Param> {
        self.params.iter().find(|p| p.name == name)
    }

    /// Parser context declaring every parameter.
    pub fn context(&self) -> Context {
        let mut ctx = Context::new();
        self.declare_into(&mut ctx);
        ctx
    }

    pub fn declare_into(&self, ctx: &mut Context) {
        for p in &self.params {
            ctx.declare(p.var());
        }
    }

    /// Rewrite rules `leading monomial -> rest` from the relations and their
    /// conjugates.
    pub fn rewrite_rules(&self) -> Vec<(Monomial, Scalar)> {
        let mut rels: Vec<Scalar> = Vec::new();
        for c in &self.constraints {
            if let Constraint::Relation(p) = c {
                rels.push(p.clone());
                let q = p.conj();
                if !is_multiple(&q, p) {
                    rels.push(q);
                }
            }
        }
        rels.iter()
            .filter_map(|p| {
                let (lm, lc) = p.leading_term()?;
                if lm.is_one() {
                    return None;
                }
                let lead = Scalar::monomial_scalar(lm.clone(), lc.clone());
                let inv = lc.inv()?;
                Some((lm.clone(), (&lead - p).scale(&inv)))
            })
            .collect()
    }

    /// Reduces `s` modulo the relations by repeated rewriting. A zero result
    /// proves `s` vanishes on the constraint set.
    pub fn reduce(&self, s: &Scalar) -> Scalar {
        let rules = self.rewrite_rules();
        if rules.is_empty() {
            return s.clone();
        }
        let mut cur = s.clone();
        for _ in 0..16 {
            let before = cur.clone();
            for (lhs, rhs) in &rules {
                cur = cur.rewrite(lhs, rhs, 16);
            }
            if cur == before {
                break;
            }
        }
        cur
    }

    /// Completes a partial assignment with parameters forced by linear
    /// relations, then checks kinds and constraints. Parameters left
    /// unassigned stay symbolic; constraints on them are not checked.
    pub fn resolve(&self, given: &BTreeMap<String, GaussRat>) -> Result<BTreeMap<String, GaussRat>> {
        for name in given.keys() {
            if self.get(name).is_none() {
                return Err(Error::UnknownName(name.clone()));
            }
        }
        let values = self.propagate(given);
        self.check(&values)?;
        Ok(values)
    }

    /// Adds the values forced by relations linear in a single unassigned
    /// parameter.
    pub fn propagate(&self, given: &BTreeMap<String, GaussRat>) -> BTreeMap<String, GaussRat> {
        let mut values = given.clone();
        loop {
            let mut progressed = false;
            for c in &self.constraints {
                let Constraint::Relation(p) = c else { continue };
                let e = substitute_values(p, &values);
                let free = e.variable_names();
                if free.len() != 1 {
                    continue;
                }
                let name = free.into_iter().next().expect("one name");
                let Some(param) = self.get(&name) else { continue };
                let v = param.var();
                if e.variables().len() != 1 {
                    continue;
                }
                let coeffs = e.coefficients_in(&v);
                if coeffs.keys().any(|k| *k > 1) {
                    continue;
                }
                let a = coeffs.get(&1).and_then(|s| s.as_constant());
                let b = coeffs.get(&0).and_then(|s| s.as_constant()).unwrap_or_else(GaussRat::zero);
                if let Some(a) = a {
                    if !a.is_zero() {
                        values.insert(name, -(&b / &a));
                        progressed = true;
                    }
                }
            }
            if !progressed {
                return values;
            }
        }
    }

    /// Checks kinds and every constraint whose parameters are all assigned.
    pub fn check(&self, values: &BTreeMap<String, GaussRat>) -> Result<()> {
        for p in &self.params {
            let Some(v) = values.get(&p.name) else { continue };
            if p.kind == ParamKind::Real && !v.is_real() {
                return Err(Error::Validation(format!("parameter {} is real, got {}", p.name, v)));
            }
            if p.nonzero && v.is_zero() {
                return Err(Error::Validation(format!("parameter {} must be nonzero", p.name)));
            }
            if p.positive && !v.re.is_positive() {
                return Err(Error::Validation(format!("parameter {} must be positive, got {}", p.name, v)));
            }
        }
        for c in &self.constraints {
            let eval = |s: &Scalar| substitute_values(s, values).as_constant();
            match c {
                Constraint::Relation(p) => {
                    if let Some(v) = eval(p) {
                        if !v.is_zero() {
                            return Err(Error::Validation(format!("relation {} = 0 fails ({})", p, v)));
                        }
                    }
                }
                Constraint::Nonzero(p) => {
                    if let Some(v) = eval(p) {
                        if v.is_zero() {
                            return Err(Error::Validation(format!("{} must be nonzero", p)));
                        }
                    }
                }
                Constraint::NotAllZero(ps) => {
                    let vals: Option<Vec<GaussRat>> = ps.iter().map(eval).collect();
                    if let Some(vals) = vals {
                        if vals.iter().all(|v| v.is_zero()) {
                            return Err(Error::Validation(format!("{} must not all vanish", c.to_line())));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The registry left after fixing the given parameters.
    pub fn restrict(&self, values: &BTreeMap<String, GaussRat>) -> ParamRegistry {
        let params = self.params.iter().filter(|p| !values.contains_key(&p.name)).cloned().collect();
        let constraints = self
            .constraints
            .iter()
            .filter_map(|c| {
                let sub = |s: &Scalar| substitute_values(s, values);
                let out = match c {
                    Constraint::Relation(p) => Constraint::Relation(sub(p)),
                    Constraint::Nonzero(p) => Constraint::Nonzero(sub(p)),
                    Constraint::NotAllZero(ps) => Constraint::NotAllZero(ps.iter().map(sub).collect()),
                };
                let symbolic = match &out {
                    Constraint::Relation(p) | Constraint::Nonzero(p) => !p.is_constant(),
                    Constraint::NotAllZero(ps) => ps.iter().all(|p| !p.is_constant()),
                };
                symbolic.then_some(out)
            })
            .collect();
        ParamRegistry { params, constraints }
    }

    /// Facts usable by certificates: polynomials known to be nonzero.
    pub fn nonzero_facts(&self) -> Vec<Scalar> {
        let mut out = Vec::new();
        for p in &self.params {
            if p.nonzero {
                out.push(p.scalar());
            }
        }
        for c in &self.constraints {
            if let Constraint::Nonzero(p) = c {
                out.push(p.clone());
            }
        }
        out
    }

    /// Parameters tagged positive.
    pub fn positive_params(&self) -> Vec<Scalar> {
        self.params.iter().filter(|p| p.positive).map(|p| p.scalar()).collect()
    }
}

fn is_multiple(a: &Scalar, b: &Scalar) -> bool {
    let (Some((m, ca)), Some(cb)) = (a.leading_term(), b.leading_term().map(|(_, c)| c)) else {
        return a.is_zero() && b.is_zero();
    };
    if b.leading_term().map(|(mb, _)| mb) != Some(m) {
        return false;
    }
    let ratio = ca / cb;
    (a - &b.scale(&ratio)).is_zero()
}

/// Substitutes named constant values.
pub fn substitute_values(s: &Scalar, values: &BTreeMap<String, GaussRat>) -> Scalar {
    if values.is_empty() {
        return s.clone();
    }
    let map: BTreeMap<String, Scalar> = values.iter().map(|(k, v)| (k.clone(), Scalar::constant(v.clone()))).collect();
    s.substitute_named(&map)
}
