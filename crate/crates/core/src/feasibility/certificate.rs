//! Nonexistence certificates: proof trees over the residual equations of an
//! ansatz, re-checked by exact polynomial arithmetic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ansatz::{build_ansatz, GenericAnsatz, Mode};
use super::residual::residual_for;
use crate::algebra::expr::{parse_scalar, Context};
use crate::algebra::{GaussRat, Scalar};
use crate::error::{Error, Result};
use crate::runtime;
use crate::structures::AlgebraSpec;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub ansatz: String,
    /// Parameter values; absent parameters stay symbolic.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, String>,
    /// Unknowns pinned to a normal form before the residual is taken.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub fixed: BTreeMap<String, String>,
    pub atoms: Vec<String>,
    pub tree: Node,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Node {
    /// `result = Σ coef·E[eq]`.
    Combine { terms: Vec<Term>, result: String, next: Box<Node> },
    /// `E[eq] = Π factor · result` with every factor nonzero, so `result = 0`.
    Cancel { eq: usize, factor: Vec<String>, result: String, next: Box<Node> },
    Conjugate { eq: usize, next: Box<Node> },
    Split { var: String, zero: Box<Node>, nonzero: Box<Node> },
    /// `scale·E[eq] = Σ coef·Π factors`, a sum of nonnegative terms with a
    /// strictly positive one.
    Contradiction { eq: usize, scale: String, terms: Vec<Summand> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coef: String,
    pub eq: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summand {
    pub coef: String,
    pub factors: Vec<Factor>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Factor {
    Atom(String),
    Sq(String),
    Abs2(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CertVerdict {
    Valid,
    Invalid { step: usize, reason: String },
}

impl CertVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, CertVerdict::Valid)
    }
}

impl fmt::Display for CertVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertVerdict::Valid => write!(f, "VALID"),
            CertVerdict::Invalid { step, reason } => write!(f, "INVALID at step {}: {}", step, reason),
        }
    }
}

impl Certificate {
    pub fn from_json(text: &str) -> Result<Certificate> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn mode(&self) -> Result<Mode> {
        Mode::parse(&self.ansatz)
    }

    /// Number of nodes in the proof tree.
    pub fn steps(&self) -> usize {
        fn count(n: &Node) -> usize {
            match n {
                Node::Combine { next, .. } | Node::Cancel { next, .. } | Node::Conjugate { next, .. } => 1 + count(next),
                Node::Split { zero, nonzero, .. } => 1 + count(zero) + count(nonzero),
                Node::Contradiction { .. } => 1,
            }
        }
        count(&self.tree)
    }
}

/// Everything the checker may rely on.
#[derive(Clone, Debug)]
pub struct CheckContext {
    pub equations: Vec<Scalar>,
    /// Monomial label of each base equation.
    pub labels: Vec<String>,
    /// Strictly positive polynomials.
    pub allowed_atoms: Vec<Scalar>,
    /// Polynomials known to be nonzero.
    pub nonzero_facts: Vec<Scalar>,
    /// Names that may be split on.
    pub unknowns: BTreeSet<String>,
    pub parser: Context,
    pub spec: AlgebraSpec,
}

impl CheckContext {
    /// Equations, atoms and facts of `ansatz` after pinning `fixed`.
    pub fn from_ansatz(ansatz: &GenericAnsatz, fixed: &BTreeMap<String, Scalar>) -> Result<CheckContext> {
        let spec = &ansatz.spec;
        let omega = ansatz.omega.substitute_named(fixed);
        let theta = ansatz.theta.substitute_named(fixed);
        let residual = residual_for(spec, ansatz.mode, &omega, &theta)?;
        let sub = |s: &Scalar| spec.params().reduce(&s.substitute_named(fixed));
        Ok(CheckContext {
            equations: residual.equations(),
            labels: residual.entries.iter().map(|e| e.label.clone()).collect(),
            allowed_atoms: ansatz.strict_atoms().iter().map(sub).collect(),
            nonzero_facts: spec.params().nonzero_facts(),
            unknowns: ansatz.unknowns.iter().map(|u| u.name.clone()).filter(|n| !fixed.contains_key(n)).collect(),
            parser: ansatz.context(),
            spec: spec.clone(),
        })
    }
}

#[derive(Clone)]
struct Branch {
    eqs: Vec<Scalar>,
    atoms: Vec<Scalar>,
    facts: Vec<Scalar>,
    nonzero: BTreeSet<String>,
    zero: BTreeMap<String, Scalar>,
}

struct Fail(String);

type Step<T> = std::result::Result<T, Fail>;

struct Checker<'a> {
    ctx: &'a CheckContext,
    step: usize,
}

impl<'a> Checker<'a> {
    fn reduce(&self, s: &Scalar) -> Scalar {
        self.ctx.spec.params().reduce(s)
    }

    fn same(&self, a: &Scalar, b: &Scalar) -> bool {
        self.reduce(&(a - b)).is_zero()
    }

    fn parse(&self, b: &Branch, text: &str) -> Step<Scalar> {
        let s = parse_scalar(text, &self.ctx.parser).map_err(|e| Fail(e.to_string()))?;
        Ok(self.reduce(&s.substitute_named(&b.zero)))
    }

    /// A factor argument: a single unknown with unit coefficient.
    fn unknown(&self, b: &Branch, text: &str) -> Step<Scalar> {
        let s = self.parse(b, text)?;
        let single = match s.leading_term() {
            Some((m, c)) => s.num_terms() == 1 && m.degree() == 1 && num_traits::One::is_one(c),
            None => false,
        };
        if !single {
            return Err(Fail(format!("{} is not an unknown", text)));
        }
        Ok(s)
    }

    fn eq(&self, b: &Branch, i: usize) -> Step<Scalar> {
        b.eqs.get(i).cloned().ok_or_else(|| Fail(format!("no equation {}", i)))
    }

    fn positive_constant(&self, s: &Scalar) -> bool {
        s.as_constant().and_then(|c| if c.is_real() { c.real_sign() } else { None }) == Some(1)
    }

    fn is_atom(&self, b: &Branch, s: &Scalar) -> bool {
        b.atoms.iter().any(|a| self.same(a, s))
    }

    fn is_nonzero(&self, b: &Branch, s: &Scalar) -> bool {
        if let Some(c) = s.as_constant() {
            return !num_traits::Zero::is_zero(&c);
        }
        if self.is_atom(b, s) {
            return true;
        }
        let vars = s.variables();
        if s.num_terms() == 1 && vars.len() == 1 {
            let (m, _) = s.leading_term().expect("one term");
            let v = vars.iter().next().expect("one var");
            if m.degree() == 1 && b.nonzero.contains(v.name()) {
                return true;
            }
        }
        b.facts.iter().any(|f| {
            [f.clone(), f.conj()].iter().any(|g| {
                let (Some((mf, cf)), Some((ms, cs))) = (g.leading_term(), s.leading_term()) else { return false };
                mf == ms && self.same(&g.scale(&(cs / cf)), s)
            })
        })
    }

    fn node(&mut self, b: &mut Branch, n: &Node) -> Step<()> {
        let here = self.step;
        self.step += 1;
        let fail = |m: String| -> Fail { Fail(format!("{}|{}", here, m)) };
        match n {
            Node::Combine { terms, result, next } => {
                let mut sum = Scalar::zero();
                for t in terms {
                    let c = self.parse(b, &t.coef).map_err(|e| fail(e.0))?;
                    let e = self.eq(b, t.eq).map_err(|e| fail(e.0))?;
                    sum.add_assign_ref(&c.mul_ref(&e));
                }
                let r = self.parse(b, result).map_err(|e| fail(e.0))?;
                if !self.same(&sum, &r) {
                    return Err(fail(format!("combination gives {}, not {}", self.reduce(&sum), r)));
                }
                b.eqs.push(r);
                self.node(b, next)
            }
            Node::Cancel { eq, factor, result, next } => {
                let e = self.eq(b, *eq).map_err(|e| fail(e.0))?;
                let mut prod = self.parse(b, result).map_err(|e| fail(e.0))?;
                let r = prod.clone();
                for f in factor {
                    let s = self.parse(b, f).map_err(|e| fail(e.0))?;
                    if !self.is_nonzero(b, &s) {
                        return Err(fail(format!("factor {} is not known to be nonzero", s)));
                    }
                    prod = prod.mul_ref(&s);
                }
                if !self.same(&e, &prod) {
                    return Err(fail(format!("equation {} is not the stated product", eq)));
                }
                b.eqs.push(r);
                self.node(b, next)
            }
            Node::Conjugate { eq, next } => {
                let e = self.eq(b, *eq).map_err(|e| fail(e.0))?;
                b.eqs.push(self.reduce(&e.conj()));
                self.node(b, next)
            }
            Node::Split { var, zero, nonzero } => {
                if !self.ctx.unknowns.contains(var) || b.zero.contains_key(var) || b.nonzero.contains(var) {
                    return Err(fail(format!("cannot split on {}", var)));
                }
                let mut z = b.clone();
                let sub: BTreeMap<String, Scalar> = [(var.clone(), Scalar::zero())].into();
                let apply = |v: &mut Vec<Scalar>| {
                    for s in v.iter_mut() {
                        *s = self.reduce(&s.substitute_named(&sub));
                    }
                };
                apply(&mut z.eqs);
                apply(&mut z.atoms);
                z.facts.retain(|f| !f.variable_names().contains(var));
                z.zero.insert(var.clone(), Scalar::zero());
                self.node(&mut z, zero)?;
                let mut nz = b.clone();
                nz.nonzero.insert(var.clone());
                self.node(&mut nz, nonzero)
            }
            Node::Contradiction { eq, scale, terms } => {
                let e = self.eq(b, *eq).map_err(|e| fail(e.0))?;
                let lhs = self.parse(b, scale).map_err(|e| fail(e.0))?.mul_ref(&e);
                let mut rhs = Scalar::zero();
                let mut strict = false;
                for t in terms {
                    let c = self.parse(b, &t.coef).map_err(|e| fail(e.0))?;
                    if !self.positive_constant(&c) {
                        return Err(fail(format!("coefficient {} is not a positive rational", c)));
                    }
                    let mut prod = c;
                    let mut all_strict = true;
                    for f in &t.factors {
                        let (val, pos) = match f {
                            Factor::Atom(x) => {
                                let s = self.parse(b, x).map_err(|e| fail(e.0))?;
                                if !self.is_atom(b, &s) {
                                    return Err(fail(format!("{} is not a declared atom", s)));
                                }
                                (s, true)
                            }
                            Factor::Sq(x) => {
                                let s = self.unknown(b, x).map_err(|e| fail(e.0))?;
                                if !self.same(&s, &s.conj()) {
                                    return Err(fail(format!("{} is not real", s)));
                                }
                                let pos = self.is_nonzero(b, &s);
                                (s.mul_ref(&s), pos)
                            }
                            Factor::Abs2(x) => {
                                let s = self.unknown(b, x).map_err(|e| fail(e.0))?;
                                let pos = self.is_nonzero(b, &s);
                                (s.mul_ref(&s.conj()), pos)
                            }
                        };
                        all_strict &= pos;
                        prod = prod.mul_ref(&val);
                    }
                    strict |= all_strict;
                    rhs.add_assign_ref(&prod);
                }
                if !strict {
                    return Err(fail("no strictly positive summand".into()));
                }
                if !self.same(&lhs, &rhs) {
                    return Err(fail(format!("scaled equation is {}, not the stated sum", self.reduce(&lhs))));
                }
                Ok(())
            }
        }
    }
}

/// Checks `cert` against a prepared context.
pub fn check_certificate(ctx: &CheckContext, cert: &Certificate) -> CertVerdict {
    let mut b = Branch {
        eqs: ctx.equations.clone(),
        atoms: Vec::new(),
        facts: ctx.nonzero_facts.clone(),
        nonzero: BTreeSet::new(),
        zero: BTreeMap::new(),
    };
    let mut ck = Checker { ctx, step: 0 };
    for a in &cert.atoms {
        let s = match ck.parse(&b, a) {
            Ok(s) => s,
            Err(Fail(m)) => return CertVerdict::Invalid { step: 0, reason: m },
        };
        if !ctx.allowed_atoms.iter().any(|x| ck.same(x, &s)) {
            return CertVerdict::Invalid { step: 0, reason: format!("{} is not a positivity atom of the ansatz", s) };
        }
        b.atoms.push(s);
    }
    match ck.node(&mut b, &cert.tree) {
        Ok(()) => CertVerdict::Valid,
        Err(Fail(m)) => {
            let (step, reason) = m.split_once('|').expect("tagged failure");
            CertVerdict::Invalid { step: step.parse().expect("step index"), reason: reason.to_string() }
        }
    }
}

fn constants(text: &BTreeMap<String, String>) -> Result<BTreeMap<String, GaussRat>> {
    text.iter()
        .map(|(k, v)| {
            let s = parse_scalar(v, &Context::new())?;
            let c = s.as_constant().ok_or_else(|| Error::Parse(format!("{} = {} is not a constant", k, v)))?;
            Ok((k.clone(), c))
        })
        .collect()
}

/// Instantiates the certificate's parameters, rebuilds the ansatz when they
/// change it, and returns the context the proof is checked against.
pub fn prepare(spec: &AlgebraSpec, ansatz: Option<&GenericAnsatz>, cert: &Certificate) -> Result<CheckContext> {
    let mode = cert.mode()?;
    let owned;
    let ansatz = match ansatz {
        Some(a) if cert.params.is_empty() => {
            if a.mode != mode {
                return Err(Error::Validation(format!("certificate is for {}, ansatz is {}", mode, a.mode)));
            }
            a
        }
        _ => {
            let s = if cert.params.is_empty() { spec.clone() } else { spec.evaluate(&constants(&cert.params)?)? };
            owned = build_ansatz(&s, mode)?;
            &owned
        }
    };
    let mut fixed = BTreeMap::new();
    for (k, v) in &cert.fixed {
        let u = ansatz.unknown(k).ok_or_else(|| Error::UnknownName(k.clone()))?;
        let s = parse_scalar(v, &ansatz.context())?;
        if u.real && !s.is_real() {
            return Err(Error::Validation(format!("{} is real", k)));
        }
        fixed.insert(k.clone(), s);
    }
    CheckContext::from_ansatz(ansatz, &fixed)
}

/// Validates `cert` for `spec`, building the ansatz it names.
pub fn certificate_check(spec: &AlgebraSpec, ansatz: Option<&GenericAnsatz>, cert: &Certificate) -> Result<CertVerdict> {
    let ctx = prepare(spec, ansatz, cert)?;
    Ok(check_certificate(&ctx, cert))
}

/// Checks several certificates concurrently; verdicts keep input order.
pub fn check_all(jobs: &[(AlgebraSpec, Certificate)]) -> Vec<Result<CertVerdict>> {
    runtime::install(|| jobs.par_iter().map(|(s, c)| certificate_check(s, None, c)).collect())
}
