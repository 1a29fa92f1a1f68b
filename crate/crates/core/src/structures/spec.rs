//! Lie algebras given by structure equations on a real or complex coframe.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use super::params::{substitute_values, ParamKind, ParamRegistry};
use crate::algebra::expr::Context;
use crate::algebra::form::index_list;
use crate::algebra::linalg::Matrix;
use crate::algebra::{Bidegree, Form, Frame, GaussRat, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraSpec {
    pub name: String,
    frame: Frame,
    /// `d` of the generators `phi1..phin` (complex frame) or `e1..em`.
    d: Vec<Form>,
    params: ParamRegistry,
    lee: Option<Form>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub jacobi_valid: bool,
    /// `None` for real frames.
    pub integrable: Option<bool>,
    pub unimodular: bool,
    /// `None` when it could not be decided.
    pub nilpotent: Option<bool>,
    /// `None` for real frames.
    pub abelian_j: Option<bool>,
    pub failures: Vec<String>,
}

impl ValidationReport {
    /// Jacobi identity and integrability; the other flags are descriptive.
    pub fn is_valid(&self) -> bool {
        self.jacobi_valid && self.integrable != Some(false)
    }
}

impl AlgebraSpec {
    pub fn new(name: &str, frame: Frame) -> Self {
        let count = match frame {
            Frame::Complex(n) => n,
            Frame::Real(m) => m,
        };
        AlgebraSpec { name: name.to_string(), frame, d: vec![Form::zero(frame); count], params: ParamRegistry::new(), lee: None }
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    /// Number of generators carrying their own structure equation.
    pub fn generator_count(&self) -> usize {
        self.d.len()
    }

    pub fn params(&self) -> &ParamRegistry {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut ParamRegistry {
        &mut self.params
    }

    pub fn lee_hint(&self) -> Option<&Form> {
        self.lee.as_ref()
    }

    pub fn set_lee_hint(&mut self, lee: Form) -> Result<()> {
        self.check_frame(&lee)?;
        self.lee = Some(lee);
        Ok(())
    }

    /// Sets `d` of generator `j` (1-based).
    pub fn set_d(&mut self, j: usize, f: Form) -> Result<()> {
        if j == 0 || j > self.d.len() {
            return Err(Error::Structural(format!("generator index {} out of range 1..{}", j, self.d.len())));
        }
        self.check_frame(&f)?;
        if !f.is_zero() && f.terms().any(|(m, _)| m.count_ones() != 2) {
            return Err(Error::Structural(format!("d of generator {} must be a 2-form", j)));
        }
        self.d[j - 1] = f;
        Ok(())
    }

    fn check_frame(&self, f: &Form) -> Result<()> {
        if f.frame() != self.frame {
            return Err(Error::Structural(format!("form over {:?} used with spec over {:?}", f.frame(), self.frame)));
        }
        Ok(())
    }

    /// The stored structure equation of generator `j` (1-based).
    pub fn d_table(&self, j: usize) -> &Form {
        &self.d[j - 1]
    }

    /// `d` of the coframe generator with 0-based index `g`.
    pub fn d_generator(&self, g: usize) -> Form {
        match self.frame {
            Frame::Complex(n) if g >= n => self.d[g - n].conjugate(),
            _ => self.d[g].clone(),
        }
    }

    /// Parser context with the frame generators and all parameters.
    pub fn context(&self) -> Context {
        let mut ctx = Context::with_frame(self.frame);
        self.params.declare_into(&mut ctx);
        ctx
    }

    /// `d` of a basis monomial by the Leibniz rule.
    pub fn d_monomial(&self, mask: u32) -> Form {
        let idx = index_list(mask);
        let mut out = Form::zero(self.frame);
        for (k, &g) in idx.iter().enumerate() {
            let dg = self.d_generator(g);
            if dg.is_zero() {
                continue;
            }
            let before = Form::from_indices(self.frame, &idx[..k], Scalar::one());
            let after = Form::from_indices(self.frame, &idx[k + 1..], Scalar::one());
            let term = before.wedge(&dg).wedge(&after);
            out = if k % 2 == 0 { out.add(&term) } else { out.sub(&term) };
        }
        out
    }

    pub fn d(&self, f: &Form) -> Form {
        let mut out = Form::zero(self.frame);
        for (m, c) in f.terms() {
            out = out.add(&self.d_monomial(m).scale(c));
        }
        out
    }

    /// Reduces every coefficient modulo the parameter relations.
    pub fn reduce(&self, f: &Form) -> Form {
        if self.params.constraints().is_empty() {
            return f.clone();
        }
        f.map_coefficients(|c| self.params.reduce(c))
    }

    pub fn is_constant(&self) -> bool {
        self.d.iter().all(|f| f.is_constant())
    }

    /// Substitutes parameter values into a form after checking them.
    pub fn evaluate_form(&self, f: &Form, assignment: &BTreeMap<String, GaussRat>) -> Result<Form> {
        let values = self.params.resolve(assignment)?;
        Ok(substitute_form(f, &values))
    }

    /// Instantiates parameters; relations may complete the assignment.
    pub fn evaluate(&self, assignment: &BTreeMap<String, GaussRat>) -> Result<AlgebraSpec> {
        let values = self.params.resolve(assignment)?;
        Ok(AlgebraSpec {
            name: self.name.clone(),
            frame: self.frame,
            d: self.d.iter().map(|f| substitute_form(f, &values)).collect(),
            params: self.params.restrict(&values),
            lee: self.lee.as_ref().map(|f| substitute_form(f, &values)),
        })
    }

    /// A deterministic admissible parameter assignment, if one is found among
    /// small sample values.
    pub fn sample_point(&self) -> Option<BTreeMap<String, GaussRat>> {
        let real: Vec<GaussRat> = vec![GaussRat::int(1), GaussRat::frac(1, 2), GaussRat::int(2), GaussRat::int(-1), GaussRat::zero()];
        let complex: Vec<GaussRat> = vec![
            GaussRat::i(),
            GaussRat::int(1),
            GaussRat::new(crate::algebra::rat(3, 5), crate::algebra::rat(4, 5)),
            GaussRat::new(crate::algebra::rat(1, 1), crate::algebra::rat(1, 1)),
            GaussRat::int(-1),
            GaussRat::zero(),
        ];
        let mut budget = 20_000usize;
        self.sample_rec(BTreeMap::new(), &real, &complex, &mut budget)
    }

    fn sample_rec(
        &self,
        given: BTreeMap<String, GaussRat>,
        real: &[GaussRat],
        complex: &[GaussRat],
        budget: &mut usize,
    ) -> Option<BTreeMap<String, GaussRat>> {
        if *budget == 0 {
            return None;
        }
        *budget -= 1;
        let values = self.params.propagate(&given);
        self.params.check(&values).ok()?;
        let Some(next) = self.params.params().iter().find(|p| !values.contains_key(&p.name)) else {
            return Some(values);
        };
        let cands = match next.kind {
            ParamKind::Real => real,
            ParamKind::Complex => complex,
        };
        for c in cands {
            let mut g = values.clone();
            g.insert(next.name.clone(), c.clone());
            if let Some(v) = self.sample_rec(g, real, complex, budget) {
                return Some(v);
            }
        }
        None
    }

    pub fn validate(&self) -> ValidationReport {
        let mut failures = Vec::new();
        let total = self.frame.rank();
        let own = self.d.len();

        let mut jacobi_valid = true;
        for g in 0..own {
            let dd = self.reduce(&self.d(&self.d_generator(g)));
            if !dd.is_zero() {
                jacobi_valid = false;
                failures.push(format!("d^2 {} = {}", self.frame.generator_name(g), dd));
            }
        }

        let (integrable, abelian_j) = match self.frame {
            Frame::Complex(n) => {
                let mut integ = true;
                let mut abelian = true;
                for j in 0..n {
                    let f = self.reduce(&self.d[j]);
                    let f02 = f.project_bidegree(Bidegree::new(0, 2));
                    if !f02.is_zero() {
                        integ = false;
                        failures.push(format!("(0,2)-part of d {} = {}", self.frame.generator_name(j), f02));
                    }
                    if !f.project_bidegree(Bidegree::new(2, 0)).is_zero() || !f02.is_zero() {
                        abelian = false;
                    }
                }
                (Some(integ), Some(abelian))
            }
            Frame::Real(_) => (None, None),
        };

        let mut unimodular = true;
        if total > 0 {
            for m in self.frame.basis(total - 1) {
                let top = self.reduce(&self.d_monomial(m)).coefficient(self.frame.top_mask());
                if !top.is_zero() {
                    unimodular = false;
                    break;
                }
            }
        }

        let nilpotent = if self.is_constant() {
            Some(nilpotent_constant(self))
        } else {
            self.sample_point()
                .and_then(|pt| self.evaluate(&pt).ok())
                .filter(|s| s.is_constant())
                .map(|s| nilpotent_constant(&s))
        };

        ValidationReport { jacobi_valid, integrable, unimodular, nilpotent, abelian_j, failures }
    }

    /// Rewrites a real-frame spec in the complex coframe
    /// `phi^j = e^{2j-1} + i e^{2j}` of the structure `J e_{2j-1} = e_{2j}`.
    pub fn complexify(&self) -> Result<AlgebraSpec> {
        let Frame::Real(m) = self.frame else {
            return Err(Error::Structural("complexify expects a real frame".into()));
        };
        if m % 2 != 0 {
            return Err(Error::Structural(format!("odd dimension {} carries no complex structure", m)));
        }
        let n = m / 2;
        let cf = Frame::Complex(n);
        let half = GaussRat::frac(1, 2);
        let mut images = Vec::with_capacity(m);
        for j in 0..n {
            let p = Form::generator(cf, j);
            let q = Form::generator(cf, j + n);
            images.push(p.add(&q).scale_const(&half));
            images.push(p.sub(&q).scale_const(&(half.clone() / GaussRat::i())));
        }
        let map = |f: &Form| -> Form {
            let mut out = Form::zero(cf);
            for (mask, c) in f.terms() {
                let mut t = Form::scalar(cf, c.clone());
                for g in index_list(mask) {
                    t = t.wedge(&images[g]);
                }
                out = out.add(&t);
            }
            out
        };
        let mut out = AlgebraSpec::new(&self.name, cf);
        out.params = self.params.clone();
        for j in 0..n {
            let f = map(&self.d[2 * j]).add(&map(&self.d[2 * j + 1]).scale_const(&GaussRat::i()));
            out.set_d(j + 1, f)?;
        }
        if let Some(l) = &self.lee {
            out.lee = Some(map(l));
        }
        Ok(out)
    }
}

fn substitute_form(f: &Form, values: &BTreeMap<String, GaussRat>) -> Form {
    if values.is_empty() {
        return f.clone();
    }
    f.map_coefficients(|c| substitute_values(c, values))
}

/// Nilpotency through the dual central series `V_{k+1} = {a : da in Λ²V_k}`.
fn nilpotent_constant(s: &AlgebraSpec) -> bool {
    let frame = s.frame;
    let r = frame.rank();
    let b1 = frame.basis(1);
    let b2 = frame.basis(2);
    let dcols: Vec<Vec<GaussRat>> = b1
        .iter()
        .map(|&m| s.d_monomial(m).coordinates(&b2).expect("constant coefficients"))
        .collect();
    let dmat = Matrix::from_columns(b2.len(), &dcols);
    let mut v: Vec<Vec<GaussRat>> = Vec::new();
    loop {
        let mut wcols: Vec<Vec<GaussRat>> = Vec::new();
        let forms: Vec<Form> = v.iter().map(|c| Form::from_coordinates(frame, &b1, c)).collect();
        for a in 0..forms.len() {
            for b in a + 1..forms.len() {
                wcols.push(forms[a].wedge(&forms[b]).coordinates(&b2).expect("constant"));
            }
        }
        let combined = if wcols.is_empty() { dmat.clone() } else { dmat.hstack(&Matrix::from_columns(b2.len(), &wcols)) };
        let next: Vec<Vec<GaussRat>> = combined.kernel().into_iter().map(|k| k[..r].to_vec()).collect();
        let next = Matrix::from_columns(r, &next).column_space();
        if next.len() == r {
            return true;
        }
        if next.len() == v.len() {
            return false;
        }
        v = next;
    }
}
