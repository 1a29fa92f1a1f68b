//! Exact matrices of linear operators between graded pieces.

use num_traits::Zero;

use crate::algebra::linalg::Matrix;
use crate::algebra::{Bidegree, Form, Frame, GaussRat, Rational, Scalar};
use crate::error::{Error, Result};
use crate::structures::AlgebraSpec;

/// Matrix of a linear map in the canonical monomial bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorMatrix {
    pub frame: Frame,
    pub source: Vec<u32>,
    pub target: Vec<u32>,
    pub matrix: Matrix,
}

impl OperatorMatrix {
    /// Builds the matrix of `f` restricted to `source`, read in `target`.
    pub fn assemble<F: Fn(&Form) -> Form>(frame: Frame, source: Vec<u32>, target: Vec<u32>, f: F) -> Result<Self> {
        let mut cols = Vec::with_capacity(source.len());
        for &m in &source {
            let img = f(&Form::monomial(frame, m, Scalar::one()));
            if img.terms().any(|(mm, _)| !target.contains(&mm)) {
                return Err(Error::Structural("image leaves the target space".into()));
            }
            let c = img
                .coordinates(&target)
                .ok_or_else(|| Error::Symbolic("operator has non-constant coefficients; instantiate parameters first".into()))?;
            cols.push(c);
        }
        let matrix = Matrix::from_columns(target.len(), &cols);
        Ok(OperatorMatrix { frame, source, target, matrix })
    }

    pub fn apply(&self, f: &Form) -> Result<Form> {
        let v = f.coordinates(&self.source).ok_or_else(|| Error::Structural("form outside the source space".into()))?;
        if f.terms().any(|(m, _)| !self.source.contains(&m)) {
            return Err(Error::Structural("form outside the source space".into()));
        }
        Ok(Form::from_coordinates(self.frame, &self.target, &self.matrix.apply(&v)))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &OperatorMatrix) -> Result<OperatorMatrix> {
        if inner.target != self.source {
            return Err(Error::Structural("composed operators have mismatched shapes".into()));
        }
        Ok(OperatorMatrix { frame: self.frame, source: inner.source.clone(), target: self.target.clone(), matrix: self.matrix.mul(&inner.matrix) })
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Plain,
    CTwist,
}

/// `J` acts on `Λ^{p,q}` by `i^{p-q}`; on real frames it is undefined.
pub fn j_op(f: &Form) -> Form {
    j_power(f, 1)
}

pub fn j_inverse(f: &Form) -> Form {
    j_power(f, -1)
}

fn j_power(f: &Form, sign: i64) -> Form {
    let frame = f.frame();
    let mut out = Form::zero(frame);
    for (m, c) in f.terms() {
        let bd = frame.bidegree_of(m);
        let e = sign * (bd.p as i64 - bd.q as i64);
        out.add_term(m, &c.scale(&GaussRat::i_pow(e)));
    }
    out
}

/// `∂` as the `(p+1,q)` part of `d`.
pub fn partial(spec: &AlgebraSpec, f: &Form) -> Form {
    shifted(spec, f, 1, 0)
}

/// `∂̄` as the `(p,q+1)` part of `d`.
pub fn partial_bar(spec: &AlgebraSpec, f: &Form) -> Form {
    shifted(spec, f, 0, 1)
}

fn shifted(spec: &AlgebraSpec, f: &Form, dp: usize, dq: usize) -> Form {
    let frame = spec.frame();
    let mut out = Form::zero(frame);
    for (m, c) in f.terms() {
        let bd = frame.bidegree_of(m);
        let img = spec.d_monomial(m).project_bidegree(Bidegree::new(bd.p + dp, bd.q + dq));
        out = out.add(&img.scale(c));
    }
    out
}

/// `d - w θ∧`.
pub fn d_twisted(spec: &AlgebraSpec, theta: &Form, weight: &Rational, f: &Form) -> Form {
    let df = spec.d(f);
    if weight.is_zero() || theta.is_zero() {
        return df;
    }
    df.sub(&theta.wedge(f).scale_const(&GaussRat::from_rational(weight.clone())))
}

/// `J⁻¹ (d - w θ∧) J`.
pub fn d_twisted_c(spec: &AlgebraSpec, theta: &Form, weight: &Rational, f: &Form) -> Form {
    j_inverse(&d_twisted(spec, theta, weight, &j_op(f)))
}

pub(crate) fn check_d_ready(spec: &AlgebraSpec) -> Result<()> {
    let r = spec.validate();
    if !r.jacobi_valid {
        return Err(Error::Validation(format!("spec {} violates the Jacobi identity", spec.name)));
    }
    if !spec.is_constant() {
        return Err(Error::Symbolic(format!("spec {} has free parameters", spec.name)));
    }
    Ok(())
}

/// `d : Λ^k -> Λ^{k+1}`.
pub fn assemble_d(spec: &AlgebraSpec, degree: usize) -> Result<OperatorMatrix> {
    check_d_ready(spec)?;
    let frame = spec.frame();
    OperatorMatrix::assemble(frame, frame.basis(degree), frame.basis(degree + 1), |f| spec.d(f))
}

/// Plain or conjugated twisted differential on `Λ^degree`.
pub fn twisted_d(spec: &AlgebraSpec, theta: &Form, variant: Variant, weight: &Rational, degree: usize) -> Result<OperatorMatrix> {
    check_d_ready(spec)?;
    if theta.terms().any(|(m, _)| m.count_ones() != 1) {
        return Err(Error::Structural("theta must be a 1-form".into()));
    }
    if !spec.reduce(&spec.d(theta)).is_zero() {
        return Err(Error::Validation("theta is not closed".into()));
    }
    if variant == Variant::CTwist && !spec.frame().is_complex() {
        return Err(Error::Structural("the conjugated differential needs a complex frame".into()));
    }
    let frame = spec.frame();
    OperatorMatrix::assemble(frame, frame.basis(degree), frame.basis(degree + 1), |f| match variant {
        Variant::Plain => d_twisted(spec, theta, weight, f),
        Variant::CTwist => d_twisted_c(spec, theta, weight, f),
    })
}

/// `∂` or `∂̄` on `Λ^{p,q}`.
pub fn assemble_partial(spec: &AlgebraSpec, bar: bool, p: usize, q: usize) -> Result<OperatorMatrix> {
    check_d_ready(spec)?;
    let frame = spec.frame();
    let target = if bar { frame.basis_bidegree(p, q + 1) } else { frame.basis_bidegree(p + 1, q) };
    OperatorMatrix::assemble(frame, frame.basis_bidegree(p, q), target, |f| if bar { partial_bar(spec, f) } else { partial(spec, f) })
}
