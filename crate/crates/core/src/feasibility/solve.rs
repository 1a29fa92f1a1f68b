//! Exact linear and scalar side computations: d_θ-exactness, contact forms,
//! k-Gauduchon and positivity scalars.

use num_traits::{One, Zero};
use serde::Serialize;

use super::residual::ddbar;
use crate::algebra::{Bidegree, Form, GaussRat, Rational, Scalar};
use crate::error::{Error, Result};
use crate::operators::{d_twisted, OperatorMatrix};
use crate::structures::AlgebraSpec;

fn require_constant(spec: &AlgebraSpec, forms: &[&Form]) -> Result<()> {
    if !spec.is_constant() || forms.iter().any(|f| !f.is_constant()) {
        return Err(Error::Symbolic("instantiate parameters and unknowns first".into()));
    }
    Ok(())
}

fn factorial(k: usize) -> GaussRat {
    GaussRat::from((1..=k as i64).product::<i64>())
}

/// Matrix of `d_θ = d − θ∧` on `Λᵏ`.
pub fn d_theta_matrix(spec: &AlgebraSpec, theta: &Form, k: usize) -> Result<OperatorMatrix> {
    require_constant(spec, &[theta])?;
    let frame = spec.frame();
    OperatorMatrix::assemble(frame, frame.basis(k), frame.basis(k + 1), |f| d_twisted(spec, theta, &Rational::one(), f))
}

/// Basis of `ker d_θ` on `Λᵏ`.
pub fn d_theta_kernel(spec: &AlgebraSpec, theta: &Form, k: usize) -> Result<Vec<Form>> {
    let m = d_theta_matrix(spec, theta, k)?;
    Ok(m.matrix.kernel().iter().map(|v| Form::from_coordinates(spec.frame(), &m.source, v)).collect())
}

/// A 1-form `β` with `Ω = dβ − θ∧β`, or `None` when `Ω` is not d_θ-exact.
pub fn d_theta_exact_solve(spec: &AlgebraSpec, omega: &Form, theta: &Form) -> Result<Option<Form>> {
    require_constant(spec, &[omega, theta])?;
    if !spec.d(theta).is_zero() {
        return Err(Error::Validation("the Lee form is not closed".into()));
    }
    if !d_twisted(spec, theta, &Rational::one(), omega).is_zero() {
        return Err(Error::Validation("Omega is not d_theta-closed".into()));
    }
    if omega.degree().is_some_and(|d| d != 2) {
        return Err(Error::Validation("Omega must be a 2-form".into()));
    }
    let m = d_theta_matrix(spec, theta, 1)?;
    let target = omega.coordinates(&m.target).expect("constant form");
    let Some(x) = m.matrix.solve(&target) else { return Ok(None) };
    let mut beta = Form::from_coordinates(spec.frame(), &m.source, &x);
    if omega.is_real() && theta.is_real() {
        beta = beta.add(&beta.conjugate()).scale_const(&GaussRat::frac(1, 2));
    }
    Ok(Some(beta))
}

#[derive(Clone, Debug, Serialize)]
pub struct ContactWitness {
    #[serde(serialize_with = "form_text")]
    pub alpha: Form,
    /// Top coefficient of `α∧(dα)^{n−1}` for the generic `α`.
    #[serde(serialize_with = "scalar_text")]
    pub polynomial: Scalar,
    #[serde(serialize_with = "gauss_text")]
    pub value: GaussRat,
}

fn form_text<S: serde::Serializer>(v: &Form, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn scalar_text<S: serde::Serializer>(v: &Scalar, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn gauss_text<S: serde::Serializer>(v: &GaussRat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Generic contact polynomial of an odd-dimensional real algebra.
pub fn contact_polynomial(spec: &AlgebraSpec) -> Result<(Form, Scalar)> {
    let frame = spec.frame();
    let r = frame.rank();
    if frame.is_complex() || r % 2 == 0 {
        return Err(Error::Validation(format!("contact forms need an odd-dimensional real frame, got rank {}", r)));
    }
    require_constant(spec, &[])?;
    let mut alpha = Form::zero(frame);
    for j in 0..r {
        alpha = alpha.add(&Form::monomial(frame, 1 << j, Scalar::real_var(&format!("x{}", j + 1))));
    }
    let top = alpha.wedge(&spec.d(&alpha).power(r / 2));
    Ok((alpha, top.top_coefficient()?))
}

/// A contact form, or `None` when the contact polynomial vanishes identically.
pub fn contact_search(spec: &AlgebraSpec) -> Result<Option<ContactWitness>> {
    let (generic, p) = contact_polynomial(spec)?;
    if p.is_zero() {
        return Ok(None);
    }
    let r = spec.frame().rank();
    // Coordinate vectors first, then small integer points in a fixed order.
    let mut points: Vec<Vec<i64>> = (0..r).rev().map(|j| (0..r).map(|i| i64::from(i == j)).collect()).collect();
    let span = 5i64.pow(r as u32);
    points.extend((0..span).map(|mut idx| {
        (0..r)
            .map(|_| {
                let d = idx % 5 - 2;
                idx /= 5;
                d
            })
            .collect()
    }));
    for x in points {
        let values = (0..r).map(|j| (format!("x{}", j + 1), Scalar::int(x[j]))).collect();
        let v = p.substitute_named(&values);
        let v = v.as_constant().expect("all coordinates assigned");
        if !v.is_zero() {
            return Ok(Some(ContactWitness { alpha: generic.substitute_named(&values), polynomial: p, value: v }));
        }
    }
    unreachable!("a nonzero polynomial of degree {} has a nonzero point in the grid", r)
}

fn complex_rank(spec: &AlgebraSpec) -> Result<usize> {
    spec.frame().complex_rank().ok_or_else(|| Error::Structural("a complex frame is required".into()))
}

/// `c` with `∂∂̄ωᵏ∧ω^{n−k−1} = c·ωⁿ/n!`.
pub fn k_gauduchon_scalar(spec: &AlgebraSpec, omega: &Form, k: usize) -> Result<Scalar> {
    let n = complex_rank(spec)?;
    if k == 0 || k >= n {
        return Err(Error::Validation(format!("k = {} outside 1..{}", k, n - 1)));
    }
    let num = spec.reduce(&ddbar(spec, &omega.power(k)).wedge(&omega.power(n - k - 1)));
    let num = num.project_bidegree(Bidegree::new(n, n)).top_coefficient()?;
    let vol = omega.power(n).scale_const(&factorial(n).inv().expect("nonzero")).top_coefficient()?;
    ratio(&num, &vol)
}

fn ratio(num: &Scalar, vol: &Scalar) -> Result<Scalar> {
    if num.is_zero() {
        return Ok(Scalar::zero());
    }
    match vol.as_constant() {
        Some(v) if v.is_zero() => Err(Error::Validation("degenerate omega".into())),
        Some(v) => Ok(num.scale(&v.inv().expect("nonzero"))),
        None => Err(Error::Symbolic(format!("volume {} is not constant", vol))),
    }
}

/// `φ` with `i θ^{1,0}∧conj(θ^{1,0})∧ω^{n−1}/(n−1)! = φ·ωⁿ/n!`.
pub fn positivity_coefficient(spec: &AlgebraSpec, theta: &Form, omega: &Form) -> Result<Scalar> {
    let n = complex_rank(spec)?;
    require_constant(spec, &[theta, omega])?;
    let t10 = theta.project_bidegree(Bidegree::new(1, 0));
    let lhs = t10
        .wedge(&t10.conjugate())
        .wedge(&omega.power(n - 1))
        .scale_const(&(GaussRat::i() * factorial(n - 1).inv().expect("nonzero")))
        .top_coefficient()?;
    let vol = omega.power(n).scale_const(&factorial(n).inv().expect("nonzero")).top_coefficient()?;
    if vol.is_zero() {
        return Err(Error::Validation("degenerate omega".into()));
    }
    ratio(&lhs, &vol)
}
