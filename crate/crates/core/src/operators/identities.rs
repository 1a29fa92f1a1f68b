//! Residuals of the Lefschetz, Weyl and twisted Kähler identities.
//!
//! Every function returns the list of nonzero residual forms over a spanning
//! set; an empty list means the identity holds exactly.

use rand::Rng;

use super::matrix::{d_twisted, j_inverse, j_op};
use super::metric::MetricData;
use crate::algebra::{rat_int, Form, Frame, GaussRat, Rational, Scalar};
use crate::error::Result;
use crate::structures::AlgebraSpec;

fn basis_forms(frame: Frame, k: usize) -> Vec<Form> {
    frame.basis(k).into_iter().map(|m| Form::monomial(frame, m, Scalar::one())).collect()
}

fn nonzero(v: Vec<Form>) -> Vec<Form> {
    v.into_iter().filter(|f| !f.is_zero()).collect()
}

fn factorial(k: i64) -> i64 {
    (1..=k).product::<i64>().max(1)
}

/// `d²` on every basis monomial of every degree.
pub fn d_squared_residuals(spec: &AlgebraSpec) -> Vec<Form> {
    let frame = spec.frame();
    let mut out = Vec::new();
    for k in 0..=frame.rank() {
        for f in basis_forms(frame, k) {
            out.push(spec.reduce(&spec.d(&spec.d(&f))));
        }
    }
    nonzero(out)
}

/// `d_{wθ}²` on every basis monomial.
pub fn twisted_d_squared_residuals(spec: &AlgebraSpec, theta: &Form, weight: &Rational) -> Vec<Form> {
    let frame = spec.frame();
    let mut out = Vec::new();
    for k in 0..=frame.rank() {
        for f in basis_forms(frame, k) {
            out.push(spec.reduce(&d_twisted(spec, theta, weight, &d_twisted(spec, theta, weight, &f))));
        }
    }
    nonzero(out)
}

/// A random homogeneous form of degree `k` with small integer coefficients.
pub fn random_form<R: Rng>(rng: &mut R, frame: Frame, k: usize) -> Form {
    let mut out = Form::zero(frame);
    for m in frame.basis(k) {
        if rng.gen_bool(0.4) {
            let re = rng.gen_range(-3i64..=3);
            let im = if frame.is_complex() { rng.gen_range(-3i64..=3) } else { 0 };
            out.add_term(m, &Scalar::constant(GaussRat::new(rat_int(re), rat_int(im))));
        }
    }
    out
}

/// Graded Leibniz rule on `count` random homogeneous pairs.
pub fn leibniz_residuals<R: Rng>(spec: &AlgebraSpec, rng: &mut R, count: usize) -> Vec<Form> {
    let frame = spec.frame();
    let r = frame.rank();
    let mut out = Vec::new();
    for _ in 0..count {
        let ka = rng.gen_range(0..=r);
        let kb = rng.gen_range(0..=r - ka);
        let a = random_form(rng, frame, ka);
        let b = random_form(rng, frame, kb);
        let lhs = spec.d(&a.wedge(&b));
        let t = a.wedge(&spec.d(&b));
        let rhs = spec.d(&a).wedge(&b).add(&if ka % 2 == 0 { t } else { t.neg() });
        out.push(spec.reduce(&lhs.sub(&rhs)));
    }
    nonzero(out)
}

/// `[L^j, Λ] - j(k-n+j-1) L^{j-1}` on the basis of `Λ^k`.
pub fn lefschetz_commutator_residuals(m: &MetricData, j: usize, k: usize) -> Vec<Form> {
    let n = m.n() as i64;
    let c = j as i64 * (k as i64 - n + j as i64 - 1);
    let mut out = Vec::new();
    for f in basis_forms(m.frame(), k) {
        let lhs = m.l_pow(&m.lambda(&f), j).sub(&m.lambda(&m.l_pow(&f, j)));
        let rhs = if j == 0 { Form::zero(m.frame()) } else { m.l_pow(&f, j - 1).scale_const(&GaussRat::int(c)) };
        out.push(lhs.sub(&rhs));
    }
    nonzero(out)
}

/// `[L, Λ] = -H` on the basis of `Λ^k`.
pub fn sl2_residuals(m: &MetricData, k: usize) -> Vec<Form> {
    let mut out = Vec::new();
    for f in basis_forms(m.frame(), k) {
        let lhs = m.l(&m.lambda(&f)).sub(&m.lambda(&m.l(&f)));
        out.push(lhs.add(&m.h(&f)));
    }
    nonzero(out)
}

/// `** = (-1)^k` on the basis of `Λ^k`.
pub fn star_squared_residuals(m: &MetricData, k: usize) -> Result<Vec<Form>> {
    let mut out = Vec::new();
    for f in basis_forms(m.frame(), k) {
        let ss = m.hodge_star(&m.hodge_star(&f)?)?;
        out.push(if k % 2 == 0 { ss.sub(&f) } else { ss.add(&f) });
    }
    Ok(nonzero(out))
}

/// Weyl identity `* L^j = (-1)^{k(k+1)/2} j!/(n-k-j)! L^{n-k-j} J` on `P^k`.
pub fn weyl_residuals(m: &MetricData, j: usize, k: usize) -> Result<Vec<Form>> {
    let n = m.n();
    if k + j > n {
        return Ok(Vec::new());
    }
    let sign = if (k * (k + 1) / 2) % 2 == 0 { 1 } else { -1 };
    let c = GaussRat::frac(sign * factorial(j as i64), factorial((n - k - j) as i64));
    let mut out = Vec::new();
    for a in m.primitive_basis(k)? {
        let lhs = m.hodge_star(&m.l_pow(&a, j))?;
        let rhs = m.l_pow(&j_op(&a), n - k - j).scale_const(&c);
        out.push(lhs.sub(&rhs));
    }
    Ok(nonzero(out))
}

/// `d_{(ℓ+k)θ} L^k = L^k d_{ℓθ}` on every basis monomial.
pub fn lcs_commutation_residuals(spec: &AlgebraSpec, m: &MetricData, theta: &Form, k: usize, ell: i64) -> Vec<Form> {
    let frame = spec.frame();
    let w_in = rat_int(ell);
    let w_out = rat_int(ell + k as i64);
    let mut out = Vec::new();
    for deg in 0..=frame.rank() {
        for f in basis_forms(frame, deg) {
            let lhs = d_twisted(spec, theta, &w_out, &m.l_pow(&f, k));
            let rhs = m.l_pow(&d_twisted(spec, theta, &w_in, &f), k);
            out.push(lhs.sub(&rhs));
        }
    }
    nonzero(out)
}

/// Pairs `(j, k)` with `L^j P^k ≠ 0`.
pub fn admissible_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for k in 0..=n {
        for j in 0..=(n - k) {
            out.push((j, k));
        }
    }
    out
}

/// Twisted Kähler identity on `L^j P^k`:
/// `(Λ d_{ℓθ} - d_{(ℓ-1)θ} Λ) x = * J⁻¹ d_{(n+ℓ-k-2j)θ} J * x`.
pub fn verify_twisted_kahler_identity(spec: &AlgebraSpec, m: &MetricData, theta: &Form, j: usize, k: usize, ell: i64) -> Result<Vec<Form>> {
    let n = m.n() as i64;
    let w = |x: i64| rat_int(x);
    let mut out = Vec::new();
    for a in m.primitive_basis(k)? {
        let x = m.l_pow(&a, j);
        if x.is_zero() {
            continue;
        }
        let lhs = m.lambda(&d_twisted(spec, theta, &w(ell), &x)).sub(&d_twisted(spec, theta, &w(ell - 1), &m.lambda(&x)));
        let eta = n + ell - k as i64 - 2 * j as i64;
        let inner = j_op(&m.hodge_star(&x)?);
        let rhs = m.hodge_star(&j_inverse(&d_twisted(spec, theta, &w(eta), &inner)))?;
        out.push(lhs.sub(&rhs));
    }
    Ok(nonzero(out))
}

/// True when `dΩ = θ∧Ω`, `dθ = 0` and `Ω` has no `(2,0)` part.
pub fn is_lck_data(spec: &AlgebraSpec, omega: &Form, theta: &Form) -> bool {
    let frame = spec.frame();
    let no20 = frame.complex_rank().is_some()
        && omega.project_bidegree(crate::algebra::Bidegree::new(2, 0)).is_zero();
    no20 && spec.d(omega).sub(&theta.wedge(omega)).is_zero() && spec.d(theta).is_zero()
}

/// Weighted sum helper used by reports.
pub fn total_terms(v: &[Form]) -> usize {
    v.iter().map(|f| f.num_terms()).sum()
}
