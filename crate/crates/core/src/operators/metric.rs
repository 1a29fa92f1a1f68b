//! Hermitian metric data, the Lefschetz triple and the Hodge star.

use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};

use super::matrix::{j_op, OperatorMatrix};
use crate::algebra::form::{full_mask, index_list, wedge_sign};
use crate::algebra::linalg::Matrix;
use crate::algebra::{Bidegree, Form, Frame, GaussRat, Scalar};
use crate::error::{Error, Result};

/// Skew matrix `W` with `Ω = Σ_{a<b} W_ab e^{ab}`.
pub fn skew_matrix(f: &Form) -> Result<Matrix> {
    let r = f.frame().rank();
    let mut w = Matrix::zeros(r, r);
    for (m, c) in f.terms() {
        let idx = index_list(m);
        if idx.len() != 2 {
            return Err(Error::Structural("expected a 2-form".into()));
        }
        let c = c.as_constant().ok_or_else(|| Error::Symbolic("2-form has symbolic coefficients".into()))?;
        w.set(idx[0], idx[1], c.clone());
        w.set(idx[1], idx[0], -c);
    }
    Ok(w)
}

/// Hermitian matrix `H` with `π^{1,1}Ω = i Σ H_jk φ^j∧φ̄^k`.
pub fn hermitian_matrix(f: &Form) -> Result<Vec<Vec<Scalar>>> {
    let n = f.frame().complex_rank().ok_or_else(|| Error::Structural("hermitian matrix needs a complex frame".into()))?;
    let minus_i = -GaussRat::i();
    Ok((0..n)
        .map(|j| (0..n).map(|k| f.coefficient((1 << j) | (1 << (n + k))).scale(&minus_i)).collect())
        .collect())
}

/// Leading principal minors of a square Scalar matrix.
pub fn leading_minors(h: &[Vec<Scalar>]) -> Vec<Scalar> {
    (1..=h.len())
        .map(|k| {
            let sub: Vec<Vec<Scalar>> = h[..k].iter().map(|row| row[..k].to_vec()).collect();
            scalar_det(&sub)
        })
        .collect()
}

/// Determinant by cofactor expansion; meant for small matrices.
pub fn scalar_det(m: &[Vec<Scalar>]) -> Scalar {
    let n = m.len();
    match n {
        0 => Scalar::one(),
        1 => m[0][0].clone(),
        2 => &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0],
        _ => {
            let mut out = Scalar::zero();
            for c in 0..n {
                if m[0][c].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Scalar>> =
                    m[1..].iter().map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, v)| v.clone()).collect()).collect();
                let t = &m[0][c] * &scalar_det(&minor);
                if c % 2 == 0 {
                    out.add_assign_ref(&t);
                } else {
                    out.sub_assign_ref(&t);
                }
            }
            out
        }
    }
}

/// Metric quantities attached to a real nondegenerate 2-form `Ω` whose
/// `(1,1)`-part `ω` defines `g = ω(-, J-)`.
#[derive(Debug)]
pub struct MetricData {
    frame: Frame,
    n: usize,
    big_omega: Form,
    omega: Form,
    hmat: Vec<Vec<GaussRat>>,
    bivector: Vec<Vec<Scalar>>,
    gram1: Option<Matrix>,
    vol: Form,
    vol_coeff: GaussRat,
    grams: OnceLock<Vec<Matrix>>,
}

impl MetricData {
    pub fn new(big_omega: &Form) -> Result<Self> {
        let frame = big_omega.frame();
        let n = frame.complex_rank().ok_or_else(|| Error::Structural("metric data needs a complex frame".into()))?;
        if !big_omega.is_constant() {
            return Err(Error::Symbolic("metric data needs constant coefficients".into()));
        }
        if !big_omega.is_real() {
            return Err(Error::Structural("the 2-form is not real".into()));
        }
        let w = skew_matrix(big_omega)?;
        let winv = w.inverse().ok_or_else(|| Error::Validation("the 2-form is degenerate".into()))?;
        let r = 2 * n;
        let bivector = (0..r).map(|a| (0..r).map(|b| Scalar::constant(winv.get(a, b).clone())).collect()).collect();
        let omega = big_omega.project_bidegree(Bidegree::new(1, 1));
        let hmat: Vec<Vec<GaussRat>> = hermitian_matrix(&omega)?
            .into_iter()
            .map(|row| row.into_iter().map(|s| s.as_constant().expect("constant")).collect())
            .collect();
        let wo = skew_matrix(&omega)?;
        // g_ab = ω(E_a, J E_b), with J E = iE on (1,0)-vectors.
        let mut g = Matrix::zeros(r, r);
        for a in 0..r {
            for b in 0..r {
                let lambda = if b < n { GaussRat::i() } else { -GaussRat::i() };
                g.set(a, b, wo.get(a, b) * &lambda);
            }
        }
        let gram1 = g.inverse();
        let mut vol = omega.power(n);
        let mut fact = GaussRat::one();
        for k in 1..=n {
            fact = fact * GaussRat::int(k as i64);
        }
        vol = vol.scale_const(&fact.inv().expect("nonzero"));
        let vol_coeff = vol.coefficient(frame.top_mask()).as_constant().expect("constant");
        Ok(MetricData { frame, n, big_omega: big_omega.clone(), omega, hmat, bivector, gram1, vol, vol_coeff, grams: OnceLock::new() })
    }

    /// `i Σ φ^j∧φ̄^j`.
    pub fn standard(frame: Frame) -> Self {
        Self::new(&standard_omega(frame)).expect("standard form is nondegenerate")
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn big_omega(&self) -> &Form {
        &self.big_omega
    }

    pub fn omega(&self) -> &Form {
        &self.omega
    }

    pub fn hmat(&self) -> &[Vec<GaussRat>] {
        &self.hmat
    }

    pub fn vol(&self) -> &Form {
        &self.vol
    }

    /// Exact positivity of `H` through its leading principal minors.
    pub fn is_positive(&self) -> bool {
        let h: Vec<Vec<Scalar>> = self.hmat.iter().map(|r| r.iter().map(|v| Scalar::constant(v.clone())).collect()).collect();
        leading_minors(&h).iter().all(|m| {
            let v = m.as_constant().expect("constant");
            v.is_real() && v.re.is_positive()
        })
    }

    /// `L = Ω∧`.
    pub fn l(&self, f: &Form) -> Form {
        self.big_omega.wedge(f)
    }

    pub fn l_pow(&self, f: &Form, j: usize) -> Form {
        let mut out = f.clone();
        for _ in 0..j {
            out = self.l(&out);
        }
        out
    }

    /// `Λ`, the contraction with the inverse bivector of `Ω`.
    pub fn lambda(&self, f: &Form) -> Form {
        f.contract_bivector(&self.bivector).expect("bivector shape")
    }

    /// `H = Σ (n-k) π_k`.
    pub fn h(&self, f: &Form) -> Form {
        let mut out = Form::zero(self.frame);
        for (m, c) in f.terms() {
            let w = self.n as i64 - m.count_ones() as i64;
            out.add_term(m, &c.scale(&GaussRat::int(w)));
        }
        out
    }

    fn gram1(&self) -> Result<&Matrix> {
        self.gram1.as_ref().ok_or_else(|| Error::Validation("the (1,1)-part is degenerate".into()))
    }

    /// Gram matrix of the induced bilinear form on `Λ^k`.
    pub fn gram(&self, k: usize) -> Result<&Matrix> {
        let g1 = self.gram1()?.clone();
        let grams = self.grams.get_or_init(|| {
            (0..=2 * self.n)
                .map(|k| {
                    let basis = self.frame.basis(k);
                    let lists: Vec<Vec<usize>> = basis.iter().map(|m| index_list(*m)).collect();
                    let mut out = Matrix::zeros(basis.len(), basis.len());
                    for (a, ia) in lists.iter().enumerate() {
                        for (b, ib) in lists.iter().enumerate() {
                            let rows: Vec<Vec<GaussRat>> = ia.iter().map(|&x| ib.iter().map(|&y| g1.get(x, y).clone()).collect()).collect();
                            let v = if k == 0 { GaussRat::one() } else { Matrix::from_rows(rows).determinant() };
                            out.set(a, b, v);
                        }
                    }
                    out
                })
                .collect()
        });
        grams.get(k).ok_or_else(|| Error::Structural(format!("degree {} out of range", k)))
    }

    /// `<a, b>`, bilinear over the complex numbers.
    pub fn inner(&self, a: &Form, b: &Form) -> Result<GaussRat> {
        let mut total = GaussRat::zero();
        for k in 0..=2 * self.n {
            let basis = self.frame.basis(k);
            let (Some(x), Some(y)) = (a.project_degree(k).coordinates(&basis), b.project_degree(k).coordinates(&basis)) else {
                return Err(Error::Symbolic("inner product needs constant coefficients".into()));
            };
            if x.iter().all(|v| v.is_zero()) || y.iter().all(|v| v.is_zero()) {
                continue;
            }
            let g = self.gram(k)?;
            let gy = g.apply(&y);
            for (u, v) in x.iter().zip(gy.iter()) {
                total += &(u * v);
            }
        }
        Ok(total)
    }

    /// The form with `b∧*a = <b,a> vol` for every `b` of the degree of `a`.
    pub fn hodge_star(&self, a: &Form) -> Result<Form> {
        if !self.is_positive() {
            return Err(Error::Validation("hodge star needs a positive metric".into()));
        }
        let top = full_mask(2 * self.n);
        let mut out = Form::zero(self.frame);
        for (m, c) in a.terms() {
            let k = m.count_ones() as usize;
            let basis = self.frame.basis(k);
            let g = self.gram(k)?;
            let col = basis.iter().position(|x| *x == m).expect("basis member");
            for (row, &kmask) in basis.iter().enumerate() {
                let gv = g.get(row, col);
                if gv.is_zero() {
                    continue;
                }
                let comp = top & !kmask;
                let s = wedge_sign(kmask, comp).expect("complementary");
                let coeff = gv * &self.vol_coeff;
                let coeff = if s < 0 { -coeff } else { coeff };
                out.add_term(comp, &c.scale(&coeff));
            }
        }
        Ok(out)
    }

    /// Matrix of `Λ` on `Λ^k`.
    pub fn lambda_matrix(&self, k: usize) -> Result<OperatorMatrix> {
        let target = if k >= 2 { self.frame.basis(k - 2) } else { Vec::new() };
        OperatorMatrix::assemble(self.frame, self.frame.basis(k), target, |f| self.lambda(f))
    }

    /// A basis of the primitive forms `P^k = ker Λ`.
    pub fn primitive_basis(&self, k: usize) -> Result<Vec<Form>> {
        let basis = self.frame.basis(k);
        if k < 2 {
            return Ok(basis.iter().map(|m| Form::monomial(self.frame, *m, Scalar::one())).collect());
        }
        let lm = self.lambda_matrix(k)?;
        Ok(lm.matrix.kernel().iter().map(|v| Form::from_coordinates(self.frame, &basis, v)).collect())
    }

    /// `a = Σ L^j b_j` with every `b_j` primitive; lists the nonzero `(j, b_j)`.
    pub fn primitive_decompose(&self, a: &Form) -> Result<Vec<(usize, Form)>> {
        let k = a.degree().unwrap_or(0);
        if !a.is_homogeneous() {
            return Err(Error::Structural("primitive decomposition needs a homogeneous form".into()));
        }
        let basis = self.frame.basis(k);
        let target = a.coordinates(&basis).ok_or_else(|| Error::Symbolic("constant coefficients required".into()))?;
        let mut cols = Vec::new();
        let mut owners = Vec::new();
        for j in 0..=k / 2 {
            let kk = k - 2 * j;
            if kk > self.n {
                continue;
            }
            for b in self.primitive_basis(kk)? {
                let img = self.l_pow(&b, j);
                if img.is_zero() {
                    continue;
                }
                cols.push(img.coordinates(&basis).expect("constant"));
                owners.push((j, b));
            }
        }
        let m = Matrix::from_columns(basis.len(), &cols);
        let sol = m.solve(&target).ok_or_else(|| Error::Structural("form outside the Lefschetz span".into()))?;
        let mut parts: Vec<(usize, Form)> = Vec::new();
        for ((j, b), c) in owners.into_iter().zip(sol) {
            if c.is_zero() {
                continue;
            }
            let t = b.scale_const(&c);
            match parts.iter_mut().find(|(jj, _)| *jj == j) {
                Some((_, f)) => *f = f.add(&t),
                None => parts.push((j, t)),
            }
        }
        parts.retain(|(_, f)| !f.is_zero());
        parts.sort_by_key(|(j, _)| *j);
        Ok(parts)
    }

    /// `J`, exposed for the identity checks.
    pub fn j(&self, f: &Form) -> Form {
        j_op(f)
    }
}

pub fn standard_omega(frame: Frame) -> Form {
    let n = frame.complex_rank().expect("complex frame");
    let mut out = Form::zero(frame);
    for j in 0..n {
        out.add_term((1 << j) | (1 << (n + j)), &Scalar::i());
    }
    out
}

/// Per-degree matrices of `L`, `Λ` and `H`.
#[derive(Clone, Debug)]
pub struct LefschetzOps {
    pub l: Vec<OperatorMatrix>,
    pub lambda: Vec<OperatorMatrix>,
    pub h: Vec<OperatorMatrix>,
}

pub fn lefschetz_ops(m: &MetricData) -> Result<LefschetzOps> {
    let frame = m.frame();
    let top = 2 * m.n();
    let mut l = Vec::new();
    let mut lambda = Vec::new();
    let mut h = Vec::new();
    for k in 0..=top {
        let up = if k + 2 <= top { frame.basis(k + 2) } else { Vec::new() };
        l.push(OperatorMatrix::assemble(frame, frame.basis(k), up, |f| m.l(f))?);
        lambda.push(m.lambda_matrix(k)?);
        h.push(OperatorMatrix::assemble(frame, frame.basis(k), frame.basis(k), |f| m.h(f))?);
    }
    Ok(LefschetzOps { l, lambda, h })
}
