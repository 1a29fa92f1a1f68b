//! Exact cohomology of the invariant complexes and the ∂∂̄-type predicates.

use std::fmt;

use rayon::prelude::*;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::linalg::{intersect, span_rank, Matrix};
use crate::algebra::{Form, Frame, GaussRat, Rational, Scalar};
use crate::error::{Error, Result};
use crate::operators::matrix::{check_d_ready, d_twisted, partial, partial_bar};
use crate::runtime;
use crate::structures::AlgebraSpec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Theory {
    DeRham,
    Dolbeault,
    BottChern,
    Aeppli,
    MorseNovikov(Form),
}

impl Theory {
    pub fn tag(&self) -> &'static str {
        match self {
            Theory::DeRham => "deRham",
            Theory::Dolbeault => "dolbeault",
            Theory::BottChern => "bottChern",
            Theory::Aeppli => "aeppli",
            Theory::MorseNovikov(_) => "morseNovikov",
        }
    }

    pub fn is_bigraded(&self) -> bool {
        matches!(self, Theory::Dolbeault | Theory::BottChern | Theory::Aeppli)
    }

    /// Parses `deRham`, `dolbeault`, `bottChern`, `aeppli`; Morse–Novikov needs θ.
    pub fn from_tag(tag: &str, theta: Option<Form>) -> Result<Theory> {
        let t = tag.to_ascii_lowercase();
        Ok(match t.as_str() {
            "derham" | "dr" => Theory::DeRham,
            "dolbeault" | "dbar" => Theory::Dolbeault,
            "bottchern" | "bc" => Theory::BottChern,
            "aeppli" | "a" => Theory::Aeppli,
            "morsenovikov" | "mn" => Theory::MorseNovikov(theta.ok_or_else(|| Error::Structural("morseNovikov needs theta".into()))?),
            _ => return Err(Error::UnknownName(tag.to_string())),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum DimTable {
    /// `dims[k]`.
    Graded(Vec<usize>),
    /// `dims[p][q]`.
    Bigraded(Vec<Vec<usize>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyReport {
    pub algebra: String,
    pub theory: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<String>,
    pub dims: DimTable,
}

impl CohomologyReport {
    pub fn degree(&self, k: usize) -> Option<usize> {
        match &self.dims {
            DimTable::Graded(v) => v.get(k).copied(),
            DimTable::Bigraded(_) => None,
        }
    }

    pub fn bidegree(&self, p: usize, q: usize) -> Option<usize> {
        match &self.dims {
            DimTable::Bigraded(v) => v.get(p).and_then(|r| r.get(q)).copied(),
            DimTable::Graded(_) => None,
        }
    }

    /// Dimensions summed over `p+q = k` for bigraded tables.
    pub fn total(&self, k: usize) -> usize {
        match &self.dims {
            DimTable::Graded(v) => v.get(k).copied().unwrap_or(0),
            DimTable::Bigraded(v) => (0..=k).filter_map(|p| v.get(p).and_then(|r| r.get(k - p))).sum(),
        }
    }
}

impl fmt::Display for CohomologyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.algebra, self.theory)?;
        if let Some(t) = &self.theta {
            write!(f, " theta = {}", t)?;
        }
        writeln!(f)?;
        match &self.dims {
            DimTable::Graded(v) => {
                let w = v.iter().map(|d| d.to_string().len()).max().unwrap_or(1).max(2);
                let head: Vec<String> = (0..v.len()).map(|k| format!("{:>w$}", k, w = w)).collect();
                let row: Vec<String> = v.iter().map(|d| format!("{:>w$}", d, w = w)).collect();
                writeln!(f, "k  {}", head.join(" "))?;
                writeln!(f, "   {}", row.join(" "))
            }
            DimTable::Bigraded(v) => {
                let w = v.iter().flatten().map(|d| d.to_string().len()).max().unwrap_or(1).max(2);
                let head: Vec<String> = (0..v.first().map_or(0, |r| r.len())).map(|q| format!("{:>w$}", q, w = w)).collect();
                writeln!(f, "p\\q {}", head.join(" "))?;
                for (p, r) in v.iter().enumerate() {
                    let row: Vec<String> = r.iter().map(|d| format!("{:>w$}", d, w = w)).collect();
                    writeln!(f, "{:>3} {}", p, row.join(" "))?;
                }
                Ok(())
            }
        }
    }
}

fn op<F: Fn(&Form) -> Form>(frame: Frame, source: &[u32], target: &[u32], f: F) -> Result<Matrix> {
    let mut cols = Vec::with_capacity(source.len());
    for &m in source {
        let img = f(&Form::monomial(frame, m, Scalar::one()));
        let c = img
            .coordinates(target)
            .ok_or_else(|| Error::Symbolic("operator has non-constant coefficients; instantiate parameters first".into()))?;
        if img.terms().any(|(mm, _)| !target.contains(&mm)) {
            return Err(Error::Structural("image leaves the target space".into()));
        }
        cols.push(c);
    }
    Ok(Matrix::from_columns(target.len(), &cols))
}

/// Bidegree pieces and ∂, ∂̄, ∂∂̄ restricted to them.
struct Dolbeault<'a> {
    spec: &'a AlgebraSpec,
    frame: Frame,
    n: usize,
}

impl<'a> Dolbeault<'a> {
    fn new(spec: &'a AlgebraSpec) -> Result<Self> {
        check_d_ready(spec)?;
        let frame = spec.frame();
        let n = frame.complex_rank().ok_or_else(|| Error::Structural("bigraded cohomology needs a complex frame".into()))?;
        if spec.validate().integrable != Some(true) {
            return Err(Error::Validation(format!("spec {} is not integrable", spec.name)));
        }
        Ok(Dolbeault { spec, frame, n })
    }

    fn basis(&self, p: i64, q: i64) -> Vec<u32> {
        if p < 0 || q < 0 || p as usize > self.n || q as usize > self.n {
            return Vec::new();
        }
        self.frame.basis_bidegree(p as usize, q as usize)
    }

    fn del(&self, p: i64, q: i64) -> Result<Matrix> {
        op(self.frame, &self.basis(p, q), &self.basis(p + 1, q), |f| partial(self.spec, f))
    }

    fn dbar(&self, p: i64, q: i64) -> Result<Matrix> {
        op(self.frame, &self.basis(p, q), &self.basis(p, q + 1), |f| partial_bar(self.spec, f))
    }

    fn ddbar(&self, p: i64, q: i64) -> Result<Matrix> {
        op(self.frame, &self.basis(p, q), &self.basis(p + 1, q + 1), |f| partial(self.spec, &partial_bar(self.spec, f)))
    }

    fn dim(&self, p: i64, q: i64) -> usize {
        self.basis(p, q).len()
    }

    /// `ker ∂ ∩ ker ∂̄` on `Λ^{p,q}`.
    fn closed(&self, p: i64, q: i64) -> Result<Vec<Vec<GaussRat>>> {
        Ok(self.del(p, q)?.vstack(&self.dbar(p, q)?).kernel())
    }

    fn dolbeault(&self, p: i64, q: i64) -> Result<usize> {
        Ok(self.dim(p, q) - self.dbar(p, q)?.rank() - self.dbar(p, q - 1)?.rank())
    }

    fn bott_chern(&self, p: i64, q: i64) -> Result<usize> {
        let k = self.dim(p, q) - self.del(p, q)?.vstack(&self.dbar(p, q)?).rank();
        Ok(k - self.ddbar(p - 1, q - 1)?.rank())
    }

    fn aeppli(&self, p: i64, q: i64) -> Result<usize> {
        let k = self.dim(p, q) - self.ddbar(p, q)?.rank();
        Ok(k - self.del(p - 1, q)?.hstack(&self.dbar(p, q - 1)?).rank())
    }

    /// `sub ⊆ im ∂∂̄(Λ^{p-1,q-1})`.
    fn inside_ddbar_image(&self, p: i64, q: i64, sub: &[Vec<GaussRat>]) -> Result<bool> {
        if sub.is_empty() {
            return Ok(true);
        }
        let img = self.ddbar(p - 1, q - 1)?.column_space();
        let len = self.dim(p, q);
        let mut all = img.clone();
        all.extend_from_slice(sub);
        Ok(span_rank(len, &all) == span_rank(len, &img))
    }

    fn table<F: Fn(i64, i64) -> Result<usize> + Sync>(&self, f: F) -> Result<Vec<Vec<usize>>> {
        let n = self.n as i64;
        let cells: Vec<(i64, i64)> = (0..=n).flat_map(|p| (0..=n).map(move |q| (p, q))).collect();
        let vals: Vec<usize> = runtime::install(|| cells.par_iter().map(|&(p, q)| f(p, q)).collect::<Result<Vec<_>>>())?;
        Ok(vals.chunks(self.n + 1).map(|c| c.to_vec()).collect())
    }
}

fn graded_dims<F: Fn(&Form) -> Form + Sync>(frame: Frame, d: F) -> Result<Vec<usize>> {
    let r = frame.rank();
    let ranks: Vec<usize> = runtime::install(|| {
        (0..=r)
            .into_par_iter()
            .map(|k| Ok(op(frame, &frame.basis(k), &frame.basis(k + 1), &d)?.rank()))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok((0..=r)
        .map(|k| frame.basis(k).len() - ranks[k] - if k > 0 { ranks[k - 1] } else { 0 })
        .collect())
}

fn check_theta(spec: &AlgebraSpec, theta: &Form) -> Result<()> {
    if theta.frame() != spec.frame() {
        return Err(Error::Structural("theta lives on a different frame".into()));
    }
    if theta.terms().any(|(m, _)| m.count_ones() != 1) {
        return Err(Error::Structural("theta must be a 1-form".into()));
    }
    if !theta.is_constant() {
        return Err(Error::Symbolic("theta has free parameters".into()));
    }
    if !spec.reduce(&spec.d(theta)).is_zero() {
        return Err(Error::Validation("theta is not closed".into()));
    }
    Ok(())
}

/// Dimensions of the requested invariant cohomology.
pub fn cohomology_dims(spec: &AlgebraSpec, theory: &Theory) -> Result<CohomologyReport> {
    check_d_ready(spec)?;
    let frame = spec.frame();
    let (dims, theta) = match theory {
        Theory::DeRham => (DimTable::Graded(graded_dims(frame, |f| spec.d(f))?), None),
        Theory::MorseNovikov(theta) => {
            check_theta(spec, theta)?;
            let one = Rational::from_integer(1.into());
            let dims = graded_dims(frame, |f| d_twisted(spec, theta, &one, f))?;
            (DimTable::Graded(dims), Some(theta.to_string()))
        }
        Theory::Dolbeault => {
            let c = Dolbeault::new(spec)?;
            (DimTable::Bigraded(c.table(|p, q| c.dolbeault(p, q))?), None)
        }
        Theory::BottChern => {
            let c = Dolbeault::new(spec)?;
            (DimTable::Bigraded(c.table(|p, q| c.bott_chern(p, q))?), None)
        }
        Theory::Aeppli => {
            let c = Dolbeault::new(spec)?;
            (DimTable::Bigraded(c.table(|p, q| c.aeppli(p, q))?), None)
        }
    };
    Ok(CohomologyReport { algebra: spec.name.clone(), theory: theory.tag().to_string(), theta, dims })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DdbarReport {
    /// `(p, q, holds)` for every bidegree.
    pub cells: Vec<(usize, usize, bool)>,
    pub holds: bool,
}

impl DdbarReport {
    pub fn failures(&self) -> Vec<(usize, usize)> {
        self.cells.iter().filter(|c| !c.2).map(|c| (c.0, c.1)).collect()
    }
}

/// `ker∂ ∩ ker∂̄ ∩ (im∂ + im∂̄) ⊆ im∂∂̄` on every `Λ^{p,q}`.
pub fn ddbar_lemma_check(spec: &AlgebraSpec) -> Result<DdbarReport> {
    let c = Dolbeault::new(spec)?;
    let t = c.table(|p, q| {
        let closed = c.closed(p, q)?;
        let exact = c.del(p - 1, q)?.hstack(&c.dbar(p, q - 1)?).column_space();
        let meet = intersect(c.dim(p, q), &closed, &exact);
        Ok(usize::from(c.inside_ddbar_image(p, q, &meet)?))
    })?;
    let cells: Vec<(usize, usize, bool)> =
        t.iter().enumerate().flat_map(|(p, r)| r.iter().enumerate().map(move |(q, &v)| (p, q, v == 1))).collect();
    let holds = cells.iter().all(|c| c.2);
    Ok(DdbarReport { cells, holds })
}

/// `ker∂ ∩ ker∂̄ ∩ im∂̄ ⊆ im∂∂̄` on `Λ^{p,q}`.
pub fn bc_to_dolbeault_injectivity(spec: &AlgebraSpec, p: usize, q: usize) -> Result<bool> {
    let c = Dolbeault::new(spec)?;
    let (p, q) = (p as i64, q as i64);
    let closed = c.closed(p, q)?;
    let exact = c.dbar(p, q - 1)?.column_space();
    let meet = intersect(c.dim(p, q), &closed, &exact);
    c.inside_ddbar_image(p, q, &meet)
}

/// Real forms spanning the real points of `Λ^{p,p}`, as coordinates.
fn real_spanning_set(frame: Frame, basis: &[u32]) -> Vec<Vec<GaussRat>> {
    let mut out = Vec::new();
    for &m in basis {
        for c in [GaussRat::one(), GaussRat::i()] {
            let f = Form::monomial(frame, m, Scalar::constant(c));
            let r = f.add(&f.conjugate());
            if let Some(v) = r.coordinates(basis) {
                if v.iter().any(|x| !x.is_zero()) {
                    out.push(v);
                }
            }
        }
    }
    out
}

/// Every real `α ∈ Λ^{n-1,n-1}` with `∂̄α ∈ im∂` has `∂̄α ∈ i∂∂̄(Λ^{n-2,n-1})`.
pub fn weak_ddbar_check(spec: &AlgebraSpec) -> Result<bool> {
    let c = Dolbeault::new(spec)?;
    let n = c.n as i64;
    let (p, q) = (n - 1, n - 1);
    let src = c.basis(p, q);
    let tgt_len = c.dim(p, q + 1);
    let r = Matrix::from_columns(src.len(), &real_spanning_set(c.frame, &src));
    let dbar = c.dbar(p, q)?;
    let del_img = c.del(p - 1, q + 1)?;
    let annihilator = del_img.left_kernel();
    let y = Matrix::from_columns(tgt_len, &annihilator).transpose();
    let cond = y.mul(&dbar).mul(&r);
    let xs = cond.real_kernel();
    let dr = dbar.mul(&r);
    let images: Vec<Vec<GaussRat>> = xs.iter().map(|x| dr.apply(x)).collect();
    c.inside_ddbar_image(p, q + 1, &images)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaReport {
    pub k: usize,
    pub bott_chern: usize,
    pub aeppli: usize,
    pub betti: usize,
    /// `Σ(h_BC + h_A) - 2 b_k`.
    pub delta: i64,
    /// The same sum with a single `b_k`.
    pub delta_single: i64,
}

pub fn delta_report(spec: &AlgebraSpec, k: usize) -> Result<DeltaReport> {
    let bc = cohomology_dims(spec, &Theory::BottChern)?;
    let a = cohomology_dims(spec, &Theory::Aeppli)?;
    let b = cohomology_dims(spec, &Theory::DeRham)?;
    delta_from(&bc, &a, &b, k)
}

fn delta_from(bc: &CohomologyReport, a: &CohomologyReport, b: &CohomologyReport, k: usize) -> Result<DeltaReport> {
    let (hb, ha) = (bc.total(k), a.total(k));
    let betti = b.degree(k).ok_or_else(|| Error::Structural(format!("degree {} out of range", k)))?;
    let s = (hb + ha) as i64;
    Ok(DeltaReport { k, bott_chern: hb, aeppli: ha, betti, delta: s - 2 * betti as i64, delta_single: s - betti as i64 })
}

/// `Δᵏ = Σ_{p+q=k} (h_BC + h_A) - 2 b_k`.
pub fn delta_degrees(spec: &AlgebraSpec, k: usize) -> Result<i64> {
    Ok(delta_report(spec, k)?.delta)
}

/// `Δᵏ` for every `k`, sharing the cohomology computations.
pub fn delta_all(spec: &AlgebraSpec) -> Result<Vec<DeltaReport>> {
    let bc = cohomology_dims(spec, &Theory::BottChern)?;
    let a = cohomology_dims(spec, &Theory::Aeppli)?;
    let b = cohomology_dims(spec, &Theory::DeRham)?;
    (0..=spec.frame().rank()).map(|k| delta_from(&bc, &a, &b, k)).collect()
}

/// Representatives of `ker d_{wθ} / im d_{wθ}` in degree `k`.
pub fn representatives(spec: &AlgebraSpec, theta: Option<&Form>, k: usize) -> Result<Vec<Form>> {
    check_d_ready(spec)?;
    let frame = spec.frame();
    let one = Rational::from_integer(1.into());
    let zero = Form::zero(frame);
    let theta = match theta {
        Some(t) => {
            check_theta(spec, t)?;
            t
        }
        None => &zero,
    };
    let d = |f: &Form| d_twisted(spec, theta, &one, f);
    let src = frame.basis(k);
    let kernel = op(frame, &src, &frame.basis(k + 1), d)?.kernel();
    let image = if k == 0 { Vec::new() } else { op(frame, &frame.basis(k - 1), &src, d)?.column_space() };
    let mut span = image.clone();
    let mut out = Vec::new();
    for v in kernel {
        let before = span_rank(src.len(), &span);
        span.push(v.clone());
        if span_rank(src.len(), &span) > before {
            out.push(Form::from_coordinates(frame, &src, &v));
        } else {
            span.pop();
        }
    }
    Ok(out)
}
