//! Exterior algebra on a finite co-frame with polynomial coefficients.
//!
//! Monomials are bitmasks over generators `0..rank`. In a complex frame of
//! rank `n` the generators `0..n` are `phi^1..phi^n` and `n..2n` are their
//! conjugates. The canonical order of a monomial is increasing generator index.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use super::gauss::GaussRat;
use super::scalar::Scalar;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Frame {
    /// Real co-frame `e^1..e^m`.
    Real(usize),
    /// Complex co-frame `phi^1..phi^n, conj(phi^1)..conj(phi^n)`.
    Complex(usize),
}

impl Frame {
    /// Number of generators of the exterior algebra.
    pub fn rank(self) -> usize {
        match self {
            Frame::Real(m) => m,
            Frame::Complex(n) => 2 * n,
        }
    }

    pub fn is_complex(self) -> bool {
        matches!(self, Frame::Complex(_))
    }

    /// Complex rank `n`, or `None` for a real frame.
    pub fn complex_rank(self) -> Option<usize> {
        match self {
            Frame::Complex(n) => Some(n),
            Frame::Real(_) => None,
        }
    }

    pub fn top_mask(self) -> u32 {
        full_mask(self.rank())
    }

    /// All monomials of degree `k`, lexicographic in their index lists.
    pub fn basis(self, k: usize) -> Vec<u32> {
        combinations(self.rank(), k)
    }

    /// Monomials of bidegree `(p, q)` in a complex frame.
    pub fn basis_bidegree(self, p: usize, q: usize) -> Vec<u32> {
        let n = self.complex_rank().expect("bidegree basis needs a complex frame");
        let mut out = Vec::new();
        for h in combinations(n, p) {
            for a in combinations(n, q) {
                out.push(h | (a << n));
            }
        }
        out.sort_by_key(|m| index_list(*m));
        out
    }

    /// Bidegree of a monomial in a complex frame.
    pub fn bidegree_of(self, mask: u32) -> Bidegree {
        let n = self.complex_rank().expect("bidegree needs a complex frame");
        let holo = mask & full_mask(n);
        Bidegree { p: holo.count_ones() as usize, q: (mask >> n).count_ones() as usize }
    }

    /// Generator name used by the text formats: `phi2`, `cphi1`, `e5`.
    pub fn generator_name(self, g: usize) -> String {
        match self {
            Frame::Real(_) => format!("e{}", g + 1),
            Frame::Complex(n) if g < n => format!("phi{}", g + 1),
            Frame::Complex(n) => format!("cphi{}", g - n + 1),
        }
    }

    /// Compact label such as `12 3̄` (complex) or `125` (real).
    pub fn label(self, mask: u32) -> String {
        match self {
            Frame::Real(_) => index_list(mask).iter().map(|i| (i + 1).to_string()).collect(),
            Frame::Complex(n) => {
                let mut s = String::new();
                for i in index_list(mask & full_mask(n)) {
                    s.push_str(&(i + 1).to_string());
                }
                let anti = index_list(mask >> n);
                if !anti.is_empty() {
                    if !s.is_empty() {
                        s.push(' ');
                    }
                    for i in anti {
                        s.push_str(&(i + 1).to_string());
                        s.push('\u{0304}');
                    }
                }
                if s.is_empty() {
                    s.push('1');
                }
                s
            }
        }
    }

    /// The index of the conjugate generator (identity on real frames).
    pub fn conj_generator(self, g: usize) -> usize {
        match self {
            Frame::Real(_) => g,
            Frame::Complex(n) => {
                if g < n {
                    g + n
                } else {
                    g - n
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bidegree {
    pub p: usize,
    pub q: usize,
}

impl Bidegree {
    pub fn new(p: usize, q: usize) -> Self {
        Bidegree { p, q }
    }
}

pub fn full_mask(r: usize) -> u32 {
    if r >= 32 {
        u32::MAX
    } else {
        (1u32 << r) - 1
    }
}

pub fn index_list(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

/// `k`-subsets of `0..r` as bitmasks, lexicographic in their index lists.
pub fn combinations(r: usize, k: usize) -> Vec<u32> {
    fn rec(start: usize, r: usize, k: usize, acc: u32, out: &mut Vec<u32>) {
        if k == 0 {
            out.push(acc);
            return;
        }
        for i in start..r {
            if r - i < k {
                break;
            }
            rec(i + 1, r, k - 1, acc | (1 << i), out);
        }
    }
    let mut out = Vec::new();
    if k <= r {
        rec(0, r, k, 0, &mut out);
    }
    out
}

/// Sign of `e^A ∧ e^B` relative to the canonical monomial `e^{A∪B}`,
/// or `None` when the monomials overlap.
pub fn wedge_sign(a: u32, b: u32) -> Option<i32> {
    if a & b != 0 {
        return None;
    }
    // Count pairs (i in a, j in b) with i > j.
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        let above = if j >= 31 { 0 } else { a & !((1u32 << (j + 1)) - 1) };
        inversions += above.count_ones();
    }
    Some(if inversions % 2 == 0 { 1 } else { -1 })
}

/// Parity of the permutation sorting `seq`.
pub fn sort_sign(seq: &[usize]) -> i32 {
    let mut inv = 0;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// An element of the exterior algebra. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Form {
    frame: Frame,
    terms: BTreeMap<u32, Scalar>,
}

impl Form {
    pub fn zero(frame: Frame) -> Form {
        Form { frame, terms: BTreeMap::new() }
    }

    pub fn one(frame: Frame) -> Form {
        Form::scalar(frame, Scalar::one())
    }

    pub fn scalar(frame: Frame, c: Scalar) -> Form {
        Form::monomial(frame, 0, c)
    }

    pub fn monomial(frame: Frame, mask: u32, c: Scalar) -> Form {
        let mut f = Form::zero(frame);
        f.add_term(mask, &c);
        f
    }

    /// The generator with index `g`.
    pub fn generator(frame: Frame, g: usize) -> Form {
        Form::monomial(frame, 1 << g, Scalar::one())
    }

    /// Wedge of generators in the given order (sign applied).
    pub fn from_indices(frame: Frame, idx: &[usize], c: Scalar) -> Form {
        let mut f = Form::scalar(frame, c);
        for &g in idx {
            f = f.wedge(&Form::generator(frame, g));
        }
        f
    }

    /// Complex frame shorthand: positive indices are `phi^j`, negative are
    /// conjugates, both 1-based.
    pub fn phi(frame: Frame, signed: &[i32], c: Scalar) -> Form {
        let n = frame.complex_rank().expect("phi needs a complex frame");
        let idx: Vec<usize> = signed
            .iter()
            .map(|&s| if s > 0 { (s - 1) as usize } else { n + (-s - 1) as usize })
            .collect();
        Form::from_indices(frame, &idx, c)
    }

    /// Real frame shorthand, 1-based indices.
    pub fn e(frame: Frame, idx: &[usize], c: Scalar) -> Form {
        let idx: Vec<usize> = idx.iter().map(|i| i - 1).collect();
        Form::from_indices(frame, &idx, c)
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Scalar)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, mask: u32) -> Scalar {
        self.terms.get(&mask).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Degree when homogeneous; `None` for zero or mixed forms.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|m| m.count_ones() as usize);
        let first = it.next()?;
        if it.all(|d| d == first) {
            Some(first)
        } else {
            None
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    pub fn add_term(&mut self, mask: u32, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mask) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                e.get_mut().add_assign_ref(c);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_frame(&self, o: &Form) -> Result<()> {
        if self.frame != o.frame {
            return Err(Error::Structural(format!("frame mismatch: {:?} vs {:?}", self.frame, o.frame)));
        }
        Ok(())
    }

    pub fn try_add(&self, o: &Form) -> Result<Form> {
        self.check_frame(o)?;
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c);
        }
        Ok(out)
    }

    pub fn add(&self, o: &Form) -> Form {
        self.try_add(o).expect("form frames must agree")
    }

    pub fn sub(&self, o: &Form) -> Form {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Form {
        self.scale_const(&-GaussRat::one())
    }

    pub fn scale(&self, s: &Scalar) -> Form {
        let mut out = Form::zero(self.frame);
        for (m, c) in &self.terms {
            out.add_term(*m, &c.mul_ref(s));
        }
        out
    }

    pub fn scale_const(&self, s: &GaussRat) -> Form {
        let mut out = Form::zero(self.frame);
        for (m, c) in &self.terms {
            out.add_term(*m, &c.scale(s));
        }
        out
    }

    pub fn try_wedge(&self, o: &Form) -> Result<Form> {
        self.check_frame(o)?;
        let mut out = Form::zero(self.frame);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                if let Some(s) = wedge_sign(*m1, *m2) {
                    let c = c1.mul_ref(c2);
                    let c = if s < 0 { -c } else { c };
                    out.add_term(m1 | m2, &c);
                }
            }
        }
        Ok(out)
    }

    pub fn wedge(&self, o: &Form) -> Form {
        self.try_wedge(o).expect("form frames must agree")
    }

    /// `self ∧ ... ∧ self`, `k` factors; `k = 0` gives 1.
    pub fn power(&self, k: usize) -> Form {
        let mut acc = Form::one(self.frame);
        for _ in 0..k {
            acc = acc.wedge(self);
        }
        acc
    }

    /// Complex conjugation: swaps `phi^j` with its conjugate, conjugates
    /// coefficients and restores canonical order. On real frames it only
    /// conjugates coefficients.
    pub fn conjugate(&self) -> Form {
        let mut out = Form::zero(self.frame);
        for (m, c) in &self.terms {
            let (mask, sign) = conj_monomial(self.frame, *m);
            let c = c.conj();
            out.add_term(mask, &if sign < 0 { -c } else { c });
        }
        out
    }

    pub fn is_real(&self) -> bool {
        self.conjugate() == *self
    }

    pub fn project_bidegree(&self, bd: Bidegree) -> Form {
        let frame = self.frame;
        self.filter(|m| frame.bidegree_of(m) == bd)
    }

    pub fn project_degree(&self, k: usize) -> Form {
        self.filter(|m| m.count_ones() as usize == k)
    }

    pub fn filter<F: Fn(u32) -> bool>(&self, keep: F) -> Form {
        Form {
            frame: self.frame,
            terms: self.terms.iter().filter(|(m, _)| keep(**m)).map(|(m, c)| (*m, c.clone())).collect(),
        }
    }

    /// Bidegrees present in the form.
    pub fn bidegrees(&self) -> Vec<Bidegree> {
        let mut v: Vec<Bidegree> = self.terms.keys().map(|m| self.frame.bidegree_of(*m)).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Coefficient of the canonical top monomial.
    pub fn top_coefficient(&self) -> Result<Scalar> {
        let top = self.frame.top_mask();
        if let Some(d) = self.degree() {
            if d != self.frame.rank() {
                return Err(Error::Structural(format!(
                    "top coefficient needs degree {}, got {}",
                    self.frame.rank(),
                    d
                )));
            }
        } else if !self.is_zero() {
            return Err(Error::Structural("top coefficient of an inhomogeneous form".into()));
        }
        Ok(self.coefficient(top))
    }

    /// Interior product with the dual vector of generator `g`.
    pub fn interior(&self, g: usize) -> Form {
        let mut out = Form::zero(self.frame);
        for (m, c) in &self.terms {
            if m & (1 << g) == 0 {
                continue;
            }
            let below = (m & ((1u32 << g) - 1)).count_ones();
            let c = if below % 2 == 0 { c.clone() } else { -c };
            out.add_term(m & !(1 << g), &c);
        }
        out
    }

    /// `½ Σ π^{ab} ι_a ι_b` for a skew matrix `π` indexed by generators.
    pub fn contract_bivector(&self, pi: &[Vec<Scalar>]) -> Result<Form> {
        let r = self.frame.rank();
        if pi.len() != r || pi.iter().any(|row| row.len() != r) {
            return Err(Error::Structural("bivector has wrong shape".into()));
        }
        for a in 0..r {
            for b in 0..r {
                if pi[a][b] != -&pi[b][a] {
                    return Err(Error::Structural("bivector is not skew".into()));
                }
            }
        }
        let mut out = Form::zero(self.frame);
        for a in 0..r {
            for b in (a + 1)..r {
                if pi[a][b].is_zero() {
                    continue;
                }
                // The (a,b) and (b,a) terms coincide, so the ½ cancels.
                let t = self.interior(b).interior(a).scale(&pi[a][b]);
                out = out.add(&t);
            }
        }
        Ok(out)
    }

    /// Applies `f` to every coefficient.
    pub fn map_coefficients<F: Fn(&Scalar) -> Scalar>(&self, f: F) -> Form {
        let mut out = Form::zero(self.frame);
        for (m, c) in &self.terms {
            out.add_term(*m, &f(c));
        }
        out
    }

    /// Substitutes named parameters (complex partners handled automatically).
    pub fn substitute_named(&self, values: &BTreeMap<String, Scalar>) -> Form {
        self.map_coefficients(|c| c.substitute_named(values))
    }

    /// True when every coefficient is a constant.
    pub fn is_constant(&self) -> bool {
        self.terms.values().all(|c| c.is_constant())
    }

    /// Dense coordinate vector over `basis` (constant coefficients only).
    pub fn coordinates(&self, basis: &[u32]) -> Option<Vec<GaussRat>> {
        let mut out = Vec::with_capacity(basis.len());
        for m in basis {
            out.push(self.coefficient(*m).as_constant()?);
        }
        Some(out)
    }

    pub fn from_coordinates(frame: Frame, basis: &[u32], coords: &[GaussRat]) -> Form {
        let mut out = Form::zero(frame);
        for (m, c) in basis.iter().zip(coords) {
            out.add_term(*m, &Scalar::constant(c.clone()));
        }
        out
    }

    /// Polynomial coordinates over `basis`.
    pub fn scalar_coordinates(&self, basis: &[u32]) -> Vec<Scalar> {
        basis.iter().map(|m| self.coefficient(*m)).collect()
    }

    /// Masks carrying nonzero coefficients.
    pub fn support(&self) -> Vec<u32> {
        self.terms.keys().copied().collect()
    }
}

/// Conjugate of a monomial in the given frame, with the sign from re-sorting.
pub fn conj_monomial(frame: Frame, mask: u32) -> (u32, i32) {
    match frame {
        Frame::Real(_) => (mask, 1),
        Frame::Complex(_) => {
            let images: Vec<usize> = index_list(mask).into_iter().map(|g| frame.conj_generator(g)).collect();
            let out = images.iter().fold(0u32, |acc, g| acc | (1 << g));
            (out, sort_sign(&images))
        }
    }
}

impl fmt::Display for Form {
    /// Renders in the fixture expression grammar, e.g. `phi1^cphi1 + i*phi2^cphi2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mon: Vec<String> = index_list(*m).into_iter().map(|g| self.frame.generator_name(g)).collect();
            let coeff = if c.num_terms() == 1 && c.is_constant() { c.to_string() } else { format!("({})", c) };
            if mon.is_empty() {
                write!(f, "{}", coeff)?;
            } else if c.as_constant().map(|v| v.is_one()).unwrap_or(false) {
                write!(f, "{}", mon.join("^"))?;
            } else {
                write!(f, "{}*{}", coeff, mon.join("^"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c3() -> Frame {
        Frame::Complex(3)
    }

    #[test]
    fn alternation_and_anticommutativity() {
        let f = c3();
        let p1 = Form::phi(f, &[1], Scalar::one());
        let q1 = Form::phi(f, &[-1], Scalar::one());
        assert!(p1.wedge(&p1).is_zero());
        assert_eq!(p1.wedge(&q1), q1.wedge(&p1).neg());
    }

    #[test]
    fn canonical_sign_of_mixed_product() {
        let f = Frame::Complex(2);
        let a = Form::phi(f, &[1, 2], Scalar::one());
        let b = Form::phi(f, &[-1, -2], Scalar::one());
        let w = a.wedge(&b);
        assert_eq!(w.coefficient(0b1111), Scalar::one());
    }

    #[test]
    fn conjugation_pairs() {
        let f = c3();
        let ir2 = Scalar::i().mul_ref(&Scalar::real_var("r2"));
        let w = Form::phi(f, &[1, -1], ir2);
        assert_eq!(w.conjugate(), w);
        let u = Form::phi(f, &[1, -2], Scalar::complex_var("u"));
        // conj(u phi^{1 2̄}) = conj(u) cphi1^phi2 = -conj(u) phi^{2 1̄}
        let expect = Form::phi(f, &[2, -1], -Scalar::complex_var("u").conj());
        assert_eq!(u.conjugate(), expect);
        assert!(u.add(&u.conjugate()).is_real());
    }

    #[test]
    fn projection_and_top() {
        let f = c3();
        let a = Form::phi(f, &[1, 2], Scalar::one()).add(&Form::phi(f, &[1, -1], Scalar::one()));
        assert_eq!(a.project_bidegree(Bidegree::new(1, 1)), Form::phi(f, &[1, -1], Scalar::one()));
        assert!(Form::zero(f).top_coefficient().unwrap().is_zero());
        assert!(a.top_coefficient().is_err());
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(6, 2).len(), 15);
        assert_eq!(Frame::Complex(3).basis_bidegree(1, 1).len(), 9);
    }
}
