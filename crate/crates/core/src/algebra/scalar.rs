//! Sparse multivariate polynomials over `Q(i)` with a conjugation involution.
//!
//! Every indeterminate carries a kind. Real indeterminates are fixed by
//! conjugation; a complex indeterminate `z` comes with a partner `conj(z)`
//! and conjugation swaps the two.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::gauss::{GaussRat, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    Real,
    /// A complex indeterminate.
    Holo,
    /// The conjugate partner of a complex indeterminate.
    Anti,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    name: Arc<str>,
    kind: VarKind,
}

impl Var {
    pub fn real(name: &str) -> Var {
        Var { name: Arc::from(name), kind: VarKind::Real }
    }

    pub fn complex(name: &str) -> Var {
        Var { name: Arc::from(name), kind: VarKind::Holo }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> VarKind {
        self.kind
    }

    pub fn is_real(&self) -> bool {
        self.kind == VarKind::Real
    }

    pub fn conj(&self) -> Var {
        let kind = match self.kind {
            VarKind::Real => VarKind::Real,
            VarKind::Holo => VarKind::Anti,
            VarKind::Anti => VarKind::Holo,
        };
        Var { name: self.name.clone(), kind }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            VarKind::Anti => write!(f, "conj({})", self.name),
            _ => write!(f, "{}", self.name),
        }
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// A power product of indeterminates, sorted by variable, exponents > 0.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Debug)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, v: &Var) -> u32 {
        self.0.iter().find(|(w, _)| w == v).map(|(_, e)| *e).unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    pub fn conj(&self) -> Monomial {
        let mut v: Vec<(Var, u32)> = self.0.iter().map(|(x, e)| (x.conj(), *e)).collect();
        v.sort();
        Monomial(v)
    }

    /// `self / other` when `other` divides `self`.
    pub fn divide(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::new();
        let mut j = 0;
        for (v, e) in &self.0 {
            let mut e = *e;
            if j < other.0.len() && other.0[j].0 == *v {
                if other.0[j].1 > e {
                    return None;
                }
                e -= other.0[j].1;
                j += 1;
            }
            if e > 0 {
                out.push((v.clone(), e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Removes one power of `v`, if present.
    pub fn divide_var(&self, v: &Var) -> Option<Monomial> {
        let pos = self.0.iter().position(|(w, _)| w == v)?;
        let mut out = self.0.clone();
        if out[pos].1 == 1 {
            out.remove(pos);
        } else {
            out[pos].1 -= 1;
        }
        Some(Monomial(out))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{}^{}", v, e) })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Polynomial with Gaussian-rational coefficients. Zero is the empty map.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Scalar {
    terms: BTreeMap<Monomial, GaussRat>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(GaussRat::one())
    }

    pub fn constant(c: GaussRat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Scalar { terms }
    }

    pub fn int(n: i64) -> Self {
        Self::constant(GaussRat::int(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Self::constant(GaussRat::frac(n, d))
    }

    pub fn rational(r: Rational) -> Self {
        Self::constant(GaussRat::from_rational(r))
    }

    pub fn i() -> Self {
        Self::constant(GaussRat::i())
    }

    pub fn var(v: Var) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(v), GaussRat::one());
        Scalar { terms }
    }

    pub fn real_var(name: &str) -> Self {
        Self::var(Var::real(name))
    }

    pub fn complex_var(name: &str) -> Self {
        Self::var(Var::complex(name))
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, GaussRat)>>(it: I) -> Self {
        let mut s = Scalar::zero();
        for (m, c) in it {
            s.add_term(m, &c);
        }
        s
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussRat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    /// The value of a constant polynomial.
    pub fn as_constant(&self) -> Option<GaussRat> {
        if self.is_zero() {
            return Some(GaussRat::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&Monomial::one()) {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn coefficient(&self, m: &Monomial) -> GaussRat {
        self.terms.get(m).cloned().unwrap_or_else(GaussRat::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: &GaussRat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign_ref(&mut self, o: &Scalar) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c);
        }
    }

    pub fn sub_assign_ref(&mut self, o: &Scalar) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), &-c);
        }
    }

    pub fn scale(&self, c: &GaussRat) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar { terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn mul_ref(&self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        if let Some(c) = o.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return o.scale(&c);
        }
        let mut out = Scalar::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), &(c1 * c2));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = acc.mul_ref(self);
        }
        acc
    }

    /// The ring involution: conjugates coefficients and swaps complex partners.
    pub fn conj(&self) -> Scalar {
        Scalar { terms: self.terms.iter().map(|(m, c)| (m.conj(), c.conj())).collect() }
    }

    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// `(s + conj s) / 2`.
    pub fn re(&self) -> Scalar {
        (self + &self.conj()).scale(&GaussRat::frac(1, 2))
    }

    /// `(s - conj s) / 2i`.
    pub fn im(&self) -> Scalar {
        (self - &self.conj()).scale(&GaussRat::new(Rational::zero(), super::gauss::rat(-1, 2)))
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.factors().iter().map(|(v, _)| v.clone())).collect()
    }

    /// Variable names (complex partners collapse to one name).
    pub fn variable_names(&self) -> BTreeSet<String> {
        self.variables().into_iter().map(|v| v.name().to_string()).collect()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Substitutes each variable in `map` by a polynomial. Variables absent
    /// from `map` are kept.
    pub fn substitute(&self, map: &BTreeMap<Var, Scalar>) -> Scalar {
        if map.is_empty() {
            return self.clone();
        }
        let mut out = Scalar::zero();
        for (m, c) in &self.terms {
            let mut term = Scalar::constant(c.clone());
            let mut rest = Monomial::one();
            for (v, e) in m.factors() {
                match map.get(v) {
                    Some(val) => term = term.mul_ref(&val.pow(*e)),
                    None => rest = rest.mul(&Monomial(vec![(v.clone(), *e)])),
                }
            }
            let rest = Scalar { terms: std::iter::once((rest, GaussRat::one())).collect() };
            out.add_assign_ref(&term.mul_ref(&rest));
        }
        out
    }

    /// Builds a substitution map from values keyed by variable name: complex
    /// names map `z -> value`, `conj(z) -> conj(value)`.
    pub fn substitute_named(&self, values: &BTreeMap<String, Scalar>) -> Scalar {
        let mut map = BTreeMap::new();
        for v in self.variables() {
            if let Some(val) = values.get(v.name()) {
                let val = if v.kind() == VarKind::Anti { val.conj() } else { val.clone() };
                map.insert(v, val);
            }
        }
        self.substitute(&map)
    }

    /// Leading term in the monomial order (largest monomial).
    pub fn leading_term(&self) -> Option<(&Monomial, &GaussRat)> {
        self.terms.iter().next_back()
    }

    pub fn monomial_scalar(m: Monomial, c: GaussRat) -> Scalar {
        let mut s = Scalar::zero();
        s.add_term(m, &c);
        s
    }

    /// Rewrites every occurrence of `lhs` (times any cofactor) by `rhs`,
    /// repeating until no term is divisible by `lhs` or `limit` passes run.
    pub fn rewrite(&self, lhs: &Monomial, rhs: &Scalar, limit: usize) -> Scalar {
        let mut cur = self.clone();
        for _ in 0..limit {
            let mut changed = false;
            let mut out = Scalar::zero();
            for (m, c) in &cur.terms {
                match m.divide(lhs) {
                    Some(q) => {
                        changed = true;
                        out.add_assign_ref(&rhs.mul_ref(&Scalar::monomial_scalar(q, c.clone())));
                    }
                    None => out.add_term(m.clone(), c),
                }
            }
            cur = out;
            if !changed {
                break;
            }
        }
        cur
    }

    /// Writes the polynomial as `sum_k x^k * c_k(rest)` for the variable `v`.
    pub fn coefficients_in(&self, v: &Var) -> BTreeMap<u32, Scalar> {
        let mut out: BTreeMap<u32, Scalar> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            let rest: Vec<(Var, u32)> = m.factors().iter().filter(|(w, _)| w != v).cloned().collect();
            out.entry(e).or_insert_with(Scalar::zero).add_term(Monomial(rest), c);
        }
        out.retain(|_, s| !s.is_zero());
        out
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(mut self, o: Scalar) -> Scalar {
        self.add_assign_ref(&o);
        self
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        let mut s = self.clone();
        s.add_assign_ref(o);
        s
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(mut self, o: Scalar) -> Scalar {
        self.sub_assign_ref(&o);
        self
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        let mut s = self.clone();
        s.sub_assign_ref(o);
        s
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        self.mul_ref(&o)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        self.mul_ref(o)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.scale(&-GaussRat::one())
    }
}

impl<'a> Neg for &'a Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.scale(&-GaussRat::one())
    }
}

impl From<GaussRat> for Scalar {
    fn from(c: GaussRat) -> Self {
        Scalar::constant(c)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl fmt::Display for Scalar {
    /// Renders in the expression grammar accepted by [`crate::algebra::expr`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            // Pull a leading minus out of purely real or purely imaginary coefficients.
            let negative = (c.im.is_zero() && c.re < Rational::zero())
                || (c.re.is_zero() && c.im < Rational::zero());
            let abs = if negative { -c } else { c.clone() };
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { "-" } else { "+" })?;
            }
            first = false;
            if m.is_one() {
                write!(f, "{}", abs)?;
            } else if abs.is_one() {
                write!(f, "{}", m)?;
            } else {
                write!(f, "{}*{}", abs, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugation_swaps_partners_and_fixes_reals() {
        let u = Scalar::complex_var("u");
        let r = Scalar::real_var("r2");
        let s = &(&u * &r) + &Scalar::i();
        let c = s.conj();
        assert_eq!(c.to_string(), "-i + r2*conj(u)");
        assert_eq!(c.conj(), s);
        assert!(r.is_real());
        assert!(!u.is_real());
        assert!((&u * &u.conj()).is_real());
    }

    #[test]
    fn zero_has_unique_normal_form() {
        let u = Scalar::complex_var("u");
        let z = &u - &u;
        assert_eq!(z, Scalar::zero());
        assert_eq!(z.num_terms(), 0);
    }

    #[test]
    fn substitution_respects_partners() {
        let t = Scalar::complex_var("t");
        let e = &t + &t.conj();
        let mut vals = BTreeMap::new();
        vals.insert("t".to_string(), Scalar::constant(GaussRat::new(Rational::one(), Rational::one())));
        assert_eq!(e.substitute_named(&vals), Scalar::int(2));
    }
}
