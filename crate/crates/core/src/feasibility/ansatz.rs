//! Generic invariant 2-forms and Lee forms with named unknowns.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use num_traits::One;

use crate::algebra::expr::Context;
use crate::algebra::linalg::Matrix;
use crate::algebra::{Form, Frame, GaussRat, Scalar, Var};
use crate::error::{Error, Result};
use crate::operators::{hermitian_matrix, leading_minors};
use crate::structures::AlgebraSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Lck,
    Lcb,
    Lcht,
    Balanced,
    Pluriclosed,
    KGauduchon(usize),
    Kahler,
}

impl Mode {
    pub fn tag(&self) -> String {
        match self {
            Mode::Lck => "lcK".into(),
            Mode::Lcb => "lcb".into(),
            Mode::Lcht => "lcht".into(),
            Mode::Balanced => "balanced".into(),
            Mode::Pluriclosed => "pluriclosed".into(),
            Mode::KGauduchon(k) => format!("kGauduchon({})", k),
            Mode::Kahler => "kahler".into(),
        }
    }

    pub fn parse(text: &str) -> Result<Mode> {
        let t = text.trim().to_ascii_lowercase();
        if let Some(rest) = t.strip_prefix("kgauduchon") {
            let k = rest.trim_start_matches('(').trim_end_matches(')').trim();
            let k: usize = if k.is_empty() { 1 } else { k.parse().map_err(|_| Error::Parse(format!("bad mode {}", text)))? };
            return Ok(Mode::KGauduchon(k));
        }
        Ok(match t.as_str() {
            "lck" => Mode::Lck,
            "lcb" => Mode::Lcb,
            "lcht" => Mode::Lcht,
            "balanced" => Mode::Balanced,
            "pluriclosed" | "skt" => Mode::Pluriclosed,
            "gauduchon" => Mode::KGauduchon(0),
            "kahler" | "kähler" => Mode::Kahler,
            _ => return Err(Error::UnknownName(format!("structure {}", text))),
        })
    }

    /// Modes carrying a Lee form.
    pub fn has_theta(&self) -> bool {
        matches!(self, Mode::Lck | Mode::Lcb | Mode::Lcht)
    }

    /// Modes allowing a `(2,0)+(0,2)` part.
    pub fn has_twenty(&self) -> bool {
        matches!(self, Mode::Lcht)
    }

    /// Power of Ω in the conformal-closure condition.
    pub fn power(&self, n: usize) -> usize {
        match self {
            Mode::Lcb | Mode::Balanced => n.saturating_sub(1).max(1),
            _ => 1,
        }
    }

    /// Residual linear in Ω once θ is fixed.
    pub fn is_linear(&self, n: usize) -> bool {
        match self {
            Mode::Lck | Mode::Lcht | Mode::Kahler | Mode::Pluriclosed => true,
            Mode::Lcb | Mode::Balanced => n <= 2,
            Mode::KGauduchon(_) => n <= 2,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tag())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Role {
    Diagonal,
    OffDiagonal,
    TwoZero,
    Lee,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Unknown {
    pub name: String,
    pub real: bool,
    pub role: Role,
}

impl Unknown {
    pub fn var(&self) -> Var {
        if self.real {
            Var::real(&self.name)
        } else {
            Var::complex(&self.name)
        }
    }

    pub fn scalar(&self) -> Scalar {
        Scalar::var(self.var())
    }
}

/// Symbolic Ω and θ over a spec, with θ already restricted to closed forms.
#[derive(Clone, Debug)]
pub struct GenericAnsatz {
    pub spec: AlgebraSpec,
    pub mode: Mode,
    pub n: usize,
    pub unknowns: Vec<Unknown>,
    pub omega: Form,
    pub theta: Form,
    /// Lines such as `a = conj(a)` or `b = 0`.
    pub theta_constraints: Vec<String>,
}

fn diag_name(n: usize, j: usize) -> String {
    match n {
        2 => ["A", "B"][j].into(),
        3 => ["r2", "s2", "t2"][j].into(),
        _ => format!("h{}", j + 1),
    }
}

fn off_name(n: usize, j: usize, k: usize) -> String {
    match (n, j, k) {
        (2, 0, 1) => "D".into(),
        (3, 0, 1) => "u".into(),
        (3, 1, 2) => "v".into(),
        (3, 0, 2) => "z".into(),
        _ => format!("u{}{}", j + 1, k + 1),
    }
}

fn twenty_name(n: usize, j: usize, k: usize) -> String {
    match (n, j, k) {
        (2, 0, 1) | (3, 0, 1) => "L".into(),
        (3, 0, 2) => "M".into(),
        (3, 1, 2) => "N".into(),
        _ => format!("l{}{}", j + 1, k + 1),
    }
}

fn lee_name(n: usize, j: usize) -> String {
    if n <= 3 {
        ["a", "b", "c"][j].into()
    } else {
        format!("a{}", j + 1)
    }
}

fn mask(n: usize, hol: &[usize], anti: &[usize]) -> u32 {
    hol.iter().map(|&j| 1u32 << j).sum::<u32>() | anti.iter().map(|&k| 1u32 << (n + k)).sum::<u32>()
}

fn term(frame: Frame, n: usize, hol: &[usize], anti: &[usize], c: Scalar) -> Form {
    // Masks are ordered holomorphic first, which matches the wedge order used here.
    Form::monomial(frame, mask(n, hol, anti), c)
}

/// Real closed 1-forms `Σ x_j φ^j + conj`: for every `j`, `(Re x_j, Im x_j)` as
/// combinations of the free real coordinates, plus the free coordinate indices.
pub(crate) fn closed_lee_coordinates(spec: &AlgebraSpec) -> Result<(Vec<Vec<GaussRat>>, Vec<usize>)> {
    let frame = spec.frame();
    let n = frame.complex_rank().ok_or_else(|| Error::Structural("a complex frame is required".into()))?;
    let basis2 = frame.basis(2);
    let mut cols = Vec::new();
    for j in 0..n {
        for c in [GaussRat::one(), GaussRat::i()] {
            let f = Form::monomial(frame, 1 << j, Scalar::constant(c));
            let t = f.add(&f.conjugate());
            let d = spec.reduce(&spec.d(&t));
            cols.push(d.coordinates(&basis2).ok_or_else(|| Error::Symbolic("instantiate parameters first".into()))?);
        }
    }
    let m = Matrix::from_columns(basis2.len(), &cols);
    let real = m.real_part().vstack(&m.imag_part());
    let (r, pivots) = real.rref();
    let free: Vec<usize> = (0..2 * n).filter(|c| !pivots.contains(c)).collect();
    // coords[c][f]: coefficient of free coordinate f in real coordinate c.
    let mut coords = vec![vec![GaussRat::from(0); free.len()]; 2 * n];
    for (fi, &f) in free.iter().enumerate() {
        coords[f][fi] = GaussRat::from(1);
    }
    for (row, &p) in pivots.iter().enumerate() {
        for (fi, &f) in free.iter().enumerate() {
            coords[p][fi] = -r.get(row, f).clone();
        }
    }
    Ok((coords, free))
}

/// Builds the generic ansatz for `mode`.
pub fn build_ansatz(spec: &AlgebraSpec, mode: Mode) -> Result<GenericAnsatz> {
    let frame = spec.frame();
    let n = frame.complex_rank().ok_or_else(|| Error::Structural("the ansatz needs a complex frame".into()))?;
    let report = spec.validate();
    if !report.is_valid() || report.integrable != Some(true) {
        return Err(Error::Validation(format!("spec {} is not an integrable Lie algebra", spec.name)));
    }
    let mut unknowns = Vec::new();
    let mut omega = Form::zero(frame);
    let i = Scalar::i();
    for j in 0..n {
        let u = Unknown { name: diag_name(n, j), real: true, role: Role::Diagonal };
        omega = omega.add(&term(frame, n, &[j], &[j], &i * &u.scalar()));
        unknowns.push(u);
    }
    for j in 0..n {
        for k in j + 1..n {
            let u = Unknown { name: off_name(n, j, k), real: false, role: Role::OffDiagonal };
            let x = u.scalar();
            omega = omega.add(&term(frame, n, &[j], &[k], x.clone())).add(&term(frame, n, &[k], &[j], -x.conj()));
            unknowns.push(u);
        }
    }
    if mode.has_twenty() {
        for j in 0..n {
            for k in j + 1..n {
                let u = Unknown { name: twenty_name(n, j, k), real: false, role: Role::TwoZero };
                let x = u.scalar();
                let f = term(frame, n, &[j, k], &[], x);
                omega = omega.add(&f).add(&f.conjugate());
                unknowns.push(u);
            }
        }
    }
    let mut theta = Form::zero(frame);
    let mut theta_constraints = Vec::new();
    if mode.has_theta() {
        let (coords, free) = match closed_lee_coordinates(spec) {
            Ok(c) => c,
            Err(Error::Symbolic(_)) => {
                let point = spec.sample_point().ok_or_else(|| Error::Symbolic("no admissible parameter sample".into()))?;
                closed_lee_coordinates(&spec.evaluate(&point)?)?
            }
            Err(e) => return Err(e),
        };
        // One real or complex unknown per Lee coordinate that keeps a free part.
        let mut free_vars: Vec<Scalar> = vec![Scalar::zero(); free.len()];
        for j in 0..n {
            let name = lee_name(n, j);
            let re_free = free.iter().position(|&f| f == 2 * j);
            let im_free = free.iter().position(|&f| f == 2 * j + 1);
            match (re_free, im_free) {
                (Some(a), Some(b)) => {
                    let x = Scalar::complex_var(&name);
                    free_vars[a] = x.re();
                    free_vars[b] = x.im();
                    unknowns.push(Unknown { name, real: false, role: Role::Lee });
                }
                (Some(a), None) => {
                    free_vars[a] = Scalar::real_var(&name);
                    unknowns.push(Unknown { name, real: true, role: Role::Lee });
                }
                (None, Some(b)) => {
                    let nm = format!("{}_im", name);
                    free_vars[b] = Scalar::real_var(&nm);
                    unknowns.push(Unknown { name: nm, real: true, role: Role::Lee });
                }
                (None, None) => {}
            }
        }
        for j in 0..n {
            let comb = |c: usize| -> Scalar {
                let mut s = Scalar::zero();
                for (fi, v) in free_vars.iter().enumerate() {
                    s.add_assign_ref(&v.scale(&coords[c][fi]));
                }
                s
            };
            let x = &comb(2 * j) + &(&Scalar::i() * &comb(2 * j + 1));
            let name = lee_name(n, j);
            let plain = Scalar::complex_var(&name);
            let realv = Scalar::real_var(&name);
            if x.is_zero() {
                theta_constraints.push(format!("{} = 0", name));
            } else if x == realv {
                theta_constraints.push(format!("{} = conj({})", name, name));
            } else if x != plain {
                theta_constraints.push(format!("{} = {}", name, x));
            }
            let f = Form::monomial(frame, 1 << j, x);
            theta = theta.add(&f).add(&f.conjugate());
        }
        if !spec.reduce(&spec.d(&theta)).is_zero() {
            return Err(Error::Validation("closed Lee forms depend on the parameters; instantiate them".into()));
        }
    }
    for p in spec.params().params() {
        if unknowns.iter().any(|u| u.name == p.name) {
            return Err(Error::Structural(format!("parameter {} clashes with an ansatz unknown", p.name)));
        }
    }
    Ok(GenericAnsatz { spec: spec.clone(), mode, n, unknowns, omega, theta, theta_constraints })
}

impl GenericAnsatz {
    /// Real dimension of the space swept by Ω.
    pub fn real_dimension(&self) -> usize {
        self.unknowns.iter().filter(|u| u.role != Role::Lee).map(|u| if u.real { 1 } else { 2 }).sum()
    }

    pub fn unknown(&self, name: &str) -> Option<&Unknown> {
        self.unknowns.iter().find(|u| u.name == name)
    }

    /// Parsing context: frame, spec parameters and unknowns.
    pub fn context(&self) -> Context {
        let mut ctx = self.spec.context();
        for u in &self.unknowns {
            ctx.declare(u.var());
        }
        ctx
    }

    /// `π^{1,1}Ω = i Σ H_jk φ^j∧φ̄^k`.
    pub fn hmat(&self) -> Vec<Vec<Scalar>> {
        hermitian_matrix(&self.omega).expect("complex frame")
    }

    /// Strict positivity atoms: diagonal unknowns, leading minors of order ≥ 2
    /// and positive spec parameters.
    pub fn strict_atoms(&self) -> Vec<Scalar> {
        let mut out: Vec<Scalar> = self.unknowns.iter().filter(|u| u.role == Role::Diagonal).map(|u| u.scalar()).collect();
        out.extend(leading_minors(&self.hmat()).into_iter().skip(1));
        out.extend(self.spec.params().positive_params());
        out
    }

    /// Substitutes values for unknowns (and parameters).
    pub fn instantiate(&self, values: &BTreeMap<String, GaussRat>) -> (Form, Form) {
        let map: BTreeMap<String, Scalar> = values.iter().map(|(k, v)| (k.clone(), Scalar::constant(v.clone()))).collect();
        (self.omega.substitute_named(&map), self.theta.substitute_named(&map))
    }
}
