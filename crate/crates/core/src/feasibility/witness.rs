//! Exact witnesses and the deterministic search for them.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::ansatz::{closed_lee_coordinates, GenericAnsatz, Mode, Role};
use super::positivity::positivity_check;
use super::residual::residual_for;
use crate::algebra::linalg::Matrix;
use crate::algebra::{Form, GaussRat, Scalar};
use crate::error::{Error, Result};
use crate::runtime;
use crate::structures::AlgebraSpec;

pub const DEFAULT_BUDGET: usize = 10_000;
const BOUND: i64 = 16;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub mode: String,
    /// Values of the ansatz unknowns, when the witness came from one.
    #[serde(serialize_with = "values_as_text")]
    pub values: BTreeMap<String, GaussRat>,
    #[serde(serialize_with = "form_as_text")]
    pub omega: Form,
    #[serde(serialize_with = "form_as_text")]
    pub theta: Form,
    #[serde(serialize_with = "list_as_text")]
    pub minors: Vec<GaussRat>,
}

fn values_as_text<S: serde::Serializer>(v: &BTreeMap<String, GaussRat>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let m: BTreeMap<&String, String> = v.iter().map(|(k, x)| (k, x.to_string())).collect();
    serde::Serialize::serialize(&m, s)
}

fn form_as_text<S: serde::Serializer>(f: &Form, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&f.to_string())
}

fn list_as_text<S: serde::Serializer>(v: &[GaussRat], s: S) -> std::result::Result<S::Ok, S::Error> {
    let m: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    serde::Serialize::serialize(&m, s)
}

/// Checks `(Ω, θ)` from scratch and packages it as a witness.
pub fn verify_witness(spec: &AlgebraSpec, mode: Mode, omega: &Form, theta: &Form) -> Result<Witness> {
    if !spec.is_constant() {
        return Err(Error::Symbolic("instantiate the parameters first".into()));
    }
    if !omega.is_constant() || !theta.is_constant() {
        return Err(Error::Symbolic("witness forms must have constant coefficients".into()));
    }
    if !omega.is_real() || !theta.is_real() {
        return Err(Error::Validation("witness forms must be real".into()));
    }
    if !mode.has_twenty() && !omega.project_bidegree(crate::algebra::Bidegree::new(2, 0)).is_zero() {
        return Err(Error::Validation(format!("{} forms have no (2,0) part", mode)));
    }
    if !mode.has_theta() && !theta.is_zero() {
        return Err(Error::Validation(format!("{} takes no Lee form", mode)));
    }
    if !spec.d(theta).is_zero() {
        return Err(Error::Validation("the Lee form is not closed".into()));
    }
    let r = residual_for(spec, mode, omega, theta)?;
    if let Some(e) = r.entries.first() {
        return Err(Error::Validation(format!("residual at {} is {}", e.label, e.value)));
    }
    let p = positivity_check(omega)?;
    if !p.is_positive() {
        return Err(Error::Validation("the (1,1) part is not positive".into()));
    }
    let minors = p.minors.iter().map(|m| m.as_constant().expect("constant")).collect();
    Ok(Witness { mode: mode.tag(), values: BTreeMap::new(), omega: omega.clone(), theta: theta.clone(), minors })
}

impl Witness {
    /// Re-runs every check.
    pub fn verify(&self, spec: &AlgebraSpec) -> Result<()> {
        let mode = Mode::parse(&self.mode)?;
        let again = verify_witness(spec, mode, &self.omega, &self.theta)?;
        if again.minors != self.minors {
            return Err(Error::Validation("stored minors disagree".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SearchOutcome {
    Found { witness: Witness, candidate: usize },
    Unknown { candidates: usize, samples: usize },
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub seed: u64,
    /// Samples per Lee-form candidate.
    pub budget: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { seed: 0, budget: DEFAULT_BUDGET }
    }
}

/// Real coordinate directions of Ω: `(unknown, imaginary?, form)`.
fn omega_directions(a: &GenericAnsatz) -> Vec<(String, bool, Form)> {
    let zero: BTreeMap<String, Scalar> =
        a.unknowns.iter().filter(|u| u.role != Role::Lee).map(|u| (u.name.clone(), Scalar::zero())).collect();
    let mut out = Vec::new();
    for u in a.unknowns.iter().filter(|u| u.role != Role::Lee) {
        let parts: &[(bool, GaussRat)] = if u.real { &[(false, GaussRat::one())] } else { &[(false, GaussRat::one()), (true, GaussRat::i())] };
        for (im, val) in parts {
            let mut m = zero.clone();
            m.insert(u.name.clone(), Scalar::constant(val.clone()));
            out.push((u.name.clone(), *im, a.omega.substitute_named(&m)));
        }
    }
    out
}

fn values_from(dirs: &[(String, bool, Form)], x: &[GaussRat]) -> BTreeMap<String, GaussRat> {
    let mut out: BTreeMap<String, GaussRat> = BTreeMap::new();
    for ((name, im, _), c) in dirs.iter().zip(x) {
        let e = out.entry(name.clone()).or_insert_with(GaussRat::zero);
        *e += &if *im { c.clone() * GaussRat::i() } else { c.clone() };
    }
    out
}

fn combine(dirs: &[(String, bool, Form)], x: &[GaussRat]) -> Form {
    let frame = dirs[0].2.frame();
    let mut f = Form::zero(frame);
    for ((_, _, b), c) in dirs.iter().zip(x) {
        if !c.is_zero() {
            f = f.add(&b.scale_const(c));
        }
    }
    f
}

/// Closed real Lee forms: a basis, from the free real coordinates.
pub fn closed_lee_basis(spec: &AlgebraSpec) -> Result<Vec<Form>> {
    let frame = spec.frame();
    let (coords, free) = closed_lee_coordinates(spec)?;
    let n = frame.complex_rank().expect("complex frame");
    Ok((0..free.len())
        .map(|fi| {
            let mut f = Form::zero(frame);
            for j in 0..n {
                let x = GaussRat::new(coords[2 * j][fi].re.clone(), coords[2 * j + 1][fi].re.clone());
                let t = Form::monomial(frame, 1 << j, Scalar::constant(x));
                f = f.add(&t).add(&t.conjugate());
            }
            f
        })
        .collect())
}

/// Lee-form candidates in search order: the fixture's hint, zero, then
/// combinations of the closed basis with coefficients in {-1, 0, 1}.
pub fn lee_candidates(spec: &AlgebraSpec, mode: Mode) -> Result<Vec<Form>> {
    let frame = spec.frame();
    if !mode.has_theta() {
        return Ok(vec![Form::zero(frame)]);
    }
    let mut out: Vec<Form> = Vec::new();
    if let Some(h) = spec.lee_hint() {
        out.push(h.clone());
    }
    out.push(Form::zero(frame));
    let basis = closed_lee_basis(spec)?;
    let k = basis.len();
    let total = 3usize.checked_pow(k as u32).unwrap_or(usize::MAX).min(6561);
    for idx in 0..total {
        let mut f = Form::zero(frame);
        let mut rest = idx;
        for b in &basis {
            let c = (rest % 3) as i64 - 1;
            rest /= 3;
            if c != 0 {
                f = f.add(&b.scale_const(&GaussRat::int(c)));
            }
        }
        if !out.contains(&f) {
            out.push(f);
        }
    }
    Ok(out)
}

fn random_rational<R: Rng>(rng: &mut R) -> GaussRat {
    GaussRat::frac(rng.gen_range(-BOUND..=BOUND), rng.gen_range(1..=BOUND))
}

pub(crate) fn split_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Kernel of the linear condition on Ω for a fixed Lee form, in real coordinates.
fn linear_kernel(spec: &AlgebraSpec, mode: Mode, dirs: &[(String, bool, Form)], theta: &Form) -> Result<Vec<Vec<GaussRat>>> {
    let images: Vec<Form> = dirs
        .iter()
        .map(|(_, _, b)| {
            let r = residual_for(spec, mode, b, theta)?;
            let mut f = Form::zero(b.frame());
            for e in r.entries {
                f.add_term(e.mask, &e.value);
            }
            Ok(f)
        })
        .collect::<Result<_>>()?;
    let masks: BTreeSet<u32> = images.iter().flat_map(|f| f.support()).collect();
    let masks: Vec<u32> = masks.into_iter().collect();
    if masks.is_empty() {
        return Ok((0..dirs.len()).map(|i| Matrix::identity(dirs.len()).column(i)).collect());
    }
    let cols: Vec<Vec<GaussRat>> = images.iter().map(|f| f.coordinates(&masks).expect("constant")).collect();
    Ok(Matrix::from_columns(masks.len(), &cols).real_kernel())
}

fn try_point(
    spec: &AlgebraSpec,
    mode: Mode,
    dirs: &[(String, bool, Form)],
    x: &[GaussRat],
    theta: &Form,
) -> Option<Witness> {
    let omega = combine(dirs, x);
    let p = positivity_check(&omega).ok()?;
    if !p.is_positive() {
        return None;
    }
    let mut w = verify_witness(spec, mode, &omega, theta).ok()?;
    w.values = values_from(dirs, x);
    Some(w)
}

fn search_linear(
    spec: &AlgebraSpec,
    a: &GenericAnsatz,
    dirs: &[(String, bool, Form)],
    theta: &Form,
    rng: &mut ChaCha8Rng,
    budget: usize,
) -> Result<(Option<Witness>, usize)> {
    let ker = linear_kernel(spec, a.mode, dirs, theta)?;
    if ker.is_empty() {
        return Ok((None, 0));
    }
    // Every diagonal direction must be reachable.
    for (i, (name, _, _)) in dirs.iter().enumerate() {
        if a.unknown(name).map(|u| u.role) == Some(Role::Diagonal) && ker.iter().all(|v| v[i].is_zero()) {
            return Ok((None, 0));
        }
    }
    let dim = dirs.len();
    let add = |acc: &mut Vec<GaussRat>, v: &[GaussRat], c: &GaussRat| {
        for (s, x) in acc.iter_mut().zip(v) {
            *s += &(x.clone() * c.clone());
        }
    };
    let mut canon: Vec<Vec<GaussRat>> = Vec::new();
    let mut diag = vec![GaussRat::zero(); dim];
    for v in &ker {
        let lead = v.iter().position(|c| !c.is_zero()).unwrap_or(0);
        if a.unknown(&dirs[lead].0).map(|u| u.role) == Some(Role::Diagonal) {
            add(&mut diag, v, &GaussRat::one());
        }
    }
    canon.push(diag);
    let mut all = vec![GaussRat::zero(); dim];
    for v in &ker {
        add(&mut all, v, &GaussRat::one());
    }
    canon.push(all);
    for v in &ker {
        canon.push(v.clone());
        canon.push(v.iter().map(|c| -c.clone()).collect());
    }
    let mut samples = 0;
    for x in &canon {
        samples += 1;
        if let Some(w) = try_point(spec, a.mode, dirs, x, theta) {
            return Ok((Some(w), samples));
        }
    }
    while samples < budget {
        samples += 1;
        let mut x = vec![GaussRat::zero(); dim];
        for v in &ker {
            add(&mut x, v, &random_rational(rng));
        }
        if let Some(w) = try_point(spec, a.mode, dirs, &x, theta) {
            return Ok((Some(w), samples));
        }
    }
    Ok((None, samples))
}

/// Solves `dωᵐ = θ∧ωᵐ` for a closed real θ, if possible.
fn solve_lee(spec: &AlgebraSpec, omega_m: &Form, basis: &[Form]) -> Option<Form> {
    let frame = omega_m.frame();
    let target = spec.d(omega_m);
    let images: Vec<Form> = basis.iter().map(|t| t.wedge(omega_m)).collect();
    let masks: BTreeSet<u32> = images.iter().flat_map(|f| f.support()).chain(target.support()).collect();
    let masks: Vec<u32> = masks.into_iter().collect();
    if masks.is_empty() {
        return Some(Form::zero(frame));
    }
    let cols: Vec<Vec<GaussRat>> = images.iter().map(|f| f.coordinates(&masks).expect("constant")).collect();
    let m = Matrix::from_columns(masks.len(), &cols);
    let rhs = target.coordinates(&masks).expect("constant");
    let real = m.real_part().vstack(&m.imag_part());
    let b: Vec<GaussRat> = rhs.iter().map(|c| GaussRat::from_rational(c.re.clone())).chain(rhs.iter().map(|c| GaussRat::from_rational(c.im.clone()))).collect();
    let x = real.solve(&b)?;
    let mut theta = Form::zero(frame);
    for (t, c) in basis.iter().zip(&x) {
        theta = theta.add(&t.scale_const(c));
    }
    Some(theta)
}

fn search_nonlinear(spec: &AlgebraSpec, a: &GenericAnsatz, dirs: &[(String, bool, Form)], rng: &mut ChaCha8Rng, budget: usize) -> Result<Option<Witness>> {
    let basis = if a.mode.has_theta() { closed_lee_basis(spec)? } else { Vec::new() };
    let m = a.mode.power(a.n);
    for s in 0..budget {
        let x: Vec<GaussRat> = dirs
            .iter()
            .map(|(name, _, _)| {
                let diag = a.unknown(name).map(|u| u.role) == Some(Role::Diagonal);
                match (s, diag) {
                    (0, true) => GaussRat::one(),
                    (0, false) => GaussRat::zero(),
                    (1..=31, true) => GaussRat::frac(rng.gen_range(1..=BOUND), rng.gen_range(1..=BOUND)),
                    (1..=31, false) => GaussRat::zero(),
                    (_, true) => GaussRat::frac(rng.gen_range(1..=BOUND), 1),
                    (_, false) => random_rational(rng),
                }
            })
            .collect();
        let omega = combine(dirs, &x);
        if !positivity_check(&omega).map(|p| p.is_positive()).unwrap_or(false) {
            continue;
        }
        let theta = if a.mode.has_theta() {
            match solve_lee(spec, &omega.power(m), &basis) {
                Some(t) => t,
                None => continue,
            }
        } else {
            Form::zero(spec.frame())
        };
        if let Ok(mut w) = verify_witness(spec, a.mode, &omega, &theta) {
            w.values = values_from(dirs, &x);
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Deterministic search. `Unknown` means the budget ran out, not that no
/// structure exists.
pub fn witness_search(spec: &AlgebraSpec, ansatz: &GenericAnsatz, opts: SearchOptions) -> Result<SearchOutcome> {
    if !spec.is_constant() {
        return Err(Error::Symbolic("witness search needs instantiated parameters".into()));
    }
    let dirs = omega_directions(ansatz);
    if !ansatz.mode.is_linear(ansatz.n) {
        let mut rng = ChaCha8Rng::seed_from_u64(split_seed(opts.seed, 0));
        return Ok(match search_nonlinear(spec, ansatz, &dirs, &mut rng, opts.budget)? {
            Some(witness) => SearchOutcome::Found { witness, candidate: 0 },
            None => SearchOutcome::Unknown { candidates: 1, samples: opts.budget },
        });
    }
    let thetas = lee_candidates(spec, ansatz.mode)?;
    let batch = runtime::install(rayon::current_num_threads).max(1) * 2;
    let mut samples = 0;
    for (b, chunk) in thetas.chunks(batch).enumerate() {
        let results: Vec<Result<(Option<Witness>, usize)>> = runtime::install(|| {
            chunk
                .par_iter()
                .enumerate()
                .map(|(j, theta)| {
                    let mut rng = ChaCha8Rng::seed_from_u64(split_seed(opts.seed, b * batch + j));
                    search_linear(spec, ansatz, &dirs, theta, &mut rng, opts.budget)
                })
                .collect()
        });
        for (j, r) in results.into_iter().enumerate() {
            let (found, used) = r?;
            samples += used;
            if let Some(witness) = found {
                return Ok(SearchOutcome::Found { witness, candidate: b * batch + j });
            }
        }
    }
    Ok(SearchOutcome::Unknown { candidates: thetas.len(), samples })
}
