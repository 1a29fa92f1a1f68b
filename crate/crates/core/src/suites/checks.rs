use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{RunOptions, Status};
use crate::algebra::expr::{parse_form, parse_scalar, Context};
use crate::algebra::{Form, GaussRat, Scalar};
use crate::cohomology::{bc_to_dolbeault_injectivity, cohomology_dims, ddbar_lemma_check, delta_degrees, weak_ddbar_check, DimTable, Theory};
use crate::error::{Error, Result};
use crate::feasibility::residual::ddbar;
use crate::feasibility::witness::split_seed;
use crate::feasibility::*;
use crate::operators::identities::*;
use crate::operators::MetricData;
use crate::structures::{catalog_names, load_catalog, load_instance, parse_salamon, AlgebraSpec};

pub(super) struct Outcome {
    pub status: Status,
    pub data: Value,
}

type Runner = Box<dyn Fn(&RunOptions) -> Result<Outcome> + Send + Sync>;

pub(super) struct Check {
    pub name: String,
    pub fixture: String,
    pub claim: &'static str,
    pub expected: Status,
    pub run: Runner,
}

fn check<F>(name: &str, fixture: &str, expected: Status, claim: &'static str, run: F) -> Check
where
    F: Fn(&RunOptions) -> Result<Outcome> + Send + Sync + 'static,
{
    Check { name: name.to_string(), fixture: fixture.to_string(), claim, expected, run: Box::new(run) }
}

pub(super) fn suite(name: &str) -> Vec<Check> {
    match name {
        "surfaces" => surfaces(),
        "nilmanifolds6" => nilmanifolds(),
        "solvclasses" => solvclasses(),
        "nakamura" => nakamura(),
        "lefschetz" => lefschetz(),
        "cohomology" => cohomology(),
        _ => Vec::new(),
    }
}

fn pass_if(ok: bool, data: Value) -> Outcome {
    Outcome { status: if ok { Status::Pass } else { Status::Fail }, data }
}

fn q(text: &str) -> GaussRat {
    parse_scalar(text, &Context::new()).ok().and_then(|s| s.as_constant()).expect("constant literal")
}

fn point(values: &[(&str, &str)]) -> BTreeMap<String, GaussRat> {
    values.iter().map(|(k, v)| (k.to_string(), q(v))).collect()
}

fn text_map(values: &BTreeMap<String, GaussRat>) -> Value {
    json!(values.iter().map(|(k, v)| (k.clone(), v.to_string())).collect::<BTreeMap<_, _>>())
}

fn form(spec: &AlgebraSpec, text: &str) -> Result<Form> {
    parse_form(text, &spec.context())
}

fn certificates(names: &[&str]) -> Result<Outcome> {
    let mut data = BTreeMap::new();
    let mut ok = true;
    for name in names {
        let b = bundled(name).ok_or_else(|| Error::UnknownName(format!("certificate {}", name)))?;
        let v = certificate_check(&load_catalog(b.fixture)?, None, &b.certificate()?)?;
        ok &= v.is_valid();
        data.insert(name.to_string(), v.to_string());
    }
    let status = if ok { Status::CertifiedNonexistence } else { Status::Fail };
    Ok(Outcome { status, data: json!({ "certificates": data }) })
}

fn search(spec: &AlgebraSpec, mode: Mode, seed: u64) -> Result<Outcome> {
    let a = build_ansatz(spec, mode)?;
    let out = witness_search(spec, &a, SearchOptions { seed, ..Default::default() })?;
    Ok(match out {
        SearchOutcome::Found { witness, candidate } => {
            Outcome { status: Status::Witness, data: json!({ "witness": witness, "candidate": candidate }) }
        }
        SearchOutcome::Unknown { candidates, samples } => {
            Outcome { status: Status::Unknown, data: json!({ "candidates": candidates, "samples": samples }) }
        }
    })
}

fn verified(spec: &AlgebraSpec, mode: Mode, omega: &str, theta: &str) -> Result<Outcome> {
    let w = verify_witness(spec, mode, &form(spec, omega)?, &form(spec, theta)?)?;
    Ok(Outcome { status: Status::Witness, data: json!({ "witness": w }) })
}

// Surfaces: Ω = iAφ^{11̄} + iBφ^{22̄} + Dφ^{12̄} − D̄φ^{21̄} + Lφ^{12} + L̄φ^{1̄2̄},
// θ = aφ¹ + bφ² + conj.

const OMEGA2: &str = "i*A*phi1^cphi1 + i*B*phi2^cphi2 + D*phi1^cphi2 - conj(D)*phi2^cphi1 + L*phi1^phi2 + conj(L)*cphi1^cphi2";
const THETA2: &str = "a*phi1 + b*phi2 + conj(a)*cphi1 + conj(b)*cphi2";

struct Metric {
    a: GaussRat,
    b: GaussRat,
    d: GaussRat,
    l: GaussRat,
}

fn metrics() -> Vec<Metric> {
    [("1", "1", "0", "1"), ("2", "3", "1/2 + 1/3*i", "-1 + 2*i"), ("1/2", "5", "-1 - i", "3/4*i")]
        .iter()
        .map(|(a, b, d, l)| Metric { a: q(a), b: q(b), d: q(d), l: q(l) })
        .collect()
}

/// `(D, L, a, b)` for a parameter point and metric sample.
type Formula = fn(&BTreeMap<String, GaussRat>, &Metric) -> [GaussRat; 4];

fn re(x: &GaussRat) -> GaussRat {
    GaussRat::from_rational(x.re.clone())
}

fn zero() -> GaussRat {
    GaussRat::zero()
}

fn i() -> GaussRat {
    GaussRat::i()
}

fn two() -> GaussRat {
    GaussRat::int(2)
}

fn half_i() -> GaussRat {
    GaussRat::i() * GaussRat::frac(1, 2)
}

fn surface(fixture: &'static str, points: Vec<BTreeMap<String, GaussRat>>, mode: Mode, formula: Formula) -> Result<Outcome> {
    let base = load_catalog(fixture)?;
    let mut checked = 0;
    let mut example = Value::Null;
    for p in &points {
        let spec = base.evaluate(p)?;
        for m in metrics() {
            let [d, l, a, b] = formula(p, &m);
            let mut ctx = spec.context();
            for (k, v) in [("A", &m.a), ("B", &m.b), ("D", &d), ("L", &l), ("a", &a), ("b", &b)] {
                ctx.bind(k, Scalar::constant(v.clone()));
            }
            let w = verify_witness(&spec, mode, &parse_form(OMEGA2, &ctx)?, &parse_form(THETA2, &ctx)?)?;
            if example.is_null() {
                example = json!(w);
            }
            checked += 1;
        }
    }
    let points: Vec<Value> = points.iter().map(text_map).collect();
    Ok(Outcome { status: Status::Witness, data: json!({ "points": points, "verified": checked, "example": example }) })
}

fn surfaces() -> Vec<Check> {
    use Status::*;
    let none = || vec![BTreeMap::new()];
    let sm = || vec![point(&[("alpha", "1"), ("beta", "0")]), point(&[("alpha", "1"), ("beta", "2")]), point(&[("alpha", "-1"), ("beta", "1")])];
    vec![
        check("torus/lcK", "torus4", Witness, "the torus is Kähler", move |_| {
            surface("torus4", none(), Mode::Lck, |_, m| [m.d.clone(), zero(), zero(), zero()])
        }),
        check("torus/lcht", "torus4", Witness, "the torus carries closed taming forms", move |_| {
            surface("torus4", none(), Mode::Lcht, |_, m| [m.d.clone(), m.l.clone(), zero(), zero()])
        }),
        check("hyperelliptic/lcK", "hyperelliptic", Witness, "hyperelliptic surfaces admit Kähler metrics", move |_| {
            surface("hyperelliptic", none(), Mode::Lck, |_, _| [zero(), zero(), zero(), zero()])
        }),
        check("hyperelliptic/lcht", "hyperelliptic", Witness, "hyperelliptic lcht forms have L = -D", move |_| {
            surface("hyperelliptic", none(), Mode::Lcht, |_, m| [m.d.clone(), -&m.d, zero(), zero()])
        }),
        check("inoue_SM/lcK", "inoue_SM", Witness, "Inoue S_M admits lcK with b = i alpha", move |_| {
            surface("inoue_SM", sm(), Mode::Lck, |p, _| [zero(), zero(), zero(), i() * p["alpha"].clone()])
        }),
        check("inoue_SM/lcht", "inoue_SM", Witness, "Inoue S_M lcht forms have L = -D and b = i alpha", move |_| {
            surface("inoue_SM", sm(), Mode::Lcht, |p, m| [m.d.clone(), -&m.d, zero(), i() * p["alpha"].clone()])
        }),
        check("kodaira_primary/lcK", "kodaira_primary", Witness, "primary Kodaira surfaces admit lcK for every metric with L = 0", move |_| {
            surface("kodaira_primary", none(), Mode::Lck, |_, m| {
                let det = &(&m.a * &m.b) - &GaussRat::from_rational(m.d.norm_sq());
                let den = &two() * &det;
                [m.d.clone(), zero(), -(&(&m.b * &m.d) / &den), -(&(&i() * &(&m.b * &m.b)) / &den)]
            })
        }),
        check("kodaira_primary/lcht", "kodaira_primary", Witness, "primary Kodaira surfaces admit lcht for every Omega", move |_| {
            surface("kodaira_primary", none(), Mode::Lcht, |_, m| {
                let det = &(&(&m.a * &m.b) - &GaussRat::from_rational(m.d.norm_sq())) + &GaussRat::from_rational(m.l.norm_sq());
                let den = &two() * &det;
                [m.d.clone(), m.l.clone(), -(&(&m.b * &(&m.d + &m.l)) / &den), -(&(&i() * &(&m.b * &m.b)) / &den)]
            })
        }),
        check("kodaira_secondary/lcK", "kodaira_secondary", Witness, "secondary Kodaira surfaces admit lcK with b = -iB/(2A)", move |_| {
            surface("kodaira_secondary", none(), Mode::Lck, |_, m| [zero(), zero(), zero(), -(&(&m.b * &i()) / &(&two() * &m.a))])
        }),
        check("kodaira_secondary/lcht", "kodaira_secondary", Witness, "secondary Kodaira lcht forms have L = -D", move |_| {
            surface("kodaira_secondary", none(), Mode::Lcht, |_, m| [m.d.clone(), -&m.d, zero(), -(&(&m.b * &i()) / &(&two() * &m.a))])
        }),
        check("inoue_Spm/lcK q=0", "inoue_Spm", Witness, "Inoue S+- with q = 0 admits lcK", move |_| {
            surface("inoue_Spm", vec![point(&[("q", "0")])], Mode::Lck, |_, m| [&m.d - &re(&m.d), zero(), zero(), half_i()])
        }),
        check("inoue_Spm/lcK q!=0", "inoue_Spm", CertifiedNonexistence, "Inoue S+- with q != 0 admits no lcK structure", |_| {
            certificates(&["inoue_Spm_q1", "inoue_Spm_qm2"])
        }),
        check("inoue_Spm/lcht", "inoue_Spm", Witness, "Inoue S+- admits lcht for every q", move |_| {
            let pts = vec![point(&[("q", "0")]), point(&[("q", "1")]), point(&[("q", "-2")])];
            surface("inoue_Spm", pts, Mode::Lcht, |p, m| [m.d.clone(), &-&re(&m.d) + &(&(&half_i() * &m.a) * &p["q"]), zero(), half_i()])
        }),
    ]
}

const STD3: &str = "i*phi1^cphi1 + i*phi2^cphi2 + i*phi3^cphi3";

fn contact(spec: AlgebraSpec) -> Result<Outcome> {
    Ok(match contact_search(&spec)? {
        Some(w) => Outcome { status: Status::Witness, data: json!({ "contact": w }) },
        None => {
            let (_, p) = crate::feasibility::solve::contact_polynomial(&spec)?;
            Outcome { status: Status::CertifiedNonexistence, data: json!({ "polynomial": p.to_string() }) }
        }
    })
}

fn nilmanifolds() -> Vec<Check> {
    use Status::*;
    let mut out = vec![
        check("torus(3)/kahler", "torus(3)", Witness, "the torus is Kähler", |o| search(&load_catalog("torus(3)")?, Mode::Kahler, o.seed)),
        check("h3_Jplus/lcK", "h3_Jplus", Witness, "h3 with J+ is lcK with Lee form phi3 + conj(phi3)", |_| {
            verified(&load_catalog("h3_Jplus")?, Mode::Lck, STD3, "phi3 + cphi3")
        }),
        check("h3_Jplus/lcht", "h3_Jplus", Witness, "h3 with J+ is lcht", |o| search(&load_catalog("h3_Jplus")?, Mode::Lcht, o.seed)),
    ];
    for name in ["h3_Jminus", "h9", "h19minus_Jplus", "h19minus_Jminus"] {
        out.push(check(&format!("{}/lcht", name), name, CertifiedNonexistence, "no invariant lcht structure", move |_| certificates(&[name])));
    }
    for name in ["contact5_1", "contact5_2", "contact5_3"] {
        out.push(check(&format!("{}/contact", name), name, Witness, "the algebra carries a contact form", move |_| contact(load_catalog(name)?)));
    }
    out.push(check("abelian5/contact", "(0,0,0,0,0)", CertifiedNonexistence, "the abelian algebra has no contact form", |_| {
        contact(parse_salamon("(0,0,0,0,0)")?)
    }));
    out.push(check("h3_real/d_theta_exact", "h3_real", Pass, "Omega = d beta - theta ^ beta is solvable", |_| {
        let s = load_catalog("h3_real")?;
        let omega = form(&s, "e1^e2 + e3^e4 + e5^e6")?;
        let theta = form(&s, "-e5")?;
        Ok(match d_theta_exact_solve(&s, &omega, &theta)? {
            Some(beta) => {
                let ok = s.d(&beta).sub(&theta.wedge(&beta)) == omega;
                pass_if(ok, json!({ "beta": beta.to_string() }))
            }
            None => pass_if(false, json!({ "beta": null })),
        })
    }));
    out
}

fn solvclasses() -> Vec<Check> {
    use Status::*;
    let witnesses = |pts: Vec<BTreeMap<String, GaussRat>>, certs: &'static [&'static str], seed: u64| -> Result<Outcome> {
        let base = load_catalog(if certs[0].starts_with("class1") { "class1" } else { "class3" })?;
        let mut found = Vec::new();
        let mut status = Witness;
        for p in &pts {
            let o = search(&base.evaluate(p)?, Mode::Lck, seed)?;
            if o.status != Witness {
                status = o.status;
            }
            found.push(json!({ "point": text_map(p), "result": o.data }));
        }
        let c = certificates(certs)?;
        if c.status != CertifiedNonexistence {
            status = Fail;
        }
        Ok(Outcome { status, data: json!({ "lcK": found, "nonexistence": c.data }) })
    };
    let mut out = vec![check("class1", "class1", Witness, "lcK and lcht exist exactly when A = i", move |o| {
        witnesses(vec![point(&[("A", "i")])], &["class1_a", "class1_b", "class1_c"], o.seed)
    })];
    out.push(check("class2", "class2", CertifiedNonexistence, "no invariant lcht structure", |_| certificates(&["class2"])));
    out.push(check("class3", "class3", Witness, "lcK and lcht exist exactly when A = i or A = -i", move |o| {
        let pts = vec![
            point(&[("A", "i"), ("s11", "1"), ("s22", "1"), ("s12", "0")]),
            point(&[("A", "-i"), ("s11", "1"), ("s22", "1"), ("s12", "0")]),
        ];
        witnesses(pts, &["class3_a", "class3_b", "class3_c"], o.seed)
    }));
    for name in ["class4", "class5", "class6", "class7"] {
        out.push(check(name, name, CertifiedNonexistence, "no invariant lcht structure", move |_| certificates(&[name])));
    }
    out
}

const OMEGA_T: &str = "i*(A*phi1^cphi1 + B*phi2^cphi2 + C*phi3^cphi3) + D*phi1^cphi2 - conj(D)*phi2^cphi1 + E*phi1^cphi3 - conj(E)*phi3^cphi1 + F*phi2^cphi3 - conj(F)*phi3^cphi2";
const DDBAR_T: &str = "-i*(1+t)*(1+conj(t))*(B*phi1^phi2^cphi1^cphi2 + C*phi1^phi3^cphi1^cphi3) + (-1+t)*(-1+conj(t))*(F*phi1^phi2^cphi1^cphi3 - conj(F)*phi1^phi3^cphi1^cphi2)";
const DDBAR_WEDGE_T: &str = "2*((1+t)*(1+conj(t))*B*C + (-1+t)*(-1+conj(t))*F*conj(F))*phi1^phi2^phi3^cphi1^cphi2^cphi3";
const BIG_OMEGA_T: &str = " + L*phi1^phi2 + conj(L)*cphi1^cphi2 + M*phi1^phi3 + conj(M)*cphi1^cphi3 + N*phi2^phi3 + conj(N)*cphi2^cphi3";
const D_BIG_OMEGA_T: &str = "(conj(D) - t*L)*phi1^phi2^cphi1 - i*B*(1 + conj(t))*phi1^phi2^cphi2 - F*(1 - conj(t))*phi1^phi2^cphi3 \
    + (-conj(E) + t*M)*phi1^phi3^cphi1 - conj(F)*(1 - conj(t))*phi1^phi3^cphi2 + i*C*(1 + conj(t))*phi1^phi3^cphi3 \
    + (D - conj(t)*conj(L))*phi1^cphi1^cphi2 + i*B*(1 + t)*phi2^cphi1^cphi2 - conj(F)*(1 - t)*phi3^cphi1^cphi2 \
    + (-E + conj(t)*conj(M))*phi1^cphi1^cphi3 - F*(1 - t)*phi2^cphi1^cphi3 - i*C*(1 + t)*phi3^cphi1^cphi3";

const METRIC_UNKNOWNS: [&str; 9] = ["A", "B", "C", "D", "E", "F", "L", "M", "N"];

fn nakamura_ctx() -> Result<(AlgebraSpec, Context)> {
    let s = load_catalog("nakamura")?;
    let mut ctx = s.context();
    for r in &METRIC_UNKNOWNS[..3] {
        ctx.declare_real(r);
    }
    for c in &METRIC_UNKNOWNS[3..] {
        ctx.declare_complex(c);
    }
    Ok((s, ctx))
}

fn nakamura() -> Vec<Check> {
    use Status::*;
    vec![
        check("nakamura/ddbar", "nakamura", Pass, "closed form of ddbar omega_t", |_| {
            let (s, ctx) = nakamura_ctx()?;
            let got = ddbar(&s, &parse_form(OMEGA_T, &ctx)?);
            Ok(pass_if(got == parse_form(DDBAR_T, &ctx)?, json!({ "ddbar": got.to_string() })))
        }),
        check("nakamura/ddbar_wedge", "nakamura", Pass, "ddbar omega_t ^ omega_t = 2((1+t)(1+conj t)BC + (-1+t)(-1+conj t)|F|^2) vol", |_| {
            let (s, ctx) = nakamura_ctx()?;
            let w = parse_form(OMEGA_T, &ctx)?;
            let got = ddbar(&s, &w).wedge(&w);
            Ok(pass_if(got == parse_form(DDBAR_WEDGE_T, &ctx)?, json!({ "product": got.to_string() })))
        }),
        check("nakamura/pluriclosed", "nakamura", Pass, "pluriclosed forces B = C = F = 0", |_| {
            let (s, ctx) = nakamura_ctx()?;
            let got = ddbar(&s, &parse_form(OMEGA_T, &ctx)?);
            let mut eliminated = BTreeSet::new();
            let mut ok = true;
            let mut equations = Vec::new();
            for (_, c) in got.terms() {
                let unknowns: BTreeSet<String> = c.variable_names().into_iter().filter(|v| METRIC_UNKNOWNS.contains(&v.as_str())).collect();
                // Each coefficient is one unknown times a factor in t.
                ok &= unknowns.len() == 1 && c.total_degree() <= 3;
                eliminated.extend(unknowns);
                equations.push(format!("{} = 0", c));
            }
            let want: BTreeSet<String> = ["B", "C", "F"].iter().map(|v| v.to_string()).collect();
            Ok(pass_if(ok && eliminated == want, json!({ "eliminated": eliminated, "equations": equations })))
        }),
        check("nakamura/balanced", "nakamura", Witness, "d(omega^2) = 0 for the standard metric, for every t", |_| {
            let s = load_catalog("nakamura")?;
            let w = form(&s, STD3)?;
            let ok = s.d(&w.power(2)).is_zero();
            Ok(Outcome { status: if ok { Witness } else { Fail }, data: json!({ "omega": w.to_string() }) })
        }),
        check("nakamura/lcht_dOmega", "nakamura", Pass, "twelve-term expansion of d Omega_t", |_| {
            let (s, ctx) = nakamura_ctx()?;
            let got = s.d(&parse_form(&format!("{}{}", OMEGA_T, BIG_OMEGA_T), &ctx)?);
            Ok(pass_if(got == parse_form(D_BIG_OMEGA_T, &ctx)?, json!({ "terms": got.num_terms() })))
        }),
        check("nakamura/k_gauduchon", "nakamura", Pass, "the standard metric at t = 1/2 is not 1-Gauduchon", |_| {
            let s = load_catalog("nakamura")?.evaluate(&point(&[("t", "1/2")]))?;
            let c = k_gauduchon_scalar(&s, &form(&s, STD3)?, 1)?;
            let ic = c.scale(&GaussRat::i());
            let ok = ic.as_constant() == Some(GaussRat::frac(9, 2));
            Ok(pass_if(ok, json!({ "c": c.to_string(), "i*c": ic.to_string() })))
        }),
    ]
}

fn lefschetz() -> Vec<Check> {
    use Status::*;
    let f3 = crate::algebra::Frame::Complex(3);
    vec![
        check("catalog/d_squared", "catalog", Pass, "d^2 = 0 on every fixture", |_| {
            let mut bad = Vec::new();
            for name in catalog_names() {
                if !d_squared_residuals(&load_instance(name)?).is_empty() {
                    bad.push(name);
                }
            }
            Ok(pass_if(bad.is_empty(), json!({ "fixtures": catalog_names().len(), "failed": bad })))
        }),
        check("catalog/leibniz", "h3_Jplus+h19minus_Jminus+class7+inoue_Spm+h3_real", Pass, "d is a graded derivation", |o| {
            let names = ["h3_Jplus", "h19minus_Jminus", "class7", "inoue_Spm", "h3_real"];
            let mut bad = Vec::new();
            for (j, name) in names.iter().enumerate() {
                let mut rng = ChaCha8Rng::seed_from_u64(split_seed(o.seed, j));
                if !leibniz_residuals(&load_instance(name)?, &mut rng, 200).is_empty() {
                    bad.push(*name);
                }
            }
            Ok(pass_if(bad.is_empty(), json!({ "pairs": 200, "failed": bad })))
        }),
        check("torus(3)/star_squared", "torus(3)", Pass, "star^2 = (-1)^k on k-forms", move |_| {
            let m = MetricData::standard(f3);
            let omega = parse_form("i*phi1^cphi1 + 2*i*phi2^cphi2 + 3*i*phi3^cphi3 + phi1^cphi2 - phi2^cphi1", &Context::with_frame(f3))?;
            let t = MetricData::new(&omega)?;
            let mut n = 0;
            for k in 0..=6 {
                n += star_squared_residuals(&m, k)?.len() + star_squared_residuals(&t, k)?.len();
            }
            Ok(pass_if(n == 0, json!({ "residuals": n })))
        }),
        check("torus(3)/lefschetz_commutators", "torus(3)", Pass, "[L^j, Lambda] = j(k-n+j-1) L^(j-1)", move |_| {
            let m = MetricData::standard(f3);
            let mut n = 0;
            for k in 0..=6 {
                n += sl2_residuals(&m, k).len();
                for j in 0..=3 {
                    n += lefschetz_commutator_residuals(&m, j, k).len();
                }
            }
            Ok(pass_if(n == 0, json!({ "residuals": n })))
        }),
        check("torus(3)/weyl", "torus(3)", Pass, "Weyl identity on primitive forms", move |_| {
            let m = MetricData::standard(f3);
            let mut n = 0;
            for (j, k) in admissible_pairs(3) {
                n += weyl_residuals(&m, j, k)?.len();
            }
            Ok(pass_if(n == 0, json!({ "residuals": n })))
        }),
        check("h3_Jplus/lcs_commutation", "h3_Jplus", Pass, "d_{(l+k)theta} L^k = L^k d_{l theta} for lcs data", move |_| {
            let s = load_catalog("h3_Jplus")?;
            let m = MetricData::standard(f3);
            let theta = s.lee_hint().cloned().unwrap_or_else(|| Form::zero(f3));
            let mut n = 0;
            for k in 0..=3 {
                for ell in -2..=2 {
                    n += lcs_commutation_residuals(&s, &m, &theta, k, ell).len();
                }
            }
            Ok(pass_if(n == 0, json!({ "residuals": n })))
        }),
        check("torus(3)/twisted_kahler", "torus(3)", Pass, "twisted Kähler identity with theta = 0", move |_| twisted("torus(3)", false)),
        check("h3_Jplus/twisted_kahler", "h3_Jplus", Pass, "twisted Kähler identity for lcK data", move |_| twisted("h3_Jplus", true)),
    ]
}

fn twisted(name: &str, lee: bool) -> Result<Outcome> {
    let s = load_catalog(name)?;
    let f = s.frame();
    let m = MetricData::standard(f);
    let theta = if lee { s.lee_hint().cloned().ok_or_else(|| Error::Structural("no Lee form".into()))? } else { Form::zero(f) };
    let mut n = 0;
    let mut cases = 0;
    for (j, k) in admissible_pairs(3) {
        for ell in -2..=2 {
            n += verify_twisted_kahler_identity(&s, &m, &theta, j, k, ell)?.len();
            cases += 1;
        }
    }
    Ok(pass_if(n == 0, json!({ "cases": cases, "residuals": n })))
}

fn vanishes(name: &str, thetas: &[&str]) -> Result<Outcome> {
    let s = load_catalog(name)?;
    let mut dims = BTreeMap::new();
    let mut ok = true;
    for t in thetas {
        let r = cohomology_dims(&s, &Theory::MorseNovikov(form(&s, t)?))?;
        ok &= matches!(&r.dims, DimTable::Graded(v) if v.iter().all(|d| *d == 0));
        dims.insert(t.to_string(), json!(r.dims));
    }
    Ok(pass_if(ok, json!({ "dims": dims })))
}

fn cohomology() -> Vec<Check> {
    use Status::*;
    vec![
        check("torus(3)/dolbeault", "torus(3)", Pass, "h^{1,1} = 9 on the torus", |_| {
            let r = cohomology_dims(&load_catalog("torus(3)")?, &Theory::Dolbeault)?;
            Ok(pass_if(r.bidegree(1, 1) == Some(9), json!({ "dims": r.dims })))
        }),
        check("torus(3)/ddbar_lemma", "torus(3)", Pass, "the torus satisfies the ddbar-lemma", |_| {
            let r = ddbar_lemma_check(&load_catalog("torus(3)")?)?;
            Ok(pass_if(r.holds, json!({ "holds": r.holds })))
        }),
        check("h3_real/betti", "h3_real", Pass, "b1(h3) = 5", |_| {
            let r = cohomology_dims(&load_catalog("h3_real")?, &Theory::DeRham)?;
            Ok(pass_if(r.degree(1) == Some(5), json!({ "dims": r.dims })))
        }),
        check("h8/delta5", "h8", Pass, "Delta^5 = 0 on h8", |_| {
            let d = delta_degrees(&load_catalog("h8")?, 5)?;
            Ok(pass_if(d == 0, json!({ "delta": d })))
        }),
        check("h8/weak_ddbar", "h8", Pass, "weak (n-1,n) ddbar-lemma holds for abelian J", |_| {
            let ok = weak_ddbar_check(&load_catalog("h8")?)?;
            Ok(pass_if(ok, json!({ "holds": ok })))
        }),
        check("h8/bc_to_dolbeault", "h8", Pass, "H^{2,3}_BC -> H^{2,3}_dbar is not injective", |_| {
            let inj = bc_to_dolbeault_injectivity(&load_catalog("h8")?, 2, 3)?;
            Ok(pass_if(!inj, json!({ "injective": inj })))
        }),
        check("heis3/morse_novikov", "heis3", Pass, "H_theta = 0 for nonzero closed theta", |_| {
            vanishes("heis3", &["e1", "e2", "e1 + e2", "2*e1 - e2", "-1/3*e2"])
        }),
        check("h3_real/morse_novikov", "h3_real", Pass, "H_theta = 0 for nonzero closed theta", |_| {
            vanishes("h3_real", &["e1", "e5", "e1 + e3", "2*e4 - e5", "-1/2*e2 + e5"])
        }),
    ]
}
