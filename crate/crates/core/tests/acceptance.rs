//! Acceptance suite. Prints one PASS/FAIL line per criterion.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use invarforms::algebra::expr::parse_form;
use invarforms::feasibility::*;
use invarforms::structures::{load_catalog, parse_salamon, AlgebraSpec};
use invarforms::suites::{run_suite, Report, RunOptions, Status};
use invarforms::Form;

use common::certs::{corrupt_at, fields, CORRUPTIONS};
use common::table::{mismatches, points, ERRATA};

/// Criteria that are expected to fail; they are reported but do not fail the run.
const KNOWN_UNATTAINABLE: &[usize] = &[4];

type Check = fn() -> Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn form(s: &AlgebraSpec, text: &str) -> Form {
    parse_form(text, &s.context()).unwrap()
}

fn suite(name: &str) -> Report {
    run_suite(name, &RunOptions { seed: 42, timings: false }).unwrap()
}

fn all_expected(r: &Report) -> Result<String, String> {
    for rec in &r.records {
        ensure(rec.as_expected(), format!("{}: {} expected {}", rec.name, rec.status, rec.expected))?;
    }
    Ok(format!("{} records", r.records.len()))
}

fn lck_h3_jplus() -> Result<String, String> {
    let s = load_catalog("h3_Jplus").unwrap();
    let omega = form(&s, "i*phi1^cphi1 + i*phi2^cphi2 + i*phi3^cphi3");
    let theta = form(&s, "phi3 + cphi3");
    let r = residual_conformal(&s, &omega, &theta, 1).unwrap();
    ensure(r.is_empty(), format!("{} residual entries", r.entries.len()))?;
    ensure(positivity_check(&omega).unwrap().is_positive(), "omega is not positive")?;
    ensure(s.d(&theta).is_zero(), "theta is not closed")?;
    Ok("residual empty, positive".into())
}

fn certified_nilmanifolds() -> Result<String, String> {
    let fixtures = ["h3_Jminus", "h9", "h19minus_Jplus", "h19minus_Jminus"];
    let mut rejected = 0;
    for b in BUNDLED.iter().filter(|b| fixtures.contains(&b.fixture)) {
        let spec = load_catalog(b.fixture).unwrap();
        let cert = b.certificate().unwrap();
        let ctx = prepare(&spec, None, &cert).unwrap();
        let v = check_certificate(&ctx, &cert);
        ensure(v.is_valid(), format!("{}: {}", b.name, v))?;
        for k in 0..fields(&cert) {
            for how in 0..CORRUPTIONS {
                if let Some(c) = corrupt_at(&cert, k, how) {
                    ensure(!check_certificate(&ctx, &c).is_valid(), format!("{}: corruption {} of field {} accepted", b.name, how, k))?;
                    rejected += 1;
                }
            }
        }
    }
    Ok(format!("{} certificates valid, {} corruptions rejected", fixtures.len(), rejected))
}

fn surfaces() -> Result<String, String> {
    let r = suite("surfaces");
    let families: std::collections::BTreeSet<&str> = r.records.iter().map(|x| x.fixture.as_str()).collect();
    ensure(families.len() == 6, format!("{} families", families.len()))?;
    ensure(
        r.records.iter().any(|x| x.status == Status::CertifiedNonexistence && x.fixture == "inoue_Spm"),
        "no Inoue S+- certificate",
    )?;
    all_expected(&r)
}

fn table() -> Result<String, String> {
    let pts = points();
    let mut literal = 0;
    let mut corrected = 0;
    for (class, p) in &pts {
        literal += mismatches(*class, p, false).len();
        corrected += mismatches(*class, p, true).len();
    }
    println!("    corrected table: {} mismatches over {} points ({} errata)", corrected, pts.len(), ERRATA.len());
    ensure(literal == 0, format!("{} printed cells differ from the computed coefficients", literal))?;
    Ok(format!("{} points", pts.len()))
}

fn solvclasses() -> Result<String, String> {
    all_expected(&suite("solvclasses"))
}

fn nakamura() -> Result<String, String> {
    all_expected(&suite("nakamura"))
}

fn cohomology() -> Result<String, String> {
    all_expected(&suite("cohomology"))
}

fn identities() -> Result<String, String> {
    all_expected(&suite("lefschetz"))
}

fn contact() -> Result<String, String> {
    for name in ["contact5_1", "contact5_2", "contact5_3"] {
        let s = load_catalog(name).unwrap();
        let w = contact_search(&s).unwrap().ok_or(format!("{}: no contact form", name))?;
        let top = w.alpha.wedge(&s.d(&w.alpha).power(2)).top_coefficient().unwrap();
        ensure(!top.is_zero(), format!("{}: alpha ^ (d alpha)^2 vanishes", name))?;
    }
    let abelian = parse_salamon("(0,0,0,0,0)").unwrap();
    ensure(contact_search(&abelian).unwrap().is_none(), "abelian algebra has a contact form")?;
    let (_, p) = invarforms::feasibility::solve::contact_polynomial(&abelian).unwrap();
    ensure(p.is_zero(), "abelian contact polynomial is nonzero")?;
    let s = load_catalog("h3_real").unwrap();
    let omega = form(&s, "e1^e2 + e3^e4 + e5^e6");
    let theta = form(&s, "-e5");
    let beta = d_theta_exact_solve(&s, &omega, &theta).unwrap().ok_or("no primitive")?;
    ensure(s.d(&beta).sub(&theta.wedge(&beta)) == omega, "primitive does not re-verify")?;
    Ok("3 witnesses, abelian none, primitive verified".into())
}

fn determinism() -> Result<String, String> {
    let a = suite("all").to_json();
    let b = suite("all").to_json();
    ensure(a == b, "reports differ")?;
    Ok(format!("{} bytes", a.len()))
}

fn main() -> ExitCode {
    let criteria: [(usize, &str, Option<u64>, Check); 10] = [
        (1, "h3 J+ lcK witness", Some(1), lck_h3_jplus),
        (2, "certified nonexistence on h3 J-, h9, h19- J+-", Some(5), certified_nilmanifolds),
        (3, "complex surfaces", Some(30), surfaces),
        (4, "class table, printed cells", Some(60), table),
        (5, "solvmanifold classes", Some(120), solvclasses),
        (6, "Nakamura manifold", Some(10), nakamura),
        (7, "cohomology", Some(30), cohomology),
        (8, "Kähler identities", Some(120), identities),
        (9, "contact forms and d_theta exactness", Some(10), contact),
        (10, "determinism", None, determinism),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut unexpected = 0;
    for (n, title, limit, run) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let result = match (result, limit) {
            (Ok(_), Some(l)) if elapsed > Duration::from_secs(l) => Err(format!("took {:.2?}, limit {}s", elapsed, l)),
            (r, _) => r,
        };
        let limit = limit.map_or(String::new(), |l| format!(" / {}s", l));
        let (status, detail) = match &result {
            Ok(d) => ("PASS", d.as_str()),
            Err(d) => ("FAIL", d.as_str()),
        };
        let known = if result.is_err() && KNOWN_UNATTAINABLE.contains(&n) { " (known)" } else { "" };
        println!("criterion {}: {}{}  {} [{:.2?}{}] {}", n, status, known, title, elapsed, limit, detail);
        if result.is_err() && known.is_empty() {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
