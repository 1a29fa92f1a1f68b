//! Named fixtures: nilpotent and solvable Lie algebras with complex structures.

use std::collections::BTreeMap;

use super::parse::{parse_complex_dsl, parse_salamon};
use super::spec::AlgebraSpec;
use crate::algebra::expr::parse_scalar;
use crate::algebra::{Frame, GaussRat};
use crate::error::{Error, Result};

enum Source {
    Dsl(&'static str),
    Salamon(&'static str),
    Complexified(&'static str, &'static str),
}

struct Entry {
    name: &'static str,
    source: Source,
    /// Default instantiation, `name=value` pairs.
    defaults: &'static [(&'static str, &'static str)],
}

const ENTRIES: &[Entry] = &[
    Entry { name: "h1", source: Source::Dsl("frame complex 3"), defaults: &[] },
    Entry {
        name: "h3_Jplus",
        source: Source::Dsl(
            "frame complex 3
d phi3 = phi1^cphi1 + phi2^cphi2
lee phi3 + cphi3",
        ),
        defaults: &[],
    },
    Entry { name: "h3_Jminus", source: Source::Dsl("frame complex 3\nd phi3 = phi1^cphi1 - phi2^cphi2"), defaults: &[] },
    Entry { name: "h8", source: Source::Dsl("frame complex 3\nd phi3 = phi1^cphi1"), defaults: &[] },
    Entry {
        name: "h9",
        source: Source::Dsl(
            "frame complex 3
d phi2 = phi1^cphi1
d phi3 = phi1^cphi2 + phi2^cphi1",
        ),
        defaults: &[],
    },
    Entry {
        name: "h19minus_Jplus",
        source: Source::Dsl(
            "frame complex 3
d phi2 = phi1^phi3 + phi1^cphi3
d phi3 = i*(phi1^cphi2 - phi2^cphi1)",
        ),
        defaults: &[],
    },
    Entry {
        name: "h19minus_Jminus",
        source: Source::Dsl(
            "frame complex 3
d phi2 = phi1^phi3 + phi1^cphi3
d phi3 = -i*(phi1^cphi2 - phi2^cphi1)",
        ),
        defaults: &[],
    },
    Entry { name: "heis5xR_Jplus", source: Source::Complexified("(0,0,0,0,0,12+34)", "-1/2*(phi3 + cphi3)"), defaults: &[] },
    Entry {
        name: "nakamura",
        source: Source::Dsl(
            "frame complex 3
param t : complex
d phi2 = -phi1^phi2 + t*phi2^cphi1
d phi3 = phi1^phi3 - t*phi3^cphi1",
        ),
        defaults: &[("t", "1/2")],
    },
    Entry { name: "torus4", source: Source::Dsl("frame complex 2"), defaults: &[] },
    Entry {
        name: "hyperelliptic",
        source: Source::Dsl("frame complex 2\nd phi1 = -1/2*phi1^phi2 + 1/2*phi1^cphi2"),
        defaults: &[],
    },
    Entry {
        name: "inoue_SM",
        source: Source::Dsl(
            "frame complex 2
param alpha : real nonzero
param beta : real
d phi1 = -i/2*(alpha - i*beta)*(phi1^phi2 - phi1^cphi2)
d phi2 = -i*alpha*phi2^cphi2",
        ),
        defaults: &[("alpha", "1"), ("beta", "0")],
    },
    Entry { name: "kodaira_primary", source: Source::Dsl("frame complex 2\nd phi2 = i/2*phi1^cphi1"), defaults: &[] },
    Entry {
        name: "kodaira_secondary",
        source: Source::Dsl(
            "frame complex 2
d phi1 = -1/2*phi1^phi2 + 1/2*phi1^cphi2
d phi2 = i/2*phi1^cphi1",
        ),
        defaults: &[],
    },
    Entry {
        name: "inoue_Spm",
        source: Source::Dsl(
            "frame complex 2
param q : real
d phi1 = -i/2*phi1^phi2 - i/2*phi2^cphi1 + q*i/2*phi2^cphi2
d phi2 = -i/2*phi2^cphi2
lee i/2*phi2 - i/2*cphi2",
        ),
        defaults: &[("q", "1")],
    },
    Entry {
        name: "class1",
        source: Source::Dsl(
            "frame complex 3
param A : complex
relation A*conj(A) - 1
d phi1 = A*phi1^phi3 + A*phi1^cphi3
d phi2 = -A*phi2^phi3 - A*phi2^cphi3",
        ),
        defaults: &[("A", "i")],
    },
    Entry {
        name: "class2",
        source: Source::Dsl(
            "frame complex 3
param g : real positive
param h : real positive
relation 4*g*h - 1
d phi2 = -1/2*phi1^phi3 - (1/2 + g*i)*phi1^cphi3 + g*i*phi3^cphi1
d phi3 = 1/2*phi1^phi2 + (1/2 - i*h)*phi1^cphi2 + i*h*phi2^cphi1",
        ),
        defaults: &[("g", "1/2")],
    },
    Entry {
        name: "class3",
        source: Source::Dsl(
            "frame complex 3
param A : complex
param s11 : real
param s22 : real
param s12 : complex
relation A*conj(A) - 1
relation (A + conj(A))*s11
relation (A + conj(A))*s22
relation (A - conj(A))*s12
notallzero s11, s22, s12
d phi1 = A*phi1^phi3 + A*phi1^cphi3
d phi2 = -A*phi2^phi3 - A*phi2^cphi3
d phi3 = s11*phi1^cphi1 + s12*phi1^cphi2 + conj(s12)*phi2^cphi1 + s22*phi2^cphi2",
        ),
        defaults: &[("A", "i"), ("s11", "1"), ("s22", "1"), ("s12", "0")],
    },
    Entry {
        name: "class4",
        source: Source::Dsl(
            "frame complex 3
param A : complex
nonzero A - conj(A)
d phi1 = -(A - i)*phi1^phi3 - (A + i)*phi1^cphi3
d phi2 = (A - i)*phi2^phi3 + (A + i)*phi2^cphi3",
        ),
        defaults: &[("A", "1 + i")],
    },
    Entry {
        name: "class5",
        source: Source::Dsl(
            "frame complex 3
d phi1 = 2*i*phi1^phi3 + phi3^cphi3
d phi2 = -2*i*phi2^phi3",
        ),
        defaults: &[],
    },
    Entry {
        name: "class6",
        source: Source::Dsl(
            "frame complex 3
d phi1 = 2*i*phi1^phi3 + phi3^cphi3
d phi2 = -2*i*phi2^phi3 + phi3^cphi3",
        ),
        defaults: &[],
    },
    Entry {
        name: "class7",
        source: Source::Dsl(
            "frame complex 3
d phi1 = -phi3^cphi3
d phi2 = -i/2*phi2^cphi1 + 1/2*phi1^cphi3 + i/2*phi1^phi2
d phi3 = i/2*phi3^cphi1 - i/2*phi1^phi3",
        ),
        defaults: &[],
    },
    Entry { name: "contact5_1", source: Source::Salamon("(0,0,0,0,12+34)"), defaults: &[] },
    Entry { name: "contact5_2", source: Source::Salamon("(0,0,0,12,14+23)"), defaults: &[] },
    Entry { name: "contact5_3", source: Source::Salamon("(0,0,12,13,14-23)"), defaults: &[] },
    Entry { name: "heis3", source: Source::Salamon("(0,0,12)"), defaults: &[] },
    Entry { name: "h3_real", source: Source::Salamon("(0,0,0,0,0,12+34)"), defaults: &[] },
    Entry { name: "h8_real", source: Source::Salamon("(0,0,0,0,0,12)"), defaults: &[] },
];

/// Every fixture name accepted by [`load_catalog`], except the `torus(n)` family.
pub fn catalog_names() -> Vec<&'static str> {
    ENTRIES.iter().map(|e| e.name).collect()
}

fn build(e: &Entry) -> Result<AlgebraSpec> {
    let mut spec = match &e.source {
        Source::Dsl(text) => parse_complex_dsl(text)?,
        Source::Salamon(text) => parse_salamon(text)?,
        Source::Complexified(text, lee) => {
            let mut s = parse_salamon(text)?.complexify()?;
            let f = crate::algebra::expr::parse_form(lee, &s.context())?;
            s.set_lee_hint(f)?;
            s
        }
    };
    spec.name = e.name.to_string();
    Ok(spec)
}

fn torus(n: usize) -> Result<AlgebraSpec> {
    if !(1..=8).contains(&n) {
        return Err(Error::Validation(format!("torus dimension {} out of range 1..8", n)));
    }
    Ok(AlgebraSpec::new(&format!("torus({})", n), Frame::Complex(n)))
}

/// Loads and validates a fixture. Accepts `torus(n)` for complex tori.
pub fn load_catalog(name: &str) -> Result<AlgebraSpec> {
    let spec = if let Some(arg) = name.strip_prefix("torus(").and_then(|s| s.strip_suffix(')')) {
        let n: usize = arg.trim().parse().map_err(|_| Error::Parse(format!("bad torus dimension {}", arg)))?;
        torus(n)?
    } else {
        let e = ENTRIES.iter().find(|e| e.name == name).ok_or_else(|| Error::UnknownName(name.to_string()))?;
        build(e)?
    };
    let report = spec.validate();
    if !report.is_valid() {
        return Err(Error::Validation(format!("fixture {} fails validation: {}", name, report.failures.join("; "))));
    }
    Ok(spec)
}

/// The default parameter values of a fixture, completed by its relations.
pub fn default_point(name: &str) -> Result<BTreeMap<String, GaussRat>> {
    let spec = load_catalog(name)?;
    let mut out = BTreeMap::new();
    if let Some(e) = ENTRIES.iter().find(|e| e.name == name) {
        for (k, v) in e.defaults {
            let s = parse_scalar(v, &Default::default())?;
            out.insert(k.to_string(), s.as_constant().expect("constant default"));
        }
    }
    spec.params().resolve(&out)
}

/// Loads a fixture and instantiates it at its default point.
pub fn load_instance(name: &str) -> Result<AlgebraSpec> {
    let spec = load_catalog(name)?;
    spec.evaluate(&default_point(name)?)
}
