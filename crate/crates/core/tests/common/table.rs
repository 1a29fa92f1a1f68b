use std::collections::BTreeMap;

use invarforms::algebra::expr::{parse_scalar, Context};
use invarforms::feasibility::{build_ansatz, Mode};
use invarforms::structures::load_catalog;
use invarforms::{Form, Frame, GaussRat, Scalar};

// Coefficient table for the seven solvable classes: one row per monomial,
// the θ∧Ω entry for a generic Lee form, then dΩ for classes 1, 2, 3, 4,
// 5 and 6 (with eps) and 7.

pub const ROWS: &[(&str, &str, [&str; 6])] = &[
    ("123", "c*L + a*N - b*M", ["0", "0", "0", "0", "0", "0"]),
    (
        "12 1̄",
        "-a*conj(u) + conj(a)*L - i*b*r2",
        [
            "0",
            "-i*h*M + (2*g + i)*h*z - 1/2*conj(z)",
            "-conj(s12)*M + s11*N + conj(s12)*z - s11*v",
            "0",
            "0",
            "i/2*L + i/2*conj(u)",
        ],
    ),
    (
        "12 2̄",
        "i*a*s2 + conj(b)*L - b*u",
        ["0", "(2*g - i)*h*N + i*h*v - 1/2*conj(v)", "-s22*M + s12*N + s22*z - s12*v", "0", "0", "0"],
    ),
    ("12 3̄", "conj(c)*L + a*v - b*z", ["0", "-g*s2 + i/2*t2", "0", "0", "0", "i*v"]),
    (
        "13 1̄",
        "conj(a)*M - a*conj(z) - i*c*r2",
        [
            "2*ReA*i*r2",
            "-i*g*L - (1/2 - i*g)*u + 1/2*conj(u)",
            "2*ReA*i*r2 - s11*i*t2",
            "-2*(ReA - i)*i*r2",
            "-2*r2",
            "-i/2*M + 1/2*u + i/2*conj(z)",
        ],
    ),
    (
        "13 2̄",
        "-a*conj(v) + conj(b)*M - c*u",
        ["2*ImA*i*u", "-i/2*s2 - h*t2", "2*ImA*i*u - s12*i*t2", "-2*ImA*i*u", "2*i*u", "i*conj(v)"],
    ),
    (
        "13 3̄",
        "conj(c)*M + i*a*t2 - c*z",
        [
            "-M*A + z*A",
            "(1/2 + i*g)*N - 1/2*v - i*g*conj(v)",
            "-M*A + z*A",
            "(A - i)*M - (A - i)*z",
            "-eps*L + i*r2 + eps*u + 2*i*z",
            "-1/2*N - i*r2",
        ],
    ),
    (
        "23 1̄",
        "conj(a)*N - b*conj(z) + c*conj(u)",
        [
            "2*ImA*i*conj(u)",
            "-(1/2 - i*g)*i*s2 - (2*g + i)*h*i*t2",
            "2*ImA*i*conj(u) - conj(s12)*i*t2",
            "-2*ImA*i*conj(u)",
            "2*i*conj(u)",
            "i/2*s2",
        ],
    ),
    (
        "23 2̄",
        "conj(b)*N - b*conj(v) - i*c*s2",
        ["-2*ReA*i*s2", "0", "-2*ReA*i*s2 - s22*i*t2", "2*(ReA - i)*i*s2", "2*s2", "0"],
    ),
    (
        "23 3̄",
        "conj(c)*N + i*b*t2 - c*v",
        ["N*A - v*A", "0", "N*A - v*A", "-(A + i)*N + (A - i)*v", "L - conj(u) + eps*i*s2", "-L + conj(u)"],
    ),
    (
        "1 1̄2̄",
        "i*conj(b)*r2 + a*conj(L) - conj(a)*u",
        [
            "0",
            "-1/2*z + (2*g - i)*h*conj(z) + i*h*conj(u)",
            "s12*conj(z) - s11*conj(v) - s12*conj(M) + s11*conj(N)",
            "0",
            "0",
            "i/2*u - i/2*conj(L)",
        ],
    ),
    (
        "1 1̄3̄",
        "a*conj(M) - conj(a)*z + i*conj(c)*r2",
        [
            "-2*ReA*i*r2",
            "1/2*u - (1/2 + i*g)*conj(u) + i*g*conj(L)",
            "-2*ReA*i*r2 + s11*i*t2",
            "2*(ReA + i)*i*r2",
            "-2*r2",
            "-i/2*z + 1/2*conj(u) + i/2*conj(M)",
        ],
    ),
    (
        "1 2̄3̄",
        "conj(b)*z - conj(c)*u - a*conj(N)",
        [
            "-2*ImA*i*u",
            "(1/2 + i*g)*i*s2 + (2*g - i)*h*i*t2",
            "-2*ImA*i*u + s12*i*t2",
            "2*ImA*i*u",
            "-2*i*u",
            "-i/2*s2",
        ],
    ),
    (
        "2 1̄2̄",
        "-conj(b)*conj(u) + b*conj(L) - i*conj(a)*s2",
        [
            "0",
            "-1/2*v - i*h*conj(v) + (2*g + i)*h*conj(N)",
            "s22*conj(z) - conj(s12)*conj(v) - s22*conj(M) + conj(s12)*conj(N)",
            "2*ImA*i*conj(u)",
            "0",
            "0",
        ],
    ),
    (
        "2 1̄3̄",
        "-conj(c)*conj(u) + b*conj(M) - conj(a)*v",
        ["-2*ImA*i*conj(u)", "i/2*s2 - h*t2", "-2*ImA*i*conj(u) + conj(s12)*i*t2", "0", "-2*i*conj(u)", "-i*v"],
    ),
    (
        "2 2̄3̄",
        "i*conj(c)*s2 - conj(b)*v + b*conj(N)",
        ["2*ReA*i*s2", "0", "2*ReA*i*s2 + s22*i*t2", "-2*(ReA + i)*i*s2", "2*s2 - 2*i*v", "0"],
    ),
    (
        "3 1̄2̄",
        "-conj(b)*conj(z) + conj(a)*conj(v) + c*conj(L)",
        ["0", "-g*s2 - i/2*t2", "0", "0", "0", "-i*conj(v)"],
    ),
    (
        "3 1̄3̄",
        "c*conj(M) - conj(c)*conj(z) - i*conj(a)*t2",
        [
            "conj(A)*conj(z) - conj(A)*conj(M)",
            "i*g*v - 1/2*conj(v) + (1/2 - i*g)*conj(N)",
            "conj(A)*conj(z) - conj(A)*conj(M)",
            "-(conj(A) + i)*conj(z) + (conj(A) - i)*conj(M)",
            "-i*r2 + eps*conj(u) - 2*i*conj(z) - eps*conj(L)",
            "i*r2 - 1/2*conj(N)",
        ],
    ),
    (
        "3 2̄3̄",
        "i*conj(b)*t2 + conj(c)*conj(v) - c*conj(N)",
        [
            "-conj(A)*conj(v) + conj(A)*conj(N)",
            "0",
            "-conj(A)*conj(v) + conj(A)*conj(N)",
            "(conj(A) + i)*conj(v) - (conj(A) - i)*conj(N)",
            "-u - eps*i*s2 + 2*i*conj(v) + conj(M)",
            "u - conj(L)",
        ],
    ),
    ("1̄2̄3̄", "conj(b)*conj(M) - conj(c)*conj(L) - conj(a)*conj(N)", ["0", "0", "0", "0", "0", "0"]),
];

/// Column of each class in `ROWS`.
pub fn column(class: usize) -> usize {
    match class {
        1 => 0,
        2 => 1,
        3 => 2,
        4 => 3,
        5 | 6 => 4,
        _ => 5,
    }
}

/// Misprinted cells: row, column (`None` for θ∧Ω, else a class), corrected entry.
pub const ERRATA: &[(&str, Option<usize>, &str)] = &[
    ("1 2̄3̄", None, "-conj(b)*z + conj(c)*u + a*conj(N)"),
    ("3 2̄3̄", None, "-i*conj(b)*t2 - conj(c)*conj(v) + c*conj(N)"),
    ("1̄2̄3̄", None, "-conj(b)*conj(M) + conj(c)*conj(L) + conj(a)*conj(N)"),
    ("1 1̄2̄", Some(2), "-1/2*z + (2*g - i)*h*conj(z) + i*h*conj(M)"),
    ("13 3̄", Some(4), "(A + i)*M - (A - i)*z"),
    ("2 1̄2̄", Some(4), "0"),
    ("2 1̄3̄", Some(4), "2*ImA*i*conj(u)"),
    ("23 3̄", Some(5), "L - conj(u) + eps*i*s2 - 2*i*v"),
    ("2 2̄3̄", Some(5), "2*s2"),
    ("3 2̄3̄", Some(5), "-u - eps*i*s2 + 2*i*conj(v) + conj(L)"),
    ("12 1̄", Some(7), "i/2*L - i/2*conj(u)"),
];

fn q(text: &str) -> GaussRat {
    parse_scalar(text, &Context::new()).unwrap().as_constant().unwrap()
}

fn context() -> Context {
    let mut ctx = Context::with_frame(Frame::Complex(3));
    for r in ["r2", "s2", "t2", "g", "h", "s11", "s22", "eps"] {
        ctx.declare_real(r);
    }
    for c in ["u", "v", "z", "L", "M", "N", "a", "b", "c", "A", "s12"] {
        ctx.declare_complex(c);
    }
    ctx
}

fn cell(text: &str, values: &BTreeMap<String, Scalar>) -> Scalar {
    let text = text.replace("ReA", "(1/2*(A + conj(A)))").replace("ImA", "(-i/2*(A - conj(A)))");
    parse_scalar(&text, &context()).unwrap().substitute_named(values)
}

fn at(f: &Form, label: &str) -> Scalar {
    let frame = f.frame();
    f.terms().find(|(m, _)| frame.label(*m) == label).map(|(_, c)| c.clone()).unwrap_or_else(Scalar::zero)
}

/// Which column a mismatch sits in: `None` for θ∧Ω, else the class.
pub type Cell = (String, Option<usize>);

fn corrected(label: &str, col: Option<usize>, printed: &str) -> String {
    let key = col.map(|c| if c == 6 { 5 } else { c });
    ERRATA.iter().find(|(l, k, _)| *l == label && *k == key).map_or(printed, |e| e.2).to_string()
}

/// Cells that differ from the computed coefficients: `(cell, expected, computed)`.
pub fn mismatches(class: usize, point: &[(&str, &str)], fix: bool) -> Vec<(Cell, Scalar, Scalar)> {
    let name = format!("class{}", class);
    let values: BTreeMap<String, GaussRat> = point.iter().map(|(k, v)| (k.to_string(), q(v))).collect();
    let spec = load_catalog(&name).unwrap();
    let values = spec.params().resolve(&values).unwrap();
    let spec = spec.evaluate(&values).unwrap();
    let mut subst: BTreeMap<String, Scalar> = values.iter().map(|(k, v)| (k.clone(), Scalar::constant(v.clone()))).collect();
    if let Some(g) = values.get("g") {
        subst.insert("h".into(), Scalar::constant(GaussRat::int(1) / (GaussRat::int(4) * g.clone())));
    }
    subst.insert("eps".into(), Scalar::int(if class == 6 { 1 } else { 0 }));
    let ansatz = build_ansatz(&spec, Mode::Lcht).unwrap();
    let frame = spec.frame();
    let mut theta = Form::zero(frame);
    for (j, x) in ["a", "b", "c"].iter().enumerate() {
        let f = Form::monomial(frame, 1 << j, Scalar::complex_var(x));
        theta = theta.add(&f).add(&f.conjugate());
    }
    let d = spec.d(&ansatz.omega);
    let t = theta.wedge(&ansatz.omega);
    let mut out = Vec::new();
    for (label, th, cols) in ROWS {
        for (col, printed, form) in [(None, *th, &t), (Some(class), cols[column(class)], &d)] {
            let text = if fix { corrected(label, col, printed) } else { printed.to_string() };
            let want = cell(&text, &subst);
            let got = at(form, label);
            if want != got {
                out.push(((label.to_string(), col), want, got));
            }
        }
    }
    out
}

pub fn points() -> Vec<(usize, Vec<(&'static str, &'static str)>)> {
    vec![
        (1, vec![("A", "i")]),
        (1, vec![("A", "1")]),
        (1, vec![("A", "3/5 + 4/5*i")]),
        (2, vec![("g", "1/2")]),
        (2, vec![("g", "1")]),
        (2, vec![("g", "1/4")]),
        (3, vec![("A", "i"), ("s11", "1"), ("s22", "1"), ("s12", "0")]),
        (3, vec![("A", "-i"), ("s11", "2"), ("s22", "-1"), ("s12", "0")]),
        (3, vec![("A", "1"), ("s11", "0"), ("s22", "0"), ("s12", "1 + i")]),
        (4, vec![("A", "1 + i")]),
        (4, vec![("A", "-1/2 + 2*i")]),
        (4, vec![("A", "3 - i")]),
        (5, vec![]),
        (6, vec![]),
        (7, vec![]),
    ]
}
