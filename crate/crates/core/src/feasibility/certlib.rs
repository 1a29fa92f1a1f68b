//! Builders for the bundled nonexistence certificates.
//!
//! Each builder writes the proof tree by naming residual equations through
//! their monomial labels; intermediate results are computed here and checked
//! again by [`check_certificate`](super::certificate::check_certificate).

use std::collections::BTreeMap;

use super::certificate::{prepare, CheckContext, Certificate, Factor, Node, Summand, Term};
use crate::algebra::expr::parse_scalar;
use crate::algebra::Scalar;
use crate::error::{Error, Result};
use crate::structures::load_catalog;

/// A bundled certificate and the fixture it refers to.
#[derive(Clone, Debug)]
pub struct Bundled {
    pub name: &'static str,
    pub fixture: &'static str,
    pub json: &'static str,
}

macro_rules! bundled {
    ($($name:literal => $fixture:literal),* $(,)?) => {
        &[$(Bundled { name: $name, fixture: $fixture, json: include_str!(concat!("../../certificates/", $name, ".json")) }),*]
    };
}

pub const BUNDLED: &[Bundled] = bundled! {
    "h3_Jminus" => "h3_Jminus",
    "h9" => "h9",
    "h19minus_Jplus" => "h19minus_Jplus",
    "h19minus_Jminus" => "h19minus_Jminus",
    "class1_a" => "class1",
    "class1_b" => "class1",
    "class1_c" => "class1",
    "class2" => "class2",
    "class3_a" => "class3",
    "class3_b" => "class3",
    "class3_c" => "class3",
    "class4" => "class4",
    "class5" => "class5",
    "class6" => "class6",
    "class7" => "class7",
    "inoue_Spm_q1" => "inoue_Spm",
    "inoue_Spm_qm2" => "inoue_Spm",
};

pub fn bundled(name: &str) -> Option<&'static Bundled> {
    BUNDLED.iter().find(|b| b.name == name)
}

impl Bundled {
    pub fn certificate(&self) -> Result<Certificate> {
        Certificate::from_json(self.json)
    }
}

#[derive(Clone)]
struct Pad<'a> {
    ctx: &'a CheckContext,
    eqs: Vec<Scalar>,
    zero: BTreeMap<String, Scalar>,
}

impl<'a> Pad<'a> {
    fn at(&self, label: &str) -> usize {
        self.ctx.labels.iter().position(|l| l == label).unwrap_or_else(|| panic!("no equation at {}", label))
    }

    fn val(&self, text: &str) -> Scalar {
        let s = parse_scalar(text, &self.ctx.parser).expect("builder expression");
        self.reduce(&s.substitute_named(&self.zero))
    }

    fn reduce(&self, s: &Scalar) -> Scalar {
        self.ctx.spec.params().reduce(s)
    }

    fn push(&mut self, s: Scalar) -> usize {
        self.eqs.push(s);
        self.eqs.len() - 1
    }
}

fn atom(x: &str) -> Factor {
    Factor::Atom(x.into())
}

fn sq(x: &str) -> Factor {
    Factor::Sq(x.into())
}

fn abs2(x: &str) -> Factor {
    Factor::Abs2(x.into())
}

fn combine(p: &mut Pad, terms: &[(&str, usize)], next: impl FnOnce(&mut Pad, usize) -> Node) -> Node {
    let mut sum = Scalar::zero();
    for (c, e) in terms {
        sum.add_assign_ref(&p.val(c).mul_ref(&p.eqs[*e]));
    }
    let r = p.reduce(&sum);
    let k = p.push(r.clone());
    Node::Combine {
        terms: terms.iter().map(|(c, e)| Term { coef: c.to_string(), eq: *e }).collect(),
        result: r.to_string(),
        next: Box::new(next(p, k)),
    }
}

/// Exact quotient by a single-term divisor.
fn divide(e: &Scalar, d: &Scalar) -> Scalar {
    let (m, c) = d.leading_term().expect("nonzero divisor");
    assert_eq!(d.num_terms(), 1, "divisor {} has several terms", d);
    let inv = c.inv().expect("nonzero coefficient");
    Scalar::from_terms(e.terms().map(|(t, k)| {
        let q = t.divide(m).unwrap_or_else(|| panic!("{} does not divide {}", d, e));
        (q, k * &inv)
    }))
}

fn cancel(p: &mut Pad, eq: usize, factor: &[&str], next: impl FnOnce(&mut Pad, usize) -> Node) -> Node {
    let mut d = Scalar::one();
    for f in factor {
        d = d.mul_ref(&p.val(f));
    }
    let r = divide(&p.eqs[eq], &d);
    let k = p.push(r.clone());
    Node::Cancel {
        eq,
        factor: factor.iter().map(|f| f.to_string()).collect(),
        result: r.to_string(),
        next: Box::new(next(p, k)),
    }
}

fn conjugate(p: &mut Pad, eq: usize, next: impl FnOnce(&mut Pad, usize) -> Node) -> Node {
    let c = p.reduce(&p.eqs[eq].conj());
    let k = p.push(c);
    Node::Conjugate { eq, next: Box::new(next(p, k)) }
}

fn split(p: &Pad, var: &str, zero: impl FnOnce(&mut Pad) -> Node, nonzero: impl FnOnce(&mut Pad) -> Node) -> Node {
    let mut z = p.clone();
    let sub: BTreeMap<String, Scalar> = [(var.to_string(), Scalar::zero())].into();
    z.eqs = z.eqs.iter().map(|e| z.reduce(&e.substitute_named(&sub))).collect();
    z.zero.insert(var.into(), Scalar::zero());
    let mut nz = p.clone();
    Node::Split { var: var.into(), zero: Box::new(zero(&mut z)), nonzero: Box::new(nonzero(&mut nz)) }
}

fn contradiction(eq: usize, scale: &str, terms: Vec<(&str, Vec<Factor>)>) -> Node {
    Node::Contradiction {
        eq,
        scale: scale.into(),
        terms: terms.into_iter().map(|(c, f)| Summand { coef: c.into(), factors: f }).collect(),
    }
}

fn skeleton(mode: &str, params: &[(&str, &str)], fixed: &[&str], atoms: &[&str]) -> Certificate {
    Certificate {
        ansatz: mode.into(),
        params: params.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
        fixed: fixed.iter().map(|k| (k.to_string(), "0".to_string())).collect(),
        atoms: atoms.iter().map(|a| a.to_string()).collect(),
        tree: Node::Contradiction { eq: 0, scale: "0".into(), terms: Vec::new() },
    }
}

fn h3_jminus(p: &mut Pad) -> Node {
    let (e131, e133, e232, e233) = (p.at("13 1̄"), p.at("13 3̄"), p.at("23 2̄"), p.at("23 3̄"));
    split(
        p,
        "c",
        |p| {
            cancel(p, e233, &["-i", "t2"], |p, b| {
                conjugate(p, b, |p, bc| {
                    combine(p, &[("1", e232), ("N", bc)], |_, k| contradiction(k, "-i", vec![("1", vec![atom("t2")])]))
                })
            })
        },
        |p| {
            combine(p, &[("c", e131), ("-conj(a)", e133), ("c", e232), ("-conj(b)", e233)], |_, k| {
                contradiction(
                    k,
                    "-i",
                    vec![
                        ("1", vec![sq("c"), atom("r2")]),
                        ("1", vec![sq("c"), atom("s2")]),
                        ("1", vec![abs2("a"), atom("t2")]),
                        ("1", vec![abs2("b"), atom("t2")]),
                    ],
                )
            })
        },
    )
}

fn h9(p: &mut Pad) -> Node {
    let (e231, e133, e232, e233) = (p.at("23 1̄"), p.at("13 3̄"), p.at("23 2̄"), p.at("23 3̄"));
    split(
        p,
        "c",
        |p| {
            cancel(p, e133, &["-i", "t2"], |p, a| {
                conjugate(p, a, |p, ac| {
                    combine(p, &[("1", e231), ("N", ac)], |_, k| contradiction(k, "i", vec![("1", vec![atom("t2")])]))
                })
            })
        },
        |p| {
            combine(p, &[("c", e232), ("-b", e233)], |_, k| {
                contradiction(k, "-i", vec![("1", vec![sq("c"), atom("s2")]), ("1", vec![sq("b"), atom("t2")])])
            })
        },
    )
}

fn h19(p: &mut Pad, plus: bool) -> Node {
    let (e123, e122, e132, e232, e123b) = (p.at("123"), p.at("12 2̄"), p.at("13 2̄"), p.at("23 2̄"), p.at("12 3̄"));
    let (half, n_coef, v_coef) = if plus { ("1/2", "i", "-i") } else { ("-1/2", "-i", "i") };
    split(
        p,
        "c",
        |p| {
            split(
                p,
                "a",
                |p| {
                    conjugate(p, e132, |p, k| {
                        combine(p, &[("1", e132), ("1", k)], |_, s| contradiction(s, half, vec![("1", vec![atom("t2")])]))
                    })
                },
                |p| {
                    cancel(p, e123, &["a"], |p, n| {
                        cancel(p, e123b, &["a"], |p, v| {
                            combine(p, &[("1", e122), (n_coef, n), (v_coef, v)], |_, k| {
                                contradiction(k, "i*conj(a)", vec![("1", vec![abs2("a"), atom("s2")])])
                            })
                        })
                    })
                },
            )
        },
        |_| contradiction(e232, "-i*c", vec![("1", vec![sq("c"), atom("s2")])]),
    )
}

/// `13 1̄` and `23 2̄` pin `c` to two values differing by a nonzero constant.
fn two_values(p: &mut Pad) -> Node {
    let (e131, e232) = (p.at("13 1̄"), p.at("23 2̄"));
    cancel(p, e131, &["i", "r2"], |p, p1| {
        cancel(p, e232, &["i", "s2"], |p, p2| {
            combine(p, &[("1", p1), ("-1", p2)], |p, k| {
                let c = p.eqs[k].as_constant().expect("constant difference");
                let inv = c.inv().expect("nonzero difference");
                contradiction(k, &inv.to_string(), vec![("1", vec![])])
            })
        })
    })
}

fn class2(p: &mut Pad) -> Node {
    let (e123, e231, e132) = (p.at("123"), p.at("23 1̄"), p.at("13 2̄"));
    split(
        p,
        "a",
        |p| {
            conjugate(p, e132, |p, k| {
                combine(p, &[("1", e132), ("1", k)], |_, s| contradiction(s, "-1/2", vec![("1", vec![atom("h"), atom("t2")])]))
            })
        },
        |p| {
            cancel(p, e123, &["a"], |p, n| {
                combine(p, &[("1", e231), ("-conj(a)", n)], |p, r| {
                    conjugate(p, r, |p, rc| {
                        combine(p, &[("1", r), ("-1", rc)], |_, k| {
                            contradiction(k, "i", vec![("1", vec![atom("s2")]), ("1", vec![atom("t2")])])
                        })
                    })
                })
            })
        },
    )
}

fn class4(p: &mut Pad) -> Node {
    let (e131, e232) = (p.at("13 1̄"), p.at("23 2̄"));
    cancel(p, e131, &["i", "r2"], |p, p1| {
        cancel(p, e232, &["i", "s2"], |p, p2| {
            combine(p, &[("1", p2), ("-1", p1)], |p, q| {
                conjugate(p, q, |p, qc| {
                    combine(p, &[("1", q), ("-1", qc)], |_, k| contradiction(k, "i/8", vec![("1", vec![])]))
                })
            })
        })
    })
}

fn class7(p: &mut Pad) -> Node {
    let (e122, e231) = (p.at("12 2̄"), p.at("23 1̄"));
    cancel(p, e122, &["-i", "s2"], |p, a| {
        combine(p, &[("1", e231), ("N", a)], |_, k| contradiction(k, "-2*i", vec![("1", vec![atom("s2")])]))
    })
}

fn inoue(p: &mut Pad, scale: &str) -> Node {
    let (e121, e122) = (p.at("12 1̄"), p.at("12 2̄"));
    cancel(p, e121, &["A"], |p, b| {
        combine(p, &[("1", e122), ("i*D", b)], |p, r| {
            conjugate(p, r, |p, rc| {
                combine(p, &[("1", r), ("1", rc)], |_, k| contradiction(k, scale, vec![("1", vec![atom("A")])]))
            })
        })
    })
}

const NORMAL: &[&str] = &["v", "z"];
const DIAG: &[&str] = &["r2", "s2", "t2"];

/// Rebuilds the bundled certificate `name` from its proof script.
pub fn build(name: &str) -> Result<Certificate> {
    let b = bundled(name).ok_or_else(|| Error::UnknownName(name.into()))?;
    let class3 = |a: &'static str, s12: &'static str| vec![("A", a), ("s11", "0"), ("s22", "0"), ("s12", s12)];
    let (cert, script): (Certificate, fn(&mut Pad) -> Node) = match name {
        "h3_Jminus" => (skeleton("lcht", &[], NORMAL, DIAG), h3_jminus),
        "h9" => (skeleton("lcht", &[], NORMAL, DIAG), h9),
        "h19minus_Jplus" => (skeleton("lcht", &[], &[], &["s2", "t2"]), |p| h19(p, true)),
        "h19minus_Jminus" => (skeleton("lcht", &[], &[], &["s2", "t2"]), |p| h19(p, false)),
        "class1_a" => (skeleton("lcht", &[("A", "1")], &[], &["r2", "s2"]), two_values),
        "class1_b" => (skeleton("lcht", &[("A", "(3/5 + 4/5*i)")], &[], &["r2", "s2"]), two_values),
        "class1_c" => (skeleton("lcht", &[("A", "(-3/5 + 4/5*i)")], &[], &["r2", "s2"]), two_values),
        "class3_a" => (skeleton("lcht", &class3("1", "1"), &[], &["r2", "s2"]), two_values),
        "class3_b" => (skeleton("lcht", &class3("-1", "i"), &[], &["r2", "s2"]), two_values),
        "class3_c" => (skeleton("lcht", &class3("1", "(2 - i)"), &[], &["r2", "s2"]), two_values),
        "class2" => (skeleton("lcht", &[], &[], &["s2", "t2", "h"]), class2),
        "class4" => (skeleton("lcht", &[], &[], &["r2", "s2"]), class4),
        "class5" | "class6" => (skeleton("lcht", &[], &[], &["r2", "s2"]), two_values),
        "class7" => (skeleton("lcht", &[], &[], &["s2"]), class7),
        "inoue_Spm_q1" => (skeleton("lcK", &[("q", "1")], &[], &["A"]), |p| inoue(p, "1")),
        "inoue_Spm_qm2" => (skeleton("lcK", &[("q", "-2")], &[], &["A"]), |p| inoue(p, "-1/2")),
        _ => return Err(Error::UnknownName(name.into())),
    };
    let spec = load_catalog(b.fixture)?;
    let ctx = prepare(&spec, None, &cert)?;
    let mut pad = Pad { ctx: &ctx, eqs: ctx.equations.clone(), zero: BTreeMap::new() };
    let tree = script(&mut pad);
    Ok(Certificate { tree, ..cert })
}
