//! Text formats for specs: Salamon notation, the line DSL and JSON.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::params::{Constraint, ParamKind};
use super::spec::AlgebraSpec;
use crate::algebra::expr::{parse_form, parse_scalar};
use crate::algebra::form::index_list;
use crate::algebra::{Form, Frame, Scalar};
use crate::error::{Error, Result};

/// Parses `(0,0,0,0,0,12+34)`: entry `j` lists `de^j` as signed terms whose
/// last two digits index the wedged generators.
pub fn parse_salamon(text: &str) -> Result<AlgebraSpec> {
    let t = text.trim();
    let inner = t
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("expected parenthesised list: {}", text)))?;
    let entries: Vec<&str> = inner.split(',').map(|e| e.trim()).collect();
    let m = entries.len();
    if m > 9 {
        return Err(Error::Parse(format!("dimension {} exceeds 9", m)));
    }
    let frame = Frame::Real(m);
    let mut spec = AlgebraSpec::new(text.trim(), frame);
    for (j, entry) in entries.iter().enumerate() {
        spec.set_d(j + 1, parse_salamon_entry(entry, m)?)?;
    }
    Ok(spec)
}

fn parse_salamon_entry(entry: &str, m: usize) -> Result<Form> {
    let frame = Frame::Real(m);
    let s: String = entry.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty entry".into()));
    }
    if s == "0" {
        return Ok(Form::zero(frame));
    }
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for (k, c) in s.chars().enumerate() {
        if c == '+' || c == '-' {
            if !cur.is_empty() {
                terms.push((neg, std::mem::take(&mut cur)));
            } else if k != 0 {
                return Err(Error::Parse(format!("dangling sign in {}", entry)));
            }
            neg = c == '-';
        } else {
            cur.push(c);
        }
    }
    if cur.is_empty() {
        return Err(Error::Parse(format!("dangling sign in {}", entry)));
    }
    terms.push((neg, cur));
    let mut out = Form::zero(frame);
    for (neg, body) in terms {
        let chars: Vec<char> = body.chars().collect();
        if chars.len() < 2 || !chars[chars.len() - 2..].iter().all(|c| c.is_ascii_digit()) {
            return Err(Error::Parse(format!("malformed term {}", body)));
        }
        let a = chars[chars.len() - 2].to_digit(10).expect("digit") as usize;
        let b = chars[chars.len() - 1].to_digit(10).expect("digit") as usize;
        if a == 0 || b == 0 || a > m || b > m {
            return Err(Error::Parse(format!("index out of range in {}", body)));
        }
        if a == b {
            return Err(Error::Parse(format!("repeated index in {}", body)));
        }
        let coeff_text: String = chars[..chars.len() - 2].iter().collect();
        let mut coeff = if coeff_text.is_empty() {
            BigRational::one()
        } else {
            parse_rational(&coeff_text).ok_or_else(|| Error::Parse(format!("bad coefficient {}", coeff_text)))?
        };
        if neg {
            coeff = -coeff;
        }
        out = out.add(&Form::e(frame, &[a, b], Scalar::rational(coeff)));
    }
    Ok(out)
}

fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let d: num_bigint::BigInt = d.parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n.parse().ok()?, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Salamon notation for real-frame specs with rational coefficients.
pub fn to_salamon(spec: &AlgebraSpec) -> Option<String> {
    let Frame::Real(m) = spec.frame() else { return None };
    if m > 9 || !spec.params().is_empty() {
        return None;
    }
    let mut entries = Vec::with_capacity(m);
    for j in 1..=m {
        let f = spec.d_table(j);
        if f.is_zero() {
            entries.push("0".to_string());
            continue;
        }
        let mut s = String::new();
        for (mask, c) in f.terms() {
            let c = c.as_constant()?;
            if !c.is_real() {
                return None;
            }
            let idx = index_list(mask);
            let r = c.re;
            let (sign, abs) = if r < BigRational::zero() { ('-', -r) } else { ('+', r) };
            if sign == '-' || !s.is_empty() {
                s.push(sign);
            }
            if !abs.is_one() {
                s.push_str(&abs.to_string());
            }
            s.push_str(&format!("{}{}", idx[0] + 1, idx[1] + 1));
        }
        entries.push(s);
    }
    Some(format!("({})", entries.join(",")))
}

/// Parses the line DSL:
///
/// ```text
/// frame complex 3
/// param t : complex
/// d phi3 = phi1^phi3 - t*phi3^cphi1
/// ```
pub fn parse_complex_dsl(text: &str) -> Result<AlgebraSpec> {
    let mut spec: Option<AlgebraSpec> = None;
    let mut name = String::from("custom");
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse(format!("line {}: {}", lineno + 1, msg));
        let (head, rest) = line.split_once(char::is_whitespace).map(|(h, r)| (h, r.trim())).unwrap_or((line, ""));
        match head {
            "name" => {
                name = rest.to_string();
                if let Some(s) = spec.as_mut() {
                    s.name = name.clone();
                }
            }
            "frame" => {
                if spec.is_some() {
                    return Err(err("frame declared twice".into()));
                }
                let parts: Vec<&str> = rest.split_whitespace().collect();
                let (kind, size) = match parts.as_slice() {
                    [k, n] => (*k, n.parse::<usize>().map_err(|_| err(format!("bad frame size {}", n)))?),
                    _ => return Err(err("expected `frame complex|real <n>`".into())),
                };
                let frame = match kind {
                    "complex" if (1..=8).contains(&size) => Frame::Complex(size),
                    "real" if (1..=16).contains(&size) => Frame::Real(size),
                    _ => return Err(err(format!("unsupported frame {} {}", kind, size))),
                };
                spec = Some(AlgebraSpec::new(&name, frame));
            }
            _ => {
                let s = spec.as_mut().ok_or_else(|| err("missing `frame` header".into()))?;
                dsl_line(s, head, rest).map_err(|e| err(e.to_string()))?;
            }
        }
    }
    spec.ok_or_else(|| Error::Parse("missing `frame` header".into()))
}

fn dsl_line(s: &mut AlgebraSpec, head: &str, rest: &str) -> Result<()> {
    match head {
        "param" => {
            let (name, tail) = rest.split_once(':').ok_or_else(|| Error::Parse("expected `param <name> : <kind>`".into()))?;
            let name = name.trim();
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') || name == "i" || name == "conj" {
                return Err(Error::Parse(format!("bad parameter name '{}'", name)));
            }
            let words: Vec<&str> = tail.split_whitespace().collect();
            let kind = match words.first() {
                Some(&"real") => ParamKind::Real,
                Some(&"complex") => ParamKind::Complex,
                _ => return Err(Error::Parse("parameter kind must be real or complex".into())),
            };
            let mut nonzero = false;
            let mut positive = false;
            for w in &words[1..] {
                match *w {
                    "nonzero" => nonzero = true,
                    "positive" => positive = true,
                    other => return Err(Error::Parse(format!("unknown parameter tag {}", other))),
                }
            }
            s.params_mut().add(name, kind, nonzero, positive)?;
        }
        "relation" => {
            let p = parse_scalar(rest, &s.context())?;
            s.params_mut().constrain(Constraint::Relation(p));
        }
        "nonzero" => {
            let p = parse_scalar(rest, &s.context())?;
            s.params_mut().constrain(Constraint::Nonzero(p));
        }
        "notallzero" => {
            let ctx = s.context();
            let ps = rest.split(',').map(|e| parse_scalar(e.trim(), &ctx)).collect::<Result<Vec<_>>>()?;
            s.params_mut().constrain(Constraint::NotAllZero(ps));
        }
        "lee" => {
            let f = parse_form(rest, &s.context())?;
            s.set_lee_hint(f)?;
        }
        "d" => {
            let (lhs, rhs) = rest.split_once('=').ok_or_else(|| Error::Parse("expected `d <generator> = <expr>`".into()))?;
            let j = generator_index(s.frame(), lhs.trim())?;
            let f = parse_form(rhs.trim(), &s.context())?;
            s.set_d(j, f)?;
        }
        other => return Err(Error::Parse(format!("unknown directive '{}'", other))),
    }
    Ok(())
}

fn generator_index(frame: Frame, name: &str) -> Result<usize> {
    let (prefix, limit) = match frame {
        Frame::Complex(n) => ("phi", n),
        Frame::Real(m) => ("e", m),
    };
    let j: usize = name
        .strip_prefix(prefix)
        .and_then(|d| d.parse().ok())
        .ok_or_else(|| Error::Parse(format!("expected {}<j>, got {}", prefix, name)))?;
    if j == 0 || j > limit {
        return Err(Error::Parse(format!("generator index out of range: {}", name)));
    }
    Ok(j)
}

/// Serializes in the line DSL; `parse_complex_dsl` reads it back.
pub fn to_dsl(spec: &AlgebraSpec) -> String {
    let mut out = String::new();
    out.push_str(&format!("name {}\n", spec.name));
    match spec.frame() {
        Frame::Complex(n) => out.push_str(&format!("frame complex {}\n", n)),
        Frame::Real(m) => out.push_str(&format!("frame real {}\n", m)),
    }
    for p in spec.params().params() {
        let kind = match p.kind {
            ParamKind::Real => "real",
            ParamKind::Complex => "complex",
        };
        let mut line = format!("param {} : {}", p.name, kind);
        if p.positive {
            line.push_str(" positive");
        } else if p.nonzero {
            line.push_str(" nonzero");
        }
        out.push_str(&line);
        out.push('\n');
    }
    for c in spec.params().constraints() {
        out.push_str(&c.to_line());
        out.push('\n');
    }
    for j in 1..=spec.generator_count() {
        out.push_str(&format!("d {} = {}\n", spec.frame().generator_name(j - 1), spec.d_table(j)));
    }
    if let Some(l) = spec.lee_hint() {
        out.push_str(&format!("lee {}\n", l));
    }
    out
}

fn mon_json(frame: Frame, mask: u32) -> Vec<i64> {
    index_list(mask)
        .into_iter()
        .map(|g| match frame {
            Frame::Complex(n) if g >= n => -((g - n + 1) as i64),
            _ => (g + 1) as i64,
        })
        .collect()
}

fn form_json(f: &Form) -> Value {
    Value::Array(f.terms().map(|(m, c)| json!({"coeff": c.to_string(), "mon": mon_json(f.frame(), m)})).collect())
}

/// JSON encoding of a spec.
pub fn to_json(spec: &AlgebraSpec) -> Value {
    let (frame, n) = match spec.frame() {
        Frame::Complex(n) => ("complex", n),
        Frame::Real(m) => ("real", m),
    };
    let params: Vec<Value> = spec
        .params()
        .params()
        .iter()
        .map(|p| {
            let mut v = json!({"name": p.name, "kind": if p.kind == ParamKind::Real { "real" } else { "complex" }});
            if p.nonzero {
                v["nonzero"] = json!(true);
            }
            if p.positive {
                v["positive"] = json!(true);
            }
            v
        })
        .collect();
    let mut d = serde_json::Map::new();
    for j in 1..=spec.generator_count() {
        let f = spec.d_table(j);
        if !f.is_zero() {
            d.insert(spec.frame().generator_name(j - 1), form_json(f));
        }
    }
    let mut v = json!({"name": spec.name, "frame": frame, "n": n, "params": params, "d": d});
    let constraints: Vec<String> = spec.params().constraints().iter().map(|c| c.to_line()).collect();
    if !constraints.is_empty() {
        v["constraints"] = json!(constraints);
    }
    if let Some(l) = spec.lee_hint() {
        v["lee"] = form_json(l);
    }
    v
}

fn json_form(spec: &AlgebraSpec, v: &Value) -> Result<Form> {
    let frame = spec.frame();
    let terms = v.as_array().ok_or_else(|| Error::Parse("form must be a list of terms".into()))?;
    let ctx = spec.context();
    let mut out = Form::zero(frame);
    for t in terms {
        let coeff = t.get("coeff").and_then(|c| c.as_str()).ok_or_else(|| Error::Parse("term needs a coeff string".into()))?;
        let mon = t.get("mon").and_then(|m| m.as_array()).ok_or_else(|| Error::Parse("term needs a mon list".into()))?;
        let mut signed = Vec::with_capacity(mon.len());
        for x in mon {
            let k = x.as_i64().ok_or_else(|| Error::Parse("monomial indices must be integers".into()))?;
            let limit = match frame {
                Frame::Complex(n) => n as i64,
                Frame::Real(m) => m as i64,
            };
            if k == 0 || k.abs() > limit || (k < 0 && !frame.is_complex()) {
                return Err(Error::Parse(format!("monomial index {} out of range", k)));
            }
            signed.push(k);
        }
        let c = parse_scalar(coeff, &ctx)?;
        let idx: Vec<usize> = match frame {
            Frame::Complex(n) => signed.iter().map(|&k| if k > 0 { (k - 1) as usize } else { n + (-k - 1) as usize }).collect(),
            Frame::Real(_) => signed.iter().map(|&k| (k - 1) as usize).collect(),
        };
        let mut sorted = idx.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != idx.len() {
            return Err(Error::Parse("repeated generator in monomial".into()));
        }
        out = out.add(&Form::from_indices(frame, &idx, c));
    }
    Ok(out)
}

/// Reads the JSON encoding produced by [`to_json`].
pub fn from_json(v: &Value) -> Result<AlgebraSpec> {
    let frame_kind = v.get("frame").and_then(|f| f.as_str()).ok_or_else(|| Error::Parse("missing frame".into()))?;
    let n = v.get("n").and_then(|n| n.as_u64()).ok_or_else(|| Error::Parse("missing n".into()))? as usize;
    let frame = match frame_kind {
        "complex" if (1..=8).contains(&n) => Frame::Complex(n),
        "real" if (1..=16).contains(&n) => Frame::Real(n),
        _ => return Err(Error::Parse(format!("unsupported frame {} {}", frame_kind, n))),
    };
    let name = v.get("name").and_then(|s| s.as_str()).unwrap_or("custom");
    let mut spec = AlgebraSpec::new(name, frame);
    if let Some(ps) = v.get("params") {
        for p in ps.as_array().ok_or_else(|| Error::Parse("params must be a list".into()))? {
            let pname = p.get("name").and_then(|s| s.as_str()).ok_or_else(|| Error::Parse("param needs a name".into()))?;
            let kind = match p.get("kind").and_then(|s| s.as_str()) {
                Some("real") => ParamKind::Real,
                Some("complex") => ParamKind::Complex,
                _ => return Err(Error::Parse(format!("param {} needs kind real or complex", pname))),
            };
            let flag = |k: &str| p.get(k).and_then(|b| b.as_bool()).unwrap_or(false);
            spec.params_mut().add(pname, kind, flag("nonzero"), flag("positive"))?;
        }
    }
    if let Some(cs) = v.get("constraints") {
        for c in cs.as_array().ok_or_else(|| Error::Parse("constraints must be a list".into()))? {
            let line = c.as_str().ok_or_else(|| Error::Parse("constraint must be a string".into()))?;
            let (head, rest) = line.split_once(' ').unwrap_or((line, ""));
            if !matches!(head, "relation" | "nonzero" | "notallzero") {
                return Err(Error::Parse(format!("unknown constraint {}", line)));
            }
            dsl_line(&mut spec, head, rest.trim())?;
        }
    }
    if let Some(d) = v.get("d") {
        let d = d.as_object().ok_or_else(|| Error::Parse("d must be an object".into()))?;
        for (g, terms) in d {
            let j = generator_index(frame, g)?;
            let f = json_form(&spec, terms)?;
            spec.set_d(j, f)?;
        }
    }
    if let Some(l) = v.get("lee") {
        let f = json_form(&spec, l)?;
        spec.set_lee_hint(f)?;
    }
    Ok(spec)
}

/// Reads a spec from text, detecting JSON, Salamon notation or the DSL.
pub fn parse_any(text: &str) -> Result<AlgebraSpec> {
    let t = text.trim_start();
    if t.starts_with('{') {
        let v: Value = serde_json::from_str(text)?;
        from_json(&v)
    } else if t.starts_with('(') {
        parse_salamon(text)
    } else {
        parse_complex_dsl(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn salamon_rejects_bad_input() {
        assert!(parse_salamon("(0,0,1)").is_err());
        assert!(parse_salamon("(0,0,14)").is_err());
        assert!(parse_salamon("(0,0,11)").is_err());
        assert!(parse_salamon("(0,0,12+)").is_err());
        assert!(parse_salamon("(0,0,0,0,0,0,0,0,0,0)").is_err());
        assert!(parse_salamon("0,0,12").is_err());
    }

    #[test]
    fn salamon_coefficients() {
        let s = parse_salamon("(0,0,-213+1/212)").unwrap();
        let f = Frame::Real(3);
        let want = Form::e(f, &[1, 3], Scalar::int(-2)).add(&Form::e(f, &[1, 2], Scalar::frac(1, 2)));
        assert_eq!(s.d_table(3), &want);
        assert_eq!(to_salamon(&s).unwrap(), "(0,0,1/212-213)");
    }

    #[test]
    fn dsl_errors() {
        assert!(parse_complex_dsl("d phi1 = 0").is_err());
        assert!(parse_complex_dsl("frame complex 2\nd phi1 = t*phi1^phi2").is_err());
        assert!(parse_complex_dsl("frame complex 2\nd phi3 = 0").is_err());
        assert!(parse_complex_dsl("frame complex 2\nd phi2 = phi1^phi3").is_err());
        assert!(parse_complex_dsl("frame complex 2\nd phi2 = phi1").is_err());
    }
}
