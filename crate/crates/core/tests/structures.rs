use std::collections::BTreeMap;

use invarforms::algebra::expr::parse_form;
use invarforms::structures::*;
use invarforms::{Form, Frame, GaussRat, Scalar};

fn vals(pairs: &[(&str, GaussRat)]) -> BTreeMap<String, GaussRat> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

#[test]
fn salamon_h3() {
    let s = parse_salamon("(0,0,0,0,0,12+34)").unwrap();
    let f = Frame::Real(6);
    let want = Form::e(f, &[1, 2], Scalar::one()).add(&Form::e(f, &[3, 4], Scalar::one()));
    assert_eq!(s.d_table(6), &want);
    let r = s.validate();
    assert!(r.jacobi_valid && r.unimodular);
    assert_eq!(r.nilpotent, Some(true));
}

#[test]
fn salamon_abelian() {
    let s = parse_salamon("(0,0,0,0,0,0)").unwrap();
    let r = s.validate();
    assert!(r.is_valid() && r.unimodular);
    assert_eq!(r.nilpotent, Some(true));
}

#[test]
fn salamon_jacobi_failure() {
    let s = parse_salamon("(0,12,13,23)").unwrap();
    let r = s.validate();
    assert!(!r.jacobi_valid);
    let dd = s.d(s.d_table(4));
    assert_eq!(dd, Form::e(Frame::Real(4), &[1, 2, 3], Scalar::int(2)));
}

#[test]
fn dsl_h3_jplus() {
    let s = parse_complex_dsl("frame complex 3\nd phi1 = 0\nd phi2 = 0\nd phi3 = phi1^cphi1 + phi2^cphi2\n").unwrap();
    let f = Frame::Complex(3);
    let want = Form::phi(f, &[1, -1], Scalar::one()).add(&Form::phi(f, &[2, -2], Scalar::one()));
    assert_eq!(s.d_table(3), &want);
    assert!(s.d_table(3).project_bidegree(invarforms::Bidegree::new(0, 2)).is_zero());
}

#[test]
fn dsl_torus() {
    let s = parse_complex_dsl("frame complex 3\nd phi1 = 0\nd phi2 = 0\nd phi3 = 0").unwrap();
    assert!((1..=3).all(|j| s.d_table(j).is_zero()));
    assert_eq!(s, {
        let mut t = load_catalog("torus(3)").unwrap();
        t.name = s.name.clone();
        t
    });
}

#[test]
fn dsl_nakamura() {
    let s = load_catalog("nakamura").unwrap();
    let f = Frame::Complex(3);
    let t = Scalar::complex_var("t");
    let want = Form::phi(f, &[1, 3], Scalar::one()).sub(&Form::phi(f, &[3, -1], t));
    assert_eq!(s.d_table(3), &want);
    let r = s.validate();
    assert!(r.jacobi_valid);
    assert_eq!(r.integrable, Some(true));
    assert!(r.unimodular);
    assert_eq!(r.nilpotent, Some(false));
}

#[test]
fn nakamura_evaluation() {
    let s = load_catalog("nakamura").unwrap();
    let f = Frame::Complex(3);
    let d2 = s.evaluate_form(s.d_table(2), &vals(&[("t", GaussRat::frac(1, 2))])).unwrap();
    let want = Form::phi(f, &[1, 2], Scalar::int(-1)).add(&Form::phi(f, &[2, -1], Scalar::frac(1, 2)));
    assert_eq!(d2, want);
    let same = s.evaluate_form(s.d_table(2), &BTreeMap::new()).unwrap();
    assert_eq!(&same, s.d_table(2));
}

#[test]
fn class1_at_i() {
    let s = load_catalog("class1").unwrap();
    let e = s.evaluate(&vals(&[("A", GaussRat::i())])).unwrap();
    let f = Frame::Complex(3);
    let want = Form::phi(f, &[1, 3], Scalar::i()).add(&Form::phi(f, &[1, -3], Scalar::i()));
    assert_eq!(e.d_table(1), &want);
    assert!(s.evaluate(&vals(&[("A", GaussRat::int(2))])).is_err());
}

#[test]
fn constraint_violations_are_refused() {
    let sm = load_catalog("inoue_SM").unwrap();
    assert!(sm.evaluate(&vals(&[("alpha", GaussRat::int(0))])).is_err());
    assert!(sm.evaluate(&vals(&[("alpha", GaussRat::i())])).is_err());
    let c2 = load_catalog("class2").unwrap();
    assert!(c2.evaluate(&vals(&[("g", GaussRat::int(-1))])).is_err());
    let c4 = load_catalog("class4").unwrap();
    assert!(c4.evaluate(&vals(&[("A", GaussRat::int(3))])).is_err());
    let c3 = load_catalog("class3").unwrap();
    let zero = GaussRat::int(0);
    assert!(c3
        .evaluate(&vals(&[("A", GaussRat::i()), ("s11", zero.clone()), ("s22", zero.clone()), ("s12", zero)]))
        .is_err());
    assert!(c3
        .evaluate(&vals(&[("A", GaussRat::int(1)), ("s11", GaussRat::int(1)), ("s22", GaussRat::int(0)), ("s12", GaussRat::int(0))]))
        .is_err());
}

#[test]
fn inoue_spm_has_q_term() {
    let s = load_catalog("inoue_Spm").unwrap();
    let c = s.d_table(1).coefficient(Form::phi(Frame::Complex(2), &[2, -2], Scalar::one()).support()[0]);
    assert_eq!(c, Scalar::real_var("q").scale(&GaussRat::i().scale(&invarforms::algebra::rat(1, 2))));
}

#[test]
fn torus3_is_zero() {
    let s = load_catalog("torus(3)").unwrap();
    assert!((1..=3).all(|j| s.d_table(j).is_zero()));
    assert!(load_catalog("torus(0)").is_err());
    assert!(load_catalog("nonesuch").is_err());
}

#[test]
fn class2_coefficients() {
    let s = load_catalog("class2").unwrap();
    let g = GaussRat::frac(3, 2);
    let e = s.evaluate(&vals(&[("g", g.clone())])).unwrap();
    let f = Frame::Complex(3);
    let inv4g = GaussRat::int(1) / (GaussRat::int(4) * g);
    let i = GaussRat::i();
    let want = Form::phi(f, &[1, 2], Scalar::frac(1, 2))
        .add(&Form::phi(f, &[1, -2], Scalar::constant(GaussRat::frac(1, 2) - &i * &inv4g)))
        .add(&Form::phi(f, &[2, -1], Scalar::constant(&i * &inv4g)));
    assert_eq!(e.d_table(3), &want);
}

#[test]
fn every_fixture_validates() {
    for name in catalog_names() {
        let s = load_catalog(name).unwrap();
        let r = s.validate();
        assert!(r.jacobi_valid, "{}", name);
        assert_ne!(r.integrable, Some(false), "{}", name);
        if s.frame().is_complex() {
            assert_eq!(r.integrable, Some(true), "{}", name);
        }
        let inst = load_instance(name).unwrap();
        assert!(inst.is_constant(), "{}", name);
        assert!(inst.validate().is_valid(), "{}", name);
    }
}

#[test]
fn nilpotent_flags() {
    for name in ["h3_Jplus", "h3_Jminus", "h8", "h9", "h19minus_Jplus", "h19minus_Jminus", "heis5xR_Jplus"] {
        assert_eq!(load_catalog(name).unwrap().validate().nilpotent, Some(true), "{}", name);
    }
    for name in ["class1", "class5", "class7", "inoue_SM"] {
        assert_eq!(load_catalog(name).unwrap().validate().nilpotent, Some(false), "{}", name);
    }
}

#[test]
fn abelian_flag_matches_complexification() {
    let c = load_catalog("heis5xR_Jplus").unwrap();
    let r = c.validate();
    assert_eq!(r.abelian_j, Some(true));
    assert_eq!(load_catalog("h19minus_Jplus").unwrap().validate().abelian_j, Some(false));
    assert_eq!(load_catalog("h9").unwrap().validate().abelian_j, Some(true));
}

#[test]
fn round_trips() {
    for name in catalog_names() {
        let s = load_catalog(name).unwrap();
        let back = parse_complex_dsl(&to_dsl(&s)).unwrap();
        assert_eq!(back, s, "dsl {}", name);
        let back = from_json(&to_json(&s)).unwrap();
        assert_eq!(back, s, "json {}", name);
        if let Some(text) = to_salamon(&s) {
            assert_eq!(to_salamon(&parse_salamon(&text).unwrap()).unwrap(), text);
        }
    }
}

#[test]
fn json_example() {
    let text = r#"{"frame":"complex","n":3,"params":[{"name":"t","kind":"complex"}],"d":{"phi3":[{"coeff":"1","mon":[1,-1]},{"coeff":"1","mon":[2,-2]}]}}"#;
    let s = parse_any(text).unwrap();
    assert_eq!(s.d_table(3), load_catalog("h3_Jplus").unwrap().d_table(3));
    assert!(parse_any(r#"{"frame":"complex","n":3,"d":{"phi3":[{"coeff":"x","mon":[1,-1]}]}}"#).is_err());
    assert!(parse_any(r#"{"frame":"complex","n":3,"d":{"phi3":[{"coeff":"1","mon":[1,-4]}]}}"#).is_err());
}

#[test]
fn lee_hint_parses() {
    let s = load_catalog("h3_Jplus").unwrap();
    let want = parse_form("phi3 + cphi3", &s.context()).unwrap();
    assert_eq!(s.lee_hint(), Some(&want));
}
