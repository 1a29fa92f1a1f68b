use invarforms::algebra::expr::parse_form;
use invarforms::algebra::rat_int;
use invarforms::operators::identities::*;
use invarforms::operators::*;
use invarforms::structures::{load_catalog, load_instance};
use invarforms::{Form, Frame, GaussRat, Scalar};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn f3() -> Frame {
    Frame::Complex(3)
}

#[test]
fn d_of_h3_jplus() {
    let s = load_catalog("h3_Jplus").unwrap();
    let d1 = assemble_d(&s, 1).unwrap();
    let img = d1.apply(&Form::phi(f3(), &[3], Scalar::one())).unwrap();
    let want = Form::phi(f3(), &[1, -1], Scalar::one()).add(&Form::phi(f3(), &[2, -2], Scalar::one()));
    assert_eq!(img, want);
    for g in [1, 2, -1, -2] {
        assert!(d1.apply(&Form::phi(f3(), &[g], Scalar::one())).unwrap().is_zero());
    }
    assert!(assemble_d(&load_catalog("torus(3)").unwrap(), 2).unwrap().is_zero());
}

#[test]
fn d_of_class7() {
    let s = load_catalog("class7").unwrap();
    let d1 = assemble_d(&s, 1).unwrap();
    let img = d1.apply(&Form::phi(f3(), &[2], Scalar::one())).unwrap();
    assert_eq!(img.coefficient(Form::phi(f3(), &[2, -1], Scalar::one()).support()[0]), Scalar::constant(GaussRat::i().scale(&invarforms::algebra::rat(-1, 2))));
}

#[test]
fn symbolic_spec_is_refused() {
    assert!(assemble_d(&load_catalog("nakamura").unwrap(), 1).is_err());
    let bad = invarforms::structures::parse_salamon("(0,12,13,23)").unwrap();
    assert!(assemble_d(&bad, 1).is_err());
}

#[test]
fn d_squared_vanishes_on_fixtures() {
    for name in invarforms::structures::catalog_names() {
        let s = load_instance(name).unwrap();
        for k in 0..s.frame().rank() {
            let a = assemble_d(&s, k).unwrap();
            let b = assemble_d(&s, k + 1).unwrap();
            assert!(b.compose(&a).unwrap().is_zero(), "{} degree {}", name, k);
        }
    }
}

#[test]
fn twisted_d_squares_to_zero() {
    let s = load_catalog("h3_Jplus").unwrap();
    let theta = s.lee_hint().unwrap().clone();
    for w in [-2, -1, 1, 3] {
        assert!(twisted_d_squared_residuals(&s, &theta, &rat_int(w)).is_empty());
    }
    let open = Form::phi(f3(), &[3], Scalar::one());
    assert!(twisted_d(&s, &open, Variant::Plain, &rat_int(1), 1).is_err());
}

#[test]
fn twisted_d_of_lck_form() {
    let s = load_catalog("h3_Jplus").unwrap();
    let theta = s.lee_hint().unwrap().clone();
    let omega = standard_omega(f3());
    assert!(d_twisted(&s, &theta, &rat_int(1), &omega).is_zero());
    let zero = twisted_d(&s, &theta, Variant::Plain, &rat_int(0), 2).unwrap();
    assert_eq!(zero, assemble_d(&s, 2).unwrap());
    let t = load_catalog("torus(3)").unwrap();
    assert!(twisted_d(&t, &Form::zero(f3()), Variant::CTwist, &rat_int(1), 2).unwrap().is_zero());
}

#[test]
fn leibniz_on_fixtures() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for name in ["h3_Jplus", "h19minus_Jminus", "class7", "inoue_Spm", "h3_real"] {
        let s = load_instance(name).unwrap();
        assert!(leibniz_residuals(&s, &mut rng, 200).is_empty(), "{}", name);
    }
}

#[test]
fn lefschetz_commutators() {
    let m = MetricData::standard(f3());
    for k in 0..=6 {
        assert!(sl2_residuals(&m, k).is_empty(), "k={}", k);
        for j in 0..=3 {
            assert!(lefschetz_commutator_residuals(&m, j, k).is_empty(), "j={} k={}", j, k);
        }
    }
    let one = Form::one(f3());
    assert_eq!(m.lambda(&m.l(&one)), one.scale_const(&GaussRat::int(3)));
    let a = Form::phi(f3(), &[1], Scalar::one());
    let lhs = m.l_pow(&m.lambda(&a), 2).sub(&m.lambda(&m.l_pow(&a, 2)));
    assert_eq!(lhs, m.l(&a).scale_const(&GaussRat::int(-2)));
}

#[test]
fn lefschetz_on_twisted_metric() {
    let text = "i*phi1^cphi1 + 2*i*phi2^cphi2 + 3*i*phi3^cphi3 + phi1^cphi2 - phi2^cphi1";
    let omega = parse_form(text, &invarforms::algebra::expr::Context::with_frame(f3())).unwrap();
    let m = MetricData::new(&omega).unwrap();
    assert!(m.is_positive());
    for k in 0..=6 {
        assert!(sl2_residuals(&m, k).is_empty());
        assert!(star_squared_residuals(&m, k).unwrap().is_empty(), "k={}", k);
    }
}

#[test]
fn hodge_star_basics() {
    let m = MetricData::standard(f3());
    assert_eq!(m.hodge_star(&Form::one(f3())).unwrap(), m.vol().clone());
    assert_eq!(m.hodge_star(m.vol()).unwrap(), Form::one(f3()));
    for k in 0..=6 {
        assert!(star_squared_residuals(&m, k).unwrap().is_empty(), "k={}", k);
    }
}

#[test]
fn weyl_identity_standard() {
    let m = MetricData::standard(f3());
    for (j, k) in admissible_pairs(3) {
        assert!(weyl_residuals(&m, j, k).unwrap().is_empty(), "j={} k={}", j, k);
    }
}

#[test]
fn primitive_decomposition() {
    let m = MetricData::standard(f3());
    let omega = standard_omega(f3());
    let parts = m.primitive_decompose(&omega).unwrap();
    assert_eq!(parts, vec![(1, Form::one(f3()))]);
    let p = Form::phi(f3(), &[1, -2], Scalar::one());
    assert!(m.lambda(&p).is_zero());
    assert_eq!(m.primitive_decompose(&p).unwrap(), vec![(0, p.clone())]);
    let parts = m.primitive_decompose(m.vol()).unwrap();
    assert_eq!(parts, vec![(3, Form::scalar(f3(), Scalar::frac(1, 6)))]);
}

#[test]
fn twisted_kahler_identity_torus() {
    let s = load_catalog("torus(3)").unwrap();
    let m = MetricData::standard(f3());
    let theta = Form::zero(f3());
    for (j, k) in admissible_pairs(3) {
        for ell in -2..=2 {
            assert!(verify_twisted_kahler_identity(&s, &m, &theta, j, k, ell).unwrap().is_empty(), "j={} k={} l={}", j, k, ell);
        }
    }
}

#[test]
fn twisted_kahler_identity_h3() {
    let s = load_catalog("h3_Jplus").unwrap();
    let m = MetricData::standard(f3());
    let theta = s.lee_hint().unwrap().clone();
    assert!(is_lck_data(&s, m.omega(), &theta));
    for (j, k) in admissible_pairs(3) {
        for ell in -2..=2 {
            let r = verify_twisted_kahler_identity(&s, &m, &theta, j, k, ell).unwrap();
            assert!(r.is_empty(), "j={} k={} l={}: {:?}", j, k, ell, r.first());
        }
    }
}

#[test]
fn lcs_commutation() {
    let s = load_catalog("h3_Jplus").unwrap();
    let m = MetricData::standard(f3());
    let theta = s.lee_hint().unwrap().clone();
    for k in 0..=3 {
        for ell in -2..=2 {
            assert!(lcs_commutation_residuals(&s, &m, &theta, k, ell).is_empty());
        }
    }
}
