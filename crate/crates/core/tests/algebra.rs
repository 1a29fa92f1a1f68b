use std::collections::BTreeMap;

use invarforms::algebra::expr::{parse_form, Context};
use invarforms::algebra::Bidegree;
use invarforms::structures::load_catalog;
use invarforms::{Form, Frame, GaussRat, Scalar, Var};
use proptest::prelude::*;

fn vars() -> Vec<Var> {
    let u = Var::complex("u");
    let w = Var::complex("w");
    vec![Var::real("x"), Var::real("y"), u.conj(), u, w.conj(), w]
}

fn gauss() -> impl Strategy<Value = GaussRat> {
    (-6i64..=6, 1i64..=4, -6i64..=6, 1i64..=4).prop_map(|(a, b, c, d)| GaussRat::frac(a, b) + GaussRat::i() * GaussRat::frac(c, d))
}

fn monomial() -> impl Strategy<Value = Scalar> {
    prop::collection::vec(0u32..3, 6).prop_map(|exps| {
        vars().into_iter().zip(exps).fold(Scalar::one(), |acc, (v, e)| acc.mul_ref(&Scalar::var(v).pow(e)))
    })
}

fn scalar() -> impl Strategy<Value = Scalar> {
    prop::collection::vec((gauss(), monomial()), 0..5)
        .prop_map(|terms| terms.into_iter().fold(Scalar::zero(), |acc, (c, m)| acc + m.scale(&c)))
}

const F: Frame = Frame::Complex(2);

fn form_of_degree(k: usize) -> impl Strategy<Value = Form> {
    let basis = F.basis(k);
    prop::collection::vec((0..basis.len(), scalar()), 0..4).prop_map(move |terms| {
        let mut f = Form::zero(F);
        for (i, c) in terms {
            f.add_term(basis[i], &c);
        }
        f
    })
}

fn any_form() -> impl Strategy<Value = Form> {
    prop::collection::vec((0u32..16, scalar()), 0..5).prop_map(|terms| {
        let mut f = Form::zero(F);
        for (m, c) in terms {
            f.add_term(m, &c);
        }
        f
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn scalar_ring_identities(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert!((&a - &a).is_zero());
        prop_assert!((&a * &a.conj()).is_real());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn wedge_is_associative(a in any_form(), b in any_form(), c in any_form()) {
        prop_assert_eq!(a.wedge(&b).wedge(&c), a.wedge(&b.wedge(&c)));
    }

    #[test]
    fn wedge_is_graded_commutative(
        (p, q, a, b) in (0usize..=4, 0usize..=4).prop_flat_map(|(p, q)| (Just(p), Just(q), form_of_degree(p), form_of_degree(q)))
    ) {
        let sign = if p * q % 2 == 0 { 1 } else { -1 };
        prop_assert_eq!(a.wedge(&b), b.wedge(&a).scale_const(&GaussRat::int(sign)));
    }

    #[test]
    fn conjugation_is_an_involutive_homomorphism(a in any_form(), b in any_form()) {
        prop_assert_eq!(a.conjugate().conjugate(), a.clone());
        prop_assert_eq!(a.wedge(&b).conjugate(), a.conjugate().wedge(&b.conjugate()));
        prop_assert!(a.add(&a.conjugate()).is_real());
    }

    #[test]
    fn bidegree_projections_sum_to_form(a in any_form()) {
        let mut sum = Form::zero(F);
        for p in 0..=2 {
            for q in 0..=2 {
                sum = sum.add(&a.project_bidegree(Bidegree::new(p, q)));
            }
        }
        prop_assert_eq!(sum, a);
    }
}

#[test]
fn wedge_examples() {
    let p1 = Form::phi(F, &[1], Scalar::one());
    let q1 = Form::phi(F, &[-1], Scalar::one());
    assert!(p1.wedge(&p1).is_zero());
    assert_eq!(p1.wedge(&q1), q1.wedge(&p1).neg());
    let w = Form::phi(F, &[1, 2], Scalar::one()).wedge(&Form::phi(F, &[-1, -2], Scalar::one()));
    assert_eq!(w.coefficient(0b1111), Scalar::one());
    let f = Frame::Complex(3);
    assert!(Form::phi(f, &[1], Scalar::one()).try_wedge(&p1).is_err());
}

#[test]
fn conjugation_examples() {
    let f = Frame::Complex(3);
    assert_eq!(Form::phi(f, &[1], Scalar::one()).conjugate(), Form::phi(f, &[-1], Scalar::one()));
    let ir2 = Scalar::i().mul_ref(&Scalar::real_var("r2"));
    let w = Form::phi(f, &[1, -1], ir2);
    assert_eq!(w.conjugate(), w);
    let u = Scalar::complex_var("u");
    let x = Form::phi(f, &[1, -2], u.clone());
    assert_eq!(x.conjugate(), Form::phi(f, &[2, -1], -u.conj()));
}

#[test]
fn projection_examples() {
    let a = Form::phi(F, &[1, 2], Scalar::one()).add(&Form::phi(F, &[1, -1], Scalar::one()));
    assert_eq!(a.project_bidegree(Bidegree::new(1, 1)), Form::phi(F, &[1, -1], Scalar::one()));
    let h3 = load_catalog("h3_Jplus").unwrap();
    let d3 = h3.d(&Form::phi(h3.frame(), &[3], Scalar::one()));
    assert!(d3.project_bidegree(Bidegree::new(0, 2)).is_zero());
}

#[test]
fn contraction_of_low_degrees_vanishes() {
    let r = 4;
    let pi: Vec<Vec<Scalar>> = (0..r)
        .map(|i| (0..r).map(|j| Scalar::int(i as i64 - j as i64)).collect())
        .collect();
    assert!(Form::one(F).contract_bivector(&pi).unwrap().is_zero());
    assert!(Form::phi(F, &[1], Scalar::one()).add(&Form::phi(F, &[-2], Scalar::int(3))).contract_bivector(&pi).unwrap().is_zero());
    // ½πᵃᵇ ι_a ι_b e^{ab} = −π^{ab}.
    let e = Form::monomial(F, 0b0101, Scalar::one());
    assert_eq!(e.contract_bivector(&pi).unwrap(), Form::scalar(F, Scalar::int(2)));
}

#[test]
fn top_coefficient_examples() {
    let f = Frame::Complex(3);
    let omega = parse_form("i*phi1^cphi1 + i*phi2^cphi2 + i*phi3^cphi3", &Context::with_frame(f)).unwrap();
    // φ^{11̄22̄33̄} reorders to φ^{1231̄2̄3̄} with sign −1, so ω³/3! = i³·(−1) = i.
    let vol = omega.power(3).scale_const(&GaussRat::frac(1, 6));
    assert_eq!(vol.top_coefficient().unwrap(), Scalar::i());
    assert!(Form::zero(f).top_coefficient().unwrap().is_zero());
    assert!(omega.top_coefficient().is_err());
}

#[test]
fn evaluate_params_examples() {
    let nak = load_catalog("nakamura").unwrap();
    let at: BTreeMap<String, GaussRat> = [("t".to_string(), GaussRat::frac(1, 2))].into();
    let d2 = nak.evaluate_form(&nak.d(&Form::phi(nak.frame(), &[2], Scalar::one())), &at).unwrap();
    let ctx = Context::with_frame(nak.frame());
    assert_eq!(d2, parse_form("-phi1^phi2 + 1/2*phi2^cphi1", &ctx).unwrap());
    let f = nak.d(&Form::phi(nak.frame(), &[2], Scalar::one()));
    assert_eq!(nak.evaluate_form(&f, &BTreeMap::new()).unwrap(), f);

    let c1 = load_catalog("class1").unwrap();
    let at: BTreeMap<String, GaussRat> = [("A".to_string(), GaussRat::i())].into();
    let d1 = c1.evaluate(&at).unwrap().d(&Form::phi(c1.frame(), &[1], Scalar::one()));
    assert_eq!(d1, parse_form("i*phi1^phi3 + i*phi1^cphi3", &ctx).unwrap());
    let bad: BTreeMap<String, GaussRat> = [("A".to_string(), GaussRat::int(2))].into();
    assert!(c1.evaluate(&bad).is_err());
}
