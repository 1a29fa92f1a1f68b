use invarforms::cohomology::*;
use invarforms::structures::{catalog_names, load_catalog, load_instance};
use invarforms::{AlgebraSpec, Bidegree, Form, Frame, GaussRat, Scalar};

// Brute-force oracle: masks enumerated by hand, ranks by plain elimination.

fn masks(frame: Frame, p: i64, q: i64) -> Vec<u32> {
    let n = frame.complex_rank().unwrap() as u32;
    if p < 0 || q < 0 {
        return Vec::new();
    }
    (0u32..1 << (2 * n))
        .filter(|m| (m & ((1 << n) - 1)).count_ones() as i64 == p && (m >> n).count_ones() as i64 == q)
        .collect()
}

fn column(f: &Form, target: &[u32]) -> Vec<GaussRat> {
    target.iter().map(|&m| f.coefficient(m).as_constant().expect("constant")).collect()
}

fn piece(spec: &AlgebraSpec, f: &Form, dp: i64, dq: i64) -> Form {
    let frame = spec.frame();
    let mut out = Form::zero(frame);
    for (m, c) in f.terms() {
        let bd = frame.bidegree_of(m);
        let d = spec.d(&Form::monomial(frame, m, c.clone()));
        out = out.add(&d.project_bidegree(Bidegree::new((bd.p as i64 + dp) as usize, (bd.q as i64 + dq) as usize)));
    }
    out
}

fn rank(mut rows: Vec<Vec<GaussRat>>) -> usize {
    let mut r = 0;
    let cols = rows.first().map_or(0, |x| x.len());
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != GaussRat::int(0)) else { continue };
        rows.swap(r, p);
        let inv = GaussRat::int(1) / rows[r][c].clone();
        for i in 0..rows.len() {
            if i != r && rows[i][c] != GaussRat::int(0) {
                let f = rows[i][c].clone() * inv.clone();
                for j in 0..cols {
                    let v = rows[i][j].clone() - f.clone() * rows[r][j].clone();
                    rows[i][j] = v;
                }
            }
        }
        r += 1;
    }
    r
}

/// Columns of the operator as a list of vectors.
fn cols<F: Fn(&Form) -> Form>(spec: &AlgebraSpec, src: &[u32], tgt: &[u32], f: F) -> Vec<Vec<GaussRat>> {
    src.iter().map(|&m| column(&f(&Form::monomial(spec.frame(), m, Scalar::one())), tgt)).collect()
}

fn oracle_bc_aeppli(spec: &AlgebraSpec, p: i64, q: i64) -> (usize, usize) {
    let del = |f: &Form| piece(spec, f, 1, 0);
    let dbar = |f: &Form| piece(spec, f, 0, 1);
    let ddbar = |f: &Form| del(&dbar(f));
    let here = masks(spec.frame(), p, q);
    let mut stacked = Vec::new();
    for &m in &here {
        let f = Form::monomial(spec.frame(), m, Scalar::one());
        let mut v = column(&del(&f), &masks(spec.frame(), p + 1, q));
        v.extend(column(&dbar(&f), &masks(spec.frame(), p, q + 1)));
        stacked.push(v);
    }
    let ker = here.len() - rank(stacked);
    let im = rank(cols(spec, &masks(spec.frame(), p - 1, q - 1), &here, ddbar));
    let bc = ker - im;
    let ker_a = here.len() - rank(cols(spec, &here, &masks(spec.frame(), p + 1, q + 1), ddbar));
    let mut ims = cols(spec, &masks(spec.frame(), p - 1, q), &here, del);
    ims.extend(cols(spec, &masks(spec.frame(), p, q - 1), &here, dbar));
    (bc, ker_a - rank(ims))
}

fn oracle_betti(spec: &AlgebraSpec, k: usize) -> usize {
    let frame = spec.frame();
    let r = frame.rank() as u32;
    let deg = |k: i64| -> Vec<u32> { if k < 0 { vec![] } else { (0u32..1 << r).filter(|m| m.count_ones() as i64 == k).collect() } };
    let d = |f: &Form| spec.d(f);
    let k = k as i64;
    let here = deg(k);
    here.len() - rank(cols(spec, &here, &deg(k + 1), d)) - rank(cols(spec, &deg(k - 1), &here, d))
}

fn theta(spec: &AlgebraSpec, text: &str) -> Form {
    invarforms::algebra::expr::parse_form(text, &spec.context()).unwrap()
}

#[test]
fn torus_hodge_numbers() {
    let s = load_catalog("torus(3)").unwrap();
    let r = cohomology_dims(&s, &Theory::Dolbeault).unwrap();
    let binom = [1, 3, 3, 1];
    for p in 0..=3 {
        for q in 0..=3 {
            assert_eq!(r.bidegree(p, q), Some(binom[p] * binom[q]));
        }
    }
    assert_eq!(r.bidegree(1, 1), Some(9));
    for t in [Theory::BottChern, Theory::Aeppli] {
        assert_eq!(cohomology_dims(&s, &t).unwrap().dims, r.dims);
    }
}

#[test]
fn h3_betti() {
    let s = load_catalog("h3_real").unwrap();
    let r = cohomology_dims(&s, &Theory::DeRham).unwrap();
    assert_eq!(r.degree(1), Some(5));
    let c = load_catalog("h3_Jplus").unwrap();
    assert_eq!(cohomology_dims(&c, &Theory::DeRham).unwrap().degree(1), Some(5));
    let reps = representatives(&s, None, 1).unwrap();
    assert_eq!(reps.len(), 5);
    assert!(reps.iter().all(|f| s.d(f).is_zero()));
}

#[test]
fn morse_novikov_heis3_vanishes() {
    let s = load_catalog("heis3").unwrap();
    let r = cohomology_dims(&s, &Theory::MorseNovikov(theta(&s, "e1"))).unwrap();
    assert_eq!(r.dims, DimTable::Graded(vec![0, 0, 0, 0]));
    let open = theta(&s, "e3");
    assert!(cohomology_dims(&s, &Theory::MorseNovikov(open)).is_err());
}

#[test]
fn morse_novikov_with_zero_theta_is_de_rham() {
    for name in ["h3_Jplus", "h8", "class7", "heis3", "inoue_Spm"] {
        let s = load_instance(name).unwrap();
        let zero = Form::zero(s.frame());
        let mn = cohomology_dims(&s, &Theory::MorseNovikov(zero)).unwrap();
        assert_eq!(mn.dims, cohomology_dims(&s, &Theory::DeRham).unwrap().dims, "{}", name);
    }
}

#[test]
fn betti_numbers_match_oracle() {
    for name in ["h3_Jplus", "h9", "h19minus_Jminus", "class1", "class5", "heis5xR_Jplus", "kodaira_primary", "h8_real"] {
        let s = load_instance(name).unwrap();
        let r = cohomology_dims(&s, &Theory::DeRham).unwrap();
        let mut euler = 0i64;
        for k in 0..=s.frame().rank() {
            let b = r.degree(k).unwrap();
            assert_eq!(b, oracle_betti(&s, k), "{} k={}", name, k);
            euler += if k % 2 == 0 { b as i64 } else { -(b as i64) };
        }
        assert_eq!(euler, 0, "{}", name);
    }
}

#[test]
fn bott_chern_and_aeppli_match_oracle() {
    for name in ["h3_Jplus", "h3_Jminus", "h8", "h19minus_Jplus", "class7", "inoue_SM"] {
        let s = load_instance(name).unwrap();
        let bc = cohomology_dims(&s, &Theory::BottChern).unwrap();
        let a = cohomology_dims(&s, &Theory::Aeppli).unwrap();
        let n = s.frame().complex_rank().unwrap();
        for p in 0..=n {
            for q in 0..=n {
                let (ob, oa) = oracle_bc_aeppli(&s, p as i64, q as i64);
                assert_eq!(bc.bidegree(p, q), Some(ob), "{} bc {},{}", name, p, q);
                assert_eq!(a.bidegree(p, q), Some(oa), "{} a {},{}", name, p, q);
            }
        }
    }
}

#[test]
fn ddbar_lemma() {
    assert!(ddbar_lemma_check(&load_catalog("torus(3)").unwrap()).unwrap().holds);
    for name in ["h3_Jplus", "h3_Jminus", "h8"] {
        let r = ddbar_lemma_check(&load_catalog(name).unwrap()).unwrap();
        assert!(!r.holds, "{}", name);
        assert!(!r.failures().is_empty());
    }
}

#[test]
fn bc_to_dolbeault() {
    assert!(!bc_to_dolbeault_injectivity(&load_catalog("h8").unwrap(), 2, 3).unwrap());
    assert!(bc_to_dolbeault_injectivity(&load_catalog("torus(3)").unwrap(), 2, 3).unwrap());
    // ∂̄(φ^{13 1̄3̄}) = -φ^{12 1̄2̄3̄} while ∂∂̄ vanishes on Λ^{1,2}.
    assert!(!bc_to_dolbeault_injectivity(&load_catalog("h3_Jplus").unwrap(), 2, 3).unwrap());
    assert!(bc_to_dolbeault_injectivity(&load_catalog("h3_Jplus").unwrap(), 0, 0).unwrap());
}

#[test]
fn weak_ddbar() {
    assert!(weak_ddbar_check(&load_catalog("h8").unwrap()).unwrap());
    assert!(weak_ddbar_check(&load_catalog("torus(3)").unwrap()).unwrap());
    // ∂ vanishes on Λ^{1,3}, so only ∂̄-closed α qualify.
    assert!(weak_ddbar_check(&load_catalog("h3_Jminus").unwrap()).unwrap());
}

#[test]
fn delta_values() {
    let t = load_catalog("torus(3)").unwrap();
    for r in delta_all(&t).unwrap() {
        assert_eq!(r.delta, 0);
    }
    assert_eq!(delta_degrees(&load_catalog("h8").unwrap(), 5).unwrap(), 0);
    // b1 = 5, BC (1,0)+(0,1) = 2+2, Aeppli = 3+3.
    let r = delta_report(&load_catalog("h3_Jplus").unwrap(), 1).unwrap();
    assert_eq!((r.bott_chern, r.aeppli, r.betti, r.delta, r.delta_single), (4, 6, 5, 0, 5));
}

#[test]
fn delta_is_nonnegative() {
    for name in catalog_names() {
        let s = load_instance(name).unwrap();
        if !s.frame().is_complex() {
            continue;
        }
        for r in delta_all(&s).unwrap() {
            assert!(r.delta >= 0, "{} k={} {:?}", name, r.k, r);
        }
    }
}

#[test]
fn abelian_structures_kill_top_operators() {
    for name in ["h8", "h9", "h3_Jplus", "heis5xR_Jplus"] {
        let s = load_instance(name).unwrap();
        assert_eq!(s.validate().abelian_j, Some(true));
        let f = s.frame();
        let n = f.complex_rank().unwrap() as i64;
        for m in masks(f, n - 1, n) {
            assert!(piece(&s, &Form::monomial(f, m, Scalar::one()), 1, 0).is_zero(), "{}", name);
        }
        for m in masks(f, n - 2, n - 1) {
            let g = piece(&s, &Form::monomial(f, m, Scalar::one()), 0, 1);
            assert!(piece(&s, &g, 1, 0).is_zero(), "{}", name);
        }
    }
}

#[test]
fn bigraded_needs_complex_constant_spec() {
    assert!(cohomology_dims(&load_catalog("h3_real").unwrap(), &Theory::Dolbeault).is_err());
    assert!(cohomology_dims(&load_catalog("nakamura").unwrap(), &Theory::BottChern).is_err());
    assert!(Theory::from_tag("nope", None).is_err());
    assert_eq!(Theory::from_tag("bottChern", None).unwrap(), Theory::BottChern);
}

#[test]
fn report_rendering() {
    let s = load_catalog("h3_Jplus").unwrap();
    let r = cohomology_dims(&s, &Theory::BottChern).unwrap();
    let json = serde_json::to_string(&r).unwrap();
    assert!(json.starts_with("{\"algebra\":\"h3_Jplus\",\"theory\":\"bottChern\",\"dims\":[["));
    let text = r.to_string();
    assert_eq!(text.lines().count(), 6);
}
