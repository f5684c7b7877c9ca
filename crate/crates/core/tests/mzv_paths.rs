use adelic_mzv::algebra::{enumerate_places, Fq, Place, Poly};
use adelic_mzv::carlitz::{mzv_bound, Index};
use adelic_mzv::cmspl::{cmspl_continued_v, cmspl_direct_v, cmspl_inf, cmspl_v};
use adelic_mzv::mzv::{adelic_scan, zeta_inf_cmspl, zeta_inf_series, zeta_v, Verdict, DEFAULT_BUDGET};
use adelic_mzv::tmodule::{Continuation, TModule};
use adelic_mzv::MathError;
use proptest::prelude::*;

fn poly(f: Fq, c: &[u32]) -> Poly {
    Poly::new(f, c.iter().map(|&x| f.elem(x % f.q())).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rho_is_a_ring_action(q in prop::sample::select(vec![2u32, 3]), s1 in 1u32..3, s2 in 1u32..3,
                            u in prop::collection::vec(0u32..3, 1..3), a in prop::collection::vec(0u32..3, 1..3),
                            b in prop::collection::vec(0u32..3, 1..3), x in prop::collection::vec(0u32..3, 1..3)) {
        let f = Fq::new(q).unwrap();
        let s = Index::new(vec![s1, s2]).unwrap();
        let g = TModule::new(&s, &[poly(f, &u), Poly::x(f)]).unwrap();
        let pa = poly(f, &a);
        let pb = poly(f, &b);
        let pt: Vec<Poly> = (0..g.dim()).map(|k| poly(f, &x).shift(k)).collect();
        let lhs = g.apply_rho_poly(&(&pa * &pb), &pt, None);
        let rhs = g.apply_rho_poly(&pa, &g.apply_rho_poly(&pb, &pt, None), None);
        prop_assert_eq!(&lhs, &rhs);
        let sum = g.apply_rho_poly(&(&pa + &pb), &pt, None);
        let parts: Vec<Poly> = g.apply_rho_poly(&pa, &pt, None).iter().zip(g.apply_rho_poly(&pb, &pt, None)).map(|(x, y)| x + &y).collect();
        prop_assert_eq!(sum, parts);
    }

    #[test]
    fn continued_agrees_with_direct(q in prop::sample::select(vec![2u32, 3]), pi in 0usize..8, s1 in 1u32..4, s2 in 0u32..3,
                                    u1 in prop::collection::vec(0u32..3, 1..3), u2 in prop::collection::vec(0u32..3, 1..3)) {
        let f = Fq::new(q).unwrap();
        let ps = enumerate_places(f, 2);
        let v = &ps[pi % ps.len()];
        let first = v.poly() * &poly(f, &u1);
        let (s, u) = if s2 == 0 {
            (Index::new(vec![s1]).unwrap(), vec![first])
        } else {
            (Index::new(vec![s1, s2]).unwrap(), vec![first, poly(f, &u2)])
        };
        let d = cmspl_direct_v(&s, &u, v, 8).unwrap();
        for c in [Continuation::Minimal, Continuation::Full] {
            let x = cmspl_continued_v(&s, &u, v, 8, c).unwrap();
            prop_assert!(d.agrees_with(&x), "{} vs {}", d, x);
        }
    }
}

#[test]
fn dispatch_and_errors() {
    let f = Fq::new(3).unwrap();
    let th = Place::theta(f);
    let s: Index = "2,1".parse().unwrap();
    assert!(cmspl_v(&s, &[Poly::zero(f), Poly::one(f)], &th, 6).unwrap().is_exact_zero());
    assert!(matches!(
        cmspl_direct_v(&s, &[Poly::one(f), Poly::one(f)], &th, 6),
        Err(MathError::NotInMaximalIdeal { .. })
    ));
    assert!(cmspl_v(&s, &[Poly::one(f)], &th, 6).is_err());
    assert!(matches!(cmspl_inf(&"1".parse().unwrap(), &[Poly::x(f).pow(2)], 4), Err(MathError::Divergent { .. })));
}

#[test]
fn scan_matches_single_place() {
    let f = Fq::new(2).unwrap();
    let s: Index = "4,1".parse().unwrap();
    let rows = adelic_scan(&s, f, 2, 10);
    assert_eq!(rows.len(), 3);
    for r in &rows {
        let one = zeta_v(&s, &r.place, 10).unwrap();
        let got = r.result.as_ref().unwrap();
        assert_eq!(got.value.to_string(), one.value.to_string());
        assert_eq!(got.meets_bound(), Some(true));
    }
    let th = rows[0].result.as_ref().unwrap();
    assert_eq!(th.integral, Verdict::False);
    assert_eq!(th.bound, mzv_bound(&s, &rows[0].place).0);
}

#[test]
fn criterion_forces_integrality() {
    let f = Fq::new(3).unwrap();
    for v in enumerate_places(f, 2) {
        let r = zeta_v(&"3".parse().unwrap(), &v, 6).unwrap();
        assert!(r.criterion);
        assert_eq!(r.integral, Verdict::True);
    }
}

#[test]
fn infinite_place_two_ways() {
    for q in [2u32, 3] {
        let f = Fq::new(q).unwrap();
        for s in ["2,1", "1,2", "3,1,1"] {
            let s: Index = s.parse().unwrap();
            let a = zeta_inf_series(&s, f, 8, DEFAULT_BUDGET).unwrap();
            let b = zeta_inf_cmspl(&s, f, 8).unwrap();
            assert!(a.agrees_with(&b), "q={q} s={s}: {a} vs {b}");
        }
    }
    let f = Fq::new(2).unwrap();
    assert!(matches!(zeta_inf_series(&"1".parse().unwrap(), f, 12, 16), Err(MathError::CostGuard(_))));
}
