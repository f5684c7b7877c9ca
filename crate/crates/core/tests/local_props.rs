use adelic_mzv::algebra::{enumerate_places, Fq, Place, Poly, RationalK};
use adelic_mzv::local::{InfAdic, VAdic};
use proptest::prelude::*;

fn setup(q: u32, place_idx: usize) -> (Fq, Place) {
    let f = Fq::new(q).unwrap();
    let ps = enumerate_places(f, 2);
    let v = ps[place_idx % ps.len()].clone();
    (f, v)
}

fn poly(f: Fq, c: &[u32]) -> Poly {
    Poly::new(f, c.iter().map(|&x| f.elem(x % f.q())).collect())
}

fn rational(f: Fq, n: &[u32], d: &[u32]) -> Option<RationalK> {
    let den = poly(f, d);
    if den.is_zero() {
        return None;
    }
    Some(RationalK::new(poly(f, n), den).unwrap())
}

fn coeffs() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0u32..4, 0..6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn digits_round_trip(q in prop::sample::select(vec![2u32, 3, 4]), pi in 0usize..8, n in coeffs(), d in coeffs(), prec in 1i64..12) {
        let (f, v) = setup(q, pi);
        let Some(x) = rational(f, &n, &d) else { return Ok(()); };
        let a = VAdic::from_rational(&x, &v, prec);
        let back = VAdic::from_digits(&v, &a.digits(), a.prec());
        prop_assert!(back.agrees_with(&a));
        prop_assert_eq!(back.prec(), a.prec());
    }

    #[test]
    fn operations_are_sound(q in prop::sample::select(vec![2u32, 3]), pi in 0usize..8,
                            n1 in coeffs(), d1 in coeffs(), n2 in coeffs(), d2 in coeffs(), prec in 1i64..10) {
        let (f, v) = setup(q, pi);
        let (Some(x), Some(y)) = (rational(f, &n1, &d1), rational(f, &n2, &d2)) else { return Ok(()); };
        let a = VAdic::from_rational(&x, &v, prec);
        let b = VAdic::from_rational(&y, &v, prec);
        for (got, exact) in [(a.add(&b), &x + &y), (a.sub(&b), &x - &y), (a.mul(&b), &x * &y)] {
            prop_assert!(got.agrees_with(&VAdic::from_rational(&exact, &v, got.prec())));
        }
        if !b.is_zero() {
            let got = a.div(&b).unwrap();
            prop_assert!(got.agrees_with(&VAdic::from_rational(&(&x / &y).unwrap(), &v, got.prec())));
        }
    }

    #[test]
    fn frobenius_scales_precision(q in prop::sample::select(vec![2u32, 3, 4]), pi in 0usize..8, n in coeffs(), d in coeffs(), prec in 1i64..8, i in 1u32..3) {
        let (f, v) = setup(q, pi);
        let Some(x) = rational(f, &n, &d) else { return Ok(()); };
        let a = VAdic::from_rational(&x, &v, prec);
        let qi = (q as i64).pow(i);
        let fr = a.frobenius(i, None);
        prop_assert_eq!(fr.prec(), qi * a.prec());
        if let Ok(o) = a.ord() {
            prop_assert_eq!(fr.ord().unwrap(), qi * o);
        }
    }

    #[test]
    fn ultrametric(q in prop::sample::select(vec![2u32, 3]), pi in 0usize..8, n1 in coeffs(), n2 in coeffs(), d in coeffs()) {
        let (f, v) = setup(q, pi);
        let (Some(x), Some(y)) = (rational(f, &n1, &d), rational(f, &n2, &d)) else { return Ok(()); };
        let a = VAdic::from_rational(&x, &v, 16);
        let b = VAdic::from_rational(&y, &v, 16);
        if let (Ok(oa), Ok(ob)) = (a.ord(), b.ord()) {
            let s = a.add(&b);
            if oa != ob {
                prop_assert_eq!(s.ord().unwrap(), oa.min(ob));
            } else if let Ok(os) = s.ord() {
                prop_assert!(os >= oa);
            }
        }
    }

    #[test]
    fn infinite_place_sound(q in prop::sample::select(vec![2u32, 3]), n1 in coeffs(), d1 in coeffs(), n2 in coeffs(), d2 in coeffs(), prec in 1i64..10) {
        let f = Fq::new(q).unwrap();
        let (Some(x), Some(y)) = (rational(f, &n1, &d1), rational(f, &n2, &d2)) else { return Ok(()); };
        let a = InfAdic::from_rational(&x, prec);
        let b = InfAdic::from_rational(&y, prec);
        let m = a.mul(&b);
        prop_assert!(m.agrees_with(&InfAdic::from_rational(&(&x * &y), m.prec())));
        let s = a.add(&b);
        prop_assert!(s.agrees_with(&InfAdic::from_rational(&(&x + &y), s.prec())));
    }
}

#[test]
fn worked_expansions() {
    let f = Fq::new(2).unwrap();
    let x = RationalK::new(Poly::one(f), Poly::from_ints(f, &[1, 1])).unwrap();
    assert_eq!(InfAdic::from_rational(&x, 3).to_string(), "T^-1+T^-2+O(T^-3)");
    assert_eq!(InfAdic::from_poly(&Poly::from_ints(f, &[0, 0, 1]), 4).top_deg().unwrap(), 2);
    let th = Place::theta(f);
    let y = RationalK::new(Poly::from_ints(f, &[1, 1, 1]), Poly::x(f)).unwrap();
    let a = VAdic::from_rational(&y, &th, 2);
    assert_eq!(a.to_string(), "T^-1+1+T+O(T^2)");
    assert_eq!(a.digits().len(), 3);
    assert!(VAdic::zero(&th, 5).digits().is_empty());
}
