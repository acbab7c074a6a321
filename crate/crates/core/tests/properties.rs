use proptest::prelude::*;
use weil2::numeric::{embed_cyclo, q64, CycloElem, PiField, PiFieldElem, Valuation};
use weil2::series::{exp_poly, KPoly};
use weil2::sigma_nabla::{make_dwork_module, DworkTwist};
use weil2::weyl::{act, rho, weyl_mul, WeylOperator};

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![3u64, 5, 7])
}

fn elem(f: PiField) -> impl Strategy<Value = PiFieldElem> {
    (prop::collection::vec(-6i64..=6, (f.p() - 1) as usize), -2i64..=2).prop_map(move |(c, k)| {
        let mut acc = f.zero();
        for (i, x) in c.iter().enumerate() {
            acc = &acc + &f.from_int(*x).mul_pi_pow(i as i64);
        }
        acc.mul_pi_pow(k)
    })
}

fn operator(f: PiField) -> impl Strategy<Value = WeylOperator> {
    prop::collection::vec(((0usize..=4, 0usize..=4), -3i64..=3, -1i64..=1), 1..=3).prop_map(move |terms| {
        WeylOperator::from_terms(f, terms.into_iter().map(|(ij, c, k)| (ij, f.from_int(c).mul_pi_pow(k))).collect::<Vec<_>>())
    })
}

fn cyclo(p: u64) -> impl Strategy<Value = CycloElem> {
    prop::collection::vec(-9i64..=9, (p - 1) as usize)
        .prop_map(move |c| CycloElem::from_coords(p, c.into_iter().map(Into::into).collect()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn field_axioms((f, a, b, c) in prime().prop_flat_map(|p| {
        let f = PiField::new(p).unwrap();
        (Just(f), elem(f), elem(f), elem(f))
    })) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &f.one(), a);
    }

    #[test]
    fn valuation_is_additive((a, b) in prime().prop_flat_map(|p| {
        let f = PiField::new(p).unwrap();
        (elem(f), elem(f))
    })) {
        let v = (&a * &b).valuation();
        prop_assert_eq!(v, a.valuation() + b.valuation());
        let s = (&a + &b).valuation();
        prop_assert!(s >= a.valuation().min(b.valuation()));
    }

    #[test]
    fn embedding_is_a_ring_map((p, x, y) in prime().prop_flat_map(|p| (Just(p), cyclo(p), cyclo(p)))) {
        let m = q64(12, 1);
        let ex = embed_cyclo(&x, m).unwrap();
        let ey = embed_cyclo(&y, m).unwrap();
        let prod = embed_cyclo(&(&x * &y), m).unwrap();
        let sum = embed_cyclo(&(&x + &y), m).unwrap();
        prop_assert!(prod.discrepancy(&ex.mul(&ey)) >= Valuation::Finite(m - q64(2, 1)), "p = {}", p);
        prop_assert!(sum.discrepancy(&ex.add(&ey)) >= Valuation::Finite(m));
    }

    #[test]
    fn exp_is_additive((f, g, h) in prime().prop_flat_map(|p| {
        let f = PiField::new(p).unwrap();
        (Just(f), prop::collection::vec(-3i64..=3, 1..=3), prop::collection::vec(-3i64..=3, 1..=3))
    })) {
        let pf = |c: &[i64]| {
            let mut v = vec![0];
            v.extend_from_slice(c);
            KPoly::from_ints(f, &v).scale(&f.pi())
        };
        let (a, b) = (pf(&g), pf(&h));
        let n = 25;
        let lhs = exp_poly(&a.add(&b), n).unwrap();
        let rhs = exp_poly(&a, n).unwrap().mul(&exp_poly(&b, n).unwrap()).unwrap();
        for i in 0..=n {
            prop_assert_eq!(lhs.coeff(i), rhs.coeff(i));
        }
    }

    #[test]
    fn weyl_product_is_associative((a, b, c) in prime().prop_flat_map(|p| {
        let f = PiField::new(p).unwrap();
        (operator(f), operator(f), operator(f))
    })) {
        prop_assert_eq!(weyl_mul(&weyl_mul(&a, &b), &c), weyl_mul(&a, &weyl_mul(&b, &c)));
    }

    #[test]
    fn fourier_automorphism_is_multiplicative((a, b) in prime().prop_flat_map(|p| {
        let f = PiField::new(p).unwrap();
        (operator(f), operator(f))
    })) {
        prop_assert_eq!(rho(&weyl_mul(&a, &b)), weyl_mul(&rho(&a), &rho(&b)));
        prop_assert_eq!(rho(&rho(&a)), a.sign_substitution());
    }

    #[test]
    fn action_is_a_module_action((f, a, b, twist, v) in prime().prop_flat_map(|p| {
        let f = PiField::new(p).unwrap();
        (Just(f), operator(f), operator(f), prop::collection::vec(-2i64..=2, 2..=4), prop::collection::vec(-3i64..=3, 1..=4))
    })) {
        let mut t = twist.clone();
        t.insert(0, 0);
        let m = make_dwork_module(f, &DworkTwist::new(&t), f.p(), 4).unwrap();
        let v = vec![KPoly::from_ints(f, &v)];
        prop_assert_eq!(act(&weyl_mul(&a, &b), &m, &v), act(&a, &m, &act(&b, &m, &v)));
    }
}
