use std::collections::BTreeMap;
use std::sync::Arc;

use num::{BigInt, BigRational, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wittkit::exact::{qr, ExpVec, PolyH, QVec, Rational};
use wittkit::gl::GlModule;
use wittkit::module::{AdAlpha, AdmissibleModule, ModVec, ModuleRef, ModuleSpec, Omega, Tensor, WeylQuotient};
use wittkit::weighting::weyl_fiber_check;

fn big(r: &Rational) -> BigRational {
    BigRational::new(r.numer(), r.denom())
}

fn arb_rational() -> impl Strategy<Value = Rational> {
    let small = (-50i64..50, 1i64..20).prop_map(|(n, d)| qr(n, d));
    let wide = (any::<i64>(), 1i64..i64::MAX).prop_map(|(n, d)| qr(n, d));
    prop_oneof![3 => small, 1 => wide]
}

fn arb_poly(dim: usize) -> impl Strategy<Value = PolyH> {
    prop::collection::vec((prop::collection::vec(0i64..4, dim), -9i64..9, 1i64..4), 0..6).prop_map(move |terms| {
        PolyH::from_terms(dim, terms.into_iter().map(|(e, n, d)| (ExpVec::new(&e), qr(n, d)))).unwrap()
    })
}

fn arb_qvec(dim: usize) -> impl Strategy<Value = QVec> {
    prop::collection::vec((-6i64..6, 1i64..4), dim).prop_map(|v| QVec::new(v.into_iter().map(|(n, d)| qr(n, d)).collect()))
}

fn arb_exp(dim: usize, radius: i64) -> impl Strategy<Value = ExpVec> {
    prop::collection::vec(-radius..=radius, dim).prop_map(|v| ExpVec::new(&v))
}

/// Schoolbook product over a map, independent of the library's merge code.
fn naive_mul(a: &PolyH, b: &PolyH) -> BTreeMap<Vec<i64>, BigRational> {
    let mut out: BTreeMap<Vec<i64>, BigRational> = BTreeMap::new();
    for (e1, c1) in a.terms() {
        for (e2, c2) in b.terms() {
            *out.entry(e1.add(e2).entries().to_vec()).or_insert_with(BigRational::zero) += big(c1) * big(c2);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn as_map(p: &PolyH) -> BTreeMap<Vec<i64>, BigRational> {
    p.terms().map(|(e, c)| (e.entries().to_vec(), big(c))).collect()
}

proptest! {
    #[test]
    fn rational_ops_match_big_rationals(a in arb_rational(), b in arb_rational()) {
        prop_assert_eq!(big(&(&a + &b)), big(&a) + big(&b));
        prop_assert_eq!(big(&(&a - &b)), big(&a) - big(&b));
        prop_assert_eq!(big(&(&a * &b)), big(&a) * big(&b));
        if !b.is_zero() {
            prop_assert_eq!(big(&(&a / &b)), big(&a) / big(&b));
        }
        prop_assert_eq!(a.cmp(&b), big(&a).cmp(&big(&b)));
        prop_assert_eq!(big(&a.floor()), big(&a).floor());
    }

    #[test]
    fn rational_from_big_roundtrip(n in any::<i128>(), d in 1i128..i128::MAX) {
        let r = BigRational::new(BigInt::from(n), BigInt::from(d));
        prop_assert_eq!(big(&Rational::new(BigInt::from(n), BigInt::from(d))), r);
    }

    #[test]
    fn poly_product_matches_schoolbook(a in arb_poly(2), b in arb_poly(2)) {
        prop_assert_eq!(as_map(&(&a * &b)), naive_mul(&a, &b));
    }

    #[test]
    fn poly_ring_axioms(a in arb_poly(2), b in arb_poly(2), c in arb_poly(2)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&a * &PolyH::one(2), a);
    }

    #[test]
    fn add_scaled_agrees_with_scale_and_add(a in arb_poly(3), b in arb_poly(3), c in arb_rational()) {
        let mut s = a.clone();
        s.add_scaled(&b, &c);
        prop_assert_eq!(s, &a + &b.scale(&c));
    }

    #[test]
    fn shift_is_a_ring_map_compatible_with_eval(
        a in arb_poly(2), b in arb_poly(2), s in arb_qvec(2), t in arb_qvec(2), x in arb_qvec(2)
    ) {
        let sa = a.shift(&s).unwrap();
        prop_assert_eq!(sa.eval(&x).unwrap(), a.eval(&x.sub(&s)).unwrap());
        prop_assert_eq!(sa.shift(&t).unwrap(), a.shift(&s.add(&t)).unwrap());
        prop_assert_eq!((&a * &b).shift(&s).unwrap(), &sa * &b.shift(&s).unwrap());
    }

    #[test]
    fn pairing_is_bilinear(u in arb_qvec(3), v in arb_qvec(3), w in arb_qvec(3), c in arb_rational()) {
        let lhs = u.add(&v.scale(&c)).pairing(&w).unwrap();
        prop_assert_eq!(lhs, u.pairing(&w).unwrap() + c * v.pairing(&w).unwrap());
    }

    #[test]
    fn exterior_powers_satisfy_gl_relations(d in 1usize..4, k in 0usize..4, seed in any::<u64>()) {
        prop_assume!(k <= d);
        let v = GlModule::exterior_power(d, k).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x: Vec<Rational> = (0..v.dim()).map(|_| qr(rand::Rng::gen_range(&mut rng, -5..5), 1)).collect();
        let sum = |a: Vec<Rational>, b: Vec<Rational>, c: i64| -> Vec<Rational> {
            a.into_iter().zip(b).map(|(p, q)| p + q * Rational::from(c)).collect()
        };
        for (i, j, kk, l) in (0..d).flat_map(|i| (0..d).flat_map(move |j| (0..d).flat_map(move |k| (0..d).map(move |l| (i, j, k, l))))) {
            let lhs = sum(v.act(i, j, &v.act(kk, l, &x)), v.act(kk, l, &v.act(i, j, &x)), -1);
            let mut rhs = vec![Rational::zero(); v.dim()];
            if j == kk {
                rhs = sum(rhs, v.act(i, l, &x), 1);
            }
            if l == i {
                rhs = sum(rhs, v.act(kk, j, &x), -1);
            }
            prop_assert_eq!(lhs, rhs);
        }
        prop_assert_eq!(v.identity_scalar(), Some(Rational::from(k as i64)));
    }
}

fn modules(d: usize) -> Vec<ModuleRef> {
    let lambda = QVec::from_ints(&[2, 3, 5][..d]);
    let alpha = QVec::new([qr(1, 2), qr(-1, 3), qr(2, 5)][..d].to_vec());
    let weyl = ModuleSpec::weyl_uniform(d, &["D", "1"]).weyl_quotient().unwrap().unwrap();
    let weyl: ModuleRef = Arc::new(weyl);
    vec![
        Arc::new(Omega::new(lambda.clone(), qr(1, 1)).unwrap()),
        Arc::new(Omega::new(lambda, qr(-1, 2)).unwrap()),
        Arc::new(AdAlpha::new(alpha, qr(3, 1)).unwrap()),
        weyl.clone(),
        Arc::new(Tensor::new(weyl, GlModule::exterior_power(d, 1).unwrap()).unwrap()),
    ]
}

fn combine(m: &dyn AdmissibleModule, parts: &[(Rational, ModVec)]) -> ModVec {
    parts.iter().fold(m.zero(), |acc, (c, v)| acc.add_scaled(v, c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Bracket and module relations at random operators, against the
    /// defining formulas written out directly.
    #[test]
    fn module_relations_hold(
        d in 1usize..3,
        seed in any::<u64>(),
        (u, w, r, s) in (1usize..3).prop_flat_map(|_| (arb_qvec(2), arb_qvec(2), arb_exp(2, 2), arb_exp(2, 2))),
    ) {
        let pick = |v: &QVec| QVec::new(v.entries()[..d].to_vec());
        let pick_e = |e: &ExpVec| ExpVec::new(&e.entries()[..d]);
        let (u, w, r, s) = (pick(&u), pick(&w), pick_e(&r), pick_e(&s));
        for m in modules(d) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let v = m.sample_vector(&mut rng);
            let dd = m.act_d(&u, &r, &m.act_d(&w, &s, &v).unwrap()).unwrap()
                .sub(&m.act_d(&w, &s, &m.act_d(&u, &r, &v).unwrap()).unwrap()).unwrap();
            let z = w.scale(&u.dot_exp(&s)).sub(&u.scale(&w.dot_exp(&r)));
            prop_assert_eq!(dd, m.act_d(&z, &r.add(&s), &v).unwrap(), "{}", m.describe());
            let dx = m.act_d(&u, &r, &m.act_x(&s, &v).unwrap()).unwrap()
                .sub(&m.act_x(&s, &m.act_d(&u, &r, &v).unwrap()).unwrap()).unwrap();
            prop_assert_eq!(dx, m.act_x(&r.add(&s), &v).unwrap().scale(&u.dot_exp(&s)), "{}", m.describe());
            let xx = m.act_x(&r, &m.act_x(&s, &v).unwrap()).unwrap();
            prop_assert_eq!(xx, m.act_x(&r.add(&s), &v).unwrap(), "{}", m.describe());
            // D(u, r) is linear in u
            let lin = combine(&*m, &[(qr(1, 1), m.act_d(&u, &r, &v).unwrap()), (qr(2, 1), m.act_d(&w, &r, &v).unwrap())]);
            prop_assert_eq!(lin, m.act_d(&u.add(&w.scale(&qr(2, 1))), &r, &v).unwrap());
        }
    }

    #[test]
    fn weyl_fibers_have_product_dimension(
        a in arb_qvec(2),
        n1 in 1usize..3,
        n2 in 1usize..3,
    ) {
        let row = |n: usize, var: &str| -> Vec<String> {
            (1..=n).map(|j| if j == n { "1".to_string() } else { format!("{var} + {j}") }).collect()
        };
        let w = WeylQuotient::new(vec![
            row(n1, "D1").iter().map(|s| wittkit::exact::parse_poly_h(2, s).unwrap()).collect(),
            row(n2, "D2").iter().map(|s| wittkit::exact::parse_poly_h(2, s).unwrap()).collect(),
        ]).unwrap();
        let f = weyl_fiber_check(&w, &a, 1).unwrap();
        prop_assert!(f.relations_vanish);
        prop_assert_eq!(f.from_relations, n1 * n2);
        prop_assert_eq!(f.from_normal_forms, n1 * n2);
    }
}
