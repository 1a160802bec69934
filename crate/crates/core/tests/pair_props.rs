use proptest::prelude::*;

use qpair::classify::{classify, dual_signature, model_from_signature, report, FactorKind, FactorSignature};
use qpair::exact::{Quaternion, Rational};
use qpair::pairs::{random_automorphism, sphere_point_from_zeta, Pair, Rotation, Zeta};
use qpair::pencil::{check_points, CP1Point, Complement, Convention, Pencil};
use qpair::selftest::{model_factor, support_points};
use qpair::sheaf::sheaf_signature;

fn pair(max_k: usize) -> impl Strategy<Value = Pair> {
    (1..=max_k).prop_flat_map(|k| {
        (0..=4 * k).prop_flat_map(move |dim| {
            prop::collection::vec(prop::collection::vec(-2i64..=2, 4 * k), dim).prop_map(move |rows| {
                let vectors: Vec<Vec<Rational>> =
                    rows.iter().map(|r| r.iter().map(|&x| Rational::from_int(x)).collect()).collect();
                Pair::from_real_span(k, &vectors)
            })
        })
    })
}

fn unit_quaternion() -> impl Strategy<Value = Quaternion> {
    prop::sample::select(qpair::pairs::automorphism_scalars())
}

fn model() -> impl Strategy<Value = (Pair, FactorSignature)> {
    let kinds = [FactorKind::U, FactorKind::Ustar, FactorKind::V, FactorKind::Vstar, FactorKind::W];
    prop::collection::vec((prop::sample::select(kinds.to_vec()), 0usize..=2, 0usize..6), 1..=3).prop_map(|items| {
        let points = support_points();
        let mut pairs = Vec::new();
        let mut factors = Vec::new();
        for (kind, k, q) in items {
            let k = if kind == FactorKind::W { k + 1 } else { k };
            let q = (kind == FactorKind::W).then(|| &points[q]);
            let (p, f) = model_factor(kind, k, q);
            pairs.push(p);
            factors.push(f);
        }
        (Pair::product_many(&pairs), FactorSignature::new(factors))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn pencil_kernel_matches_intersection(p in pair(3)) {
        let pencil = Pencil::build(&p);
        pencil.reality_check().unwrap();
        for zeta in check_points() {
            let x = CP1Point::from_zeta(&zeta);
            let j = x.sphere_point();
            let fiber = pencil.fiber_kernel_dim(&x);
            prop_assert_eq!(2 * fiber, p.intersection_dim(&j));
            prop_assert_eq!(pencil.rank_at(&x), pencil.rank_at(&x.antipode()));
        }
    }

    #[test]
    fn pair_invariants(p in pair(3), g in unit_quaternion()) {
        prop_assert_eq!(p.validate().unwrap(), p.clone());
        prop_assert_eq!(p.dual().dim(), 4 * p.k() - p.dim());
        prop_assert_eq!(p.dual().dual(), p.clone());
        for zeta in check_points() {
            let j = sphere_point_from_zeta(&zeta);
            let d = p.intersection_dim(&j);
            prop_assert_eq!(d % 2, 0);
            prop_assert_eq!(p.left_multiply(&g).intersection_dim(&j.rotate(&g)), d);
        }
    }

    #[test]
    fn signature_identities(p in pair(2)) {
        let c = classify(&p).unwrap();
        c.sheaf.verify(p.k(), p.dim()).unwrap();
        prop_assert_eq!(c.factors.dims(), (p.k(), p.dim()));
        prop_assert_eq!(c.sheaf.total_degree(), 2 * p.k() as i64);
        let alt = sheaf_signature(&Pencil::build_with(&p, Complement::Reversed, Convention::Standard)).unwrap();
        prop_assert_eq!(alt, c.sheaf);
    }

    #[test]
    fn duality_is_functorial(p in pair(2)) {
        let c = classify(&p).unwrap();
        prop_assert_eq!(classify(&p.dual()).unwrap().factors, dual_signature(&c.factors));
    }

    #[test]
    fn complex_decompose_is_invariant(p in pair(2), seed in 0u64..1000, idx in 0usize..12) {
        let j = sphere_point_from_zeta(&check_points()[idx]);
        let phi = random_automorphism(p.k(), seed);
        let q = p.act(&phi).unwrap();
        let before = p.as_complex_pair(&j).complex_decompose();
        let after = q.as_complex_pair(&j.rotate(phi.scalar())).complex_decompose();
        prop_assert_eq!(before, after);
        prop_assert_eq!(2 * before.0, p.intersection_dim(&j));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn models_round_trip((p, f) in model()) {
        prop_assert_eq!(&classify(&p).unwrap().factors, &f);
        let q = model_from_signature(&f).unwrap();
        prop_assert_eq!(classify(&q).unwrap().factors, f);
    }

    #[test]
    fn product_is_additive((p, f) in model(), (q, g) in model(), r in unit_quaternion()) {
        let rotation = Rotation::new(r).unwrap();
        let plain = classify(&p.product(&q, &Rotation::identity())).unwrap().factors;
        prop_assert_eq!(&plain, &f.union(&g));
        let twisted = classify(&p.product(&q, &rotation)).unwrap().factors;
        prop_assert_eq!(twisted, f.union(&g.rotated(&rotation.quaternion().conj())));
    }

    #[test]
    fn automorphisms_transport_support((p, f) in model(), seed in 0u64..1000) {
        let phi = random_automorphism(p.k(), seed);
        let c = classify(&p.act(&phi).unwrap()).unwrap();
        prop_assert_eq!(c.factors, f.rotated(phi.scalar()));
    }
}

#[test]
fn classification_is_deterministic() {
    let points = support_points();
    let (p, _) = model_factor(FactorKind::W, 2, Some(&points[3]));
    let q = p.product(&qpair::pairs::gen_v(1), &Rotation::identity());
    let a = serde_json::to_string(&report(&classify(&q).unwrap(), None, true)).unwrap();
    let b = serde_json::to_string(&report(&classify(&q).unwrap(), None, true)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn torsion_support_is_exactly_the_rank_drop() {
    let points = support_points();
    for q in &points {
        let (p, _) = model_factor(FactorKind::W, 1, Some(q));
        let pencil = Pencil::build(&p);
        let generic = (0..=4).map(|n| pencil.rank_at(&CP1Point::int(n))).max().unwrap();
        let support = [q.zeta(), q.antipode().zeta()];
        let mut samples: Vec<Zeta> = check_points();
        samples.extend((5..11).map(Zeta::int));
        samples.extend(support.iter().cloned());
        assert_eq!(samples.len(), 20);
        for z in &samples {
            let x = CP1Point::from_zeta(z);
            let on_support = support.iter().any(|s| CP1Point::from_zeta(s) == x);
            assert_eq!(pencil.rank_at(&x) < generic, on_support, "ζ = {z}");
        }
    }
}
