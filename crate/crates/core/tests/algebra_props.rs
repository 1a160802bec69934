use proptest::prelude::*;

use qpair::exact::smith::minor_gcd;
use qpair::exact::{
    coprime_basis, smith_form, BinaryForm, GaussianRational as G, Matrix, MatrixG, PolyMatrix, Quaternion, Rational,
};
use qpair::pairs::{sphere_point_from_zeta, Zeta};

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rational::new(n, d))
}

fn gaussian() -> impl Strategy<Value = G> {
    (rational(), rational()).prop_map(|(a, b)| G::new(a, b))
}

fn quaternion() -> impl Strategy<Value = Quaternion> {
    (rational(), rational(), rational(), rational()).prop_map(|(r, i, j, k)| Quaternion::new(r, i, j, k))
}

fn unit_quaternions() -> Vec<Quaternion> {
    let q = |r, i, j, k, d| {
        Quaternion::new(Rational::new(r, d), Rational::new(i, d), Rational::new(j, d), Rational::new(k, d))
    };
    vec![q(1, 0, 0, 0, 1), q(0, 1, 0, 0, 1), q(1, 1, 1, 1, 2), q(3, 4, 0, 0, 5), q(0, 0, 3, 4, 5), q(2, 1, 2, 4, 5)]
}

fn form(max_degree: usize) -> impl Strategy<Value = BinaryForm> {
    prop::collection::vec(gaussian(), 1..=max_degree + 1)
        .prop_filter("nonzero", |c| c.iter().any(|x| !x.is_zero()))
        .prop_map(BinaryForm::new)
}

fn product_of_linears() -> impl Strategy<Value = BinaryForm> {
    prop::collection::vec((-2i64..=2, -2i64..=2, 1usize..=2), 1..=3).prop_map(|roots| {
        roots.into_iter().fold(BinaryForm::one(), |acc, (a, b, e)| {
            acc.mul(&BinaryForm::linear(-G::from_ints(a, b), G::one()).pow(e))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quaternion_ring_laws(a in quaternion(), b in quaternion(), c in quaternion()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!((&a * &b).norm(), &a.norm() * &b.norm());
        prop_assert_eq!((&a * &b).conj(), &b.conj() * &a.conj());
        prop_assert_eq!(a.left_mult_matrix().mul(&b.left_mult_matrix()), (&a * &b).left_mult_matrix());
    }

    #[test]
    fn su2_is_multiplicative(a in quaternion(), b in quaternion()) {
        let m = |x: &Quaternion| -> MatrixG { Matrix::from_rows(x.su2().iter().map(|r| r.to_vec()).collect(), 2) };
        prop_assert_eq!(m(&a).mul(&m(&b)), m(&(&a * &b)));
    }

    #[test]
    fn su2_covers_rotation(z in gaussian(), idx in 0usize..6) {
        let g = &unit_quaternions()[idx];
        let rho = g.su2();
        let w0 = &rho[0][0] + &(&rho[0][1] * &z);
        let w1 = &rho[1][0] + &(&rho[1][1] * &z);
        let moved = match w0.inv() {
            None => Zeta::Infinity,
            Some(inv) => Zeta::Finite(&w1 * &inv),
        };
        let lhs = sphere_point_from_zeta(&moved);
        let rhs = sphere_point_from_zeta(&Zeta::Finite(z)).rotate(g);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn sigma_twist_squares_to_sign(f in form(5)) {
        let twice = f.sigma_twist().sigma_twist();
        let expected = if f.degree() % 2 == 0 { f.clone() } else { f.scale(&-G::one()) };
        prop_assert_eq!(twice, expected);
    }

    #[test]
    fn sigma_twist_is_multiplicative(f in form(3), g in form(3)) {
        prop_assert_eq!(f.mul(&g).sigma_twist(), f.sigma_twist().mul(&g.sigma_twist()));
    }

    #[test]
    fn coprime_basis_factors_inputs(fs in prop::collection::vec(product_of_linears(), 1..=3)) {
        let basis = coprime_basis(&fs);
        for (i, a) in basis.iter().enumerate() {
            for b in &basis[i + 1..] {
                prop_assert!(qpair::exact::gcd_forms(a, b).unwrap().is_constant());
            }
        }
        for f in &fs {
            let mut rest = f.clone();
            for b in &basis {
                let e = b.multiplicity_in(f);
                rest = rest.div_exact(&b.pow(e)).unwrap();
            }
            prop_assert!(rest.is_constant());
        }
    }

    #[test]
    fn homogenize_round_trip(f in form(4)) {
        let (p, e) = f.dehomogenize();
        prop_assert_eq!(BinaryForm::homogenize(&p, e), f);
    }
}

fn small_pencil(n: usize) -> impl Strategy<Value = (MatrixG, MatrixG)> {
    let entries = prop::collection::vec(-2i64..=2, n * n);
    (entries.clone(), entries).prop_map(move |(a, b)| {
        let mk = |v: Vec<i64>| {
            Matrix::from_rows(v.chunks(n).map(|r| r.iter().map(|&x| G::from_int(x)).collect()).collect(), n)
        };
        (mk(a), mk(b))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn smith_form_matches_minor_gcds((a, b) in small_pencil(3)) {
        let m = PolyMatrix::linear(&a, &b);
        let factors = smith_form(&m);
        for w in factors.windows(2) {
            prop_assert!(w[0].divides(&w[1]));
        }
        let mut prod = qpair::exact::Poly::one();
        for (j, f) in factors.iter().enumerate() {
            prod = prod.mul(f);
            prop_assert_eq!(&prod.monic(), &minor_gcd(&m, j + 1));
        }
        if factors.len() < 3 {
            prop_assert!(minor_gcd(&m, factors.len() + 1).is_zero());
        }
    }
}
