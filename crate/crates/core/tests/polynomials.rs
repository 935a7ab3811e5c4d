use ffk_core::numtheory::is_odd_prime;
use ffk_core::polyarith::{
    capital_psi, capital_psi_mod_p, double_root_count, fermat_split_check, psi_diag, psi_diag_mod_p,
    psi_poly, repeated_root_analysis, rho, BiPoly, FpPoly, IntPoly,
};
use num_bigint::BigInt;
use proptest::prelude::*;

fn odd_primes(limit: u64) -> Vec<u64> {
    (3..=limit).filter(|&p| is_odd_prime(p)).collect()
}

/// `(a + b - 1)^p` by repeated multiplication, independent of psi_poly.
fn trinomial_power(p: u64) -> BiPoly {
    let lin = BiPoly::from_terms([((1, 0), 1), ((0, 1), 1), ((0, 0), -1)].map(|(m, c)| (m, BigInt::from(c))));
    (0..p).fold(BiPoly::monomial(1, 0, 0), |acc, _| acc.mul(&lin))
}

#[test]
fn defining_identity_up_to_101() {
    for p in odd_primes(101) {
        let pb = BigInt::from(p);
        let p32 = p as u32;
        let lhs = psi_poly(p).unwrap().scale(&pb).add(&trinomial_power(p));
        let rhs = BiPoly::from_terms([((p32, 0), 1), ((0, p32), 1), ((0, 0), -1)].map(|(m, c)| (m, BigInt::from(c))));
        assert_eq!(lhs, rhs, "p = {p}");
    }
}

#[test]
fn psi_vanishes_at_one_one() {
    let one = BigInt::from(1);
    assert_eq!(psi_poly(5).unwrap().eval(&one, &one), BigInt::from(0));
}

#[test]
fn diagonal_two_paths_agree() {
    for p in odd_primes(61) {
        let direct = psi_diag(p).unwrap();
        assert_eq!(direct, psi_poly(p).unwrap().on_antidiagonal(), "p = {p}");
        assert_eq!(direct.degree(), Some(p as usize - 1));
        assert_eq!(direct.coeff(0), BigInt::from(0));
        assert_eq!(direct.eval(&BigInt::from(1)), BigInt::from(0));
    }
}

#[test]
fn capital_psi_shape() {
    for p in odd_primes(101) {
        let psi = capital_psi(p).unwrap();
        assert_eq!(psi.degree(), Some(p as usize - 3));
        assert_eq!(psi.leading_coeff(), Some(&BigInt::from(1)));
        let rebuilt = &psi * &IntPoly::from_i64(&[0, -1, 1]);
        assert_eq!(rebuilt, psi_diag(p).unwrap());
    }
}

#[test]
fn small_reductions() {
    assert_eq!(FpPoly::reduce(&capital_psi(5).unwrap(), 5), FpPoly::from_i64(5, &[1, -1, 1]));
    // (a+2)^2 (a+4)^2 mod 7, and Psi_7 is monic so the unit is 1.
    let sq = |r: i64| FpPoly::from_i64(7, &[r, 1]).mul(&FpPoly::from_i64(7, &[r, 1]));
    assert_eq!(FpPoly::reduce(&capital_psi(7).unwrap(), 7), sq(2).mul(&sq(4)));
}

#[test]
fn double_root_counts_match_factorization_oracle() {
    // Independently computed by full factorization over F_p.
    let expected: &[(u64, u64)] = &[
        (3, 0), (5, 0), (7, 2), (11, 0), (13, 2), (17, 0), (19, 2), (23, 0), (29, 0),
        (31, 2), (37, 2), (41, 0), (43, 2), (47, 0), (53, 0), (59, 12), (61, 2), (67, 2),
        (71, 0), (73, 2), (79, 8), (83, 6), (89, 0), (97, 2), (101, 0), (103, 2), (107, 0),
        (109, 2),
    ];
    for &(p, s) in expected {
        assert_eq!(double_root_count(p).unwrap(), s, "p = {p}");
    }
    assert_eq!(rho(5, 3).unwrap(), 0);
    assert_eq!(rho(7, 3).unwrap(), 6);
    assert_eq!(rho(7, 5).unwrap(), 10);
}

#[test]
fn witnesses_are_double_roots() {
    for p in odd_primes(109) {
        let r = repeated_root_analysis(p).unwrap();
        let f = capital_psi_mod_p(p).unwrap();
        for &a in &r.roots {
            let lin = FpPoly::new(p, vec![p - a, 1]);
            let sq = lin.mul(&lin);
            assert!(sq.divides(&f), "p = {p}, root {a}");
            assert!(!sq.mul(&lin).divides(&f), "p = {p}, root {a} has multiplicity >= 3");
        }
        assert!(2 * r.s <= p - 3);
    }
}

#[test]
fn modular_route_matches_exact_reduction() {
    for p in odd_primes(200) {
        assert_eq!(psi_diag_mod_p(p).unwrap(), FpPoly::reduce(&psi_diag(p).unwrap(), p), "p = {p}");
    }
}

#[test]
fn large_prime_takes_the_gcd_route() {
    // Above the enumeration limit roots come from equal-degree splitting.
    let r = repeated_root_analysis(1009).unwrap();
    let f = capital_psi_mod_p(1009).unwrap();
    assert_eq!(r.roots.len() as u64, r.s);
    for &a in &r.roots {
        assert_eq!(f.eval(a), 0);
        assert_eq!(f.derivative().eval(a), 0);
    }
}

#[test]
fn splitting_identity_on_the_list() {
    for (p, m) in [(3, 5), (5, 3), (3, 7), (7, 3), (5, 7), (7, 5), (3, 11), (11, 3)] {
        assert!(fermat_split_check(p, m).unwrap(), "({p},{m})");
    }
}

fn fp_poly(p: u64) -> impl Strategy<Value = FpPoly> {
    prop::collection::vec(0..p, 0..8).prop_map(move |c| FpPoly::new(p, c))
}

proptest! {
    #[test]
    fn division_reconstructs(a in fp_poly(13), b in fp_poly(13)) {
        prop_assume!(!b.is_zero());
        let (q, r) = a.div_rem(&b);
        prop_assert_eq!(q.mul(&b).add(&r), a);
        prop_assert!(r.degree() < b.degree() || r.is_zero());
    }

    #[test]
    fn gcd_divides_both(a in fp_poly(11), b in fp_poly(11)) {
        let g = a.gcd(&b);
        prop_assume!(!g.is_zero());
        prop_assert!(g.divides(&a));
        prop_assert!(g.divides(&b));
        prop_assert_eq!(g.leading_coeff(), 1);
    }

    #[test]
    fn int_poly_ring_laws(a in prop::collection::vec(-20i64..20, 0..6),
                          b in prop::collection::vec(-20i64..20, 0..6),
                          c in prop::collection::vec(-20i64..20, 0..6)) {
        let (a, b, c) = (IntPoly::from_i64(&a), IntPoly::from_i64(&b), IntPoly::from_i64(&c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
    }
}
