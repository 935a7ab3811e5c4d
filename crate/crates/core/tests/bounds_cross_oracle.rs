use ffk_core::bounds::{
    alpha, beta_sp_closed, geometric_contribution, lower_bound, lower_bound_alternate, scan, simple_lower,
    ulp_distance, BoundReport,
};
use ffk_core::divisor_calc::{beta_s_closed, per_prime_geometric};
use ffk_core::fermat_model::{build_config, FermatParams};
use ffk_core::numtheory::{admissible_exponents, factor_odd_squarefree};
use ffk_core::rational::rat;
use num_traits::Signed;

#[test]
fn geometric_coefficients_match_the_graph() {
    for n in [15u64, 21, 33, 35, 55] {
        let geo = geometric_contribution(n).unwrap();
        let primes = factor_odd_squarefree(n).unwrap();
        let phi: u64 = primes.iter().map(|p| p - 1).product();
        for (p, coeff) in geo.terms {
            let f = build_config(FermatParams::derive(p, n / p).unwrap()).unwrap();
            let graph = per_prime_geometric(&f, f.cusp(1, 1).unwrap()).unwrap();
            assert_eq!(coeff, rat(phi as i64, p as i64 - 1) * graph, "N = {n}, p = {p}");
        }
    }
}

#[test]
fn two_beta_closed_forms_agree_widely() {
    for n in admissible_exponents(2000) {
        for p in factor_odd_squarefree(n).unwrap() {
            let m = n / p;
            let params = FermatParams { p, m, s: 0 };
            assert_eq!(beta_s_closed(&params), beta_sp_closed(n, p), "N = {n}, p = {p}");
        }
    }
}

#[test]
fn inequality_and_positivity_up_to_ten_thousand() {
    for r in scan(10_000).unwrap() {
        assert!(r.strict_inequality_holds(), "N = {}", r.n);
        assert!(r.positivity_holds(), "N = {}", r.n);
        assert!(r.lower_bound > 0.0);
    }
}

#[test]
fn evaluation_orders_agree() {
    for n in admissible_exponents(5000) {
        let a = lower_bound(n).unwrap();
        let b = lower_bound_alternate(n).unwrap();
        assert!(ulp_distance(a, b) <= 4, "N = {n}: {a} vs {b}");
        let g = geometric_contribution(n).unwrap();
        assert!(ulp_distance(g.value, g.value_reversed()) <= 4, "N = {n}");
    }
}

#[test]
fn report_for_fifteen() {
    let r = BoundReport::new(15, Some((1.0, 1.0))).unwrap();
    assert_eq!(r.g, 91);
    assert_eq!(r.phi, 8);
    assert_eq!(r.primes.iter().map(|x| x.p).collect::<Vec<_>>(), vec![3, 5]);
    assert_eq!(r.primes[1].beta, rat(4413, 11648));
    assert_eq!(r.primes[0].s, Some(0));
    assert!(r.upper_bound.unwrap().is_finite());
    assert!(r.lower_bound > simple_lower(15).unwrap());
    assert!(alpha(15, 5).is_positive());
    assert!(BoundReport::new(25, None).is_err());
}

#[test]
fn mertens_stays_below_log_for_two_primes() {
    for n in admissible_exponents(3000) {
        let primes = factor_odd_squarefree(n).unwrap();
        if primes.len() == 2 {
            let d = ffk_core::bounds::mertens_diag(n).unwrap();
            assert!(d < (n as f64).ln());
        }
    }
}
