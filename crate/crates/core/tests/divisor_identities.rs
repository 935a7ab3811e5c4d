use ffk_core::bounds::{beta_sp_closed, q_coefficient};
use ffk_core::check::CheckResult;
use ffk_core::divisor_calc::{
    beta_s, beta_s_closed, cusp_independence_check, cusp_suite, g_s, g_s_constraint_check, identity_suite,
    lambda_nu, per_prime_geometric, printed_chain_representative, semipos_check, u_s, u_s_probe, v_divisor,
    v_relation_check, v_s, v_targets,
};
use ffk_core::error::Error;
use ffk_core::fermat_model::{build_config, FermatFiber, FermatLabel, FermatParams};
use ffk_core::rational::{int, rat, Rational};
use num_traits::Signed;

const LIST: [(u64, u64); 8] = [(3, 5), (5, 3), (3, 7), (7, 3), (5, 7), (7, 5), (3, 11), (11, 3)];

/// Identities that cannot hold for this fiber model; see the README.
const KNOWN_UNATTAINABLE: [&str; 3] = ["two_vs_plus_us_square", "canonical_u_s", "beta_graph_vs_closed"];

fn fiber(p: u64, m: u64) -> FermatFiber {
    build_config(FermatParams::derive(p, m).unwrap()).unwrap()
}

fn find<'a>(checks: &'a [CheckResult], name: &str) -> &'a CheckResult {
    checks.iter().find(|c| c.name == name).unwrap_or_else(|| panic!("no check {name}"))
}

#[test]
fn suite_on_the_list() {
    for (p, m) in LIST {
        let f = fiber(p, m);
        let suite = identity_suite(&f, f.cusp(1, 1).unwrap()).unwrap();
        for c in &suite {
            if KNOWN_UNATTAINABLE.contains(&c.name.as_str()) {
                assert!(!c.pass, "({p},{m}) {} unexpectedly holds: {}", c.name, c.detail);
            } else {
                assert!(c.pass, "({p},{m}) {}: {}", c.name, c.detail);
            }
        }
    }
}

#[test]
fn frozen_graph_values() {
    // (p, m, beta from the graph, G_S^2, Q(N,p)); graph values from an
    // independent Python fractions implementation.
    let table: [(u64, u64, Rational, Rational, Rational); 8] = [
        (5, 3, rat(5913, 91), rat(-11, 15), rat(133, 60)),
        (3, 5, rat(4205, 91), rat(-13, 15), rat(407, 180)),
        (7, 3, rat(11511, 95), rat(-5, 7), rat(95, 42)),
        (3, 7, rat(6496, 95), rat(-19, 21), rat(887, 378)),
        (5, 7, rat(141239, 561), rat(-31, 35), rat(2887, 1120)),
        (7, 5, rat(157055, 561), rat(-29, 35), rat(2831, 1120)),
        (3, 11, rat(27907, 248), rat(-31, 33), rat(2399, 990)),
        (11, 3, rat(50463, 248), rat(-23, 33), q_coefficient(33, 11)),
    ];
    for (p, m, beta_graph, g2, q) in table {
        let f = fiber(p, m);
        let c = f.cusp(1, 1).unwrap();
        let g = g_s(&f, c).unwrap();
        assert_eq!(f.config.pair(&g, &g).unwrap(), g2, "({p},{m})");
        assert_eq!(per_prime_geometric(&f, c).unwrap(), q, "({p},{m})");
        match beta_s(&f, c) {
            Err(Error::ContractViolation { detail, .. }) => {
                assert!(detail.contains(&format!("graph {}/{}", beta_graph.numer(), beta_graph.denom())), "{detail}");
            }
            other => panic!("({p},{m}) expected a contract violation, got {other:?}"),
        }
    }
}

#[test]
fn closed_forms_agree() {
    for (p, m) in LIST {
        let params = FermatParams::derive(p, m).unwrap();
        assert_eq!(beta_s_closed(&params), beta_sp_closed(p * m, p));
        assert!(beta_s_closed(&params).is_positive());
    }
    assert_eq!(beta_s_closed(&FermatParams::new(5, 3, 0).unwrap()), rat(4413, 11648));
    let ln = lambda_nu(&FermatParams::new(3, 5, 0).unwrap());
    let x = int(15) * ln.sum();
    assert_eq!(beta_s_closed(&FermatParams::new(3, 5, 0).unwrap()), &x * (&x * rat(90, 91) + int(14)));
}

#[test]
fn u_s_candidates_at_fifteen() {
    let f = fiber(5, 3);
    let probe = u_s_probe(&f, f.cusp(1, 1).unwrap()).unwrap();
    assert_eq!(probe[0].square, rat(-677, 20));
    assert_eq!(probe[0].semipos_min, int(0));
    assert_eq!(probe[0].pair_with_ldelta, Some(int(-1)));
    assert_eq!(probe[1].square, rat(-1069, 20));
    assert_eq!(probe[1].semipos_min, rat(-2, 3));
    assert_eq!(probe[2].square, int(0));
}

#[test]
fn semipositivity_on_ldelta() {
    let (p, m) = (7, 5);
    let f = fiber(p, m);
    let values = semipos_check(&f, f.cusp(2, 3).unwrap()).unwrap();
    let ld = f.id(FermatLabel::ldelta(4)).unwrap();
    assert_eq!(values[ld].1, int(p as i64 - 1));
    assert!(values.iter().all(|(_, v)| !v.is_negative()));
}

#[test]
fn printed_chain_form_fails_beyond_depth_one() {
    let f = fiber(5, 7);
    for r in 1..7u64 {
        let printed = printed_chain_representative(&f, r, 2, 3).unwrap();
        let id = f.id(FermatLabel::chain(r, 2, 3)).unwrap();
        let w = f.config.pairing_vector(&printed).unwrap();
        let holds = w == v_targets(&f, id);
        assert_eq!(holds, r == 1, "r = {r}");
        if r == 1 {
            assert_eq!(printed, v_divisor(&f, id).unwrap());
        } else {
            // Pairing with Fm overshoots by (r - 1)/p.
            assert_eq!(&w[f.fm()] - &v_targets(&f, id)[f.fm()], rat(r as i64 - 1, 5));
        }
    }
}

#[test]
fn cusp_independence_beyond_three() {
    let f = fiber(7, 3);
    let cusps: Vec<_> = [(1, 1), (2, 7), (9, 2), (5, 4), (3, 3)]
        .iter()
        .map(|&(i, k)| f.cusp(i, k).unwrap())
        .collect();
    assert!(cusp_independence_check(&f, &cusps).unwrap().pass);
    for &c in &cusps[1..] {
        let suite = cusp_suite(&f, c).unwrap();
        assert!(find(&suite, "g_s_square").pass);
        assert!(find(&suite, "semipositivity").pass);
        assert!(g_s_constraint_check(&f, c).unwrap().pass);
    }
}

#[test]
fn relation_check_detects_a_wrong_multiplicity() {
    let mut f = fiber(5, 3);
    let id = f.id(FermatLabel::lxyz(1)).unwrap();
    f.config.component_mut(id).unwrap().multiplicity += 1;
    assert!(!v_relation_check(&f).pass);
}

#[test]
fn v_s_satisfies_its_section_relation() {
    let f = fiber(7, 5);
    let c = f.cusp(4, 6).unwrap();
    let vs = v_s(&f, c).unwrap();
    let mut w = f.config.pairing_vector(&vs).unwrap();
    w[c.target] += int(1);
    let two_g_2 = int(f.config.two_g_minus_two());
    for id in 0..f.config.len() {
        assert_eq!(w[id], f.config.a_number(id).unwrap() / &two_g_2);
    }
    assert_eq!(u_s(&f, c).unwrap().get(f.fm()), u_s(&f, f.cusp(1, 1).unwrap()).unwrap().get(f.fm()));
}
