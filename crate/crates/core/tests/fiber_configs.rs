use ffk_core::check::all_pass;
use ffk_core::fermat_model::{
    build_config, i_c, transversality_check, FermatFiber, FermatKind, FermatLabel, FermatParams,
};
use ffk_core::fiber_graph::{FiberConfig, QDivisor};
use ffk_core::rational::{int, rat};
use num_traits::Zero;
use proptest::prelude::*;

const LIST: [(u64, u64); 8] = [(3, 5), (5, 3), (3, 7), (7, 3), (5, 7), (7, 5), (3, 11), (11, 3)];

fn fiber(p: u64, m: u64) -> FermatFiber {
    build_config(FermatParams::derive(p, m).unwrap()).unwrap()
}

#[test]
fn every_config_validates() {
    for (p, m) in LIST {
        let f = fiber(p, m);
        let checks = f.full_validation();
        assert!(all_pass(&checks), "({p},{m}): {checks:?}");
        let n = p * m;
        assert_eq!(f.config.two_g_minus_two() as u64, m * m * p * p - 3 * m * p);
        assert_eq!(f.cusps().len() as u64, 3 * n);
    }
}

#[test]
fn census_with_double_roots() {
    let f = fiber(7, 3);
    let c = f.census();
    assert_eq!(c[&FermatKind::Lgamma], 6);
    assert_eq!(c[&FermatKind::LgammaLeaf], 42);
    assert_eq!(c[&FermatKind::Ldelta], 24);
    let f3 = fiber(3, 5);
    assert_eq!(f3.census()[&FermatKind::Ldelta], 0);
    assert_eq!(f3.census()[&FermatKind::Lgamma], 0);
}

#[test]
fn neighbor_weights() {
    let (p, m) = (5, 7);
    let f = fiber(p, m);
    for j in 2..m - 1 {
        assert_eq!(i_c(&f.config, f.id(FermatLabel::chain(j, 2, 3)).unwrap()), 2 * j);
    }
    assert_eq!(i_c(&f.config, f.id(FermatLabel::lxyz(1)).unwrap()), p + p * (m - 1));
    assert_eq!(i_c(&f.config, f.fm()), m * m * p);
}

#[test]
fn neighbor_weight_is_the_complementary_pairing() {
    for (p, m) in [(7, 3), (5, 7)] {
        let f = fiber(p, m);
        let fib = f.config.fiber_divisor();
        for c in f.config.components() {
            let mut rest = fib.clone();
            rest.add_to(c.id, -int(c.multiplicity as i64));
            let single = QDivisor::single(c.id, int(1));
            assert_eq!(f.config.pair(&rest, &single).unwrap(), int(i_c(&f.config, c.id) as i64));
        }
    }
}

#[test]
fn pairing_examples() {
    let f = fiber(5, 3);
    let ld = QDivisor::single(f.id(FermatLabel::ldelta(1)).unwrap(), int(1));
    let fm = QDivisor::single(f.fm(), int(1));
    assert_eq!(f.config.pair(&fm, &ld).unwrap(), int(1));
    let l1 = QDivisor::single(f.id(FermatLabel::chain(1, 1, 1)).unwrap(), int(1));
    assert_eq!(f.config.pair(&l1, &l1).unwrap(), int(-2));
    let s = f.cusp(1, 1).unwrap();
    assert_eq!(f.config.section_pair(s, &l1), int(1));
    assert_eq!(f.config.section_pair(s, &fm), int(0));
    assert_eq!(f.config.section_pair(s, &l1.scaled(&rat(1, 2))), rat(1, 2));
}

#[test]
fn adjunction_numbers() {
    let (p, m) = (5, 3);
    let f = fiber(p, m);
    assert_eq!(f.config.a_number(f.id(FermatLabel::ldelta(2)).unwrap()).unwrap(), int(p as i64 - 2));
    assert_eq!(f.config.a_number(f.id(FermatLabel::chain(1, 1, 1)).unwrap()).unwrap(), int(0));
    assert_eq!(f.config.a_number(f.fm()).unwrap(), int((2 * m * m - 3 * m) as i64));
    let fib = f.config.fiber_divisor();
    assert_eq!(f.config.canonical_pair(&fib).unwrap(), int(f.config.two_g_minus_two()));
    assert!(f.config.canonical_pair(&QDivisor::zero()).unwrap().is_zero());
}

#[test]
fn arithmetic_genus_of_cycles() {
    let f = fiber(7, 5);
    assert_eq!(f.config.p_a_divisor(&f.chain_divisor(3, 4)).unwrap(), int(0));
    let fm = QDivisor::single(f.fm(), int(1));
    assert_eq!(f.config.p_a_divisor(&fm).unwrap(), int(6));
    assert!(f.config.p_a_divisor(&QDivisor::zero()).is_err());
    assert!(f.config.p_a_divisor(&QDivisor::single(f.fm(), int(-1))).is_err());
}

#[test]
fn perturbed_self_intersection_breaks_orthogonality() {
    let mut f = fiber(5, 3);
    let id = f.id(FermatLabel::lxyz(2)).unwrap();
    f.config.component_mut(id).unwrap().self_intersection += 1;
    let orth = f.config.validate().into_iter().find(|c| c.name == "fiber_orthogonality").unwrap();
    assert!(!orth.pass);
    assert_eq!(orth.offending, vec![id]);
}

#[test]
fn zero_genus_on_fm_breaks_adjunction_sum() {
    let mut f = fiber(5, 7);
    f.config.component_mut(0).unwrap().genus = 0;
    let adj = f.config.validate().into_iter().find(|c| c.name == "adjunction_sum").unwrap();
    assert!(!adj.pass);
}

#[test]
fn dropped_adjacency_breaks_transversality() {
    let mut f = fiber(5, 3);
    let ld = f.id(FermatLabel::ldelta(1)).unwrap();
    f.config.remove_intersection(ld, f.fm());
    assert!(!transversality_check(&f.config, &f.params).pass);
    assert!(!all_pass(&f.config.validate()));
}

#[test]
fn json_round_trip() {
    let f = fiber(7, 3);
    let doc = f.config.to_document();
    let text = serde_json::to_string(&doc).unwrap();
    let back: FiberConfig<FermatLabel> = FiberConfig::from_document(serde_json::from_str(&text).unwrap()).unwrap();
    assert_eq!(back.len(), f.config.len());
    for id in 0..back.len() {
        let mut a = back.neighbors(id).to_vec();
        let mut b = f.config.neighbors(id).to_vec();
        a.sort_unstable();
        b.sort_unstable();
        assert_eq!(a, b);
        assert_eq!(back.components()[id], f.config.components()[id]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pairing_is_symmetric_and_bilinear(
        a in prop::collection::vec((0usize..118, -9i64..9, 1i64..6), 0..12),
        b in prop::collection::vec((0usize..118, -9i64..9, 1i64..6), 0..12),
        k in -5i64..5,
    ) {
        let f = fiber(5, 3);
        let da = QDivisor::from_pairs(a.into_iter().map(|(i, n, d)| (i, rat(n, d))));
        let db = QDivisor::from_pairs(b.into_iter().map(|(i, n, d)| (i, rat(n, d))));
        let c = &f.config;
        prop_assert_eq!(c.pair(&da, &db).unwrap(), c.pair(&db, &da).unwrap());
        let mut sum = da.scaled(&int(k));
        sum.axpy(&int(1), &db);
        prop_assert_eq!(
            c.pair(&sum, &db).unwrap(),
            int(k) * c.pair(&da, &db).unwrap() + c.pair(&db, &db).unwrap()
        );
        prop_assert!(c.pair(&c.fiber_divisor(), &da).unwrap().is_zero());
    }
}
