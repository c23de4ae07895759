use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use upl_core::analysis::CutoffVector;
use upl_core::generate;
use upl_core::lp::optimal_mechanism;
use upl_core::model::{chain_order, ic_ir_violations, revenue, Mechanism};
use upl_core::pricing::{
    price_allocation, separate_demand, separate_monopoly_pricing, separate_to_upgrade,
    upgrade_allocation, upgrade_to_separate, SeparateConversion, SeparatePrices,
};

#[test]
fn upgrade_menus_round_trip_through_separate_prices() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..150 {
        let (n, d) = (rng.gen_range(1..=5), rng.gen_range(1..=3));
        let inst = generate::monotone_instance(&mut rng, n, d, true);
        let menu = generate::upgrade_menu(&mut rng, &inst);
        let prices = upgrade_to_separate(&inst, &menu).unwrap();
        match separate_to_upgrade(&inst, &prices) {
            SeparateConversion::Chain(m) => assert_eq!(m, menu.to_mechanism()),
            other => panic!("expected a chain, got {other:?}"),
        }
    }
}

#[test]
fn separate_prices_on_monotone_spaces_give_chains() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..150 {
        let (n, d) = (rng.gen_range(1..=5), rng.gen_range(1..=3));
        let inst = generate::monotone_instance(&mut rng, n, d, false);
        let prices = SeparatePrices(
            (0..d)
                .map(|_| generate::grid_value(&mut rng, 0, 40, 4))
                .collect(),
        );
        assert!(matches!(
            separate_to_upgrade(&inst, &prices),
            SeparateConversion::Chain(_)
        ));
    }
}

#[test]
fn upgrade_allocations_are_chains_for_any_cutoffs() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..150 {
        let (n, d) = (rng.gen_range(1..=6), rng.gen_range(1..=4));
        let inst = generate::instance(&mut rng, n, d);
        let cutoffs = CutoffVector::new((0..d).map(|_| rng.gen_range(0..n)).collect());
        let q = upgrade_allocation(&inst, &cutoffs);
        let order = chain_order(&q).expect("nested bundles");
        for w in order.windows(2) {
            assert!(w[0] <= w[1] || q[w[0]] == q[w[1]]);
        }
    }
}

#[test]
fn optimal_transfers_beat_every_feasible_alternative() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for _ in 0..40 {
        let (n, d) = (rng.gen_range(1..=3), rng.gen_range(1..=2));
        let inst = generate::monotone_instance(&mut rng, n, d, false);
        let cutoffs = CutoffVector::new((0..d).map(|_| rng.gen_range(0..n)).collect());
        let q = upgrade_allocation(&inst, &cutoffs);
        let best = price_allocation(&inst, &q).unwrap();
        assert!(ic_ir_violations(&inst, &best).is_empty());
        let best_revenue = revenue(&inst, &best);
        for _ in 0..200 {
            let t = (0..n)
                .map(|_| generate::grid_value(&mut rng, 0, 20, 4))
                .collect();
            let alt = Mechanism { q: q.clone(), t };
            if ic_ir_violations(&inst, &alt).is_empty() {
                assert!(revenue(&inst, &alt) <= best_revenue);
            }
        }
    }
}

#[test]
fn separate_pricing_is_optimal_when_it_matches_the_lp_allocation() {
    let mut rng = ChaCha8Rng::seed_from_u64(45);
    let mut matched = 0;
    for _ in 0..200 {
        let (n, d) = (rng.gen_range(1..=4), rng.gen_range(1..=2));
        let inst = generate::monotone_instance(&mut rng, n, d, false);
        let separate = separate_monopoly_pricing(&inst);
        let (opt, m) = optimal_mechanism(&inst);
        assert!(separate.revenue <= opt);
        if m.q == separate.mechanism.q {
            matched += 1;
            assert_eq!(separate.revenue, opt);
        }
        assert_eq!(separate_demand(&inst, &separate.prices), separate.mechanism);
    }
    assert!(matched >= 20, "only {matched} instances matched");
}
