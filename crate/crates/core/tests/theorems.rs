use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use upl_core::analysis::{
    check_regularity, check_weak_monotonicity, find_compatible_cutoffs, pseudo_revenues,
    pseudo_revenues_single_peaked, route_cutoffs, CutoffVector, RevenueCurves, Route,
};
use upl_core::duality::{flow_pseudo_revenues, initial_flow, verify_certificate, virtual_values};
use upl_core::generate;
use upl_core::ironing::{iron_instance, reroute};
use upl_core::lp::optimal_mechanism;
use upl_core::model::{revenue, Node};
use upl_core::pricing::{price_allocation, upgrade_allocation};

#[test]
fn regularity_matches_single_peaked_pseudo_revenues() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..300 {
        let (n, d) = (rng.gen_range(1..=5), rng.gen_range(1..=3));
        let inst = generate::instance(&mut rng, n, d);
        let cutoffs = CutoffVector::new((0..d).map(|_| rng.gen_range(0..n)).collect());
        let direct = check_regularity(&inst, &cutoffs).unwrap().is_none();
        let mut nonneg_tail = true;
        for r in pseudo_revenues(&inst) {
            nonneg_tail &= !r[n - 1].is_negative();
        }
        assert_eq!(
            direct,
            nonneg_tail && pseudo_revenues_single_peaked(&inst, &cutoffs)
        );
    }
}

#[test]
fn regular_route_certifies_with_the_initial_flow() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let mut checked = 0;
    while checked < 80 {
        let (n, d) = (rng.gen_range(1..=5), rng.gen_range(1..=3));
        let inst = generate::instance(&mut rng, n, d);
        let Some(cutoffs) = find_compatible_cutoffs(&inst, Route::Regular) else {
            continue;
        };
        checked += 1;
        assert_eq!(check_weak_monotonicity(&inst, &cutoffs), Ok(None));
        let m = price_allocation(&inst, &upgrade_allocation(&inst, &cutoffs)).unwrap();
        assert!(verify_certificate(&inst, &m, &initial_flow(&inst)).holds());
        assert_eq!(optimal_mechanism(&inst).0, revenue(&inst, &m));
    }
}

#[test]
fn ironing_invariants_on_mostly_regular_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let (mut checked, mut ironed) = (0, 0);
    while checked < 150 || ironed < 20 {
        let (n, d) = (rng.gen_range(2..=5), rng.gen_range(1..=3));
        let inst = generate::mrs_instance(&mut rng, n, d);
        let Some(cutoffs) = route_cutoffs(&inst, Route::MostlyRegular) else {
            continue;
        };
        checked += 1;
        let curves = RevenueCurves::new(&inst);
        let (kappa, flow, trace) = iron_instance(&inst, &cutoffs).unwrap();
        if trace.gammas().iter().any(|g| !g.is_one()) {
            ironed += 1;
        }

        let mut before = initial_flow(&inst);
        for step in &trace.steps {
            let i = step.type_index;
            assert!(step.flow.is_non_negative() && step.flow.is_feasible(&inst));
            assert!(!step.gamma.is_negative() && step.gamma <= One::one());
            let (old, new) = (
                flow_pseudo_revenues(&inst, &before),
                flow_pseudo_revenues(&inst, &step.flow),
            );
            for r in (0..n).filter(|&r| r != i) {
                assert_eq!(old[r], new[r], "row {r} moved at iteration {i}");
            }
            let lower = if i == 0 {
                Node::Sink
            } else {
                Node::Type(i - 1)
            };
            assert_eq!(&step.flow.outflow(i), step.flow.get(i, lower));
            assert!(step.flow.get(i, lower) >= inst.prob(i));
            if !step.gamma.is_one() {
                let k = step.item;
                let at_zero =
                    &flow_pseudo_revenues(&inst, &reroute(&before, i, &Zero::zero()))[i][k];
                let at_one = &old[i][k];
                assert!(at_zero >= &curves.closure[k][i] && &curves.closure[k][i] >= at_one);
            }
            before = step.flow.clone();
        }

        let revenues = flow_pseudo_revenues(&inst, &flow);
        for (i, k) in trace.items().into_iter().enumerate() {
            assert!(k == kappa.get(i) || (kappa.is_tied(i) && k == kappa.get(i) + 1));
            assert_eq!(revenues[i][k], curves.closure[k][i]);
        }
        assert!(flow.is_downward());

        let phi = virtual_values(&inst, &flow);
        let c = cutoffs.as_slice();
        for i in 0..n {
            if i < c[0] {
                assert!(phi[i].iter().all(|v| !v.is_positive()));
            }
            if i >= c[d - 1] {
                assert!(!phi[i][d - 1].is_negative());
            }
            for k in 0..d - 1 {
                if c[k] <= i && i < c[k + 1] {
                    assert!(!phi[i][k].is_negative() && !phi[i][k + 1].is_positive());
                }
            }
        }

        let m = price_allocation(&inst, &upgrade_allocation(&inst, &cutoffs)).unwrap();
        assert!(verify_certificate(&inst, &m, &flow).holds());
        assert_eq!(optimal_mechanism(&inst).0, revenue(&inst, &m));
    }
}
