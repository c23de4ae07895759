use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use upl_core::generate;
use upl_core::lp::{build_revenue_lp, optimal_mechanism, solve_lp, LpStatus};
use upl_core::model::{ic_ir_violations, revenue, Instance};
use upl_core::pricing::{price_allocation, separate_demand, SeparatePrices};
use upl_core::rational::{rat, Rational};

/// Best single posted price, by enumerating every observed value.
fn best_posted_price(values: &[Rational], f: &[Rational]) -> Rational {
    values
        .iter()
        .map(|p| {
            let buyers: Rational = values
                .iter()
                .zip(f)
                .filter(|(v, _)| *v >= p)
                .map(|(_, w)| w.clone())
                .sum();
            p * buyers
        })
        .max()
        .expect("at least one value")
}

#[test]
fn single_good_optimum_is_the_best_posted_price() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..60 {
        let n = rng.gen_range(1..=6);
        let inst = generate::monotone_instance(&mut rng, n, 1, false);
        let values: Vec<Rational> = (0..n).map(|i| inst.value(i, 0).clone()).collect();
        let (opt, m) = optimal_mechanism(&inst);
        assert_eq!(opt, best_posted_price(&values, inst.f()));
        let mut tail = Rational::from_integer(1.into());
        let mut best = Rational::from_integer(0.into());
        for i in 0..n {
            best = best.max(&values[i] * &tail);
            tail -= inst.prob(i);
        }
        assert_eq!(opt, best);
        assert!(ic_ir_violations(&inst, &m).is_empty());
    }
}

#[test]
fn optimum_scales_with_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..25 {
        let (n, d) = (rng.gen_range(1..=4), rng.gen_range(1..=2));
        let inst = generate::instance(&mut rng, n, d);
        let c = rat(rng.gen_range(1..=9), rng.gen_range(1..=4));
        let scaled = Instance::new(
            inst.theta()
                .iter()
                .map(|r| r.iter().map(|v| v * &c).collect())
                .collect(),
            inst.f().to_vec(),
        )
        .unwrap();
        assert_eq!(
            optimal_mechanism(&scaled).0,
            optimal_mechanism(&inst).0 * &c
        );
    }
}

#[test]
fn optimum_is_exact_and_dominates_other_mechanisms() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..40 {
        let (n, d) = (rng.gen_range(1..=4), rng.gen_range(1..=3));
        let inst = generate::instance(&mut rng, n, d);
        let lp = build_revenue_lp(&inst);
        assert_eq!(lp.num_variables(), n * d + n);
        assert_eq!(lp.num_constraints(), n * n);
        let solution = solve_lp(&lp);
        assert_eq!(solution.status, LpStatus::Optimal);
        assert!(lp.is_feasible(&solution.x));
        let opt = solution.value.clone().unwrap();
        assert_eq!(lp.objective_value(&solution.x), opt);

        let (value, m) = optimal_mechanism(&inst);
        assert_eq!(value, opt);
        assert_eq!(revenue(&inst, &m), opt);
        assert!(ic_ir_violations(&inst, &m).is_empty());

        let prices = SeparatePrices(
            (0..d)
                .map(|_| generate::grid_value(&mut rng, 0, 20, 4))
                .collect(),
        );
        assert!(revenue(&inst, &separate_demand(&inst, &prices)) <= opt);
        let q = generate::mechanism(&mut rng, n, d).q;
        if let Ok(m) = price_allocation(&inst, &q) {
            assert!(ic_ir_violations(&inst, &m).is_empty());
            assert!(revenue(&inst, &m) <= opt);
        }
    }
}
