use msopt_core::graph::MatchingMode;
use msopt_core::io::{generate_instance, oracle_report, parse_instance, solve_report, Problem, SolveOptions};
use msopt_core::schedule::Mode;
use proptest::prelude::*;

fn problem() -> impl Strategy<Value = Problem> {
    prop::sample::select(Problem::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn files_round_trip(p in problem(), n in 2usize..6, t in 1usize..4, seed: u64, vol in 0.0f64..1.0) {
        let f = generate_instance(p, n, t, seed, vol);
        let text = f.to_json();
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(back.to_json(), text);
    }

    #[test]
    fn reports_are_consistent(
        p in problem(),
        n in 2usize..5,
        t in 1usize..4,
        seed: u64,
        derandomized: bool,
    ) {
        let f = generate_instance(p, n, t, seed, 0.5);
        let opts = SolveOptions {
            mode: if derandomized { Mode::Derandomized } else { Mode::Fixed },
            matching: MatchingMode::Blossom,
            with_oracle: true,
            lp: Default::default(),
        };
        let r = solve_report(&f, &opts).unwrap();
        let parts = r.breakdown.step + r.breakdown.penalty + r.breakdown.transition;
        prop_assert!((r.cost - parts).abs() <= 1e-9 * (1.0 + r.cost));
        prop_assert_eq!(r.decisions.len(), t);
        let opt = r.oracle_cost.unwrap();
        prop_assert!(opt <= r.cost + 1e-6 * (1.0 + opt));
        if let Some(lp) = r.lp_value {
            prop_assert!(lp <= opt + 1e-6 * (1.0 + opt));
        }
        if let (Some(b), Some(q)) = (r.bound, r.ratio_vs_oracle) {
            prop_assert!(q <= b + 1e-6);
        }
        let o = oracle_report(&f).unwrap();
        prop_assert!((o.cost - opt).abs() <= 1e-9 * (1.0 + opt));
    }

    #[test]
    fn solving_is_deterministic(p in problem(), seed: u64) {
        let f = generate_instance(p, 4, 2, seed, 0.25);
        let opts = SolveOptions { mode: Mode::Derandomized, ..Default::default() };
        let a = solve_report(&f, &opts).unwrap();
        let b = solve_report(&f, &opts).unwrap();
        prop_assert_eq!(a.decisions, b.decisions);
        prop_assert_eq!(a.cost.to_bits(), b.cost.to_bits());
    }
}
