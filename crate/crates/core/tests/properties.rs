//! Property suites for the measurement, metrics and projection invariants.

use proptest::prelude::*;

use wattrace_core::measurement::{
    aggregate_scenario, instantaneous_power, parse_trace, trial_summary, write_trace, ColumnMapping,
    PowerSample, TrialSummary, TrialTrace,
};
use wattrace_core::metrics::{message_total_energy, CurvePoint, PerMessageCurve};
use wattrace_core::projection::{
    annual_total, e_messages_class, Fleet, HardwareClass, RateProfile, SECONDS_PER_DAY,
};
use wattrace_core::units::{Quantity, Unit};

fn sample_strategy() -> impl Strategy<Value = PowerSample> {
    (0.1f64..10.0, 0.0f64..5.0).prop_map(|(volts, amps)| PowerSample { t_s: 0.0, volts, amps })
}

fn trace_strategy() -> impl Strategy<Value = TrialTrace> {
    prop::collection::vec(sample_strategy(), 2..50).prop_map(|mut samples| {
        for (i, s) in samples.iter_mut().enumerate() {
            s.t_s = i as f64;
        }
        TrialTrace::new("prop", samples, None).unwrap()
    })
}

fn summaries_strategy() -> impl Strategy<Value = Vec<TrialSummary>> {
    prop::collection::vec(0.1f64..10.0, 1..40).prop_map(|means| {
        means
            .into_iter()
            .map(|m| TrialSummary { mean_power_w: m, duration_s: 1.0, sample_count: 2 })
            .collect()
    })
}

proptest! {
    #[test]
    fn trial_mean_within_sample_extremes(trace in trace_strategy()) {
        let summary = trial_summary(&trace);
        let powers: Vec<f64> = trace.samples().iter().map(instantaneous_power).collect();
        let min = powers.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = powers.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(summary.mean_power_w >= min - 1e-12);
        prop_assert!(summary.mean_power_w <= max + 1e-12);
    }

    #[test]
    fn trace_roundtrips_through_canonical_csv(trace in trace_strategy()) {
        let mut buf = Vec::new();
        write_trace(&mut buf, &trace).unwrap();
        let parsed = parse_trace(buf.as_slice(), &ColumnMapping::default(), "prop", None).unwrap();
        prop_assert_eq!(parsed.samples(), trace.samples());
    }

    #[test]
    fn aggregation_is_permutation_invariant(
        trials in summaries_strategy(),
        seed in any::<u64>(),
    ) {
        let stats = aggregate_scenario("s", &trials).unwrap();
        let mut shuffled = trials.clone();
        // Deterministic Fisher-Yates driven by the seed.
        let mut state = seed | 1;
        for i in (1..shuffled.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let j = (state >> 33) as usize % (i + 1);
            shuffled.swap(i, j);
        }
        let shuffled_stats = aggregate_scenario("s", &shuffled).unwrap();
        prop_assert_eq!(stats, shuffled_stats);
    }

    #[test]
    fn stderr_times_sqrt_n_is_stddev(trials in summaries_strategy()) {
        let stats = aggregate_scenario("s", &trials).unwrap();
        let lhs = stats.stderr_w * (stats.trials as f64).sqrt();
        let scale = stats.stddev_w.abs().max(1e-300);
        prop_assert!((lhs - stats.stddev_w).abs() / scale <= 1e-12);
    }

    #[test]
    fn identical_trials_have_zero_spread(mean in 0.1f64..10.0, k in 1usize..30) {
        let s = TrialSummary { mean_power_w: mean, duration_s: 1.0, sample_count: 2 };
        let stats = aggregate_scenario("s", &vec![s; k]).unwrap();
        prop_assert_eq!(stats.stddev_w, 0.0);
        prop_assert_eq!(stats.mean_power_w, mean);
    }

    #[test]
    fn unit_conversion_round_trips(
        magnitude in 1e-6f64..1e12,
        from_idx in 0usize..5,
        to_idx in 0usize..5,
    ) {
        let units = [Unit::Joule, Unit::WattSecond, Unit::WattHour, Unit::KilowattHour, Unit::TerawattHour];
        let (from, to) = (units[from_idx], units[to_idx]);
        let there = Quantity::new(magnitude, from).convert(to).unwrap();
        let back = there.convert(from).unwrap();
        prop_assert!((back.magnitude - magnitude).abs() / magnitude <= f64::EPSILON);
    }

    #[test]
    fn power_conversion_round_trips(
        magnitude in 1e-6f64..1e9,
        from_idx in 0usize..3,
        to_idx in 0usize..3,
    ) {
        let units = [Unit::Watt, Unit::Milliwatt, Unit::Kilowatt];
        let there = Quantity::new(magnitude, units[from_idx]).convert(units[to_idx]).unwrap();
        let back = there.convert(units[from_idx]).unwrap();
        prop_assert!((back.magnitude - magnitude).abs() / magnitude <= f64::EPSILON);
    }

    #[test]
    fn message_total_energy_is_affine_in_node_count(
        e_issue in 0.0f64..10.0,
        e_proc in 0.0f64..10.0,
        n in 1u64..1000,
    ) {
        let diff = message_total_energy(e_issue, e_proc, n + 1)
            - message_total_energy(e_issue, e_proc, n);
        prop_assert!((diff - e_proc).abs() <= 1e-9);
    }
}

fn curve_strategy() -> impl Strategy<Value = PerMessageCurve> {
    prop::collection::vec((0.1f64..500.0, 1e-5f64..1.0), 1..6).prop_map(|mut raw| {
        raw.sort_by(|a, b| a.0.total_cmp(&b.0));
        raw.dedup_by(|a, b| a.0 == b.0);
        PerMessageCurve::new(
            raw.into_iter()
                .map(|(rate_mps, energy_j)| CurvePoint { rate_mps, energy_j })
                .collect(),
        )
        .unwrap()
    })
}

proptest! {
    #[test]
    fn interpolation_exact_at_knots(curve in curve_strategy()) {
        for p in curve.points() {
            prop_assert_eq!(curve.interpolate(p.rate_mps).unwrap(), p.energy_j);
        }
    }

    #[test]
    fn interpolation_clamps_outside_range(curve in curve_strategy(), rate in 0.001f64..1000.0) {
        let points = curve.points();
        let value = curve.interpolate(rate).unwrap();
        if rate <= points[0].rate_mps {
            prop_assert_eq!(value, points[0].energy_j);
        } else if rate >= points[points.len() - 1].rate_mps {
            prop_assert_eq!(value, points[points.len() - 1].energy_j);
        } else {
            let lo = points.iter().map(|p| p.energy_j).fold(f64::INFINITY, f64::min);
            let hi = points.iter().map(|p| p.energy_j).fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(value >= lo - 1e-15 && value <= hi + 1e-15);
        }
    }

    #[test]
    fn interpolation_monotone_between_monotone_knots(
        rates in prop::collection::vec(1.0f64..400.0, 2..5),
        probe in 0.0f64..1.0,
    ) {
        let mut rates = rates;
        rates.sort_by(f64::total_cmp);
        rates.dedup();
        prop_assume!(rates.len() >= 2);
        // Decreasing knot energies, like the measured curve.
        let points: Vec<CurvePoint> = rates
            .iter()
            .enumerate()
            .map(|(i, &r)| CurvePoint { rate_mps: r, energy_j: 1.0 / (i + 1) as f64 })
            .collect();
        let curve = PerMessageCurve::new(points).unwrap();
        let lo = rates[0];
        let hi = rates[rates.len() - 1];
        let a = lo + probe * (hi - lo) * 0.5;
        let b = lo + (0.5 + probe * 0.5) * (hi - lo);
        prop_assert!(curve.interpolate(a).unwrap() >= curve.interpolate(b).unwrap() - 1e-15);
    }
}

fn small_fleet_strategy() -> impl Strategy<Value = Fleet> {
    prop::collection::vec(
        (1.0f64..2.0, 0.5f64..5.0, 1u64..20, 1e-4f64..1e-2),
        1..=3,
    )
    .prop_map(|raw| {
        let classes = raw
            .into_iter()
            .enumerate()
            .map(|(i, (pue, p_base, n, energy))| {
                HardwareClass::new(
                    format!("class-{i}"),
                    pue,
                    p_base,
                    n,
                    PerMessageCurve::new(vec![
                        CurvePoint { rate_mps: 10.0, energy_j: energy * 2.0 },
                        CurvePoint { rate_mps: 100.0, energy_j: energy },
                    ])
                    .unwrap(),
                )
                .unwrap()
            })
            .collect();
        Fleet::new(classes).unwrap()
    })
}

fn short_profile_strategy() -> impl Strategy<Value = RateProfile> {
    prop::collection::vec(0.0f64..200.0, 1..=5).prop_map(|rates| RateProfile::new(rates).unwrap())
}

proptest! {
    #[test]
    fn annual_total_matches_nested_loop_oracle(
        fleet in small_fleet_strategy(),
        profile in short_profile_strategy(),
    ) {
        // Direct summation over (class, day) in the same order as the
        // implementation's reductions.
        let mut expected_base = 0.0;
        let mut expected_messages = 0.0;
        for class in fleet.classes() {
            expected_base +=
                class.pue * class.p_base_w * class.node_count as f64 * SECONDS_PER_DAY * 365.0;
            let mut class_messages = 0.0;
            for &rate in profile.daily_rates() {
                if rate == 0.0 {
                    continue;
                }
                let e = class.curve.interpolate(rate).unwrap();
                class_messages += class.node_count as f64 * e * rate * SECONDS_PER_DAY;
            }
            expected_messages += class.pue * class_messages;
        }
        let est = annual_total(&fleet, &profile).unwrap();
        prop_assert_eq!(est.e_base_j, expected_base);
        prop_assert_eq!(est.e_messages_j, expected_messages);
        prop_assert_eq!(est.total_j, expected_base + expected_messages);
    }

    #[test]
    fn profile_day_order_is_irrelevant(
        fleet in small_fleet_strategy(),
        rates in prop::collection::vec(0.0f64..200.0, 1..=5),
    ) {
        let class = &fleet.classes()[0];
        let forward = e_messages_class(class, &RateProfile::new(rates.clone()).unwrap()).unwrap();
        let mut reversed = rates;
        reversed.reverse();
        let backward = e_messages_class(class, &RateProfile::new(reversed).unwrap()).unwrap();
        let scale = forward.abs().max(1e-300);
        prop_assert!((forward - backward).abs() / scale <= 1e-12);
    }

    #[test]
    fn splitting_a_class_changes_nothing(
        pue in 1.0f64..2.0,
        p_base in 0.5f64..5.0,
        n in 2u64..100,
        profile in short_profile_strategy(),
    ) {
        let curve = || PerMessageCurve::new(vec![
            CurvePoint { rate_mps: 50.0, energy_j: 6.78e-3 },
        ]).unwrap();
        let merged = Fleet::new(vec![
            HardwareClass::new("all", pue, p_base, n, curve()).unwrap(),
        ]).unwrap();
        let split = Fleet::new(vec![
            HardwareClass::new("a", pue, p_base, n / 2, curve()).unwrap(),
            HardwareClass::new("b", pue, p_base, n - n / 2, curve()).unwrap(),
        ]).unwrap();
        let m = annual_total(&merged, &profile).unwrap();
        let s = annual_total(&split, &profile).unwrap();
        prop_assert!((m.total_j - s.total_j).abs() / m.total_j <= 1e-12);
    }

    #[test]
    fn scaling_node_count_scales_total(
        fleet in small_fleet_strategy(),
        profile in short_profile_strategy(),
        factor in 2u64..5,
    ) {
        let scaled = Fleet::new(
            fleet
                .classes()
                .iter()
                .map(|c| {
                    HardwareClass::new(
                        c.name.clone(),
                        c.pue,
                        c.p_base_w,
                        c.node_count * factor,
                        c.curve.clone(),
                    )
                    .unwrap()
                })
                .collect(),
        )
        .unwrap();
        let base = annual_total(&fleet, &profile).unwrap();
        let big = annual_total(&scaled, &profile).unwrap();
        prop_assert!((big.total_j - factor as f64 * base.total_j).abs() / big.total_j <= 1e-12);
    }

    #[test]
    fn raising_a_rate_never_lowers_the_total(
        p_base in 0.5f64..5.0,
        day in 0usize..5,
        bump in 1.0f64..50.0,
    ) {
        // Knots where energy x rate is nondecreasing in rate, like the
        // measured 0.339 / 0.445 / 0.508 W per node at 50/100/200 mps.
        let curve = || PerMessageCurve::new(vec![
            CurvePoint { rate_mps: 50.0, energy_j: 6.78e-3 },
            CurvePoint { rate_mps: 100.0, energy_j: 4.45e-3 },
            CurvePoint { rate_mps: 200.0, energy_j: 2.54e-3 },
        ]).unwrap();
        let fleet = Fleet::new(vec![
            HardwareClass::new("pi", 1.2, p_base, 10, curve()).unwrap(),
        ]).unwrap();
        let mut rates = vec![60.0, 80.0, 100.0, 120.0, 140.0];
        let before = annual_total(&fleet, &RateProfile::new(rates.clone()).unwrap()).unwrap();
        rates[day] += bump;
        let after = annual_total(&fleet, &RateProfile::new(rates).unwrap()).unwrap();
        prop_assert!(after.total_j >= before.total_j - 1e-9);
    }
}
