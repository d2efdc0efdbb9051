use std::f64::consts::PI;

use parrondo::classical::{delta_init, evolve, GameSuite};
use parrondo::crw::{crw_evolve, crw_step, site_marginal, Direction, LgaDensity, ScatterProb};
use parrondo::montecarlo::{estimate_expected_payoff, sample_trajectory, RunConfig};
use parrondo::qlga::{
    born_marginal, q_expected_payoff, standard_init, InitPhase, PhaseOrder, QPotential, QSchedule,
    QState, Qlga, ScatterAngle,
};
use proptest::prelude::*;

/// Binomial pmf of a t-step ±1 walk, indexed by x = 2k - t.
fn binomial_walk(t: u64) -> Vec<(i64, f64)> {
    let mut p = 0.5f64.powi(t as i32);
    let mut out = Vec::with_capacity(t as usize + 1);
    for k in 0..=t {
        out.push((2 * k as i64 - t as i64, p));
        p *= (t - k) as f64 / (k + 1) as f64;
    }
    out
}

#[test]
fn crw_at_one_half_is_the_simple_random_walk() {
    let sp = ScatterProb::symmetric(0.5).unwrap();
    let mut s = LgaDensity::symmetric(0);
    for t in 1..=200u64 {
        s = crw_step(&s, &sp);
        let m = site_marginal(&s);
        let oracle = binomial_walk(t);
        let mut worst = 0.0f64;
        for &(x, p) in &oracle {
            worst = worst.max((m.prob(x) - p).abs());
        }
        let covered: f64 = oracle.iter().map(|&(x, _)| m.prob(x)).sum();
        assert!((covered - m.total_mass()).abs() <= 1e-12);
        assert!(worst <= 1e-12, "t = {t}: {worst}");
    }
}

#[test]
fn crw_mass_on_grid() {
    for k in 0..=10 {
        let sp = ScatterProb::symmetric(k as f64 * 0.1).unwrap();
        let mut s = LgaDensity::delta(0, Direction::Left);
        for _ in 0..300 {
            s = crw_step(&s, &sp);
            assert!((s.total_mass() - 1.0).abs() <= 1e-12);
        }
    }
}

#[test]
fn deterministic_rules_are_bijections_on_basis_states() {
    for p in [0.0, 1.0] {
        let sp = ScatterProb::symmetric(p).unwrap();
        let mut images = std::collections::HashSet::new();
        for x in 0..20 {
            for dir in [Direction::Left, Direction::Right] {
                let out = crw_step(&LgaDensity::delta(x, dir), &sp);
                let mut hits = vec![];
                for y in x - 1..=x + 1 {
                    for d in [Direction::Left, Direction::Right] {
                        let w = out.get(y, d);
                        if w != 0.0 {
                            assert_eq!(w, 1.0);
                            hits.push((y, d));
                        }
                    }
                }
                assert_eq!(hits.len(), 1, "p = {p}, ({x}, {dir:?})");
                assert!(images.insert(hits[0]), "collision at {:?}", hits[0]);
            }
        }
        assert_eq!(images.len(), 40);
    }
}

proptest! {
    #[test]
    fn crw_commutes_with_reflection(p in 0.0f64..=1.0, weights in prop::collection::vec(0.0f64..1.0, 2..12), t in 1u64..30) {
        let total: f64 = weights.iter().sum();
        prop_assume!(total > 0.0);
        let half = weights.len() / 2;
        let left: Vec<f64> = weights[..half].iter().map(|w| w / total).collect();
        let mut right: Vec<f64> = weights[half..2 * half].iter().map(|w| w / total).collect();
        let extra: f64 = weights[2 * half..].iter().map(|w| w / total).sum();
        right[0] += extra;
        let s0 = LgaDensity::from_lanes(-2, left, right, 0).unwrap();
        let sp = ScatterProb::symmetric(p).unwrap();
        let a = crw_evolve(&s0, &sp, t).reflected();
        let b = crw_evolve(&s0.reflected(), &sp, t);
        prop_assert_eq!(a.offset(), b.offset());
        for x in a.offset()..a.offset() + a.len() as i64 {
            for d in [Direction::Left, Direction::Right] {
                prop_assert!((a.get(x, d) - b.get(x, d)).abs() <= 1e-15);
            }
        }
    }
}

fn paper_schedules() -> Vec<QSchedule> {
    let (a, b) = (QPotential::linear_a(), QPotential::ratchet_b());
    vec![
        QSchedule::constant(QPotential::Zero),
        QSchedule::constant(a),
        QSchedule::constant(b),
        QSchedule::from_labels("BAAAA", a, b).unwrap(),
        QSchedule::from_labels("BAAAA", a, b).unwrap().with_start(1),
    ]
}

#[test]
fn qlga_unitarity_over_5000_steps() {
    for order in [PhaseOrder::Pre, PhaseOrder::Post] {
        let q = Qlga::new(ScatterAngle::unbiased(), order);
        for sched in paper_schedules() {
            let (s, _) = q.evolve(&standard_init(), &sched, 5000);
            assert!((s.norm_sqr() - 1.0).abs() <= 1e-12, "{order}: {}", s.norm_sqr());
            // Lightcone: window is exactly [-t, t].
            assert_eq!(s.window(), (-5000, 5000));
        }
    }
}

#[test]
fn qlga_lightcone_is_exact() {
    let q = Qlga::new(ScatterAngle::unbiased(), PhaseOrder::Post);
    let sched = QSchedule::constant(QPotential::ratchet_b());
    let mut s = standard_init();
    for k in 0..60 {
        s = q.step(&s, sched.potential_at(k));
        let t = s.time() as i64;
        for x in s.window().0..=s.window().1 {
            if x.abs() > t + 1 {
                assert_eq!(s.amplitude(x, Direction::Left).norm(), 0.0);
                assert_eq!(s.amplitude(x, Direction::Right).norm(), 0.0);
            }
        }
        assert_eq!(s.amplitude(t + 2, Direction::Right).norm(), 0.0);
    }
}

#[test]
fn constant_shift_leaves_born_marginal_unchanged() {
    for order in PhaseOrder::ALL {
        let q = Qlga::new(ScatterAngle::unbiased(), order);
        for pot in [QPotential::linear_a(), QPotential::ratchet_b()] {
            let shifted = pot.shifted(0.77);
            let (mut a, mut b) = (standard_init(), standard_init());
            for _ in 0..150 {
                a = q.step(&a, &pot);
                b = q.step_shifted(&b, &shifted);
            }
            let (pa, pb) = (born_marginal(&a), born_marginal(&b));
            for (x, p) in pa.iter() {
                assert!((p - pb.prob(x)).abs() <= 1e-14, "{order} x = {x}");
            }
        }
    }
}

#[test]
fn theta_zero_is_ballistic() {
    let q = Qlga::new(ScatterAngle::new(0.0), PhaseOrder::Post);
    let (s, _) = q.evolve(&standard_init(), &QSchedule::constant(QPotential::Zero), 77);
    let m = born_marginal(&s);
    assert!((m.prob(77) - 0.5).abs() <= 1e-15);
    assert!((m.prob(-77) - 0.5).abs() <= 1e-15);
}

#[test]
fn free_unbiased_walk_stays_centred() {
    for init in InitPhase::ALL {
        let q = Qlga::new(ScatterAngle::unbiased(), PhaseOrder::Post);
        let (_, series) = q.evolve(&QState::symmetric_init(init), &QSchedule::constant(QPotential::Zero), 200);
        for (t, m) in series {
            assert!(m.abs() <= 1e-12, "{init} t = {t}: {m}");
        }
    }
}

#[test]
fn pre_and_mid_orders_agree() {
    // The phase is the same for both directions at a site, so it commutes with scattering.
    let sched = paper_schedules().pop().unwrap();
    let (_, pre) = Qlga::new(ScatterAngle::unbiased(), PhaseOrder::Pre).evolve(&standard_init(), &sched, 300);
    let (_, mid) = Qlga::new(ScatterAngle::unbiased(), PhaseOrder::Mid).evolve(&standard_init(), &sched, 300);
    for (a, b) in pre.iter().zip(&mid) {
        assert!((a.1 - b.1).abs() <= 1e-10);
    }
}

#[test]
fn linear_potential_peaks_near_68_at_t100() {
    let q = Qlga::new(ScatterAngle::unbiased(), PhaseOrder::Post);
    let (s, _) = q.evolve(&standard_init(), &QSchedule::constant(QPotential::linear_a()), 100);
    let m = born_marginal(&s);
    let argmax = |range: std::ops::RangeInclusive<i64>| {
        range.max_by(|&x, &y| m.prob(x).total_cmp(&m.prob(y))).unwrap()
    };
    assert_eq!(argmax(-100..=-1), -68);
    assert_eq!(argmax(1..=100), 68);
    assert!(q_expected_payoff(&s).abs() < 10.0);
}

#[test]
fn potential_slope_constant_matches_two_pi_over_5000() {
    assert_eq!(QPotential::DEFAULT_SLOPE, 2.0 * PI / 5000.0);
}

#[test]
fn monte_carlo_is_deterministic_and_parity_preserving() {
    let cfg = RunConfig::new(7, 2000, 101, GameSuite::with_bias(0.005).unwrap(), "AABB".parse().unwrap()).unwrap();
    let a = estimate_expected_payoff(&cfg);
    let b = estimate_expected_payoff(&cfg);
    assert_eq!(a, b);
    for i in 0..200 {
        assert_eq!(sample_trajectory(&cfg, i).rem_euclid(2), 1);
    }
}

#[test]
fn monte_carlo_null_and_aabb_agreement() {
    let fair = GameSuite::with_bias(0.0).unwrap();
    let cfg = RunConfig::new(42, 50_000, 100, fair, "A".parse().unwrap()).unwrap();
    let st = estimate_expected_payoff(&cfg);
    assert!(st.mean.abs() <= 4.0 * st.std_error, "{st:?}");

    let suite = GameSuite::with_bias(0.005).unwrap();
    let sched = "AABB".parse().unwrap();
    let (exact, _) = evolve(&delta_init(0), &suite, &sched, 100);
    let cfg = RunConfig::new(42, 50_000, 100, suite, sched).unwrap();
    let st = estimate_expected_payoff(&cfg);
    assert!((st.mean - exact.expected_payoff()).abs() <= 4.0 * st.std_error, "{st:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn trajectory_parity_matches_steps(seed in any::<u64>(), run in 0u64..1000, steps in 0u64..200, word in "[AB]{1,5}") {
        let cfg = RunConfig::new(seed, 1000, steps, GameSuite::with_bias(0.005).unwrap(), word.parse().unwrap()).unwrap();
        let x = sample_trajectory(&cfg, run);
        prop_assert_eq!((x - steps as i64).rem_euclid(2), 0);
        prop_assert!(x.unsigned_abs() <= steps);
    }
}
