use epl_core::bandit::{
    regret_curve, run_episode, ConfidenceSchedule, GeneralizedLinUcb, LinearBanditEnv, Trajectory,
};
use epl_core::bounds::epl_upper_bound;
use epl_core::rng::derive_seed;

fn reference_run() -> Trajectory {
    let mut env = LinearBanditEnv::random(2, 5, 0.1, 37).unwrap();
    let mut policy = GeneralizedLinUcb::new(2, 1.0, 1.0, ConfidenceSchedule::Constant(1.0)).unwrap();
    run_episode(&mut env, &mut policy, 2000).unwrap()
}

#[test]
fn reference_potential_sum_within_two_sided_bound() {
    let traj = reference_run();
    let ceiling = 2f64.sqrt() * epl_upper_bound(2000, 2, 1.0, 1.0).unwrap();
    assert!((traj.potential_ceiling().unwrap() - ceiling).abs() < 1e-12);
    assert!(traj.potential_sum() <= ceiling, "{} > {ceiling}", traj.potential_sum());
    assert!(traj.bonus_sum() <= traj.bonus_ceiling().unwrap());
}

#[test]
fn reference_regret_is_sublinear() {
    let curve = regret_curve(&reference_run());
    let early = curve[199].1 / 200.0;
    let late = curve[1999].1 / 2000.0;
    assert!(early > 0.0);
    assert!(late < early, "{late} >= {early}");
}

#[test]
fn regret_curve_is_non_decreasing() {
    let curve = regret_curve(&reference_run());
    assert!(curve.windows(2).all(|w| w[1].1 >= w[0].1));
    assert_eq!(curve.len(), 2000);
}

#[test]
fn identical_seeds_identical_csv() {
    let render = |t: &Trajectory| {
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        buf
    };
    assert_eq!(render(&reference_run()), render(&reference_run()));
}

#[test]
fn potential_sum_bound_across_seeds_and_powers() {
    for seed in 0..20u64 {
        for (p, schedule) in [
            (0.5, ConfidenceSchedule::Constant(0.5)),
            (1.0, ConfidenceSchedule::SqrtLog(1.0)),
            (2.0, ConfidenceSchedule::Constant(2.0)),
        ] {
            let mut env = LinearBanditEnv::random(3, 8, 0.5, derive_seed(seed, 3)).unwrap();
            let mut policy = GeneralizedLinUcb::new(3, 1.0, p, schedule).unwrap();
            let traj = run_episode(&mut env, &mut policy, 300).unwrap();
            assert!(traj.potential_sum() <= traj.potential_ceiling().unwrap());
        }
    }
}

#[test]
fn noiseless_regret_is_first_gap_only() {
    let mut env = LinearBanditEnv::new(
        vec![0.0, 1.0],
        vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        0.0,
        1,
    )
    .unwrap();
    let mut policy = GeneralizedLinUcb::new(2, 1.0, 1.0, ConfidenceSchedule::Constant(1.0)).unwrap();
    let traj = run_episode(&mut env, &mut policy, 30).unwrap();
    // equal bonuses at t = 1 resolve to arm 0, which is suboptimal by 1
    assert_eq!(traj.steps[0].arm, 0);
    assert_eq!(traj.steps[0].instant_regret, 1.0);
    assert!(traj.steps[1..].iter().all(|s| s.arm == 1));
    assert_eq!(traj.cumulative_regret(), 1.0);
}
