//! One line per criterion; exits nonzero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use epl_core::bandit::{run_episode, ConfidenceSchedule, GeneralizedLinUcb, LinearBanditEnv, Trajectory};
use epl_core::bounds::{
    epl_empirical_sum, epl_upper_bound, increment_bound_check, lower_bound_sequence,
    lower_bound_value, run_sequence, sandwich_check,
};
use epl_core::linalg::{
    mat_power, random_orthogonal, rank1_update, sym_eig, trace_rotation_check, weyl_check,
};
use epl_core::parallel::map_trials;
use epl_core::rng::{self, derive_seed};
use epl_core::sequences::{generate, SequenceKind};
use epl_core::verifiers::proof_chain_report;
use epl_core::Convention;
use rand::Rng;

const DIMS: [usize; 4] = [1, 2, 4, 8];
const HORIZONS: [usize; 3] = [10, 100, 500];
const RIDGES: [f64; 2] = [1.0, 2.0];
const POWERS: [f64; 4] = [0.5, 1.0, 2.0, 5.0];
const SEEDS: u64 = 50;

struct Sweep {
    bound_violations: usize,
    bound_checks: usize,
    increment_violations: usize,
    increment_checks: usize,
    worst_scalar_gap: f64,
}

fn sweep_configs() -> Vec<(usize, usize, f64, u64)> {
    let mut out = Vec::new();
    for &d in &DIMS {
        for &t in &HORIZONS {
            for &ridge in &RIDGES {
                for seed in 0..SEEDS {
                    out.push((d, t, ridge, seed));
                }
            }
        }
    }
    out
}

// Criteria 1 and 4 share the same accumulator runs.
fn sweep() -> Sweep {
    let configs = sweep_configs();
    let parts = map_trials(configs.len(), |k| {
        let (d, horizon, ridge, seed) = configs[k];
        let seq = generate(&SequenceKind::RandomUnit, d, horizon, derive_seed(seed, (d * 1000 + horizon) as u64))
            .expect("sequence");
        let acc = run_sequence(&seq, ridge, 1.0).expect("run");
        let mut s = Sweep {
            bound_violations: 0,
            bound_checks: 0,
            increment_violations: 0,
            increment_checks: 0,
            worst_scalar_gap: 0.0,
        };
        for &p in &POWERS {
            let sum = acc.norm_sum(p, Convention::Next).expect("sum");
            let bound = epl_upper_bound(horizon, d, ridge, p).expect("bound");
            s.bound_checks += 1;
            if sum > bound + 1e-9 {
                s.bound_violations += 1;
            }
            for t in 1..=horizon {
                let o = increment_bound_check(&acc, t, p).expect("increment");
                s.increment_checks += 1;
                if !o.holds {
                    s.increment_violations += 1;
                }
                if d == 1 {
                    s.worst_scalar_gap = s.worst_scalar_gap.max((o.lhs - o.rhs).abs());
                }
            }
        }
        s
    });
    parts.into_iter().fold(
        Sweep {
            bound_violations: 0,
            bound_checks: 0,
            increment_violations: 0,
            increment_checks: 0,
            worst_scalar_gap: 0.0,
        },
        |a, b| Sweep {
            bound_violations: a.bound_violations + b.bound_violations,
            bound_checks: a.bound_checks + b.bound_checks,
            increment_violations: a.increment_violations + b.increment_violations,
            increment_checks: a.increment_checks + b.increment_checks,
            worst_scalar_gap: a.worst_scalar_gap.max(b.worst_scalar_gap),
        },
    )
}

fn lower_floor() -> (bool, String) {
    let constant = |horizon: usize| -> Vec<Vec<f64>> {
        lower_bound_sequence(horizon).into_iter().map(|x| vec![x]).collect()
    };
    let seq = constant(10_000);
    let main = epl_empirical_sum(&seq, 1.0, 2.0, Convention::Next).unwrap();
    let floor = lower_bound_value(10_000, 1.0, 2.0).unwrap();
    let mut ok = main >= 50.0 && floor == 50.0;
    let mut misses = 0;
    for ridge in [0.5, 1.0, 2.0] {
        for p in [1.5, 2.0, 4.0] {
            let got = epl_empirical_sum(&seq, ridge, p, Convention::Next).unwrap();
            if got < lower_bound_value(10_000, ridge, p).unwrap() {
                misses += 1;
            }
        }
    }
    ok &= misses == 0;
    (ok, format!("sum {main:.6} vs floor {floor:.6}, {misses} misses over 9 (lambda, p) pairs"))
}

fn sandwich() -> (bool, String) {
    let ps = [0.5, 1.0, 2.0, 3.0];
    let fails: usize = map_trials(500, |k| {
        let mut draw = rng::seeded(derive_seed(3, k as u64));
        let d = draw.random_range(1..=6);
        let horizon = draw.random_range(1..=200);
        let ridge = RIDGES[k % 2];
        let p = ps[(k / 2) % 4];
        let seq = generate(&SequenceKind::RandomSubunit, d, horizon, draw.random()).unwrap();
        usize::from(!sandwich_check(&seq, ridge, p).unwrap().holds)
    })
    .into_iter()
    .sum();
    (fails == 0, format!("{fails} violations over 500 sequences"))
}

fn weyl_and_trace() -> (bool, String) {
    const N: usize = 50_000;
    let weyl: usize = map_trials(N, |k| {
        let mut draw = rng::seeded(derive_seed(5, k as u64));
        let d = draw.random_range(1..=8);
        let m = rng::random_spd(&mut draw, d);
        let u = rng::gaussian_vector(&mut draw, d);
        let before = sym_eig(&m).unwrap();
        let after = sym_eig(&rank1_update(&m, &u).unwrap()).unwrap();
        usize::from(!weyl_check(&before, &after).holds)
    })
    .into_iter()
    .sum();
    let trace: usize = map_trials(N, |k| {
        let mut draw = rng::seeded(derive_seed(6, k as u64));
        let d = draw.random_range(1..=6);
        let sorted = |draw: &mut rng::SeededRng| {
            let mut v: Vec<f64> = (0..d).map(|_| draw.random_range(0.01..50.0)).collect();
            v.sort_by(|a, b| b.total_cmp(a));
            v
        };
        let s = sorted(&mut draw);
        let sp = sorted(&mut draw);
        let q = random_orthogonal(d, draw.random());
        let r = random_orthogonal(d, draw.random());
        usize::from(!trace_rotation_check(&s, &sp, &q, &r).unwrap().holds)
    })
    .into_iter()
    .sum();
    (
        weyl + trace == 0,
        format!("{weyl} weyl and {trace} trace failures over {} trials", 2 * N),
    )
}

fn chain() -> (bool, String) {
    let ps = [0.5, 0.8, 1.0, 1.5, 2.0, 5.0];
    let ridges = [0.5, 1.0, 2.0];
    let fails: usize = map_trials(100, |k| {
        let mut draw = rng::seeded(derive_seed(7, k as u64));
        let d = draw.random_range(1..=6);
        let horizon = draw.random_range(1..=300);
        let seq = generate(&SequenceKind::RandomSubunit, d, horizon, draw.random()).unwrap();
        let links = proof_chain_report(&seq, ridges[k % 3], ps[k % 6]).unwrap();
        let passes = links.iter().all(|r| r.pass);
        let ordered = links.windows(2).all(|w| w[0].rhs <= w[1].rhs + 1e-9);
        usize::from(!(passes && ordered))
    })
    .into_iter()
    .sum();
    (fails == 0, format!("{fails} failing configurations over 100"))
}

fn numerics() -> (bool, String) {
    let mut recon: f64 = 0.0;
    let mut algebra: f64 = 0.0;
    let exps = [-2.0, -1.0, -0.5, 0.5, 1.0, 2.0];
    for k in 0..40u64 {
        let mut draw = rng::seeded(derive_seed(8, k));
        let d = 1 + k as usize % 12;
        let m = if k % 2 == 0 {
            rng::random_spd(&mut draw, d)
        } else {
            rng::random_symmetric(&mut draw, d)
        };
        let e = sym_eig(&m).unwrap();
        recon = recon.max(e.reconstruct().max_abs_diff(&m) / m.max_abs().max(1.0));
        if k % 2 == 0 {
            for &a in &exps {
                for &b in &exps {
                    let lhs = mat_power(&e, a + b).unwrap();
                    let rhs = mat_power(&e, a).unwrap().as_matrix().matmul(mat_power(&e, b).unwrap().as_matrix()).unwrap();
                    algebra = algebra.max(lhs.as_matrix().max_abs_diff(&rhs));
                }
            }
        }
    }
    let seq = generate(&SequenceKind::RandomUnit, 8, 1000, 9).unwrap();
    let acc = run_sequence(&seq, 1.0, 1.0).unwrap();
    let rebuilt = acc.rebuild();
    let rel = acc.design_matrix().max_abs_diff(&rebuilt) / rebuilt.max_abs();
    (
        recon <= 1e-10 && algebra <= 1e-8 && rel <= 1e-9,
        format!("reconstruction {recon:.2e}, power algebra {algebra:.2e}, rebuild {rel:.2e}"),
    )
}

fn bandit() -> (bool, String) {
    let run = || -> Trajectory {
        let mut env = LinearBanditEnv::random(2, 5, 0.1, 37).unwrap();
        let mut policy =
            GeneralizedLinUcb::new(2, 1.0, 1.0, ConfidenceSchedule::Constant(1.0)).unwrap();
        run_episode(&mut env, &mut policy, 2000).unwrap()
    };
    let csv = |t: &Trajectory| {
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        buf
    };
    let (a, b) = (run(), run());
    let ceiling = 2f64.sqrt() * epl_upper_bound(2000, 2, 1.0, 1.0).unwrap();
    let identical = csv(&a) == csv(&b);
    (
        a.potential_sum() <= ceiling && identical,
        format!(
            "potential sum {:.6} vs {ceiling:.6}, csv identical {identical}",
            a.potential_sum()
        ),
    )
}

fn main() -> ExitCode {
    let mut all = true;
    let mut report = |n: usize, name: &str, start: Instant, (ok, detail): (bool, String)| {
        all &= ok;
        println!(
            "criterion {n} {name}: {} ({detail}; {:.1}s)",
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    };

    let start = Instant::now();
    let s = sweep();
    let elapsed = start;
    report(
        1,
        "upper bound sweep",
        elapsed,
        (
            s.bound_violations == 0,
            format!("{} violations over {} sums", s.bound_violations, s.bound_checks),
        ),
    );
    report(
        4,
        "per-step increment bound",
        elapsed,
        (
            s.increment_violations == 0 && s.worst_scalar_gap <= 1e-12,
            format!(
                "{} violations over {} steps, worst d=1 gap {:.2e}",
                s.increment_violations, s.increment_checks, s.worst_scalar_gap
            ),
        ),
    );
    report(2, "lower bound floor", Instant::now(), lower_floor());
    report(3, "sandwich", Instant::now(), sandwich());
    report(5, "weyl and trace", Instant::now(), weyl_and_trace());
    report(6, "proof chain", Instant::now(), chain());
    report(7, "numerical core", Instant::now(), numerics());
    report(8, "bandit harness", Instant::now(), bandit());

    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
