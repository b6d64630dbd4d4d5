//! Small-instance self-checks against brute-force and closed-form references.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::experiment::{frame_channel, run_scheme, Scheme};
use crate::gp::{condense, log_g};
use crate::iwf::{compute_lambda, run_iwf, IwfOptions, WaterfillInstance};
use crate::matching::{run_matching_with, stability_violations, MatchingOptions};
use crate::model::sic::{decoding_order, slot_rates, OrderKey};
use crate::model::{Assignment, ChannelState, SystemConfig};
use crate::oracle::{oracle_assignment, oracle_power, OracleLimits};
use crate::seed::mix_seed;

#[derive(Debug, Clone)]
pub struct AuditCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Water level by bisection on `Σ max(0, w − A_n) = budget`, returned as `λ = 1/w`.
pub fn bisection_lambda(inverse_gains: &[f64], budget: f64) -> f64 {
    let lo_a = inverse_gains.iter().copied().fold(f64::INFINITY, f64::min);
    let (mut lo, mut hi) = (lo_a, lo_a + budget);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let filled: f64 = inverse_gains.iter().map(|a| (mid - a).max(0.0)).sum();
        if filled > budget {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    2.0 / (lo + hi)
}

fn small_config() -> SystemConfig {
    SystemConfig::with_dimensions(4, 3, 2)
}

/// Run every check with instances derived from `seed`.
pub fn run_audit(seed: u64, instances: usize) -> Vec<AuditCheck> {
    let cfg = small_config();
    let frames: Vec<ChannelState> = (0..instances as u64)
        .map(|f| {
            frame_channel(&SystemConfig { rng_seed: seed, ..cfg.clone() }, 0, f)
                .expect("small default geometry always places four users")
                .1
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(&[seed, 0xA0D1]));
    vec![
        telescoping(&mut rng, instances),
        water_level(&mut rng, instances),
        iwf_monotone(&frames, &cfg),
        iwf_versus_grid(&frames, &cfg),
        condensation_bound(&frames, &mut rng),
        matching_versus_oracle(&frames, &cfg),
        matching_stability(&frames, &cfg),
        feasibility(&frames, &cfg),
    ]
}

fn check(name: &'static str, failures: usize, total: usize, extra: String) -> AuditCheck {
    AuditCheck {
        name,
        passed: failures == 0,
        detail: format!("{}/{} ok{}", total - failures, total, extra),
    }
}

fn telescoping(rng: &mut ChaCha8Rng, count: usize) -> AuditCheck {
    let mut failures = 0;
    for _ in 0..count {
        let users = rng.random_range(1..=6);
        let gains: Vec<Vec<f64>> = (0..users).map(|_| vec![rng.random_range(1e-3..10.0)]).collect();
        let ch = ChannelState::from_gains(gains, 1.0);
        let mut asg = Assignment::full(users, 1);
        let mut total = 0.0;
        for m in 0..users {
            let p = rng.random_range(0.0..30.0);
            asg.set_power(m, 0, p);
            total += p * ch.gain(m, 0);
        }
        let ord = decoding_order(&ch, &asg, 0, OrderKey::ReceivedPower);
        let sum: f64 = slot_rates(&ch, &asg, &ord).iter().sum();
        if (sum - (1.0 + total).log2()).abs() > 1e-9 {
            failures += 1;
        }
    }
    check("sic telescoping identity", failures, count, String::new())
}

fn water_level(rng: &mut ChaCha8Rng, count: usize) -> AuditCheck {
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let n = rng.random_range(1..=8);
        let inverse_gains: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..20.0)).collect();
        let budget = rng.random_range(0.1..30.0);
        let inst = WaterfillInstance {
            subchannels: (0..n).collect(),
            inverse_gains: inverse_gains.clone(),
            budget,
        };
        let Ok(wl) = compute_lambda(&inst) else {
            failures += 1;
            continue;
        };
        let reference = bisection_lambda(&inverse_gains, budget);
        let err = (wl.lambda - reference).abs();
        worst = worst.max(err);
        if err > 1e-6 {
            failures += 1;
        }
    }
    check("water level vs bisection", failures, count, format!(", max |dλ| = {worst:.2e}"))
}

fn iwf_monotone(frames: &[ChannelState], cfg: &SystemConfig) -> AuditCheck {
    let mut failures = 0;
    for ch in frames {
        let out = run_iwf(ch, &Assignment::full(cfg.num_users, cfg.num_subchannels), cfg, &IwfOptions::default());
        let monotone = out.trace.windows(2).all(|w| w[1] >= w[0] - 1e-12);
        if !(monotone && out.converged) {
            failures += 1;
        }
    }
    check("iwf monotone and convergent", failures, frames.len(), String::new())
}

/// On matched mappings with at most three slots per user, IWF must reach the
/// best point of a 2% budget grid (up to the grid resolution).
fn iwf_versus_grid(frames: &[ChannelState], cfg: &SystemConfig) -> AuditCheck {
    let mut failures = 0;
    let mut checked = 0;
    let limits = OracleLimits::default();
    for ch in frames.iter().take(20) {
        let asg = run_matching_with(ch, cfg, &MatchingOptions::default()).assignment;
        let Ok(grid) = oracle_power(ch, &asg, cfg, 0.02, &limits) else {
            continue;
        };
        checked += 1;
        let iwf = run_iwf(ch, &asg, cfg, &IwfOptions::default()).objective();
        if iwf < crate::model::sic::capacity_objective(ch, &grid) - 1e-9 {
            failures += 1;
        }
    }
    check("iwf vs power grid", failures, checked, String::new())
}

fn condensation_bound(frames: &[ChannelState], rng: &mut ChaCha8Rng) -> AuditCheck {
    let mut failures = 0;
    let mut total = 0;
    for ch in frames {
        let mut asg = Assignment::full(ch.num_users(), ch.num_subchannels());
        for m in 0..ch.num_users() {
            for n in 0..ch.num_subchannels() {
                asg.set_power(m, n, rng.random_range(0.1..10.0));
            }
        }
        let cp = condense(ch, &asg);
        total += 1;
        let touch = (cp.log_monomial(&asg) - log_g(ch, &asg)).abs() <= 1e-12 * log_g(ch, &asg).abs().max(1.0);
        let mut below = true;
        for _ in 0..50 {
            let mut probe = asg.clone();
            for m in 0..ch.num_users() {
                for n in 0..ch.num_subchannels() {
                    probe.set_power(m, n, rng.random_range(1e-3..30.0));
                }
            }
            if cp.log_monomial(&probe) > log_g(ch, &probe) + 1e-12 {
                below = false;
            }
        }
        if !(touch && below) {
            failures += 1;
        }
    }
    check("condensation bound and touch", failures, total, String::new())
}

fn matching_versus_oracle(frames: &[ChannelState], cfg: &SystemConfig) -> AuditCheck {
    let mut failures = 0;
    let mut ratio_sum = 0.0;
    let limits = OracleLimits::default();
    for ch in frames {
        let out = run_matching_with(ch, cfg, &MatchingOptions::default());
        let matched = crate::model::system_throughput(ch, &out.assignment);
        let Ok(best) = oracle_assignment(ch, cfg, &limits) else {
            failures += 1;
            continue;
        };
        let values: Vec<f64> = out.trace.iter().map(|t| t.1).collect();
        let n = values.len();
        let monotone = values[..n - 1].windows(2).all(|w| w[1] > w[0]) && values[n - 1] == values[n - 2];
        if matched > best.throughput + 1e-9 || !monotone {
            failures += 1;
        }
        ratio_sum += matched / best.throughput;
    }
    let mean = ratio_sum / frames.len().max(1) as f64;
    check("matching <= oracle", failures, frames.len(), format!(", mean ratio {mean:.4}"))
}

fn matching_stability(frames: &[ChannelState], cfg: &SystemConfig) -> AuditCheck {
    let failures = frames
        .iter()
        .filter(|ch| {
            let asg = run_matching_with(ch, cfg, &MatchingOptions::default()).assignment;
            !stability_violations(ch, &asg, cfg).is_empty()
        })
        .count();
    check("matching stability", failures, frames.len(), String::new())
}

fn feasibility(frames: &[ChannelState], cfg: &SystemConfig) -> AuditCheck {
    let mut failures = 0;
    let mut total = 0;
    let limits = OracleLimits::default();
    for ch in frames {
        for scheme in Scheme::ALL {
            total += 1;
            match run_scheme(scheme, ch, cfg, &limits) {
                Ok(run) if run.assignment.check_feasible(cfg, 1e-9).is_ok() => {}
                _ => failures += 1,
            }
        }
    }
    check("feasibility of every scheme", failures, total, String::new())
}
