//! Brute-force references for small instances.
//!
//! [`oracle_assignment`] enumerates every mapping with at most `K` users per
//! subchannel and scores it with equal power splitting, using the explicit SIC
//! sum rather than the telescoped form the matching stage uses.
//! [`oracle_power`] grid-searches the budget simplices for a fixed mapping.

use crate::error::OracleError;
use crate::exec::{self, ExecMode};
use crate::model::sic::capacity_objective;
use crate::model::{Assignment, ChannelState, SystemConfig};

#[derive(Debug, Clone, Copy)]
pub struct OracleLimits {
    pub max_configs: u64,
    pub max_grid_points: u64,
    pub mode: ExecMode,
}

impl Default for OracleLimits {
    fn default() -> Self {
        Self {
            max_configs: 10_000_000,
            max_grid_points: 10_000_000,
            mode: ExecMode::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    /// Best mapping with equal-split powers.
    pub assignment: Assignment,
    pub throughput: f64,
    pub configs: u64,
}

/// All user subsets of size `0..=k`, each ascending, in lexicographic order.
fn subsets(num_users: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..k.min(num_users) {
        let mut next = Vec::new();
        for s in &frontier {
            let start = s.last().map_or(0, |&l| l + 1);
            for u in start..num_users {
                let mut t = s.clone();
                t.push(u);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.sort();
    out
}

/// Number of configurations the enumeration would visit, as a float to survive overflow.
pub fn enumeration_size(num_users: usize, num_subchannels: usize, k: usize) -> f64 {
    let mut per_subchannel = 0.0;
    let mut binom = 1.0;
    for j in 0..=k.min(num_users) {
        if j > 0 {
            binom = binom * (num_users - j + 1) as f64 / j as f64;
        }
        per_subchannel += binom;
    }
    per_subchannel.powi(num_subchannels as i32)
}

pub fn is_enumerable(cfg: &SystemConfig, limits: &OracleLimits) -> bool {
    enumeration_size(cfg.num_users, cfg.num_subchannels, cfg.max_per_subchannel) <= limits.max_configs as f64
}

/// Best equal-split mapping by exhaustive search. Ties keep the first in enumeration order.
pub fn oracle_assignment(
    channel: &ChannelState,
    cfg: &SystemConfig,
    limits: &OracleLimits,
) -> Result<OracleResult, OracleError> {
    let size = enumeration_size(cfg.num_users, cfg.num_subchannels, cfg.max_per_subchannel);
    if size > limits.max_configs as f64 {
        return Err(OracleError::TooLarge {
            configs: size,
            limit: limits.max_configs,
        });
    }
    let total = size as u64;
    let subs = subsets(cfg.num_users, cfg.max_per_subchannel);
    let radix = subs.len() as u64;
    let num_subchannels = cfg.num_subchannels;

    let decode = |mut index: u64, digits: &mut [usize]| {
        for d in digits.iter_mut().rev() {
            *d = (index % radix) as usize;
            index /= radix;
        }
    };

    const CHUNK: u64 = 4096;
    let chunks = total.div_ceil(CHUNK) as usize;
    let best_per_chunk = exec::map_range(chunks, limits.mode, |c| {
        let mut digits = vec![0usize; num_subchannels];
        let mut held = vec![0usize; cfg.num_users];
        let mut best = (f64::NEG_INFINITY, u64::MAX);
        let start = c as u64 * CHUNK;
        for index in start..(start + CHUNK).min(total) {
            decode(index, &mut digits);
            let thr = equal_split_throughput(channel, cfg, &subs, &digits, &mut held);
            if thr > best.0 {
                best = (thr, index);
            }
        }
        best
    });
    let (throughput, index) = best_per_chunk
        .into_iter()
        .fold((f64::NEG_INFINITY, u64::MAX), |acc, b| {
            if b.0 > acc.0 || (b.0 == acc.0 && b.1 < acc.1) {
                b
            } else {
                acc
            }
        });

    let mut digits = vec![0usize; num_subchannels];
    decode(index, &mut digits);
    let users_on: Vec<Vec<usize>> = digits.iter().map(|&d| subs[d].clone()).collect();
    let mut assignment = Assignment::from_users_on(cfg.num_users, &users_on);
    assignment.equal_split(&cfg.max_power);
    Ok(OracleResult {
        assignment,
        throughput,
        configs: total,
    })
}

fn equal_split_throughput(
    channel: &ChannelState,
    cfg: &SystemConfig,
    subs: &[Vec<usize>],
    digits: &[usize],
    held: &mut [usize],
) -> f64 {
    held.fill(0);
    for &d in digits {
        for &u in &subs[d] {
            held[u] += 1;
        }
    }
    let mut total = 0.0;
    let mut rx: Vec<(usize, f64)> = Vec::with_capacity(cfg.max_per_subchannel);
    for (n, &d) in digits.iter().enumerate() {
        rx.clear();
        rx.extend(subs[d].iter().map(|&u| {
            let p = cfg.max_power[u] / held[u] as f64;
            (u, p * channel.gain(u, n))
        }));
        // Decode strongest first; each user sees the weaker ones as interference.
        rx.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        let gap = channel.sinr_gap();
        for (k, &(_, r)) in rx.iter().enumerate() {
            let interference: f64 = rx[k + 1..].iter().map(|&(_, x)| x).sum();
            total += (1.0 + gap * r / (1.0 + gap * interference)).log2();
        }
    }
    total
}

/// Grid search of the powers of a fixed mapping over each user's budget simplex.
///
/// `grid_step` is a fraction of the budget; every user must hold at most three
/// positive-gain slots.
pub fn oracle_power(
    channel: &ChannelState,
    asg: &Assignment,
    cfg: &SystemConfig,
    grid_step: f64,
    limits: &OracleLimits,
) -> Result<Assignment, OracleError> {
    if !(grid_step > 0.0 && grid_step <= 1.0) {
        return Err(OracleError::BadGridStep(grid_step));
    }
    let steps = (1.0 / grid_step).round() as usize;
    let mut slots: Vec<Vec<usize>> = Vec::with_capacity(asg.num_users());
    for m in 0..asg.num_users() {
        let held: Vec<usize> = asg
            .subchannels_of(m)
            .iter()
            .copied()
            .filter(|&n| channel.gain(m, n) > 0.0)
            .collect();
        if held.len() > 3 {
            return Err(OracleError::TooManySlots { user: m, slots: held.len() });
        }
        slots.push(held);
    }
    let grids: Vec<Vec<Vec<usize>>> = slots.iter().map(|s| compositions(steps, s.len())).collect();
    let points: f64 = grids.iter().map(|g| g.len() as f64).product();
    if points > limits.max_grid_points as f64 {
        return Err(OracleError::GridTooLarge {
            points,
            limit: limits.max_grid_points,
        });
    }

    let mut cur = asg.clone();
    cur.clear_powers();
    let mut best = cur.clone();
    let mut best_value = f64::NEG_INFINITY;
    let mut odometer = vec![0usize; grids.len()];
    loop {
        for (m, g) in grids.iter().enumerate() {
            for (k, &n) in slots[m].iter().enumerate() {
                let share = g[odometer[m]][k] as f64 / steps as f64;
                cur.set_power(m, n, share * cfg.max_power[m]);
            }
        }
        let value = capacity_objective(channel, &cur);
        if value > best_value {
            best_value = value;
            best = cur.clone();
        }
        // Advance the mixed-radix counter, last user fastest.
        let mut pos = grids.len();
        loop {
            if pos == 0 {
                return Ok(best);
            }
            pos -= 1;
            odometer[pos] += 1;
            if odometer[pos] < grids[pos].len() {
                break;
            }
            odometer[pos] = 0;
        }
    }
}

/// All ways to write `total` as an ordered sum of `parts` non-negative integers.
/// Zero parts yields a single empty composition.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    match parts {
        0 => vec![Vec::new()],
        1 => vec![vec![total]],
        _ => (0..=total)
            .flat_map(|first| {
                compositions(total - first, parts - 1).into_iter().map(move |mut rest| {
                    rest.insert(0, first);
                    rest
                })
            })
            .collect(),
    }
}
