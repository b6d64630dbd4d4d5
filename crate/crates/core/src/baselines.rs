//! Comparison schemes from the literature.
//!
//! * [`baseline_alimari`]: start fully loaded, water-fill, and repeatedly drop
//!   the weakest slot of any overloaded subchannel until every subchannel holds
//!   exactly `min(K, M)` users.
//! * [`baseline_mollanoori_throughput`] / [`baseline_mollanoori_fairness`]:
//!   one resource block per user at full power, chosen greedily for the
//!   throughput or proportional-fairness increment.

use crate::iwf::{run_iwf, Initialization, IwfOptions};
use crate::model::report::PF_EPSILON;
use crate::model::{Assignment, ChannelState, SystemConfig};

#[derive(Debug, Clone)]
pub struct BaselineOutcome {
    pub assignment: Assignment,
    /// Total water-filling sweeps spent (zero for the greedy schemes).
    pub power_iterations: usize,
    pub removals: usize,
}

/// Fully loaded start, iterative water-filling, weakest-slot removal.
pub fn baseline_alimari(channel: &ChannelState, cfg: &SystemConfig) -> BaselineOutcome {
    let num_users = channel.num_users();
    let num_subchannels = channel.num_subchannels();
    let target = cfg.max_per_subchannel.min(num_users);
    let mut out = run_iwf(
        channel,
        &Assignment::full(num_users, num_subchannels),
        cfg,
        &IwfOptions::default(),
    );
    let mut sweeps = out.sweeps;
    let mut removals = 0;
    let warm = IwfOptions {
        init: Initialization::Current,
        ..IwfOptions::default()
    };
    loop {
        let asg = &out.assignment;
        let weakest = (0..num_subchannels)
            .filter(|&n| asg.load(n) > target)
            .flat_map(|n| asg.users_on(n).iter().map(move |&m| (m, n)))
            .min_by(|&(ma, na), &(mb, nb)| {
                asg.power(ma, na)
                    .total_cmp(&asg.power(mb, nb))
                    .then(ma.cmp(&mb))
                    .then(na.cmp(&nb))
            });
        let Some((m, n)) = weakest else {
            break;
        };
        let mut next = out.assignment;
        next.unassign(m, n);
        removals += 1;
        out = run_iwf(channel, &next, cfg, &warm);
        sweeps += out.sweeps;
    }
    BaselineOutcome {
        assignment: out.assignment,
        power_iterations: sweeps,
        removals,
    }
}

/// Greedy one-block-per-user allocation maximizing the throughput increment.
pub fn baseline_mollanoori_throughput(channel: &ChannelState, cfg: &SystemConfig) -> BaselineOutcome {
    greedy_single_block(channel, cfg, Objective::Throughput)
}

/// Greedy one-block-per-user allocation maximizing the proportional-fairness increment.
pub fn baseline_mollanoori_fairness(channel: &ChannelState, cfg: &SystemConfig) -> BaselineOutcome {
    greedy_single_block(channel, cfg, Objective::ProportionalFairness)
}

#[derive(Debug, Clone, Copy)]
enum Objective {
    Throughput,
    ProportionalFairness,
}

impl Objective {
    /// Contribution of one subchannel given its users' received powers.
    fn score(self, rx: &mut [(usize, f64)]) -> f64 {
        match self {
            Self::Throughput => (1.0 + rx.iter().map(|&(_, r)| r).sum::<f64>()).log2(),
            Self::ProportionalFairness => sic_rates(rx)
                .into_iter()
                .map(|r| (r + PF_EPSILON).ln())
                .sum(),
        }
    }

    /// Contribution of a user without any block.
    fn unassigned(self) -> f64 {
        match self {
            Self::Throughput => 0.0,
            Self::ProportionalFairness => PF_EPSILON.ln(),
        }
    }
}

/// SIC rates for users with the given received powers, strongest decoded first.
fn sic_rates(rx: &mut [(usize, f64)]) -> Vec<f64> {
    rx.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut rates = vec![0.0; rx.len()];
    let mut interference = 0.0;
    for (k, &(_, r)) in rx.iter().enumerate().rev() {
        rates[k] = (1.0 + r / (1.0 + interference)).log2();
        interference += r;
    }
    rates
}

fn greedy_single_block(channel: &ChannelState, cfg: &SystemConfig, objective: Objective) -> BaselineOutcome {
    let num_users = channel.num_users();
    let num_subchannels = channel.num_subchannels();
    let mut asg = Assignment::empty(num_users, num_subchannels);
    let mut users: Vec<usize> = (0..num_users).collect();
    users.sort_by(|&a, &b| channel.best_gain(b).total_cmp(&channel.best_gain(a)).then(a.cmp(&b)));

    let rx_list = |asg: &Assignment, n: usize| -> Vec<(usize, f64)> {
        asg.users_on(n)
            .iter()
            .map(|&u| (u, asg.power(u, n) * channel.effective_gain(u, n)))
            .collect()
    };

    for m in users {
        let full = cfg.max_power[m];
        let mut best: Option<(f64, usize, Option<usize>)> = None;
        let mut consider = |delta: f64, n: usize, replaced: Option<usize>| {
            if best.is_none_or(|(d, _, _)| delta > d) {
                best = Some((delta, n, replaced));
            }
        };
        let open: Vec<usize> = (0..num_subchannels)
            .filter(|&n| asg.load(n) < cfg.max_per_subchannel)
            .collect();
        if !open.is_empty() {
            for n in open {
                let mut old = rx_list(&asg, n);
                let mut new = old.clone();
                new.push((m, full * channel.effective_gain(m, n)));
                let delta = objective.score(&mut new) - objective.score(&mut old) - objective.unassigned();
                consider(delta, n, None);
            }
        } else {
            for n in 0..num_subchannels {
                let mut old = rx_list(&asg, n);
                for &r in asg.users_on(n) {
                    let mut new: Vec<(usize, f64)> =
                        old.iter().copied().filter(|&(u, _)| u != r).collect();
                    new.push((m, full * channel.effective_gain(m, n)));
                    let delta = objective.score(&mut new) - objective.score(&mut old);
                    if delta > 1e-12 {
                        consider(delta, n, Some(r));
                    }
                }
            }
        }
        if let Some((_, n, replaced)) = best {
            if let Some(r) = replaced {
                asg.unassign(r, n);
            }
            asg.assign(m, n);
            asg.set_power(m, n, full);
        }
    }
    BaselineOutcome {
        assignment: asg,
        power_iterations: 0,
        removals: 0,
    }
}
