//! Many-to-many subchannel-user matching under equal power splitting.
//!
//! Users propose to subchannels in preference order; a subchannel accepts an
//! addition or a substitution only when the throughput of every affected
//! subchannel strictly increases. The loop ends after a full pass in which no
//! proposal is accepted, which leaves the matching pair-wise stable with
//! respect to the addition and substitution strategies.
//!
//! Subchannel throughput is evaluated in the telescoped form
//! `log2(1 + Γ Σ p g)`, which equals the sum of the received-power-ordered SIC
//! rates.

use std::cmp::Ordering;

use crate::model::{Assignment, ChannelState, SystemConfig};

/// Minimum throughput gain (bits/s/Hz) for a strategy to count as an improvement.
pub const IMPROVEMENT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyKind {
    Addition,
    Substitution { replaced: usize },
}

/// A proposal by `user` for `subchannel`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Strategy {
    pub kind: StrategyKind,
    pub user: usize,
    pub subchannel: usize,
}

impl Strategy {
    pub fn addition(user: usize, subchannel: usize) -> Self {
        Self { kind: StrategyKind::Addition, user, subchannel }
    }

    pub fn substitution(user: usize, subchannel: usize, replaced: usize) -> Self {
        Self {
            kind: StrategyKind::Substitution { replaced },
            user,
            subchannel,
        }
    }

    /// Subchannels whose rate can change: `Ω_m ∪ {n}`, plus `Ω_m'` for a substitution.
    pub fn affected_subchannels(&self, asg: &Assignment) -> Vec<usize> {
        let mut affected: Vec<usize> = asg.subchannels_of(self.user).iter().copied().collect();
        affected.push(self.subchannel);
        if let StrategyKind::Substitution { replaced } = self.kind {
            affected.extend(asg.subchannels_of(replaced).iter().copied());
        }
        affected.sort_unstable();
        affected.dedup();
        affected
    }

    /// Whether the strategy can be applied to `asg` under cap `k`.
    pub fn is_legal(&self, asg: &Assignment, k: usize) -> bool {
        if asg.is_assigned(self.user, self.subchannel) {
            return false;
        }
        match self.kind {
            StrategyKind::Addition => asg.load(self.subchannel) < k,
            StrategyKind::Substitution { replaced } => {
                replaced != self.user && asg.is_assigned(replaced, self.subchannel)
            }
        }
    }

    /// Apply to `asg` and re-split the budgets of the users involved.
    pub fn apply(&self, asg: &mut Assignment, cfg: &SystemConfig) {
        if let StrategyKind::Substitution { replaced } = self.kind {
            asg.unassign(replaced, self.subchannel);
            asg.equal_split_user(replaced, cfg.max_power[replaced]);
        }
        asg.assign(self.user, self.subchannel);
        asg.equal_split_user(self.user, cfg.max_power[self.user]);
    }
}

/// Outcome of testing one strategy against the current matching.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Evaluation {
    /// Throughput over the affected subchannels strictly improves.
    Accepted { before: f64, after: f64 },
    Rejected { before: f64, after: f64 },
    /// The strategy does not apply to this assignment.
    Illegal,
}

impl Evaluation {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Self::Accepted { .. })
    }
}

/// Test a strategy on an equal-split assignment without modifying it.
pub fn evaluate_strategy(
    strategy: &Strategy,
    channel: &ChannelState,
    asg: &Assignment,
    cfg: &SystemConfig,
) -> Evaluation {
    if !strategy.is_legal(asg, cfg.max_per_subchannel) {
        return Evaluation::Illegal;
    }
    let affected = strategy.affected_subchannels(asg);
    let before: f64 = affected
        .iter()
        .map(|&k| (1.0 + rx_sum(channel, asg, k, |_, p| p)).log2())
        .sum();
    let after = throughput_after(strategy, channel, asg, cfg, &affected);
    if after > before + IMPROVEMENT_TOL {
        Evaluation::Accepted { before, after }
    } else {
        Evaluation::Rejected { before, after }
    }
}

fn rx_sum(
    channel: &ChannelState,
    asg: &Assignment,
    subchannel: usize,
    power_of: impl Fn(usize, f64) -> f64,
) -> f64 {
    asg.users_on(subchannel)
        .iter()
        .map(|&u| power_of(u, asg.power(u, subchannel)) * channel.effective_gain(u, subchannel))
        .sum()
}

fn throughput_after(
    s: &Strategy,
    channel: &ChannelState,
    asg: &Assignment,
    cfg: &SystemConfig,
    affected: &[usize],
) -> f64 {
    let user = s.user;
    let user_power = cfg.max_power[user] / (asg.subchannels_of(user).len() + 1) as f64;
    let replaced = match s.kind {
        StrategyKind::Substitution { replaced } => {
            let left = asg.subchannels_of(replaced).len() - 1;
            let p = if left == 0 { 0.0 } else { cfg.max_power[replaced] / left as f64 };
            Some((replaced, p))
        }
        StrategyKind::Addition => None,
    };
    affected
        .iter()
        .map(|&k| {
            let mut total = 0.0;
            for &u in asg.users_on(k) {
                let p = match replaced {
                    Some((r, _)) if r == u && k == s.subchannel => continue,
                    Some((r, p)) if r == u => p,
                    _ if u == user => user_power,
                    _ => asg.power(u, k),
                };
                total += p * channel.effective_gain(u, k);
            }
            if k == s.subchannel {
                total += user_power * channel.effective_gain(user, k);
            }
            (1.0 + total).log2()
        })
        .sum()
}

/// Subchannels not held by `user`, best prospective received power first.
///
/// The prospective power is the equal share after taking one more subchannel.
pub fn preference_list(
    channel: &ChannelState,
    asg: &Assignment,
    cfg: &SystemConfig,
    user: usize,
) -> Vec<usize> {
    let share = cfg.max_power[user] / (asg.subchannels_of(user).len() + 1) as f64;
    let mut prefs: Vec<usize> = (0..asg.num_subchannels())
        .filter(|&n| !asg.is_assigned(user, n))
        .collect();
    prefs.sort_by(|&a, &b| {
        (share * channel.gain(user, b)).total_cmp(&(share * channel.gain(user, a)))
    });
    prefs
}

/// Candidate strategies for `user` proposing to `subchannel`, in tie-break order.
pub fn strategy_set(asg: &Assignment, cfg: &SystemConfig, user: usize, subchannel: usize) -> Vec<Strategy> {
    let mut set = Vec::with_capacity(asg.load(subchannel) + 1);
    if asg.load(subchannel) < cfg.max_per_subchannel {
        set.push(Strategy::addition(user, subchannel));
    }
    set.extend(
        asg.users_on(subchannel)
            .iter()
            .map(|&r| Strategy::substitution(user, subchannel, r)),
    );
    set
}

#[derive(Debug, Clone)]
pub struct MatchingOptions {
    pub max_outer_iters: usize,
    /// Record every proposal and its verdict in [`MatchingOutcome::proposals`].
    pub record_proposals: bool,
}

impl Default for MatchingOptions {
    fn default() -> Self {
        Self {
            max_outer_iters: 200,
            record_proposals: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExecutedStrategy {
    pub pass: usize,
    pub strategy: Strategy,
    /// System throughput before and after execution.
    pub before: f64,
    pub after: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Proposal {
    pub pass: usize,
    pub user: usize,
    pub subchannel: usize,
    pub accepted: bool,
}

#[derive(Debug, Clone)]
pub struct MatchingOutcome {
    pub assignment: Assignment,
    /// System throughput at the start (pass 0) and after each outer pass.
    pub trace: Vec<(usize, f64)>,
    pub outer_iterations: usize,
    /// False when the pass cap was hit before a pass without any accepted strategy.
    pub converged: bool,
    pub executed: Vec<ExecutedStrategy>,
    pub proposals: Vec<Proposal>,
}

fn capacity(channel: &ChannelState, asg: &Assignment) -> f64 {
    crate::model::sic::capacity_objective(channel, asg)
}

/// Run the matching with default options and return the equal-split assignment.
pub fn run_matching(channel: &ChannelState, cfg: &SystemConfig) -> Assignment {
    run_matching_with(channel, cfg, &MatchingOptions::default()).assignment
}

pub fn run_matching_with(
    channel: &ChannelState,
    cfg: &SystemConfig,
    opts: &MatchingOptions,
) -> MatchingOutcome {
    let num_users = channel.num_users();
    let num_subchannels = channel.num_subchannels();
    let mut asg = Assignment::empty(num_users, num_subchannels);
    let mut throughput = 0.0;
    let mut trace = vec![(0, throughput)];
    let mut executed = Vec::new();
    let mut proposals = Vec::new();
    let mut converged = false;
    let mut passes = 0;

    while passes < opts.max_outer_iters {
        passes += 1;
        let mut prefs: Vec<Vec<usize>> = (0..num_users)
            .map(|m| preference_list(channel, &asg, cfg, m))
            .collect();
        let mut cursor = vec![0usize; num_users];
        let mut any_executed = false;

        // One round per subchannel: without acceptances every user walks its
        // whole preference list once.
        for _round in 0..num_subchannels {
            for m in 0..num_users {
                let Some(&n) = prefs[m].get(cursor[m]) else {
                    continue;
                };
                cursor[m] += 1;

                let best = best_strategy(channel, &asg, cfg, m, n);
                if opts.record_proposals {
                    proposals.push(Proposal {
                        pass: passes,
                        user: m,
                        subchannel: n,
                        accepted: best.is_some(),
                    });
                }
                let Some(strategy) = best else {
                    continue;
                };

                strategy.apply(&mut asg, cfg);
                let after = capacity(channel, &asg);
                executed.push(ExecutedStrategy {
                    pass: passes,
                    strategy,
                    before: throughput,
                    after,
                });
                throughput = after;
                any_executed = true;

                prefs[m] = preference_list(channel, &asg, cfg, m);
                cursor[m] = 0;
                if let StrategyKind::Substitution { replaced } = strategy.kind {
                    prefs[replaced] = preference_list(channel, &asg, cfg, replaced);
                    cursor[replaced] = 0;
                }
                break;
            }
        }

        trace.push((passes, throughput));
        if !any_executed {
            converged = true;
            break;
        }
    }

    MatchingOutcome {
        assignment: asg,
        trace,
        outer_iterations: passes,
        converged,
        executed,
        proposals,
    }
}

/// Best accepted strategy by post-strategy throughput of its affected subchannels.
///
/// Ties keep the earlier candidate: addition first, then lower replaced user id.
fn best_strategy(
    channel: &ChannelState,
    asg: &Assignment,
    cfg: &SystemConfig,
    user: usize,
    subchannel: usize,
) -> Option<Strategy> {
    let mut best: Option<(Strategy, f64)> = None;
    for s in strategy_set(asg, cfg, user, subchannel) {
        if let Evaluation::Accepted { after, .. } = evaluate_strategy(&s, channel, asg, cfg) {
            let better = match best {
                None => true,
                Some((_, b)) => after.total_cmp(&b) == Ordering::Greater,
            };
            if better {
                best = Some((s, after));
            }
        }
    }
    best.map(|(s, _)| s)
}

/// Every legal strategy pairing an unmatched (user, subchannel) that would be accepted.
///
/// Empty for a pair-wise stable matching.
pub fn stability_violations(
    channel: &ChannelState,
    asg: &Assignment,
    cfg: &SystemConfig,
) -> Vec<Strategy> {
    let mut found = Vec::new();
    for m in 0..asg.num_users() {
        for n in 0..asg.num_subchannels() {
            if asg.is_assigned(m, n) {
                continue;
            }
            for s in strategy_set(asg, cfg, m, n) {
                if evaluate_strategy(&s, channel, asg, cfg).is_accepted() {
                    found.push(s);
                }
            }
        }
    }
    found
}
