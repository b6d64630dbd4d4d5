//! Iterative water-filling over a fixed subchannel-user mapping.
//!
//! Each user in turn water-fills its budget across its subchannels, treating
//! the current received power of the other users as noise. The objective
//! `Σ_n log2(1 + Γ Σ_m p g)` is concave, and each user update is an exact
//! block maximization of it, so the objective never decreases under the
//! sequential schedule.

use crate::error::WaterfillError;
use crate::model::{Assignment, ChannelState, SystemConfig};
use crate::model::sic::capacity_objective;

/// Single-user water-filling problem.
#[derive(Debug, Clone, PartialEq)]
pub struct WaterfillInstance {
    pub subchannels: Vec<usize>,
    /// Effective inverse gains `(1 + Γ Σ_{i≠m} p_i g_i) / (Γ g_m)`, aligned with `subchannels`.
    pub inverse_gains: Vec<f64>,
    pub budget: f64,
}

/// Water level solution of one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct WaterLevel {
    pub lambda: f64,
    /// Subchannels that receive positive power.
    pub active: Vec<usize>,
}

impl WaterLevel {
    pub fn level(&self) -> f64 {
        1.0 / self.lambda
    }
}

impl WaterfillInstance {
    fn validate(&self) -> Result<(), WaterfillError> {
        if self.subchannels.is_empty() {
            return Err(WaterfillError::Empty);
        }
        if !(self.budget.is_finite() && self.budget > 0.0) {
            return Err(WaterfillError::BadBudget(self.budget));
        }
        if let Some(&a) = self
            .inverse_gains
            .iter()
            .find(|a| !(a.is_finite() && **a > 0.0))
        {
            return Err(WaterfillError::BadInverseGain(a));
        }
        Ok(())
    }
}

/// Exact Lagrange multiplier by prefix accumulation over ascending inverse gains.
///
/// With `j` active subchannels, `λ(j) = j / (budget + Σ_{i≤j} A_i)`. The first
/// `j` with `λ(j) ≥ 1 / A_{j+1}` (or `j` = all) is optimal.
pub fn compute_lambda(inst: &WaterfillInstance) -> Result<WaterLevel, WaterfillError> {
    inst.validate()?;
    let mut idx: Vec<usize> = (0..inst.subchannels.len()).collect();
    idx.sort_by(|&a, &b| {
        inst.inverse_gains[a]
            .total_cmp(&inst.inverse_gains[b])
            .then(inst.subchannels[a].cmp(&inst.subchannels[b]))
    });
    let mut accumulated = 0.0;
    let mut lambda = 0.0;
    let mut count = 0;
    for (j, &i) in idx.iter().enumerate() {
        accumulated += inst.inverse_gains[i];
        count = j + 1;
        lambda = count as f64 / (inst.budget + accumulated);
        match idx.get(j + 1) {
            Some(&next) if lambda * inst.inverse_gains[next] >= 1.0 => break,
            Some(_) => {}
            None => break,
        }
    }
    let mut active: Vec<usize> = idx[..count].iter().map(|&i| inst.subchannels[i]).collect();
    active.sort_unstable();
    Ok(WaterLevel { lambda, active })
}

/// Optimal powers `max(0, 1/λ − A_n)`, aligned with `inst.subchannels`.
pub fn single_user_waterfill(inst: &WaterfillInstance) -> Result<Vec<f64>, WaterfillError> {
    let wl = compute_lambda(inst)?;
    let level = wl.level();
    let mut powers: Vec<f64> = inst
        .subchannels
        .iter()
        .zip(&inst.inverse_gains)
        .map(|(n, &a)| if wl.active.binary_search(n).is_ok() { (level - a).max(0.0) } else { 0.0 })
        .collect();
    // Push the rounding residual onto the largest allocation so the budget is spent exactly.
    let residual = inst.budget - powers.iter().sum::<f64>();
    if let Some(top) = powers.iter_mut().max_by(|a, b| a.total_cmp(b)) {
        *top = (*top + residual).max(0.0);
    }
    Ok(powers)
}

/// Water-filling instance of `user` against the current powers of everyone else.
///
/// Slots with zero gain are left out. Returns `None` when nothing remains.
pub fn user_instance(
    channel: &ChannelState,
    asg: &Assignment,
    cfg: &SystemConfig,
    user: usize,
) -> Option<WaterfillInstance> {
    let mut subchannels = Vec::new();
    let mut inverse_gains = Vec::new();
    for &n in asg.subchannels_of(user) {
        let own = channel.effective_gain(user, n);
        if own <= 0.0 {
            continue;
        }
        let others: f64 = asg
            .users_on(n)
            .iter()
            .filter(|&&i| i != user)
            .map(|&i| asg.power(i, n) * channel.effective_gain(i, n))
            .sum();
        subchannels.push(n);
        inverse_gains.push((1.0 + others) / own);
    }
    (!subchannels.is_empty()).then(|| WaterfillInstance {
        subchannels,
        inverse_gains,
        budget: cfg.max_power[user],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Schedule {
    /// Users update in ascending id and see earlier updates within the sweep.
    #[default]
    GaussSeidel,
    /// All users respond to the previous sweep's powers; the sweep result replaces them at once.
    Jacobi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Initialization {
    #[default]
    Zero,
    EqualSplit,
    /// Keep the powers already present in the assignment.
    Current,
}

#[derive(Debug, Clone)]
pub struct IwfOptions {
    /// Stop when a sweep changes the objective by less than `tol * |objective|`.
    pub tol: f64,
    pub max_iters: usize,
    pub schedule: Schedule,
    pub init: Initialization,
}

impl Default for IwfOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_iters: 100,
            schedule: Schedule::GaussSeidel,
            init: Initialization::Zero,
        }
    }
}

#[derive(Debug, Clone)]
pub struct IwfOutcome {
    pub assignment: Assignment,
    /// Objective after initialization (entry 0) and after each sweep.
    pub trace: Vec<f64>,
    pub sweeps: usize,
    pub converged: bool,
}

impl IwfOutcome {
    pub fn objective(&self) -> f64 {
        *self.trace.last().expect("trace holds the initial objective")
    }
}

/// Run iterative water-filling on the mapping of `asg`.
pub fn run_iwf(
    channel: &ChannelState,
    asg: &Assignment,
    cfg: &SystemConfig,
    opts: &IwfOptions,
) -> IwfOutcome {
    let mut cur = asg.clone();
    match opts.init {
        Initialization::Zero => cur.clear_powers(),
        Initialization::EqualSplit => cur.equal_split(&cfg.max_power),
        Initialization::Current => {}
    }
    let mut objective = capacity_objective(channel, &cur);
    let mut trace = vec![objective];
    let mut converged = false;
    let mut sweeps = 0;

    while sweeps < opts.max_iters {
        sweeps += 1;
        let mut totals = received_totals(channel, &cur);
        match opts.schedule {
            Schedule::GaussSeidel => {
                for m in 0..cur.num_users() {
                    let update = update_user(channel, &cur, cfg, m, &totals);
                    for &(n, p) in &update.0 {
                        totals[n] += (p - cur.power(m, n)) * channel.effective_gain(m, n);
                    }
                    update.apply(&mut cur, m);
                }
            }
            Schedule::Jacobi => {
                let updates: Vec<UserUpdate> = (0..cur.num_users())
                    .map(|m| update_user(channel, &cur, cfg, m, &totals))
                    .collect();
                for (m, u) in updates.into_iter().enumerate() {
                    u.apply(&mut cur, m);
                }
            }
        }
        let next_objective = capacity_objective(channel, &cur);
        trace.push(next_objective);
        let gain = next_objective - objective;
        objective = next_objective;
        // A Jacobi sweep can lose objective; only a small change in either direction counts.
        if gain.abs() < opts.tol * objective.abs() {
            converged = true;
            break;
        }
    }

    IwfOutcome {
        assignment: cur,
        trace,
        sweeps,
        converged,
    }
}

struct UserUpdate(Vec<(usize, f64)>);

impl UserUpdate {
    fn apply(self, asg: &mut Assignment, user: usize) {
        let held: Vec<usize> = asg.subchannels_of(user).iter().copied().collect();
        for n in held {
            asg.set_power(user, n, 0.0);
        }
        for (n, p) in self.0 {
            asg.set_power(user, n, p);
        }
    }
}

fn received_totals(channel: &ChannelState, asg: &Assignment) -> Vec<f64> {
    (0..asg.num_subchannels())
        .map(|n| crate::model::sic::received_power(channel, asg, n))
        .collect()
}

/// Best response of `user` given per-subchannel received totals that include its own power.
fn update_user(
    channel: &ChannelState,
    asg: &Assignment,
    cfg: &SystemConfig,
    user: usize,
    totals: &[f64],
) -> UserUpdate {
    let mut subchannels = Vec::new();
    let mut inverse_gains = Vec::new();
    for &n in asg.subchannels_of(user) {
        let own = channel.effective_gain(user, n);
        if own <= 0.0 {
            continue;
        }
        let others = (totals[n] - asg.power(user, n) * own).max(0.0);
        subchannels.push(n);
        inverse_gains.push((1.0 + others) / own);
    }
    if subchannels.is_empty() {
        return UserUpdate(Vec::new());
    }
    let inst = WaterfillInstance {
        subchannels,
        inverse_gains,
        budget: cfg.max_power[user],
    };
    let powers = single_user_waterfill(&inst).expect("instance built from validated inputs");
    UserUpdate(inst.subchannels.into_iter().zip(powers).collect())
}
