//! Power allocation by successive single condensation.
//!
//! The objective `G(p) = Π_n (1 + Σ_m Γ p g)` is a product of posynomials.
//! Around an expansion point `p̂` each factor is replaced by its AM-GM monomial,
//! which bounds it from below and touches it at `p̂`. Maximizing the resulting
//! monomial under per-user budgets separates per user into a weighted
//! geometric-mean problem with a closed-form solution.

use crate::model::sic::capacity_objective;
use crate::model::{Assignment, ChannelState, SystemConfig};

/// Lower clamp on expansion points and solver iterates.
pub const POWER_FLOOR: f64 = 1e-12;

/// One positive-gain slot of the condensed monomial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CondensedSlot {
    pub user: usize,
    pub subchannel: usize,
    /// Expansion point `p̂`, already clamped to [`POWER_FLOOR`].
    pub expansion: f64,
    /// Exponent `a = p̂ ∂G/∂p / G`.
    pub exponent: f64,
}

/// Monomial `λ Π p^a` fitted to `G` at an expansion point.
#[derive(Debug, Clone, PartialEq)]
pub struct CondensationPoint {
    pub slots: Vec<CondensedSlot>,
    /// Exponent of the constant term of each subchannel factor, `1 / (1 + S_n)`.
    pub constant_exponents: Vec<f64>,
    /// `ln λ`; the coefficient itself overflows for large cells.
    pub log_coefficient: f64,
}

impl CondensationPoint {
    pub fn coefficient(&self) -> f64 {
        self.log_coefficient.exp()
    }

    /// `ln` of the monomial at the powers of `asg` (clamped to the floor).
    pub fn log_monomial(&self, asg: &Assignment) -> f64 {
        self.log_coefficient
            + self
                .slots
                .iter()
                .map(|s| s.exponent * asg.power(s.user, s.subchannel).max(POWER_FLOOR).ln())
                .sum::<f64>()
    }

    /// Monomial evaluated on explicit slot powers aligned with `slots`.
    pub fn log_monomial_at(&self, powers: &[f64]) -> f64 {
        self.log_coefficient
            + self
                .slots
                .iter()
                .zip(powers)
                .map(|(s, p)| s.exponent * p.max(POWER_FLOOR).ln())
                .sum::<f64>()
    }
}

/// Natural log of `G` at the powers of `asg`.
pub fn log_g(channel: &ChannelState, asg: &Assignment) -> f64 {
    capacity_objective(channel, asg) * std::f64::consts::LN_2
}

/// Slots that take part in the power problem: assigned with positive gain.
fn active_slots(channel: &ChannelState, asg: &Assignment) -> Vec<(usize, usize)> {
    (0..asg.num_users())
        .flat_map(|m| asg.subchannels_of(m).iter().map(move |&n| (m, n)))
        .filter(|&(m, n)| channel.gain(m, n) > 0.0)
        .collect()
}

/// Condense `G` around the powers currently held by `asg`.
pub fn condense(channel: &ChannelState, asg: &Assignment) -> CondensationPoint {
    let slots = active_slots(channel, asg);
    let mut totals = vec![0.0; asg.num_subchannels()];
    for &(m, n) in &slots {
        totals[n] += asg.power(m, n).max(POWER_FLOOR) * channel.effective_gain(m, n);
    }
    let condensed: Vec<CondensedSlot> = slots
        .iter()
        .map(|&(m, n)| {
            let expansion = asg.power(m, n).max(POWER_FLOOR);
            // ∂G/∂p = Γg Π_{n'≠n}(1 + S_n'), so a = p̂ Γg / (1 + S_n).
            let exponent = expansion * channel.effective_gain(m, n) / (1.0 + totals[n]);
            CondensedSlot {
                user: m,
                subchannel: n,
                expansion,
                exponent,
            }
        })
        .collect();
    let log_g_hat: f64 = totals.iter().map(|s| s.ln_1p()).sum();
    let log_coefficient = log_g_hat
        - condensed
            .iter()
            .map(|s| s.exponent * s.expansion.ln())
            .sum::<f64>();
    CondensationPoint {
        slots: condensed,
        constant_exponents: totals.iter().map(|s| 1.0 / (1.0 + s)).collect(),
        log_coefficient,
    }
}

/// Solution of the condensed problem.
#[derive(Debug, Clone, PartialEq)]
pub struct CondensedSolution {
    /// Powers aligned with [`CondensationPoint::slots`].
    pub powers: Vec<f64>,
    /// Largest relative KKT residual over all users.
    pub kkt_residual: f64,
}

/// Maximize the condensed monomial subject to per-user budgets and the power floor.
pub fn solve_condensed(cp: &CondensationPoint, budgets: &[f64]) -> CondensedSolution {
    let mut powers = vec![0.0; cp.slots.len()];
    let mut residual: f64 = 0.0;
    let mut by_user: Vec<Vec<usize>> = vec![Vec::new(); budgets.len()];
    for (i, s) in cp.slots.iter().enumerate() {
        by_user[s.user].push(i);
    }
    for (user, idx) in by_user.iter().enumerate() {
        if idx.is_empty() {
            continue;
        }
        let weights: Vec<f64> = idx.iter().map(|&i| cp.slots[i].exponent).collect();
        let (p, r) = weighted_log_max(&weights, budgets[user]);
        residual = residual.max(r);
        for (&i, v) in idx.iter().zip(p) {
            powers[i] = v;
        }
    }
    CondensedSolution {
        powers,
        kkt_residual: residual,
    }
}

/// Maximize `Σ a_i ln p_i` s.t. `Σ p_i ≤ budget`, `p_i ≥ POWER_FLOOR`.
///
/// Returns the maximizer and its relative KKT residual.
fn weighted_log_max(weights: &[f64], budget: f64) -> (Vec<f64>, f64) {
    let total: f64 = weights.iter().sum();
    if total <= 0.0 || !total.is_finite() {
        let share = budget / weights.len() as f64;
        return (vec![share; weights.len()], 0.0);
    }
    let closed: Vec<f64> = weights.iter().map(|a| budget * a / total).collect();
    if closed.iter().all(|&p| p >= POWER_FLOOR) {
        let r = kkt_residual(weights, &closed, budget, total / budget);
        return (closed, r);
    }
    // Bounded case: p_i = max(floor, a_i / ν) with Σ p = budget.
    // The sum is decreasing in ν; bisect on ln ν.
    let used = |nu: f64| -> f64 { weights.iter().map(|a| (a / nu).max(POWER_FLOOR)).sum() };
    let mut lo = (total / budget).ln() - 1.0;
    let mut hi = lo + 2.0;
    while used(lo.exp()) < budget {
        lo -= 2.0;
    }
    while used(hi.exp()) > budget {
        hi += 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if used(mid.exp()) > budget {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    let nu = hi.exp();
    // With the floored set fixed, the free coordinates split what is left exactly.
    let free: Vec<bool> = weights.iter().map(|a| a / nu > POWER_FLOOR).collect();
    let free_weight: f64 = weights.iter().zip(&free).filter(|(_, f)| **f).map(|(a, _)| a).sum();
    let floored = free.iter().filter(|f| !**f).count() as f64;
    let left = budget - floored * POWER_FLOOR;
    let p: Vec<f64> = weights
        .iter()
        .zip(&free)
        .map(|(a, &f)| if f { (left * a / free_weight).max(POWER_FLOOR) } else { POWER_FLOOR })
        .collect();
    let nu = free_weight / left;
    let r = kkt_residual(weights, &p, budget, nu);
    (p, r)
}

/// Relative KKT residual of `Σ a ln p` under a budget and the floor.
///
/// Free coordinates need `a_i / p_i = ν`, floored ones `a_i / p_i ≤ ν`, and the
/// budget must be spent.
pub fn kkt_residual(weights: &[f64], powers: &[f64], budget: f64, nu: f64) -> f64 {
    let spent = powers.iter().sum::<f64>();
    let mut r = ((spent - budget) / budget).abs();
    for (a, p) in weights.iter().zip(powers) {
        let marginal = a / p;
        if *p > POWER_FLOOR * (1.0 + 1e-9) {
            r = r.max(((marginal - nu) / nu).abs());
        } else {
            r = r.max(((marginal - nu) / nu).max(0.0));
        }
    }
    r
}

#[derive(Debug, Clone)]
pub struct GpOptions {
    /// Stop when a round improves `log2 G` by less than `tol` relative.
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for GpOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            max_iters: 50,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GpOutcome {
    /// Best powers seen.
    pub assignment: Assignment,
    /// `log2 G` at the equal-split start (entry 0) and after each round.
    pub trace: Vec<f64>,
    pub rounds: usize,
    pub converged: bool,
    pub max_kkt_residual: f64,
}

impl GpOutcome {
    pub fn objective(&self) -> f64 {
        self.trace.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Successive condensation starting from the equal split of `asg`'s mapping.
pub fn run_gp(
    channel: &ChannelState,
    asg: &Assignment,
    cfg: &SystemConfig,
    opts: &GpOptions,
) -> GpOutcome {
    let mut cur = asg.clone();
    cur.equal_split(&cfg.max_power);
    // Zero-gain slots carry no power in the optimized allocation.
    for (m, n) in zero_gain_slots(channel, &cur) {
        cur.set_power(m, n, 0.0);
    }
    let mut objective = capacity_objective(channel, &cur);
    let mut trace = vec![objective];
    let mut best = cur.clone();
    let mut best_objective = objective;
    let mut converged = false;
    let mut rounds = 0;
    let mut max_kkt_residual: f64 = 0.0;

    while rounds < opts.max_iters {
        rounds += 1;
        let cp = condense(channel, &cur);
        let sol = solve_condensed(&cp, &cfg.max_power);
        max_kkt_residual = max_kkt_residual.max(sol.kkt_residual);
        for (s, &p) in cp.slots.iter().zip(&sol.powers) {
            cur.set_power(s.user, s.subchannel, p);
        }
        let next = capacity_objective(channel, &cur);
        trace.push(next);
        if next > best_objective {
            best_objective = next;
            best = cur.clone();
        }
        let gain = next - objective;
        objective = next;
        if gain.abs() < opts.tol * objective.abs() {
            converged = true;
            break;
        }
    }

    GpOutcome {
        assignment: best,
        trace,
        rounds,
        converged,
        max_kkt_residual,
    }
}

fn zero_gain_slots(channel: &ChannelState, asg: &Assignment) -> Vec<(usize, usize)> {
    (0..asg.num_users())
        .flat_map(|m| asg.subchannels_of(m).iter().map(move |&n| (m, n)))
        .filter(|&(m, n)| channel.gain(m, n) <= 0.0)
        .collect()
}
