use std::collections::BTreeSet;
use std::fmt;

use super::config::SystemConfig;

/// Subchannel-user mapping with per-slot transmit powers.
///
/// The user-side sets, the subchannel-side sets and the implied `alpha` matrix
/// are kept mutually consistent by every mutating method.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    num_subchannels: usize,
    omega: Vec<BTreeSet<usize>>,
    users_on: Vec<BTreeSet<usize>>,
    power: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FeasibilityViolation {
    Inconsistent { user: usize, subchannel: usize },
    OverCap { subchannel: usize, load: usize, cap: usize },
    OverBudget { user: usize, used: f64, budget: f64 },
    NegativePower { user: usize, subchannel: usize, power: f64 },
    PowerOffSlot { user: usize, subchannel: usize, power: f64 },
    Shape,
}

impl fmt::Display for FeasibilityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Inconsistent { user, subchannel } => {
                write!(f, "user {user} and subchannel {subchannel} disagree on their pairing")
            }
            Self::OverCap { subchannel, load, cap } => {
                write!(f, "subchannel {subchannel} carries {load} users, cap is {cap}")
            }
            Self::OverBudget { user, used, budget } => {
                write!(f, "user {user} spends {used} W of a {budget} W budget")
            }
            Self::NegativePower { user, subchannel, power } => {
                write!(f, "negative power {power} at ({user}, {subchannel})")
            }
            Self::PowerOffSlot { user, subchannel, power } => {
                write!(f, "power {power} on unassigned slot ({user}, {subchannel})")
            }
            Self::Shape => write!(f, "assignment dimensions do not match the config"),
        }
    }
}

impl Assignment {
    pub fn empty(num_users: usize, num_subchannels: usize) -> Self {
        Self {
            num_subchannels,
            omega: vec![BTreeSet::new(); num_users],
            users_on: vec![BTreeSet::new(); num_subchannels],
            power: vec![0.0; num_users * num_subchannels],
        }
    }

    /// Every user on every subchannel, zero power.
    pub fn full(num_users: usize, num_subchannels: usize) -> Self {
        let mut asg = Self::empty(num_users, num_subchannels);
        for m in 0..num_users {
            for n in 0..num_subchannels {
                asg.assign(m, n);
            }
        }
        asg
    }

    /// Build from per-subchannel user lists, with zero power.
    pub fn from_users_on(num_users: usize, users_on: &[Vec<usize>]) -> Self {
        let mut asg = Self::empty(num_users, users_on.len());
        for (n, users) in users_on.iter().enumerate() {
            for &m in users {
                asg.assign(m, n);
            }
        }
        asg
    }

    pub fn num_users(&self) -> usize {
        self.omega.len()
    }

    pub fn num_subchannels(&self) -> usize {
        self.num_subchannels
    }

    /// Subchannels held by `user` (Ω_m).
    pub fn subchannels_of(&self, user: usize) -> &BTreeSet<usize> {
        &self.omega[user]
    }

    /// Users superimposed on `subchannel` (M_n).
    pub fn users_on(&self, subchannel: usize) -> &BTreeSet<usize> {
        &self.users_on[subchannel]
    }

    pub fn is_assigned(&self, user: usize, subchannel: usize) -> bool {
        self.omega[user].contains(&subchannel)
    }

    /// Binary indicator matrix `alpha[user][subchannel]`.
    pub fn alpha(&self) -> Vec<Vec<u8>> {
        (0..self.num_users())
            .map(|m| {
                (0..self.num_subchannels)
                    .map(|n| u8::from(self.is_assigned(m, n)))
                    .collect()
            })
            .collect()
    }

    pub fn load(&self, subchannel: usize) -> usize {
        self.users_on[subchannel].len()
    }

    pub fn loads(&self) -> Vec<usize> {
        self.users_on.iter().map(BTreeSet::len).collect()
    }

    /// Used slots `D = sum_n |M_n|`.
    pub fn used_slots(&self) -> usize {
        self.users_on.iter().map(BTreeSet::len).sum()
    }

    #[inline]
    pub fn power(&self, user: usize, subchannel: usize) -> f64 {
        self.power[user * self.num_subchannels + subchannel]
    }

    /// Set the power of an assigned slot.
    ///
    /// # Panics
    /// If the slot is not assigned.
    pub fn set_power(&mut self, user: usize, subchannel: usize, power: f64) {
        assert!(
            self.is_assigned(user, subchannel),
            "power on unassigned slot ({user}, {subchannel})"
        );
        self.power[user * self.num_subchannels + subchannel] = power;
    }

    pub fn total_power(&self, user: usize) -> f64 {
        self.omega[user].iter().map(|&n| self.power(user, n)).sum()
    }

    /// Pair `user` with `subchannel`. Returns false if already paired.
    pub fn assign(&mut self, user: usize, subchannel: usize) -> bool {
        let fresh = self.omega[user].insert(subchannel);
        self.users_on[subchannel].insert(user);
        fresh
    }

    /// Remove a pairing and zero its power. Returns false if it did not exist.
    pub fn unassign(&mut self, user: usize, subchannel: usize) -> bool {
        let existed = self.omega[user].remove(&subchannel);
        self.users_on[subchannel].remove(&user);
        self.power[user * self.num_subchannels + subchannel] = 0.0;
        existed
    }

    /// Split each user's budget equally over its subchannels.
    pub fn equal_split(&mut self, budgets: &[f64]) {
        for (user, &budget) in budgets.iter().enumerate().take(self.num_users()) {
            self.equal_split_user(user, budget);
        }
    }

    pub fn equal_split_user(&mut self, user: usize, budget: f64) {
        let row = user * self.num_subchannels;
        self.power[row..row + self.num_subchannels].fill(0.0);
        let held = self.omega[user].len();
        if held > 0 {
            let share = budget / held as f64;
            for &n in &self.omega[user] {
                self.power[row + n] = share;
            }
        }
    }

    /// Zero every power without touching the mapping.
    pub fn clear_powers(&mut self) {
        self.power.fill(0.0);
    }

    /// Check the cap, the budgets (within `tol`) and mapping consistency.
    pub fn check_feasible(&self, cfg: &SystemConfig, tol: f64) -> Result<(), FeasibilityViolation> {
        if self.num_users() != cfg.num_users || self.num_subchannels != cfg.num_subchannels {
            return Err(FeasibilityViolation::Shape);
        }
        for (m, held) in self.omega.iter().enumerate() {
            for &n in held {
                if !self.users_on[n].contains(&m) {
                    return Err(FeasibilityViolation::Inconsistent { user: m, subchannel: n });
                }
            }
        }
        for (n, users) in self.users_on.iter().enumerate() {
            for &m in users {
                if !self.omega[m].contains(&n) {
                    return Err(FeasibilityViolation::Inconsistent { user: m, subchannel: n });
                }
            }
            if users.len() > cfg.max_per_subchannel {
                return Err(FeasibilityViolation::OverCap {
                    subchannel: n,
                    load: users.len(),
                    cap: cfg.max_per_subchannel,
                });
            }
        }
        for m in 0..self.num_users() {
            for n in 0..self.num_subchannels {
                let p = self.power(m, n);
                if p < 0.0 || p.is_nan() {
                    return Err(FeasibilityViolation::NegativePower { user: m, subchannel: n, power: p });
                }
                if p != 0.0 && !self.is_assigned(m, n) {
                    return Err(FeasibilityViolation::PowerOffSlot { user: m, subchannel: n, power: p });
                }
            }
            let used = self.total_power(m);
            if used > cfg.max_power[m] + tol {
                return Err(FeasibilityViolation::OverBudget {
                    user: m,
                    used,
                    budget: cfg.max_power[m],
                });
            }
        }
        Ok(())
    }
}
