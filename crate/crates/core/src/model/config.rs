use serde::{Deserialize, Serialize};

use crate::error::ConfigError;

/// Static dimensions and physical parameters of one uplink cell.
///
/// Gains produced from this configuration are normalized by the noise power,
/// so powers are in watts and `p * g` is a received SNR.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemConfig {
    pub num_users: usize,
    pub num_subchannels: usize,
    /// Maximum number of users superimposed on one subchannel (K).
    pub max_per_subchannel: usize,
    /// Per-user power budget in watts. Must have `num_users` entries.
    pub max_power: Vec<f64>,
    pub bandwidth_per_subchannel: f64,
    pub ber: f64,
    pub cell_radius: f64,
    pub min_user_bs_distance: f64,
    pub min_user_spacing: f64,
    pub ref_distance: f64,
    pub ref_snr_db: f64,
    /// Variance (dB²) of the log-normal shadowing term. Zero disables shadowing.
    pub shadowing_variance_db: f64,
    pub rayleigh_scale: f64,
    /// When false the small-scale fading power is fixed at 1.
    pub rayleigh_fading: bool,
    pub pathloss_exponent: f64,
    pub rng_seed: u64,
}

pub const DEFAULT_MAX_POWER: f64 = 30.0;

impl Default for SystemConfig {
    fn default() -> Self {
        let num_users = 40;
        Self {
            num_users,
            num_subchannels: 20,
            max_per_subchannel: 6,
            max_power: vec![DEFAULT_MAX_POWER; num_users],
            bandwidth_per_subchannel: 200e3,
            ber: 1e-6,
            cell_radius: 500.0,
            min_user_bs_distance: 50.0,
            min_user_spacing: 40.0,
            ref_distance: 1000.0,
            ref_snr_db: 28.0,
            shadowing_variance_db: 3.76,
            rayleigh_scale: 10.0,
            rayleigh_fading: true,
            pathloss_exponent: 3.76,
            rng_seed: 1,
        }
    }
}

impl SystemConfig {
    /// Default physical parameters with the given dimensions and a uniform budget.
    pub fn with_dimensions(num_users: usize, num_subchannels: usize, k: usize) -> Self {
        Self {
            num_users,
            num_subchannels,
            max_per_subchannel: k,
            max_power: vec![DEFAULT_MAX_POWER; num_users],
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = |name: &'static str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(ConfigError::NotPositive { name, value: v })
            }
        };
        if self.num_users == 0 {
            return Err(ConfigError::ZeroDimension("num_users"));
        }
        if self.num_subchannels == 0 {
            return Err(ConfigError::ZeroDimension("num_subchannels"));
        }
        if self.max_per_subchannel == 0 {
            return Err(ConfigError::ZeroDimension("max_per_subchannel"));
        }
        if self.max_power.len() != self.num_users {
            return Err(ConfigError::BudgetLength {
                expected: self.num_users,
                got: self.max_power.len(),
            });
        }
        for &p in &self.max_power {
            positive("max_power", p)?;
        }
        positive("bandwidth_per_subchannel", self.bandwidth_per_subchannel)?;
        if !(self.ber > 0.0 && self.ber < 1.0) {
            return Err(ConfigError::BerOutOfRange(self.ber));
        }
        positive("cell_radius", self.cell_radius)?;
        positive("min_user_bs_distance", self.min_user_bs_distance)?;
        positive("min_user_spacing", self.min_user_spacing)?;
        positive("ref_distance", self.ref_distance)?;
        positive("rayleigh_scale", self.rayleigh_scale)?;
        positive("pathloss_exponent", self.pathloss_exponent)?;
        if !self.ref_snr_db.is_finite() {
            return Err(ConfigError::NotFinite("ref_snr_db"));
        }
        if !(self.shadowing_variance_db.is_finite() && self.shadowing_variance_db >= 0.0) {
            return Err(ConfigError::NotPositive {
                name: "shadowing_variance_db",
                value: self.shadowing_variance_db,
            });
        }
        if self.min_user_bs_distance > self.cell_radius {
            return Err(ConfigError::EmptyAnnulus {
                inner: self.min_user_bs_distance,
                outer: self.cell_radius,
            });
        }
        Ok(())
    }

    /// Same physical parameters with a different user count.
    ///
    /// Only defined when every user shares one budget, since new users need a value.
    pub fn with_num_users(&self, num_users: usize) -> Result<Self, ConfigError> {
        let budget = self.uniform_budget().ok_or(ConfigError::NonUniformBudget)?;
        Ok(Self {
            num_users,
            max_power: vec![budget; num_users],
            ..self.clone()
        })
    }

    pub fn uniform_budget(&self) -> Option<f64> {
        let first = *self.max_power.first()?;
        self.max_power.iter().all(|&p| p == first).then_some(first)
    }

    /// SNR gap for the configured target bit error rate.
    pub fn sinr_gap(&self) -> f64 {
        sinr_gap(self.ber)
    }

    /// Upper bound on used subchannel-user slots, `K * N`.
    pub fn slot_capacity(&self) -> usize {
        self.max_per_subchannel * self.num_subchannels
    }
}

/// SNR gap `-1.5 / ln(5 * ber)` of practical modulation at the given bit error rate.
pub fn sinr_gap(ber: f64) -> f64 {
    -1.5 / (5.0 * ber).ln()
}
