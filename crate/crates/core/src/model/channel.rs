//! Per-frame channel generation.
//!
//! Gains follow a log-distance path-loss model anchored at the reference
//! distance and SNR, with per-user log-normal shadowing and per-slot Rayleigh
//! fading whose power is normalized to unit mean.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::config::{sinr_gap, SystemConfig};
use crate::error::{ChannelError, ConfigError};
use crate::seed::mix_seed;

const PLACEMENT_ATTEMPTS_PER_USER: usize = 10_000;

/// Noise-normalized gains of one frame, indexed `[user][subchannel]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelState {
    num_users: usize,
    num_subchannels: usize,
    gains: Vec<f64>,
    positions: Vec<[f64; 2]>,
    sinr_gap: f64,
}

impl ChannelState {
    /// Build a channel directly from a gain matrix. Positions are left empty.
    pub fn from_gains(gains: Vec<Vec<f64>>, sinr_gap: f64) -> Self {
        let num_users = gains.len();
        let num_subchannels = gains.first().map_or(0, Vec::len);
        assert!(
            gains.iter().all(|row| row.len() == num_subchannels),
            "gain matrix rows must have equal length"
        );
        assert!(
            gains.iter().flatten().all(|g| g.is_finite() && *g >= 0.0),
            "gains must be finite and non-negative"
        );
        assert!(sinr_gap > 0.0 && sinr_gap.is_finite());
        Self {
            num_users,
            num_subchannels,
            gains: gains.into_iter().flatten().collect(),
            positions: Vec::new(),
            sinr_gap,
        }
    }

    /// Draw gains for users at fixed positions.
    ///
    /// The fading and shadowing streams depend only on `(cfg.rng_seed, frame_index)`.
    pub fn from_positions(
        cfg: &SystemConfig,
        positions: Vec<[f64; 2]>,
        frame_index: u64,
    ) -> Result<Self, ChannelError> {
        cfg.validate()?;
        if positions.len() != cfg.num_users {
            return Err(ChannelError::PositionCount {
                expected: cfg.num_users,
                got: positions.len(),
            });
        }
        let mut rng = fading_rng(cfg, frame_index);
        Ok(draw_gains(cfg, positions, &mut rng))
    }

    pub fn num_users(&self) -> usize {
        self.num_users
    }

    pub fn num_subchannels(&self) -> usize {
        self.num_subchannels
    }

    #[inline]
    pub fn gain(&self, user: usize, subchannel: usize) -> f64 {
        self.gains[user * self.num_subchannels + subchannel]
    }

    /// Gain scaled by the SNR gap; every rate formula works on this quantity.
    #[inline]
    pub fn effective_gain(&self, user: usize, subchannel: usize) -> f64 {
        self.sinr_gap * self.gain(user, subchannel)
    }

    pub fn user_gains(&self, user: usize) -> &[f64] {
        let start = user * self.num_subchannels;
        &self.gains[start..start + self.num_subchannels]
    }

    pub fn positions(&self) -> &[[f64; 2]] {
        &self.positions
    }

    pub fn sinr_gap(&self) -> f64 {
        self.sinr_gap
    }

    /// Largest gain of a user over all subchannels.
    pub fn best_gain(&self, user: usize) -> f64 {
        self.user_gains(user).iter().copied().fold(0.0, f64::max)
    }
}

/// Generate the channel for one frame, deterministic in `(cfg.rng_seed, frame_index)`.
pub fn generate_channel(cfg: &SystemConfig, frame_index: u64) -> Result<ChannelState, ChannelError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(&[cfg.rng_seed, frame_index, 0]));
    let positions = place_users(cfg, &mut rng)?;
    let mut rng = fading_rng(cfg, frame_index);
    Ok(draw_gains(cfg, positions, &mut rng))
}

fn fading_rng(cfg: &SystemConfig, frame_index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix_seed(&[cfg.rng_seed, frame_index, 1]))
}

/// Uniform placement over the annulus with a minimum pairwise spacing.
fn place_users<R: Rng>(cfg: &SystemConfig, rng: &mut R) -> Result<Vec<[f64; 2]>, ChannelError> {
    let inner2 = cfg.min_user_bs_distance.powi(2);
    let outer2 = cfg.cell_radius.powi(2);
    let spacing2 = cfg.min_user_spacing.powi(2);
    let budget = PLACEMENT_ATTEMPTS_PER_USER * cfg.num_users;
    let mut positions: Vec<[f64; 2]> = Vec::with_capacity(cfg.num_users);
    let mut attempts = 0;
    while positions.len() < cfg.num_users {
        if attempts == budget {
            return Err(ChannelError::Placement {
                users: cfg.num_users,
                spacing: cfg.min_user_spacing,
                attempts,
            });
        }
        attempts += 1;
        let r = (inner2 + rng.random::<f64>() * (outer2 - inner2)).sqrt();
        let theta = rng.random::<f64>() * std::f64::consts::TAU;
        let candidate = [r * theta.cos(), r * theta.sin()];
        let clear = positions.iter().all(|p| {
            let dx = p[0] - candidate[0];
            let dy = p[1] - candidate[1];
            dx * dx + dy * dy >= spacing2
        });
        if clear {
            positions.push(candidate);
        }
    }
    Ok(positions)
}

fn draw_gains<R: Rng>(cfg: &SystemConfig, positions: Vec<[f64; 2]>, rng: &mut R) -> ChannelState {
    let ref_snr = 10f64.powf(cfg.ref_snr_db / 10.0);
    let shadow = Normal::new(0.0, cfg.shadowing_variance_db.sqrt())
        .map_err(|e| ConfigError::Invalid(e.to_string()))
        .expect("validated shadowing variance");
    let fading_mean = rayleigh_power_mean(cfg.rayleigh_scale);
    let mut gains = Vec::with_capacity(cfg.num_users * cfg.num_subchannels);
    for pos in &positions {
        let distance = pos[0].hypot(pos[1]).max(f64::MIN_POSITIVE);
        let path = ref_snr * (cfg.ref_distance / distance).powf(cfg.pathloss_exponent);
        let shadow_db = shadow.sample(rng);
        let large_scale = path * 10f64.powf(shadow_db / 10.0);
        for _ in 0..cfg.num_subchannels {
            let fading = if cfg.rayleigh_fading {
                sample_rayleigh_power(rng, cfg.rayleigh_scale) / fading_mean
            } else {
                1.0
            };
            gains.push(large_scale * fading);
        }
    }
    ChannelState {
        num_users: cfg.num_users,
        num_subchannels: cfg.num_subchannels,
        gains,
        positions,
        sinr_gap: sinr_gap(cfg.ber),
    }
}

/// Squared magnitude of a Rayleigh-distributed amplitude with scale `sigma`.
pub fn sample_rayleigh_power<R: Rng>(rng: &mut R, sigma: f64) -> f64 {
    // 1 - U lies in (0, 1], so the log is finite.
    let u: f64 = 1.0 - rng.random::<f64>();
    let amplitude = sigma * (-2.0 * u.ln()).sqrt();
    amplitude * amplitude
}

/// Mean of `sample_rayleigh_power`, `2 sigma^2`.
pub fn rayleigh_power_mean(sigma: f64) -> f64 {
    2.0 * sigma * sigma
}
