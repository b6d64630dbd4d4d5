//! Successive interference cancellation: decoding order and per-slot rates.
//!
//! A user decoded at position `k` on a subchannel sees every user decoded
//! after it as interference. All rates use gap-scaled gains, so a slot rate is
//! `log2(1 + Γpg / (1 + Γ Σ_interferers pg))`.

use super::assignment::Assignment;
use super::channel::ChannelState;

/// Sort key for the per-subchannel decoding order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderKey {
    /// Descending `p * g`; used while powers are fixed.
    ReceivedPower,
    /// Descending `g`; used while powers are being re-optimized.
    Gain,
}

/// Decoding sequence of one subchannel, first-decoded user first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodingOrder {
    pub subchannel: usize,
    pub order: Vec<usize>,
}

impl DecodingOrder {
    /// Users decoded after `user` (the set M_n^m), or `None` if `user` is not on this subchannel.
    pub fn interferers(&self, user: usize) -> Option<&[usize]> {
        let pos = self.order.iter().position(|&u| u == user)?;
        Some(&self.order[pos + 1..])
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

/// Decoding order on `subchannel`; ties fall back to ascending user id.
pub fn decoding_order(
    channel: &ChannelState,
    asg: &Assignment,
    subchannel: usize,
    key: OrderKey,
) -> DecodingOrder {
    let score = |m: usize| match key {
        OrderKey::ReceivedPower => asg.power(m, subchannel) * channel.gain(m, subchannel),
        OrderKey::Gain => channel.gain(m, subchannel),
    };
    // users_on is ascending, and the sort is stable.
    let mut order: Vec<usize> = asg.users_on(subchannel).iter().copied().collect();
    order.sort_by(|&a, &b| score(b).total_cmp(&score(a)));
    DecodingOrder { subchannel, order }
}

/// Per-user rates on one subchannel, aligned with `ord.order`.
pub fn slot_rates(channel: &ChannelState, asg: &Assignment, ord: &DecodingOrder) -> Vec<f64> {
    let n = ord.subchannel;
    let mut rates = vec![0.0; ord.order.len()];
    let mut interference = 0.0;
    for (k, &m) in ord.order.iter().enumerate().rev() {
        let rx = asg.power(m, n) * channel.effective_gain(m, n);
        rates[k] = (1.0 + rx / (1.0 + interference)).log2();
        interference += rx;
    }
    rates
}

/// Sum of the SIC rates of every user on `ord.subchannel`; zero when empty.
pub fn subchannel_rate(channel: &ChannelState, asg: &Assignment, ord: &DecodingOrder) -> f64 {
    slot_rates(channel, asg, ord).iter().sum()
}

/// Total gap-scaled received power on a subchannel, `Γ Σ_m p g`.
pub fn received_power(channel: &ChannelState, asg: &Assignment, subchannel: usize) -> f64 {
    asg.users_on(subchannel)
        .iter()
        .map(|&m| asg.power(m, subchannel) * channel.effective_gain(m, subchannel))
        .sum()
}

/// `log2(1 + Γ Σ_m p g)`: the subchannel sum rate in telescoped form.
///
/// Equal to [`subchannel_rate`] for any decoding order, because the
/// interferer sets are nested suffixes of the order.
pub fn subchannel_capacity(channel: &ChannelState, asg: &Assignment, subchannel: usize) -> f64 {
    (1.0 + received_power(channel, asg, subchannel)).log2()
}

/// Sum of [`subchannel_capacity`] over all subchannels; the power-stage objective.
pub fn capacity_objective(channel: &ChannelState, asg: &Assignment) -> f64 {
    (0..asg.num_subchannels())
        .map(|n| subchannel_capacity(channel, asg, n))
        .sum()
}
