use super::assignment::Assignment;
use super::channel::ChannelState;
use super::config::SystemConfig;
use super::sic::{decoding_order, slot_rates, OrderKey};

/// Offset inside the proportional-fairness log so zero-rate users stay finite.
pub const PF_EPSILON: f64 = 1e-12;

/// Metrics of one allocation on one frame. Rates are in bits/s/Hz.
#[derive(Debug, Clone, PartialEq)]
pub struct AllocationReport {
    pub system_throughput: f64,
    pub per_user_rate: Vec<f64>,
    pub per_subchannel_rate: Vec<f64>,
    pub per_subchannel_load: Vec<usize>,
    /// `K * N / D` with `D` the used slots; zero when nothing is assigned.
    pub resource_efficiency: f64,
    pub pf_objective: f64,
    /// `(iteration, objective)` pairs from whichever iterative stage produced the allocation.
    pub convergence_trace: Vec<(usize, f64)>,
}

/// Sum of all subchannel SIC rates under the received-power decoding order.
pub fn system_throughput(channel: &ChannelState, asg: &Assignment) -> f64 {
    (0..asg.num_subchannels())
        .map(|n| {
            let ord = decoding_order(channel, asg, n, OrderKey::ReceivedPower);
            slot_rates(channel, asg, &ord).iter().sum::<f64>()
        })
        .sum()
}

pub fn pf_objective(rates: &[f64]) -> f64 {
    rates.iter().map(|r| (r + PF_EPSILON).ln()).sum()
}

/// Full metric report under the received-power decoding order.
pub fn evaluate(channel: &ChannelState, asg: &Assignment, cfg: &SystemConfig) -> AllocationReport {
    let mut per_user_rate = vec![0.0; asg.num_users()];
    let mut per_subchannel_rate = vec![0.0; asg.num_subchannels()];
    for (n, sub_rate) in per_subchannel_rate.iter_mut().enumerate() {
        let ord = decoding_order(channel, asg, n, OrderKey::ReceivedPower);
        for (&m, r) in ord.order.iter().zip(slot_rates(channel, asg, &ord)) {
            per_user_rate[m] += r;
            *sub_rate += r;
        }
    }
    let used = asg.used_slots();
    let resource_efficiency = if used == 0 {
        0.0
    } else {
        cfg.slot_capacity() as f64 / used as f64
    };
    AllocationReport {
        system_throughput: per_user_rate.iter().sum(),
        pf_objective: pf_objective(&per_user_rate),
        per_user_rate,
        per_subchannel_rate,
        per_subchannel_load: asg.loads(),
        resource_efficiency,
        convergence_trace: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::sic::subchannel_capacity;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_power_is_zero_throughput() {
        let cfg = SystemConfig::with_dimensions(2, 2, 2);
        let ch = ChannelState::from_gains(vec![vec![1.0, 2.0], vec![3.0, 4.0]], 1.0);
        let asg = Assignment::full(2, 2);
        let rep = evaluate(&ch, &asg, &cfg);
        assert_eq!(rep.system_throughput, 0.0);
        assert_eq!(rep.resource_efficiency, 1.0);
    }

    #[test]
    fn single_slot_one_bit() {
        let ch = ChannelState::from_gains(vec![vec![0.5]], 1.0);
        let mut asg = Assignment::full(1, 1);
        asg.set_power(0, 0, 2.0);
        assert_relative_eq!(system_throughput(&ch, &asg), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn double_entry_random_3x3() {
        // Second path: rebuild each user's interference set from scratch with
        // an explicit pairwise comparison instead of the sorted suffix.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let gains: Vec<Vec<f64>> = (0..3)
                .map(|_| (0..3).map(|_| rng.random::<f64>() * 4.0).collect())
                .collect();
            let ch = ChannelState::from_gains(gains, 0.7);
            let mut asg = Assignment::empty(3, 3);
            for m in 0..3 {
                for n in 0..3 {
                    if rng.random::<f64>() < 0.7 {
                        asg.assign(m, n);
                        asg.set_power(m, n, rng.random::<f64>() * 10.0);
                    }
                }
            }
            let mut total = 0.0;
            for n in 0..3 {
                let users: Vec<usize> = asg.users_on(n).iter().copied().collect();
                for &m in &users {
                    let rx = |u: usize| asg.power(u, n) * ch.gain(u, n);
                    let decoded_after = |u: usize| rx(u) < rx(m) || (rx(u) == rx(m) && u > m);
                    let interference: f64 = users
                        .iter()
                        .filter(|&&u| u != m && decoded_after(u))
                        .map(|&u| 0.7 * rx(u))
                        .sum();
                    total += (1.0 + 0.7 * rx(m) / (1.0 + interference)).log2();
                }
            }
            let cfg = SystemConfig::with_dimensions(3, 3, 3);
            let rep = evaluate(&ch, &asg, &cfg);
            assert_relative_eq!(rep.system_throughput, total, epsilon = 1e-10);
            assert_relative_eq!(system_throughput(&ch, &asg), total, epsilon = 1e-10);
            let closed: f64 = (0..3).map(|n| subchannel_capacity(&ch, &asg, n)).sum();
            assert_relative_eq!(closed, total, epsilon = 1e-10);
        }
    }

    #[test]
    fn pf_handles_zero_rates() {
        let v = pf_objective(&[0.0, 1.0]);
        assert!(v.is_finite());
        assert_relative_eq!(v, PF_EPSILON.ln() + (1.0 + PF_EPSILON).ln());
    }
}
