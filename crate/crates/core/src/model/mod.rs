//! Domain types, channel generation and the SIC rate model.

pub mod assignment;
pub mod channel;
pub mod config;
pub mod report;
pub mod sic;

pub use assignment::{Assignment, FeasibilityViolation};
pub use channel::{generate_channel, ChannelState};
pub use config::{sinr_gap, SystemConfig};
pub use report::{evaluate, system_throughput, AllocationReport};
pub use sic::{decoding_order, subchannel_rate, DecodingOrder, OrderKey};
