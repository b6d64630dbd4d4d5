//! Uplink NOMA resource allocation: user-subchannel matching, power control,
//! baselines, brute-force references, and a frame-level experiment harness.

pub mod audit;
pub mod baselines;
pub mod error;
pub mod exec;
pub mod experiment;
pub mod gp;
pub mod iwf;
pub mod matching;
pub mod model;
pub mod oracle;
pub mod seed;
pub mod stats;

pub use baselines::{baseline_alimari, baseline_mollanoori_fairness, baseline_mollanoori_throughput};
pub use error::{ChannelError, ConfigError, ExperimentError, OracleError, WaterfillError};
pub use exec::ExecMode;
pub use gp::{run_gp, GpOptions};
pub use iwf::{compute_lambda, run_iwf, IwfOptions, WaterfillInstance};
pub use matching::{run_matching, run_matching_with, MatchingOptions};
pub use model::{evaluate, generate_channel, AllocationReport, Assignment, ChannelState, SystemConfig};
pub use oracle::{oracle_assignment, oracle_power, OracleLimits};
