use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{0} must be at least 1")]
    ZeroDimension(&'static str),
    #[error("{name} must be positive and finite, got {value}")]
    NotPositive { name: &'static str, value: f64 },
    #[error("{0} must be finite")]
    NotFinite(&'static str),
    #[error("ber must lie in (0, 1), got {0}")]
    BerOutOfRange(f64),
    #[error("max_power has {got} entries but there are {expected} users")]
    BudgetLength { expected: usize, got: usize },
    #[error("placement annulus is empty: inner radius {inner} exceeds cell radius {outer}")]
    EmptyAnnulus { inner: f64, outer: f64 },
    #[error("cannot resize a config whose users have different power budgets")]
    NonUniformBudget,
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Error)]
pub enum ChannelError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("could not place {users} users with spacing {spacing} m after {attempts} attempts")]
    Placement {
        users: usize,
        spacing: f64,
        attempts: usize,
    },
    #[error("expected {expected} user positions, got {got}")]
    PositionCount { expected: usize, got: usize },
}

#[derive(Debug, Error, PartialEq)]
pub enum WaterfillError {
    #[error("user has no subchannel with positive gain")]
    Empty,
    #[error("inverse gain {0} is not positive and finite")]
    BadInverseGain(f64),
    #[error("budget {0} is not positive and finite")]
    BadBudget(f64),
}

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("enumeration needs {configs} configurations, limit is {limit}")]
    TooLarge { configs: f64, limit: u64 },
    #[error("user {user} holds {slots} slots, the power grid supports at most 3")]
    TooManySlots { user: usize, slots: usize },
    #[error("power grid needs {points} points, limit is {limit}")]
    GridTooLarge { points: f64, limit: u64 },
    #[error("grid step must lie in (0, 1], got {0}")]
    BadGridStep(f64),
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error("io error on {path}: {source}")]
    Io {
        path: std::path::PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("config parse error: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("unknown scheme {0:?}")]
    UnknownScheme(String),
    #[error("unknown sweep variable {0:?}")]
    UnknownSweep(String),
    #[error("{0}")]
    Invalid(String),
}
