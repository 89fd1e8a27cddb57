use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("insufficient points: need at least {needed}, got {got}")]
    InsufficientPoints { needed: usize, got: usize },

    #[error("domain error: {0}")]
    Domain(String),

    /// The circle through a pair lies entirely outside the region, so the
    /// reciprocal edge weight is undefined.
    #[error("degenerate edge weight at ({x}, {y}) radius {radius}")]
    DegenerateWeight { x: f64, y: f64, radius: f64 },

    #[error("degenerate window: {0}")]
    DegenerateWindow(String),

    #[error("invalid radius grid: smallest radius {t_min} is not below largest radius {t_max}")]
    InvalidRadiusGrid { t_min: f64, t_max: f64 },

    #[error("rejection sampling acceptance rate {rate:e} is below {floor:e}")]
    SamplingInefficiency { rate: f64, floor: f64 },

    #[error("insufficient sample: N = {0}, both tests need at least 2 points")]
    InsufficientSample(usize),

    #[error("feature {feature}: {reason}")]
    Load { feature: String, reason: String },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("envelope simulation {index} failed: {source}")]
    Simulation { index: usize, source: Box<Error> },

    #[error("replicate {index} failed: {source}")]
    Replicate { index: usize, source: Box<Error> },

    #[error("render error: {0}")]
    Render(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for errors that indicate a broken internal invariant rather than
    /// bad input.
    pub fn is_internal(&self) -> bool {
        match self {
            Error::Contract(_) => true,
            Error::Simulation { source, .. } | Error::Replicate { source, .. } => source.is_internal(),
            _ => false,
        }
    }
}
