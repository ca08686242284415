use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("not a unit element (|g| = {0})")]
    NotUnit(f64),
    #[error("vector not tangent to the coset at this point (normal part {0:.3e})")]
    NotTangent(f64),
    #[error("potential is not isotropic-valued (residual {0:.3e})")]
    NotIsotropic(f64),
    #[error("field too rough for grid: link angle {angle:.6} at site {site}")]
    TooRough { site: usize, angle: f64 },
    #[error("field not nullhomotopic on 2-skeleton; Whitehead integral undefined on T³ (flux {0:.3e})")]
    NonzeroFlux(f64),
    #[error("degenerate preimage: {0}; try a different regular value")]
    DegeneratePreimage(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("factorization residual {0:.3e} exceeds tolerance")]
    Factorization(f64),
    #[error("snapshot: {0}")]
    Snapshot(String),
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
