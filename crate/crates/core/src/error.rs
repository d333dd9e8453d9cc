use thiserror::Error;

/// Errors produced by the mrmodel library.
#[derive(Debug, Error)]
pub enum Error {
    /// Fewer training runs than model coefficients.
    #[error("insufficient data: need at least {needed} runs to fit {needed} coefficients, got {got}")]
    InsufficientData { needed: usize, got: usize },

    /// The standardized design matrix does not have full column rank.
    /// Carries the names of the deficient column families so callers can
    /// report which parameters must be varied.
    #[error("design matrix is rank deficient (columns: {}); vary the affected parameters across runs", columns.join(", "))]
    RankDeficient { columns: Vec<String> },

    /// A sampling range with lo > hi or a non-positive lower bound.
    #[error("invalid range for {field}: [{lo}, {hi}] (need 0 < lo <= hi)")]
    InvalidRange { field: &'static str, lo: f64, hi: f64 },

    /// The profile's noiseless cost polynomial is not positive at a config.
    #[error("profile {app_name:?} has non-positive ground-truth cost ({value}) at map={map}, reduce={reduce}, fs_size={fs_size}, in_size={in_size}")]
    NonPositiveGroundTruth {
        app_name: String,
        value: f64,
        map: u32,
        reduce: u32,
        fs_size: f64,
        in_size: f64,
    },

    /// No valid warping path exists under the requested Sakoe-Chiba band.
    #[error("band half-width {band} is narrower than the length difference {diff}; no warping path exists")]
    BandTooNarrow { band: usize, diff: usize },

    /// A series became constant, so correlation (or z-normalization) is undefined.
    #[error("zero variance in {which} series; correlation is undefined")]
    ZeroVariance { which: &'static str },

    /// An operation that needs at least one run received none.
    #[error("no runs given")]
    EmptyInput,

    /// A batch step failed; carries the index of the offending run.
    #[error("run {index}: {source}")]
    AtIndex {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    /// Every run had cpu_total = 0, so no percentage error can be formed.
    #[error("all runs have zero observed CPU; percentage errors are undefined")]
    AllZeroActuals,

    /// A domain value violated a type invariant.
    #[error("invalid {what}: {why}")]
    InvalidValue { what: &'static str, why: String },

    /// A file had the right syntax but the wrong shape or content.
    #[error("{path}: {problem}")]
    FileFormat { path: String, problem: String },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: String,
        #[source]
        source: csv::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
