use thiserror::Error;

/// Errors raised by the geometry, enumeration and volume routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("not a glide reflection: square is not hyperbolic")]
    NotAGlide,
    #[error("degenerate image: point mapped onto the ideal boundary")]
    DegenerateImage,
    #[error("no axis: isometry is {0}")]
    NoAxis(&'static str),
    #[error("invalid point: imaginary part must be positive (got {0})")]
    InvalidPoint(f64),
    #[error("degenerate segment: endpoints coincide")]
    DegenerateSegment,

    #[error("invalid pants length {0}")]
    InvalidPantsLength(f64),
    #[error("cannot cap non-geodesic boundary")]
    CapNonGeodesic,
    #[error("core/boundary length mismatch: boundary {boundary}, core {core}")]
    CoreLengthMismatch { boundary: f64, core: f64 },
    #[error("unknown generator '{0}'")]
    UnknownGenerator(char),
    #[error("generator label '{0}' already in use")]
    DuplicateGenerator(char),
    #[error("not a closed geodesic class ({0})")]
    NotClosedGeodesic(&'static str),
    #[error("parameter mismatch: {model} expects {expected} values, got {got}")]
    ParameterMismatch {
        model: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("unknown model '{0}'")]
    UnknownModel(String),
    #[error("surface appears orientable: no one-sided class found")]
    AppearsOrientable,
    #[error("invalid word '{0}'")]
    InvalidWord(String),
    #[error("budget must be at least 1")]
    ZeroBudget,

    #[error("degenerate arc: endpoint lifts coincide")]
    DegenerateArc,
    #[error("invalid collar parameters: {0}")]
    InvalidCollar(String),

    #[error("left positive cone")]
    LeftPositiveCone,
    #[error("tuple does not satisfy the configured equation")]
    NotOnSurface,
    #[error("no seeds")]
    NoSeeds,
    #[error("bound {0} is below every seed")]
    BoundBelowSeeds(u64),
    #[error("bound too large for exhaustive scan ({0} > {1})")]
    BoundTooLarge(u64, u64),
    #[error("unsupported arity {0}")]
    UnsupportedArity(usize),
    #[error("non-primitive word")]
    NonPrimitive,

    #[error("fit window too small: {0} usable points")]
    FitWindowTooSmall(usize),
    #[error("overdetermined simplex: n = {n} > d = {d}")]
    OverdeterminedSimplex { n: usize, d: usize },
    #[error("invalid lengths")]
    InvalidLengths,

    #[error("too many disjoint one-sided curves: {atoms} atoms, genus {genus}")]
    TooManyOneSided { atoms: usize, genus: usize },
    #[error("intersection oracle incomplete: missing pair ({0}, {1})")]
    OracleIncomplete(String, String),
    #[error("unknown curve {0:?}")]
    UnknownCurve(String),
    #[error("invalid lamination: {0}")]
    InvalidLamination(String),

    #[error("outside chart: one-sided length {0} is not positive")]
    OutsideChart(f64),
    #[error("unbounded chart; use divergence profile")]
    UnboundedChart,
    #[error("invalid chart: {0}")]
    InvalidChart(String),

    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
