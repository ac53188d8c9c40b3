use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("probe polynomial vanishes at the isolated root")]
    ProbeVanishes,
    #[error("both polynomials are zero")]
    BothZero,
    #[error("gcd({k}) does not divide m - 1 = {m_minus_1}")]
    IndivisibleDegree { k: u32, m_minus_1: u32 },
    #[error("{which} has weighted degree {found}, expected {expected}")]
    WrongDegree {
        which: &'static str,
        expected: u32,
        found: String,
    },
    #[error("P and Q have a common factor: {0}")]
    NotCoprime(String),
    #[error("weights must be positive")]
    BadWeights,
    #[error("inconsistent r across the satisfied equations ({0:?})")]
    InconsistentR([Option<u32>; 4]),
    #[error("no non-negative integer r solves the equation of normal-form case {0}")]
    NoIntegerR(&'static str),
    #[error("normal-form pattern violated: {0}")]
    PatternViolation(String),
    #[error("integral hypothesis violated: {0}")]
    HypothesisViolated(&'static str),
    #[error("saddle-node present; origin sectors undefined")]
    InvalidKind,
    #[error("sign sequence violates its symmetry: {0}")]
    SymmetryViolation(String),
    #[error("k = {k} is not in J(m, r) for r = {r}")]
    KOutOfRange { k: u32, r: u32 },
    #[error("sequences have different shapes")]
    ShapeMismatch,
    #[error("sequence is not admissible")]
    NotAdmissible,
    #[error("construction case mismatch: {0}")]
    CaseMismatch(String),
    #[error("no r exists for (p,q,m) = ({0},{1},{2}); the stable set is empty")]
    NoR(u32, u32, u32),
    #[error("r = {r} exceeds the enumeration bound {bound}")]
    BoundExceeded { r: u32, bound: u32 },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("cannot infer the degree m: {0}")]
    DegreeInference(String),
    #[error("field is not structurally stable")]
    NotStable,
    #[error("theorem inapplicable: {0}")]
    NotApplicable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
