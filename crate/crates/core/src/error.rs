use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    InvalidVertex { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),

    #[error("{{{0}, {1}}} is not an edge")]
    NotAnEdge(usize, usize),

    #[error("vertex {0} is not reachable from the source")]
    Unreachable(usize),

    #[error("interval view needs d(x) < d(y), got d(x) = {dx}, d(y) = {dy}")]
    EmptyInterval { dx: usize, dy: usize },

    #[error("vertex {0} is not in the subgraph view")]
    NotInView(usize),

    #[error("query violates len + 1 >= k1 + 2*l2 (len = {len}, k1 = {k1}, l2 = {l2})")]
    InfeasibleSignature { len: usize, k1: usize, l2: usize },

    #[error("label budget {requested} exceeds the cap of {cap}")]
    LabelBudgetExceeded { requested: usize, cap: usize },

    #[error("brute-force guard: {what} is {value}, limit {limit}")]
    OracleGuard {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("detour parameter k = {k} exceeds the supported maximum {max}")]
    DetourTooLarge { k: usize, max: usize },

    #[error("invalid alpha {num}/{den}: need den > 0 and 0 <= num/den < 1")]
    InvalidAlpha { num: u64, den: u64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
