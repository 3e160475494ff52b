use crate::rewrite::Substrate;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("substrate mismatch: expected {expected}, found {found}")]
    SubstrateMismatch { expected: Substrate, found: Substrate },
    #[error("rule `{0}` cannot be inverted: its right-hand side is not a valid left-hand side")]
    NonInvertibleRule(String),
    #[error("rule `{0}` has an empty left-hand side")]
    EmptyLhs(String),
    #[error("rule `{0}` has a bare variable as its left-hand side")]
    BareVariableLhs(String),
    #[error("rule `{rule}`: variable `{var}` on the right-hand side is unbound")]
    UnboundVariable { rule: String, var: String },
    #[error("match is stale: the host state no longer contains the matched fragment")]
    StaleMatch,
    #[error("hyperedge of arity {0} is not allowed here (only unary and binary edges)")]
    ArityError(usize),
    #[error("terms are incomparable under the chosen ordering")]
    Incomparable,
    #[error("state cap of {0} exceeded")]
    FrontierLimitExceeded(usize),
    #[error("graph contains a cycle")]
    CyclicGraph,
    #[error("state key `{0}` not found")]
    KeyNotFound(String),
    #[error("token {0} is produced by more than one event")]
    DuplicateTokenProduction(u64),
    #[error("paths have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("paths do not share their first and last states")]
    EndpointMismatch,
    #[error("cells do not compose: {0}")]
    NotComposable(String),
    #[error("operation not supported for the {0} substrate")]
    SubstrateUnsupported(Substrate),
    #[error("cannot orient equation {lhs} = {rhs}")]
    OrderFailure { lhs: String, rhs: String },
    #[error("completion diverged after {iterations} iterations with {rules} rules")]
    Diverged { iterations: usize, rules: usize },
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("undeclared symbol `{0}`")]
    UndeclaredSymbol(String),
    #[error("symbol `{symbol}` used with arity {found} but previously with arity {expected}")]
    ArityClash {
        symbol: String,
        expected: usize,
        found: usize,
    },
}

impl Error {
    pub(crate) fn syntax(column: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            column,
            message: message.into(),
        }
    }
}
