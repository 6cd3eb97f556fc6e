use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("instance declares {agents} agents but {items} items")]
    SizeMismatch { agents: usize, items: usize },

    #[error("assignment {which} is not a bijection: {detail}")]
    NotBijection { which: String, detail: String },

    #[error("assignment {which} gives agent {agent} item {item}, which it does not accept")]
    UnacceptableItem {
        which: String,
        agent: String,
        item: String,
    },

    #[error("bad edge {u} -- {v}: {reason}")]
    BadEdge { u: String, v: String, reason: String },

    #[error("edge {u} -- {v} listed twice")]
    DuplicateEdge { u: String, v: String },

    #[error("illegal swap between agents {first} and {second}")]
    IllegalSwap { first: usize, second: usize },

    #[error("inconsistent matching constraints: {0}")]
    InconsistentConstraints(String),

    #[error("communication graph is not a tree")]
    NotATree,

    #[error("item {0} is already in the set")]
    ItemInSet(usize),

    #[error("item set is empty")]
    EmptySet,

    #[error("item set is not stable")]
    NotStable,

    #[error("agents of the stable set do not induce a connected subgraph")]
    NotConnectedRegion,

    #[error("reconfiguration sequence exceeded the cap of {0} moves")]
    CapExceeded(usize),

    #[error("target assignment is not reachable from the source assignment")]
    NotYesInstance,

    #[error("more than {0} assignments")]
    LimitExceeded(usize),

    #[error("{items} items exceeds the enumeration bound of {bound}")]
    TooLarge { items: usize, bound: usize },

    #[error("{0} is not a perfect matching of the bipartite graph")]
    NotPerfectMatching(String),

    #[error("invalid exchange: {0}")]
    InvalidExchange(String),

    #[error("invalid sequence at step {step}: {reason}")]
    InvalidSequence { step: usize, reason: String },

    #[error("instance generation failed: {0}")]
    GenerationFailed(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// A construction step whose existence is guaranteed found nothing.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
