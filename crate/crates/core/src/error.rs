use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("agent index {index} out of range for {n} agents")]
    AgentOutOfRange { index: usize, n: usize },

    #[error("self pair ({i},{i}) is not allowed")]
    SelfPair { i: usize },

    #[error("duplicate pair entry ({i},{j})")]
    DuplicatePair { i: usize, j: usize },

    #[error("utility magnitude {value} exceeds the supported range")]
    UtilityOutOfRange { value: i64 },

    #[error("instance has {n} agents, more than the supported {limit}")]
    TooManyAgents { n: usize, limit: usize },

    #[error("instance is flagged symmetric but u[{i}][{j}] differs from u[{j}][{i}]")]
    AsymmetricEntry { i: usize, j: usize },

    #[error("utility sum overflowed")]
    Overflow,

    #[error("blocks do not partition the agent set")]
    NotAPartition,

    #[error("problem size {n} exceeds the configured bound {bound}")]
    BoundExceeded { n: usize, bound: usize },

    #[error("operation requires symmetric utilities in {{-inf, 1}}")]
    NotFriendsEnemies,

    #[error("no polynomial dynamics for defection budget {k}; supported budgets are 3 and 4")]
    UnsupportedBudget { k: usize },

    #[error("defection has no participants")]
    EmptyDefection,

    #[error("attachment {index} is not a residual component adjacent to the participants")]
    BadAttachment { index: usize },

    #[error("scripted move {step} does not strictly improve participant {agent}")]
    MoveNotImproving { step: usize, agent: usize },

    #[error("potential failed to increase at step {step}")]
    PotentialStalled { step: usize },

    #[error("repair step {step} raised welfare above the claimed optimum; input was not welfare-optimal")]
    NotWelfareOptimal { step: usize },

    #[error("repair step {step} lowered total welfare")]
    WelfareDropped { step: usize },

    #[error("malformed preference profile: {0}")]
    BadPreferences(String),

    #[error("triple {index} does not induce a triangle")]
    NotATriangle { index: usize },

    #[error("coloring block {index} is not an independent set")]
    BlockNotIndependent { index: usize },

    #[error("generator parameter error: {0}")]
    BadGeneratorParams(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
