use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("input: {0}")]
    Input(String),
    #[error("provider: {0}")]
    Provider(String),
    #[error("offline mode: refused to fetch {0}")]
    Offline(String),
    #[error("cache: {0}")]
    Cache(String),
    #[error("output: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    /// 2 for configuration and input problems, 3 when a provider failed.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Provider(_) => 3,
            _ => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
