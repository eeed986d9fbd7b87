use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {0}: {1}")]
    Io(String, #[source] std::io::Error),

    #[error("malformed config: {0}")]
    Syntax(String),

    #[error("config field `{field}`: {msg}")]
    Field { field: String, msg: String },
}
