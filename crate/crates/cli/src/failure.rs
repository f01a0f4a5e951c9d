use std::fmt;

/// A command failure, classified by exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad invocation or unparsable query text; exit code 1.
    Usage(String),
    /// Bad data, unknown names, type errors; exit code 2.
    Data(String),
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Self {
        Failure::Usage(msg.into())
    }

    pub fn data(msg: impl Into<String>) -> Self {
        Failure::Data(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Data(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for Failure {}

impl From<polyalg::Error> for Failure {
    fn from(e: polyalg::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

impl From<polyalg::rel::ParseError> for Failure {
    fn from(e: polyalg::rel::ParseError) -> Self {
        Failure::Usage(format!("query parse error: {e}"))
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

pub type Outcome<T> = std::result::Result<T, Failure>;
