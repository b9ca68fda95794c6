use serde::Serialize;

/// Failures of a command, split by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("{0}")]
    Core(#[from] eqbundle_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Serialize)]
pub struct ErrorObject {
    pub class: &'static str,
    pub kind: String,
    pub message: String,
}

impl CliError {
    pub fn malformed(msg: String) -> Self {
        CliError::Malformed(msg)
    }

    /// `1` for a mathematical rejection, `2` for anything wrong with the input.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_mathematical_rejection() => 1,
            _ => 2,
        }
    }

    pub fn to_object(&self) -> ErrorObject {
        let kind = match self {
            CliError::Malformed(_) => "Malformed".to_owned(),
            CliError::Io(_) => "Io".to_owned(),
            CliError::Core(e) => {
                let dbg = format!("{e:?}");
                dbg.split(['(', ' ']).next().unwrap_or("Core").to_owned()
            }
        };
        ErrorObject {
            class: if self.exit_code() == 1 {
                "mathematical_rejection"
            } else {
                "malformed_input"
            },
            kind,
            message: self.to_string(),
        }
    }
}
