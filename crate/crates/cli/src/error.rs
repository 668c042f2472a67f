use serde_json::{json, Value};

/// Failure reported on stderr as one JSON object.
#[derive(Debug)]
pub struct CliError {
    pub kind: String,
    pub message: String,
    pub module: Option<&'static str>,
    pub stage: Option<usize>,
    pub exit_code: i32,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError {
            kind: "ConfigParseError".into(),
            message: message.into(),
            module: Some("cli"),
            stage: None,
            exit_code: 2,
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        CliError {
            kind: "IoError".into(),
            message: message.into(),
            module: Some("cli"),
            stage: None,
            exit_code: 1,
        }
    }

    /// Wraps a library error with the module it came from.
    pub fn numeric(module: &'static str, err: chronoscope::Error) -> Self {
        let message = err.to_string();
        let (kind, stage) = match err {
            chronoscope::Error::Stage { stage, source } => (source.kind(), Some(stage)),
            other => (other.kind(), None),
        };
        CliError {
            kind: kind.into(),
            message,
            module: Some(module),
            stage,
            exit_code: 1,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut body = json!({ "kind": self.kind, "message": self.message });
        if let Some(m) = self.module {
            body["module"] = json!(m);
        }
        if let Some(s) = self.stage {
            body["stage"] = json!(s);
        }
        json!({ "error": body })
    }
}

/// Attaches a module name to library results.
pub trait Context<T> {
    fn ctx(self, module: &'static str) -> Result<T, CliError>;
}

impl<T> Context<T> for chronoscope::Result<T> {
    fn ctx(self, module: &'static str) -> Result<T, CliError> {
        self.map_err(|e| CliError::numeric(module, e))
    }
}
