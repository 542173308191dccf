use std::fmt;
use std::io::Write;

use serde::Serialize;
use systolica::Error;

use crate::GlobalOpts;

#[derive(Debug)]
pub enum Failure {
    /// Unreadable, malformed or out-of-range input. Exit code 2.
    Input(String),
    /// An invariant or inequality does not hold, or a computation could not be certified. Exit code 1.
    Violation(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Violation(_) => 1,
            Failure::Input(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) | Failure::Violation(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let input = err.is_input_error()
            || matches!(
                err,
                Error::Domain { .. } | Error::Kink(_) | Error::Unsupported(_) | Error::Construction(_)
            );
        if input {
            Failure::Input(err.to_string())
        } else {
            Failure::Violation(err.to_string())
        }
    }
}

pub type CliResult<T = ()> = std::result::Result<T, Failure>;

pub fn json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::Violation(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

pub fn emit(opts: &GlobalOpts, text: &str) -> CliResult {
    match &opts.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Input(e.to_string()))
        }
    }
}

pub fn csv_field(value: Option<f64>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}
