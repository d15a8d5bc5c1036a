use std::fmt;

use serde::Serialize;
use serde_json::Value;

use crate::{ExperimentConfig, Format};

/// Why an invocation produced no report.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags or unreadable files.
    Malformed(String),
    Core(orbitlab::Error),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Malformed(msg) => write!(f, "malformed input: {msg}"),
            Failure::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<orbitlab::Error> for Failure {
    fn from(e: orbitlab::Error) -> Self {
        Failure::Core(e)
    }
}

pub fn exit_code(e: &orbitlab::Error) -> u8 {
    match e {
        orbitlab::Error::Malformed(_) => 2,
        orbitlab::Error::CapExceeded { .. } => 3,
        orbitlab::Error::Violation(_) | orbitlab::Error::NoExtension(_) => 1,
    }
}

/// Rendered output of a successful run.
pub struct Output {
    pub text: String,
    /// The checked property failed; the report carries the witness.
    pub violated: bool,
}

fn config_json(config: &ExperimentConfig) -> Value {
    serde_json::to_value(config).expect("config serializes")
}

/// A JSON report: tool version, the full config and the result.
pub fn json<T: Serialize>(config: &ExperimentConfig, result: &T, violated: bool) -> Output {
    #[derive(Serialize)]
    struct Envelope<'a, T> {
        tool: &'static str,
        version: &'static str,
        config: Value,
        status: &'static str,
        result: &'a T,
    }
    let envelope = Envelope {
        tool: "orbitlab",
        version: orbitlab::VERSION,
        config: config_json(config),
        status: status(violated),
        result,
    };
    let mut text = serde_json::to_string_pretty(&envelope).expect("report serializes");
    text.push('\n');
    Output { text, violated }
}

/// Plain output preceded by `#` comment lines carrying version and config.
pub fn commented(config: &ExperimentConfig, body: &str, violated: bool) -> Output {
    let mut text = format!(
        "# orbitlab {}\n# config: {}\n# status: {}\n",
        orbitlab::VERSION,
        config_json(config),
        status(violated)
    );
    text.push_str(body);
    if !text.ends_with('\n') {
        text.push('\n');
    }
    Output { text, violated }
}

fn status(violated: bool) -> &'static str {
    if violated {
        "violation"
    } else {
        "ok"
    }
}

/// Renders with the configured format, refusing formats the subcommand
/// does not offer.
pub fn render<T: Serialize>(
    config: &ExperimentConfig,
    result: &T,
    violated: bool,
    plain: Option<&dyn Fn() -> String>,
    allowed: &[Format],
) -> Result<Output, Failure> {
    let format = config.options.format.unwrap_or(Format::Json);
    if !allowed.contains(&format) {
        return Err(Failure::Malformed(format!(
            "format {} is not available here",
            serde_json::to_value(format).expect("format serializes")
        )));
    }
    Ok(match (format, plain) {
        (Format::Json, _) | (_, None) => json(config, result, violated),
        (_, Some(body)) => commented(config, &body(), violated),
    })
}
