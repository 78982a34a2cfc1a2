use serde_json::json;

pub type CliResult<T> = Result<T, CliError>;

/// Reported on stderr as one JSON line: `{"error", "message", "hint"}`.
#[derive(Debug)]
pub struct CliError {
    pub kind: String,
    pub message: String,
    pub hint: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>, hint: impl Into<String>) -> Self {
        Self {
            kind: "usage".into(),
            message: message.into(),
            hint: hint.into(),
        }
    }

    pub fn to_json(&self) -> String {
        json!({ "error": self.kind, "message": self.message, "hint": self.hint }).to_string()
    }

    pub fn exit_code(&self) -> i32 {
        if self.kind == "usage" {
            2
        } else {
            1
        }
    }
}

fn hint_for(err: &foilspace::Error) -> &'static str {
    use foilspace::Error::*;
    match err {
        Contract(_) => "check input shapes and that samples are normalized to [-1, 1]",
        Domain(_) => "check parameter values against the parameterization's valid ranges",
        LeadingEdgeSingularity => "evaluate slopes away from l = 0",
        IllPosedFit { .. } => {
            "use more samples: a quadratic in m variables needs (m+1)(m+2)/2, ideally twice that"
        }
        Conditioning { .. } => "move the crest position away from 0",
        DegenerateInterval { .. } => {
            "give that coordinate explicit bounds instead of a relative range"
        }
        OutOfRange { .. } => "samples must come from the same box given with --box",
        BootstrapExhausted { .. } => "use more samples or a lower-dimensional input",
        NoStructure => {
            "the output is constant on the samples; pass --dim explicitly or check the QoI"
        }
        UnsupportedExpansion { .. } => "use class exponents r1 = 0.5, r2 = 1",
        Infeasible(_) => "choose parameters whose upper surface stays above the lower surface",
        Evaluation { .. } => "check the QoI inputs; failed rows can be skipped in batch runs",
        Parse { .. } => "CSV files need a header x1..xm[,f] and numeric fields",
        DuplicateConflict { .. } => "remove or reconcile the repeated design",
        DimensionMismatch { .. } => {
            "the box, samples and QoI must agree on the number of parameters"
        }
        Io(_) => "check that the path exists and is writable",
        Json(_) => "check the JSON file against the documented schema",
    }
}

impl From<foilspace::Error> for CliError {
    fn from(err: foilspace::Error) -> Self {
        Self {
            kind: err.kind().into(),
            hint: hint_for(&err).into(),
            message: err.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        foilspace::Error::from(err).into()
    }
}

impl From<serde_json::Error> for CliError {
    fn from(err: serde_json::Error) -> Self {
        foilspace::Error::from(err).into()
    }
}
