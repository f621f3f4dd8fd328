use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use etale_twist::cocycle::CocycleError;
use etale_twist::groupoid::GroupoidError;
use etale_twist::io::IoError;
use etale_twist::ktheory::{InvarianceReport, KTheoryError};
use etale_twist::report::ErrorCode;
use etale_twist::semidirect::SemidirectError;
use etale_twist::semigroup::SemigroupError;
use etale_twist::twist::TwistError;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_AMBIGUOUS: i32 = 2;
pub const EXIT_PARSE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("{path}: invalid JSON: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error("{path}: expected a {expected} file, found {found}")]
    WrongSchema { path: String, expected: &'static str, found: &'static str },
    #[error(transparent)]
    Format(#[from] IoError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
    #[error(transparent)]
    KTheory(#[from] KTheoryError),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
    #[error(transparent)]
    Semidirect(#[from] SemidirectError),
    #[error(transparent)]
    Twist(#[from] TwistError),
    #[error("invalid sample(s) at t = {}: {first}", times.join(", "))]
    InvalidSamples { times: Vec<String>, first: CocycleError },
    #[error("K0 data changes along the homotopy at t = {at}")]
    NotInvariant { at: String },
}

/// The machine-readable form of a failure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub code: String,
    pub message: String,
    pub witness: Value,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_)
            | CliError::Read { .. }
            | CliError::Write { .. }
            | CliError::Json { .. }
            | CliError::WrongSchema { .. } => EXIT_PARSE,
            CliError::Format(e) if e.is_parse_error() => EXIT_PARSE,
            _ if self.is_ambiguity() => EXIT_AMBIGUOUS,
            _ => EXIT_INVALID,
        }
    }

    fn is_ambiguity(&self) -> bool {
        match self {
            CliError::KTheory(e) => e.is_ambiguity(),
            _ => false,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "Usage",
            CliError::Read { .. } | CliError::Write { .. } => "IoError",
            CliError::Json { .. } => "InvalidJson",
            CliError::WrongSchema { .. } => "WrongSchema",
            CliError::Format(e) => e.code(),
            CliError::Groupoid(e) => e.code(),
            CliError::Cocycle(e) => e.code(),
            CliError::KTheory(e) => e.code(),
            CliError::Semigroup(e) => e.code(),
            CliError::Semidirect(e) => e.code(),
            CliError::Twist(e) => e.code(),
            CliError::InvalidSamples { .. } => "SampleInvalid",
            CliError::NotInvariant { .. } => "NotInvariant",
        }
    }

    /// A partial invariance report carried by the failure, if any.
    pub fn partial_report(&self) -> Option<&InvarianceReport> {
        match self {
            CliError::KTheory(KTheoryError::SampleInvalid { report, .. }) => Some(report),
            _ => None,
        }
    }

    pub fn failure(&self) -> Failure {
        Failure { code: self.code().into(), message: self.to_string(), witness: self.witness() }
    }

    fn witness(&self) -> Value {
        match self {
            CliError::Cocycle(e) | CliError::Format(IoError::Cocycle(e)) => cocycle_witness(e),
            CliError::Semidirect(SemidirectError::Cocycle(e)) | CliError::Twist(TwistError::Cocycle(e)) => {
                cocycle_witness(e)
            }
            CliError::KTheory(KTheoryError::Cocycle(e)) | CliError::Semigroup(SemigroupError::Cocycle(e)) => {
                cocycle_witness(e)
            }
            CliError::KTheory(KTheoryError::SampleInvalid { times, first, .. }) => {
                json!({"times": times, "first": cocycle_witness(first)})
            }
            CliError::KTheory(KTheoryError::RankAmbiguous { component, ratio }) => {
                json!({"component": component, "ratio": ratio})
            }
            CliError::KTheory(KTheoryError::CheckFailed { what, residual }) => json!({"check": what, "residual": residual}),
            CliError::InvalidSamples { times, first } => json!({"times": times, "first": cocycle_witness(first)}),
            CliError::NotInvariant { at } => json!({"t": at}),
            CliError::Groupoid(GroupoidError::AxiomViolation { axiom, witnesses }) => {
                json!({"axiom": axiom.to_string(), "arrows": witnesses})
            }
            CliError::Semigroup(SemigroupError::NotInverseSemigroup { reason, witness }) => {
                json!({"reason": reason, "elements": witness})
            }
            CliError::Semigroup(SemigroupError::ActionViolation { condition, witness }) => {
                json!({"condition": condition, "at": witness})
            }
            CliError::Semigroup(SemigroupError::CocycleViolation { condition, witness, deviation }) => {
                json!({"condition": condition, "at": witness, "deviation": deviation})
            }
            CliError::Semigroup(SemigroupError::IllDefinedGerm(g, h, a, b)) => {
                json!({"pair": [g, h], "values": [a, b]})
            }
            CliError::Semidirect(SemidirectError::ConditionViolation { condition, witness }) => {
                json!({"condition": condition, "at": witness})
            }
            CliError::Semidirect(SemidirectError::NotDirected(p, q)) => json!({"elements": [p, q]}),
            CliError::Semidirect(SemidirectError::NotWellDefinedOnQuotient(a, b)) => json!({"entry": [a, b]}),
            CliError::Semidirect(SemidirectError::LabelingNotHomomorphism(g, h)) => json!({"pair": [g, h]}),
            CliError::Read { path, .. } | CliError::Write { path, .. } | CliError::Json { path, .. } => {
                json!({"path": path})
            }
            CliError::WrongSchema { path, found, .. } => json!({"path": path, "schema": found}),
            CliError::Format(IoError::UnknownName { what, name }) => json!({"what": what, "name": name}),
            CliError::Format(IoError::UnknownSchema(keys)) => json!({"keys": keys}),
            _ => Value::String(self.to_string()),
        }
    }
}

fn cocycle_witness(e: &CocycleError) -> Value {
    match e {
        CocycleError::IdentityViolation { worst, violations } => json!({"worst": worst, "violations": violations.len()}),
        CocycleError::MissingPair(g, h) | CocycleError::NotComposable(g, h) => json!({"pair": [g, h]}),
        CocycleError::NormalizationViolation { arrow, left, right, value } => {
            json!({"arrow": arrow, "pair": [left, right], "value": value})
        }
        CocycleError::LiftViolation { triple, deviation } => json!({"triple": triple, "deviation": deviation}),
        CocycleError::NotRootOfUnity { at, value, m } => json!({"at": at, "value": value, "m": m}),
        CocycleError::NonTrivialOnUnit(u) => json!({"arrow": u}),
        CocycleError::SampleInvalid { t, source } => json!({"t": t, "source": cocycle_witness(source)}),
        other => Value::String(other.to_string()),
    }
}
