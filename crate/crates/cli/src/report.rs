//! Command reports. The status is derived from the assertion list, so a
//! report cannot claim success while carrying a failed assertion.

use polymatroid::Error;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    /// Empty polytope or infeasible target.
    Infeasible,
    /// No equilibrium exists.
    Absent,
    InputError,
    InvariantViolation,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Infeasible | Status::Absent => 1,
            Status::InputError => 2,
            Status::InvariantViolation => 3,
        }
    }

    pub fn of_error(err: &Error) -> Status {
        match err {
            Error::Infeasible(_) => Status::Infeasible,
            Error::Invariant(_) | Error::Arithmetic(_) => Status::InvariantViolation,
            Error::Domain(_)
            | Error::Capacity { .. }
            | Error::Precondition(_)
            | Error::InvalidParameter(_)
            | Error::Rejected(_)
            | Error::Parse(_) => Status::InputError,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommandEcho {
    pub name: String,
    pub args: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: CommandEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_sha256: Option<String>,
    status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Value>,
    assertions: Vec<Assertion>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u128>,
}

pub fn digest(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

impl Report {
    pub fn new(command: CommandEcho) -> Self {
        Report {
            command,
            input_sha256: None,
            status: Status::Ok,
            error: None,
            result: Value::Null,
            trace: None,
            assertions: Vec::new(),
            wall_time_ms: None,
        }
    }

    pub fn assert(&mut self, name: impl Into<String>, passed: bool, detail: Option<String>) {
        self.assertions.push(Assertion {
            name: name.into(),
            passed,
            detail,
        });
        if !passed {
            self.status = Status::InvariantViolation;
        }
    }

    /// Mark a negative outcome (infeasible, absent). A failed assertion
    /// takes precedence.
    pub fn set_outcome(&mut self, status: Status) {
        if self.status != Status::InvariantViolation {
            self.status = status;
        }
    }

    pub fn fail(&mut self, err: &Error) {
        self.error = Some(err.to_string());
        self.set_outcome(Status::of_error(err));
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn error(&self) -> Option<&str> {
        self.error.as_deref()
    }

    pub fn assertions(&self) -> &[Assertion] {
        &self.assertions
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn echo() -> CommandEcho {
        CommandEcho {
            name: "solve".into(),
            args: vec![],
        }
    }

    #[test]
    fn failed_assertion_wins() {
        let mut r = Report::new(echo());
        r.assert("a", false, None);
        r.set_outcome(Status::Ok);
        r.set_outcome(Status::Absent);
        assert_eq!(r.status(), Status::InvariantViolation);
        assert_eq!(r.status().exit_code(), 3);
    }

    #[test]
    fn error_statuses() {
        assert_eq!(
            Status::of_error(&Error::Infeasible("x".into())).exit_code(),
            1
        );
        assert_eq!(Status::of_error(&Error::Parse("x".into())).exit_code(), 2);
        assert_eq!(
            Status::of_error(&Error::Invariant("x".into())).exit_code(),
            3
        );
    }

    #[test]
    fn digest_is_hex_sha256() {
        assert_eq!(
            digest(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
