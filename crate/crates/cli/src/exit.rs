// SPDX-License-Identifier: MIT OR Apache-2.0

//! The fixed exit-code map.

use agehopf::model::AssumptionReport;
use agehopf::Error;

pub const FAILURE: i32 = 1;
pub const VALIDATION: i32 = 2;
pub const ASSUMPTIONS: i32 = 3;
pub const NO_CROSSING: i32 = 4;
pub const RESONANCE: i32 = 5;
pub const BLOWUP: i32 = 6;

/// An error that carries its exit code explicitly.
#[derive(Debug)]
pub struct Exit {
    pub code: i32,
    pub message: String,
}

impl std::fmt::Display for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Exit {}

impl Exit {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    pub fn validation(message: impl Into<String>) -> Self {
        Self::new(VALIDATION, message)
    }

    /// Assumption failure with the five signed values in the message.
    pub fn assumptions(report: &AssumptionReport) -> Self {
        let mut message = String::from("stability assumptions fail:");
        for c in &report.checks {
            let flag = if c.pass { "ok" } else { "FAIL" };
            message.push_str(&format!("\n  {:<16} {:>+.6e}  {flag}", c.name, c.value));
        }
        Self::new(ASSUMPTIONS, message)
    }
}

/// Exit code of a library error.
pub fn code_of(err: &Error) -> i32 {
    match err {
        Error::Range { .. } | Error::Endemicity { .. } | Error::Config(_) | Error::Divergent { .. } => VALIDATION,
        Error::NoCrossing { .. }
        | Error::DegenerateRoot { .. }
        | Error::MaxIter { .. }
        | Error::DerivativeVanished { .. }
        | Error::Pole { .. } => NO_CROSSING,
        Error::Resonance { .. } => RESONANCE,
        Error::Blowup { .. } => BLOWUP,
        Error::InsufficientData { .. } => FAILURE,
    }
}

/// Exit code of any error reaching `main`.
pub fn code_of_any(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<Exit>() {
            return e.code;
        }
        if let Some(e) = cause.downcast_ref::<Error>() {
            return code_of(e);
        }
    }
    FAILURE
}
