use std::time::Duration;

use serde::Serialize;
use sha2::{Digest, Sha256};

/// Exit code when every verdict passes.
pub const EXIT_PASS: i32 = 0;
/// Exit code when some verdict fails.
pub const EXIT_FAIL: i32 = 1;
/// Exit code for unusable input.
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
}

/// What a command did, for `--report`.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    /// SHA-256 over the arguments and any input file contents.
    pub inputs_digest: String,
    pub verdicts: Vec<Verdict>,
    pub timings_ms: f64,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl RunReport {
    pub fn finished(command: &str, digest: String, verdicts: Vec<Verdict>, elapsed: Duration) -> Self {
        let exit_code = if verdicts.iter().all(|v| v.pass) { EXIT_PASS } else { EXIT_FAIL };
        RunReport {
            command: command.to_string(),
            inputs_digest: digest,
            verdicts,
            timings_ms: elapsed.as_secs_f64() * 1e3,
            exit_code,
            error: None,
        }
    }

    pub fn invalid(command: &str, digest: String, error: String, elapsed: Duration) -> Self {
        RunReport {
            command: command.to_string(),
            inputs_digest: digest,
            verdicts: Vec::new(),
            timings_ms: elapsed.as_secs_f64() * 1e3,
            exit_code: EXIT_INPUT,
            error: Some(error),
        }
    }
}

pub fn digest(args: &[String], inputs: &[Vec<u8>]) -> String {
    let mut h = Sha256::new();
    for a in args {
        h.update(a.as_bytes());
        h.update([0u8]);
    }
    for bytes in inputs {
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(bytes);
    }
    hex::encode(h.finalize())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_code_follows_verdicts() {
        let ok = vec![Verdict { name: "a".into(), pass: true }];
        assert_eq!(RunReport::finished("x", String::new(), ok, Duration::ZERO).exit_code, EXIT_PASS);
        let bad = vec![Verdict { name: "a".into(), pass: true }, Verdict { name: "b".into(), pass: false }];
        assert_eq!(RunReport::finished("x", String::new(), bad, Duration::ZERO).exit_code, EXIT_FAIL);
    }

    #[test]
    fn digest_is_stable_and_input_sensitive() {
        let a = digest(&["converge".into()], &[b"{}".to_vec()]);
        assert_eq!(a, digest(&["converge".into()], &[b"{}".to_vec()]));
        assert_ne!(a, digest(&["converge".into()], &[b"{ }".to_vec()]));
        assert_eq!(a.len(), 64);
    }
}
