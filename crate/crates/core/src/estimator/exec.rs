//! Estimator running in a child process, spoken to over newline-delimited
//! JSON on its standard input and output.
//!
//! Request: `{"batch_id": n, "compiler": s, "objectives": [s...], "items": [{"words": n, "bits": n, "codes": {...}}...]}`
//! Response: `{"batch_id": n, "ppa": [[v0, ...]...]}`, one row per item.
//! A response may carry `"error": s` instead of `"ppa"` to fail the batch.

use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::{Backend, BatchItem, BatchRequest, ObjectiveVector};
use crate::error::{Error, Result};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(60);

#[derive(Serialize, Deserialize)]
pub(crate) struct WireRequest {
    pub batch_id: u64,
    pub compiler: String,
    pub objectives: Vec<String>,
    pub items: Vec<BatchItem>,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct WireResponse {
    pub batch_id: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ppa: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

struct Channel {
    stdin: Option<ChildStdin>,
    lines: Receiver<std::io::Result<String>>,
    next_id: u64,
}

/// A backend that forwards every batch to one long-lived child process.
///
/// Submissions are serialized; the process sees one request at a time.
pub struct ExecBackend {
    command: String,
    timeout: Duration,
    child: Mutex<Child>,
    channel: Mutex<Channel>,
}

impl ExecBackend {
    /// Spawn `command` through `sh -c`.
    pub fn spawn(command: &str, timeout: Duration) -> Result<Self> {
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(command)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| Error::Backend {
                batch_id: 0,
                message: format!("cannot start `{command}`: {e}"),
            })?;
        let stdin = child.stdin.take().expect("piped stdin");
        let stdout = child.stdout.take().expect("piped stdout");
        let (tx, rx) = mpsc::channel();
        thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                if tx.send(line).is_err() {
                    break;
                }
            }
        });
        Ok(ExecBackend {
            command: command.to_string(),
            timeout,
            child: Mutex::new(child),
            channel: Mutex::new(Channel {
                stdin: Some(stdin),
                lines: rx,
                next_id: 1,
            }),
        })
    }

    pub fn command(&self) -> &str {
        &self.command
    }
}

impl Backend for ExecBackend {
    fn evaluate(&self, request: &BatchRequest<'_>) -> Result<Vec<ObjectiveVector>> {
        let mut ch = self.channel.lock().unwrap_or_else(|e| e.into_inner());
        let batch_id = ch.next_id;
        ch.next_id += 1;
        let fail = |message: String| Error::Backend { batch_id, message };

        let wire = WireRequest {
            batch_id,
            compiler: request.compiler.name.clone(),
            objectives: request.objectives.to_vec(),
            items: request.items.clone(),
        };
        let mut line = serde_json::to_string(&wire).expect("request serializes");
        line.push('\n');
        let stdin = ch
            .stdin
            .as_mut()
            .ok_or_else(|| fail("estimator input already closed".into()))?;
        stdin
            .write_all(line.as_bytes())
            .and_then(|_| stdin.flush())
            .map_err(|e| fail(format!("cannot write to estimator: {e}")))?;

        let deadline = Instant::now() + self.timeout;
        loop {
            let left = deadline.saturating_duration_since(Instant::now());
            let text = match ch.lines.recv_timeout(left) {
                Ok(Ok(text)) => text,
                Ok(Err(e)) => return Err(fail(format!("cannot read from estimator: {e}"))),
                Err(RecvTimeoutError::Timeout) => {
                    return Err(fail(format!("no response within {:?}", self.timeout)))
                }
                Err(RecvTimeoutError::Disconnected) => {
                    return Err(fail("estimator process exited".into()))
                }
            };
            if text.trim().is_empty() {
                continue;
            }
            let resp: WireResponse = serde_json::from_str(&text)
                .map_err(|e| fail(format!("malformed response: {e}")))?;
            if resp.batch_id < batch_id {
                // Late answer to a batch that already timed out.
                continue;
            }
            if resp.batch_id != batch_id {
                return Err(fail(format!("response names unknown batch {}", resp.batch_id)));
            }
            if let Some(msg) = resp.error {
                return Err(fail(format!("estimator reported: {msg}")));
            }
            let ppa = resp.ppa.ok_or_else(|| fail("response has no `ppa` field".into()))?;
            if ppa.len() != request.items.len() {
                return Err(fail(format!(
                    "arity mismatch: {} items sent, {} rows received",
                    request.items.len(),
                    ppa.len()
                )));
            }
            let m = request.objectives.len();
            if let Some(row) = ppa.iter().find(|r| r.len() != m) {
                return Err(fail(format!(
                    "arity mismatch: row has {} values, expected {m}",
                    row.len()
                )));
            }
            if ppa.iter().flatten().any(|v| !v.is_finite()) {
                return Err(fail("response contains non-finite values".into()));
            }
            return Ok(ppa.into_iter().map(ObjectiveVector).collect());
        }
    }
}

impl Drop for ExecBackend {
    fn drop(&mut self) {
        // Closing stdin asks the estimator to exit.
        if let Ok(mut ch) = self.channel.lock() {
            ch.stdin.take();
        }
        let Ok(mut child) = self.child.lock() else { return };
        let deadline = Instant::now() + Duration::from_secs(2);
        while Instant::now() < deadline {
            match child.try_wait() {
                Ok(Some(_)) | Err(_) => return,
                Ok(None) => thread::sleep(Duration::from_millis(10)),
            }
        }
        let _ = child.kill();
        let _ = child.wait();
    }
}
