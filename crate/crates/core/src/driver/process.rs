use std::io::{BufRead, BufReader, Read, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::thread::JoinHandle;
use std::time::{Duration, Instant};

use super::Answer;
use crate::smt::sexpr::{read_all, SExpr};
use crate::Error;

const POLL: Duration = Duration::from_millis(20);

/// A running solver with line-buffered standard output.
pub(crate) struct Backend {
    command: String,
    child: Child,
    stdin: Option<ChildStdin>,
    lines: Receiver<String>,
    stderr: Option<JoinHandle<String>>,
    input_broken: bool,
}

/// Why a read stopped without a line.
pub(crate) enum Stop {
    Cancelled,
    Failed(Error),
}

impl From<Error> for Stop {
    fn from(e: Error) -> Self {
        Stop::Failed(e)
    }
}

impl Backend {
    pub fn spawn(argv: &[String]) -> Result<Self, Error> {
        let command = argv.join(" ");
        let (program, args) = argv.split_first().ok_or_else(|| Error::BackendSpawn {
            command: command.clone(),
            source: std::io::Error::new(std::io::ErrorKind::InvalidInput, "empty backend command"),
        })?;
        let mut child = Command::new(program)
            .args(args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(|source| Error::BackendSpawn {
                command: command.clone(),
                source,
            })?;
        let stdout = child.stdout.take().expect("piped stdout");
        let mut stderr = child.stderr.take().expect("piped stderr");
        let (tx, lines) = mpsc::channel();
        std::thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                let Ok(line) = line else { break };
                if tx.send(line).is_err() {
                    break;
                }
            }
        });
        let stderr = std::thread::spawn(move || {
            let mut text = String::new();
            let _ = stderr.read_to_string(&mut text);
            text
        });
        log::debug!("spawned backend `{command}`");
        Ok(Backend {
            command,
            stdin: child.stdin.take(),
            child,
            lines,
            stderr: Some(stderr),
            input_broken: false,
        })
    }

    pub fn send(&mut self, text: &str) -> Result<(), Error> {
        if self.input_broken {
            return Err(self.crash());
        }
        let stdin = self
            .stdin
            .as_mut()
            .ok_or_else(|| Error::BackendOutput("backend input already closed".into()))?;
        if let Err(e) = stdin
            .write_all(text.as_bytes())
            .and_then(|()| stdin.flush())
        {
            // Whatever the backend printed before exiting decides the error.
            log::debug!("writing to `{}` failed: {e}", self.command);
            self.stdin = None;
            self.input_broken = true;
        }
        Ok(())
    }

    pub fn close_input(&mut self) {
        self.stdin = None;
    }

    /// Status and standard error of a backend that stopped talking.
    fn crash(&mut self) -> Error {
        self.stdin = None;
        let deadline = Instant::now() + Duration::from_secs(2);
        let status = loop {
            match self.child.try_wait() {
                Ok(Some(s)) => break s.to_string(),
                Ok(None) if Instant::now() < deadline => std::thread::sleep(POLL),
                _ => {
                    let _ = self.child.kill();
                    break "killed after closing its output".to_string();
                }
            }
        };
        let stderr = self
            .stderr
            .take()
            .and_then(|h| h.join().ok())
            .unwrap_or_default();
        Error::BackendCrash {
            status: format!("`{}` {status}", self.command),
            stderr,
        }
    }

    fn line(
        &mut self,
        deadline: Option<Instant>,
        limit: f64,
        cancel: &AtomicBool,
    ) -> Result<String, Stop> {
        loop {
            if cancel.load(Ordering::Relaxed) {
                return Err(Stop::Cancelled);
            }
            let wait = match deadline {
                Some(d) => match d.checked_duration_since(Instant::now()) {
                    Some(left) => left.min(POLL),
                    None => return Err(Error::Timeout(limit).into()),
                },
                None => POLL,
            };
            match self.lines.recv_timeout(wait) {
                Ok(line) if line.trim().is_empty() => {}
                Ok(line) => return Ok(line),
                Err(RecvTimeoutError::Timeout) => {}
                Err(RecvTimeoutError::Disconnected) => return Err(self.crash().into()),
            }
        }
    }

    /// Reads the answer to one check.
    pub fn answer(
        &mut self,
        deadline: Option<Instant>,
        limit: f64,
        cancel: &AtomicBool,
    ) -> Result<Answer, Stop> {
        let line = self.line(deadline, limit, cancel)?;
        match line.trim() {
            "sat" => Ok(Answer::Sat),
            "unsat" => Ok(Answer::Unsat),
            "unknown" => Ok(Answer::Unknown),
            other if other.starts_with("(error") => {
                Err(Error::BackendOutput(other.to_string()).into())
            }
            other => {
                Err(Error::BackendOutput(format!("unexpected backend output `{other}`")).into())
            }
        }
    }

    /// Reads one complete s-expression, such as the answer to `get-value`.
    pub fn sexpr(
        &mut self,
        deadline: Option<Instant>,
        limit: f64,
        cancel: &AtomicBool,
    ) -> Result<SExpr, Stop> {
        let mut text = String::new();
        loop {
            text.push_str(&self.line(deadline, limit, cancel)?);
            text.push('\n');
            if text.trim_start().starts_with("(error") {
                return Err(Error::BackendOutput(text.trim().to_string()).into());
            }
            if let Ok(mut items) = read_all(&text) {
                if items.len() == 1 {
                    return Ok(items.remove(0));
                }
            }
        }
    }
}

impl Drop for Backend {
    fn drop(&mut self) {
        self.stdin = None;
        let _ = self.child.kill();
        let _ = self.child.wait();
        if let Some(h) = self.stderr.take() {
            if let Ok(text) = h.join() {
                if !text.trim().is_empty() {
                    log::debug!("backend `{}` stderr: {}", self.command, text.trim());
                }
            }
        }
    }
}
