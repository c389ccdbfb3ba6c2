use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use hochgrav::algebra::AlgebraError;
use hochgrav::calculus::CalculusError;
use hochgrav::gravity::GravityError;
use hochgrav::hochschild::HochError;
use hochgrav::koszul::KoszulError;
use hochgrav::linalg::LinAlgError;
use hochgrav::mixed::MixedError;
use hochgrav::poisson::PoissonError;
use serde_json::{json, Value};

pub const SCHEMA: &str = "hochgrav/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Window,
    Fail,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 2,
            Status::Window => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Window => "window-insufficient",
            Status::Fail => "fail",
        }
    }

    pub fn of(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// Result of one task: machine-readable body plus summary lines.
#[derive(Debug)]
pub struct Outcome {
    pub task: &'static str,
    pub status: Status,
    pub body: Value,
    pub summary: Vec<String>,
}

impl Outcome {
    pub fn new(task: &'static str) -> Self {
        Outcome { task, status: Status::Pass, body: json!({}), summary: Vec::new() }
    }

    pub fn set(&mut self, key: &str, v: Value) {
        self.body.as_object_mut().expect("body is an object").insert(key.to_string(), v);
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.summary.push(line.into());
    }

    /// Records a verdict; failures dominate window insufficiency.
    pub fn verdict(&mut self, s: Status) {
        self.status = self.status.max(s);
    }

    pub fn document(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "task": self.task,
            "status": self.status.name(),
            "result": self.body,
        })
    }

    pub fn summary_text(&self) -> String {
        let mut s = format!("{}: {}\n", self.task, self.status.name());
        for l in &self.summary {
            s.push_str("  ");
            s.push_str(l);
            s.push('\n');
        }
        s
    }
}

pub fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(tmp, path)
}

pub fn render(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("json values render");
    s.push('\n');
    s
}

pub fn emit(outcome: &Outcome, out: Option<&Path>) -> std::io::Result<()> {
    let doc = render(&outcome.document());
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            write_atomic(&dir.join(format!("{}.json", outcome.task)), doc.as_bytes())?;
            write_atomic(&dir.join(format!("{}.txt", outcome.task)), outcome.summary_text().as_bytes())?;
            print!("{}", outcome.summary_text());
        }
        None => print!("{doc}"),
    }
    Ok(())
}

#[derive(Debug)]
pub enum CliError {
    Parse(Vec<String>),
    Window(String),
    Compute(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 4,
            CliError::Window(_) => 3,
            CliError::Compute(_) | CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(errs) => {
                for (i, e) in errs.iter().enumerate() {
                    if i > 0 {
                        writeln!(f)?;
                    }
                    write!(f, "parse error: {e}")?;
                }
                Ok(())
            }
            CliError::Window(m) => write!(f, "window insufficient: {m}"),
            CliError::Compute(m) => write!(f, "computation failed: {m}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Library errors: anything mentioning the window maps to exit code 3.
macro_rules! from_lib {
    ($($t:ty => $window:pat),* $(,)?) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                match &e {
                    $window => CliError::Window(e.to_string()),
                    _ => CliError::Compute(e.to_string()),
                }
            }
        })*
    };
}

from_lib! {
    AlgebraError => AlgebraError::OutOfWindow { .. },
    CalculusError => CalculusError::OutOfWindow(_),
    GravityError => GravityError::Window(_),
    HochError => HochError::WindowTooSmall { .. } | HochError::Algebra(AlgebraError::OutOfWindow { .. }),
    KoszulError => KoszulError::WindowTooSmall { .. } | KoszulError::Algebra(AlgebraError::OutOfWindow { .. }),
    MixedError => MixedError::OutOfWindow(_),
    PoissonError => PoissonError::OutOfWindow(_),
}

impl From<LinAlgError> for CliError {
    fn from(e: LinAlgError) -> Self {
        CliError::Compute(e.to_string())
    }
}
