//! Exit codes: 0 success, 1 internal or resource failure, 2 invalid input.

use std::fmt::Display;
use std::path::Path;

use anyhow::anyhow;
use mrf_ptas::Error;

pub const EXIT_INTERNAL: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

pub type CmdResult<T = ()> = Result<T, Failure>;

pub fn usage(message: impl Display) -> Failure {
    Failure { code: EXIT_INPUT, error: anyhow!("{message}") }
}

pub fn internal(message: impl Display) -> Failure {
    Failure { code: EXIT_INTERNAL, error: anyhow!("{message}") }
}

fn code_for(error: &anyhow::Error) -> u8 {
    match error.downcast_ref::<Error>() {
        Some(
            Error::Internal(_)
            | Error::WidthExceeded { .. }
            | Error::MemoryBudget { .. }
            | Error::TooLarge { .. }
            | Error::BuildFailure { .. },
        ) => EXIT_INTERNAL,
        _ => EXIT_INPUT,
    }
}

pub trait Stage<T> {
    /// Tags the error with the stage that failed; the exit code follows
    /// from the error kind.
    fn stage(self, what: impl Display) -> CmdResult<T>;
    /// Same, but always an internal failure (e.g. writing outputs).
    fn internal(self, what: impl Display) -> CmdResult<T>;
}

impl<T, E: Into<anyhow::Error>> Stage<T> for Result<T, E> {
    fn stage(self, what: impl Display) -> CmdResult<T> {
        self.map_err(|e| {
            let error = e.into();
            Failure { code: code_for(&error), error: error.context(what.to_string()) }
        })
    }

    fn internal(self, what: impl Display) -> CmdResult<T> {
        self.map_err(|e| Failure { code: EXIT_INTERNAL, error: e.into().context(what.to_string()) })
    }
}

pub fn read_text(path: &Path) -> CmdResult<String> {
    std::fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_INPUT,
        error: anyhow::Error::from(e).context(format!("reading {}", path.display())),
    })
}

pub fn read_bytes(path: &Path) -> CmdResult<Vec<u8>> {
    std::fs::read(path).map_err(|e| Failure {
        code: EXIT_INPUT,
        error: anyhow::Error::from(e).context(format!("reading {}", path.display())),
    })
}

/// Writes through a temporary file in the target directory and renames it
/// into place, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> CmdResult {
    use std::io::Write;
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let write = || -> anyhow::Result<()> {
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(contents)?;
        tmp.as_file().sync_all()?;
        tmp.persist(path)?;
        Ok(())
    };
    write().internal(format!("writing {}", path.display()))
}

pub fn write_json(path: &Path, value: &impl serde::Serialize) -> CmdResult {
    let mut text = serde_json::to_string_pretty(value).internal("serializing output")?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}
