//! Theories, models and scripts from disk.

use std::fs;
use std::path::{Path, PathBuf};

use ribbon_core::corpus;
use ribbon_core::model::GroupError;
use ribbon_core::rewrite::ScriptError;
use ribbon_core::theory::{builtin_file, theory_files};
use ribbon_core::{GroupTable, HopfModel, ProofScript, Theory, TheoryError, TheoryName};
use thiserror::Error;

/// Directory holding `theories/*.rules` that replace the shipped files.
pub const DATA_DIR_ENV: &str = "RIBBON_DATA_DIR";

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("theory {theory}: {source}")]
    Theory { theory: String, source: TheoryError },
    #[error(transparent)]
    Rules(#[from] TheoryError),
    #[error("{path}: {source}")]
    Group { path: PathBuf, source: GroupError },
    #[error("{path}: {source}")]
    Script { path: PathBuf, source: ScriptError },
    #[error("unknown model `{0}` (expected trivial, z2, z3, s3, fun-GROUP or a group file)")]
    UnknownModel(String),
}

impl LoadError {
    /// Whether the input itself is malformed rather than rejected.
    pub fn is_syntax(&self) -> bool {
        match self {
            LoadError::Theory { source, .. } | LoadError::Rules(source) => {
                matches!(
                    source,
                    TheoryError::Syntax { .. } | TheoryError::Term { .. }
                )
            }
            LoadError::Script { .. } | LoadError::Group { .. } | LoadError::UnknownModel(_) => true,
            LoadError::Io { .. } => true,
        }
    }
}

fn read(path: &Path) -> Result<String, LoadError> {
    fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.into(),
        source,
    })
}

fn shipped(file: &str) -> Result<String, LoadError> {
    if let Some(dir) = std::env::var_os(DATA_DIR_ENV) {
        let path = Path::new(&dir).join("theories").join(file);
        if path.exists() {
            return read(&path);
        }
    }
    Ok(builtin_file(file)
        .expect("theory file list is shipped")
        .to_string())
}

/// A built-in theory, honouring the data directory, with user rule files
/// appended in order.
pub fn theory(name: TheoryName, user: &[PathBuf]) -> Result<Theory, LoadError> {
    let mut texts: Vec<(String, String)> = Vec::new();
    for f in theory_files(name) {
        texts.push((f.to_string(), shipped(f)?));
    }
    for p in user {
        texts.push((p.display().to_string(), read(p)?));
    }
    let sources: Vec<(&str, &str)> = texts
        .iter()
        .map(|(a, b)| (a.as_str(), b.as_str()))
        .collect();
    let th = Theory::from_sources(name, &sources).map_err(|source| match source {
        TheoryError::Syntax { .. } | TheoryError::Term { .. } => LoadError::Rules(source),
        _ => LoadError::Theory {
            theory: name.as_str().into(),
            source,
        },
    })?;
    Ok(corpus::attach(th))
}

/// `trivial`, `z2`, `z3`, `s3`, their `fun-` variants, or a group file
/// (optionally prefixed by `fun-`).
pub fn model(spec: &str) -> Result<HopfModel, LoadError> {
    if let Some(m) = HopfModel::builtin(spec) {
        return Ok(m);
    }
    let (fun, rest) = match spec.strip_prefix("fun-") {
        Some(r) => (true, r),
        None => (false, spec),
    };
    let path = Path::new(rest);
    if !path.is_file() {
        return Err(LoadError::UnknownModel(spec.into()));
    }
    let g = GroupTable::parse(&read(path)?).map_err(|source| LoadError::Group {
        path: path.into(),
        source,
    })?;
    Ok(if fun {
        HopfModel::function_algebra(spec, &g)
    } else {
        HopfModel::group_algebra(spec, &g)
    })
}

pub fn script(path: &Path) -> Result<ProofScript, LoadError> {
    ProofScript::parse(&read(path)?).map_err(|source| LoadError::Script {
        path: path.into(),
        source,
    })
}
