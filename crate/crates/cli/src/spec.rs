use std::path::Path;

use serde::Deserialize;
use sha2::{Digest, Sha256};
use siframes_core::affine::{AffineConfig, Mode as AffineMode};
use siframes_core::{Error as CoreError, Lattice, ModStepFn, Rational};

use crate::commands::Block;
use crate::error::{CliError, Result};

/// The only spec format version understood.
pub const SPEC_VERSION: &str = "1";

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecWire {
    version: String,
    affine: AffineWire,
    #[serde(default)]
    probes: Vec<ModStepFn>,
    #[serde(default)]
    si: Option<SiWire>,
    #[serde(default)]
    analysis: Vec<Block>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AffineWire {
    a: i64,
    #[serde(with = "siframes_core::num::rat")]
    b: Rational,
    psi_hat: ModStepFn,
    #[serde(default)]
    mode: AffineMode,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SiWire {
    #[serde(with = "siframes_core::num::rat")]
    b: Rational,
    generators: Vec<ModStepFn>,
}

/// A shift-invariant space given directly by generators.
#[derive(Clone, Debug)]
pub struct SiSpec {
    pub lattice: Lattice,
    pub generators: Vec<ModStepFn>,
}

/// A validated input file.
#[derive(Clone, Debug)]
pub struct SpecFile {
    pub version: String,
    pub affine: AffineConfig,
    pub probes: Vec<ModStepFn>,
    pub si: Option<SiSpec>,
    pub analysis: Vec<Block>,
    /// `sha256:` digest of the raw input.
    pub digest: String,
}

pub fn digest(bytes: &[u8]) -> String {
    let hash = Sha256::digest(bytes);
    let hex: String = hash.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

/// Values inside these fields are step functions, whose rejection is a
/// parse failure rather than a schema violation.
fn inside_function(path: &str) -> bool {
    path.starts_with("affine.psi_hat") || path.starts_with("probes") || path.starts_with("si.generators")
}

fn classify(err: serde_path_to_error::Error<serde_json::Error>) -> CliError {
    let path = err.path().to_string();
    let inner = err.into_inner();
    let (line, column) = (inner.line(), inner.column());
    let message = inner.to_string();
    let message = message
        .rsplit_once(" at line ")
        .map_or(message.as_str(), |(m, _)| m)
        .to_string();
    if inner.is_syntax() || inner.is_eof() {
        CliError::Parse {
            line,
            column,
            field: None,
            message,
        }
    } else if inside_function(&path) {
        CliError::Parse {
            line,
            column,
            field: Some(path),
            message,
        }
    } else {
        CliError::Schema {
            field: if path == "." { "(root)".into() } else { path },
            message,
        }
    }
}

pub fn parse_spec(text: &str) -> Result<SpecFile> {
    let mut de = serde_json::Deserializer::from_str(text);
    let wire: SpecWire = serde_path_to_error::deserialize(&mut de).map_err(classify)?;
    de.end().map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        field: None,
        message: "trailing characters".into(),
    })?;
    if wire.version != SPEC_VERSION {
        return Err(CliError::schema(
            "version",
            format!("unsupported version `{}` (expected `{SPEC_VERSION}`)", wire.version),
        ));
    }
    let w = wire.affine;
    let affine = AffineConfig::new(w.a, w.b, w.psi_hat, w.mode).map_err(|e| {
        let field = match e {
            CoreError::NonpositiveScale(_) => "affine.b",
            CoreError::UnsupportedSupport(_) => "affine.psi_hat",
            _ => "affine.a",
        };
        CliError::schema(field, e)
    })?;
    let si = wire
        .si
        .map(|s| -> Result<SiSpec> {
            Ok(SiSpec {
                lattice: Lattice::new(s.b).map_err(|e| CliError::schema("si.b", e))?,
                generators: s.generators,
            })
        })
        .transpose()?;
    Ok(SpecFile {
        version: wire.version,
        affine,
        probes: wire.probes,
        si,
        analysis: wire.analysis,
        digest: digest(text.as_bytes()),
    })
}

pub fn load_spec(path: &Path) -> Result<SpecFile> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_spec(&text)
}
