//! Versioned JSON chain files.
//!
//! ```json
//! { "version": 1, "labels": [...], "covers": [[0, 1], ...], "P": [[...], ...],
//!   "nu": [...], "pi": [...], "absorbing_index": 3, "meta": {...} }
//! ```
//!
//! `pi` and `absorbing_index` are optional; a dual file always carries
//! `absorbing_index`.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use ssd_core::models::Model;
use ssd_core::{tol, ChainSpec, DualChain, Error as CoreError, Matrix, Poset};

use crate::CliError;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainFile {
    pub version: u32,
    pub labels: Vec<String>,
    pub covers: Vec<(usize, usize)>,
    #[serde(rename = "P")]
    pub p: Vec<Vec<f64>>,
    pub nu: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub absorbing_index: Option<usize>,
    #[serde(default)]
    pub meta: Meta,
}

#[derive(Deserialize)]
struct VersionProbe {
    version: Option<u32>,
}

impl ChainFile {
    pub fn from_chain(c: &ChainSpec, meta: Meta) -> Self {
        ChainFile {
            version: FORMAT_VERSION,
            labels: c.poset.labels().to_vec(),
            covers: c.poset.covers().to_vec(),
            p: c.p.to_rows(),
            nu: c.nu.clone(),
            pi: c.pi.clone(),
            absorbing_index: None,
            meta,
        }
    }

    pub fn from_model(model: &Model) -> Self {
        ChainFile::from_chain(
            &model.chain,
            Meta {
                model: Some(model.name.clone()),
                params: model.params.clone(),
            },
        )
    }

    pub fn from_dual(d: &DualChain, meta: Meta) -> Self {
        ChainFile {
            version: FORMAT_VERSION,
            labels: d.poset.labels().to_vec(),
            covers: d.poset.covers().to_vec(),
            p: d.p_star.to_rows(),
            nu: d.nu_star.clone(),
            pi: None,
            absorbing_index: Some(d.absorbing_index),
            meta,
        }
    }

    /// Parses and checks the version; structural checks happen in
    /// [`ChainFile::to_chain`] and [`ChainFile::to_dual`].
    pub fn parse(text: &str, origin: &str) -> Result<Self, CliError> {
        let probe: VersionProbe =
            serde_json::from_str(text).map_err(|e| parse_error(origin, &e))?;
        match probe.version {
            Some(FORMAT_VERSION) => {}
            Some(found) => {
                return Err(CliError::SchemaVersionMismatch {
                    path: origin.to_string(),
                    found,
                    expected: FORMAT_VERSION,
                })
            }
            None => {
                return Err(CliError::Parse {
                    path: origin.to_string(),
                    line: 1,
                    column: 1,
                    message: "missing field `version`".into(),
                })
            }
        }
        let file: ChainFile = serde_json::from_str(text).map_err(|e| parse_error(origin, &e))?;
        file.check_rows(text, origin)?;
        Ok(file)
    }

    fn check_rows(&self, text: &str, origin: &str) -> Result<(), CliError> {
        let (line, column) = locate_key(text, "P");
        for (i, row) in self.p.iter().enumerate() {
            let sum: f64 = row.iter().sum();
            if !((sum - 1.0).abs() <= tol::STATIONARITY) {
                let label = self.labels.get(i).map_or("?", String::as_str);
                return Err(CliError::Parse {
                    path: origin.to_string(),
                    line,
                    column,
                    message: format!("row {i} ({label}) of P sums to {sum}"),
                });
            }
        }
        Ok(())
    }

    fn poset(&self, text: &str, origin: &str) -> Result<Poset, CliError> {
        Poset::new(self.labels.clone(), &self.covers).map_err(|e| {
            let (line, column) = locate_key(text, "covers");
            let message = match &e {
                CoreError::CycleDetected { cycle } => {
                    format!("covers contain a cycle: {}", cycle.join(" -> "))
                }
                other => other.to_string(),
            };
            CliError::Parse {
                path: origin.to_string(),
                line,
                column,
                message,
            }
        })
    }

    pub fn to_chain(&self, text: &str, origin: &str) -> Result<ChainSpec, CliError> {
        let poset = self.poset(text, origin)?;
        let p = Matrix::from_rows(&self.p)?;
        Ok(ChainSpec::new(poset, p, self.nu.clone(), self.pi.clone())?)
    }

    pub fn to_dual(&self, text: &str, origin: &str) -> Result<DualChain, CliError> {
        let poset = self.poset(text, origin)?;
        let index = self.absorbing_index.ok_or_else(|| CliError::Parse {
            path: origin.to_string(),
            line: 1,
            column: 1,
            message: "dual file needs `absorbing_index`".into(),
        })?;
        let p = Matrix::from_rows(&self.p)?;
        Ok(DualChain::new(poset, p, self.nu.clone(), index)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("chain file serializes");
        s.push('\n');
        s
    }
}

fn parse_error(origin: &str, e: &serde_json::Error) -> CliError {
    CliError::Parse {
        path: origin.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

/// 1-based line and column of `"key"` in `text`, or `(1, 1)`.
fn locate_key(text: &str, key: &str) -> (usize, usize) {
    let needle = format!("\"{key}\"");
    let Some(offset) = text.find(&needle) else {
        return (1, 1);
    };
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = offset - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_chain_file(path: &Path) -> Result<(ChainFile, ChainSpec), CliError> {
    let text = read(path)?;
    let origin = path.display().to_string();
    let file = ChainFile::parse(&text, &origin)?;
    let chain = file.to_chain(&text, &origin)?;
    Ok((file, chain))
}

pub fn load_chain(path: &Path) -> Result<ChainSpec, CliError> {
    load_chain_file(path).map(|(_, c)| c)
}

pub fn load_dual(path: &Path) -> Result<DualChain, CliError> {
    let text = read(path)?;
    let origin = path.display().to_string();
    ChainFile::parse(&text, &origin)?.to_dual(&text, &origin)
}

pub fn save_file(path: &Path, file: &ChainFile) -> Result<(), CliError> {
    fs::write(path, file.to_json()).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn save_chain(path: &Path, c: &ChainSpec, meta: Meta) -> Result<(), CliError> {
    save_file(path, &ChainFile::from_chain(c, meta))
}

pub fn save_dual(path: &Path, d: &DualChain, meta: Meta) -> Result<(), CliError> {
    save_file(path, &ChainFile::from_dual(d, meta))
}

#[cfg(test)]
mod tests {
    use super::*;

    const FLIP: &str = r#"{
  "version": 1,
  "labels": ["a", "b"],
  "covers": [[0, 1]],
  "P": [[0.0, 1.0], [1.0, 0.0]],
  "nu": [1.0, 0.0]
}"#;

    #[test]
    fn parses_minimal_file_without_pi() {
        let file = ChainFile::parse(FLIP, "flip").unwrap();
        let c = file.to_chain(FLIP, "flip").unwrap();
        assert!(c.pi.is_none());
        assert_eq!(c.poset.label(1), "b");
    }

    #[test]
    fn cycle_is_reported_with_names() {
        let text = FLIP.replace("[[0, 1]]", "[[0, 1], [1, 0]]");
        let file = ChainFile::parse(&text, "cyc").unwrap();
        match file.to_chain(&text, "cyc") {
            Err(CliError::Parse { line, message, .. }) => {
                assert_eq!(line, 4);
                assert!(message.contains("cycle"));
                assert!(message.contains('a') && message.contains('b'));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn version_mismatch() {
        let text = FLIP.replace("\"version\": 1", "\"version\": 2");
        assert!(matches!(
            ChainFile::parse(&text, "v2"),
            Err(CliError::SchemaVersionMismatch { found: 2, .. })
        ));
    }

    #[test]
    fn syntax_error_has_position() {
        let text = FLIP.replace("\"nu\"", "nu");
        match ChainFile::parse(&text, "bad") {
            Err(CliError::Parse { line, column, .. }) => {
                assert_eq!(line, 6);
                assert!(column > 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rows_must_sum_to_one() {
        let text = FLIP.replace("[0.0, 1.0], [1.0, 0.0]", "[0.0, 0.9], [1.0, 0.0]");
        match ChainFile::parse(&text, "rows") {
            Err(CliError::Parse { message, line, .. }) => {
                assert!(message.contains("row 0 (a)"));
                assert_eq!(line, 5);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dual_needs_absorbing_index() {
        let file = ChainFile::parse(FLIP, "flip").unwrap();
        assert!(file.to_dual(FLIP, "flip").is_err());
    }

    #[test]
    fn locate_key_positions() {
        assert_eq!(locate_key("{\n  \"P\": []}", "P"), (2, 3));
        assert_eq!(locate_key("{}", "P"), (1, 1));
    }
}
