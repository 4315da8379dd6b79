//! JSON document format for bitrades.
//!
//! ```json
//! {"rows":["r0"],"cols":["c0"],"syms":["s0"],"star":[["r0","c0","s0"]],"delta":[...]}
//! ```
//!
//! The universe arrays are optional; when absent, labels are numbered in
//! order of first appearance (star triples first, then delta triples).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitrade::{build_bitrade, Bitrade, BitradeError, BitradeInput, Role};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitradeDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cols: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub syms: Option<Vec<String>>,
    pub star: Vec<[String; 3]>,
    pub delta: Vec<[String; 3]>,
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed bitrade JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error(transparent)]
    Invalid(#[from] BitradeError),
}

impl BitradeDoc {
    pub fn into_input(self) -> BitradeInput {
        BitradeInput { universes: [self.rows, self.cols, self.syms], star: self.star, delta: self.delta }
    }

    /// Canonical form: explicit universes, triples in canonical order.
    pub fn from_bitrade(t: &Bitrade) -> Self {
        BitradeDoc {
            rows: Some(t.names(Role::Row).to_vec()),
            cols: Some(t.names(Role::Col).to_vec()),
            syms: Some(t.names(Role::Sym).to_vec()),
            star: t.star().iter().map(|x| t.triple_names(x)).collect(),
            delta: t.delta().iter().map(|x| t.triple_names(x)).collect(),
        }
    }
}

pub fn parse_doc(text: &str) -> Result<BitradeDoc, serde_json::Error> {
    serde_json::from_str(text)
}

pub fn bitrade_from_json(text: &str) -> Result<Bitrade, LoadError> {
    let doc = parse_doc(text)?;
    Ok(build_bitrade(&doc.into_input())?)
}

pub fn bitrade_to_json(t: &Bitrade) -> String {
    serde_json::to_string_pretty(&BitradeDoc::from_bitrade(t)).expect("plain data serializes")
}

pub fn load_bitrade(path: &std::path::Path) -> Result<Bitrade, LoadError> {
    let text =
        std::fs::read_to_string(path).map_err(|source| LoadError::Io { path: path.display().to_string(), source })?;
    bitrade_from_json(&text)
}
