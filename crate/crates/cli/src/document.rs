//! JSON contract documents.
//!
//! The on-disk form mirrors the contract structure with term strings as the
//! constraint syntax:
//!
//! ```json
//! {
//!   "name": "buffer",
//!   "input_vars": ["i"],
//!   "output_vars": ["o"],
//!   "assumptions": ["i <= 2"],
//!   "guarantees": ["o <= i"]
//! }
//! ```
//!
//! `name` is optional, an optional `"version": 1` field is accepted, and any
//! other unknown key is rejected. Saving always emits the canonical form:
//! keys in the order above, terms rendered canonically, two-space indent,
//! UTF-8, trailing newline. Loading a saved document reproduces the contract
//! exactly, and saving what was loaded reproduces the bytes.

use std::fs;
use std::io::Write;
use std::path::Path;

use agc_core::{AlgebraError, IoContract, ParseError, TermList, Var};
use serde::{Deserialize, Serialize};

/// Wire form of one contract.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ContractDocument {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub version: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub name: Option<String>,
    pub input_vars: Vec<String>,
    pub output_vars: Vec<String>,
    pub assumptions: Vec<String>,
    pub guarantees: Vec<String>,
}

/// Loading or saving failure, split by exit-code class.
#[derive(Debug)]
pub enum DocumentError {
    /// Malformed JSON, unknown keys, or an unsupported version.
    Schema(String),
    /// A term string that does not parse.
    Term {
        entry: String,
        error: ParseError,
    },
    /// A structurally valid document that is not a valid contract.
    Contract(AlgebraError),
    Io(std::io::Error),
}

impl std::fmt::Display for DocumentError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DocumentError::Schema(msg) => write!(f, "schema error: {msg}"),
            DocumentError::Term { entry, error } => write!(f, "in term {entry:?}: {error}"),
            DocumentError::Contract(e) => write!(f, "{e}"),
            DocumentError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for DocumentError {}

impl From<std::io::Error> for DocumentError {
    fn from(e: std::io::Error) -> Self {
        DocumentError::Io(e)
    }
}

impl From<AlgebraError> for DocumentError {
    fn from(e: AlgebraError) -> Self {
        DocumentError::Contract(e)
    }
}

fn parse_terms(entries: &[String]) -> Result<TermList, DocumentError> {
    let mut terms = Vec::new();
    for entry in entries {
        let parsed = agc_core::parser::parse_term(entry).map_err(|error| DocumentError::Term {
            entry: entry.clone(),
            error,
        })?;
        terms.extend(parsed);
    }
    Ok(TermList::new(terms))
}

fn parse_vars(names: &[String]) -> Result<Vec<Var>, DocumentError> {
    names
        .iter()
        .map(|n| Var::new(n.as_str()).map_err(|e| DocumentError::Schema(e.to_string())))
        .collect()
}

impl ContractDocument {
    pub fn from_json(text: &str) -> Result<Self, DocumentError> {
        let doc: ContractDocument =
            serde_json::from_str(text).map_err(|e| DocumentError::Schema(e.to_string()))?;
        if let Some(v) = doc.version {
            if v != 1 {
                return Err(DocumentError::Schema(format!(
                    "unsupported version {v}, expected 1"
                )));
            }
        }
        Ok(doc)
    }

    /// Parsed and validated contract. Equality entries expand to their two
    /// inequality halves.
    pub fn to_contract(&self) -> Result<IoContract, DocumentError> {
        let contract = IoContract::new(
            parse_vars(&self.input_vars)?,
            parse_vars(&self.output_vars)?,
            parse_terms(&self.assumptions)?,
            parse_terms(&self.guarantees)?,
        )?;
        Ok(contract)
    }

    /// Canonical document for a contract: term strings in canonical form,
    /// no version key.
    pub fn from_contract(contract: &IoContract, name: Option<&str>) -> Self {
        ContractDocument {
            version: None,
            name: name.map(str::to_owned),
            input_vars: contract
                .inputs()
                .iter()
                .map(|v| v.name().to_owned())
                .collect(),
            output_vars: contract
                .outputs()
                .iter()
                .map(|v| v.name().to_owned())
                .collect(),
            assumptions: contract.assumptions().render(),
            guarantees: contract.guarantees().render(),
        }
    }

    /// Canonical JSON: two-space indent, trailing newline.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("document serializes");
        text.push('\n');
        text
    }
}

pub fn load_contract(path: &Path) -> Result<IoContract, DocumentError> {
    let text = fs::read_to_string(path)?;
    ContractDocument::from_json(&text)?.to_contract()
}

pub fn save_contract(
    contract: &IoContract,
    name: Option<&str>,
    path: &Path,
) -> Result<(), DocumentError> {
    let mut file = fs::File::create(path)?;
    file.write_all(
        ContractDocument::from_contract(contract, name)
            .to_json()
            .as_bytes(),
    )?;
    Ok(())
}
