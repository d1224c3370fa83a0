//! Input documents: one ring and a list of named ideals.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use annvv_core::local_model::{build_ring, declare_ideal_str, LocalRingRef, MPrimaryIdeal};

use crate::error::{ExperimentError, Result};

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub characteristic: u64,
    pub variables: Vec<String>,
    #[serde(default)]
    pub relations: Vec<String>,
    pub ideals: IndexMap<String, Vec<String>>,
}

impl Document {
    pub fn parse(text: &str) -> Result<Document> {
        let doc: Document = toml::from_str(text).map_err(|e| ExperimentError::Input(e.to_string()))?;
        if doc.variables.is_empty() {
            return Err(ExperimentError::Input("field `variables`: at least one variable is required".into()));
        }
        if doc.ideals.is_empty() {
            return Err(ExperimentError::Input("field `ideals`: no ideals declared".into()));
        }
        Ok(doc)
    }
}

/// A validated document: the ring and every declared ideal.
pub struct Corpus {
    pub document: Document,
    pub ring: LocalRingRef,
    pub ideals: Vec<(String, MPrimaryIdeal)>,
}

impl Corpus {
    pub fn from_document(document: Document) -> Result<Corpus> {
        let vars: Vec<&str> = document.variables.iter().map(|s| s.as_str()).collect();
        let rels: Vec<&str> = document.relations.iter().map(|s| s.as_str()).collect();
        let ring = build_ring(document.characteristic, &vars, &rels)
            .map_err(|e| ExperimentError::Input(format!("ring: {e}")))?;
        let mut ideals = Vec::new();
        for (name, gens) in &document.ideals {
            let g: Vec<&str> = gens.iter().map(|s| s.as_str()).collect();
            let i = declare_ideal_str(&ring, &g)
                .map_err(|e| ExperimentError::Input(format!("ideals.{name}: {e}")))?;
            ideals.push((name.clone(), i));
        }
        Ok(Corpus {
            document,
            ring,
            ideals,
        })
    }

    pub fn parse(text: &str) -> Result<Corpus> {
        Self::from_document(Document::parse(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_field_is_named() {
        let text = "characteristic = 101\nvariables = [\"x\"]\nideals = { m = [\"x\"] }\ncolour = 3\n";
        let err = Document::parse(text).unwrap_err().to_string();
        assert!(err.contains("colour"), "{err}");
    }

    #[test]
    fn declaration_order_is_kept() {
        let text = "characteristic = 101\nvariables = [\"x\", \"y\"]\n[ideals]\nb = [\"x\", \"y\"]\na = [\"x^2\", \"y\"]\n";
        let c = Corpus::parse(text).unwrap();
        let names: Vec<_> = c.ideals.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, ["b", "a"]);
    }

    #[test]
    fn bad_ideal_names_the_entry() {
        let text = "characteristic = 101\nvariables = [\"x\", \"y\"]\n[ideals]\nline = [\"x\"]\n";
        let err = Corpus::parse(text).err().unwrap().to_string();
        assert!(err.contains("ideals.line"), "{err}");
    }
}
