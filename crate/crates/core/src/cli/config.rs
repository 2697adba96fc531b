//! Experiment documents.
//!
//! ```toml
//! schema = 1
//!
//! [model1]
//! family = "comonotone"
//! dim = 2
//!
//! [model2]
//! family = "independent"
//! dim = 2
//! ```
//!
//! Optional tables: `[margins1]`/`[margins2]` (`scale`, `alpha` vectors),
//! `[archimax]` (`generator = { kind = "clayton", theta = 1.0 }`), and
//! `[[representers]]` entries with `first`/`second` representer documents
//! that are tried alongside the canonical ones in the Wasserstein bound.
//! A single-model document uses `[model]`.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{invalid, Error, Result};
use crate::models::{Generator, MarginSpec, MaxStableModel, ModelSpec};
use crate::spectral::io::RepresenterDocument;
use crate::spectral::DeHaanRepresenter;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
pub struct ArchimaxSection {
    pub generator: Generator,
}

#[derive(Debug, Clone, Deserialize)]
pub struct RepresenterPair {
    pub first: RepresenterDocument,
    pub second: RepresenterDocument,
}

#[derive(Debug, Clone, Deserialize)]
pub struct ExperimentDoc {
    pub schema: u32,
    pub model: Option<ModelSpec>,
    pub model1: Option<ModelSpec>,
    pub model2: Option<ModelSpec>,
    pub margins1: Option<MarginSpec>,
    pub margins2: Option<MarginSpec>,
    pub archimax: Option<ArchimaxSection>,
    #[serde(default)]
    pub representers: Vec<RepresenterPair>,
}

/// A parsed document together with the fields that were not recognized.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub doc: ExperimentDoc,
    pub unknown: Vec<String>,
    pub id: String,
    pub base_dir: Option<PathBuf>,
}

pub fn parse_doc(text: &str) -> Result<(ExperimentDoc, Vec<String>)> {
    let mut unknown = Vec::new();
    let de = toml::Deserializer::parse(text).map_err(|e| Error::Parse(e.to_string()))?;
    let doc: ExperimentDoc =
        serde_ignored::deserialize(de, |path| unknown.push(path.to_string().replace(".?", ""))).map_err(|e| Error::Parse(e.to_string()))?;
    if doc.schema != SCHEMA_VERSION {
        return invalid(format!("unsupported schema {}, expected {SCHEMA_VERSION}", doc.schema));
    }
    Ok((doc, unknown))
}

pub fn load(path: &Path) -> Result<Loaded> {
    let text = std::fs::read_to_string(path)?;
    let (doc, unknown) = parse_doc(&text)?;
    Ok(Loaded {
        doc,
        unknown,
        id: path.file_stem().map_or_else(|| "pair".into(), |s| s.to_string_lossy().into_owned()),
        base_dir: path.parent().map(Path::to_path_buf),
    })
}

pub struct Pair {
    pub m1: MaxStableModel,
    pub m2: MaxStableModel,
    pub margins: Option<(MarginSpec, MarginSpec)>,
    pub generator: Option<Generator>,
    pub representers: Vec<(DeHaanRepresenter, DeHaanRepresenter)>,
}

impl Loaded {
    pub fn single(&self) -> Result<MaxStableModel> {
        let spec = self
            .doc
            .model
            .as_ref()
            .or(self.doc.model1.as_ref())
            .ok_or_else(|| Error::InvalidInput("document needs a [model] table".into()))?;
        spec.build(self.base_dir.as_deref())
    }

    pub fn pair(&self) -> Result<Pair> {
        let (Some(s1), Some(s2)) = (&self.doc.model1, &self.doc.model2) else {
            return invalid("document needs [model1] and [model2] tables");
        };
        let m1 = s1.build(self.base_dir.as_deref())?;
        let m2 = s2.build(self.base_dir.as_deref())?;
        if m1.dim() != m2.dim() {
            return Err(Error::DimensionMismatch(m1.dim(), m2.dim()));
        }
        let margins = match (&self.doc.margins1, &self.doc.margins2) {
            (None, None) => None,
            (a, b) => {
                let a = a.clone().unwrap_or_else(|| MarginSpec::standard(m1.dim(), m1.alpha()));
                let b = b.clone().unwrap_or_else(|| MarginSpec::standard(m2.dim(), m2.alpha()));
                a.validate()?;
                b.validate()?;
                Some((a, b))
            }
        };
        let representers = self
            .doc
            .representers
            .iter()
            .map(|p| Ok((p.first.build()?, p.second.build()?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Pair { m1, m2, margins, generator: self.doc.archimax.as_ref().map(|a| a.generator), representers })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_fields_are_collected() {
        let text = "schema = 1\ncolour = 3\n[model1]\nfamily = \"independent\"\ndim = 2\nshape = 1\n[model2]\nfamily = \"comonotone\"\ndim = 2\n";
        let (doc, unknown) = parse_doc(text).unwrap();
        assert_eq!(unknown, ["colour", "model1.shape"]);
        assert!(doc.model2.is_some());
    }

    #[test]
    fn schema_is_checked() {
        assert!(parse_doc("schema = 2").is_err());
        assert!(parse_doc("[model]\nfamily = \"independent\"").is_err());
    }

    #[test]
    fn archimax_and_margins() {
        let text = r#"
schema = 1
[model1]
family = "logistic"
dim = 2
theta = 0.5
[model2]
family = "independent"
dim = 2
[margins2]
scale = [1.0, 2.0]
alpha = [1.0, 1.0]
[archimax]
generator = { kind = "clayton", theta = 1.0 }
"#;
        let (doc, unknown) = parse_doc(text).unwrap();
        assert!(unknown.is_empty());
        let loaded = Loaded { doc, unknown, id: "x".into(), base_dir: None };
        let pair = loaded.pair().unwrap();
        assert_eq!(pair.generator, Some(Generator::Clayton { theta: 1.0 }));
        assert_eq!(pair.margins.unwrap().0, MarginSpec::standard(2, 1.0));
    }
}
