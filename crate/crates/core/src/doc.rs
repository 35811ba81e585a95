//! Text documents exchanged with the command line.
//!
//! All documents are JSON. Floats are written in shortest round-trip form,
//! so parsing a written document gives back the same bits.
//!
//! - algebra: `{"blocks": [n1, ...]}`
//! - element: `{"algebra": ..., "blocks": [[[[re, im], ...], ...], ...]}`
//! - map: `{"kind": "matrix", "domain": ..., "codomain": ..., "rows": [[...], ...]}`
//!   or `{"kind": "structured", "tree": ...}`

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::algebra::Element;
use crate::decomposition::{Classification, Decomposition};
use crate::error::{Error, Result};
use crate::hom::{compile, RealLinearMap, StructuredHom};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MapDocument {
    Matrix(RealLinearMap),
    Structured { tree: StructuredHom },
}

impl MapDocument {
    /// The realified matrix; structured trees are validated and compiled.
    pub fn to_map(&self) -> Result<RealLinearMap> {
        match self {
            Self::Matrix(m) => Ok(m.clone()),
            Self::Structured { tree } => compile(tree),
        }
    }
}

impl From<RealLinearMap> for MapDocument {
    fn from(m: RealLinearMap) -> Self {
        Self::Matrix(m)
    }
}

/// Parses any document type, mapping every failure to [`Error::Parse`] and
/// keeping validation errors raised inside constructors.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn to_text<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("documents serialize infallibly")
}

/// What `decompose` reports: everything in [`Decomposition`] except the two
/// part maps, which are written separately as map documents.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    #[serde(rename = "T")]
    pub t: Element,
    #[serde(rename = "P")]
    pub p: Element,
    #[serde(rename = "Q")]
    pub q: Element,
    pub classification: Classification,
    pub center_dimension: usize,
    pub restricted: bool,
    #[serde(rename = "residual_T_selfadjoint")]
    pub residual_t_selfadjoint: f64,
    #[serde(rename = "residual_T_squares_to_one")]
    pub residual_t_squares_to_one: f64,
    pub residual_central: f64,
    pub residual_projection: f64,
    pub residual_sum: f64,
    pub residual_linear: f64,
    pub residual_conjlinear: f64,
    pub residual_reconstruction: f64,
}

impl From<&Decomposition> for DecompositionReport {
    fn from(d: &Decomposition) -> Self {
        Self {
            t: d.t.clone(),
            p: d.p.clone(),
            q: d.q.clone(),
            classification: d.classification,
            center_dimension: d.center_dimension,
            restricted: d.restricted,
            residual_t_selfadjoint: d.residual_t_selfadjoint,
            residual_t_squares_to_one: d.residual_t_squares_to_one,
            residual_central: d.residual_central,
            residual_projection: d.residual_projection,
            residual_sum: d.residual_sum,
            residual_linear: d.residual_linear,
            residual_conjlinear: d.residual_conjlinear,
            residual_reconstruction: d.residual_reconstruction,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraSignature;
    use crate::decomposition::decompose;
    use crate::hom::DEFAULT_TOL;

    #[test]
    fn map_documents() {
        let conj: MapDocument = parse(
            r#"{"kind":"matrix","domain":{"blocks":[1]},"codomain":{"blocks":[1]},"rows":[[1,0],[0,-1]]}"#,
        )
        .unwrap();
        let tree: MapDocument =
            parse(r#"{"kind":"structured","tree":{"node":"entrywise_conjugation","algebra":{"blocks":[1]}}}"#).unwrap();
        assert_eq!(conj.to_map().unwrap(), tree.to_map().unwrap());

        for doc in [conj, tree] {
            assert_eq!(parse::<MapDocument>(&to_text(&doc)).unwrap(), doc);
        }
    }

    #[test]
    fn malformed_documents_are_errors() {
        for bad in [
            "",
            "{",
            r#"{"kind":"tensor"}"#,
            r#"{"kind":"matrix","domain":{"blocks":[1]},"codomain":{"blocks":[1]},"rows":[[1,0]]}"#,
            r#"{"kind":"matrix","domain":{"blocks":[1]},"codomain":{"blocks":[1]},"rows":[[1],[0]]}"#,
            r#"{"kind":"structured","tree":{"node":"identity"}}"#,
        ] {
            assert!(matches!(parse::<MapDocument>(bad), Err(Error::Parse(_))), "{bad}");
        }
        // parses, but the tree does not type-check
        let doc: MapDocument = parse(
            r#"{"kind":"structured","tree":{"node":"composition","stages":[
                {"node":"identity","algebra":{"blocks":[1]}},
                {"node":"identity","algebra":{"blocks":[2]}}]}}"#,
        )
        .unwrap();
        assert!(matches!(doc.to_map(), Err(Error::MalformedTree(_))));
    }

    #[test]
    fn decomposition_report_round_trips_bit_for_bit() {
        let s = AlgebraSignature::new(vec![2]).unwrap();
        let h = StructuredHom::UnitaryConjugation {
            unitary: Element::from_matrix(crate::generator::random_unitary(2, 4)),
        };
        assert_eq!(h.signatures().unwrap().0, s);
        let report = DecompositionReport::from(&decompose(&compile(&h).unwrap(), DEFAULT_TOL).unwrap());
        let text = to_text(&report);
        assert!(text.contains("\"residual_T_selfadjoint\""));
        assert_eq!(parse::<DecompositionReport>(&text).unwrap(), report);
    }
}
