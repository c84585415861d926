//! Versioned JSON documents and the lenient number parsing used by every
//! serialized type (numbers may be written as `"p/q"` strings).

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

type StdResult<T, E> = std::result::Result<T, E>;
use crate::reductions::{GnepSpec, ReductionTrace};
use crate::model::{Certificate, CorrespondenceSpec, LinearVi, MinMaxInstance, PolymatrixGame, QviInstance};

/// Schema version written to and required from every document.
pub const FORMAT: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DocKind {
    Linearvi,
    Minmax,
    Qvi,
    Correspondence,
    Polymatrix,
    Gnep,
    Candidate,
    Certificate,
    Report,
}

impl DocKind {
    pub fn name(self) -> &'static str {
        match self {
            DocKind::Linearvi => "linearvi",
            DocKind::Minmax => "minmax",
            DocKind::Qvi => "qvi",
            DocKind::Correspondence => "correspondence",
            DocKind::Polymatrix => "polymatrix",
            DocKind::Gnep => "gnep",
            DocKind::Candidate => "candidate",
            DocKind::Certificate => "certificate",
            DocKind::Report => "report",
        }
    }
}

/// Envelope `{"format": 1, "kind": …, "data": …}` with optional reduction
/// traces and free-form metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub format: u32,
    pub kind: DocKind,
    pub data: serde_json::Value,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<ReductionTrace>,
    #[serde(default, skip_serializing_if = "serde_json::Map::is_empty")]
    pub meta: serde_json::Map<String, serde_json::Value>,
}

/// Candidate point: `z` alone, or `x` and `y` for min-max instances.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Candidate {
    #[serde(default, skip_serializing_if = "Option::is_none", deserialize_with = "opt_vector")]
    pub x: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none", deserialize_with = "opt_vector")]
    pub y: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none", deserialize_with = "opt_vector")]
    pub z: Option<Vec<f64>>,
}

impl Candidate {
    pub fn pair(x: Vec<f64>, y: Vec<f64>) -> Self {
        Candidate { x: Some(x), y: Some(y), z: None }
    }

    pub fn point(z: Vec<f64>) -> Self {
        Candidate { z: Some(z), ..Candidate::default() }
    }

    /// The stacked point `(x, y)` or `z`.
    pub fn stacked(&self) -> Result<Vec<f64>> {
        match (&self.x, &self.y, &self.z) {
            (_, _, Some(z)) => Ok(z.clone()),
            (Some(x), Some(y), None) => Ok(crate::linalg::concat(x, y)),
            _ => Err(Error::Document("candidate needs z or both x and y".into())),
        }
    }

    /// `(x, y)` from either form, splitting `z` in half.
    pub fn split(&self, d: usize) -> Result<(Vec<f64>, Vec<f64>)> {
        let mut z = self.stacked()?;
        crate::error::check_dim(2 * d, z.len())?;
        let y = z.split_off(d);
        Ok((z, y))
    }
}

impl Document {
    pub fn new<T: Serialize>(kind: DocKind, data: &T) -> Result<Self> {
        let data = serde_json::to_value(data).map_err(|e| Error::Document(format!("cannot serialize {}: {e}", kind.name())))?;
        Ok(Document { format: FORMAT, kind, data, trace: Vec::new(), meta: serde_json::Map::new() })
    }

    pub fn with_trace(mut self, trace: Vec<ReductionTrace>) -> Self {
        self.trace = trace;
        self
    }

    pub fn with_meta(mut self, key: &str, value: impl Serialize) -> Result<Self> {
        self.meta.insert(key.to_string(), serde_json::to_value(value)?);
        Ok(self)
    }

    pub fn meta_as<T: DeserializeOwned>(&self, key: &str) -> Option<T> {
        self.meta.get(key).and_then(|v| serde_json::from_value(v.clone()).ok())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Document = serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
        if doc.format != FORMAT {
            return Err(Error::Document(format!("unsupported format {}, expected {FORMAT}", doc.format)));
        }
        Ok(doc)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// Reads and checks the envelope; returns the SHA-256 of the raw bytes.
    pub fn load(path: &Path) -> Result<(Self, String)> {
        let bytes = std::fs::read(path)
            .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
        let text = std::str::from_utf8(&bytes).map_err(|e| Error::Document(format!("{}: {e}", path.display())))?;
        let doc = Document::from_json(text).map_err(|e| match e {
            Error::Document(msg) => Error::Document(format!("{}: {msg}", path.display())),
            other => other,
        })?;
        Ok((doc, content_hash(&bytes)))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    fn expect(&self, kind: DocKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::Document(format!("expected a {} document, found {}", kind.name(), self.kind.name())));
        }
        Ok(())
    }

    /// Deserializes `data` as the given kind.
    pub fn parse<T: DeserializeOwned>(&self, kind: DocKind) -> Result<T> {
        self.expect(kind)?;
        serde_json::from_value(self.data.clone()).map_err(|e| Error::Document(format!("{}: {e}", kind.name())))
    }

    pub fn linearvi(&self) -> Result<LinearVi> {
        let v: LinearVi = self.parse(DocKind::Linearvi)?;
        v.validate()?;
        Ok(v)
    }

    pub fn minmax(&self) -> Result<MinMaxInstance> {
        let mut v: MinMaxInstance = self.parse(DocKind::Minmax)?;
        v.fill_bounds();
        v.validate()?;
        Ok(v)
    }

    pub fn qvi(&self) -> Result<QviInstance> {
        let mut v: QviInstance = self.parse(DocKind::Qvi)?;
        v.fill_bounds();
        v.validate()?;
        Ok(v)
    }

    pub fn correspondence(&self) -> Result<CorrespondenceSpec> {
        let v: CorrespondenceSpec = self.parse(DocKind::Correspondence)?;
        v.validate()?;
        Ok(v)
    }

    pub fn polymatrix(&self) -> Result<PolymatrixGame> {
        let v: PolymatrixGame = self.parse(DocKind::Polymatrix)?;
        v.validate()?;
        Ok(v)
    }

    pub fn gnep(&self) -> Result<GnepSpec> {
        self.parse(DocKind::Gnep)
    }

    pub fn candidate(&self) -> Result<Candidate> {
        self.parse(DocKind::Candidate)
    }

    pub fn certificate(&self) -> Result<Certificate> {
        self.parse(DocKind::Certificate)
    }
}

/// Lowercase hex SHA-256.
pub fn content_hash(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Scalar {
    Num(f64),
    Text(String),
}

fn parse_scalar(s: Scalar) -> StdResult<f64, String> {
    match s {
        Scalar::Num(v) => Ok(v),
        Scalar::Text(t) => parse_rational(&t),
    }
}

/// Parses `"p/q"`, `"p"` or a decimal literal.
pub fn parse_rational(text: &str) -> StdResult<f64, String> {
    let t = text.trim();
    let bad = || format!("not a number or rational: {text:?}");
    match t.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| bad())?;
            let q: f64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0.0 {
                return Err(bad());
            }
            Ok(p / q)
        }
        None => t.parse().map_err(|_| bad()),
    }
}

pub fn scalar<'de, D: Deserializer<'de>>(d: D) -> StdResult<f64, D::Error> {
    parse_scalar(Scalar::deserialize(d)?).map_err(serde::de::Error::custom)
}

pub fn vector<'de, D: Deserializer<'de>>(d: D) -> StdResult<Vec<f64>, D::Error> {
    Vec::<Scalar>::deserialize(d)?
        .into_iter()
        .map(parse_scalar)
        .collect::<StdResult<_, _>>()
        .map_err(serde::de::Error::custom)
}

pub fn matrix_rows<'de, D: Deserializer<'de>>(d: D) -> StdResult<Vec<Vec<f64>>, D::Error> {
    Vec::<Vec<Scalar>>::deserialize(d)?
        .into_iter()
        .map(|r| r.into_iter().map(parse_scalar).collect::<StdResult<Vec<_>, _>>())
        .collect::<StdResult<_, _>>()
        .map_err(serde::de::Error::custom)
}

fn opt_vector<'de, D: Deserializer<'de>>(d: D) -> StdResult<Option<Vec<f64>>, D::Error> {
    vector(d).map(Some)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;

    #[test]
    fn rationals_parse() {
        assert_eq!(parse_rational("1/4").unwrap(), 0.25);
        assert_eq!(parse_rational(" -3 / 2 ").unwrap(), -1.5);
        assert_eq!(parse_rational("0.5").unwrap(), 0.5);
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn minmax_round_trip() {
        let g = gallery::eq_not_vi();
        let doc = Document::new(DocKind::Minmax, &g.instance).unwrap();
        let back = Document::from_json(&doc.to_json().unwrap()).unwrap();
        let inst = back.minmax().unwrap();
        assert_eq!(inst.value(&[1.0], &[0.0]), 0.0);
        assert_eq!(inst.eps, g.instance.eps);
        assert!(back.linearvi().is_err());
    }

    #[test]
    fn wrong_format_is_rejected() {
        let text = r#"{"format": 2, "kind": "candidate", "data": {"z": [0.5]}}"#;
        assert!(matches!(Document::from_json(text), Err(Error::Document(_))));
        let text = r#"{"format": 1, "kind": "candidate", "data": {"z": ["1/3", 0.5]}}"#;
        let c = Document::from_json(text).unwrap().candidate().unwrap();
        assert_eq!(c.stacked().unwrap(), vec![1.0 / 3.0, 0.5]);
    }

    #[test]
    fn rational_instance_fields() {
        let text = r#"{"format": 1, "kind": "linearvi",
            "data": {"D": [["1/3", 0], [0, "-1/2"]], "c": ["1/6", 0], "rho": "0.088/6", "norm_certified": true}}"#;
        let vi = Document::from_json(text).unwrap().linearvi().unwrap();
        assert_eq!(vi.c[0], 1.0 / 6.0);
        assert_eq!(vi.rho, 0.088 / 6.0);
    }

    #[test]
    fn omitted_bounds_are_computed() {
        let text = r#"{"format": 1, "kind": "minmax", "data": {
            "dim": 1, "eps": "1/1000", "delta": "3/10", "nu": 0,
            "objective": {"M": [["4/5", 0], [0, "-4/5"]], "h": ["-8/5", "4/5"], "k": "4/5"},
            "constraints": {"kind": "jointly-convex", "joint": [{"b1": [1], "b2": [1], "c": -1}]}}}"#;
        let inst = Document::from_json(text).unwrap().minmax().unwrap();
        assert!((inst.smoothness - 1.6).abs() < 1e-12);
        assert!(inst.lipschitz.is_finite() && inst.lipschitz > 0.0);
        let text = r#"{"format": 1, "kind": "qvi", "data": {"eps": 0,
            "correspondence": {"dim": 1, "rows": []}, "operator": {"D": [[1]], "c": ["-1/2"]}}}"#;
        let qvi = Document::from_json(text).unwrap().qvi().unwrap();
        assert!((qvi.operator_bound - 0.5).abs() < 1e-12);
    }

    #[test]
    fn hash_is_stable() {
        assert_eq!(content_hash(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}
