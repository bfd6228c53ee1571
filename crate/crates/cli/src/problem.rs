//! Problem files: one JSON object with a `kind` and a kind-specific payload.

use endodyn::exactpoly::IntPoly;
use endodyn::linalg::{IntMatrix, RatMatrix};
use num_rational::BigRational;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::wire::{self, get, InputError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Abelian,
    Lattice,
    Cone,
    Poly,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Abelian => "abelian",
            Kind::Lattice => "lattice",
            Kind::Cone => "cone",
            Kind::Poly => "poly",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Problem {
    Abelian {
        matrix: IntMatrix,
        translation: bool,
    },
    Lattice {
        gram: IntMatrix,
        matrix: IntMatrix,
    },
    Cone {
        generators: Vec<Vec<BigRational>>,
        matrix: RatMatrix,
        big_class: Option<Vec<BigRational>>,
        start: Option<Vec<BigRational>>,
    },
    Poly {
        coefficients: IntPoly,
    },
}

fn allowed(obj: &Map<String, Value>, keys: &[&str]) -> Result<(), InputError> {
    match obj.keys().find(|k| !keys.contains(&k.as_str())) {
        Some(k) => Err(InputError::new(k.clone(), "unknown field")),
        None => Ok(()),
    }
}

impl Problem {
    pub fn kind(&self) -> Kind {
        match self {
            Problem::Abelian { .. } => Kind::Abelian,
            Problem::Lattice { .. } => Kind::Lattice,
            Problem::Cone { .. } => Kind::Cone,
            Problem::Poly { .. } => Kind::Poly,
        }
    }

    pub fn parse(text: &str) -> Result<Problem, InputError> {
        let v: Value = serde_json::from_str(text).map_err(|e| InputError {
            line: Some(e.line()),
            field: "<document>".into(),
            message: e.to_string(),
        })?;
        Problem::from_value(&v).map_err(|e| e.locate(text))
    }

    pub fn from_value(v: &Value) -> Result<Problem, InputError> {
        let obj = v.as_object().ok_or_else(|| InputError::new("<document>", "expected a JSON object"))?;
        let kind = get(obj, "kind")?.as_str().ok_or_else(|| InputError::new("kind", "expected a string"))?;
        match kind {
            "abelian" => {
                allowed(obj, &["kind", "matrix", "translation"])?;
                let translation = match obj.get("translation") {
                    None => false,
                    Some(t) => t.as_bool().ok_or_else(|| InputError::new("translation", "expected a boolean"))?,
                };
                Ok(Problem::Abelian { matrix: wire::parse_int_matrix(get(obj, "matrix")?, "matrix")?, translation })
            }
            "lattice" => {
                allowed(obj, &["kind", "gram", "matrix"])?;
                Ok(Problem::Lattice {
                    gram: wire::parse_int_matrix(get(obj, "gram")?, "gram")?,
                    matrix: wire::parse_int_matrix(get(obj, "matrix")?, "matrix")?,
                })
            }
            "cone" => {
                allowed(obj, &["kind", "generators", "matrix", "big_class", "start"])?;
                let opt = |key: &str| obj.get(key).map(|v| wire::parse_rat_vec(v, key)).transpose();
                Ok(Problem::Cone {
                    generators: wire::parse_rat_rows(get(obj, "generators")?, "generators")?,
                    matrix: wire::parse_rat_matrix(get(obj, "matrix")?, "matrix")?,
                    big_class: opt("big_class")?,
                    start: opt("start")?,
                })
            }
            "poly" => {
                allowed(obj, &["kind", "coefficients"])?;
                let c = wire::parse_int_vec(get(obj, "coefficients")?, "coefficients")?;
                Ok(Problem::Poly { coefficients: IntPoly::new(c) })
            }
            other => Err(InputError::new("kind", format!("unknown kind `{other}`"))),
        }
    }

    /// Canonical form: exact strings, sorted keys, defaults written out.
    pub fn to_value(&self) -> Value {
        match self {
            Problem::Abelian { matrix, translation } => {
                json!({ "kind": "abelian", "matrix": wire::int_matrix(matrix), "translation": translation })
            }
            Problem::Lattice { gram, matrix } => {
                json!({ "kind": "lattice", "gram": wire::int_matrix(gram), "matrix": wire::int_matrix(matrix) })
            }
            Problem::Cone { generators, matrix, big_class, start } => {
                let mut v = json!({
                    "kind": "cone",
                    "generators": Value::Array(generators.iter().map(|g| wire::rat_vec(g)).collect()),
                    "matrix": wire::rat_matrix(matrix),
                });
                if let Some(b) = big_class {
                    v["big_class"] = wire::rat_vec(b);
                }
                if let Some(s) = start {
                    v["start"] = wire::rat_vec(s);
                }
                v
            }
            Problem::Poly { coefficients } => json!({ "kind": "poly", "coefficients": wire::poly(coefficients) }),
        }
    }

    pub fn canonical(&self) -> String {
        wire::canonical(&self.to_value())
    }

    /// SHA-256 of the canonical form, lowercase hex.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }
}
