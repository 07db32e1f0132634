//! JSON state files.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "kind": "pure",
//!   "dims": [2, 2],
//!   "amplitudes": [
//!     [0.7071067811865476, 0.0],
//!     [0.0, 0.0],
//!     [0.0, 0.0],
//!     [0.7071067811865476, 0.0]
//!   ]
//! }
//! ```
//!
//! Complex numbers are `[re, im]` pairs and amplitudes follow the
//! party-0-slowest ordering of [`crate::state`]. Product files carry
//! `factors` (one vector per party); ensemble files carry `members`, each
//! with a `weight` and either `amplitudes` or `factors`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::mixed::{Ensemble, Member};
use crate::state::{ProductState, PureState, C64};

pub const SCHEMA_VERSION: u32 = 1;

type Pair = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub schema_version: u32,
    #[serde(flatten)]
    pub body: StateBody,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StateBody {
    Pure {
        dims: Vec<usize>,
        amplitudes: Vec<Pair>,
    },
    Product {
        dims: Vec<usize>,
        factors: Vec<Vec<Pair>>,
    },
    Ensemble {
        dims: Vec<usize>,
        members: Vec<MemberEntry>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberEntry {
    pub weight: f64,
    #[serde(flatten)]
    pub state: MemberBody,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MemberBody {
    Pure { amplitudes: Vec<Pair> },
    Product { factors: Vec<Vec<Pair>> },
}

/// Decoded contents of a state file.
#[derive(Debug, Clone, PartialEq)]
pub enum LoadedState {
    Pure(PureState),
    Product(ProductState),
    Ensemble(Ensemble),
}

impl LoadedState {
    pub fn kind(&self) -> &'static str {
        match self {
            LoadedState::Pure(_) => "pure",
            LoadedState::Product(_) => "product",
            LoadedState::Ensemble(_) => "ensemble",
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        match self {
            LoadedState::Pure(p) => p.dims().to_vec(),
            LoadedState::Product(p) => p.dims(),
            LoadedState::Ensemble(e) => e.dims(),
        }
    }
}

fn to_pairs(v: &[C64]) -> Vec<Pair> {
    v.iter().map(|a| [a.re, a.im]).collect()
}

fn from_pairs(v: &[Pair]) -> Vec<C64> {
    v.iter().map(|&[re, im]| C64::new(re, im)).collect()
}

fn product_from_pairs(dims: &[usize], factors: &[Vec<Pair>]) -> Result<ProductState> {
    let lens: Vec<usize> = factors.iter().map(Vec::len).collect();
    if lens != dims {
        return Err(Error::Format(format!(
            "factor lengths {lens:?} do not match dims {dims:?}"
        )));
    }
    ProductState::new(factors.iter().map(|f| from_pairs(f)).collect())
}

fn pure_from_pairs(dims: &[usize], amplitudes: &[Pair]) -> Result<PureState> {
    PureState::new(dims.to_vec(), from_pairs(amplitudes))
}

impl StateFile {
    pub fn from_pure(psi: &PureState) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            body: StateBody::Pure {
                dims: psi.dims().to_vec(),
                amplitudes: to_pairs(psi.amplitudes()),
            },
        }
    }

    pub fn from_product(phi: &ProductState) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            body: StateBody::Product {
                dims: phi.dims(),
                factors: phi.factors().iter().map(|f| to_pairs(f)).collect(),
            },
        }
    }

    pub fn from_ensemble(e: &Ensemble) -> Self {
        let members = e
            .weights()
            .iter()
            .zip(e.members())
            .map(|(&weight, m)| MemberEntry {
                weight,
                state: match m {
                    Member::Pure(p) => MemberBody::Pure {
                        amplitudes: to_pairs(p.amplitudes()),
                    },
                    Member::Product(p) => MemberBody::Product {
                        factors: p.factors().iter().map(|f| to_pairs(f)).collect(),
                    },
                },
            })
            .collect();
        Self {
            schema_version: SCHEMA_VERSION,
            body: StateBody::Ensemble {
                dims: e.dims(),
                members,
            },
        }
    }

    pub fn from_loaded(state: &LoadedState) -> Self {
        match state {
            LoadedState::Pure(p) => Self::from_pure(p),
            LoadedState::Product(p) => Self::from_product(p),
            LoadedState::Ensemble(e) => Self::from_ensemble(e),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let file: StateFile =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(Error::Format(format!(
                "unsupported schema_version {}",
                file.schema_version
            )));
        }
        Ok(file)
    }

    /// Validate the payload against `dims` and build the domain value.
    pub fn to_state(&self) -> Result<LoadedState> {
        match &self.body {
            StateBody::Pure { dims, amplitudes } => {
                Ok(LoadedState::Pure(pure_from_pairs(dims, amplitudes)?))
            }
            StateBody::Product { dims, factors } => {
                Ok(LoadedState::Product(product_from_pairs(dims, factors)?))
            }
            StateBody::Ensemble { dims, members } => {
                let mut weights = Vec::with_capacity(members.len());
                let mut states = Vec::with_capacity(members.len());
                for m in members {
                    weights.push(m.weight);
                    states.push(match &m.state {
                        MemberBody::Pure { amplitudes } => {
                            Member::Pure(pure_from_pairs(dims, amplitudes)?)
                        }
                        MemberBody::Product { factors } => {
                            Member::Product(product_from_pairs(dims, factors)?)
                        }
                    });
                }
                Ok(LoadedState::Ensemble(Ensemble::new(weights, states)?))
            }
        }
    }

    /// Canonical text form; parsing and re-serializing it is byte-identical.
    pub fn to_canonical_string(&self) -> String {
        let value = serde_json::to_value(self).expect("state files serialize to JSON");
        to_canonical_json(&value)
    }
}

/// Two-space indented JSON where arrays of scalars stay on one line.
pub fn to_canonical_json(value: &Value) -> String {
    let mut out = String::new();
    write_value(value, 0, &mut out);
    out.push('\n');
    out
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn write_value(value: &Value, indent: usize, out: &mut String) {
    let pad = |level: usize, out: &mut String| out.extend(std::iter::repeat_n("  ", level));
    match value {
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(is_scalar) => {
            out.push('[');
            for (i, v) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&v.to_string());
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, v) in items.iter().enumerate() {
                pad(indent + 1, out);
                write_value(v, indent + 1, out);
                if i + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            pad(indent, out);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, v)) in map.iter().enumerate() {
                pad(indent + 1, out);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(v, indent + 1, out);
                if i + 1 < map.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            pad(indent, out);
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{ghz, random_product, seeded_rng};

    #[test]
    fn golden_two_qubit_file() {
        let bell = ghz(2, 2).unwrap();
        let text = StateFile::from_pure(&bell).to_canonical_string();
        let expected = r#"{
  "schema_version": 1,
  "kind": "pure",
  "dims": [2, 2],
  "amplitudes": [
    [0.7071067811865475, 0.0],
    [0.0, 0.0],
    [0.0, 0.0],
    [0.7071067811865475, 0.0]
  ]
}
"#;
        assert_eq!(text, expected);
    }

    #[test]
    fn amplitude_order_is_party_one_slowest() {
        // |01⟩ has party 1 in |0⟩ and party 2 in |1⟩: flat index 1.
        let text = r#"{"schema_version": 1, "kind": "pure", "dims": [2, 2],
            "amplitudes": [[0.0, 0.0], [1.0, 0.0], [0.0, 0.0], [0.0, 0.0]]}"#;
        let state = StateFile::parse(text).unwrap().to_state().unwrap();
        assert_eq!(state, LoadedState::Pure(PureState::basis(vec![2, 2], &[0, 1]).unwrap()));
    }

    #[test]
    fn ensemble_round_trip() {
        let mut rng = seeded_rng(5);
        let e = Ensemble::new(
            vec![0.25, 0.75],
            vec![
                Member::Product(random_product(3, 2, &mut rng).unwrap()),
                Member::Pure(ghz(3, 2).unwrap()),
            ],
        )
        .unwrap();
        let text = StateFile::from_ensemble(&e).to_canonical_string();
        let parsed = StateFile::parse(&text).unwrap();
        assert_eq!(parsed.to_canonical_string(), text);
        assert_eq!(parsed.to_state().unwrap(), LoadedState::Ensemble(e));
    }

    #[test]
    fn rejects_inconsistent_files() {
        let bad_len = r#"{"schema_version": 1, "kind": "pure", "dims": [2, 2], "amplitudes": [[1.0, 0.0]]}"#;
        assert!(StateFile::parse(bad_len).unwrap().to_state().is_err());
        let bad_version = r#"{"schema_version": 2, "kind": "pure", "dims": [2], "amplitudes": [[1.0, 0.0], [0.0, 0.0]]}"#;
        assert!(StateFile::parse(bad_version).is_err());
        let bad_kind = r#"{"schema_version": 1, "kind": "mixed", "dims": [2]}"#;
        assert!(StateFile::parse(bad_kind).is_err());
        let bad_factor = r#"{"schema_version": 1, "kind": "product", "dims": [2, 3], "factors": [[[1.0, 0.0], [0.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]]}"#;
        assert!(StateFile::parse(bad_factor).unwrap().to_state().is_err());
        assert!(StateFile::parse("not json").is_err());
    }
}
