//! On-disk formats for cocycles and homotopies, and schema detection by
//! top-level keys.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::circle::{parse_ratio, CircleValue};
use crate::cocycle::{CocycleError, CocycleHomotopy, Lift, LiftValue, OneCochain, TwoCocycle};
use crate::groupoid::group::parse_tuple;
use crate::groupoid::FiniteGroupoid;
use crate::report::ErrorCode;
use crate::semidirect::{bilinear_cocycle, SemidirectError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IoError {
    #[error("malformed {schema} file: {message}")]
    Malformed { schema: &'static str, message: String },
    #[error("unknown {what} {name:?}")]
    UnknownName { what: &'static str, name: String },
    #[error("unrecognized schema; top-level keys {0:?}")]
    UnknownSchema(Vec<String>),
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
    #[error(transparent)]
    Semidirect(#[from] SemidirectError),
}

impl ErrorCode for IoError {
    fn code(&self) -> &'static str {
        match self {
            IoError::Malformed { .. } => "Malformed",
            IoError::UnknownName { .. } => "UnknownName",
            IoError::UnknownSchema(_) => "UnknownSchema",
            IoError::Cocycle(e) => e.code(),
            IoError::Semidirect(e) => e.code(),
        }
    }
}

impl IoError {
    /// True for failures to read the file as written, as opposed to content
    /// that parses but violates a definition.
    pub fn is_parse_error(&self) -> bool {
        matches!(self, IoError::Malformed { .. } | IoError::UnknownName { .. } | IoError::UnknownSchema(_))
    }
}

fn malformed(schema: &'static str, e: impl ToString) -> IoError {
    IoError::Malformed { schema, message: e.to_string() }
}

/// The file kinds the command line understands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Schema {
    Groupoid,
    Group,
    Cocycle,
    Homotopy,
    Semigroup,
    TwistedAction,
    DirectedAction,
}

impl Schema {
    pub fn name(self) -> &'static str {
        match self {
            Schema::Groupoid => "groupoid",
            Schema::Group => "group",
            Schema::Cocycle => "cocycle",
            Schema::Homotopy => "homotopy",
            Schema::Semigroup => "semigroup",
            Schema::TwistedAction => "twisted_action",
            Schema::DirectedAction => "directed_action",
        }
    }
}

/// Picks the schema from the keys of a JSON object.
pub fn detect_schema(v: &Value) -> Result<Schema, IoError> {
    let Some(obj) = v.as_object() else {
        return Err(IoError::UnknownSchema(Vec::new()));
    };
    let has = |k: &str| obj.contains_key(k);
    Ok(if has("units") && has("arrows") {
        Schema::Groupoid
    } else if has("gamma") {
        Schema::DirectedAction
    } else if has("space") {
        Schema::TwistedAction
    } else if has("elements") && has("table") && has("zero") {
        Schema::Semigroup
    } else if has("elements") && has("table") {
        Schema::Group
    } else if has("kind") {
        Schema::Homotopy
    } else if has("values") || has("family") {
        Schema::Cocycle
    } else {
        return Err(IoError::UnknownSchema(obj.keys().cloned().collect()));
    })
}

/// Deserializes `v` as `T`, reporting failures under `schema`.
pub fn from_value<T: serde::de::DeserializeOwned>(schema: &'static str, v: Value) -> Result<T, IoError> {
    serde_json::from_value(v).map_err(|e| malformed(schema, e))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairValue {
    pub pair: [String; 2],
    pub turns: String,
}

/// A cocycle given by its values or by a named family.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum CocycleFile {
    Values { values: Vec<PairValue> },
    Family(Family),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum Family {
    /// `∂b`; arrows not listed take the value 1.
    Coboundary { b: BTreeMap<String, String> },
    /// `ω(g, h) = β(c(g), c(h))` for the bilinear form `β` on `Z_{m_1} × ... × Z_{m_k}`.
    /// Labels map arrows to tuples `(n_1,...,n_k)`; without labels the arrow
    /// names themselves are read as tuples.
    Bilinear {
        moduli: Vec<usize>,
        #[serde(rename = "Q")]
        q: Vec<Vec<i64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<BTreeMap<String, String>>,
    },
    Product { of: Vec<CocycleFile> },
}

impl<'de> Deserialize<'de> for CocycleFile {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let v = Value::deserialize(d)?;
        let obj = v.as_object().ok_or_else(|| D::Error::custom("cocycle must be an object"))?;
        if obj.contains_key("values") {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct Values {
                values: Vec<PairValue>,
            }
            let Values { values } = serde_json::from_value(v).map_err(D::Error::custom)?;
            Ok(CocycleFile::Values { values })
        } else if obj.contains_key("family") {
            serde_json::from_value(v).map(CocycleFile::Family).map_err(D::Error::custom)
        } else {
            Err(D::Error::custom("cocycle needs \"values\" or \"family\""))
        }
    }
}

fn arrow(g: &FiniteGroupoid, name: &str) -> Result<usize, IoError> {
    g.index_of(name).ok_or_else(|| IoError::UnknownName { what: "arrow", name: name.into() })
}

fn circle(s: &str) -> Result<CircleValue, IoError> {
    s.parse().map_err(|e| malformed("cocycle", e))
}

fn cochain(g: &Arc<FiniteGroupoid>, b: &BTreeMap<String, String>) -> Result<OneCochain, IoError> {
    let mut values = vec![CircleValue::one(); g.len()];
    for (name, v) in b {
        values[arrow(g, name)?] = circle(v)?;
    }
    Ok(OneCochain::new(g.clone(), values)?)
}

impl CocycleFile {
    /// Resolves arrow names against `g`. The result is not validated.
    pub fn resolve(&self, g: &Arc<FiniteGroupoid>) -> Result<TwoCocycle, IoError> {
        match self {
            CocycleFile::Values { values } => {
                let entries = values
                    .iter()
                    .map(|pv| Ok((arrow(g, &pv.pair[0])?, arrow(g, &pv.pair[1])?, circle(&pv.turns)?)))
                    .collect::<Result<Vec<_>, IoError>>()?;
                Ok(TwoCocycle::from_entries(g.clone(), entries)?)
            }
            CocycleFile::Family(Family::Coboundary { b }) => Ok(cochain(g, b)?.coboundary()),
            CocycleFile::Family(Family::Bilinear { moduli, q, labels }) => {
                let beta = bilinear_cocycle(moduli, q)?;
                let group = beta.group();
                let label = |a: usize| -> Result<usize, IoError> {
                    let name = match labels {
                        Some(l) => l.get(g.name(a)).map(String::as_str).ok_or_else(|| IoError::UnknownName {
                            what: "label for arrow",
                            name: g.name(a).into(),
                        })?,
                        None => g.name(a),
                    };
                    let coords = parse_tuple(name)
                        .filter(|t| t.len() == moduli.len())
                        .ok_or_else(|| IoError::UnknownName { what: "group element", name: name.to_string() })?;
                    let reduced: Vec<String> =
                        coords.iter().zip(moduli).map(|(c, &m)| c.rem_euclid(m as i64).to_string()).collect();
                    let canonical = format!("({})", reduced.join(","));
                    group.index_of(&canonical).ok_or(IoError::UnknownName { what: "group element", name: canonical })
                };
                let c = (0..g.len()).map(label).collect::<Result<Vec<_>, _>>()?;
                Ok(TwoCocycle::from_fn(g.clone(), |a, b| beta.at(c[a], c[b])))
            }
            CocycleFile::Family(Family::Product { of }) => {
                let mut w = TwoCocycle::trivial(g.clone());
                for f in of {
                    w = w.multiply(&f.resolve(g)?)?;
                }
                Ok(w)
            }
        }
    }

    /// Lists every defined value, pairs in arrow order.
    pub fn from_cocycle(w: &TwoCocycle) -> Self {
        let g = w.groupoid();
        let values = w
            .entries()
            .map(|(a, b, v)| PairValue { pair: [g.name(a).into(), g.name(b).into()], turns: v.to_string() })
            .collect();
        CocycleFile::Values { values }
    }
}

/// A real angle as written in a homotopy file: radians, or a string `"r pi"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Angle {
    Radians(f64),
    Text(String),
}

impl Angle {
    fn to_lift(&self) -> Result<LiftValue, IoError> {
        match self {
            Angle::Radians(a) => Ok(LiftValue::Radians(*a)),
            Angle::Text(s) => {
                let t = s.trim();
                let body = t.strip_suffix("pi").or_else(|| t.strip_suffix('π')).map(str::trim);
                match body {
                    Some("") => Ok(LiftValue::PiMultiple(Ratio::from_integer(1))),
                    Some(r) => parse_ratio(r.trim_end_matches('*').trim())
                        .map(LiftValue::PiMultiple)
                        .ok_or_else(|| malformed("homotopy", format!("bad multiple of pi {s:?}"))),
                    None => t
                        .parse::<f64>()
                        .map(LiftValue::Radians)
                        .map_err(|_| malformed("homotopy", format!("bad angle {s:?}"))),
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairAngle {
    pub pair: [String; 2],
    pub radians: Angle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleEntry {
    pub t: String,
    pub cocycle: CocycleFile,
}

/// `ω_t = base · ∂(b^t)`, `ω_t = base · exp(i t c)`, or a step function through samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum HomotopyFile {
    CoboundaryPath {
        b: BTreeMap<String, String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        base: Option<CocycleFile>,
    },
    /// Pairs not listed get angle 0.
    LinearLift {
        c: Vec<PairAngle>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        base: Option<CocycleFile>,
    },
    TableOfSamples { samples: Vec<SampleEntry> },
}

impl HomotopyFile {
    pub fn resolve(&self, g: &Arc<FiniteGroupoid>) -> Result<CocycleHomotopy, IoError> {
        let base = |b: &Option<CocycleFile>| b.as_ref().map(|f| f.resolve(g)).transpose();
        Ok(match self {
            HomotopyFile::CoboundaryPath { b, base: bf } => CocycleHomotopy::coboundary_path(cochain(g, b)?, base(bf)?)?,
            HomotopyFile::LinearLift { c, base: bf } => {
                let n = g.len();
                let mut values = vec![LiftValue::PiMultiple(Ratio::from_integer(0)); n * n];
                for pa in c {
                    let (a, b) = (arrow(g, &pa.pair[0])?, arrow(g, &pa.pair[1])?);
                    values[a * n + b] = pa.radians.to_lift()?;
                }
                let entries = g.composable_pairs().pairs.into_iter().map(|(a, b)| (a, b, values[a * n + b]));
                CocycleHomotopy::linear_lift(Lift::new(g.clone(), entries)?, base(bf)?)?
            }
            HomotopyFile::TableOfSamples { samples } => {
                let s = samples
                    .iter()
                    .map(|e| {
                        let t = parse_ratio(&e.t).ok_or_else(|| malformed("homotopy", format!("bad time {:?}", e.t)))?;
                        Ok((t, e.cocycle.resolve(g)?))
                    })
                    .collect::<Result<Vec<_>, IoError>>()?;
                CocycleHomotopy::table_of_samples(g.clone(), s)?
            }
        })
    }
}
