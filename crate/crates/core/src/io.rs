//! JSON documents for spaces, metric measure spaces and maps.
//!
//! Space: `{"points": [...], "atoms": [[...], ...], "weights": ["p/q" | "inf", ...]}`
//! with an optional `"dist"` upper triangle. Map: `{"source": <space or path>,
//! "target": <space or path>, "fn": {"p1": "q1", ...}}`; relative paths are
//! resolved against the map file's directory.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::category::FiniteMetricMeasureSpace;
use crate::error::Error;
use crate::ext::{format_ratio, parse_ratio, ExtRatio};
use crate::morphism::MeasurableMap;
use crate::scalar::Scalar;
use crate::space::FiniteMeasureSpace;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDoc {
    pub points: Vec<String>,
    pub atoms: Vec<Vec<String>>,
    pub weights: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dist: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceRef {
    Path(String),
    Inline(SpaceDoc),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub source: SpaceRef,
    pub target: SpaceRef,
    #[serde(rename = "fn")]
    pub assignment: BTreeMap<String, String>,
}

/// A problem with an input document, located by file and field.
#[derive(Debug, Error)]
pub enum InputError {
    #[error("{path}: cannot read: {message}")]
    Io { path: String, message: String },
    #[error("{path}: malformed JSON: {message}")]
    Json { path: String, message: String },
    #[error("{path}: field `{field}`: {error}")]
    Invalid { path: String, field: String, error: Error },
}

impl InputError {
    pub fn kind(&self) -> &'static str {
        match self {
            InputError::Io { .. } => "Io",
            InputError::Json { .. } => "Json",
            InputError::Invalid { error, .. } => error.kind(),
        }
    }

    pub fn path(&self) -> &str {
        match self {
            InputError::Io { path, .. } | InputError::Json { path, .. } | InputError::Invalid { path, .. } => path,
        }
    }

    pub fn field(&self) -> &str {
        match self {
            InputError::Invalid { field, .. } => field,
            _ => "",
        }
    }

    pub fn reason(&self) -> String {
        match self {
            InputError::Io { message, .. } | InputError::Json { message, .. } => message.clone(),
            InputError::Invalid { error, .. } => error.to_string(),
        }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, InputError::Invalid { error: Error::BudgetExceeded { .. }, .. })
    }
}

fn invalid(path: &str, field: impl Into<String>, error: Error) -> InputError {
    InputError::Invalid {
        path: path.to_string(),
        field: field.into(),
        error,
    }
}

/// Validate a space document, returning the metric version when `dist` is present.
pub fn space_from_doc<T: Scalar>(
    doc: &SpaceDoc,
    path: &str,
) -> Result<(FiniteMeasureSpace<T>, Option<FiniteMetricMeasureSpace<T>>), InputError> {
    let mut weights = Vec::with_capacity(doc.weights.len());
    for (i, w) in doc.weights.iter().enumerate() {
        let field = format!("weights[{i}]");
        let value = if w.trim() == "inf" {
            ExtRatio::infinity()
        } else {
            let r: Ratio<T> = parse_ratio(w).map_err(|e| invalid(path, &field, e))?;
            if r < Ratio::zero() {
                return Err(invalid(
                    path,
                    field,
                    Error::NegativeWeight {
                        atom: i,
                        weight: w.clone(),
                    },
                ));
            }
            ExtRatio::from(r)
        };
        weights.push(value);
    }
    let field_of = |e: &Error| match e {
        Error::DuplicatePoint(_) => "points",
        Error::ArityMismatch { .. } => "weights",
        _ => "atoms",
    };
    let space = FiniteMeasureSpace::new(&doc.points, &doc.atoms, weights)
        .map_err(|e| invalid(path, field_of(&e), e))?;
    let metric = match &doc.dist {
        None => None,
        Some(dist) => {
            let upper = dist
                .iter()
                .enumerate()
                .map(|(i, d)| parse_ratio(d).map_err(|e| invalid(path, format!("dist[{i}]"), e)))
                .collect::<Result<Vec<_>, _>>()?;
            Some(FiniteMetricMeasureSpace::new(&space, upper).map_err(|e| invalid(path, "dist", e))?)
        }
    };
    Ok((space, metric))
}

/// Canonical document for a space.
pub fn space_to_doc<T: Scalar>(space: &FiniteMeasureSpace<T>) -> SpaceDoc {
    SpaceDoc {
        points: space.points().to_vec(),
        atoms: (0..space.num_atoms())
            .map(|a| space.atom_labels(a).into_iter().map(String::from).collect())
            .collect(),
        weights: space.weights().iter().map(|w| w.to_string()).collect(),
        dist: None,
    }
}

pub fn metric_space_to_doc<T: Scalar>(space: &FiniteMetricMeasureSpace<T>) -> SpaceDoc {
    SpaceDoc {
        dist: Some(space.upper_triangle().iter().map(format_ratio).collect()),
        ..space_to_doc(space.base())
    }
}

pub fn map_to_doc<T: Scalar>(map: &MeasurableMap<T>) -> MapDoc {
    let assignment = map
        .point_fn()
        .iter()
        .enumerate()
        .map(|(p, &q)| {
            (
                map.source().point_label(p).to_string(),
                map.target().point_label(q).to_string(),
            )
        })
        .collect();
    MapDoc {
        source: SpaceRef::Inline(space_to_doc(map.source())),
        target: SpaceRef::Inline(space_to_doc(map.target())),
        assignment,
    }
}

/// A parsed map plus the metric structure of its endpoints, if any.
#[derive(Clone, Debug)]
pub struct LoadedMap<T: Scalar> {
    pub map: MeasurableMap<T>,
    pub source_metric: Option<FiniteMetricMeasureSpace<T>>,
    pub target_metric: Option<FiniteMetricMeasureSpace<T>>,
    /// Every file read, the map file first.
    pub files: Vec<PathBuf>,
}

pub fn read_json<D: for<'de> Deserialize<'de>>(path: &Path) -> Result<D, InputError> {
    let shown = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| InputError::Io {
        path: shown.clone(),
        message: e.to_string(),
    })?;
    serde_json::from_str(&text).map_err(|e| InputError::Json {
        path: shown,
        message: e.to_string(),
    })
}

type Endpoint<T> = (FiniteMeasureSpace<T>, Option<FiniteMetricMeasureSpace<T>>);

fn resolve_space<T: Scalar>(
    space: &SpaceRef,
    base_dir: &Path,
    map_path: &str,
    field: &str,
    files: &mut Vec<PathBuf>,
) -> Result<Endpoint<T>, InputError> {
    match space {
        SpaceRef::Inline(doc) => space_from_doc(doc, map_path).map_err(|e| match e {
            InputError::Invalid { path, field: inner, error } => InputError::Invalid {
                path,
                field: format!("{field}.{inner}"),
                error,
            },
            other => other,
        }),
        SpaceRef::Path(rel) => {
            let path = base_dir.join(rel);
            let doc: SpaceDoc = read_json(&path)?;
            files.push(path.clone());
            space_from_doc(&doc, &path.display().to_string())
        }
    }
}

pub fn map_from_doc<T: Scalar>(
    doc: &MapDoc,
    path: &str,
    base_dir: &Path,
) -> Result<LoadedMap<T>, InputError> {
    let mut files = Vec::new();
    let (source, source_metric) = resolve_space(&doc.source, base_dir, path, "source", &mut files)?;
    let (target, target_metric) = resolve_space(&doc.target, base_dir, path, "target", &mut files)?;
    let map = MeasurableMap::new(&source, &target, doc.assignment.iter()).map_err(|e| invalid(path, "fn", e))?;
    Ok(LoadedMap {
        map,
        source_metric,
        target_metric,
        files,
    })
}

pub fn load_map<T: Scalar>(path: &Path) -> Result<LoadedMap<T>, InputError> {
    let doc: MapDoc = read_json(path)?;
    let base_dir = path.parent().unwrap_or_else(|| Path::new("."));
    let mut loaded = map_from_doc(&doc, &path.display().to_string(), base_dir)?;
    loaded.files.insert(0, path.to_path_buf());
    Ok(loaded)
}

pub fn load_space<T: Scalar>(path: &Path) -> Result<Endpoint<T>, InputError> {
    let doc: SpaceDoc = read_json(path)?;
    space_from_doc(&doc, &path.display().to_string())
}
