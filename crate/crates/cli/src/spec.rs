//! JSON model documents: substrates, named states, attributes, variables and tasks.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Deserialize;
use serde_json::Value;
use thiserror::Error;

use superinfo_core::{
    validate_variable, Attribute, ClassicalModel, CtError, Label, Model, PureState, QuantumModel, SubstrateSpec,
    Task, Variable,
};

use crate::amplitude::parse_amplitude;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("parse error in {path}: {message}")]
    Parse { path: String, message: String },

    #[error("validation error in {object}: {source}")]
    Validation { object: String, source: CtError },

    #[error("unresolved reference in {object}: no {kind} named `{name}`")]
    Reference { object: String, kind: &'static str, name: String },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    kind: String,
    #[serde(default)]
    dimension: Option<usize>,
    /// Classical state labels.
    #[serde(default)]
    labels: Vec<String>,
    #[serde(default)]
    ancilla_budget: Option<usize>,
    #[serde(default)]
    states: Vec<RawState>,
    #[serde(default)]
    joint_states: Vec<RawJointState>,
    #[serde(default)]
    attributes: Vec<RawAttribute>,
    #[serde(default)]
    variables: Vec<RawVariable>,
    #[serde(default)]
    tasks: Vec<RawTask>,
    #[serde(default)]
    superinformation: Option<[String; 2]>,
    #[serde(default)]
    decision_support: Option<[String; 2]>,
    #[serde(default)]
    expect: BTreeMap<String, bool>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawState {
    name: String,
    amplitudes: Vec<Value>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawJointState {
    name: String,
    dims: Vec<usize>,
    amplitudes: Vec<Value>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAttribute {
    name: String,
    kind: AttributeKind,
    states: Vec<String>,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum AttributeKind {
    Set,
    Subspace,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVariable {
    name: String,
    members: Vec<RawMember>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMember {
    label: String,
    attribute: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTask {
    name: String,
    pairs: Vec<[String; 2]>,
    #[serde(default)]
    side_effects: bool,
}

/// A validated model document.
#[derive(Debug)]
pub struct ModelSpecDocument {
    pub model: Model,
    pub substrate: Arc<SubstrateSpec>,
    pub states: Vec<(String, PureState)>,
    pub joint_states: Vec<(String, PureState)>,
    pub attributes: Vec<(String, Attribute)>,
    pub variables: Vec<(String, Variable)>,
    pub tasks: Vec<(String, Task)>,
    pub superinformation: Option<[String; 2]>,
    pub decision_support: Option<[String; 2]>,
    pub expect: BTreeMap<String, bool>,
}

impl ModelSpecDocument {
    pub fn variable(&self, name: &str) -> Option<&Variable> {
        self.variables.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    pub fn attribute(&self, name: &str) -> Option<&Attribute> {
        self.attributes.iter().find(|(n, _)| n == name).map(|(_, a)| a)
    }

    pub fn state(&self, name: &str) -> Option<&PureState> {
        self.states.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }

    pub fn joint_state(&self, name: &str) -> Option<&PureState> {
        self.joint_states.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }
}

/// Read and validate a model document.
pub fn parse_model_spec(path: &Path) -> Result<(ModelSpecDocument, Vec<u8>), SpecError> {
    let bytes = std::fs::read(path).map_err(|source| SpecError::Io { path: path.display().to_string(), source })?;
    let doc = parse_model_bytes(&bytes, &path.display().to_string())?;
    Ok((doc, bytes))
}

pub fn parse_model_bytes(bytes: &[u8], origin: &str) -> Result<ModelSpecDocument, SpecError> {
    let raw: RawDocument = serde_json::from_slice(bytes)
        .map_err(|e| SpecError::Parse { path: origin.to_string(), message: e.to_string() })?;
    build(raw, origin)
}

fn validation(object: String) -> impl FnOnce(CtError) -> SpecError {
    move |source| SpecError::Validation { object, source }
}

fn amplitudes(values: &[Value], at: &str) -> Result<Vec<Complex64>, SpecError> {
    values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            parse_amplitude(v).map_err(|message| SpecError::Parse { path: format!("{at}.amplitudes[{i}]"), message })
        })
        .collect()
}

fn build(raw: RawDocument, origin: &str) -> Result<ModelSpecDocument, SpecError> {
    let (model, substrate) = match raw.kind.as_str() {
        "quantum" => {
            let d = raw.dimension.ok_or_else(|| SpecError::Parse {
                path: format!("{origin}: dimension"),
                message: "quantum models need a dimension".into(),
            })?;
            let sub = SubstrateSpec::quantum("s", d).map_err(validation("substrate".into()))?;
            (Model::Quantum(QuantumModel::default()), sub)
        }
        "classical" => {
            if !raw.states.is_empty() {
                return Err(SpecError::Parse {
                    path: format!("{origin}: states"),
                    message: "classical models list their states under `labels`".into(),
                });
            }
            let sub = SubstrateSpec::classical("s", raw.labels.clone()).map_err(validation("substrate".into()))?;
            let m = raw.ancilla_budget.map(ClassicalModel::new).unwrap_or_default();
            (Model::Classical(m), sub)
        }
        other => {
            return Err(SpecError::Parse {
                path: format!("{origin}: kind"),
                message: format!("unknown model kind `{other}` (expected quantum or classical)"),
            })
        }
    };

    let mut states = Vec::new();
    for (i, s) in raw.states.iter().enumerate() {
        let amps = amplitudes(&s.amplitudes, &format!("{origin}: states[{i}]"))?;
        let p = PureState::new(amps).map_err(validation(format!("state `{}`", s.name)))?;
        if p.dim() != substrate.size() {
            return Err(SpecError::Validation {
                object: format!("state `{}`", s.name),
                source: CtError::DimensionMismatch { expected: substrate.size(), found: p.dim() },
            });
        }
        states.push((s.name.clone(), p));
    }

    let mut joint_states = Vec::new();
    for (i, s) in raw.joint_states.iter().enumerate() {
        let amps = amplitudes(&s.amplitudes, &format!("{origin}: joint_states[{i}]"))?;
        let p = PureState::with_dims(amps, s.dims.clone()).map_err(validation(format!("joint state `{}`", s.name)))?;
        joint_states.push((s.name.clone(), p));
    }

    let mut attributes: Vec<(String, Attribute)> = Vec::new();
    for a in &raw.attributes {
        let object = format!("attribute `{}`", a.name);
        let attr = if substrate.kind() == superinfo_core::Kind::Classical {
            if a.kind != AttributeKind::Set {
                return Err(SpecError::Validation {
                    object,
                    source: CtError::Representation("classical attributes are sets".into()),
                });
            }
            for n in &a.states {
                if substrate.index_of(n).is_none() {
                    return Err(SpecError::Reference { object, kind: "label", name: n.clone() });
                }
            }
            Attribute::labelled(&substrate, &a.states).map_err(validation(object.clone()))?
        } else {
            let mut members = Vec::with_capacity(a.states.len());
            for n in &a.states {
                let s = states.iter().find(|(m, _)| m == n).map(|(_, s)| s.clone());
                members.push(s.ok_or_else(|| SpecError::Reference { object: object.clone(), kind: "state", name: n.clone() })?);
            }
            match a.kind {
                AttributeKind::Set => Attribute::pures(&substrate, members),
                AttributeKind::Subspace => {
                    let vecs: Vec<_> = members.iter().map(|s| s.vector().clone()).collect();
                    Attribute::span(&substrate, &vecs)
                }
            }
            .map_err(validation(object.clone()))?
        };
        attributes.push((a.name.clone(), attr.with_name(a.name.clone())));
    }
    let find_attr = |object: &str, name: &str| -> Result<Attribute, SpecError> {
        attributes.iter().find(|(n, _)| n == name).map(|(_, a)| a.clone()).ok_or_else(|| SpecError::Reference {
            object: object.to_string(),
            kind: "attribute",
            name: name.to_string(),
        })
    };

    let mut variables = Vec::new();
    for v in &raw.variables {
        let object = format!("variable `{}`", v.name);
        let members = v
            .members
            .iter()
            .map(|m| Ok((Label::parse(&m.label), find_attr(&object, &m.attribute)?)))
            .collect::<Result<Vec<_>, SpecError>>()?;
        variables.push((v.name.clone(), validate_variable(members).map_err(validation(object))?));
    }

    let mut tasks = Vec::new();
    for t in &raw.tasks {
        let object = format!("task `{}`", t.name);
        let pairs = t
            .pairs
            .iter()
            .map(|[a, b]| Ok((find_attr(&object, a)?, find_attr(&object, b)?)))
            .collect::<Result<Vec<_>, SpecError>>()?;
        tasks.push((t.name.clone(), Task::new(&substrate, pairs, t.side_effects).map_err(validation(object))?));
    }

    for (field, pair) in [("superinformation", &raw.superinformation), ("decision_support", &raw.decision_support)] {
        if let Some(pair) = pair {
            for name in pair {
                if !variables.iter().any(|(n, _)| n == name) {
                    return Err(SpecError::Reference { object: field.to_string(), kind: "variable", name: name.clone() });
                }
            }
        }
    }

    Ok(ModelSpecDocument {
        model,
        substrate,
        states,
        joint_states,
        attributes,
        variables,
        tasks,
        superinformation: raw.superinformation,
        decision_support: raw.decision_support,
        expect: raw.expect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ModelSpecDocument, SpecError> {
        parse_model_bytes(text.as_bytes(), "test.json")
    }

    #[test]
    fn minimal_qubit_loads() {
        let doc = parse(
            r#"{"kind": "quantum", "dimension": 2,
                "states": [{"name": "0", "amplitudes": [1, 0]}, {"name": "1", "amplitudes": [[0, 0], [1, 0]]}],
                "attributes": [{"name": "x0", "kind": "set", "states": ["0"]},
                               {"name": "x1", "kind": "set", "states": ["1"]}],
                "variables": [{"name": "X", "members": [{"label": "0", "attribute": "x0"},
                                                        {"label": "1", "attribute": "x1"}]}]}"#,
        )
        .unwrap();
        assert_eq!(doc.variable("X").unwrap().len(), 2);
    }

    #[test]
    fn non_unit_state_is_a_validation_error() {
        let err = parse(r#"{"kind": "quantum", "dimension": 2, "states": [{"name": "bad", "amplitudes": [1, 1]}]}"#)
            .unwrap_err();
        assert!(matches!(err, SpecError::Validation { ref object, .. } if object == "state `bad`"), "{err}");
    }

    #[test]
    fn overlapping_members_are_rejected() {
        let err = parse(
            r#"{"kind": "quantum", "dimension": 2,
                "states": [{"name": "0", "amplitudes": [1, 0]}, {"name": "1", "amplitudes": [0, 1]}],
                "attributes": [{"name": "a", "kind": "set", "states": ["0"]},
                               {"name": "b", "kind": "set", "states": ["0", "1"]}],
                "variables": [{"name": "Z", "members": [{"label": "a", "attribute": "a"},
                                                        {"label": "b", "attribute": "b"}]}]}"#,
        )
        .unwrap_err();
        match err {
            SpecError::Validation { object, source: CtError::Disjointness { .. } } => assert_eq!(object, "variable `Z`"),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn malformed_amplitude_names_its_path() {
        let err = parse(r#"{"kind": "quantum", "dimension": 2, "states": [{"name": "s", "amplitudes": [1, "x"]}]}"#)
            .unwrap_err();
        assert!(err.to_string().contains("states[0].amplitudes[1]"), "{err}");
    }

    #[test]
    fn unknown_reference_is_reported() {
        let err = parse(r#"{"kind": "classical", "labels": ["0", "1"],
                           "attributes": [{"name": "a", "kind": "set", "states": ["2"]}]}"#)
        .unwrap_err();
        assert!(matches!(err, SpecError::Reference { kind: "label", .. }), "{err}");
    }
}
