use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::{KripkeModel, LoadError, ModelClass, PointedModel};
use crate::syntax::Alphabet;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(default)]
    alphabet: Vec<String>,
    states: Vec<String>,
    #[serde(default)]
    rel: Vec<(String, String)>,
    #[serde(default)]
    val: IndexMap<String, Vec<String>>,
    point: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    models: Vec<ModelDoc>,
}

fn syntax_error(e: serde_json::Error) -> LoadError {
    LoadError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

fn shape_error(e: serde_json::Error) -> LoadError {
    LoadError::invalid(e.to_string())
}

fn model_from_doc(doc: ModelDoc) -> Result<PointedModel, LoadError> {
    let alphabet = Alphabet::new(doc.alphabet).map_err(LoadError::Invalid)?;
    let val: Vec<(String, Vec<String>)> = doc.val.into_iter().collect();
    let model = KripkeModel::new(alphabet, &doc.states, &doc.rel, &val)?;
    let p = PointedModel::with_point_name(model, &doc.point)?;
    Ok(match doc.name {
        Some(n) => p.named(n),
        None => p,
    })
}

fn model_to_doc(p: &PointedModel) -> ModelDoc {
    let m = p.model();
    let props = m.alphabet().props();
    ModelDoc {
        name: p.name().map(str::to_string),
        alphabet: props.to_vec(),
        states: m.state_names().to_vec(),
        rel: m
            .edges()
            .map(|(s, t)| (m.state_name(s).to_string(), m.state_name(t).to_string()))
            .collect(),
        val: (0..m.len())
            .map(|s| {
                (
                    m.state_name(s).to_string(),
                    m.valuation(s).iter().map(|&i| props[i].clone()).collect(),
                )
            })
            .collect(),
        point: p.point_name().to_string(),
    }
}

/// Reads either a class document `{"label":..,"models":[..]}` or a single
/// model document.
pub fn parse_json(text: &str) -> Result<ModelClass, LoadError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(syntax_error)?;
    let is_class = value.get("models").is_some();
    if is_class {
        let doc: ClassDoc = serde_json::from_value(value).map_err(shape_error)?;
        let members = doc
            .models
            .into_iter()
            .enumerate()
            .map(|(i, m)| model_from_doc(m).map_err(|e| in_member(i, e)))
            .collect::<Result<_, _>>()?;
        Ok(ModelClass {
            label: doc.label,
            members,
        })
    } else {
        let doc: ModelDoc = serde_json::from_value(value).map_err(shape_error)?;
        Ok(ModelClass::new(vec![model_from_doc(doc)?]))
    }
}

fn in_member(i: usize, e: LoadError) -> LoadError {
    match e {
        LoadError::Invalid(msg) => LoadError::Invalid(format!("model #{i}: {msg}")),
        other => other,
    }
}

/// Class document, pretty-printed with a trailing newline.
pub fn write_json(c: &ModelClass) -> String {
    let doc = ClassDoc {
        label: c.label.clone(),
        models: c.iter().map(model_to_doc).collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("class documents always serialize");
    out.push('\n');
    out
}

/// A single model document on one line.
pub fn write_model_json(p: &PointedModel) -> String {
    serde_json::to_string(&model_to_doc(p)).expect("model documents always serialize")
}
