//! Finite Kripke models with a single accessibility relation, pointed models
//! and finite classes of pointed models.

mod dsl;
mod json;

use std::collections::{HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::error::ResourceError;
use crate::syntax::Alphabet;

pub use dsl::{parse_dsl, write_dsl};
pub use json::{parse_json, write_json, write_model_json};

pub const DEFAULT_UNRAVEL_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoadError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("validation error: {0}")]
    Invalid(String),
}

impl LoadError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        LoadError::Invalid(msg.into())
    }
}

/// Serialization format for model classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Dsl,
}

impl Format {
    /// JSON when the first non-blank character opens an object, DSL otherwise.
    pub fn sniff(text: &str) -> Format {
        match text.trim_start().chars().next() {
            Some('{') => Format::Json,
            _ => Format::Dsl,
        }
    }
}

/// State names: nonempty, drawn from `[A-Za-z0-9_./']`.
pub fn is_state_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(is_state_char)
}

pub(crate) fn is_state_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '/' | '\'')
}

/// A finite Kripke model. States are numbered `0..len()` in declaration
/// order; successor lists and valuations are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    alphabet: Alphabet,
    names: Vec<String>,
    succ: Vec<Vec<usize>>,
    val: Vec<Vec<usize>>,
}

impl KripkeModel {
    /// Builds a model from named parts, validating every invariant.
    /// States missing from `val` get the empty valuation.
    pub fn new<S: AsRef<str>>(
        alphabet: Alphabet,
        states: &[S],
        rel: &[(S, S)],
        val: &[(S, Vec<S>)],
    ) -> Result<Self, LoadError> {
        let names: Vec<String> = states.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if !is_state_name(n) {
                return Err(LoadError::invalid(format!("state name `{n}` is not a valid state identifier")));
            }
            if index.insert(n.as_str(), i).is_some() {
                return Err(LoadError::invalid(format!("state `{n}` declared twice")));
            }
        }
        let lookup = |s: &str, what: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| LoadError::invalid(format!("{what} `{s}` is not a declared state")))
        };
        let mut succ = vec![Vec::new(); names.len()];
        for (a, b) in rel {
            let a = lookup(a.as_ref(), "relation endpoint")?;
            let b = lookup(b.as_ref(), "relation endpoint")?;
            succ[a].push(b);
        }
        let mut valuation = vec![Vec::new(); names.len()];
        let mut assigned = vec![false; names.len()];
        for (s, props) in val {
            let i = lookup(s.as_ref(), "valuation entry")?;
            if std::mem::replace(&mut assigned[i], true) {
                return Err(LoadError::invalid(format!("valuation of `{}` given twice", s.as_ref())));
            }
            for p in props {
                let p = p.as_ref();
                let pi = alphabet.index_of(p).ok_or_else(|| {
                    LoadError::invalid(format!(
                        "proposition `{p}` at state `{}` is not in the alphabet",
                        s.as_ref()
                    ))
                })?;
                valuation[i].push(pi);
            }
        }
        Ok(Self::from_indexed(alphabet, names, succ, valuation))
    }

    /// Builds a model from index-based parts. Panics if an index is out of
    /// range; intended for programmatic construction.
    pub fn from_indexed(
        alphabet: Alphabet,
        names: Vec<String>,
        mut succ: Vec<Vec<usize>>,
        mut val: Vec<Vec<usize>>,
    ) -> Self {
        let n = names.len();
        assert_eq!(succ.len(), n, "successor lists must cover every state");
        assert_eq!(val.len(), n, "valuations must cover every state");
        for list in succ.iter_mut() {
            list.sort_unstable();
            list.dedup();
            assert!(list.iter().all(|&t| t < n), "relation endpoint out of range");
        }
        for props in val.iter_mut() {
            props.sort_unstable();
            props.dedup();
            assert!(props.iter().all(|&p| p < alphabet.len()), "proposition out of range");
        }
        Self {
            alphabet,
            names,
            succ,
            val,
        }
    }

    /// A model with no states.
    pub fn empty(alphabet: Alphabet) -> Self {
        Self {
            alphabet,
            names: Vec::new(),
            succ: Vec::new(),
            val: Vec::new(),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn state_name(&self, s: usize) -> &str {
        &self.names[s]
    }

    pub fn state_names(&self) -> &[String] {
        &self.names
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn successors(&self, s: usize) -> &[usize] {
        &self.succ[s]
    }

    /// Indices (into the alphabet) of the propositions true at `s`.
    pub fn valuation(&self, s: usize) -> &[usize] {
        &self.val[s]
    }

    pub fn holds(&self, s: usize, prop: usize) -> bool {
        self.val[s].binary_search(&prop).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(s, ts)| ts.iter().map(move |&t| (s, t)))
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    /// The same model over a larger alphabet; propositions not in the
    /// original alphabet are false everywhere.
    pub fn with_alphabet(&self, alphabet: &Alphabet) -> KripkeModel {
        let remap: Vec<usize> = self
            .alphabet
            .props()
            .iter()
            .map(|p| alphabet.index_of(p).expect("target alphabet must include the model's alphabet"))
            .collect();
        let val = self
            .val
            .iter()
            .map(|props| props.iter().map(|&p| remap[p]).collect())
            .collect();
        KripkeModel::from_indexed(alphabet.clone(), self.names.clone(), self.succ.clone(), val)
    }

    /// States reachable from `from` (including `from`), in increasing order.
    pub fn reachable_from(&self, from: usize) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(s) = queue.pop_front() {
            for &t in &self.succ[s] {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        (0..self.len()).filter(|&s| seen[s]).collect()
    }

    /// Restriction to `keep` (sorted state indices). Returns the restricted
    /// model and the old-to-new index map.
    fn restrict(&self, keep: &[usize]) -> (KripkeModel, Vec<Option<usize>>) {
        let mut map = vec![None; self.len()];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = Some(new);
        }
        let names = keep.iter().map(|&s| self.names[s].clone()).collect();
        let succ = keep
            .iter()
            .map(|&s| self.succ[s].iter().filter_map(|&t| map[t]).collect())
            .collect();
        let val = keep.iter().map(|&s| self.val[s].clone()).collect();
        (
            KripkeModel::from_indexed(self.alphabet.clone(), names, succ, val),
            map,
        )
    }
}

/// A Kripke model with a designated state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointedModel {
    model: KripkeModel,
    point: usize,
    name: Option<String>,
}

impl PointedModel {
    pub fn new(model: KripkeModel, point: usize) -> Self {
        assert!(point < model.len(), "point must be a state of the model");
        Self {
            model,
            point,
            name: None,
        }
    }

    pub fn with_point_name(model: KripkeModel, point: &str) -> Result<Self, LoadError> {
        let p = model
            .state_index(point)
            .ok_or_else(|| LoadError::invalid(format!("point `{point}` is not a declared state")))?;
        Ok(Self::new(model, p))
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn model(&self) -> &KripkeModel {
        &self.model
    }

    pub fn point(&self) -> usize {
        self.point
    }

    pub fn point_name(&self) -> &str {
        self.model.state_name(self.point)
    }

    pub fn with_alphabet(&self, alphabet: &Alphabet) -> PointedModel {
        PointedModel {
            model: self.model.with_alphabet(alphabet),
            point: self.point,
            name: self.name.clone(),
        }
    }
}

impl fmt::Display for PointedModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.name {
            Some(n) => write!(f, "{n}@{}", self.point_name()),
            None => write!(f, "{}-state model@{}", self.model.len(), self.point_name()),
        }
    }
}

/// A finite sequence of pointed models. Duplicates are allowed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModelClass {
    pub label: Option<String>,
    pub members: Vec<PointedModel>,
}

impl ModelClass {
    pub fn new(members: Vec<PointedModel>) -> Self {
        Self { label: None, members }
    }

    pub fn labelled(label: impl Into<String>, members: Vec<PointedModel>) -> Self {
        Self {
            label: Some(label.into()),
            members,
        }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, PointedModel> {
        self.members.iter()
    }

    /// Union of the members' alphabets.
    pub fn alphabet(&self) -> Alphabet {
        self.members
            .iter()
            .fold(Alphabet::empty(), |acc, m| acc.union(m.model().alphabet()))
    }

    /// Every member re-expressed over `alphabet`.
    pub fn with_alphabet(&self, alphabet: &Alphabet) -> ModelClass {
        ModelClass {
            label: self.label.clone(),
            members: self.members.iter().map(|m| m.with_alphabet(alphabet)).collect(),
        }
    }

    /// The members at `indices`, in the given order.
    pub fn select(&self, indices: &[usize]) -> ModelClass {
        ModelClass::new(indices.iter().map(|&i| self.members[i].clone()).collect())
    }
}

impl<'a> IntoIterator for &'a ModelClass {
    type Item = &'a PointedModel;
    type IntoIter = std::slice::Iter<'a, PointedModel>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

/// Brings two classes onto their common alphabet.
pub fn unify_alphabets(c1: &ModelClass, c2: &ModelClass) -> (ModelClass, ModelClass) {
    let a = c1.alphabet().union(&c2.alphabet());
    (c1.with_alphabet(&a), c2.with_alphabet(&a))
}

/// Disjoint union of a list of pointed models, with the bookkeeping to find
/// each member inside it.
#[derive(Debug, Clone)]
pub struct UnionModel {
    pub model: KripkeModel,
    /// First state of member `i` in the union.
    pub offsets: Vec<usize>,
    /// Image of member `i`'s point in the union.
    pub points: Vec<usize>,
}

impl UnionModel {
    pub fn of<'a>(members: impl IntoIterator<Item = &'a PointedModel>) -> UnionModel {
        let members: Vec<&PointedModel> = members.into_iter().collect();
        let alphabet = members
            .iter()
            .fold(Alphabet::empty(), |acc, m| acc.union(m.model().alphabet()));
        let mut names = Vec::new();
        let mut succ = Vec::new();
        let mut val = Vec::new();
        let mut offsets = Vec::new();
        let mut points = Vec::new();
        for (i, m) in members.iter().enumerate() {
            let model = m.model();
            let offset = names.len();
            offsets.push(offset);
            points.push(offset + m.point());
            let remap: Vec<usize> = model
                .alphabet()
                .props()
                .iter()
                .map(|p| alphabet.index_of(p).unwrap())
                .collect();
            for s in 0..model.len() {
                names.push(format!("{i}.{}", model.state_name(s)));
                succ.push(model.successors(s).iter().map(|&t| t + offset).collect());
                val.push(model.valuation(s).iter().map(|&p| remap[p]).collect());
            }
        }
        UnionModel {
            model: KripkeModel::from_indexed(alphabet, names, succ, val),
            offsets,
            points,
        }
    }

    pub fn pointed(&self, member: usize) -> PointedModel {
        PointedModel::new(self.model.clone(), self.points[member])
    }
}

/// Disjoint union of the members of `c`. State `s` of member `i` becomes
/// `i.s`; alphabets are merged.
pub fn disjoint_union(c: &ModelClass) -> KripkeModel {
    UnionModel::of(c.iter()).model
}

/// Tree unraveling of `p` truncated at depth `d`, with the default state cap.
pub fn unravel_to_depth(p: &PointedModel, d: usize) -> Result<PointedModel, ResourceError> {
    unravel_to_depth_capped(p, d, DEFAULT_UNRAVEL_CAP)
}

/// Tree unraveling truncated at depth `d`. States are the paths of length at
/// most `d` from the point, named by joining state names with `/`.
pub fn unravel_to_depth_capped(p: &PointedModel, d: usize, cap: usize) -> Result<PointedModel, ResourceError> {
    let m = p.model();
    // paths[k][s]: number of paths of length <= k starting at s.
    let mut paths = vec![1usize; m.len()];
    for _ in 0..d {
        paths = (0..m.len())
            .map(|s| {
                m.successors(s)
                    .iter()
                    .fold(1usize, |acc, &t| acc.saturating_add(paths[t]))
            })
            .collect();
    }
    if paths[p.point()] > cap {
        return Err(ResourceError::new("unraveled tree", cap));
    }

    let mut names = vec![m.state_name(p.point()).to_string()];
    let mut origin = vec![p.point()];
    let mut succ: Vec<Vec<usize>> = vec![Vec::new()];
    let mut frontier = vec![0usize];
    for _ in 0..d {
        let mut next = Vec::new();
        for node in frontier {
            for &t in m.successors(origin[node]) {
                let child = names.len();
                names.push(format!("{}/{}", names[node], m.state_name(t)));
                origin.push(t);
                succ.push(Vec::new());
                succ[node].push(child);
                next.push(child);
            }
        }
        frontier = next;
    }
    let val = origin.iter().map(|&s| m.valuation(s).to_vec()).collect();
    let model = KripkeModel::from_indexed(m.alphabet().clone(), names, succ, val);
    let mut out = PointedModel::new(model, 0);
    out.name = p.name.clone();
    Ok(out)
}

/// Restriction of `p` to the states reachable from its point.
pub fn generated_submodel(p: &PointedModel) -> PointedModel {
    let keep = p.model().reachable_from(p.point());
    let (model, map) = p.model().restrict(&keep);
    let mut out = PointedModel::new(model, map[p.point()].unwrap());
    out.name = p.name.clone();
    out
}

/// Reads a class in the given format. A JSON document holding a single model
/// yields a one-member class.
pub fn load_class(text: &str, format: Format) -> Result<ModelClass, LoadError> {
    match format {
        Format::Json => parse_json(text),
        Format::Dsl => parse_dsl(text),
    }
}

/// Writes a class; `load_class` reads the output back to an equal class.
pub fn save_class(c: &ModelClass, format: Format) -> String {
    match format {
        Format::Json => write_json(c),
        Format::Dsl => write_dsl(c),
    }
}
