//! Modal formulas: the tree, its text form, and structural measures.
//!
//! The concrete grammar is
//!
//! ```text
//! formula := disj
//! disj    := conj { "|" conj }
//! conj    := unary { "&" unary }
//! unary   := "!" unary | "<>" unary | "[]" unary | atom
//! atom    := "true" | "false" | ident | "(" formula ")"
//! ```
//!
//! `&` binds tighter than `|`. A chain `a & b & c` parses to a single n-ary
//! conjunction; explicit parentheses produce nested nodes, so printing and
//! re-parsing reproduces the exact tree.

mod enumerate;
mod parse;

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

pub use enumerate::{enumerate_formulas, enumerate_formulas_capped, DEFAULT_ENUMERATION_CAP};
pub use parse::{parse_formula, ParseError};

/// A finite modal formula.
///
/// `And` and `Or` always carry at least two children; use [`Formula::and`] and
/// [`Formula::or`] to build them from arbitrary lists.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Top,
    Bot,
    Atom(String),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Dia(Box<Formula>),
    Box(Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn dia(f: Formula) -> Self {
        Formula::Dia(Box::new(f))
    }

    pub fn boxed(f: Formula) -> Self {
        Formula::Box(Box::new(f))
    }

    /// `n` nested diamonds around `f`.
    pub fn dia_n(n: usize, f: Formula) -> Self {
        (0..n).fold(f, |acc, _| Formula::dia(acc))
    }

    /// Conjunction of `children`: `Top` when empty, the child itself when
    /// there is exactly one.
    pub fn and(mut children: Vec<Formula>) -> Self {
        match children.len() {
            0 => Formula::Top,
            1 => children.pop().unwrap(),
            _ => Formula::And(children),
        }
    }

    /// Disjunction of `children`: `Bot` when empty, the child itself when
    /// there is exactly one.
    pub fn or(mut children: Vec<Formula>) -> Self {
        match children.len() {
            0 => Formula::Bot,
            1 => children.pop().unwrap(),
            _ => Formula::Or(children),
        }
    }

    /// Conjunction with identical conjuncts removed (first occurrence kept).
    pub fn and_dedup(children: impl IntoIterator<Item = Formula>) -> Self {
        Formula::and(dedup_in_order(children))
    }

    /// Disjunction with identical disjuncts removed (first occurrence kept).
    pub fn or_dedup(children: impl IntoIterator<Item = Formula>) -> Self {
        Formula::or(dedup_in_order(children))
    }

    /// Nesting count of `<>` and `[]`.
    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Top | Formula::Bot | Formula::Atom(_) => 0,
            Formula::Not(c) => c.modal_depth(),
            Formula::And(cs) | Formula::Or(cs) => {
                cs.iter().map(Formula::modal_depth).max().unwrap_or(0)
            }
            Formula::Dia(c) | Formula::Box(c) => 1 + c.modal_depth(),
        }
    }

    /// Node count of the tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::Top | Formula::Bot | Formula::Atom(_) => 1,
            Formula::Not(c) | Formula::Dia(c) | Formula::Box(c) => 1 + c.size(),
            Formula::And(cs) | Formula::Or(cs) => 1 + cs.iter().map(Formula::size).sum::<usize>(),
        }
    }

    /// Proposition names occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Formula::Top | Formula::Bot => {}
            Formula::Atom(a) => {
                out.insert(a.as_str());
            }
            Formula::Not(c) | Formula::Dia(c) | Formula::Box(c) => c.collect_atoms(out),
            Formula::And(cs) | Formula::Or(cs) => cs.iter().for_each(|c| c.collect_atoms(out)),
        }
    }

    /// Structural normal form: nested conjunctions (disjunctions) are
    /// flattened, children are sorted by printed form, duplicates dropped and
    /// single-child connectives collapsed. No semantic simplification.
    pub fn canonicalize(&self) -> Formula {
        match self {
            Formula::Top | Formula::Bot | Formula::Atom(_) => self.clone(),
            Formula::Not(c) => Formula::not(c.canonicalize()),
            Formula::Dia(c) => Formula::dia(c.canonicalize()),
            Formula::Box(c) => Formula::boxed(c.canonicalize()),
            Formula::And(cs) => {
                let mut flat = Vec::new();
                for c in cs {
                    match c.canonicalize() {
                        Formula::And(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                Formula::and(sorted_unique(flat))
            }
            Formula::Or(cs) => {
                let mut flat = Vec::new();
                for c in cs {
                    match c.canonicalize() {
                        Formula::Or(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                Formula::or(sorted_unique(flat))
            }
        }
    }

    /// The order used for deterministic tie-breaking: node count, then
    /// printed form.
    pub fn cmp_size_then_text(&self, other: &Formula) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| self.to_string().cmp(&other.to_string()))
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Or(_) => 0,
            Formula::And(_) => 1,
            _ => 2,
        }
    }

    fn write_at(&self, out: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        let parens = self.precedence() < min_prec;
        if parens {
            out.write_str("(")?;
        }
        match self {
            Formula::Top => out.write_str("true")?,
            Formula::Bot => out.write_str("false")?,
            Formula::Atom(a) => out.write_str(a)?,
            Formula::Not(c) => {
                out.write_str("!")?;
                c.write_at(out, 2)?;
            }
            Formula::Dia(c) => {
                out.write_str("<> ")?;
                c.write_at(out, 2)?;
            }
            Formula::Box(c) => {
                out.write_str("[] ")?;
                c.write_at(out, 2)?;
            }
            Formula::And(cs) => write_joined(out, cs, " & ", 2)?,
            Formula::Or(cs) => write_joined(out, cs, " | ", 1)?,
        }
        if parens {
            out.write_str(")")?;
        }
        Ok(())
    }
}

fn write_joined(out: &mut fmt::Formatter<'_>, cs: &[Formula], sep: &str, prec: u8) -> fmt::Result {
    for (i, c) in cs.iter().enumerate() {
        if i > 0 {
            out.write_str(sep)?;
        }
        c.write_at(out, prec)?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

/// Printed form with minimal parentheses.
pub fn print_formula(f: &Formula) -> String {
    f.to_string()
}

pub fn modal_depth(f: &Formula) -> usize {
    f.modal_depth()
}

fn dedup_in_order(children: impl IntoIterator<Item = Formula>) -> Vec<Formula> {
    let mut out: Vec<Formula> = Vec::new();
    for c in children {
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

fn sorted_unique(children: Vec<Formula>) -> Vec<Formula> {
    let mut keyed: Vec<(String, Formula)> = children.into_iter().map(|c| (c.to_string(), c)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.dedup_by(|a, b| a.0 == b.0);
    keyed.into_iter().map(|(_, c)| c).collect()
}

/// Proposition identifiers in sorted order, without duplicates.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Alphabet {
    props: Vec<String>,
}

impl Alphabet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds an alphabet, rejecting duplicates and names that are not
    /// identifiers of the formula grammar.
    pub fn new<I, S>(props: I) -> Result<Self, String>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out: Vec<String> = Vec::new();
        for p in props {
            let p = p.into();
            if !is_identifier(&p) {
                return Err(format!("proposition `{p}` is not a valid identifier"));
            }
            if out.contains(&p) {
                return Err(format!("proposition `{p}` declared twice"));
            }
            out.push(p);
        }
        out.sort();
        Ok(Self { props: out })
    }

    pub fn props(&self) -> &[String] {
        &self.props
    }

    pub fn len(&self) -> usize {
        self.props.len()
    }

    pub fn is_empty(&self) -> bool {
        self.props.is_empty()
    }

    pub fn index_of(&self, prop: &str) -> Option<usize> {
        self.props.binary_search_by(|p| p.as_str().cmp(prop)).ok()
    }

    pub fn contains(&self, prop: &str) -> bool {
        self.index_of(prop).is_some()
    }

    pub fn union(&self, other: &Alphabet) -> Alphabet {
        let mut props: Vec<String> = self.props.iter().chain(&other.props).cloned().collect();
        props.sort();
        props.dedup();
        Alphabet { props }
    }
}

pub(crate) fn is_keyword(s: &str) -> bool {
    matches!(s, "true" | "false")
}

/// `[a-zA-Z_][a-zA-Z0-9_]*`, keywords excluded.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && !is_keyword(s)
}
