//! Text format for model classes:
//!
//! ```text
//! class walks;                 # optional
//! model chain_1 {
//!   alphabet: p;               # optional, extended by props used in `val`
//!   states: s0 s1;
//!   rel: s0 -> s1;
//!   val: s0: p, s1: ;
//!   point: s0;
//! }
//! ```
//!
//! Whitespace is insignificant, `#` starts a comment, and names that are not
//! plain words may be written as double-quoted strings.

use std::fmt::Write as _;

use super::{is_state_char, KripkeModel, LoadError, ModelClass, PointedModel};
use crate::syntax::Alphabet;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    Str(String),
    Colon,
    Semi,
    Comma,
    LBrace,
    RBrace,
    Arrow,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("`{w}`"),
            Tok::Str(s) => format!("string {s:?}"),
            Tok::Colon => "`:`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Comma => "`,`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Lexed {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Lexed>, LoadError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, column, message: String| LoadError::Syntax { line, column, message };
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        let tok = match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                advance(1, &mut i, &mut col);
                continue;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            ':' => {
                advance(1, &mut i, &mut col);
                Tok::Colon
            }
            ';' => {
                advance(1, &mut i, &mut col);
                Tok::Semi
            }
            ',' => {
                advance(1, &mut i, &mut col);
                Tok::Comma
            }
            '{' => {
                advance(1, &mut i, &mut col);
                Tok::LBrace
            }
            '}' => {
                advance(1, &mut i, &mut col);
                Tok::RBrace
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                advance(2, &mut i, &mut col);
                Tok::Arrow
            }
            '"' => {
                let mut s = String::new();
                advance(1, &mut i, &mut col);
                loop {
                    match chars.get(i) {
                        None | Some('\n') => return Err(err(start_line, start_col, "unterminated string".into())),
                        Some('"') => {
                            advance(1, &mut i, &mut col);
                            break;
                        }
                        Some('\\') if matches!(chars.get(i + 1), Some('"') | Some('\\')) => {
                            s.push(chars[i + 1]);
                            advance(2, &mut i, &mut col);
                        }
                        Some(&c) => {
                            s.push(c);
                            advance(1, &mut i, &mut col);
                        }
                    }
                }
                Tok::Str(s)
            }
            c if is_state_char(c) => {
                let mut w = String::new();
                while i < chars.len() && is_state_char(chars[i]) {
                    w.push(chars[i]);
                    advance(1, &mut i, &mut col);
                }
                Tok::Word(w)
            }
            other => return Err(err(line, col, format!("unexpected character `{other}`"))),
        };
        out.push(Lexed {
            tok,
            line: start_line,
            column: start_col,
        });
    }
    out.push(Lexed {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Lexed>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> LoadError {
        let l = &self.toks[self.pos];
        LoadError::Syntax {
            line: l.line,
            column: l.column,
            message: format!("expected {expected}, found {}", l.tok.describe()),
        }
    }

    fn expect(&mut self, t: Tok) -> Result<(), LoadError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&t.describe()))
        }
    }

    fn name(&mut self) -> Result<String, LoadError> {
        match self.bump() {
            Tok::Word(w) | Tok::Str(w) => Ok(w),
            _ => {
                self.pos -= 1;
                Err(self.error("a name"))
            }
        }
    }

    fn word(&mut self) -> Result<String, LoadError> {
        match self.peek().clone() {
            Tok::Word(w) => {
                self.bump();
                Ok(w)
            }
            _ => Err(self.error("an identifier")),
        }
    }

    /// Words separated by blanks or commas, up to `;`.
    fn word_list(&mut self) -> Result<Vec<String>, LoadError> {
        let mut out = Vec::new();
        loop {
            match self.peek() {
                Tok::Semi => {
                    self.bump();
                    return Ok(out);
                }
                Tok::Comma => {
                    self.bump();
                }
                _ => out.push(self.word()?),
            }
        }
    }

    fn class(&mut self) -> Result<ModelClass, LoadError> {
        let mut class = ModelClass::empty();
        if *self.peek() == Tok::Word("class".into()) {
            self.bump();
            class.label = Some(self.name()?);
            self.expect(Tok::Semi)?;
        }
        while *self.peek() != Tok::Eof {
            if *self.peek() != Tok::Word("model".into()) {
                return Err(self.error("`model`"));
            }
            self.bump();
            let name = self.name()?;
            class.members.push(self.model_body(name)?);
        }
        Ok(class)
    }

    fn model_body(&mut self, name: String) -> Result<PointedModel, LoadError> {
        self.expect(Tok::LBrace)?;
        let mut alphabet: Vec<String> = Vec::new();
        let mut states: Option<Vec<String>> = None;
        let mut rel: Vec<(String, String)> = Vec::new();
        let mut val: Vec<(String, Vec<String>)> = Vec::new();
        let mut point: Option<String> = None;
        loop {
            let section = match self.peek().clone() {
                Tok::RBrace => {
                    self.bump();
                    break;
                }
                Tok::Word(w) => w,
                _ => return Err(self.error("a section name or `}`")),
            };
            self.bump();
            self.expect(Tok::Colon)?;
            match section.as_str() {
                "alphabet" => alphabet.extend(self.word_list()?),
                "states" => states.get_or_insert_with(Vec::new).extend(self.word_list()?),
                "rel" => {
                    while *self.peek() != Tok::Semi {
                        let a = self.word()?;
                        self.expect(Tok::Arrow)?;
                        let b = self.word()?;
                        rel.push((a, b));
                        if *self.peek() == Tok::Comma {
                            self.bump();
                        }
                    }
                    self.bump();
                }
                "val" => {
                    while *self.peek() != Tok::Semi {
                        let s = self.word()?;
                        self.expect(Tok::Colon)?;
                        let mut props = Vec::new();
                        while let Tok::Word(w) = self.peek().clone() {
                            // `s1: p, s2: q`: a word followed by `:` starts the next entry.
                            if self.toks[self.pos + 1].tok == Tok::Colon {
                                break;
                            }
                            self.bump();
                            props.push(w);
                        }
                        val.push((s, props));
                        if *self.peek() == Tok::Comma {
                            self.bump();
                        }
                    }
                    self.bump();
                }
                "point" => {
                    point = Some(self.word()?);
                    self.expect(Tok::Semi)?;
                }
                other => {
                    self.pos -= 2;
                    return Err(self.error(&format!(
                        "one of `alphabet`, `states`, `rel`, `val`, `point` (not `{other}`)"
                    )));
                }
            }
        }
        let states = states.ok_or_else(|| LoadError::invalid(format!("model `{name}` has no `states` section")))?;
        let point = point.ok_or_else(|| LoadError::invalid(format!("model `{name}` has no `point` section")))?;
        for (_, props) in &val {
            for p in props {
                if !alphabet.contains(p) {
                    alphabet.push(p.clone());
                }
            }
        }
        let alphabet = Alphabet::new(alphabet).map_err(|e| LoadError::invalid(format!("model `{name}`: {e}")))?;
        let model = KripkeModel::new(alphabet, &states, &rel, &val)
            .map_err(|e| LoadError::invalid(format!("model `{name}`: {}", strip(e))))?;
        Ok(PointedModel::with_point_name(model, &point)
            .map_err(|e| LoadError::invalid(format!("model `{name}`: {}", strip(e))))?
            .named(name))
    }
}

fn strip(e: LoadError) -> String {
    match e {
        LoadError::Invalid(m) => m,
        other => other.to_string(),
    }
}

/// Reads every `model` block of a DSL document.
pub fn parse_dsl(text: &str) -> Result<ModelClass, LoadError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    p.class()
}

fn write_name(out: &mut String, name: &str) {
    let plain = !name.is_empty() && name.chars().all(is_state_char) && name != "model" && name != "class";
    if plain {
        out.push_str(name);
    } else {
        out.push('"');
        for c in name.chars() {
            if c == '"' || c == '\\' {
                out.push('\\');
            }
            out.push(c);
        }
        out.push('"');
    }
}

/// Deterministic DSL rendering; unnamed models are called `m<i>`.
pub fn write_dsl(c: &ModelClass) -> String {
    let mut out = String::new();
    if let Some(label) = &c.label {
        out.push_str("class ");
        write_name(&mut out, label);
        out.push_str(";\n\n");
    }
    for (i, p) in c.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let m = p.model();
        let props = m.alphabet().props();
        out.push_str("model ");
        match p.name() {
            Some(n) => write_name(&mut out, n),
            None => {
                let _ = write!(out, "m{i}");
            }
        }
        out.push_str(" {\n");
        let _ = writeln!(out, "  alphabet: {};", props.join(" "));
        let _ = writeln!(out, "  states: {};", m.state_names().join(" "));
        let edges: Vec<String> = m
            .edges()
            .map(|(s, t)| format!("{} -> {}", m.state_name(s), m.state_name(t)))
            .collect();
        let _ = writeln!(out, "  rel: {};", edges.join(", "));
        let entries: Vec<String> = (0..m.len())
            .filter(|&s| !m.valuation(s).is_empty())
            .map(|s| {
                let names: Vec<&str> = m.valuation(s).iter().map(|&i| props[i].as_str()).collect();
                format!("{}: {}", m.state_name(s), names.join(" "))
            })
            .collect();
        let _ = writeln!(out, "  val: {};", entries.join(", "));
        let _ = writeln!(out, "  point: {};", p.point_name());
        out.push_str("}\n");
    }
    out
}
