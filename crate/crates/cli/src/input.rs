//! Reading inputs and turning failures into line-anchored diagnostics.

use std::collections::BTreeSet;
use std::fmt;
use std::io::Read;

use dax_core::examples;
use dax_core::groups::{parse_word, Group, GroupModel};
use dax_core::manifold::ManifoldScenario;
use dax_core::Error;
use serde_json::Value;

/// An input document with the name used in diagnostics.
pub struct Source {
    pub label: String,
    pub text: String,
}

/// A failure on invalid input, reported as `label:line:col: message`.
#[derive(Debug)]
pub struct Diagnostic {
    pub label: String,
    pub at: Option<(usize, usize)>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (line, col) = self.at.unwrap_or((1, 1));
        write!(f, "{}:{line}:{col}: {}", self.label, self.message)
    }
}

impl Diagnostic {
    pub fn plain(message: impl Into<String>) -> Self {
        Diagnostic { label: "dax".into(), at: None, message: message.into() }
    }
}

impl Source {
    /// `-` reads stdin, text starting with `{` or `[` is taken inline, and
    /// anything else is a file path.
    pub fn read(arg: &str) -> Result<Source, Diagnostic> {
        if arg == "-" {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Diagnostic::plain(format!("cannot read stdin: {e}")))?;
            return Ok(Source { label: "<stdin>".into(), text });
        }
        let trimmed = arg.trim_start();
        if trimmed.starts_with('{') || trimmed.starts_with('[') {
            return Ok(Source { label: "<inline>".into(), text: arg.to_string() });
        }
        let text = std::fs::read_to_string(arg).map_err(|e| Diagnostic {
            label: arg.to_string(),
            at: None,
            message: format!("cannot read file: {e}"),
        })?;
        Ok(Source { label: arg.to_string(), text })
    }

    pub fn json(&self) -> Result<Value, Diagnostic> {
        serde_json::from_str(&self.text).map_err(|e| Diagnostic {
            label: self.label.clone(),
            at: Some((e.line(), e.column())),
            message: format!("invalid JSON: {e}"),
        })
    }

    /// Anchors a library error at the first place in the text it names.
    pub fn diagnose(&self, err: &Error) -> Diagnostic {
        let message = err.to_string();
        let at = serde_position(&message).or_else(|| {
            let needle = match err {
                Error::UnknownGenerator(sym) => Some(sym.as_str()),
                Error::MalformedWord { word, .. } => Some(word.as_str()),
                Error::UnsupportedGroupKind(kind) => Some(kind.as_str()),
                _ => None,
            };
            needle.and_then(|n| self.locate(n))
        });
        Diagnostic { label: self.label.clone(), at, message }
    }

    fn locate(&self, needle: &str) -> Option<(usize, usize)> {
        if needle.is_empty() {
            return None;
        }
        let bytes = self.text.as_bytes();
        let ident = |b: u8| b.is_ascii_alphanumeric() || b == b'_';
        let mut from = 0;
        while let Some(off) = self.text[from..].find(needle) {
            let start = from + off;
            let end = start + needle.len();
            let before = start.checked_sub(1).map(|i| bytes[i]);
            let after = bytes.get(end).copied();
            if !before.is_some_and(ident) && !after.is_some_and(ident) {
                return Some(line_col(&self.text, start));
            }
            from = end;
        }
        None
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let col = before.rfind('\n').map_or(offset, |i| offset - i - 1) + 1;
    (line, col)
}

/// serde_json errors end with `at line L column C`.
fn serde_position(message: &str) -> Option<(usize, usize)> {
    let idx = message.rfind(" at line ")?;
    let rest = &message[idx + " at line ".len()..];
    let (line, rest) = rest.split_once(" column ")?;
    let col: String = rest.chars().take_while(char::is_ascii_digit).collect();
    Some((line.trim().parse().ok()?, col.parse().ok()?))
}

/// `builtin:<name>` names a bundled scenario; anything else is read as a source.
pub fn load_scenario(arg: &str) -> Result<ManifoldScenario, Diagnostic> {
    if let Some(name) = arg.strip_prefix("builtin:") {
        return examples::load(name).map_err(|e| Diagnostic {
            label: arg.to_string(),
            at: None,
            message: e.to_string(),
        });
    }
    let src = Source::read(arg)?;
    ManifoldScenario::load(&src.text).map_err(|e| src.diagnose(&e))
}

/// A group model from `--group`: `builtin:<name>` takes the group of a
/// bundled scenario.
pub fn load_group(arg: &str) -> Result<Group, Diagnostic> {
    if arg.starts_with("builtin:") {
        return Ok(load_scenario(arg)?.group().clone());
    }
    let src = Source::read(arg)?;
    let value = src.json()?;
    GroupModel::from_json(&value).map(Group::from).map_err(|e| src.diagnose(&e))
}

/// Where element strings sit in an input document.
#[derive(Clone, Copy)]
pub enum Shape {
    Ring,
    Track,
    Class,
}

fn element_strings<'a>(value: &'a Value, shape: Shape, out: &mut Vec<&'a str>) {
    let second = |terms: &'a Value, out: &mut Vec<&'a str>| {
        for t in terms.as_array().into_iter().flatten() {
            if let Some(s) = t.get(1).and_then(Value::as_str) {
                out.push(s);
            }
        }
    };
    match shape {
        Shape::Ring => second(value, out),
        Shape::Track => {
            if value.is_array() {
                second(value, out);
            } else {
                if let Some(s) = value.get("core").and_then(Value::as_str) {
                    out.push(s);
                }
                if let Some(p) = value.get("points") {
                    second(p, out);
                }
            }
        }
        Shape::Class => {
            if value.is_array() {
                second(value, out);
            } else {
                if let Some(ints) = value.get("int_part") {
                    second(ints, out);
                }
                for m in value.get("mod2_part").and_then(Value::as_array).into_iter().flatten() {
                    if let Some(s) = m.as_str() {
                        out.push(s);
                    }
                }
            }
        }
    }
}

/// The free group on every symbol used by the documents, in sorted order;
/// the trivial group when none is used.
pub fn infer_free_group(docs: &[(&Source, &Value, Shape)]) -> Result<Group, Diagnostic> {
    let mut symbols = BTreeSet::new();
    for (src, value, shape) in docs {
        let mut words = Vec::new();
        element_strings(value, *shape, &mut words);
        for w in words {
            for (sym, _) in parse_word(w).map_err(|e| src.diagnose(&e))? {
                symbols.insert(sym);
            }
        }
    }
    if symbols.is_empty() {
        return Ok(GroupModel::trivial().into());
    }
    let names: Vec<&str> = symbols.iter().map(String::as_str).collect();
    GroupModel::free(&names).map(Group::from).map_err(|e| Diagnostic::plain(e.to_string()))
}
