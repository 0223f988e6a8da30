//! Ring specification files.
//!
//! A file is a sequence of `[ring NAME]` sections holding `key = value`
//! lines. A line may also carry several whitespace-separated `key=value`
//! tokens. Lines before the first header form an implicit section named
//! `main`. `#` starts a comment.
//!
//! ```text
//! [ring z2]
//! family = zmod
//! m = 2
//!
//! [ring dual]
//! family=trunc_poly base=z2 k=2
//!
//! [ring both]
//! family = product
//! factors = z2, dual
//! n = 3
//! cap = 100000
//! ```
//!
//! `base` and `factors` name earlier sections or use the inline form
//! `zmod(M)`. Explicit tables list rows separated by `;`, entries by `,` or
//! spaces.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use ringstab_core::ring::DEFAULT_ORDER_CAP;
use ringstab_core::{build_ring, FiniteRing, RingDescriptor, RingError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("{line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("ring `{name}` (line {line}): {source}")]
    Ring {
        name: String,
        line: usize,
        #[source]
        source: RingError,
    },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

const KEYS: &[&str] = &[
    "family", "m", "k", "base", "factors", "add", "mul", "zero", "one", "n", "cap",
];

/// A raw value with the position it came from.
#[derive(Clone, Debug)]
struct Value {
    text: String,
    line: usize,
    col: usize,
}

#[derive(Debug)]
struct Section {
    name: String,
    line: usize,
    values: BTreeMap<String, Value>,
}

/// One declared ring, built and validated.
#[derive(Clone, Debug)]
pub struct DeclaredRing {
    pub name: String,
    pub ring: Arc<FiniteRing>,
    /// Matrix size requested by the section, if any.
    pub n: Option<usize>,
    /// Closure cap requested by the section, if any.
    pub cap: Option<usize>,
    /// Not used as a `base` or `factor` by another section.
    pub top_level: bool,
}

#[derive(Clone, Debug, Default)]
pub struct RingSpecFile {
    pub rings: Vec<DeclaredRing>,
}

impl RingSpecFile {
    pub fn top_level(&self) -> impl Iterator<Item = &DeclaredRing> {
        self.rings.iter().filter(|r| r.top_level)
    }

    pub fn get(&self, name: &str) -> Option<&DeclaredRing> {
        self.rings.iter().find(|r| r.name == name)
    }
}

fn syntax(line: usize, col: usize, message: impl Into<String>) -> SpecError {
    SpecError::Syntax {
        line,
        col,
        message: message.into(),
    }
}

fn split_sections(text: &str) -> Result<Vec<Section>, SpecError> {
    let mut sections: Vec<Section> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len();
        if let Some(rest) = trimmed.strip_prefix('[') {
            let inner = rest
                .strip_suffix(']')
                .ok_or_else(|| syntax(line_no, indent + 1, "unterminated section header"))?;
            let mut words = inner.split_whitespace();
            match (words.next(), words.next(), words.next()) {
                (Some("ring"), Some(name), None) => {
                    if sections.iter().any(|s| s.name == name) {
                        return Err(syntax(line_no, indent + 1, format!("duplicate ring `{name}`")));
                    }
                    sections.push(Section {
                        name: name.to_string(),
                        line: line_no,
                        values: BTreeMap::new(),
                    });
                }
                _ => {
                    return Err(syntax(
                        line_no,
                        indent + 1,
                        "expected a header of the form [ring NAME]",
                    ))
                }
            }
            continue;
        }
        if sections.is_empty() {
            sections.push(Section {
                name: "main".into(),
                line: line_no,
                values: BTreeMap::new(),
            });
        }
        let section = sections.last_mut().expect("nonempty");
        for (col, key, value) in key_values(content, line_no)? {
            if !KEYS.contains(&key.as_str()) {
                return Err(syntax(line_no, col, format!("unknown key `{key}`")));
            }
            if section.values.contains_key(&key) {
                return Err(syntax(line_no, col, format!("duplicate key `{key}`")));
            }
            section.values.insert(
                key,
                Value {
                    text: value,
                    line: line_no,
                    col,
                },
            );
        }
    }
    Ok(sections)
}

/// `key = value` (one `=`, value may contain spaces) or several
/// `key=value` tokens. Columns are 1-based.
fn key_values(content: &str, line: usize) -> Result<Vec<(usize, String, String)>, SpecError> {
    let start = content.len() - content.trim_start().len();
    if content.matches('=').count() == 1 {
        let (k, v) = content.split_once('=').expect("one =");
        let key = k.trim();
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(syntax(line, start + 1, "expected `key = value`"));
        }
        let value = v.trim();
        if value.is_empty() {
            return Err(syntax(line, k.len() + 2, format!("missing value for `{key}`")));
        }
        return Ok(vec![(start + 1, key.to_string(), value.to_string())]);
    }
    let mut out = Vec::new();
    let mut offset = 0;
    for token in content.split_whitespace() {
        let pos = content[offset..].find(token).expect("token") + offset;
        offset = pos + token.len();
        let Some((k, v)) = token.split_once('=') else {
            return Err(syntax(line, pos + 1, format!("expected key=value, found `{token}`")));
        };
        if k.is_empty() || v.is_empty() {
            return Err(syntax(line, pos + 1, format!("malformed token `{token}`")));
        }
        out.push((pos + 1, k.to_string(), v.to_string()));
    }
    Ok(out)
}

fn number(v: &Value) -> Result<usize, SpecError> {
    v.text
        .parse()
        .map_err(|_| syntax(v.line, v.col, format!("expected a number, found `{}`", v.text)))
}

fn require<'a>(s: &'a Section, key: &str) -> Result<&'a Value, SpecError> {
    s.values
        .get(key)
        .ok_or_else(|| syntax(s.line, 1, format!("ring `{}` is missing `{key}`", s.name)))
}

fn table(v: &Value) -> Result<Vec<Vec<usize>>, SpecError> {
    let rows: Vec<Vec<usize>> = v
        .text
        .split(';')
        .map(|row| {
            row.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse().map_err(|_| {
                        syntax(v.line, v.col, format!("bad table entry `{t}`"))
                    })
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let size = rows.len();
    if let Some((r, row)) = rows.iter().enumerate().find(|(_, row)| row.len() != size) {
        return Err(syntax(
            v.line,
            v.col,
            format!(
                "table is not square: row {} has {} entries, expected {size}",
                r + 1,
                row.len()
            ),
        ));
    }
    Ok(rows)
}

fn parse_inline(text: &str) -> Option<usize> {
    text.strip_prefix("zmod(")?.strip_suffix(')')?.trim().parse().ok()
}

/// Parses a ring specification document and builds every declared ring.
pub fn parse_ring_spec(text: &str) -> Result<RingSpecFile, SpecError> {
    let sections = split_sections(text)?;
    let mut built: Vec<DeclaredRing> = Vec::new();
    let mut referenced: Vec<String> = Vec::new();
    for s in &sections {
        let family = require(s, "family")?;
        let mut resolve = |v: &Value, text: &str| -> Result<Arc<FiniteRing>, SpecError> {
            let text = text.trim();
            if let Some(r) = built.iter().find(|r| r.name == text) {
                referenced.push(text.to_string());
                return Ok(r.ring.clone());
            }
            if let Some(m) = parse_inline(text) {
                return FiniteRing::zmod(m).map(Arc::new).map_err(|e| SpecError::Ring {
                    name: s.name.clone(),
                    line: v.line,
                    source: e,
                });
            }
            Err(syntax(v.line, v.col, format!("unknown ring `{text}`")))
        };
        let allowed: &[&str] = match family.text.as_str() {
            "zmod" => &["m"],
            "trunc_poly" | "matrix" | "upper_triangular" => &["base", "k"],
            "product" => &["factors"],
            "explicit" => &["add", "mul", "zero", "one"],
            other => {
                return Err(syntax(
                    family.line,
                    family.col,
                    format!("unknown family `{other}`"),
                ))
            }
        };
        for (key, v) in &s.values {
            if !["family", "n", "cap"].contains(&key.as_str()) && !allowed.contains(&key.as_str()) {
                return Err(syntax(
                    v.line,
                    v.col,
                    format!("key `{key}` does not apply to family `{}`", family.text),
                ));
            }
        }
        let desc = match family.text.as_str() {
            "zmod" => RingDescriptor::Zmod(number(require(s, "m")?)?),
            "trunc_poly" | "matrix" | "upper_triangular" => {
                let bv = require(s, "base")?;
                let base = resolve(bv, &bv.text)?;
                let k = number(require(s, "k")?)?;
                match family.text.as_str() {
                    "trunc_poly" => RingDescriptor::TruncPoly { base, k },
                    "matrix" => RingDescriptor::Matrix { k, base },
                    _ => RingDescriptor::UpperTriangular { k, base },
                }
            }
            "product" => {
                let fv = require(s, "factors")?;
                let factors = fv
                    .text
                    .split(',')
                    .map(|t| resolve(fv, t))
                    .collect::<Result<Vec<_>, _>>()?;
                RingDescriptor::Product(factors)
            }
            _ => RingDescriptor::Explicit {
                add: table(require(s, "add")?)?,
                mul: table(require(s, "mul")?)?,
                zero: number(require(s, "zero")?)?,
                one: number(require(s, "one")?)?,
            },
        };
        let ring = build_ring(&desc, DEFAULT_ORDER_CAP).map_err(|e| SpecError::Ring {
            name: s.name.clone(),
            line: s.line,
            source: e,
        })?;
        let n = s.values.get("n").map(number).transpose()?;
        let cap = s.values.get("cap").map(number).transpose()?;
        built.push(DeclaredRing {
            name: s.name.clone(),
            ring: Arc::new(ring),
            n,
            cap,
            top_level: true,
        });
    }
    for r in &mut built {
        r.top_level = !referenced.contains(&r.name);
    }
    Ok(RingSpecFile { rings: built })
}

pub fn parse_ring_spec_file(path: &Path) -> Result<RingSpecFile, SpecError> {
    let text = std::fs::read_to_string(path).map_err(|e| SpecError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    parse_ring_spec(&text)
}
