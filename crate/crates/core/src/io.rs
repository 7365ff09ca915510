//! Text formats for weighted complexes and simplex-wise sequences.
//!
//! Weighted complex files come in two modes:
//!
//! ```text
//! [weighted]          [vertices]
//! 1 : 0               1 : 0
//! 2 : 1               2 : 1
//! 1 2 : 1             [facets]
//!                     1 2
//! ```
//!
//! Sequence files start with `# morse-sequence v1` and hold one item per
//! line, `C 1 2` or `R 2 | 1 2`, optionally followed by `@ w`.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;

use thiserror::Error;

use crate::complex::{FaceSet, SimplicialComplex};
use crate::engine::Trace;
use crate::sequence::{SequenceItem, SimplexWiseSequence};
use crate::simplex::{Simplex, Vertex};
use crate::stack::{Level, Stack, StackError};

pub const SEQUENCE_HEADER: &str = "# morse-sequence v1";

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("not closed: {0}")]
    NotClosed(String),
    #[error("{0}")]
    NotAStack(StackError),
    #[error("vertex {0} has no weight")]
    MissingWeight(Vertex),
    #[error("line {line}: face {face:?} is not in the complex")]
    UnknownFace { line: usize, face: Simplex },
    #[error("line {line}: face {face:?} occurs more than once")]
    DuplicateFace { line: usize, face: Simplex },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
}

impl ParseError {
    /// Stable short code for diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            ParseError::Syntax { .. } => "E_SYNTAX",
            ParseError::NotClosed(_) => "E_NOT_CLOSED",
            ParseError::NotAStack(_) => "E_NOT_STACK",
            ParseError::MissingWeight(_) => "E_MISSING_WEIGHT",
            ParseError::UnknownFace { .. } => "E_UNKNOWN_FACE",
            ParseError::DuplicateFace { .. } => "E_DUPLICATE_FACE",
            ParseError::Io { .. } => "E_IO",
        }
    }
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

fn read(path: &Path) -> Result<String, ParseError> {
    std::fs::read_to_string(path).map_err(|source| ParseError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Non-empty lines with comments stripped, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_vertices(line: usize, text: &str) -> Result<Vec<Vertex>, ParseError> {
    text.split_whitespace()
        .map(|t| t.parse::<Vertex>().map_err(|_| syntax(line, format!("bad vertex `{t}`"))))
        .collect()
}

fn parse_simplex(line: usize, text: &str) -> Result<Simplex, ParseError> {
    let vs = parse_vertices(line, text)?;
    Simplex::from_sorted(&vs).map_err(|e| syntax(line, e.to_string()))
}

fn parse_level(line: usize, text: &str) -> Result<Level, ParseError> {
    let t = text.trim();
    t.parse::<Level>().map_err(|_| syntax(line, format!("bad value `{t}`")))
}

fn split_value(line: usize, text: &str) -> Result<(&str, Level), ParseError> {
    let (lhs, rhs) = text
        .split_once(':')
        .ok_or_else(|| syntax(line, "expected `<vertices> : <value>`"))?;
    Ok((lhs, parse_level(line, rhs)?))
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Weighted,
    Vertices,
    Facets,
}

/// Parses a weighted complex file into its stack. The stack domain is the
/// complex.
pub fn parse_stack_str(text: &str) -> Result<Stack, ParseError> {
    let mut section = Section::None;
    let mut seen = HashSet::new();
    let mut weighted: Vec<(Simplex, Level, usize)> = Vec::new();
    let mut weights: HashMap<Vertex, Level> = HashMap::new();
    let mut facets: Vec<Simplex> = Vec::new();

    for (n, line) in content_lines(text) {
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            let next = match name.trim() {
                "weighted" => Section::Weighted,
                "vertices" => Section::Vertices,
                "facets" => Section::Facets,
                other => return Err(syntax(n, format!("unknown section `[{other}]`"))),
            };
            if !seen.insert(name.trim().to_string()) {
                return Err(syntax(n, format!("section `[{}]` repeated", name.trim())));
            }
            let mixed = match next {
                Section::Weighted => seen.contains("vertices") || seen.contains("facets"),
                Section::Facets => seen.contains("weighted") || !seen.contains("vertices"),
                _ => seen.contains("weighted"),
            };
            if mixed {
                return Err(syntax(n, "use either [weighted] or [vertices] followed by [facets]"));
            }
            section = next;
            continue;
        }
        match section {
            Section::None => return Err(syntax(n, "content before any section header")),
            Section::Weighted => {
                let (lhs, w) = split_value(n, line)?;
                weighted.push((parse_simplex(n, lhs)?, w, n));
            }
            Section::Vertices => {
                let (lhs, w) = split_value(n, line)?;
                let v = match parse_vertices(n, lhs)?.as_slice() {
                    [v] => *v,
                    _ => return Err(syntax(n, "expected a single vertex")),
                };
                if weights.insert(v, w).is_some() {
                    return Err(syntax(n, format!("vertex {v} listed twice")));
                }
            }
            Section::Facets => {
                let vs = parse_vertices(n, line)?;
                facets.push(Simplex::new(vs).map_err(|e| syntax(n, e.to_string()))?);
            }
        }
    }

    if seen.contains("weighted") {
        weighted.sort_unstable_by(|a, b| a.0.cmp(&b.0).then(a.2.cmp(&b.2)));
        if let Some(w) = weighted.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(syntax(w[1].2, format!("face {:?} listed twice", w[1].0)));
        }
        let values = weighted.iter().map(|(_, w, _)| *w).collect();
        let faces = FaceSet::from_sorted_unique(weighted.into_iter().map(|(f, _, _)| f).collect());
        let k = SimplicialComplex::new(faces).map_err(|e| ParseError::NotClosed(e.to_string()))?;
        Stack::from_values(k, values).map_err(ParseError::NotAStack)
    } else if seen.contains("vertices") {
        let k = SimplicialComplex::from_facets(
            facets
                .into_iter()
                .chain(weights.keys().map(|&v| Simplex::vertex(v))),
        );
        Stack::lower_star(&k, &weights).map_err(|e| match e {
            StackError::MissingVertexWeight(v) => ParseError::MissingWeight(v),
            other => ParseError::NotAStack(other),
        })
    } else {
        Ok(Stack::constant(SimplicialComplex::empty(), 0))
    }
}

/// Parses a weighted complex file from text.
pub fn parse_complex_str(text: &str) -> Result<(SimplicialComplex, Stack), ParseError> {
    let stack = parse_stack_str(text)?;
    let k = stack.complex().expect("parsed domains are closed");
    Ok((k, stack))
}

pub fn parse_stack(path: impl AsRef<Path>) -> Result<Stack, ParseError> {
    parse_stack_str(&read(path.as_ref())?)
}

pub fn parse_complex(path: impl AsRef<Path>) -> Result<(SimplicialComplex, Stack), ParseError> {
    parse_complex_str(&read(path.as_ref())?)
}

/// Writes `stack` in explicit `[weighted]` mode.
pub fn write_complex<W: Write>(stack: &Stack, mut out: W) -> io::Result<()> {
    writeln!(out, "[weighted]")?;
    for (f, w) in stack.domain().faces().iter().zip(stack.values()) {
        writeln!(out, "{f} : {w}")?;
    }
    Ok(())
}

/// A parsed sequence file. `values[i]` is the `@` annotation of item `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceFile {
    pub sequence: SimplexWiseSequence,
    pub values: Vec<Option<Level>>,
}

fn parse_item(n: usize, line: &str) -> Result<(SequenceItem, Option<Level>), ParseError> {
    let (body, value) = match line.split_once('@') {
        Some((body, v)) => (body, Some(parse_level(n, v)?)),
        None => (line, None),
    };
    let body = body.trim();
    let item = if let Some(rest) = body.strip_prefix('C').filter(|r| r.starts_with(char::is_whitespace)) {
        SequenceItem::Critical(parse_simplex(n, rest)?)
    } else if let Some(rest) = body.strip_prefix('R').filter(|r| r.starts_with(char::is_whitespace)) {
        let (a, b) = rest.split_once('|').ok_or_else(|| syntax(n, "regular pair needs `|`"))?;
        SequenceItem::regular(parse_simplex(n, a)?, parse_simplex(n, b)?).map_err(|e| syntax(n, e.to_string()))?
    } else {
        return Err(syntax(n, format!("malformed item `{body}`")));
    };
    Ok((item, value))
}

/// Parses a sequence file from text. When `k` is given every face must
/// belong to it. The base complex is always empty.
pub fn parse_sequence_str(text: &str, k: Option<&SimplicialComplex>) -> Result<SequenceFile, ParseError> {
    let mut lines = text.lines();
    match lines.next() {
        Some(first) if first.trim() == SEQUENCE_HEADER => {}
        _ => return Err(syntax(1, format!("missing header `{SEQUENCE_HEADER}`"))),
    }
    let mut items = Vec::new();
    let mut values = Vec::new();
    let mut seen: HashSet<Simplex> = HashSet::new();
    for (n, line) in content_lines(text).filter(|(n, _)| *n > 1) {
        let (item, value) = parse_item(n, line)?;
        for f in item.faces() {
            if k.is_some_and(|k| !k.contains(f)) {
                return Err(ParseError::UnknownFace { line: n, face: f.clone() });
            }
            if !seen.insert(f.clone()) {
                return Err(ParseError::DuplicateFace { line: n, face: f.clone() });
            }
        }
        items.push(item);
        values.push(value);
    }
    let sequence = SimplexWiseSequence::from_empty(items).map_err(|e| syntax(0, e.to_string()))?;
    Ok(SequenceFile { sequence, values })
}

pub fn parse_sequence(path: impl AsRef<Path>, k: Option<&SimplicialComplex>) -> Result<SequenceFile, ParseError> {
    parse_sequence_str(&read(path.as_ref())?, k)
}

fn format_item(item: &SequenceItem, value: Option<Level>) -> String {
    let mut line = match item {
        SequenceItem::Critical(nu) => format!("C {nu}"),
        SequenceItem::Regular(sigma, tau) => format!("R {sigma} | {tau}"),
    };
    if let Some(v) = value {
        let _ = write!(line, " @ {v}");
    }
    line
}

/// Writes `seq` with `@` annotations taken from `stack` when given.
pub fn write_sequence<W: Write>(seq: &SimplexWiseSequence, stack: Option<&Stack>, mut out: W) -> io::Result<()> {
    writeln!(out, "{SEQUENCE_HEADER}")?;
    for item in seq.items() {
        let value = stack.and_then(|f| item.value(f));
        writeln!(out, "{}", format_item(item, value))?;
    }
    Ok(())
}

pub fn sequence_to_string(seq: &SimplexWiseSequence, stack: Option<&Stack>) -> String {
    let mut buf = Vec::new();
    write_sequence(seq, stack, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

/// Writes per-level contraction traces, one `<level> <step> <contraction>`
/// line per removal.
pub fn write_traces<W: Write>(traces: &[(Level, Trace)], mut out: W) -> io::Result<()> {
    writeln!(out, "# morse-trace v1")?;
    for (level, trace) in traces {
        for (i, step) in trace.steps.iter().enumerate() {
            writeln!(out, "{level} {i} {step}")?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[u32]) -> Simplex {
        Simplex::new(v.iter().copied()).unwrap()
    }

    #[test]
    fn lower_star_edge() {
        let (k, f) = parse_complex_str("[vertices]\n1:0\n2 : 1 # heavy\n[facets]\n1 2\n").unwrap();
        assert_eq!(k.len(), 3);
        assert_eq!(f.value(&s(&[1])), Some(0));
        assert_eq!(f.value(&s(&[2])), Some(1));
        assert_eq!(f.value(&s(&[1, 2])), Some(1));
    }

    #[test]
    fn explicit_errors() {
        let open = parse_complex_str("[weighted]\n1 : 0\n1 2 : 1\n").unwrap_err();
        assert_eq!(open.code(), "E_NOT_CLOSED");
        let bad = parse_complex_str("[weighted]\n1 : 2\n2 : 1\n1 2 : 1\n").unwrap_err();
        assert_eq!(bad.code(), "E_NOT_STACK");
        let missing = parse_complex_str("[vertices]\n1 : 0\n[facets]\n1 2\n").unwrap_err();
        assert_eq!(missing.code(), "E_MISSING_WEIGHT");
        let syn = parse_complex_str("[weighted]\n2 1 : 0\n").unwrap_err();
        assert!(matches!(syn, ParseError::Syntax { line: 2, .. }));
        assert_eq!(parse_complex_str("[weighted]\n[facets]\n").unwrap_err().code(), "E_SYNTAX");
        assert_eq!(parse_complex_str("1 : 0\n").unwrap_err().code(), "E_SYNTAX");
    }

    #[test]
    fn explicit_round_trip() {
        let (_, f) = parse_complex_str("[vertices]\n1:0\n2:3\n3:1\n[facets]\n1 2 3\n").unwrap();
        let mut buf = Vec::new();
        write_complex(&f, &mut buf).unwrap();
        let (_, g) = parse_complex_str(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn sequence_format() {
        let seq = SimplexWiseSequence::from_empty(vec![
            SequenceItem::Critical(s(&[1])),
            SequenceItem::regular(s(&[2]), s(&[1, 2])).unwrap(),
        ])
        .unwrap();
        let text = sequence_to_string(&seq, None);
        assert_eq!(text, "# morse-sequence v1\nC 1\nR 2 | 1 2\n");
        let parsed = parse_sequence_str(&text, None).unwrap();
        assert_eq!(parsed.sequence, seq);
        assert_eq!(parsed.values, vec![None, None]);
    }

    #[test]
    fn sequence_errors() {
        let k = SimplicialComplex::from_facets([s(&[1, 2])]);
        let unknown = parse_sequence_str("# morse-sequence v1\nC 3\n", Some(&k)).unwrap_err();
        assert_eq!(unknown.code(), "E_UNKNOWN_FACE");
        let dup = parse_sequence_str("# morse-sequence v1\nC 1\nR 1 | 1 2\n", Some(&k)).unwrap_err();
        assert_eq!(dup.code(), "E_DUPLICATE_FACE");
        for bad in ["C", "X 1", "R 1 2", "C 2 1", "C 1 @ x", "R 1 | 2 3"] {
            let text = format!("{SEQUENCE_HEADER}\n{bad}\n");
            assert_eq!(parse_sequence_str(&text, None).unwrap_err().code(), "E_SYNTAX", "{bad}");
        }
        assert_eq!(parse_sequence_str("C 1\n", None).unwrap_err().code(), "E_SYNTAX");
    }
}
