//! The line-oriented definition format.
//!
//! ```text
//! name: three
//! elements: -1 0 1
//! zero: 0
//! one: 1
//! neg: 1=-1
//! mul: 1*1=1 1*-1=-1 -1*-1=1
//! add: 1+1={1} 1+-1={1,0,-1} -1+-1={-1}
//! ```
//!
//! `#` starts a comment. Keys may repeat; entries accumulate. Products
//! with `0` and `1`, sums with `0` are filled in, and each entry also fixes
//! its mirror image (`1=-1` implies `-1=1`).

use std::collections::HashMap;
use std::fmt;

use hyperring_core::multiring::{validate_multiring, ValidationReport};
use hyperring_core::{Elem, Multiring, RawTables};

/// Characters that may not appear in element names.
const RESERVED: &[char] = &['=', '*', '+', '{', '}', ',', '#', ':'];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.msg)
    }
}

#[derive(Debug, Clone)]
pub enum DefinitionError {
    Parse(ParseError),
    /// The tables are complete but break the multiring axioms.
    Validation {
        name: String,
        report: ValidationReport,
    },
}

impl fmt::Display for DefinitionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DefinitionError::Parse(e) => write!(f, "parse error at {e}"),
            DefinitionError::Validation { name, report } => write!(f, "{name} is not a multiring: {report}"),
        }
    }
}

impl std::error::Error for DefinitionError {}

impl From<ParseError> for DefinitionError {
    fn from(e: ParseError) -> Self {
        DefinitionError::Parse(e)
    }
}

/// An entry token with its position.
struct Token<'a> {
    text: &'a str,
    line: usize,
    col: usize,
}

fn err<T>(line: usize, col: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        col,
        msg: msg.into(),
    })
}

/// Splits the value part of a line into entries, keeping `{…}` together.
fn entries<'a>(value: &'a str, line: usize, offset: usize) -> Result<Vec<Token<'a>>, ParseError> {
    let mut out = Vec::new();
    let mut start = None;
    let mut depth = 0usize;
    for (i, c) in value.char_indices() {
        match c {
            '{' => depth += 1,
            '}' => {
                if depth == 0 {
                    return err(line, offset + i + 1, "unbalanced '}'");
                }
                depth -= 1;
            }
            _ => {}
        }
        if c.is_whitespace() && depth == 0 {
            if let Some(s) = start.take() {
                out.push(Token {
                    text: &value[s..i],
                    line,
                    col: offset + s + 1,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if depth != 0 {
        return err(line, offset + value.len() + 1, "unclosed '{'");
    }
    if let Some(s) = start {
        out.push(Token {
            text: &value[s..],
            line,
            col: offset + s + 1,
        });
    }
    Ok(out)
}

#[derive(Default)]
struct Sections<'a> {
    name: Option<(String, usize)>,
    elements: Option<(Vec<Token<'a>>, usize)>,
    zero: Option<Token<'a>>,
    one: Option<Token<'a>>,
    neg: Vec<Token<'a>>,
    mul: Vec<Token<'a>>,
    add: Vec<Token<'a>>,
    mul_line: Option<usize>,
    add_line: Option<usize>,
    neg_line: Option<usize>,
}

fn single<'a>(mut toks: Vec<Token<'a>>, line: usize, key: &str) -> Result<Token<'a>, ParseError> {
    match toks.len() {
        1 => Ok(toks.pop().unwrap()),
        0 => err(line, 1, format!("'{key}' needs a value")),
        _ => err(toks[1].line, toks[1].col, format!("'{key}' takes a single element")),
    }
}

fn sections(text: &str) -> Result<Sections<'_>, ParseError> {
    let mut s = Sections::default();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let Some(colon) = content.find(':') else {
            let col = content.len() - content.trim_start().len() + 1;
            return err(line, col, "expected 'key: value'");
        };
        let key = content[..colon].trim();
        let value = &content[colon + 1..];
        let toks = entries(value, line, colon + 1)?;
        match key {
            "name" => {
                if s.name.is_some() {
                    return err(line, 1, "duplicate 'name'");
                }
                s.name = Some((value.trim().to_string(), line));
            }
            "elements" => {
                if s.elements.is_some() {
                    return err(line, 1, "duplicate 'elements'");
                }
                s.elements = Some((toks, line));
            }
            "zero" => s.zero = Some(single(toks, line, key)?),
            "one" => s.one = Some(single(toks, line, key)?),
            "neg" => {
                s.neg_line.get_or_insert(line);
                s.neg.extend(toks);
            }
            "mul" => {
                s.mul_line.get_or_insert(line);
                s.mul.extend(toks);
            }
            "add" => {
                s.add_line.get_or_insert(line);
                s.add.extend(toks);
            }
            _ => return err(line, 1, format!("unknown key '{key}'")),
        }
    }
    Ok(s)
}

struct Names<'a> {
    index: HashMap<&'a str, Elem>,
}

impl<'a> Names<'a> {
    fn get(&self, text: &str, line: usize, col: usize) -> Result<Elem, ParseError> {
        match self.index.get(text) {
            Some(&e) => Ok(e),
            None => err(line, col, format!("unknown element '{text}'")),
        }
    }
}

/// Splits `lhs<op>rhs=value` at the first `op` that is not the leading
/// character of a name, so `-1+-1` splits as `-1`, `-1`.
fn split_op(text: &str, op: char) -> Option<(&str, &str)> {
    text.char_indices()
        .skip(1)
        .find(|&(_, c)| c == op)
        .map(|(i, _)| (&text[..i], &text[i + 1..]))
}

fn set_members<'t>(text: &'t str, tok: &Token<'_>) -> Result<Vec<&'t str>, ParseError> {
    let inner = text
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| ParseError {
            line: tok.line,
            col: tok.col,
            msg: format!("expected a set '{{…}}' in '{}'", tok.text),
        })?;
    let members: Vec<&str> = inner.split(',').map(str::trim).filter(|m| !m.is_empty()).collect();
    if members.is_empty() {
        return err(tok.line, tok.col, "sums must be non-empty");
    }
    Ok(members)
}

/// Parses a definition into validated tables.
pub fn parse_tables(text: &str) -> Result<(RawTables, ValidationReport), DefinitionError> {
    let s = sections(text)?;
    let (name, _) = s.name.ok_or(ParseError {
        line: 1,
        col: 1,
        msg: "missing 'name'".into(),
    })?;
    let (elem_toks, elem_line) = s.elements.ok_or(ParseError {
        line: 1,
        col: 1,
        msg: "missing 'elements'".into(),
    })?;
    if elem_toks.is_empty() {
        return Err(ParseError {
            line: elem_line,
            col: 1,
            msg: "no elements".into(),
        }
        .into());
    }
    let mut index = HashMap::new();
    for (i, t) in elem_toks.iter().enumerate() {
        if let Some(c) = t.text.chars().find(|c| RESERVED.contains(c)) {
            return Err(ParseError {
                line: t.line,
                col: t.col,
                msg: format!("'{c}' is not allowed in element names"),
            }
            .into());
        }
        if index.insert(t.text, i).is_some() {
            return Err(ParseError {
                line: t.line,
                col: t.col,
                msg: format!("duplicate element '{}'", t.text),
            }
            .into());
        }
    }
    let names = Names { index };
    let n = elem_toks.len();
    let zero_tok = s.zero.ok_or(ParseError {
        line: 1,
        col: 1,
        msg: "missing 'zero'".into(),
    })?;
    let one_tok = s.one.ok_or(ParseError {
        line: 1,
        col: 1,
        msg: "missing 'one'".into(),
    })?;
    let zero = names.get(zero_tok.text, zero_tok.line, zero_tok.col)?;
    let one = names.get(one_tok.text, one_tok.line, one_tok.col)?;

    let mut neg: Vec<Option<Elem>> = vec![None; n];
    neg[zero] = Some(zero);
    for t in &s.neg {
        let (a, b) = split_op(t.text, '=').ok_or(ParseError {
            line: t.line,
            col: t.col,
            msg: format!("expected 'a=b' in '{}'", t.text),
        })?;
        let (a, b) = (names.get(a, t.line, t.col)?, names.get(b, t.line, t.col)?);
        if neg[a].is_some_and(|old| old != b) || neg[b].is_some_and(|old| old != a) {
            return Err(ParseError {
                line: t.line,
                col: t.col,
                msg: format!("conflicting negation for '{}'", t.text),
            }
            .into());
        }
        neg[a] = Some(b);
        neg[b] = Some(a);
    }

    let mut mul: Vec<Vec<Option<Elem>>> = vec![vec![None; n]; n];
    for x in 0..n {
        for (p, q, v) in [(x, zero, zero), (zero, x, zero), (x, one, x), (one, x, x)] {
            mul[p][q] = Some(v);
        }
    }
    for t in &s.mul {
        let bad = || ParseError {
            line: t.line,
            col: t.col,
            msg: format!("expected 'a*b=c' in '{}'", t.text),
        };
        let (lhs, c) = t.text.rsplit_once('=').ok_or_else(bad)?;
        let (a, b) = split_op(lhs, '*').ok_or_else(bad)?;
        let (a, b, c) = (
            names.get(a, t.line, t.col)?,
            names.get(b, t.line, t.col)?,
            names.get(c, t.line, t.col)?,
        );
        for (p, q) in [(a, b), (b, a)] {
            if mul[p][q].is_some_and(|old| old != c) {
                return Err(ParseError {
                    line: t.line,
                    col: t.col,
                    msg: format!("conflicting product in '{}'", t.text),
                }
                .into());
            }
            mul[p][q] = Some(c);
        }
    }

    let mut add: Vec<Vec<Option<Vec<Elem>>>> = vec![vec![None; n]; n];
    for x in 0..n {
        add[x][zero] = Some(vec![x]);
        add[zero][x] = Some(vec![x]);
    }
    for t in &s.add {
        let bad = || ParseError {
            line: t.line,
            col: t.col,
            msg: format!("expected 'a+b={{…}}' in '{}'", t.text),
        };
        let eq = t.text.find("={").ok_or_else(bad)?;
        let (lhs, set) = (&t.text[..eq], &t.text[eq + 1..]);
        let (a, b) = split_op(lhs, '+').ok_or_else(bad)?;
        let (a, b) = (names.get(a, t.line, t.col)?, names.get(b, t.line, t.col)?);
        let mut members = set_members(set, t)?
            .into_iter()
            .map(|m| names.get(m, t.line, t.col))
            .collect::<Result<Vec<_>, _>>()?;
        members.sort_unstable();
        members.dedup();
        for (p, q) in [(a, b), (b, a)] {
            if add[p][q].as_ref().is_some_and(|old| *old != members) {
                return Err(ParseError {
                    line: t.line,
                    col: t.col,
                    msg: format!("conflicting sum in '{}'", t.text),
                }
                .into());
            }
            add[p][q] = Some(members.clone());
        }
    }

    let elem = |i: Elem| elem_toks[i].text;
    let neg = neg
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            v.ok_or_else(|| ParseError {
                line: s.neg_line.unwrap_or(elem_line),
                col: 1,
                msg: format!("missing negation of '{}'", elem(i)),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut mul_rows = Vec::with_capacity(n);
    for (i, row) in mul.into_iter().enumerate() {
        mul_rows.push(
            row.into_iter()
                .enumerate()
                .map(|(j, v)| {
                    v.ok_or_else(|| ParseError {
                        line: s.mul_line.unwrap_or(elem_line),
                        col: 1,
                        msg: format!("missing product '{}*{}'", elem(i), elem(j)),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    let mut add_rows = Vec::with_capacity(n);
    for (i, row) in add.into_iter().enumerate() {
        add_rows.push(
            row.into_iter()
                .enumerate()
                .map(|(j, v)| {
                    v.ok_or_else(|| ParseError {
                        line: s.add_line.unwrap_or(elem_line),
                        col: 1,
                        msg: format!("missing sum '{}+{}'", elem(i), elem(j)),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    let raw = RawTables {
        name,
        names: elem_toks.iter().map(|t| t.text.to_string()).collect(),
        add: add_rows,
        mul: mul_rows,
        neg,
        zero,
        one,
    };
    let report = validate_multiring(&raw).map_err(|e| ParseError {
        line: elem_line,
        col: 1,
        msg: e.to_string(),
    })?;
    Ok((raw, report))
}

/// Parses and validates a definition.
pub fn parse_definition(text: &str) -> Result<Multiring, DefinitionError> {
    let (raw, report) = parse_tables(text)?;
    if !report.is_ok() {
        return Err(DefinitionError::Validation { name: raw.name, report });
    }
    let name = raw.name.clone();
    Multiring::from_raw(raw).map_err(|e| {
        DefinitionError::Parse(ParseError {
            line: 1,
            col: 1,
            msg: format!("{name}: {e}"),
        })
    })
}

/// Element names made safe for the definition format.
fn safe_names(a: &Multiring) -> Vec<String> {
    let mut out: Vec<String> = a
        .names()
        .iter()
        .map(|s| {
            s.chars()
                .map(|c| {
                    if RESERVED.contains(&c) || c.is_whitespace() {
                        '_'
                    } else {
                        c
                    }
                })
                .collect()
        })
        .collect();
    let mut seen = std::collections::HashSet::new();
    for (i, s) in out.iter_mut().enumerate() {
        if !seen.insert(s.clone()) {
            *s = format!("{s}~{i}");
        }
    }
    out
}

/// Writes `a` in canonical form: entries in index order, upper triangle
/// only, forced entries left out.
pub fn emit(a: &Multiring) -> String {
    let names = safe_names(a);
    let (zero, one) = (a.zero(), a.one());
    let mut out = String::new();
    out.push_str(&format!("name: {}\n", a.name()));
    out.push_str(&format!("elements: {}\n", names.join(" ")));
    out.push_str(&format!("zero: {}\none: {}\n", names[zero], names[one]));
    let neg: Vec<String> = a
        .elements()
        .filter(|&x| x != zero)
        .map(|x| format!("{}={}", names[x], names[a.neg(x)]))
        .collect();
    if !neg.is_empty() {
        out.push_str(&format!("neg: {}\n", neg.join(" ")));
    }
    for x in a.elements().filter(|&x| x != zero && x != one) {
        let row: Vec<String> = (x..a.n())
            .filter(|&y| y != zero && y != one)
            .map(|y| format!("{}*{}={}", names[x], names[y], names[a.mul(x, y)]))
            .collect();
        if !row.is_empty() {
            out.push_str(&format!("mul: {}\n", row.join(" ")));
        }
    }
    for x in a.elements().filter(|&x| x != zero) {
        let row: Vec<String> = (x..a.n())
            .filter(|&y| y != zero)
            .map(|y| {
                let members: Vec<&str> = a.add(x, y).iter().map(|z| names[z].as_str()).collect();
                format!("{}+{}={{{}}}", names[x], names[y], members.join(","))
            })
            .collect();
        if !row.is_empty() {
            out.push_str(&format!("add: {}\n", row.join(" ")));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use hyperring_core::builders::{krasner, sign3, zmod};

    const KRASNER: &str = "\
# Krasner hyperfield
name: K
elements: 0 1
zero: 0
one: 1
neg: 1=1
add: 1+1={0,1}
";

    #[test]
    fn krasner_file() {
        let k = parse_definition(KRASNER).unwrap();
        assert!(k.same_tables(&krasner()));
    }

    #[test]
    fn sign_file() {
        let text = "name: three\nelements: -1 0 1\nzero: 0\none: 1\nneg: 1=-1 -1=1\nmul: -1*-1=1\nadd: 1+1={1} 1+-1={1,0,-1} -1+-1={-1}\n";
        let s = parse_definition(text).unwrap();
        let reference = sign3();
        assert_eq!(s.n(), 3);
        let one = s.index_of("1").unwrap();
        let minus = s.index_of("-1").unwrap();
        assert_eq!(s.add(one, minus).len(), 3);
        assert_eq!(reference.add(reference.one(), reference.minus_one()).len(), 3);
    }

    #[test]
    fn missing_sum_names_the_pair() {
        let text = "name: K\nelements: 0 1\nzero: 0\none: 1\nneg: 1=1\n";
        match parse_definition(text) {
            Err(DefinitionError::Parse(e)) => assert!(e.msg.contains("1+1"), "{e}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn conflicting_mirror_entries() {
        let text = "name: X\nelements: 0 1 a\nzero: 0\none: 1\nneg: 1=1 a=a\nmul: a*a=a\nadd: 1+a={a} a+1={1} 1+1={0} a+a={0}\n";
        match parse_definition(text) {
            Err(DefinitionError::Parse(e)) => {
                assert!(e.msg.contains("conflicting sum"), "{e}");
                assert_eq!(e.line, 7);
                assert_eq!(e.col, 14);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn axiom_failures_are_reported_separately() {
        let text = "name: K\nelements: 0 1\nzero: 0\none: 1\nneg: 1=1\nadd: 1+1={1}\n";
        assert!(matches!(
            parse_definition(text),
            Err(DefinitionError::Validation { .. })
        ));
    }

    #[test]
    fn positions_point_at_the_entry() {
        let text = "name: K\nelements: 0 1\nzero: 0\none: 1\nneg: 1=2\n";
        match parse_definition(text) {
            Err(DefinitionError::Parse(e)) => assert_eq!((e.line, e.col), (5, 6)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn emit_round_trips() {
        for a in [krasner(), sign3(), zmod(6)] {
            let text = emit(&a);
            let b = parse_definition(&text).unwrap();
            assert!(a.same_tables(&b));
            assert_eq!(emit(&b), text);
        }
    }
}
