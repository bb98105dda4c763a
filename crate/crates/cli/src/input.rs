//! Line-oriented input grammar for presentation files.
//!
//! UTF-8 text, `#` starts a comment, blank lines are skipped. Directives:
//!
//! ```text
//! vertices <id>...
//! edge <id> <id>
//! group <id> gens <letter>...
//! group <id> bar <letter> <letter>
//! group <id> rel <letters-concatenated>
//! group <id> iso poly <k> | iso exp | iso table <v1> <v2>...
//! group <id> backend table <m> <m*m row-major entries> map <letter>=<elem>...
//! group <id> backend free
//! group <id> backend abelian
//! ```
//!
//! Every group must declare `iso` and `backend` exactly once; nothing is
//! inferred. Unknown directives are errors.

use std::collections::BTreeMap;
use std::fmt;

use gp_core::isofunctions::FunctionClass;
use gp_core::oracles::{BackendSpec, TableSpec};
use gp_core::presentations::{RawGroup, RawPresentation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Document {
    pub raw: RawPresentation,
    pub backends: BTreeMap<u32, BackendSpec>,
}

#[derive(Default)]
struct GroupDraft {
    gens: Vec<String>,
    bar_pairs: Vec<(String, String)>,
    relators: Vec<String>,
    iso: Option<FunctionClass>,
    backend: Option<BackendSpec>,
}

pub fn parse_document(text: &str) -> Result<Document, ParseError> {
    let mut vertices: Vec<u32> = Vec::new();
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut groups: BTreeMap<u32, GroupDraft> = BTreeMap::new();
    let mut group_order: Vec<u32> = Vec::new();

    for (no, raw_line) in text.lines().enumerate() {
        let line_no = no + 1;
        let err = |message: String| ParseError { line: line_no, message };
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        match tokens[0] {
            "vertices" => {
                if tokens.len() < 2 {
                    return Err(err("vertices needs at least one id".into()));
                }
                for tok in &tokens[1..] {
                    vertices.push(parse_u32(tok, line_no)?);
                }
            }
            "edge" => {
                if tokens.len() != 3 {
                    return Err(err("edge needs exactly two ids".into()));
                }
                edges.push((parse_u32(tokens[1], line_no)?, parse_u32(tokens[2], line_no)?));
            }
            "group" => {
                if tokens.len() < 3 {
                    return Err(err("group needs an id and a subdirective".into()));
                }
                let id = parse_u32(tokens[1], line_no)?;
                if !groups.contains_key(&id) {
                    group_order.push(id);
                }
                let draft = groups.entry(id).or_default();
                parse_group_directive(draft, &tokens[2..], line_no)?;
            }
            other => return Err(err(format!("unknown directive {other:?}"))),
        }
    }

    let mut raw_groups = Vec::new();
    let mut backends = BTreeMap::new();
    for id in group_order {
        let draft = groups.remove(&id).unwrap();
        let iso = draft.iso.ok_or(ParseError {
            line: 0,
            message: format!("group {id}: missing iso declaration"),
        })?;
        let backend = draft.backend.ok_or(ParseError {
            line: 0,
            message: format!("group {id}: missing backend declaration"),
        })?;
        raw_groups.push(RawGroup {
            vertex: id,
            gens: draft.gens,
            bar_pairs: draft.bar_pairs,
            relators: draft.relators,
            iso,
        });
        backends.insert(id, backend);
    }

    Ok(Document {
        raw: RawPresentation { vertices, edges, groups: raw_groups },
        backends,
    })
}

fn parse_group_directive(
    draft: &mut GroupDraft,
    tokens: &[&str],
    line_no: usize,
) -> Result<(), ParseError> {
    let err = |message: String| ParseError { line: line_no, message };
    match tokens[0] {
        "gens" => {
            if tokens.len() < 2 {
                return Err(err("gens needs at least one letter".into()));
            }
            draft.gens.extend(tokens[1..].iter().map(|t| t.to_string()));
        }
        "bar" => {
            if tokens.len() != 3 {
                return Err(err("bar needs exactly two letters".into()));
            }
            draft.bar_pairs.push((tokens[1].to_string(), tokens[2].to_string()));
        }
        "rel" => {
            if tokens.len() != 2 {
                return Err(err("rel needs exactly one concatenated word".into()));
            }
            draft.relators.push(tokens[1].to_string());
        }
        "iso" => {
            if draft.iso.is_some() {
                return Err(err("iso declared twice".into()));
            }
            draft.iso = Some(match tokens.get(1).copied() {
                Some("poly") => {
                    let k = tokens
                        .get(2)
                        .ok_or_else(|| err("iso poly needs a degree".into()))?;
                    FunctionClass::Polynomial(parse_u32(k, line_no)?)
                }
                Some("exp") => FunctionClass::Exponential,
                Some("table") => {
                    if tokens.len() < 3 {
                        return Err(err("iso table needs at least one value".into()));
                    }
                    let values = tokens[2..]
                        .iter()
                        .map(|t| parse_u64(t, line_no))
                        .collect::<Result<Vec<_>, _>>()?;
                    FunctionClass::Tabulated(values)
                }
                _ => return Err(err("iso needs poly <k>, exp, or table <v>...".into())),
            });
        }
        "backend" => {
            if draft.backend.is_some() {
                return Err(err("backend declared twice".into()));
            }
            draft.backend = Some(match tokens.get(1).copied() {
                Some("free") => BackendSpec::Free,
                Some("abelian") => BackendSpec::Abelian,
                Some("table") => {
                    let order = parse_u64(
                        tokens
                            .get(2)
                            .ok_or_else(|| err("backend table needs an order".into()))?,
                        line_no,
                    )? as usize;
                    let need = order * order;
                    if tokens.len() < 3 + need + 1 {
                        return Err(err(format!(
                            "backend table needs {need} entries followed by map"
                        )));
                    }
                    let entries = tokens[3..3 + need]
                        .iter()
                        .map(|t| parse_u64(t, line_no).map(|v| v as usize))
                        .collect::<Result<Vec<_>, _>>()?;
                    if tokens[3 + need] != "map" {
                        return Err(err("expected map after the table entries".into()));
                    }
                    let mut gen_map = Vec::new();
                    for tok in &tokens[3 + need + 1..] {
                        let (name, elem) = tok.split_once('=').ok_or_else(|| {
                            err(format!("bad map entry {tok:?}, expected letter=elem"))
                        })?;
                        gen_map.push((name.to_string(), parse_u64(elem, line_no)? as usize));
                    }
                    if gen_map.is_empty() {
                        return Err(err("backend table map needs at least one entry".into()));
                    }
                    BackendSpec::Table(TableSpec { order, entries, gen_map })
                }
                _ => return Err(err("backend needs table <...>, free, or abelian".into())),
            });
        }
        other => return Err(err(format!("unknown group subdirective {other:?}"))),
    }
    Ok(())
}

fn parse_u32(token: &str, line: usize) -> Result<u32, ParseError> {
    token.parse().map_err(|_| ParseError {
        line,
        message: format!("expected a non-negative integer, found {token:?}"),
    })
}

fn parse_u64(token: &str, line: usize) -> Result<u64, ParseError> {
    token.parse().map_err(|_| ParseError {
        line,
        message: format!("expected a non-negative integer, found {token:?}"),
    })
}
