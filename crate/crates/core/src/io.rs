//! Group and action files.
//!
//! A group file is `{"name", "order", "mul"}` (a Cayley table) or
//! `{"name", "degree", "generators"}` (permutation image lists, closed into
//! a table at load time). An action file names its group and either gives
//! an explicit table `{"set_size", "act"}` or a `kind`: `conjugation`
//! (on the non-identity elements), `regular`, or `trivial` (with an
//! optional `set_size`, default 1).

use std::sync::Arc;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::groups::{conjugation_action, GAction, Group};

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
enum GroupFile {
    Table { name: String, order: usize, mul: Vec<Vec<usize>> },
    Permutations { name: String, degree: usize, generators: Vec<Vec<usize>> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionFile {
    pub group: String,
    #[serde(default)]
    pub kind: Option<String>,
    #[serde(default)]
    pub set_size: Option<usize>,
    #[serde(default)]
    pub act: Option<Vec<Vec<usize>>>,
}

fn parse_error(source_name: &str, e: serde_json::Error) -> Error {
    Error::Parse {
        source_name: source_name.to_string(),
        message: format!("line {}, column {}: {e}", e.line(), e.column()),
    }
}

/// Line (1-based) on which row `row` of the array under `key` starts.
fn table_row_line(text: &str, key: &str, row: usize) -> Option<usize> {
    let start = text.find(&format!("\"{key}\""))?;
    let mut depth = 0usize;
    let mut seen = 0usize;
    let mut line = text[..start].matches('\n').count() + 1;
    for ch in text[start..].chars() {
        match ch {
            '\n' => line += 1,
            '[' => {
                depth += 1;
                if depth == 2 {
                    if seen == row {
                        return Some(line);
                    }
                    seen += 1;
                }
            }
            ']' => {
                depth = depth.checked_sub(1)?;
                if depth == 0 {
                    return None;
                }
            }
            _ => {}
        }
    }
    None
}

/// Integer following `word` in `message`.
fn number_after(message: &str, word: &str) -> Option<usize> {
    let rest = &message[message.find(word)? + word.len()..];
    rest.trim_start().split(|c: char| !c.is_ascii_digit()).next()?.parse().ok()
}

/// Table row that a validation error points at, when there is one.
fn offending_row(e: &Error) -> Option<usize> {
    match e {
        Error::NotAssociative { a, .. } => Some(*a),
        Error::InvalidGroup(m) | Error::InvalidAction(m) => {
            ["row", "entry", "element", "generator", "g ="].iter().find_map(|w| number_after(m, w))
        }
        _ => None,
    }
}

fn with_line(source_name: &str, text: &str, key: &str, e: Error) -> Error {
    let line = offending_row(&e).and_then(|row| table_row_line(text, key, row));
    Error::Parse {
        source_name: source_name.to_string(),
        message: match line {
            Some(l) => format!("line {l}: {e}"),
            None => e.to_string(),
        },
    }
}

pub fn parse_group(source_name: &str, text: &str) -> Result<Group> {
    let file: GroupFile = serde_json::from_str(text).map_err(|e| parse_error(source_name, e))?;
    match file {
        GroupFile::Table { name, order, mul } => {
            if mul.len() != order {
                return Err(Error::Parse {
                    source_name: source_name.to_string(),
                    message: format!("order {order} but {} table rows", mul.len()),
                });
            }
            Group::from_table(name, mul).map_err(|e| with_line(source_name, text, "mul", e))
        }
        GroupFile::Permutations { name, degree, generators } => Group::from_permutations(name, degree, &generators)
            .map_err(|e| with_line(source_name, text, "generators", e)),
    }
}

pub fn parse_action_file(source_name: &str, text: &str) -> Result<ActionFile> {
    serde_json::from_str(text).map_err(|e| parse_error(source_name, e))
}

/// Builds the action described by `file` on `group`, whose name must match.
pub fn build_action(source_name: &str, text: &str, file: &ActionFile, group: &Arc<Group>) -> Result<GAction> {
    let bad = |message: String| Error::Parse { source_name: source_name.to_string(), message };
    if file.group != group.name() {
        return Err(bad(format!("action is for group '{}' but '{}' was given", file.group, group.name())));
    }
    match (file.kind.as_deref(), &file.act) {
        (Some(_), Some(_)) => Err(bad("give either 'kind' or 'act', not both".into())),
        (Some("conjugation"), None) => conjugation_action(group),
        (Some("regular"), None) => Ok(GAction::regular(group)),
        (Some("trivial"), None) => GAction::trivial(group, file.set_size.unwrap_or(1)),
        (Some(other), None) => {
            Err(bad(format!("unknown action kind '{other}' (expected conjugation, regular or trivial)")))
        }
        (None, Some(act)) => {
            let set_size =
                file.set_size.or_else(|| act.first().map(Vec::len)).ok_or_else(|| bad("empty action table".into()))?;
            GAction::new(group, set_size, act.clone()).map_err(|e| with_line(source_name, text, "act", e))
        }
        (None, None) => Err(bad("action file needs 'kind' or 'act'".into())),
    }
}
