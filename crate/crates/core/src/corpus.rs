//! The bundled corpus of groups and actions.
//!
//! Files are compiled into the binary. Setting `COHOMOLAB_CORPUS` to a
//! directory with the same layout (`groups/`, `actions/`, `manifest.json`)
//! replaces them at run time.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{GAction, Group};
use crate::io::{build_action, parse_action_file, parse_group};

pub const CORPUS_ENV: &str = "COHOMOLAB_CORPUS";

const GROUPS: &[(&str, &str)] = &[
    ("C2", include_str!("../corpus/groups/C2.json")),
    ("C2xS3", include_str!("../corpus/groups/C2xS3.json")),
    ("C3", include_str!("../corpus/groups/C3.json")),
    ("C5", include_str!("../corpus/groups/C5.json")),
    ("C6", include_str!("../corpus/groups/C6.json")),
    ("D4", include_str!("../corpus/groups/D4.json")),
    ("Q8", include_str!("../corpus/groups/Q8.json")),
    ("S3", include_str!("../corpus/groups/S3.json")),
    ("S3xS3", include_str!("../corpus/groups/S3xS3.json")),
    ("trivial", include_str!("../corpus/groups/trivial.json")),
];

const ACTIONS: &[(&str, &str)] = &[
    ("C2_conjugation", include_str!("../corpus/actions/C2_conjugation.json")),
    ("C2_regular", include_str!("../corpus/actions/C2_regular.json")),
    ("C2_trivial", include_str!("../corpus/actions/C2_trivial.json")),
    ("C2xS3_conjugation", include_str!("../corpus/actions/C2xS3_conjugation.json")),
    ("C2xS3_regular", include_str!("../corpus/actions/C2xS3_regular.json")),
    ("C2xS3_trivial", include_str!("../corpus/actions/C2xS3_trivial.json")),
    ("C3_conjugation", include_str!("../corpus/actions/C3_conjugation.json")),
    ("C3_regular", include_str!("../corpus/actions/C3_regular.json")),
    ("C3_trivial", include_str!("../corpus/actions/C3_trivial.json")),
    ("C5_conjugation", include_str!("../corpus/actions/C5_conjugation.json")),
    ("C5_regular", include_str!("../corpus/actions/C5_regular.json")),
    ("C5_trivial", include_str!("../corpus/actions/C5_trivial.json")),
    ("C6_conjugation", include_str!("../corpus/actions/C6_conjugation.json")),
    ("C6_regular", include_str!("../corpus/actions/C6_regular.json")),
    ("C6_trivial", include_str!("../corpus/actions/C6_trivial.json")),
    ("D4_conjugation", include_str!("../corpus/actions/D4_conjugation.json")),
    ("D4_regular", include_str!("../corpus/actions/D4_regular.json")),
    ("D4_trivial", include_str!("../corpus/actions/D4_trivial.json")),
    ("D4_vertices_and_diagonals", include_str!("../corpus/actions/D4_vertices_and_diagonals.json")),
    ("Q8_conjugation", include_str!("../corpus/actions/Q8_conjugation.json")),
    ("Q8_regular", include_str!("../corpus/actions/Q8_regular.json")),
    ("Q8_trivial", include_str!("../corpus/actions/Q8_trivial.json")),
    ("S3_conjugation", include_str!("../corpus/actions/S3_conjugation.json")),
    ("S3_points_and_sign", include_str!("../corpus/actions/S3_points_and_sign.json")),
    ("S3_regular", include_str!("../corpus/actions/S3_regular.json")),
    ("S3_trivial", include_str!("../corpus/actions/S3_trivial.json")),
    ("trivial_regular", include_str!("../corpus/actions/trivial_regular.json")),
    ("trivial_trivial", include_str!("../corpus/actions/trivial_trivial.json")),
];

const MANIFEST: &str = include_str!("../corpus/manifest.json");

/// One group with its actions and the checksums of its golden reports,
/// keyed by the command line that produces them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusEntry {
    pub name: String,
    pub group: String,
    #[serde(default)]
    pub actions: Vec<String>,
    #[serde(default)]
    pub golden: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub entries: Vec<CorpusEntry>,
}

#[derive(Debug, Clone)]
enum Source {
    Embedded,
    Directory(PathBuf),
}

#[derive(Debug, Clone)]
pub struct Corpus {
    source: Source,
    manifest: Manifest,
}

impl Corpus {
    pub fn embedded() -> Self {
        let manifest = serde_json::from_str(MANIFEST).expect("bundled manifest parses");
        Corpus { source: Source::Embedded, manifest }
    }

    pub fn from_dir(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        let path = dir.join("manifest.json");
        let text = std::fs::read_to_string(&path)?;
        let manifest = serde_json::from_str(&text).map_err(|e| Error::Parse {
            source_name: path.display().to_string(),
            message: format!("line {}, column {}: {e}", e.line(), e.column()),
        })?;
        Ok(Corpus { source: Source::Directory(dir), manifest })
    }

    /// The directory named by `COHOMOLAB_CORPUS`, else the bundled files.
    pub fn load() -> Result<Self> {
        match std::env::var_os(CORPUS_ENV) {
            Some(dir) if !dir.is_empty() => Corpus::from_dir(dir),
            _ => Ok(Corpus::embedded()),
        }
    }

    pub fn entries(&self) -> &[CorpusEntry] {
        &self.manifest.entries
    }

    pub fn entry(&self, name: &str) -> Option<&CorpusEntry> {
        self.manifest.entries.iter().find(|e| e.name == name)
    }

    pub fn manifest(&self) -> &Manifest {
        &self.manifest
    }

    fn text(&self, kind: &str, name: &str) -> Result<(String, String)> {
        let missing =
            || Error::Parse { source_name: format!("corpus {kind}/{name}"), message: "no such corpus file".into() };
        match &self.source {
            Source::Embedded => {
                let table = if kind == "groups" { GROUPS } else { ACTIONS };
                table
                    .iter()
                    .find(|(n, _)| *n == name)
                    .map(|(_, t)| (format!("{kind}/{name}.json"), t.to_string()))
                    .ok_or_else(missing)
            }
            Source::Directory(dir) => {
                let path = dir.join(kind).join(format!("{name}.json"));
                if !path.is_file() {
                    return Err(missing());
                }
                Ok((path.display().to_string(), std::fs::read_to_string(&path)?))
            }
        }
    }

    pub fn has_group(&self, name: &str) -> bool {
        self.text("groups", name).is_ok()
    }

    pub fn group(&self, name: &str) -> Result<Arc<Group>> {
        let (source, text) = self.text("groups", name)?;
        Ok(Arc::new(parse_group(&source, &text)?))
    }

    /// Looks up `name`, then `<group>_<name>`.
    pub fn action(&self, name: &str, group: &Arc<Group>) -> Result<GAction> {
        let (source, text) =
            self.text("actions", name).or_else(|_| self.text("actions", &format!("{}_{name}", group.name())))?;
        let file = parse_action_file(&source, &text)?;
        build_action(&source, &text, &file, group)
    }

    /// Parses and validates every file the manifest names.
    pub fn validate(&self) -> Result<()> {
        for e in self.entries() {
            let g = self.group(&e.group)?;
            if g.name() != e.name {
                return Err(Error::Parse {
                    source_name: format!("groups/{}.json", e.group),
                    message: format!("group is named '{}', manifest says '{}'", g.name(), e.name),
                });
            }
            for a in &e.actions {
                self.action(a, &g)?;
            }
        }
        Ok(())
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Parse { source_name: path.display().to_string(), message: e.to_string() })
}

/// A file path if one exists, else a corpus group name.
pub fn resolve_group(corpus: &Corpus, arg: &str) -> Result<Arc<Group>> {
    let path = Path::new(arg);
    if path.is_file() {
        return Ok(Arc::new(parse_group(arg, &read(path)?)?));
    }
    corpus.group(arg)
}

/// A file path if one exists, else a corpus action name (with or without
/// the `<group>_` prefix).
pub fn resolve_action(corpus: &Corpus, arg: &str, group: &Arc<Group>) -> Result<GAction> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = read(path)?;
        let file = parse_action_file(arg, &text)?;
        return build_action(arg, &text, &file, group);
    }
    corpus.action(arg, group)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_corpus_validates() {
        let c = Corpus::embedded();
        c.validate().unwrap();
        assert_eq!(c.entries().len(), GROUPS.len());
        let listed: usize = c.entries().iter().map(|e| e.actions.len()).sum();
        assert_eq!(listed, ACTIONS.len());
    }

    #[test]
    fn orders() {
        let c = Corpus::embedded();
        let orders: Vec<(String, usize)> =
            c.entries().iter().map(|e| (e.name.clone(), c.group(&e.group).unwrap().order())).collect();
        let expect = [
            ("trivial", 1),
            ("C2", 2),
            ("C3", 3),
            ("C5", 5),
            ("C6", 6),
            ("S3", 6),
            ("D4", 8),
            ("Q8", 8),
            ("C2xS3", 12),
            ("S3xS3", 36),
        ];
        for (name, order) in expect {
            assert!(orders.contains(&(name.to_string(), order)), "{name}");
        }
    }

    #[test]
    fn short_action_names() {
        let c = Corpus::embedded();
        let g = c.group("S3").unwrap();
        assert_eq!(c.action("conjugation", &g).unwrap().set_size(), 5);
        assert_eq!(c.action("S3_points_and_sign", &g).unwrap().set_size(), 5);
        assert!(c.action("C2_regular", &g).is_err());
    }

    #[test]
    fn directory_override() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::create_dir_all(dir.path().join("groups")).unwrap();
        std::fs::create_dir_all(dir.path().join("actions")).unwrap();
        std::fs::write(dir.path().join("groups/Z2.json"), r#"{"name": "Z2", "order": 2, "mul": [[0, 1], [1, 0]]}"#)
            .unwrap();
        std::fs::write(dir.path().join("actions/Z2_flip.json"), r#"{"group": "Z2", "act": [[0, 1], [1, 0]]}"#).unwrap();
        std::fs::write(
            dir.path().join("manifest.json"),
            r#"{"entries": [{"name": "Z2", "group": "Z2", "actions": ["Z2_flip"]}]}"#,
        )
        .unwrap();
        let c = Corpus::from_dir(dir.path()).unwrap();
        c.validate().unwrap();
        assert!(!c.has_group("S3"));
        let g = c.group("Z2").unwrap();
        assert_eq!(c.action("flip", &g).unwrap().set_size(), 2);
    }
}
