//! On-disk catalog: a directory holding `catalog.json` and one CSV per
//! relation. Loading copies the source CSV in, so later queries do not
//! depend on the original file.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use polyalg::rel::{parse_query, Query, Relation, Schema};
use polyalg::Ring;
use serde::{Deserialize, Serialize};

use crate::csvio;
use crate::failure::{Failure, Outcome};

pub const MANIFEST: &str = "catalog.json";
const VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum RingKind {
    #[default]
    Z,
    Gf2,
    Real,
}

impl RingKind {
    pub fn name(self) -> &'static str {
        match self {
            RingKind::Z => "z",
            RingKind::Gf2 => "gf2",
            RingKind::Real => "real",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub name: String,
    pub schema: String,
    pub file: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub version: u32,
    pub ring: RingKind,
    pub relations: Vec<Entry>,
}

pub struct Catalog {
    dir: PathBuf,
    manifest: Manifest,
}

/// Relation names must read back as a bare name in a query.
pub fn check_name(name: &str) -> Outcome<()> {
    match parse_query(name) {
        Ok(Query::Load(n)) if n == name => Ok(()),
        _ => Err(Failure::usage(format!("`{name}` cannot be used as a relation name"))),
    }
}

impl Catalog {
    /// Opens the catalog in `dir`; a missing directory is an empty catalog.
    pub fn open(dir: &Path) -> Outcome<Self> {
        let path = dir.join(MANIFEST);
        let manifest = if path.exists() {
            let text = fs::read_to_string(&path)?;
            let m: Manifest = serde_json::from_str(&text)
                .map_err(|e| Failure::data(format!("corrupt catalog {}: {e}", path.display())))?;
            if m.version != VERSION {
                return Err(Failure::data(format!("unsupported catalog version {}", m.version)));
            }
            m
        } else {
            Manifest { version: VERSION, ring: RingKind::default(), relations: Vec::new() }
        };
        Ok(Catalog { dir: dir.to_path_buf(), manifest })
    }

    pub fn ring(&self) -> RingKind {
        self.manifest.ring
    }

    pub fn entries(&self) -> &[Entry] {
        &self.manifest.relations
    }

    pub fn entry(&self, name: &str) -> Option<&Entry> {
        self.manifest.relations.iter().find(|e| e.name == name)
    }

    fn save(&self) -> Outcome<()> {
        fs::create_dir_all(&self.dir)?;
        let mut text = serde_json::to_string_pretty(&self.manifest)?;
        text.push('\n');
        fs::write(self.dir.join(MANIFEST), text)?;
        Ok(())
    }

    /// Validates `csv` against `schema`, copies it in under `name` and
    /// returns the number of distinct rows. The ring is fixed by the first
    /// load; `ring: None` means "whatever the catalog uses".
    pub fn add(&mut self, name: &str, schema: &Schema, csv: &Path, ring: Option<RingKind>, replace: bool) -> Outcome<usize> {
        check_name(name)?;
        let others = self.manifest.relations.iter().filter(|e| e.name != name).count();
        let ring = match ring {
            Some(r) if others > 0 && r != self.manifest.ring => {
                return Err(Failure::data(format!(
                    "catalog uses ring {}; cannot load `{name}` over {}",
                    self.manifest.ring.name(),
                    r.name()
                )))
            }
            Some(r) => r,
            None if others > 0 => self.manifest.ring,
            None => RingKind::default(),
        };
        if self.entry(name).is_some() && !replace {
            return Err(Failure::data(format!("relation `{name}` already exists (use --replace)")));
        }
        let bytes = fs::read(csv).map_err(|e| Failure::data(format!("cannot read {}: {e}", csv.display())))?;
        let rows = match ring {
            RingKind::Z => csvio::read_relation::<polyalg::Integer>(&bytes[..], schema)?.rows().len(),
            RingKind::Gf2 => csvio::read_relation::<polyalg::Gf2>(&bytes[..], schema)?.rows().len(),
            RingKind::Real => csvio::read_relation::<polyalg::Real>(&bytes[..], schema)?.rows().len(),
        };
        fs::create_dir_all(&self.dir)?;
        let file = format!("{name}.csv");
        fs::write(self.dir.join(&file), &bytes)?;
        let entry = Entry { name: name.to_string(), schema: schema.to_string(), file };
        match self.manifest.relations.iter_mut().find(|e| e.name == name) {
            Some(e) => *e = entry,
            None => self.manifest.relations.push(entry),
        }
        self.manifest.ring = ring;
        self.save()?;
        Ok(rows)
    }

    pub fn load<K: Ring>(&self, name: &str) -> Outcome<Relation<K>> {
        let e = self.entry(name).ok_or_else(|| Failure::data(format!("unknown relation `{name}`")))?;
        let schema = Schema::parse(&e.schema)?;
        let bytes = fs::read(self.dir.join(&e.file))?;
        csvio::read_relation(&bytes[..], &schema)
    }

    /// Loads the named relations that exist; unknown names are left for the
    /// evaluator to report.
    pub fn load_all<K: Ring>(&self, names: &[String]) -> Outcome<HashMap<String, Relation<K>>> {
        let mut out = HashMap::new();
        for n in names {
            if self.entry(n).is_some() && !out.contains_key(n) {
                out.insert(n.clone(), self.load(n)?);
            }
        }
        Ok(out)
    }
}

/// Every relation name a query refers to, in order of first appearance.
pub fn referenced(q: &Query) -> Vec<String> {
    fn walk(q: &Query, out: &mut Vec<String>) {
        match q {
            Query::Load(n) => {
                if !out.contains(n) {
                    out.push(n.clone());
                }
            }
            Query::Select(_, x)
            | Query::Project(_, x)
            | Query::Rename(_, x)
            | Query::As(_, x)
            | Query::Map(_, _, x)
            | Query::Clamp(x)
            | Query::Aggregate { input: x, .. } => walk(x, out),
            Query::Union(x, y)
            | Query::Diff(x, y)
            | Query::Intersect(x, y)
            | Query::Product(x, y)
            | Query::Outer(_, x, y)
            | Query::Update(x, y) => {
                walk(x, out);
                walk(y, out);
            }
            Query::Join(xs) => xs.iter().for_each(|x| walk(x, out)),
        }
    }
    let mut out = Vec::new();
    walk(q, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_must_be_query_atoms() {
        assert!(check_name("x").is_ok());
        assert!(check_name("orders_2024").is_ok());
        for bad in ["", "12", "true", "a b", "(x)", "\"x\""] {
            assert!(check_name(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn referenced_names() {
        let q = parse_query("(join x (union y x) (select (= A 1) z))").unwrap();
        assert_eq!(referenced(&q), ["x", "y", "z"]);
    }
}
