//! Query expressions and their evaluation against a catalog.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::ring::Ring;

use super::func::{MapFn, Pred};
use super::Relation;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OuterKind {
    Left,
    Right,
    Full,
}

impl OuterKind {
    pub fn name(self) -> &'static str {
        match self {
            OuterKind::Left => "left",
            OuterKind::Right => "right",
            OuterKind::Full => "full",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "left" => Some(OuterKind::Left),
            "right" => Some(OuterKind::Right),
            "full" => Some(OuterKind::Full),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AggFold {
    Sum,
    Count,
    Min,
    Max,
}

impl AggFold {
    pub fn name(self) -> &'static str {
        match self {
            AggFold::Sum => "sum",
            AggFold::Count => "count",
            AggFold::Min => "min",
            AggFold::Max => "max",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "sum" => Some(AggFold::Sum),
            "count" => Some(AggFold::Count),
            "min" => Some(AggFold::Min),
            "max" => Some(AggFold::Max),
            _ => None,
        }
    }
}

/// A relational query. Attributes are referred to by name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Query {
    Load(String),
    Select(Pred, Box<Query>),
    Project(Vec<String>, Box<Query>),
    /// Reorders attributes; the list is a permutation of the schema.
    Rename(Vec<String>, Box<Query>),
    /// Relabels attributes positionally.
    As(Vec<String>, Box<Query>),
    Union(Box<Query>, Box<Query>),
    Diff(Box<Query>, Box<Query>),
    Intersect(Box<Query>, Box<Query>),
    Product(Box<Query>, Box<Query>),
    Join(Vec<Query>),
    Outer(OuterKind, Box<Query>, Box<Query>),
    Aggregate { fold: AggFold, group: Vec<String>, target: Option<String>, input: Box<Query> },
    Map(MapFn, String, Box<Query>),
    Clamp(Box<Query>),
    Update(Box<Query>, Box<Query>),
}

/// Named relations available to queries.
pub trait Catalog<K: Ring> {
    fn relation(&self, name: &str) -> Option<&Relation<K>>;
}

impl<K: Ring> Catalog<K> for HashMap<String, Relation<K>> {
    fn relation(&self, name: &str) -> Option<&Relation<K>> {
        self.get(name)
    }
}

impl<K: Ring> Catalog<K> for BTreeMap<String, Relation<K>> {
    fn relation(&self, name: &str) -> Option<&Relation<K>> {
        self.get(name)
    }
}

pub fn eval<K: Ring>(q: &Query, catalog: &dyn Catalog<K>) -> Result<Relation<K>> {
    let ev = |q: &Query| eval(q, catalog);
    match q {
        Query::Load(name) => catalog.relation(name).cloned().ok_or_else(|| Error::query(format!("unknown relation `{name}`"))),
        Query::Select(p, x) => ev(x)?.select(p),
        Query::Project(names, x) => ev(x)?.project(names),
        Query::Rename(names, x) => ev(x)?.rename(names),
        Query::As(names, x) => ev(x)?.with_names(names),
        Query::Union(x, y) => ev(x)?.union(&ev(y)?),
        Query::Diff(x, y) => ev(x)?.diff(&ev(y)?),
        Query::Intersect(x, y) => ev(x)?.intersect(&ev(y)?),
        Query::Product(x, y) => ev(x)?.cartesian(&ev(y)?),
        Query::Join(xs) => {
            let rels = xs.iter().map(ev).collect::<Result<Vec<_>>>()?;
            Relation::natural_join(&rels.iter().collect::<Vec<_>>())
        }
        Query::Outer(kind, x, y) => Relation::outer_join(*kind, &ev(x)?, &ev(y)?),
        Query::Aggregate { fold, group, target, input } => ev(input)?.aggregate(*fold, group, target.as_deref()),
        Query::Map(f, attr, x) => ev(x)?.map_col(f, attr),
        Query::Clamp(x) => ev(x)?.clamp_nonneg(),
        Query::Update(x, y) => ev(x)?.apply_update(&ev(y)?),
    }
}
