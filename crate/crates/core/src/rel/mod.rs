//! Relations over named attributes.
//!
//! A relation with attributes `A₁ … Aₘ` is a term of `F[A₁] ⊗ ⋯ ⊗ F[Aₘ]`
//! (right-nested). Any factor may instead be the compact `F*[Aᵢ]` when the
//! data carries wildcards, as outer joins produce. Operations are linear maps
//! on the data and keep it unnormalized where they can; joins and
//! intersections run the worst-case optimal product.

pub mod func;
pub mod query;
pub mod sexpr;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::fold::{fold_free, fold_tensor, include_compact, pure_tensors, restrict_finite};
use crate::normal::{normalize, NormalForm, PathItem};
use crate::ring::Ring;
use crate::space::Space;
use crate::term::Term;
use crate::value::{PrimSet, Value};
use crate::wco;

pub use func::{CmpOp, MapFn, Operand, Pred};
pub use query::{eval, AggFold, Catalog, OuterKind, Query};
pub use sexpr::{parse_query, ParseError};

/// Ordered, uniquely named attributes.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Schema {
    attrs: Vec<(String, PrimSet)>,
}

impl Schema {
    pub fn new(attrs: Vec<(String, PrimSet)>) -> Result<Self> {
        for (i, (name, _)) in attrs.iter().enumerate() {
            if attrs[..i].iter().any(|(n, _)| n == name) {
                return Err(Error::query(format!("duplicate attribute `{name}`")));
            }
        }
        Ok(Schema { attrs })
    }

    /// Parses a declaration like `A:str,B:int`.
    pub fn parse(decl: &str) -> Result<Self> {
        let attrs = decl
            .split(',')
            .map(|item| {
                let (name, ty) = item
                    .split_once(':')
                    .ok_or_else(|| Error::query(format!("expected name:type in schema, found `{item}`")))?;
                let name = name.trim();
                if name.is_empty() {
                    return Err(Error::query("empty attribute name in schema"));
                }
                let ty = PrimSet::from_column_name(ty.trim())
                    .ok_or_else(|| Error::query(format!("unknown type `{}` for attribute `{name}`", ty.trim())))?;
                Ok((name.to_string(), ty))
            })
            .collect::<Result<Vec<_>>>()?;
        Schema::new(attrs)
    }

    pub fn attrs(&self) -> &[(String, PrimSet)] {
        &self.attrs
    }

    pub fn len(&self) -> usize {
        self.attrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attrs.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.attrs.iter().map(|(n, _)| n.as_str())
    }

    pub fn types(&self) -> impl Iterator<Item = &PrimSet> {
        self.attrs.iter().map(|(_, t)| t)
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.attrs.iter().position(|(n, _)| n == name)
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.position(name).ok_or_else(|| Error::query(format!("unknown attribute `{name}` (schema is {self})")))
    }

    fn select(&self, positions: &[usize]) -> Schema {
        Schema { attrs: positions.iter().map(|&p| self.attrs[p].clone()).collect() }
    }

    /// The data space with factor `i` compact when `compact[i]` is set.
    pub fn space(&self, compact: &[bool]) -> Space {
        if self.attrs.is_empty() {
            return Space::Scalar;
        }
        Space::tensor_of(self.attrs.iter().zip(compact).map(|((_, t), &c)| {
            if c {
                Space::CompactFree(t.clone())
            } else {
                Space::Free(t.clone())
            }
        }))
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (n, t)) in self.attrs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            match t.column_name() {
                Some(c) => write!(f, "{n}:{c}")?,
                None => write!(f, "{n}:{t}")?,
            }
        }
        Ok(())
    }
}

/// One row of a relation's expansion; `None` marks a wildcard.
#[derive(Clone, Debug, PartialEq)]
pub struct Row<K: Ring> {
    pub values: Vec<Option<Value>>,
    pub coefficient: K,
}

#[derive(Clone, Debug)]
pub struct Relation<K: Ring> {
    schema: Schema,
    data: Term<K>,
}

impl<K: Ring> Relation<K> {
    pub fn new(schema: Schema, data: Term<K>) -> Result<Self> {
        let compact = compact_flags(&schema, data.space())?;
        debug_assert_eq!(schema.space(&compact), *data.space());
        Ok(Relation { schema, data })
    }

    pub fn empty(schema: Schema) -> Self {
        let space = schema.space(&vec![false; schema.len()]);
        Relation { schema, data: Term::zero(space) }
    }

    /// Builds `Σ c · ⟨v₁⟩ ⊗ ⋯ ⊗ ⟨vₘ⟩`.
    pub fn from_rows(schema: Schema, rows: impl IntoIterator<Item = (Vec<Value>, K)>) -> Result<Self> {
        let space = schema.space(&vec![false; schema.len()]);
        let mut terms = Vec::new();
        for (values, c) in rows {
            if values.len() != schema.len() {
                return Err(Error::query(format!("row has {} values but the schema has {} attributes", values.len(), schema.len())));
            }
            let t = tuple_term(&schema, &values, &vec![false; schema.len()])?;
            terms.push(if c.is_one() { t } else { t.scale(c) });
        }
        Ok(Relation { data: Term::sum(&space, terms)?, schema })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn data(&self) -> &Term<K> {
        &self.data
    }

    pub fn into_data(self) -> Term<K> {
        self.data
    }

    /// Which factors are compact.
    pub fn compact(&self) -> Vec<bool> {
        compact_flags(&self.schema, self.data.space()).expect("checked at construction")
    }

    pub fn normal_form(&self) -> NormalForm<K> {
        normalize(&self.data)
    }

    /// Whether the normalized data carries a wildcard baseline.
    pub fn has_wildcard(&self) -> bool {
        self.normal_form().has_baseline()
    }

    /// The expansion in key order, wildcards included.
    pub fn rows(&self) -> Vec<Row<K>> {
        rows_of(&self.normal_form())
    }

    /// The expansion, failing on wildcards.
    pub fn finite_rows(&self) -> Result<Vec<(Vec<Value>, K)>> {
        let nf = self.normal_form();
        if nf.has_baseline() {
            return Err(Error::InfiniteSupport);
        }
        Ok(rows_of(&nf)
            .into_iter()
            .map(|r| (r.values.into_iter().map(|v| v.expect("finite")).collect(), r.coefficient))
            .collect())
    }

    /// Weighted cardinality `#`, computed without normalizing.
    pub fn weight(&self) -> K {
        self.data.weight()
    }

    /// The value at a tuple, reading each compact factor as a map with a
    /// baseline; `None` looks up the baseline itself.
    pub fn lookup(&self, key: &[Option<Value>]) -> Result<K> {
        if key.len() != self.schema.len() {
            return Err(Error::query(format!("key has {} components for {} attributes", key.len(), self.schema.len())));
        }
        Ok(lookup_nf(&self.normal_form(), key))
    }

    /// Extensional equality of two relations with the same schema.
    pub fn equiv(&self, other: &Self) -> Result<bool> {
        let (x, y) = self.aligned(other)?;
        crate::normal::equal(&x, &y)
    }

    fn same_schema(&self, other: &Self) -> Result<()> {
        if self.schema != other.schema {
            return Err(Error::query(format!("schemas differ: {} vs {}", self.schema, other.schema)));
        }
        Ok(())
    }

    /// Both data terms lifted into the common space.
    fn aligned(&self, other: &Self) -> Result<(Term<K>, Term<K>)> {
        self.same_schema(other)?;
        let (a, b) = (self.compact(), other.compact());
        let both: Vec<bool> = a.iter().zip(&b).map(|(x, y)| *x || *y).collect();
        Ok((self.lift(&both)?, other.lift(&both)?))
    }

    /// The data with the flagged factors included into their compact spaces.
    fn lift(&self, compact: &[bool]) -> Result<Term<K>> {
        if self.compact() == compact {
            return Ok(self.data.clone());
        }
        let space = self.schema.space(compact);
        let parts = pure_parts(&self.data, self.schema.len())
            .into_iter()
            .map(|(c, parts)| {
                let parts = parts
                    .iter()
                    .zip(compact)
                    .map(|(p, &cp)| if cp { include_compact(p) } else { Ok(p.clone()) })
                    .collect::<Result<Vec<_>>>()?;
                Ok((c, parts))
            })
            .collect::<Result<Vec<_>>>()?;
        assemble(&space, parts)
    }

    /// Relabels attributes positionally.
    pub fn with_names(&self, names: &[String]) -> Result<Self> {
        if names.len() != self.schema.len() {
            return Err(Error::query(format!("{} names given for {} attributes", names.len(), self.schema.len())));
        }
        let schema = Schema::new(names.iter().cloned().zip(self.schema.types().cloned()).collect())?;
        Ok(Relation { schema, data: self.data.clone() })
    }

    /// `σ_P`: keeps generators satisfying `pred` with their multiplicities.
    /// A predicate on one attribute is applied factorwise without expanding.
    pub fn select(&self, pred: &Pred) -> Result<Self> {
        pred.check(&self.schema)?;
        let cols = pred.columns(&self.schema)?;
        let schema = &self.schema;
        match cols.len() {
            0 => {
                if pred.eval(schema, &|_| unreachable!("no attributes read"))? {
                    Ok(self.clone())
                } else {
                    Ok(Relation { schema: schema.clone(), data: Term::zero(self.data.space().clone()) })
                }
            }
            1 => {
                let i = *cols.first().expect("one column");
                let data = self.map_factor(i, self.data.space().tensor_factors()[i].clone(), &mut |part| {
                    let space = part.space().clone();
                    fold_free(
                        part,
                        &space,
                        |a| {
                            let keep = pred.eval(schema, &|_| a.clone())?;
                            if keep {
                                Term::inject(&space, a.clone())
                            } else {
                                Ok(Term::zero(space.clone()))
                            }
                        },
                        None,
                    )
                    .map_err(|e| match e {
                        Error::MissingWildAction => Error::query("cannot select on a wildcard attribute"),
                        e => e,
                    })
                })?;
                Ok(Relation { schema: schema.clone(), data })
            }
            _ => {
                let mut kept = Vec::new();
                for (values, c) in self.finite_rows()? {
                    if pred.eval(schema, &|j| values[j].clone())? {
                        kept.push((values, c));
                    }
                }
                let r = Relation::from_rows(schema.clone(), kept)?;
                Ok(Relation { data: r.lift(&self.compact())?, schema: r.schema })
            }
        }
    }

    /// Applies `f` to factor `i` of every pure tensor, giving factor space `target`.
    fn map_factor(&self, i: usize, target: Space, f: &mut dyn FnMut(&Term<K>) -> Result<Term<K>>) -> Result<Term<K>> {
        let mut factors: Vec<Space> = self.data.space().tensor_factors().into_iter().cloned().collect();
        factors[i] = target;
        let space = Space::tensor_of(factors);
        let parts = pure_parts(&self.data, self.schema.len())
            .into_iter()
            .map(|(c, mut parts)| {
                parts[i] = f(&parts[i])?;
                Ok((c, parts))
            })
            .collect::<Result<Vec<_>>>()?;
        assemble(&space, parts)
    }

    /// `π`: keeps the named attributes in the given order. Discarded
    /// factors contribute their weight, so multiplicities are preserved.
    pub fn project(&self, names: &[String]) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::query("projection needs at least one attribute"));
        }
        let positions = self.positions(names)?;
        self.reshape(&positions)
    }

    /// Reorders attributes; `names` must be a permutation of the schema.
    pub fn rename(&self, names: &[String]) -> Result<Self> {
        let positions = self.positions(names)?;
        if positions.len() != self.schema.len() {
            return Err(Error::query(format!("rename needs a permutation of all attributes ({})", self.schema)));
        }
        self.reshape(&positions)
    }

    fn positions(&self, names: &[String]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(names.len());
        for n in names {
            let p = self.schema.require(n)?;
            if out.contains(&p) {
                return Err(Error::query(format!("attribute `{n}` listed twice")));
            }
            out.push(p);
        }
        Ok(out)
    }

    /// Keeps `positions` (in that order), weighting by the dropped factors.
    fn reshape(&self, positions: &[usize]) -> Result<Self> {
        if positions.iter().copied().eq(0..self.schema.len()) {
            return Ok(self.clone());
        }
        let compact = self.compact();
        let schema = self.schema.select(positions);
        let space = schema.space(&positions.iter().map(|&p| compact[p]).collect::<Vec<_>>());
        let parts = pure_parts(&self.data, self.schema.len())
            .into_iter()
            .map(|(c, parts)| {
                let mut coef = c;
                for (i, p) in parts.iter().enumerate() {
                    if !positions.contains(&i) {
                        coef = coef.mul(&p.weight());
                    }
                }
                (coef, positions.iter().map(|&p| parts[p].clone()).collect())
            })
            .collect();
        Ok(Relation { schema, data: assemble(&space, parts)? })
    }

    /// `∪`: addition.
    pub fn union(&self, other: &Self) -> Result<Self> {
        let (x, y) = self.aligned(other)?;
        Ok(Relation { schema: self.schema.clone(), data: x.add(&y)? })
    }

    /// Addition of a delta relation; negative multiplicities are kept.
    pub fn apply_update(&self, delta: &Self) -> Result<Self> {
        self.union(delta)
    }

    pub fn diff(&self, other: &Self) -> Result<Self> {
        let (x, y) = self.aligned(other)?;
        Ok(Relation { schema: self.schema.clone(), data: x.sub(&y)? })
    }

    /// `∩`: the algebra product, evaluated by the worst-case optimal product.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        let (x, y) = self.aligned(other)?;
        let space = x.space().clone();
        let nf = wco::multiply(&[x, y])?;
        Ok(Relation { schema: self.schema.clone(), data: nf.readback(&space) })
    }

    /// `×`: the tensor product, kept symbolic.
    pub fn cartesian(&self, other: &Self) -> Result<Self> {
        if let Some(n) = other.schema.names().find(|n| self.schema.position(n).is_some()) {
            return Err(Error::query(format!("attribute `{n}` occurs on both sides of a product")));
        }
        let mut attrs = self.schema.attrs.clone();
        attrs.extend(other.schema.attrs.iter().cloned());
        let schema = Schema::new(attrs)?;
        let data = match (self.schema.len(), other.schema.len()) {
            (0, _) => other.data.scale(self.data.weight()),
            (_, 0) => self.data.scale(other.data.weight()),
            (m, _) => concat(&self.data, &other.data, m)?,
        };
        Ok(Relation { schema, data })
    }

    /// The natural join of any number of relations as one joint product.
    pub fn natural_join(rels: &[&Relation<K>]) -> Result<Self> {
        let (schema, embedded) = embed_all(rels)?;
        let nf = wco::multiply(&embedded)?;
        finitize(schema, nf)
    }

    /// Outer joins by adding the unit before multiplying: `x′ · (y′ + 1)`,
    /// `(x′ + 1) · y′` or `(x′ + 1) · (y′ + 1)`. Missing attributes of
    /// unmatched tuples are wildcards.
    pub fn outer_join(kind: OuterKind, left: &Relation<K>, right: &Relation<K>) -> Result<Self> {
        let (schema, embedded) = embed_all(&[left, right])?;
        let one = Term::unit_one(embedded[0].space())?;
        let (x, y) = (&embedded[0], &embedded[1]);
        let factors = match kind {
            OuterKind::Left => [x.clone(), y.add(&one)?],
            OuterKind::Right => [x.add(&one)?, y.clone()],
            OuterKind::Full => [x.add(&one)?, y.add(&one)?],
        };
        finitize(schema, wco::multiply(&factors)?)
    }

    /// Aggregates `target` per `group`. `sum` moves the attribute into the
    /// ring, `count` is the projection onto the group, and `min`/`max`
    /// collect each group's set of values before taking the extreme.
    pub fn aggregate(&self, fold: AggFold, group: &[String], target: Option<&str>) -> Result<Self> {
        let group_pos = self.positions(group)?;
        let target_pos = match (fold, target) {
            (AggFold::Count, None) => None,
            (AggFold::Count, Some(_)) => return Err(Error::query("count takes no target attribute")),
            (_, None) => return Err(Error::query(format!("{} needs a target attribute", fold.name()))),
            (_, Some(t)) => {
                let p = self.schema.require(t)?;
                if group_pos.contains(&p) {
                    return Err(Error::query(format!("target `{t}` is also a grouping attribute")));
                }
                Some(p)
            }
        };
        match fold {
            AggFold::Count => self.reshape(&group_pos),
            AggFold::Sum => {
                let t = target_pos.expect("checked");
                if self.schema.attrs[t].1 != PrimSet::Int {
                    return Err(Error::query(format!("sum needs an int attribute, `{}` is {}", self.schema.attrs[t].0, self.schema.attrs[t].1)));
                }
                if K::NAME == "gf2" {
                    return Err(Error::query("sum is not meaningful over gf2; use count for parity"));
                }
                let compact = self.compact();
                let schema = self.schema.select(&group_pos);
                let space = schema.space(&group_pos.iter().map(|&p| compact[p]).collect::<Vec<_>>());
                let parts = pure_parts(&self.data, self.schema.len())
                    .into_iter()
                    .map(|(c, parts)| {
                        let mut coef = c.mul(&value_sum(&parts[t])?);
                        for (i, p) in parts.iter().enumerate() {
                            if i != t && !group_pos.contains(&i) {
                                coef = coef.mul(&p.weight());
                            }
                        }
                        Ok((coef, group_pos.iter().map(|&p| parts[p].clone()).collect()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Relation { schema, data: assemble(&space, parts)? })
            }
            AggFold::Min | AggFold::Max => {
                let t = target_pos.expect("checked");
                let mut keep = group_pos.clone();
                keep.push(t);
                let mut groups: BTreeMap<Vec<Value>, Vec<Value>> = BTreeMap::new();
                for (mut values, _) in self.reshape(&keep)?.finite_rows()? {
                    let v = values.pop().expect("target column");
                    groups.entry(values).or_default().push(v);
                }
                let mut rows = Vec::with_capacity(groups.len());
                for (mut key, set) in groups {
                    match extreme(fold, set) {
                        Extended::Finite(v) => key.push(v),
                        marker => return Err(Error::query(format!("aggregate of an empty group gives {marker}"))),
                    }
                    rows.push((key, K::one()));
                }
                Relation::from_rows(self.schema.select(&keep), rows)
            }
        }
    }

    /// Applies a registry function to one attribute via the functorial
    /// action; colliding outputs add their multiplicities.
    pub fn map_col(&self, f: &MapFn, name: &str) -> Result<Self> {
        let i = self.schema.require(name)?;
        let codomain = f.codomain(&self.schema.attrs[i].1)?;
        let compact = self.compact()[i];
        let target = if compact { Space::CompactFree(codomain.clone()) } else { Space::Free(codomain.clone()) };
        let wild = Term::wild_one(codomain.clone());
        let data = self.map_factor(i, target.clone(), &mut |part| {
            fold_free(part, &target, |a| Term::inject(&target, f.apply(a)?), compact.then_some(&wild))
        })?;
        let mut schema = self.schema.clone();
        schema.attrs[i].1 = codomain;
        Ok(Relation { schema, data })
    }

    /// Drops entries with negative multiplicity. Not linear: this is a
    /// barrier that normalizes first.
    pub fn clamp_nonneg(&self) -> Result<Self> {
        let rows = self.finite_rows()?;
        let kept = rows.into_iter().filter(|(_, c)| c.sign() != Some(std::cmp::Ordering::Less));
        let r = Relation::from_rows(self.schema.clone(), kept)?;
        Ok(Relation { data: r.lift(&self.compact())?, schema: r.schema })
    }
}

impl<K: Ring> fmt::Display for Relation<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.schema, self.data)
    }
}

/// Result of `min`/`max` with `±∞` adjoined, so that the empty set has an
/// extreme.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extended {
    NegInf,
    Finite(Value),
    PosInf,
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::NegInf => f.write_str("-inf"),
            Extended::Finite(v) => write!(f, "{v}"),
            Extended::PosInf => f.write_str("inf"),
        }
    }
}

/// `min` or `max` of a finite set of values; `min {} = ∞`, `max {} = -∞`.
pub fn extreme(fold: AggFold, set: impl IntoIterator<Item = Value>) -> Extended {
    let it = set.into_iter();
    let found = match fold {
        AggFold::Max => it.max(),
        _ => it.min(),
    };
    match (found, fold) {
        (Some(v), _) => Extended::Finite(v),
        (None, AggFold::Max) => Extended::NegInf,
        (None, _) => Extended::PosInf,
    }
}

fn compact_flags(schema: &Schema, space: &Space) -> Result<Vec<bool>> {
    let bad = || Error::query(format!("data in {space} does not match schema {schema}"));
    if schema.is_empty() {
        return if *space == Space::Scalar { Ok(Vec::new()) } else { Err(bad()) };
    }
    let factors = space.tensor_factors();
    if factors.len() != schema.len() {
        return Err(bad());
    }
    let flags = factors
        .iter()
        .zip(schema.types())
        .map(|(f, t)| match f {
            Space::Free(a) if a == t => Ok(false),
            Space::CompactFree(a) if a == t => Ok(true),
            _ => Err(bad()),
        })
        .collect::<Result<Vec<_>>>()?;
    if schema.space(&flags) != *space {
        return Err(bad());
    }
    Ok(flags)
}

fn tuple_term<K: Ring>(schema: &Schema, values: &[Value], compact: &[bool]) -> Result<Term<K>> {
    if values.is_empty() {
        return Ok(Term::one());
    }
    let parts = values
        .iter()
        .zip(schema.types())
        .zip(compact)
        .map(|((v, t), &c)| {
            let space = if c { Space::CompactFree(t.clone()) } else { Space::Free(t.clone()) };
            Term::inject(&space, v.clone())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Term::tensor_all(parts))
}

/// Pure tensors of a relation's data; a relation without attributes is a
/// single scalar.
fn pure_parts<K: Ring>(x: &Term<K>, arity: usize) -> Vec<(K, Vec<Term<K>>)> {
    if arity == 0 {
        return vec![(x.weight(), Vec::new())];
    }
    pure_tensors(x)
}

fn assemble<K: Ring>(space: &Space, parts: Vec<(K, Vec<Term<K>>)>) -> Result<Term<K>> {
    let terms = parts.into_iter().filter(|(c, _)| !c.is_zero()).map(|(c, parts)| {
        if parts.is_empty() {
            return Term::scalar(c);
        }
        let t = Term::tensor_all(parts);
        if c.is_one() {
            t
        } else {
            t.scale(c)
        }
    });
    Term::sum(space, terms)
}

/// Right-nested concatenation of a tensor of `arity` factors with `y`.
fn concat<K: Ring>(x: &Term<K>, y: &Term<K>, arity: usize) -> Result<Term<K>> {
    if arity == 1 {
        return Ok(Term::tensor(x.clone(), y.clone()));
    }
    let target = Space::tensor_of(x.space().tensor_factors().into_iter().chain(y.space().tensor_factors()).cloned());
    fold_tensor(x, &target, |u, v| Ok(Term::tensor(u.clone(), concat(v, y, arity - 1)?)))
}

/// `Σ v · c` over the generators `c · ⟨v⟩` of an integer column.
fn value_sum<K: Ring>(part: &Term<K>) -> Result<K> {
    let s = fold_free(
        part,
        &Space::Scalar,
        |v| {
            let n = v.as_int().ok_or_else(|| Error::query(format!("sum over non-integer value {v}")))?;
            Ok(Term::scalar(K::from_i64(n)))
        },
        None,
    )
    .map_err(|e| if e == Error::MissingWildAction { Error::InfiniteSupport } else { e })?;
    Ok(s.weight())
}

/// The target schema in first-appearance order and every input embedded
/// into its compact tensor space.
fn embed_all<K: Ring>(rels: &[&Relation<K>]) -> Result<(Schema, Vec<Term<K>>)> {
    if rels.is_empty() {
        return Err(Error::query("join needs at least one relation"));
    }
    let mut attrs: Vec<(String, PrimSet)> = Vec::new();
    for r in rels {
        if r.schema.is_empty() {
            return Err(Error::query("cannot join a relation without attributes"));
        }
        for (n, t) in &r.schema.attrs {
            match attrs.iter().find(|(m, _)| m == n) {
                Some((_, u)) if u != t => {
                    return Err(Error::query(format!("attribute `{n}` has type {u} on one side of a join and {t} on the other")))
                }
                Some(_) => {}
                None => attrs.push((n.clone(), t.clone())),
            }
        }
    }
    let schema = Schema::new(attrs)?;
    let types: Vec<PrimSet> = schema.types().cloned().collect();
    let embedded = rels
        .iter()
        .map(|r| {
            let positions: Vec<usize> = r.schema.names().map(|n| schema.position(n).expect("collected")).collect();
            wco::embed(&r.data, &positions, &types)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((schema, embedded))
}

/// Reads a product back as a relation, in finite form unless wildcards remain.
fn finitize<K: Ring>(schema: Schema, nf: NormalForm<K>) -> Result<Relation<K>> {
    let compact_space = schema.space(&vec![true; schema.len()]);
    let data = nf.readback(&compact_space);
    if nf.has_baseline() {
        return Ok(Relation { schema, data });
    }
    let space = schema.space(&vec![false; schema.len()]);
    let parts = pure_parts(&data, schema.len())
        .into_iter()
        .map(|(c, parts)| Ok((c, parts.iter().map(restrict_finite).collect::<Result<Vec<_>>>()?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Relation { data: assemble(&space, parts)?, schema })
}

fn rows_of<K: Ring>(nf: &NormalForm<K>) -> Vec<Row<K>> {
    nf.expand()
        .into_iter()
        .map(|(path, coefficient)| Row {
            values: path
                .into_iter()
                .map(|item| match item {
                    PathItem::Key(v) => Some(v),
                    PathItem::Wild => None,
                    PathItem::Fst | PathItem::Snd => unreachable!("relations have no biproducts"),
                })
                .collect(),
            coefficient,
        })
        .collect()
}

fn lookup_nf<K: Ring>(nf: &NormalForm<K>, key: &[Option<Value>]) -> K {
    match nf {
        NormalForm::Scalar(r) => r.clone(),
        NormalForm::Tensor(list) => list.iter().fold(K::zero(), |acc, (l, r)| {
            let a = lookup_nf(l, &key[..1]);
            if a.is_zero() {
                acc
            } else {
                acc.add(&a.mul(&lookup_nf(r, &key[1..])))
            }
        }),
        NormalForm::Map { .. } => nf.lookup_scalar(key[0].as_ref()),
        NormalForm::Pair(..) => unreachable!("relations have no biproducts"),
    }
}

#[cfg(test)]
mod tests;
