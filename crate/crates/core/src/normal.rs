//! Trie-backed normal forms.
//!
//! Every space has a normal form built from four shapes: scalars, keyed maps
//! with an optional out-of-band baseline (free and compact free modules are
//! maps into `K`), pairs, and lists of tensor summands. Maps never store a
//! zero, keys are unique, and biproducts are a single pair.
//!
//! Tensor summand lists are kept compact rather than expanded: summands with
//! equal right factors are merged, then summands with equal left factors.
//! This form is not unique, so equality of tensor normal forms falls back to
//! comparing basis expansions (see [`NormalForm::equiv`]).

use std::borrow::Cow;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::metrics;
use crate::ring::Ring;
use crate::space::Space;
use crate::term::{Gen, Term};
use crate::trie::KeyTrie;
use crate::value::Value;
use crate::wco;

/// One step of a basis path: a map key, the wildcard, or a biproduct side.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PathItem {
    Wild,
    Key(Value),
    Fst,
    Snd,
}

impl fmt::Display for PathItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathItem::Wild => f.write_str("*"),
            PathItem::Key(v) => write!(f, "{v}"),
            PathItem::Fst => f.write_str("fst"),
            PathItem::Snd => f.write_str("snd"),
        }
    }
}

/// A basis element of a module: for `F[A] ⊗ F[B]` this is `[Key a, Key b]`.
pub type Path = Vec<PathItem>;

#[derive(Clone, Debug, PartialEq)]
pub enum NormalForm<K: Ring> {
    Scalar(K),
    Map { keys: KeyTrie<NormalForm<K>>, baseline: Option<Box<NormalForm<K>>> },
    Pair(Box<NormalForm<K>>, Box<NormalForm<K>>),
    Tensor(Vec<(NormalForm<K>, NormalForm<K>)>),
}

use NormalForm as NF;

impl<K: Ring> NormalForm<K> {
    pub fn zero(space: &Space) -> Self {
        match space {
            Space::Scalar => NF::Scalar(K::zero()),
            Space::Free(_) | Space::CompactFree(_) | Space::FinMap(..) | Space::CompactMap(..) => {
                NF::empty_map()
            }
            Space::Biproduct(u, v) => NF::Pair(Box::new(NF::zero(u)), Box::new(NF::zero(v))),
            Space::Tensor(..) => NF::Tensor(Vec::new()),
        }
    }

    pub(crate) fn empty_map() -> Self {
        NF::Map { keys: KeyTrie::new(), baseline: None }
    }

    /// `a ↦ leaf` (or `leaf⟨a⟩` for scalar leaves).
    pub(crate) fn singleton(a: &Value, leaf: Self) -> Self {
        let mut keys = KeyTrie::new();
        if !leaf.is_zero() {
            keys.insert(a, leaf);
        }
        NF::Map { keys, baseline: None }
    }

    /// `* ↦ leaf`.
    pub(crate) fn wild(leaf: Self) -> Self {
        let baseline = (!leaf.is_zero()).then(|| Box::new(leaf));
        NF::Map { keys: KeyTrie::new(), baseline }
    }

    /// Whether this is the zero element. Exact except for tensor summand
    /// lists whose cancellation the compaction does not detect; use
    /// [`NormalForm::is_zero_exact`] when that matters.
    pub fn is_zero(&self) -> bool {
        match self {
            NF::Scalar(r) => r.is_zero(),
            NF::Map { keys, baseline } => keys.is_empty() && baseline.is_none(),
            NF::Pair(u, v) => u.is_zero() && v.is_zero(),
            NF::Tensor(list) => list.is_empty(),
        }
    }

    pub fn is_zero_exact(&self) -> bool {
        self.is_zero() || self.expand().is_empty()
    }

    pub fn as_scalar(&self) -> Option<&K> {
        match self {
            NF::Scalar(r) => Some(r),
            _ => None,
        }
    }

    /// Number of explicit keys of a map level.
    pub fn key_count(&self) -> usize {
        match self {
            NF::Map { keys, .. } => keys.len(),
            _ => 0,
        }
    }

    pub fn baseline(&self) -> Option<&NormalForm<K>> {
        match self {
            NF::Map { baseline, .. } => baseline.as_deref(),
            _ => None,
        }
    }

    /// Whether a wildcard occurs anywhere inside.
    pub fn has_baseline(&self) -> bool {
        match self {
            NF::Scalar(_) => false,
            NF::Map { keys, baseline } => {
                baseline.is_some() || {
                    let mut any = false;
                    keys.for_each(|_, v| any |= v.has_baseline());
                    any
                }
            }
            NF::Pair(u, v) => u.has_baseline() || v.has_baseline(),
            NF::Tensor(list) => list.iter().any(|(l, r)| l.has_baseline() || r.has_baseline()),
        }
    }

    pub fn add_assign(&mut self, other: Self) {
        match (self, other) {
            (NF::Scalar(a), NF::Scalar(b)) => *a = a.add(&b),
            (this @ NF::Map { .. }, mut other @ NF::Map { .. }) => {
                if other.key_count() > this.key_count() {
                    std::mem::swap(this, &mut other);
                }
                let (NF::Map { keys, baseline }, NF::Map { keys: ok, baseline: ob }) = (this, other) else {
                    unreachable!()
                };
                for (k, v) in ok.into_entries() {
                    add_at(keys, &k, v);
                }
                if let Some(b) = ob {
                    add_baseline(baseline, *b);
                }
            }
            (NF::Pair(u, v), NF::Pair(x, y)) => {
                u.add_assign(*x);
                v.add_assign(*y);
            }
            (NF::Tensor(list), NF::Tensor(more)) => {
                if more.is_empty() {
                    return;
                }
                let mut all = std::mem::take(list);
                all.extend(more);
                *list = compact(all);
            }
            (a, b) => panic!("adding normal forms of different shapes: {a} and {b}"),
        }
    }

    pub fn scale(&mut self, r: &K) {
        if r.is_one() {
            return;
        }
        match self {
            NF::Scalar(a) => *a = a.mul(r),
            NF::Map { keys, baseline } => {
                keys.retain(|v| {
                    v.scale(r);
                    !v.is_zero()
                });
                if let Some(b) = baseline {
                    b.scale(r);
                    if b.is_zero() {
                        *baseline = None;
                    }
                }
            }
            NF::Pair(u, v) => {
                u.scale(r);
                v.scale(r);
            }
            NF::Tensor(list) => {
                for (l, _) in list.iter_mut() {
                    l.scale(r);
                }
                list.retain(|(l, _)| !l.is_zero());
            }
        }
    }

    pub fn scaled(mut self, r: &K) -> Self {
        self.scale(r);
        self
    }

    /// Value at `key` (`None` is the wildcard): baseline plus deviation.
    /// Returns `None` when the value is zero.
    pub fn lookup(&self, key: Option<&Value>) -> Option<Cow<'_, Self>> {
        let NF::Map { keys, baseline } = self else {
            panic!("lookup in a normal form that is not a map: {self}");
        };
        metrics::lookup();
        let dev = key.and_then(|k| keys.get(k));
        match (baseline.as_deref(), dev) {
            (None, None) => None,
            (Some(b), None) => Some(Cow::Borrowed(b)),
            (None, Some(d)) => Some(Cow::Borrowed(d)),
            (Some(b), Some(d)) => {
                let mut s = b.clone();
                s.add_assign(d.clone());
                (!s.is_zero()).then_some(Cow::Owned(s))
            }
        }
    }

    /// Coefficient at `key` in a free or compact free module.
    pub fn lookup_scalar(&self, key: Option<&Value>) -> K {
        match self.lookup(key) {
            None => K::zero(),
            Some(v) => v.as_scalar().expect("scalar leaves").clone(),
        }
    }

    pub fn weight(&self) -> K {
        match self {
            NF::Scalar(r) => r.clone(),
            NF::Map { keys, baseline } => {
                let mut w = baseline.as_ref().map_or_else(K::zero, |b| b.weight());
                keys.for_each(|_, v| w = w.add(&v.weight()));
                w
            }
            NF::Pair(u, v) => u.weight().add(&v.weight()),
            NF::Tensor(list) => list
                .iter()
                .fold(K::zero(), |acc, (l, r)| acc.add(&l.weight().mul(&r.weight()))),
        }
    }

    /// A total order on representations, used to group tensor summands.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        fn rank<K: Ring>(n: &NF<K>) -> u8 {
            match n {
                NF::Scalar(_) => 0,
                NF::Map { .. } => 1,
                NF::Pair(..) => 2,
                NF::Tensor(_) => 3,
            }
        }
        match (self, other) {
            (NF::Scalar(a), NF::Scalar(b)) => a.canonical_cmp(b),
            (NF::Map { keys: ka, baseline: ba }, NF::Map { keys: kb, baseline: bb }) => {
                let base = match (ba, bb) {
                    (None, None) => Ordering::Equal,
                    (None, Some(_)) => Ordering::Less,
                    (Some(_), None) => Ordering::Greater,
                    (Some(x), Some(y)) => x.canonical_cmp(y),
                };
                base.then_with(|| ka.cmp_by(kb, |x, y| x.canonical_cmp(y)))
            }
            (NF::Pair(a, b), NF::Pair(c, d)) => a.canonical_cmp(c).then_with(|| b.canonical_cmp(d)),
            (NF::Tensor(x), NF::Tensor(y)) => {
                for ((l1, r1), (l2, r2)) in x.iter().zip(y) {
                    let o = l1.canonical_cmp(l2).then_with(|| r1.canonical_cmp(r2));
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                x.len().cmp(&y.len())
            }
            (a, b) => rank(a).cmp(&rank(b)),
        }
    }

    /// The full basis expansion, with zero coefficients dropped. Tensor
    /// summands are distributed here, which can be quadratic.
    pub fn expand(&self) -> BTreeMap<Path, K> {
        let mut out = BTreeMap::new();
        self.expand_into(&mut Vec::new(), &K::one(), &mut out);
        out
    }

    fn expand_into(&self, prefix: &mut Path, coef: &K, out: &mut BTreeMap<Path, K>) {
        match self {
            NF::Scalar(r) => accumulate(out, prefix.clone(), coef.mul(r)),
            NF::Map { keys, baseline } => {
                if let Some(b) = baseline {
                    prefix.push(PathItem::Wild);
                    b.expand_into(prefix, coef, out);
                    prefix.pop();
                }
                keys.for_each(|k, v| {
                    prefix.push(PathItem::Key(k));
                    v.expand_into(prefix, coef, out);
                    prefix.pop();
                });
            }
            NF::Pair(u, v) => {
                prefix.push(PathItem::Fst);
                u.expand_into(prefix, coef, out);
                prefix.pop();
                prefix.push(PathItem::Snd);
                v.expand_into(prefix, coef, out);
                prefix.pop();
            }
            NF::Tensor(list) => {
                for (l, r) in list {
                    for (lp, lc) in l.expand() {
                        let n = prefix.len();
                        prefix.extend(lp);
                        r.expand_into(prefix, &coef.mul(&lc), out);
                        prefix.truncate(n);
                    }
                }
            }
        }
    }

    /// The basis expansion in path order. Wildcard entries (cofinite support)
    /// are an error unless `allow_baseline` is set.
    pub fn enumerate(&self, allow_baseline: bool) -> Result<Vec<(Path, K)>> {
        let entries: Vec<(Path, K)> = self.expand().into_iter().collect();
        if !allow_baseline && entries.iter().any(|(p, _)| p.contains(&PathItem::Wild)) {
            return Err(Error::InfiniteSupport);
        }
        Ok(entries)
    }

    /// Extensional equality: structural, falling back to basis expansions
    /// when tensor summand lists differ.
    pub fn equiv(&self, other: &Self) -> bool {
        self == other || (self.contains_tensor() || other.contains_tensor()) && self.expand() == other.expand()
    }

    fn contains_tensor(&self) -> bool {
        match self {
            NF::Scalar(_) => false,
            NF::Tensor(_) => true,
            NF::Pair(u, v) => u.contains_tensor() || v.contains_tensor(),
            NF::Map { keys, baseline } => {
                baseline.as_ref().is_some_and(|b| b.contains_tensor()) || {
                    let mut any = false;
                    keys.for_each(|_, v| any |= v.contains_tensor());
                    any
                }
            }
        }
    }

    /// The nesting of cp-isomorphisms the key trie uses, e.g.
    /// `cp×⁻¹{a ↦ cp₊⁻¹({p ↦ 2}, {3 ↦ 1})}`.
    pub fn layout(&self) -> String {
        match self {
            NF::Map { keys, baseline } => {
                let body = keys.render_layout(&|v: &NF<K>| v.to_string());
                match baseline {
                    Some(b) => format!("{body} + (* ↦ {b})"),
                    None => body,
                }
            }
            other => other.to_string(),
        }
    }

    /// Converts back to a term of `space`.
    ///
    /// Panics if the normal form does not inhabit `space`.
    pub fn readback(&self, space: &Space) -> Term<K> {
        let bad = || -> ! { panic!("normal form {self} does not inhabit {space}") };
        let sum = |ts: Vec<Term<K>>| Term::sum(space, ts).unwrap_or_else(|_| bad());
        match (self, space) {
            (NF::Scalar(r), Space::Scalar) => {
                if r.is_zero() {
                    Term::zero(Space::Scalar)
                } else if r.is_one() {
                    Term::one()
                } else {
                    Term::scalar(r.clone())
                }
            }
            (NF::Map { keys, baseline }, Space::Free(set) | Space::CompactFree(set)) => {
                let mut ts = Vec::with_capacity(keys.len() + 1);
                let scaled = |t: Term<K>, c: &K| if c.is_one() { t } else { t.scale(c.clone()) };
                if let Some(b) = baseline {
                    ts.push(scaled(Term::wild_one(set.clone()), b.as_scalar().unwrap_or_else(|| bad())));
                }
                keys.for_each(|k, v| {
                    let g = Term::inject(space, k).unwrap_or_else(|_| bad());
                    ts.push(scaled(g, v.as_scalar().unwrap_or_else(|| bad())));
                });
                sum(ts)
            }
            (NF::Map { keys, baseline }, Space::FinMap(set, u) | Space::CompactMap(set, u)) => {
                let mut ts = Vec::with_capacity(keys.len() + 1);
                if let Some(b) = baseline {
                    ts.push(Term::wild_maps_to(set.clone(), b.readback(u)));
                }
                keys.for_each(|k, v| {
                    ts.push(Term::maps_to(space, k, v.readback(u)).unwrap_or_else(|_| bad()));
                });
                sum(ts)
            }
            (NF::Pair(a, b), Space::Biproduct(u, v)) => {
                if self.is_zero() {
                    Term::zero(space.clone())
                } else {
                    Term::pair(a.readback(u), b.readback(v))
                }
            }
            (NF::Tensor(list), Space::Tensor(u, v)) => {
                sum(list.iter().map(|(l, r)| Term::tensor(l.readback(u), r.readback(v))).collect())
            }
            _ => bad(),
        }
    }
}

fn accumulate<K: Ring>(out: &mut BTreeMap<Path, K>, path: Path, c: K) {
    if c.is_zero() {
        return;
    }
    match out.entry(path) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = e.get().add(&c);
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

/// Adds `v` at key `k`, removing the entry if the sum is zero.
pub(crate) fn add_at<K: Ring>(keys: &mut KeyTrie<NF<K>>, k: &Value, v: NF<K>) {
    if v.is_zero() {
        return;
    }
    keys.alter(k, |old| match old {
        None => Some(v),
        Some(mut o) => {
            o.add_assign(v);
            (!o.is_zero()).then_some(o)
        }
    });
}

pub(crate) fn add_baseline<K: Ring>(baseline: &mut Option<Box<NF<K>>>, v: NF<K>) {
    if v.is_zero() {
        return;
    }
    match baseline {
        None => *baseline = Some(Box::new(v)),
        Some(b) => {
            b.add_assign(v);
            if b.is_zero() {
                *baseline = None;
            }
        }
    }
}

/// Compaction of a tensor summand list: drop zero factors, merge summands
/// with equal right factors, then those with equal left factors, and repeat
/// while that keeps shrinking the list.
pub(crate) fn compact<K: Ring>(mut pairs: Vec<(NF<K>, NF<K>)>) -> Vec<(NF<K>, NF<K>)> {
    pairs.retain(|(l, r)| !l.is_zero() && !r.is_zero());
    loop {
        let before = pairs.len();
        if before <= 1 {
            return pairs;
        }
        pairs = merge_pass(pairs);
        if pairs.len() == before {
            return pairs;
        }
    }
}

fn merge_pass<K: Ring>(mut pairs: Vec<(NF<K>, NF<K>)>) -> Vec<(NF<K>, NF<K>)> {
    pairs.sort_by(|a, b| a.1.canonical_cmp(&b.1));
    let mut by_right: Vec<(NF<K>, NF<K>)> = Vec::with_capacity(pairs.len());
    for (l, r) in pairs {
        match by_right.last_mut() {
            Some((pl, pr)) if pr.canonical_cmp(&r) == Ordering::Equal => pl.add_assign(l),
            _ => by_right.push((l, r)),
        }
    }
    by_right.retain(|(l, _)| !l.is_zero());
    by_right.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    let mut by_left: Vec<(NF<K>, NF<K>)> = Vec::with_capacity(by_right.len());
    for (l, r) in by_right {
        match by_left.last_mut() {
            Some((pl, pr)) if pl.canonical_cmp(&l) == Ordering::Equal => pr.add_assign(r),
            _ => by_left.push((l, r)),
        }
    }
    by_left.retain(|(_, r)| !r.is_zero());
    by_left
}

/// Simplifies a term to its normal form. Products are evaluated by
/// [`wco::multiply`]'s joint algorithm.
pub fn normalize<K: Ring>(t: &Term<K>) -> NormalForm<K> {
    let space = t.space();
    let mut acc = NF::zero(space);
    let mut pairs = Vec::new();
    for (c, g) in t.linear_combination() {
        if c.is_zero() {
            continue;
        }
        match g.as_gen().expect("generator") {
            Gen::One => acc.add_assign(NF::Scalar(c)),
            Gen::Inj(a) => {
                if let NF::Map { keys, .. } = &mut acc {
                    add_at(keys, a, NF::Scalar(c));
                }
            }
            Gen::WildOne => {
                if let NF::Map { baseline, .. } = &mut acc {
                    add_baseline(baseline, NF::Scalar(c));
                }
            }
            Gen::MapsTo(a, u) => {
                if let NF::Map { keys, .. } = &mut acc {
                    add_at(keys, a, normalize(u).scaled(&c));
                }
            }
            Gen::WildMapsTo(u) => {
                if let NF::Map { baseline, .. } = &mut acc {
                    add_baseline(baseline, normalize(u).scaled(&c));
                }
            }
            Gen::Pair(u, v) => {
                acc.add_assign(NF::Pair(Box::new(normalize(u)), Box::new(normalize(v))).scaled(&c));
            }
            Gen::TensorPair(u, v) => {
                let l = normalize(u).scaled(&c);
                if !l.is_zero() {
                    pairs.push((l, normalize(v)));
                }
            }
            Gen::Mul(..) => match wco::multiply_node(g).scaled(&c) {
                NF::Tensor(list) => pairs.extend(list),
                other => acc.add_assign(other),
            },
        }
    }
    if !pairs.is_empty() {
        acc = NF::Tensor(compact(pairs));
    }
    acc
}

/// `normalize(x) ≡ normalize(y)`.
pub fn equal<K: Ring>(x: &Term<K>, y: &Term<K>) -> Result<bool> {
    if x.space() != y.space() {
        return Err(Error::mismatch(x.space(), y.space()));
    }
    Ok(normalize(x).equiv(&normalize(y)))
}

impl<K: Ring> fmt::Display for NormalForm<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NF::Scalar(r) => write!(f, "{r}"),
            NF::Map { keys, baseline } => {
                f.write_str("{")?;
                let mut first = true;
                if let Some(b) = baseline {
                    write!(f, "* ↦ {b}")?;
                    first = false;
                }
                let mut res = Ok(());
                keys.for_each(|k, v| {
                    if res.is_ok() {
                        res = if first { write!(f, "{k} ↦ {v}") } else { write!(f, ", {k} ↦ {v}") };
                        first = false;
                    }
                });
                res?;
                f.write_str("}")
            }
            NF::Pair(u, v) => write!(f, "({u}, {v})"),
            NF::Tensor(list) => {
                f.write_str("[")?;
                for (i, (l, r)) in list.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    write!(f, "{l} ⊗ {r}")?;
                }
                f.write_str("]")
            }
        }
    }
}
