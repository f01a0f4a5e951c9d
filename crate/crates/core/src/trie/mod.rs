//! Generic tries keyed by [`Value`]s.
//!
//! A [`KeyTrie`] picks its layout from the shape of the keys, following the
//! copower isomorphisms:
//!
//! * `1 ⇒ U ≅ U`: a single slot;
//! * `(A + B) ⇒ U ≅ (A ⇒ U) ⊕ (B ⇒ U)`: a pair of tries;
//! * `(A × B) ⇒ U ≅ A ⇒ B ⇒ U`: a trie over `A` whose slots are tries over `B`;
//! * integers use a Patricia trie, strings a radix trie, booleans two slots.
//!
//! Lookup therefore costs work linear in the size of the key.

mod patricia;
mod radix;

pub use patricia::IntTrie;
pub use radix::StrTrie;

use std::cmp::Ordering;

use crate::metrics;
use crate::value::Value;

#[derive(Clone, Debug, PartialEq)]
enum Slot<V> {
    Leaf(V),
    Inner(Box<Node<V>>),
}

impl<V> Slot<V> {
    fn leaf(&self) -> Option<&V> {
        match self {
            Slot::Leaf(v) => Some(v),
            Slot::Inner(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Node<V> {
    Empty,
    Unit(Box<Slot<V>>),
    Bool(Option<Box<Slot<V>>>, Option<Box<Slot<V>>>),
    Int(IntTrie<Slot<V>>),
    Str(StrTrie<Slot<V>>),
    Sum(Box<Node<V>>, Box<Node<V>>),
    /// Outer node over the first component; every slot is `Slot::Inner`.
    Prod(Box<Node<V>>),
}

type SlotFn<'a, V> = &'a mut dyn FnMut(Option<Slot<V>>) -> Option<Slot<V>>;

impl<V> Node<V> {
    fn for_key(key: &Value) -> Self {
        match key {
            Value::Unit => Node::Empty,
            Value::Bool(_) => Node::Bool(None, None),
            Value::Int(_) => Node::Int(IntTrie::new()),
            Value::Str(_) => Node::Str(StrTrie::new()),
            Value::Left(_) | Value::Right(_) => Node::Sum(Box::new(Node::Empty), Box::new(Node::Empty)),
            Value::Pair(..) => Node::Prod(Box::new(Node::Empty)),
        }
    }

    fn is_empty(&self) -> bool {
        match self {
            Node::Empty => true,
            Node::Unit(_) => false,
            Node::Bool(f, t) => f.is_none() && t.is_none(),
            Node::Int(t) => t.is_empty(),
            Node::Str(t) => t.is_empty(),
            Node::Sum(l, r) => l.is_empty() && r.is_empty(),
            Node::Prod(o) => o.is_empty(),
        }
    }

    fn get_slot(&self, key: &Value) -> Option<&Slot<V>> {
        match (self, key) {
            (Node::Unit(s), Value::Unit) => {
                metrics::edges(1);
                Some(s)
            }
            (Node::Bool(f, t), Value::Bool(b)) => {
                metrics::edges(1);
                if *b { t.as_deref() } else { f.as_deref() }
            }
            (Node::Int(t), Value::Int(n)) => t.get(*n),
            (Node::Str(t), Value::Str(s)) => t.get(s),
            (Node::Sum(l, _), Value::Left(x)) => {
                metrics::edges(1);
                l.get_slot(x)
            }
            (Node::Sum(_, r), Value::Right(y)) => {
                metrics::edges(1);
                r.get_slot(y)
            }
            (Node::Prod(outer), Value::Pair(a, b)) => match outer.get_slot(a)? {
                Slot::Inner(inner) => inner.get_slot(b),
                Slot::Leaf(_) => None,
            },
            _ => None,
        }
    }

    fn alter_slot(&mut self, key: &Value, f: SlotFn<'_, V>) {
        if matches!(self, Node::Empty) {
            *self = Node::for_key(key);
        }
        match (&mut *self, key) {
            (Node::Empty, Value::Unit) => {
                metrics::edges(1);
                if let Some(s) = f(None) {
                    *self = Node::Unit(Box::new(s));
                }
            }
            (Node::Unit(_), Value::Unit) => {
                metrics::edges(1);
                let Node::Unit(old) = std::mem::replace(self, Node::Empty) else { unreachable!() };
                if let Some(s) = f(Some(*old)) {
                    *self = Node::Unit(Box::new(s));
                }
            }
            (Node::Bool(fs, ts), Value::Bool(b)) => {
                metrics::edges(1);
                let cell = if *b { ts } else { fs };
                *cell = f(cell.take().map(|b| *b)).map(Box::new);
            }
            (Node::Int(t), Value::Int(n)) => t.alter(*n, f),
            (Node::Str(t), Value::Str(s)) => t.alter(s, f),
            (Node::Sum(l, _), Value::Left(x)) => {
                metrics::edges(1);
                l.alter_slot(x, f);
            }
            (Node::Sum(_, r), Value::Right(y)) => {
                metrics::edges(1);
                r.alter_slot(y, f);
            }
            (Node::Prod(outer), Value::Pair(a, b)) => {
                outer.alter_slot(a, &mut |slot| {
                    let mut inner = match slot {
                        Some(Slot::Inner(n)) => *n,
                        _ => Node::Empty,
                    };
                    inner.alter_slot(b, f);
                    (!inner.is_empty()).then(|| Slot::Inner(Box::new(inner)))
                });
            }
            (node, key) => panic!("key {key} does not match trie layout {}", node.kind()),
        }
        if self.is_empty() {
            *self = Node::Empty;
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Node::Empty => "empty",
            Node::Unit(_) => "unit",
            Node::Bool(..) => "bool",
            Node::Int(_) => "int",
            Node::Str(_) => "str",
            Node::Sum(..) => "sum",
            Node::Prod(_) => "product",
        }
    }

    fn for_each_slot<'a>(&'a self, f: &mut dyn FnMut(Value, &'a Slot<V>)) {
        match self {
            Node::Empty => {}
            Node::Unit(s) => f(Value::Unit, s),
            Node::Bool(fs, ts) => {
                if let Some(s) = fs {
                    f(Value::Bool(false), s);
                }
                if let Some(s) = ts {
                    f(Value::Bool(true), s);
                }
            }
            Node::Int(t) => t.iter().for_each(|(k, s)| f(Value::Int(k), s)),
            Node::Str(t) => t.iter().for_each(|(k, s)| f(Value::Str(k), s)),
            Node::Sum(l, r) => {
                l.for_each_slot(&mut |k, s| f(Value::left(k), s));
                r.for_each_slot(&mut |k, s| f(Value::right(k), s));
            }
            Node::Prod(outer) => outer.for_each_slot(&mut |a, s| {
                if let Slot::Inner(inner) = s {
                    inner.for_each_slot(&mut |b, s2| f(Value::pair(a.clone(), b), s2));
                }
            }),
        }
    }

    fn for_each_slot_mut(&mut self, f: &mut dyn FnMut(&mut Slot<V>)) {
        match self {
            Node::Empty => {}
            Node::Unit(s) => f(s),
            Node::Bool(fs, ts) => {
                fs.iter_mut().chain(ts.iter_mut()).for_each(|s| f(s));
            }
            Node::Int(t) => t.for_each_mut(f),
            Node::Str(t) => t.for_each_mut(f),
            Node::Sum(l, r) => {
                l.for_each_slot_mut(f);
                r.for_each_slot_mut(f);
            }
            Node::Prod(outer) => outer.for_each_slot_mut(&mut |s| {
                if let Slot::Inner(inner) = s {
                    inner.for_each_slot_mut(f);
                }
            }),
        }
    }

    /// Keeps leaves for which `f` holds; returns the number removed.
    fn retain(&mut self, f: &mut dyn FnMut(&mut V) -> bool) -> usize {
        let mut removed = 0;
        {
            let mut keep = |s: &mut Slot<V>| match s {
                Slot::Leaf(v) => {
                    let k = f(v);
                    if !k {
                        removed += 1;
                    }
                    k
                }
                Slot::Inner(inner) => {
                    removed += inner.retain(f);
                    !inner.is_empty()
                }
            };
            match self {
                Node::Empty => {}
                Node::Unit(s) => {
                    if !keep(s) {
                        *self = Node::Empty;
                    }
                }
                Node::Bool(fs, ts) => {
                    for cell in [fs, ts] {
                        if let Some(s) = cell {
                            if !keep(s) {
                                *cell = None;
                            }
                        }
                    }
                }
                Node::Int(t) => t.retain(&mut keep),
                Node::Str(t) => t.retain(&mut keep),
                Node::Sum(l, r) => {
                    removed += l.retain(f);
                    removed += r.retain(f);
                }
                Node::Prod(outer) => {
                    outer.retain_slots(&mut keep);
                }
            }
        }
        if self.is_empty() {
            *self = Node::Empty;
        }
        removed
    }

    /// Like `retain` but at slot granularity (used for the outer node of a product).
    fn retain_slots(&mut self, keep: &mut dyn FnMut(&mut Slot<V>) -> bool) {
        match self {
            Node::Empty => {}
            Node::Unit(s) => {
                if !keep(s) {
                    *self = Node::Empty;
                }
            }
            Node::Bool(fs, ts) => {
                for cell in [fs, ts] {
                    if let Some(s) = cell {
                        if !keep(s) {
                            *cell = None;
                        }
                    }
                }
            }
            Node::Int(t) => t.retain(keep),
            Node::Str(t) => t.retain(keep),
            Node::Sum(l, r) => {
                l.retain_slots(keep);
                r.retain_slots(keep);
            }
            Node::Prod(outer) => outer.retain_slots(&mut |s| {
                if let Slot::Inner(inner) = s {
                    inner.retain_slots(keep);
                    !inner.is_empty()
                } else {
                    keep(s)
                }
            }),
        }
        if self.is_empty() {
            *self = Node::Empty;
        }
    }

    fn into_slots(self, out: &mut Vec<(Value, Slot<V>)>) {
        match self {
            Node::Empty => {}
            Node::Unit(s) => out.push((Value::Unit, *s)),
            Node::Bool(fs, ts) => {
                if let Some(s) = fs {
                    out.push((Value::Bool(false), *s));
                }
                if let Some(s) = ts {
                    out.push((Value::Bool(true), *s));
                }
            }
            Node::Int(t) => out.extend(t.into_entries().into_iter().map(|(k, s)| (Value::Int(k), s))),
            Node::Str(t) => out.extend(t.into_entries().into_iter().map(|(k, s)| (Value::Str(k), s))),
            Node::Sum(l, r) => {
                let mut tmp = Vec::new();
                l.into_slots(&mut tmp);
                out.extend(tmp.drain(..).map(|(k, s)| (Value::left(k), s)));
                r.into_slots(&mut tmp);
                out.extend(tmp.into_iter().map(|(k, s)| (Value::right(k), s)));
            }
            Node::Prod(outer) => {
                let mut tmp = Vec::new();
                outer.into_slots(&mut tmp);
                for (a, s) in tmp {
                    if let Slot::Inner(inner) = s {
                        let mut sub = Vec::new();
                        inner.into_slots(&mut sub);
                        out.extend(sub.into_iter().map(|(b, s2)| (Value::pair(a.clone(), b), s2)));
                    }
                }
            }
        }
    }
}

/// A finite map from [`Value`] keys, laid out according to the key's shape.
///
/// The shape is canonical: two tries with the same entries are structurally
/// equal regardless of insertion order.
#[derive(Clone, Debug, PartialEq)]
pub struct KeyTrie<V> {
    root: Node<V>,
    len: usize,
}

impl<V> Default for KeyTrie<V> {
    fn default() -> Self {
        KeyTrie { root: Node::Empty, len: 0 }
    }
}

impl<V> KeyTrie<V> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, key: &Value) -> Option<&V> {
        self.root.get_slot(key).and_then(Slot::leaf)
    }

    /// Inserts, updates or removes the entry at `key`.
    ///
    /// Panics if `key` has a different shape than the keys already stored.
    pub fn alter(&mut self, key: &Value, f: impl FnOnce(Option<V>) -> Option<V>) {
        let mut f = Some(f);
        let mut delta = 0isize;
        self.root.alter_slot(key, &mut |slot| {
            let old = match slot {
                Some(Slot::Leaf(v)) => Some(v),
                _ => None,
            };
            let had = old.is_some();
            let new = (f.take().expect("alter callback runs once"))(old);
            delta = new.is_some() as isize - had as isize;
            new.map(Slot::Leaf)
        });
        self.len = (self.len as isize + delta) as usize;
    }

    pub fn insert(&mut self, key: &Value, v: V) {
        self.alter(key, |_| Some(v));
    }

    /// Calls `f` on every entry in ascending key order.
    pub fn for_each<'a>(&'a self, mut f: impl FnMut(Value, &'a V)) {
        self.root.for_each_slot(&mut |k, s| {
            if let Slot::Leaf(v) = s {
                f(k, v);
            }
        });
    }

    /// Entries in ascending key order.
    pub fn entries(&self) -> Vec<(Value, &V)> {
        let mut out = Vec::with_capacity(self.len);
        self.for_each(|k, v| out.push((k, v)));
        out
    }

    pub fn keys(&self) -> Vec<Value> {
        let mut out = Vec::with_capacity(self.len);
        self.for_each(|k, _| out.push(k));
        out
    }

    pub fn for_each_mut(&mut self, mut f: impl FnMut(&mut V)) {
        self.root.for_each_slot_mut(&mut |s| {
            if let Slot::Leaf(v) = s {
                f(v);
            }
        });
    }

    pub fn retain(&mut self, mut f: impl FnMut(&mut V) -> bool) {
        let removed = self.root.retain(&mut f);
        self.len -= removed;
    }

    pub fn into_entries(self) -> Vec<(Value, V)> {
        let mut slots = Vec::with_capacity(self.len);
        self.root.into_slots(&mut slots);
        slots
            .into_iter()
            .filter_map(|(k, s)| match s {
                Slot::Leaf(v) => Some((k, v)),
                Slot::Inner(_) => None,
            })
            .collect()
    }

    /// Lexicographic comparison of entry sequences.
    pub fn cmp_by(&self, other: &Self, mut cmp: impl FnMut(&V, &V) -> Ordering) -> Ordering {
        let a = self.entries();
        let b = other.entries();
        for ((ka, va), (kb, vb)) in a.iter().zip(&b) {
            let o = ka.cmp(kb).then_with(|| cmp(va, vb));
            if o != Ordering::Equal {
                return o;
            }
        }
        a.len().cmp(&b.len())
    }

    /// Renders the nesting the trie actually uses, e.g.
    /// `cp×⁻¹{a ↦ cp₊⁻¹({p ↦ 2}, {3 ↦ 1})}`.
    pub fn render_layout(&self, leaf: &dyn Fn(&V) -> String) -> String {
        fn node<V>(n: &Node<V>, leaf: &dyn Fn(&V) -> String) -> String {
            let slot = |s: &Slot<V>| match s {
                Slot::Leaf(v) => leaf(v),
                Slot::Inner(inner) => node(inner, leaf),
            };
            match n {
                Node::Empty => "0".to_owned(),
                Node::Unit(s) => format!("cp₁⁻¹({})", slot(s)),
                Node::Sum(l, r) => format!("cp₊⁻¹({}, {})", node(l, leaf), node(r, leaf)),
                Node::Prod(o) => format!("cp×⁻¹{}", node(o, leaf)),
                flat => {
                    let mut parts = Vec::new();
                    flat.for_each_slot(&mut |k, s| parts.push(format!("{k} ↦ {}", slot(s))));
                    format!("{{{}}}", parts.join(", "))
                }
            }
        }
        node(&self.root, leaf)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeMap;

    fn key_strategy() -> impl Strategy<Value = Value> {
        // (Str × (Str + Int)) keys, like the worked simplification example.
        ("[ab]{0,2}", prop_oneof![
            "[pq]{1,2}".prop_map(|s| Value::left(Value::Str(s))),
            (-3i64..4).prop_map(|n| Value::right(Value::Int(n))),
        ])
            .prop_map(|(a, b)| Value::pair(Value::Str(a), b))
    }

    #[test]
    fn layout_of_product_of_sum() {
        let mut t = KeyTrie::new();
        let k = |a: &str, b: Value| Value::pair(Value::str(a), b);
        for (key, v) in [
            (k("a", Value::left("p".into())), 1),
            (k("b", Value::right(4.into())), 1),
            (k("a", Value::right(3.into())), 1),
            (k("a", Value::left("p".into())), 1),
        ] {
            t.alter(&key, |old| Some(old.unwrap_or(0) + v));
        }
        assert_eq!(
            t.render_layout(&|v| v.to_string()),
            "cp×⁻¹{a ↦ cp₊⁻¹({p ↦ 2}, {3 ↦ 1}), b ↦ cp₊⁻¹(0, {4 ↦ 1})}"
        );
        assert_eq!(t.len(), 3);
    }

    #[test]
    fn unit_and_bool_keys() {
        let mut t = KeyTrie::new();
        t.insert(&Value::Unit, 5);
        assert_eq!(t.get(&Value::Unit), Some(&5));
        t.alter(&Value::Unit, |_| None);
        assert!(t.is_empty());
        assert_eq!(t, KeyTrie::new());

        let mut b = KeyTrie::new();
        b.insert(&Value::Bool(true), 'x');
        b.insert(&Value::Bool(false), 'y');
        assert_eq!(b.keys(), vec![Value::Bool(false), Value::Bool(true)]);
    }

    proptest! {
        #[test]
        fn agrees_with_btreemap(ops in proptest::collection::vec((key_strategy(), -2i32..3), 0..80)) {
            let mut t = KeyTrie::new();
            let mut m: BTreeMap<Value, i32> = BTreeMap::new();
            for (k, v) in ops {
                t.alter(&k, |old| {
                    let n = old.unwrap_or(0) + v;
                    (n != 0).then_some(n)
                });
                let n = m.get(&k).copied().unwrap_or(0) + v;
                if n == 0 { m.remove(&k); } else { m.insert(k.clone(), n); }
            }
            let got: Vec<(Value, i32)> = t.entries().into_iter().map(|(k, v)| (k, *v)).collect();
            let want: Vec<(Value, i32)> = m.clone().into_iter().collect();
            prop_assert_eq!(&got, &want);
            prop_assert_eq!(t.len(), want.len());
            for (k, v) in &want {
                prop_assert_eq!(t.get(k), Some(v));
            }
            let mut fresh = KeyTrie::new();
            for (k, v) in &want { fresh.insert(k, *v); }
            prop_assert_eq!(&fresh, &t);
            prop_assert_eq!(t.clone().into_entries(), want);
        }

        #[test]
        fn retain_matches_filter(entries in proptest::collection::btree_map(key_strategy(), -3i32..4, 0..40)) {
            let mut t = KeyTrie::new();
            for (k, v) in &entries { t.insert(k, *v); }
            t.retain(|v| *v > 0);
            let want: Vec<(Value, i32)> = entries.into_iter().filter(|(_, v)| *v > 0).collect();
            let mut fresh = KeyTrie::new();
            for (k, v) in &want { fresh.insert(k, *v); }
            prop_assert_eq!(t.len(), want.len());
            prop_assert_eq!(&t, &fresh);
        }
    }
}
