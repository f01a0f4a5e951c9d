//! Big-endian binary Patricia trie keyed by `i64`.
//!
//! Keys are stored with the sign bit flipped so that the unsigned bit order of
//! the stored key agrees with the signed order of the original; in-order
//! traversal therefore yields keys in ascending `i64` order.

use crate::metrics;

#[inline]
fn encode(k: i64) -> u64 {
    (k as u64) ^ (1 << 63)
}

#[inline]
fn decode(k: u64) -> i64 {
    (k ^ (1 << 63)) as i64
}

/// Clears the branching bit and everything below it.
#[inline]
fn mask(k: u64, m: u64) -> u64 {
    k & !(m | (m - 1))
}

#[inline]
fn is_left(k: u64, m: u64) -> bool {
    k & m == 0
}

#[inline]
fn branching_bit(p1: u64, p2: u64) -> u64 {
    let x = p1 ^ p2;
    1 << (63 - x.leading_zeros())
}

#[derive(Clone, Debug, PartialEq)]
enum Node<V> {
    Leaf { key: u64, value: V },
    Branch { prefix: u64, bit: u64, left: Box<Node<V>>, right: Box<Node<V>> },
}

impl<V> Node<V> {
    fn prefix_key(&self) -> u64 {
        match self {
            Node::Leaf { key, .. } => *key,
            Node::Branch { prefix, .. } => *prefix,
        }
    }
}

fn join<V>(k1: u64, t1: Box<Node<V>>, k2: u64, t2: Box<Node<V>>) -> Box<Node<V>> {
    let bit = branching_bit(k1, k2);
    let prefix = mask(k1, bit);
    if is_left(k1, bit) {
        Box::new(Node::Branch { prefix, bit, left: t1, right: t2 })
    } else {
        Box::new(Node::Branch { prefix, bit, left: t2, right: t1 })
    }
}

fn branch<V>(prefix: u64, bit: u64, l: Option<Box<Node<V>>>, r: Option<Box<Node<V>>>) -> Option<Box<Node<V>>> {
    match (l, r) {
        (None, r) => r,
        (l, None) => l,
        (Some(left), Some(right)) => Some(Box::new(Node::Branch { prefix, bit, left, right })),
    }
}

/// Finite map from `i64` keys.
#[derive(Clone, Debug, PartialEq)]
pub struct IntTrie<V> {
    root: Option<Box<Node<V>>>,
    len: usize,
}

impl<V> Default for IntTrie<V> {
    fn default() -> Self {
        IntTrie { root: None, len: 0 }
    }
}

impl<V> IntTrie<V> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, key: i64) -> Option<&V> {
        let k = encode(key);
        let mut node = self.root.as_deref()?;
        let mut steps = 1;
        let found = loop {
            match node {
                Node::Leaf { key, value } => break (*key == k).then_some(value),
                Node::Branch { prefix, bit, left, right } => {
                    if mask(k, *bit) != *prefix {
                        break None;
                    }
                    node = if is_left(k, *bit) { left } else { right };
                    steps += 1;
                }
            }
        };
        metrics::edges(steps);
        found
    }

    /// Inserts, updates or removes the entry at `key`: `f` receives the old
    /// value (if any) and returns the new one (`None` removes it).
    pub fn alter(&mut self, key: i64, f: impl FnOnce(Option<V>) -> Option<V>) {
        let k = encode(key);
        let mut f = Some(f);
        let mut delta = 0isize;
        let mut call = |old: Option<V>| {
            let had = old.is_some();
            let new = (f.take().expect("alter callback runs once"))(old);
            delta = new.is_some() as isize - had as isize;
            new
        };
        let root = self.root.take();
        self.root = Self::alter_node(root, k, &mut call);
        self.len = (self.len as isize + delta) as usize;
    }

    fn alter_node(
        node: Option<Box<Node<V>>>,
        k: u64,
        f: &mut dyn FnMut(Option<V>) -> Option<V>,
    ) -> Option<Box<Node<V>>> {
        metrics::edges(1);
        let Some(node) = node else {
            return f(None).map(|value| Box::new(Node::Leaf { key: k, value }));
        };
        match *node {
            Node::Leaf { key, value } if key == k => {
                f(Some(value)).map(|value| Box::new(Node::Leaf { key, value }))
            }
            Node::Branch { prefix, bit, left, right } if mask(k, bit) == prefix => {
                if is_left(k, bit) {
                    branch(prefix, bit, Self::alter_node(Some(left), k, f), Some(right))
                } else {
                    branch(prefix, bit, Some(left), Self::alter_node(Some(right), k, f))
                }
            }
            other => {
                let other = Box::new(other);
                match f(None) {
                    None => Some(other),
                    Some(value) => {
                        let p = other.prefix_key();
                        Some(join(k, Box::new(Node::Leaf { key: k, value }), p, other))
                    }
                }
            }
        }
    }

    /// Entries in ascending key order.
    pub fn iter(&self) -> Iter<'_, V> {
        Iter { stack: self.root.as_deref().into_iter().collect() }
    }

    pub fn for_each_mut(&mut self, f: &mut dyn FnMut(&mut V)) {
        fn go<V>(n: &mut Node<V>, f: &mut dyn FnMut(&mut V)) {
            metrics::edges(1);
            match n {
                Node::Leaf { value, .. } => f(value),
                Node::Branch { left, right, .. } => {
                    go(left, f);
                    go(right, f);
                }
            }
        }
        if let Some(r) = self.root.as_deref_mut() {
            go(r, f);
        }
    }

    /// Keeps the entries for which `f` returns true; `f` may also update them.
    pub fn retain(&mut self, f: &mut dyn FnMut(&mut V) -> bool) {
        #[allow(clippy::boxed_local)]
        fn go<V>(n: Box<Node<V>>, f: &mut dyn FnMut(&mut V) -> bool, removed: &mut usize) -> Option<Box<Node<V>>> {
            metrics::edges(1);
            match *n {
                Node::Leaf { key, mut value } => {
                    if f(&mut value) {
                        Some(Box::new(Node::Leaf { key, value }))
                    } else {
                        *removed += 1;
                        None
                    }
                }
                Node::Branch { prefix, bit, left, right } => {
                    let l = go(left, f, removed);
                    let r = go(right, f, removed);
                    branch(prefix, bit, l, r)
                }
            }
        }
        let mut removed = 0;
        if let Some(r) = self.root.take() {
            self.root = go(r, f, &mut removed);
        }
        self.len -= removed;
    }

    pub fn into_entries(self) -> Vec<(i64, V)> {
        fn go<V>(n: Node<V>, out: &mut Vec<(i64, V)>) {
            match n {
                Node::Leaf { key, value } => out.push((decode(key), value)),
                Node::Branch { left, right, .. } => {
                    go(*left, out);
                    go(*right, out);
                }
            }
        }
        let mut out = Vec::with_capacity(self.len);
        if let Some(r) = self.root {
            go(*r, &mut out);
        }
        out
    }
}

pub struct Iter<'a, V> {
    stack: Vec<&'a Node<V>>,
}

impl<'a, V> Iterator for Iter<'a, V> {
    type Item = (i64, &'a V);

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let n = self.stack.pop()?;
            metrics::edges(1);
            match n {
                Node::Leaf { key, value } => return Some((decode(*key), value)),
                Node::Branch { left, right, .. } => {
                    self.stack.push(right);
                    self.stack.push(left);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeMap;

    fn insert(t: &mut IntTrie<i32>, k: i64, v: i32) {
        t.alter(k, |old| Some(old.unwrap_or(0) + v));
    }

    #[test]
    fn negative_keys_sort_first() {
        let mut t = IntTrie::new();
        for k in [5, -1, 0, i64::MIN, i64::MAX, -7, 3] {
            insert(&mut t, k, 1);
        }
        let keys: Vec<i64> = t.iter().map(|(k, _)| k).collect();
        assert_eq!(keys, vec![i64::MIN, -7, -1, 0, 3, 5, i64::MAX]);
    }

    #[test]
    fn alter_removes() {
        let mut t = IntTrie::new();
        insert(&mut t, 1, 2);
        insert(&mut t, 2, 3);
        t.alter(1, |_| None);
        assert_eq!(t.len(), 1);
        assert_eq!(t.get(1), None);
        assert_eq!(t.get(2), Some(&3));
        t.alter(2, |_| None);
        assert!(t.is_empty());
        assert_eq!(t, IntTrie::new());
    }

    #[test]
    fn lookup_edges_bounded_by_key_width() {
        let mut t = IntTrie::new();
        for k in 0..10_000 {
            insert(&mut t, k * 7919, 1);
        }
        let (_, m) = metrics::measure(|| t.get(7919 * 5000));
        assert!(m.trie_edges <= 65, "{}", m.trie_edges);
    }

    proptest! {
        #[test]
        fn agrees_with_btreemap(ops in proptest::collection::vec((-50i64..50, -2i32..3), 0..200)) {
            let mut t = IntTrie::new();
            let mut m = BTreeMap::new();
            for (k, v) in ops {
                t.alter(k, |old| {
                    let n = old.unwrap_or(0) + v;
                    (n != 0).then_some(n)
                });
                let n = m.get(&k).copied().unwrap_or(0) + v;
                if n == 0 { m.remove(&k); } else { m.insert(k, n); }
            }
            let got: Vec<(i64, i32)> = t.iter().map(|(k, v)| (k, *v)).collect();
            let want: Vec<(i64, i32)> = m.iter().map(|(k, v)| (*k, *v)).collect();
            prop_assert_eq!(got, want.clone());
            prop_assert_eq!(t.len(), want.len());
            for (k, v) in &want {
                prop_assert_eq!(t.get(*k), Some(v));
            }
        }

        #[test]
        fn shape_is_canonical(mut keys in proptest::collection::btree_set(-1000i64..1000, 0..40)) {
            let mut a = IntTrie::new();
            for k in &keys { a.alter(*k, |_| Some(())); }
            let mut b = IntTrie::new();
            let extra: Vec<i64> = keys.iter().map(|k| k + 5000).collect();
            for k in keys.iter().rev().chain(extra.iter()) { b.alter(*k, |_| Some(())); }
            for k in &extra { b.alter(*k, |_| None); }
            prop_assert_eq!(&a, &b);
            keys.clear();
        }
    }
}
