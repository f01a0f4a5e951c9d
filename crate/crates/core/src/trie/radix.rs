//! Path-compressed radix trie keyed by byte strings.
//!
//! Children are kept sorted by the first byte of their edge label, so a
//! depth-first walk visits keys in bytewise lexicographic order, which for
//! UTF-8 is also the order of `str`.

use crate::metrics;

#[derive(Clone, Debug, PartialEq)]
struct Node<V> {
    value: Option<V>,
    children: Vec<Edge<V>>,
}

#[derive(Clone, Debug, PartialEq)]
struct Edge<V> {
    label: Vec<u8>,
    node: Node<V>,
}

impl<V> Node<V> {
    fn empty() -> Self {
        Node { value: None, children: Vec::new() }
    }

    fn find(&self, byte: u8) -> Result<usize, usize> {
        self.children.binary_search_by_key(&byte, |e| e.label[0])
    }

    /// Restores compression after a removal below `children[i]`.
    fn tidy_child(&mut self, i: usize) {
        let child = &mut self.children[i].node;
        if child.value.is_some() {
            return;
        }
        match child.children.len() {
            0 => {
                self.children.remove(i);
            }
            1 => {
                let grand = child.children.pop().expect("one child");
                let edge = &mut self.children[i];
                edge.label.extend_from_slice(&grand.label);
                edge.node = grand.node;
            }
            _ => {}
        }
    }
}

fn common_prefix(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Finite map from string keys.
#[derive(Clone, Debug, PartialEq)]
pub struct StrTrie<V> {
    root: Box<Node<V>>,
    len: usize,
}

impl<V> Default for StrTrie<V> {
    fn default() -> Self {
        StrTrie { root: Box::new(Node::empty()), len: 0 }
    }
}

impl<V> StrTrie<V> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, key: &str) -> Option<&V> {
        let mut rest = key.as_bytes();
        let mut node: &Node<V> = &self.root;
        let mut steps = 0;
        let found = loop {
            if rest.is_empty() {
                break node.value.as_ref();
            }
            let Ok(i) = node.find(rest[0]) else { break None };
            let edge = &node.children[i];
            steps += 1;
            if !rest.starts_with(&edge.label) {
                break None;
            }
            rest = &rest[edge.label.len()..];
            node = &edge.node;
        };
        metrics::edges(steps.max(1));
        found
    }

    /// Inserts, updates or removes the entry at `key`, as for
    /// [`IntTrie::alter`](super::IntTrie::alter).
    pub fn alter(&mut self, key: &str, f: impl FnOnce(Option<V>) -> Option<V>) {
        let mut f = Some(f);
        let mut delta = 0isize;
        let mut call = |old: Option<V>| {
            let had = old.is_some();
            let new = (f.take().expect("alter callback runs once"))(old);
            delta = new.is_some() as isize - had as isize;
            new
        };
        Self::alter_node(&mut self.root, key.as_bytes(), &mut call);
        self.len = (self.len as isize + delta) as usize;
    }

    fn alter_node(node: &mut Node<V>, rest: &[u8], f: &mut dyn FnMut(Option<V>) -> Option<V>) {
        metrics::edges(1);
        if rest.is_empty() {
            let old = node.value.take();
            node.value = f(old);
            return;
        }
        match node.find(rest[0]) {
            Err(pos) => {
                if let Some(v) = f(None) {
                    let leaf = Node { value: Some(v), children: Vec::new() };
                    node.children.insert(pos, Edge { label: rest.to_vec(), node: leaf });
                }
            }
            Ok(i) => {
                let common = common_prefix(&node.children[i].label, rest);
                if common == node.children[i].label.len() {
                    Self::alter_node(&mut node.children[i].node, &rest[common..], f);
                    node.tidy_child(i);
                    return;
                }
                // The key diverges inside this edge: split it if something is inserted.
                let Some(v) = f(None) else { return };
                let edge = &mut node.children[i];
                let tail_label = edge.label.split_off(common);
                let old = std::mem::replace(&mut edge.node, Node::empty());
                let mut mid = Node::empty();
                let tail = Edge { label: tail_label, node: old };
                if common == rest.len() {
                    mid.value = Some(v);
                    mid.children.push(tail);
                } else {
                    let leaf = Edge {
                        label: rest[common..].to_vec(),
                        node: Node { value: Some(v), children: Vec::new() },
                    };
                    if leaf.label[0] < tail.label[0] {
                        mid.children.push(leaf);
                        mid.children.push(tail);
                    } else {
                        mid.children.push(tail);
                        mid.children.push(leaf);
                    }
                }
                edge.node = mid;
            }
        }
    }

    /// Entries in ascending key order.
    pub fn iter(&self) -> impl Iterator<Item = (String, &V)> + '_ {
        let mut out = Vec::with_capacity(self.len);
        let mut prefix = Vec::new();
        Self::collect(&self.root, &mut prefix, &mut out);
        out.into_iter()
    }

    fn collect<'a>(node: &'a Node<V>, prefix: &mut Vec<u8>, out: &mut Vec<(String, &'a V)>) {
        if let Some(v) = &node.value {
            out.push((String::from_utf8(prefix.clone()).expect("keys are UTF-8"), v));
        }
        for e in &node.children {
            metrics::edges(1);
            let n = prefix.len();
            prefix.extend_from_slice(&e.label);
            Self::collect(&e.node, prefix, out);
            prefix.truncate(n);
        }
    }

    pub fn for_each_mut(&mut self, f: &mut dyn FnMut(&mut V)) {
        fn go<V>(n: &mut Node<V>, f: &mut dyn FnMut(&mut V)) {
            if let Some(v) = n.value.as_mut() {
                f(v);
            }
            for e in &mut n.children {
                metrics::edges(1);
                go(&mut e.node, f);
            }
        }
        go(&mut self.root, f);
    }

    pub fn retain(&mut self, f: &mut dyn FnMut(&mut V) -> bool) {
        fn go<V>(n: &mut Node<V>, f: &mut dyn FnMut(&mut V) -> bool, removed: &mut usize) {
            if let Some(v) = n.value.as_mut() {
                if !f(v) {
                    n.value = None;
                    *removed += 1;
                }
            }
            let mut i = 0;
            while i < n.children.len() {
                metrics::edges(1);
                go(&mut n.children[i].node, f, removed);
                let before = n.children.len();
                n.tidy_child(i);
                if n.children.len() == before {
                    i += 1;
                }
            }
        }
        let mut removed = 0;
        go(&mut self.root, f, &mut removed);
        self.len -= removed;
    }

    pub fn into_entries(self) -> Vec<(String, V)> {
        fn go<V>(n: Node<V>, prefix: &mut Vec<u8>, out: &mut Vec<(String, V)>) {
            if let Some(v) = n.value {
                out.push((String::from_utf8(prefix.clone()).expect("keys are UTF-8"), v));
            }
            for e in n.children {
                let len = prefix.len();
                prefix.extend_from_slice(&e.label);
                go(e.node, prefix, out);
                prefix.truncate(len);
            }
        }
        let mut out = Vec::with_capacity(self.len);
        go(*self.root, &mut Vec::new(), &mut out);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeMap;

    #[test]
    fn prefixes_and_splits() {
        let mut t = StrTrie::new();
        for k in ["abc", "ab", "abd", "b", "", "abcde"] {
            t.alter(k, |_| Some(k.len()));
        }
        let keys: Vec<String> = t.iter().map(|(k, _)| k).collect();
        assert_eq!(keys, vec!["", "ab", "abc", "abcde", "abd", "b"]);
        assert_eq!(t.get("abc"), Some(&3));
        assert_eq!(t.get("a"), None);
        assert_eq!(t.get("abcd"), None);
        t.alter("abc", |_| None);
        assert_eq!(t.get("abcde"), Some(&5));
        assert_eq!(t.len(), 5);
    }

    #[test]
    fn unicode_keys_round_trip() {
        let mut t = StrTrie::new();
        for k in ["é", "e", "ë", "日本", "日"] {
            t.alter(k, |_| Some(()));
        }
        let mut want = vec!["é", "e", "ë", "日本", "日"];
        want.sort();
        let keys: Vec<String> = t.iter().map(|(k, _)| k).collect();
        assert_eq!(keys, want);
    }

    proptest! {
        #[test]
        fn agrees_with_btreemap(ops in proptest::collection::vec(("[ab]{0,4}", -2i32..3), 0..150)) {
            let mut t = StrTrie::new();
            let mut m: BTreeMap<String, i32> = BTreeMap::new();
            for (k, v) in ops {
                t.alter(&k, |old| {
                    let n = old.unwrap_or(0) + v;
                    (n != 0).then_some(n)
                });
                let n = m.get(&k).copied().unwrap_or(0) + v;
                if n == 0 { m.remove(&k); } else { m.insert(k.clone(), n); }
            }
            let got: Vec<(String, i32)> = t.iter().map(|(k, v)| (k, *v)).collect();
            let want: Vec<(String, i32)> = m.clone().into_iter().collect();
            prop_assert_eq!(&got, &want);
            prop_assert_eq!(t.len(), want.len());
            // Same key set built in sorted order gives the same shape.
            let mut fresh = StrTrie::new();
            for (k, v) in &want { fresh.alter(k, |_| Some(*v)); }
            prop_assert_eq!(&fresh, &t);
        }
    }
}
