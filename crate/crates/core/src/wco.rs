//! Products of normal forms.
//!
//! Tensors of (compact) free modules are first turned into nested compact
//! maps via `F*[A] ⊗ U ≅ A ⇒* U`. The product of n nested maps is then taken
//! one attribute level at a time: one factor enumerates its keys and every
//! other factor is probed by lookup, with zero lookups pruned before any work
//! happens below them. The factor to enumerate is the one with the fewest
//! components among those without a baseline, since a factor with a baseline
//! matches every key and cannot bound the output on its own. Only when every
//! factor has a baseline is the smallest one split into its explicit keys and
//! its baseline.
//!
//! [`naive_multiply`] is an independent oracle that distributes everything.

use std::borrow::Cow;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::metrics::{self, EnumeratorChoice};
use crate::normal::{add_at, add_baseline, compact, normalize, NormalForm, Path, PathItem};
use crate::ring::Ring;
use crate::space::Space;
use crate::term::{Gen, Term};
use crate::trie::KeyTrie;
use crate::value::PrimSet;

use NormalForm as NF;

/// Normal form of the joint product of `factors`, which must share a space.
pub fn multiply<K: Ring>(factors: &[Term<K>]) -> Result<NormalForm<K>> {
    let (first, rest) = factors.split_first().ok_or_else(|| Error::query("empty product"))?;
    if let Some(f) = rest.iter().find(|f| f.space() != first.space()) {
        return Err(Error::mismatch(first.space(), f.space()));
    }
    let nfs: Vec<NF<K>> = factors.iter().map(normalize).collect();
    Ok(multiply_normal(&nfs, first.space()))
}

/// Joint product of normal forms of `space`.
pub fn multiply_normal<K: Ring>(factors: &[NF<K>], space: &Space) -> NF<K> {
    if factors.len() == 1 {
        return factors[0].clone();
    }
    if !space.contains_tensor() {
        let refs: Vec<&NF<K>> = factors.iter().collect();
        return mul_level(&refs, space, 0);
    }
    let nested_space = nested(space);
    let nested_factors: Vec<NF<K>> = factors.iter().map(|f| to_nested(f, space)).collect();
    let refs: Vec<&NF<K>> = nested_factors.iter().collect();
    from_nested(&mul_level(&refs, &nested_space, 0), space)
}

/// Evaluates a `Mul` generator, gathering the whole chain of products so
/// that they are scheduled jointly.
pub(crate) fn multiply_node<K: Ring>(t: &Term<K>) -> NF<K> {
    let mut factors = Vec::new();
    let mut stack = vec![t];
    while let Some(x) = stack.pop() {
        match x.as_gen() {
            Some(Gen::Mul(a, b)) => {
                stack.push(b);
                stack.push(a);
            }
            _ => factors.push(normalize(x)),
        }
    }
    multiply_normal(&factors, t.space())
}

/// The space of nested maps a space is converted to before multiplying.
pub fn nested(space: &Space) -> Space {
    match space {
        Space::Scalar | Space::Free(_) | Space::CompactFree(_) => space.clone(),
        Space::FinMap(a, u) => Space::fin_map(a.clone(), nested(u)),
        Space::CompactMap(a, u) => Space::compact_map(a.clone(), nested(u)),
        Space::Biproduct(u, v) => Space::biproduct(nested(u), nested(v)),
        Space::Tensor(u, v) => nested_tensor(u, v),
    }
}

fn nested_tensor(u: &Space, v: &Space) -> Space {
    match u {
        Space::Scalar => nested(v),
        Space::Free(a) => Space::fin_map(a.clone(), nested(v)),
        Space::CompactFree(a) => Space::compact_map(a.clone(), nested(v)),
        Space::FinMap(a, w) => Space::fin_map(a.clone(), nested_tensor(w, v)),
        Space::CompactMap(a, w) => Space::compact_map(a.clone(), nested_tensor(w, v)),
        Space::Tensor(u1, u2) => nested_tensor(u1, &Space::tensor((**u2).clone(), v.clone())),
        Space::Biproduct(u1, u2) => Space::biproduct(nested_tensor(u1, v), nested_tensor(u2, v)),
    }
}

fn map_leaves<K: Ring>(nf: &NF<K>, f: &dyn Fn(&NF<K>) -> NF<K>) -> NF<K> {
    let NF::Map { keys, baseline } = nf else { panic!("expected a map, found {nf}") };
    let mut out = KeyTrie::new();
    keys.for_each(|k, v| {
        let w = f(v);
        if !w.is_zero() {
            out.insert(&k, w);
        }
    });
    let baseline = baseline.as_ref().map(|b| f(b)).filter(|b| !b.is_zero()).map(Box::new);
    NF::Map { keys: out, baseline }
}

/// Converts a normal form of `space` to one of `nested(space)`.
pub fn to_nested<K: Ring>(nf: &NF<K>, space: &Space) -> NF<K> {
    match space {
        Space::Scalar | Space::Free(_) | Space::CompactFree(_) => nf.clone(),
        Space::FinMap(_, u) | Space::CompactMap(_, u) => {
            if u.contains_tensor() {
                map_leaves(nf, &|leaf| to_nested(leaf, u))
            } else {
                nf.clone()
            }
        }
        Space::Biproduct(u, v) => match nf {
            NF::Pair(a, b) => NF::Pair(Box::new(to_nested(a, u)), Box::new(to_nested(b, v))),
            _ => panic!("expected a pair, found {nf}"),
        },
        Space::Tensor(u, v) => {
            let NF::Tensor(list) = nf else { panic!("expected a tensor, found {nf}") };
            let mut acc = NF::zero(&nested(space));
            for (l, r) in list {
                acc.add_assign(tensor_nested(l, u, &to_nested(r, v), v));
            }
            acc
        }
    }
}

/// `l ⊗ r` as an element of `nested(U ⊗ V)`, given `r` already nested.
fn tensor_nested<K: Ring>(l: &NF<K>, u: &Space, rn: &NF<K>, v: &Space) -> NF<K> {
    match u {
        Space::Scalar => rn.clone().scaled(l.as_scalar().expect("scalar")),
        Space::Free(_) | Space::CompactFree(_) => {
            map_leaves(l, &|c| rn.clone().scaled(c.as_scalar().expect("scalar leaf")))
        }
        Space::FinMap(_, w) | Space::CompactMap(_, w) => map_leaves(l, &|leaf| tensor_nested(leaf, w, rn, v)),
        Space::Tensor(u1, u2) => {
            let NF::Tensor(list) = l else { panic!("expected a tensor, found {l}") };
            let rest = Space::tensor((**u2).clone(), v.clone());
            let mut acc = NF::zero(&nested_tensor(u, v));
            for (l1, l2) in list {
                acc.add_assign(tensor_nested(l1, u1, &tensor_nested(l2, u2, rn, v), &rest));
            }
            acc
        }
        Space::Biproduct(u1, u2) => {
            let NF::Pair(a, b) = l else { panic!("expected a pair, found {l}") };
            NF::Pair(Box::new(tensor_nested(a, u1, rn, v)), Box::new(tensor_nested(b, u2, rn, v)))
        }
    }
}

/// Converts a normal form of `nested(space)` back to one of `space`.
pub fn from_nested<K: Ring>(nf: &NF<K>, space: &Space) -> NF<K> {
    match space {
        Space::Scalar | Space::Free(_) | Space::CompactFree(_) => nf.clone(),
        Space::FinMap(_, u) | Space::CompactMap(_, u) => {
            if u.contains_tensor() {
                map_leaves(nf, &|leaf| from_nested(leaf, u))
            } else {
                nf.clone()
            }
        }
        Space::Biproduct(u, v) => match nf {
            NF::Pair(a, b) => NF::Pair(Box::new(from_nested(a, u)), Box::new(from_nested(b, v))),
            _ => panic!("expected a pair, found {nf}"),
        },
        Space::Tensor(u, v) => NF::Tensor(compact(untensor(nf, u, v))),
    }
}

fn untensor<K: Ring>(nf: &NF<K>, u: &Space, v: &Space) -> Vec<(NF<K>, NF<K>)> {
    let mut out = Vec::new();
    match u {
        Space::Scalar => out.push((NF::Scalar(K::one()), from_nested(nf, v))),
        Space::Free(_) | Space::CompactFree(_) => {
            let NF::Map { keys, baseline } = nf else { panic!("expected a map, found {nf}") };
            if let Some(b) = baseline {
                out.push((NF::wild(NF::Scalar(K::one())), from_nested(b, v)));
            }
            keys.for_each(|k, w| out.push((NF::singleton(&k, NF::Scalar(K::one())), from_nested(w, v))));
        }
        Space::FinMap(_, w) | Space::CompactMap(_, w) => {
            let NF::Map { keys, baseline } = nf else { panic!("expected a map, found {nf}") };
            if let Some(b) = baseline {
                for (lw, rv) in untensor(b, w, v) {
                    out.push((NF::wild(lw), rv));
                }
            }
            keys.for_each(|k, leaf| {
                for (lw, rv) in untensor(leaf, w, v) {
                    out.push((NF::singleton(&k, lw), rv));
                }
            });
        }
        Space::Tensor(u1, u2) => {
            let rest = Space::tensor((**u2).clone(), v.clone());
            for (l1, r12) in untensor(nf, u1, &rest) {
                let NF::Tensor(list) = r12 else { unreachable!("tensor normal form") };
                for (l2, rv) in list {
                    out.push((NF::Tensor(vec![(l1.clone(), l2)]), rv));
                }
            }
        }
        Space::Biproduct(u1, u2) => {
            let NF::Pair(a, b) = nf else { panic!("expected a pair, found {nf}") };
            for (l, r) in untensor(a, u1, v) {
                out.push((NF::Pair(Box::new(l), Box::new(NF::zero(u2))), r));
            }
            for (l, r) in untensor(b, u2, v) {
                out.push((NF::Pair(Box::new(NF::zero(u1)), Box::new(l)), r));
            }
        }
    }
    out
}

/// Product of nested normal forms at one level of `space` (tensor-free).
fn mul_level<K: Ring>(fs: &[&NF<K>], space: &Space, depth: usize) -> NF<K> {
    if fs.len() == 1 {
        return fs[0].clone();
    }
    match space {
        Space::Scalar => {
            let mut acc = fs[0].as_scalar().expect("scalar").clone();
            for f in &fs[1..] {
                if acc.is_zero() {
                    break;
                }
                metrics::ring_mul();
                acc = acc.mul(f.as_scalar().expect("scalar"));
            }
            NF::Scalar(acc)
        }
        Space::Biproduct(u, v) => {
            let split: Vec<(&NF<K>, &NF<K>)> = fs
                .iter()
                .map(|f| match f {
                    NF::Pair(a, b) => (&**a, &**b),
                    other => panic!("expected a pair, found {other}"),
                })
                .collect();
            let ls: Vec<&NF<K>> = split.iter().map(|p| p.0).collect();
            let rs: Vec<&NF<K>> = split.iter().map(|p| p.1).collect();
            NF::Pair(Box::new(mul_level(&ls, u, depth)), Box::new(mul_level(&rs, v, depth)))
        }
        Space::Free(_) | Space::CompactFree(_) => map_level(fs, space, &Space::Scalar, depth),
        Space::FinMap(_, u) | Space::CompactMap(_, u) => map_level(fs, space, u, depth),
        Space::Tensor(..) => unreachable!("tensor spaces are nested before multiplying"),
    }
}

fn map_level<K: Ring>(fs: &[&NF<K>], space: &Space, leaf: &Space, depth: usize) -> NF<K> {
    let has_baseline: Vec<bool> = fs.iter().map(|f| f.baseline().is_some()).collect();
    let components: Vec<usize> =
        fs.iter().zip(&has_baseline).map(|(f, b)| f.key_count() + usize::from(*b)).collect();
    let all_baselines = has_baseline.iter().all(|b| *b);
    let chosen = (0..fs.len())
        .filter(|&i| all_baselines || !has_baseline[i])
        .min_by_key(|&i| (components[i], i))
        .expect("at least one factor");
    if metrics::tracing() {
        metrics::record(EnumeratorChoice {
            depth,
            components: components.clone(),
            has_baseline: has_baseline.clone(),
            chosen,
        });
    }
    let e = fs[chosen];
    let others: Vec<&NF<K>> = fs.iter().enumerate().filter(|(i, _)| *i != chosen).map(|(_, f)| *f).collect();
    let NF::Map { keys: e_keys, baseline: e_base } = e else { panic!("expected a map, found {e}") };
    let mut keys = KeyTrie::new();

    if !all_baselines {
        // The enumerator has no baseline, so the product is supported on its keys.
        e_keys.for_each(|a, v| {
            let mut looked: Vec<Cow<'_, NF<K>>> = Vec::with_capacity(fs.len());
            looked.push(Cow::Borrowed(v));
            for o in &others {
                match o.lookup(Some(&a)) {
                    Some(x) => looked.push(x),
                    None => return,
                }
            }
            let refs: Vec<&NF<K>> = looked.iter().map(|c| c.as_ref()).collect();
            let r = mul_level(&refs, leaf, depth + 1);
            if !r.is_zero() {
                keys.insert(&a, r);
            }
        });
        return NF::Map { keys, baseline: None };
    }

    // Every factor has a baseline: e = D + (* ↦ b), and e · R = D · R + (* ↦ b) · R.
    let b = e_base.as_deref().expect("baseline");
    let r = mul_level(&others, space, depth);
    let NF::Map { keys: r_keys, baseline: r_base } = &r else { unreachable!("map product") };
    let mut baseline = None;
    if let Some(rb) = r_base {
        add_baseline(&mut baseline, mul_level(&[b, rb], leaf, depth + 1));
    }
    r_keys.for_each(|a, rd| add_at(&mut keys, &a, mul_level(&[b, rd], leaf, depth + 1)));
    e_keys.for_each(|a, d| {
        if let Some(ra) = r.lookup(Some(&a)) {
            add_at(&mut keys, &a, mul_level(&[d, ra.as_ref()], leaf, depth + 1));
        }
    });
    NF::Map { keys, baseline }
}

/// Monomials of a term: coefficient and basis path, with sums, scalars and
/// tensors fully distributed and products expanded pairwise.
pub fn expand_term<K: Ring>(t: &Term<K>) -> Vec<(K, Path)> {
    let mut out = Vec::new();
    for (c, g) in t.linear_combination() {
        match g.as_gen().expect("generator") {
            Gen::One => out.push((c, Vec::new())),
            Gen::Inj(a) => out.push((c, vec![PathItem::Key(a.clone())])),
            Gen::WildOne => out.push((c, vec![PathItem::Wild])),
            Gen::MapsTo(a, u) => prefixed(&mut out, &c, PathItem::Key(a.clone()), expand_term(u)),
            Gen::WildMapsTo(u) => prefixed(&mut out, &c, PathItem::Wild, expand_term(u)),
            Gen::Pair(u, v) => {
                prefixed(&mut out, &c, PathItem::Fst, expand_term(u));
                prefixed(&mut out, &c, PathItem::Snd, expand_term(v));
            }
            Gen::TensorPair(u, v) => {
                let right = expand_term(v);
                for (cu, pu) in expand_term(u) {
                    for (cv, pv) in &right {
                        let mut p = pu.clone();
                        p.extend(pv.iter().cloned());
                        out.push((c.mul(&cu).mul(cv), p));
                    }
                }
            }
            Gen::Mul(x, y) => {
                for (m, p) in naive_pair(&expand_term(x), &expand_term(y)) {
                    out.push((c.mul(&m), p));
                }
            }
        }
    }
    out
}

fn prefixed<K: Ring>(out: &mut Vec<(K, Path)>, c: &K, item: PathItem, inner: Vec<(K, Path)>) {
    for (ci, mut p) in inner {
        p.insert(0, item.clone());
        out.push((c.mul(&ci), p));
    }
}

/// Product of two basis elements by the Kronecker rules: equal keys survive,
/// a wildcard matches any key, and mismatched keys or sides give zero.
fn path_product(p: &[PathItem], q: &[PathItem]) -> Option<Path> {
    if p.len() != q.len() {
        return None;
    }
    p.iter()
        .zip(q)
        .map(|(a, b)| match (a, b) {
            (PathItem::Wild, x) | (x, PathItem::Wild) => Some(x.clone()),
            (x, y) if x == y => Some(x.clone()),
            _ => None,
        })
        .collect()
}

/// Every pairwise product of monomials, zeros dropped.
fn naive_pair<K: Ring>(xs: &[(K, Path)], ys: &[(K, Path)]) -> Vec<(K, Path)> {
    let mut out = Vec::new();
    for (cx, px) in xs {
        for (cy, py) in ys {
            metrics::ring_mul();
            let c = cx.mul(cy);
            if c.is_zero() {
                continue;
            }
            if let Some(p) = path_product(px, py) {
                out.push((c, p));
            }
        }
    }
    out
}

fn consolidate<K: Ring>(monos: Vec<(K, Path)>) -> BTreeMap<Path, K> {
    let mut out: BTreeMap<Path, K> = BTreeMap::new();
    for (c, p) in monos {
        let s = match out.remove(&p) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !s.is_zero() {
            out.insert(p, s);
        }
    }
    out
}

/// Basis expansion of `x₁ ⋯ xₙ` computed by blunt distributivity, folding
/// left to right and merging equal monomials after each step.
pub fn naive_expansion<K: Ring>(factors: &[Term<K>]) -> Result<BTreeMap<Path, K>> {
    let (first, rest) = factors.split_first().ok_or_else(|| Error::query("empty product"))?;
    let mut acc = consolidate(expand_term(first));
    for f in rest {
        if f.space() != first.space() {
            return Err(Error::mismatch(first.space(), f.space()));
        }
        let xs: Vec<(K, Path)> = acc.into_iter().map(|(p, c)| (c, p)).collect();
        acc = consolidate(naive_pair(&xs, &expand_term(f)));
    }
    Ok(acc)
}

/// The oracle product: distribute, multiply generators pairwise, normalize.
pub fn naive_multiply<K: Ring>(x: &Term<K>, y: &Term<K>) -> Result<NormalForm<K>> {
    let basis = naive_expansion(&[x.clone(), y.clone()])?;
    from_basis(x.space(), basis)
}

/// Builds the normal form with the given basis expansion.
pub fn from_basis<K: Ring>(space: &Space, basis: impl IntoIterator<Item = (Path, K)>) -> Result<NormalForm<K>> {
    let terms = basis
        .into_iter()
        .map(|(p, c)| {
            let (t, rest) = basis_term(space, &p)?;
            if !rest.is_empty() {
                return Err(Error::query(format!("path too long for {space}")));
            }
            Ok(t.scale(c))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(normalize(&Term::sum(space, terms)?))
}

fn basis_term<'p, K: Ring>(space: &Space, path: &'p [PathItem]) -> Result<(Term<K>, &'p [PathItem])> {
    let bad = || Error::query(format!("path does not fit {space}"));
    match space {
        Space::Scalar => Ok((Term::one(), path)),
        Space::Free(set) | Space::CompactFree(set) => match path.split_first() {
            Some((PathItem::Key(a), rest)) => Ok((Term::inject(space, a.clone())?, rest)),
            Some((PathItem::Wild, rest)) if space.is_compact() => Ok((Term::wild_one(set.clone()), rest)),
            _ => Err(bad()),
        },
        Space::FinMap(set, u) | Space::CompactMap(set, u) => match path.split_first() {
            Some((PathItem::Key(a), rest)) => {
                let (t, rest) = basis_term(u, rest)?;
                Ok((Term::maps_to(space, a.clone(), t)?, rest))
            }
            Some((PathItem::Wild, rest)) if space.is_compact() => {
                let (t, rest) = basis_term(u, rest)?;
                Ok((Term::wild_maps_to(set.clone(), t), rest))
            }
            _ => Err(bad()),
        },
        Space::Biproduct(u, v) => match path.split_first() {
            Some((PathItem::Fst, rest)) => {
                let (t, rest) = basis_term(u, rest)?;
                Ok((Term::pair(t, Term::zero((**v).clone())), rest))
            }
            Some((PathItem::Snd, rest)) => {
                let (t, rest) = basis_term(v, rest)?;
                Ok((Term::pair(Term::zero((**u).clone()), t), rest))
            }
            _ => Err(bad()),
        },
        Space::Tensor(u, v) => {
            let (l, rest) = basis_term(u, path)?;
            let (r, rest) = basis_term(v, rest)?;
            Ok((Term::tensor(l, r), rest))
        }
    }
}

/// Embeds a tensor of free modules into a tensor of compact free modules
/// over a larger attribute list: factor `i` of `x` lands at `positions[i]`
/// (positions must be distinct) and every other position gets `1`.
pub fn embed<K: Ring>(x: &Term<K>, positions: &[usize], target: &[PrimSet]) -> Result<Term<K>> {
    let factors = x.space().tensor_factors();
    if factors.len() != positions.len() {
        return Err(Error::query(format!("{} positions for {} factors", positions.len(), factors.len())));
    }
    let mut seen = vec![false; target.len()];
    for &p in positions {
        if p >= target.len() || std::mem::replace(&mut seen[p], true) {
            return Err(Error::query("embedding positions must be distinct and within the target"));
        }
    }
    for (f, &p) in factors.iter().zip(positions) {
        if f.index_set() != Some(&target[p]) || !matches!(f, Space::Free(_) | Space::CompactFree(_)) {
            return Err(Error::mismatch(&Space::CompactFree(target[p].clone()), f));
        }
    }
    let target_space = Space::tensor_of(target.iter().map(|a| Space::CompactFree(a.clone())));
    let mut summands = Vec::new();
    for (c, parts) in crate::fold::pure_tensors(x) {
        let mut out: Vec<Term<K>> = target.iter().map(|a| Term::wild_one(a.clone())).collect();
        for (part, &p) in parts.iter().zip(positions) {
            out[p] = crate::fold::include_compact(part)?;
        }
        let t = Term::tensor_all(out);
        summands.push(if c.is_one() { t } else { t.scale(c) });
    }
    Term::sum(&target_space, summands)
}

/// The triangle query `x(A,B) ⋈ y(A,C) ⋈ z(B,C)` as one joint product.
pub fn triangle<K: Ring>(x: &Term<K>, y: &Term<K>, z: &Term<K>) -> Result<NormalForm<K>> {
    let set = |t: &Term<K>, i: usize| -> Result<PrimSet> {
        let fs = t.space().tensor_factors();
        fs.get(i)
            .and_then(|s| s.index_set().cloned())
            .filter(|_| fs.len() == 2)
            .ok_or_else(|| Error::query(format!("triangle inputs must be binary relations, found {}", t.space())))
    };
    let attrs = [set(x, 0)?, set(x, 1)?, set(y, 1)?];
    let xe = embed(x, &[0, 1], &attrs)?;
    let ye = embed(y, &[0, 2], &attrs)?;
    let ze = embed(z, &[1, 2], &attrs)?;
    multiply(&[xe, ye, ze])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normal::equal;
    use crate::ring::{Gf2, Integer};
    use crate::value::Value;

    type T = Term<Integer>;

    fn z(n: i64) -> Integer {
        Integer::from(n)
    }

    fn strs() -> Space {
        Space::Free(PrimSet::Str)
    }

    fn lin(items: &[(i64, &str)]) -> T {
        T::sum(&strs(), items.iter().map(|(c, s)| T::inject(&strs(), Value::str(*s)).unwrap().scale(z(*c)))).unwrap()
    }

    fn rows(nf: &NF<Integer>) -> Vec<(Vec<String>, i64)> {
        nf.enumerate(true)
            .unwrap()
            .into_iter()
            .map(|(p, c)| (p.iter().map(|i| i.to_string()).collect(), c.to_i64().unwrap()))
            .collect()
    }

    fn relation(attrs: &[PrimSet], tuples: &[&[Value]]) -> T {
        let space = Space::tensor_of(attrs.iter().map(|a| Space::Free(a.clone())));
        T::sum(
            &space,
            tuples.iter().map(|t| {
                T::tensor_all(
                    t.iter().zip(attrs).map(|(v, a)| T::inject(&Space::Free(a.clone()), v.clone()).unwrap()),
                )
            }),
        )
        .unwrap()
    }

    #[test]
    fn multiplicities_multiply() {
        let x = lin(&[(3, "a"), (2, "b"), (5, "c")]);
        let y = lin(&[(7, "b"), (4, "c"), (2, "d")]);
        let p = multiply(&[x.clone(), y.clone()]).unwrap();
        assert_eq!(rows(&p), vec![(vec!["b".into()], 14), (vec!["c".into()], 20)]);
        assert!(p.equiv(&naive_multiply(&x, &y).unwrap()));
        let p = multiply(&[lin(&[(2, "a"), (3, "b")]), lin(&[(5, "b"), (7, "c")])]).unwrap();
        assert_eq!(rows(&p), vec![(vec!["b".into()], 15)]);
    }

    #[test]
    fn natural_join_example() {
        let (s, i) = (PrimSet::Str, PrimSet::Int);
        let x = relation(&[s.clone(), i.clone()], &[&["a".into(), 1.into()], &["b".into(), 2.into()], &["c".into(), 3.into()]]);
        let y = relation(&[i.clone(), s.clone()], &[&[2.into(), "p".into()], &[3.into(), "q".into()], &[4.into(), "r".into()]]);
        let attrs = [s.clone(), i, s];
        let xe = embed(&x, &[0, 1], &attrs).unwrap();
        let ye = embed(&y, &[1, 2], &attrs).unwrap();
        assert_eq!(xe.weight(), x.weight());
        let j = multiply(&[xe.clone(), ye.clone()]).unwrap();
        let want = vec![
            (vec!["b".to_string(), "2".into(), "p".into()], 1),
            (vec!["c".to_string(), "3".into(), "q".into()], 1),
        ];
        assert_eq!(rows(&j), want);
        assert_eq!(rows(&naive_multiply(&xe, &ye).unwrap()), want);
    }

    #[test]
    fn disjoint_keys_annihilate() {
        let space = Space::fin_map(PrimSet::Str, strs());
        let a = T::maps_to(&space, "a".into(), lin(&[(1, "u")])).unwrap();
        let b = T::maps_to(&space, "b".into(), lin(&[(1, "v")])).unwrap();
        assert!(multiply(&[a.clone(), b]).unwrap().is_zero());
        assert_eq!(multiply(std::slice::from_ref(&a)).unwrap(), normalize(&a));
    }

    #[test]
    fn unit_and_baseline_products() {
        let cf = Space::CompactFree(PrimSet::Str);
        let one = T::unit_one(&cf).unwrap();
        let x = T::inject(&cf, "a".into()).unwrap().scale(z(3)).add(&one.scale(z(2))).unwrap();
        assert!(equal(&one.mul(&x).unwrap(), &x).unwrap());
        // (2 + 3⟨a⟩)(1 − ⟨a⟩) = 2 − 2⟨a⟩ + 3⟨a⟩ − 3⟨a⟩ = 2 − 2⟨a⟩
        let y = one.sub(&T::inject(&cf, "a".into()).unwrap()).unwrap();
        let p = multiply(&[x.clone(), y.clone()]).unwrap();
        assert_eq!(p.lookup_scalar(None), z(2));
        assert_eq!(p.lookup_scalar(Some(&"a".into())), z(0));
        assert!(p.equiv(&naive_multiply(&x, &y).unwrap()));
    }

    #[test]
    fn enumerator_skips_baseline_factors() {
        let cf = Space::CompactFree(PrimSet::Str);
        let star = T::wild_one(PrimSet::Str).scale(z(2));
        let a = T::inject(&cf, "a".into()).unwrap().scale(z(3));
        let (p, trace) = metrics::trace(|| multiply(&[star, a]).unwrap());
        assert_eq!(p.lookup_scalar(Some(&"a".into())), z(6));
        assert_eq!(p.lookup_scalar(None), z(0));
        assert_eq!(trace[0].chosen, 1);
    }

    #[test]
    fn pruned_keys_do_no_deeper_work() {
        let space = Space::fin_map(PrimSet::Str, strs());
        let m = |k: &str, v: &str| T::maps_to(&space, k.into(), lin(&[(1, v)])).unwrap();
        let x = m("a", "u").add(&m("b", "u")).unwrap();
        let y = m("a", "u").add(&m("c", "u")).unwrap();
        let (_, trace) = metrics::trace(|| multiply(&[x, y]).unwrap());
        assert_eq!(trace.iter().filter(|c| c.depth == 1).count(), 1);
    }

    #[test]
    fn triangle_small_cases() {
        let i = PrimSet::Int;
        let full: Vec<Vec<Value>> = (1..=2).flat_map(|a| (1..=2).map(move |b| vec![a.into(), b.into()])).collect();
        let refs: Vec<&[Value]> = full.iter().map(|v| v.as_slice()).collect();
        let r = relation(&[i.clone(), i.clone()], &refs);
        let t = triangle(&r, &r, &r).unwrap();
        let out = rows(&t);
        assert_eq!(out.len(), 8);
        assert!(out.iter().all(|(_, c)| *c == 1));

        let x = relation(&[i.clone(), i.clone()], &[&[1.into(), 1.into()]]);
        let y = relation(&[i.clone(), i.clone()], &[&[1.into(), 2.into()]]);
        let t = triangle(&x, &y, &y).unwrap();
        assert_eq!(rows(&t), vec![(vec!["1".into(), "1".into(), "2".into()], 1)]);

        let empty = T::zero(r.space().clone());
        assert!(triangle(&r, &empty, &r).unwrap().is_zero());
    }

    #[test]
    fn gf2_self_join_is_idempotent() {
        let cf = Space::CompactFree(PrimSet::Str);
        let g = Term::<Gf2>::sum(&cf, ["a", "b", "c"].map(|s| Term::inject(&cf, s.into()).unwrap())).unwrap();
        assert_eq!(multiply(&[g.clone(), g.clone()]).unwrap(), normalize(&g));
    }
}
