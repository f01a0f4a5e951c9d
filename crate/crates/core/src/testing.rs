//! Random terms for property tests and the acceptance suite.
//!
//! Values are drawn from small pools so that generated terms share keys
//! often; otherwise products and cancellations would almost always be
//! trivial.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::iso::Iso;
use crate::ring::Ring;
use crate::space::Space;
use crate::term::Term;
use crate::value::{PrimSet, Value};

const STRS: [&str; 5] = ["a", "b", "c", "d", "e"];

/// A random element of `set`, or `None` for the empty set.
pub fn random_value(rng: &mut impl Rng, set: &PrimSet) -> Option<Value> {
    Some(match set {
        PrimSet::Void => return None,
        PrimSet::Unit => Value::Unit,
        PrimSet::Bool => Value::Bool(rng.gen()),
        PrimSet::Int => Value::Int(rng.gen_range(-2..=3)),
        PrimSet::Str => Value::str(*STRS.choose(rng).expect("nonempty")),
        PrimSet::Sum(a, b) => {
            if rng.gen_bool(0.5) {
                Value::left(random_value(rng, a).or_else(|| random_value(rng, b).map(Value::right))?)
            } else {
                match random_value(rng, b) {
                    Some(v) => Value::right(v),
                    None => Value::left(random_value(rng, a)?),
                }
            }
        }
        PrimSet::Prod(a, b) => Value::pair(random_value(rng, a)?, random_value(rng, b)?),
    })
}

/// A coefficient in `-2..=2`.
pub fn random_scalar<K: Ring>(rng: &mut impl Rng) -> K {
    K::from_i64(rng.gen_range(-2..=2))
}

/// A random term of `space` with roughly `size` generator nodes. Terms mix
/// sums, scalings, zeros and (when `products` is set) symbolic products.
pub fn random_term<K: Ring>(rng: &mut impl Rng, space: &Space, size: usize, products: bool) -> Term<K> {
    let parts = (0..size.max(1))
        .map(|_| {
            let g = random_gen(rng, space, size / 2, products);
            match rng.gen_range(0..6) {
                0 => g.scale(random_scalar(rng)),
                1 => g.neg(),
                _ => g,
            }
        })
        .collect::<Vec<_>>();
    let mut t = Term::sum(space, parts).expect("same space");
    if products && size > 1 && rng.gen_range(0..4) == 0 {
        let other = random_term(rng, space, size / 2, false);
        t = t.mul(&other).expect("same space");
    }
    t
}

fn random_gen<K: Ring>(rng: &mut impl Rng, space: &Space, size: usize, products: bool) -> Term<K> {
    let sub = |rng: &mut _, s: &Space| random_term(rng, s, size.max(1), products);
    match space {
        Space::Scalar => Term::scalar(K::from_i64(rng.gen_range(-3..=3))),
        Space::Free(a) | Space::CompactFree(a) => {
            if space.is_compact() && rng.gen_range(0..5) == 0 {
                return Term::wild_one(a.clone());
            }
            match random_value(rng, a) {
                Some(v) => Term::inject(space, v).expect("value drawn from the index set"),
                None => Term::zero(space.clone()),
            }
        }
        Space::Biproduct(u, v) => Term::pair(sub(rng, u), sub(rng, v)),
        Space::FinMap(a, u) | Space::CompactMap(a, u) => {
            if space.is_compact() && rng.gen_range(0..5) == 0 {
                return Term::wild_maps_to(a.clone(), sub(rng, u));
            }
            match random_value(rng, a) {
                Some(v) => Term::maps_to(space, v, sub(rng, u)).expect("value drawn from the index set"),
                None => Term::zero(space.clone()),
            }
        }
        Space::Tensor(u, v) => Term::tensor(sub(rng, u), sub(rng, v)),
    }
}

/// A random space of bounded depth built over small index sets.
pub fn random_space(rng: &mut impl Rng, depth: usize) -> Space {
    let set = random_set(rng, 1);
    if depth == 0 {
        return match rng.gen_range(0..3) {
            0 => Space::Scalar,
            1 => Space::Free(set),
            _ => Space::CompactFree(set),
        };
    }
    match rng.gen_range(0..7) {
        0 => Space::Scalar,
        1 => Space::Free(set),
        2 => Space::CompactFree(set),
        3 => Space::biproduct(random_space(rng, depth - 1), random_space(rng, depth - 1)),
        4 => Space::fin_map(set, random_space(rng, depth - 1)),
        5 => Space::compact_map(set, random_space(rng, depth - 1)),
        _ => Space::tensor(random_space(rng, depth - 1), random_space(rng, depth - 1)),
    }
}

/// A random nonempty index set.
pub fn random_set(rng: &mut impl Rng, depth: usize) -> PrimSet {
    let leaf = [PrimSet::Unit, PrimSet::Bool, PrimSet::Int, PrimSet::Str];
    if depth == 0 || rng.gen_range(0..3) > 0 {
        return leaf.choose(rng).expect("nonempty").clone();
    }
    if rng.gen_bool(0.5) {
        PrimSet::sum(random_set(rng, depth - 1), random_set(rng, depth - 1))
    } else {
        PrimSet::prod(random_set(rng, depth - 1), random_set(rng, depth - 1))
    }
}

/// One sample domain for every isomorphism (two for `copower_tensor`, which
/// has a finite and a compact form).
pub fn iso_domains() -> Vec<(Iso, Space)> {
    let k = Space::Scalar;
    let fs = Space::Free(PrimSet::Str);
    let fi = Space::Free(PrimSet::Int);
    vec![
        (Iso::Cp0, Space::fin_map(PrimSet::Void, fs.clone())),
        (Iso::Cp1, Space::fin_map(PrimSet::Unit, fs.clone())),
        (Iso::CpSum, Space::fin_map(PrimSet::sum(PrimSet::Str, PrimSet::Int), fi.clone())),
        (Iso::CpProd, Space::fin_map(PrimSet::prod(PrimSet::Str, PrimSet::Int), k.clone())),
        (Iso::FreeUnit, Space::Free(PrimSet::Unit)),
        (Iso::FreeSum, Space::Free(PrimSet::sum(PrimSet::Str, PrimSet::Bool))),
        (Iso::FreeProd, Space::Free(PrimSet::prod(PrimSet::Str, PrimSet::Int))),
        (Iso::MapScalar, Space::fin_map(PrimSet::Str, k.clone())),
        (Iso::MapBiprod, Space::fin_map(PrimSet::Int, Space::biproduct(fs.clone(), k.clone()))),
        (Iso::MapTensor, Space::fin_map(PrimSet::Str, Space::tensor(fi.clone(), fs.clone()))),
        (Iso::CopowerTensor, Space::fin_map(PrimSet::Str, fi.clone())),
        (Iso::CopowerTensor, Space::compact_map(PrimSet::Str, Space::CompactFree(PrimSet::Int))),
        (Iso::CompactSplit, Space::CompactFree(PrimSet::Str)),
        (Iso::CompactMapSplit, Space::compact_map(PrimSet::Int, fs)),
    ]
}

/// A product problem: `factors` terms over a tensor of one to three
/// attributes, each a sum of at most `max_keys` weighted tuples with
/// coefficients in `-2..=2`. Values come from a pool of two or three per
/// attribute so that factors overlap. Tuples are never given a zero
/// coefficient, since that is the same as leaving them out. With `wildcards`, every attribute is compact and tuple
/// components are `1` about a quarter of the time.
pub fn random_product<K: Ring>(rng: &mut impl Rng, factors: usize, max_keys: usize, wildcards: bool) -> Vec<Term<K>> {
    let arity = rng.gen_range(1..=3);
    let sets: Vec<PrimSet> = (0..arity).map(|_| if rng.gen_bool(0.5) { PrimSet::Str } else { PrimSet::Int }).collect();
    let pool = rng.gen_range(2..=3);
    let attr_space = |a: &PrimSet| if wildcards { Space::CompactFree(a.clone()) } else { Space::Free(a.clone()) };
    let space = Space::tensor_of(sets.iter().map(attr_space));
    (0..factors)
        .map(|_| {
            let n = rng.gen_range(1..=max_keys.max(1));
            let tuples = (0..n).map(|_| {
                let c = *[-2, -1, 1, 2].choose(rng).expect("nonempty");
                let parts = sets.iter().map(|a| {
                    if wildcards && rng.gen_range(0..4) == 0 {
                        Term::wild_one(a.clone())
                    } else {
                        let i = rng.gen_range(0..pool);
                        let v = if *a == PrimSet::Str { Value::str(STRS[i]) } else { Value::Int(i as i64) };
                        Term::inject(&attr_space(a), v).expect("value drawn from the set")
                    }
                });
                Term::tensor_all(parts.collect::<Vec<_>>()).scale(K::from_i64(c))
            });
            Term::sum(&space, tuples.collect::<Vec<_>>()).expect("same space")
        })
        .collect()
}
