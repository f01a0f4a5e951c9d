//! Linear maps defined by their action on generators.
//!
//! A linear map out of any of our spaces is fixed by what it does to
//! generators; [`fold_gens`] extends such an action over `Zero`, `Add` and
//! `Scale`. Everything else here (functorial actions, projections,
//! associators, the index sum) is a fold with a particular action.

use crate::error::{Error, Result};
use crate::normal::normalize;
use crate::ring::Ring;
use crate::space::Space;
use crate::term::{Gen, Term};
use crate::value::{PrimSet, Value};

/// Extends `f`, defined on generators, linearly over `x`. Products are
/// normalized and read back before the action is applied.
pub fn fold_gens<K: Ring>(
    x: &Term<K>,
    target: &Space,
    f: &mut dyn FnMut(&Gen<K>) -> Result<Term<K>>,
) -> Result<Term<K>> {
    let mut out = Vec::new();
    for (c, g) in x.linear_combination() {
        if c.is_zero() {
            continue;
        }
        let image = match g.as_gen().expect("generator") {
            Gen::Mul(..) => fold_gens(&normalize(g).readback(g.space()), target, f)?,
            gen => f(gen)?,
        };
        if image.space() != target {
            return Err(Error::mismatch(target, image.space()));
        }
        out.push(if c.is_one() { image } else { image.scale(c) });
    }
    Term::sum(target, out)
}

/// The unique linear map out of `F[A]` (or `F*[A]`) sending `⟨a⟩` to `f(a)`
/// and, for compact modules, `1` to `wild`.
pub fn fold_free<K: Ring>(
    x: &Term<K>,
    target: &Space,
    mut f: impl FnMut(&Value) -> Result<Term<K>>,
    wild: Option<&Term<K>>,
) -> Result<Term<K>> {
    if !matches!(x.space(), Space::Free(_) | Space::CompactFree(_)) {
        return Err(Error::WrongGenerator(x.space().clone()));
    }
    fold_gens(x, target, &mut |g| match g {
        Gen::Inj(a) => f(a),
        Gen::WildOne => wild.cloned().ok_or(Error::MissingWildAction),
        _ => Err(Error::WrongGenerator(x.space().clone())),
    })
}

/// What a map fold does with a wildcard entry `* ↦ u`.
pub type WildAction<'a, K> = &'a mut dyn FnMut(&Term<K>) -> Result<Term<K>>;

/// The linear map out of `A ⇒ U` (or `A ⇒* U`) given by a family of maps
/// `f(a, ·)` and, for wildcards, `wild`.
pub fn fold_map<K: Ring>(
    x: &Term<K>,
    target: &Space,
    mut f: impl FnMut(&Value, &Term<K>) -> Result<Term<K>>,
    mut wild: Option<WildAction<'_, K>>,
) -> Result<Term<K>> {
    if !matches!(x.space(), Space::FinMap(..) | Space::CompactMap(..)) {
        return Err(Error::WrongGenerator(x.space().clone()));
    }
    fold_gens(x, target, &mut |g| match g {
        Gen::MapsTo(a, u) => f(a, u),
        Gen::WildMapsTo(u) => match wild.as_mut() {
            Some(w) => w(u),
            None => Err(Error::MissingWildAction),
        },
        _ => Err(Error::WrongGenerator(x.space().clone())),
    })
}

/// The linear map out of `U ⊗ V` induced by the bilinear map `f`.
pub fn fold_tensor<K: Ring>(
    x: &Term<K>,
    target: &Space,
    mut f: impl FnMut(&Term<K>, &Term<K>) -> Result<Term<K>>,
) -> Result<Term<K>> {
    if !matches!(x.space(), Space::Tensor(..)) {
        return Err(Error::WrongGenerator(x.space().clone()));
    }
    fold_gens(x, target, &mut |g| match g {
        Gen::TensorPair(u, v) => f(u, v),
        _ => Err(Error::WrongGenerator(x.space().clone())),
    })
}

/// The linear map out of `U ⊕ V` given on pairs by `f` (which must be
/// additive in each component).
pub fn fold_pair<K: Ring>(
    x: &Term<K>,
    target: &Space,
    mut f: impl FnMut(&Term<K>, &Term<K>) -> Result<Term<K>>,
) -> Result<Term<K>> {
    if !matches!(x.space(), Space::Biproduct(..)) {
        return Err(Error::WrongGenerator(x.space().clone()));
    }
    fold_gens(x, target, &mut |g| match g {
        Gen::Pair(u, v) => f(u, v),
        _ => Err(Error::WrongGenerator(x.space().clone())),
    })
}

/// `F[f]` or `F*[f]`: `⟨a⟩ ↦ ⟨f(a)⟩` and `1 ↦ 1`. Values of `f` must lie in `codomain`.
pub fn fmap_free<K: Ring>(x: &Term<K>, codomain: &PrimSet, f: impl Fn(&Value) -> Value) -> Result<Term<K>> {
    let target = match x.space() {
        Space::Free(_) => Space::Free(codomain.clone()),
        Space::CompactFree(_) => Space::CompactFree(codomain.clone()),
        other => return Err(Error::WrongGenerator(other.clone())),
    };
    let one = Term::wild_one(codomain.clone());
    let wild = target.is_compact().then_some(&one);
    fold_free(x, &target, |a| Term::inject(&target, f(a)), wild)
}

/// `f ⇒ α` or `f ⇒* α`: `a ↦ u` goes to `f(a) ↦ α(u)` and `* ↦ u` to `* ↦ α(u)`.
/// `alpha` must map into `leaf`.
pub fn fmap_map<K: Ring>(
    x: &Term<K>,
    codomain: &PrimSet,
    leaf: &Space,
    f: impl Fn(&Value) -> Value,
    alpha: &mut dyn FnMut(&Term<K>) -> Result<Term<K>>,
) -> Result<Term<K>> {
    let target = match x.space() {
        Space::FinMap(..) => Space::fin_map(codomain.clone(), leaf.clone()),
        Space::CompactMap(..) => Space::compact_map(codomain.clone(), leaf.clone()),
        other => return Err(Error::WrongGenerator(other.clone())),
    };
    fold_gens(x, &target, &mut |g| match g {
        Gen::MapsTo(a, u) => Term::maps_to(&target, f(a), alpha(u)?),
        Gen::WildMapsTo(u) => Ok(Term::wild_maps_to(codomain.clone(), alpha(u)?)),
        _ => Err(Error::WrongGenerator(x.space().clone())),
    })
}

/// `α ⊗ β`: `u ⊗ v` goes to `α(u) ⊗ β(v)`; the images must lie in `target`.
pub fn fmap_tensor<K: Ring>(
    x: &Term<K>,
    target: &Space,
    alpha: &mut dyn FnMut(&Term<K>) -> Result<Term<K>>,
    beta: &mut dyn FnMut(&Term<K>) -> Result<Term<K>>,
) -> Result<Term<K>> {
    fold_tensor(x, target, |u, v| Ok(Term::tensor(alpha(u)?, beta(v)?)))
}

/// `sum : (A ⇒ U) → U`, forgetting the index.
pub fn sum_over_index<K: Ring>(x: &Term<K>) -> Result<Term<K>> {
    let Space::FinMap(_, u) = x.space() else {
        return Err(Error::WrongGenerator(x.space().clone()));
    };
    fold_map(x, u, |_, v| Ok(v.clone()), None)
}

fn biproduct_parts(space: &Space) -> Result<(&Space, &Space)> {
    match space {
        Space::Biproduct(u, v) => Ok((u, v)),
        other => Err(Error::WrongGenerator(other.clone())),
    }
}

pub fn proj1<K: Ring>(x: &Term<K>) -> Result<Term<K>> {
    let (u, _) = biproduct_parts(x.space())?;
    fold_pair(x, u, |a, _| Ok(a.clone()))
}

pub fn proj2<K: Ring>(x: &Term<K>) -> Result<Term<K>> {
    let (_, v) = biproduct_parts(x.space())?;
    fold_pair(x, v, |_, b| Ok(b.clone()))
}

/// `i₁(u) = (u, 0)`.
pub fn inj1<K: Ring>(u: &Term<K>, v_space: &Space) -> Term<K> {
    Term::pair(u.clone(), Term::zero(v_space.clone()))
}

/// `i₂(v) = (0, v)`.
pub fn inj2<K: Ring>(u_space: &Space, v: &Term<K>) -> Term<K> {
    Term::pair(Term::zero(u_space.clone()), v.clone())
}

/// `α : U ⊗ (V ⊗ W) → (U ⊗ V) ⊗ W`.
pub fn associator<K: Ring>(x: &Term<K>) -> Result<Term<K>> {
    let Space::Tensor(u, vw) = x.space() else { return Err(Error::WrongGenerator(x.space().clone())) };
    let Space::Tensor(v, w) = &**vw else { return Err(Error::WrongGenerator(x.space().clone())) };
    let target = Space::tensor(Space::tensor((**u).clone(), (**v).clone()), (**w).clone());
    fold_tensor(x, &target, |a, bc| fold_tensor(bc, &target, |b, c| Ok(Term::tensor(Term::tensor(a.clone(), b.clone()), c.clone()))))
}

/// `α⁻¹ : (U ⊗ V) ⊗ W → U ⊗ (V ⊗ W)`.
pub fn associator_inv<K: Ring>(x: &Term<K>) -> Result<Term<K>> {
    let Space::Tensor(uv, w) = x.space() else { return Err(Error::WrongGenerator(x.space().clone())) };
    let Space::Tensor(u, v) = &**uv else { return Err(Error::WrongGenerator(x.space().clone())) };
    let target = Space::tensor((**u).clone(), Space::tensor((**v).clone(), (**w).clone()));
    fold_tensor(x, &target, |ab, c| fold_tensor(ab, &target, |a, b| Ok(Term::tensor(a.clone(), Term::tensor(b.clone(), c.clone())))))
}

/// `β : U ⊗ V → V ⊗ U`.
pub fn commutator<K: Ring>(x: &Term<K>) -> Result<Term<K>> {
    let Space::Tensor(u, v) = x.space() else { return Err(Error::WrongGenerator(x.space().clone())) };
    let target = Space::tensor((**v).clone(), (**u).clone());
    fold_tensor(x, &target, |a, b| Ok(Term::tensor(b.clone(), a.clone())))
}

/// Decomposes `x` into pure tensors `c · (t₁ ⊗ ⋯ ⊗ tₘ)`, one `tᵢ` per factor
/// of its (possibly nested) tensor space. The factors themselves are left
/// unexpanded. A non-tensor term is its own single factor.
pub fn pure_tensors<K: Ring>(x: &Term<K>) -> Vec<(K, Vec<Term<K>>)> {
    if !matches!(x.space(), Space::Tensor(..)) {
        return vec![(K::one(), vec![x.clone()])];
    }
    let mut out = Vec::new();
    for (c, g) in x.linear_combination() {
        if c.is_zero() {
            continue;
        }
        match g.as_gen().expect("generator") {
            Gen::TensorPair(u, v) => {
                let right = pure_tensors(v);
                for (cu, fu) in pure_tensors(u) {
                    for (cv, fv) in &right {
                        let mut parts = fu.clone();
                        parts.extend(fv.iter().cloned());
                        out.push((c.mul(&cu).mul(cv), parts));
                    }
                }
            }
            Gen::Mul(..) => {
                for (d, parts) in pure_tensors(&normalize(g).readback(g.space())) {
                    out.push((c.mul(&d), parts));
                }
            }
            _ => unreachable!("tensor spaces only have tensor generators"),
        }
    }
    out
}

/// The inclusion `F[A] → F*[A]`; compact terms are returned unchanged.
pub fn include_compact<K: Ring>(x: &Term<K>) -> Result<Term<K>> {
    match x.space() {
        Space::CompactFree(_) => Ok(x.clone()),
        Space::Free(a) => {
            let target = Space::CompactFree(a.clone());
            fold_free(x, &target, |v| Term::inject(&target, v.clone()), None)
        }
        other => Err(Error::WrongGenerator(other.clone())),
    }
}

/// The projection `F*[A] → F[A]` for terms without wildcards.
pub fn restrict_finite<K: Ring>(x: &Term<K>) -> Result<Term<K>> {
    match x.space() {
        Space::Free(_) => Ok(x.clone()),
        Space::CompactFree(a) => {
            let target = Space::Free(a.clone());
            fold_free(x, &target, |v| Term::inject(&target, v.clone()), None)
                .map_err(|e| if e == Error::MissingWildAction { Error::InfiniteSupport } else { e })
        }
        other => Err(Error::WrongGenerator(other.clone())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normal::{equal, normalize};
    use crate::ring::Integer;

    type T = Term<Integer>;

    fn z(n: i64) -> Integer {
        Integer::from(n)
    }

    fn strs() -> Space {
        Space::Free(PrimSet::Str)
    }

    fn inj(s: &str) -> T {
        T::inject(&strs(), Value::str(s)).unwrap()
    }

    fn sum(items: &[&str]) -> T {
        T::sum(&strs(), items.iter().map(|s| inj(s))).unwrap()
    }

    #[test]
    fn reverse_fold() {
        let x = sum(&["ab", "cd"]);
        let rev = fold_free(&x, &strs(), |a| T::inject(&strs(), Value::str(a.as_str().unwrap().chars().rev().collect::<String>())), None)
            .unwrap();
        assert!(equal(&rev, &sum(&["ba", "dc"])).unwrap());
    }

    #[test]
    fn index_by_length() {
        let target = Space::fin_map(PrimSet::Int, strs());
        let x = inj("ab");
        let y = fold_free(&x, &target, |a| T::maps_to(&target, Value::Int(a.as_str().unwrap().len() as i64), T::inject(&strs(), a.clone())?), None)
            .unwrap();
        let want = T::maps_to(&target, 2.into(), inj("ab")).unwrap();
        assert!(equal(&y, &want).unwrap());
    }

    #[test]
    fn wildcard_needs_an_action() {
        let x = T::wild_one(PrimSet::Str);
        let r = fold_free(&x, &Space::Scalar, |_| Ok(T::one()), None);
        assert_eq!(r.unwrap_err(), Error::MissingWildAction);
    }

    #[test]
    fn functorial_actions() {
        let up = fmap_free(&sum(&["foo", "bar"]), &PrimSet::Str, |v| Value::str(v.as_str().unwrap().to_uppercase())).unwrap();
        assert!(equal(&up, &sum(&["FOO", "BAR"])).unwrap());
        let one = T::wild_one(PrimSet::Str);
        let mapped = fmap_free(&one, &PrimSet::Int, |_| Value::Int(0)).unwrap();
        assert!(equal(&mapped, &T::wild_one(PrimSet::Int)).unwrap());
        let t = T::tensor(inj("u"), inj("v"));
        let mut a = |u: &T| Ok(u.scale(z(2)));
        let mut b = |v: &T| fmap_free(v, &PrimSet::Str, |_| Value::str("w"));
        let mapped = fmap_tensor(&t, t.space(), &mut a, &mut b).unwrap();
        assert!(equal(&mapped, &T::tensor(inj("u").scale(z(2)), inj("w"))).unwrap());
    }

    #[test]
    fn compact_map_functor_keeps_wildcards() {
        let space = Space::compact_map(PrimSet::Str, strs());
        let x = T::wild_maps_to(PrimSet::Str, inj("u")).add(&T::maps_to(&space, "a".into(), inj("v")).unwrap()).unwrap();
        let y = fmap_map(&x, &PrimSet::Str, &strs(), |a| Value::str(a.as_str().unwrap().to_uppercase()), &mut |u| Ok(u.scale(z(3))))
            .unwrap();
        let want = T::wild_maps_to(PrimSet::Str, inj("u").scale(z(3)))
            .add(&T::maps_to(&space, "A".into(), inj("v").scale(z(3))).unwrap())
            .unwrap();
        assert!(equal(&y, &want).unwrap());
    }

    #[test]
    fn index_sum() {
        let space = Space::fin_map(PrimSet::Int, strs());
        let m = |k: i64, s: &str| T::maps_to(&space, k.into(), inj(s)).unwrap();
        let x = m(2, "a").add(&m(3, "b")).unwrap();
        assert!(equal(&sum_over_index(&x).unwrap(), &sum(&["a", "b"])).unwrap());
        let y = m(2, "a").add(&m(2, "a")).unwrap();
        assert!(equal(&sum_over_index(&y).unwrap(), &inj("a").scale(z(2))).unwrap());
        assert!(normalize(&sum_over_index(&T::zero(space)).unwrap()).is_zero());
    }

    #[test]
    fn biproduct_projections() {
        let (u, v) = (inj("u"), T::scalar(z(4)));
        let p = T::pair(u.clone(), v.clone());
        assert!(equal(&proj1(&p).unwrap(), &u).unwrap());
        assert!(equal(&proj2(&p).unwrap(), &v).unwrap());
        let cf = Space::CompactFree(PrimSet::Str);
        let a = T::inject(&cf, "a".into()).unwrap();
        let prod = inj1(&a, &cf).mul(&inj2(&cf, &a)).unwrap();
        assert!(normalize(&prod).is_zero());
    }

    #[test]
    fn associators_and_commutator() {
        let t = T::tensor(inj("a"), T::tensor(sum(&["b", "c"]), inj("d")));
        let back = associator_inv(&associator(&t).unwrap()).unwrap();
        assert!(equal(&back, &t).unwrap());
        let c = commutator(&T::tensor(inj("a"), T::scalar(z(1)))).unwrap();
        assert_eq!(c.space(), &Space::tensor(Space::Scalar, strs()));
        assert_eq!(T::tensor(inj("a"), inj("b")).weight(), commutator(&T::tensor(inj("a"), inj("b"))).unwrap().weight());
    }

    #[test]
    fn pure_tensor_factors_stay_unexpanded() {
        let t = T::tensor(sum(&["a1", "a2", "a3"]), T::tensor(sum(&["b1", "b2"]), inj("c")));
        let parts = pure_tensors(&t);
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].1.len(), 3);
        assert_eq!(parts[0].1[0].size(), 5);
    }
}
