//! Natural isomorphisms between spaces.
//!
//! Each [`Iso`] is a pair of mutually inverse linear maps, both defined by
//! folds. The trivial module `𝟎` has no space of its own: `0 ⇒ U ≅ 𝟎` is
//! realized with the zero subspace of `U`, so `cp0` only inverts on terms
//! that normalize to zero.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fold::{fold_free, fold_map, fold_pair, fold_tensor, include_compact, proj1, proj2};
use crate::normal::normalize;
use crate::ring::Ring;
use crate::space::Space;
use crate::term::Term;
use crate::value::{PrimSet, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Iso {
    /// `0 ⇒ U ≅ 𝟎`
    Cp0,
    /// `1 ⇒ U ≅ U`
    Cp1,
    /// `(A + B) ⇒ U ≅ (A ⇒ U) ⊕ (B ⇒ U)`
    CpSum,
    /// `(A × B) ⇒ U ≅ A ⇒ B ⇒ U`
    CpProd,
    /// `F[1] ≅ K`
    FreeUnit,
    /// `F[A + B] ≅ F[A] ⊕ F[B]`
    FreeSum,
    /// `F[A × B] ≅ F[A] ⊗ F[B]`
    FreeProd,
    /// `A ⇒ K ≅ F[A]`
    MapScalar,
    /// `A ⇒ (U ⊕ V) ≅ (A ⇒ U) ⊕ (A ⇒ V)`
    MapBiprod,
    /// `A ⇒ (U ⊗ V) ≅ (A ⇒ U) ⊗ V`
    MapTensor,
    /// `A ⇒ U ≅ F[A] ⊗ U` and `A ⇒* U ≅ F*[A] ⊗ U`
    CopowerTensor,
    /// `F*[A] ≅ F[A] ⊕ K`
    CompactSplit,
    /// `A ⇒* U ≅ (A ⇒ U) ⊕ U`
    CompactMapSplit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Fwd,
    Bwd,
}

impl Iso {
    pub const ALL: [Iso; 13] = [
        Iso::Cp0,
        Iso::Cp1,
        Iso::CpSum,
        Iso::CpProd,
        Iso::FreeUnit,
        Iso::FreeSum,
        Iso::FreeProd,
        Iso::MapScalar,
        Iso::MapBiprod,
        Iso::MapTensor,
        Iso::CopowerTensor,
        Iso::CompactSplit,
        Iso::CompactMapSplit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Iso::Cp0 => "cp0",
            Iso::Cp1 => "cp1",
            Iso::CpSum => "cp_sum",
            Iso::CpProd => "cp_prod",
            Iso::FreeUnit => "free_unit",
            Iso::FreeSum => "free_sum",
            Iso::FreeProd => "free_prod",
            Iso::MapScalar => "map_scalar",
            Iso::MapBiprod => "map_biprod",
            Iso::MapTensor => "map_tensor",
            Iso::CopowerTensor => "copower_tensor",
            Iso::CompactSplit => "compact_split",
            Iso::CompactMapSplit => "compactmap_split",
        }
    }

    fn domain_error(self, space: &Space) -> Error {
        Error::IsoDomain { iso: self.name().to_string(), space: space.clone() }
    }

    /// The codomain of the forward map on `space`, or an error if `space`
    /// is not a domain of this isomorphism.
    pub fn fwd_space(self, space: &Space) -> Result<Space> {
        let err = || self.domain_error(space);
        Ok(match (self, space) {
            (Iso::Cp0, Space::FinMap(PrimSet::Void, u)) => (**u).clone(),
            (Iso::Cp1, Space::FinMap(PrimSet::Unit, u)) => (**u).clone(),
            (Iso::CpSum, Space::FinMap(PrimSet::Sum(a, b), u)) => {
                Space::biproduct(Space::fin_map((**a).clone(), (**u).clone()), Space::fin_map((**b).clone(), (**u).clone()))
            }
            (Iso::CpProd, Space::FinMap(PrimSet::Prod(a, b), u)) => {
                Space::fin_map((**a).clone(), Space::fin_map((**b).clone(), (**u).clone()))
            }
            (Iso::FreeUnit, Space::Free(PrimSet::Unit)) => Space::Scalar,
            (Iso::FreeSum, Space::Free(PrimSet::Sum(a, b))) => {
                Space::biproduct(Space::Free((**a).clone()), Space::Free((**b).clone()))
            }
            (Iso::FreeProd, Space::Free(PrimSet::Prod(a, b))) => {
                Space::tensor(Space::Free((**a).clone()), Space::Free((**b).clone()))
            }
            (Iso::MapScalar, Space::FinMap(a, u)) if **u == Space::Scalar => Space::Free(a.clone()),
            (Iso::MapBiprod, Space::FinMap(a, uv)) => match &**uv {
                Space::Biproduct(u, v) => {
                    Space::biproduct(Space::fin_map(a.clone(), (**u).clone()), Space::fin_map(a.clone(), (**v).clone()))
                }
                _ => return Err(err()),
            },
            (Iso::MapTensor, Space::FinMap(a, uv)) => match &**uv {
                Space::Tensor(u, v) => Space::tensor(Space::fin_map(a.clone(), (**u).clone()), (**v).clone()),
                _ => return Err(err()),
            },
            (Iso::CopowerTensor, Space::FinMap(a, u)) => Space::tensor(Space::Free(a.clone()), (**u).clone()),
            (Iso::CopowerTensor, Space::CompactMap(a, u)) => Space::tensor(Space::CompactFree(a.clone()), (**u).clone()),
            (Iso::CompactSplit, Space::CompactFree(a)) => Space::biproduct(Space::Free(a.clone()), Space::Scalar),
            (Iso::CompactMapSplit, Space::CompactMap(a, u)) => {
                Space::biproduct(Space::fin_map(a.clone(), (**u).clone()), (**u).clone())
            }
            _ => return Err(err()),
        })
    }

    /// The codomain of the backward map on `space`. `cp0` needs the index
    /// set's leaf space, which is `space` itself.
    pub fn bwd_space(self, space: &Space) -> Result<Space> {
        let err = || self.domain_error(space);
        Ok(match (self, space) {
            (Iso::Cp0, u) => Space::fin_map(PrimSet::Void, u.clone()),
            (Iso::Cp1, u) => Space::fin_map(PrimSet::Unit, u.clone()),
            (Iso::CpSum, Space::Biproduct(l, r)) => match (&**l, &**r) {
                (Space::FinMap(a, u), Space::FinMap(b, v)) if u == v => {
                    Space::fin_map(PrimSet::sum(a.clone(), b.clone()), (**u).clone())
                }
                _ => return Err(err()),
            },
            (Iso::CpProd, Space::FinMap(a, inner)) => match &**inner {
                Space::FinMap(b, u) => Space::fin_map(PrimSet::prod(a.clone(), b.clone()), (**u).clone()),
                _ => return Err(err()),
            },
            (Iso::FreeUnit, Space::Scalar) => Space::Free(PrimSet::Unit),
            (Iso::FreeSum, Space::Biproduct(l, r)) => match (&**l, &**r) {
                (Space::Free(a), Space::Free(b)) => Space::Free(PrimSet::sum(a.clone(), b.clone())),
                _ => return Err(err()),
            },
            (Iso::FreeProd, Space::Tensor(l, r)) => match (&**l, &**r) {
                (Space::Free(a), Space::Free(b)) => Space::Free(PrimSet::prod(a.clone(), b.clone())),
                _ => return Err(err()),
            },
            (Iso::MapScalar, Space::Free(a)) => Space::fin_map(a.clone(), Space::Scalar),
            (Iso::MapBiprod, Space::Biproduct(l, r)) => match (&**l, &**r) {
                (Space::FinMap(a, u), Space::FinMap(b, v)) if a == b => {
                    Space::fin_map(a.clone(), Space::biproduct((**u).clone(), (**v).clone()))
                }
                _ => return Err(err()),
            },
            (Iso::MapTensor, Space::Tensor(l, v)) => match &**l {
                Space::FinMap(a, u) => Space::fin_map(a.clone(), Space::tensor((**u).clone(), (**v).clone())),
                _ => return Err(err()),
            },
            (Iso::CopowerTensor, Space::Tensor(l, u)) => match &**l {
                Space::Free(a) => Space::fin_map(a.clone(), (**u).clone()),
                Space::CompactFree(a) => Space::compact_map(a.clone(), (**u).clone()),
                _ => return Err(err()),
            },
            (Iso::CompactSplit, Space::Biproduct(l, r)) => match (&**l, &**r) {
                (Space::Free(a), Space::Scalar) => Space::CompactFree(a.clone()),
                _ => return Err(err()),
            },
            (Iso::CompactMapSplit, Space::Biproduct(l, r)) => match &**l {
                Space::FinMap(a, u) if u == r => Space::compact_map(a.clone(), (**u).clone()),
                _ => return Err(err()),
            },
            _ => return Err(err()),
        })
    }

    pub fn apply<K: Ring>(self, dir: Direction, x: &Term<K>) -> Result<Term<K>> {
        match dir {
            Direction::Fwd => self.fwd(x),
            Direction::Bwd => self.bwd(x),
        }
    }

    pub fn fwd<K: Ring>(self, x: &Term<K>) -> Result<Term<K>> {
        let target = self.fwd_space(x.space())?;
        match self {
            Iso::Cp0 => Ok(Term::zero(target)),
            Iso::Cp1 => fold_map(x, &target, |_, u| Ok(u.clone()), None),
            Iso::CpSum => {
                let Space::Biproduct(l, r) = &target else { unreachable!() };
                fold_map(
                    x,
                    &target,
                    |k, u| match k {
                        Value::Left(a) => Ok(Term::pair(Term::maps_to(l, (**a).clone(), u.clone())?, Term::zero((**r).clone()))),
                        Value::Right(b) => Ok(Term::pair(Term::zero((**l).clone()), Term::maps_to(r, (**b).clone(), u.clone())?)),
                        _ => unreachable!("keys of a sum set"),
                    },
                    None,
                )
            }
            Iso::CpProd => {
                let Space::FinMap(_, inner) = &target else { unreachable!() };
                fold_map(
                    x,
                    &target,
                    |k, u| {
                        let Value::Pair(a, b) = k else { unreachable!("keys of a product set") };
                        Term::maps_to(&target, (**a).clone(), Term::maps_to(inner, (**b).clone(), u.clone())?)
                    },
                    None,
                )
            }
            Iso::FreeUnit => fold_free(x, &target, |_| Ok(Term::one()), None),
            Iso::FreeSum => {
                let Space::Biproduct(l, r) = &target else { unreachable!() };
                fold_free(
                    x,
                    &target,
                    |k| match k {
                        Value::Left(a) => Ok(Term::pair(Term::inject(l, (**a).clone())?, Term::zero((**r).clone()))),
                        Value::Right(b) => Ok(Term::pair(Term::zero((**l).clone()), Term::inject(r, (**b).clone())?)),
                        _ => unreachable!("values of a sum set"),
                    },
                    None,
                )
            }
            Iso::FreeProd => {
                let Space::Tensor(l, r) = &target else { unreachable!() };
                fold_free(
                    x,
                    &target,
                    |k| {
                        let Value::Pair(a, b) = k else { unreachable!("values of a product set") };
                        Ok(Term::tensor(Term::inject(l, (**a).clone())?, Term::inject(r, (**b).clone())?))
                    },
                    None,
                )
            }
            Iso::MapScalar => fold_map(x, &target, |a, r| Ok(Term::inject(&target, a.clone())?.scale(r.weight())), None),
            Iso::MapBiprod => {
                let Space::Biproduct(l, r) = &target else { unreachable!() };
                fold_map(
                    x,
                    &target,
                    |a, w| Ok(Term::pair(Term::maps_to(l, a.clone(), proj1(w)?)?, Term::maps_to(r, a.clone(), proj2(w)?)?)),
                    None,
                )
            }
            Iso::MapTensor => {
                let Space::Tensor(l, _) = &target else { unreachable!() };
                fold_map(
                    x,
                    &target,
                    |a, w| fold_tensor(w, &target, |u, v| Ok(Term::tensor(Term::maps_to(l, a.clone(), u.clone())?, v.clone()))),
                    None,
                )
            }
            Iso::CopowerTensor => {
                let Space::Tensor(l, _) = &target else { unreachable!() };
                let set = l.index_set().expect("free factor").clone();
                fold_map(
                    x,
                    &target,
                    |a, u| Ok(Term::tensor(Term::inject(l, a.clone())?, u.clone())),
                    Some(&mut |u| Ok(Term::tensor(Term::wild_one(set.clone()), u.clone()))),
                )
            }
            Iso::CompactSplit => {
                let Space::Biproduct(l, _) = &target else { unreachable!() };
                let one = Term::pair(Term::zero((**l).clone()), Term::one());
                fold_free(x, &target, |a| Ok(Term::pair(Term::inject(l, a.clone())?, Term::zero(Space::Scalar))), Some(&one))
            }
            Iso::CompactMapSplit => {
                let Space::Biproduct(l, r) = &target else { unreachable!() };
                fold_map(
                    x,
                    &target,
                    |a, u| Ok(Term::pair(Term::maps_to(l, a.clone(), u.clone())?, Term::zero((**r).clone()))),
                    Some(&mut |u| Ok(Term::pair(Term::zero((**l).clone()), u.clone()))),
                )
            }
        }
    }

    pub fn bwd<K: Ring>(self, x: &Term<K>) -> Result<Term<K>> {
        let target = self.bwd_space(x.space())?;
        match self {
            Iso::Cp0 => {
                if normalize(x).is_zero() {
                    Ok(Term::zero(target))
                } else {
                    Err(self.domain_error(x.space()))
                }
            }
            Iso::Cp1 => Term::maps_to(&target, Value::Unit, x.clone()),
            Iso::CpSum => fold_pair(x, &target, |p, q| {
                let left = fold_map(p, &target, |a, u| Term::maps_to(&target, Value::left(a.clone()), u.clone()), None)?;
                let right = fold_map(q, &target, |b, u| Term::maps_to(&target, Value::right(b.clone()), u.clone()), None)?;
                left.add(&right)
            }),
            Iso::CpProd => fold_map(
                x,
                &target,
                |a, w| fold_map(w, &target, |b, u| Term::maps_to(&target, Value::pair(a.clone(), b.clone()), u.clone()), None),
                None,
            ),
            Iso::FreeUnit => {
                let unit = Term::inject(&target, Value::Unit)?;
                Ok(unit.scale(x.weight()))
            }
            Iso::FreeSum => fold_pair(x, &target, |p, q| {
                let left = fold_free(p, &target, |a| Term::inject(&target, Value::left(a.clone())), None)?;
                let right = fold_free(q, &target, |b| Term::inject(&target, Value::right(b.clone())), None)?;
                left.add(&right)
            }),
            Iso::FreeProd => fold_tensor(x, &target, |u, v| {
                fold_free(u, &target, |a| fold_free(v, &target, |b| Term::inject(&target, Value::pair(a.clone(), b.clone())), None), None)
            }),
            Iso::MapScalar => fold_free(x, &target, |a| Term::maps_to(&target, a.clone(), Term::one()), None),
            Iso::MapBiprod => {
                let Space::FinMap(_, uv) = &target else { unreachable!() };
                let Space::Biproduct(us, vs) = &**uv else { unreachable!() };
                fold_pair(x, &target, |p, q| {
                    let left = fold_map(p, &target, |a, u| Term::maps_to(&target, a.clone(), Term::pair(u.clone(), Term::zero((**vs).clone()))), None)?;
                    let right = fold_map(q, &target, |a, v| Term::maps_to(&target, a.clone(), Term::pair(Term::zero((**us).clone()), v.clone())), None)?;
                    left.add(&right)
                })
            }
            Iso::MapTensor => fold_tensor(x, &target, |m, v| {
                fold_map(m, &target, |a, u| Term::maps_to(&target, a.clone(), Term::tensor(u.clone(), v.clone())), None)
            }),
            Iso::CopowerTensor => {
                let set = target.index_set().expect("map space").clone();
                fold_tensor(x, &target, |f, u| {
                    let wild = Term::wild_maps_to(set.clone(), u.clone());
                    fold_free(f, &target, |a| Term::maps_to(&target, a.clone(), u.clone()), Some(&wild))
                })
            }
            Iso::CompactSplit => {
                let set = target.index_set().expect("compact free").clone();
                fold_pair(x, &target, |p, r| include_compact(p)?.add(&Term::wild_one(set.clone()).scale(r.weight())))
            }
            Iso::CompactMapSplit => {
                let set = target.index_set().expect("compact map").clone();
                fold_pair(x, &target, |p, u| {
                    let finite = fold_map(p, &target, |a, w| Term::maps_to(&target, a.clone(), w.clone()), None)?;
                    finite.add(&Term::wild_maps_to(set.clone(), u.clone()))
                })
            }
        }
    }
}

impl fmt::Display for Iso {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Iso {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Iso::ALL.into_iter().find(|i| i.name() == s).ok_or_else(|| Error::query(format!("unknown isomorphism `{s}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normal::equal;
    use crate::ring::{Gf2, Integer};
    use crate::testing::random_term;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type T = Term<Integer>;

    fn z(n: i64) -> Integer {
        Integer::from(n)
    }

    fn s(x: &str) -> Value {
        Value::str(x)
    }

    #[test]
    fn round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (iso, space) in crate::testing::iso_domains() {
            let codomain = iso.fwd_space(&space).unwrap();
            for _ in 0..40 {
                let x: T = random_term(&mut rng, &space, 4, true);
                let y = iso.fwd(&x).unwrap();
                assert_eq!(y.space(), &codomain);
                assert!(equal(&iso.bwd(&y).unwrap(), &x).unwrap(), "{iso} bwd∘fwd on {x}");
                let y: T = random_term(&mut rng, &codomain, 4, true);
                if iso == Iso::Cp0 {
                    continue;
                }
                assert!(equal(&iso.fwd(&iso.bwd(&y).unwrap()).unwrap(), &y).unwrap(), "{iso} fwd∘bwd on {y}");
            }
        }
    }

    #[test]
    fn round_trips_gf2() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (iso, space) in crate::testing::iso_domains() {
            for _ in 0..10 {
                let x: Term<Gf2> = random_term(&mut rng, &space, 4, true);
                assert!(equal(&iso.bwd(&iso.fwd(&x).unwrap()).unwrap(), &x).unwrap());
            }
        }
    }

    #[test]
    fn free_prod_on_a_generator() {
        let space = Space::Free(PrimSet::prod(PrimSet::Str, PrimSet::Int));
        let x = T::inject(&space, Value::pair(s("a"), Value::Int(1))).unwrap();
        let y = Iso::FreeProd.fwd(&x).unwrap();
        assert_eq!(y.to_string(), "<a> ⊗ <1>");
    }

    #[test]
    fn compact_split_of_a_cofinite_set() {
        let space = Space::CompactFree(PrimSet::Str);
        let ab = T::inject(&space, s("a")).unwrap().add(&T::inject(&space, s("b")).unwrap()).unwrap();
        let x = T::wild_one(PrimSet::Str).sub(&ab).unwrap();
        let y = Iso::CompactSplit.fwd(&x).unwrap();
        let fs = Space::Free(PrimSet::Str);
        let expected = T::pair(
            T::inject(&fs, s("a")).unwrap().neg().sub(&T::inject(&fs, s("b")).unwrap()).unwrap(),
            T::scalar(z(1)),
        );
        assert!(equal(&y, &expected).unwrap(), "{y}");
    }

    #[test]
    fn cp0_only_inverts_zero() {
        let u = Space::Free(PrimSet::Str);
        let nonzero = T::inject(&u, s("a")).unwrap();
        assert!(matches!(Iso::Cp0.bwd(&nonzero), Err(Error::IsoDomain { .. })));
        assert!(Iso::Cp0.bwd(&T::zero(u)).is_ok());
    }

    #[test]
    fn domain_errors() {
        let x = T::inject(&Space::Free(PrimSet::Str), s("a")).unwrap();
        for iso in [Iso::Cp1, Iso::CpProd, Iso::FreeProd, Iso::CompactSplit] {
            assert!(matches!(iso.fwd(&x), Err(Error::IsoDomain { .. })), "{iso}");
        }
        assert_eq!("compactmap_split".parse::<Iso>().unwrap(), Iso::CompactMapSplit);
        assert!("nope".parse::<Iso>().is_err());
    }
}
