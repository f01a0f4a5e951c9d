//! Module descriptors.

use std::fmt;

use crate::value::PrimSet;

/// Which module a term inhabits.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Space {
    /// The ring `K` itself.
    Scalar,
    /// `F[A]`: finite linear combinations of generators `⟨a⟩`.
    Free(PrimSet),
    /// `F*[A]`: `F[A]` with an adjoined unit `1`.
    CompactFree(PrimSet),
    /// `U ⊕ V`.
    Biproduct(Box<Space>, Box<Space>),
    /// `A ⇒ U`: finitely supported maps.
    FinMap(PrimSet, Box<Space>),
    /// `A ⇒* U`: finite maps plus wildcard entries `* ↦ u`.
    CompactMap(PrimSet, Box<Space>),
    /// `U ⊗ V`.
    Tensor(Box<Space>, Box<Space>),
}

impl Space {
    pub fn biproduct(u: Space, v: Space) -> Self {
        Space::Biproduct(Box::new(u), Box::new(v))
    }

    pub fn fin_map(a: PrimSet, u: Space) -> Self {
        Space::FinMap(a, Box::new(u))
    }

    pub fn compact_map(a: PrimSet, u: Space) -> Self {
        Space::CompactMap(a, Box::new(u))
    }

    pub fn tensor(u: Space, v: Space) -> Self {
        Space::Tensor(Box::new(u), Box::new(v))
    }

    /// Right-nested tensor `S₁ ⊗ (S₂ ⊗ (… ⊗ Sₘ))`; a single factor is returned as is.
    ///
    /// Panics on an empty list.
    pub fn tensor_of(factors: impl IntoIterator<Item = Space>) -> Self {
        let mut fs: Vec<Space> = factors.into_iter().collect();
        let mut acc = fs.pop().expect("tensor_of needs at least one factor");
        while let Some(f) = fs.pop() {
            acc = Space::tensor(f, acc);
        }
        acc
    }

    /// Factors of a (possibly nested) tensor, left to right.
    pub fn tensor_factors(&self) -> Vec<&Space> {
        let mut out = Vec::new();
        fn walk<'a>(s: &'a Space, out: &mut Vec<&'a Space>) {
            match s {
                Space::Tensor(u, v) => {
                    walk(u, out);
                    walk(v, out);
                }
                other => out.push(other),
            }
        }
        walk(self, &mut out);
        out
    }

    /// Key set of a free or map space.
    pub fn index_set(&self) -> Option<&PrimSet> {
        match self {
            Space::Free(a) | Space::CompactFree(a) | Space::FinMap(a, _) | Space::CompactMap(a, _) => {
                Some(a)
            }
            _ => None,
        }
    }

    /// Whether elements may carry a wildcard baseline at the top level.
    pub fn is_compact(&self) -> bool {
        matches!(self, Space::CompactFree(_) | Space::CompactMap(..))
    }

    /// Whether this space is represented as a keyed map (free modules are
    /// maps into `K`).
    pub fn is_keyed(&self) -> bool {
        self.index_set().is_some()
    }

    /// The value space of a keyed space: `K` for free modules, `U` for maps.
    pub fn leaf_space(&self) -> Option<&Space> {
        match self {
            Space::Free(_) | Space::CompactFree(_) => Some(&Space::Scalar),
            Space::FinMap(_, u) | Space::CompactMap(_, u) => Some(u),
            _ => None,
        }
    }

    /// Whether the space carries a multiplicative unit.
    ///
    /// Free modules and finite maps over an infinite index set have none;
    /// since we never identify `1` with a finite sum, we treat all of them as
    /// non-unital.
    pub fn has_unit(&self) -> bool {
        match self {
            Space::Scalar => true,
            Space::CompactFree(_) => true,
            Space::CompactMap(_, u) => u.has_unit(),
            Space::Tensor(u, v) | Space::Biproduct(u, v) => u.has_unit() && v.has_unit(),
            Space::Free(_) | Space::FinMap(..) => false,
        }
    }

    /// Whether any tensor occurs in the space, in which case normal forms are
    /// not unique and equality falls back to expansion.
    pub fn contains_tensor(&self) -> bool {
        match self {
            Space::Tensor(..) => true,
            Space::Scalar | Space::Free(_) | Space::CompactFree(_) => false,
            Space::Biproduct(u, v) => u.contains_tensor() || v.contains_tensor(),
            Space::FinMap(_, u) | Space::CompactMap(_, u) => u.contains_tensor(),
        }
    }

    /// Replaces every `F[A]` factor of a tensor by `F*[A]` (the inclusion used
    /// for joins). Other spaces are returned unchanged.
    pub fn compactified(&self) -> Space {
        match self {
            Space::Free(a) => Space::CompactFree(a.clone()),
            Space::Tensor(u, v) => Space::tensor(u.compactified(), v.compactified()),
            other => other.clone(),
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Scalar => f.write_str("K"),
            Space::Free(a) => write!(f, "F[{a}]"),
            Space::CompactFree(a) => write!(f, "F*[{a}]"),
            Space::Biproduct(u, v) => write!(f, "({u} ⊕ {v})"),
            Space::FinMap(a, u) => write!(f, "({a} ⇒ {u})"),
            Space::CompactMap(a, u) => write!(f, "({a} ⇒* {u})"),
            Space::Tensor(u, v) => write!(f, "({u} ⊗ {v})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tensor_of_nests_right() {
        let s = Space::tensor_of([
            Space::Free(PrimSet::Str),
            Space::Free(PrimSet::Int),
            Space::Free(PrimSet::Str),
        ]);
        assert_eq!(s.to_string(), "(F[Str] ⊗ (F[Int] ⊗ F[Str]))");
        assert_eq!(s.tensor_factors().len(), 3);
        assert!(!s.has_unit());
        assert!(s.compactified().has_unit());
    }
}
