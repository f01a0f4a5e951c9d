//! Symbolic module elements.
//!
//! A [`Term`] is an immutable, shareable tree. Constructors only allocate a
//! node and check spaces; nothing is simplified until a normal form is asked
//! for.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::normal;
use crate::ring::Ring;
use crate::space::Space;
use crate::value::{PrimSet, Value};

#[derive(Debug)]
pub enum Node<K: Ring> {
    Zero,
    Add(Term<K>, Term<K>),
    Scale(K, Term<K>),
    Gen(Gen<K>),
}

/// Generators, by space.
#[derive(Debug)]
pub enum Gen<K: Ring> {
    /// The unit of `K`.
    One,
    /// `⟨a⟩` in `F[A]` or `F*[A]`.
    Inj(Value),
    /// The adjoined `1` of `F*[A]`.
    WildOne,
    /// `(u, v)` in `U ⊕ V`.
    Pair(Term<K>, Term<K>),
    /// `a ↦ u` in `A ⇒ U` or `A ⇒* U`.
    MapsTo(Value, Term<K>),
    /// `* ↦ u` in `A ⇒* U`.
    WildMapsTo(Term<K>),
    /// `u ⊗ v`.
    TensorPair(Term<K>, Term<K>),
    /// Unevaluated algebra product `x · y`.
    Mul(Term<K>, Term<K>),
}

/// A symbolic element of some module, tagged with its [`Space`].
pub struct Term<K: Ring> {
    space: Arc<Space>,
    node: Arc<Node<K>>,
}

impl<K: Ring> Clone for Term<K> {
    fn clone(&self) -> Self {
        Term { space: Arc::clone(&self.space), node: Arc::clone(&self.node) }
    }
}

impl<K: Ring> Node<K> {
    fn take_children(&mut self, out: &mut Vec<Term<K>>) {
        match std::mem::replace(self, Node::Zero) {
            Node::Zero => {}
            Node::Add(a, b) => out.extend([a, b]),
            Node::Scale(_, x) => out.push(x),
            Node::Gen(g) => match g {
                Gen::One | Gen::Inj(_) | Gen::WildOne => {}
                Gen::MapsTo(_, u) | Gen::WildMapsTo(u) => out.push(u),
                Gen::Pair(u, v) | Gen::TensorPair(u, v) | Gen::Mul(u, v) => out.extend([u, v]),
            },
        }
    }
}

// Long sums are deep trees; tear them down iteratively.
impl<K: Ring> Drop for Term<K> {
    fn drop(&mut self) {
        let Some(node) = Arc::get_mut(&mut self.node) else { return };
        if matches!(node, Node::Zero | Node::Gen(Gen::One | Gen::Inj(_) | Gen::WildOne)) {
            return;
        }
        let mut stack = Vec::new();
        node.take_children(&mut stack);
        while let Some(mut t) = stack.pop() {
            if let Some(n) = Arc::get_mut(&mut t.node) {
                n.take_children(&mut stack);
            }
        }
    }
}

impl<K: Ring> fmt::Debug for Term<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Term({self} : {})", self.space)
    }
}

fn check_value(set: &PrimSet, a: &Value) -> Result<()> {
    if set.contains(a) {
        Ok(())
    } else {
        Err(Error::ValueNotInSet { value: a.clone(), set: set.clone() })
    }
}

impl<K: Ring> Term<K> {
    fn make(space: Arc<Space>, node: Node<K>) -> Self {
        Term { space, node: Arc::new(node) }
    }

    fn gen(space: Space, g: Gen<K>) -> Self {
        Self::make(Arc::new(space), Node::Gen(g))
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn node(&self) -> &Node<K> {
        &self.node
    }

    pub fn zero(space: Space) -> Self {
        Self::make(Arc::new(space), Node::Zero)
    }

    /// The generator `1` of `K`.
    pub fn one() -> Self {
        Self::gen(Space::Scalar, Gen::One)
    }

    /// `r · 1` in `K`.
    pub fn scalar(r: K) -> Self {
        Self::one().scale(r)
    }

    /// `⟨a⟩` in a free or compact free module.
    pub fn inject(space: &Space, a: Value) -> Result<Self> {
        match space {
            Space::Free(set) | Space::CompactFree(set) => {
                check_value(set, &a)?;
                Ok(Self::gen(space.clone(), Gen::Inj(a)))
            }
            other => Err(Error::WrongGenerator(other.clone())),
        }
    }

    /// The adjoined `1` of `F*[set]`.
    pub fn wild_one(set: PrimSet) -> Self {
        Self::gen(Space::CompactFree(set), Gen::WildOne)
    }

    pub fn pair(u: Term<K>, v: Term<K>) -> Self {
        let space = Space::biproduct(u.space().clone(), v.space().clone());
        Self::gen(space, Gen::Pair(u, v))
    }

    /// `a ↦ u` in `space`, which must be `A ⇒ U` or `A ⇒* U` with `u : U`.
    pub fn maps_to(space: &Space, a: Value, u: Term<K>) -> Result<Self> {
        match space {
            Space::FinMap(set, leaf) | Space::CompactMap(set, leaf) => {
                check_value(set, &a)?;
                if **leaf != *u.space() {
                    return Err(Error::mismatch(leaf, u.space()));
                }
                Ok(Self::gen(space.clone(), Gen::MapsTo(a, u)))
            }
            other => Err(Error::WrongGenerator(other.clone())),
        }
    }

    /// `* ↦ u` in `set ⇒* U`.
    pub fn wild_maps_to(set: PrimSet, u: Term<K>) -> Self {
        let space = Space::compact_map(set, u.space().clone());
        Self::gen(space, Gen::WildMapsTo(u))
    }

    pub fn tensor(u: Term<K>, v: Term<K>) -> Self {
        let space = Space::tensor(u.space().clone(), v.space().clone());
        Self::gen(space, Gen::TensorPair(u, v))
    }

    /// Right-nested tensor of one or more terms. Panics on an empty list.
    pub fn tensor_all(factors: impl IntoIterator<Item = Term<K>>) -> Self {
        let mut fs: Vec<Term<K>> = factors.into_iter().collect();
        let mut acc = fs.pop().expect("tensor_all needs at least one factor");
        while let Some(f) = fs.pop() {
            acc = Self::tensor(f, acc);
        }
        acc
    }

    pub fn add(&self, other: &Term<K>) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::mismatch(&self.space, &other.space));
        }
        Ok(Self::make(Arc::clone(&self.space), Node::Add(self.clone(), other.clone())))
    }

    pub fn sub(&self, other: &Term<K>) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, r: K) -> Self {
        Self::make(Arc::clone(&self.space), Node::Scale(r, self.clone()))
    }

    pub fn neg(&self) -> Self {
        self.scale(K::one().neg())
    }

    /// The symbolic product `self · other`; evaluated only on normalization.
    pub fn mul(&self, other: &Term<K>) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::mismatch(&self.space, &other.space));
        }
        Ok(Self::make(Arc::clone(&self.space), Node::Gen(Gen::Mul(self.clone(), other.clone()))))
    }

    /// Balanced sum of `terms`, all of which must live in `space`.
    pub fn sum(space: &Space, terms: impl IntoIterator<Item = Term<K>>) -> Result<Self> {
        let mut layer: Vec<Term<K>> = terms.into_iter().collect();
        if let Some(t) = layer.iter().find(|t| t.space() != space) {
            return Err(Error::mismatch(space, t.space()));
        }
        if layer.is_empty() {
            return Ok(Self::zero(space.clone()));
        }
        while layer.len() > 1 {
            let mut next = Vec::with_capacity(layer.len().div_ceil(2));
            let mut it = layer.into_iter();
            while let Some(a) = it.next() {
                match it.next() {
                    Some(b) => next.push(Self::make(Arc::clone(&a.space), Node::Add(a, b))),
                    None => next.push(a),
                }
            }
            layer = next;
        }
        Ok(layer.pop().expect("nonempty"))
    }

    /// Left-nested product of one or more terms, kept symbolic.
    pub fn product(factors: &[Term<K>]) -> Result<Self> {
        let (first, rest) = factors.split_first().ok_or_else(|| Error::query("empty product"))?;
        rest.iter().try_fold(first.clone(), |acc, f| acc.mul(f))
    }

    /// The multiplicative unit of `space`.
    pub fn unit_one(space: &Space) -> Result<Self> {
        match space {
            Space::Scalar => Ok(Self::one()),
            Space::CompactFree(set) => Ok(Self::wild_one(set.clone())),
            Space::CompactMap(set, u) => Ok(Self::wild_maps_to(set.clone(), Self::unit_one(u)?)),
            Space::Tensor(u, v) => Ok(Self::tensor(Self::unit_one(u)?, Self::unit_one(v)?)),
            Space::Biproduct(u, v) => Ok(Self::pair(Self::unit_one(u)?, Self::unit_one(v)?)),
            Space::Free(_) | Space::FinMap(..) => Err(Error::NoUnit(space.clone())),
        }
    }

    /// The term as a linear combination of generator nodes, flattening
    /// `Zero`, `Add` and `Scale` without recursion.
    pub fn linear_combination(&self) -> Vec<(K, &Term<K>)> {
        let mut out = Vec::new();
        let mut stack: Vec<(Option<K>, &Term<K>)> = vec![(None, self)];
        while let Some((c, t)) = stack.pop() {
            match t.node() {
                Node::Zero => {}
                Node::Add(a, b) => {
                    stack.push((c.clone(), b));
                    stack.push((c, a));
                }
                Node::Scale(r, x) => {
                    let c = match c {
                        Some(c) => c.mul(r),
                        None => r.clone(),
                    };
                    stack.push((Some(c), x));
                }
                Node::Gen(_) => out.push((c.unwrap_or_else(K::one), t)),
            }
        }
        out
    }

    /// The generator of a term built by a generator constructor.
    pub fn as_gen(&self) -> Option<&Gen<K>> {
        match self.node() {
            Node::Gen(g) => Some(g),
            _ => None,
        }
    }

    /// The weight `#x`, computed without normalizing (except under products).
    pub fn weight(&self) -> K {
        let mut total = K::zero();
        for (c, t) in self.linear_combination() {
            let w = match t.as_gen().expect("linear combination yields generators") {
                Gen::One | Gen::Inj(_) | Gen::WildOne => K::one(),
                Gen::Pair(u, v) => u.weight().add(&v.weight()),
                Gen::MapsTo(_, u) | Gen::WildMapsTo(u) => u.weight(),
                Gen::TensorPair(u, v) => u.weight().mul(&v.weight()),
                Gen::Mul(..) => normal::normalize(t).weight(),
            };
            total = total.add(&c.mul(&w));
        }
        total
    }

    /// Number of nodes, counting shared subterms once per occurrence.
    pub fn size(&self) -> usize {
        let mut n = 0;
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            n += 1;
            match t.node() {
                Node::Zero => {}
                Node::Add(a, b) => {
                    stack.push(a);
                    stack.push(b);
                }
                Node::Scale(_, x) => stack.push(x),
                Node::Gen(g) => match g {
                    Gen::One | Gen::Inj(_) | Gen::WildOne => {}
                    Gen::MapsTo(_, u) | Gen::WildMapsTo(u) => stack.push(u),
                    Gen::Pair(u, v) | Gen::TensorPair(u, v) | Gen::Mul(u, v) => {
                        stack.push(u);
                        stack.push(v);
                    }
                },
            }
        }
        n
    }

    fn render(&self, f: &mut fmt::Formatter<'_>, top: bool) -> fmt::Result {
        let open = |f: &mut fmt::Formatter<'_>| if top { Ok(()) } else { f.write_str("(") };
        let close = |f: &mut fmt::Formatter<'_>| if top { Ok(()) } else { f.write_str(")") };
        match self.node() {
            Node::Zero => f.write_str("0"),
            Node::Add(..) => {
                let mut parts = Vec::new();
                let mut stack = vec![self];
                while let Some(t) = stack.pop() {
                    match t.node() {
                        Node::Add(a, b) => {
                            stack.push(b);
                            stack.push(a);
                        }
                        _ => parts.push(t),
                    }
                }
                open(f)?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    p.render(f, false)?;
                }
                close(f)
            }
            Node::Scale(r, x) => {
                write!(f, "{r}*")?;
                x.render(f, false)
            }
            Node::Gen(g) => match g {
                Gen::One | Gen::WildOne => f.write_str("1"),
                Gen::Inj(a) => write!(f, "<{a}>"),
                Gen::Pair(u, v) => {
                    f.write_str("(")?;
                    u.render(f, true)?;
                    f.write_str(", ")?;
                    v.render(f, true)?;
                    f.write_str(")")
                }
                Gen::MapsTo(a, u) => {
                    open(f)?;
                    write!(f, "{a} ↦ ")?;
                    u.render(f, false)?;
                    close(f)
                }
                Gen::WildMapsTo(u) => {
                    open(f)?;
                    f.write_str("* ↦ ")?;
                    u.render(f, false)?;
                    close(f)
                }
                Gen::TensorPair(u, v) | Gen::Mul(u, v) => {
                    let op = if matches!(g, Gen::Mul(..)) { " · " } else { " ⊗ " };
                    open(f)?;
                    u.render(f, false)?;
                    f.write_str(op)?;
                    v.render(f, false)?;
                    close(f)
                }
            },
        }
    }
}

impl<K: Ring> fmt::Display for Term<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.render(f, true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Integer;

    type T = Term<Integer>;

    fn z(n: i64) -> Integer {
        Integer::from(n)
    }

    fn free() -> Space {
        Space::Free(PrimSet::Str)
    }

    fn inj(s: &str) -> T {
        T::inject(&free(), Value::str(s)).unwrap()
    }

    #[test]
    fn rendering() {
        let x = inj("a").scale(z(3)).add(&inj("b")).unwrap();
        let t = T::tensor(x, T::wild_one(PrimSet::Int));
        assert_eq!(t.to_string(), "(3*<a> + <b>) ⊗ 1");
        assert_eq!(t.space().to_string(), "(F[Str] ⊗ F*[Int])");
    }

    #[test]
    fn constructors_check_spaces() {
        assert!(inj("a").add(&T::wild_one(PrimSet::Str)).is_err());
        assert!(T::inject(&free(), Value::Int(3)).is_err());
        assert!(T::inject(&Space::Scalar, Value::Int(3)).is_err());
        let m = Space::fin_map(PrimSet::Int, free());
        assert!(T::maps_to(&m, Value::Int(2), inj("a")).is_ok());
        assert!(T::maps_to(&m, Value::Int(2), T::one()).is_err());
        assert!(T::unit_one(&free()).is_err());
    }

    #[test]
    fn constructors_do_not_simplify() {
        let x = inj("a").add(&inj("a").neg()).unwrap();
        assert_eq!(x.size(), 4);
        let big = T::sum(&free(), (0..1000).map(|i| inj(&i.to_string()))).unwrap();
        assert_eq!(big.size(), 1999);
        let p = big.mul(&big).unwrap();
        assert_eq!(p.size(), 2 * 1999 + 1);
    }

    #[test]
    fn weight_without_expansion() {
        let a = T::sum(&free(), (0..7).map(|i| inj(&format!("a{i}")))).unwrap();
        let b = T::sum(&free(), (0..5).map(|i| inj(&format!("b{i}")))).unwrap();
        assert_eq!(T::tensor(a, b).weight(), z(35));
        assert_eq!(T::wild_one(PrimSet::Str).weight(), z(1));
        let x = inj("a").scale(z(3)).add(&inj("b").scale(z(-2))).unwrap();
        assert_eq!(x.weight(), z(1));
        assert_eq!(T::pair(x.clone(), inj("c")).weight(), z(2));
    }

    #[test]
    fn deep_sums_do_not_overflow_the_stack() {
        let mut x = T::zero(free());
        for i in 0..200_000 {
            x = x.add(&inj(if i % 2 == 0 { "a" } else { "b" })).unwrap();
        }
        assert_eq!(x.weight(), z(200_000));
        assert_eq!(x.linear_combination().len(), 200_000);
    }
}
