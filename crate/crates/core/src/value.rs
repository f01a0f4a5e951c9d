//! Index sets and their values.

use std::fmt;

/// A finitely described index set `A`, the basis of free modules and the key
/// type of (compact) maps.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PrimSet {
    /// The empty set. Only useful to state `0 ⇒ U ≅ 𝟎`.
    Void,
    Unit,
    Bool,
    Int,
    Str,
    Sum(Box<PrimSet>, Box<PrimSet>),
    Prod(Box<PrimSet>, Box<PrimSet>),
}

impl PrimSet {
    pub fn sum(a: PrimSet, b: PrimSet) -> Self {
        PrimSet::Sum(Box::new(a), Box::new(b))
    }

    pub fn prod(a: PrimSet, b: PrimSet) -> Self {
        PrimSet::Prod(Box::new(a), Box::new(b))
    }

    /// Whether `v` is an element of this set.
    pub fn contains(&self, v: &Value) -> bool {
        match (self, v) {
            (PrimSet::Unit, Value::Unit)
            | (PrimSet::Bool, Value::Bool(_))
            | (PrimSet::Int, Value::Int(_))
            | (PrimSet::Str, Value::Str(_)) => true,
            (PrimSet::Sum(a, _), Value::Left(x)) => a.contains(x),
            (PrimSet::Sum(_, b), Value::Right(y)) => b.contains(y),
            (PrimSet::Prod(a, b), Value::Pair(x, y)) => a.contains(x) && b.contains(y),
            _ => false,
        }
    }

    /// Name used in schema declarations, for the three column types.
    pub fn column_name(&self) -> Option<&'static str> {
        match self {
            PrimSet::Int => Some("int"),
            PrimSet::Str => Some("str"),
            PrimSet::Bool => Some("bool"),
            _ => None,
        }
    }

    pub fn from_column_name(name: &str) -> Option<Self> {
        match name {
            "int" => Some(PrimSet::Int),
            "str" => Some(PrimSet::Str),
            "bool" => Some(PrimSet::Bool),
            _ => None,
        }
    }
}

impl fmt::Display for PrimSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimSet::Void => f.write_str("0"),
            PrimSet::Unit => f.write_str("1"),
            PrimSet::Bool => f.write_str("Bool"),
            PrimSet::Int => f.write_str("Int"),
            PrimSet::Str => f.write_str("Str"),
            PrimSet::Sum(a, b) => write!(f, "({a} + {b})"),
            PrimSet::Prod(a, b) => write!(f, "({a} × {b})"),
        }
    }
}

/// An element of some [`PrimSet`].
///
/// The derived order is the canonical key order: `false < true`, integers
/// numerically, strings bytewise, `Left` before `Right`, pairs
/// lexicographically. Tries enumerate keys in exactly this order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Unit,
    Bool(bool),
    Int(i64),
    Str(String),
    Left(Box<Value>),
    Right(Box<Value>),
    Pair(Box<Value>, Box<Value>),
}

impl Value {
    pub fn str(s: impl Into<String>) -> Self {
        Value::Str(s.into())
    }

    pub fn left(v: Value) -> Self {
        Value::Left(Box::new(v))
    }

    pub fn right(v: Value) -> Self {
        Value::Right(Box::new(v))
    }

    pub fn pair(a: Value, b: Value) -> Self {
        Value::Pair(Box::new(a), Box::new(b))
    }

    /// Number of primitive components, the "size" of a key.
    pub fn size(&self) -> usize {
        match self {
            Value::Unit | Value::Bool(_) | Value::Int(_) => 1,
            Value::Str(s) => s.len().max(1),
            Value::Left(v) | Value::Right(v) => 1 + v.size(),
            Value::Pair(a, b) => a.size() + b.size(),
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(n) => Some(*n),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Value::Str(s) => Some(s),
            _ => None,
        }
    }
}

impl From<i64> for Value {
    fn from(n: i64) -> Self {
        Value::Int(n)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Str(s.to_owned())
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Unit => f.write_str("()"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Int(n) => write!(f, "{n}"),
            Value::Str(s) => f.write_str(s),
            Value::Left(v) => write!(f, "left {v}"),
            Value::Right(v) => write!(f, "right {v}"),
            Value::Pair(a, b) => write!(f, "({a}, {b})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership() {
        let s = PrimSet::prod(PrimSet::Str, PrimSet::sum(PrimSet::Str, PrimSet::Int));
        assert!(s.contains(&Value::pair("a".into(), Value::left("p".into()))));
        assert!(s.contains(&Value::pair("b".into(), Value::right(4.into()))));
        assert!(!s.contains(&Value::pair("b".into(), Value::right("4".into()))));
        assert!(!PrimSet::Void.contains(&Value::Unit));
    }

    #[test]
    fn canonical_order() {
        let mut vs = [
            Value::right(Value::Int(-5)),
            Value::left(Value::str("z")),
            Value::left(Value::str("ab")),
        ];
        vs.sort();
        assert_eq!(vs[0], Value::left(Value::str("ab")));
        assert_eq!(vs[2], Value::right(Value::Int(-5)));
        assert!(Value::Int(-3) < Value::Int(2));
        assert!(Value::pair(1.into(), 9.into()) < Value::pair(2.into(), 0.into()));
    }
}
