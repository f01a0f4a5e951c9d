//! The fixed registry of column functions and selection predicates.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::value::{PrimSet, Value};

use super::Schema;

/// A named total function on column values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapFn {
    Id,
    Upper,
    Lower,
    Reverse,
    /// String length in characters.
    Length,
    Neg,
    Abs,
    Not,
    Add(i64),
    Mul(i64),
    /// Euclidean remainder; the modulus must be positive.
    Mod(i64),
    Const(Value),
}

impl MapFn {
    pub const NULLARY: [&'static str; 8] = ["id", "upper", "lower", "reverse", "length", "neg", "abs", "not"];
    pub const UNARY: [&'static str; 4] = ["add", "mul", "mod", "const"];

    pub fn name(&self) -> &'static str {
        match self {
            MapFn::Id => "id",
            MapFn::Upper => "upper",
            MapFn::Lower => "lower",
            MapFn::Reverse => "reverse",
            MapFn::Length => "length",
            MapFn::Neg => "neg",
            MapFn::Abs => "abs",
            MapFn::Not => "not",
            MapFn::Add(_) => "add",
            MapFn::Mul(_) => "mul",
            MapFn::Mod(_) => "mod",
            MapFn::Const(_) => "const",
        }
    }

    pub fn nullary(name: &str) -> Option<Self> {
        Some(match name {
            "id" => MapFn::Id,
            "upper" => MapFn::Upper,
            "lower" => MapFn::Lower,
            "reverse" => MapFn::Reverse,
            "length" => MapFn::Length,
            "neg" => MapFn::Neg,
            "abs" => MapFn::Abs,
            "not" => MapFn::Not,
            _ => return None,
        })
    }

    /// Builds a function taking one literal argument.
    pub fn unary(name: &str, arg: Value) -> Result<Self> {
        let int = || arg.as_int().ok_or_else(|| Error::query(format!("`{name}` takes an integer argument")));
        Ok(match name {
            "add" => MapFn::Add(int()?),
            "mul" => MapFn::Mul(int()?),
            "mod" => {
                let m = int()?;
                if m <= 0 {
                    return Err(Error::query("`mod` needs a positive modulus"));
                }
                MapFn::Mod(m)
            }
            "const" => {
                literal_type(&arg)?;
                MapFn::Const(arg)
            }
            _ => return Err(Error::query(format!("unknown function `{name}`"))),
        })
    }

    /// The result type on inputs of type `input`.
    pub fn codomain(&self, input: &PrimSet) -> Result<PrimSet> {
        let want = |t: PrimSet, out: PrimSet| {
            if *input == t {
                Ok(out)
            } else {
                Err(Error::query(format!("`{}` expects {t} but the column has type {input}", self.name())))
            }
        };
        match self {
            MapFn::Id => Ok(input.clone()),
            MapFn::Upper | MapFn::Lower | MapFn::Reverse => want(PrimSet::Str, PrimSet::Str),
            MapFn::Length => want(PrimSet::Str, PrimSet::Int),
            MapFn::Neg | MapFn::Abs | MapFn::Add(_) | MapFn::Mul(_) | MapFn::Mod(_) => want(PrimSet::Int, PrimSet::Int),
            MapFn::Not => want(PrimSet::Bool, PrimSet::Bool),
            MapFn::Const(v) => literal_type(v),
        }
    }

    pub fn apply(&self, v: &Value) -> Result<Value> {
        let overflow = || Error::query(format!("integer overflow in `{}` applied to {v}", self.name()));
        let int = |f: &dyn Fn(i64) -> Option<i64>| match v {
            Value::Int(n) => f(*n).map(Value::Int).ok_or_else(overflow),
            _ => Err(self.type_error(v)),
        };
        let text = |f: &dyn Fn(&str) -> String| match v {
            Value::Str(s) => Ok(Value::str(f(s))),
            _ => Err(self.type_error(v)),
        };
        match self {
            MapFn::Id => Ok(v.clone()),
            MapFn::Upper => text(&|s| s.to_uppercase()),
            MapFn::Lower => text(&|s| s.to_lowercase()),
            MapFn::Reverse => text(&|s| s.chars().rev().collect()),
            MapFn::Length => match v {
                Value::Str(s) => Ok(Value::Int(s.chars().count() as i64)),
                _ => Err(self.type_error(v)),
            },
            MapFn::Neg => int(&|n| n.checked_neg()),
            MapFn::Abs => int(&|n| n.checked_abs()),
            MapFn::Add(k) => int(&|n| n.checked_add(*k)),
            MapFn::Mul(k) => int(&|n| n.checked_mul(*k)),
            MapFn::Mod(k) => int(&|n| n.checked_rem_euclid(*k)),
            MapFn::Not => match v {
                Value::Bool(b) => Ok(Value::Bool(!b)),
                _ => Err(self.type_error(v)),
            },
            MapFn::Const(c) => Ok(c.clone()),
        }
    }

    fn type_error(&self, v: &Value) -> Error {
        Error::query(format!("`{}` cannot be applied to {v}", self.name()))
    }
}

/// The column type of a literal.
pub fn literal_type(v: &Value) -> Result<PrimSet> {
    match v {
        Value::Int(_) => Ok(PrimSet::Int),
        Value::Str(_) => Ok(PrimSet::Str),
        Value::Bool(_) => Ok(PrimSet::Bool),
        other => Err(Error::query(format!("{other} is not a column literal"))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub const ALL: [CmpOp; 6] = [CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge];

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }

    fn holds(self, o: Ordering) -> bool {
        match self {
            CmpOp::Eq => o.is_eq(),
            CmpOp::Ne => o.is_ne(),
            CmpOp::Lt => o.is_lt(),
            CmpOp::Le => o.is_le(),
            CmpOp::Gt => o.is_gt(),
            CmpOp::Ge => o.is_ge(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Operand {
    Attr(String),
    Lit(Value),
    Apply(MapFn, Box<Operand>),
}

impl Operand {
    fn type_in(&self, schema: &Schema) -> Result<PrimSet> {
        match self {
            Operand::Attr(a) => Ok(schema.attrs()[schema.require(a)?].1.clone()),
            Operand::Lit(v) => literal_type(v),
            Operand::Apply(f, x) => f.codomain(&x.type_in(schema)?),
        }
    }

    fn collect(&self, schema: &Schema, out: &mut BTreeSet<usize>) -> Result<()> {
        match self {
            Operand::Attr(a) => {
                out.insert(schema.require(a)?);
            }
            Operand::Lit(_) => {}
            Operand::Apply(_, x) => x.collect(schema, out)?,
        }
        Ok(())
    }

    fn eval(&self, schema: &Schema, get: &dyn Fn(usize) -> Value) -> Result<Value> {
        match self {
            Operand::Attr(a) => Ok(get(schema.require(a)?)),
            Operand::Lit(v) => Ok(v.clone()),
            Operand::Apply(f, x) => f.apply(&x.eval(schema, get)?),
        }
    }
}

/// A decidable predicate on tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pred {
    True,
    False,
    Cmp(CmpOp, Operand, Operand),
    And(Vec<Pred>),
    Or(Vec<Pred>),
    Not(Box<Pred>),
}

impl Pred {
    /// Type-checks against `schema`: both sides of every comparison must
    /// have the same type.
    pub fn check(&self, schema: &Schema) -> Result<()> {
        match self {
            Pred::True | Pred::False => Ok(()),
            Pred::Cmp(op, l, r) => {
                let (lt, rt) = (l.type_in(schema)?, r.type_in(schema)?);
                if lt != rt {
                    return Err(Error::query(format!("cannot compare {lt} with {rt} in `{}`", op.symbol())));
                }
                Ok(())
            }
            Pred::And(ps) | Pred::Or(ps) => ps.iter().try_for_each(|p| p.check(schema)),
            Pred::Not(p) => p.check(schema),
        }
    }

    /// Positions of the attributes the predicate reads.
    pub fn columns(&self, schema: &Schema) -> Result<BTreeSet<usize>> {
        let mut out = BTreeSet::new();
        self.collect(schema, &mut out)?;
        Ok(out)
    }

    fn collect(&self, schema: &Schema, out: &mut BTreeSet<usize>) -> Result<()> {
        match self {
            Pred::True | Pred::False => Ok(()),
            Pred::Cmp(_, l, r) => {
                l.collect(schema, out)?;
                r.collect(schema, out)
            }
            Pred::And(ps) | Pred::Or(ps) => ps.iter().try_for_each(|p| p.collect(schema, out)),
            Pred::Not(p) => p.collect(schema, out),
        }
    }

    /// Evaluates on the tuple whose attribute at position `i` is `get(i)`.
    pub fn eval(&self, schema: &Schema, get: &dyn Fn(usize) -> Value) -> Result<bool> {
        Ok(match self {
            Pred::True => true,
            Pred::False => false,
            Pred::Cmp(op, l, r) => op.holds(l.eval(schema, get)?.cmp(&r.eval(schema, get)?)),
            Pred::And(ps) => {
                for p in ps {
                    if !p.eval(schema, get)? {
                        return Ok(false);
                    }
                }
                true
            }
            Pred::Or(ps) => {
                for p in ps {
                    if p.eval(schema, get)? {
                        return Ok(true);
                    }
                }
                false
            }
            Pred::Not(p) => !p.eval(schema, get)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn functions() {
        assert_eq!(MapFn::Upper.apply(&Value::str("foo")).unwrap(), Value::str("FOO"));
        assert_eq!(MapFn::Length.apply(&Value::str("héllo")).unwrap(), Value::Int(5));
        assert_eq!(MapFn::Mod(3).apply(&Value::Int(-1)).unwrap(), Value::Int(2));
        assert!(MapFn::Add(1).apply(&Value::Int(i64::MAX)).is_err());
        assert!(MapFn::Upper.codomain(&PrimSet::Int).is_err());
        assert!(MapFn::unary("mod", Value::Int(0)).is_err());
        assert_eq!(MapFn::unary("const", Value::str("c")).unwrap().codomain(&PrimSet::Int).unwrap(), PrimSet::Str);
    }

    #[test]
    fn predicates() {
        let schema = Schema::parse("A:str,B:int").unwrap();
        let tuple = [Value::str("foo"), Value::Int(2)];
        let get = |i: usize| tuple[i].clone();
        let len3 = Pred::Cmp(CmpOp::Eq, Operand::Apply(MapFn::Length, Box::new(Operand::Attr("A".into()))), Operand::Lit(Value::Int(3)));
        len3.check(&schema).unwrap();
        assert!(len3.eval(&schema, &get).unwrap());
        let both = Pred::And(vec![len3.clone(), Pred::Cmp(CmpOp::Gt, Operand::Attr("B".into()), Operand::Lit(Value::Int(2)))]);
        assert!(!both.eval(&schema, &get).unwrap());
        assert_eq!(both.columns(&schema).unwrap().into_iter().collect::<Vec<_>>(), vec![0, 1]);
        let bad = Pred::Cmp(CmpOp::Eq, Operand::Attr("A".into()), Operand::Lit(Value::Int(1)));
        assert!(bad.check(&schema).is_err());
        assert!(Pred::Cmp(CmpOp::Eq, Operand::Attr("Z".into()), Operand::Lit(Value::Int(1))).check(&schema).is_err());
    }
}
