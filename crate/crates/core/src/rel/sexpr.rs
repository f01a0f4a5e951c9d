//! S-expression syntax for queries.
//!
//! ```text
//! query   := NAME
//!          | (join query query*)
//!          | (select pred query)
//!          | (project [NAME*] query) | (rename [NAME*] query) | (as [NAME*] query)
//!          | (union query query) | (diff query query) | (intersect query query)
//!          | (product query query) | (update query query)
//!          | (outer left|right|full query query)
//!          | (agg sum|min|max [NAME*] NAME query) | (agg count [NAME*] query)
//!          | (map fn NAME query)
//!          | (clamp query)
//! fn      := NAME | (NAME literal)
//! pred    := true | false | (CMP operand operand) | (and pred*) | (or pred*) | (not pred)
//! CMP     := = | != | < | <= | > | >=
//! operand := NAME | literal | (fn operand)
//! literal := INT | STRING | true | false
//! ```
//!
//! Printing with `Display` gives the canonical form, which parses back to
//! the same query.

use std::fmt;

use crate::value::Value;

use super::func::{CmpOp, MapFn, Operand, Pred};
use super::query::{AggFold, OuterKind, Query};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input.
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for ParseError {}

type PResult<T> = Result<T, ParseError>;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Open,
    Close,
    OpenBracket,
    CloseBracket,
    Str(String),
    Atom(String),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Open => f.write_str("`(`"),
            Tok::Close => f.write_str("`)`"),
            Tok::OpenBracket => f.write_str("`[`"),
            Tok::CloseBracket => f.write_str("`]`"),
            Tok::Str(s) => write!(f, "string {s:?}"),
            Tok::Atom(a) => write!(f, "`{a}`"),
        }
    }
}

fn tokenize(src: &str) -> PResult<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            ';' => {
                while chars.next_if(|&(_, c)| c != '\n').is_some() {}
            }
            '(' | ')' | '[' | ']' => {
                chars.next();
                out.push((
                    i,
                    match c {
                        '(' => Tok::Open,
                        ')' => Tok::Close,
                        '[' => Tok::OpenBracket,
                        _ => Tok::CloseBracket,
                    },
                ));
            }
            '"' => {
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        None => return Err(ParseError { offset: i, message: "unterminated string".into() }),
                        Some((_, '"')) => break,
                        Some((j, '\\')) => match chars.next() {
                            Some((_, '"')) => s.push('"'),
                            Some((_, '\\')) => s.push('\\'),
                            Some((_, 'n')) => s.push('\n'),
                            Some((_, 't')) => s.push('\t'),
                            _ => return Err(ParseError { offset: j, message: "unknown escape in string".into() }),
                        },
                        Some((_, c)) => s.push(c),
                    }
                }
                out.push((i, Tok::Str(s)));
            }
            _ => {
                let mut s = String::new();
                while let Some((_, c)) = chars.next_if(|&(_, c)| !c.is_whitespace() && !"()[]\";".contains(c)) {
                    s.push(c);
                }
                out.push((i, Tok::Atom(s)));
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn error<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(ParseError { offset: self.offset(), message: message.into() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn next(&mut self) -> PResult<Tok> {
        match self.toks.get(self.pos) {
            Some((_, t)) => {
                self.pos += 1;
                Ok(t.clone())
            }
            None => self.error("unexpected end of input"),
        }
    }

    fn expect(&mut self, want: Tok) -> PResult<()> {
        let at = self.offset();
        let got = self.next()?;
        if got == want {
            Ok(())
        } else {
            Err(ParseError { offset: at, message: format!("expected {want}, found {got}") })
        }
    }

    fn atom(&mut self, what: &str) -> PResult<String> {
        let at = self.offset();
        match self.next()? {
            Tok::Atom(a) => Ok(a),
            other => Err(ParseError { offset: at, message: format!("expected {what}, found {other}") }),
        }
    }

    fn name(&mut self, what: &str) -> PResult<String> {
        let at = self.offset();
        let a = self.atom(what)?;
        if is_reserved_literal(&a) {
            return Err(ParseError { offset: at, message: format!("expected {what}, found literal `{a}`") });
        }
        Ok(a)
    }

    fn names(&mut self) -> PResult<Vec<String>> {
        self.expect(Tok::OpenBracket)?;
        let mut out = Vec::new();
        while self.peek() != Some(&Tok::CloseBracket) {
            out.push(self.name("an attribute name")?);
        }
        self.next()?;
        Ok(out)
    }

    fn query(&mut self) -> PResult<Query> {
        let at = self.offset();
        match self.next()? {
            Tok::Atom(a) if !is_reserved_literal(&a) => return Ok(Query::Load(a)),
            Tok::Open => {}
            other => return Err(ParseError { offset: at, message: format!("expected a query, found {other}") }),
        }
        let head_at = self.offset();
        let head = self.atom("an operator")?;
        let b = Box::new;
        let q = match head.as_str() {
            "join" => {
                let mut xs = vec![self.query()?];
                while self.peek() != Some(&Tok::Close) {
                    xs.push(self.query()?);
                }
                Query::Join(xs)
            }
            "select" => Query::Select(self.pred()?, b(self.query()?)),
            "project" => Query::Project(self.names()?, b(self.query()?)),
            "rename" => Query::Rename(self.names()?, b(self.query()?)),
            "as" => Query::As(self.names()?, b(self.query()?)),
            "union" => Query::Union(b(self.query()?), b(self.query()?)),
            "diff" => Query::Diff(b(self.query()?), b(self.query()?)),
            "intersect" => Query::Intersect(b(self.query()?), b(self.query()?)),
            "product" => Query::Product(b(self.query()?), b(self.query()?)),
            "update" => Query::Update(b(self.query()?), b(self.query()?)),
            "outer" => {
                let at = self.offset();
                let kind = self.atom("left, right or full")?;
                let kind = OuterKind::from_name(&kind)
                    .ok_or(ParseError { offset: at, message: format!("expected left, right or full, found `{kind}`") })?;
                Query::Outer(kind, b(self.query()?), b(self.query()?))
            }
            "agg" => {
                let at = self.offset();
                let fold = self.atom("sum, count, min or max")?;
                let fold = AggFold::from_name(&fold)
                    .ok_or(ParseError { offset: at, message: format!("expected sum, count, min or max, found `{fold}`") })?;
                let group = self.names()?;
                let target = if fold == AggFold::Count { None } else { Some(self.name("a target attribute")?) };
                Query::Aggregate { fold, group, target, input: b(self.query()?) }
            }
            "map" => {
                let f = self.func()?;
                let attr = self.name("an attribute name")?;
                Query::Map(f, attr, b(self.query()?))
            }
            "clamp" => Query::Clamp(b(self.query()?)),
            _ => return Err(ParseError { offset: head_at, message: format!("unknown operator `{head}`") }),
        };
        self.expect(Tok::Close)?;
        Ok(q)
    }

    fn func(&mut self) -> PResult<MapFn> {
        let at = self.offset();
        match self.next()? {
            Tok::Atom(a) => MapFn::nullary(&a).ok_or_else(|| {
                let message = if MapFn::UNARY.contains(&a.as_str()) {
                    format!("`{a}` takes an argument: write ({a} x)")
                } else {
                    format!("unknown function `{a}`")
                };
                ParseError { offset: at, message }
            }),
            Tok::Open => {
                let name_at = self.offset();
                let name = self.atom("a function name")?;
                let arg = self.literal()?;
                self.expect(Tok::Close)?;
                MapFn::unary(&name, arg).map_err(|e| ParseError { offset: name_at, message: e.to_string() })
            }
            other => Err(ParseError { offset: at, message: format!("expected a function, found {other}") }),
        }
    }

    fn literal(&mut self) -> PResult<Value> {
        let at = self.offset();
        match self.next()? {
            Tok::Str(s) => Ok(Value::Str(s)),
            Tok::Atom(a) => atom_literal(&a).ok_or(ParseError { offset: at, message: format!("expected a literal, found `{a}`") }),
            other => Err(ParseError { offset: at, message: format!("expected a literal, found {other}") }),
        }
    }

    fn pred(&mut self) -> PResult<Pred> {
        let at = self.offset();
        match self.next()? {
            Tok::Atom(a) if a == "true" => return Ok(Pred::True),
            Tok::Atom(a) if a == "false" => return Ok(Pred::False),
            Tok::Open => {}
            other => return Err(ParseError { offset: at, message: format!("expected a predicate, found {other}") }),
        }
        let head_at = self.offset();
        let head = self.atom("a comparison or connective")?;
        let p = match head.as_str() {
            "and" | "or" => {
                let mut ps = Vec::new();
                while self.peek() != Some(&Tok::Close) {
                    ps.push(self.pred()?);
                }
                if head == "and" {
                    Pred::And(ps)
                } else {
                    Pred::Or(ps)
                }
            }
            "not" => Pred::Not(Box::new(self.pred()?)),
            op => match CmpOp::ALL.into_iter().find(|c| c.symbol() == op) {
                Some(c) => Pred::Cmp(c, self.operand()?, self.operand()?),
                None => return Err(ParseError { offset: head_at, message: format!("unknown predicate `{head}`") }),
            },
        };
        self.expect(Tok::Close)?;
        Ok(p)
    }

    fn operand(&mut self) -> PResult<Operand> {
        let at = self.offset();
        match self.peek() {
            Some(Tok::Open) => {
                self.next()?;
                let f = self.func()?;
                let x = self.operand()?;
                self.expect(Tok::Close)?;
                Ok(Operand::Apply(f, Box::new(x)))
            }
            Some(Tok::Str(_)) => Ok(Operand::Lit(self.literal()?)),
            Some(Tok::Atom(a)) => {
                let a = a.clone();
                self.next()?;
                Ok(atom_literal(&a).map_or(Operand::Attr(a), Operand::Lit))
            }
            Some(other) => Err(ParseError { offset: at, message: format!("expected an operand, found {other}") }),
            None => self.error("unexpected end of input"),
        }
    }
}

fn is_reserved_literal(a: &str) -> bool {
    atom_literal(a).is_some()
}

fn atom_literal(a: &str) -> Option<Value> {
    match a {
        "true" => Some(Value::Bool(true)),
        "false" => Some(Value::Bool(false)),
        _ => {
            let digits = a.strip_prefix('-').unwrap_or(a);
            if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
                a.parse().ok().map(Value::Int)
            } else {
                None
            }
        }
    }
}

/// Parses one query; trailing input is an error.
pub fn parse_query(src: &str) -> Result<Query, ParseError> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, pos: 0, end: src.len() };
    let q = p.query()?;
    if p.pos < p.toks.len() {
        return p.error("trailing input after query");
    }
    Ok(q)
}

struct Lit<'a>(&'a Value);

impl fmt::Display for Lit<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Value::Str(s) => {
                f.write_str("\"")?;
                for c in s.chars() {
                    match c {
                        '"' => f.write_str("\\\"")?,
                        '\\' => f.write_str("\\\\")?,
                        '\n' => f.write_str("\\n")?,
                        '\t' => f.write_str("\\t")?,
                        c => write!(f, "{c}")?,
                    }
                }
                f.write_str("\"")
            }
            v => write!(f, "{v}"),
        }
    }
}

struct Names<'a>(&'a [String]);

impl fmt::Display for Names<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0.join(" "))
    }
}

impl fmt::Display for MapFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapFn::Add(k) | MapFn::Mul(k) | MapFn::Mod(k) => write!(f, "({} {k})", self.name()),
            MapFn::Const(v) => write!(f, "(const {})", Lit(v)),
            _ => f.write_str(self.name()),
        }
    }
}

impl fmt::Display for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operand::Attr(a) => f.write_str(a),
            Operand::Lit(v) => write!(f, "{}", Lit(v)),
            Operand::Apply(g, x) => write!(f, "({g} {x})"),
        }
    }
}

impl fmt::Display for Pred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pred::True => f.write_str("true"),
            Pred::False => f.write_str("false"),
            Pred::Cmp(op, l, r) => write!(f, "({} {l} {r})", op.symbol()),
            Pred::And(ps) | Pred::Or(ps) => {
                f.write_str(if matches!(self, Pred::And(_)) { "(and" } else { "(or" })?;
                for p in ps {
                    write!(f, " {p}")?;
                }
                f.write_str(")")
            }
            Pred::Not(p) => write!(f, "(not {p})"),
        }
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Query::Load(n) => f.write_str(n),
            Query::Select(p, x) => write!(f, "(select {p} {x})"),
            Query::Project(ns, x) => write!(f, "(project {} {x})", Names(ns)),
            Query::Rename(ns, x) => write!(f, "(rename {} {x})", Names(ns)),
            Query::As(ns, x) => write!(f, "(as {} {x})", Names(ns)),
            Query::Union(x, y) => write!(f, "(union {x} {y})"),
            Query::Diff(x, y) => write!(f, "(diff {x} {y})"),
            Query::Intersect(x, y) => write!(f, "(intersect {x} {y})"),
            Query::Product(x, y) => write!(f, "(product {x} {y})"),
            Query::Update(x, y) => write!(f, "(update {x} {y})"),
            Query::Join(xs) => {
                f.write_str("(join")?;
                for x in xs {
                    write!(f, " {x}")?;
                }
                f.write_str(")")
            }
            Query::Outer(k, x, y) => write!(f, "(outer {} {x} {y})", k.name()),
            Query::Aggregate { fold, group, target, input } => {
                write!(f, "(agg {} {}", fold.name(), Names(group))?;
                if let Some(t) = target {
                    write!(f, " {t}")?;
                }
                write!(f, " {input})")
            }
            Query::Map(g, a, x) => write!(f, "(map {g} {a} {x})"),
            Query::Clamp(x) => write!(f, "(clamp {x})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn round_trip(src: &str) {
        let q = parse_query(src).unwrap_or_else(|e| panic!("{src}: {e}"));
        let printed = q.to_string();
        assert_eq!(parse_query(&printed).unwrap(), q, "{printed}");
    }

    #[test]
    fn documented_forms() {
        for src in [
            "(join R S T)",
            r#"(select (= A "foo") R)"#,
            "(project [A C] R)",
            "(union R S)",
            "(diff R S)",
            "(product R S)",
            "(outer full R S)",
            "(agg min [A] B R)",
            "(agg count [A] R)",
            "(map upper A R)",
            "(clamp R)",
            "(map (add -3) B (rename [B A] (as [A B] R)))",
            r#"(select (and (= (length A) 3) (not (< B 2)) (or true false)) (intersect R (update R S)))"#,
            r#"(map (const "a \"q\"\n") A R)"#,
        ] {
            round_trip(src);
        }
    }

    #[test]
    fn canonical_printing() {
        let q = parse_query("( join  x\n  y ) ; trailing comment").unwrap();
        assert_eq!(q.to_string(), "(join x y)");
        assert_eq!(q, Query::Join(vec![Query::Load("x".into()), Query::Load("y".into())]));
    }

    #[test]
    fn errors_carry_offsets() {
        let e = parse_query("(join x").unwrap_err();
        assert_eq!(e.offset, 7);
        let e = parse_query("(frob x)").unwrap_err();
        assert_eq!((e.offset, e.message.as_str()), (1, "unknown operator `frob`"));
        let e = parse_query("(select (= A 1) R) extra").unwrap_err();
        assert_eq!(e.offset, 19);
        assert!(parse_query("(map add A R)").unwrap_err().message.contains("takes an argument"));
        assert!(parse_query("(agg sum [A] R)").is_err());
        assert!(parse_query("\"x").is_err());
        assert!(parse_query("(project [A 1] R)").is_err());
    }
}
