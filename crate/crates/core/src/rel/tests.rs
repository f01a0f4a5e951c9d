use super::*;
use crate::ring::{Gf2, Integer};

type R = Relation<Integer>;

fn z(n: i64) -> Integer {
    Integer::from(n)
}

fn s(x: &str) -> Value {
    Value::str(x)
}

fn i(n: i64) -> Value {
    Value::Int(n)
}

fn rel(decl: &str, rows: &[(&[Value], i64)]) -> R {
    R::from_rows(Schema::parse(decl).unwrap(), rows.iter().map(|(v, c)| (v.to_vec(), z(*c)))).unwrap()
}

fn rows(r: &R) -> Vec<(Vec<String>, i64)> {
    r.rows()
        .into_iter()
        .map(|row| {
            let vals = row.values.iter().map(|v| v.as_ref().map_or("*".to_string(), |v| v.to_string())).collect();
            (vals, row.coefficient.to_i64().unwrap())
        })
        .collect()
}

fn row(vals: &[&str], c: i64) -> (Vec<String>, i64) {
    (vals.iter().map(|v| v.to_string()).collect(), c)
}

fn paper_x() -> R {
    rel("A:str,B:int", &[(&[s("a"), i(1)], 1), (&[s("b"), i(2)], 1), (&[s("c"), i(3)], 1)])
}

fn paper_y() -> R {
    rel("B:int,C:str", &[(&[i(2), s("p")], 1), (&[i(3), s("q")], 1), (&[i(4), s("r")], 1)])
}

fn agg_input() -> R {
    rel("A:str,B:int", &[(&[s("p"), i(2)], 1), (&[s("p"), i(3)], 1), (&[s("q"), i(4)], 1)])
}

fn names(ns: &[&str]) -> Vec<String> {
    ns.iter().map(|n| n.to_string()).collect()
}

#[test]
fn schema_declarations() {
    let schema = Schema::parse("A:str, B:int,C:bool").unwrap();
    assert_eq!(schema.to_string(), "A:str,B:int,C:bool");
    assert!(Schema::parse("A:str,A:int").is_err());
    assert!(Schema::parse("A:float").is_err());
    assert!(Schema::parse("A").is_err());
}

#[test]
fn natural_join_of_the_running_example() {
    let j = R::natural_join(&[&paper_x(), &paper_y()]).unwrap();
    assert_eq!(j.schema().to_string(), "A:str,B:int,C:str");
    assert_eq!(rows(&j), vec![row(&["b", "2", "p"], 1), row(&["c", "3", "q"], 1)]);
    assert_eq!(j.compact(), vec![false; 3]);
}

#[test]
fn join_reorders_inputs_by_name() {
    let y = paper_y().rename(&names(&["C", "B"])).unwrap();
    let j = R::natural_join(&[&paper_x(), &y]).unwrap();
    assert_eq!(rows(&j), vec![row(&["b", "2", "p"], 1), row(&["c", "3", "q"], 1)]);
    let bad = paper_y().with_names(&names(&["A", "C"])).unwrap();
    assert!(R::natural_join(&[&paper_x(), &bad]).is_err());
}

#[test]
fn union_intersection_and_updates() {
    let a = rel("A:str", &[(&[s("a")], 1), (&[s("b")], 1)]);
    let b = rel("A:str", &[(&[s("b")], 1), (&[s("c")], 1)]);
    assert_eq!(rows(&a.union(&b).unwrap()), vec![row(&["a"], 1), row(&["b"], 2), row(&["c"], 1)]);
    let x = rel("A:str", &[(&[s("a")], 2), (&[s("b")], 3)]);
    let y = rel("A:str", &[(&[s("b")], 5), (&[s("c")], 7)]);
    assert_eq!(rows(&x.intersect(&y).unwrap()), vec![row(&["b"], 15)]);
    assert!(rows(&a.diff(&a).unwrap()).is_empty());

    let delta = rel("A:str", &[(&[s("c")], 1), (&[s("b")], -1)]);
    assert_eq!(rows(&a.apply_update(&delta).unwrap()), vec![row(&["a"], 1), row(&["c"], 1)]);
    let only_a = rel("A:str", &[(&[s("a")], 1)]);
    let mid = only_a.apply_update(&delta).unwrap();
    assert_eq!(rows(&mid), vec![row(&["a"], 1), row(&["b"], -1), row(&["c"], 1)]);
    let readd = rel("A:str", &[(&[s("b")], 1)]);
    assert_eq!(rows(&mid.apply_update(&readd).unwrap()), vec![row(&["a"], 1), row(&["c"], 1)]);
}

#[test]
fn projection_counts_multiplicities_without_expanding() {
    let m = rel("A:str", &[(&[s("a1")], 1), (&[s("a2")], 1), (&[s("a3")], 1)]);
    let n = rel("B:str", &[(&[s("b1")], 1), (&[s("b2")], 1)]);
    let t = m.cartesian(&n).unwrap();
    assert_eq!(t.data().size(), m.data().size() + n.data().size() + 1);
    let p = t.project(&names(&["B"])).unwrap();
    assert_eq!(rows(&p), vec![row(&["b1"], 3), row(&["b2"], 3)]);
    assert_eq!(p.data().to_string(), "3*(<b1> + <b2>)");

    let r = rel("A:str,B:int", &[(&[s("foo"), i(1)], 1), (&[s("foo"), i(2)], 1), (&[s("bar"), i(3)], 1)]);
    assert_eq!(rows(&r.project(&names(&["A"])).unwrap()), vec![row(&["bar"], 1), row(&["foo"], 2)]);
    assert!(r.project(&[]).is_err());
    assert!(r.project(&names(&["A", "A"])).is_err());
    assert!(r.project(&names(&["A", "B"])).unwrap().equiv(&r).unwrap());
}

#[test]
fn projection_over_gf2_is_set_semantics() {
    let r = Relation::<Gf2>::from_rows(
        Schema::parse("A:str,B:int").unwrap(),
        [(vec![s("foo"), i(1)], Gf2(true)), (vec![s("foo"), i(2)], Gf2(true)), (vec![s("bar"), i(3)], Gf2(true))],
    )
    .unwrap();
    let p = r.project(&names(&["A"])).unwrap();
    let got: Vec<_> = p.rows().into_iter().map(|r| (r.values[0].clone().unwrap(), r.coefficient)).collect();
    assert_eq!(got, vec![(s("bar"), Gf2(true))]);
}

#[test]
fn rename_and_relabel() {
    let r = paper_x();
    let swapped = r.rename(&names(&["B", "A"])).unwrap();
    assert_eq!(swapped.schema().to_string(), "B:int,A:str");
    assert_eq!(rows(&swapped)[0], row(&["1", "a"], 1));
    assert!(swapped.rename(&names(&["A", "B"])).unwrap().equiv(&r).unwrap());
    assert!(r.rename(&names(&["A"])).is_err());
    assert_eq!(r.with_names(&names(&["X", "Y"])).unwrap().schema().to_string(), "X:str,Y:int");
}

#[test]
fn selection() {
    let r = rel("A:str", &[(&[s("foo")], 1), (&[s("ab")], 1)]);
    let len3 = parse_pred("(= (length A) 3)");
    assert_eq!(rows(&r.select(&len3).unwrap()), vec![row(&["foo"], 1)]);
    assert!(r.select(&Pred::True).unwrap().equiv(&r).unwrap());
    let two = paper_x().select(&parse_pred(r#"(or (= A "a") (>= B 3))"#)).unwrap();
    assert_eq!(rows(&two), vec![row(&["a", "1"], 1), row(&["c", "3"], 1)]);
    assert!(r.select(&parse_pred("(= A 1)")).is_err());
}

fn parse_pred(src: &str) -> Pred {
    match parse_query(&format!("(select {src} R)")).unwrap() {
        Query::Select(p, _) => p,
        _ => unreachable!(),
    }
}

#[test]
fn aggregation_examples() {
    let r = agg_input();
    let sum = r.aggregate(AggFold::Sum, &names(&["A"]), Some("B")).unwrap();
    assert_eq!(rows(&sum), vec![row(&["p"], 5), row(&["q"], 4)]);
    let min = r.aggregate(AggFold::Min, &names(&["A"]), Some("B")).unwrap();
    assert_eq!(rows(&min), vec![row(&["p", "2"], 1), row(&["q", "4"], 1)]);
    let max = r.aggregate(AggFold::Max, &names(&["A"]), Some("B")).unwrap();
    assert_eq!(rows(&max), vec![row(&["p", "3"], 1), row(&["q", "4"], 1)]);
    let count = r.aggregate(AggFold::Count, &names(&["A"]), None).unwrap();
    assert_eq!(rows(&count), vec![row(&["p"], 2), row(&["q"], 1)]);
    let total = r.aggregate(AggFold::Count, &[], None).unwrap();
    assert_eq!(rows(&total), vec![row(&[], 3)]);
    assert!(r.aggregate(AggFold::Sum, &names(&["B"]), Some("A")).is_err());
    assert!(r.aggregate(AggFold::Min, &names(&["A"]), Some("A")).is_err());
    assert_eq!(extreme(AggFold::Min, []), Extended::PosInf);
    assert_eq!(extreme(AggFold::Max, []), Extended::NegInf);
}

#[test]
fn map_columns() {
    let r = rel("A:str", &[(&[s("foo")], 1), (&[s("bar")], 1)]);
    assert_eq!(rows(&r.map_col(&MapFn::Upper, "A").unwrap()), vec![row(&["BAR"], 1), row(&["FOO"], 1)]);
    let c = r.map_col(&MapFn::Const(s("c")), "A").unwrap();
    assert_eq!(rows(&c), vec![row(&["c"], 2)]);
    assert!(r.map_col(&MapFn::Id, "A").unwrap().equiv(&r).unwrap());
    let len = r.map_col(&MapFn::Length, "A").unwrap();
    assert_eq!(len.schema().to_string(), "A:int");
    assert!(r.map_col(&MapFn::Neg, "A").is_err());
}

#[test]
fn clamping() {
    let r = rel("A:str", &[(&[s("a")], 1), (&[s("b")], -1), (&[s("c")], 3)]);
    assert_eq!(rows(&r.clamp_nonneg().unwrap()), vec![row(&["a"], 1), row(&["c"], 3)]);
    assert!(rows(&r.diff(&r).unwrap().clamp_nonneg().unwrap()).is_empty());
}

#[test]
fn outer_joins() {
    let (x, y) = (paper_x(), paper_y());
    let full = R::outer_join(OuterKind::Full, &x, &y).unwrap();
    let got = rows(&full);
    assert!(got.contains(&row(&["a", "1", "*"], 1)), "{got:?}");
    assert!(got.contains(&row(&["*", "4", "r"], 1)));
    assert!(got.contains(&row(&["b", "2", "p"], 1)));
    assert!(got.contains(&row(&["*", "*", "*"], 1)));
    assert!(full.has_wildcard());

    let left = R::outer_join(OuterKind::Left, &x, &y).unwrap();
    let j = R::natural_join(&[&x, &y]).unwrap();
    let (s, embedded) = embed_all(&[&x, &y]).unwrap();
    let x_prime = Relation::new(s, embedded[0].clone()).unwrap();
    assert!(left.equiv(&j.union(&x_prime).unwrap()).unwrap());
    assert_eq!(left.lookup(&[Some(s_val("a")), Some(i(1)), Some(s_val("zzz"))]).unwrap(), z(1));
    assert_eq!(left.lookup(&[Some(s_val("b")), Some(i(2)), Some(s_val("p"))]).unwrap(), z(2));

    let empty = R::empty(y.schema().clone());
    let with_empty = R::outer_join(OuterKind::Full, &x, &empty).unwrap();
    assert_eq!(with_empty.lookup(&[Some(s_val("a")), Some(i(1)), Some(s_val("q"))]).unwrap(), z(2));
    assert_eq!(with_empty.lookup(&[Some(s_val("zz")), Some(i(9)), None]).unwrap(), z(1));
}

fn s_val(x: &str) -> Value {
    s(x)
}

#[test]
fn queries_evaluate_against_a_catalog() {
    let mut cat = std::collections::HashMap::new();
    cat.insert("x".to_string(), paper_x());
    cat.insert("y".to_string(), paper_y());
    cat.insert("g".to_string(), agg_input());
    let run = |src: &str| eval(&parse_query(src).unwrap(), &cat);
    assert_eq!(rows(&run("(join x y)").unwrap()), vec![row(&["b", "2", "p"], 1), row(&["c", "3", "q"], 1)]);
    assert_eq!(rows(&run("(union x x)").unwrap())[0], row(&["a", "1"], 2));
    assert_eq!(rows(&run("(agg min [A] B g)").unwrap()), vec![row(&["p", "2"], 1), row(&["q", "4"], 1)]);
    assert!(run("(join x nope)").is_err());
    assert!(run("(union x y)").is_err());
    assert!(run("(product x y)").is_err());
    let p = run("(product x (as [C D] y))").unwrap();
    assert_eq!(p.rows().len(), 9);
}

#[test]
fn triangle_via_self_join() {
    let mut edges = Vec::new();
    for a in 1..=2 {
        for b in 1..=2 {
            edges.push((vec![i(a), i(b)], z(1)));
        }
    }
    let e = R::from_rows(Schema::parse("A:int,B:int").unwrap(), edges).unwrap();
    let ab = e.clone();
    let ac = e.with_names(&names(&["A", "C"])).unwrap();
    let bc = e.with_names(&names(&["B", "C"])).unwrap();
    let t = R::natural_join(&[&ab, &ac, &bc]).unwrap();
    assert_eq!(t.rows().len(), 8);
    assert!(t.rows().iter().all(|r| r.coefficient == z(1)));
}
