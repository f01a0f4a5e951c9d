//! Relational operators against brute-force evaluation.

use std::collections::BTreeMap;

use polyalg::rel::{OuterKind, Relation, Schema};
use polyalg::{Gf2, Integer, Ring, Value};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_rows(rng: &mut impl Rng, n: usize) -> Vec<(Vec<Value>, i64)> {
    (0..n)
        .map(|_| {
            let a = Value::str(*["a", "b", "c"].choose(rng).unwrap());
            let b = Value::Int(rng.gen_range(0..3));
            (vec![a, b], rng.gen_range(-2..=2))
        })
        .collect()
}

fn rel<K: Ring>(decl: &str, rows: &[(Vec<Value>, i64)]) -> Relation<K> {
    Relation::from_rows(Schema::parse(decl).unwrap(), rows.iter().map(|(v, c)| (v.clone(), K::from_i64(*c)))).unwrap()
}

fn as_map<K: Ring>(r: &Relation<K>) -> BTreeMap<Vec<Value>, K> {
    r.finite_rows().unwrap().into_iter().collect()
}

#[test]
fn join_matches_nested_loops() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..50 {
        let xs = random_rows(&mut rng, 6);
        let ys = random_rows(&mut rng, 6);
        let x: Relation<Gf2> = rel("A:str,B:int", &xs);
        let y: Relation<Gf2> = rel("C:str,B:int", &ys);
        let got = as_map(&Relation::natural_join(&[&x, &y]).unwrap());
        let mut want: BTreeMap<Vec<Value>, Gf2> = BTreeMap::new();
        for (xv, xc) in as_map(&x) {
            for (yv, yc) in as_map(&y) {
                if xv[1] == yv[1] {
                    let k = vec![xv[0].clone(), xv[1].clone(), yv[0].clone()];
                    let e = want.entry(k).or_insert_with(Gf2::zero);
                    *e = e.add(&xc.mul(&yc));
                }
            }
        }
        want.retain(|_, c| !c.is_zero());
        assert_eq!(got, want);
    }
}

#[test]
fn outer_joins_stay_closed_under_lookup() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..30 {
        let x: Relation<Integer> = rel("A:str,B:int", &random_rows(&mut rng, 4));
        let y: Relation<Integer> = rel("C:str,B:int", &random_rows(&mut rng, 4));
        let full = Relation::outer_join(OuterKind::Full, &x, &y).unwrap();
        let inner = Relation::natural_join(&[&x, &y]).unwrap();
        for (k, c) in as_map(&inner) {
            let key: Vec<Option<Value>> = k.into_iter().map(Some).collect();
            let xc = x.lookup(&[key[0].clone(), key[1].clone()]).unwrap();
            let yc = y.lookup(&[key[2].clone(), key[1].clone()]).unwrap();
            assert_eq!(full.lookup(&key).unwrap(), c.add(&xc).add(&yc).add(&Integer::one()));
        }
    }
}

#[test]
fn updates_commute() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let base: Relation<Integer> = rel("A:str,B:int", &random_rows(&mut rng, 5));
    let mut deltas: Vec<Relation<Integer>> = (0..6).map(|_| rel("A:str,B:int", &random_rows(&mut rng, 3))).collect();
    let apply = |ds: &[Relation<Integer>]| ds.iter().fold(base.clone(), |acc, d| acc.apply_update(d).unwrap());
    let reference = apply(&deltas);
    for _ in 0..20 {
        deltas.shuffle(&mut rng);
        assert!(apply(&deltas).equiv(&reference).unwrap());
    }
}
