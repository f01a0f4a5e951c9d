//! Triangle-query benchmark on full-bipartite instances.
//!
//! For size `k` each of the three relations is `[k] × [k]`, so `n = k²`
//! tuples per relation and the triangle output has exactly `k³` rows.

use std::time::{Duration, Instant};

use polyalg::metrics::{self, Metrics};
use polyalg::rel::{Relation, Schema};
use polyalg::{wco, Integer, PrimSet, Term, Value};
use serde::Serialize;

use crate::failure::{Failure, Outcome};

#[derive(Clone, Debug, Serialize)]
pub struct NaiveRow {
    pub output_rows: usize,
    pub ring_muls: u64,
    pub wall_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub k: usize,
    /// Tuples per input relation.
    pub n: usize,
    pub output_rows: usize,
    /// Fastest of the repeats.
    pub wall_ms: f64,
    pub trie_edges: u64,
    pub ring_muls: u64,
    pub lookups: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub naive: Option<NaiveRow>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    /// Least-squares slope of log(trie edges) against log(n).
    pub slope_trie_edges: f64,
    pub slope_wall: f64,
    /// Slope of log(ring multiplications) of the naive expansion, when it
    /// ran at two or more sizes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slope_naive: Option<f64>,
}

pub fn full_bipartite(k: usize) -> Term<Integer> {
    let schema = Schema::parse("L:int,R:int").expect("static schema");
    let k = k as i64;
    let rows = (0..k).flat_map(|i| (0..k).map(move |j| (vec![Value::Int(i), Value::Int(j)], Integer::from(1))));
    Relation::from_rows(schema, rows).expect("well-typed rows").into_data()
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn run_wco(k: usize, repeats: usize) -> Outcome<(usize, Metrics, Duration)> {
    let r = full_bipartite(k);
    let mut best = Duration::MAX;
    let mut result = None;
    for _ in 0..repeats.max(1) {
        let start = Instant::now();
        let (nf, m) = metrics::measure(|| wco::triangle(&r, &r, &r));
        best = best.min(start.elapsed());
        result = Some((nf?, m));
    }
    let (nf, m) = result.expect("at least one run");
    Ok((nf.expand().len(), m, best))
}

fn run_naive(k: usize) -> Outcome<NaiveRow> {
    let r = full_bipartite(k);
    let attrs = [PrimSet::Int, PrimSet::Int, PrimSet::Int];
    let factors =
        [wco::embed(&r, &[0, 1], &attrs)?, wco::embed(&r, &[0, 2], &attrs)?, wco::embed(&r, &[1, 2], &attrs)?];
    let start = Instant::now();
    let (basis, m) = metrics::measure(|| wco::naive_expansion(&factors));
    let wall = start.elapsed();
    Ok(NaiveRow { output_rows: basis?.len(), ring_muls: m.ring_muls, wall_ms: ms(wall) })
}

/// Runs the benchmark. The naive contrast runs for sizes up to
/// `naive_max` when set. Each size must produce exactly `k³` rows before
/// anything is reported.
pub fn triangle(sizes: &[usize], repeats: usize, naive_max: Option<usize>) -> Outcome<BenchReport> {
    if sizes.len() < 2 {
        return Err(Failure::usage("at least two sizes are needed to fit a slope"));
    }
    if sizes.iter().any(|&k| k < 2) {
        return Err(Failure::usage("sizes must be at least 2"));
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Failure::usage("sizes must be strictly increasing"));
    }
    let mut rows = Vec::with_capacity(sizes.len());
    for &k in sizes {
        let expected = k * k * k;
        let (output_rows, m, wall) = run_wco(k, repeats)?;
        if output_rows != expected {
            return Err(Failure::data(format!("correctness gate failed at k={k}: {output_rows} rows, expected {expected}")));
        }
        let naive = match naive_max {
            Some(max) if k <= max => {
                let row = run_naive(k)?;
                if row.output_rows != expected {
                    return Err(Failure::data(format!(
                        "naive correctness gate failed at k={k}: {} rows, expected {expected}",
                        row.output_rows
                    )));
                }
                Some(row)
            }
            _ => None,
        };
        rows.push(BenchRow {
            k,
            n: k * k,
            output_rows,
            wall_ms: ms(wall),
            trie_edges: m.trie_edges,
            ring_muls: m.ring_muls,
            lookups: m.lookups,
            naive,
        });
    }
    let slope_trie_edges = loglog_slope(&rows.iter().map(|r| (r.n as f64, r.trie_edges as f64)).collect::<Vec<_>>());
    let slope_wall = loglog_slope(&rows.iter().map(|r| (r.n as f64, r.wall_ms.max(1e-6))).collect::<Vec<_>>());
    let naive_pts: Vec<(f64, f64)> =
        rows.iter().filter_map(|r| r.naive.as_ref().map(|nv| (r.n as f64, nv.ring_muls as f64))).collect();
    let slope_naive = (naive_pts.len() >= 2).then(|| loglog_slope(&naive_pts));
    Ok(BenchReport { rows, slope_trie_edges, slope_wall, slope_naive })
}

impl BenchReport {
    pub fn to_table(&self) -> String {
        let with_naive = self.rows.iter().any(|r| r.naive.is_some());
        let mut out = String::new();
        let mut head = format!("{:>4} {:>6} {:>8} {:>10} {:>11} {:>10} {:>9}", "k", "n", "rows", "wall_ms", "trie_edges", "ring_muls", "lookups");
        if with_naive {
            head.push_str(&format!(" {:>15} {:>12}", "naive_ring_muls", "naive_ms"));
        }
        out.push_str(&head);
        out.push('\n');
        for r in &self.rows {
            let mut line = format!(
                "{:>4} {:>6} {:>8} {:>10.3} {:>11} {:>10} {:>9}",
                r.k, r.n, r.output_rows, r.wall_ms, r.trie_edges, r.ring_muls, r.lookups
            );
            if let Some(nv) = &r.naive {
                line.push_str(&format!(" {:>15} {:>12.3}", nv.ring_muls, nv.wall_ms));
            } else if with_naive {
                line.push_str(&format!(" {:>15} {:>12}", "-", "-"));
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out.push_str(&format!("slope trie_edges vs n: {:.3}\n", self.slope_trie_edges));
        out.push_str(&format!("slope wall time vs n: {:.3}\n", self.slope_wall));
        if let Some(s) = self.slope_naive {
            out.push_str(&format!("slope naive ring_muls vs n: {s:.3}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sizes_have_cubic_output() {
        for k in [2, 3] {
            let (rows, _, _) = run_wco(k, 1).unwrap();
            assert_eq!(rows, k * k * k);
            assert_eq!(run_naive(k).unwrap().output_rows, k * k * k);
        }
    }

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = [2.0f64, 4.0, 8.0, 16.0].iter().map(|&x| (x, 3.0 * x.powf(1.5))).collect();
        assert!((loglog_slope(&pts) - 1.5).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(triangle(&[4], 1, None).is_err());
        assert!(triangle(&[1, 4], 1, None).is_err());
        assert!(triangle(&[4, 4], 1, None).is_err());
    }
}
