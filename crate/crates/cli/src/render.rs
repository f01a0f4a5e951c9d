//! Output formats for relations.

use std::fmt::Write as _;
use std::time::Duration;

use clap::ValueEnum;
use polyalg::metrics::Metrics;
use polyalg::rel::Relation;
use polyalg::{Ring, Value};
use serde::Serialize;

use crate::csvio;
use crate::failure::Outcome;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

/// Work done by a query.
#[derive(Clone, Copy, Debug)]
pub struct Stats {
    pub metrics: Metrics,
    pub elapsed: Duration,
}

#[derive(Serialize)]
struct JsonAttr<'a> {
    name: &'a str,
    #[serde(rename = "type")]
    ty: &'a str,
}

#[derive(Serialize)]
struct JsonRow {
    values: Vec<serde_json::Value>,
    coefficient: serde_json::Value,
}

#[derive(Serialize)]
struct JsonMetrics {
    trie_edges: u64,
    ring_muls: u64,
    lookups: u64,
    elapsed_ms: f64,
}

#[derive(Serialize)]
struct JsonRelation<'a> {
    schema: Vec<JsonAttr<'a>>,
    ring: &'static str,
    has_baseline: bool,
    rows: Vec<JsonRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    metrics: Option<JsonMetrics>,
}

pub fn render<K: Ring>(rel: &Relation<K>, format: Format, stats: Option<&Stats>) -> Outcome<String> {
    match format {
        Format::Table => Ok(table(rel, stats)),
        // Metrics go to stderr (see `stats_table`) so the output still loads.
        Format::Csv => csvio::write_relation(rel),
        Format::Json => json(rel, stats),
    }
}

fn stat_lines(s: &Stats) -> [(&'static str, String); 4] {
    [
        ("trie_edges", s.metrics.trie_edges.to_string()),
        ("ring_muls", s.metrics.ring_muls.to_string()),
        ("lookups", s.metrics.lookups.to_string()),
        ("elapsed_ms", format!("{:.3}", s.elapsed.as_secs_f64() * 1e3)),
    ]
}

fn cell(v: &Option<Value>) -> String {
    v.as_ref().map_or_else(|| csvio::WILDCARD.to_string(), Value::to_string)
}

/// Left-aligned columns separated by two spaces.
fn grid(out: &mut String, lines: &[Vec<String>]) {
    let cols = lines.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|c| lines.iter().filter_map(|l| l.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    for line in lines {
        let mut text = String::new();
        for (c, s) in line.iter().enumerate() {
            if c > 0 {
                text.push_str("  ");
            }
            text.push_str(s);
            text.extend(std::iter::repeat_n(' ', widths[c] - s.chars().count()));
        }
        out.push_str(text.trim_end());
        out.push('\n');
    }
}

fn table<K: Ring>(rel: &Relation<K>, stats: Option<&Stats>) -> String {
    let rows = rel.rows();
    let mut lines = Vec::with_capacity(rows.len() + 1);
    let mut header: Vec<String> = rel.schema().names().map(str::to_string).collect();
    header.push("#".to_string());
    lines.push(header);
    for r in &rows {
        let mut l: Vec<String> = r.values.iter().map(cell).collect();
        l.push(r.coefficient.to_string());
        lines.push(l);
    }
    let mut out = String::new();
    grid(&mut out, &lines);
    let _ = writeln!(out, "({} row{})", rows.len(), if rows.len() == 1 { "" } else { "s" });
    if rows.iter().any(|r| r.values.iter().any(Option::is_none)) {
        out.push_str("note: `*` rows are baselines covering every value of their attribute; the support is infinite\n");
    }
    if let Some(s) = stats {
        out.push('\n');
        out.push_str(&stats_table(s));
    }
    out
}

pub fn stats_table(s: &Stats) -> String {
    let mut m = vec![vec!["metric".to_string(), "value".to_string()]];
    m.extend(stat_lines(s).into_iter().map(|(k, v)| vec![k.to_string(), v]));
    let mut out = String::new();
    grid(&mut out, &m);
    out
}

fn json_value(v: &Option<Value>) -> serde_json::Value {
    match v {
        None => serde_json::Value::Null,
        Some(Value::Int(n)) => (*n).into(),
        Some(Value::Bool(b)) => (*b).into(),
        Some(Value::Str(s)) => s.as_str().into(),
        Some(other) => other.to_string().into(),
    }
}

/// Integers that fit in 64 bits and reals become JSON numbers; anything
/// else keeps its decimal text as a string.
pub fn json_coefficient<K: Ring>(c: &K) -> serde_json::Value {
    let text = c.to_string();
    if let Ok(n) = text.parse::<i64>() {
        return n.into();
    }
    if K::NAME == "real" {
        if let Some(n) = text.parse::<f64>().ok().and_then(serde_json::Number::from_f64) {
            return serde_json::Value::Number(n);
        }
    }
    text.into()
}

fn json<K: Ring>(rel: &Relation<K>, stats: Option<&Stats>) -> Outcome<String> {
    let rows: Vec<JsonRow> = rel
        .rows()
        .iter()
        .map(|r| JsonRow { values: r.values.iter().map(json_value).collect(), coefficient: json_coefficient(&r.coefficient) })
        .collect();
    let doc = JsonRelation {
        schema: rel
            .schema()
            .attrs()
            .iter()
            .map(|(n, t)| JsonAttr { name: n, ty: t.column_name().unwrap_or("value") })
            .collect(),
        ring: K::NAME,
        has_baseline: rows.iter().any(|r| r.values.iter().any(serde_json::Value::is_null)),
        rows,
        metrics: stats.map(|s| JsonMetrics {
            trie_edges: s.metrics.trie_edges,
            ring_muls: s.metrics.ring_muls,
            lookups: s.metrics.lookups,
            elapsed_ms: s.elapsed.as_secs_f64() * 1e3,
        }),
    };
    let mut out = serde_json::to_string_pretty(&doc)?;
    out.push('\n');
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csvio::read_relation;
    use polyalg::rel::Schema;
    use polyalg::Integer;

    fn rel(text: &str) -> Relation<Integer> {
        read_relation(text.as_bytes(), &Schema::parse("A:str").unwrap()).unwrap()
    }

    #[test]
    fn table_layout() {
        let r = rel("A,#weight\na,3\nbb,-2\n");
        assert_eq!(render(&r, Format::Table, None).unwrap(), "A   #\na   3\nbb  -2\n(2 rows)\n");
    }

    #[test]
    fn cofinite_json() {
        let r = rel("A,#weight\n*,1\na,-1\n");
        let v: serde_json::Value = serde_json::from_str(&render(&r, Format::Json, None).unwrap()).unwrap();
        assert_eq!(v["has_baseline"], true);
        assert_eq!(v["ring"], "z");
        assert_eq!(v["schema"][0]["type"], "str");
        assert_eq!(v["rows"][0]["values"][0], serde_json::Value::Null);
        assert_eq!(v["rows"][0]["coefficient"], 1);
        assert_eq!(v["rows"][1]["values"][0], "a");
        assert_eq!(v["rows"][1]["coefficient"], -1);
        assert!(render(&r, Format::Table, None).unwrap().contains("note:"));
    }

    #[test]
    fn empty_relation() {
        let r = rel("A\n");
        assert_eq!(render(&r, Format::Table, None).unwrap(), "A  #\n(0 rows)\n");
        assert_eq!(render(&r, Format::Csv, None).unwrap(), "A,#weight\n");
    }

    #[test]
    fn big_coefficients_stay_exact() {
        let big = Integer::parse("123456789012345678901234567890").unwrap();
        assert_eq!(json_coefficient(&big), serde_json::Value::from("123456789012345678901234567890"));
    }
}
