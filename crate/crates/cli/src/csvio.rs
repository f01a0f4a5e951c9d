//! CSV ingestion and export.
//!
//! The header must list the schema's attribute names in order, optionally
//! with an extra `#weight` column anywhere. A cell holding exactly `*` is a
//! wildcard: the row then covers every value of that attribute.

use std::io::Read;

use polyalg::rel::{Relation, Schema};
use polyalg::{PrimSet, Ring, Space, Term, Value};

use crate::failure::{Failure, Outcome};

pub const WEIGHT_COLUMN: &str = "#weight";
pub const WILDCARD: &str = "*";

/// Parses one cell of the given column type.
pub fn parse_cell(ty: &PrimSet, cell: &str) -> Option<Value> {
    match ty {
        PrimSet::Int => cell.trim().parse::<i64>().ok().map(Value::Int),
        PrimSet::Bool => match cell.trim() {
            "true" => Some(Value::Bool(true)),
            "false" => Some(Value::Bool(false)),
            _ => None,
        },
        PrimSet::Str => Some(Value::str(cell)),
        _ => None,
    }
}

fn parse_weight<K: Ring>(cell: &str) -> Option<K> {
    K::parse(cell).or_else(|| cell.trim().parse::<i64>().ok().map(K::from_i64))
}

/// Reads a relation. Duplicate rows accumulate.
pub fn read_relation<K: Ring>(input: impl Read, schema: &Schema) -> Outcome<Relation<K>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header = reader.headers().map_err(|e| Failure::data(format!("cannot read CSV header: {e}")))?.clone();
    let weight_col = header.iter().position(|h| h == WEIGHT_COLUMN);
    let columns: Vec<&str> = header.iter().filter(|h| *h != WEIGHT_COLUMN).collect();
    let expected: Vec<&str> = schema.names().collect();
    if columns != expected {
        return Err(Failure::data(format!(
            "CSV header [{}] does not match schema [{}]",
            header.iter().collect::<Vec<_>>().join(","),
            expected.join(",")
        )));
    }

    let types: Vec<PrimSet> = schema.types().cloned().collect();
    let mut rows: Vec<(Vec<Option<Value>>, K)> = Vec::new();
    let mut record = csv::StringRecord::new();
    loop {
        match reader.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {}
            Err(e) => return Err(Failure::data(format!("CSV error: {e}"))),
        }
        let line = record.position().map_or(0, |p| p.line());
        let mut values = Vec::with_capacity(types.len());
        let mut weight = K::one();
        let mut attr = 0;
        for (col, cell) in record.iter().enumerate() {
            if Some(col) == weight_col {
                weight = parse_weight(cell).ok_or_else(|| {
                    Failure::data(format!("line {line}, column {}: bad {} weight `{cell}`", col + 1, K::NAME))
                })?;
                continue;
            }
            if cell == WILDCARD {
                values.push(None);
            } else {
                let ty = &types[attr];
                let v = parse_cell(ty, cell).ok_or_else(|| {
                    Failure::data(format!(
                        "line {line}, column {}: `{cell}` is not a valid {} for attribute `{}`",
                        col + 1,
                        ty.column_name().unwrap_or("value"),
                        expected[attr]
                    ))
                })?;
                values.push(Some(v));
            }
            attr += 1;
        }
        rows.push((values, weight));
    }
    build(schema, rows)
}

/// Assembles a relation from rows that may contain wildcards. Attributes
/// with a wildcard in any row become compact.
pub fn build<K: Ring>(schema: &Schema, rows: Vec<(Vec<Option<Value>>, K)>) -> Outcome<Relation<K>> {
    let mut compact = vec![false; schema.len()];
    for (values, _) in &rows {
        for (c, v) in compact.iter_mut().zip(values) {
            *c |= v.is_none();
        }
    }
    let space = schema.space(&compact);
    let types: Vec<&PrimSet> = schema.types().collect();
    let mut terms = Vec::with_capacity(rows.len());
    for (values, w) in rows {
        let factors = values
            .into_iter()
            .zip(&types)
            .zip(&compact)
            .map(|((v, ty), &c)| match v {
                None => Ok(Term::wild_one((*ty).clone())),
                Some(v) => {
                    let s = if c { Space::CompactFree((*ty).clone()) } else { Space::Free((*ty).clone()) };
                    Term::inject(&s, v)
                }
            })
            .collect::<polyalg::Result<Vec<_>>>()?;
        let t = Term::tensor_all(factors);
        terms.push(if w.is_one() { t } else { t.scale(w) });
    }
    Ok(Relation::new(schema.clone(), Term::sum(&space, terms)?)?)
}

/// Writes the expansion of a relation, wildcards as `*`, with a `#weight`
/// column.
pub fn write_relation<K: Ring>(rel: &Relation<K>) -> Outcome<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Failure::data(e.to_string());
    let mut header: Vec<&str> = rel.schema().names().collect();
    header.push(WEIGHT_COLUMN);
    w.write_record(&header).map_err(csv_err)?;
    for row in rel.rows() {
        let mut cells: Vec<String> =
            row.values.iter().map(|v| v.as_ref().map_or_else(|| WILDCARD.to_string(), Value::to_string)).collect();
        cells.push(row.coefficient.to_string());
        w.write_record(&cells).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::data(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Failure::data(e.to_string()))
}
