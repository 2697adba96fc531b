//! Result rows and their table, CSV and JSON renderings.

use std::collections::BTreeMap;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "table" => Ok(Format::Table),
            "csv" => Ok(Format::Csv),
            "json" | "json-like" => Ok(Format::Json),
            _ => Err(format!("unknown format `{s}` (table, csv, json-like)")),
        }
    }
}

pub const CSV_COLUMNS: [&str; 7] = ["pair_id", "quantity", "value", "certified_lower", "method", "constants_json", "seed"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub pair_id: String,
    pub quantity: String,
    pub value: f64,
    pub certified_lower: Option<f64>,
    pub method: String,
    pub constants: BTreeMap<String, f64>,
    pub seed: Option<u64>,
}

impl Row {
    pub fn new(pair_id: &str, quantity: impl Into<String>, value: f64, method: impl Into<String>) -> Self {
        Row {
            pair_id: pair_id.into(),
            quantity: quantity.into(),
            value,
            certified_lower: None,
            method: method.into(),
            constants: BTreeMap::new(),
            seed: None,
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn constants_json(c: &BTreeMap<String, f64>) -> String {
    serde_json::to_string(c).unwrap_or_else(|_| "{}".into())
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(String::new, |v| v.to_string())
}

/// Renders a generic table: header plus string cells, columns padded to width.
pub fn render_table(header: &[&str], cells: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in cells {
        for (w, c) in width.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let line = |row: Vec<&str>| {
        let parts: Vec<String> = row.iter().zip(&width).map(|(c, w)| format!("{c:<w$}")).collect();
        parts.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    out += &line(width.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().iter().map(String::as_str).collect());
    for row in cells {
        out += &line(row.iter().map(String::as_str).collect());
    }
    out
}

pub fn render_csv(header: &[&str], cells: &[Vec<String>]) -> String {
    let mut out = header.join(",") + "\n";
    for row in cells {
        out += &(row.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(",") + "\n");
    }
    out
}

pub fn render_rows(rows: &[Row], format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(rows).unwrap_or_default() + "\n",
        Format::Csv => {
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.pair_id.clone(),
                        r.quantity.clone(),
                        r.value.to_string(),
                        opt(r.certified_lower),
                        r.method.clone(),
                        constants_json(&r.constants),
                        opt(r.seed),
                    ]
                })
                .collect();
            render_csv(&CSV_COLUMNS, &cells)
        }
        Format::Table => {
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.pair_id.clone(),
                        r.quantity.clone(),
                        format!("{:.6}", r.value),
                        r.certified_lower.map_or_else(String::new, |v| format!("{v:.6}")),
                        r.method.clone(),
                    ]
                })
                .collect();
            render_table(&["pair", "quantity", "value", "certified_lower", "method"], &cells)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_fixed_columns() {
        let mut r = Row::new("p", "d_K", 0.25, "section_search");
        r.constants.insert("m_alpha".into(), 1.0);
        let s = render_rows(&[r], Format::Csv);
        let mut lines = s.lines();
        assert_eq!(lines.next().unwrap(), "pair_id,quantity,value,certified_lower,method,constants_json,seed");
        assert_eq!(lines.next().unwrap(), "p,d_K,0.25,,section_search,\"{\"\"m_alpha\"\":1.0}\",");
    }

    #[test]
    fn table_pads_columns() {
        let s = render_table(&["a", "bb"], &[vec!["long".into(), "x".into()]]);
        assert_eq!(s, "a     bb\n----  --\nlong  x\n");
    }
}
