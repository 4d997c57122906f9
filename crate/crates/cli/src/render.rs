use monres::{GradedDims, Multidegree};
use serde_json::{json, Value};

pub fn vector(m: &Multidegree) -> String {
    let parts: Vec<String> = m.exponents().iter().map(u32::to_string).collect();
    format!("[{}]", parts.join(","))
}

/// Left-aligned columns separated by two spaces.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        format!("{}\n", padded.join("  ").trim_end())
    };
    let mut out = line(header.to_vec());
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}

pub fn graded_rows(dims: &GradedDims) -> Vec<Vec<String>> {
    dims.iter()
        .enumerate()
        .flat_map(|(i, by_deg)| by_deg.iter().map(move |(j, d)| vec![i.to_string(), vector(j), d.to_string()]))
        .collect()
}

pub fn graded_table(dims: &GradedDims) -> String {
    table(&["i", "multidegree", "dim"], &graded_rows(dims))
}

pub fn graded_json(dims: &GradedDims) -> Value {
    Value::Array(
        dims.iter()
            .enumerate()
            .flat_map(|(i, by_deg)| by_deg.iter().map(move |(j, d)| json!({"i": i, "j": j, "dim": d})))
            .collect(),
    )
}

pub fn ranks_line(ranks: &[usize]) -> String {
    let parts: Vec<String> = ranks.iter().map(usize::to_string).collect();
    format!("ranks: {}\n", parts.join(" "))
}

pub fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}
