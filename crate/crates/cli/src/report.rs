//! Result records and their table rendering.

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Debug, Serialize)]
pub struct Tolerances {
    pub rtol: f64,
    pub norm_tol: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResultRecord {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub outputs: Map<String, Value>,
    pub tolerances: Tolerances,
    pub wall_time_ms: f64,
    /// Set when the computation finished but a certificate failed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<Value>,
}

impl ResultRecord {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("record serializes")
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command  {}\n", self.command));
        for (k, v) in &self.inputs {
            out.push_str(&format!("input    {k} = {}\n", scalar(v)));
        }
        let mut tables = Vec::new();
        let width = self.outputs.keys().map(String::len).max().unwrap_or(0);
        for (k, v) in &self.outputs {
            match v {
                Value::Array(rows) if rows.first().is_some_and(Value::is_object) => {
                    tables.push((k, rows))
                }
                _ => out.push_str(&format!("{k:<width$}  {}\n", scalar(v))),
            }
        }
        for (k, rows) in tables {
            out.push_str(&format!("\n{k}\n"));
            out.push_str(&render_rows(rows));
        }
        out.push_str(&format!(
            "\nrtol {:e}  norm_tol {:e}  wall_time_ms {:.3}\n",
            self.tolerances.rtol, self.tolerances.norm_tol, self.wall_time_ms
        ));
        out
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Aligned columns for an array of flat objects.
pub fn render_rows(rows: &[Value]) -> String {
    let headers: Vec<String> = rows
        .first()
        .and_then(Value::as_object)
        .map(|o| o.keys().cloned().collect())
        .unwrap_or_default();
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            headers
                .iter()
                .map(|h| r.get(h).map(scalar).unwrap_or_default())
                .collect()
        })
        .collect();
    let widths: Vec<usize> = headers
        .iter()
        .enumerate()
        .map(|(i, h)| {
            cells
                .iter()
                .map(|c| c[i].len())
                .chain([h.len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |items: &[String]| {
        items
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            + "\n"
    };
    let mut out = line(&headers);
    for c in &cells {
        out.push_str(&line(c));
    }
    out
}
