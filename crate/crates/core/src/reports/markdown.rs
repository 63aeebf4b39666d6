use serde_json::Value;

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Object(_) | Value::Array(_))
}

/// An array of flat objects, rendered as a table.
fn table(items: &[Value]) -> Option<String> {
    let first = items.first()?.as_object()?;
    let cols: Vec<&String> = first.keys().collect();
    for it in items {
        let o = it.as_object()?;
        if o.len() != cols.len() || !o.values().all(is_scalar) || !cols.iter().all(|c| o.contains_key(*c)) {
            return None;
        }
    }
    let mut s = format!("| {} |\n", cols.iter().map(|c| c.as_str()).collect::<Vec<_>>().join(" | "));
    s += &format!("|{}\n", "---|".repeat(cols.len()));
    for it in items {
        let o = it.as_object().unwrap();
        let cells: Vec<String> = cols.iter().map(|c| scalar(&o[*c])).collect();
        s += &format!("| {} |\n", cells.join(" | "));
    }
    Some(s)
}

fn render(v: &Value, depth: usize, out: &mut String) {
    match v {
        Value::Object(map) => {
            let (flat, nested): (Vec<_>, Vec<_>) = map.iter().partition(|(_, v)| is_scalar(v));
            for (k, v) in flat {
                out.push_str(&format!("- **{k}**: {}\n", scalar(v)));
            }
            for (k, v) in nested {
                out.push_str(&format!("\n{} {k}\n\n", "#".repeat((depth + 2).min(6))));
                render(v, depth + 1, out);
            }
        }
        Value::Array(items) => {
            if items.iter().all(is_scalar) {
                let cells: Vec<String> = items.iter().map(scalar).collect();
                out.push_str(&format!("`[{}]`\n", cells.join(", ")));
            } else if let Some(t) = table(items) {
                out.push_str(&t);
            } else {
                for (i, it) in items.iter().enumerate() {
                    out.push_str(&format!("\n{} [{i}]\n\n", "#".repeat((depth + 2).min(6))));
                    render(it, depth + 1, out);
                }
            }
        }
        other => out.push_str(&format!("{}\n", scalar(other))),
    }
}

/// Render a JSON report as markdown; key order follows the JSON.
pub fn to_markdown(v: &Value) -> String {
    let title = v.get("command").and_then(Value::as_str).unwrap_or("report");
    let mut out = format!("# perfchar {title}\n\n");
    render(v, 0, &mut out);
    out
}
