use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

/// `v` with 6 significant digits, trailing zeros dropped.
pub fn sig6(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let exp = v.abs().log10().floor() as i32;
    if (-4..6).contains(&exp) {
        let s = format!("{:.*}", (5 - exp).max(0) as usize, v);
        let s = if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        };
        if s == "-0" {
            "0".into()
        } else {
            s
        }
    } else {
        let s = format!("{v:.5e}");
        let (mantissa, e) = s.split_once('e').unwrap();
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{mantissa}e{e}")
    }
}

fn scalar(v: &Value, plain: bool) -> String {
    match v {
        Value::Null => "null".into(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => match n.as_f64() {
            Some(f) if plain && !n.is_i64() && !n.is_u64() => sig6(f),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        _ => unreachable!("not a scalar"),
    }
}

fn is_flat_array(v: &Value) -> bool {
    matches!(v, Value::Array(a) if a.iter().all(|x| !x.is_array() && !x.is_object()))
}

/// Flattens nested values into `(path, cells)` rows. Arrays of scalars stay on
/// one row.
fn rows(prefix: &str, v: &Value, plain: bool, out: &mut Vec<(String, Vec<String>)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                rows(&join(k), x, plain, out);
            }
        }
        Value::Array(items) if is_flat_array(v) => {
            out.push((
                prefix.to_string(),
                items.iter().map(|x| scalar(x, plain)).collect(),
            ));
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                rows(&join(&i.to_string()), x, plain, out);
            }
        }
        _ => out.push((prefix.to_string(), vec![scalar(v, plain)])),
    }
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string(v).expect("values always serialize"),
        Format::Csv => {
            let mut out = Vec::new();
            rows("", v, false, &mut out);
            out.iter()
                .map(|(k, cells)| {
                    let mut line = vec![csv_cell(if k.is_empty() { "value" } else { k })];
                    line.extend(cells.iter().map(|c| csv_cell(c)));
                    line.join(",")
                })
                .collect::<Vec<_>>()
                .join("\n")
        }
        Format::Plain => {
            let mut out = Vec::new();
            rows("", v, true, &mut out);
            out.iter()
                .map(|(k, cells)| {
                    if k.is_empty() {
                        cells.join(" ")
                    } else {
                        format!("{k}: {}", cells.join(" "))
                    }
                })
                .collect::<Vec<_>>()
                .join("\n")
        }
    }
}

/// Multiplication table as a grid with header row and column.
pub fn render_grid(header: &[String], body: &[Vec<String>], format: Format) -> String {
    let mut lines = Vec::with_capacity(body.len() + 1);
    match format {
        Format::Csv => {
            lines.push(
                std::iter::once(String::new())
                    .chain(header.iter().cloned())
                    .collect::<Vec<_>>()
                    .join(","),
            );
            for (h, row) in header.iter().zip(body) {
                lines.push(
                    std::iter::once(h.clone())
                        .chain(row.iter().cloned())
                        .collect::<Vec<_>>()
                        .join(","),
                );
            }
        }
        _ => {
            let width = body
                .iter()
                .flatten()
                .chain(header)
                .map(|s| s.len())
                .max()
                .unwrap_or(1);
            let pad = |s: &str| format!("{s:>width$}");
            let mut first = vec![pad("")];
            first.extend(header.iter().map(|h| pad(h)));
            lines.push(first.join(" "));
            for (h, row) in header.iter().zip(body) {
                let mut line = vec![pad(h)];
                line.extend(row.iter().map(|c| pad(c)));
                lines.push(line.join(" "));
            }
        }
    }
    lines.join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(1.2345), "1.2345");
        assert_eq!(sig6(std::f64::consts::PI), "3.14159");
        assert_eq!(sig6(-2.0), "-2");
        assert_eq!(sig6(123456789.0), "1.23457e8");
        assert_eq!(sig6(1.234e-9), "1.234e-9");
        assert_eq!(sig6(6.123233995736766e-17), "6.12323e-17");
        assert_eq!(sig6(0.0), "0");
    }

    #[test]
    fn formats() {
        let v = json!({"level": 1, "coeffs": [1.5, -2.0]});
        assert_eq!(
            render(&v, Format::Json),
            r#"{"level":1,"coeffs":[1.5,-2.0]}"#
        );
        assert_eq!(render(&v, Format::Csv), "level,1\ncoeffs,1.5,-2.0");
        assert_eq!(render(&v, Format::Plain), "level: 1\ncoeffs: 1.5 -2");
        assert_eq!(render(&json!(-2), Format::Plain), "-2");
    }
}
