//! CSV assembly. Reals are written with 17 significant digits so that
//! re-parsing reproduces the exact double, and the whole table is built in
//! memory to keep emission all-or-nothing.

use std::path::Path;

pub fn real(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn render(header: &str, columns: &[&str], rows: &[Vec<String>]) -> String {
    let mut text = String::with_capacity(rows.len() * columns.len() * 24);
    text.push_str(header);
    text.push('\n');
    text.push_str(&columns.join(","));
    text.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), columns.len());
        text.push_str(&row.join(","));
        text.push('\n');
    }
    text
}

pub fn write(out: Option<&Path>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
