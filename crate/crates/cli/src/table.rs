//! Sweep tables as delimiter-separated text: a header row naming the
//! parameter and each column, one row per grid point, full double
//! precision (shortest round-trip formatting).

use crate::report::SweepTable;

pub fn emit_table(table: &SweepTable) -> String {
    let mut out = String::new();
    out.push_str(&table.columns.join(","));
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}
