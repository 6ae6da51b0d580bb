//! Text and LaTeX renderings. Bigraded tables put q-degrees in rows,
//! descending, and homological degrees in columns.

use std::collections::BTreeMap;
use std::fmt::Write;

use khf2::DimTable;

fn grid(t: &DimTable) -> Option<(Vec<i32>, Vec<i32>)> {
    let (imin, imax, jmin, jmax) = t.bounds()?;
    let cols: Vec<i32> = (imin..=imax).collect();
    let rows: Vec<i32> = (jmin..=jmax).rev().collect();
    Some((cols, rows))
}

/// A bigraded table; `tags` adds a trailing note to selected rows.
pub fn text_table(t: &DimTable, tags: &BTreeMap<i32, String>) -> String {
    text_table_axes(t, tags, "j\\i")
}

/// Same as [`text_table`] with a custom corner label naming the axes.
pub fn text_table_axes(t: &DimTable, tags: &BTreeMap<i32, String>, corner: &str) -> String {
    let Some((cols, rows)) = grid(t) else { return "(zero)\n".into() };
    let mut out = String::new();
    write!(out, "{corner:>6} |").unwrap();
    for i in &cols {
        write!(out, "{i:>4}").unwrap();
    }
    out.push('\n');
    out.push_str(&"-".repeat(8 + 4 * cols.len()));
    out.push('\n');
    for j in rows {
        if cols.iter().all(|&i| t.get(i, j) == 0) && !tags.contains_key(&j) {
            continue;
        }
        write!(out, "{j:>6} |").unwrap();
        for &i in &cols {
            match t.get(i, j) {
                0 => write!(out, "{:>4}", ".").unwrap(),
                d => write!(out, "{d:>4}").unwrap(),
            }
        }
        if let Some(tag) = tags.get(&j) {
            write!(out, "   {tag}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn latex_table(t: &DimTable, tags: &BTreeMap<i32, String>) -> String {
    let Some((cols, rows)) = grid(t) else { return "% zero table\n".into() };
    let mut out = String::new();
    writeln!(out, "\\begin{{tabular}}{{r|{}}}", "c".repeat(cols.len())).unwrap();
    let head: Vec<String> = cols.iter().map(|i| format!("${i}$")).collect();
    writeln!(out, "$j \\backslash i$ & {} \\\\ \\hline", head.join(" & ")).unwrap();
    for j in rows {
        if cols.iter().all(|&i| t.get(i, j) == 0) && !tags.contains_key(&j) {
            continue;
        }
        let cells: Vec<String> = cols
            .iter()
            .map(|&i| match t.get(i, j) {
                0 => String::new(),
                1 => "$\\mathbb{F}_2$".into(),
                d => format!("$\\mathbb{{F}}_2^{{{d}}}$"),
            })
            .collect();
        let label = match tags.get(&j) {
            Some(tag) => format!("${tag}$"),
            None => format!("${j}$"),
        };
        writeln!(out, "{label} & {} \\\\", cells.join(" & ")).unwrap();
    }
    out.push_str("\\end{tabular}\n");
    out
}

pub fn text_degrees(m: &BTreeMap<i32, usize>) -> String {
    if m.is_empty() {
        return "(zero)\n".into();
    }
    m.iter().map(|(i, d)| format!("  i = {i:>3}: {d}\n")).collect()
}

pub fn latex_degrees(m: &BTreeMap<i32, usize>) -> String {
    let cols: Vec<&i32> = m.keys().collect();
    let mut out = format!("\\begin{{tabular}}{{r|{}}}\n", "c".repeat(cols.len()));
    let head: Vec<String> = cols.iter().map(|i| format!("${i}$")).collect();
    writeln!(out, "$i$ & {} \\\\ \\hline", head.join(" & ")).unwrap();
    let cells: Vec<String> = m.values().map(|d| format!("${d}$")).collect();
    writeln!(out, "$\\dim$ & {} \\\\", cells.join(" & ")).unwrap();
    out.push_str("\\end{tabular}\n");
    out
}
