//! ASCII rendering. Tiles show their values; empty cells show `.`.
//!
//! 2-D boards print axis 0 as rows, top to bottom from index 0. 3-D boards
//! print one 2-D slice per index of axis 2. Higher dimensions list tiles.

use std::fmt::Write;

use g2048_core::{Board, Position};

fn cell(b: &Board, coords: &[usize]) -> String {
    match b.get(&Position::new(coords)) {
        Some(e) => format!("{}", 1u128.checked_shl(u32::from(e)).unwrap_or(0)),
        None => ".".into(),
    }
}

fn grid(rows: &[Vec<String>]) -> String {
    let w = rows.iter().flatten().map(|s| s.len()).max().unwrap_or(1);
    let mut out = String::new();
    for r in rows {
        let line: Vec<String> = r.iter().map(|s| format!("{s:>w$}")).collect();
        out.push_str(line.join(" ").trim_end());
        out.push('\n');
    }
    out
}

pub fn render(b: &Board) -> String {
    let dims = b.shape().dims();
    match dims.len() {
        1 => grid(&[(0..dims[0]).map(|j| cell(b, &[j])).collect()]),
        2 => grid(&(0..dims[0]).map(|i| (0..dims[1]).map(|j| cell(b, &[i, j])).collect()).collect::<Vec<_>>()),
        3 => {
            let mut out = String::new();
            for k in 0..dims[2] {
                let _ = writeln!(out, "axis2 = {k}");
                let rows: Vec<Vec<String>> =
                    (0..dims[0]).map(|i| (0..dims[1]).map(|j| cell(b, &[i, j, k])).collect()).collect();
                out.push_str(&grid(&rows));
            }
            out
        }
        _ => {
            let mut out = format!("{} board, tiles in snake order\n", b.shape());
            for (p, e) in b.tiles() {
                let _ = writeln!(out, "{:?} 2^{e}", p.coords());
            }
            out
        }
    }
}
