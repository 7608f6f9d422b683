//! Plain-text tables for `--pretty`.

use factorkit::{ClassFlags, Morphism};

/// Left-aligned columns separated by two spaces.
pub fn table(rows: &[Vec<String>]) -> String {
    let width = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..width)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(c, s)| format!("{s:<w$}", w = widths[c]))
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

pub fn flag(b: Option<bool>) -> String {
    match b {
        Some(true) => "yes".into(),
        Some(false) => "no".into(),
        None => "n/a".into(),
    }
}

pub fn flags(f: &ClassFlags) -> String {
    table(&[
        vec!["pure".into(), flag(f.pure)],
        vec!["copure".into(), flag(Some(f.copure))],
        vec!["mixing".into(), flag(f.mixing)],
        vec!["discarding".into(), flag(Some(f.discarding))],
    ])
}

/// A heading line followed by the morphism's matrix, codomain rows by
/// domain columns.
pub fn morphism(m: &Morphism) -> String {
    let (dom, cod) = (m.dom().get(), m.cod().get());
    let head = format!("{} {dom} → {cod}\n", m.theory());
    let rows: Vec<Vec<String>> = match m {
        Morphism::FStoch(s) => (0..cod)
            .map(|r| (0..dom).map(|c| s.get(r, c).to_string()).collect())
            .collect(),
        Morphism::FRel(rel) => (0..cod)
            .map(|b| {
                (0..dom)
                    .map(|a| u8::from(rel.related(a, b)).to_string())
                    .collect()
            })
            .collect(),
        Morphism::FSet(f) => vec![
            (0..dom).map(|a| a.to_string()).collect(),
            f.table().iter().map(|b| format!("↦ {b}")).collect(),
        ],
        Morphism::Quant(q) => {
            let c = q.choi();
            (0..c.nrows())
                .map(|r| {
                    (0..c.ncols())
                        .map(|k| format!("{:.6}{:+.6}i", c[(r, k)].re, c[(r, k)].im))
                        .collect()
                })
                .collect()
        }
    };
    head + &table(&rows)
}
