//! Tables of the extremal polynomials and their values.

use serde::Serialize;

use super::config::Format;
use crate::extremal::extremal_polys;
use crate::{Error, Result};

/// Largest order accepted by [`emit_tables`].
pub const MAX_TABLE_ORDER: usize = 12;

/// One table cell: `section` is `poly` (the polynomial `b_{j,n}(T)`) or
/// `values` (its value at `k`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableCell {
    pub section: &'static str,
    pub n: String,
    pub j: String,
    pub k: Option<String>,
    pub value: String,
}

/// Polynomial rows for `n ≤ n_max`, then value grids for each `k`.
pub fn emit_tables(n_max: usize, k_set: &[i64]) -> Result<Vec<TableCell>> {
    if n_max > MAX_TABLE_ORDER {
        return Err(Error::InvalidArgument(format!(
            "table order {n_max} exceeds {MAX_TABLE_ORDER}"
        )));
    }
    let mut cells = Vec::new();
    let polys: Vec<_> = (0..=n_max).map(extremal_polys).collect::<Result<_>>()?;
    for (n, row) in polys.iter().enumerate() {
        for (j, poly) in row.iter().enumerate() {
            cells.push(TableCell {
                section: "poly",
                n: n.to_string(),
                j: j.to_string(),
                k: None,
                value: poly.to_string(),
            });
        }
    }
    for &k in k_set {
        for (n, row) in polys.iter().enumerate() {
            for (j, poly) in row.iter().enumerate() {
                cells.push(TableCell {
                    section: "values",
                    n: n.to_string(),
                    j: j.to_string(),
                    k: Some(k.to_string()),
                    value: poly.eval_i64(k).to_string(),
                });
            }
        }
    }
    Ok(cells)
}

pub fn render_tables(cells: &[TableCell], format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => {
            let mut out = b"[".to_vec();
            for (i, c) in cells.iter().enumerate() {
                out.extend_from_slice(if i == 0 { b"\n" } else { b",\n" });
                serde_json::to_writer(&mut out, c)?;
            }
            out.extend_from_slice(if cells.is_empty() { b"]\n" } else { b"\n]\n" });
            Ok(out)
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .has_headers(false)
                .from_writer(Vec::new());
            w.write_record(["section", "n", "j", "k", "value"])
                .map_err(|e| Error::Config(e.to_string()))?;
            for c in cells {
                w.serialize(c).map_err(|e| Error::Config(e.to_string()))?;
            }
            w.into_inner().map_err(|e| Error::Io(e.into_error()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(cells: &[TableCell], section: &str, n: usize, k: Option<i64>) -> Vec<String> {
        cells
            .iter()
            .filter(|c| {
                c.section == section && c.n == n.to_string() && c.k == k.map(|k| k.to_string())
            })
            .map(|c| c.value.clone())
            .collect()
    }

    #[test]
    fn value_rows() {
        let cells = emit_tables(5, &[2, 3]).unwrap();
        assert_eq!(row(&cells, "values", 3, Some(2)), ["1", "14", "-12", "8"]);
        assert_eq!(
            row(&cells, "values", 5, Some(3)),
            ["1", "102786", "-102780", "66312", "-29808", "7776"]
        );
        assert_eq!(row(&cells, "poly", 3, None)[1], "2T^6-6T^5+5T^4-T");
    }

    #[test]
    fn order_zero() {
        let cells = emit_tables(0, &[5]).unwrap();
        assert_eq!(row(&cells, "values", 0, Some(5)), ["1"]);
        assert!(emit_tables(13, &[2]).is_err());
    }

    #[test]
    fn csv_layout() {
        let cells = emit_tables(1, &[2]).unwrap();
        let text = String::from_utf8(render_tables(&cells, Format::Csv).unwrap()).unwrap();
        assert!(text.starts_with("section,n,j,k,value\npoly,0,0,,1\n"));
        assert!(text.contains("values,1,1,2,2\n"));
    }
}
