//! Restriction tables: each generator read off in every local monomial basis.
//!
//! A cell is a sum of terms `c*name` joined by `+`, or `0`. Names are
//! products of `lambda^M` and `omega_H` joined by `.`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_traits::Zero;
use serde::Serialize;

use super::{Generators, OmegaSL};
use crate::error::{Error, Result};
use crate::lattice::Q;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub name: String,
    pub cells: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Table {
    /// `S_<layer>` per column.
    pub columns: Vec<String>,
    pub rows: Vec<TableRow>,
}

/// A cell as a map from canonical monomial to coefficient, zero terms dropped.
pub type Cell = BTreeMap<String, Q>;

fn format_q(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn format_cell(cell: &[(String, Q)]) -> String {
    let terms: Vec<String> = cell.iter().filter(|(_, c)| !c.is_zero()).map(|(n, c)| format!("{}*{n}", format_q(c))).collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

fn parse_q(s: &str) -> Result<Q> {
    let bad = || Error::Input(format!("bad coefficient {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let d: num_bigint::BigInt = b.parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(a.parse().map_err(|_| bad())?, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Parse a cell, without canonicalizing its monomials.
pub fn parse_cell(s: &str) -> Result<Vec<(String, Q)>> {
    let s = s.trim();
    if s == "0" || s.is_empty() {
        return Ok(Vec::new());
    }
    // A leading minus on a coefficient is part of the term, so split on '+' only.
    s.split('+')
        .map(|t| {
            let (c, name) = t
                .trim()
                .split_once('*')
                .ok_or_else(|| Error::Input(format!("term {t:?} is not of the form c*name")))?;
            Ok((name.to_string(), parse_q(c)?))
        })
        .collect()
}

impl Table {
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("class");
        for c in &self.columns {
            out.push('\t');
            out.push_str(c);
        }
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.name);
            for c in &r.cells {
                let _ = write!(out, "\t{c}");
            }
            out.push('\n');
        }
        out
    }

    pub fn parse_tsv(text: &str) -> Result<Table> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Input("empty table".into()))?;
        let mut head = header.split('\t');
        if head.next() != Some("class") {
            return Err(Error::Input("the table header must start with `class`".into()));
        }
        let columns: Vec<String> = head.map(str::to_string).collect();
        let mut rows = Vec::new();
        for line in lines {
            let mut fields = line.split('\t');
            let name = fields.next().unwrap_or_default().to_string();
            let cells: Vec<String> = fields.map(str::to_string).collect();
            if cells.len() != columns.len() {
                return Err(Error::Input(format!("row {name} has {} cells, expected {}", cells.len(), columns.len())));
            }
            for c in &cells {
                parse_cell(c)?;
            }
            rows.push(TableRow { name, cells });
        }
        Ok(Table { columns, rows })
    }
}

/// Rewrite a monomial name with `lambda` factors first (sorted by name) and
/// `omega` factors in the total order; returns the sign of the reordering.
pub fn canonical_monomial(name: &str, order: &BTreeMap<String, usize>) -> Result<(String, i64)> {
    if name == "1" {
        return Ok(("1".into(), 1));
    }
    let factors: Vec<&str> = name.split('.').collect();
    let key = |f: &str| -> Result<(u8, usize, String)> {
        if let Some(m) = f.strip_prefix("lambda^") {
            Ok((0, 0, m.to_string()))
        } else if let Some(h) = f.strip_prefix("omega_") {
            let r = *order.get(h).ok_or_else(|| Error::Input(format!("unknown hypertorus {h} in {name}")))?;
            Ok((1, r, h.to_string()))
        } else {
            Err(Error::Input(format!("unknown factor {f} in {name}")))
        }
    };
    let keys = factors.iter().map(|f| key(f)).collect::<Result<Vec<_>>>()?;
    let mut sign = 1;
    for i in 0..keys.len() {
        for j in i + 1..keys.len() {
            match keys[i].cmp(&keys[j]) {
                std::cmp::Ordering::Greater => sign = -sign,
                // Degree-one classes square to zero.
                std::cmp::Ordering::Equal => return Ok((String::new(), 0)),
                std::cmp::Ordering::Less => {}
            }
        }
    }
    let mut idx: Vec<usize> = (0..factors.len()).collect();
    idx.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    Ok((idx.iter().map(|&i| factors[i]).collect::<Vec<_>>().join("."), sign))
}

pub fn canonical_cell(s: &str, order: &BTreeMap<String, usize>) -> Result<Cell> {
    let mut out = Cell::new();
    for (name, c) in parse_cell(s)? {
        let (n, sign) = canonical_monomial(&name, order)?;
        if sign == 0 {
            continue;
        }
        *out.entry(n).or_insert_with(Q::zero) += c * Q::from_integer(sign.into());
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CellMismatch {
    pub row: String,
    pub column: String,
    pub ours: String,
    pub reference: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct TableComparison {
    /// Sign applied to each shared row of ours to match the reference.
    pub signs: BTreeMap<String, i64>,
    pub mismatches: Vec<CellMismatch>,
    pub missing_rows: Vec<String>,
    pub extra_rows: Vec<String>,
    pub missing_columns: Vec<String>,
}

impl TableComparison {
    pub fn agrees(&self) -> bool {
        self.mismatches.is_empty() && self.missing_rows.is_empty() && self.extra_rows.is_empty() && self.missing_columns.is_empty()
    }
}

/// Compare rows by name, each up to one overall sign.
///
/// `order` ranks the hypertorus names in the total order.
pub fn compare_tables(ours: &Table, reference: &Table, order: &BTreeMap<String, usize>) -> Result<TableComparison> {
    let mut cmp = TableComparison::default();
    let ours_col: BTreeMap<&str, usize> = ours.columns.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
    let cols: Vec<(usize, usize)> = reference
        .columns
        .iter()
        .enumerate()
        .filter_map(|(j, c)| match ours_col.get(c.as_str()) {
            Some(&i) => Some((j, i)),
            None => {
                cmp.missing_columns.push(c.clone());
                None
            }
        })
        .collect();
    let ours_rows: BTreeMap<&str, &TableRow> = ours.rows.iter().map(|r| (r.name.as_str(), r)).collect();
    let ref_names: BTreeSet<&str> = reference.rows.iter().map(|r| r.name.as_str()).collect();
    cmp.extra_rows = ours.rows.iter().filter(|r| !ref_names.contains(r.name.as_str())).map(|r| r.name.clone()).collect();
    for rr in &reference.rows {
        let Some(or) = ours_rows.get(rr.name.as_str()) else {
            cmp.missing_rows.push(rr.name.clone());
            continue;
        };
        let pairs = cols
            .iter()
            .map(|&(j, i)| Ok((canonical_cell(&or.cells[i], order)?, canonical_cell(&rr.cells[j], order)?, j, i)))
            .collect::<Result<Vec<_>>>()?;
        let negate = |c: &Cell| -> Cell { c.iter().map(|(k, v)| (k.clone(), -v.clone())).collect() };
        let misses = |s: i64| pairs.iter().filter(|(a, b, _, _)| &(if s > 0 { a.clone() } else { negate(a) }) != b).count();
        let sign = if misses(-1) < misses(1) { -1 } else { 1 };
        cmp.signs.insert(rr.name.clone(), sign);
        for (a, b, j, i) in &pairs {
            let a = if sign > 0 { a.clone() } else { negate(a) };
            if &a != b {
                cmp.mismatches.push(CellMismatch {
                    row: rr.name.clone(),
                    column: reference.columns[*j].clone(),
                    ours: or.cells[*i].clone(),
                    reference: rr.cells[*j].clone(),
                });
            }
        }
    }
    Ok(cmp)
}

impl Generators<'_> {
    /// Names of the hypertori ranked in the total order.
    pub fn order_ranks(&self) -> BTreeMap<String, usize> {
        let rank = self.model.arrangement.rank_in_order();
        self.model.arrangement.hypertori.iter().enumerate().map(|(i, h)| (h.name.clone(), rank[i])).collect()
    }

    /// Row name of a slot: `omega_H` in rank one, `omega_{H,H'}@L` above.
    pub fn slot_name(&self, w: &OmegaSL) -> String {
        let names: Vec<&str> = w.set.iter().map(|&h| self.model.arrangement.hypertori[h].name.as_str()).collect();
        match names.len() {
            0 => "1".into(),
            1 => format!("omega_{}", names[0]),
            _ => format!("omega_{{{}}}@{}", names.join(","), self.model.layers.layers[w.layer].name),
        }
    }

    /// The cell of a class of degree `k` in the column of `L`.
    pub fn cell(&self, l: usize, k: usize, x: &[Q]) -> String {
        let coords = self.restrict_to_layer(l, k, x);
        let terms: Vec<(String, Q)> =
            self.locals[l].monomials[k].iter().zip(coords).map(|(m, c)| (self.monomial_name(l, m), c)).collect();
        format_cell(&terms)
    }

    /// Rows `λ^{M_i}` and then `ω_{S,L}` for every slot of positive rank.
    pub fn table(&self, omegas: &[OmegaSL]) -> Table {
        let layers = &self.model.layers.layers;
        let columns = layers.iter().map(|l| format!("S_{}", l.name)).collect();
        let mut rows = Vec::new();
        for (i, &m) in self.base.iter().enumerate() {
            let x = self.lambda(i);
            rows.push(TableRow {
                name: format!("lambda^{}", layers[m].name),
                cells: (0..layers.len()).map(|l| self.cell(l, 1, x)).collect(),
            });
        }
        for w in omegas.iter().filter(|w| !w.set.is_empty()) {
            let k = w.set.len();
            rows.push(TableRow { name: self.slot_name(w), cells: (0..layers.len()).map(|l| self.cell(l, k, &w.class)).collect() });
        }
        Table { columns, rows }
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::{example_model, with_table_choices};
    use super::*;
    use num_traits::One;

    #[test]
    fn cells_round_trip() {
        let order: BTreeMap<String, usize> = [("H2".to_string(), 0), ("H0".into(), 1), ("H1".into(), 2)].into();
        let c = canonical_cell("1*omega_H0.omega_H2+-2*lambda^H2+1/2*lambda^H0", &order).unwrap();
        assert_eq!(c["omega_H2.omega_H0"], -Q::one());
        assert_eq!(c["lambda^H2"], Q::from_integer((-2).into()));
        assert_eq!(c["lambda^H0"], Q::new(1.into(), 2.into()));
        assert!(canonical_cell("0", &order).unwrap().is_empty());
        assert!(canonical_cell("1*omega_H0.omega_H0", &order).unwrap().is_empty());
        assert!(parse_cell("x").is_err());
    }

    #[test]
    fn tsv_round_trip_and_self_comparison() {
        let model = example_model();
        let g = with_table_choices(&model);
        let t = g.table(&g.all_omega_sl().unwrap());
        assert_eq!(t.rows.len(), 8);
        let back = Table::parse_tsv(&t.to_tsv()).unwrap();
        assert_eq!(back, t);
        let cmp = compare_tables(&t, &back, &g.order_ranks()).unwrap();
        assert!(cmp.agrees());
        let mut flipped = back.clone();
        flipped.rows[0].cells = flipped.rows[0]
            .cells
            .iter()
            .map(|c| {
                let terms: Vec<(String, Q)> = parse_cell(c).unwrap().into_iter().map(|(n, q)| (n, -q)).collect();
                format_cell(&terms)
            })
            .collect();
        let cmp = compare_tables(&t, &flipped, &g.order_ranks()).unwrap();
        assert!(cmp.agrees());
        assert_eq!(cmp.signs[&t.rows[0].name], -1);
    }
}
