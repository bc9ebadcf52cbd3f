//! Standard Young tableaux in the column convention of [`crate::partitions`].

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::{Partition, Sign};

/// A standard filling of a diagram by `1..=n`.
///
/// `pos[r-1]` is the cell `(column, line)` holding `r`; `grid[i-1][j-1]` is the
/// entry in cell `(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StandardTableau {
    shape: Partition,
    pos: Vec<(usize, usize)>,
    grid: Vec<Vec<usize>>,
}

impl StandardTableau {
    /// Builds a tableau from the cell of each entry, checking standardness.
    pub fn from_positions(shape: Partition, pos: Vec<(usize, usize)>) -> Result<Self> {
        let n = shape.size();
        if pos.len() != n {
            return Err(Error::InvalidPartition(format!(
                "{} entries for a shape of size {n}",
                pos.len()
            )));
        }
        let mut grid: Vec<Vec<usize>> = shape.parts().iter().map(|&p| vec![0; p]).collect();
        for (k, &(i, j)) in pos.iter().enumerate() {
            if i == 0 || j == 0 || j > shape.part(i) {
                return Err(Error::Parse(format!("cell ({i},{j}) lies outside {shape}")));
            }
            let slot = &mut grid[i - 1][j - 1];
            if *slot != 0 {
                return Err(Error::Parse(format!("cell ({i},{j}) filled twice")));
            }
            *slot = k + 1;
        }
        for (i, col) in grid.iter().enumerate() {
            for (j, &e) in col.iter().enumerate() {
                let up_ok = j == 0 || col[j - 1] < e;
                let left_ok = i == 0 || grid[i - 1][j] < e;
                if !up_ok || !left_ok {
                    return Err(Error::Parse(format!("entry {e} breaks standardness")));
                }
            }
        }
        Ok(StandardTableau { shape, pos, grid })
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn size(&self) -> usize {
        self.pos.len()
    }

    /// `(c_r, l_r)`
    pub fn position(&self, r: usize) -> (usize, usize) {
        self.pos[r - 1]
    }

    pub fn positions(&self) -> &[(usize, usize)] {
        &self.pos
    }

    pub fn entry_at(&self, i: usize, j: usize) -> Option<usize> {
        self.grid.get(i.wrapping_sub(1))?.get(j.wrapping_sub(1)).copied()
    }

    fn check_entry(&self, r: usize) -> Result<()> {
        if r == 0 || r > self.size() {
            return Err(Error::OutOfRange { what: "tableau entry", value: r });
        }
        Ok(())
    }

    /// `d_T(i,j) = c_i − c_j + l_j − l_i`.
    pub fn axial_distance(&self, i: usize, j: usize) -> Result<i64> {
        self.check_entry(i)?;
        self.check_entry(j)?;
        Ok(self.axial(i, j))
    }

    fn axial(&self, i: usize, j: usize) -> i64 {
        let (ci, li) = self.pos[i - 1];
        let (cj, lj) = self.pos[j - 1];
        ci as i64 - cj as i64 + lj as i64 - li as i64
    }

    pub fn same_column(&self, r: usize) -> bool {
        self.pos[r - 1].0 == self.pos[r].0
    }

    pub fn same_line(&self, r: usize) -> bool {
        self.pos[r - 1].1 == self.pos[r].1
    }

    /// `T_r`, or `None` when `r` and `r+1` share a line or a column.
    pub fn swap(&self, r: usize) -> Option<StandardTableau> {
        if r == 0 || r >= self.size() || self.same_column(r) || self.same_line(r) {
            return None;
        }
        let mut t = self.clone();
        t.pos.swap(r - 1, r);
        let (a, b) = (t.pos[r - 1], t.pos[r]);
        t.grid[a.0 - 1][a.1 - 1] = r;
        t.grid[b.0 - 1][b.1 - 1] = r + 1;
        Some(t)
    }

    /// `T < T_r`, i.e. `d_T(r+1, r) > 0`.
    pub fn precedes_swap(&self, r: usize) -> bool {
        self.swap(r).is_some() && self.axial(r + 1, r) > 0
    }

    fn inversions(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.size();
        (1..=n).flat_map(move |i| {
            (i + 1..=n)
                .filter(move |&j| self.pos[i - 1].0 > self.pos[j - 1].0)
                .map(move |j| (i, j))
        })
    }

    /// `w(T)`: sign of the number of column inversions.
    pub fn weight_w(&self) -> Sign {
        Sign::from_parity(self.inversions().count() % 2 == 1)
    }

    /// `ζ(T) = ∏ (d−1)/(d+1)` over column inversions `i < j`, `d = d_T(i,j)`.
    pub fn weight_zeta(&self) -> Result<BigRational> {
        let mut acc = BigRational::one();
        for (i, j) in self.inversions() {
            let d = self.axial(i, j);
            if d < 2 {
                return Err(Error::InvariantBreach(format!(
                    "axial distance {d} on an inverted pair of a standard tableau"
                )));
            }
            acc *= BigRational::new(BigInt::from(d - 1), BigInt::from(d + 1));
        }
        Ok(acc)
    }

    /// `T'`, of shape `λ'`.
    pub fn conjugate(&self) -> StandardTableau {
        let pos = self.pos.iter().map(|&(i, j)| (j, i)).collect();
        StandardTableau::from_positions(self.shape.conjugate(), pos)
            .expect("transpose of a standard tableau is standard")
    }

    /// The tableau filled column by column.
    pub fn column_superstandard(shape: &Partition) -> StandardTableau {
        let pos = shape.cells();
        StandardTableau::from_positions(shape.clone(), pos).expect("superstandard")
    }

    pub fn to_json(&self) -> TableauJson {
        TableauJson {
            shape: self.shape.clone(),
            cells: self.pos.iter().enumerate().map(|(k, &(i, j))| [k + 1, i, j]).collect(),
        }
    }

    pub fn from_json(json: &TableauJson) -> Result<StandardTableau> {
        let n = json.shape.size();
        if json.cells.len() != n {
            return Err(Error::Parse(format!("{} cells for a shape of size {n}", json.cells.len())));
        }
        let mut pos = vec![(0, 0); n];
        for &[e, i, j] in &json.cells {
            if e == 0 || e > n || pos[e - 1] != (0, 0) {
                return Err(Error::Parse(format!("bad or repeated entry {e}")));
            }
            pos[e - 1] = (i, j);
        }
        StandardTableau::from_positions(json.shape.clone(), pos)
    }

    pub fn parse_json(s: &str) -> Result<StandardTableau> {
        let json: TableauJson = serde_json::from_str(s)?;
        StandardTableau::from_json(&json)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableauJson {
    pub shape: Partition,
    pub cells: Vec<[usize; 3]>,
}

/// Lines are printed from the top of the diagram down to line 1; each line
/// lists its entries by increasing column. Relative to the usual English
/// picture this is the transpose, flipped upside down.
impl fmt::Display for StandardTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let height = self.shape.part(1);
        for j in (1..=height).rev() {
            let line: Vec<String> = (1..=self.shape.len())
                .filter_map(|i| self.entry_at(i, j))
                .map(|e| e.to_string())
                .collect();
            write!(f, "{}", line.join(" "))?;
            if j > 1 {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

/// All standard tableaux of `shape`, ordered lexicographically on
/// `(c_1, l_1, c_2, l_2, …)`.
pub fn enumerate_syt(shape: &Partition) -> Vec<StandardTableau> {
    fn go(
        shape: &Partition,
        filled: &mut Vec<usize>,
        pos: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if pos.len() == shape.size() {
            out.push(pos.clone());
            return;
        }
        for i in 1..=shape.len() {
            let h = filled[i - 1];
            let addable = h < shape.part(i) && (i == 1 || filled[i - 2] > h);
            if addable {
                filled[i - 1] += 1;
                pos.push((i, h + 1));
                go(shape, filled, pos, out);
                pos.pop();
                filled[i - 1] -= 1;
            }
        }
    }
    let mut out = Vec::new();
    go(shape, &mut vec![0; shape.len()], &mut Vec::new(), &mut out);
    out.into_iter()
        .map(|pos| StandardTableau::from_positions(shape.clone(), pos).expect("generated standard"))
        .collect()
}

/// Position of `t` in the canonical order of [`enumerate_syt`].
pub fn index_of(list: &[StandardTableau], t: &StandardTableau) -> Option<usize> {
    list.binary_search_by(|s| s.positions().cmp(t.positions())).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn t21() -> StandardTableau {
        StandardTableau::from_positions(p("[2,1]"), vec![(1, 1), (1, 2), (2, 1)]).unwrap()
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_syt(&p("[2,1]")).len(), 2);
        assert_eq!(enumerate_syt(&p("[5]")).len(), 1);
        assert_eq!(enumerate_syt(&p("[2,2]")).len(), 2);
        for n in 1..=8 {
            for l in crate::partitions::enumerate_partitions(n) {
                let list = enumerate_syt(&l);
                assert_eq!(list.len(), l.dimension().to_usize().unwrap());
                assert!(list.windows(2).all(|w| w[0].positions() < w[1].positions()));
            }
        }
    }

    #[test]
    fn canonical_first_tableau() {
        let list = enumerate_syt(&p("[2,1]"));
        assert_eq!(list[0], t21());
        assert_eq!(index_of(&list, &t21()), Some(0));
    }

    #[test]
    fn axial_examples() {
        let t = t21();
        assert_eq!(t.axial_distance(3, 2).unwrap(), 2);
        assert_eq!(t.axial_distance(2, 3).unwrap(), -2);
        assert_eq!(t.axial_distance(1, 1).unwrap(), 0);
        assert!(t.axial_distance(0, 1).is_err());
        assert!(t.axial_distance(1, 4).is_err());
    }

    #[test]
    fn swap_examples() {
        let t = t21();
        assert!(t.swap(1).is_none());
        let u = t.swap(2).unwrap();
        assert_eq!(u.positions(), &[(1, 1), (2, 1), (1, 2)]);
        assert_eq!(u.swap(2).unwrap(), t);
        assert!(t.precedes_swap(2));
        assert!(!u.precedes_swap(2));
    }

    #[test]
    fn weights_on_22() {
        let list = enumerate_syt(&p("[2,2]"));
        let sup = StandardTableau::column_superstandard(&p("[2,2]"));
        assert_eq!(list[0], sup);
        assert_eq!(sup.weight_w(), Sign::Plus);
        assert_eq!(list[1].weight_w(), Sign::Minus);
        assert_eq!(sup.weight_zeta().unwrap(), BigRational::one());
        let third = BigRational::new(1.into(), 3.into());
        assert_eq!(list[1].weight_zeta().unwrap(), third);
        for t in &list {
            let prod = t.weight_zeta().unwrap() * t.conjugate().weight_zeta().unwrap();
            assert_eq!(prod, p("[2,2]").xi());
        }
    }

    #[test]
    fn swap_rules_for_weights() {
        for l in crate::partitions::enumerate_partitions(6) {
            for t in enumerate_syt(&l) {
                for r in 1..6 {
                    if let Some(u) = t.swap(r) {
                        assert_eq!(u.weight_w(), t.weight_w().flip());
                        if t.precedes_swap(r) {
                            let d = t.axial(r + 1, r);
                            let f = BigRational::new((d - 1).into(), (d + 1).into());
                            assert_eq!(u.weight_zeta().unwrap(), t.weight_zeta().unwrap() * f);
                        }
                        assert_eq!(u.conjugate(), t.conjugate().swap(r).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn conjugate_tableau() {
        let t = t21();
        let c = t.conjugate();
        assert_eq!(c.position(1).1, 1);
        assert_eq!(c.position(2).1, 1);
        assert_eq!(c.conjugate(), t);
    }

    #[test]
    fn text_and_json() {
        assert_eq!(t21().to_string(), "2\n1 3");
        let js = serde_json::to_string(&t21().to_json()).unwrap();
        assert_eq!(js, r#"{"shape":[2,1],"cells":[[1,1,1],[2,1,2],[3,2,1]]}"#);
        assert_eq!(StandardTableau::parse_json(&js).unwrap(), t21());
        for bad in [
            r#"{"shape":[2,1],"cells":[[1,1,2],[2,1,1],[3,2,1]]}"#,
            r#"{"shape":[2,1],"cells":[[1,1,1],[1,1,2],[3,2,1]]}"#,
            r#"{"shape":[2,1],"cells":[[1,1,1],[2,1,3],[3,2,1]]}"#,
            r#"{"shape":[1,2],"cells":[]}"#,
            r#"{"shape":[2,1],"cells":[[1,1,1]]}"#,
        ] {
            assert!(StandardTableau::parse_json(bad).is_err(), "{bad}");
        }
    }
}
