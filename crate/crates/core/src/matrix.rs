//! Dense matrices over the rationals.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::Partition;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(a: i64, b: i64) -> Q {
    Q::new(BigInt::from(a), BigInt::from(b))
}

/// Longest numerator or denominator accepted by [`parse_rational`], in digits.
const MAX_DIGITS: usize = 10_000;

/// Parses `"a"` or `"a/b"` with optional leading minus on `a`.
pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a, Some(b)),
        None => (s, None),
    };
    let int = |t: &str, signed: bool| -> Result<BigInt> {
        let digits = if signed { t.strip_prefix('-').unwrap_or(t) } else { t };
        if digits.is_empty() || digits.len() > MAX_DIGITS || !digits.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(Error::Parse(format!("bad rational {s:?}")));
        }
        t.parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))
    };
    let n = int(num, true)?;
    let d = match den {
        Some(b) => int(b, false)?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Q::new(n, d))
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatrixQ {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl MatrixQ {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatrixQ { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        MatrixQ::scalar(n, Q::one())
    }

    pub fn scalar(n: usize, c: Q) -> Self {
        let mut m = MatrixQ::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(MatrixQ { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let rows = rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        MatrixQ::from_rows(rows).expect("rectangular literal")
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<Q>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for {rows}x{cols}",
                data.len()
            )));
        }
        Ok(MatrixQ { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn flat(&self) -> &[Q] {
        &self.data
    }

    pub fn into_flat(self) -> Vec<Q> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    fn check_same(&self, other: &MatrixQ, what: &str) {
        assert!(
            self.rows == other.rows && self.cols == other.cols,
            "{what}: {}x{} vs {}x{}",
            self.rows,
            self.cols,
            other.rows,
            other.cols
        );
    }

    pub fn add(&self, other: &MatrixQ) -> MatrixQ {
        self.check_same(other, "add");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        MatrixQ { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &MatrixQ) -> MatrixQ {
        self.check_same(other, "sub");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        MatrixQ { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> MatrixQ {
        self.scale(&q(-1))
    }

    pub fn scale(&self, c: &Q) -> MatrixQ {
        let data = self.data.iter().map(|a| a * c).collect();
        MatrixQ { rows: self.rows, cols: self.cols, data }
    }

    /// `self + c·I`
    pub fn add_scalar(&self, c: &Q) -> MatrixQ {
        assert!(self.is_square());
        let mut m = self.clone();
        for i in 0..self.rows {
            m[(i, i)] += c;
        }
        m
    }

    /// Product skipping zero entries of `self`; seminormal matrices are sparse.
    pub fn mul(&self, other: &MatrixQ) -> MatrixQ {
        assert_eq!(self.cols, other.rows, "mul: inner dimensions");
        let mut out = MatrixQ::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                let brow = other.row(k);
                let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, b) in orow.iter_mut().zip(brow) {
                    if !b.is_zero() {
                        *o += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &MatrixQ) -> MatrixQ {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn transpose(&self) -> MatrixQ {
        let mut out = MatrixQ::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn trace(&self) -> Q {
        assert!(self.is_square());
        (0..self.rows).fold(Q::zero(), |acc, i| acc + &self[(i, i)])
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// `Some(c)` when `self = c·I`.
    pub fn as_scalar(&self) -> Option<Q> {
        if !self.is_square() {
            return None;
        }
        let c = if self.rows == 0 { Q::zero() } else { self[(0, 0)].clone() };
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = &self[(i, j)];
                if (i == j && *e != c) || (i != j && !e.is_zero()) {
                    return None;
                }
            }
        }
        Some(c)
    }

    pub fn is_identity(&self) -> bool {
        self.as_scalar().is_some_and(|c| c.is_one())
    }

    pub fn pow(&self, k: u32) -> MatrixQ {
        let mut acc = MatrixQ::identity(self.rows);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (MatrixQ, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    let v = &m[(r, j)] * &f;
                    m[(i, j)] -= v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x | self·x = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let (r, pivots) = self.rref();
        nullspace_from_rref(&r, &pivots)
    }

    pub fn inverse(&self) -> Option<MatrixQ> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let mut aug = MatrixQ::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Q::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = MatrixQ::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    pub fn determinant(&self) -> Q {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Q::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Q::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= &piv;
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] / &piv;
                for j in c..n {
                    let v = &m[(c, j)] * &f;
                    m[(i, j)] -= v;
                }
            }
        }
        det
    }

    /// Block-diagonal matrix with the given square blocks.
    pub fn block_diag(blocks: &[MatrixQ]) -> MatrixQ {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut out = MatrixQ::zeros(n, n);
        let mut off = 0;
        for b in blocks {
            assert!(b.is_square());
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out[(off + i, off + j)] = b[(i, j)].clone();
                }
            }
            off += b.rows;
        }
        out
    }

    /// Least common multiple of all entry denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        self.data.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }

    pub fn max_abs_entry_bits(&self) -> u64 {
        self.data
            .iter()
            .map(|x| x.numer().abs().bits().max(x.denom().bits()))
            .max()
            .unwrap_or(0)
    }

    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|x| x.to_string()).collect()).collect()
    }

    pub fn from_string_rows(rows: &[Vec<String>]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        MatrixQ::from_rows(parsed)
    }
}

pub(crate) fn nullspace_from_rref(r: &MatrixQ, pivots: &[usize]) -> Vec<Vec<Q>> {
    let mut is_pivot = vec![false; r.cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..r.cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Q::zero(); r.cols];
        v[free] = Q::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -r[(i, free)].clone();
        }
        basis.push(v);
    }
    basis
}

impl Index<(usize, usize)> for MatrixQ {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for MatrixQ {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for MatrixQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatrixQ{:?}", self.to_string_rows())
    }
}

impl fmt::Display for MatrixQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = self.to_string_rows();
        let width = rows.iter().flatten().map(String::len).max().unwrap_or(0);
        for (i, row) in rows.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|s| format!("{s:>width$}")).collect();
            write!(f, "[{}]", cells.join(" "))?;
            if i + 1 < rows.len() {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

/// One generator matrix of a representation, as written by `symlie rep --matrices`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDump {
    pub shape: Partition,
    pub generator: usize,
    pub entries: Vec<Vec<String>>,
}

impl MatrixDump {
    pub fn new(shape: Partition, generator: usize, m: &MatrixQ) -> Self {
        MatrixDump { shape, generator, entries: m.to_string_rows() }
    }

    pub fn matrix(&self) -> Result<MatrixQ> {
        MatrixQ::from_string_rows(&self.entries)
    }

    /// Parses and validates a dump: square entries, `1 ≤ generator < n`.
    pub fn parse(s: &str) -> Result<(MatrixDump, MatrixQ)> {
        let dump: MatrixDump = serde_json::from_str(s)?;
        let m = dump.matrix()?;
        if !m.is_square() || (m.rows() == 0 && !dump.entries.is_empty()) {
            return Err(Error::DimensionMismatch("matrix dump is not square".into()));
        }
        let n = dump.shape.size();
        if dump.generator == 0 || dump.generator >= n.max(1) {
            return Err(Error::OutOfRange { what: "generator", value: dump.generator });
        }
        Ok((dump, m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("3").unwrap(), q(3));
        assert_eq!(parse_rational("-6/4").unwrap(), frac(-3, 2));
        for bad in ["", "/", "1/", "1/0", "a", "1/-2", "--1", "1.5", "+1"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn products_and_inverse() {
        let a = MatrixQ::from_i64(&[&[1, 2], &[3, 4]]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        assert_eq!(a.determinant(), q(-2));
        assert_eq!(a.trace(), q(5));
        let s = MatrixQ::from_i64(&[&[1, 2], &[2, 4]]);
        assert!(s.inverse().is_none());
        assert_eq!(s.rank(), 1);
        let ns = s.nullspace();
        assert_eq!(ns, vec![vec![q(-2), q(1)]]);
        assert_eq!(a.commutator(&a), MatrixQ::zeros(2, 2));
    }

    #[test]
    fn rref_shape() {
        let m = MatrixQ::from_i64(&[&[0, 2, 4], &[0, 1, 2], &[1, 0, 1]]);
        let (r, piv) = m.rref();
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(r, MatrixQ::from_i64(&[&[1, 0, 1], &[0, 1, 2], &[0, 0, 0]]));
    }

    #[test]
    fn scalar_detection() {
        assert_eq!(MatrixQ::scalar(3, frac(1, 2)).as_scalar(), Some(frac(1, 2)));
        assert_eq!(MatrixQ::from_i64(&[&[1, 1], &[0, 1]]).as_scalar(), None);
    }

    #[test]
    fn block_diagonal() {
        let b = MatrixQ::block_diag(&[MatrixQ::identity(1), MatrixQ::from_i64(&[&[0, 1], &[1, 0]])]);
        assert_eq!(b.rows(), 3);
        assert_eq!(b[(1, 2)], q(1));
        assert_eq!(b[(0, 1)], q(0));
    }

    #[test]
    fn dump_round_trip() {
        let m = MatrixQ::from_rows(vec![vec![frac(-1, 2), frac(3, 2)], vec![frac(1, 2), frac(1, 2)]])
            .unwrap();
        let dump = MatrixDump::new("[2,1]".parse().unwrap(), 2, &m);
        let js = serde_json::to_string(&dump).unwrap();
        assert_eq!(js, r#"{"shape":[2,1],"generator":2,"entries":[["-1/2","3/2"],["1/2","1/2"]]}"#);
        let (back, mm) = MatrixDump::parse(&js).unwrap();
        assert_eq!(back, dump);
        assert_eq!(mm, m);
        assert!(MatrixDump::parse(r#"{"shape":[2,1],"generator":3,"entries":[["1"]]}"#).is_err());
        assert!(MatrixDump::parse(r#"{"shape":[2,1],"generator":1,"entries":[["1","2"]]}"#).is_err());
    }
}
