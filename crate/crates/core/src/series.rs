//! Power series in `h` truncated at a fixed order `K`, and square matrices
//! of them.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{MatrixQ, Q};

/// `Σ_{k<K} c_k h^k`, exact modulo `h^K`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncSeries {
    coeffs: Vec<Q>,
}

impl TruncSeries {
    pub fn zero(order: usize) -> Self {
        TruncSeries { coeffs: vec![Q::zero(); order] }
    }

    pub fn one(order: usize) -> Self {
        TruncSeries::constant(Q::one(), order)
    }

    pub fn constant(c: Q, order: usize) -> Self {
        let mut s = TruncSeries::zero(order);
        if order > 0 {
            s.coeffs[0] = c;
        }
        s
    }

    /// The variable `h`.
    pub fn h(order: usize) -> Self {
        let mut s = TruncSeries::zero(order);
        if order > 1 {
            s.coeffs[1] = Q::one();
        }
        s
    }

    /// Pads or truncates `coeffs` to length `order`.
    pub fn from_coeffs(mut coeffs: Vec<Q>, order: usize) -> Self {
        coeffs.resize(order, Q::zero());
        TruncSeries { coeffs }
    }

    /// `e^{c h}`.
    pub fn exp_scalar(c: &Q, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order);
        let mut term = Q::one();
        for k in 0..order {
            if k > 0 {
                term = term * c / Q::from_integer(BigInt::from(k));
            }
            coeffs.push(term.clone());
        }
        TruncSeries { coeffs }
    }

    /// `q = e^h`.
    pub fn q(order: usize) -> Self {
        TruncSeries::exp_scalar(&Q::one(), order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &Q {
        &self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_unit(&self) -> bool {
        self.coeffs.first().is_some_and(|c| !c.is_zero())
    }

    fn same_order(&self, other: &TruncSeries) {
        assert_eq!(self.order(), other.order(), "series of different orders");
    }

    pub fn add(&self, other: &TruncSeries) -> TruncSeries {
        self.same_order(other);
        TruncSeries { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &TruncSeries) -> TruncSeries {
        self.same_order(other);
        TruncSeries { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self) -> TruncSeries {
        TruncSeries { coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, c: &Q) -> TruncSeries {
        TruncSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, other: &TruncSeries) -> TruncSeries {
        self.same_order(other);
        let k = self.order();
        let mut coeffs = vec![Q::zero(); k];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..k - i].iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        TruncSeries { coeffs }
    }

    /// Multiplicative inverse; only units are invertible.
    pub fn invert(&self) -> Result<TruncSeries> {
        if !self.is_unit() {
            return Err(Error::NonUnit);
        }
        let k = self.order();
        let inv0 = self.coeffs[0].recip();
        let mut out: Vec<Q> = Vec::with_capacity(k);
        out.push(inv0.clone());
        for m in 1..k {
            let mut s = Q::zero();
            for j in 1..=m {
                if !self.coeffs[j].is_zero() {
                    s += &self.coeffs[j] * &out[m - j];
                }
            }
            out.push(-s * &inv0);
        }
        Ok(TruncSeries { coeffs: out })
    }

    /// `self^e` for any integer `e`; negative powers need a unit.
    pub fn powi(&self, e: i64) -> Result<TruncSeries> {
        let base = if e < 0 { self.invert()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = TruncSeries::one(self.order());
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        Ok(acc)
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}·h")?,
                _ => write!(f, "{c}·h^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(h^{})", self.order())
    }
}

/// `Σ_{k<K} M_k h^k` for square rational matrices `M_k` of a common size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesMatrix {
    dim: usize,
    coeffs: Vec<MatrixQ>,
}

impl SeriesMatrix {
    pub fn zero(dim: usize, order: usize) -> Self {
        SeriesMatrix { dim, coeffs: vec![MatrixQ::zeros(dim, dim); order] }
    }

    pub fn identity(dim: usize, order: usize) -> Self {
        SeriesMatrix::constant(&MatrixQ::identity(dim), order)
    }

    pub fn constant(m: &MatrixQ, order: usize) -> Self {
        assert!(m.is_square());
        let mut s = SeriesMatrix::zero(m.rows(), order);
        if order > 0 {
            s.coeffs[0] = m.clone();
        }
        s
    }

    pub fn from_coeffs(coeffs: Vec<MatrixQ>) -> Result<Self> {
        let dim = coeffs.first().map_or(0, MatrixQ::rows);
        if coeffs.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(Error::DimensionMismatch("series coefficients of different sizes".into()));
        }
        Ok(SeriesMatrix { dim, coeffs })
    }

    /// `exp(h x) = Σ_{k<K} h^k x^k / k!`.
    pub fn exp_matrix(x: &MatrixQ, order: usize) -> Self {
        assert!(x.is_square());
        let mut coeffs = Vec::with_capacity(order);
        let mut term = MatrixQ::identity(x.rows());
        for k in 0..order {
            if k > 0 {
                term = term.mul(x).scale(&Q::new(BigInt::one(), BigInt::from(k)));
            }
            coeffs.push(term.clone());
        }
        SeriesMatrix { dim: x.rows(), coeffs }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[MatrixQ] {
        &self.coeffs
    }

    pub fn constant_term(&self) -> &MatrixQ {
        &self.coeffs[0]
    }

    pub fn entry(&self, i: usize, j: usize) -> TruncSeries {
        TruncSeries { coeffs: self.coeffs.iter().map(|m| m[(i, j)].clone()).collect() }
    }

    pub fn from_entries(entries: &[Vec<TruncSeries>], order: usize) -> Self {
        let dim = entries.len();
        let coeffs = (0..order)
            .map(|k| {
                let mut m = MatrixQ::zeros(dim, dim);
                for (i, row) in entries.iter().enumerate() {
                    for (j, e) in row.iter().enumerate() {
                        m[(i, j)] = e.coeff(k).clone();
                    }
                }
                m
            })
            .collect();
        SeriesMatrix { dim, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(MatrixQ::is_zero)
    }

    fn check(&self, other: &SeriesMatrix) {
        assert_eq!(self.order(), other.order(), "series of different orders");
        assert_eq!(self.dim, other.dim, "matrices of different sizes");
    }

    pub fn add(&self, other: &SeriesMatrix) -> SeriesMatrix {
        self.check(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect();
        SeriesMatrix { dim: self.dim, coeffs }
    }

    pub fn sub(&self, other: &SeriesMatrix) -> SeriesMatrix {
        self.check(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.sub(b)).collect();
        SeriesMatrix { dim: self.dim, coeffs }
    }

    pub fn neg(&self) -> SeriesMatrix {
        SeriesMatrix { dim: self.dim, coeffs: self.coeffs.iter().map(MatrixQ::neg).collect() }
    }

    pub fn mul(&self, other: &SeriesMatrix) -> SeriesMatrix {
        self.check(other);
        let k = self.order();
        let mut coeffs = vec![MatrixQ::zeros(self.dim, self.dim); k];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..k - i].iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
                }
            }
        }
        SeriesMatrix { dim: self.dim, coeffs }
    }

    /// Product with a scalar series.
    pub fn scale_series(&self, s: &TruncSeries) -> SeriesMatrix {
        assert_eq!(self.order(), s.order(), "series of different orders");
        let k = self.order();
        let mut coeffs = vec![MatrixQ::zeros(self.dim, self.dim); k];
        for (i, c) in s.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, m) in self.coeffs[..k - i].iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&m.scale(c));
            }
        }
        SeriesMatrix { dim: self.dim, coeffs }
    }

    pub fn transpose(&self) -> SeriesMatrix {
        SeriesMatrix { dim: self.dim, coeffs: self.coeffs.iter().map(MatrixQ::transpose).collect() }
    }

    /// Applies a rational linear map to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&MatrixQ) -> MatrixQ) -> SeriesMatrix {
        let coeffs: Vec<MatrixQ> = self.coeffs.iter().map(f).collect();
        let dim = coeffs.first().map_or(0, MatrixQ::rows);
        SeriesMatrix { dim, coeffs }
    }

    /// Inverse by the recursion `Y_0 = X_0⁻¹`, `Y_k = −X_0⁻¹ Σ_{j≥1} X_j Y_{k−j}`.
    pub fn inverse(&self) -> Result<SeriesMatrix> {
        let inv0 = self.coeffs.first().and_then(MatrixQ::inverse).ok_or(Error::NonUnit)?;
        let k = self.order();
        let mut ys: Vec<MatrixQ> = vec![inv0.clone()];
        for m in 1..k {
            let mut s = MatrixQ::zeros(self.dim, self.dim);
            for j in 1..=m {
                if !self.coeffs[j].is_zero() {
                    s = s.add(&self.coeffs[j].mul(&ys[m - j]));
                }
            }
            ys.push(inv0.mul(&s).neg());
        }
        Ok(SeriesMatrix { dim: self.dim, coeffs: ys })
    }

    /// Determinant by Gaussian elimination over the series ring, pivoting on
    /// entries with nonzero constant term. Fails with [`Error::NonUnit`] when
    /// no such pivot exists, which happens exactly when the constant term is
    /// singular.
    pub fn det(&self) -> Result<TruncSeries> {
        let k = self.order();
        let n = self.dim;
        let mut a: Vec<Vec<TruncSeries>> = (0..n).map(|i| (0..n).map(|j| self.entry(i, j)).collect()).collect();
        let mut det = TruncSeries::one(k);
        for col in 0..n {
            let piv = (col..n).find(|&r| a[r][col].is_unit()).ok_or(Error::NonUnit)?;
            if piv != col {
                a.swap(piv, col);
                det = det.neg();
            }
            det = det.mul(&a[col][col]);
            let inv = a[col][col].invert()?;
            for r in col + 1..n {
                if a[r][col].is_zero() {
                    continue;
                }
                let factor = a[r][col].mul(&inv);
                for c in col..n {
                    let t = factor.mul(&a[col][c]);
                    a[r][c] = a[r][c].sub(&t);
                }
            }
        }
        Ok(det)
    }

    /// `Λ^r X` on the lexicographic wedge basis, each minor expanded without
    /// division so that singular constant terms are allowed.
    pub fn exterior_power(&self, r: usize) -> Result<SeriesMatrix> {
        if r == 0 || r > self.dim {
            return Err(Error::OutOfRange { what: "exterior degree", value: r });
        }
        let k = self.order();
        let basis = crate::seminormal::wedge_basis(self.dim, r);
        let index: std::collections::HashMap<u64, usize> =
            basis.iter().enumerate().map(|(i, s)| (mask(s), i)).collect();
        let entries: Vec<Vec<TruncSeries>> =
            (0..self.dim).map(|i| (0..self.dim).map(|j| self.entry(i, j)).collect()).collect();
        let mut out = vec![vec![TruncSeries::zero(k); basis.len()]; basis.len()];
        for (a, rows) in basis.iter().enumerate() {
            // dp[S] = det of rows[..|S|] against the columns in S.
            let mut layer: std::collections::HashMap<u64, TruncSeries> =
                [(0u64, TruncSeries::one(k))].into_iter().collect();
            for &row in rows {
                let mut next: std::collections::HashMap<u64, TruncSeries> = std::collections::HashMap::new();
                for (s, d) in &layer {
                    for j in 0..self.dim {
                        if s & (1 << j) != 0 || entries[row][j].is_zero() {
                            continue;
                        }
                        let above = (s >> (j + 1)).count_ones();
                        let mut t = entries[row][j].mul(d);
                        if above % 2 == 1 {
                            t = t.neg();
                        }
                        let e = next.entry(s | (1 << j)).or_insert_with(|| TruncSeries::zero(k));
                        *e = e.add(&t);
                    }
                }
                layer = next;
            }
            for (s, d) in layer {
                out[a][index[&s]] = d;
            }
        }
        Ok(SeriesMatrix::from_entries(&out, k))
    }
}

fn mask(set: &[usize]) -> u64 {
    set.iter().fold(0, |m, &i| m | (1 << i))
}

/// `P·X` for a constant square `P` of the same size.
pub fn lmul_const(p: &MatrixQ, x: &SeriesMatrix) -> SeriesMatrix {
    x.map_coeffs(|m| p.mul(m))
}

/// `X·P` for a constant square `P` of the same size.
pub fn rmul_const(x: &SeriesMatrix, p: &MatrixQ) -> SeriesMatrix {
    x.map_coeffs(|m| m.mul(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{frac, q};

    #[test]
    fn exp_coefficients() {
        let e = TruncSeries::exp_scalar(&q(1), 4);
        assert_eq!(e.coeffs(), &[q(1), q(1), frac(1, 2), frac(1, 6)]);
        let qi = TruncSeries::q(8).invert().unwrap();
        assert_eq!(qi, TruncSeries::exp_scalar(&q(-1), 8));
        assert_eq!(TruncSeries::q(8).mul(&qi), TruncSeries::one(8));
    }

    #[test]
    fn non_unit() {
        assert!(matches!(TruncSeries::h(4).invert(), Err(Error::NonUnit)));
        assert!(TruncSeries::h(4).powi(-1).is_err());
        assert_eq!(TruncSeries::h(4).powi(3).unwrap().coeffs(), &[q(0), q(0), q(0), q(1)]);
        assert!(TruncSeries::h(3).powi(3).unwrap().is_zero());
    }

    #[test]
    fn exp_of_involution() {
        // s² = I gives exp(hs) = cosh h + sinh h · s.
        let s = MatrixQ::from_i64(&[&[1, 0], &[0, -1]]);
        let k = 6;
        let e = SeriesMatrix::exp_matrix(&s, k);
        let qq = TruncSeries::q(k);
        let qi = qq.invert().unwrap();
        let cosh = qq.add(&qi).scale(&frac(1, 2));
        let sinh = qq.sub(&qi).scale(&frac(1, 2));
        let want = SeriesMatrix::identity(2, k).scale_series(&cosh).add(&SeriesMatrix::constant(&s, k).scale_series(&sinh));
        assert_eq!(e, want);
        assert_eq!(SeriesMatrix::exp_matrix(&MatrixQ::zeros(3, 3), k), SeriesMatrix::identity(3, k));
    }

    #[test]
    fn inverse_and_det() {
        let x = MatrixQ::from_i64(&[&[2, 1], &[1, 1]]);
        let k = 5;
        let m = SeriesMatrix::constant(&x, k).mul(&SeriesMatrix::exp_matrix(&x, k));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), SeriesMatrix::identity(2, k));
        // det(x e^{hx}) = det(x) e^{h tr x}
        assert_eq!(m.det().unwrap(), TruncSeries::exp_scalar(&q(3), k));
        let sing = SeriesMatrix::constant(&MatrixQ::zeros(2, 2), k);
        assert!(sing.inverse().is_err());
        assert!(sing.det().is_err());
    }

    #[test]
    fn exterior_power_matches_constant_minors() {
        let x = MatrixQ::from_i64(&[&[1, 2, 0], &[0, 1, 3], &[4, 0, 1]]);
        let k = 3;
        for r in 1..=3 {
            let got = SeriesMatrix::constant(&x, k).exterior_power(r).unwrap();
            let want = SeriesMatrix::constant(&crate::seminormal::exterior_power(&x, r).unwrap(), k);
            assert_eq!(got, want);
        }
        let e = SeriesMatrix::exp_matrix(&x, k);
        let top = e.exterior_power(3).unwrap();
        assert_eq!(top.entry(0, 0), e.det().unwrap());
    }
}
