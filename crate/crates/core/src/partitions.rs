//! Partitions and Young-diagram combinatorics.
//!
//! Diagrams are drawn with the parts as *column* lengths: part `λ_i` is the
//! height of column `i`, and a cell is addressed as `(column, line)` with
//! `line ≤ λ_i`. This is the transpose of the usual Anglophone picture. The
//! labelling of irreducible representations is unaffected: `[n]` is still the
//! trivial representation and `[1^n]` the sign.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest partition size accepted by the text parser.
pub const MAX_PARSE_SIZE: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_parity(odd: bool) -> Sign {
        if odd {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn to_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_parity(self != rhs)
    }
}

/// A weakly decreasing sequence of positive integers.
///
/// Ordered by size first, then lexicographically on the part sequence, so
/// that partitions can serve as canonical map keys.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Partition {
    parts: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PartitionClass {
    Hook,
    /// Proper and not self-conjugate; `is_lex_representative` is `λ < λ'`.
    ProperAsym { is_lex_representative: bool },
    ProperSym,
}

impl Partition {
    /// Builds a partition, dropping trailing zeros.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has an interior zero")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Partition { parts })
    }

    /// Sorts the given parts into decreasing order first.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    /// `[n]`
    pub fn row(n: usize) -> Self {
        Partition::from_unsorted(vec![n])
    }

    /// `[n-r, 1^r]`
    pub fn hook(n: usize, r: usize) -> Result<Self> {
        if n == 0 || r >= n {
            return Err(Error::OutOfRange { what: "hook leg", value: r });
        }
        let mut parts = vec![n - r];
        parts.extend(std::iter::repeat(1).take(r));
        Partition::new(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// The size `|λ|`.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// `λ_i` with 1-based `i`; zero past the last part.
    pub fn part(&self, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.part(1);
        let parts = (1..=width)
            .map(|r| self.parts.iter().take_while(|&&p| p >= r).count())
            .collect();
        Partition { parts }
    }

    pub fn is_self_conjugate(&self) -> bool {
        *self == self.conjugate()
    }

    /// `b(λ) = max { i | λ_i ≥ i }`.
    pub fn diagonal_length(&self) -> Result<usize> {
        if self.is_empty() {
            return Err(Error::EmptyPartition);
        }
        Ok(self
            .parts
            .iter()
            .enumerate()
            .take_while(|(i, &p)| p > *i)
            .count())
    }

    /// Indices `r` (1-based) with `λ_r > λ_{r+1}`.
    pub fn descents(&self) -> Vec<usize> {
        (1..=self.len()).filter(|&r| self.part(r) > self.part(r + 1)).collect()
    }

    /// `δ(λ)`, the number of descents.
    pub fn descent_count(&self) -> usize {
        self.descents().len()
    }

    /// `λ^{(r)}`: remove the last cell of column `r`.
    pub fn remove_at(&self, r: usize) -> Result<Partition> {
        if r == 0 || self.part(r) <= self.part(r + 1) {
            return Err(Error::NotADescent { shape: self.clone(), r });
        }
        let mut parts = self.parts.clone();
        parts[r - 1] -= 1;
        Partition::new(parts)
    }

    /// `P(λ)`, the partitions `μ ↗ λ`, in descent order.
    pub fn predecessors(&self) -> Vec<Partition> {
        self.descents()
            .into_iter()
            .map(|r| self.remove_at(r).expect("descent"))
            .collect()
    }

    /// Partitions obtained by adding one cell.
    pub fn successors(&self) -> Vec<Partition> {
        (1..=self.len() + 1)
            .filter(|&r| r == 1 || self.part(r - 1) > self.part(r))
            .map(|r| {
                let mut parts = self.parts.clone();
                if r > parts.len() {
                    parts.push(1);
                } else {
                    parts[r - 1] += 1;
                }
                Partition { parts }
            })
            .collect()
    }

    /// `μ ⊂ λ` entrywise.
    pub fn contains(&self, other: &Partition) -> bool {
        (1..=other.len()).all(|i| other.part(i) <= self.part(i))
    }

    pub fn union(&self, other: &Partition) -> Partition {
        let len = self.len().max(other.len());
        let parts = (1..=len).map(|i| self.part(i).max(other.part(i))).collect();
        Partition { parts }
    }

    pub fn intersection(&self, other: &Partition) -> Partition {
        let len = self.len().min(other.len());
        let parts = (1..=len).map(|i| self.part(i).min(other.part(i))).collect();
        Partition::new(parts).expect("entrywise min of partitions")
    }

    /// Entrywise comparison after zero padding.
    pub fn lex_cmp(&self, other: &Partition) -> Ordering {
        let len = self.len().max(other.len());
        (1..=len)
            .map(|i| self.part(i).cmp(&other.part(i)))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }

    /// Hooks are exactly the partitions with diagonal length 1.
    pub fn is_hook(&self) -> bool {
        self.len() <= 1 || self.part(2) <= 1
    }

    pub fn classify(&self) -> PartitionClass {
        if self.is_hook() {
            return PartitionClass::Hook;
        }
        let conj = self.conjugate();
        if *self == conj {
            PartitionClass::ProperSym
        } else {
            PartitionClass::ProperAsym { is_lex_representative: self.lex_cmp(&conj).is_lt() }
        }
    }

    /// Cells `(column, line)`, column by column.
    pub fn cells(&self) -> Vec<(usize, usize)> {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (1..=p).map(move |j| (i + 1, j)))
            .collect()
    }

    /// Product formula `n!/(l_1!…l_r!) ∏_{i<j} (l_i − l_j)` with `l_i = λ_i + r − i`.
    pub fn dimension(&self) -> BigUint {
        let r = self.len();
        let n = self.size();
        let l: Vec<usize> = (1..=r).map(|i| self.part(i) + r - i).collect();
        let mut num = factorial(n);
        for i in 0..r {
            for j in i + 1..r {
                num *= BigUint::from(l[i] - l[j]);
            }
        }
        let den = l.iter().fold(BigUint::one(), |acc, &li| acc * factorial(li));
        let (q, rem) = num.div_rem(&den);
        debug_assert!(rem.is_zero());
        q
    }

    /// Branching recursion `dim λ = Σ_{μ ↗ λ} dim μ`, memoised per call.
    pub fn dimension_young(&self) -> BigUint {
        fn go(p: &Partition, memo: &mut HashMap<Partition, BigUint>) -> BigUint {
            if p.size() <= 1 {
                return BigUint::one();
            }
            if let Some(d) = memo.get(p) {
                return d.clone();
            }
            let d = p.predecessors().iter().map(|mu| go(mu, memo)).sum::<BigUint>();
            memo.insert(p.clone(), d.clone());
            d
        }
        go(self, &mut HashMap::new())
    }

    /// Small dimensions as `usize`, for sizing matrices.
    pub fn dim_usize(&self) -> usize {
        self.dimension().to_usize().expect("dimension fits in usize")
    }

    /// Number of shifts: cell pairs `(i₁,j₁), (i₂,j₂)` with `i₁ < i₂` and `j₁ > j₂`.
    pub fn shift_count(&self) -> usize {
        let cells = self.cells();
        let mut count = 0;
        for &(i1, j1) in &cells {
            for &(i2, j2) in &cells {
                if i1 < i2 && j1 > j2 {
                    count += 1;
                }
            }
        }
        count
    }

    /// Sign of the canonical bilinear form on a self-conjugate diagram:
    /// `Plus` is orthogonal, `Minus` symplectic.
    pub fn form_sign(&self) -> Result<Sign> {
        if !self.is_self_conjugate() {
            return Err(Error::NotSelfConjugate(self.clone()));
        }
        Ok(Sign::from_parity(self.shift_count() % 2 == 1))
    }

    /// Product over all shifts of `(d−1)/(d+1)`, `d = |i₁ − i₂ + j₂ − j₁|`.
    ///
    /// With this orientation `ζ(T)·ζ(T') = xi(λ)` holds for every standard
    /// tableau of a self-conjugate shape.
    pub fn xi(&self) -> BigRational {
        let cells = self.cells();
        let mut acc = BigRational::one();
        for &(i1, j1) in &cells {
            for &(i2, j2) in &cells {
                if i1 < i2 && j1 > j2 {
                    let d = (i1 as i64 - i2 as i64 + j2 as i64 - j1 as i64).abs();
                    acc *= BigRational::new(BigInt::from(d - 1), BigInt::from(d + 1));
                }
            }
        }
        acc
    }

    /// Sum of contents `line − column` over all cells.
    pub fn content_sum(&self) -> i64 {
        self.cells().iter().map(|&(i, j)| j as i64 - i as i64).sum()
    }

    /// Character value on a transposition, by the content-sum form of
    /// Frobenius' formula: `γ = 2·dim·Σ content / (n(n−1))`. Oriented so that
    /// `[n]` gives `+1`.
    pub fn gamma(&self) -> BigInt {
        let n = self.size() as i64;
        assert!(n >= 2, "gamma needs |λ| ≥ 2");
        let num = BigInt::from(self.dimension()) * BigInt::from(2 * self.content_sum());
        let den = BigInt::from(n * (n - 1));
        let (q, rem) = num.div_rem(&den);
        assert!(rem.is_zero(), "non-integral character value for {self}");
        q
    }

    /// Determinant of a transposition: `(−1)^{(dim − γ)/2}`.
    pub fn eta(&self) -> Result<Sign> {
        let diff = BigInt::from(self.dimension()) - self.gamma();
        let (half, rem) = diff.div_rem(&BigInt::from(2));
        if !rem.is_zero() {
            return Err(Error::InvariantBreach(format!("dim − γ is odd for {self}")));
        }
        Ok(Sign::from_parity(half.is_odd()))
    }

    /// `𝙳(a,b) = [a+2, 2, 1^b]`.
    pub fn dab(a: usize, b: usize) -> Partition {
        let mut parts = vec![a + 2, 2];
        parts.extend(std::iter::repeat(1).take(b));
        Partition { parts }
    }
}

/// Closed form `dim 𝙳(a,b) = (b+1)/(a+2) · C(n−2, a) · n`, `n = a+b+4`.
pub fn dim_dab(a: usize, b: usize) -> BigUint {
    let n = a + b + 4;
    let num = BigUint::from(b + 1) * binomial(n - 2, a) * BigUint::from(n);
    let (q, rem) = num.div_rem(&BigUint::from(a + 2));
    debug_assert!(rem.is_zero());
    q
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// All partitions of `n`, in decreasing lexicographic order (`[n]` first).
pub fn enumerate_partitions(n: usize) -> Vec<Partition> {
    fn go(remaining: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition { parts: prefix.clone() });
            return;
        }
        for p in (1..=remaining.min(max)).rev() {
            prefix.push(p);
            go(remaining - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// One partition per class of `E_n/∼`: the lexicographically smaller of `{λ, λ'}`.
pub fn en_representatives(n: usize) -> Vec<Partition> {
    let mut reps: Vec<Partition> = enumerate_partitions(n)
        .into_iter()
        .filter(|p| matches!(p.classify(), PartitionClass::ProperAsym { is_lex_representative: true }))
        .collect();
    reps.sort();
    reps
}

/// `F_n`: proper self-conjugate partitions.
pub fn fn_set(n: usize) -> Vec<Partition> {
    let mut out: Vec<Partition> = enumerate_partitions(n)
        .into_iter()
        .filter(|p| p.classify() == PartitionClass::ProperSym)
        .collect();
    out.sort();
    out
}

/// Dimension of `osp` on an `N`-dimensional space with the given form sign.
pub fn osp_dim(dim: &BigUint, sign: Sign) -> BigUint {
    match sign {
        Sign::Plus => dim * (dim - 1u32) / 2u32,
        Sign::Minus => dim * (dim + 1u32) / 2u32,
    }
}

/// Closed-form dimension of `g'_n`: `sl_{n−1}` plus `sl(λ)` over `E_n/∼`
/// plus `osp(λ)` over `F_n`.
pub fn predicted_theorem_a_dim(n: usize) -> Result<BigUint> {
    if n < 3 {
        return Err(Error::OutOfRange { what: "n (need n ≥ 3)", value: n });
    }
    let mut total = BigUint::from((n - 1) * (n - 1) - 1);
    for lambda in en_representatives(n) {
        let d = lambda.dimension();
        total += &d * &d - 1u32;
    }
    for lambda in fn_set(n) {
        total += osp_dim(&lambda.dimension(), lambda.form_sign()?);
    }
    Ok(total)
}

/// A self-conjugate partition of `n ≥ 3`: `[p+1, 1^p]` for `n = 2p+1` and the
/// proper `[p, 2, 1^{p−2}]` for `n = 2p ≥ 4`.
pub fn find_self_conjugate(n: usize) -> Result<Partition> {
    if n < 3 {
        return Err(Error::OutOfRange { what: "n (need n ≥ 3)", value: n });
    }
    let p = n / 2;
    let parts = if n % 2 == 1 {
        std::iter::once(p + 1).chain(std::iter::repeat(1).take(p)).collect()
    } else {
        [p, 2].into_iter().chain(std::iter::repeat(1).take(p - 2)).collect()
    };
    let lambda = Partition::new(parts)?;
    debug_assert!(lambda.is_self_conjugate());
    Ok(lambda)
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size().cmp(&other.size()).then_with(|| self.lex_cmp(other))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

/// Parses `[4,2,1]`, with `a^b` shorthand for `b` copies of `a` (`[4,2^3]`).
impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let inner = s
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected [..], got {s:?}")))?;
        let mut parts = Vec::new();
        if inner.trim().is_empty() {
            return Ok(Partition::default());
        }
        for item in inner.split(',') {
            let item = item.trim();
            let (base, exp) = match item.split_once('^') {
                Some((b, e)) => (b.trim(), parse_count(e.trim())?),
                None => (item, 1),
            };
            let base = parse_count(base)?;
            if base == 0 {
                return Err(Error::Parse(format!("zero part in {s:?}")));
            }
            let total = parts.len().saturating_add(exp);
            if base.saturating_mul(exp) > MAX_PARSE_SIZE || total > MAX_PARSE_SIZE {
                return Err(Error::Parse(format!("{s:?} exceeds size {MAX_PARSE_SIZE}")));
            }
            parts.extend(std::iter::repeat(base).take(exp));
            if parts.iter().sum::<usize>() > MAX_PARSE_SIZE {
                return Err(Error::Parse(format!("{s:?} exceeds size {MAX_PARSE_SIZE}")));
            }
        }
        Partition::new(parts)
    }
}

fn parse_count(s: &str) -> Result<usize> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("expected a nonnegative integer, got {s:?}")));
    }
    s.parse().map_err(|_| Error::Parse(format!("integer out of range: {s:?}")))
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<usize>::deserialize(d)?;
        let total = parts.iter().try_fold(0usize, |acc, &p| acc.checked_add(p));
        if total.map_or(true, |t| t > MAX_PARSE_SIZE) {
            return Err(serde::de::Error::custom(format!("partition exceeds size {MAX_PARSE_SIZE}")));
        }
        Partition::new(parts).map_err(serde::de::Error::custom)
    }
}
