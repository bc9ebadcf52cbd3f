//! Prime-field arithmetic, field-mode selection and rational reconstruction.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::MatrixQ;

pub const MERSENNE_31: u64 = (1 << 31) - 1;
pub const MERSENNE_61: u64 = (1 << 61) - 1;
pub const DEFAULT_PRIME: u64 = MERSENNE_31;

/// Arithmetic in which a closure runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldMode {
    ExactRational,
    PrimeField(u64),
}

impl FieldMode {
    pub fn prime(p: u64) -> Result<FieldMode> {
        if !is_prime(p) || p >= 1 << 62 {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldMode::PrimeField(p))
    }
}

impl fmt::Display for FieldMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldMode::ExactRational => write!(f, "Q"),
            FieldMode::PrimeField(p) => write!(f, "Fp:{p}"),
        }
    }
}

/// Accepts `Q` and `Fp:p`.
impl FromStr for FieldMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<FieldMode> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldMode::ExactRational);
        }
        let digits = s
            .strip_prefix("Fp:")
            .ok_or_else(|| Error::Parse(format!("mode must be Q or Fp:<prime>, got {s:?}")))?;
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("bad prime in {s:?}")));
        }
        let p: u64 = digits.parse().map_err(|_| Error::Parse(format!("prime out of range in {s:?}")))?;
        FieldMode::prime(p)
    }
}

impl Serialize for FieldMode {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FieldMode {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Deterministic Miller–Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulm = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powm = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulm(r, b);
            }
            b = mulm(b, b);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powm(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulm(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Reducer {
    M31,
    M61,
    Generic,
}

/// The field `Z/pZ`, values kept in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Zp {
    p: u64,
    red: Reducer,
}

impl Zp {
    pub fn new(p: u64) -> Result<Zp> {
        if !is_prime(p) || p >= 1 << 62 {
            return Err(Error::NotPrime(p));
        }
        let red = match p {
            MERSENNE_31 => Reducer::M31,
            MERSENNE_61 => Reducer::M61,
            _ => Reducer::Generic,
        };
        Ok(Zp { p, red })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        match self.red {
            Reducer::M31 => m31_mul(a, b),
            Reducer::M61 => m61_mul(a, b),
            Reducer::Generic => ((a as u128 * b as u128) % self.p as u128) as u64,
        }
    }

    pub fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero mod {}", self.p);
        self.pow(a, self.p - 2)
    }

    /// `dst ← dst − c·src` on the whole slice.
    pub fn axpy_neg(&self, dst: &mut [u64], c: u64, src: &[u64]) {
        let p = self.p;
        let nc = self.neg(c);
        match self.red {
            Reducer::M31 => {
                for (d, &s) in dst.iter_mut().zip(src) {
                    let t = m31_reduce(*d + nc * s);
                    *d = t;
                }
            }
            Reducer::M61 => {
                for (d, &s) in dst.iter_mut().zip(src) {
                    let t = *d + m61_mul(nc, s);
                    *d = if t >= p { t - p } else { t };
                }
            }
            Reducer::Generic => {
                for (d, &s) in dst.iter_mut().zip(src) {
                    let t = (*d as u128 + nc as u128 * s as u128) % p as u128;
                    *d = t as u64;
                }
            }
        }
    }

    pub fn scale_in_place(&self, v: &mut [u64], c: u64) {
        for x in v {
            *x = self.mul(*x, c);
        }
    }

    pub fn from_i64(&self, x: i64) -> u64 {
        let r = x.rem_euclid(self.p as i64);
        r as u64
    }

    pub fn from_bigint(&self, x: &BigInt) -> u64 {
        let r = x.mod_floor(&BigInt::from(self.p));
        r.to_u64().expect("residue fits")
    }

    pub fn reduce(&self, x: &BigRational) -> Result<u64> {
        let d = self.from_bigint(x.denom());
        if d == 0 {
            return Err(Error::PrimeCollision { p: self.p, denominator: x.denom().to_string() });
        }
        Ok(self.mul(self.from_bigint(x.numer()), self.inv(d)))
    }

    /// Reduces every entry; one inversion per distinct denominator.
    pub fn reduce_matrix(&self, m: &MatrixQ) -> Result<Vec<u64>> {
        let mut cache: Vec<(BigInt, u64)> = Vec::new();
        let mut out = Vec::with_capacity(m.flat().len());
        for x in m.flat() {
            if x.is_zero() {
                out.push(0);
                continue;
            }
            let dinv = if x.denom().is_one() {
                1
            } else if let Some((_, i)) = cache.iter().find(|(d, _)| d == x.denom()) {
                *i
            } else {
                let d = self.from_bigint(x.denom());
                if d == 0 {
                    return Err(Error::PrimeCollision {
                        p: self.p,
                        denominator: x.denom().to_string(),
                    });
                }
                let i = self.inv(d);
                cache.push((x.denom().clone(), i));
                i
            };
            out.push(self.mul(self.from_bigint(x.numer()), dinv));
        }
        Ok(out)
    }

    /// Symmetric representative in `(−p/2, p/2]`.
    pub fn signed(&self, a: u64) -> i64 {
        if a > self.p / 2 {
            -((self.p - a) as i64)
        } else {
            a as i64
        }
    }
}

#[inline]
fn m31_reduce(x: u64) -> u64 {
    let r = (x & MERSENNE_31) + (x >> 31);
    let r = (r & MERSENNE_31) + (r >> 31);
    if r >= MERSENNE_31 {
        r - MERSENNE_31
    } else {
        r
    }
}

#[inline]
fn m31_mul(a: u64, b: u64) -> u64 {
    m31_reduce(a * b)
}

#[inline]
fn m61_mul(a: u64, b: u64) -> u64 {
    let x = a as u128 * b as u128;
    let lo = (x as u64) & MERSENNE_61;
    let hi = (x >> 61) as u64;
    let r = lo + hi;
    let r = if r >= MERSENNE_61 { r - MERSENNE_61 } else { r };
    if r >= MERSENNE_61 {
        r - MERSENNE_61
    } else {
        r
    }
}

/// Finds `r/s ≡ a (mod m)` with `|r|, s ≤ √(m/2)`, if one exists.
pub fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<BigRational> {
    let a = a.mod_floor(m);
    if a.is_zero() {
        return Some(BigRational::zero());
    }
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), a);
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let (qt, rem) = r0.div_rem(&r1);
        r0 = std::mem::replace(&mut r1, rem);
        let s2 = &s0 - &qt * &s1;
        s0 = std::mem::replace(&mut s1, s2);
    }
    if s1.is_zero() || s1.abs() > bound {
        return None;
    }
    if !r1.gcd(&s1).is_one() {
        return None;
    }
    Some(BigRational::new(r1, s1))
}

/// Combines residues `a mod m` and `b mod p` into one mod `m·p`.
pub fn crt_pair(a: &BigInt, m: &BigInt, b: u64, p: u64) -> BigInt {
    let zp = Zp::new(p).expect("prime");
    let am = zp.from_bigint(a);
    let mm = zp.from_bigint(m);
    let t = zp.mul(zp.sub(b, am), zp.inv(mm));
    a + m * BigInt::from(t)
}

/// Primes below `2^62` used for multi-modular work, largest first after the
/// two Mersenne primes.
pub fn prime_sequence() -> impl Iterator<Item = u64> {
    let mut candidate = (1u64 << 62) - 1;
    [MERSENNE_61, MERSENNE_31].into_iter().chain(std::iter::from_fn(move || loop {
        candidate -= 2;
        if is_prime(candidate) {
            return Some(candidate);
        }
    }))
}

/// Row echelon basis over `Z/pZ`: rows sorted by pivot, each with a leading 1.
#[derive(Clone, Debug)]
pub struct ModEchelon {
    pub field: Zp,
    pub len: usize,
    pub rows: Vec<Vec<u64>>,
    pub pivots: Vec<usize>,
}

impl ModEchelon {
    pub fn new(field: Zp, len: usize) -> Self {
        ModEchelon { field, len, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` in place; the result is zero iff `v` lies in the span.
    pub fn reduce(&self, v: &mut [u64]) {
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = v[piv];
            if c != 0 {
                self.field.axpy_neg(&mut v[piv..], c, &row[piv..]);
            }
        }
    }

    /// Inserts `v` if independent; returns the position it took.
    pub fn insert(&mut self, mut v: Vec<u64>) -> Option<usize> {
        self.reduce(&mut v);
        let piv = v.iter().position(|&x| x != 0)?;
        let inv = self.field.inv(v[piv]);
        self.field.scale_in_place(&mut v[piv..], inv);
        let at = self.pivots.partition_point(|&p| p < piv);
        self.pivots.insert(at, piv);
        self.rows.insert(at, v);
        Some(at)
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Back-substitutes to reduced row echelon form.
    pub fn into_rref(mut self) -> ModEchelon {
        let f = self.field;
        for i in (0..self.rows.len()).rev() {
            let piv = self.pivots[i];
            let (above, below) = self.rows.split_at_mut(i);
            let row = &below[0];
            for r in above.iter_mut() {
                let c = r[piv];
                if c != 0 {
                    f.axpy_neg(&mut r[piv..], c, &row[piv..]);
                }
            }
        }
        self
    }
}

/// Rank of a list of vectors mod `p`.
pub fn rank_mod_p(field: Zp, vectors: &[Vec<u64>]) -> usize {
    let len = vectors.first().map_or(0, Vec::len);
    let mut e = ModEchelon::new(field, len);
    for v in vectors {
        e.insert(v.clone());
    }
    e.rank()
}

/// Nullspace basis of `rows·x = 0` mod `p`, one vector per free column, in
/// the same layout as [`crate::matrix::MatrixQ::nullspace`].
pub fn nullspace_mod_p(field: Zp, rows: impl IntoIterator<Item = Vec<u64>>, ncols: usize) -> Vec<Vec<u64>> {
    let mut e = ModEchelon::new(field, ncols);
    for r in rows {
        if e.rank() == ncols {
            break;
        }
        e.insert(r);
    }
    let e = e.into_rref();
    let mut is_pivot = vec![false; ncols];
    for &p in &e.pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![0; ncols];
            v[free] = 1;
            for (row, &p) in e.rows.iter().zip(&e.pivots) {
                v[p] = field.neg(row[free]);
            }
            v
        })
        .collect()
}
