//! Lie algebras generated by matrices, over `Q` or `Z/pZ`.
//!
//! Elements are block-diagonal matrices stored as the concatenation of their
//! row-major blocks. The span of all right-normed brackets
//! `[g_1, [g_2, … [g_{k−1}, g_k]]]` of the generators is the generated Lie
//! algebra, so the saturation only brackets against generators.
//!
//! Exact runs are guided by a prime: growth is decided modulo `p`, brackets
//! of accepted elements are recomputed over `Q`, and the result is then
//! certified over `Q` (exact reduced echelon form plus an exact closure
//! check). If certification fails the engine falls back to plain rational
//! saturation.

use std::collections::VecDeque;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{MatrixQ, Q};
use crate::modp::{crt_pair, prime_sequence, rational_reconstruct, FieldMode, ModEchelon, Zp, MERSENNE_61};
use crate::partitions::{en_representatives, enumerate_partitions, fn_set, osp_dim, Partition, PartitionClass, Sign};
use crate::seminormal::{duality_intertwiner, bilinear_form, RepHandle};

/// Block sizes of the ambient block-diagonal algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    dims: Vec<usize>,
    offsets: Vec<usize>,
    total: usize,
}

impl Layout {
    pub fn new(dims: Vec<usize>) -> Layout {
        let mut offsets = Vec::with_capacity(dims.len());
        let mut total = 0;
        for &d in &dims {
            offsets.push(total);
            total += d * d;
        }
        Layout { dims, offsets, total }
    }

    pub fn ambient_dim(&self) -> usize {
        self.total
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn block_range(&self, b: usize) -> std::ops::Range<usize> {
        self.offsets[b]..self.offsets[b] + self.dims[b] * self.dims[b]
    }

    pub fn flatten(&self, blocks: &[MatrixQ]) -> Vec<Q> {
        let mut v = Vec::with_capacity(self.total);
        for (m, &d) in blocks.iter().zip(&self.dims) {
            assert!(m.rows() == d && m.cols() == d, "block size");
            v.extend_from_slice(m.flat());
        }
        v
    }

    pub fn unflatten(&self, v: &[Q]) -> Vec<MatrixQ> {
        (0..self.dims.len())
            .map(|b| {
                let d = self.dims[b];
                MatrixQ::from_flat(d, d, v[self.block_range(b)].to_vec()).expect("block")
            })
            .collect()
    }

    /// Sum of the block traces.
    pub fn trace<T: Clone>(&self, v: &[T], zero: T, add: impl Fn(T, &T) -> T) -> T {
        let mut acc = zero;
        for (b, &d) in self.dims.iter().enumerate() {
            let off = self.offsets[b];
            for i in 0..d {
                acc = add(acc, &v[off + i * d + i]);
            }
        }
        acc
    }
}

/// Echelonised basis of a computed Lie algebra.
#[derive(Clone, Debug)]
pub struct SpanBasis {
    pub ambient_dim: usize,
    pub mode: FieldMode,
    pub pivots: Vec<usize>,
    pub rows: SpanRows,
}

#[derive(Clone, Debug)]
pub enum SpanRows {
    /// Reduced row echelon form over `Q`.
    Rational(Vec<Vec<Q>>),
    /// Row echelon form modulo the prime of `mode`, leading coefficients 1.
    Modular(Vec<Vec<u64>>),
}

impl SpanBasis {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn rational_rows(&self) -> Option<&[Vec<Q>]> {
        match &self.rows {
            SpanRows::Rational(r) => Some(r),
            SpanRows::Modular(_) => None,
        }
    }

    /// Membership of a flattened element.
    pub fn contains(&self, v: &[Q]) -> Result<bool> {
        match (&self.rows, self.mode) {
            (SpanRows::Rational(rows), _) => Ok(RationalRref::new(rows.clone(), self.pivots.clone()).contains(v)),
            (SpanRows::Modular(rows), FieldMode::PrimeField(p)) => {
                let f = Zp::new(p)?;
                let ech = ModEchelon { field: f, len: self.ambient_dim, rows: rows.clone(), pivots: self.pivots.clone() };
                let w = v.iter().map(|x| f.reduce(x)).collect::<Result<Vec<_>>>()?;
                Ok(ech.contains(&w))
            }
            (SpanRows::Modular(_), FieldMode::ExactRational) => unreachable!("modular rows in rational mode"),
        }
    }
}

/// Progress sink: `(round, rank)`.
pub type Progress<'a> = &'a (dyn Fn(usize, usize) + Sync);

#[derive(Clone, Copy)]
pub struct ClosureOptions<'a> {
    /// Dimension of a Lie algebra already verified to contain every
    /// generator; saturation stops as soon as the rank reaches it.
    pub ceiling: Option<usize>,
    /// Prime steering exact runs.
    pub guide_prime: u64,
    pub progress: Option<Progress<'a>>,
}

impl Default for ClosureOptions<'_> {
    fn default() -> Self {
        ClosureOptions { ceiling: None, guide_prime: MERSENNE_61, progress: None }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureStats {
    pub rounds: usize,
    pub candidates: usize,
    pub rational_fallback: bool,
}

/// Sparse square matrix as `(row, col, value)` triples.
struct Sparse<T> {
    d: usize,
    entries: Vec<(usize, usize, T)>,
}

fn sparse_q(m: &MatrixQ) -> Sparse<Q> {
    let d = m.rows();
    let entries = (0..d)
        .flat_map(|i| (0..d).map(move |j| (i, j)))
        .filter(|&(i, j)| !m[(i, j)].is_zero())
        .map(|(i, j)| (i, j, m[(i, j)].clone()))
        .collect();
    Sparse { d, entries }
}

fn sparse_p(f: &Zp, m: &MatrixQ) -> Result<Sparse<u64>> {
    let d = m.rows();
    let v = f.reduce_matrix(m)?;
    let entries = (0..d * d).filter(|&k| v[k] != 0).map(|k| (k / d, k % d, v[k])).collect();
    Ok(Sparse { d, entries })
}

fn bracket_p(f: &Zp, layout: &Layout, g: &[Sparse<u64>], e: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; layout.total];
    for (b, gb) in g.iter().enumerate() {
        let d = gb.d;
        let r = layout.block_range(b);
        let eb = &e[r.clone()];
        let ob = &mut out[r];
        for &(i, k, v) in &gb.entries {
            // out[i, :] += v · e[k, :]
            let nv = f.neg(v);
            f.axpy_neg(&mut ob[i * d..(i + 1) * d], nv, &eb[k * d..(k + 1) * d]);
        }
        for &(k, j, v) in &gb.entries {
            for i in 0..d {
                let x = eb[i * d + k];
                if x != 0 {
                    ob[i * d + j] = f.sub(ob[i * d + j], f.mul(x, v));
                }
            }
        }
    }
    out
}

fn bracket_q(layout: &Layout, g: &[Sparse<Q>], e: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); layout.total];
    for (b, gb) in g.iter().enumerate() {
        let d = gb.d;
        let r = layout.block_range(b);
        let eb = &e[r.clone()];
        let ob = &mut out[r];
        for (i, k, v) in &gb.entries {
            for j in 0..d {
                let x = &eb[k * d + j];
                if !x.is_zero() {
                    ob[i * d + j] += v * x;
                }
            }
        }
        for (k, j, v) in &gb.entries {
            for i in 0..d {
                let x = &eb[i * d + k];
                if !x.is_zero() {
                    ob[i * d + j] -= x * v;
                }
            }
        }
    }
    out
}

/// Row echelon basis over `Q` with leading coefficients 1, rows sorted by pivot.
struct RatEchelon {
    rows: Vec<Vec<Q>>,
    pivots: Vec<usize>,
}

impl RatEchelon {
    fn new() -> Self {
        RatEchelon { rows: Vec::new(), pivots: Vec::new() }
    }

    fn insert(&mut self, mut v: Vec<Q>) -> bool {
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            if v[piv].is_zero() {
                continue;
            }
            let c = v[piv].clone();
            for k in piv..v.len() {
                if !row[k].is_zero() {
                    let t = &row[k] * &c;
                    v[k] -= t;
                }
            }
        }
        let Some(piv) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[piv].recip();
        for x in &mut v[piv..] {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let at = self.pivots.partition_point(|&p| p < piv);
        self.pivots.insert(at, piv);
        self.rows.insert(at, v);
        true
    }

    fn into_rref(mut self) -> RationalRref {
        for i in (0..self.rows.len()).rev() {
            let piv = self.pivots[i];
            let (above, below) = self.rows.split_at_mut(i);
            let row = &below[0];
            for r in above.iter_mut() {
                if r[piv].is_zero() {
                    continue;
                }
                let c = r[piv].clone();
                for k in piv..row.len() {
                    if !row[k].is_zero() {
                        let t = &row[k] * &c;
                        r[k] -= t;
                    }
                }
            }
        }
        RationalRref::new(self.rows, self.pivots)
    }
}

/// Reduced echelon basis over `Q` with a column index of the non-pivot
/// entries, for fast exact membership tests.
pub(crate) struct RationalRref {
    rows: Vec<Vec<Q>>,
    pivots: Vec<usize>,
    columns: Vec<Vec<(usize, Q)>>,
    is_pivot: Vec<bool>,
}

impl RationalRref {
    fn new(rows: Vec<Vec<Q>>, pivots: Vec<usize>) -> Self {
        let len = rows.first().map_or(0, Vec::len);
        let mut is_pivot = vec![false; len];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut columns = vec![Vec::new(); len];
        for (i, row) in rows.iter().enumerate() {
            for (k, x) in row.iter().enumerate() {
                if !is_pivot[k] && !x.is_zero() {
                    columns[k].push((i, x.clone()));
                }
            }
        }
        RationalRref { rows, pivots, columns, is_pivot }
    }

    fn contains(&self, v: &[Q]) -> bool {
        if self.rows.is_empty() {
            return v.iter().all(Zero::is_zero);
        }
        let coeffs: Vec<&Q> = self.pivots.iter().map(|&p| &v[p]).collect();
        for (k, col) in self.columns.iter().enumerate() {
            if self.is_pivot[k] {
                continue;
            }
            let mut s = Q::zero();
            for (i, x) in col {
                if !coeffs[*i].is_zero() {
                    s += coeffs[*i] * x;
                }
            }
            if s != v[k] {
                return false;
            }
        }
        true
    }
}

enum Origin {
    Generator(usize),
    Bracket { gen: usize, of: usize },
}

struct Growth {
    ech: ModEchelon,
    raw: Vec<Vec<u64>>,
    origin: Vec<Origin>,
    stats: ClosureStats,
}

/// Breadth-first saturation modulo `p`.
fn grow_mod_p(
    f: Zp,
    layout: &Layout,
    gens: &[Vec<MatrixQ>],
    opts: &ClosureOptions,
) -> Result<Growth> {
    let sparse: Vec<Vec<Sparse<u64>>> = gens
        .iter()
        .map(|g| g.iter().map(|b| sparse_p(&f, b)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let mut ech = ModEchelon::new(f, layout.total);
    let mut raw = Vec::new();
    let mut origin = Vec::new();
    let mut depth = Vec::new();
    let mut queue = VecDeque::new();
    let mut stats = ClosureStats::default();
    let full = |rank: usize| opts.ceiling.is_some_and(|c| rank >= c) || rank == layout.total;

    for (i, g) in gens.iter().enumerate() {
        let v: Vec<u64> = g.iter().map(|b| f.reduce_matrix(b)).collect::<Result<Vec<_>>>()?.concat();
        stats.candidates += 1;
        if ech.insert(v.clone()).is_some() {
            queue.push_back(raw.len());
            raw.push(v);
            origin.push(Origin::Generator(i));
            depth.push(1);
        }
    }
    let mut round = 1;
    'outer: while let Some(e) = queue.pop_front() {
        if full(ech.rank()) {
            break;
        }
        if depth[e] > round {
            round = depth[e];
            if let Some(cb) = opts.progress {
                cb(round, ech.rank());
            }
        }
        let candidates: Vec<Vec<u64>> =
            sparse.par_iter().map(|g| bracket_p(&f, layout, g, &raw[e])).collect();
        for (gi, c) in candidates.into_iter().enumerate() {
            stats.candidates += 1;
            if ech.insert(c.clone()).is_some() {
                queue.push_back(raw.len());
                raw.push(c);
                origin.push(Origin::Bracket { gen: gi, of: e });
                depth.push(depth[e] + 1);
                if full(ech.rank()) {
                    break 'outer;
                }
            }
        }
    }
    stats.rounds = depth.iter().copied().max().unwrap_or(0);
    if let Some(cb) = opts.progress {
        cb(stats.rounds, ech.rank());
    }
    Ok(Growth { ech, raw, origin, stats })
}

/// Lie closure of block-diagonal generators `gens[g][b]` with block sizes `dims`.
pub fn close_blocks(
    gens: &[Vec<MatrixQ>],
    dims: &[usize],
    mode: FieldMode,
    opts: &ClosureOptions,
) -> Result<(SpanBasis, ClosureStats)> {
    let layout = Layout::new(dims.to_vec());
    for g in gens {
        if g.len() != dims.len() || g.iter().zip(dims).any(|(m, &d)| m.rows() != d || m.cols() != d) {
            return Err(Error::DimensionMismatch("generator blocks do not match the layout".into()));
        }
    }
    match mode {
        FieldMode::PrimeField(p) => {
            let f = Zp::new(p)?;
            let growth = grow_mod_p(f, &layout, gens, opts)?;
            let basis = SpanBasis {
                ambient_dim: layout.total,
                mode,
                pivots: growth.ech.pivots,
                rows: SpanRows::Modular(growth.ech.rows),
            };
            Ok((basis, growth.stats))
        }
        FieldMode::ExactRational => {
            let sparse: Vec<Vec<Sparse<Q>>> = gens.iter().map(|g| g.iter().map(sparse_q).collect()).collect();
            let guided = Zp::new(opts.guide_prime)
                .ok()
                .and_then(|f| guided_rational(f, &layout, gens, &sparse, opts).ok().flatten());
            let (rref, stats) = match guided {
                Some(done) => done,
                None => {
                    let (rref, mut stats) = rational_saturation(&layout, gens, &sparse, opts);
                    stats.rational_fallback = true;
                    (rref, stats)
                }
            };
            let basis = SpanBasis {
                ambient_dim: layout.total,
                mode,
                pivots: rref.pivots,
                rows: SpanRows::Rational(rref.rows),
            };
            Ok((basis, stats))
        }
    }
}

/// Modular growth, exact lift and certification. `Ok(None)` asks for the
/// rational fallback.
fn guided_rational(
    f: Zp,
    layout: &Layout,
    gens: &[Vec<MatrixQ>],
    sparse: &[Vec<Sparse<Q>>],
    opts: &ClosureOptions,
) -> Result<Option<(RationalRref, ClosureStats)>> {
    let growth = grow_mod_p(f, layout, gens, opts)?;
    // Exact counterparts of the accepted elements.
    let mut raw_q: Vec<Vec<Q>> = Vec::with_capacity(growth.raw.len());
    for o in &growth.origin {
        let v = match *o {
            Origin::Generator(i) => layout.flatten(&gens[i]),
            Origin::Bracket { gen, of } => bracket_q(layout, &sparse[gen], &raw_q[of]),
        };
        raw_q.push(v);
    }
    let Some(rref) = lift_rref(f, growth.ech, &raw_q) else {
        return Ok(None);
    };
    // Closed under ad(g) for every generator and containing the generators:
    // the span is exactly the generated algebra.
    let closed = rref
        .rows
        .par_iter()
        .all(|row| sparse.iter().all(|g| rref.contains(&bracket_q(layout, g, row))));
    if !closed {
        return Ok(None);
    }
    Ok(Some((rref, growth.stats)))
}

/// Reduced echelon form over `Q` of `raw`, whose reductions mod `p` have
/// echelon form `ech` of full rank. Verified exactly; `None` on failure.
fn lift_rref(f: Zp, ech: ModEchelon, raw: &[Vec<Q>]) -> Option<RationalRref> {
    let m = ech.rank();
    if m != raw.len() {
        return None;
    }
    if m == 0 {
        return Some(RationalRref::new(Vec::new(), Vec::new()));
    }
    let len = ech.len;
    let first = ech.into_rref();
    let pivots = first.pivots.clone();
    let mut residues: Vec<Vec<BigInt>> =
        first.rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut modulus = BigInt::from(f.modulus());
    let extra_primes = prime_sequence().filter(|&p| p != f.modulus()).take(6);
    let mut extra = extra_primes.into_iter();
    loop {
        if let Some(rows) = reconstruct_rows(&residues, &modulus) {
            let rref = RationalRref::new(rows, pivots.clone());
            if raw.par_iter().all(|v| rref.contains(v)) {
                return Some(rref);
            }
        }
        let p = extra.next()?;
        let g = Zp::new(p).ok()?;
        let mut e = ModEchelon::new(g, len);
        for v in raw {
            let w = v.iter().map(|x| g.reduce(x)).collect::<Result<Vec<_>>>().ok()?;
            e.insert(w);
        }
        let e = e.into_rref();
        if e.pivots != pivots {
            continue;
        }
        for (acc_row, row) in residues.iter_mut().zip(&e.rows) {
            for (acc, &x) in acc_row.iter_mut().zip(row) {
                *acc = crt_pair(acc, &modulus, x, p);
            }
        }
        modulus *= BigInt::from(p);
    }
}

fn reconstruct_rows(residues: &[Vec<BigInt>], modulus: &BigInt) -> Option<Vec<Vec<Q>>> {
    residues
        .par_iter()
        .map(|row| row.iter().map(|x| rational_reconstruct(x, modulus)).collect::<Option<Vec<Q>>>())
        .collect()
}

fn rational_saturation(
    layout: &Layout,
    gens: &[Vec<MatrixQ>],
    sparse: &[Vec<Sparse<Q>>],
    opts: &ClosureOptions,
) -> (RationalRref, ClosureStats) {
    let mut ech = RatEchelon::new();
    let mut raw: Vec<Vec<Q>> = Vec::new();
    let mut depth = Vec::new();
    let mut queue = VecDeque::new();
    let mut stats = ClosureStats::default();
    let full = |rank: usize| opts.ceiling.is_some_and(|c| rank >= c) || rank == layout.total;
    for g in gens {
        let v = layout.flatten(g);
        stats.candidates += 1;
        if ech.insert(v.clone()) {
            queue.push_back(raw.len());
            raw.push(v);
            depth.push(1);
        }
    }
    'outer: while let Some(e) = queue.pop_front() {
        if full(ech.rows.len()) {
            break;
        }
        let cands: Vec<Vec<Q>> = sparse.par_iter().map(|g| bracket_q(layout, g, &raw[e])).collect();
        for c in cands {
            stats.candidates += 1;
            if ech.insert(c.clone()) {
                queue.push_back(raw.len());
                raw.push(c);
                depth.push(depth[e] + 1);
                if full(ech.rows.len()) {
                    break 'outer;
                }
            }
        }
        if let Some(cb) = opts.progress {
            cb(depth[e], ech.rows.len());
        }
    }
    stats.rounds = depth.iter().copied().max().unwrap_or(0);
    (ech.into_rref(), stats)
}

/// Restricts a basis to the kernel of the block-trace functional.
pub fn traceless_subspace(basis: SpanBasis, dims: &[usize]) -> Result<SpanBasis> {
    let layout = Layout::new(dims.to_vec());
    let SpanBasis { ambient_dim, mode, mut pivots, rows } = basis;
    let rows = match rows {
        SpanRows::Rational(mut rows) => {
            let traces: Vec<Q> = rows.iter().map(|r| layout.trace(r, Q::zero(), |a, b| a + b)).collect();
            if let Some(j) = traces.iter().rposition(|t| !t.is_zero()) {
                let pivot_row = rows.remove(j);
                pivots.remove(j);
                for (i, row) in rows.iter_mut().enumerate().take(j) {
                    if traces[i].is_zero() {
                        continue;
                    }
                    let c = &traces[i] / &traces[j];
                    for (x, y) in row.iter_mut().zip(&pivot_row) {
                        if !y.is_zero() {
                            *x -= &c * y;
                        }
                    }
                }
            }
            SpanRows::Rational(rows)
        }
        SpanRows::Modular(mut rows) => {
            let FieldMode::PrimeField(p) = mode else { unreachable!("modular rows in rational mode") };
            let f = Zp::new(p)?;
            let traces: Vec<u64> = rows.iter().map(|r| layout.trace(r, 0u64, |a, b| f.add(a, *b))).collect();
            if let Some(j) = traces.iter().rposition(|&t| t != 0) {
                let pivot_row = rows.remove(j);
                pivots.remove(j);
                let inv = f.inv(traces[j]);
                for (i, row) in rows.iter_mut().enumerate().take(j) {
                    if traces[i] != 0 {
                        f.axpy_neg(row, f.mul(traces[i], inv), &pivot_row);
                    }
                }
            }
            SpanRows::Modular(rows)
        }
    };
    Ok(SpanBasis { ambient_dim, mode, pivots, rows })
}

/// Lie algebra generated by square matrices of one size.
pub fn lie_closure(generators: &[MatrixQ], mode: FieldMode) -> Result<SpanBasis> {
    lie_closure_with(generators, mode, &ClosureOptions::default()).map(|(b, _)| b)
}

pub fn lie_closure_with(
    generators: &[MatrixQ],
    mode: FieldMode,
    opts: &ClosureOptions,
) -> Result<(SpanBasis, ClosureStats)> {
    let d = generators.first().map_or(0, MatrixQ::rows);
    let gens: Vec<Vec<MatrixQ>> = generators.iter().map(|g| vec![g.clone()]).collect();
    close_blocks(&gens, &[d], mode, opts)
}

/// Type of the factor of `g'_n` acting on a block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockClass {
    #[serde(rename = "sl")]
    Sl,
    #[serde(rename = "osp-sym")]
    OspSym,
    #[serde(rename = "osp-symp")]
    OspSymp,
}

/// Expected `dim g_λ` and its type, for `dim λ > 1`.
pub fn predicted_block(shape: &Partition) -> Result<(usize, BlockClass)> {
    let n = shape.size();
    let d = shape.dim_usize();
    if d <= 1 {
        return Err(Error::OutOfRange { what: "dimension (need dim λ > 1)", value: d });
    }
    Ok(match shape.classify() {
        PartitionClass::Hook => ((n - 1) * (n - 1) - 1, BlockClass::Sl),
        PartitionClass::ProperAsym { .. } => (d * d - 1, BlockClass::Sl),
        PartitionClass::ProperSym => match shape.form_sign()? {
            Sign::Plus => (osp_dim(&d.into(), Sign::Plus).to_usize().expect("small"), BlockClass::OspSym),
            Sign::Minus => (osp_dim(&d.into(), Sign::Minus).to_usize().expect("small"), BlockClass::OspSymp),
        },
    })
}

fn all_traceless(ms: &[MatrixQ]) -> bool {
    ms.iter().all(|m| m.trace().is_zero())
}

fn all_in_osp(ms: &[MatrixQ], b: &MatrixQ) -> bool {
    ms.iter().all(|u| u.transpose().mul(b).add(&b.mul(u)).is_zero())
}

/// Dimension of the smallest classical algebra verified to contain `gens`
/// (transposition images on `shape`), if it is tight enough to stop early.
fn verified_ceiling(shape: &Partition, gens: &[MatrixQ]) -> Result<Option<usize>> {
    let d = shape.dim_usize();
    let traceless = all_traceless(gens);
    if shape.is_self_conjugate() {
        let b = bilinear_form(shape)?;
        let sign = shape.form_sign()?;
        if all_in_osp(gens, &b) {
            return Ok(Some(osp_dim(&d.into(), sign).to_usize().expect("small")));
        }
    }
    let n = shape.size();
    let reflection = d == n - 1;
    if shape.is_hook() && !reflection {
        return Ok(None);
    }
    Ok(Some(if traceless { d * d - 1 } else { d * d }))
}

/// `g_λ`: the closure of the transposition images on `λ`, cut down to its
/// traceless part.
pub fn g_lambda_basis(shape: &Partition, mode: FieldMode) -> Result<SpanBasis> {
    g_lambda_basis_with(shape, mode, None).map(|(b, _)| b)
}

pub fn g_lambda_basis_with(
    shape: &Partition,
    mode: FieldMode,
    progress: Option<Progress>,
) -> Result<(SpanBasis, ClosureStats)> {
    let d = shape.dim_usize();
    if d <= 1 {
        return Err(Error::OutOfRange { what: "dimension (need dim λ > 1)", value: d });
    }
    let h = RepHandle::new(shape);
    let gens = h.transposition_images();
    let opts = ClosureOptions { ceiling: verified_ceiling(shape, &gens)?, progress, ..Default::default() };
    let (basis, stats) = lie_closure_with(&gens, mode, &opts)?;
    Ok((traceless_subspace(basis, &[d])?, stats))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockReport {
    pub shape: Partition,
    pub dim: usize,
    pub predicted: usize,
    pub class: BlockClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedCheck {
    pub name: String,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureReport {
    pub schema: u32,
    pub n: usize,
    pub mode: FieldMode,
    pub blocks: Vec<BlockReport>,
    pub total: usize,
    pub predicted_total: usize,
    pub containment_checks: Vec<NamedCheck>,
    pub rounds: usize,
    pub elapsed_ms: u64,
    pub pass: bool,
}

impl ClosureReport {
    pub fn parse(s: &str) -> Result<ClosureReport> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Report for the closure on a single shape.
pub fn g_lambda_report(shape: &Partition, mode: FieldMode, progress: Option<Progress>) -> Result<ClosureReport> {
    let start = Instant::now();
    let (predicted, class) = predicted_block(shape)?;
    let (basis, stats) = g_lambda_basis_with(shape, mode, progress)?;
    let mut checks = Vec::new();
    if shape.is_self_conjugate() {
        checks.push(NamedCheck { name: format!("osp {shape}"), ok: osp_containment_check(shape)? });
    }
    let dim = basis.rank();
    let pass = dim == predicted && checks.iter().all(|c| c.ok);
    Ok(ClosureReport {
        schema: 1,
        n: shape.size(),
        mode,
        blocks: vec![BlockReport { shape: shape.clone(), dim, predicted, class }],
        total: dim,
        predicted_total: predicted,
        containment_checks: checks,
        rounds: stats.rounds,
        elapsed_ms: start.elapsed().as_millis() as u64,
        pass,
    })
}

/// `{α} ∪ E_n/∼ ∪ F_n`, one block per factor of `g'_n`.
pub fn theorem_a_blocks(n: usize) -> Result<Vec<Partition>> {
    if n < 3 {
        return Err(Error::OutOfRange { what: "n (need n ≥ 3)", value: n });
    }
    let mut blocks = vec![Partition::hook(n, 1)?];
    blocks.extend(en_representatives(n));
    blocks.extend(fn_set(n));
    Ok(blocks)
}

/// Centred transposition images `ρ_λ(τ) − (γ/dim)·I` for every block.
fn centred_images(blocks: &[RepHandle]) -> Vec<Vec<MatrixQ>> {
    let per_block: Vec<Vec<MatrixQ>> = blocks
        .iter()
        .map(|h| {
            let c = Q::new(h.shape().gamma(), BigInt::from(h.dim()));
            let c = -c;
            h.transposition_images().into_iter().map(|m| m.add_scalar(&c)).collect()
        })
        .collect();
    let count = per_block.first().map_or(0, Vec::len);
    (0..count).map(|t| per_block.iter().map(|b| b[t].clone()).collect()).collect()
}

/// Exact structural checks on the centred generators of `g'_n`.
fn containment_checks(blocks: &[RepHandle], gens: &[Vec<MatrixQ>]) -> Result<Vec<NamedCheck>> {
    let mut checks = Vec::new();
    for (b, h) in blocks.iter().enumerate() {
        let imgs: Vec<MatrixQ> = gens.iter().map(|g| g[b].clone()).collect();
        checks.push(NamedCheck { name: format!("traceless {}", h.shape()), ok: all_traceless(&imgs) });
        match h.shape().classify() {
            PartitionClass::ProperSym => {
                let bf = bilinear_form(h.shape())?;
                checks.push(NamedCheck { name: format!("osp {}", h.shape()), ok: all_in_osp(&imgs, &bf) });
            }
            PartitionClass::ProperAsym { .. } => {
                let conj = h.shape().conjugate();
                let other = RepHandle::new(&conj);
                let p = duality_intertwiner(h.shape())?;
                let ok = h
                    .transposition_images()
                    .iter()
                    .zip(other.transposition_images())
                    .all(|(u, v)| p.mul(&v.neg()) == u.mul(&p));
                checks.push(NamedCheck { name: format!("dual {} ~ {}", h.shape(), conj), ok });
            }
            PartitionClass::Hook => {}
        }
    }
    Ok(checks)
}

/// Closure of `g'_n` acting on `{α} ∪ E_n/∼ ∪ F_n`, against the closed form.
pub fn g_prime_dim(n: usize, mode: FieldMode) -> Result<ClosureReport> {
    g_prime_dim_with(n, mode, None)
}

pub fn g_prime_dim_with(n: usize, mode: FieldMode, progress: Option<Progress>) -> Result<ClosureReport> {
    let start = Instant::now();
    let shapes = theorem_a_blocks(n)?;
    let handles: Vec<RepHandle> = shapes.par_iter().map(RepHandle::new).collect();
    let dims: Vec<usize> = handles.iter().map(RepHandle::dim).collect();
    let gens = centred_images(&handles);
    let checks = containment_checks(&handles, &gens)?;
    let predicted: Vec<(usize, BlockClass)> = shapes.iter().map(predicted_block).collect::<Result<_>>()?;
    let predicted_total: usize = predicted.iter().map(|p| p.0).sum();
    let verified = checks.iter().all(|c| c.ok);
    let opts = ClosureOptions { ceiling: verified.then_some(predicted_total), progress, ..Default::default() };
    let (basis, stats) = close_blocks(&gens, &dims, mode, &opts)?;
    let basis = traceless_subspace(basis, &dims)?;
    let layout = Layout::new(dims.clone());
    let block_dims = projected_ranks(&basis, &layout, &predicted)?;
    let blocks: Vec<BlockReport> = shapes
        .iter()
        .zip(&predicted)
        .zip(block_dims)
        .map(|((s, &(p, class)), dim)| BlockReport { shape: s.clone(), dim, predicted: p, class })
        .collect();
    let total = basis.rank();
    let pass = verified && total == predicted_total && blocks.iter().all(|b| b.dim == b.predicted);
    Ok(ClosureReport {
        schema: 1,
        n,
        mode,
        blocks,
        total,
        predicted_total,
        containment_checks: checks,
        rounds: stats.rounds,
        elapsed_ms: start.elapsed().as_millis() as u64,
        pass,
    })
}

/// Rank of the projection of `basis` onto each block. Over `Q` a modular
/// rank equal to the verified factor dimension is already exact; otherwise
/// the rank is computed by rational elimination.
fn projected_ranks(basis: &SpanBasis, layout: &Layout, bounds: &[(usize, BlockClass)]) -> Result<Vec<usize>> {
    (0..layout.dims().len())
        .map(|b| {
            let r = layout.block_range(b);
            match &basis.rows {
                SpanRows::Modular(rows) => {
                    let FieldMode::PrimeField(p) = basis.mode else { unreachable!() };
                    let f = Zp::new(p)?;
                    let mut e = ModEchelon::new(f, r.len());
                    for row in rows {
                        e.insert(row[r.clone()].to_vec());
                    }
                    Ok(e.rank())
                }
                SpanRows::Rational(rows) => {
                    let f = Zp::new(MERSENNE_61)?;
                    let mut e = ModEchelon::new(f, r.len());
                    let mut reducible = true;
                    for row in rows {
                        match row[r.clone()].iter().map(|x| f.reduce(x)).collect::<Result<Vec<_>>>() {
                            Ok(v) => {
                                e.insert(v);
                            }
                            Err(_) => reducible = false,
                        }
                    }
                    if reducible && e.rank() == bounds[b].0 {
                        return Ok(e.rank());
                    }
                    let mut q = RatEchelon::new();
                    for row in rows {
                        q.insert(row[r.clone()].to_vec());
                    }
                    Ok(q.rows.len())
                }
            }
        })
        .collect()
}

/// Full verification: joint closure, per-shape `g_λ` dimensions for every
/// `λ ⊢ n` of dimension above 1, and the exact containment checks.
pub fn theorem_a_verify(n: usize, mode: FieldMode) -> Result<ClosureReport> {
    theorem_a_verify_with(n, mode, None)
}

pub fn theorem_a_verify_with(n: usize, mode: FieldMode, progress: Option<Progress>) -> Result<ClosureReport> {
    let start = Instant::now();
    let mut report = g_prime_dim_with(n, mode, progress)?;
    let shapes: Vec<Partition> = enumerate_partitions(n).into_iter().filter(|l| l.dim_usize() > 1).collect();
    let per_shape: Vec<Result<(Partition, usize, usize)>> = shapes
        .par_iter()
        .map(|l| {
            let (pred, _) = predicted_block(l)?;
            let basis = g_lambda_basis(l, mode)?;
            Ok((l.clone(), basis.rank(), pred))
        })
        .collect();
    for r in per_shape {
        let (l, got, want) = r?;
        report.containment_checks.push(NamedCheck { name: format!("dim g_{l} = {want}"), ok: got == want });
    }
    for l in fn_set(n).iter().chain(enumerate_partitions(n).iter().filter(|l| l.is_hook() && l.is_self_conjugate())) {
        report.containment_checks.push(NamedCheck { name: format!("g_{l} in osp"), ok: osp_containment_check(l)? });
    }
    report.pass = report.pass && report.containment_checks.iter().all(|c| c.ok);
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// `ρ(τ)ᵀ B = −B ρ(τ)` for every transposition `τ`.
pub fn osp_containment_check(shape: &Partition) -> Result<bool> {
    if !shape.is_self_conjugate() {
        return Err(Error::NotSelfConjugate(shape.clone()));
    }
    let b = bilinear_form(shape)?;
    let h = RepHandle::new(shape);
    Ok(crate::seminormal::osp_twisted_invariance(&h, &b))
}

/// A flattened single-block element as a square matrix.
pub fn unflatten_square(v: &[Q]) -> Result<MatrixQ> {
    let d = (v.len() as f64).sqrt().round() as usize;
    if d * d != v.len() {
        return Err(Error::DimensionMismatch(format!("{} is not a square", v.len())));
    }
    MatrixQ::from_flat(d, d, v.to_vec())
}
