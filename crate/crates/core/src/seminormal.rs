//! Young's seminormal matrices, the invariant forms, intertwiners and
//! exterior powers.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{frac, nullspace_from_rref, q, MatrixQ, Q};
use crate::modp::{prime_sequence, rational_reconstruct, ModEchelon, Zp};
use crate::partitions::{binomial, Partition};
use crate::perm::{transpositions, Permutation};
use crate::tableaux::{enumerate_syt, index_of, StandardTableau};

/// A representation `ρ_λ` on the standard-tableau basis, with the images of
/// the adjacent transpositions precomputed.
#[derive(Clone, Debug)]
pub struct RepHandle {
    shape: Partition,
    tableaux: Vec<StandardTableau>,
    gens: Vec<MatrixQ>,
}

impl RepHandle {
    pub fn new(shape: &Partition) -> RepHandle {
        let tableaux = enumerate_syt(shape);
        let n = shape.size();
        let gens = (1..n).map(|r| generator_matrix(&tableaux, r)).collect();
        RepHandle { shape: shape.clone(), tableaux, gens }
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn n(&self) -> usize {
        self.shape.size()
    }

    pub fn dim(&self) -> usize {
        self.tableaux.len()
    }

    pub fn tableaux(&self) -> &[StandardTableau] {
        &self.tableaux
    }

    pub fn index(&self, t: &StandardTableau) -> Option<usize> {
        index_of(&self.tableaux, t)
    }

    /// `ρ(s_r)`, `1 ≤ r < n`.
    pub fn gen(&self, r: usize) -> Result<&MatrixQ> {
        self.gens.get(r.wrapping_sub(1)).ok_or(Error::OutOfRange { what: "generator", value: r })
    }

    pub fn gens(&self) -> &[MatrixQ] {
        &self.gens
    }

    /// `ρ(σ)` as a product along a reduced word.
    pub fn perm(&self, sigma: &Permutation) -> Result<MatrixQ> {
        if sigma.degree() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "permutation of {} letters on a representation of S_{}",
                sigma.degree(),
                self.n()
            )));
        }
        let mut acc = MatrixQ::identity(self.dim());
        for a in sigma.simple_word() {
            acc = acc.mul(&self.gens[a - 1]);
        }
        Ok(acc)
    }

    /// Images of all transpositions in the order of [`transpositions`].
    pub fn transposition_images(&self) -> Vec<MatrixQ> {
        let n = self.n();
        let mut table: Vec<Vec<Option<MatrixQ>>> = vec![vec![None; n + 1]; n + 1];
        for i in 1..n {
            table[i][i + 1] = Some(self.gens[i - 1].clone());
            for j in i + 1..n {
                // (i j+1) = s_j (i j) s_j
                let s = &self.gens[j - 1];
                let prev = table[i][j].as_ref().expect("built");
                table[i][j + 1] = Some(s.mul(prev).mul(s));
            }
        }
        transpositions(n).into_iter().map(|(i, j)| table[i][j].take().expect("built")).collect()
    }
}

/// `ρ_λ(s_r)` on the canonical basis.
pub fn rep_gen(shape: &Partition, r: usize) -> Result<MatrixQ> {
    if r == 0 || r >= shape.size() {
        return Err(Error::OutOfRange { what: "generator", value: r });
    }
    Ok(generator_matrix(&enumerate_syt(shape), r))
}

fn generator_matrix(tableaux: &[StandardTableau], r: usize) -> MatrixQ {
    let dim = tableaux.len();
    let mut m = MatrixQ::zeros(dim, dim);
    for (t, tab) in tableaux.iter().enumerate() {
        if tab.same_column(r) {
            m[(t, t)] = q(1);
        } else if tab.same_line(r) {
            m[(t, t)] = q(-1);
        } else if tab.precedes_swap(r) {
            let other = tab.swap(r).expect("swap defined");
            let u = index_of(tableaux, &other).expect("swap is standard");
            let d = tab.axial_distance(r + 1, r).expect("in range");
            m[(t, t)] = frac(-1, d);
            m[(u, t)] = frac(d - 1, d);
            m[(t, u)] = frac(d + 1, d);
            m[(u, u)] = frac(1, d);
        }
    }
    m
}

pub fn rep_perm(h: &RepHandle, sigma: &Permutation) -> Result<MatrixQ> {
    h.perm(sigma)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoxeterReport {
    pub shape: Partition,
    pub relations_checked: usize,
    pub first_violation: Option<String>,
}

impl CoxeterReport {
    pub fn passed(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// Checks `s_r² = 1`, the braid relations and far commutation exactly.
pub fn verify_coxeter(h: &RepHandle) -> CoxeterReport {
    let g = h.gens();
    let mut checked = 0;
    let mut violation = None;
    'outer: for i in 0..g.len() {
        checked += 1;
        if !g[i].mul(&g[i]).is_identity() {
            violation = Some(format!("s_{}^2 != 1", i + 1));
            break;
        }
        for j in i + 1..g.len() {
            checked += 1;
            let ok = if j == i + 1 {
                g[i].mul(&g[j]).mul(&g[i]) == g[j].mul(&g[i]).mul(&g[j])
            } else {
                g[i].mul(&g[j]) == g[j].mul(&g[i])
            };
            if !ok {
                let kind = if j == i + 1 { "braid" } else { "commutation" };
                violation = Some(format!("{kind} relation for s_{}, s_{}", i + 1, j + 1));
                break 'outer;
            }
        }
    }
    CoxeterReport { shape: h.shape().clone(), relations_checked: checked, first_violation: violation }
}

/// `Σ_{i<j} ρ((i j))` and its scalar value; a non-scalar sum is an invariant breach.
pub fn sum_transpositions(h: &RepHandle) -> Result<(MatrixQ, Q)> {
    let mut sum = MatrixQ::zeros(h.dim(), h.dim());
    for m in h.transposition_images() {
        sum = sum.add(&m);
    }
    let c = sum
        .as_scalar()
        .ok_or_else(|| Error::InvariantBreach(format!("sum of transpositions on {} is not scalar", h.shape())))?;
    Ok((sum, c))
}

/// `n(n−1)γ/(2 dim)`, the predicted scalar of the transposition sum.
pub fn predicted_transposition_scalar(shape: &Partition) -> Q {
    let n = shape.size() as i64;
    Q::new(
        BigInt::from(n * (n - 1)) * shape.gamma(),
        BigInt::from(2) * BigInt::from(shape.dimension()),
    )
}

/// Diagonal invariant scalar product `G = diag(1/ζ(T))`: `ρ(s)ᵀ G ρ(s) = G`.
pub fn gram(shape: &Partition) -> Result<MatrixQ> {
    let list = enumerate_syt(shape);
    let mut g = MatrixQ::zeros(list.len(), list.len());
    for (i, t) in list.iter().enumerate() {
        g[(i, i)] = t.weight_zeta()?.recip();
    }
    Ok(g)
}

/// Canonical form on a self-conjugate shape: `B[T', T] = w(T)`.
pub fn bilinear_form(shape: &Partition) -> Result<MatrixQ> {
    if !shape.is_self_conjugate() {
        return Err(Error::NotSelfConjugate(shape.clone()));
    }
    let list = enumerate_syt(shape);
    let mut b = MatrixQ::zeros(list.len(), list.len());
    for (i, t) in list.iter().enumerate() {
        let j = index_of(&list, &t.conjugate()).expect("conjugate tableau of the same shape");
        b[(j, i)] = q(t.weight_w().to_i64());
    }
    Ok(b)
}

/// `M: V_λ → V_{λ'}`, `M(T) = w(T) ζ(T') T'`, with `M ρ_λ(s) = −ρ_{λ'}(s) M`.
pub fn m_map(shape: &Partition) -> Result<MatrixQ> {
    let list = enumerate_syt(shape);
    let conj = enumerate_syt(&shape.conjugate());
    let mut m = MatrixQ::zeros(conj.len(), list.len());
    for (i, t) in list.iter().enumerate() {
        let tc = t.conjugate();
        let j = index_of(&conj, &tc).expect("conjugate tableau");
        m[(j, i)] = q(t.weight_w().to_i64()) * tc.weight_zeta()?;
    }
    Ok(m)
}

/// The duality `P_λ: V_{λ'} → V_λ` with `P ρ_{λ'}(s) = −ρ_λ(s) P`.
pub fn duality_intertwiner(shape: &Partition) -> Result<MatrixQ> {
    m_map(&shape.conjugate())
}

/// `x^# = G⁻¹ xᵀ G`, the adjoint for the invariant scalar product.
pub fn adjoint_wrt_gram(shape: &Partition, x: &MatrixQ) -> Result<MatrixQ> {
    let g = gram(shape)?;
    if x.rows() != g.rows() || !x.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix on {shape} of dimension {}",
            x.rows(),
            x.cols(),
            g.rows()
        )));
    }
    Ok(adjoint_with_diag(&g, x))
}

pub(crate) fn adjoint_with_diag(g: &MatrixQ, x: &MatrixQ) -> MatrixQ {
    let n = x.rows();
    let mut out = MatrixQ::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let v = &x[(j, i)];
            if !v.is_zero() {
                out[(i, j)] = v * &g[(j, j)] / &g[(i, i)];
            }
        }
    }
    out
}

/// Finds an invertible `P` with `P·A_i = B_i·P` for all `i`, normalised so
/// that its first nonzero entry in row-major order is 1.
pub fn solve_intertwiner(gens_a: &[MatrixQ], gens_b: &[MatrixQ]) -> Option<MatrixQ> {
    if gens_a.len() != gens_b.len() {
        return None;
    }
    let a = gens_a.first().map_or(0, MatrixQ::rows);
    let b = gens_b.first().map_or(0, MatrixQ::rows);
    if a != b
        || gens_a.iter().any(|m| m.rows() != a || m.cols() != a)
        || gens_b.iter().any(|m| m.rows() != b || m.cols() != b)
    {
        return None;
    }
    if a == 0 {
        return Some(MatrixQ::zeros(0, 0));
    }
    let basis = intertwiner_space(gens_a, gens_b)?;
    let candidate = invertible_combination(&basis, a)?;
    Some(normalize_first_entry(candidate))
}

/// Basis of `{P | P A_i = B_i P}`, or `None` when it is zero.
fn intertwiner_space(gens_a: &[MatrixQ], gens_b: &[MatrixQ]) -> Option<Vec<MatrixQ>> {
    let n = gens_a[0].rows();
    for p in prime_sequence().take(3) {
        let f = Zp::new(p).expect("prime");
        let reduced: Option<Vec<(Vec<u64>, Vec<u64>)>> = gens_a
            .iter()
            .zip(gens_b)
            .map(|(x, y)| Some((f.reduce_matrix(x).ok()?, f.reduce_matrix(y).ok()?)))
            .collect();
        let Some(reduced) = reduced else { continue };
        let rows = sylvester_rows_mod(&f, &reduced, n);
        let null = crate::modp::nullspace_mod_p(f, rows, n * n);
        if null.is_empty() {
            // Nullity mod p bounds the rational nullity from above.
            return None;
        }
        let lifted: Option<Vec<MatrixQ>> = null
            .iter()
            .map(|v| {
                let data = v
                    .iter()
                    .map(|&x| rational_reconstruct(&BigInt::from(x), &BigInt::from(p)))
                    .collect::<Option<Vec<Q>>>()?;
                MatrixQ::from_flat(n, n, data).ok()
            })
            .collect();
        if let Some(lifted) = lifted {
            let exact = lifted
                .iter()
                .all(|m| gens_a.iter().zip(gens_b).all(|(x, y)| m.mul(x) == y.mul(m)));
            if exact {
                return Some(lifted);
            }
        }
    }
    let basis = rational_intertwiner_space(gens_a, gens_b);
    (!basis.is_empty()).then_some(basis)
}

fn sylvester_rows_mod(f: &Zp, gens: &[(Vec<u64>, Vec<u64>)], n: usize) -> Vec<Vec<u64>> {
    let mut rows = Vec::with_capacity(gens.len() * n * n);
    for (a, b) in gens {
        for x in 0..n {
            for j in 0..n {
                let mut row = vec![0u64; n * n];
                for y in 0..n {
                    row[x * n + y] = f.add(row[x * n + y], a[y * n + j]);
                }
                for z in 0..n {
                    row[z * n + j] = f.sub(row[z * n + j], b[x * n + z]);
                }
                rows.push(row);
            }
        }
    }
    rows
}

fn rational_intertwiner_space(gens_a: &[MatrixQ], gens_b: &[MatrixQ]) -> Vec<MatrixQ> {
    let n = gens_a[0].rows();
    let mut rows = Vec::new();
    for (a, b) in gens_a.iter().zip(gens_b) {
        for x in 0..n {
            for j in 0..n {
                let mut row = vec![Q::zero(); n * n];
                for y in 0..n {
                    row[x * n + y] += &a[(y, j)];
                }
                for z in 0..n {
                    row[z * n + j] -= &b[(x, z)];
                }
                rows.push(row);
            }
        }
    }
    let sys = MatrixQ::from_rows(rows).expect("rectangular");
    let (r, piv) = sys.rref();
    nullspace_from_rref(&r, &piv)
        .into_iter()
        .map(|v| MatrixQ::from_flat(n, n, v).expect("n*n"))
        .collect()
}

fn invertible_combination(basis: &[MatrixQ], n: usize) -> Option<MatrixQ> {
    let field = Zp::new(crate::modp::MERSENNE_61).expect("prime");
    let full_rank = |m: &MatrixQ| -> bool {
        if let Ok(v) = field.reduce_matrix(m) {
            let mut e = ModEchelon::new(field, n);
            for i in 0..n {
                e.insert(v[i * n..(i + 1) * n].to_vec());
            }
            if e.rank() == n {
                return true;
            }
        }
        !m.determinant().is_zero()
    };
    for m in basis {
        if full_rank(m) {
            return Some(m.clone());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..32 {
        let mut acc = MatrixQ::zeros(n, n);
        for m in basis {
            let c: i64 = rng.gen_range(-5..=5);
            acc = acc.add(&m.scale(&q(c)));
        }
        if full_rank(&acc) {
            return Some(acc);
        }
    }
    None
}

fn normalize_first_entry(m: MatrixQ) -> MatrixQ {
    match m.flat().iter().find(|x| !x.is_zero()) {
        Some(first) if !first.is_one() => {
            let inv = first.recip();
            m.scale(&inv)
        }
        _ => m,
    }
}

/// `r`-subsets of `0..n` in lexicographic order.
pub fn wedge_basis(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < r - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, r, &mut Vec::new(), &mut out);
    out
}

fn wedge_index(basis: &[Vec<usize>], set: &[usize]) -> usize {
    basis.binary_search_by(|b| b.as_slice().cmp(set)).expect("subset in basis")
}

fn check_wedge(x: &MatrixQ, r: usize) -> Result<()> {
    if !x.is_square() {
        return Err(Error::DimensionMismatch("exterior power of a non-square matrix".into()));
    }
    if r == 0 || r > x.rows() {
        return Err(Error::OutOfRange { what: "exterior degree", value: r });
    }
    Ok(())
}

/// `Λ^r x` on the lexicographic wedge basis: `[I, J] ↦ det x[I, J]`.
pub fn exterior_power(x: &MatrixQ, r: usize) -> Result<MatrixQ> {
    check_wedge(x, r)?;
    let basis = wedge_basis(x.rows(), r);
    let mut out = MatrixQ::zeros(basis.len(), basis.len());
    for (a, rows) in basis.iter().enumerate() {
        for (b, cols) in basis.iter().enumerate() {
            let mut sub = MatrixQ::zeros(r, r);
            let mut any = false;
            for (i, &ri) in rows.iter().enumerate() {
                for (j, &cj) in cols.iter().enumerate() {
                    sub[(i, j)] = x[(ri, cj)].clone();
                    any |= !sub[(i, j)].is_zero();
                }
            }
            if any {
                out[(a, b)] = sub.determinant();
            }
        }
    }
    Ok(out)
}

/// `Δ_r(x) = Σ 1 ∧ ⋯ ∧ x ∧ ⋯ ∧ 1`, the derivation induced by `x` on `Λ^r`.
pub fn delta_r(x: &MatrixQ, r: usize) -> Result<MatrixQ> {
    check_wedge(x, r)?;
    let n = x.rows();
    let basis = wedge_basis(n, r);
    let mut out = MatrixQ::zeros(basis.len(), basis.len());
    for (b, set) in basis.iter().enumerate() {
        for pos in 0..r {
            let j = set[pos];
            for i in 0..n {
                let c = &x[(i, j)];
                if c.is_zero() || (i != j && set.contains(&i)) {
                    continue;
                }
                let mut word = set.clone();
                word[pos] = i;
                // Sort by adjacent swaps, tracking the sign.
                let mut sign = 1i64;
                let mut k = pos;
                while k > 0 && word[k - 1] > word[k] {
                    word.swap(k - 1, k);
                    sign = -sign;
                    k -= 1;
                }
                while k + 1 < r && word[k] > word[k + 1] {
                    word.swap(k, k + 1);
                    sign = -sign;
                    k += 1;
                }
                let a = wedge_index(&basis, &word);
                out[(a, b)] += c * q(sign);
            }
        }
    }
    Ok(out)
}

/// `Λ^r ρ_α(s_i)` for the reflection representation `α = [n−1, 1]`.
pub fn exterior_power_rep(h: &RepHandle, r: usize) -> Result<Vec<MatrixQ>> {
    h.gens().iter().map(|g| exterior_power(g, r)).collect()
}

/// Permutation matrix of `σ` on `k^n`: `e_i ↦ e_{σ(i)}`.
pub fn permutation_matrix(sigma: &Permutation) -> MatrixQ {
    let n = sigma.degree();
    let mut m = MatrixQ::zeros(n, n);
    for i in 1..=n {
        m[(sigma.apply(i) - 1, i - 1)] = q(1);
    }
    m
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HookIsoReport {
    pub n: usize,
    pub r: usize,
    /// `Δ_r(β(τ)) = Λ^r β(τ) + (r−1)` on the permutation representation.
    pub permutation_identity: bool,
    /// An intertwiner `ρ_{α_r}(τ) + (r−1) → Δ_r(ρ_α(τ))` exists and works on every transposition.
    pub intertwiner_found: bool,
    pub failure: Option<String>,
    #[serde(skip)]
    pub intertwiner: Option<MatrixQ>,
}

impl HookIsoReport {
    pub fn passed(&self) -> bool {
        self.permutation_identity && self.intertwiner_found && self.failure.is_none()
    }
}

/// Identifies `α_r = [n−r, 1^r]` with `Λ^r α` at the Lie-algebra level.
pub fn hook_iso_check(n: usize, r: usize) -> Result<HookIsoReport> {
    if n < 3 {
        return Err(Error::OutOfRange { what: "n (need n ≥ 3)", value: n });
    }
    if r == 0 || r >= n {
        return Err(Error::OutOfRange { what: "hook leg r", value: r });
    }
    let shift = q(r as i64 - 1);
    let mut failure = None;

    let mut permutation_identity = true;
    for &(i, j) in &transpositions(n) {
        let beta = permutation_matrix(&Permutation::transposition(n, i, j)?);
        let lhs = delta_r(&beta, r)?;
        let rhs = exterior_power(&beta, r)?.add_scalar(&shift);
        if lhs != rhs {
            permutation_identity = false;
            failure.get_or_insert_with(|| format!("permutation identity fails on ({i} {j})"));
        }
    }

    let alpha = RepHandle::new(&Partition::hook(n, 1)?);
    let alpha_r = RepHandle::new(&Partition::hook(n, r)?);
    let src: Vec<MatrixQ> = alpha_r.gens().iter().map(|g| g.add_scalar(&shift)).collect();
    let dst: Vec<MatrixQ> = alpha.gens().iter().map(|g| delta_r(g, r)).collect::<Result<_>>()?;
    let p = solve_intertwiner(&src, &dst);
    let mut intertwiner_found = p.is_some();
    match &p {
        None => {
            failure.get_or_insert_with(|| "no intertwiner on the adjacent transpositions".into());
        }
        Some(p) => {
            let pairs = alpha_r.transposition_images().into_iter().zip(alpha.transposition_images());
            for ((a, b), (i, j)) in pairs.zip(transpositions(n)) {
                if p.mul(&a.add_scalar(&shift)) != delta_r(&b, r)?.mul(p) {
                    intertwiner_found = false;
                    failure.get_or_insert_with(|| format!("intertwiner fails on ({i} {j})"));
                }
            }
        }
    }
    Ok(HookIsoReport { n, r, permutation_identity, intertwiner_found, failure, intertwiner: p })
}

/// `Λ^r` dimension check helper: `C(N, r)`.
pub fn wedge_dim(n: usize, r: usize) -> usize {
    use num_traits::ToPrimitive;
    binomial(n, r).to_usize().expect("small")
}

/// `ρ(s)ᵀ B = −B ρ(s)` for every transposition image.
pub fn osp_twisted_invariance(h: &RepHandle, b: &MatrixQ) -> bool {
    h.transposition_images()
        .iter()
        .all(|u| u.transpose().mul(b) == b.mul(u).neg())
}

/// Two-sided check `ρ(s)ᵀ G ρ(s) = G` for the adjacent generators.
pub fn gram_invariance(h: &RepHandle, g: &MatrixQ) -> bool {
    h.gens().iter().all(|s| s.transpose().mul(g).mul(s) == *g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{enumerate_partitions, Sign};

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn generators_of_21() {
        let s1 = rep_gen(&p("[2,1]"), 1).unwrap();
        assert_eq!(s1, MatrixQ::from_i64(&[&[1, 0], &[0, -1]]));
        let s2 = rep_gen(&p("[2,1]"), 2).unwrap();
        let want = MatrixQ::from_i64(&[&[-1, 3], &[1, 1]]).scale(&frac(1, 2));
        assert_eq!(s2, want);
        assert_eq!(rep_gen(&p("[4]"), 2).unwrap(), MatrixQ::identity(1));
        assert!(rep_gen(&p("[2,1]"), 3).is_err());
    }

    #[test]
    fn coxeter_small() {
        for s in ["[2,1]", "[3,2,1]", "[5]", "[2,2]", "[3,1,1]"] {
            let r = verify_coxeter(&RepHandle::new(&p(s)));
            assert!(r.passed(), "{s}: {:?}", r.first_violation);
        }
    }

    #[test]
    fn rep_perm_laws() {
        let h = RepHandle::new(&p("[2,1]"));
        let t13 = Permutation::transposition(3, 1, 3).unwrap();
        let want = h.gens()[0].mul(&h.gens()[1]).mul(&h.gens()[0]);
        assert_eq!(h.perm(&t13).unwrap(), want);
        assert!(h.perm(&Permutation::identity(3)).unwrap().is_identity());
        let imgs = h.transposition_images();
        assert_eq!(imgs[2], want);
    }

    #[test]
    fn trace_is_gamma() {
        for n in 2..=6 {
            for l in enumerate_partitions(n) {
                let h = RepHandle::new(&l);
                for m in h.transposition_images() {
                    assert_eq!(m.trace(), Q::from_integer(l.gamma()), "{l}");
                }
            }
        }
    }

    #[test]
    fn transposition_sum() {
        let (_, c) = sum_transpositions(&RepHandle::new(&p("[5]"))).unwrap();
        assert_eq!(c, q(10));
        let (_, c) = sum_transpositions(&RepHandle::new(&p("[2,2]"))).unwrap();
        assert_eq!(c, q(0));
        let (_, c) = sum_transpositions(&RepHandle::new(&p("[4,1]"))).unwrap();
        assert_eq!(c, q(5));
        assert_eq!(predicted_transposition_scalar(&p("[4,1]")), q(5));
    }

    #[test]
    fn forms() {
        for s in ["[2,1]", "[2,2]", "[3,2,1]", "[3,1,1]"] {
            let l = p(s);
            let h = RepHandle::new(&l);
            let g = gram(&l).unwrap();
            assert!(gram_invariance(&h, &g), "{s}");
            let b = bilinear_form(&l).unwrap();
            assert!(b.inverse().is_some());
            let sign = q(l.form_sign().unwrap().to_i64());
            assert_eq!(b.transpose(), b.scale(&sign), "{s}");
            assert!(osp_twisted_invariance(&h, &b), "{s}");
        }
        assert_eq!(p("[2,2]").form_sign().unwrap(), Sign::Minus);
        assert_eq!(bilinear_form(&p("[3,2,1]")).unwrap().rows(), 16);
        assert!(bilinear_form(&p("[3,2]")).is_err());
    }

    #[test]
    fn m_map_intertwines() {
        for n in 2..=5 {
            for l in enumerate_partitions(n) {
                let m = m_map(&l).unwrap();
                let a = RepHandle::new(&l);
                let b = RepHandle::new(&l.conjugate());
                assert!(m.inverse().is_some());
                for (x, y) in a.gens().iter().zip(b.gens()) {
                    assert_eq!(m.mul(x), y.mul(&m).neg(), "{l}");
                }
                let back = m_map(&l.conjugate()).unwrap().mul(&m);
                assert!(back.as_scalar().is_some(), "{l}");
            }
        }
        assert_eq!(m_map(&p("[3]")).unwrap(), MatrixQ::identity(1));
    }

    #[test]
    fn intertwiner_solver() {
        let h = RepHandle::new(&p("[3,2]"));
        assert!(solve_intertwiner(h.gens(), h.gens()).unwrap().is_identity());
        let c = RepHandle::new(&p("[2,2,1]"));
        let twisted: Vec<MatrixQ> = h.gens().iter().map(MatrixQ::neg).collect();
        let pm = solve_intertwiner(c.gens(), &twisted).unwrap();
        for (x, y) in c.gens().iter().zip(&twisted) {
            assert_eq!(pm.mul(x), y.mul(&pm));
        }
        let triv = RepHandle::new(&p("[4]"));
        let sign = RepHandle::new(&p("[1,1,1,1]"));
        assert!(solve_intertwiner(triv.gens(), sign.gens()).is_none());
        let rat = rational_intertwiner_space(c.gens(), &twisted);
        assert_eq!(rat.len(), 1);
    }

    #[test]
    fn adjoint() {
        let l = p("[3,2]");
        let h = RepHandle::new(&l);
        for s in h.gens() {
            assert_eq!(&adjoint_wrt_gram(&l, s).unwrap(), s);
        }
        let x = h.gens()[0].mul(&h.gens()[1]).add_scalar(&q(2));
        let y = h.gens()[2].add(&h.gens()[3]);
        let xs = adjoint_wrt_gram(&l, &x).unwrap();
        assert_eq!(adjoint_wrt_gram(&l, &xs).unwrap(), x);
        let lhs = adjoint_wrt_gram(&l, &x.mul(&y)).unwrap();
        assert_eq!(lhs, adjoint_wrt_gram(&l, &y).unwrap().mul(&xs));
        assert!(adjoint_wrt_gram(&l, &MatrixQ::identity(5)).unwrap().is_identity());
    }

    #[test]
    fn exterior_algebra() {
        let x = MatrixQ::from_i64(&[&[1, 2, 0, 1], &[0, 3, 1, 0], &[2, 0, 1, 1], &[1, 1, 0, 2]]);
        assert_eq!(exterior_power(&x, 1).unwrap(), x);
        assert_eq!(delta_r(&x, 1).unwrap(), x);
        assert_eq!(exterior_power(&x, 4).unwrap()[(0, 0)], x.determinant());
        let y = MatrixQ::from_i64(&[&[0, 1, 1, 0], &[1, 0, 2, 1], &[0, 1, 0, 3], &[2, 0, 0, 1]]);
        for r in 1..=4 {
            let lx = exterior_power(&x, r).unwrap();
            let ly = exterior_power(&y, r).unwrap();
            assert_eq!(exterior_power(&x.mul(&y), r).unwrap(), lx.mul(&ly));
            let d = delta_r(&x, r).unwrap();
            assert_eq!(d.trace(), x.trace() * Q::from_integer(binomial(3, r - 1).into()));
            let dc = delta_r(&x.commutator(&y), r).unwrap();
            assert_eq!(dc, d.commutator(&delta_r(&y, r).unwrap()));
        }
        assert_eq!(wedge_dim(4, 2), 6);
        assert_eq!(RepHandle::new(&p("[3,1,1]")).dim(), 6);
        assert!(exterior_power(&x, 5).is_err());
    }

    #[test]
    fn hook_isomorphisms_small() {
        for (n, r) in [(4, 2), (4, 1), (5, 3), (3, 2)] {
            let rep = hook_iso_check(n, r).unwrap();
            assert!(rep.passed(), "n={n} r={r}: {:?}", rep.failure);
        }
        assert!(hook_iso_check(4, 4).is_err());
    }
}
