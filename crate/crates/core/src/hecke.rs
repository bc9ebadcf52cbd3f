//! Braid-group images `σ_i ↦ ρ(s_i)·exp(h ρ(s_i))` with `q = e^h`, the
//! algebraic hulls they generate, and membership in the group `G_n(q)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie_closure::NamedCheck;
use crate::matrix::{q, MatrixQ, Q};
use crate::partitions::{en_representatives, enumerate_partitions, Partition, Sign};
use crate::perm::{random_even_word, Permutation};
use crate::seminormal::{
    adjoint_with_diag, bilinear_form, delta_r, duality_intertwiner, gram, hook_iso_check, RepHandle,
};
use crate::series::{lmul_const, rmul_const, SeriesMatrix, TruncSeries};

/// `R_λ(σ_i) = ρ_λ(s_i)·exp(h ρ_λ(s_i))`.
pub fn braid_image(shape: &Partition, i: usize, order: usize) -> Result<SeriesMatrix> {
    let s = RepHandle::new(shape).gen(i)?.clone();
    Ok(braid_from_generator(&s, order))
}

fn braid_from_generator(s: &MatrixQ, order: usize) -> SeriesMatrix {
    SeriesMatrix::exp_matrix(s, order).map_coeffs(|m| s.mul(m))
}

/// `R(σ_i)⁻¹ = exp(−h s)·s`.
fn braid_inverse_from_generator(s: &MatrixQ, order: usize) -> SeriesMatrix {
    SeriesMatrix::exp_matrix(&s.neg(), order).map_coeffs(|m| m.mul(s))
}

/// `(X − q)(X + q⁻¹) = 0` modulo `h^K` for `X = R_λ(σ_i)`.
pub fn quadratic_check(shape: &Partition, i: usize, order: usize) -> Result<bool> {
    let x = braid_image(shape, i, order)?;
    let d = x.dim();
    let qq = TruncSeries::q(order);
    let qi = qq.invert()?;
    let id = SeriesMatrix::identity(d, order);
    let a = x.sub(&id.scale_series(&qq));
    let b = x.add(&id.scale_series(&qi));
    Ok(a.mul(&b).is_zero())
}

/// `det R_λ(σ_i) = η(λ)·e^{γ(λ) h}` for every generator.
pub fn det_check(shape: &Partition, order: usize) -> Result<bool> {
    let want = expected_det(shape, order)?;
    let h = RepHandle::new(shape);
    for s in h.gens() {
        if braid_from_generator(s, order).det()? != want {
            return Ok(false);
        }
    }
    Ok(true)
}

fn expected_det(shape: &Partition, order: usize) -> Result<TruncSeries> {
    let gamma = Q::from_integer(shape.gamma());
    let eta = q(shape.eta()?.to_i64());
    Ok(TruncSeries::exp_scalar(&gamma, order).scale(&eta))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HullGroup {
    GL,
    SL,
    OSP,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HullEnvelope {
    GL,
    SL,
    SLtilde,
    OSPtilde,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormType {
    None,
    Orthogonal,
    Symplectic,
}

/// Hull of the image of the pure braid group (`g`) and of the full braid
/// group (`gtilde`) on a proper irreducible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HullClass {
    pub shape: Partition,
    #[serde(with = "decimal")]
    pub dim: BigInt,
    #[serde(with = "decimal")]
    pub gamma: BigInt,
    pub eta: i8,
    pub form: FormType,
    #[serde(rename = "G")]
    pub g: HullGroup,
    #[serde(rename = "Gtilde")]
    pub gtilde: HullEnvelope,
}

/// Big integers as decimal strings.
mod decimal {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        if s.len() > 4096 {
            return Err(D::Error::custom("integer too long"));
        }
        s.parse().map_err(D::Error::custom)
    }
}

pub fn hull_classify(shape: &Partition) -> Result<HullClass> {
    if shape.is_hook() {
        return Err(Error::IsHook(shape.clone()));
    }
    let gamma = shape.gamma();
    let eta = shape.eta()?;
    let (g, gtilde, form) = if shape.is_self_conjugate() {
        let form = match shape.form_sign()? {
            Sign::Plus => FormType::Orthogonal,
            Sign::Minus => FormType::Symplectic,
        };
        (HullGroup::OSP, HullEnvelope::OSPtilde, form)
    } else if !gamma.is_zero() {
        (HullGroup::GL, HullEnvelope::GL, FormType::None)
    } else if eta == Sign::Plus {
        (HullGroup::SL, HullEnvelope::SL, FormType::None)
    } else {
        (HullGroup::SL, HullEnvelope::SLtilde, FormType::None)
    };
    Ok(HullClass {
        shape: shape.clone(),
        dim: BigInt::from(shape.dimension()),
        gamma,
        eta: eta.to_i64() as i8,
        form,
        g,
        gtilde,
    })
}

/// One row per proper `λ ⊢ n`.
pub fn hull_table(n: usize) -> Result<Vec<HullClass>> {
    let mut rows: Vec<HullClass> = enumerate_partitions(n)
        .iter()
        .filter(|l| !l.is_hook())
        .map(hull_classify)
        .collect::<Result<_>>()?;
    rows.sort_by(|a, b| b.shape.lex_cmp(&a.shape));
    Ok(rows)
}

/// Image of a signed word in the `σ_i` (negative letters are inverses).
fn word_image(h: &RepHandle, word: &[i64], order: usize) -> Result<SeriesMatrix> {
    let mut x = SeriesMatrix::identity(h.dim(), order);
    for &a in word {
        let s = h.gen(a.unsigned_abs() as usize)?;
        let f = if a > 0 { braid_from_generator(s, order) } else { braid_inverse_from_generator(s, order) };
        x = x.mul(&f);
    }
    Ok(x)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub shape: Partition,
    pub word: Vec<i64>,
    /// `det`: determinant 1; `osp`: `XᵀBX = B`; `osp-odd`: `XᵀBX = −B`.
    pub kind: String,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table1Report {
    pub n: usize,
    pub order: usize,
    pub seed: u64,
    pub certificates: Vec<Certificate>,
    pub pass: bool,
}

/// Random even words of length `≤ 8`: determinant 1 on shapes with `γ = 0`,
/// `XᵀBX = B` on self-conjugate shapes; plus `XᵀBX = −B` for each single letter.
pub fn table1_certificates(n: usize, order: usize, trials: usize, seed: u64) -> Result<Table1Report> {
    if n < 3 {
        return Err(Error::OutOfRange { what: "n (need n ≥ 3)", value: n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words: Vec<Vec<i64>> = (0..trials).map(|_| random_even_word(n, 8, &mut rng)).collect();
    let shapes: Vec<Partition> = enumerate_partitions(n)
        .into_iter()
        .filter(|l| l.gamma().is_zero() || l.is_self_conjugate())
        .collect();
    let per_shape: Vec<Result<Vec<Certificate>>> = shapes
        .par_iter()
        .map(|l| {
            let h = RepHandle::new(l);
            let b = if l.is_self_conjugate() { Some(bilinear_form(l)?) } else { None };
            let mut out = Vec::new();
            let cert = |word: &[i64], kind: &str, ok: bool| Certificate {
                shape: l.clone(),
                word: word.to_vec(),
                kind: kind.into(),
                ok,
            };
            for w in &words {
                let x = word_image(&h, w, order)?;
                if l.gamma().is_zero() {
                    out.push(cert(w, "det", x.det()? == TruncSeries::one(order)));
                }
                if let Some(b) = &b {
                    out.push(cert(w, "osp", preserves_form(&x, b, false)));
                }
            }
            if let Some(b) = &b {
                for i in 1..n as i64 {
                    let x = word_image(&h, &[i], order)?;
                    out.push(cert(&[i], "osp-odd", preserves_form(&x, b, true)));
                }
            }
            Ok(out)
        })
        .collect();
    let mut certificates = Vec::new();
    for c in per_shape {
        certificates.extend(c?);
    }
    let pass = certificates.iter().all(|c| c.ok);
    Ok(Table1Report { n, order, seed, certificates, pass })
}

/// `XᵀBX = ±B`.
fn preserves_form(x: &SeriesMatrix, b: &MatrixQ, negated: bool) -> bool {
    let lhs = lmul_const(b, x);
    let lhs = x.transpose().mul(&lhs);
    let want = if negated { b.neg() } else { b.clone() };
    lhs == SeriesMatrix::constant(&want, x.order())
}

/// A family `(x_λ)` indexed by every `λ ⊢ n`.
pub type Tuple = BTreeMap<Partition, SeriesMatrix>;

pub fn identity_tuple(n: usize, order: usize) -> Tuple {
    enumerate_partitions(n)
        .into_iter()
        .map(|l| {
            let d = l.dim_usize();
            (l, SeriesMatrix::identity(d, order))
        })
        .collect()
}

/// `(ρ_λ(σ))_λ`, constant in `h`.
pub fn permutation_tuple(sigma: &Permutation, order: usize) -> Result<Tuple> {
    enumerate_partitions(sigma.degree())
        .into_par_iter()
        .map(|l| {
            let m = RepHandle::new(&l).perm(sigma)?;
            Ok((l, SeriesMatrix::constant(&m, order)))
        })
        .collect()
}

/// `(R_λ(σ_i))_λ`.
pub fn braid_tuple(n: usize, i: usize, order: usize) -> Result<Tuple> {
    enumerate_partitions(n)
        .into_par_iter()
        .map(|l| Ok((l.clone(), braid_image(&l, i, order)?)))
        .collect()
}

/// Blockwise product.
pub fn tuple_product(x: &Tuple, y: &Tuple) -> Result<Tuple> {
    x.iter()
        .map(|(l, a)| {
            let b = y.get(l).ok_or_else(|| Error::MissingBlock(l.clone()))?;
            Ok((l.clone(), a.mul(b)))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GnqReport {
    pub n: usize,
    /// The four defining conditions, in order.
    pub conditions: Vec<NamedCheck>,
    /// Blocks (or hook degrees) on which a condition fails.
    pub failures: Vec<String>,
    pub pass: bool,
}

impl GnqReport {
    fn new(n: usize, results: [(bool, Vec<String>); 4]) -> GnqReport {
        let names = ["duality", "osp", "determinant", "hooks"];
        let mut conditions = Vec::new();
        let mut failures = Vec::new();
        for (k, (ok, f)) in results.into_iter().enumerate() {
            conditions.push(NamedCheck { name: format!("{} {}", k + 1, names[k]), ok });
            failures.extend(f.into_iter().map(|s| format!("condition {}: {s}", k + 1)));
        }
        let pass = conditions.iter().all(|c| c.ok);
        GnqReport { n, conditions, failures, pass }
    }

    pub fn condition(&self, k: usize) -> bool {
        self.conditions[k - 1].ok
    }
}

/// Self-conjugate shapes of `n`: `F_n` together with the self-conjugate hook.
fn self_conjugate_shapes(n: usize) -> Vec<Partition> {
    enumerate_partitions(n).into_iter().filter(Partition::is_self_conjugate).collect()
}

fn tuple_degree(x: &Tuple) -> Result<usize> {
    let n = x.keys().next().map(Partition::size).ok_or(Error::OutOfRange { what: "tuple size", value: 0 })?;
    for l in enumerate_partitions(n) {
        match x.get(&l) {
            None => return Err(Error::MissingBlock(l)),
            Some(m) if m.dim() != l.dim_usize() => {
                return Err(Error::DimensionMismatch(format!("block {l} has size {}", m.dim())))
            }
            Some(_) => {}
        }
    }
    if n < 3 {
        return Err(Error::OutOfRange { what: "n (need n ≥ 3)", value: n });
    }
    Ok(n)
}

/// Intertwiners `P_r: α_r → Λ^r α` for `r = 1..n−1`.
fn hook_intertwiners(n: usize) -> Result<Vec<MatrixQ>> {
    (1..n)
        .map(|r| {
            let rep = hook_iso_check(n, r)?;
            if !rep.passed() {
                return Err(Error::InvariantBreach(format!("no hook intertwiner for n = {n}, r = {r}")));
            }
            Ok(rep.intertwiner.expect("passed report has an intertwiner"))
        })
        .collect()
}

/// The four conditions defining `G_n(q)`, modulo `h^K`:
/// 1. `P_λ = x_λ^# P_λ x_{λ'}` for `λ` in `E_n/∼`;
/// 2. `x_λᵀ B x_λ = B` for every self-conjugate `λ`;
/// 3. `det x_λ = x_{[n]}^{γ(λ)}` for every `λ`;
/// 4. `x_{[n]}^{r−1} P_r x_{α_r} = Λ^r(x_α) P_r` for `r = 1..n−1`.
pub fn gnq_membership(x: &Tuple, order: usize) -> Result<GnqReport> {
    if order < 2 {
        return Err(Error::OutOfRange { what: "series order (need K ≥ 2)", value: order });
    }
    let n = tuple_degree(x)?;
    if x.values().any(|m| m.order() != order) {
        return Err(Error::DimensionMismatch("blocks of a different series order".into()));
    }

    let mut c1 = Vec::new();
    for l in en_representatives(n) {
        let p = duality_intertwiner(&l)?;
        let g = gram(&l)?;
        let xl = &x[&l];
        let xs = xl.map_coeffs(|m| adjoint_with_diag(&g, m));
        let rhs = rmul_const(&xs, &p).mul(&x[&l.conjugate()]);
        if rhs != SeriesMatrix::constant(&p, order) {
            c1.push(l.to_string());
        }
    }

    let mut c2 = Vec::new();
    for l in self_conjugate_shapes(n) {
        if !preserves_form(&x[&l], &bilinear_form(&l)?, false) {
            c2.push(l.to_string());
        }
    }

    let mut c3 = Vec::new();
    let top = x[&Partition::row(n)].entry(0, 0);
    for (l, xl) in x {
        let gamma = l.gamma().to_i64().ok_or(Error::OutOfRange { what: "γ", value: usize::MAX })?;
        let det = xl.det()?;
        let ok = if gamma >= 0 {
            det == top.powi(gamma)?
        } else {
            det.mul(&top.powi(-gamma)?) == TruncSeries::one(order)
        };
        if !ok {
            c3.push(l.to_string());
        }
    }

    let mut c4 = Vec::new();
    let xa = &x[&Partition::hook(n, 1)?];
    for (r, p) in (1..n).zip(hook_intertwiners(n)?) {
        let xr = &x[&Partition::hook(n, r)?];
        let lhs = lmul_const(&p, xr).scale_series(&top.powi(r as i64 - 1)?);
        let rhs = rmul_const(&xa.exterior_power(r)?, &p);
        if lhs != rhs {
            c4.push(format!("r = {r}"));
        }
    }

    Ok(GnqReport::new(
        n,
        [(c1.is_empty(), c1), (c2.is_empty(), c2), (c3.is_empty(), c3), (c4.is_empty(), c4)],
    ))
}

/// Linearised conditions for a family `(u_λ)` of rational matrices:
/// `P u_{λ'} = −u_λ^# P`, `uᵀB + Bu = 0`, `tr u_λ = γ(λ)·u_{[n]}` and
/// `P_r (u_{α_r} + (r−1) u_{[n]}) = Δ_r(u_α) P_r`.
pub fn infinitesimal_gnq(u: &BTreeMap<Partition, MatrixQ>) -> Result<GnqReport> {
    let as_series: Tuple = u.iter().map(|(l, m)| (l.clone(), SeriesMatrix::constant(m, 1))).collect();
    let n = tuple_degree(&as_series)?;

    let mut c1 = Vec::new();
    for l in en_representatives(n) {
        let p = duality_intertwiner(&l)?;
        let g = gram(&l)?;
        let lhs = p.mul(&u[&l.conjugate()]);
        let rhs = adjoint_with_diag(&g, &u[&l]).mul(&p).neg();
        if lhs != rhs {
            c1.push(l.to_string());
        }
    }

    let mut c2 = Vec::new();
    for l in self_conjugate_shapes(n) {
        let b = bilinear_form(&l)?;
        let m = &u[&l];
        if !m.transpose().mul(&b).add(&b.mul(m)).is_zero() {
            c2.push(l.to_string());
        }
    }

    let mut c3 = Vec::new();
    let top = u[&Partition::row(n)][(0, 0)].clone();
    for (l, m) in u {
        if m.trace() != Q::from_integer(l.gamma()) * &top {
            c3.push(l.to_string());
        }
    }

    let mut c4 = Vec::new();
    let ua = &u[&Partition::hook(n, 1)?];
    for (r, p) in (1..n).zip(hook_intertwiners(n)?) {
        let shift = &top * q(r as i64 - 1);
        let lhs = p.mul(&u[&Partition::hook(n, r)?].add_scalar(&shift));
        let rhs = delta_r(ua, r)?.mul(&p);
        if lhs != rhs {
            c4.push(format!("r = {r}"));
        }
    }

    Ok(GnqReport::new(
        n,
        [(c1.is_empty(), c1), (c2.is_empty(), c2), (c3.is_empty(), c3), (c4.is_empty(), c4)],
    ))
}

/// `(ρ_λ(τ))_λ` for a transposition `τ = (i j)`.
pub fn transposition_family(n: usize, i: usize, j: usize) -> Result<BTreeMap<Partition, MatrixQ>> {
    let tau = Permutation::transposition(n, i, j)?;
    enumerate_partitions(n)
        .into_iter()
        .map(|l| {
            let m = RepHandle::new(&l).perm(&tau)?;
            Ok((l, m))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeckeShapeCheck {
    pub shape: Partition,
    pub quadratic: bool,
    pub determinant: bool,
}

/// Quadratic relation on every generator and the determinant law, for all `λ ⊢ n`.
pub fn hecke_shape_checks(n: usize, order: usize) -> Result<Vec<HeckeShapeCheck>> {
    enumerate_partitions(n)
        .par_iter()
        .map(|l| {
            let quadratic = (1..n).map(|i| quadratic_check(l, i, order)).collect::<Result<Vec<_>>>()?;
            Ok(HeckeShapeCheck {
                shape: l.clone(),
                quadratic: quadratic.into_iter().all(|b| b),
                determinant: det_check(l, order)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::frac;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn one_dimensional_images() {
        let k = 6;
        let qq = TruncSeries::q(k);
        assert_eq!(braid_image(&p("[4]"), 2, k).unwrap().entry(0, 0), qq);
        let neg_qi = qq.invert().unwrap().neg();
        assert_eq!(braid_image(&p("[1,1,1,1]"), 3, k).unwrap().entry(0, 0), neg_qi);
        let x = braid_image(&p("[2,1]"), 1, k).unwrap();
        assert_eq!(x.entry(0, 0), qq);
        assert_eq!(x.entry(1, 1), neg_qi);
        assert!(x.entry(0, 1).is_zero() && x.entry(1, 0).is_zero());
    }

    #[test]
    fn quadratic_and_det_small() {
        assert!(quadratic_check(&p("[2,1]"), 2, 8).unwrap());
        assert!(quadratic_check(&p("[3,2,1]"), 4, 6).unwrap());
        assert!(det_check(&p("[2,1]"), 8).unwrap());
        let d = braid_image(&p("[2,1]"), 2, 8).unwrap().det().unwrap();
        assert_eq!(d, TruncSeries::constant(q(-1), 8));
        // [4,1]: η = −1, γ = 2
        let d = braid_image(&p("[4,1]"), 1, 5).unwrap().det().unwrap();
        assert_eq!(d, TruncSeries::exp_scalar(&q(2), 5).neg());
        assert_eq!(
            TruncSeries::exp_scalar(&q(2), 3).coeffs(),
            &[q(1), q(2), frac(2, 1)]
        );
    }

    #[test]
    fn hull_rows() {
        let c = hull_classify(&p("[3,2]")).unwrap();
        assert_eq!((c.g, c.gtilde), (HullGroup::GL, HullEnvelope::GL));
        let c = hull_classify(&p("[2,2]")).unwrap();
        assert_eq!((c.g, c.gtilde, c.form), (HullGroup::OSP, HullEnvelope::OSPtilde, FormType::Symplectic));
        assert!(matches!(hull_classify(&p("[3,1]")), Err(Error::IsHook(_))));
        let js = serde_json::to_string(&c).unwrap();
        assert!(js.contains("\"Gtilde\":\"OSPtilde\"") && js.contains("\"form\":\"symplectic\""));
        assert_eq!(serde_json::from_str::<HullClass>(&js).unwrap(), c);
    }

    #[test]
    fn gnq_examples_n4() {
        let k = 4;
        let id = gnq_membership(&identity_tuple(4, k), k).unwrap();
        assert!(id.pass, "{id:?}");
        let a = Permutation::new(vec![2, 3, 1, 4]).unwrap();
        let even = gnq_membership(&permutation_tuple(&a, k).unwrap(), k).unwrap();
        assert!(even.pass, "{even:?}");
        let s1 = gnq_membership(&braid_tuple(4, 1, k).unwrap(), k).unwrap();
        assert!(!s1.condition(2), "{s1:?}");
        assert!(s1.condition(4), "{s1:?}");
    }

    #[test]
    fn missing_block() {
        let mut t = identity_tuple(4, 3);
        t.remove(&p("[2,2]"));
        assert!(matches!(gnq_membership(&t, 3), Err(Error::MissingBlock(_))));
        assert!(gnq_membership(&identity_tuple(4, 1), 1).is_err());
    }

    #[test]
    fn infinitesimal() {
        let u = transposition_family(4, 1, 2).unwrap();
        assert!(infinitesimal_gnq(&u).unwrap().pass);
        let zero: BTreeMap<Partition, MatrixQ> =
            u.keys().map(|l| (l.clone(), MatrixQ::zeros(l.dim_usize(), l.dim_usize()))).collect();
        assert!(infinitesimal_gnq(&zero).unwrap().pass);
        let mut bad = u.clone();
        // sp_2 = sl_2, so the control on [2,2] cannot be traceless.
        bad.insert(p("[2,2]"), MatrixQ::identity(2));
        let r = infinitesimal_gnq(&bad).unwrap();
        assert!(!r.condition(2), "{r:?}");
    }

    #[test]
    fn table1_small() {
        let r = table1_certificates(4, 6, 3, 11).unwrap();
        assert!(r.pass);
        assert!(r.certificates.iter().any(|c| c.kind == "osp-odd"));
        assert!(r.certificates.iter().any(|c| c.kind == "det"));
    }
}
