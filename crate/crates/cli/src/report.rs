//! JSON and CSV records written by the command line. Every JSON document
//! carries `"schema": 1`.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use symlie::hecke::{
    braid_tuple, gnq_membership, hecke_shape_checks, identity_tuple, infinitesimal_gnq, permutation_tuple,
    table1_certificates, transposition_family, GnqReport, HeckeShapeCheck, HullClass, Table1Report,
};
use symlie::partitions::enumerate_partitions;
use symlie::seminormal::{
    bilinear_form, gram, gram_invariance, osp_twisted_invariance, predicted_transposition_scalar,
    sum_transpositions, verify_coxeter, CoxeterReport, RepHandle,
};
use symlie::tableaux::TableauJson;
use symlie::{MatrixDump, Partition, PartitionClass, Permutation, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionRow {
    pub shape: Partition,
    pub dim: String,
    /// `hook`, `E` (proper, not self-conjugate) or `F` (proper, self-conjugate).
    pub class: String,
    pub conjugate: Partition,
    pub gamma: String,
}

/// Flat partitions-list record for CSV output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionCsvRow {
    pub shape: String,
    pub dim: String,
    pub class: String,
    pub conjugate: String,
    pub gamma: String,
}

impl From<&PartitionRow> for PartitionCsvRow {
    fn from(r: &PartitionRow) -> PartitionCsvRow {
        PartitionCsvRow {
            shape: r.shape.to_string(),
            dim: r.dim.clone(),
            class: r.class.clone(),
            conjugate: r.conjugate.to_string(),
            gamma: r.gamma.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionsListReport {
    pub schema: u32,
    pub n: usize,
    pub rows: Vec<PartitionRow>,
}

pub fn partitions_list(n: usize) -> Vec<PartitionRow> {
    enumerate_partitions(n)
        .into_iter()
        .map(|l| {
            let class = match l.classify() {
                PartitionClass::Hook => "hook",
                PartitionClass::ProperAsym { .. } => "E",
                PartitionClass::ProperSym => "F",
            };
            let gamma = if n >= 2 { l.gamma().to_string() } else { "1".into() };
            PartitionRow {
                dim: l.dimension().to_string(),
                class: class.into(),
                conjugate: l.conjugate(),
                gamma,
                shape: l,
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SytCount {
    pub schema: u32,
    pub shape: Partition,
    pub count: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SytList {
    pub schema: u32,
    pub shape: Partition,
    pub tableaux: Vec<TableauJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepMatrices {
    pub schema: u32,
    pub shape: Partition,
    pub generators: Vec<MatrixDump>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepVerifyReport {
    pub schema: u32,
    pub shape: Partition,
    pub dim: usize,
    pub coxeter: CoxeterReport,
    pub gram_invariant: bool,
    /// Scalar by which the sum of all transpositions acts.
    pub transposition_scalar: String,
    pub transposition_scalar_ok: bool,
    /// Twisted invariance of the bilinear form, for self-conjugate shapes.
    pub bilinear_twisted: Option<bool>,
    pub pass: bool,
}

pub fn rep_verify(shape: &Partition) -> Result<RepVerifyReport> {
    let h = RepHandle::new(shape);
    let coxeter = verify_coxeter(&h);
    let gram_invariant = gram_invariance(&h, &gram(shape)?);
    let (scalar, ok) = if shape.size() >= 2 {
        let (_, c) = sum_transpositions(&h)?;
        let ok = c == predicted_transposition_scalar(shape);
        (c.to_string(), ok)
    } else {
        ("0".into(), true)
    };
    let bilinear_twisted =
        if shape.is_self_conjugate() { Some(osp_twisted_invariance(&h, &bilinear_form(shape)?)) } else { None };
    let pass = coxeter.passed() && gram_invariant && ok && bilinear_twisted != Some(false);
    Ok(RepVerifyReport {
        schema: 1,
        shape: shape.clone(),
        dim: h.dim(),
        coxeter,
        gram_invariant,
        transposition_scalar: scalar,
        transposition_scalar_ok: ok,
        bilinear_twisted,
        pass,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HullTableReport {
    pub schema: u32,
    pub n: usize,
    pub rows: Vec<HullClass>,
}

/// Flat hull-table record for CSV and text output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HullRow {
    pub shape: String,
    pub dim: String,
    pub gamma: String,
    pub eta: i8,
    pub form: String,
    #[serde(rename = "G")]
    pub g: String,
    #[serde(rename = "Gtilde")]
    pub gtilde: String,
}

impl From<&HullClass> for HullRow {
    fn from(c: &HullClass) -> HullRow {
        let name = |v: serde_json::Value| v.as_str().unwrap_or_default().to_string();
        HullRow {
            shape: c.shape.to_string(),
            dim: c.dim.to_string(),
            gamma: c.gamma.to_string(),
            eta: c.eta,
            form: name(serde_json::to_value(c.form).expect("enum")),
            g: name(serde_json::to_value(c.g).expect("enum")),
            gtilde: name(serde_json::to_value(c.gtilde).expect("enum")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeckeReport {
    pub schema: u32,
    pub n: usize,
    pub order: usize,
    pub seed: u64,
    pub shapes: Vec<HeckeShapeCheck>,
    pub table1: Table1Report,
    pub pass: bool,
}

pub fn hecke_check(n: usize, order: usize, trials: usize, seed: u64) -> Result<HeckeReport> {
    let shapes = hecke_shape_checks(n, order)?;
    let table1 = table1_certificates(n, order, trials, seed)?;
    let pass = table1.pass && shapes.iter().all(|s| s.quadratic && s.determinant);
    Ok(HeckeReport { schema: 1, n, order, seed, shapes, table1, pass })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GnqCase {
    pub name: String,
    /// `member`, or `fails condition k`.
    pub expected: String,
    pub report: GnqReport,
    pub as_expected: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GnqCheckReport {
    pub schema: u32,
    pub n: usize,
    pub order: usize,
    pub seed: u64,
    pub cases: Vec<GnqCase>,
    pub pass: bool,
}

/// A random even permutation of `1..=n`, never the identity for `n ≥ 3`.
pub fn random_even_permutation(n: usize, seed: u64) -> Permutation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut images: Vec<usize> = (1..=n).collect();
        images.shuffle(&mut rng);
        let p = Permutation::new(images).expect("shuffled identity");
        if p.is_even() && p != Permutation::identity(n) {
            return p;
        }
    }
}

/// Identity and an even permutation are members; the image of `σ_1` is not
/// (it fails the form condition); the transposition family satisfies the
/// linearised conditions.
pub fn gnq_check(n: usize, order: usize, seed: u64) -> Result<GnqCheckReport> {
    let member = |name: String, report: GnqReport| GnqCase {
        name,
        expected: "member".into(),
        as_expected: report.pass,
        report,
    };
    let mut cases = Vec::new();
    cases.push(member("identity".into(), gnq_membership(&identity_tuple(n, order), order)?));
    let a = random_even_permutation(n, seed);
    let images: Vec<String> = a.images().iter().map(usize::to_string).collect();
    let label = format!("even permutation [{}]", images.join(","));
    cases.push(member(label, gnq_membership(&permutation_tuple(&a, order)?, order)?));
    let s1 = gnq_membership(&braid_tuple(n, 1, order)?, order)?;
    cases.push(GnqCase {
        name: "sigma_1".into(),
        expected: "fails condition 2".into(),
        as_expected: !s1.condition(2),
        report: s1,
    });
    cases.push(member("linearised (1 2)".into(), infinitesimal_gnq(&transposition_family(n, 1, 2)?)?));
    let pass = cases.iter().all(|c| c.as_expected);
    Ok(GnqCheckReport { schema: 1, n, order, seed, cases, pass })
}
