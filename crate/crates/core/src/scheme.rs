//! Symmetric association schemes: construction from a pair classifier,
//! axiom and identity verification, the two combinatorial pseudocyclicity
//! criteria, and class fusion.
//!
//! Intersection numbers are stored as `p_tensor[k][i][j]` = p^k_{ij}, the
//! number of z with (x,z) in class i and (z,y) in class j for any (x,y) in
//! class k.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::certificate::{Certificate, Check};
use crate::error::{Error, Result};
#[allow(unused_imports)]
use crate::par::{par_iter, ParallelIterator};

/// Schemes up to this many points get exhaustive constancy checks.
pub const EXHAUSTIVE_LIMIT: usize = 1000;
/// Schemes up to this many points keep a dense class matrix.
pub const DENSE_LIMIT: usize = 10_000;
pub const SAMPLED_PAIRS_PER_CLASS: usize = 200;
pub const DEFAULT_SEED: u64 = 0x5EED;
pub const MAX_CLASSES: usize = 255;

const REF_AXIOMS: &str = "association scheme axioms";
const REF_IDENTITIES: &str = "intersection-number identities";
const REF_PSEUDOCYCLIC: &str = "pseudocyclicity criterion: equal valencies t and diagonal sums t-1";
const REF_DESIGN: &str = "pseudocyclicity criterion: neighbourhoods form a 2-(v,t,t-1) design";

/// The numeric parameters of a scheme, in the JSON layout used on disk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionTable {
    pub n_points: usize,
    pub d: usize,
    pub valencies: Vec<u64>,
    pub p_tensor: Vec<Vec<Vec<u64>>>,
    pub class_labels: Vec<u64>,
}

impl IntersectionTable {
    #[inline]
    pub fn p(&self, k: usize, i: usize, j: usize) -> u64 {
        self.p_tensor[k][i][j]
    }

    pub fn classes(&self) -> std::ops::RangeInclusive<usize> {
        0..=self.d
    }

    /// Index of the class with the given label.
    pub fn class_index(&self, label: u64) -> Option<usize> {
        self.class_labels.iter().position(|&l| l == label)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// The algebraic identities every scheme satisfies, checked exactly.
    pub fn verify_identities(&self) -> Vec<Check> {
        let d = self.d;
        let n = &self.valencies;
        let all = || {
            (0..=d).flat_map(move |k| (0..=d).flat_map(move |i| (0..=d).map(move |j| (k, i, j))))
        };
        let mut out = Vec::new();

        let shape_ok = self.valencies.len() == d + 1
            && self.class_labels.len() == d + 1
            && self.p_tensor.len() == d + 1
            && self.p_tensor.iter().all(|m| m.len() == d + 1 && m.iter().all(|r| r.len() == d + 1));
        out.push(Check::new("table_shape", REF_IDENTITIES, d + 1, self.valencies.len(), shape_ok));
        if !shape_ok {
            return out;
        }

        let total: u64 = n.iter().sum();
        out.push(Check::equal(
            "valency_sum",
            REF_IDENTITIES,
            (1u64, self.n_points as u64),
            (n[0], total),
        ));

        let first = |pred: &dyn Fn(usize, usize, usize) -> bool| all().find(|&(k, i, j)| !pred(k, i, j));

        let w = first(&|k, i, j| k != 0 || self.p(0, i, j) == if i == j { n[j] } else { 0 });
        out.push(
            Check::new("diagonal_class_intersections", REF_IDENTITIES, "p^0_ij = δ_ij n_j", w.is_none(), w.is_none())
                .witness_if_failed(w),
        );

        let w = first(&|k, i, j| i != 0 || self.p(k, 0, j) == u64::from(j == k));
        out.push(
            Check::new("identity_class_row", REF_IDENTITIES, "p^k_0j = δ_jk", w.is_none(), w.is_none())
                .witness_if_failed(w),
        );

        let w = first(&|k, i, j| self.p(k, i, j) == self.p(k, j, i));
        out.push(
            Check::new("commutativity", REF_IDENTITIES, "p^k_ij = p^k_ji", w.is_none(), w.is_none())
                .witness_if_failed(w),
        );

        let w = first(&|k, i, j| self.p(k, i, j) * n[k] == self.p(j, i, k) * n[j]);
        out.push(
            Check::new("valency_exchange", REF_IDENTITIES, "p^k_ij n_k = p^j_ik n_j", w.is_none(), w.is_none())
                .witness_if_failed(w),
        );

        let w = (0..=d)
            .flat_map(|k| (0..=d).map(move |i| (k, i)))
            .find(|&(k, i)| (0..=d).map(|j| self.p(k, i, j)).sum::<u64>() != n[i]);
        out.push(
            Check::new("row_sums", REF_IDENTITIES, "Σ_j p^k_ij = n_i", w.is_none(), w.is_none())
                .witness_if_failed(w),
        );
        out
    }

    /// Common nontrivial valency, if all nontrivial valencies agree.
    pub fn common_valency(&self) -> Option<u64> {
        let t = *self.valencies.get(1)?;
        self.valencies[1..].iter().all(|&v| v == t).then_some(t)
    }

    /// Σ_{k=1..d} p^k_{kj} for each j = 1..d.
    pub fn diagonal_sums(&self) -> Vec<u64> {
        (1..=self.d).map(|j| (1..=self.d).map(|k| self.p(k, k, j)).sum()).collect()
    }

    /// Equal valencies t and Σ_k p^k_{kj} = t-1 for every j.
    pub fn check_pseudocyclic(&self) -> Certificate {
        let mut cert = Certificate::new("pseudocyclic");
        let t = self.common_valency();
        cert.push(
            Check::new("equal_valencies", REF_PSEUDOCYCLIC, "all n_i equal", &self.valencies[1..], t.is_some())
                .witness_if_failed(Some(&self.valencies)),
        );
        if let Some(t) = t {
            cert.set_meta("t", t);
            let sums = self.diagonal_sums();
            let bad = sums.iter().position(|&s| s + 1 != t).map(|j| (j + 1, sums[j]));
            cert.push(
                Check::new("diagonal_sums", REF_PSEUDOCYCLIC, t - 1, &sums, bad.is_none())
                    .witness_if_failed(bad.map(|(j, s)| serde_json::json!({"j": j, "sum": s}))),
            );
        }
        cert
    }
}

/// Where the class of each ordered pair comes from.
#[derive(Clone)]
pub enum Relation {
    Dense { n: usize, classes: Arc<Vec<u8>> },
    Lazy { n: usize, classify: Arc<dyn Fn(usize, usize) -> u8 + Send + Sync> },
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::Dense { n, .. } => write!(f, "Relation::Dense({n})"),
            Relation::Lazy { n, .. } => write!(f, "Relation::Lazy({n})"),
        }
    }
}

impl Relation {
    pub fn n(&self) -> usize {
        match self {
            Relation::Dense { n, .. } | Relation::Lazy { n, .. } => *n,
        }
    }

    #[inline]
    pub fn class_of(&self, x: usize, y: usize) -> u8 {
        match self {
            Relation::Dense { n, classes } => classes[x * n + y],
            Relation::Lazy { classify, .. } => classify(x, y),
        }
    }

    /// Row x of the class matrix.
    pub fn row(&self, x: usize) -> std::borrow::Cow<'_, [u8]> {
        match self {
            Relation::Dense { n, classes } => std::borrow::Cow::Borrowed(&classes[x * n..(x + 1) * n]),
            Relation::Lazy { n, classify } => std::borrow::Cow::Owned((0..*n).map(|y| classify(x, y)).collect()),
        }
    }

    fn materialize<F>(n: usize, classify: F) -> Self
    where
        F: Fn(usize, usize) -> u8 + Send + Sync + 'static,
    {
        if n <= DENSE_LIMIT {
            let rows: Vec<Vec<u8>> = par_iter!(0..n).map(|x| (0..n).map(|y| classify(x, y)).collect()).collect();
            Relation::Dense { n, classes: Arc::new(rows.concat()) }
        } else {
            Relation::Lazy { n, classify: Arc::new(classify) }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "snake_case")]
pub enum Constancy {
    Exhaustive { pairs: u64 },
    Sampled { pairs_per_class: usize, seed: u64 },
}

/// How to count pair-in-block incidences for the design criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DesignMode {
    Exhaustive,
    Sampled { pairs: usize, seed: u64 },
    /// Exhaustive up to `EXHAUSTIVE_LIMIT` points, else 10^4 sampled pairs.
    Auto,
}

/// A verified scheme: its parameters plus the relation they were read from.
#[derive(Debug, Clone)]
pub struct SchemeTable {
    table: IntersectionTable,
    relation: Relation,
    constancy: Constancy,
}

/// Histogram h[i*(d+1)+j] = #{z : c(x,z)=i, c(z,y)=j}, using symmetry c(z,y)=c(y,z).
fn triangle_counts(row_x: &[u8], row_y: &[u8], d: usize) -> Vec<u64> {
    let w = d + 1;
    let mut h = vec![0u64; w * w];
    for (&a, &b) in row_x.iter().zip(row_y) {
        h[a as usize * w + b as usize] += 1;
    }
    h
}

impl SchemeTable {
    /// Builds and verifies a scheme on `n_points` points. `class_labels[c]` is
    /// the label of class c, with class 0 the diagonal; the classifier maps
    /// each ordered pair to a class index.
    pub fn from_relation_map<F>(n_points: usize, class_labels: Vec<u64>, classifier: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> u8 + Send + Sync + 'static,
    {
        Self::from_relation(Relation::materialize(n_points, classifier), class_labels)
    }

    pub fn from_relation(relation: Relation, class_labels: Vec<u64>) -> Result<Self> {
        let n = relation.n();
        if class_labels.len() < 2 || class_labels.len() > MAX_CLASSES + 1 {
            return Err(Error::Precondition(format!(
                "need between 1 and {MAX_CLASSES} nontrivial classes, got {}",
                class_labels.len().saturating_sub(1)
            )));
        }
        if n < 2 {
            return Err(Error::Precondition("a scheme needs at least 2 points".into()));
        }
        let d = class_labels.len() - 1;
        let w = d + 1;

        // Diagonal, symmetry, range and row valencies, one row at a time.
        let row_scan = |x: usize| -> std::result::Result<Vec<u64>, Error> {
            let row = relation.row(x);
            let mut counts = vec![0u64; w];
            for (y, &c) in row.iter().enumerate() {
                if c as usize > d {
                    return Err(Error::not_a_scheme("class index out of range", format!("({x},{y}) -> {c}")));
                }
                if (x == y) != (c == 0) {
                    return Err(Error::not_a_scheme("class 0 must be exactly the diagonal", format!("({x},{y}) -> {c}")));
                }
                if y > x && relation.class_of(y, x) != c {
                    return Err(Error::not_a_scheme("relation is not symmetric", format!("({x},{y}) vs ({y},{x})")));
                }
                counts[c as usize] += 1;
            }
            Ok(counts)
        };
        let rows_to_scan: Vec<usize> = if n <= DENSE_LIMIT {
            (0..n).collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
            (0..SAMPLED_PAIRS_PER_CLASS).map(|_| rng.random_range(0..n)).collect()
        };
        let scans: Vec<_> = par_iter!(rows_to_scan.clone()).map(row_scan).collect();
        let mut valencies: Option<Vec<u64>> = None;
        for (x, scan) in rows_to_scan.iter().zip(scans) {
            let counts = scan?;
            match &valencies {
                None => valencies = Some(counts),
                Some(v) if *v != counts => {
                    return Err(Error::not_a_scheme(
                        "valencies differ between points",
                        format!("point {x}: {counts:?} vs {v:?}"),
                    ))
                }
                Some(_) => {}
            }
        }
        let valencies = valencies.expect("n >= 2");
        if let Some(c) = valencies.iter().position(|&v| v == 0) {
            return Err(Error::not_a_scheme("empty class", format!("class {c}")));
        }

        // Intersection numbers from one representative pair per class.
        let row0 = relation.row(0).into_owned();
        let mut p_flat = vec![0u64; w * w * w];
        for i in 0..w {
            p_flat[i * w + i] = valencies[i];
        }
        for k in 1..w {
            let y = row0.iter().position(|&c| c as usize == k).expect("class nonempty");
            let h = triangle_counts(&row0, &relation.row(y), d);
            p_flat[k * w * w..(k + 1) * w * w].copy_from_slice(&h);
        }

        let constancy = if n <= EXHAUSTIVE_LIMIT {
            verify_exhaustive(&relation, &p_flat, d)?
        } else {
            verify_sampled(&relation, &p_flat, &valencies, d)?
        };

        let p_tensor = (0..w)
            .map(|k| (0..w).map(|i| p_flat[k * w * w + i * w..k * w * w + (i + 1) * w].to_vec()).collect())
            .collect();
        let table = IntersectionTable { n_points: n, d, valencies, p_tensor, class_labels };
        Ok(SchemeTable { table, relation, constancy })
    }

    pub fn params(&self) -> &IntersectionTable {
        &self.table
    }

    pub fn relation(&self) -> &Relation {
        &self.relation
    }

    pub fn constancy(&self) -> Constancy {
        self.constancy
    }

    pub fn n_points(&self) -> usize {
        self.table.n_points
    }

    pub fn d(&self) -> usize {
        self.table.d
    }

    pub fn valencies(&self) -> &[u64] {
        &self.table.valencies
    }

    pub fn p(&self, k: usize, i: usize, j: usize) -> u64 {
        self.table.p(k, i, j)
    }

    pub fn class_of(&self, x: usize, y: usize) -> usize {
        self.relation.class_of(x, y) as usize
    }

    pub fn to_json(&self) -> String {
        self.table.to_json()
    }

    /// Re-checks the relation-level axioms and all tensor identities.
    pub fn verify_axioms(&self) -> Certificate {
        verify_axioms_with(&self.table, &self.relation, self.constancy)
    }

    pub fn check_pseudocyclic(&self) -> Certificate {
        self.table.check_pseudocyclic()
    }

    /// Counts, for unordered point pairs {x,y}, the blocks R_i(z) (i ≠ 0)
    /// containing both, and compares with t-1.
    pub fn check_design(&self, mode: DesignMode) -> Certificate {
        let mut cert = Certificate::new("design");
        let n = self.n_points();
        let Some(t) = self.table.common_valency() else {
            cert.push(Check::new(
                "equal_block_sizes",
                REF_DESIGN,
                "all nontrivial valencies equal",
                &self.table.valencies,
                false,
            ));
            return cert;
        };
        cert.set_meta("v", n);
        cert.set_meta("block_size", t);
        cert.set_meta("lambda", t - 1);
        cert.set_meta("blocks", n * self.d());

        let mode = match mode {
            DesignMode::Auto if n <= EXHAUSTIVE_LIMIT => DesignMode::Exhaustive,
            DesignMode::Auto => DesignMode::Sampled { pairs: 10_000, seed: DEFAULT_SEED },
            m => m,
        };
        let rel = &self.relation;
        let lambda_of = |x: usize, y: usize| -> u64 {
            let (rx, ry) = (rel.row(x), rel.row(y));
            rx.iter().zip(ry.iter()).filter(|&(&a, &b)| a == b && a != 0).count() as u64
        };
        let pairs: Vec<(usize, usize)> = match mode {
            DesignMode::Exhaustive => {
                cert.set_meta("mode", "exhaustive");
                (0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y))).collect()
            }
            DesignMode::Sampled { pairs, seed } => {
                cert.set_meta("mode", "sampled");
                cert.set_meta("seed", seed);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..pairs)
                    .map(|_| {
                        let x = rng.random_range(0..n);
                        let mut y = rng.random_range(0..n - 1);
                        if y >= x {
                            y += 1;
                        }
                        (x.min(y), x.max(y))
                    })
                    .collect()
            }
            DesignMode::Auto => unreachable!(),
        };
        cert.set_meta("pairs_checked", pairs.len());
        let counts: Vec<u64> = par_iter!(pairs.clone()).map(|(x, y)| lambda_of(x, y)).collect();
        let bad = pairs.iter().zip(&counts).find(|&(_, &c)| c + 1 != t);
        cert.push(
            Check::new(
                "pair_block_counts",
                REF_DESIGN,
                t - 1,
                bad.map_or(t - 1, |(_, &c)| c),
                bad.is_none(),
            )
            .witness_if_failed(bad.map(|(&(x, y), &c)| serde_json::json!({"pair": [x, y], "blocks": c}))),
        );
        cert
    }

    /// Merges nontrivial classes along `partition` (blocks of class indices
    /// covering 1..=d). Constancy of the result is re-verified.
    pub fn fuse(&self, partition: &[Vec<usize>]) -> Result<SchemeTable> {
        let block_of = self.block_map(partition)?;
        if partition.len() > MAX_CLASSES {
            return Err(Error::InvalidPartition("too many blocks".into()));
        }
        let mut labels = vec![self.table.class_labels[0]];
        labels.extend(
            partition
                .iter()
                .map(|b| b.iter().map(|&c| self.table.class_labels[c]).min().expect("nonempty block")),
        );
        let relation = match &self.relation {
            Relation::Dense { n, classes } => Relation::Dense {
                n: *n,
                classes: Arc::new(classes.iter().map(|&c| block_of[c as usize]).collect()),
            },
            Relation::Lazy { n, classify } => {
                let inner = classify.clone();
                Relation::Lazy { n: *n, classify: Arc::new(move |x, y| block_of[inner(x, y) as usize]) }
            }
        };
        SchemeTable::from_relation(relation, labels)
    }

    fn block_map(&self, partition: &[Vec<usize>]) -> Result<Vec<u8>> {
        let d = self.d();
        let mut block_of = vec![u8::MAX; d + 1];
        block_of[0] = 0;
        for (b, block) in partition.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition(format!("block {b} is empty")));
            }
            for &c in block {
                if c == 0 {
                    return Err(Error::InvalidPartition("the diagonal class cannot be merged".into()));
                }
                if c > d {
                    return Err(Error::InvalidPartition(format!("class {c} does not exist (d = {d})")));
                }
                if block_of[c] != u8::MAX {
                    return Err(Error::InvalidPartition(format!("class {c} appears twice")));
                }
                block_of[c] = (b + 1).min(u8::MAX as usize) as u8;
            }
        }
        if let Some(c) = block_of.iter().position(|&b| b == u8::MAX) {
            return Err(Error::InvalidPartition(format!("class {c} is not covered")));
        }
        Ok(block_of)
    }

    /// P^c_{a,b} = Σ_{e∈C_a} Σ_{f∈C_b} p^g_{e,f} for a g in block C_c, checked
    /// to be the same for every such g. Blocks are indices into `partition`.
    pub fn fused_p_entry(&self, partition: &[Vec<usize>], a: usize, b: usize, c: usize) -> Result<u64> {
        self.block_map(partition)?;
        let get = |i: usize| {
            partition.get(i).ok_or_else(|| Error::InvalidPartition(format!("block {i} does not exist")))
        };
        let (ca, cb, cc) = (get(a)?, get(b)?, get(c)?);
        let value = |g: usize| -> u64 { ca.iter().flat_map(|&e| cb.iter().map(move |&f| (e, f))).map(|(e, f)| self.p(g, e, f)).sum() };
        let first = value(cc[0]);
        if let Some(&g) = cc.iter().find(|&&g| value(g) != first) {
            return Err(Error::InvalidPartition(format!(
                "fused entry depends on the representative: g={} gives {first}, g={g} gives {}",
                cc[0],
                value(g)
            )));
        }
        Ok(first)
    }

    /// A_i A_j = Σ_k p^k_{ij} A_k, checked entrywise on the full matrices.
    /// Only meaningful for small schemes; the cost is O(n^3).
    pub fn check_matrix_identity(&self) -> Check {
        let n = self.n_points();
        let d = self.d();
        let rel = &self.relation;
        let mut witness = None;
        'outer: for x in 0..n {
            for y in 0..n {
                let k = rel.class_of(x, y) as usize;
                let mut prod = vec![0u64; (d + 1) * (d + 1)];
                for z in 0..n {
                    prod[rel.class_of(x, z) as usize * (d + 1) + rel.class_of(z, y) as usize] += 1;
                }
                for i in 0..=d {
                    for j in 0..=d {
                        if prod[i * (d + 1) + j] != self.p(k, i, j) {
                            witness = Some(serde_json::json!({"x": x, "y": y, "i": i, "j": j}));
                            break 'outer;
                        }
                    }
                }
            }
        }
        Check::new("adjacency_products", REF_AXIOMS, "A_iA_j = Σ_k p^k_ij A_k", witness.is_none(), witness.is_none())
            .witness_if_failed(witness)
    }
}

fn verify_axioms_with(table: &IntersectionTable, relation: &Relation, constancy: Constancy) -> Certificate {
    let mut cert = Certificate::new("axioms");
    let n = relation.n();
    let w = table.d + 1;
    let scan_rows: Vec<usize> = if n <= DENSE_LIMIT { (0..n).collect() } else { (0..n).step_by(n / 100).collect() };

    let diag = scan_rows.iter().find_map(|&x| {
        (0..n).find(|&y| (x == y) != (relation.class_of(x, y) == 0)).map(|y| (x, y))
    });
    cert.push(
        Check::new("diagonal_relation", REF_AXIOMS, "class 0 = {(x,x)}", diag.is_none(), diag.is_none())
            .witness_if_failed(diag),
    );
    let asym = scan_rows.iter().find_map(|&x| {
        (x + 1..n).find(|&y| relation.class_of(x, y) != relation.class_of(y, x)).map(|y| (x, y))
    });
    cert.push(
        Check::new("symmetry", REF_AXIOMS, "c(x,y) = c(y,x)", asym.is_none(), asym.is_none())
            .witness_if_failed(asym),
    );
    let bad_row = scan_rows.iter().find_map(|&x| {
        let mut counts = vec![0u64; w];
        for &c in relation.row(x).iter() {
            if (c as usize) < w {
                counts[c as usize] += 1;
            }
        }
        (counts != table.valencies).then_some((x, counts))
    });
    cert.push(
        Check::new("valency_constancy", REF_AXIOMS, &table.valencies, bad_row.is_none(), bad_row.is_none())
            .witness_if_failed(bad_row),
    );
    cert.push(Check::new("intersection_constancy", REF_AXIOMS, "constant p^k_ij", constancy, true));
    cert.set_meta("constancy", constancy);
    cert.extend(table.verify_identities());
    cert
}

fn pair_mismatch(relation: &Relation, p_flat: &[u64], d: usize, x: usize, y: usize) -> Option<String> {
    let w = d + 1;
    let k = relation.class_of(x, y) as usize;
    let h = triangle_counts(&relation.row(x), &relation.row(y), d);
    let expected = &p_flat[k * w * w..(k + 1) * w * w];
    (h != expected).then(|| {
        let idx = h.iter().zip(expected).position(|(a, b)| a != b).expect("differs");
        format!(
            "pair ({x},{y}) in class {k}: count for (i={}, j={}) is {} but the representative gives {}",
            idx / w,
            idx % w,
            h[idx],
            expected[idx]
        )
    })
}

fn verify_exhaustive(relation: &Relation, p_flat: &[u64], d: usize) -> Result<Constancy> {
    let n = relation.n();
    let failures: Vec<Option<String>> = par_iter!(0..n)
        .map(|x| (x + 1..n).find_map(|y| pair_mismatch(relation, p_flat, d, x, y)))
        .collect();
    if let Some(w) = failures.into_iter().flatten().next() {
        return Err(Error::not_a_scheme("intersection numbers are not constant", w));
    }
    Ok(Constancy::Exhaustive { pairs: (n * (n - 1) / 2) as u64 })
}

fn verify_sampled(relation: &Relation, p_flat: &[u64], valencies: &[u64], d: usize) -> Result<Constancy> {
    let n = relation.n();
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut pairs = Vec::new();
    for (k, &nk) in valencies.iter().enumerate().skip(1) {
        let class_size = n as u64 * nk;
        let count = (SAMPLED_PAIRS_PER_CLASS as u64).min(class_size) as usize;
        for _ in 0..count {
            let x = rng.random_range(0..n);
            let row = relation.row(x);
            let pick = rng.random_range(0..nk as usize);
            let y = row.iter().enumerate().filter(|&(_, &c)| c as usize == k).nth(pick).map(|(y, _)| y);
            pairs.push((x, y.expect("class nonempty in every row")));
        }
    }
    let failures: Vec<Option<String>> =
        par_iter!(pairs).map(|(x, y)| pair_mismatch(relation, p_flat, d, x, y)).collect();
    if let Some(w) = failures.into_iter().flatten().next() {
        return Err(Error::not_a_scheme("intersection numbers are not constant", w));
    }
    Ok(Constancy::Sampled { pairs_per_class: SAMPLED_PAIRS_PER_CLASS, seed: DEFAULT_SEED })
}

/// The trivial scheme on n points: one nontrivial class (the complete graph).
pub fn complete_graph_scheme(n: usize) -> Result<SchemeTable> {
    SchemeTable::from_relation_map(n, vec![0, 1], |x, y| u8::from(x != y))
}
