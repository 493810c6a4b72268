//! Numeric eigenmatrices of a scheme from its intersection numbers.
//!
//! The matrices M_j with (M_j)_{i,k} = p^k_{ij} represent multiplication by
//! A_j on the Bose–Mesner algebra; each row (θ_0, …, θ_d) of the first
//! eigenmatrix P is a common eigenvector, θ_i θ_j = Σ_k p^k_{ij} θ_k. With
//! D = diag(√n_k), D⁻¹ M_j D is symmetric, so a random integer combination
//! of them is diagonalized with a symmetric solver and the rows of P are
//! read off by Rayleigh quotients.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::certificate::{fmt_f64, Certificate, Check};
use crate::error::{Error, Result};
use crate::scheme::{IntersectionTable, Relation, SchemeTable};

pub const DEFAULT_SEED: u64 = 0x5EED;
pub const GROUPING_TOLERANCE: f64 = 1e-8;
pub const ASSERT_TOLERANCE: f64 = 1e-6;
const MAX_ATTEMPTS: usize = 5;
/// Largest scheme for which full adjacency matrices are diagonalized.
pub const ADJACENCY_LIMIT: usize = 100;

const REF_SPECTRUM: &str = "eigenmatrices P, Q with PQ = |X| I";
const REF_SPECTRAL_PC: &str = "pseudocyclic: all nontrivial multiplicities equal t";

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// P[i][j]: eigenvalue of A_j on the i-th eigenspace.
    pub p: Vec<Vec<f64>>,
    pub q: Vec<Vec<f64>>,
    pub multiplicities: Vec<f64>,
    pub seed: u64,
    pub tolerance: f64,
}

impl Spectrum {
    pub fn to_json(&self) -> Value {
        let mat = |m: &[Vec<f64>]| -> Value {
            m.iter().map(|row| row.iter().map(|&x| Value::from(fmt_f64(x))).collect::<Vec<_>>()).collect()
        };
        json!({
            "P": mat(&self.p),
            "Q": mat(&self.q),
            "multiplicities": self.multiplicities.iter().map(|&x| fmt_f64(x)).collect::<Vec<_>>(),
            "seed": self.seed,
            "tolerance": fmt_f64(self.tolerance),
        })
    }

    /// Structural checks: first row and column of P, PQ = |X| I, Σ m_i = |X|, m_0 = 1.
    pub fn verify(&self, table: &IntersectionTable) -> Vec<Check> {
        let tol = self.tolerance;
        let d = table.d;
        let n = table.n_points as f64;
        let mut out = Vec::new();
        let row0_err = (0..=d).map(|j| (self.p[0][j] - table.valencies[j] as f64).abs()).fold(0.0, f64::max);
        out.push(Check::new("P_row0_valencies", REF_SPECTRUM, fmt_f64(0.0), fmt_f64(row0_err), row0_err <= tol));
        let col0_err = (0..=d).map(|i| (self.p[i][0] - 1.0).abs()).fold(0.0, f64::max);
        out.push(Check::new("P_col0_ones", REF_SPECTRUM, fmt_f64(0.0), fmt_f64(col0_err), col0_err <= tol));
        let mut pq_err: f64 = 0.0;
        for i in 0..=d {
            for k in 0..=d {
                let v: f64 = (0..=d).map(|j| self.p[i][j] * self.q[j][k]).sum();
                let want = if i == k { n } else { 0.0 };
                pq_err = pq_err.max((v - want).abs());
            }
        }
        out.push(Check::new("PQ_equals_nI", REF_SPECTRUM, fmt_f64(0.0), fmt_f64(pq_err), pq_err <= tol));
        let sum: f64 = self.multiplicities.iter().sum();
        out.push(Check::new(
            "multiplicity_sum",
            REF_SPECTRUM,
            table.n_points,
            fmt_f64(sum),
            (sum - n).abs() <= tol && (self.multiplicities[0] - 1.0).abs() <= tol,
        ));
        let positive = self.multiplicities.iter().all(|&m| m > 0.0);
        out.push(Check::new("multiplicities_positive", REF_SPECTRUM, true, positive, positive));
        out
    }
}

/// (B_j)_{k,i} = p^k_{ij}, checked to commute pairwise.
pub fn intersection_matrices(table: &IntersectionTable) -> Result<Vec<Vec<Vec<i64>>>> {
    let w = table.d + 1;
    let bs: Vec<Vec<Vec<i64>>> = (0..w)
        .map(|j| (0..w).map(|k| (0..w).map(|i| table.p(k, i, j) as i64).collect()).collect())
        .collect();
    let mul = |a: &Vec<Vec<i64>>, b: &Vec<Vec<i64>>| -> Vec<Vec<i128>> {
        (0..w)
            .map(|r| (0..w).map(|c| (0..w).map(|t| a[r][t] as i128 * b[t][c] as i128).sum()).collect())
            .collect()
    };
    for a in 0..w {
        for b in a + 1..w {
            if mul(&bs[a], &bs[b]) != mul(&bs[b], &bs[a]) {
                return Err(Error::not_a_scheme(
                    "intersection matrices do not commute",
                    format!("B_{a} B_{b} != B_{b} B_{a}"),
                ));
            }
        }
    }
    Ok(bs)
}

/// Symmetrized multiplication matrix D⁻¹ M_j D as a dense float matrix.
fn symmetric_mult(table: &IntersectionTable, j: usize) -> DMatrix<f64> {
    let w = table.d + 1;
    let sq: Vec<f64> = table.valencies.iter().map(|&n| (n as f64).sqrt()).collect();
    DMatrix::from_fn(w, w, |i, k| table.p(k, i, j) as f64 * sq[k] / sq[i])
}

pub fn eigenmatrix(table: &IntersectionTable, seed: u64) -> Result<Spectrum> {
    eigenmatrix_with_tolerance(table, seed, ASSERT_TOLERANCE)
}

pub fn eigenmatrix_with_tolerance(table: &IntersectionTable, seed: u64, tolerance: f64) -> Result<Spectrum> {
    intersection_matrices(table)?;
    let w = table.d + 1;
    let n = table.n_points as f64;
    let mats: Vec<DMatrix<f64>> = (0..w).map(|j| symmetric_mult(table, j)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for _ in 0..MAX_ATTEMPTS {
        let coeffs: Vec<f64> = (0..w).map(|_| rng.random_range(1..=1000) as f64).collect();
        let mut combo = DMatrix::<f64>::zeros(w, w);
        for (c, m) in coeffs.iter().zip(&mats) {
            combo += m * *c;
        }
        let combo = (&combo + combo.transpose()) * 0.5;
        let eig = SymmetricEigen::new(combo);
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(f64::total_cmp);
        let scale = vals.iter().fold(1.0f64, |a, v| a.max(v.abs()));
        if vals.windows(2).any(|p| (p[1] - p[0]).abs() <= GROUPING_TOLERANCE * scale) {
            continue;
        }

        let mut rows: Vec<Vec<f64>> = (0..w)
            .map(|c| {
                let v = eig.eigenvectors.column(c);
                let norm = v.dot(&v);
                mats.iter().map(|m| (v.transpose() * m * v)[(0, 0)] / norm).collect()
            })
            .collect();
        let trivial = rows
            .iter()
            .enumerate()
            .min_by(|a, b| {
                let da: f64 = a.1.iter().zip(&table.valencies).map(|(x, &v)| (x - v as f64).abs()).sum();
                let db: f64 = b.1.iter().zip(&table.valencies).map(|(x, &v)| (x - v as f64).abs()).sum();
                da.total_cmp(&db)
            })
            .map(|(i, _)| i)
            .expect("w >= 1");
        let first = rows.remove(trivial);
        rows.sort_by(|a, b| {
            a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
        });
        rows.insert(0, first);

        let pm = DMatrix::from_fn(w, w, |i, j| rows[i][j]);
        let inv = pm.clone().try_inverse().ok_or_else(|| Error::Numerical("P is singular".into()))?;
        let qm = inv * n;
        let q: Vec<Vec<f64>> = (0..w).map(|i| (0..w).map(|j| qm[(i, j)]).collect()).collect();
        let multiplicities = q[0].clone();
        return Ok(Spectrum { p: rows, q, multiplicities, seed, tolerance });
    }
    Err(Error::Numerical(format!("eigenvalue collision in {MAX_ATTEMPTS} random combinations (seed {seed})")))
}

/// m_i = |X| / Σ_j P_{ij}² / n_j, an independent reading of the multiplicities.
pub fn multiplicities_from_p(table: &IntersectionTable, p: &[Vec<f64>]) -> Vec<f64> {
    let n = table.n_points as f64;
    p.iter()
        .map(|row| n / row.iter().zip(&table.valencies).map(|(x, &v)| x * x / v as f64).sum::<f64>())
        .collect()
}

/// Pseudocyclicity from the spectrum: nontrivial multiplicities all within
/// 10·tolerance of one integer t.
pub fn check_pseudocyclic_spectral(table: &IntersectionTable, seed: u64) -> Certificate {
    let mut cert = Certificate::new("pseudocyclic_spectral");
    cert.set_meta("seed", seed);
    let spectrum = match eigenmatrix(table, seed) {
        Ok(s) => s,
        Err(e) => {
            cert.push(Check::new("spectrum", REF_SPECTRAL_PC, "spectrum computed", e.to_string(), false));
            return cert;
        }
    };
    cert.extend(spectrum.verify(table));
    let tol = spectrum.tolerance;
    let ms = &spectrum.multiplicities[1..];
    let t = ms[0].round();
    let worst = ms.iter().map(|m| (m - t).abs()).fold(0.0, f64::max);
    let pass = worst <= 10.0 * tol;
    cert.set_meta("t", t as u64);
    cert.set_meta("max_deviation", fmt_f64(worst));
    cert.push(
        Check::new(
            "equal_multiplicities",
            REF_SPECTRAL_PC,
            t as u64,
            ms.iter().map(|&m| fmt_f64(m)).collect::<Vec<_>>(),
            pass,
        )
        .witness_if_failed(Some(fmt_f64(worst))),
    );
    let combinatorial = table.check_pseudocyclic();
    cert.set_meta("combinatorial_verdict", combinatorial.passed());
    cert
}

/// Spectral and combinatorial verdicts on pseudocyclicity must coincide.
pub fn pseudocyclic_agreement(table: &IntersectionTable, seed: u64) -> Check {
    let spectral = check_pseudocyclic_spectral(table, seed)
        .check("equal_multiplicities")
        .is_some_and(|c| c.pass);
    let combinatorial = table.check_pseudocyclic().passed();
    Check::new(
        "spectral_matches_combinatorial",
        "equivalence of the pseudocyclicity criteria",
        combinatorial,
        spectral,
        spectral == combinatorial,
    )
}

/// Sorted eigenvalues of the 0/1 adjacency matrix of one class.
pub fn adjacency_eigenvalues(relation: &Relation, class: u8) -> Vec<f64> {
    let n = relation.n();
    let a = DMatrix::from_fn(n, n, |x, y| f64::from(u8::from(relation.class_of(x, y) == class)));
    let mut vals: Vec<f64> = SymmetricEigen::new(a).eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// For small schemes: the spectrum of every A_j equals column j of P with
/// each entry repeated by its multiplicity.
pub fn adjacency_cross_check(scheme: &SchemeTable, spectrum: &Spectrum) -> Result<Check> {
    let n = scheme.n_points();
    if n > ADJACENCY_LIMIT {
        return Err(Error::Precondition(format!("{n} points exceed the adjacency limit {ADJACENCY_LIMIT}")));
    }
    let mults: Vec<usize> = spectrum.multiplicities.iter().map(|m| m.round() as usize).collect();
    let mut worst: f64 = 0.0;
    let mut witness = None;
    for j in 0..=scheme.d() {
        let actual = adjacency_eigenvalues(scheme.relation(), j as u8);
        let mut predicted: Vec<f64> = spectrum
            .p
            .iter()
            .zip(&mults)
            .flat_map(|(row, &mult)| std::iter::repeat_n(row[j], mult))
            .collect();
        predicted.sort_by(f64::total_cmp);
        if predicted.len() != actual.len() {
            witness = Some(json!({"class": j, "predicted": predicted.len(), "actual": actual.len()}));
            worst = f64::INFINITY;
            break;
        }
        let err = predicted.iter().zip(&actual).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if err > worst {
            worst = err;
            if err > spectrum.tolerance {
                witness = Some(json!({"class": j, "error": fmt_f64(err)}));
            }
        }
    }
    let pass = worst <= spectrum.tolerance;
    Ok(Check::new("adjacency_spectra", REF_SPECTRUM, fmt_f64(0.0), fmt_f64(worst), pass).witness_if_failed(witness))
}
