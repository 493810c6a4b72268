//! Cyclotomic schemes: x ~_i y iff x − y lies in the i-th coset of the
//! index-e subgroup of F_q^*.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde_json::json;

use crate::certificate::{fmt_f64, Certificate, Check};
use crate::error::{Error, Result};
use crate::fields::{BinaryField, Elem, PrimeField};
use crate::scheme::SchemeTable;

/// Fields up to this order are supported.
pub const MAX_ORDER: u64 = 1 << 16;
/// Full adjacency spectra are computed only up to this order.
pub const EIGEN_LIMIT: u64 = 1024;
pub const GAUSS_TOLERANCE: f64 = 1e-9;
pub const EIGEN_TOLERANCE: f64 = 1e-6;

const REF_CYCLO: &str = "cyclotomic scheme from the cosets of the index-e subgroup";
const REF_CYCLO_NUMBERS: &str = "intersection numbers are cyclotomic numbers";
const REF_PERIODS: &str = "Gauss periods sum to -1 and give the spectrum of A_1";

#[derive(Debug, Clone, PartialEq)]
pub enum CycloField {
    Prime(PrimeField),
    Binary(BinaryField),
}

impl CycloField {
    pub fn q(&self) -> u64 {
        match self {
            CycloField::Prime(f) => f.p() as u64,
            CycloField::Binary(f) => f.q(),
        }
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        match self {
            CycloField::Prime(f) => f.sub(a, b),
            CycloField::Binary(f) => f.add(a, b),
        }
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match self {
            CycloField::Prime(f) => f.add(a, b),
            CycloField::Binary(f) => f.add(a, b),
        }
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match self {
            CycloField::Prime(f) => f.mul(a, b),
            CycloField::Binary(f) => f.mul(a, b),
        }
    }

    pub fn neg_one(&self) -> Elem {
        match self {
            CycloField::Prime(f) => f.p() - 1,
            CycloField::Binary(_) => 1,
        }
    }

    /// Smallest primitive root for F_p, the field's primitive element for GF(2^m).
    pub fn generator(&self) -> Elem {
        match self {
            CycloField::Prime(f) => f.primitive_root(),
            CycloField::Binary(f) => f.primitive_element(),
        }
    }

    /// Canonical additive character: exp(2πi x/p), or (−1)^Tr(x).
    pub fn character(&self, x: Elem) -> Complex64 {
        match self {
            CycloField::Prime(f) => Complex64::from_polar(1.0, std::f64::consts::TAU * x as f64 / f.p() as f64),
            CycloField::Binary(f) => Complex64::new(if f.trace(x) == 0 { 1.0 } else { -1.0 }, 0.0),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            CycloField::Prime(f) => format!("F_{}", f.p()),
            CycloField::Binary(f) => format!("GF(2^{})", f.m()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CyclotomicSpec {
    field: CycloField,
    e: usize,
    /// coset index of each nonzero element; entry 0 unused
    coset_of: Vec<u8>,
    cosets: Vec<Vec<Elem>>,
}

impl CyclotomicSpec {
    pub fn new(field: CycloField, e: usize) -> Result<Self> {
        let q = field.q();
        if q > MAX_ORDER {
            return Err(Error::Precondition(format!("field order {q} exceeds {MAX_ORDER}")));
        }
        if !(2..=crate::scheme::MAX_CLASSES).contains(&e) || !(q - 1).is_multiple_of(e as u64) {
            return Err(Error::Precondition(format!("e = {e} must satisfy 1 < e, e | q - 1 = {}", q - 1)));
        }
        let g = field.generator();
        let mut coset_of = vec![u8::MAX; q as usize];
        let mut cosets = vec![Vec::new(); e];
        let mut x: Elem = 1;
        for i in 0..(q - 1) as usize {
            coset_of[x as usize] = (i % e) as u8;
            cosets[i % e].push(x);
            x = field.mul(x, g);
        }
        for c in &mut cosets {
            c.sort_unstable();
        }
        if coset_of[field.neg_one() as usize] != 0 {
            return Err(Error::Precondition(format!(
                "-1 is not in C_0 for e = {e} over {}; the relations are not symmetric",
                field.describe()
            )));
        }
        Ok(CyclotomicSpec { field, e, coset_of, cosets })
    }

    pub fn prime(p: u64, e: usize) -> Result<Self> {
        Self::new(CycloField::Prime(PrimeField::new(p)?), e)
    }

    pub fn binary(m: u32, e: usize) -> Result<Self> {
        Self::new(CycloField::Binary(BinaryField::new(m, None)?), e)
    }

    pub fn field(&self) -> &CycloField {
        &self.field
    }

    pub fn e(&self) -> usize {
        self.e
    }

    /// Coset size f = (q − 1)/e.
    pub fn f(&self) -> usize {
        ((self.field.q() - 1) / self.e as u64) as usize
    }

    pub fn cosets(&self) -> &[Vec<Elem>] {
        &self.cosets
    }

    pub fn coset_of(&self, x: Elem) -> Option<usize> {
        (x != 0).then(|| self.coset_of[x as usize] as usize)
    }

    /// |{z ∈ C_a : 1 + z ∈ C_b}|
    pub fn cyclotomic_number(&self, a: usize, b: usize) -> u64 {
        self.cosets[a % self.e]
            .iter()
            .filter(|&&z| self.coset_of(self.field.add(1, z)) == Some(b % self.e))
            .count() as u64
    }
}

pub fn build_cyclotomic_scheme(spec: &CyclotomicSpec) -> Result<SchemeTable> {
    let n = spec.field.q() as usize;
    let field = spec.field.clone();
    let coset_of = spec.coset_of.clone();
    let labels = (0..=spec.e as u64).collect();
    SchemeTable::from_relation_map(n, labels, move |x, y| {
        if x == y {
            0
        } else {
            coset_of[field.sub(x as Elem, y as Elem) as usize] + 1
        }
    })
}

/// p^k_{ij} for classes i, j, k ≥ 1 against the cyclotomic numbers
/// (i − k, j − k) of the cosets.
pub fn check_cyclotomic_numbers(spec: &CyclotomicSpec, scheme: &SchemeTable) -> Check {
    let e = spec.e;
    let mut mismatch = None;
    'outer: for k in 1..=e {
        for i in 1..=e {
            for j in 1..=e {
                let want = spec.cyclotomic_number((i + e - k) % e, (j + e - k) % e);
                let got = scheme.p(k, i, j);
                if want != got {
                    mismatch = Some(json!({"k": k, "i": i, "j": j, "cyclotomic": want, "p": got}));
                    break 'outer;
                }
            }
        }
    }
    Check::new("cyclotomic_numbers", REF_CYCLO_NUMBERS, true, mismatch.is_none(), mismatch.is_none())
        .witness_if_failed(mismatch)
}

/// Pseudocyclic with t = f, i.e. every class has valency (q − 1)/e.
pub fn check_cyclotomic_pseudocyclic(spec: &CyclotomicSpec, scheme: &SchemeTable) -> Certificate {
    let mut cert = scheme.check_pseudocyclic();
    let t = scheme.params().common_valency();
    cert.push(Check::equal("t_equals_f", REF_CYCLO, Some(spec.f() as u64), t));
    cert
}

/// η_i = Σ_{β ∈ C_i} ψ(β).
pub fn gauss_periods(spec: &CyclotomicSpec) -> Vec<Complex64> {
    spec.cosets.iter().map(|c| c.iter().map(|&b| spec.field.character(b)).sum()).collect()
}

pub fn check_gauss_periods(spec: &CyclotomicSpec) -> Vec<Check> {
    let etas = gauss_periods(spec);
    let sum: Complex64 = etas.iter().sum();
    let err = (sum + 1.0).norm();
    let imag = etas.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    vec![
        Check::new("gauss_period_sum", REF_PERIODS, fmt_f64(-1.0), fmt_f64(sum.re), err <= GAUSS_TOLERANCE),
        Check::new("gauss_periods_real", REF_PERIODS, fmt_f64(0.0), fmt_f64(imag), imag <= GAUSS_TOLERANCE),
    ]
}

/// The spectrum of A_1 is {f} together with each η_i repeated f times.
pub fn check_eigenvalue_multiset(spec: &CyclotomicSpec, scheme: &SchemeTable) -> Result<Check> {
    let q = spec.field.q();
    if q > EIGEN_LIMIT {
        return Err(Error::Precondition(format!("field order {q} exceeds the eigenvalue limit {EIGEN_LIMIT}")));
    }
    let n = q as usize;
    let rel = scheme.relation();
    let a = DMatrix::from_fn(n, n, |x, y| f64::from(u8::from(rel.class_of(x, y) == 1)));
    let mut actual: Vec<f64> = SymmetricEigen::new(a).eigenvalues.iter().copied().collect();
    actual.sort_by(f64::total_cmp);
    let f = spec.f();
    let mut predicted: Vec<f64> = vec![f as f64];
    for eta in gauss_periods(spec) {
        predicted.extend(std::iter::repeat_n(eta.re, f));
    }
    predicted.sort_by(f64::total_cmp);
    let err = predicted.iter().zip(&actual).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let pass = predicted.len() == actual.len() && err <= EIGEN_TOLERANCE;
    Ok(Check::new("A1_spectrum_from_periods", REF_PERIODS, fmt_f64(0.0), fmt_f64(err), pass))
}

/// Everything checkable about one cyclotomic scheme.
pub fn verify_cyclotomic(spec: &CyclotomicSpec) -> Result<Certificate> {
    let scheme = build_cyclotomic_scheme(spec)?;
    let mut cert = Certificate::new(format!("cyclotomic {} e={}", spec.field.describe(), spec.e));
    cert.set_meta("q", spec.field.q());
    cert.set_meta("e", spec.e);
    cert.set_meta("f", spec.f());
    cert.absorb(scheme.verify_axioms());
    cert.push(check_cyclotomic_numbers(spec, &scheme));
    cert.absorb(check_cyclotomic_pseudocyclic(spec, &scheme));
    cert.extend(check_gauss_periods(spec));
    if spec.field.q() <= EIGEN_LIMIT {
        cert.push(check_eigenvalue_multiset(spec, &scheme)?);
    }
    Ok(cert)
}
