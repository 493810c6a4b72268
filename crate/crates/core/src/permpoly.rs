//! The polynomials f(X) = Σ_{i<r} X^{σ^i} and
//! H_{α,γ}(X) = γ·Tr(X) + (α·Tr(X) + f(X))^{σ+1} / X² over GF(2^m), with
//! σ = 2^k and kr ≡ 1 (mod m), and exhaustive checks of how H moves the
//! trace spheres T_0 and T_1.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::certificate::{Certificate, Check};
use crate::error::{Error, Result};
use crate::fields::{gcd, BinaryField, Elem};

const REF_SPHERES: &str = "H_{alpha,gamma} maps T_0 onto T_0 and T_1 onto T_{r+(alpha+gamma)m}";
const REF_PARITY: &str = "H_{alpha,gamma} permutes F_q iff r+(alpha+gamma)m is odd";
const REF_IDENTITIES: &str = "closed forms of H_{0,0} and H_{1,0} in terms of f";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermPolySpec {
    pub m: u32,
    pub k: u32,
    pub r: u32,
    pub alpha: u8,
    pub gamma: u8,
}

impl PermPolySpec {
    pub fn new(m: u32, k: u32, alpha: u8, gamma: u8) -> Result<Self> {
        if m < 2 {
            return Err(Error::Precondition(format!("m = {m} is too small (need m >= 2)")));
        }
        if !(1..m).contains(&k) || gcd(k, m) != 1 {
            return Err(Error::Precondition(format!("k = {k} must lie in 1..{m} with gcd(k, m) = 1")));
        }
        if alpha > 1 || gamma > 1 {
            return Err(Error::Precondition("alpha and gamma are bits".into()));
        }
        let r = (1..m).find(|&r| (k * r) % m == 1 % m).expect("k is invertible mod m");
        Ok(PermPolySpec { m, k, r, alpha, gamma })
    }

    /// Every admissible spec for one m.
    pub fn all_for(m: u32) -> Vec<PermPolySpec> {
        (1..m)
            .filter(|&k| gcd(k, m) == 1)
            .flat_map(|k| {
                [(0, 0), (0, 1), (1, 0), (1, 1)].map(|(a, g)| PermPolySpec::new(m, k, a, g).expect("valid"))
            })
            .collect()
    }

    pub fn with_bits(self, alpha: u8, gamma: u8) -> Self {
        PermPolySpec { alpha, gamma, ..self }
    }

    /// The sphere T_1 lands in: (r + (α+γ)m) mod 2.
    pub fn t1_target(&self) -> u8 {
        ((self.r + (self.alpha as u32 + self.gamma as u32) * self.m) % 2) as u8
    }

    fn check_field(&self, f: &BinaryField) -> Result<()> {
        if f.m() != self.m {
            return Err(Error::Precondition(format!("spec has m = {} but the field has m = {}", self.m, f.m())));
        }
        Ok(())
    }
}

/// f(x) = Σ_{i=0}^{r-1} x^{σ^i}.
pub fn f_eval(x: Elem, spec: &PermPolySpec, f: &BinaryField) -> Result<Elem> {
    spec.check_field(f)?;
    Ok(f_raw(x, spec, f))
}

fn f_raw(x: Elem, spec: &PermPolySpec, f: &BinaryField) -> Elem {
    let mut acc = 0;
    let mut term = x;
    for _ in 0..spec.r {
        acc ^= term;
        term = f.frobenius_pow(term, spec.k);
    }
    acc
}

/// H_{α,γ}(x); H(0) = 0.
pub fn h_eval(x: Elem, spec: &PermPolySpec, f: &BinaryField) -> Result<Elem> {
    spec.check_field(f)?;
    Ok(h_raw(x, spec, f))
}

fn h_raw(x: Elem, spec: &PermPolySpec, f: &BinaryField) -> Elem {
    if x == 0 {
        return 0;
    }
    let tr = f.trace(x) as Elem;
    let base = (spec.alpha as Elem * tr) ^ f_raw(x, spec, f);
    let powered = f.mul(f.frobenius_pow(base, spec.k), base);
    let inv_x = f.inv(x).expect("x != 0");
    (spec.gamma as Elem * tr) ^ f.mul(powered, f.square(inv_x))
}

/// Summary of one exhaustive run, in the report layout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermPolyReport {
    pub m: u32,
    pub k: u32,
    pub r: u32,
    pub alpha: u8,
    pub gamma: u8,
    pub is_permutation: bool,
    #[serde(rename = "T0_image")]
    pub t0_image: Option<u8>,
    #[serde(rename = "T1_image_sphere")]
    pub t1_image_sphere: Option<u8>,
    pub pass: bool,
}

/// The trace sphere that `image` is exactly equal to (as a set, with no
/// repeats), if any.
fn sphere_of(f: &BinaryField, image: &mut [Elem]) -> Option<u8> {
    image.sort_unstable();
    let e = f.trace(*image.first()?);
    let sphere = f.trace_sphere(e);
    (image == sphere.members()).then_some(e)
}

pub fn permpoly_report(spec: &PermPolySpec, f: &BinaryField) -> Result<(PermPolyReport, Certificate)> {
    spec.check_field(f)?;
    let mut t0: Vec<Elem> = f.elements().filter(|&x| f.trace(x) == 0).map(|x| h_raw(x, spec, f)).collect();
    let mut t1: Vec<Elem> = f.elements().filter(|&x| f.trace(x) == 1).map(|x| h_raw(x, spec, f)).collect();
    let t0_image = sphere_of(f, &mut t0);
    let t1_image = sphere_of(f, &mut t1);
    let mut all: Vec<Elem> = t0.iter().chain(&t1).copied().collect();
    all.sort_unstable();
    all.dedup();
    let is_permutation = all.len() as u64 == f.q();

    let target = spec.t1_target();
    let mut cert = Certificate::new(format!("permpoly_m{}_k{}_a{}_g{}", spec.m, spec.k, spec.alpha, spec.gamma));
    cert.set_meta("r", spec.r);
    cert.push(Check::equal("T0_onto_T0", REF_SPHERES, Some(0u8), t0_image).witness_if_failed(Some(json!({"image_size": t0.len()}))));
    cert.push(Check::equal("T1_onto_target", REF_SPHERES, Some(target), t1_image));
    cert.push(Check::equal("permutation_parity", REF_PARITY, target == 1, is_permutation));
    let report = PermPolyReport {
        m: spec.m,
        k: spec.k,
        r: spec.r,
        alpha: spec.alpha,
        gamma: spec.gamma,
        is_permutation,
        t0_image,
        t1_image_sphere: t1_image,
        pass: cert.passed(),
    };
    Ok((report, cert))
}

/// Exhaustive check of the trace-sphere bijections and the parity criterion.
pub fn check_sphere_bijections(spec: &PermPolySpec, f: &BinaryField) -> Result<Certificate> {
    permpoly_report(spec, f).map(|(_, c)| c)
}

/// (i) H_{0,0}(x) = f(x) + f(x)/x + f(x)²/x² on F_q*, and
/// (ii) H_{1,0}(x) = 1 + 1/x + 1/x² + H_{0,0}(x) on T_1.
pub fn check_proof_identities(spec: &PermPolySpec, f: &BinaryField) -> Result<Certificate> {
    spec.check_field(f)?;
    let h00 = spec.with_bits(0, 0);
    let h10 = spec.with_bits(1, 0);
    let first_bad_i = f.elements().skip(1).find(|&x| {
        let fx = f_raw(x, spec, f);
        let inv = f.inv(x).expect("x != 0");
        let rhs = fx ^ f.mul(fx, inv) ^ f.mul(f.square(fx), f.square(inv));
        h_raw(x, &h00, f) != rhs
    });
    let first_bad_ii = f.elements().filter(|&x| f.trace(x) == 1).find(|&x| {
        let inv = f.inv(x).expect("trace-1 elements are nonzero");
        h_raw(x, &h10, f) != 1 ^ inv ^ f.square(inv) ^ h_raw(x, &h00, f)
    });
    let mut cert = Certificate::new(format!("permpoly_identities_m{}_k{}", spec.m, spec.k));
    cert.push(
        Check::new("H00_in_terms_of_f", REF_IDENTITIES, true, first_bad_i.is_none(), first_bad_i.is_none())
            .witness_if_failed(first_bad_i.map(|x| json!({"x": x}))),
    );
    cert.push(
        Check::new("H10_minus_H00_on_T1", REF_IDENTITIES, true, first_bad_ii.is_none(), first_bad_ii.is_none())
            .witness_if_failed(first_bad_ii.map(|x| json!({"x": x}))),
    );
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(m: u32) -> BinaryField {
        BinaryField::new(m, None).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert_eq!(PermPolySpec::new(3, 2, 0, 0).unwrap().r, 2);
        assert_eq!(PermPolySpec::new(4, 3, 1, 0).unwrap().r, 3);
        assert_eq!(PermPolySpec::new(2, 1, 0, 0).unwrap().r, 1);
        assert!(PermPolySpec::new(1, 1, 0, 0).is_err());
        assert!(PermPolySpec::new(4, 2, 0, 0).is_err());
        assert!(PermPolySpec::new(3, 3, 0, 0).is_err());
        assert!(PermPolySpec::new(3, 1, 2, 0).is_err());
        let s = PermPolySpec::new(4, 1, 0, 0).unwrap();
        assert!(f_eval(1, &s, &field(3)).is_err());
    }

    #[test]
    fn f_examples() {
        let f = field(3);
        let s1 = PermPolySpec::new(3, 1, 0, 0).unwrap();
        for x in f.elements() {
            assert_eq!(f_eval(x, &s1, &f).unwrap(), x);
        }
        let s2 = PermPolySpec::new(3, 2, 0, 0).unwrap();
        assert_eq!(f_eval(2, &s2, &f).unwrap(), 4);
        assert_eq!(f_eval(0, &s2, &f).unwrap(), 0);
    }

    #[test]
    fn h_examples() {
        let f = field(3);
        let s = PermPolySpec::new(3, 1, 0, 0).unwrap();
        for x in f.elements() {
            assert_eq!(h_eval(x, &s, &f).unwrap(), x);
        }
        for spec in PermPolySpec::all_for(3) {
            assert_eq!(h_eval(0, &spec, &f).unwrap(), 0);
        }
        let s = PermPolySpec::new(3, 2, 0, 0).unwrap();
        for x in f.trace_sphere(1).members() {
            assert_eq!(f.trace(h_eval(*x, &s, &f).unwrap()), 0);
        }
    }

    #[test]
    fn sphere_examples() {
        let (r, _) = permpoly_report(&PermPolySpec::new(3, 1, 0, 0).unwrap(), &field(3)).unwrap();
        assert!(r.is_permutation && r.pass);
        let (r, _) = permpoly_report(&PermPolySpec::new(3, 2, 0, 0).unwrap(), &field(3)).unwrap();
        assert!(!r.is_permutation && r.pass);
        assert_eq!(r.t1_image_sphere, Some(0));
        let (r, _) = permpoly_report(&PermPolySpec::new(4, 3, 1, 0).unwrap(), &field(4)).unwrap();
        assert_eq!(r.t1_image_sphere, Some(1));
        assert!(r.is_permutation && r.pass);
    }

    #[test]
    fn proof_identities_small() {
        let f = field(3);
        for k in 1..3 {
            let s = PermPolySpec::new(3, k, 0, 0).unwrap();
            assert!(check_proof_identities(&s, &f).unwrap().passed());
        }
        let f = field(5);
        for k in 1..5 {
            let s = PermPolySpec::new(5, k, 0, 0).unwrap();
            assert!(check_proof_identities(&s, &f).unwrap().passed(), "k={k}");
        }
    }

    #[test]
    fn h_commutes_with_frobenius() {
        for m in 2..=6 {
            let f = field(m);
            for spec in PermPolySpec::all_for(m) {
                for x in f.elements() {
                    assert_eq!(h_raw(f.square(x), &spec, &f), f.square(h_raw(x, &spec, &f)), "{spec:?} x={x}");
                }
            }
        }
    }

    #[test]
    fn report_json_layout() {
        let (r, _) = permpoly_report(&PermPolySpec::new(3, 2, 0, 0).unwrap(), &field(3)).unwrap();
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"m":3,"k":2,"r":2,"alpha":0,"gamma":0,"is_permutation":false,"T0_image":0,"T1_image_sphere":0,"pass":true}"#
        );
    }
}
