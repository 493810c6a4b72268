use std::fmt;
use std::sync::Arc;

use super::linear::F2LinearMap;
use super::moduli::{degree, smallest_factor, DEFAULT_MODULI};
use super::Elem;
use crate::error::{Error, Result};

/// Largest degree for which log/antilog tables are built.
const TABLE_LIMIT: u32 = 16;

/// GF(2^m) in a polynomial basis. Bit i of an element is the coefficient of
/// α^i, where α is a root of the modulus.
///
/// Cloning is cheap; the tables live behind an `Arc`.
#[derive(Clone)]
pub struct BinaryField {
    inner: Arc<Inner>,
}

struct Inner {
    m: u32,
    modulus: u64,
    trace_mask: Elem,
    generator: Elem,
    tables: Option<LogTables>,
    artin_schreier: F2LinearMap,
}

struct LogTables {
    log: Vec<u32>,
    /// exp[i] = g^i for i in 0..2(q-1), so log sums need no reduction.
    exp: Vec<Elem>,
}

impl fmt::Debug for BinaryField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BinaryField")
            .field("m", &self.inner.m)
            .field("modulus", &format_args!("{:#b}", self.inner.modulus))
            .finish()
    }
}

impl PartialEq for BinaryField {
    fn eq(&self, other: &Self) -> bool {
        self.inner.m == other.inner.m && self.inner.modulus == other.inner.modulus
    }
}

impl Eq for BinaryField {}

/// Carryless product of two 32-bit polynomials.
fn clmul(a: Elem, b: Elem) -> u64 {
    let a = a as u64;
    let mut b = b;
    let mut acc = 0u64;
    while b != 0 {
        let low = b.trailing_zeros();
        acc ^= a << low;
        b &= b - 1;
    }
    acc
}

fn reduce(mut x: u64, modulus: u64, m: u32) -> Elem {
    while x >> m != 0 {
        let shift = degree(x) - m;
        x ^= modulus << shift;
    }
    x as Elem
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl BinaryField {
    /// Builds GF(2^m). Without an explicit modulus the lexicographically
    /// smallest irreducible polynomial of degree m is used.
    pub fn new(m: u32, modulus: Option<u64>) -> Result<Self> {
        if !(2..=32).contains(&m) {
            return Err(Error::DegreeOutOfRange(m));
        }
        let modulus = modulus.unwrap_or(DEFAULT_MODULI[m as usize]);
        if modulus == 0 || degree(modulus) != m {
            return Err(Error::ModulusDegree { modulus, expected: m });
        }
        if let Some(factor) = smallest_factor(modulus) {
            return Err(Error::ReducibleModulus { modulus, factor });
        }

        let slow_mul = |a: Elem, b: Elem| reduce(clmul(a, b), modulus, m);
        let slow_square = |a: Elem| slow_mul(a, a);

        // Tr is F_2-linear, so it is a parity of a fixed mask.
        let mut trace_mask: Elem = 0;
        for i in 0..m {
            let mut x: Elem = 1 << i;
            let mut acc: Elem = 0;
            for _ in 0..m {
                acc ^= x;
                x = slow_square(x);
            }
            debug_assert!(acc <= 1);
            if acc == 1 {
                trace_mask |= 1 << i;
            }
        }

        let q_minus_1 = (1u64 << m) - 1;
        let factors = prime_factors(q_minus_1);
        let slow_pow = |mut a: Elem, mut e: u64| {
            let mut acc: Elem = 1;
            while e != 0 {
                if e & 1 == 1 {
                    acc = slow_mul(acc, a);
                }
                a = slow_square(a);
                e >>= 1;
            }
            acc
        };
        let generator = (2..=q_minus_1 as Elem)
            .find(|&g| factors.iter().all(|&p| slow_pow(g, q_minus_1 / p) != 1))
            .unwrap_or(1);

        let tables = (m <= TABLE_LIMIT).then(|| {
            let n = q_minus_1 as usize;
            let mut exp = vec![0 as Elem; 2 * n];
            let mut log = vec![0u32; n + 1];
            let mut x: Elem = 1;
            for i in 0..n {
                exp[i] = x;
                exp[i + n] = x;
                log[x as usize] = i as u32;
                x = slow_mul(x, generator);
            }
            LogTables { log, exp }
        });

        let artin_schreier = F2LinearMap::new(m, |z| slow_square(z) ^ z);

        Ok(BinaryField {
            inner: Arc::new(Inner { m, modulus, trace_mask, generator, tables, artin_schreier }),
        })
    }

    pub fn m(&self) -> u32 {
        self.inner.m
    }

    pub fn q(&self) -> u64 {
        1u64 << self.inner.m
    }

    pub fn modulus(&self) -> u64 {
        self.inner.modulus
    }

    /// A generator of the multiplicative group.
    pub fn primitive_element(&self) -> Elem {
        self.inner.generator
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.q()).map(|x| x as Elem)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.inner.tables {
            Some(t) => {
                if a == 0 || b == 0 {
                    0
                } else {
                    t.exp[(t.log[a as usize] + t.log[b as usize]) as usize]
                }
            }
            None => self.mul_carryless(a, b),
        }
    }

    /// Schoolbook product without tables; `mul` must agree with it.
    pub fn mul_carryless(&self, a: Elem, b: Elem) -> Elem {
        reduce(clmul(a, b), self.inner.modulus, self.inner.m)
    }

    #[inline]
    pub fn square(&self, a: Elem) -> Elem {
        self.mul(a, a)
    }

    pub fn pow(&self, mut a: Elem, mut e: u64) -> Elem {
        let mut acc: Elem = 1;
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.square(a);
            e >>= 1;
        }
        acc
    }

    /// Inverse as a^(q-2).
    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::NotInvertible(0));
        }
        Ok(match &self.inner.tables {
            Some(t) => {
                let n = self.q() as u32 - 1;
                t.exp[((n - t.log[a as usize]) % n) as usize]
            }
            None => self.pow(a, self.q() - 2),
        })
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Absolute trace Tr(a) = a + a^2 + ... + a^(2^(m-1)), as a bit.
    #[inline]
    pub fn trace(&self, a: Elem) -> u8 {
        ((a & self.inner.trace_mask).count_ones() & 1) as u8
    }

    /// `a` squared `k` times, i.e. a^(2^k). Exponents wrap modulo m.
    pub fn frobenius_pow(&self, a: Elem, k: u32) -> Elem {
        (0..k % self.inner.m).fold(a, |x, _| self.square(x))
    }

    /// The unique square root, a^(2^(m-1)).
    pub fn sqrt(&self, a: Elem) -> Elem {
        self.frobenius_pow(a, self.inner.m - 1)
    }

    /// All z with z^2 + z = w: two elements {z, z+1} when Tr(w) = 0, none otherwise.
    pub fn artin_schreier_solve(&self, w: Elem) -> Vec<Elem> {
        self.inner.artin_schreier.preimages(w)
    }

    pub fn trace_sphere(&self, e: u8) -> TraceSphere {
        let members = self.elements().filter(|&x| self.trace(x) == e).collect();
        TraceSphere { e, members }
    }

    /// Smallest element of absolute trace 1.
    pub fn min_trace_one(&self) -> Elem {
        self.elements().find(|&x| self.trace(x) == 1).expect("trace is onto F_2")
    }
}

/// T_e = {x : Tr(x) = e}, stored sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceSphere {
    e: u8,
    members: Vec<Elem>,
}

impl TraceSphere {
    pub fn e(&self) -> u8 {
        self.e
    }

    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    /// T_e with 0 removed (only differs from `members` for e = 0).
    pub fn nonzero(&self) -> Vec<Elem> {
        self.members.iter().copied().filter(|&x| x != 0).collect()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.members.binary_search(&x).is_ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf8() -> BinaryField {
        BinaryField::new(3, None).unwrap()
    }

    #[test]
    fn default_and_explicit_moduli() {
        assert_eq!(gf8().modulus(), 0b1011);
        assert_eq!(BinaryField::new(3, Some(0b1101)).unwrap().modulus(), 0b1101);
        assert!(matches!(
            BinaryField::new(4, Some(0b10101)),
            Err(Error::ReducibleModulus { factor: 0b111, .. })
        ));
        assert!(BinaryField::new(4, Some(0b11111)).is_ok());
        assert!(matches!(BinaryField::new(1, None), Err(Error::DegreeOutOfRange(1))));
        assert!(matches!(BinaryField::new(33, None), Err(Error::DegreeOutOfRange(33))));
        assert!(matches!(BinaryField::new(3, Some(0b10011)), Err(Error::ModulusDegree { .. })));
    }

    #[test]
    fn gf8_arithmetic() {
        let f = gf8();
        assert_eq!(f.mul(2, 6), 7);
        for a in f.elements() {
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.mul(a, 0), 0);
        }
        assert_eq!(f.inv(7).unwrap(), 4);
        assert_eq!(f.inv(1).unwrap(), 1);
        assert!(matches!(f.inv(0), Err(Error::NotInvertible(0))));
    }

    #[test]
    fn gf8_trace_frobenius_sqrt() {
        let f = gf8();
        assert_eq!(f.trace(2), 0);
        assert_eq!(f.trace(1), 1);
        assert_eq!(f.trace(0), 0);
        assert_eq!(f.frobenius_pow(2, 1), 4);
        assert_eq!(f.frobenius_pow(4, 1), 6);
        assert_eq!(f.frobenius_pow(6, 1), 2);
        for a in f.elements() {
            assert_eq!(f.frobenius_pow(a, 0), a);
            assert_eq!(f.frobenius_pow(a, 3), a);
        }
        assert_eq!(f.frobenius_pow(1, 2), 1);
        assert_eq!(f.sqrt(4), 2);
        assert_eq!(f.sqrt(0), 0);
        assert_eq!(f.sqrt(1), 1);
    }

    #[test]
    fn gf8_artin_schreier() {
        let f = gf8();
        assert_eq!(f.artin_schreier_solve(6), vec![2, 3]);
        assert_eq!(f.artin_schreier_solve(0), vec![0, 1]);
        for w in f.elements().filter(|&w| f.trace(w) == 1) {
            assert!(f.artin_schreier_solve(w).is_empty());
        }
    }

    #[test]
    fn gf8_trace_spheres() {
        let f = gf8();
        let t0 = f.trace_sphere(0);
        let t1 = f.trace_sphere(1);
        assert_eq!(t0.nonzero(), vec![2, 4, 6]);
        assert_eq!(t1.members(), &[1, 3, 5, 7]);
        assert_eq!((t0.len(), t1.len()), (4, 4));
        assert!(t0.contains(0));
        assert_eq!(f.min_trace_one(), 1);
    }

    #[test]
    fn tables_agree_with_carryless() {
        for m in 2..=8 {
            let f = BinaryField::new(m, None).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), f.mul_carryless(a, b));
                }
            }
        }
    }

    #[test]
    fn trace_mask_matches_conjugate_sum() {
        for m in [2, 3, 4, 7, 10, 17, 32] {
            let f = BinaryField::new(m, None).unwrap();
            let step = (f.q() / 512).max(1);
            for a in (0..f.q()).step_by(step as usize).map(|x| x as Elem) {
                let mut x = a;
                let mut acc = 0;
                for _ in 0..m {
                    acc ^= x;
                    x = f.square(x);
                }
                assert_eq!(acc as u8, f.trace(a), "m={m} a={a}");
            }
        }
    }

    #[test]
    fn generator_has_full_order() {
        for m in 2..=12 {
            let f = BinaryField::new(m, None).unwrap();
            let g = f.primitive_element();
            let mut seen = std::collections::HashSet::new();
            let mut x = 1;
            for _ in 0..f.q() - 1 {
                assert!(seen.insert(x));
                x = f.mul(x, g);
            }
            assert_eq!(x, 1);
        }
    }

    #[test]
    fn artin_schreier_even_and_large_degree() {
        for m in [4, 6, 20, 32] {
            let f = BinaryField::new(m, None).unwrap();
            for w in [0u32, 1, 2, 3, 0xdead & ((f.q() - 1) as u32), (f.q() - 1) as u32] {
                let sols = f.artin_schreier_solve(w);
                assert_eq!(sols.len(), if f.trace(w) == 0 { 2 } else { 0 });
                for z in sols {
                    assert_eq!(f.square(z) ^ z, w);
                }
            }
        }
    }
}
