//! The conic O = {(ξ, ξ², 1)} ∪ {(0, 1, 0)} in PG(2, 2^m), line classes
//! relative to it, and the pair invariant ρ̂ on exterior lines.
//!
//! Lines not through the nucleus (1, 0, 0) are written (1, x, y)^⊥, i.e. the
//! points (a0, a1, a2) with a0 + a1·x + a2·y = 0. Such a line is exterior
//! exactly when Tr(xy) = 1 and secant when Tr(xy) = 0.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{BinaryField, Elem};

/// A projective point with its first nonzero coordinate scaled to 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConicPoint(pub [Elem; 3]);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LineKind {
    Exterior,
    Tangent,
    Secant,
}

/// The line (1, x, y)^⊥ with Tr(xy) = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ExteriorLine {
    pub x: Elem,
    pub y: Elem,
}

pub fn normalize(f: &BinaryField, p: [Elem; 3]) -> Result<[Elem; 3]> {
    let lead = p.iter().copied().find(|&c| c != 0).ok_or(Error::ZeroLine)?;
    let s = f.inv(lead)?;
    Ok(p.map(|c| f.mul(c, s)))
}

/// The q + 1 points of O, normalized and sorted.
pub fn conic_points(f: &BinaryField) -> Vec<ConicPoint> {
    let mut pts: Vec<ConicPoint> = f
        .elements()
        .map(|xi| {
            let p = normalize(f, [xi, f.square(xi), 1]).expect("nonzero third coordinate");
            ConicPoint(p)
        })
        .collect();
    pts.push(ConicPoint([0, 1, 0]));
    pts.sort_unstable();
    pts
}

fn incident(f: &BinaryField, line: [Elem; 3], p: &ConicPoint) -> bool {
    let [a0, a1, a2] = line;
    let [p0, p1, p2] = p.0;
    f.mul(a0, p0) ^ f.mul(a1, p1) ^ f.mul(a2, p2) == 0
}

/// Number of conic points on the line with coordinates (a0, a1, a2).
pub fn conic_incidences(f: &BinaryField, line: [Elem; 3]) -> Result<usize> {
    if line == [0, 0, 0] {
        return Err(Error::ZeroLine);
    }
    Ok(conic_points(f).iter().filter(|p| incident(f, line, p)).count())
}

/// Classifies a line by counting the conic points on it.
pub fn classify_line(f: &BinaryField, a0: Elem, a1: Elem, a2: Elem) -> Result<LineKind> {
    match conic_incidences(f, [a0, a1, a2])? {
        0 => Ok(LineKind::Exterior),
        1 => Ok(LineKind::Tangent),
        2 => Ok(LineKind::Secant),
        n => unreachable!("a line meets a nonsingular conic in at most 2 points, got {n}"),
    }
}

/// Classification from the trace criterion alone, without touching the conic.
pub fn classify_line_by_trace(f: &BinaryField, a0: Elem, a1: Elem, a2: Elem) -> Result<LineKind> {
    if a0 == 0 {
        if a1 == 0 && a2 == 0 {
            return Err(Error::ZeroLine);
        }
        return Ok(LineKind::Tangent);
    }
    let s = f.inv(a0)?;
    let (x, y) = (f.mul(a1, s), f.mul(a2, s));
    Ok(if f.trace(f.mul(x, y)) == 1 { LineKind::Exterior } else { LineKind::Secant })
}

/// Every line of PG(2, q), each given by its normalized coordinate vector.
pub fn all_lines(f: &BinaryField) -> Vec<[Elem; 3]> {
    let q = f.q() as Elem;
    let mut out = Vec::with_capacity((q * q + q + 1) as usize);
    for x in 0..q {
        for y in 0..q {
            out.push([1, x, y]);
        }
    }
    for y in 0..q {
        out.push([0, 1, y]);
    }
    out.push([0, 0, 1]);
    out
}

/// All exterior lines in (x, y) order; there are q(q-1)/2 of them.
pub fn exterior_lines(f: &BinaryField) -> Vec<ExteriorLine> {
    let mut out = Vec::with_capacity((f.q() * (f.q() - 1) / 2) as usize);
    for x in f.elements() {
        for y in f.elements() {
            if f.trace(f.mul(x, y)) == 1 {
                out.push(ExteriorLine { x, y });
            }
        }
    }
    out
}

/// ρ̂(ℓ, m) = x²u² + y²z² + (x+z)(y+u) for ℓ = (x, y), m = (z, u).
#[inline]
pub fn rho_hat(f: &BinaryField, l: ExteriorLine, m: ExteriorLine) -> Elem {
    let ExteriorLine { x, y } = l;
    let ExteriorLine { x: z, y: u } = m;
    f.square(f.mul(x, u)) ^ f.square(f.mul(y, z)) ^ f.mul(x ^ z, y ^ u)
}
