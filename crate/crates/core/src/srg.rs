//! Latin-square-type strongly regular graphs from pseudocyclic schemes.
//!
//! Given a pseudocyclic scheme on X, the graph on X × X joins (x,y) and
//! (x′,y′) when (x,x′) and (y,y′) lie in the same nontrivial class. It is
//! strongly regular with the parameters of `latin_square_params(|X|, t)`.

use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::certificate::{Certificate, Check};
use crate::error::{Error, Result};
#[allow(unused_imports)]
use crate::par::{par_iter, ParallelIterator};
use crate::scheme::{Relation, SchemeTable};

/// Graphs up to this many vertices get packed adjacency rows.
pub const BITSET_LIMIT: usize = 50_000;
pub const DEFAULT_PAIRS: usize = 100_000;
pub const DEFAULT_SEED: u64 = 0x5EED;
/// Vertices whose degree is checked in sampled mode.
pub const DEGREE_SAMPLE: usize = 1000;

const REF_SRG: &str = "strongly regular: degree k, λ common neighbours if adjacent, μ otherwise";
const REF_LATIN: &str = "Latin-square-type parameters (n², t(n−1), n+t²−3t, t²−t)";
const REF_TENSOR: &str = "product graph of a pseudocyclic scheme";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SrgParams {
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
    pub mu: u64,
}

impl SrgParams {
    /// k(k − λ − 1) = (v − k − 1)μ, in signed arithmetic.
    pub fn feasible(&self) -> bool {
        let (v, k, l, m) = (self.v as i128, self.k as i128, self.lambda as i128, self.mu as i128);
        k * (k - l - 1) == (v - k - 1) * m
    }

    /// Empty or complete graphs.
    pub fn is_degenerate(&self) -> bool {
        self.k == 0 || self.k + 1 == self.v
    }
}

/// (n², t(n−1), n + t² − 3t, t² − t). t = 0 yields the degenerate empty-graph
/// quadruple (n², 0, n, 0), which `is_degenerate` flags.
pub fn latin_square_params(n: u64, t: u64) -> Result<SrgParams> {
    if n == 0 || t > n + 1 {
        return Err(Error::Precondition(format!("need 0 ≤ t ≤ n + 1 and n ≥ 1, got n = {n}, t = {t}")));
    }
    let (n, t) = (n as i128, t as i128);
    let lambda = n + t * t - 3 * t;
    if lambda < 0 {
        return Err(Error::Precondition(format!("λ = {lambda} < 0 for n = {n}, t = {t}")));
    }
    Ok(SrgParams { v: (n * n) as u64, k: (t * (n - 1)) as u64, lambda: lambda as u64, mu: (t * t - t) as u64 })
}

/// Parameters of the product graph of the Frobenius fusion scheme at
/// q = 2^m (m an odd prime), written out in terms of q and m.
pub fn fusion_srg_params(q: u64, m: u64) -> Result<SrgParams> {
    if m > 31 || q != 1u64 << m || m.is_multiple_of(2) || !crate::elliptic::is_prime(m as u32) {
        return Err(Error::Precondition(format!("need q = 2^m with m an odd prime, got q = {q}, m = {m}")));
    }
    let x = q * (q - 1) / 2;
    let s = m * (q + 1);
    Ok(SrgParams { v: x * x, k: s * (x - 1), lambda: x + s * s - 3 * s, mu: s * s - s })
}

/// Printed vertex count ½q²(q−1)² against the actual |X|² for the conic
/// schemes, |X| = q(q−1)/2.
pub fn conic_vertex_count_erratum(q: u64) -> Value {
    let x = q * (q - 1) / 2;
    let printed = q * q * (q - 1) * (q - 1) / 2;
    json!({
        "v": x * x,
        "v_formula": "|X|^2",
        "printed_v": printed,
        "printed_formula": "q^2 (q-1)^2 / 2",
        "printed_v_consistent": printed == x * x,
    })
}

#[derive(Debug, Clone)]
enum Adjacency {
    Bits { words: usize, rows: Vec<u64> },
    /// On-demand adjacency of the product graph over a scheme relation.
    Tensor { relation: Relation, d: usize },
}

#[derive(Debug, Clone)]
pub struct SRGraph {
    v: usize,
    adjacency: Adjacency,
    /// |X| when the graph is a product graph
    base: Option<usize>,
    claimed: SrgParams,
    notes: Map<String, Value>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertifyMode {
    Exact,
    Sampled { pairs: usize, seed: u64 },
}

impl CertifyMode {
    pub fn sampled_default() -> Self {
        CertifyMode::Sampled { pairs: DEFAULT_PAIRS, seed: DEFAULT_SEED }
    }
}

impl SRGraph {
    pub fn v(&self) -> usize {
        self.v
    }

    pub fn claimed(&self) -> SrgParams {
        self.claimed
    }

    pub fn is_lazy(&self) -> bool {
        matches!(self.adjacency, Adjacency::Tensor { .. })
    }

    pub fn note(&mut self, key: &str, value: impl Serialize) {
        self.notes.insert(key.to_string(), serde_json::to_value(value).expect("plain data"));
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        match &self.adjacency {
            Adjacency::Bits { words, rows } => rows[a * words + b / 64] >> (b % 64) & 1 == 1,
            Adjacency::Tensor { relation, .. } => {
                let n = relation.n();
                if a == b {
                    return false;
                }
                let c = relation.class_of(a / n, b / n);
                c != 0 && c == relation.class_of(a % n, b % n)
            }
        }
    }

    pub fn degree(&self, a: usize) -> u64 {
        match &self.adjacency {
            Adjacency::Bits { words, rows } => rows[a * words..(a + 1) * words].iter().map(|w| w.count_ones() as u64).sum(),
            Adjacency::Tensor { relation, d } => {
                let n = relation.n();
                let hx = class_histogram(&relation.row(a / n), *d);
                let hy = class_histogram(&relation.row(a % n), *d);
                (1..=*d).map(|i| hx[i] * hy[i]).sum()
            }
        }
    }

    pub fn common_neighbours(&self, a: usize, b: usize) -> u64 {
        match &self.adjacency {
            Adjacency::Bits { words, rows } => {
                let ra = &rows[a * words..(a + 1) * words];
                let rb = &rows[b * words..(b + 1) * words];
                ra.iter().zip(rb).map(|(x, y)| (x & y).count_ones() as u64).sum()
            }
            Adjacency::Tensor { relation, d } => {
                // Σ_{i,j ≠ 0} N_X(i,j) N_Y(i,j), N_X(i,j) = #{z : c(x,z)=i, c(x′,z)=j}
                let n = relation.n();
                let w = d + 1;
                let nx = pair_histogram(&relation.row(a / n), &relation.row(b / n), w);
                let ny = pair_histogram(&relation.row(a % n), &relation.row(b % n), w);
                let mut total = 0;
                for i in 1..w {
                    for j in 1..w {
                        total += nx[i * w + j] * ny[i * w + j];
                    }
                }
                total
            }
        }
    }

    /// Toggles the edge {a, b}; used for fault injection.
    pub fn flip_edge(&mut self, a: usize, b: usize) -> Result<()> {
        if a == b || a >= self.v || b >= self.v {
            return Err(Error::Precondition(format!("cannot flip ({a}, {b})")));
        }
        match &mut self.adjacency {
            Adjacency::Bits { words, rows } => {
                rows[a * *words + b / 64] ^= 1 << (b % 64);
                rows[b * *words + a / 64] ^= 1 << (a % 64);
                Ok(())
            }
            Adjacency::Tensor { .. } => Err(Error::Precondition("lazy graphs are immutable".into())),
        }
    }

    /// Builds packed rows from an adjacency predicate.
    pub fn from_fn<F>(v: usize, claimed: SrgParams, adjacent: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> bool + Sync,
    {
        if v > BITSET_LIMIT {
            return Err(Error::Precondition(format!("{v} vertices exceed the bitset limit {BITSET_LIMIT}")));
        }
        let words = v.div_ceil(64);
        let rows: Vec<Vec<u64>> = par_iter!(0..v)
            .map(|a| {
                let mut row = vec![0u64; words];
                for b in 0..v {
                    if adjacent(a, b) {
                        row[b / 64] |= 1 << (b % 64);
                    }
                }
                row
            })
            .collect();
        Ok(SRGraph {
            v,
            adjacency: Adjacency::Bits { words, rows: rows.concat() },
            base: None,
            claimed,
            notes: Map::new(),
        })
    }

    /// Reads "v" on the first line then one "u w" pair per line. Without
    /// claimed parameters, they are read off vertex 0 and its first
    /// neighbour and non-neighbour.
    pub fn from_edge_list(reader: impl BufRead, claimed: Option<SrgParams>) -> Result<Self> {
        let mut lines = reader.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty edge list".into()))??;
        let v: usize = header.trim().parse().map_err(|_| Error::Parse(format!("bad vertex count {header:?}")))?;
        if v == 0 || v > BITSET_LIMIT {
            return Err(Error::Parse(format!("vertex count {v} outside 1..={BITSET_LIMIT}")));
        }
        let words = v.div_ceil(64);
        let mut rows = vec![0u64; v * words];
        for (lineno, line) in lines.enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace().map(str::parse::<usize>);
            let (Some(Ok(a)), Some(Ok(b)), None) = (it.next(), it.next(), it.next()) else {
                return Err(Error::Parse(format!("line {}: expected two vertex ids, got {line:?}", lineno + 2)));
            };
            if a >= v || b >= v {
                return Err(Error::Parse(format!("line {}: vertex out of range in {line:?}", lineno + 2)));
            }
            rows[a * words + b / 64] |= 1 << (b % 64);
            rows[b * words + a / 64] |= 1 << (a % 64);
        }
        let mut g = SRGraph {
            v,
            adjacency: Adjacency::Bits { words, rows },
            base: None,
            claimed: SrgParams { v: v as u64, k: 0, lambda: 0, mu: 0 },
            notes: Map::new(),
        };
        g.claimed = match claimed {
            Some(c) => c,
            None => {
                g.note("claimed_parameters", "inferred from vertex 0");
                g.inferred_params()
            }
        };
        Ok(g)
    }

    fn inferred_params(&self) -> SrgParams {
        let nb = (1..self.v).find(|&b| self.adjacent(0, b));
        let non = (1..self.v).find(|&b| !self.adjacent(0, b));
        SrgParams {
            v: self.v as u64,
            k: self.degree(0),
            lambda: nb.map_or(0, |b| self.common_neighbours(0, b)),
            mu: non.map_or(0, |b| self.common_neighbours(0, b)),
        }
    }

    /// Plain-text edge list, each edge once with u < w.
    pub fn write_edge_list(&self, mut out: impl Write) -> Result<()> {
        if self.is_lazy() {
            return Err(Error::Precondition(format!("{} vertices are too many to export", self.v)));
        }
        writeln!(out, "{}", self.v)?;
        for a in 0..self.v {
            for b in a + 1..self.v {
                if self.adjacent(a, b) {
                    writeln!(out, "{a} {b}")?;
                }
            }
        }
        Ok(())
    }
}

fn class_histogram(row: &[u8], d: usize) -> Vec<u64> {
    let mut h = vec![0u64; d + 1];
    for &c in row {
        h[c as usize] += 1;
    }
    h
}

fn pair_histogram(r1: &[u8], r2: &[u8], w: usize) -> Vec<u64> {
    let mut h = vec![0u64; w * w];
    for (&a, &b) in r1.iter().zip(r2) {
        h[a as usize * w + b as usize] += 1;
    }
    h
}

/// The product graph of a pseudocyclic scheme. Vertex (x, y) is x·|X| + y.
pub fn tensor_srg(scheme: &SchemeTable) -> Result<SRGraph> {
    let pc = scheme.check_pseudocyclic();
    let t = match (pc.passed(), scheme.params().common_valency()) {
        (true, Some(t)) => t,
        _ => return Err(Error::Precondition("scheme is not pseudocyclic".into())),
    };
    let n = scheme.n_points();
    let claimed = latin_square_params(n as u64, t)?;
    let v = n * n;
    let relation = scheme.relation().clone();
    let mut g = if v <= BITSET_LIMIT {
        let rel = relation.clone();
        SRGraph::from_fn(v, claimed, move |a, b| {
            let c = rel.class_of(a / n, b / n);
            a != b && c != 0 && c == rel.class_of(a % n, b % n)
        })?
    } else {
        SRGraph { v, adjacency: Adjacency::Tensor { relation, d: scheme.d() }, base: None, claimed, notes: Map::new() }
    };
    g.base = Some(n);
    g.note("t", t);
    g.note("base_points", n);
    Ok(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
enum Violation {
    Degree { vertex: usize, degree: u64 },
    Lambda { pair: (usize, usize), common: u64 },
    Mu { pair: (usize, usize), common: u64 },
    Loop { vertex: usize },
    Asymmetric { pair: (usize, usize) },
}

/// Verifies the claimed parameters; exact mode on packed graphs only.
pub fn certify_srg(g: &SRGraph, mode: CertifyMode) -> Result<Certificate> {
    let c = g.claimed;
    let mut cert = Certificate::new("srg");
    cert.set_meta("claimed", c);
    cert.set_meta("degenerate", c.is_degenerate());
    for (k, v) in &g.notes {
        cert.set_meta(k, v);
    }
    cert.push(Check::equal("vertex_count", REF_SRG, c.v, g.v as u64));
    cert.push(Check::new("parameter_identity", "k(k−λ−1) = (v−k−1)μ", true, c.feasible(), c.feasible()));
    if let Some(n) = g.base {
        cert.push(Check::equal("v_is_base_squared", REF_TENSOR, (n * n) as u64, g.v as u64));
        if let Some(t) = g.notes.get("t").and_then(Value::as_u64) {
            let latin = latin_square_params(n as u64, t).ok();
            cert.push(Check::equal("claimed_is_latin_square_type", REF_LATIN, latin, Some(c)));
        }
    }

    let (degree_bad, lambda_bad, mu_bad, structure_bad) = match mode {
        CertifyMode::Exact => {
            if g.is_lazy() {
                return Err(Error::Precondition(format!(
                    "exact certification of {} vertices is not supported; use sampled mode",
                    g.v
                )));
            }
            cert.set_meta("mode", "exact");
            let per_vertex: Vec<[Option<Violation>; 4]> = par_iter!(0..g.v).map(|a| exact_row(g, a)).collect();
            let first = |slot: usize| per_vertex.iter().find_map(|r| r[slot]);
            let count = |slot: usize| per_vertex.iter().filter(|r| r[slot].is_some()).count();
            cert.set_meta("vertices_checked", g.v);
            cert.set_meta("pairs_checked", g.v as u64 * (g.v as u64 - 1) / 2);
            cert.set_meta("rows_with_violations", (0..4).map(count).collect::<Vec<_>>());
            (first(0), first(1), first(2), first(3))
        }
        CertifyMode::Sampled { pairs, seed } => {
            cert.set_meta("mode", "sampled");
            cert.set_meta("seed", seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let vertices: Vec<usize> = if g.v <= DEGREE_SAMPLE {
                (0..g.v).collect()
            } else {
                (0..DEGREE_SAMPLE).map(|_| rng.random_range(0..g.v)).collect()
            };
            let degrees: Vec<u64> = par_iter!(vertices.clone()).map(|a| g.degree(a)).collect();
            let degree_bad = vertices
                .iter()
                .zip(&degrees)
                .find(|(_, &d)| d != c.k)
                .map(|(&vertex, &degree)| Violation::Degree { vertex, degree });

            let (adj, non) = stratified_pairs(g, pairs, &mut rng);
            let adj_counts: Vec<u64> = par_iter!(adj.clone()).map(|(a, b)| g.common_neighbours(a, b)).collect();
            let non_counts: Vec<u64> = par_iter!(non.clone()).map(|(a, b)| g.common_neighbours(a, b)).collect();
            let lambda_bad = adj
                .iter()
                .zip(&adj_counts)
                .find(|(_, &x)| x != c.lambda)
                .map(|(&pair, &common)| Violation::Lambda { pair, common });
            let mu_bad =
                non.iter().zip(&non_counts).find(|(_, &x)| x != c.mu).map(|(&pair, &common)| Violation::Mu { pair, common });
            cert.set_meta("vertices_checked", vertices.len());
            cert.set_meta("adjacent_pairs_checked", adj.len());
            cert.set_meta("nonadjacent_pairs_checked", non.len());
            cert.set_meta("pairs_checked", adj.len() + non.len());
            cert.set_meta(
                "violations",
                json!({
                    "degree": degrees.iter().filter(|&&d| d != c.k).count(),
                    "lambda": adj_counts.iter().filter(|&&x| x != c.lambda).count(),
                    "mu": non_counts.iter().filter(|&&x| x != c.mu).count(),
                }),
            );
            let structure_bad = vertices.iter().find(|&&a| g.adjacent(a, a)).map(|&vertex| Violation::Loop { vertex });
            (degree_bad, lambda_bad, mu_bad, structure_bad)
        }
    };

    let verdict = |name: &str, expected: Value, bad: Option<Violation>| {
        Check::new(name, REF_SRG, expected, bad.is_none(), bad.is_none()).witness_if_failed(bad)
    };
    cert.push(verdict("simple_graph", json!(true), structure_bad));
    cert.push(verdict("degree", json!(c.k), degree_bad));
    cert.push(verdict("lambda", json!(c.lambda), lambda_bad));
    cert.push(verdict("mu", json!(c.mu), mu_bad));
    Ok(cert)
}

/// First violation of each kind (degree, λ, μ, structure) in row a, pairs b > a.
fn exact_row(g: &SRGraph, a: usize) -> [Option<Violation>; 4] {
    let c = g.claimed;
    let mut out = [None; 4];
    let degree = g.degree(a);
    if degree != c.k {
        out[0] = Some(Violation::Degree { vertex: a, degree });
    }
    if g.adjacent(a, a) {
        out[3] = Some(Violation::Loop { vertex: a });
    }
    for b in a + 1..g.v {
        let adj = g.adjacent(a, b);
        if out[3].is_none() && adj != g.adjacent(b, a) {
            out[3] = Some(Violation::Asymmetric { pair: (a, b) });
        }
        let slot = if adj { 1 } else { 2 };
        if out[slot].is_some() {
            continue;
        }
        let common = g.common_neighbours(a, b);
        if adj && common != c.lambda {
            out[1] = Some(Violation::Lambda { pair: (a, b), common });
        } else if !adj && common != c.mu {
            out[2] = Some(Violation::Mu { pair: (a, b), common });
        }
    }
    out
}

/// Random distinct pairs, half adjacent and half not, by rejection. A kind
/// that cannot occur (empty or complete graph) is given up on after a bounded
/// number of draws.
type Pairs = Vec<(usize, usize)>;

fn stratified_pairs(g: &SRGraph, total: usize, rng: &mut ChaCha8Rng) -> (Pairs, Pairs) {
    let want_adj = total / 2;
    let want_non = total - want_adj;
    let mut adj = Vec::with_capacity(want_adj);
    let mut non = Vec::with_capacity(want_non);
    let budget = 50 * total.max(1000);
    for _ in 0..budget {
        if adj.len() == want_adj && non.len() == want_non {
            break;
        }
        let a = rng.random_range(0..g.v);
        let b = rng.random_range(0..g.v);
        if a == b {
            continue;
        }
        let pair = (a.min(b), a.max(b));
        if g.adjacent(a, b) {
            if adj.len() < want_adj {
                adj.push(pair);
            }
        } else if non.len() < want_non {
            non.push(pair);
        }
    }
    (adj, non)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::complete_graph_scheme;

    #[test]
    fn latin_square_examples() {
        assert_eq!(latin_square_params(28, 9).unwrap(), SrgParams { v: 784, k: 243, lambda: 82, mu: 72 });
        assert_eq!(latin_square_params(3, 2).unwrap(), SrgParams { v: 9, k: 4, lambda: 1, mu: 2 });
        let empty = latin_square_params(5, 0).unwrap();
        assert_eq!(empty, SrgParams { v: 25, k: 0, lambda: 5, mu: 0 });
        assert!(empty.is_degenerate());
        assert!(latin_square_params(5, 7).is_err());
        for n in 1..40 {
            for t in 1..=n + 1 {
                if let Ok(p) = latin_square_params(n, t) {
                    assert!(p.feasible(), "n={n} t={t}");
                }
            }
        }
    }

    #[test]
    fn fusion_params_match_latin_square() {
        assert_eq!(fusion_srg_params(32, 5).unwrap(), SrgParams { v: 246016, k: 81675, lambda: 27226, mu: 27060 });
        assert_eq!(fusion_srg_params(8, 3).unwrap(), SrgParams { v: 784, k: 729, lambda: 676, mu: 702 });
        for m in [3u64, 5, 7, 11, 13] {
            let q = 1u64 << m;
            assert_eq!(fusion_srg_params(q, m).unwrap(), latin_square_params(q * (q - 1) / 2, m * (q + 1)).unwrap());
        }
        assert!(fusion_srg_params(16, 4).is_err());
        assert!(fusion_srg_params(16, 3).is_err());
    }

    #[test]
    fn erratum_at_q8() {
        let e = conic_vertex_count_erratum(8);
        assert_eq!(e["v"], 784);
        assert_eq!(e["printed_v"], 1568);
        assert_eq!(e["printed_v_consistent"], false);
    }

    #[test]
    fn rook_graph_from_k3() {
        let s = complete_graph_scheme(3).unwrap();
        let g = tensor_srg(&s).unwrap();
        assert_eq!(g.claimed(), SrgParams { v: 9, k: 4, lambda: 1, mu: 2 });
        let cert = certify_srg(&g, CertifyMode::Exact).unwrap();
        assert!(cert.passed(), "{cert:?}");
        let cert = certify_srg(&g, CertifyMode::Sampled { pairs: 200, seed: 1 }).unwrap();
        assert!(cert.passed(), "{cert:?}");
    }

    #[test]
    fn flipped_edge_fails_with_witness() {
        let s = complete_graph_scheme(4).unwrap();
        let mut g = tensor_srg(&s).unwrap();
        g.flip_edge(0, 1).unwrap();
        let cert = certify_srg(&g, CertifyMode::Exact).unwrap();
        assert!(!cert.passed());
        let w = cert.check("degree").unwrap().witness.clone().unwrap();
        assert_eq!(w["degree"]["vertex"], 0);
    }

    #[test]
    fn lazy_and_packed_counts_agree() {
        let s = complete_graph_scheme(5).unwrap();
        let packed = tensor_srg(&s).unwrap();
        let lazy = SRGraph {
            v: 25,
            adjacency: Adjacency::Tensor { relation: s.relation().clone(), d: 1 },
            base: Some(5),
            claimed: packed.claimed(),
            notes: Map::new(),
        };
        for a in 0..25 {
            assert_eq!(packed.degree(a), lazy.degree(a));
            for b in 0..25 {
                assert_eq!(packed.adjacent(a, b), lazy.adjacent(a, b));
                if a != b {
                    assert_eq!(packed.common_neighbours(a, b), lazy.common_neighbours(a, b));
                }
            }
        }
        assert!(certify_srg(&lazy, CertifyMode::Exact).is_err());
        assert!(certify_srg(&lazy, CertifyMode::Sampled { pairs: 100, seed: 3 }).unwrap().passed());
    }

    #[test]
    fn factorized_counts_match_bitsets_on_elliptic_q8() {
        let f = crate::fields::BinaryField::new(3, None).unwrap();
        let scheme = crate::elliptic::build_elliptic_scheme(&f).unwrap();
        let packed = tensor_srg(scheme.table()).unwrap();
        assert!(!packed.is_lazy());
        let lazy = SRGraph {
            v: packed.v(),
            adjacency: Adjacency::Tensor { relation: scheme.table().relation().clone(), d: 3 },
            base: Some(28),
            claimed: packed.claimed(),
            notes: Map::new(),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..2000 {
            let a = rng.random_range(0..784);
            let b = rng.random_range(0..784);
            assert_eq!(packed.adjacent(a, b), lazy.adjacent(a, b));
            assert_eq!(packed.common_neighbours(a, b), lazy.common_neighbours(a, b), "({a}, {b})");
        }
        assert_eq!(packed.degree(17), lazy.degree(17));
    }

    #[test]
    fn edge_list_round_trip() {
        let s = complete_graph_scheme(3).unwrap();
        let g = tensor_srg(&s).unwrap();
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("9\n0 4\n"));
        assert_eq!(text.lines().count(), 1 + 9 * 4 / 2);
        let h = SRGraph::from_edge_list(&buf[..], None).unwrap();
        assert_eq!(h.claimed(), g.claimed());
        assert!(certify_srg(&h, CertifyMode::Exact).unwrap().passed());
        assert!(SRGraph::from_edge_list(&b"3\n0 5\n"[..], None).is_err());
        assert!(SRGraph::from_edge_list(&b"x\n"[..], None).is_err());
    }

    #[test]
    fn non_pseudocyclic_rejected() {
        let s = SchemeTable::from_relation_map(4, vec![0, 1, 2], |x, y| match (y + 4 - x) % 4 {
            0 => 0,
            2 => 2,
            _ => 1,
        })
        .unwrap();
        assert!(tensor_srg(&s).is_err());
    }
}
