//! Deciding whether two marked groups are isomorphic by an isomorphism that
//! respects the marks in order.
//!
//! Write both groups canonically as `Z^r + T`. Every automorphism has the
//! block shape `(f, t) -> (P f, X f + Psi t)` with `P` in `GL_r(Z)`, `X` any
//! homomorphism `Z^r -> T` and `Psi` in `Aut(T)`. The free condition
//! `P f_j = f'_j` is a left-unimodular orbit question answered by row
//! Hermite forms; the torsion condition asks for `Psi` with
//! `Psi t_j - t'_j` in the span of the maps `X`, and both `Aut(T)` and that
//! span split over the primes dividing `|T|`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::{hom, verify_pointed_iso, Decision, GroupHom, MarkedGroup};
use crate::error::{Error, Result};
use crate::intmat::{hnf_rows, ColumnLattice, IntMatrix, IntVector};

/// Environment variable overriding [`SearchConfig::torsion_bound`].
pub const TORSION_BOUND_ENV: &str = "CKDUAL_TORSION_BOUND";

/// Limits for the torsion automorphism search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Largest torsion subgroup (number of elements) searched exhaustively.
    pub torsion_bound: u128,
    /// Search nodes allowed per prime before giving up with `Unknown`.
    pub node_budget: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            torsion_bound: 1_000_000,
            node_budget: 10_000_000,
        }
    }
}

impl SearchConfig {
    /// Default limits, with the torsion bound taken from
    /// `CKDUAL_TORSION_BOUND` when set.
    pub fn from_env() -> Result<Self> {
        let mut cfg = Self::default();
        if let Ok(v) = std::env::var(TORSION_BOUND_ENV) {
            cfg.torsion_bound = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("{TORSION_BOUND_ENV}={v:?} is not a positive integer")))?;
        }
        Ok(cfg)
    }
}

pub fn pointed_iso_exists(a: &MarkedGroup, b: &MarkedGroup, cfg: &SearchConfig) -> Result<Decision> {
    let k = a.marks.len();
    if k != b.marks.len() {
        return Err(Error::MarkCountMismatch {
            left: k,
            right: b.marks.len(),
        });
    }
    let (ga, gb) = (&a.group, &b.group);
    if ga.same_as(gb) && a.marks().iter().zip(b.marks()).all(|(x, y)| super::element_eq(x, &y).unwrap_or(false)) {
        return Ok(Decision::Yes(GroupHom::identity(ga)));
    }
    if ga.free_rank() != gb.free_rank() || ga.torsion() != gb.torsion() {
        return Ok(Decision::No);
    }
    let r = ga.free_rank();
    let torsion: Vec<BigInt> = ga.torsion().to_vec();
    let m = torsion.len();

    let ca = a.canonical_marks();
    let cb = b.canonical_marks();
    let free_a = IntMatrix::from_fn(r, k, |i, j| ca[j][i].clone());
    let free_b = IntMatrix::from_fn(r, k, |i, j| cb[j][i].clone());

    let ha = hnf_rows(&free_a);
    let hb = hnf_rows(&free_b);
    if ha.h != hb.h {
        return Ok(Decision::No);
    }
    let free_map = &inverse_unimodular(&hb.transform)? * &ha.transform;

    let psi = if m == 0 {
        IntMatrix::zeros(0, 0)
    } else {
        let order = ga.torsion_order();
        if order > BigInt::from(cfg.torsion_bound) {
            return Ok(Decision::Unknown(format!(
                "torsion subgroup has {order} elements, above the search bound {}",
                cfg.torsion_bound
            )));
        }
        let ta: Vec<Vec<u128>> = ca.iter().map(|c| torsion_part(c, r)).collect();
        let tb: Vec<Vec<u128>> = cb.iter().map(|c| torsion_part(c, r)).collect();
        let divisors: Vec<u128> = torsion.iter().map(|d| d.to_u128().expect("bounded")).collect();
        let mut blocks = Vec::new();
        for (p, factors) in prime_parts(&divisors) {
            let part = PrimePart::new(p, factors, &free_a, &ta, &tb);
            match part.search(cfg.node_budget) {
                Search::Found(mat) => blocks.push((part, mat)),
                Search::NotFound => return Ok(Decision::No),
                Search::Exhausted(why) => return Ok(Decision::Unknown(why)),
            }
        }
        assemble_torsion_map(&divisors, &blocks)
    };

    // Torsion images of the free generators, absorbing the residue.
    let mut mix = IntMatrix::zeros(m, r);
    for (bi, d) in torsion.iter().enumerate() {
        let w: IntVector = (0..k)
            .map(|j| {
                let image: BigInt = (0..m).map(|c| &psi[(bi, c)] * &ca[j][r + c]).sum();
                (&cb[j][r + bi] - image).mod_floor(d)
            })
            .collect();
        let mut lat = free_a.transpose();
        lat = lat.hstack(&IntMatrix::identity(k).scale(d));
        let sol = ColumnLattice::new(lat)
            .solve(&w)?
            .ok_or_else(|| Error::Consistency("torsion residue outside the free-part span".into()))?;
        for a_idx in 0..r {
            mix[(bi, a_idx)] = sol[a_idx].clone();
        }
    }

    let n = r + m;
    let phi = IntMatrix::from_fn(n, n, |i, j| match (i < r, j < r) {
        (true, true) => free_map[(i, j)].clone(),
        (true, false) => BigInt::zero(),
        (false, true) => mix[(i - r, j)].clone(),
        (false, false) => psi[(i - r, j - r)].clone(),
    });
    let matrix = &(gb.from_canonical() * &phi) * ga.to_canonical();
    let witness = hom(ga, gb, matrix)?;
    if !verify_pointed_iso(&witness, a, b)? {
        return Err(Error::Consistency("constructed pointed isomorphism failed verification".into()));
    }
    Ok(Decision::Yes(witness))
}

fn torsion_part(c: &[BigInt], r: usize) -> Vec<u128> {
    c[r..].iter().map(|x| x.to_u128().expect("reduced torsion coordinate")).collect()
}

fn inverse_unimodular(u: &IntMatrix) -> Result<IntMatrix> {
    let n = u.rows();
    let lat = ColumnLattice::new(u.clone());
    let mut cols = Vec::with_capacity(n);
    for i in 0..n {
        let mut e = vec![BigInt::zero(); n];
        e[i] = BigInt::from(1);
        cols.push(
            lat.solve(&e)?
                .ok_or_else(|| Error::Consistency("transform is not unimodular".into()))?,
        );
    }
    Ok(IntMatrix::from_columns(n, &cols))
}

fn factorize(mut n: u128) -> Vec<(u128, u32)> {
    let mut out = Vec::new();
    let mut p = 2u128;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// For each prime, the cyclic factors `(torsion index, exponent)` of the
/// p-primary part, in canonical order.
fn prime_parts(divisors: &[u128]) -> Vec<(u128, Vec<(usize, u32)>)> {
    let mut map: Vec<(u128, Vec<(usize, u32)>)> = Vec::new();
    for (b, &d) in divisors.iter().enumerate() {
        for (p, e) in factorize(d) {
            match map.iter_mut().find(|(q, _)| *q == p) {
                Some((_, v)) => v.push((b, e)),
                None => map.push((p, vec![(b, e)])),
            }
        }
    }
    map.sort_by_key(|(p, _)| *p);
    map
}

enum Search {
    Found(Vec<Vec<u128>>),
    NotFound,
    Exhausted(String),
}

/// The p-primary part `T_p = Z/p^{e_1} + ... + Z/p^{e_s}` with the marks'
/// coordinates in it.
struct PrimePart {
    p: u128,
    factors: Vec<(usize, u32)>,
    moduli: Vec<u128>,
    src: Vec<Vec<u128>>,
    dst: Vec<Vec<u128>>,
    /// Upper-triangular basis of `rowspan(F) + p^e Z^k`, keyed by `e`;
    /// empty when there is no free part.
    spans: HashMap<u32, Vec<Vec<i128>>>,
    has_free: bool,
}

impl PrimePart {
    fn new(p: u128, factors: Vec<(usize, u32)>, free: &IntMatrix, ta: &[Vec<u128>], tb: &[Vec<u128>]) -> Self {
        let moduli: Vec<u128> = factors.iter().map(|&(_, e)| p.pow(e)).collect();
        let project = |t: &[Vec<u128>]| -> Vec<Vec<u128>> {
            t.iter()
                .map(|v| factors.iter().zip(&moduli).map(|(&(b, _), q)| v[b] % q).collect())
                .collect()
        };
        let k = ta.len();
        let has_free = free.rows() > 0;
        let mut spans = HashMap::new();
        if has_free {
            for &(_, e) in &factors {
                spans.entry(e).or_insert_with(|| {
                    let q = BigInt::from(p.pow(e));
                    let stacked = free.vstack(&IntMatrix::identity(k).scale(&q));
                    let h = hnf_rows(&stacked).basis();
                    (0..h.rows())
                        .map(|i| h.row(i).iter().map(|x| x.to_i128().expect("bounded")).collect())
                        .collect()
                });
            }
        }
        PrimePart {
            p,
            src: project(ta),
            dst: project(tb),
            factors,
            moduli,
            spans,
            has_free,
        }
    }

    fn in_span(&self, e: u32, w: &[i128]) -> bool {
        if !self.has_free {
            return w.iter().all(|&x| x == 0);
        }
        let basis = &self.spans[&e];
        let mut w = w.to_vec();
        for row in basis {
            let Some(c) = row.iter().position(|&x| x != 0) else { continue };
            if w[c] % row[c] != 0 {
                return false;
            }
            let q = w[c] / row[c];
            if q != 0 {
                for (wi, ri) in w.iter_mut().zip(row) {
                    *wi -= q * ri;
                }
            }
        }
        w.iter().all(|&x| x == 0)
    }

    /// Rows `x` admissible as row `c` of the automorphism: `x_j` ranges over
    /// `Hom(Z/p^{e_j}, Z/p^{e_c})` and the mark condition holds in
    /// coordinate `c`.
    fn admissible_rows(&self, c: usize, budget: u64) -> std::result::Result<Vec<Vec<u128>>, String> {
        let s = self.factors.len();
        let qc = self.moduli[c];
        let ec = self.factors[c].1;
        let steps: Vec<u128> = (0..s)
            .map(|j| self.p.pow(ec.saturating_sub(self.factors[j].1)))
            .collect();
        let counts: Vec<u128> = steps.iter().map(|st| qc / st).collect();
        let total = counts.iter().try_fold(1u128, |acc, &n| acc.checked_mul(n));
        match total {
            Some(t) if t <= budget as u128 => {}
            _ => return Err(format!("automorphism search for p = {} exceeds the node budget", self.p)),
        }
        let mut out = Vec::new();
        let mut idx = vec![0u128; s];
        loop {
            let row: Vec<u128> = idx.iter().zip(&steps).map(|(i, st)| i * st).collect();
            let w: Vec<i128> = self
                .src
                .iter()
                .zip(&self.dst)
                .map(|(src, dst)| {
                    let img = row.iter().zip(src).fold(0u128, |acc, (x, t)| (acc + x * t) % qc);
                    ((img + qc - dst[c]) % qc) as i128
                })
                .collect();
            if self.in_span(ec, &w) {
                out.push(row);
            }
            // mixed-radix increment
            let mut pos = 0;
            loop {
                if pos == s {
                    return Ok(out);
                }
                idx[pos] += 1;
                if idx[pos] < counts[pos] {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }

    fn search(&self, budget: u64) -> Search {
        let s = self.factors.len();
        let mut rows = Vec::with_capacity(s);
        for c in 0..s {
            match self.admissible_rows(c, budget) {
                Ok(r) if r.is_empty() => return Search::NotFound,
                Ok(r) => rows.push(r),
                Err(why) => return Search::Exhausted(why),
            }
        }
        let mut chosen = Vec::with_capacity(s);
        let mut echelon: Vec<Vec<u128>> = Vec::new();
        let mut nodes = 0u64;
        match self.backtrack(&rows, 0, &mut chosen, &mut echelon, &mut nodes, budget) {
            Some(true) => Search::Found(chosen),
            Some(false) => Search::NotFound,
            None => Search::Exhausted(format!(
                "automorphism search for p = {} exceeds the node budget",
                self.p
            )),
        }
    }

    /// Picks one admissible row per coordinate, keeping the rows linearly
    /// independent modulo p (which is exactly invertibility on a p-group).
    fn backtrack(
        &self,
        rows: &[Vec<Vec<u128>>],
        c: usize,
        chosen: &mut Vec<Vec<u128>>,
        echelon: &mut Vec<Vec<u128>>,
        nodes: &mut u64,
        budget: u64,
    ) -> Option<bool> {
        if c == rows.len() {
            return Some(true);
        }
        for row in &rows[c] {
            *nodes += 1;
            if *nodes > budget {
                return None;
            }
            let reduced: Vec<u128> = row.iter().map(|x| x % self.p).collect();
            let Some(ech) = reduce_mod_p(echelon, reduced, self.p) else {
                continue;
            };
            echelon.push(ech);
            chosen.push(row.clone());
            match self.backtrack(rows, c + 1, chosen, echelon, nodes, budget) {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
            echelon.pop();
            chosen.pop();
        }
        Some(false)
    }
}

/// Reduces `v` against an echelon basis over F_p; returns the normalised
/// remainder when it is independent.
fn reduce_mod_p(basis: &[Vec<u128>], mut v: Vec<u128>, p: u128) -> Option<Vec<u128>> {
    for b in basis {
        let lead = b.iter().position(|&x| x != 0).expect("basis rows are nonzero");
        if v[lead] != 0 {
            let f = v[lead];
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi = (*vi + p - (f * bi) % p) % p;
            }
        }
    }
    let lead = v.iter().position(|&x| x != 0)?;
    let inv = mod_inverse(v[lead], p);
    Some(v.iter().map(|x| (x * inv) % p).collect())
}

fn mod_inverse(a: u128, p: u128) -> u128 {
    let g = BigInt::from(a).extended_gcd(&BigInt::from(p));
    g.x.mod_floor(&BigInt::from(p)).to_u128().expect("residue")
}

/// Glues the per-prime automorphisms into a matrix on the canonical
/// torsion coordinates via the Chinese remainder theorem.
fn assemble_torsion_map(divisors: &[u128], blocks: &[(PrimePart, Vec<Vec<u128>>)]) -> IntMatrix {
    let m = divisors.len();
    let mut psi = IntMatrix::zeros(m, m);
    for b in 0..m {
        for bp in 0..m {
            let mut residues: Vec<(BigInt, BigInt)> = Vec::new();
            for (part, mat) in blocks {
                let Some(row) = part.factors.iter().position(|&(i, _)| i == bp) else {
                    continue;
                };
                let q = part.moduli[row];
                let value = match part.factors.iter().position(|&(i, _)| i == b) {
                    Some(col) => mat[row][col] % q,
                    None => 0,
                };
                residues.push((BigInt::from(value), BigInt::from(q)));
            }
            psi[(bp, b)] = crt(&residues);
        }
    }
    psi
}

fn crt(residues: &[(BigInt, BigInt)]) -> BigInt {
    let mut x = BigInt::zero();
    let mut modulus = BigInt::from(1);
    for (a, q) in residues {
        // x + modulus * t ≡ a (mod q)
        let g = modulus.extended_gcd(q);
        let t = ((a - &x) * g.x).mod_floor(q);
        x += &modulus * t;
        modulus *= q;
        x = x.mod_floor(&modulus);
    }
    x
}

/// Reporting form of a marked group: invariants plus mark coordinates with
/// the free parts brought to Hermite form and torsion reduced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedDisplay {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
    pub marks: Vec<IntVector>,
}

pub fn canonical_marked_display(mg: &MarkedGroup) -> MarkedDisplay {
    let g = &mg.group;
    let r = g.free_rank();
    let mut marks = mg.canonical_marks();
    let free = IntMatrix::from_fn(r, marks.len(), |i, j| marks[j][i].clone());
    let h = hnf_rows(&free).h;
    for (j, mark) in marks.iter_mut().enumerate() {
        for i in 0..r {
            mark[i] = h[(i, j)].clone();
        }
    }
    MarkedDisplay {
        free_rank: r,
        torsion: g.torsion().to_vec(),
        marks,
    }
}

impl fmt::Display for MarkedDisplay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() && self.marks.is_empty() {
            return Ok(());
        }
        let group = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
        write!(f, "({group}")?;
        for (i, m) in self.marks.iter().enumerate() {
            let sep = if i == 0 { "; " } else { ", " };
            let coords: Vec<String> = m.iter().map(ToString::to_string).collect();
            match coords.len() {
                0 => write!(f, "{sep}0")?,
                1 => write!(f, "{sep}{}", coords[0])?,
                _ => write!(f, "{sep}({})", coords.join(", "))?,
            }
        }
        write!(f, ")")
    }
}
