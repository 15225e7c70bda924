#![allow(dead_code)]

use std::collections::HashSet;

use ckdual::ckalg::CkMatrix;
use ckdual::fgab::{cokernel, exact_at, hom, pointed_iso_exists, Group, MarkedGroup, SearchConfig};
use ckdual::intmat::{hnf_rows, snf, IntMatrix};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;

pub fn ck(rows: &[&[i64]]) -> CkMatrix {
    CkMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

pub fn imat(rows: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_rows(rows)
}

pub struct Reference {
    pub b: CkMatrix,
    pub b_minus: CkMatrix,
    pub f: CkMatrix,
    pub c: CkMatrix,
    pub d: CkMatrix,
    pub a: CkMatrix,
}

pub fn reference() -> Reference {
    Reference {
        b: ck(&[&[1, 1], &[1, 1]]),
        b_minus: ck(&[&[1, 1, 0, 0], &[1, 1, 1, 0], &[0, 1, 1, 1], &[0, 0, 1, 1]]),
        f: ck(&[&[1, 1], &[1, 0]]),
        c: ck(&[&[1, 1, 1], &[1, 1, 1], &[1, 0, 1]]),
        d: ck(&[&[0, 1, 1], &[1, 1, 1], &[1, 0, 1]]),
        a: ck(&[&[1, 1, 1], &[1, 1, 1], &[1, 0, 0]]),
    }
}

/// Result line in the format the acceptance target prints.
pub fn report_line(pass: bool, what: &str) {
    println!("[{}] {what}", if pass { "PASS" } else { "FAIL" });
}

// ---------------------------------------------------------------------------
// Brute-force oracle for finite groups, in plain i64 arithmetic.

/// `Z^n / L` for a full-rank lattice `L`, stored as an upper-triangular row
/// basis with positive pivots.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    pub n: usize,
    pub relations: Vec<Vec<i64>>,
    basis: Vec<Vec<i64>>,
}

fn gcd_ext(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = gcd_ext(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

impl FiniteGroup {
    /// `relations` are the columns of an `n × k` matrix. `None` when the
    /// quotient is infinite.
    pub fn new(n: usize, relations: Vec<Vec<i64>>) -> Option<Self> {
        let mut rows: Vec<Vec<i64>> = relations.clone();
        let mut basis = Vec::new();
        for col in 0..n {
            // combine every row with a nonzero entry in `col` into one pivot row
            let mut pivot: Option<Vec<i64>> = None;
            let mut rest = Vec::new();
            for r in rows.drain(..) {
                if r[col] == 0 {
                    rest.push(r);
                    continue;
                }
                match pivot.take() {
                    None => pivot = Some(r),
                    Some(p) => {
                        let (g, x, y) = gcd_ext(p[col], r[col]);
                        let (pa, ra) = (p[col] / g, r[col] / g);
                        let new_p: Vec<i64> = (0..n).map(|j| x * p[j] + y * r[j]).collect();
                        let other: Vec<i64> = (0..n).map(|j| ra * p[j] - pa * r[j]).collect();
                        pivot = Some(new_p);
                        if other.iter().any(|&v| v != 0) {
                            rest.push(other);
                        }
                    }
                }
            }
            let mut p = pivot?;
            if p[col] < 0 {
                p.iter_mut().for_each(|v| *v = -*v);
            }
            basis.push(p);
            rows = rest;
        }
        Some(FiniteGroup { n, relations, basis })
    }

    pub fn order(&self) -> i64 {
        self.basis.iter().enumerate().map(|(i, r)| r[i]).product()
    }

    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        let mut v = v.to_vec();
        for (i, row) in self.basis.iter().enumerate() {
            let q = v[i].div_euclid(row[i]);
            if q != 0 {
                for j in i..self.n {
                    v[j] -= q * row[j];
                }
            }
        }
        v
    }

    pub fn elements(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![]];
        for i in 0..self.n {
            let d = self.basis[i][i];
            out = out
                .into_iter()
                .flat_map(|p: Vec<i64>| {
                    (0..d).map(move |x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        out
    }

    pub fn is_zero(&self, v: &[i64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn to_group(&self) -> Group {
        let k = self.relations.len();
        cokernel(&IntMatrix::from_fn(self.n, k, |i, j| BigInt::from(self.relations[j][i])))
    }
}

pub fn apply(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// `m` (rows) defines a map `src → tgt` on representatives.
pub fn well_defined(m: &[Vec<i64>], src: &FiniteGroup, tgt: &FiniteGroup) -> bool {
    src.relations.iter().all(|r| tgt.is_zero(&apply(m, r)))
}

/// Exhaustive search over images of the generators of `g`.
pub fn brute_pointed_iso(g: &FiniteGroup, ma: &[Vec<i64>], h: &FiniteGroup, mb: &[Vec<i64>]) -> bool {
    if g.order() != h.order() || ma.len() != mb.len() {
        return false;
    }
    let targets = h.elements();
    let n = g.n;
    let mut choice = vec![0usize; n];
    loop {
        // columns of the candidate map are the chosen images
        let m: Vec<Vec<i64>> = (0..h.n).map(|i| (0..n).map(|j| targets[choice[j]][i]).collect()).collect();
        if well_defined(&m, g, h)
            && ma.iter().zip(mb).all(|(a, b)| h.reduce(&apply(&m, a)) == h.reduce(b))
        {
            let image: HashSet<Vec<i64>> = g.elements().iter().map(|x| h.reduce(&apply(&m, x))).collect();
            if image.len() as i64 == h.order() {
                return true;
            }
        }
        let mut k = 0;
        loop {
            if k == n {
                return false;
            }
            choice[k] += 1;
            if choice[k] < targets.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

pub fn brute_exact(f: &[Vec<i64>], src: &FiniteGroup, mid: &FiniteGroup, g: &[Vec<i64>], tgt: &FiniteGroup) -> bool {
    let image: HashSet<Vec<i64>> = src.elements().iter().map(|x| mid.reduce(&apply(f, x))).collect();
    let kernel: HashSet<Vec<i64>> = mid.elements().into_iter().filter(|y| tgt.is_zero(&apply(g, y))).collect();
    image == kernel
}

fn to_big(m: &[Vec<i64>], rows: usize, cols: usize) -> IntMatrix {
    IntMatrix::from_fn(rows, cols, |i, j| BigInt::from(m[i][j]))
}

fn random_unimodular(rng: &mut impl Rng, n: usize) -> Vec<Vec<i64>> {
    let mut u: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    for _ in 0..3 * n {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a == b {
            u[a].iter_mut().for_each(|v| *v = -*v);
        } else {
            let k = rng.gen_range(-2..=2);
            let src = u[b].clone();
            u[a].iter_mut().zip(src).for_each(|(x, y)| *x += k * y);
        }
    }
    u
}

fn transpose(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    if m.is_empty() {
        return vec![];
    }
    (0..m[0].len()).map(|j| m.iter().map(|r| r[j]).collect()).collect()
}

/// A random finite group of ambient rank `n` and order at most `max_order`.
pub fn random_finite(rng: &mut impl Rng, n: usize, max_order: i64) -> FiniteGroup {
    loop {
        let k = n + rng.gen_range(0..2);
        let rels: Vec<Vec<i64>> = (0..k).map(|_| (0..n).map(|_| rng.gen_range(-6..=6)).collect()).collect();
        if let Some(g) = FiniteGroup::new(n, rels) {
            if g.order() <= max_order {
                return g;
            }
        }
    }
}

pub struct OracleTally {
    pub cases: usize,
    pub agree: usize,
    pub yes: usize,
    pub disagreements: Vec<String>,
}

/// Pointed-isomorphism decisions against the brute-force search.
pub fn pointed_iso_oracle_cases(rng: &mut impl Rng, cases: usize) -> OracleTally {
    let cfg = SearchConfig::default();
    let mut tally = OracleTally {
        cases: 0,
        agree: 0,
        yes: 0,
        disagreements: vec![],
    };
    while tally.cases < cases {
        let n = rng.gen_range(1..=3);
        let max = if n == 3 { 30 } else { 200 };
        let g = random_finite(rng, n, max);
        let marks_n = rng.gen_range(1..=2);
        let ma: Vec<Vec<i64>> = (0..marks_n).map(|_| (0..n).map(|_| rng.gen_range(-4..=4)).collect()).collect();
        let (h, mb) = if rng.gen_bool(0.8) {
            // an isomorphic presentation U R V, marks pushed through U
            let u = random_unimodular(rng, n);
            let v = random_unimodular(rng, g.relations.len());
            let ur: Vec<Vec<i64>> = g.relations.iter().map(|r| apply(&u, r)).collect();
            let urv_cols: Vec<Vec<i64>> = transpose(&v)
                .iter()
                .map(|vc| (0..n).map(|i| ur.iter().zip(vc).map(|(c, w)| c[i] * w).sum()).collect())
                .collect();
            let h = FiniteGroup::new(n, urv_cols).expect("same lattice rank");
            let mut mb: Vec<Vec<i64>> = ma.iter().map(|a| apply(&u, a)).collect();
            if rng.gen_bool(0.5) {
                let t = rng.gen_range(0..mb.len());
                mb[t] = (0..n).map(|_| rng.gen_range(-4..=4)).collect();
            }
            (h, mb)
        } else {
            let h = random_finite(rng, n, max);
            let mb = (0..marks_n).map(|_| (0..n).map(|_| rng.gen_range(-4..=4)).collect()).collect();
            (h, mb)
        };
        let expected = brute_pointed_iso(&g, &ma, &h, &mb);
        let a = MarkedGroup::new(&g.to_group(), ma.iter().map(|m| m.iter().map(|&x| BigInt::from(x)).collect()).collect())
            .unwrap();
        let b = MarkedGroup::new(&h.to_group(), mb.iter().map(|m| m.iter().map(|&x| BigInt::from(x)).collect()).collect())
            .unwrap();
        let got = pointed_iso_exists(&a, &b, &cfg).unwrap();
        tally.cases += 1;
        tally.yes += usize::from(expected);
        if !got.is_unknown() && got.is_yes() == expected {
            tally.agree += 1;
        } else {
            tally.disagreements.push(format!(
                "G rels {:?} marks {:?} vs H rels {:?} marks {:?}: oracle {expected}, got {}",
                g.relations,
                ma,
                h.relations,
                mb,
                got.label()
            ));
        }
    }
    tally
}

/// `exact_at` against set-level image and kernel comparison.
pub fn exactness_oracle_cases(rng: &mut impl Rng, cases: usize) -> OracleTally {
    let mut tally = OracleTally {
        cases: 0,
        agree: 0,
        yes: 0,
        disagreements: vec![],
    };
    while tally.cases < cases {
        let n = rng.gen_range(1..=2);
        let mid = random_finite(rng, n, 200);
        let m = rng.gen_range(1..=2);
        let g_map: Vec<Vec<i64>> = (0..m).map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        // target relations contain g(R_mid), so g is well defined
        let d = rng.gen_range(1..=6);
        let mut trels: Vec<Vec<i64>> = mid.relations.iter().map(|r| apply(&g_map, r)).collect();
        trels.extend((0..m).map(|i| (0..m).map(|j| if i == j { d } else { 0 }).collect()));
        let Some(tgt) = FiniteGroup::new(m, trels) else { continue };
        if tgt.order() > 200 {
            continue;
        }
        // |mid| kills mid, so any f out of (Z/|mid|)^k is well defined
        let e = mid.order();
        let k = if e <= 14 { rng.gen_range(1..=2) } else { 1 };
        let src = FiniteGroup::new(k, (0..k).map(|i| (0..k).map(|j| if i == j { e } else { 0 }).collect()).collect())
            .unwrap();
        let kernel: Vec<Vec<i64>> = mid.elements().into_iter().filter(|y| tgt.is_zero(&apply(&g_map, y))).collect();
        let f_cols: Vec<Vec<i64>> = (0..k)
            .map(|_| {
                if rng.gen_bool(0.7) {
                    kernel[rng.gen_range(0..kernel.len())].clone()
                } else {
                    (0..n).map(|_| rng.gen_range(-3..=3)).collect()
                }
            })
            .collect();
        let f_map = transpose(&f_cols);
        let expected = brute_exact(&f_map, &src, &mid, &g_map, &tgt);
        let (gs, gm, gt) = (src.to_group(), mid.to_group(), tgt.to_group());
        let f = hom(&gs, &gm, to_big(&f_map, n, k)).unwrap();
        let g = hom(&gm, &gt, to_big(&g_map, m, n)).unwrap();
        let got = exact_at(&f, &g).unwrap().is_exact();
        tally.cases += 1;
        tally.yes += usize::from(expected);
        if got == expected {
            tally.agree += 1;
        } else {
            tally.disagreements.push(format!("f {f_map:?} g {g_map:?} mid {:?}: oracle {expected}, got {got}", mid.relations));
        }
    }
    tally
}

// ---------------------------------------------------------------------------
// Normal form properties.

pub fn random_matrix(rng: &mut impl Rng, max_dim: usize, bound: i64) -> IntMatrix {
    let r = rng.gen_range(1..=max_dim);
    let c = rng.gen_range(1..=max_dim);
    let sparse = rng.gen_bool(0.3);
    IntMatrix::from_fn(r, c, |_, _| {
        if sparse && rng.gen_bool(0.6) {
            BigInt::zero()
        } else {
            BigInt::from(rng.gen_range(-bound..=bound))
        }
    })
}

pub fn random_unimodular_big(rng: &mut impl Rng, n: usize) -> IntMatrix {
    let u = random_unimodular(rng, n);
    to_big(&u, n, n)
}

/// Every Smith and Hermite property for `m`; `Err` names the first one
/// that fails.
pub fn check_normal_forms(m: &IntMatrix, u: &IntMatrix) -> Result<(), String> {
    let dec = snf(m);
    if &(&dec.s * m) * &dec.t != dec.d {
        return Err("S M T != D".into());
    }
    if !dec.s.is_unimodular() || !dec.t.is_unimodular() {
        return Err("S or T not unimodular".into());
    }
    if &dec.s * &dec.s_inv != IntMatrix::identity(m.rows()) {
        return Err("S S^-1 != I".into());
    }
    for i in 0..dec.d.rows() {
        for j in 0..dec.d.cols() {
            let v = &dec.d[(i, j)];
            if i != j && !v.is_zero() {
                return Err(format!("D off-diagonal at ({i}, {j})"));
            }
            if i == j && (v.is_negative() || (i < dec.rank) == v.is_zero()) {
                return Err(format!("D diagonal {v} at {i} with rank {}", dec.rank));
            }
        }
    }
    let divs = dec.divisors();
    for w in divs.windows(2) {
        if !(&w[1] % &w[0]).is_zero() {
            return Err(format!("divisor chain broken: {} then {}", w[0], w[1]));
        }
    }

    let hf = hnf_rows(m);
    if &hf.transform * m != hf.h {
        return Err("U M != H".into());
    }
    if !hf.transform.is_unimodular() {
        return Err("HNF transform not unimodular".into());
    }
    let h = &hf.h;
    let mut last_pivot: Option<usize> = None;
    let mut seen_zero = false;
    for i in 0..h.rows() {
        let p = (0..h.cols()).find(|&j| !h[(i, j)].is_zero());
        match p {
            None => seen_zero = true,
            Some(j) => {
                if seen_zero {
                    return Err("zero row before nonzero row".into());
                }
                if last_pivot.is_some_and(|lp| lp >= j) {
                    return Err("pivots not strictly increasing".into());
                }
                let piv = &h[(i, j)];
                if !piv.is_positive() {
                    return Err("pivot not positive".into());
                }
                for k in 0..i {
                    let above = &h[(k, j)];
                    if above.is_negative() || above >= piv {
                        return Err(format!("entry above pivot ({k}, {j}) not reduced"));
                    }
                }
                last_pivot = Some(j);
            }
        }
    }
    if hf.rank != (0..h.rows()).filter(|&i| h.row(i).iter().any(|x| !x.is_zero())).count() || hf.rank != dec.rank {
        return Err("rank disagreement".into());
    }
    if &hnf_rows(h).h != h {
        return Err("HNF not idempotent".into());
    }
    if hnf_rows(&(u * m)).h != *h {
        return Err("HNF changed under left unimodular multiplication".into());
    }
    Ok(())
}
