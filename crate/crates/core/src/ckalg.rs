//! Cuntz–Krieger specific data: validation of the defining 0-1 matrix, the
//! auxiliary matrices `Â` and `A₁`, the invariant groups and every named
//! homomorphism between them.
//!
//! Orientation: an input matrix `A` yields the invariants of `O_{Aᵗ}` and
//! `T_{Aᵗ}` (so `K₀(T_{Aᵗ}) = Z^{N+1}/(I − A₁)`). Transpose first to talk
//! about `T_A`.

use std::collections::VecDeque;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fgab::{
    cokernel, element_eq, hom, subquotient, Element, FgAbGroup, Group, GroupHom, MarkedGroup, Subquotient,
};
use crate::intmat::{kernel_basis, ColumnLattice, IntMatrix, IntVector};

/// A square 0-1 matrix that is irreducible and not a permutation matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CkMatrix {
    matrix: IntMatrix,
}

impl CkMatrix {
    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn transpose(&self) -> CkMatrix {
        CkMatrix {
            matrix: self.matrix.transpose(),
        }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<CkMatrix> {
        if rows.iter().any(|r| r.len() != rows.len()) {
            return Err(Error::NotSquare {
                rows: rows.len(),
                cols: rows.iter().map(Vec::len).max().unwrap_or(0),
            });
        }
        validate(&IntMatrix::from_rows(rows))
    }

    /// Rows as 0/1 bytes.
    pub fn to_bits(&self) -> Vec<Vec<u8>> {
        (0..self.n())
            .map(|i| self.matrix.row(i).iter().map(|x| u8::from(x.is_one())).collect())
            .collect()
    }
}

/// Checks, in this order: square, entries in {0,1}, irreducible, not a
/// permutation matrix.
pub fn validate(m: &IntMatrix) -> Result<CkMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n == 0 {
        return Err(Error::Empty);
    }
    for i in 0..n {
        for j in 0..n {
            let v = &m[(i, j)];
            if !v.is_zero() && !v.is_one() {
                return Err(Error::NotZeroOne {
                    row: i,
                    col: j,
                    value: v.to_string(),
                });
            }
        }
    }
    if let Some((from, to)) = unreachable_pair(m) {
        return Err(Error::NotIrreducible { from, to });
    }
    let is_perm = (0..n).all(|i| {
        let row_sum: BigInt = m.row(i).iter().sum();
        let col_sum: BigInt = (0..n).map(|k| &m[(k, i)]).sum();
        row_sum.is_one() && col_sum.is_one()
    });
    if is_perm {
        return Err(Error::IsPermutation);
    }
    Ok(CkMatrix { matrix: m.clone() })
}

/// Finds `(i, j)` with no path of positive length from `i` to `j`. Paths are
/// only searched from and to vertex 0, which suffices.
fn unreachable_pair(m: &IntMatrix) -> Option<(usize, usize)> {
    let n = m.rows();
    let edge = |i: usize, j: usize| m[(i, j)].is_one();
    let reach = |forward: bool| -> Vec<bool> {
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for (w, s) in seen.iter_mut().enumerate() {
                let e = if forward { edge(v, w) } else { edge(w, v) };
                if e && !*s {
                    *s = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    };
    if let Some(j) = reach(true).iter().position(|&s| !s) {
        return Some((0, j));
    }
    reach(false).iter().position(|&s| !s).map(|i| (i, 0))
}

/// `R₁`: first row all ones, zero elsewhere.
pub fn r_one(n: usize) -> IntMatrix {
    IntMatrix::from_fn(n, n, |i, _| if i == 0 { BigInt::one() } else { BigInt::zero() })
}

/// `Â = A + R₁ − A R₁`.
pub fn a_hat(a: &CkMatrix) -> IntMatrix {
    let r1 = r_one(a.n());
    a.matrix.add(&r1).sub(&(&a.matrix * &r1))
}

/// `A₁`: first row all ones, first column zero below it, `A` in the
/// lower-right block.
pub fn a_one(a: &CkMatrix) -> IntMatrix {
    let n = a.n();
    IntMatrix::from_fn(n + 1, n + 1, |i, j| match (i, j) {
        (0, _) => BigInt::one(),
        (_, 0) => BigInt::zero(),
        _ => a.matrix[(i - 1, j - 1)].clone(),
    })
}

fn i_minus(m: &IntMatrix) -> IntMatrix {
    IntMatrix::identity(m.rows()).sub(m)
}

fn ones(n: usize) -> IntVector {
    vec![BigInt::one(); n]
}

fn unit(n: usize, i: usize) -> IntVector {
    let mut v = vec![BigInt::zero(); n];
    v[i] = BigInt::one();
    v
}

/// Coordinates of each column of `m` in the lattice basis `basis`.
fn coords_in(basis: &ColumnLattice, m: &IntMatrix, what: &str) -> Result<IntMatrix> {
    let cols = m
        .columns()
        .iter()
        .map(|c| {
            basis
                .solve(c)?
                .ok_or_else(|| Error::Consistency(format!("{what}: vector outside the target lattice")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IntMatrix::from_columns(basis.generators().cols(), &cols))
}

/// A free subgroup of `Z^N` with a chosen lattice basis; its group
/// coordinates are coefficients in that basis.
#[derive(Clone, Debug)]
pub struct Sublattice {
    pub group: Group,
    /// Columns span the sublattice inside `Z^N`.
    pub basis: IntMatrix,
}

impl Sublattice {
    fn new(basis: IntMatrix) -> Self {
        Sublattice {
            group: FgAbGroup::free(basis.cols()),
            basis,
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }
}

/// All groups and maps attached to one matrix `A`.
#[derive(Clone, Debug)]
pub struct CkComplex {
    pub a: CkMatrix,
    pub a_hat: IntMatrix,
    pub a_one: IntMatrix,
    pub z: Group,
    /// `Z^N / (I − A)`.
    pub ext_w: Group,
    /// `Z^N / (I − Â)`.
    pub ext_s: Group,
    /// `Z^{N+1} / (I − A₁)`.
    pub k0_toeplitz: Group,
    /// `Ker(I − A)`.
    pub ker_a: Sublattice,
    /// `Ker(I − Â)`.
    pub ker_a_hat: Sublattice,
    /// `Ker(I − Â) / i₁(Z)`, on the coordinates of `ker_a_hat`.
    pub ker_a_hat_mod_i1: Subquotient,
    /// `Ker(s_A)`, on coordinates relative to the basis of `ker_a`.
    pub ker_s: Sublattice,
    pub i1: GroupHom,
    /// `j_A` on `Ker(I − Â)`.
    pub j_a_raw: GroupHom,
    /// `j_A` induced on `Ker(I − Â) / i₁(Z)`.
    pub j_a: GroupHom,
    pub s_a: GroupHom,
    pub iota_hat: GroupHom,
    pub q_hat: GroupHom,
    pub iota_a1: GroupHom,
    pub q_a1: GroupHom,
    pub iota_s: GroupHom,
    pub xi0: GroupHom,
    /// `ξ̃⁰`: `j_A` viewed as a map into `Ker(s_A)`.
    pub xi0_tilde: GroupHom,
}

impl CkComplex {
    pub fn new(a: &CkMatrix) -> Result<Self> {
        let n = a.n();
        let ah = a_hat(a);
        let a1 = a_one(a);
        let i_a = i_minus(&a.matrix);
        let i_ah = i_minus(&ah);
        let i_a1 = i_minus(&a1);

        let z = FgAbGroup::free(1);
        let ext_w = cokernel(&i_a);
        let ext_s = cokernel(&i_ah);
        let k0_toeplitz = cokernel(&i_a1);

        let ker_a = Sublattice::new(kernel_basis(&i_a));
        let ker_a_hat = Sublattice::new(kernel_basis(&i_ah));
        let ker_a_lat = ColumnLattice::new(ker_a.basis.clone());
        let ker_a_hat_lat = ColumnLattice::new(ker_a_hat.basis.clone());

        let e1 = IntMatrix::from_columns(n, &[unit(n, 0)]);
        let i1_coords = coords_in(&ker_a_hat_lat, &e1, "i_1(1) = e_1 in Ker(I - Â)")?;
        let i1 = hom(&z, &ker_a_hat.group, i1_coords.clone())?;

        let ker_a_hat_mod_i1 = subquotient(&IntMatrix::identity(ker_a_hat.rank()), &i1_coords)?;

        // j_A(l) = (-(l_2 + ... + l_N), l_2, ..., l_N) = (I - R₁) l
        let j_ambient = &i_minus(&r_one(n)) * &ker_a_hat.basis;
        let j_coords = coords_in(&ker_a_lat, &j_ambient, "j_A lands in Ker(I - A)")?;
        let j_a_raw = hom(&ker_a_hat.group, &ker_a.group, j_coords.clone())?;
        let j_a = hom(&ker_a_hat_mod_i1.group, &ker_a.group, j_coords.clone())?;

        let sum_row = IntMatrix::from_fn(1, n, |_, _| BigInt::one());
        let s_matrix = &sum_row * &ker_a.basis;
        let s_a = hom(&ker_a.group, &z, s_matrix.clone())?;

        let ker_s = Sublattice::new(kernel_basis(&s_matrix));
        let ker_s_lat = ColumnLattice::new(ker_s.basis.clone());
        let iota_s = hom(&ker_s.group, &ker_a.group, ker_s.basis.clone())?;
        let xi0_tilde_coords = coords_in(&ker_s_lat, &j_coords, "j_A lands in Ker(s_A)")?;
        let xi0_tilde = hom(&ker_a_hat_mod_i1.group, &ker_s.group, xi0_tilde_coords)?;

        let iota_col = i_a.mul_vec(&unit(n, 0));
        let iota_hat = hom(&z, &ext_s, IntMatrix::from_columns(n, std::slice::from_ref(&iota_col)))?;
        let q_hat = hom(&ext_s, &ext_w, IntMatrix::identity(n))?;

        let mut iota_a1_col = vec![BigInt::zero()];
        iota_a1_col.extend(iota_col);
        let iota_a1 = hom(&z, &k0_toeplitz, IntMatrix::from_columns(n + 1, &[iota_a1_col]))?;
        let drop_first = IntMatrix::from_fn(n, n + 1, |i, j| if j == i + 1 { BigInt::one() } else { BigInt::zero() });
        let q_a1 = hom(&k0_toeplitz, &ext_w, drop_first.clone())?;
        let xi0 = hom(&ext_s, &k0_toeplitz, drop_first.transpose())?;

        Ok(CkComplex {
            a: a.clone(),
            a_hat: ah,
            a_one: a1,
            z,
            ext_w,
            ext_s,
            k0_toeplitz,
            ker_a,
            ker_a_hat,
            ker_a_hat_mod_i1,
            ker_s,
            i1,
            j_a_raw,
            j_a,
            s_a,
            iota_hat,
            q_hat,
            iota_a1,
            q_a1,
            iota_s,
            xi0,
            xi0_tilde,
        })
    }

    pub fn n(&self) -> usize {
        self.a.n()
    }

    /// `[1_N]` in `Z^N / (I − A)`.
    pub fn unit_class_w(&self) -> Element {
        Element::new(&self.ext_w, ones(self.n())).expect("length N")
    }

    /// `[1_N]` in `Z^N / (I − Â)`.
    pub fn unit_class_s(&self) -> Element {
        Element::new(&self.ext_s, ones(self.n())).expect("length N")
    }

    /// `[1_{N+1}]` in `Z^{N+1} / (I − A₁)`.
    pub fn unit_class_toeplitz(&self) -> Element {
        Element::new(&self.k0_toeplitz, ones(self.n() + 1)).expect("length N+1")
    }

    /// `[e₀]` in `Z^{N+1} / (I − A₁)`.
    pub fn e0_class(&self) -> Element {
        Element::new(&self.k0_toeplitz, unit(self.n() + 1, 0)).expect("length N+1")
    }

    /// `ι̂_A(m)`.
    pub fn iota_hat_of(&self, m: i64) -> Element {
        self.iota_hat
            .apply(&Element::new(&self.z, vec![BigInt::from(m)]).expect("Z element"))
            .expect("source is Z")
    }

    /// `[T_A]_w = −[1_N]`.
    pub fn weak_class(&self) -> Element {
        self.unit_class_w().neg()
    }

    /// `[T_A]_s = −ι̂_A(1) − [1_N]`, with representative `−(I − A)e₁ − 1_N`.
    pub fn strong_class(&self) -> Element {
        self.iota_hat_of(1)
            .add(&self.unit_class_s())
            .expect("same group")
            .neg()
    }

    pub fn invariants(&self) -> Result<CkInvariants> {
        Ok(CkInvariants {
            ext_w: MarkedGroup::from_elements(&self.ext_w, &[self.weak_class()])?,
            ext_s: MarkedGroup::from_elements(&self.ext_s, &[self.strong_class()])?,
            k0_toeplitz: MarkedGroup::from_elements(
                &self.k0_toeplitz,
                &[self.e0_class(), self.unit_class_toeplitz()],
            )?,
            k1_toeplitz: Arc::clone(&self.ker_s.group),
            k0_ck: MarkedGroup::from_elements(&self.ext_w, &[self.unit_class_w()])?,
            k1_ck: Arc::clone(&self.ker_a.group),
        })
    }
}

/// The six invariant groups of `A` with their distinguished elements.
#[derive(Clone, Debug)]
pub struct CkInvariants {
    /// `Z^N/(I − A)` marked by `[T_A]_w = −[1_N]`.
    pub ext_w: MarkedGroup,
    /// `Z^N/(I − Â)` marked by `[T_A]_s = −ι̂_A(1) − [1_N]`.
    pub ext_s: MarkedGroup,
    /// `K₀(T_{Aᵗ}) = Z^{N+1}/(I − A₁)` marked by `[e₀]`, `[1_{N+1}]`.
    pub k0_toeplitz: MarkedGroup,
    /// `K₁(T_{Aᵗ}) = Ker(s_A)`.
    pub k1_toeplitz: Group,
    /// `K₀(O_{Aᵗ}) = Z^N/(I − A)` marked by `[1_N]`.
    pub k0_ck: MarkedGroup,
    /// `K₁(O_{Aᵗ}) = Ker(I − A)`.
    pub k1_ck: Group,
}

pub fn invariants(a: &CkMatrix) -> Result<CkInvariants> {
    CkComplex::new(a)?.invariants()
}

/// `ι̂_A(m)` as an element of `Z^N / (I − Â)`.
pub fn iota_hat(a: &CkMatrix, m: i64) -> Result<Element> {
    Ok(CkComplex::new(a)?.iota_hat_of(m))
}

/// `(i₁, j_A, s_A)`.
pub fn maps_ijs(a: &CkMatrix) -> Result<(GroupHom, GroupHom, GroupHom)> {
    let c = CkComplex::new(a)?;
    Ok((c.i1, c.j_a, c.s_a))
}

/// `(ι_{A₁}, q_{A₁}, ι_{s_A})`.
pub fn maps_a1(a: &CkMatrix) -> Result<(GroupHom, GroupHom, GroupHom)> {
    let c = CkComplex::new(a)?;
    Ok((c.iota_a1, c.q_a1, c.iota_s))
}

/// The conjugating matrices `U`, `V` with `U (I − A₁) V = 1 ⊕ (I − Â)`.
pub fn conjugators(a: &CkMatrix) -> (IntMatrix, IntMatrix) {
    let n = a.n();
    let mut u = IntMatrix::identity(n + 1);
    for i in 0..n {
        u[(i + 1, 0)] = BigInt::from(i64::from(i == 0)) - &a.matrix[(i, 0)];
    }
    let mut v = IntMatrix::zeros(n + 1, n + 1);
    v[(0, 1)] = BigInt::one();
    for j in 0..=n {
        if j != 1 {
            v[(1, j)] = -BigInt::one();
        }
    }
    for i in 2..=n {
        v[(i, i)] = BigInt::one();
    }
    (u, v)
}

/// `ξ⁰` together with `U`, `V`, after checking every identity that makes it
/// an isomorphism carrying `ι̂_A(1) + [1_N]` to `[1_{N+1}]`. A failed check
/// is reported as [`Error::Consistency`].
pub fn xi0(a: &CkMatrix) -> Result<(GroupHom, IntMatrix, IntMatrix)> {
    let c = CkComplex::new(a)?;
    let (u, v) = conjugators(a);
    let n = a.n();
    if !u.is_unimodular() || !v.is_unimodular() {
        return Err(Error::Consistency("U or V is not unimodular".into()));
    }
    let lhs = &(&u * &i_minus(&c.a_one)) * &v;
    let i_ah = i_minus(&c.a_hat);
    let rhs = IntMatrix::from_fn(n + 1, n + 1, |i, j| match (i, j) {
        (0, 0) => BigInt::one(),
        (0, _) | (_, 0) => BigInt::zero(),
        _ => i_ah[(i - 1, j - 1)].clone(),
    });
    if lhs != rhs {
        return Err(Error::Consistency(format!(
            "U (I - A1) V = {lhs} differs from 1 + (I - Â) = {rhs}"
        )));
    }
    let image = c.xi0.image();
    let onto = (0..=n).all(|i| image.contains(&unit(n + 1, i)));
    let same_invariants =
        c.ext_s.free_rank() == c.k0_toeplitz.free_rank() && c.ext_s.torsion() == c.k0_toeplitz.torsion();
    if !onto || !same_invariants {
        return Err(Error::Consistency("ξ⁰ is not an isomorphism".into()));
    }
    let lifted = c.xi0.apply(&c.iota_hat_of(1).add(&c.unit_class_s())?)?;
    if !element_eq(&lifted, &c.unit_class_toeplitz())? {
        return Err(Error::Consistency("ξ⁰(ι̂_A(1) + [1_N]) != [1_{N+1}]".into()));
    }
    Ok((c.xi0, u, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intmat::ivec;

    fn ck(rows: &[&[i64]]) -> CkMatrix {
        CkMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    fn golden() -> CkMatrix {
        ck(&[&[1, 1], &[1, 0]])
    }

    #[test]
    fn validation_order() {
        assert!(validate(&m(&[&[1, 1], &[1, 0]])).is_ok());
        assert_eq!(validate(&m(&[&[0, 1], &[1, 0]])), Err(Error::IsPermutation));
        assert!(matches!(
            validate(&m(&[&[1, 0], &[0, 1]])),
            Err(Error::NotIrreducible { .. })
        ));
        assert!(matches!(
            validate(&m(&[&[2, 0], &[0, 1]])),
            Err(Error::NotZeroOne { row: 0, col: 0, .. })
        ));
        assert!(matches!(validate(&m(&[&[1, 1]])), Err(Error::NotSquare { .. })));
        assert!(matches!(validate(&m(&[&[0]])), Err(Error::NotIrreducible { .. })));
        assert_eq!(validate(&m(&[&[1]])), Err(Error::IsPermutation));
    }

    #[test]
    fn a_hat_examples() {
        assert_eq!(a_hat(&golden()), m(&[&[1, 1], &[0, -1]]));
        assert_eq!(i_minus(&a_hat(&golden())), m(&[&[0, -1], &[0, 2]]));
        assert_eq!(a_hat(&ck(&[&[1, 1], &[1, 1]])), m(&[&[1, 1], &[0, 0]]));
    }

    #[test]
    fn a_hat_first_column_in_kernel() {
        for a in [golden(), ck(&[&[1, 1, 1], &[1, 1, 1], &[1, 0, 0]])] {
            let v = i_minus(&a_hat(&a)).mul_vec(&unit(a.n(), 0));
            assert!(v.iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn a_one_example() {
        let a1 = a_one(&golden());
        assert_eq!(a1, m(&[&[1, 1, 1], &[0, 1, 1], &[0, 1, 0]]));
        assert_eq!(a1.row(0).iter().sum::<BigInt>(), BigInt::from(3));
        assert_eq!(a1.block(1, 3, 1, 3), *golden().matrix());
    }

    #[test]
    fn iota_hat_examples() {
        let c = CkComplex::new(&golden()).unwrap();
        assert_eq!(c.iota_hat_of(1).rep(), &ivec(&[0, -1])[..]);
        assert!(c.iota_hat_of(0).is_zero());
        // k = (1,0) and k = (0,1) both realise m = 1
        let other = Element::new(&c.ext_s, i_minus(c.a.matrix()).mul_vec(&ivec(&[0, 1]))).unwrap();
        assert!(element_eq(&c.iota_hat_of(1), &other).unwrap());
    }

    #[test]
    fn ijs_examples() {
        let c = CkComplex::new(&golden()).unwrap();
        // i_1(1) = e_1, which spans Ker(I - Â) here
        assert_eq!(c.ker_a_hat.basis, m(&[&[1], &[0]]));
        assert_eq!(c.i1.matrix(), &m(&[&[1]]));
        assert!(c.i1.then(&c.j_a_raw).unwrap().is_zero());

        let b = CkComplex::new(&ck(&[&[0, 1, 1], &[1, 1, 0], &[1, 0, 1]])).unwrap();
        assert_eq!(b.ker_a.basis, m(&[&[0], &[1], &[-1]]));
        assert!(b.s_a.is_zero());
    }

    #[test]
    fn a1_maps_examples() {
        let c = CkComplex::new(&golden()).unwrap();
        let one = Element::new(&c.z, ivec(&[1])).unwrap();
        let img = c.iota_a1.apply(&one).unwrap();
        assert_eq!(img.rep(), &ivec(&[0, 0, -1])[..]);
        assert!(element_eq(&img, &c.e0_class()).unwrap());
        assert!(c.q_a1.apply(&c.e0_class()).unwrap().is_zero());
        assert!(element_eq(&c.q_a1.apply(&c.unit_class_toeplitz()).unwrap(), &c.unit_class_w()).unwrap());
    }

    #[test]
    fn xi0_golden() {
        let (h, u, v) = xi0(&golden()).unwrap();
        assert_eq!(u, m(&[&[1, 0, 0], &[0, 1, 0], &[-1, 0, 1]]));
        assert_eq!(v, m(&[&[0, 1, 0], &[-1, 0, -1], &[0, 0, 1]]));
        let a1 = a_one(&golden());
        assert_eq!(&(&u * &i_minus(&a1)) * &v, m(&[&[1, 0, 0], &[0, 0, -1], &[0, 0, 2]]));
        let c = CkComplex::new(&golden()).unwrap();
        let x = Element::new(&c.ext_s, ivec(&[1, 0])).unwrap();
        assert!(element_eq(&h.apply(&x).unwrap(), &c.unit_class_toeplitz()).unwrap());
    }

    #[test]
    fn golden_invariants() {
        let inv = invariants(&golden()).unwrap();
        assert!(inv.ext_w.group().is_trivial());
        assert_eq!(inv.ext_s.group().free_rank(), 1);
        assert!(inv.ext_s.group().torsion().is_empty());
        assert_eq!(inv.k0_toeplitz.group().free_rank(), 1);
        assert_eq!(inv.k1_ck.free_rank(), 0);
        assert_eq!(inv.k1_toeplitz.free_rank(), 0);
    }
}
