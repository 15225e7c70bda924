//! Finitely generated abelian groups given by presentations `Z^n / R Z^k`.
//!
//! A group keeps its ambient coordinates: elements are integer vectors of
//! length `n` compared modulo the relation lattice. The canonical
//! decomposition `Z^r + Z/d_1 + ... + Z/d_t` is computed once, at
//! construction, and is only a view.

mod pointed;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::intmat::{kernel_basis, ColumnLattice, IntMatrix, IntVector};

pub use pointed::{canonical_marked_display, pointed_iso_exists, MarkedDisplay, SearchConfig};

/// Shared handle to a group. Homomorphisms and elements point at groups
/// through this.
pub type Group = Arc<FgAbGroup>;

#[derive(Clone, Debug)]
pub struct FgAbGroup {
    lattice: ColumnLattice,
    free_rank: usize,
    torsion: Vec<BigInt>,
    to_canonical: IntMatrix,
    from_canonical: IntMatrix,
}

/// `Z^n / (column lattice of relations)`.
pub fn cokernel(relations: &IntMatrix) -> Group {
    Arc::new(FgAbGroup::new(relations.clone()))
}

impl FgAbGroup {
    pub fn new(relations: IntMatrix) -> Self {
        let lattice = ColumnLattice::new(relations);
        let dec = lattice.smith();
        let n = lattice.generators().rows();
        let torsion_idx: Vec<usize> = (0..dec.rank).filter(|&i| !dec.d[(i, i)].is_one()).collect();
        let mut order: Vec<usize> = (dec.rank..n).collect();
        order.extend(&torsion_idx);
        let to_canonical = dec.s.select_rows(&order);
        let from_canonical = dec.s_inv.select_columns(&order);
        let torsion = torsion_idx.iter().map(|&i| dec.d[(i, i)].clone()).collect();
        FgAbGroup {
            free_rank: n - dec.rank,
            torsion,
            to_canonical,
            from_canonical,
            lattice,
        }
    }

    /// Free abelian group `Z^n` (no relations).
    pub fn free(n: usize) -> Group {
        cokernel(&IntMatrix::zeros(n, 0))
    }

    pub fn trivial() -> Group {
        Self::free(0)
    }

    pub fn ambient_rank(&self) -> usize {
        self.lattice.generators().rows()
    }

    pub fn relations(&self) -> &IntMatrix {
        self.lattice.generators()
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    /// Torsion divisors `d_1 | d_2 | ...`, each at least 2.
    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    /// Number of canonical coordinates, `free_rank + torsion.len()`.
    pub fn canonical_dim(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn to_canonical(&self) -> &IntMatrix {
        &self.to_canonical
    }

    pub fn from_canonical(&self) -> &IntMatrix {
        &self.from_canonical
    }

    pub fn is_trivial(&self) -> bool {
        self.canonical_dim() == 0
    }

    /// Group order, or `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion_order())
    }

    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }

    /// Whether two handles denote the same presentation.
    pub fn same_as(&self, other: &FgAbGroup) -> bool {
        std::ptr::eq(self, other) || self.relations() == other.relations()
    }

    /// True iff `v` lies in the relation lattice, i.e. `[v] = 0`.
    pub fn is_relation(&self, v: &[BigInt]) -> bool {
        self.lattice.contains(v)
    }

    /// Canonical coordinates of `[v]`: free part exactly, torsion part
    /// reduced into `[0, d_i)`.
    pub fn canonical_coords(&self, v: &[BigInt]) -> IntVector {
        let mut c = self.to_canonical.mul_vec(v);
        for (i, d) in self.torsion.iter().enumerate() {
            let x = &mut c[self.free_rank + i];
            *x = x.mod_floor(d);
        }
        c
    }

    /// Ambient representative of a canonical coordinate vector.
    pub fn from_canonical_coords(&self, c: &[BigInt]) -> IntVector {
        self.from_canonical.mul_vec(c)
    }

    /// The `i`-th ambient basis vector as an element.
    pub fn basis_element(self: &Arc<Self>, i: usize) -> Element {
        let mut rep = vec![BigInt::zero(); self.ambient_rank()];
        rep[i] = BigInt::one();
        Element::new(self, rep).expect("basis vector has ambient length")
    }

    pub fn zero_element(self: &Arc<Self>) -> Element {
        Element::new(self, vec![BigInt::zero(); self.ambient_rank()]).expect("zero has ambient length")
    }

    /// Every element of a finite group as its canonical coordinates, in
    /// lexicographic order. `None` for infinite groups.
    pub fn enumerate_canonical(&self) -> Option<Vec<IntVector>> {
        if self.free_rank > 0 {
            return None;
        }
        let mut out: Vec<IntVector> = vec![vec![]];
        for d in &self.torsion {
            let mut next = Vec::new();
            for prefix in &out {
                let mut x = BigInt::zero();
                while &x < d {
                    let mut v = prefix.clone();
                    v.push(x.clone());
                    next.push(v);
                    x += 1;
                }
            }
            out = next;
        }
        Some(out)
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// A coset `[rep]` in a presented group.
#[derive(Clone, Debug)]
pub struct Element {
    group: Group,
    rep: IntVector,
}

impl Element {
    pub fn new(group: &Group, rep: IntVector) -> Result<Self> {
        if rep.len() != group.ambient_rank() {
            return Err(Error::DimensionMismatch {
                expected: group.ambient_rank(),
                found: rep.len(),
            });
        }
        Ok(Element {
            group: Arc::clone(group),
            rep,
        })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn rep(&self) -> &[BigInt] {
        &self.rep
    }

    pub fn canonical(&self) -> IntVector {
        self.group.canonical_coords(&self.rep)
    }

    pub fn is_zero(&self) -> bool {
        self.group.is_relation(&self.rep)
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.check_same(other)?;
        let rep = self.rep.iter().zip(&other.rep).map(|(a, b)| a + b).collect();
        Ok(Element {
            group: Arc::clone(&self.group),
            rep,
        })
    }

    pub fn neg(&self) -> Element {
        Element {
            group: Arc::clone(&self.group),
            rep: self.rep.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Element {
        Element {
            group: Arc::clone(&self.group),
            rep: self.rep.iter().map(|a| a * k).collect(),
        }
    }

    fn check_same(&self, other: &Element) -> Result<()> {
        if self.group.same_as(&other.group) {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }
}

/// Coset equality: `rep(x) - rep(y)` lies in the relation lattice.
pub fn element_eq(x: &Element, y: &Element) -> Result<bool> {
    x.check_same(y)?;
    let diff: IntVector = x.rep.iter().zip(&y.rep).map(|(a, b)| a - b).collect();
    Ok(x.group.is_relation(&diff))
}

/// A homomorphism given on ambient coordinates; constructed only through
/// [`hom`], which checks that relations go to relations.
#[derive(Clone, Debug)]
pub struct GroupHom {
    src: Group,
    tgt: Group,
    matrix: IntMatrix,
}

pub fn hom(src: &Group, tgt: &Group, matrix: IntMatrix) -> Result<GroupHom> {
    if matrix.rows() != tgt.ambient_rank() {
        return Err(Error::DimensionMismatch {
            expected: tgt.ambient_rank(),
            found: matrix.rows(),
        });
    }
    if matrix.cols() != src.ambient_rank() {
        return Err(Error::DimensionMismatch {
            expected: src.ambient_rank(),
            found: matrix.cols(),
        });
    }
    let image = &matrix * src.relations();
    for j in 0..image.cols() {
        if !tgt.is_relation(&image.column(j)) {
            return Err(Error::NotWellDefined { column: j });
        }
    }
    Ok(GroupHom {
        src: Arc::clone(src),
        tgt: Arc::clone(tgt),
        matrix,
    })
}

impl GroupHom {
    pub fn identity(g: &Group) -> GroupHom {
        GroupHom {
            src: Arc::clone(g),
            tgt: Arc::clone(g),
            matrix: IntMatrix::identity(g.ambient_rank()),
        }
    }

    pub fn zero(src: &Group, tgt: &Group) -> GroupHom {
        GroupHom {
            src: Arc::clone(src),
            tgt: Arc::clone(tgt),
            matrix: IntMatrix::zeros(tgt.ambient_rank(), src.ambient_rank()),
        }
    }

    pub fn src(&self) -> &Group {
        &self.src
    }

    pub fn tgt(&self) -> &Group {
        &self.tgt
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        if !x.group.same_as(&self.src) {
            return Err(Error::GroupMismatch);
        }
        Element::new(&self.tgt, self.matrix.mul_vec(&x.rep))
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &GroupHom) -> Result<GroupHom> {
        if !self.tgt.same_as(&next.src) {
            return Err(Error::GroupMismatch);
        }
        Ok(GroupHom {
            src: Arc::clone(&self.src),
            tgt: Arc::clone(&next.tgt),
            matrix: &next.matrix * &self.matrix,
        })
    }

    pub fn scaled(&self, k: i64) -> GroupHom {
        GroupHom {
            src: Arc::clone(&self.src),
            tgt: Arc::clone(&self.tgt),
            matrix: self.matrix.scale(&BigInt::from(k)),
        }
    }

    /// True iff the map sends every element to zero.
    pub fn is_zero(&self) -> bool {
        (0..self.matrix.cols()).all(|j| self.tgt.is_relation(&self.matrix.column(j)))
    }

    /// Two homs agree iff they agree on every ambient basis vector.
    pub fn equals(&self, other: &GroupHom) -> Result<bool> {
        if !self.src.same_as(&other.src) || !self.tgt.same_as(&other.tgt) {
            return Err(Error::GroupMismatch);
        }
        let diff = self.matrix.sub(&other.matrix);
        Ok((0..diff.cols()).all(|j| self.tgt.is_relation(&diff.column(j))))
    }

    pub fn image(&self) -> Subgroup {
        Subgroup::new(&self.tgt, self.matrix.clone())
    }

    /// Generators of `{x : self(x) = 0}`; the list spans the source
    /// relations as well.
    pub fn kernel(&self) -> Subgroup {
        let n = self.src.ambient_rank();
        let stacked = self.matrix.hstack(&self.tgt.relations().neg());
        let k = kernel_basis(&stacked);
        Subgroup::new(&self.src, k.block(0, n, 0, k.cols()))
    }

    /// Image generators in target ambient coordinates.
    pub fn image_generators(&self) -> Vec<IntVector> {
        self.matrix.columns()
    }
}

/// Subgroup of a presented group, spanned by generator columns together
/// with the group's relations.
#[derive(Clone, Debug)]
pub struct Subgroup {
    group: Group,
    generators: IntMatrix,
    lattice: ColumnLattice,
}

impl Subgroup {
    pub fn new(group: &Group, generators: IntMatrix) -> Self {
        let lattice = ColumnLattice::new(generators.hstack(group.relations()));
        Subgroup {
            group: Arc::clone(group),
            generators,
            lattice,
        }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn generators(&self) -> &IntMatrix {
        &self.generators
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.lattice.contains(v)
    }

    /// First generator of `self` not contained in `other`.
    pub fn first_outside(&self, other: &Subgroup) -> Option<IntVector> {
        self.generators.columns().into_iter().find(|c| !other.contains(c))
    }
}

/// Lattice `L` (columns of `basis`) modulo a sublattice `S`, presented on
/// the coordinates of `L`.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub group: Group,
    /// Maps group ambient coordinates back into the ambient space of `L`.
    pub embedding: IntMatrix,
}

/// `span(basis) / span(sub)`. The columns of `basis` must be independent.
pub fn subquotient(basis: &IntMatrix, sub: &IntMatrix) -> Result<Subquotient> {
    if basis.rows() != sub.rows() {
        return Err(Error::DimensionMismatch {
            expected: basis.rows(),
            found: sub.rows(),
        });
    }
    let lattice = ColumnLattice::new(basis.clone());
    let mut coords = Vec::with_capacity(sub.cols());
    for j in 0..sub.cols() {
        match lattice.solve(&sub.column(j))? {
            Some(x) => coords.push(x),
            None => return Err(Error::NotASublattice { column: j }),
        }
    }
    let relations = IntMatrix::from_columns(basis.cols(), &coords);
    Ok(Subquotient {
        group: cokernel(&relations),
        embedding: basis.clone(),
    })
}

/// Outcome of an exactness check at a node `G` of `F --f--> G --g--> H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Exactness {
    Exact,
    /// `f(x)` not killed by `g`; the witness is `f(x)` in `G`'s coordinates.
    ImageNotInKernel(IntVector),
    /// A kernel element of `g` outside the image of `f`.
    KernelNotInImage(IntVector),
}

impl Exactness {
    pub fn is_exact(&self) -> bool {
        matches!(self, Exactness::Exact)
    }
}

/// Checks `image(f) = kernel(g)` inside `G = tgt(f) = src(g)`.
pub fn exact_at(f: &GroupHom, g: &GroupHom) -> Result<Exactness> {
    if !f.tgt.same_as(&g.src) {
        return Err(Error::GroupMismatch);
    }
    for c in f.image_generators() {
        if !g.tgt.is_relation(&g.matrix.mul_vec(&c)) {
            return Ok(Exactness::ImageNotInKernel(c));
        }
    }
    let image = f.image();
    if let Some(w) = g.kernel().first_outside(&image) {
        return Ok(Exactness::KernelNotInImage(w));
    }
    Ok(Exactness::Exact)
}

/// A group with an ordered tuple of distinguished elements.
#[derive(Clone, Debug)]
pub struct MarkedGroup {
    group: Group,
    marks: Vec<IntVector>,
}

impl MarkedGroup {
    pub fn new(group: &Group, marks: Vec<IntVector>) -> Result<Self> {
        for m in &marks {
            if m.len() != group.ambient_rank() {
                return Err(Error::DimensionMismatch {
                    expected: group.ambient_rank(),
                    found: m.len(),
                });
            }
        }
        Ok(MarkedGroup {
            group: Arc::clone(group),
            marks,
        })
    }

    pub fn from_elements(group: &Group, marks: &[Element]) -> Result<Self> {
        if marks.iter().any(|m| !m.group.same_as(group)) {
            return Err(Error::GroupMismatch);
        }
        Self::new(group, marks.iter().map(|m| m.rep.clone()).collect())
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn mark_reps(&self) -> &[IntVector] {
        &self.marks
    }

    pub fn marks(&self) -> Vec<Element> {
        self.marks
            .iter()
            .map(|m| Element {
                group: Arc::clone(&self.group),
                rep: m.clone(),
            })
            .collect()
    }

    /// Marks in canonical coordinates.
    pub fn canonical_marks(&self) -> Vec<IntVector> {
        self.marks.iter().map(|m| self.group.canonical_coords(m)).collect()
    }

    /// A marked group presented directly in canonical form
    /// `Z^free_rank + Z/d_1 + ...` with marks given in those coordinates.
    pub fn literal(free_rank: usize, torsion: &[i64], marks: &[&[i64]]) -> Result<Self> {
        let n = free_rank + torsion.len();
        let mut rel = IntMatrix::zeros(n, torsion.len());
        for (i, d) in torsion.iter().enumerate() {
            rel[(free_rank + i, i)] = BigInt::from(*d);
        }
        let group = cokernel(&rel);
        Self::new(
            &group,
            marks
                .iter()
                .map(|m| m.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }
}

/// Verdict of an isomorphism question.
#[derive(Clone, Debug)]
pub enum Decision {
    /// An isomorphism carrying marks to marks, already verified.
    Yes(GroupHom),
    No,
    Unknown(String),
}

impl Decision {
    pub fn is_yes(&self) -> bool {
        matches!(self, Decision::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Decision::No)
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Decision::Unknown(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Decision::Yes(_) => "yes",
            Decision::No => "no",
            Decision::Unknown(_) => "unknown",
        }
    }
}

/// Checks that `h` is an isomorphism sending `a`'s marks to `b`'s, in order.
pub fn verify_pointed_iso(h: &GroupHom, a: &MarkedGroup, b: &MarkedGroup) -> Result<bool> {
    if !h.src.same_as(&a.group) || !h.tgt.same_as(&b.group) || a.marks.len() != b.marks.len() {
        return Ok(false);
    }
    // re-check well-definedness from scratch
    hom(&a.group, &b.group, h.matrix.clone())?;
    for (x, y) in a.marks().iter().zip(b.marks()) {
        if !element_eq(&h.apply(x)?, &y)? {
            return Ok(false);
        }
    }
    if a.group.free_rank() != b.group.free_rank() || a.group.torsion() != b.group.torsion() {
        return Ok(false);
    }
    // Between groups with equal invariants a surjection is an isomorphism.
    let image = h.image();
    Ok((0..b.group.ambient_rank()).all(|i| image.contains(b.group.basis_element(i).rep())))
}
