//! Exact sequences and ladders built from a [`CkComplex`], and their
//! mechanical verification.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::ckalg::{CkComplex, CkMatrix};
use crate::error::{Error, Result};
use crate::fgab::{element_eq, exact_at, hom, Element, Exactness, FgAbGroup, Group, GroupHom};
use crate::intmat::{IntMatrix, IntVector};

/// One side of a checked equation: a fixed element, or an arrow applied to
/// one. Arrows are referenced by index so that replacing an arrow changes
/// the identity too.
#[derive(Clone, Debug)]
pub enum Term {
    Value(Element),
    Arrow { index: usize, arg: Element },
}

#[derive(Clone, Debug)]
pub struct MarkedIdentity {
    pub label: String,
    pub lhs: Term,
    pub rhs: Term,
}

/// A finite sequence of groups and maps between consecutive ones. The
/// cyclic six-term sequences are stored opened up, with their zero corners
/// as explicit trivial end nodes.
#[derive(Clone, Debug)]
pub struct ExactSequenceSpec {
    pub name: String,
    pub nodes: Vec<(String, Group)>,
    pub arrows: Vec<(String, GroupHom)>,
    pub identities: Vec<MarkedIdentity>,
}

impl ExactSequenceSpec {
    fn new(name: &str, nodes: Vec<(&str, Group)>, arrows: Vec<(&str, GroupHom)>) -> Result<Self> {
        let zero = FgAbGroup::trivial();
        let first = &nodes[0].1;
        let last = &nodes[nodes.len() - 1].1;
        let mut all_nodes = vec![("0".to_string(), zero.clone())];
        all_nodes.extend(nodes.iter().map(|(l, g)| (l.to_string(), g.clone())));
        all_nodes.push(("0".to_string(), zero.clone()));
        let mut all_arrows = vec![("0".to_string(), GroupHom::zero(&zero, first))];
        all_arrows.extend(arrows.into_iter().map(|(l, h)| (l.to_string(), h)));
        all_arrows.push(("0".to_string(), GroupHom::zero(last, &zero)));
        let spec = ExactSequenceSpec {
            name: name.to_string(),
            nodes: all_nodes,
            arrows: all_arrows,
            identities: Vec::new(),
        };
        spec.check_shape()?;
        Ok(spec)
    }

    fn check_shape(&self) -> Result<()> {
        if self.arrows.len() + 1 != self.nodes.len() {
            return Err(Error::Consistency(format!("{}: arrow count", self.name)));
        }
        for (i, (label, f)) in self.arrows.iter().enumerate() {
            if !f.src().same_as(&self.nodes[i].1) || !f.tgt().same_as(&self.nodes[i + 1].1) {
                return Err(Error::Consistency(format!("{}: endpoints of {label}", self.name)));
            }
        }
        Ok(())
    }

    fn eval(&self, t: &Term) -> Result<Element> {
        match t {
            Term::Value(x) => Ok(x.clone()),
            Term::Arrow { index, arg } => self.arrows[*index].1.apply(arg),
        }
    }

    /// Index of the arrow with the given label.
    pub fn arrow_index(&self, label: &str) -> Option<usize> {
        self.arrows.iter().position(|(l, _)| l == label)
    }
}

/// Two sequences of the same length joined by rungs, one per node.
#[derive(Clone, Debug)]
pub struct LadderSpec {
    pub name: String,
    pub left: ExactSequenceSpec,
    pub right: ExactSequenceSpec,
    pub rungs: Vec<(String, GroupHom)>,
    pub identities: Vec<MarkedIdentity>,
}

impl LadderSpec {
    fn eval(&self, t: &Term) -> Result<Element> {
        match t {
            Term::Value(x) => Ok(x.clone()),
            Term::Arrow { index, arg } => self.rungs[*index].1.apply(arg),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Exactness,
    Commutativity,
    Identity,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub diagram: String,
    pub kind: CheckKind,
    pub location: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(serialize_with = "crate::json::serialize_opt_ints", skip_serializing_if = "Option::is_none")]
    pub element: Option<IntVector>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagramReport {
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl DiagramReport {
    fn from_checks(checks: Vec<Check>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        DiagramReport { checks, pass }
    }

    pub fn merge(reports: impl IntoIterator<Item = DiagramReport>) -> Self {
        Self::from_checks(reports.into_iter().flat_map(|r| r.checks).collect())
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn count(&self, kind: CheckKind) -> usize {
        self.checks.iter().filter(|c| c.kind == kind).count()
    }
}

fn check_identity(diagram: &str, id: &MarkedIdentity, lhs: Result<Element>, rhs: Result<Element>) -> Check {
    let mut check = Check {
        diagram: diagram.to_string(),
        kind: CheckKind::Identity,
        location: id.label.clone(),
        pass: false,
        witness: None,
        element: None,
    };
    match (lhs, rhs) {
        (Ok(l), Ok(r)) => match element_eq(&l, &r) {
            Ok(true) => check.pass = true,
            Ok(false) => {
                check.witness = Some("left side differs from right side by".into());
                check.element = Some(l.rep().iter().zip(r.rep()).map(|(a, b)| a - b).collect());
            }
            Err(e) => check.witness = Some(e.to_string()),
        },
        (Err(e), _) | (_, Err(e)) => check.witness = Some(e.to_string()),
    }
    check
}

pub fn verify_sequence(spec: &ExactSequenceSpec) -> DiagramReport {
    let mut checks = Vec::new();
    for i in 1..spec.nodes.len() - 1 {
        let (f, g) = (&spec.arrows[i - 1].1, &spec.arrows[i].1);
        let mut check = Check {
            diagram: spec.name.clone(),
            kind: CheckKind::Exactness,
            location: spec.nodes[i].0.clone(),
            pass: false,
            witness: None,
            element: None,
        };
        match exact_at(f, g) {
            Ok(Exactness::Exact) => check.pass = true,
            Ok(Exactness::ImageNotInKernel(v)) => {
                check.witness = Some(format!("image of {} not killed by {}", spec.arrows[i - 1].0, spec.arrows[i].0));
                check.element = Some(v);
            }
            Ok(Exactness::KernelNotInImage(v)) => {
                check.witness = Some(format!("kernel of {} not in image of {}", spec.arrows[i].0, spec.arrows[i - 1].0));
                check.element = Some(v);
            }
            Err(e) => check.witness = Some(e.to_string()),
        }
        checks.push(check);
    }
    for id in &spec.identities {
        checks.push(check_identity(&spec.name, id, spec.eval(&id.lhs), spec.eval(&id.rhs)));
    }
    DiagramReport::from_checks(checks)
}

/// Square `i` compares `rung[i+1] ∘ left[i]` with `right[i] ∘ rung[i]` on
/// every ambient basis vector of the left node.
pub fn verify_ladder(spec: &LadderSpec) -> DiagramReport {
    let mut checks = Vec::new();
    for (i, (label, f)) in spec.left.arrows.iter().enumerate() {
        let g = &spec.right.arrows[i].1;
        let (down, down_next) = (&spec.rungs[i].1, &spec.rungs[i + 1].1);
        let mut check = Check {
            diagram: spec.name.clone(),
            kind: CheckKind::Commutativity,
            location: format!("{} / {}", label, spec.right.arrows[i].0),
            pass: true,
            witness: None,
            element: None,
        };
        for b in 0..f.src().ambient_rank() {
            let x = f.src().basis_element(b);
            let via_left = f.apply(&x).and_then(|y| down_next.apply(&y));
            let via_right = down.apply(&x).and_then(|y| g.apply(&y));
            let same = match (via_left, via_right) {
                (Ok(l), Ok(r)) => element_eq(&l, &r),
                (Err(e), _) | (_, Err(e)) => Err(e),
            };
            match same {
                Ok(true) => {}
                Ok(false) => {
                    check.pass = false;
                    check.witness = Some(format!("square fails on basis vector {b}"));
                    check.element = Some(x.rep().to_vec());
                    break;
                }
                Err(e) => {
                    check.pass = false;
                    check.witness = Some(e.to_string());
                    break;
                }
            }
        }
        checks.push(check);
    }
    for id in &spec.identities {
        checks.push(check_identity(&spec.name, id, spec.eval(&id.lhs), spec.eval(&id.rhs)));
    }
    DiagramReport::from_checks(checks)
}

fn z_one(c: &CkComplex) -> Element {
    Element::new(&c.z, vec![BigInt::one()]).expect("Z element")
}

fn suffix(name: &str, transposed: bool) -> String {
    if transposed {
        format!("{name}[transpose]")
    } else {
        name.to_string()
    }
}

/// `0 → Ker(I−Â)/i₁(Z) → Ker(I−A) → Z → Z^N/(I−Â) → Z^N/(I−A) → 0`.
pub fn six_term_a(c: &CkComplex) -> Result<ExactSequenceSpec> {
    ExactSequenceSpec::new(
        "6term(A)",
        vec![
            ("Ker(I-Â)/i1(Z)", c.ker_a_hat_mod_i1.group.clone()),
            ("Ker(I-A)", c.ker_a.group.clone()),
            ("Z", c.z.clone()),
            ("Z^N/(I-Â)", c.ext_s.clone()),
            ("Z^N/(I-A)", c.ext_w.clone()),
        ],
        vec![
            ("j_A", c.j_a.clone()),
            ("s_A", c.s_a.clone()),
            ("ι̂_A", c.iota_hat.clone()),
            ("q̂_A", c.q_hat.clone()),
        ],
    )
}

/// `0 → Ker(s_A) → Ker(I−A) → Z → Z^{N+1}/(I−A₁) → Z^N/(I−A) → 0`, with the
/// identity `ι_{A₁}(1) = [e₀]`.
pub fn six_term_a1(c: &CkComplex) -> Result<ExactSequenceSpec> {
    let mut spec = ExactSequenceSpec::new(
        "6term(A1)",
        vec![
            ("Ker(s_A)", c.ker_s.group.clone()),
            ("Ker(I-A)", c.ker_a.group.clone()),
            ("Z", c.z.clone()),
            ("Z^{N+1}/(I-A1)", c.k0_toeplitz.clone()),
            ("Z^N/(I-A)", c.ext_w.clone()),
        ],
        vec![
            ("ι_s", c.iota_s.clone()),
            ("s_A", c.s_a.clone()),
            ("ι_A1", c.iota_a1.clone()),
            ("q_A1", c.q_a1.clone()),
        ],
    )?;
    spec.identities.push(MarkedIdentity {
        label: "ι_A1(1) = [e0]".into(),
        lhs: Term::Arrow {
            index: 3,
            arg: z_one(c),
        },
        rhs: Term::Value(c.e0_class()),
    });
    Ok(spec)
}

/// The ladder from [`six_term_a`] to [`six_term_a1`] with rungs
/// `ξ̃⁰, id, id, ξ⁰, id` and the unit identity `ξ⁰(ι̂_A(1) + [1_N]) = [1_{N+1}]`.
pub fn ladder_xi(c: &CkComplex) -> Result<LadderSpec> {
    ladder_from(c, six_term_a(c)?, six_term_a1(c)?)
}

fn ladder_from(c: &CkComplex, left: ExactSequenceSpec, right: ExactSequenceSpec) -> Result<LadderSpec> {
    let zero = FgAbGroup::trivial();
    let rungs = vec![
        ("0".to_string(), GroupHom::zero(&zero, &zero)),
        ("ξ̃⁰".to_string(), c.xi0_tilde.clone()),
        ("id".to_string(), GroupHom::identity(&c.ker_a.group)),
        ("id".to_string(), GroupHom::identity(&c.z)),
        ("ξ⁰".to_string(), c.xi0.clone()),
        ("id".to_string(), GroupHom::identity(&c.ext_w)),
        ("0".to_string(), GroupHom::zero(&zero, &zero)),
    ];
    for (i, (label, r)) in rungs.iter().enumerate() {
        if !r.src().same_as(&left.nodes[i].1) || !r.tgt().same_as(&right.nodes[i].1) {
            return Err(Error::Consistency(format!("ladder rung {label} at node {i}")));
        }
    }
    let unit_arg = c.iota_hat_of(1).add(&c.unit_class_s())?;
    Ok(LadderSpec {
        name: "ladder ξ".into(),
        left,
        right,
        rungs,
        identities: vec![MarkedIdentity {
            label: "ξ⁰(ι̂_A(1) + [1_N]) = [1_{N+1}]".into(),
            lhs: Term::Arrow {
                index: 4,
                arg: unit_arg,
            },
            rhs: Term::Value(c.unit_class_toeplitz()),
        }],
    })
}

pub fn build_6term_a(a: &CkMatrix) -> Result<ExactSequenceSpec> {
    six_term_a(&CkComplex::new(a)?)
}

pub fn build_sixterm_a1(a: &CkMatrix) -> Result<ExactSequenceSpec> {
    six_term_a1(&CkComplex::new(a)?)
}

pub fn build_ladder_xi(a: &CkMatrix) -> Result<LadderSpec> {
    ladder_xi(&CkComplex::new(a)?)
}

/// Which column arrow to corrupt, and how.
#[derive(Clone, Debug)]
pub struct Mutation {
    pub column: Column,
    pub arrow: usize,
    pub automorphism: GroupHom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Column {
    SixTermA,
    SixTermA1,
}

/// The checks for one matrix: both columns, the ladder, and the strong and
/// weak unit identities.
fn duality_checks(c: &CkComplex, transposed: bool, mutation: Option<&Mutation>) -> Result<DiagramReport> {
    let mut left = six_term_a(c)?;
    let mut right = six_term_a1(c)?;
    if let Some(m) = mutation {
        let col = match m.column {
            Column::SixTermA => &mut left,
            Column::SixTermA1 => &mut right,
        };
        let arrow = &mut col.arrows[m.arrow].1;
        *arrow = arrow.then(&m.automorphism)?;
    }
    for spec in [&mut left, &mut right] {
        spec.name = suffix(&spec.name, transposed);
    }
    let mut ladder = ladder_from(c, left.clone(), right.clone())?;
    ladder.name = suffix(&ladder.name, transposed);

    let strong_class = c.strong_class();
    let strong = MarkedIdentity {
        label: "ξ⁰([T_A]_s) = -[1_{N+1}]".into(),
        lhs: Term::Arrow {
            index: 4,
            arg: strong_class,
        },
        rhs: Term::Value(c.unit_class_toeplitz().neg()),
    };
    let weak = MarkedIdentity {
        label: "q_A1(-[1_{N+1}]) = -[1_N]".into(),
        lhs: Term::Arrow {
            index: 4,
            arg: c.unit_class_toeplitz().neg(),
        },
        rhs: Term::Value(c.weak_class()),
    };
    let marks_name = suffix("duality marks", transposed);
    let marks = DiagramReport::from_checks(vec![
        check_identity(&marks_name, &strong, ladder.eval(&strong.lhs), ladder.eval(&strong.rhs)),
        check_identity(&marks_name, &weak, right.eval(&weak.lhs), right.eval(&weak.rhs)),
    ]);
    Ok(DiagramReport::merge([
        verify_sequence(&left),
        verify_sequence(&right),
        verify_ladder(&ladder),
        marks,
    ]))
}

/// Every check behind the strong duality statement, for `A` and for `Aᵗ`.
pub fn strong_duality_report(a: &CkMatrix) -> Result<DiagramReport> {
    let c = CkComplex::new(a)?;
    let ct = CkComplex::new(&a.transpose())?;
    Ok(DiagramReport::merge([
        duality_checks(&c, false, None)?,
        duality_checks(&ct, true, None)?,
    ]))
}

/// The report for `A` alone after applying `mutation` to one column arrow.
pub fn mutated_report(c: &CkComplex, mutation: &Mutation) -> Result<DiagramReport> {
    duality_checks(c, false, Some(mutation))
}

/// An automorphism of the target of `f` that moves some element of the
/// image of `f`: negation when the image is not 2-torsion, otherwise an
/// elementary transvection in canonical coordinates. `None` when `f` is zero
/// or the target has no such automorphism.
pub fn moving_automorphism(f: &GroupHom) -> Option<GroupHom> {
    let g = f.tgt();
    let images: Vec<IntVector> = f
        .image_generators()
        .into_iter()
        .map(|v| g.canonical_coords(&v))
        .filter(|c| c.iter().any(|x| !x.is_zero()))
        .collect();
    if images.is_empty() {
        return None;
    }
    let dim = g.canonical_dim();
    let r = g.free_rank();
    let modulus = |k: usize| -> Option<BigInt> { (k >= r).then(|| g.torsion()[k - r].clone()) };
    let nonzero_at = |k: usize, x: &BigInt| match modulus(k) {
        None => !x.is_zero(),
        Some(d) => !x.mod_floor(&d).is_zero(),
    };
    let two = BigInt::from(2);
    let mut alpha: Option<IntMatrix> = None;
    if images.iter().any(|c| (0..dim).any(|k| nonzero_at(k, &(&two * &c[k])))) {
        alpha = Some(IntMatrix::identity(dim).neg());
    } else {
        'search: for k in 0..dim {
            for l in (0..dim).filter(|&l| l != k) {
                // e_l ↦ e_l + t e_k must respect the order of e_l
                let t = match (modulus(k), modulus(l)) {
                    (_, None) => BigInt::one(),
                    (None, Some(_)) => continue,
                    (Some(dk), Some(dl)) => &dk / dk.gcd(&dl),
                };
                if images.iter().any(|c| nonzero_at(k, &(&t * &c[l]))) {
                    let mut m = IntMatrix::identity(dim);
                    m[(k, l)] = t;
                    alpha = Some(m);
                    break 'search;
                }
            }
        }
    }
    let ambient = &(g.from_canonical() * &alpha?) * g.to_canonical();
    hom(g, g, ambient).ok()
}

/// All single-arrow corruptions of the two columns for which
/// [`moving_automorphism`] exists.
pub fn mutations(c: &CkComplex) -> Result<Vec<(String, Mutation)>> {
    let mut out = Vec::new();
    for (column, spec) in [(Column::SixTermA, six_term_a(c)?), (Column::SixTermA1, six_term_a1(c)?)] {
        for (i, (label, f)) in spec.arrows.iter().enumerate() {
            if let Some(automorphism) = moving_automorphism(f) {
                out.push((
                    format!("{}: {label}", spec.name),
                    Mutation {
                        column,
                        arrow: i,
                        automorphism,
                    },
                ));
            }
        }
    }
    Ok(out)
}
