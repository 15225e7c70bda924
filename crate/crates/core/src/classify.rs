//! Isomorphism decisions for Toeplitz and Cuntz–Krieger algebras, reduced to
//! pointed-isomorphism questions about their K-groups.

use crate::ckalg::{CkComplex, CkMatrix};
use crate::error::Result;
use crate::fgab::{pointed_iso_exists, Decision, MarkedGroup, SearchConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Question {
    ToeplitzIso,
    CkIso,
    ExtWPointedIso,
}

impl Question {
    /// The pointed groups being compared, as a human-readable formula.
    pub fn criterion(self) -> &'static str {
        match self {
            Question::ToeplitzIso => "(Z^{N+1}/(I-A_1), [1_{N+1}], [e_0]) vs (Z^{M+1}/(I-B_1), [1_{M+1}], [e_0])",
            Question::CkIso => "(Z^N/(I-A^t), [1_N]) vs (Z^M/(I-B^t), [1_M])",
            Question::ExtWPointedIso => "(Z^N/(I-A), -[1_N]) vs (Z^M/(I-B), -[1_M])",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Question::ToeplitzIso => "toeplitz",
            Question::CkIso => "ck",
            Question::ExtWPointedIso => "extw",
        }
    }
}

#[derive(Clone, Debug)]
pub struct IsoVerdict {
    pub question: Question,
    pub inputs: (CkMatrix, CkMatrix),
    pub decision: Decision,
}

impl IsoVerdict {
    pub fn criterion(&self) -> &'static str {
        self.question.criterion()
    }
}

/// `(Z^{N+1}/(I − M₁), [e₀], [1_{N+1}])`, the K₀ triple of `T_{Mᵗ}`; with
/// `transpose_input` the triple is computed from `Mᵗ` and so describes
/// `T_M`.
pub fn toeplitz_triple(m: &CkMatrix, transpose_input: bool) -> Result<MarkedGroup> {
    let m = if transpose_input { m.transpose() } else { m.clone() };
    Ok(CkComplex::new(&m)?.invariants()?.k0_toeplitz)
}

fn unit_then_e0(m: &CkMatrix) -> Result<MarkedGroup> {
    let c = CkComplex::new(m)?;
    MarkedGroup::from_elements(&c.k0_toeplitz, &[c.unit_class_toeplitz(), c.e0_class()])
}

fn verdict(question: Question, a: &CkMatrix, b: &CkMatrix, x: &MarkedGroup, y: &MarkedGroup, cfg: &SearchConfig) -> Result<IsoVerdict> {
    Ok(IsoVerdict {
        question,
        inputs: (a.clone(), b.clone()),
        decision: pointed_iso_exists(x, y, cfg)?,
    })
}

pub fn toeplitz_iso(a: &CkMatrix, b: &CkMatrix, cfg: &SearchConfig) -> Result<IsoVerdict> {
    verdict(Question::ToeplitzIso, a, b, &unit_then_e0(a)?, &unit_then_e0(b)?, cfg)
}

pub fn ck_iso(a: &CkMatrix, b: &CkMatrix, cfg: &SearchConfig) -> Result<IsoVerdict> {
    let k0 = |m: &CkMatrix| -> Result<MarkedGroup> { Ok(CkComplex::new(&m.transpose())?.invariants()?.k0_ck) };
    verdict(Question::CkIso, a, b, &k0(a)?, &k0(b)?, cfg)
}

pub fn ext_w_pointed_iso(a: &CkMatrix, b: &CkMatrix, cfg: &SearchConfig) -> Result<IsoVerdict> {
    let ext = |m: &CkMatrix| -> Result<MarkedGroup> { Ok(CkComplex::new(m)?.invariants()?.ext_w) };
    verdict(Question::ExtWPointedIso, a, b, &ext(a)?, &ext(b)?, cfg)
}

/// Whether the Toeplitz verdicts for `(A, B)` and `(Aᵗ, Bᵗ)` agree. An
/// `Unknown` on either side is not counted as a disagreement.
pub fn transpose_consistency(a: &CkMatrix, b: &CkMatrix, cfg: &SearchConfig) -> Result<bool> {
    let d = toeplitz_iso(a, b, cfg)?.decision;
    let dt = toeplitz_iso(&a.transpose(), &b.transpose(), cfg)?.decision;
    Ok(d.is_unknown() || dt.is_unknown() || d.is_yes() == dt.is_yes())
}
