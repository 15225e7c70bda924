//! JSON encoding of exact integers and groups. Integers that fit in `i64`
//! become JSON numbers, larger ones become decimal strings.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serializer;
use serde_json::{json, Value};

use crate::fgab::{canonical_marked_display, FgAbGroup, MarkedGroup};
use crate::intmat::IntMatrix;

pub fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(x.to_string()),
    }
}

pub fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

pub fn matrix(m: &IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| ints(m.row(i))).collect())
}

pub fn group(g: &FgAbGroup) -> Value {
    json!({
        "free_rank": g.free_rank(),
        "torsion": ints(g.torsion()),
        "marks": [],
    })
}

/// `{free_rank, torsion, marks}` with marks in display-normalized canonical
/// coordinates.
pub fn marked_group(mg: &MarkedGroup) -> Value {
    let d = canonical_marked_display(mg);
    json!({
        "free_rank": d.free_rank,
        "torsion": ints(&d.torsion),
        "marks": Value::Array(d.marks.iter().map(|m| ints(m)).collect()),
    })
}

pub(crate) fn serialize_opt_ints<S: Serializer>(v: &Option<Vec<BigInt>>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_some(&ints(v)),
        None => s.serialize_none(),
    }
}
