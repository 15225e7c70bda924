// Smith and Hermite normal forms, integer kernels and lattice membership.
//
// Run with `cargo run --example smith_normal_form`.

use ckdual::intmat::{hnf_rows, kernel_basis, snf, solve_in_column_lattice, ivec, IntMatrix};

pub fn run() -> ckdual::Result<()> {
    let m = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    let dec = snf(&m);
    println!("M = {m}");
    println!("D = {}  (divisors {:?})", dec.d, dec.divisors());
    assert_eq!(&(&dec.s * &m) * &dec.t, dec.d);

    let h = hnf_rows(&m);
    println!("row Hermite form {} with rank {}", h.h, h.rank);

    let singular = IntMatrix::from_rows(&[vec![1, 2, 3], vec![2, 4, 6]]);
    println!("kernel of {singular} is spanned by the columns of {}", kernel_basis(&singular));

    let target = ivec(&[2, 6, -6]);
    match solve_in_column_lattice(&m, &target)? {
        Some(x) => println!("M x = {target:?} for x = {x:?}"),
        None => println!("{target:?} is not in the column lattice of M"),
    }
    Ok(())
}

fn main() -> ckdual::Result<()> {
    run()
}
