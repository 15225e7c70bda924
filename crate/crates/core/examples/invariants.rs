// The six invariant groups attached to a Cuntz-Krieger matrix.

use ckdual::ckalg::{invariants, CkMatrix};
use ckdual::fgab::canonical_marked_display;

pub fn run() -> ckdual::Result<()> {
    let examples = [
        ("golden mean", vec![vec![1, 1], vec![1, 0]]),
        ("three-vertex example", vec![vec![1, 1, 1], vec![1, 1, 1], vec![1, 0, 0]]),
        ("its transpose", vec![vec![1, 1, 1], vec![1, 1, 0], vec![1, 1, 0]]),
    ];
    for (name, rows) in examples {
        let a = CkMatrix::from_rows(&rows)?;
        let inv = invariants(&a)?;
        println!("{name} {}", a.matrix());
        println!("  Ext_w      {}", canonical_marked_display(&inv.ext_w));
        println!("  Ext_s      {}", canonical_marked_display(&inv.ext_s));
        println!("  K0(T)      {}", canonical_marked_display(&inv.k0_toeplitz));
        println!("  K1(T)      {}", inv.k1_toeplitz);
        println!("  K0(O)      {}", canonical_marked_display(&inv.k0_ck));
        println!("  K1(O)      {}", inv.k1_ck);
    }
    Ok(())
}

fn main() -> ckdual::Result<()> {
    run()
}
