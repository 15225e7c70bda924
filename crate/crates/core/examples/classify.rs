// Isomorphism questions for pairs of matrices.

use ckdual::ckalg::CkMatrix;
use ckdual::classify::{ck_iso, transpose_consistency, ext_w_pointed_iso, toeplitz_iso};
use ckdual::fgab::SearchConfig;

pub fn run() -> ckdual::Result<()> {
    let cfg = SearchConfig::default();
    let a = CkMatrix::from_rows(&[vec![1, 1, 1], vec![1, 1, 1], vec![1, 0, 0]])?;
    let at = a.transpose();
    let b = CkMatrix::from_rows(&[vec![1, 1, 0, 0], vec![1, 1, 1, 0], vec![0, 1, 1, 1], vec![0, 0, 1, 1]])?;
    let ct = CkMatrix::from_rows(&[vec![1, 1, 1], vec![1, 1, 0], vec![1, 1, 1]])?;

    for (name, x, y) in [("A vs A^t", &a, &at), ("B vs C^t", &b, &ct)] {
        println!(
            "{name}: toeplitz {}, ck {}, ext_w {}, transpose-consistent {}",
            toeplitz_iso(x, y, &cfg)?.decision.label(),
            ck_iso(x, y, &cfg)?.decision.label(),
            ext_w_pointed_iso(x, y, &cfg)?.decision.label(),
            transpose_consistency(x, y, &cfg)?,
        );
    }
    Ok(())
}

fn main() -> ckdual::Result<()> {
    run()
}
