// Batch verification over every valid 3x3 matrix and a seeded sample of
// 5x5 matrices.

use ckdual::corpus::run as run_corpus;
use ckdual::fgab::SearchConfig;

pub fn run() -> ckdual::Result<()> {
    let cfg = SearchConfig::default();
    for (n, limit, seed) in [(2, 10, 0), (3, 50, 0), (5, 40, 17)] {
        let s = run_corpus(n, limit, seed, &cfg)?;
        println!(
            "n = {n}: {}/{} matrices pass, {}/{} sampled pairs transpose-consistent",
            s.passed, s.matrices, s.pairs_consistent, s.pairs_checked
        );
    }
    Ok(())
}

fn main() -> ckdual::Result<()> {
    run()
}
