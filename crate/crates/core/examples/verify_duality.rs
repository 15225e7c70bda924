// Full duality report for one matrix: both six-term sequences, the ladder
// between them and the unit identities, for the matrix and its transpose.

use ckdual::ckalg::CkMatrix;
use ckdual::diagrams::{strong_duality_report, CheckKind};

pub fn run() -> ckdual::Result<()> {
    let a = CkMatrix::from_rows(&[vec![0, 0, 0, 1], vec![0, 0, 1, 1], vec![0, 1, 1, 0], vec![1, 0, 1, 1]])?;
    let report = strong_duality_report(&a)?;
    println!(
        "{} exactness, {} commutativity and {} identity checks: {}",
        report.count(CheckKind::Exactness),
        report.count(CheckKind::Commutativity),
        report.count(CheckKind::Identity),
        if report.pass { "all pass" } else { "FAILURES" }
    );
    for c in report.checks.iter().filter(|c| c.kind == CheckKind::Identity) {
        println!("  {:<20} {}", c.diagram, c.location);
    }
    Ok(())
}

fn main() -> ckdual::Result<()> {
    run()
}
