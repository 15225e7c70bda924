// Corrupting one arrow of a verified diagram and watching the report fail.

use ckdual::ckalg::{CkComplex, CkMatrix};
use ckdual::diagrams::{mutated_report, mutations};

pub fn run() -> ckdual::Result<()> {
    let a = CkMatrix::from_rows(&[vec![1, 1], vec![1, 0]])?;
    let c = CkComplex::new(&a)?;
    for (label, m) in mutations(&c)? {
        let report = mutated_report(&c, &m)?;
        let first = report.failures().next().map(|f| format!("{} at {}", f.diagram, f.location));
        println!("{label}: pass = {} (first failure: {})", report.pass, first.unwrap_or_default());
    }
    Ok(())
}

fn main() -> ckdual::Result<()> {
    run()
}
