// Recomputes the table of reference example triples and verdicts and
// prints every row with its status.

use ckdual::cli::{reference_examples, ReferenceTable};
use ckdual::fgab::SearchConfig;

pub fn run() -> ckdual::Result<()> {
    let (lines, pass) = reference_examples(&ReferenceTable::builtin(), &SearchConfig::default())?;
    for l in &lines {
        println!("{:<9} {:<22} expected {:<32} computed {}", if l.pass { "ok" } else { "MISMATCH" }, l.label, l.expected, l.computed);
    }
    println!("{} of {} rows match", lines.iter().filter(|l| l.pass).count(), lines.len());
    let _ = pass;
    Ok(())
}

fn main() -> ckdual::Result<()> {
    run()
}
