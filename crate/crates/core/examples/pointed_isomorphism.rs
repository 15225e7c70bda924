// Deciding whether an isomorphism carries one tuple of elements to another.

use ckdual::fgab::{canonical_marked_display, pointed_iso_exists, verify_pointed_iso, Decision, MarkedGroup, SearchConfig};

pub fn run() -> ckdual::Result<()> {
    let cfg = SearchConfig::default();
    let cases = [
        // negation of Z swaps the sign of both marks
        (MarkedGroup::literal(1, &[], &[&[1], &[-2]])?, MarkedGroup::literal(1, &[], &[&[-1], &[2]])?),
        (MarkedGroup::literal(1, &[], &[&[1], &[-2]])?, MarkedGroup::literal(1, &[], &[&[1], &[0]])?),
        // in Z + Z/2, (x, t) -> (x, t + x) is an automorphism
        (
            MarkedGroup::literal(1, &[2], &[&[1, 1], &[-1, 0]])?,
            MarkedGroup::literal(1, &[2], &[&[1, 0], &[-1, 1]])?,
        ),
        // Z/6: 1 and 5 are both generators, 2 is not
        (MarkedGroup::literal(0, &[6], &[&[1]])?, MarkedGroup::literal(0, &[6], &[&[5]])?),
        (MarkedGroup::literal(0, &[6], &[&[1]])?, MarkedGroup::literal(0, &[6], &[&[2]])?),
    ];
    for (a, b) in &cases {
        let d = pointed_iso_exists(a, b, &cfg)?;
        print!("{} vs {}: {}", canonical_marked_display(a), canonical_marked_display(b), d.label());
        if let Decision::Yes(h) = &d {
            print!(" via {} (verified: {})", h.matrix(), verify_pointed_iso(h, a, b)?);
        }
        println!();
    }
    Ok(())
}

fn main() -> ckdual::Result<()> {
    run()
}
