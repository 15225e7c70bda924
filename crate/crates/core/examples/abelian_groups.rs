// Finitely generated abelian groups given by presentations, maps between
// them and exactness checks.

use ckdual::fgab::{cokernel, exact_at, hom, Element, FgAbGroup};
use ckdual::intmat::{ivec, IntMatrix};

pub fn run() -> ckdual::Result<()> {
    // Z^2 / <(2, 0), (0, 6)> is Z/2 + Z/6
    let g = cokernel(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 6]]));
    println!("G = {g}, order {:?}", g.order());

    let x = Element::new(&g, ivec(&[1, 3]))?;
    println!("x = {:?} has canonical coordinates {:?}", x.rep(), x.canonical());
    println!("6x is zero: {}", x.scale(&6.into()).is_zero());

    // 0 -> Z --3--> Z -> Z/3 -> 0
    let z = FgAbGroup::free(1);
    let z3 = cokernel(&IntMatrix::from_rows(&[vec![3]]));
    let times3 = hom(&z, &z, IntMatrix::from_rows(&[vec![3]]))?;
    let quotient = hom(&z, &z3, IntMatrix::identity(1))?;
    println!("exact at the middle Z: {}", exact_at(&times3, &quotient)?.is_exact());

    let times2 = hom(&z, &z, IntMatrix::from_rows(&[vec![2]]))?;
    println!("with 2 instead of 3: {:?}", exact_at(&times2, &quotient)?);
    Ok(())
}

fn main() -> ckdual::Result<()> {
    run()
}
