mod common;

use common::{exactness_oracle_cases, pointed_iso_oracle_cases};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn pointed_iso_matches_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let t = pointed_iso_oracle_cases(&mut rng, 250);
    assert!(t.disagreements.is_empty(), "{:#?}", t.disagreements);
    assert!(t.yes > 25 && t.yes < 225, "unbalanced sample: {} yes of {}", t.yes, t.cases);
}

#[test]
fn exactness_matches_set_comparison() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let t = exactness_oracle_cases(&mut rng, 250);
    assert!(t.disagreements.is_empty(), "{:#?}", t.disagreements);
    assert!(t.yes > 10 && t.yes < 240, "unbalanced sample: {} exact of {}", t.yes, t.cases);
}
