#![allow(dead_code)]

use qmonadic::quantifier::{diagram_of, greechie_candidates};
use qmonadic::FiniteOl;

/// Boolean algebras up to 16 elements, MO2, MO3 and the orthomodular
/// pastings of at most `blocks` three-atom blocks.
pub fn omls(blocks: usize) -> Vec<FiniteOl> {
    let mut out: Vec<FiniteOl> = (1..=4).map(FiniteOl::boolean).collect();
    out.push(FiniteOl::mo(2));
    out.push(FiniteOl::mo(3));
    for b in 1..=blocks {
        out.extend(
            greechie_candidates(b)
                .iter()
                .filter_map(|c| diagram_of(c).to_lattice().ok())
                .filter(FiniteOl::is_oml),
        );
    }
    out
}
