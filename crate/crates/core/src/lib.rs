//! Exact combinatorics for multizeta values: double-shuffle word algebras,
//! depth-graded dimensions, cell-forms on genus-zero moduli spaces, formal
//! cell-zeta reductions, partial compactifications and boundary divisors.

pub mod combo;
pub mod linalg;
pub mod words;
pub mod depthgraded;
pub mod polygons;
pub mod insertion;
pub mod picard;
pub mod partialcohom;
pub mod cellzeta;
pub mod verify;
