//! Multigraded homological algebra of monomial quotient rings `R = S/I`:
//! Poincaré series of the residue field and their denominators, deviations,
//! Koszul homology and Golod certificates, Taylor, Scarf and Eagon
//! complexes, and LCM-lattice isomorphisms.
//!
//! All arithmetic is exact. Linear algebra runs over any [`field::Field`];
//! series coefficients are arbitrary-precision integers.

pub mod complex;
pub mod denominator;
pub mod deviation;
pub mod eagon;
pub mod error;
pub mod field;
pub mod lattice;
pub mod linalg;
pub mod monomial;
pub mod resolution;
pub mod series;

pub use complex::{FreeComplex, GradedDims, RingContext};
pub use denominator::{candidate_terms, denominator, verify_lcm_coefficients, Candidate};
pub use deviation::{deviations, series_from_deviations, DeviationTable};
pub use eagon::{eagon_ranks, eagon_resolution};
pub use error::{Error, Result};
pub use field::{Field, PrimeField, Rational, RationalField};
pub use lattice::{GcdGraph, LatticeMap, LcmLattice};
pub use monomial::{MonomialIdeal, Multidegree, Polarization};
pub use resolution::{
    golod_denominator, is_golod_generic, is_golod_truncated, koszul_homology_algebra, resolve_residue_field,
};
pub use series::BigradedSeries;
