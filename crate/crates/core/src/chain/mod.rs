//! Graded chain complexes, chain maps and their homology.

pub mod complex;
pub mod homology;
pub mod map;
pub mod ops;

pub use complex::{
    boundary_of, ensure_valid, is_boundary, is_cycle, reduce_complex_mod2, validate_against,
    validate_complex, Chain, ChainComplex, SliceTag, Violation,
};
pub use homology::{homology, DegreeHomology, HomologyReport};
pub use map::{compose, ensure_chain_map, validate_chain_map, ChainMap};
pub use ops::{mapping_cylinder, telescope, tensor_product, Cylinder};
