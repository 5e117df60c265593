//! Named theories and observables: classical simplices, the square bit,
//! regular polygons with their irreducible catalogs, and qubit examples.

pub mod polygon;
pub mod qubit;
pub mod theories;

pub use polygon::{
    hexagon_explicit_certificate, hexagon_noise_example, polygon, polygon_count_by_index_rules,
    polygon_count_formula, polygon_dichotomic_count, polygon_irreducibles, polygon_triples_by_index_rules,
    HexagonNoise, PolygonTheory, POLYGON_N_MAX,
};
pub use qubit::{
    c_component, c_t, noisy_axis, octahedron_test, qubit_compatibility_bracket, qubit_suite, sharp_axis,
    tetrahedron, tetrahedron_frame, tetrahedron_vectors, trivial_qubit, BracketVerdict, CompatibilityBracket,
    OctahedronVerdict, QubitSuite, TetrahedronFrame,
};
pub use theories::{
    canonical_key, classical, enumerate_irreducibles, irreducible_catalog, square_bit, Classical,
    IrreducibleCatalog, SquareBit,
};
