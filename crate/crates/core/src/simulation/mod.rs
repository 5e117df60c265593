//! Simulability of observables and the quantities built on it.

pub mod certificate;
pub mod closure;
pub mod compat;
pub mod dichotomic;
pub mod irreducible;
pub mod noise;
pub mod smin;

pub use certificate::{
    deduplicate_simulators, is_simulable, postprocess_certificate, simulation_program, Deduplicated,
    SimulationCertificate,
};
pub use closure::{check_closure_laws, noise_monotonicity_check, ClosureLaw, ClosureReport, MonotonicityReport};
pub use compat::{is_compatible, CompatibilityResult};
pub use dichotomic::{
    dichotomic_hull_necessary, dichotomic_hull_sufficient, Sufficiency, SufficiencyPattern,
};
pub use irreducible::{
    decompose_to_irreducibles, is_simulation_irreducible, verify_decomposition, IrreducibleDecomposition,
};
pub use noise::{noise_content, noise_content_closed_form, NoiseContentResult};
pub use smin::{smin, SminResult, DEFAULT_K_MAX};
