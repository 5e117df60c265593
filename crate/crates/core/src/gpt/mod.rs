//! State spaces, effects and observables.

pub mod observable;
pub mod qubit;
pub mod space;

pub use observable::{Effect, Observable, Outcome};
pub use qubit::{qubit_to_vector, QubitEffect, QubitObservable, QubitSpace};
pub use space::{EffectSpace, SpaceDiagnostic, StateSpace};
