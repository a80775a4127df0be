//! Quantum clocks and quantum dynamics on finite cyclic group algebras.
//!
//! The crate builds the strongly complementary pair of observables carried
//! by `C[Z_ω]`, attaches physical time and energy grids to it, and checks
//! numerically the algebraic laws that make dynamics, spectra and their
//! Fourier duality fit together:
//!
//! * [`tensor`] and [`process`]: dense complex tensors and lazily evaluated
//!   string diagrams over them;
//! * [`frobenius`] and [`coherent`]: †-Frobenius algebras and interacting
//!   (strongly complementary) pairs with their law reports;
//! * [`clock`]: time states, plane-wave energy states, translations and
//!   energy shifts;
//! * [`dynamics`] and [`spectra`]: dynamical systems as algebras of the
//!   clock monad, histories, projector-valued spectra, Stone reconstruction,
//!   ergodic averages and the Weyl exchange relation;
//! * [`dsl`]: a small term language for string diagrams with a built-in
//!   equation corpus;
//! * [`scaling`]: grid snapping and refinement studies.

pub mod clock;
pub mod coherent;
pub mod dsl;
pub mod dynamics;
pub mod frobenius;
pub mod lazy;
pub mod process;
pub mod report;
pub mod scaling;
pub mod spectra;
pub mod tensor;

pub use num_complex::Complex64 as C64;

pub use clock::{ClockError, ClockLabels, QuantumClock};
pub use coherent::CoherentGroup;
pub use dynamics::{DynamicalSystem, DynamicsError, History, Level};
pub use frobenius::{FrobeniusError, FrobeniusLawReport, FrobeniusStructure};
pub use process::Process;
pub use report::{LawCheck, LawReport};
pub use spectra::{ProjectorFamily, SpectraError};
pub use tensor::{approx_equal, compose, dagger, tensor_product, EqualityMode, EqualityReport, Tensor, TensorError, DEFAULT_TOL};
