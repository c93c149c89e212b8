//! Dunkl harmonics on the sphere, the Bannai-Ito basis functions, the
//! weighted quadrature and the overlap coefficients.

pub mod basis;
pub mod checks;
pub mod expansion;
pub mod jacobi;
pub mod overlap;
pub mod quadrature;
pub mod radical;

pub use basis::{admissible_indices, bi_basis, dunkl_harmonic, Family, HarmonicIndex, SphereFunction};
pub use expansion::harmonic_expansion;
pub use jacobi::jacobi_eval;
pub use overlap::{overlap_matrix, racah_closed_form};
pub use quadrature::{build_quadrature, QuadratureRule};
