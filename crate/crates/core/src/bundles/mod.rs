//! Split bundles on P¹, maps between them, and kernel and cokernel models.

pub mod generic;
pub mod kernel;
pub mod map;
pub mod splitting;

pub use generic::{generic_kernel_splitting, phi_witness, GenericKernel};
pub use kernel::{cokernel_model, kernel_model, kernel_splitting, QuotientModel, SubbundleModel};
pub use map::{forms_to_vector, section_dims, section_offsets, vector_to_forms, BundleMap, RankCertificate};
pub use splitting::{h0_line, Predicates, SplittingType};
