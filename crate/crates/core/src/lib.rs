//! Exact homotopy-theoretic bookkeeping for highly connected manifolds.
//!
//! The crate is organized bottom-up:
//!
//! * [`matrix`] — arbitrary-precision integer matrices and Smith normal form;
//! * [`group`] — finitely generated abelian groups in primary normal form;
//! * [`hom`] — homomorphisms with exact kernels and cokernels;
//! * [`extension`] — enumeration of abelian group extensions;
//! * [`tables`] — the checked-in table of low-stem homotopy groups of
//!   spheres, mod-p Moore spaces and eta-cone two-cell complexes;
//! * [`manifold`] — input descriptors and their (co)homology;
//! * [`splitting`] — the canonical suspension splitting and the attaching
//!   coefficient normal form;
//! * [`stable`] — stable-range cohomotopy via short exact sequences;
//! * [`cohomotopy`] — the per-degree cohomotopy calculator;
//! * [`report`] — deterministic text and JSON report rendering.

pub mod cohomotopy;
pub mod extension;
pub mod group;
pub mod hom;
pub mod manifold;
pub mod matrix;
pub mod report;
pub mod splitting;
pub mod stable;
pub mod tables;

pub use cohomotopy::{CohomotopyError, CohomotopyResult};
pub use group::{AbelianError, FgAbGroup};
pub use hom::GroupHom;
pub use manifold::{ManifoldDescriptor, ManifoldError};
pub use matrix::{IntMatrix, SmithForm};
pub use report::{Report, ReportOptions};
pub use splitting::{AttachingVector, NormalizedAttachment, WedgeDecomposition};
pub use stable::{SesDescriptor, StableError, StableInput};
