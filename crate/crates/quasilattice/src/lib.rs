//! Construction of self-similar cut-and-project point patterns from
//! Pisot-unit iterated function systems.
//!
//! The library works over a real or complex algebraic number field carrying
//! one distinguished "physical" embedding and one or more "internal"
//! (conjugate) embeddings. An expanding affine system g_k(x) = beta x + z_k
//! with a Pisot unit beta induces contracting conjugate systems in the
//! internal planes; their attractors act as windows of a cut-and-project
//! scheme, and the maximal self-similar point set is assembled in three
//! steps: enumerate a candidate core, prune it to the true core, and extend
//! the core under the expanding maps to any radius.
//!
//! - [`ring`]: exact integer arithmetic in the coefficient ring, Galois
//!   automorphisms, and the physical/internal embeddings.
//! - [`ifs`]: validated expanding systems and their contracting conjugates,
//!   with ball bounds for cycles and attractors.
//! - [`pipeline`]: the three construction steps, the stabilization search for
//!   the enumeration box, and an independent membership oracle.
//! - [`analysis`]: cyclic components, decoration statistics, minimum
//!   distances, and the neighbor-distance law.
//! - [`render`]: SVG rendering and point-set import/export.

pub mod analysis;
pub mod error;
pub mod ifs;
pub mod pipeline;
pub mod render;
pub mod ring;

pub use error::{Error, Result};
