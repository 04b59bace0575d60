//! Exact Hochschild cohomology of finite-rank algebras over finite chain
//! rings `O/π^N`, with Bockstein maps, automorphism lifting and integrable
//! derivations.

pub mod algebra;
pub mod chainring;
pub mod derivlift;
pub mod error;
pub mod hochschild;
pub mod linalg;
pub mod morita;

pub use algebra::{Algebra, Bimodule, LinearMap, Shape};
pub use chainring::{ChainRing, RingElem, RingKind, RingSpec};
pub use error::{Error, Result};
pub use linalg::{Mat, ModulePresentation};
