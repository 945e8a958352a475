//! Exact homological algebra for Z/2-equivariant chain complexes over F2[[q]].
//!
//! Modules, from the bottom up:
//! - [`seriesalg`]: truncated power series, polynomial and F2 matrices, Smith form over F2[[q]].
//! - [`complexes`]: graded complexes, cohomology, chain maps, spectral sequence of the q-filtration.
//! - [`borel`]: Borel complexes and their module invariants.
//! - [`localize`]: localization data, the equivariant complex, localization maps and reports.
//! - [`flowmodel`]: finite flow systems with involution and their derived data.
//! - [`slicecurve`]: Mumford triples, divisors and slice matrices over exact fields.
//! - [`io`]: JSON documents for all of the above.

pub mod borel;
pub mod complexes;
pub mod error;
pub mod flowmodel;
pub mod io;
pub mod localize;
pub mod seriesalg;
pub mod slicecurve;

pub use error::{Error, Result};
