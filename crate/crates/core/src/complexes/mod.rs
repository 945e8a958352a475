//! Graded complexes over F2 and F2[[q]], cohomology, chain maps and the
//! spectral sequence of the q-filtration.

pub mod basis;
pub mod chain_map;
pub mod complex;
pub mod graded;
pub mod spectral;

pub use basis::{Generator, GradedBasis};
pub use chain_map::{induced_map_on_cohomology, ChainMap, InducedMap};
pub use complex::{assemble_terms, cohomology_f2, DifferentialReport, GradedComplex, Ring};
pub use graded::{module_structure, CohomologyData, GradedF2, ModuleStructure, Window};
pub use spectral::{ss_pages, Page, SpectralReport};
