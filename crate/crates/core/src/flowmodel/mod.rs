mod derive;
mod examples;
mod system;

pub use derive::{derive_operators, derive_zero_dim_operators, orbit_generator};
pub use examples::{generate_examples, product, EXAMPLE_NAMES};
pub use system::{cocycle_eval, Component, ComponentKind, FlowSystem, Line, OneDimModuli, Orbit, Point, Vertex, ZeroDimModuli};
