mod field;
mod mumford;
mod poly;
mod slice;

pub use field::{Field, PrimeField, Rationals};
pub use mumford::{divisor_to_uvw, uvw_to_divisor, CurveData, Divisor, DivisorPoint, MumfordTriple};
pub use poly::Poly;
pub use slice::{char_poly, check_point, triple_to_matrix, Block, SliceMatrix, SliceReport};
