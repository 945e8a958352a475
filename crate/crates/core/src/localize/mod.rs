//! Localization data, the equivariant complex `C_equiv`, the localization
//! maps `λ` and `Λ^(m)`, and the twisted differential.

pub mod blocks;
pub mod datum;
pub mod equiv;
pub mod lambda;
pub mod report;
pub mod twisted;

pub use datum::{assemble_total, total_basis, DatumReport, LocalizationDatum, TotalComplex};
pub use equiv::{build_equiv, build_equiv_at, EquivComplex};
pub use lambda::{
    bare_lambda, cokernel_poly, format_laurent, lambda_on_powers, minimal_m, normalized_lambda, presentation,
    BareLambda, InvCohomology, LaurentPolyZ, LocalizationReport, MatrixDoc,
};
pub use report::{smith_report, SmithReport};
pub use twisted::{poly_rank, twisted_diff, LaurentPoly, TwistedDatum, TwistedReport};

/// Checks a datum; see [`LocalizationDatum::validate`].
pub fn validate_datum(d: &LocalizationDatum) -> crate::Result<DatumReport> {
    d.validate()
}
