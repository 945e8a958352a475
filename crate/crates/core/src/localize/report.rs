use serde::Serialize;

use crate::complexes::{cohomology_f2, ss_pages, GradedF2};
use crate::error::{Error, Result};

use super::datum::{assemble_total, LocalizationDatum};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmithReport {
    pub dim_h_inv: usize,
    pub dim_h_total: usize,
    pub r_free: usize,
    pub r_tor: usize,
    /// `dim H(C) = dim H(C_inv)`.
    pub equality: bool,
    pub torsion_free: bool,
    pub e1_degenerate: bool,
}

/// Compares `H(C_inv)`, `H(C)` and the Borel module invariants, and checks
/// the equality case against degeneration of the q-adic spectral sequence.
pub fn smith_report(d: &LocalizationDatum) -> Result<SmithReport> {
    let total = assemble_total(d)?;
    let dim_h_inv = GradedF2::new(d.c_inv.degrees(), d.d_inv.clone())?
        .cohomology()
        .total_dim();
    let dim_h_total: usize = cohomology_f2(&total.involutive.complex)?.values().sum();
    let inv = total.borel.module_invariants()?;
    let (r_free, r_tor) = (inv.r_free(), inv.r_tor());
    if r_free != dim_h_inv {
        return Err(Error::InvariantViolated(format!(
            "free rank {r_free} differs from dim H(C_inv) = {dim_h_inv}"
        )));
    }
    if r_free + 2 * r_tor != dim_h_total {
        return Err(Error::InvariantViolated(format!(
            "{r_free} + 2·{r_tor} differs from dim H(C) = {dim_h_total}"
        )));
    }
    let max_e = inv.torsion.iter().map(|t| t.1 as usize).max().unwrap_or(0);
    let pages = max_e + 2;
    let ss = ss_pages(&total.borel.assembled, pages, pages + 1)?;
    let e1_degenerate = ss.degenerates_at == Some(1);
    let equality = dim_h_total == dim_h_inv;
    let torsion_free = inv.is_torsion_free();
    if e1_degenerate != equality {
        return Err(Error::InvariantViolated(format!(
            "E1 degeneration is {e1_degenerate} but the Smith equality is {equality}"
        )));
    }
    Ok(SmithReport {
        dim_h_inv,
        dim_h_total,
        r_free,
        r_tor,
        equality,
        torsion_free,
        e1_degenerate,
    })
}
