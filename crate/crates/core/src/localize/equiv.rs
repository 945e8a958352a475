use crate::complexes::{module_structure, GradedF2, ModuleStructure, Window};
use crate::error::{Error, Result};
use crate::seriesalg::{geom_inv, BitMatrix, BitVec, Echelon, ModuleInvariants, QSeries};

use super::blocks::{dq, eval0, lift, place, shift};
use super::datum::{assemble_total, LocalizationDatum, TotalComplex};

/// `C_equiv = C_non ⊕ C_inv[[q]]` truncated below `q^levels`, with
/// `d_equiv` and `Q_equiv` as explicit matrices.
///
/// Index `i` is `b_i ∈ C_non`; index `n_non + j * n_inv + i` is `c_i q^j`.
/// The truncation is a subcomplex; cohomology and the `Q`-action are exact
/// through `window.top`.
#[derive(Clone, Debug)]
pub struct EquivComplex {
    pub datum: LocalizationDatum,
    pub precision: usize,
    pub levels: usize,
    pub nilpotency_index: usize,
    pub degrees: Vec<i64>,
    pub names: Vec<String>,
    pub d: BitMatrix,
    pub q: BitMatrix,
    /// `G = Σ U^k ∂_q^k` on `C_non[[q]] / q^levels`.
    pub g: BitMatrix,
    pub complex: GradedF2,
    pub window: Window,
    pub structure: ModuleStructure,
    pub total: TotalComplex,
    pub borel_invariants: ModuleInvariants,
}

impl EquivComplex {
    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn n_non(&self) -> usize {
        self.datum.n_non()
    }

    pub fn n_inv(&self) -> usize {
        self.datum.n_inv()
    }

    pub fn iq_index(&self, i: usize, j: usize) -> usize {
        self.n_non() + j * self.n_inv() + i
    }

    /// q-degree of a basis element (0 on `C_non`).
    pub fn q_degree(&self, idx: usize) -> usize {
        if idx < self.n_non() {
            0
        } else {
            (idx - self.n_non()) / self.n_inv()
        }
    }

    /// Search bound for the normalizing exponent.
    pub fn m_bound(&self) -> usize {
        self.n_non() + self.n_inv() + self.nilpotency_index
    }

    pub fn invariants(&self) -> &ModuleInvariants {
        &self.structure.invariants
    }
}

struct Layout {
    lo: i64,
    hi: i64,
    top: i64,
    levels: usize,
}

fn layout(d: &LocalizationDatum, precision: usize, bound: usize) -> Layout {
    let non = d.c_non.degrees();
    let inv: Vec<i64> = d.c_inv.degrees().iter().map(|a| a + d.i_anti).collect();
    let all: Vec<i64> = non.iter().chain(&inv).copied().collect();
    let lo = all.iter().copied().min().unwrap_or(0);
    let hi = all.iter().copied().max().unwrap_or(0);
    let levels = (hi - lo) as usize + precision + bound + 6;
    let top = match inv.iter().copied().min() {
        Some(lo_c) => lo_c + levels as i64 - 2,
        None => hi + precision as i64 + 1,
    };
    Layout { lo, hi, top, levels }
}

/// `G` on `C_non[[q]] / q^levels`.
fn geometric(u: &BitMatrix, nil: usize, levels: usize) -> BitMatrix {
    let n = u.nrows();
    let lu = lift(u, levels);
    let dqn = dq(n, levels);
    let mut g = BitMatrix::zeros(n * levels, n * levels);
    let mut term = BitMatrix::identity(n * levels);
    for _ in 0..nil.max(1) {
        g.add_assign(&term);
        term = lu.mul(&dqn).mul(&term);
    }
    g
}

/// Compares the materialized `G D2` with the series evaluation of
/// `(id + U ∂_q)^{-1} D2` on every basis element of `C_inv[[q]]`.
fn cross_check_geometric(d: &LocalizationDatum, g_d2: &BitMatrix, levels: usize) -> Result<()> {
    let (nn, ni) = (d.n_non(), d.n_inv());
    for j in 0..levels {
        for i in 0..ni {
            let target: Vec<QSeries> = (0..nn)
                .map(|y| {
                    if d.d2.get(y, i) {
                        QSeries::monomial(j, levels)
                    } else {
                        QSeries::zero(levels)
                    }
                })
                .collect();
            let series = geom_inv(&d.u, &target)?;
            let col = g_d2.col(j * ni + i);
            for (y, s) in series.iter().enumerate() {
                for k in 0..s.precision() {
                    if s.coeff(k) != col.get(k * nn + y) {
                        return Err(Error::InvariantViolated(format!(
                            "geometric series disagrees at {} q^{k}",
                            d.c_non.name(y)
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

fn build_at(datum: &LocalizationDatum, total: &TotalComplex, nil: usize, precision: usize) -> Result<EquivComplex> {
    let (nn, ni) = (datum.n_non(), datum.n_inv());
    let bound = nn + ni + nil;
    let Layout { lo, hi, top, levels } = layout(datum, precision, bound);
    let dim = nn + ni * levels;

    let mut degrees = datum.c_non.degrees();
    let mut names: Vec<String> = datum.c_non.names().into_iter().map(|s| format!("b:{s}")).collect();
    for j in 0..levels {
        for i in 0..ni {
            degrees.push(datum.c_inv.degree(i) + datum.i_anti + j as i64);
            names.push(format!("c:{}·q^{j}", datum.c_inv.name(i)));
        }
    }

    let g = geometric(&datum.u, nil, levels);
    let g_d2 = g.mul(&lift(&datum.d2, levels));
    cross_check_geometric(datum, &g_d2, levels)?;

    let dq_inv = dq(ni, levels);
    let dq_non = dq(nn, levels);
    let ld1 = lift(&datum.d1, levels);
    let right = ld1.mul(&g_d2).mul(&dq_inv);
    let left = ld1.mul(&dq_non).mul(&g_d2);
    if right != left {
        return Err(Error::InvariantViolated(
            "D1 G D2 ∂_q depends on the placement of ∂_q".into(),
        ));
    }

    let mut d = BitMatrix::zeros(dim, dim);
    place(&mut d, &datum.d_non, 0, 0);
    place(&mut d, &eval0(nn, levels).mul(&g_d2), 0, nn);
    place(&mut d, &lift(&datum.d_inv, levels).add(&right), nn, nn);

    let mut q = BitMatrix::zeros(dim, dim);
    place(&mut q, &datum.u, 0, 0);
    place(&mut q, &datum.d1, nn, 0);
    place(&mut q, &shift(ni, levels), nn, nn);

    let complex = GradedF2::new(degrees.clone(), d.clone())?.with_action_through(q.clone(), top - 1)?;
    let window = Window { lo, hi, top };
    let structure = module_structure(&complex, window)?;

    Ok(EquivComplex {
        datum: datum.clone(),
        precision,
        levels,
        nilpotency_index: nil,
        degrees,
        names,
        d,
        q,
        g,
        complex,
        window,
        structure,
        total: total.clone(),
        borel_invariants: ModuleInvariants::default(),
    })
}

/// Checks, degree by degree in the window, that inside the truncated Borel
/// complex the span `Z` of `(a q^j, 0, 0)` and their images is acyclic, that
/// `C_borel = Z ⊕ j(C_equiv)` with `j(b, c) = (0, b, c)`, and that `j`
/// intertwines the differentials and the q-actions modulo `Z`.
fn check_quotient(e: &EquivComplex) -> Result<()> {
    let borel = &e.total.borel;
    let base = borel.base.degrees();
    let nt = base.len();
    let nn = e.n_non();
    let (lo_t, hi_t) = borel.base.degree_range().unwrap_or((0, 0));
    let lb = e.levels + (hi_t - lo_t) as usize + 2;
    let trunc = borel.assembled.truncate(lb)?;
    let bd = trunc.d();
    let bq = trunc.action().expect("truncation carries q");
    let total_len = nt * lb;

    let a_part = |n: i64| -> Vec<BitVec> {
        (0..lb)
            .flat_map(|j| (0..nn).map(move |x| (j, x)))
            .filter(|&(j, x)| base[x] + j as i64 == n)
            .map(|(j, x)| BitVec::unit(total_len, j * nt + x))
            .collect()
    };
    let z_basis = |n: i64| -> Echelon {
        let mut ech = Echelon::new(total_len);
        for v in a_part(n) {
            ech.insert(&v);
        }
        for v in a_part(n - 1) {
            ech.insert(&bd.apply(&v));
        }
        ech
    };
    let rank_of = |vs: Vec<BitVec>| {
        let mut ech = Echelon::new(total_len);
        vs.iter().filter(|v| ech.insert(v)).count()
    };
    let embed = |idx: usize| -> usize {
        if idx < nn {
            nn + idx
        } else {
            let ni = e.n_inv();
            let (j, i) = ((idx - nn) / ni, (idx - nn) % ni);
            j * nt + 2 * nn + i
        }
    };
    let embed_vec = |v: &BitVec| BitVec::from_indices(total_len, v.ones().map(embed));

    for n in e.window.lo..=e.window.top {
        let z = z_basis(n);
        let image_now = rank_of(a_part(n).iter().map(|v| bd.apply(v)).collect());
        let image_prev = rank_of(a_part(n - 1).iter().map(|v| bd.apply(v)).collect());
        let h = z.rank() - image_now - image_prev;
        if h != 0 {
            return Err(Error::AcyclicityFailed {
                degree: n,
                dimension: h,
            });
        }
        let eq_idx = e.complex.indices(n);
        let mut span = z.clone();
        let independent = eq_idx
            .iter()
            .filter(|&&i| span.insert(&BitVec::unit(total_len, embed(i))))
            .count();
        let borel_dim = trunc.indices(n).len();
        if independent != eq_idx.len() || span.rank() != borel_dim {
            return Err(Error::InvariantViolated(format!(
                "in degree {n} the Borel complex is not Z ⊕ C_equiv ({} + {} vs {borel_dim})",
                z.rank(),
                eq_idx.len()
            )));
        }
        if n < e.window.top {
            let z_next = z_basis(n + 1);
            for &i in eq_idx {
                let x = BitVec::unit(e.dim(), i);
                let jx = embed_vec(&x);
                let mut diff = bd.apply(&jx);
                diff.xor_assign(&embed_vec(&e.d.apply(&x)));
                if !z_next.contains(&diff) {
                    return Err(Error::ChainMapViolated(format!("d_equiv at {}", e.names[i])));
                }
                let mut qdiff = bq.apply(&jx);
                qdiff.xor_assign(&embed_vec(&e.q.apply(&x)));
                if !z_next.contains(&qdiff) {
                    return Err(Error::ChainMapViolated(format!("Q_equiv at {}", e.names[i])));
                }
            }
        }
    }
    Ok(())
}

/// Builds `C_equiv` at precision `n`, certifying its module invariants at
/// `n` and `2n` and against the Borel complex of the total complex.
pub fn build_equiv_at(datum: &LocalizationDatum, n: usize) -> Result<EquivComplex> {
    let report = datum.validate()?;
    let total = assemble_total(datum)?;
    let nil = report.nilpotency_index;
    let mut e = build_at(datum, &total, nil, n)?;
    let high = build_at(datum, &total, nil, 2 * n)?;
    if e.structure.invariants != high.structure.invariants {
        return Err(Error::PrecisionUnstable {
            low: n,
            high: 2 * n,
            detail: format!("{:?} vs {:?}", e.structure.invariants, high.structure.invariants),
        });
    }
    check_quotient(&e)?;
    let borel = total.borel.module_invariants_at(n)?;
    if borel != e.structure.invariants {
        return Err(Error::InvariantViolated(format!(
            "H(C_borel) = {borel:?} but H(C_equiv) = {:?}",
            e.structure.invariants
        )));
    }
    e.borel_invariants = borel;
    Ok(e)
}

pub fn build_equiv(datum: &LocalizationDatum) -> Result<EquivComplex> {
    let total = assemble_total(datum)?;
    build_equiv_at(datum, total.borel.default_precision())
}
