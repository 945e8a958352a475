use std::collections::BTreeMap;

use serde::Serialize;

use crate::complexes::{CohomologyData, GradedF2};
use crate::error::{Error, Result};
use crate::seriesalg::{smith_form, BitMatrix, BitVec, ModuleInvariants, QSeries, SparseQMatrix};

use super::blocks::{dq, lift, place, shift};
use super::equiv::EquivComplex;

/// `λ(b, c) = c + 𝐗∂c + 𝐒 G D2 ∂²c` as a matrix from `C_equiv` to
/// `C_inv[[q]] / q^levels`.
#[derive(Clone, Debug)]
pub struct BareLambda {
    pub matrix: BitMatrix,
    pub levels: usize,
}

pub fn bare_lambda(e: &EquivComplex) -> Result<BareLambda> {
    let d = &e.datum;
    let (nn, ni, l) = (e.n_non(), e.n_inv(), e.levels);
    let dqi = dq(ni, l);
    let dqn = dq(nn, l);
    let mut on_c = BitMatrix::identity(ni * l);
    let mut dq_pow = dqi.clone();
    for k in 0..d.x.len() {
        on_c.add_assign(&lift(&d.x_at(k), l).mul(&dq_pow));
        dq_pow = dqi.mul(&dq_pow);
    }
    let tail = e.g.mul(&lift(&d.d2, l)).mul(&dqi).mul(&dqi);
    let mut dqn_pow = BitMatrix::identity(nn * l);
    for k in 0..d.s1.len() {
        on_c.add_assign(&lift(&d.s1_at(k), l).mul(&dqn_pow).mul(&tail));
        dqn_pow = dqn.mul(&dqn_pow);
    }
    let mut matrix = BitMatrix::zeros(ni * l, e.dim());
    place(&mut matrix, &on_c, 0, nn);

    let lhs = matrix.mul(&e.d);
    let rhs = lift(&d.d_inv, l).mul(&matrix);
    if lhs != rhs {
        let (_, x) = lhs.add(&rhs).entries().next().expect("nonzero difference");
        return Err(Error::ChainMapViolated(e.names[x].clone()));
    }
    Ok(BareLambda { matrix, levels: l })
}

/// Cohomology of `(C_inv, d_inv)` with its rows ordered by degree.
#[derive(Clone, Debug)]
pub struct InvCohomology {
    pub complex: GradedF2,
    pub data: CohomologyData,
    /// `(degree, index within degree)` per row.
    pub rows: Vec<(i64, usize)>,
    pub names: Vec<String>,
}

impl InvCohomology {
    pub fn new(e: &EquivComplex) -> Result<Self> {
        let d = &e.datum;
        let complex = GradedF2::new(d.c_inv.degrees(), d.d_inv.clone())?;
        let data = complex.cohomology();
        let mut rows = Vec::new();
        let mut names = Vec::new();
        for (&n, &k) in data.dims().iter() {
            for t in 0..k {
                rows.push((n, t));
                let rep = &data.reps(n)[t];
                names.push(rep.ones().map(|i| d.c_inv.name(i).to_string()).collect::<Vec<_>>().join("+"));
            }
        }
        Ok(InvCohomology {
            complex,
            data,
            rows,
            names,
        })
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Expands `w ∈ C_inv[[q]] / q^levels` into classes: row index to the
    /// set of q-exponents where that class appears.
    pub fn expand(&self, e: &EquivComplex, w: &BitVec) -> Result<BTreeMap<usize, Vec<usize>>> {
        let ni = e.n_inv();
        let mut out: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for j in 0..e.levels {
            let comp = BitVec::from_indices(ni, w.ones().filter(|&t| t / ni == j).map(|t| t % ni));
            if comp.is_zero() {
                continue;
            }
            let degs: Vec<i64> = comp.ones().map(|i| e.datum.c_inv.degree(i)).collect();
            let n = degs[0];
            if degs.iter().any(|&x| x != n) {
                return Err(Error::InvariantViolated(format!("inhomogeneous image at q^{j}")));
            }
            let coords = self
                .data
                .coordinates(n, &comp)
                .ok_or_else(|| Error::ChainMapViolated(format!("image at q^{j} is not a d_inv cocycle")))?;
            for t in coords.ones() {
                let row = self.rows.iter().position(|&r| r == (n, t)).expect("row present");
                out.entry(row).or_default().push(j);
            }
        }
        Ok(out)
    }
}

/// `λ Q^k g` expanded in `H(C_inv)[[q]]`, per module generator `g` of
/// `H(C_equiv)`; one entry per class that appears, mapped to its exponents.
pub fn lambda_on_powers(
    e: &EquivComplex,
    lam: &BareLambda,
    inv: &InvCohomology,
    kmax: usize,
) -> Result<Vec<Vec<BTreeMap<usize, Vec<usize>>>>> {
    let mut out = Vec::new();
    for (_, g) in &e.structure.generators {
        let mut row = Vec::new();
        let mut v = g.clone();
        for _ in 0..=kmax {
            row.push(inv.expand(e, &lam.matrix.apply(&v))?);
            v = e.q.apply(&v);
        }
        out.push(row);
    }
    Ok(out)
}

fn max_q_degree(e: &EquivComplex, v: &BitVec) -> usize {
    v.ones().map(|i| e.q_degree(i)).max().unwrap_or(0)
}

/// Whether `q λ Q^m = λ Q^{m+1}` on every basis element of q-degree at most
/// `levels - m - 3`, where truncation cannot interfere.
fn linear_at(e: &EquivComplex, lam: &BareLambda, q_pow_m: &BitMatrix, m: usize) -> bool {
    let qi = shift(e.n_inv(), e.levels);
    let lhs = qi.mul(&lam.matrix).mul(q_pow_m);
    let rhs = lam.matrix.mul(&e.q).mul(q_pow_m);
    let cap = e.levels.saturating_sub(m + 3);
    (0..e.dim())
        .filter(|&i| e.q_degree(i) <= cap)
        .all(|i| lhs.col(i) == rhs.col(i))
}

/// Minimal `m` with `q λ Q^m = λ Q^{m+1}`, certified at `m + 1` and `m + 2`.
pub fn minimal_m(e: &EquivComplex, lam: &BareLambda) -> Result<usize> {
    let bound = e.m_bound();
    let mut pow = BitMatrix::identity(e.dim());
    let mut found = None;
    for m in 0..=bound {
        if linear_at(e, lam, &pow, m) {
            found = Some((m, pow.clone()));
            break;
        }
        pow = e.q.mul(&pow);
    }
    let (m, mut pow) = found.ok_or(Error::NoLinearizingM(bound))?;
    for extra in 1..=2 {
        pow = e.q.mul(&pow);
        if !linear_at(e, lam, &pow, m + extra) {
            return Err(Error::InvariantViolated(format!(
                "q λ Q^m = λ Q^(m+1) holds at m = {m} but not at m = {}",
                m + extra
            )));
        }
    }
    Ok(m)
}

/// Presentation of `Λ^(m) = λ Q^m`: rows are a basis of `H(C_inv)`, columns
/// the module generators of `H(C_equiv)`.
pub fn presentation(
    e: &EquivComplex,
    lam: &BareLambda,
    inv: &InvCohomology,
    m: usize,
) -> Result<SparseQMatrix> {
    let gens = &e.structure.generators;
    let prec = e.levels + m + 1;
    let mut mat = SparseQMatrix::new(
        inv.names.clone(),
        gens.iter().map(|(n, v)| format!("{}@{n}", describe(e, v))).collect(),
    )
    .with_degrees(inv.rows.iter().map(|r| r.0).collect(), gens.iter().map(|g| g.0 + m as i64).collect());
    for (col, (_, g)) in gens.iter().enumerate() {
        let mut v = g.clone();
        for _ in 0..m {
            v = e.q.apply(&v);
        }
        if max_q_degree(e, &v) + 1 >= e.levels {
            return Err(Error::PrecisionExhausted(format!("Q^{m} of a generator leaves the truncation")));
        }
        for (row, exps) in inv.expand(e, &lam.matrix.apply(&v))? {
            let mut s = QSeries::zero(prec);
            for j in exps {
                s = s.add(&QSeries::monomial(j, prec));
            }
            mat.set(row, col, s);
        }
    }
    Ok(mat)
}

/// Names the basis elements in a vector, joined by `+`.
pub fn describe(e: &EquivComplex, v: &BitVec) -> String {
    let parts: Vec<&str> = v.ones().map(|i| e.names[i].as_str()).collect();
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("+")
    }
}

/// `(row degree, pivot valuation - m)` over all pivots of the presentation.
fn pivot_profile(p: &SparseQMatrix, m: usize) -> Result<Vec<(i64, i64)>> {
    let sf = smith_form(p)?;
    let deg = p.row_degrees().expect("degrees attached");
    let mut out: Vec<(i64, i64)> = sf
        .pivots
        .iter()
        .map(|pv| (deg[pv.row], pv.valuation as i64 - m as i64))
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// Integer Laurent polynomial in `t`, exponent to coefficient.
pub type LaurentPolyZ = BTreeMap<i64, i64>;

fn add_term(p: &mut LaurentPolyZ, exp: i64, coeff: i64) {
    let c = p.entry(exp).or_insert(0);
    *c += coeff;
    if *c == 0 {
        p.remove(&exp);
    }
}

/// Renders a Laurent polynomial in `t`, highest exponent first.
pub fn format_laurent(p: &LaurentPolyZ) -> String {
    if p.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (&e, &c)) in p.iter().rev().enumerate() {
        let sign = if c < 0 { "-" } else if i > 0 { "+" } else { "" };
        let mag = c.abs();
        let mono = match e {
            0 => String::new(),
            1 => "t".to_string(),
            _ => format!("t^{e}"),
        };
        let body = match (mag, mono.is_empty()) {
            (_, true) => mag.to_string(),
            (1, false) => mono,
            (_, false) => format!("{mag}{mono}"),
        };
        if i > 0 {
            out.push(' ');
            out.push_str(sign);
            out.push(' ');
        } else {
            out.push_str(sign);
        }
        out.push_str(&body);
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalizationReport {
    pub m: usize,
    /// `λ` on module generators, rows `H(C_inv)`.
    pub lambda_matrix: MatrixDoc,
    /// `Λ^(m) = λ Q^m` on module generators.
    pub lambda_m_matrix: MatrixDoc,
    pub equiv_invariants: ModuleInvariants,
    /// Kernel of `Λ^(m)`: the torsion submodule of `H(C_equiv)`.
    pub kernel: ModuleInvariants,
    pub cokernel: ModuleInvariants,
    pub r_free: usize,
    pub r_tor: usize,
    pub dim_h_inv: usize,
    pub rank_lambda: usize,
    /// `(degree, exponent - m)` over all Smith pivots, including units.
    pub pivot_profile: Vec<(i64, i64)>,
    pub coker_poly: LaurentPolyZ,
    pub coker_poly_text: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MatrixDoc {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    /// `(row, col, entry)` for nonzero entries.
    pub entries: Vec<(usize, usize, String)>,
}

impl MatrixDoc {
    pub fn from_series(m: &SparseQMatrix) -> Self {
        MatrixDoc {
            rows: m.row_labels().to_vec(),
            cols: m.col_labels().to_vec(),
            entries: m
                .entries()
                .map(|(&(i, j), v)| (i, j, v.to_poly().to_string()))
                .collect(),
        }
    }
}

/// `P_coker(t) = t^{-m} Σ (-1)^{deg a_k} t^{d_k}` over the torsion summands
/// `F2[[q]]/q^{d_k + 1}` of the cokernel of `Λ^(m)`.
pub fn cokernel_poly(r: &LocalizationReport) -> LaurentPolyZ {
    poly_from_profile(&r.pivot_profile, r.m, r.m)
}

/// The cokernel polynomial computed from the presentation at `m_prime >= m0`
/// with pivots `(deg, e - m_prime)`: a summand contributes exactly when it
/// was already torsion at `m0`, so the result does not depend on `m_prime`.
fn poly_from_profile(profile: &[(i64, i64)], m0: usize, m_prime: usize) -> LaurentPolyZ {
    let mut p = LaurentPolyZ::new();
    let shift = m_prime as i64 - m0 as i64;
    for &(deg, rel) in profile {
        let e = rel + m_prime as i64;
        if e > shift {
            let sign = if deg.rem_euclid(2) == 0 { 1 } else { -1 };
            add_term(&mut p, e - 1 - m_prime as i64, sign);
        }
    }
    p
}

/// Normalized localization map with all consistency checks.
pub fn normalized_lambda(e: &EquivComplex) -> Result<LocalizationReport> {
    let lam = bare_lambda(e)?;
    let inv = InvCohomology::new(e)?;
    let m = minimal_m(e, &lam)?;

    let p0 = presentation(e, &lam, &inv, 0)?;
    let pm = presentation(e, &lam, &inv, m)?;
    let sf = smith_form(&pm)?;
    let invariants = e.structure.invariants.clone();
    let (r_free, r_tor) = (invariants.r_free(), invariants.r_tor());
    let dim_h_inv = inv.dim();
    if sf.rank() != r_free || r_free != dim_h_inv {
        return Err(Error::InvariantViolated(format!(
            "rank of Λ^({m}) is {}, free rank of H(C_equiv) is {r_free}, dim H(C_inv) is {dim_h_inv}",
            sf.rank()
        )));
    }

    let profile = pivot_profile(&pm, m)?;
    let cokernel = ModuleInvariants::new(
        vec![],
        profile
            .iter()
            .filter(|&&(_, rel)| rel + m as i64 > 0)
            .map(|&(deg, rel)| (deg, (rel + m as i64) as u32))
            .collect(),
    );
    let coker_poly = poly_from_profile(&profile, m, m);
    for extra in 1..=2 {
        let mp = m + extra;
        let p = presentation(e, &lam, &inv, mp)?;
        let prof = pivot_profile(&p, mp)?;
        if prof != profile {
            return Err(Error::InvariantViolated(format!(
                "Smith profile of Λ^({mp}) differs from that of Λ^({m})"
            )));
        }
        if poly_from_profile(&prof, m, mp) != coker_poly {
            return Err(Error::InvariantViolated(format!("cokernel polynomial changes at m = {mp}")));
        }
    }

    let kernel = ModuleInvariants::new(vec![], invariants.torsion.clone());
    Ok(LocalizationReport {
        m,
        lambda_matrix: MatrixDoc::from_series(&p0),
        lambda_m_matrix: MatrixDoc::from_series(&pm),
        equiv_invariants: invariants,
        kernel,
        cokernel,
        r_free,
        r_tor,
        dim_h_inv,
        rank_lambda: sf.rank(),
        pivot_profile: profile,
        coker_poly_text: format_laurent(&coker_poly),
        coker_poly,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::GradedBasis;
    use crate::localize::{build_equiv, LocalizationDatum};

    fn real_line() -> LocalizationDatum {
        let mut d = LocalizationDatum::zero(
            GradedBasis::new([("γ", 0)]).unwrap(),
            GradedBasis::new([("β", 0)]).unwrap(),
            1,
        );
        d.d1.set(0, 0, true);
        d
    }

    fn circle() -> LocalizationDatum {
        let mut d = LocalizationDatum::zero(
            GradedBasis::new([("N", 0), ("S", 0)]).unwrap(),
            GradedBasis::new([("E", 1)]).unwrap(),
            0,
        );
        d.d2.set(0, 0, true);
        d.d2.set(0, 1, true);
        d
    }

    #[test]
    fn real_line_lambda_lowers_q_power() {
        let e = build_equiv(&real_line()).unwrap();
        let lam = bare_lambda(&e).unwrap();
        let inv = InvCohomology::new(&e).unwrap();
        let table = lambda_on_powers(&e, &lam, &inv, 5).unwrap();
        assert_eq!(table.len(), 1);
        assert!(table[0][0].is_empty());
        for k in 1..=5 {
            assert_eq!(table[0][k], BTreeMap::from([(0, vec![k - 1])]));
        }
        let r = normalized_lambda(&e).unwrap();
        assert_eq!(r.m, 1);
        assert!(r.coker_poly.is_empty());
        assert_eq!(r.cokernel, ModuleInvariants::default());
    }

    #[test]
    fn circle_cokernel_polynomial_is_one() {
        let e = build_equiv(&circle()).unwrap();
        let r = normalized_lambda(&e).unwrap();
        assert_eq!(r.m, 0);
        assert_eq!(r.cokernel, ModuleInvariants::new(vec![], vec![(0, 1)]));
        assert_eq!(r.coker_poly, BTreeMap::from([(0, 1)]));
        assert_eq!(r.coker_poly_text, "1");
    }

    #[test]
    fn laurent_formatting() {
        let p = BTreeMap::from([(-1, 1), (0, -2), (2, 1)]);
        assert_eq!(format_laurent(&p), "t^2 - 2 + t^-1");
    }
}
