use std::collections::BTreeMap;

use crate::complexes::GradedBasis;
use crate::error::{Error, Result};
use crate::localize::LocalizationDatum;
use crate::seriesalg::BitMatrix;

use super::system::{cocycle_eval, FlowSystem, Orbit};

/// Name of the `C_non` generator of a free orbit.
pub fn orbit_generator(preferred: &str) -> String {
    format!("G{preferred}")
}

struct Bases {
    inv: GradedBasis,
    non: GradedBasis,
}

fn bases(s: &FlowSystem) -> Result<Bases> {
    let inv = GradedBasis::new(
        s.points
            .iter()
            .filter(|p| p.invariant)
            .map(|p| (p.name.clone(), p.index - s.i_anti)),
    )?;
    let non = GradedBasis::new(
        s.points
            .iter()
            .filter(|p| !p.invariant && p.preferred)
            .map(|p| (orbit_generator(&p.name), p.index)),
    )?;
    Ok(Bases { inv, non })
}

/// Row or column of a point's orbit: `(invariant, index)`.
fn slot(s: &FlowSystem, b: &Bases, point: &str) -> Result<(bool, usize)> {
    let p = s.point(point)?;
    if p.invariant {
        Ok((true, b.inv.lookup(&p.name)?))
    } else {
        Ok((false, b.non.lookup(&orbit_generator(s.orbit_rep(point)?))?))
    }
}

#[derive(Default)]
struct ZeroDimCounts {
    d_inv: Vec<(usize, usize)>,
    d_non: Vec<(usize, usize)>,
    u: Vec<(usize, usize)>,
    d1: Vec<(usize, usize)>,
    d2: Vec<(usize, usize)>,
    x0: Vec<(usize, usize)>,
    s1_0: Vec<(usize, usize)>,
}

fn zero_dim_counts(s: &FlowSystem, b: &Bases) -> Result<ZeroDimCounts> {
    let mut c = ZeroDimCounts::default();
    for z in &s.zero_dim {
        for o in &z.orbits {
            match o {
                Orbit::Invariant { start, end, .. } => {
                    let (_, x) = slot(s, b, start)?;
                    let (_, y) = slot(s, b, end)?;
                    c.d_inv.push((y, x));
                }
                Orbit::Free { lines } => {
                    let (si, x) = slot(s, b, &lines[0].start)?;
                    let (ti, y) = slot(s, b, &lines[0].end)?;
                    match (si, ti) {
                        (true, true) => c.x0.push((y, x)),
                        (true, false) => c.d2.push((y, x)),
                        (false, true) => {
                            c.d1.push((y, x));
                            let selected = lines.iter().find(|l| l.v == 1).expect("validated v values");
                            if s.is_preferred(&selected.start)? {
                                c.s1_0.push((y, x));
                            }
                        }
                        (false, false) => {
                            c.d_non.push((y, x));
                            let from_pref = lines
                                .iter()
                                .find(|l| s.is_preferred(&l.start).unwrap_or(false))
                                .expect("one line starts at the preferred point");
                            if !s.is_preferred(&from_pref.end)? {
                                c.u.push((y, x));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(c)
}

fn matrix(rows: usize, cols: usize, entries: &[(usize, usize)]) -> BitMatrix {
    let mut m = BitMatrix::zeros(rows, cols);
    for &(y, x) in entries {
        m.toggle(y, x);
    }
    m
}

fn action_map(s: &FlowSystem) -> BTreeMap<String, num_rational::BigRational> {
    s.points
        .iter()
        .filter(|p| p.invariant || p.preferred)
        .map(|p| {
            let key = if p.invariant { p.name.clone() } else { orbit_generator(&p.name) };
            (key, p.action.clone())
        })
        .collect()
}

/// The operators counted from zero-dimensional moduli alone: `d_inv`,
/// `d_non`, `U`, `D1`, `D2`, `X^(0)` and `S1^(0)`. No relations are checked.
pub fn derive_zero_dim_operators(s: &FlowSystem) -> Result<LocalizationDatum> {
    s.validate()?;
    let b = bases(s)?;
    let c = zero_dim_counts(s, &b)?;
    let (ni, nn) = (b.inv.len(), b.non.len());
    let mut d = LocalizationDatum::zero(b.inv, b.non, s.i_anti);
    d.d_inv = matrix(ni, ni, &c.d_inv);
    d.d_non = matrix(nn, nn, &c.d_non);
    d.u = matrix(nn, nn, &c.u);
    d.d1 = matrix(ni, nn, &c.d1);
    d.d2 = matrix(nn, ni, &c.d2);
    d.x = vec![matrix(ni, ni, &c.x0)];
    d.s1 = vec![matrix(ni, nn, &c.s1_0)];
    d.d1_higher = vec![d.d1.clone()];
    d.action = Some(action_map(s));
    Ok(d)
}

/// Full localization datum of a flow system: zero-dimensional counts plus
/// `D1^(1)`, `X^(1)` and `S1^(1)` from the one-dimensional moduli, checked
/// by the datum validator.
pub fn derive_operators(s: &FlowSystem) -> Result<LocalizationDatum> {
    let mut d = derive_zero_dim_operators(s)?;
    let b = bases(s)?;
    let (ni, nn) = (b.inv.len(), b.non.len());
    let mut d1_1 = Vec::new();
    let mut x1 = Vec::new();
    let mut s1_1 = Vec::new();
    for m in &s.one_dim {
        let (si, x) = slot(s, &b, &m.from)?;
        let (ti, y) = slot(s, &b, &m.to)?;
        if !ti {
            // Free targets feed no operator of the datum.
            continue;
        }
        for comp in &m.components {
            s.check_component(m, comp)?;
            if cocycle_eval(comp)? == 1 {
                if si {
                    x1.push((y, x));
                } else {
                    d1_1.push((y, x));
                }
            }
            if !si {
                // s*(v) on sheet 0 at each vertex, paired with w on each edge.
                let mut total = 0u8;
                for i in 0..comp.edges.len() {
                    let (a, _) = comp.edge_ends(i);
                    let vx = &comp.vertices[a];
                    let sv = if s.is_preferred(&s.sheet_start(vx)?)? { vx.v } else { 1 - vx.v };
                    total ^= sv & comp.w(i);
                }
                if total == 1 {
                    s1_1.push((y, x));
                }
            }
        }
    }
    d.d1_higher.push(matrix(ni, nn, &d1_1));
    d.x.push(matrix(ni, ni, &x1));
    d.s1.push(matrix(ni, nn, &s1_1));
    match d.validate() {
        Ok(_) => Ok(d),
        Err(e) if s.one_dim_omitted => Err(Error::UnsupportedProduct(format!(
            "{e}"
        ))),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::complexes::{cohomology_f2, GradedF2};
    use crate::flowmodel::generate_examples;
    use crate::localize::{assemble_total, bare_lambda, build_equiv, lambda_on_powers, normalized_lambda, InvCohomology};

    #[test]
    fn circle_counts() {
        let d = derive_operators(&generate_examples("circle_reflection").unwrap()).unwrap();
        assert_eq!(d.d2.entries().collect::<Vec<_>>(), vec![(0, 0), (0, 1)]);
        assert_eq!(d.c_non.name(0), "GE");
        for m in [&d.d_inv, &d.d_non, &d.u, &d.d1] {
            assert!(m.is_zero());
        }
        assert!(d.x.iter().chain(&d.s1).all(BitMatrix::is_zero));
    }

    #[test]
    fn real_line_counts() {
        let d = derive_operators(&generate_examples("real_line").unwrap()).unwrap();
        assert_eq!(d.d1.entries().collect::<Vec<_>>(), vec![(0, 0)]);
        assert_eq!((d.c_inv.name(0), d.c_non.name(0)), ("z", "Gb"));
    }

    #[test]
    fn plane_lambda_lowers_by_two() {
        let d = derive_operators(&generate_examples("plane_antipodal").unwrap()).unwrap();
        assert_eq!(d.u.entries().collect::<Vec<_>>(), vec![(1, 0)]);
        assert_eq!(d.d1_at(1).entries().collect::<Vec<_>>(), vec![(0, 0)]);
        let e = build_equiv(&d).unwrap();
        let lam = bare_lambda(&e).unwrap();
        let inv = InvCohomology::new(&e).unwrap();
        let table = lambda_on_powers(&e, &lam, &inv, 6).unwrap();
        assert_eq!(table.len(), 1);
        for k in 2..=6 {
            assert_eq!(table[0][k], BTreeMap::from([(0, vec![k - 2])]));
        }
        assert_eq!(normalized_lambda(&e).unwrap().m, 2);
    }

    #[test]
    fn free_points_have_no_fixed_part() {
        let d = derive_operators(&generate_examples("free_two_points").unwrap()).unwrap();
        assert_eq!(d.n_inv(), 0);
        assert_eq!(d.n_non(), 1);
    }

    fn zero_dim_dims(d: &LocalizationDatum) -> (usize, usize) {
        let inv = GradedF2::new(d.c_inv.degrees(), d.d_inv.clone()).unwrap().cohomology().total_dim();
        let non = GradedF2::new(d.c_non.degrees(), d.d_non.clone()).unwrap().cohomology().total_dim();
        (inv, non)
    }

    #[test]
    fn product_of_lines_matches_plane_at_zero_dim_level() {
        let p = generate_examples("product(real_line, real_line)").unwrap();
        assert_eq!(p.points.len(), 9);
        assert_eq!(p.i_anti, 2);
        let plane = generate_examples("plane_antipodal").unwrap();
        let (dp, dq) = (derive_zero_dim_operators(&p).unwrap(), derive_zero_dim_operators(&plane).unwrap());
        assert_eq!(zero_dim_dims(&dp), zero_dim_dims(&dq));
        assert!(matches!(derive_operators(&p), Err(Error::UnsupportedProduct(_))));
    }

    #[test]
    fn products_with_one_dim_data_are_rejected() {
        assert!(matches!(
            generate_examples("product(plane_antipodal, real_line)"),
            Err(Error::UnsupportedProduct(_))
        ));
        assert!(matches!(generate_examples("torus"), Err(Error::UnknownExample(_))));
    }

    #[test]
    fn preferred_choice_leaves_total_cohomology() {
        for name in ["real_line", "circle_reflection", "plane_antipodal"] {
            let s = generate_examples(name).unwrap();
            let mut t = s.clone();
            let rename: BTreeMap<String, String> = t
                .points
                .iter()
                .filter(|p| p.preferred)
                .map(|p| (p.name.clone(), p.partner.clone().unwrap()))
                .collect();
            for p in &mut t.points {
                if !p.invariant {
                    p.preferred = !p.preferred;
                }
            }
            // Broken trajectories must start at the new preferred point.
            let lines = t.lines().into_iter().map(|(k, v)| (k.to_string(), v.0.to_string())).collect::<BTreeMap<_, _>>();
            let image_of = |id: &str| -> String {
                for z in &s.zero_dim {
                    for o in &z.orbits {
                        if let Orbit::Free { lines: [a, b] } = o {
                            if a.id == id {
                                return b.id.clone();
                            }
                            if b.id == id {
                                return a.id.clone();
                            }
                        }
                    }
                }
                id.to_string()
            };
            for m in &mut t.one_dim {
                if let Some(new) = rename.get(&m.from) {
                    m.from = new.clone();
                }
                for c in &mut m.components {
                    for vx in &mut c.vertices {
                        if let Some(chain) = &mut vx.broken {
                            if rename.contains_key(&lines[&chain[0]]) {
                                *chain = chain.iter().map(|id| image_of(id)).collect();
                                vx.v = 1 - vx.v;
                            }
                        }
                    }
                }
            }
            let (a, b) = (derive_operators(&s).unwrap(), derive_operators(&t).unwrap());
            let h = |d: &LocalizationDatum| cohomology_f2(&assemble_total(d).unwrap().involutive.complex).unwrap();
            assert_eq!(h(&a), h(&b), "{name}");
        }
    }

    #[test]
    fn deck_flip_keeps_d1_and_x() {
        let s = generate_examples("plane_antipodal").unwrap();
        let mut t = s.clone();
        for z in &mut t.zero_dim {
            if z.from == "s" {
                for o in &mut z.orbits {
                    if let Orbit::Free { lines } = o {
                        for l in lines.iter_mut() {
                            l.v = 1 - l.v;
                        }
                    }
                }
            }
        }
        for c in &mut t.one_dim[0].components {
            for vx in &mut c.vertices {
                vx.v = 1 - vx.v;
            }
        }
        let (a, b) = (derive_operators(&s).unwrap(), derive_operators(&t).unwrap());
        assert_eq!(a.d1_higher, b.d1_higher);
        assert_eq!(a.x, b.x);
    }

    #[test]
    fn mismatched_boundary_v_is_inconsistent() {
        let mut s = generate_examples("plane_antipodal").unwrap();
        s.one_dim[0].components[0].vertices[0].v = 1;
        assert!(matches!(derive_operators(&s), Err(Error::InconsistentCover(_))));
    }
}
