use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::error::{Error, Result};

use super::system::{Component, ComponentKind, FlowSystem, Line, OneDimModuli, Orbit, Point, Vertex, ZeroDimModuli};

pub const EXAMPLE_NAMES: [&str; 4] = ["real_line", "circle_reflection", "plane_antipodal", "free_two_points"];

fn fixed(name: &str, index: i64, action: i64) -> Point {
    Point {
        name: name.into(),
        index,
        invariant: true,
        action: BigRational::from_integer(action.into()),
        partner: None,
        preferred: false,
    }
}

/// A free pair; the first point is preferred.
fn pair(a: &str, b: &str, index: i64, action: i64) -> [Point; 2] {
    let p = |name: &str, partner: &str, preferred| Point {
        name: name.into(),
        index,
        invariant: false,
        action: BigRational::from_integer(action.into()),
        partner: Some(partner.into()),
        preferred,
    };
    [p(a, b, true), p(b, a, false)]
}

fn line(id: &str, start: &str, end: &str, v: u8) -> Line {
    Line {
        id: id.into(),
        start: start.into(),
        end: end.into(),
        v,
    }
}

fn free(a: Line, b: Line) -> Orbit {
    Orbit::Free { lines: [a, b] }
}

fn moduli(from: &str, to: &str, orbits: Vec<Orbit>) -> ZeroDimModuli {
    ZeroDimModuli {
        from: from.into(),
        to: to.into(),
        orbits,
    }
}

fn real_line() -> FlowSystem {
    let mut points = vec![fixed("z", 1, 0)];
    points.extend(pair("b", "b'", 0, -1));
    FlowSystem {
        i_anti: 1,
        points,
        zero_dim: vec![moduli("b", "z", vec![free(line("bz", "b", "z", 0), line("b'z", "b'", "z", 1))])],
        one_dim: vec![],
        one_dim_omitted: false,
    }
}

fn circle_reflection() -> FlowSystem {
    let mut points = vec![fixed("N", 0, 0), fixed("S", 0, 0)];
    points.extend(pair("E", "E'", 1, 1));
    FlowSystem {
        i_anti: 0,
        points,
        zero_dim: vec![
            moduli("N", "E", vec![free(line("NE", "N", "E", 0), line("NE'", "N", "E'", 1))]),
            moduli("S", "E", vec![free(line("SE", "S", "E", 0), line("SE'", "S", "E'", 1))]),
        ],
        one_dim: vec![],
        one_dim_omitted: false,
    }
}

/// Antipodal involution on the plane: a minimum pair, a saddle pair and the
/// fixed maximum at the origin, with one one-dimensional family from the
/// minima to the origin.
fn plane_antipodal() -> FlowSystem {
    let mut points = vec![fixed("O", 2, 0)];
    points.extend(pair("m", "m'", 0, -2));
    points.extend(pair("s", "s'", 1, -1));
    let broken = |ids: [&str; 2], v| Vertex {
        v,
        start: None,
        broken: Some(ids.iter().map(|s| s.to_string()).collect()),
    };
    FlowSystem {
        i_anti: 2,
        points,
        zero_dim: vec![
            moduli(
                "m",
                "s",
                vec![
                    free(line("ms", "m", "s", 0), line("m's'", "m'", "s'", 1)),
                    free(line("ms'", "m", "s'", 0), line("m's", "m'", "s", 1)),
                ],
            ),
            moduli("s", "O", vec![free(line("sO", "s", "O", 0), line("s'O", "s'", "O", 1))]),
        ],
        one_dim: vec![OneDimModuli {
            from: "m".into(),
            to: "O".into(),
            components: vec![Component {
                kind: ComponentKind::Path,
                vertices: vec![broken(["ms", "sO"], 0), broken(["ms'", "s'O"], 1)],
                edges: vec![0],
            }],
        }],
        one_dim_omitted: false,
    }
}

fn free_two_points() -> FlowSystem {
    FlowSystem {
        i_anti: 0,
        points: pair("p", "p'", 0, 0).to_vec(),
        zero_dim: vec![],
        one_dim: vec![],
        one_dim_omitted: false,
    }
}

fn pair_name(x: &str, y: &str) -> String {
    format!("({x},{y})")
}

/// A factor line with the id of its image under the involution.
struct Factor<'s> {
    id: &'s str,
    start: &'s str,
    end: &'s str,
    v: Option<u8>,
    image: &'s str,
}

fn factor_lines(s: &FlowSystem) -> Vec<Factor<'_>> {
    let mut out = Vec::new();
    for z in &s.zero_dim {
        for o in &z.orbits {
            match o {
                Orbit::Invariant { id, start, end } => out.push(Factor {
                    id,
                    start,
                    end,
                    v: None,
                    image: id,
                }),
                Orbit::Free { lines: [l, m] } => {
                    for (x, y) in [(l, m), (m, l)] {
                        out.push(Factor {
                            id: &x.id,
                            start: &x.start,
                            end: &x.end,
                            v: Some(x.v),
                            image: &y.id,
                        });
                    }
                }
            }
        }
    }
    out
}

/// Künneth product of two systems with diagonal involution. Only
/// zero-dimensional moduli are built, by the Leibniz rule.
pub fn product(a: &FlowSystem, b: &FlowSystem) -> Result<FlowSystem> {
    for (s, which) in [(a, "first"), (b, "second")] {
        s.validate()?;
        if !s.one_dim.is_empty() || s.one_dim_omitted {
            return Err(Error::UnsupportedProduct(format!(
                "the {which} factor carries one-dimensional moduli"
            )));
        }
    }
    let mut points = Vec::new();
    for p in &a.points {
        for q in &b.points {
            let invariant = p.invariant && q.invariant;
            let preferred = !invariant && if p.invariant { q.preferred } else { p.preferred };
            points.push(Point {
                name: pair_name(&p.name, &q.name),
                index: p.index + q.index,
                invariant,
                action: &p.action + &q.action,
                partner: (!invariant).then(|| pair_name(a.image(&p.name).unwrap(), b.image(&q.name).unwrap())),
                preferred,
            });
        }
    }

    // (start, end, id, image id, v) for every product line.
    let mut lines: Vec<(String, String, String, String, Option<u8>)> = Vec::new();
    let v_of = |l: &Factor, other: &FlowSystem, p: &str| -> Result<Option<u8>> {
        let pt = other.point(p)?;
        Ok(match l.v {
            Some(v) => Some(v),
            None if pt.invariant => None,
            None => Some(u8::from(!pt.preferred)),
        })
    };
    for l in factor_lines(a) {
        for q in &b.points {
            let image_q = b.image(&q.name)?;
            lines.push((
                pair_name(l.start, &q.name),
                pair_name(l.end, &q.name),
                format!("{}×{}", l.id, q.name),
                format!("{}×{}", l.image, image_q),
                v_of(&l, b, &q.name)?,
            ));
        }
    }
    for l in factor_lines(b) {
        for p in &a.points {
            let image_p = a.image(&p.name)?;
            lines.push((
                pair_name(&p.name, l.start),
                pair_name(&p.name, l.end),
                format!("{}×{}", p.name, l.id),
                format!("{}×{}", image_p, l.image),
                v_of(&l, a, &p.name)?,
            ));
        }
    }

    let mut sys = FlowSystem {
        i_anti: a.i_anti + b.i_anti,
        points,
        zero_dim: vec![],
        one_dim: vec![],
        one_dim_omitted: true,
    };
    let by_id: BTreeMap<&str, usize> = lines.iter().enumerate().map(|(i, l)| (l.2.as_str(), i)).collect();
    let mut groups: BTreeMap<(String, String), Vec<Orbit>> = BTreeMap::new();
    let mut seen = vec![false; lines.len()];
    for i in 0..lines.len() {
        if seen[i] {
            continue;
        }
        let (start, end, id, image, v) = &lines[i];
        let j = *by_id
            .get(image.as_str())
            .ok_or_else(|| Error::InconsistentCover(format!("product line {id} has no image")))?;
        seen[i] = true;
        seen[j] = true;
        let orbit = if i == j {
            Orbit::Invariant {
                id: id.clone(),
                start: start.clone(),
                end: end.clone(),
            }
        } else {
            let other = &lines[j];
            let (v1, v2) = (v.expect("free line"), other.4.expect("free line"));
            free(line(id, start, end, v1), line(&other.2, &other.0, &other.1, v2))
        };
        let key = (sys.orbit_rep(start)?.to_string(), sys.orbit_rep(end)?.to_string());
        groups.entry(key).or_default().push(orbit);
    }
    sys.zero_dim = groups.into_iter().map(|((f, t), orbits)| moduli(&f, &t, orbits)).collect();
    sys.validate()?;
    Ok(sys)
}

/// Splits `product(x, y)` at its top-level comma.
fn product_args(name: &str) -> Option<(&str, &str)> {
    let inner = name.strip_prefix("product(")?.strip_suffix(')')?;
    let mut depth = 0;
    for (i, ch) in inner.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some((inner[..i].trim(), inner[i + 1..].trim())),
            _ => {}
        }
    }
    None
}

pub fn generate_examples(name: &str) -> Result<FlowSystem> {
    match name {
        "real_line" => Ok(real_line()),
        "circle_reflection" => Ok(circle_reflection()),
        "plane_antipodal" => Ok(plane_antipodal()),
        "free_two_points" => Ok(free_two_points()),
        _ => match product_args(name) {
            Some((x, y)) => product(&generate_examples(x)?, &generate_examples(y)?),
            None => Err(Error::UnknownExample(name.to_string())),
        },
    }
}
