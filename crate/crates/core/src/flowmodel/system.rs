use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Point {
    pub name: String,
    pub index: i64,
    pub invariant: bool,
    #[serde(with = "crate::io::rational")]
    pub action: BigRational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partner: Option<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub preferred: bool,
}

/// One flow line; `v` is the cocycle value on its cover element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Line {
    pub id: String,
    pub start: String,
    pub end: String,
    pub v: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Orbit {
    /// A flow line fixed by the involution.
    Invariant { id: String, start: String, end: String },
    /// Two flow lines exchanged by the involution.
    Free { lines: [Line; 2] },
}

/// Isolated flow lines between two point orbits; `from` and `to` name any
/// point of the orbit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroDimModuli {
    pub from: String,
    pub to: String,
    pub orbits: Vec<Orbit>,
}

/// Vertex of a one-dimensional component. Values refer to sheet 0 of the
/// double cover. Boundary vertices list the broken trajectory as line ids;
/// interior vertices give the start point of sheet 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub v: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub broken: Option<Vec<String>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentKind {
    Path,
    Cycle,
}

/// A component of a compactified one-dimensional moduli space as a graph.
/// Edge `i` joins vertex `i` to vertex `i + 1` (cyclically for a cycle);
/// its bit is 1 when sheet 0 at `i` continues to sheet 1 at `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub kind: ComponentKind,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneDimModuli {
    pub from: String,
    pub to: String,
    pub components: Vec<Component>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowSystem {
    pub i_anti: i64,
    pub points: Vec<Point>,
    #[serde(default)]
    pub zero_dim: Vec<ZeroDimModuli>,
    #[serde(default)]
    pub one_dim: Vec<OneDimModuli>,
    /// Set on product systems, whose one-dimensional moduli are not built.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub one_dim_omitted: bool,
}

fn cover(msg: impl Into<String>) -> Error {
    Error::InconsistentCover(msg.into())
}

fn check_bit(b: u8, what: &str) -> Result<()> {
    if b > 1 {
        return Err(Error::parse(what, format!("expected 0 or 1, found {b}")));
    }
    Ok(())
}

impl Component {
    pub fn edge_count_ok(&self) -> bool {
        match self.kind {
            ComponentKind::Path => self.edges.len() + 1 == self.vertices.len(),
            ComponentKind::Cycle => self.edges.len() == self.vertices.len() && !self.vertices.is_empty(),
        }
    }

    /// Endpoints of edge `i`.
    pub fn edge_ends(&self, i: usize) -> (usize, usize) {
        (i, (i + 1) % self.vertices.len())
    }

    /// `w = dv` on edge `i`.
    pub fn w(&self, i: usize) -> u8 {
        let (a, b) = self.edge_ends(i);
        (self.vertices[a].v + self.vertices[b].v + self.edges[i]) % 2
    }
}

/// `⟨w, [component]⟩`: the monodromy parity of a cycle, or the change of
/// `v` along a lift of a path.
pub fn cocycle_eval(c: &Component) -> Result<u8> {
    if !c.edge_count_ok() {
        return Err(cover(format!(
            "{:?} component has {} vertices and {} edges",
            c.kind,
            c.vertices.len(),
            c.edges.len()
        )));
    }
    for v in &c.vertices {
        check_bit(v.v, "vertex v")?;
    }
    for &b in &c.edges {
        check_bit(b, "edge bit")?;
    }
    Ok((0..c.edges.len()).map(|i| c.w(i)).sum::<u8>() % 2)
}

impl FlowSystem {
    pub fn point(&self, name: &str) -> Result<&Point> {
        self.points
            .iter()
            .find(|p| p.name == name)
            .ok_or_else(|| Error::parse("points", format!("unknown point {name:?}")))
    }

    /// The image of a point under the involution.
    pub fn image(&self, name: &str) -> Result<&str> {
        let p = self.point(name)?;
        Ok(match &p.partner {
            Some(q) => q.as_str(),
            None => p.name.as_str(),
        })
    }

    /// Name of the orbit representative: the point itself if invariant,
    /// otherwise the preferred point of the pair.
    pub fn orbit_rep(&self, name: &str) -> Result<&str> {
        let p = self.point(name)?;
        if p.invariant || p.preferred {
            Ok(p.name.as_str())
        } else {
            self.image(name)
        }
    }

    pub fn is_preferred(&self, name: &str) -> Result<bool> {
        Ok(self.point(name)?.preferred)
    }

    /// Every line of the zero-dimensional moduli, by id.
    pub fn lines(&self) -> BTreeMap<&str, (&str, &str, Option<u8>)> {
        let mut out = BTreeMap::new();
        for z in &self.zero_dim {
            for o in &z.orbits {
                match o {
                    Orbit::Invariant { id, start, end } => {
                        out.insert(id.as_str(), (start.as_str(), end.as_str(), None));
                    }
                    Orbit::Free { lines } => {
                        for l in lines {
                            out.insert(l.id.as_str(), (l.start.as_str(), l.end.as_str(), Some(l.v)));
                        }
                    }
                }
            }
        }
        out
    }

    fn check_points(&self) -> Result<()> {
        let mut names = BTreeSet::new();
        for p in &self.points {
            if !names.insert(p.name.as_str()) {
                return Err(Error::parse("points", format!("duplicate point {:?}", p.name)));
            }
        }
        for p in &self.points {
            if p.invariant {
                if p.partner.is_some() || p.preferred {
                    return Err(Error::parse(
                        format!("points.{}", p.name),
                        "invariant points have no partner and are not preferred",
                    ));
                }
                if p.index < self.i_anti {
                    return Err(Error::parse(
                        format!("points.{}", p.name),
                        format!("index {} is below the normal index {}", p.index, self.i_anti),
                    ));
                }
                continue;
            }
            let q = p
                .partner
                .as_ref()
                .ok_or_else(|| Error::parse(format!("points.{}", p.name), "free point without partner"))?;
            let q = self.point(q)?;
            let back_ok = q.partner.as_deref() == Some(p.name.as_str());
            if q.invariant || !back_ok || q.name == p.name {
                return Err(Error::parse(format!("points.{}", p.name), "partner relation is not an involution"));
            }
            if q.index != p.index || q.action != p.action {
                return Err(Error::parse(
                    format!("points.{}", p.name),
                    "partners must share index and action",
                ));
            }
            if p.preferred == q.preferred {
                return Err(Error::parse(
                    format!("points.{}", p.name),
                    "exactly one point of each free pair must be preferred",
                ));
            }
        }
        Ok(())
    }

    fn check_line(&self, z_from: &str, z_to: &str, id: &str, start: &str, end: &str) -> Result<()> {
        let path = format!("zero_dim.{id}");
        let (s, e) = (self.point(start)?, self.point(end)?);
        if self.orbit_rep(start)? != self.orbit_rep(z_from)? || self.orbit_rep(end)? != self.orbit_rep(z_to)? {
            return Err(Error::parse(path, "line endpoints are not in the moduli space's orbits"));
        }
        if e.index != s.index + 1 {
            return Err(Error::parse(path, "isolated lines must raise the index by one"));
        }
        if s.action >= e.action {
            return Err(Error::parse(path, "action must increase along a flow line"));
        }
        Ok(())
    }

    /// Checks the structural invariants of the system, including the cover
    /// data on one-dimensional moduli.
    pub fn validate(&self) -> Result<()> {
        self.check_points()?;
        let mut ids = BTreeSet::new();
        for z in &self.zero_dim {
            for o in &z.orbits {
                match o {
                    Orbit::Invariant { id, start, end } => {
                        if !ids.insert(id.clone()) {
                            return Err(Error::parse("zero_dim", format!("duplicate line id {id:?}")));
                        }
                        self.check_line(&z.from, &z.to, id, start, end)?;
                        if !self.point(start)?.invariant || !self.point(end)?.invariant {
                            return Err(Error::parse(
                                format!("zero_dim.{id}"),
                                "invariant lines join invariant points",
                            ));
                        }
                    }
                    Orbit::Free { lines: [a, b] } => {
                        for l in [a, b] {
                            if !ids.insert(l.id.clone()) {
                                return Err(Error::parse("zero_dim", format!("duplicate line id {:?}", l.id)));
                            }
                            self.check_line(&z.from, &z.to, &l.id, &l.start, &l.end)?;
                            check_bit(l.v, "line v")?;
                        }
                        if self.image(&a.start)? != b.start || self.image(&a.end)? != b.end {
                            return Err(cover(format!("lines {} and {} are not exchanged by the involution", a.id, b.id)));
                        }
                        if a.v == b.v {
                            return Err(cover(format!("lines {} and {} carry equal v", a.id, b.id)));
                        }
                    }
                }
            }
        }
        for m in &self.one_dim {
            for c in &m.components {
                self.check_component(m, c)?;
            }
        }
        Ok(())
    }

    /// Boundary identification and start-point consistency of a component.
    pub fn check_component(&self, m: &OneDimModuli, c: &Component) -> Result<()> {
        cocycle_eval(c)?;
        let (from, to) = (self.point(&m.from)?, self.point(&m.to)?);
        if to.index != from.index + 2 {
            return Err(Error::parse(
                format!("one_dim.{}->{}", m.from, m.to),
                "one-dimensional moduli raise the index by two",
            ));
        }
        let lines = self.lines();
        let mut starts = Vec::new();
        for (k, vx) in c.vertices.iter().enumerate() {
            let start = match (&vx.broken, &vx.start) {
                (Some(chain), _) => {
                    if c.kind == ComponentKind::Path && k != 0 && k + 1 != c.vertices.len() {
                        return Err(cover("broken trajectories only sit at path ends"));
                    }
                    let mut pieces = Vec::new();
                    for id in chain {
                        let l = lines
                            .get(id.as_str())
                            .ok_or_else(|| cover(format!("unknown line {id:?} in broken trajectory")))?;
                        pieces.push(*l);
                    }
                    if pieces.is_empty() {
                        return Err(cover("empty broken trajectory"));
                    }
                    for w in pieces.windows(2) {
                        if w[0].1 != w[1].0 {
                            return Err(cover(format!("broken trajectory {chain:?} is not a chain")));
                        }
                    }
                    let (s, e) = (pieces[0].0, pieces[pieces.len() - 1].1);
                    if self.orbit_rep(s)? != self.orbit_rep(&m.from)? || self.orbit_rep(e)? != self.orbit_rep(&m.to)? {
                        return Err(cover(format!("broken trajectory {chain:?} has the wrong endpoints")));
                    }
                    // The cover element is that of the last non-invariant piece.
                    let last = pieces.iter().rev().find_map(|p| p.2);
                    match last {
                        Some(v) if v == vx.v => {}
                        Some(v) => {
                            return Err(cover(format!(
                                "vertex {k} carries v = {} but its last free piece has v = {v}",
                                vx.v
                            )))
                        }
                        None => return Err(cover(format!("broken trajectory {chain:?} has no free piece"))),
                    }
                    s.to_string()
                }
                (None, Some(s)) => {
                    if c.kind == ComponentKind::Path && (k == 0 || k + 1 == c.vertices.len()) {
                        return Err(cover("path ends must be broken trajectories"));
                    }
                    if self.orbit_rep(s)? != self.orbit_rep(&m.from)? {
                        return Err(cover(format!("start point {s:?} is not in the source orbit")));
                    }
                    s.clone()
                }
                (None, None) => return Err(cover(format!("vertex {k} has neither a start point nor a broken trajectory"))),
            };
            starts.push(start);
        }
        for i in 0..c.edges.len() {
            let (a, b) = c.edge_ends(i);
            let expect = if c.edges[i] == 0 {
                starts[a].clone()
            } else {
                self.image(&starts[a])?.to_string()
            };
            if expect != starts[b] {
                return Err(cover(format!("sheet start points disagree across edge {i}")));
            }
        }
        Ok(())
    }

    /// Start point of sheet 0 at a vertex.
    pub fn sheet_start(&self, vx: &Vertex) -> Result<String> {
        if let Some(chain) = &vx.broken {
            let lines = self.lines();
            let first = chain.first().ok_or_else(|| cover("empty broken trajectory"))?;
            let l = lines
                .get(first.as_str())
                .ok_or_else(|| cover(format!("unknown line {first:?}")))?;
            return Ok(l.0.to_string());
        }
        vx.start.clone().ok_or_else(|| cover("vertex without start point"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vx(v: u8) -> Vertex {
        Vertex {
            v,
            start: Some("x".into()),
            broken: None,
        }
    }

    #[test]
    fn cycle_monodromy() {
        let nontrivial = Component {
            kind: ComponentKind::Cycle,
            vertices: vec![vx(0), vx(1), vx(1)],
            edges: vec![0, 1, 0],
        };
        assert_eq!(cocycle_eval(&nontrivial).unwrap(), 1);
        let trivial = Component {
            kind: ComponentKind::Cycle,
            vertices: vec![vx(0), vx(1)],
            edges: vec![1, 1],
        };
        assert_eq!(cocycle_eval(&trivial).unwrap(), 0);
    }

    #[test]
    fn path_telescopes() {
        let p = Component {
            kind: ComponentKind::Path,
            vertices: vec![vx(0), vx(0), vx(1)],
            edges: vec![0, 0],
        };
        assert_eq!(cocycle_eval(&p).unwrap(), 1);
    }

    #[test]
    fn edge_count_checked() {
        let p = Component {
            kind: ComponentKind::Path,
            vertices: vec![vx(0), vx(1)],
            edges: vec![],
        };
        assert!(matches!(cocycle_eval(&p), Err(Error::InconsistentCover(_))));
    }
}
