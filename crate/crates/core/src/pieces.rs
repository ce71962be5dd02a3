//! Equivariant surfaces assembled from holed spheres and genus-h pieces.
//!
//! A surface is a list of pieces with a perfect matching of their boundary
//! holes and a finite group acting by piece permutations. Euler
//! characteristics add over pieces (gluing along circles), so genus is
//! exact; fixed points of the action appear only as the two axis poles of a
//! setwise-fixed holed-sphere piece, recorded as explicit special points so
//! that stabilizer orders and quotient signatures come straight out of the
//! combinatorics.
//!
//! Two constructions live here: the complete-bipartite-graph neighborhood
//! surface with its Z/m x Z/n action, and the five-circle pattern surface
//! of genus 5 with its dihedral action of order eight.

use std::collections::HashMap;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::orbifold::{OrbifoldSignature, Rational};
use crate::words::{self, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PieceError {
    #[error("parameters must satisfy n > m >= 2, got m={0}, n={1}")]
    InvalidParameters(u64, u64),
    #[error("hole ({0}, {1}) is not glued exactly once")]
    BadGluing(usize, usize),
    #[error("generator {0} breaks gluing equivariance")]
    NotEquivariant(usize),
    #[error("group relation {0} does not act trivially")]
    RelationBroken(usize),
    #[error("piece {piece} is fixed by a nontrivial element with trivial hole action")]
    AmbiguousFixedPiece { piece: usize },
    #[error("piece {piece} is fixed but carries no axis points")]
    MissingAxis { piece: usize },
    #[error("fixed piece {piece} is not a holed sphere")]
    FixedGenusPiece { piece: usize },
    #[error("element fixing piece {piece} moves its axis points")]
    AxisNotFixed { piece: usize },
    #[error("quotient orbit mixes marking labels")]
    MixedMarkings,
    #[error("quotient genus is not a non-negative integer: chi = {0}")]
    NonIntegralGenus(Rational),
    #[error("point map of generator {0} is inconsistent with the piece map")]
    PointMapInconsistent(usize),
    #[error("closure exceeded {0} elements")]
    ClosureCap(usize),
}

/// χ(holed sphere with v holes) = 2 − v; χ(genus-h two-holed piece) = −2h.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PieceKind {
    HoledSphere { holes: usize },
    GenusTwoHoled { genus: u64 },
}

impl PieceKind {
    pub fn holes(&self) -> usize {
        match self {
            PieceKind::HoledSphere { holes } => *holes,
            PieceKind::GenusTwoHoled { .. } => 2,
        }
    }

    pub fn euler(&self) -> i64 {
        match self {
            PieceKind::HoledSphere { holes } => 2 - *holes as i64,
            PieceKind::GenusTwoHoled { genus } => -2 * *genus as i64,
        }
    }
}

/// Axis pole or marked point, attached to a piece; marked points carry the
/// cone label they contribute in quotients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialPoint {
    pub piece: usize,
    pub marking: Option<u64>,
}

/// Action of one group element: where pieces, holes and special points go.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ElementAction {
    piece_map: Vec<usize>,
    /// `hole_maps[p][h]` is the hole on piece `piece_map[p]` receiving hole
    /// `h` of piece `p`.
    hole_maps: Vec<Vec<usize>>,
    point_map: Vec<usize>,
}

impl ElementAction {
    fn identity(pieces: &[PieceKind], n_points: usize) -> Self {
        ElementAction {
            piece_map: (0..pieces.len()).collect(),
            hole_maps: pieces.iter().map(|k| (0..k.holes()).collect()).collect(),
            point_map: (0..n_points).collect(),
        }
    }

    fn is_identity(&self) -> bool {
        self.piece_map.iter().enumerate().all(|(i, &x)| i == x)
            && self
                .hole_maps
                .iter()
                .all(|m| m.iter().enumerate().all(|(i, &x)| i == x))
            && self.point_map.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self` then `other`.
    fn then(&self, other: &ElementAction) -> ElementAction {
        ElementAction {
            piece_map: self.piece_map.iter().map(|&p| other.piece_map[p]).collect(),
            hole_maps: self
                .hole_maps
                .iter()
                .enumerate()
                .map(|(p, hm)| {
                    let q = self.piece_map[p];
                    hm.iter().map(|&h| other.hole_maps[q][h]).collect()
                })
                .collect(),
            point_map: self.point_map.iter().map(|&x| other.point_map[x]).collect(),
        }
    }

    fn inverse(&self) -> ElementAction {
        let n = self.piece_map.len();
        let mut piece_map = vec![0; n];
        for (p, &q) in self.piece_map.iter().enumerate() {
            piece_map[q] = p;
        }
        let mut hole_maps: Vec<Vec<usize>> = self
            .hole_maps
            .iter()
            .map(|m| vec![0; m.len()])
            .collect();
        for (p, hm) in self.hole_maps.iter().enumerate() {
            let q = self.piece_map[p];
            for (h, &k) in hm.iter().enumerate() {
                hole_maps[q][k] = h;
            }
        }
        let mut point_map = vec![0; self.point_map.len()];
        for (x, &y) in self.point_map.iter().enumerate() {
            point_map[y] = x;
        }
        ElementAction {
            piece_map,
            hole_maps,
            point_map,
        }
    }

    pub fn piece_image(&self, p: usize) -> usize {
        self.piece_map[p]
    }

    pub fn point_image(&self, x: usize) -> usize {
        self.point_map[x]
    }

    /// Pieces fixed setwise, with the order of the induced hole rotation.
    fn fixed_pieces(&self) -> Vec<(usize, u64)> {
        let mut out = Vec::new();
        for (p, &q) in self.piece_map.iter().enumerate() {
            if p != q {
                continue;
            }
            let hm = &self.hole_maps[p];
            let mut order = 1u64;
            let mut cur: Vec<usize> = hm.clone();
            while cur.iter().enumerate().any(|(i, &x)| i != x) {
                cur = cur.iter().map(|&h| hm[h]).collect();
                order += 1;
            }
            out.push((p, order));
        }
        out
    }
}

/// Abstract group descriptor: generator names and defining relations, all
/// verified against the piece action.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymmetryGroupLabel {
    pub name: String,
    pub generator_names: Vec<String>,
    /// Relations as words over the generators (crate word encoding).
    pub relations: Vec<Word>,
}

/// A closed surface built from glued pieces with a finite group action.
#[derive(Debug, Clone)]
pub struct PieceSurface {
    pieces: Vec<PieceKind>,
    /// Perfect matching on (piece, hole) pairs, stored both ways.
    gluing: HashMap<(usize, usize), (usize, usize)>,
    label: SymmetryGroupLabel,
    generators: Vec<ElementAction>,
    points: Vec<SpecialPoint>,
}

const ELEMENT_CAP: usize = 1 << 12;

impl PieceSurface {
    pub fn pieces(&self) -> &[PieceKind] {
        &self.pieces
    }

    pub fn label(&self) -> &SymmetryGroupLabel {
        &self.label
    }

    pub fn points(&self) -> &[SpecialPoint] {
        &self.points
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.pieces.iter().map(|k| k.euler()).sum()
    }

    pub fn genus(&self) -> u64 {
        let chi = self.euler_characteristic();
        assert!(chi <= 2 && (2 - chi) % 2 == 0, "closed orientable surface");
        ((2 - chi) / 2) as u64
    }

    /// The surface as a marked orbifold: genus plus marking labels.
    pub fn marked_signature(&self) -> OrbifoldSignature {
        let labels: Vec<u64> = self.points.iter().filter_map(|p| p.marking).collect();
        OrbifoldSignature::new(self.genus() as u32, labels).expect("labels >= 2")
    }

    /// Action of a word in the generators.
    pub fn action_of_word(&self, w: &[i32]) -> ElementAction {
        let mut act = ElementAction::identity(&self.pieces, self.points.len());
        for &l in w {
            let g = &self.generators[words::gen_of(l)];
            let step = if l > 0 { g.clone() } else { g.inverse() };
            act = act.then(&step);
        }
        act
    }

    /// Closure of a set of words under composition; deterministic order.
    pub fn subgroup_elements(&self, gens: &[Word]) -> Result<Vec<ElementAction>, PieceError> {
        let acts: Vec<ElementAction> = gens.iter().map(|w| self.action_of_word(w)).collect();
        let mut elements = vec![ElementAction::identity(&self.pieces, self.points.len())];
        let mut head = 0;
        while head < elements.len() {
            let cur = elements[head].clone();
            head += 1;
            for a in &acts {
                let next = cur.then(a);
                if !elements.contains(&next) {
                    if elements.len() >= ELEMENT_CAP {
                        return Err(PieceError::ClosureCap(ELEMENT_CAP));
                    }
                    elements.push(next);
                }
            }
        }
        Ok(elements)
    }

    /// Order of the full symmetry group.
    pub fn group_order(&self) -> Result<usize, PieceError> {
        let gens: Vec<Word> = (0..self.generators.len())
            .map(|g| vec![words::letter(g, 1)])
            .collect();
        Ok(self.subgroup_elements(&gens)?.len())
    }

    /// Surface fixed points of a nontrivial element: the axis poles of each
    /// setwise-fixed piece, with the local rotation order.
    pub fn fixed_point_data(&self, w: &[i32]) -> Result<Vec<(usize, u64)>, PieceError> {
        let act = self.action_of_word(w);
        if act.is_identity() {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        for (p, order) in act.fixed_pieces() {
            if order == 1 {
                return Err(PieceError::AmbiguousFixedPiece { piece: p });
            }
            if !matches!(self.pieces[p], PieceKind::HoledSphere { .. }) {
                return Err(PieceError::FixedGenusPiece { piece: p });
            }
            let axis: Vec<usize> = (0..self.points.len())
                .filter(|&x| self.points[x].piece == p)
                .collect();
            if axis.len() != 2 {
                return Err(PieceError::MissingAxis { piece: p });
            }
            for x in axis {
                if act.point_map[x] != x {
                    return Err(PieceError::AxisNotFixed { piece: p });
                }
                out.push((x, order));
            }
        }
        Ok(out)
    }

    /// Validate gluing, equivariance, group relations, and axis data.
    pub fn validate(&self) -> Result<(), PieceError> {
        // perfect matching
        for (p, kind) in self.pieces.iter().enumerate() {
            for h in 0..kind.holes() {
                let Some(&(q, k)) = self.gluing.get(&(p, h)) else {
                    return Err(PieceError::BadGluing(p, h));
                };
                if self.gluing.get(&(q, k)) != Some(&(p, h)) || (q, k) == (p, h) {
                    return Err(PieceError::BadGluing(p, h));
                }
            }
        }
        // generator sanity and equivariance
        for (gi, g) in self.generators.iter().enumerate() {
            let mut seen = vec![false; self.pieces.len()];
            for (p, &q) in g.piece_map.iter().enumerate() {
                if seen[q] || self.pieces[p] != self.pieces[q] {
                    return Err(PieceError::NotEquivariant(gi));
                }
                seen[q] = true;
                if g.hole_maps[p].len() != self.pieces[p].holes() {
                    return Err(PieceError::NotEquivariant(gi));
                }
            }
            for (&(p, h), &(q, k)) in &self.gluing {
                let lhs = (g.piece_map[p], g.hole_maps[p][h]);
                let rhs = (g.piece_map[q], g.hole_maps[q][k]);
                if self.gluing.get(&lhs) != Some(&rhs) {
                    return Err(PieceError::NotEquivariant(gi));
                }
            }
            for (x, pt) in self.points.iter().enumerate() {
                let image = g.point_map[x];
                if self.points[image].piece != g.piece_map[pt.piece] {
                    return Err(PieceError::PointMapInconsistent(gi));
                }
            }
        }
        // group relations
        for (ri, rel) in self.label.relations.iter().enumerate() {
            if !self.action_of_word(rel).is_identity() {
                return Err(PieceError::RelationBroken(ri));
            }
        }
        // axis bookkeeping holds for every element
        let gens: Vec<Word> = (0..self.generators.len())
            .map(|g| vec![words::letter(g, 1)])
            .collect();
        for e in self.subgroup_elements(&gens)? {
            if e.is_identity() {
                continue;
            }
            for (p, order) in e.fixed_pieces() {
                if order == 1 {
                    return Err(PieceError::AmbiguousFixedPiece { piece: p });
                }
                if !matches!(self.pieces[p], PieceKind::HoledSphere { .. }) {
                    return Err(PieceError::FixedGenusPiece { piece: p });
                }
                let axis: Vec<usize> = (0..self.points.len())
                    .filter(|&x| self.points[x].piece == p)
                    .collect();
                if axis.len() != 2 {
                    return Err(PieceError::MissingAxis { piece: p });
                }
                if axis.iter().any(|&x| e.point_map[x] != x) {
                    return Err(PieceError::AxisNotFixed { piece: p });
                }
            }
        }
        Ok(())
    }

    /// Quotient orbifold signature under the subgroup generated by the
    /// given words, with the surface's marking labels folded into the cone
    /// orders (a marking L at a point with stabilizer order s yields a cone
    /// of order s·L).
    pub fn quotient_signature(&self, subgroup: &[Word]) -> Result<OrbifoldSignature, PieceError> {
        let elements = self.subgroup_elements(subgroup)?;
        let h_order = elements.len() as i64;

        // orbifold Euler characteristic of the marked surface
        let mut chi_orb = Ratio::from_integer(self.euler_characteristic());
        for pt in &self.points {
            if let Some(label) = pt.marking {
                chi_orb -= Ratio::new((label - 1) as i64, label as i64);
            }
        }
        let chi_quot = chi_orb / Ratio::from_integer(h_order);

        // orbits of special points
        let n = self.points.len();
        let mut orbit_of = vec![usize::MAX; n];
        let mut orbits: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            if orbit_of[x] != usize::MAX {
                continue;
            }
            let mut orbit: Vec<usize> = elements.iter().map(|e| e.point_map[x]).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &y in &orbit {
                orbit_of[y] = orbits.len();
            }
            orbits.push(orbit);
        }

        let mut cones = Vec::new();
        for orbit in &orbits {
            let rep = orbit[0];
            let marking = self.points[rep].marking;
            if orbit.iter().any(|&y| self.points[y].marking != marking) {
                return Err(PieceError::MixedMarkings);
            }
            let stab = elements
                .iter()
                .filter(|e| e.point_map[rep] == rep)
                .count() as u64;
            let order = stab * marking.unwrap_or(1);
            if order > 1 {
                cones.push(order);
            }
        }

        let mut chi_top = chi_quot;
        for &c in &cones {
            chi_top += Ratio::new((c - 1) as i64, c as i64);
        }
        if !chi_top.is_integer() {
            return Err(PieceError::NonIntegralGenus(chi_top));
        }
        let chi = chi_top.to_integer();
        if chi > 2 || (2 - chi) % 2 != 0 {
            return Err(PieceError::NonIntegralGenus(chi_top));
        }
        let sig = OrbifoldSignature::new(((2 - chi) / 2) as u32, cones)
            .expect("cone orders >= 2");
        debug_assert!(crate::orbifold::riemann_hurwitz_check(
            &sig,
            &self.marked_signature(),
            h_order as u64
        ));
        Ok(sig)
    }

    /// Structured dump of the decomposition and action.
    pub fn dump(&self) -> PieceSurfaceDump {
        let mut gluing: Vec<((usize, usize), (usize, usize))> = self
            .gluing
            .iter()
            .filter(|(a, b)| a < b)
            .map(|(&a, &b)| (a, b))
            .collect();
        gluing.sort();
        PieceSurfaceDump {
            pieces: self.pieces.clone(),
            gluing,
            group: self.label.clone(),
            generator_piece_maps: self
                .generators
                .iter()
                .map(|g| g.piece_map.clone())
                .collect(),
            generator_rotations: self
                .generators
                .iter()
                .map(|g| {
                    g.fixed_pieces()
                        .into_iter()
                        .filter(|&(_, o)| o > 1)
                        .map(|(p, o)| RotationDatum {
                            piece: p,
                            order: o,
                            fixed_points: 2,
                        })
                        .collect()
                })
                .collect(),
            points: self.points.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RotationDatum {
    pub piece: usize,
    pub order: u64,
    pub fixed_points: usize,
}

/// Serializable dump: per-piece type, hole matching, per-generator piece
/// permutation and rotation data.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PieceSurfaceDump {
    pub pieces: Vec<PieceKind>,
    pub gluing: Vec<((usize, usize), (usize, usize))>,
    pub group: SymmetryGroupLabel,
    pub generator_piece_maps: Vec<Vec<usize>>,
    pub generator_rotations: Vec<Vec<RotationDatum>>,
    pub points: Vec<SpecialPoint>,
}

/// Neighborhood surface of the complete bipartite graph on m+n vertices,
/// with each connecting tube replaced by a genus-h two-holed piece when
/// h > 0. Pieces: m spheres with n holes, n spheres with m holes, and mn
/// connectors; the Z/m x Z/n action is freely transitive on connectors and
/// fixes two axis poles on every vertex sphere.
pub fn bipartite_surface(m: u64, n: u64, h: u64) -> Result<PieceSurface, PieceError> {
    if !(2 <= m && m < n) {
        return Err(PieceError::InvalidParameters(m, n));
    }
    let (m_us, n_us) = (m as usize, n as usize);
    // piece indices: A-vertex spheres 0..m, B-vertex spheres m..m+n,
    // connectors m+n+k*n+l
    let a_piece = |k: usize| k % m_us;
    let b_piece = |l: usize| m_us + l % n_us;
    let e_piece = |k: usize, l: usize| m_us + n_us + (k % m_us) * n_us + l % n_us;

    let mut pieces = Vec::new();
    for _ in 0..m_us {
        pieces.push(PieceKind::HoledSphere { holes: n_us });
    }
    for _ in 0..n_us {
        pieces.push(PieceKind::HoledSphere { holes: m_us });
    }
    let connector = if h == 0 {
        PieceKind::HoledSphere { holes: 2 }
    } else {
        PieceKind::GenusTwoHoled { genus: h }
    };
    for _ in 0..m_us * n_us {
        pieces.push(connector);
    }

    let mut gluing = HashMap::new();
    let mut glue = |a: (usize, usize), b: (usize, usize)| {
        gluing.insert(a, b);
        gluing.insert(b, a);
    };
    for k in 0..m_us {
        for l in 0..n_us {
            glue((a_piece(k), l), (e_piece(k, l), 0));
            glue((b_piece(l), k), (e_piece(k, l), 1));
        }
    }

    // special points: two axis poles on each vertex sphere
    let mut points = Vec::new();
    for k in 0..m_us {
        for _ in 0..2 {
            points.push(SpecialPoint { piece: a_piece(k), marking: None });
        }
    }
    for l in 0..n_us {
        for _ in 0..2 {
            points.push(SpecialPoint { piece: b_piece(l), marking: None });
        }
    }
    let a_pole = |k: usize, s: usize| 2 * (k % m_us) + s;
    let b_pole = |l: usize, s: usize| 2 * m_us + 2 * (l % n_us) + s;

    let n_pieces = pieces.len();
    let n_points = points.len();
    // shift_a rotates the A side by one (and the connector k index);
    // shift_b the B side
    let make_gen = |shift_a: usize, shift_b: usize| -> ElementAction {
        let mut piece_map = vec![0usize; n_pieces];
        let mut hole_maps: Vec<Vec<usize>> =
            pieces.iter().map(|p| vec![0; p.holes()]).collect();
        let mut point_map = vec![0usize; n_points];
        for k in 0..m_us {
            piece_map[a_piece(k)] = a_piece(k + shift_a);
            for l in 0..n_us {
                hole_maps[a_piece(k)][l] = (l + shift_b) % n_us;
            }
            point_map[a_pole(k, 0)] = a_pole(k + shift_a, 0);
            point_map[a_pole(k, 1)] = a_pole(k + shift_a, 1);
        }
        for l in 0..n_us {
            piece_map[b_piece(l)] = b_piece(l + shift_b);
            for k in 0..m_us {
                hole_maps[b_piece(l)][k] = (k + shift_a) % m_us;
            }
            point_map[b_pole(l, 0)] = b_pole(l + shift_b, 0);
            point_map[b_pole(l, 1)] = b_pole(l + shift_b, 1);
        }
        for k in 0..m_us {
            for l in 0..n_us {
                piece_map[e_piece(k, l)] = e_piece(k + shift_a, l + shift_b);
                hole_maps[e_piece(k, l)] = vec![0, 1];
            }
        }
        ElementAction {
            piece_map,
            hole_maps,
            point_map,
        }
    };

    let surface = PieceSurface {
        generators: vec![make_gen(1, 0), make_gen(0, 1)],
        pieces,
        gluing,
        label: SymmetryGroupLabel {
            name: format!("Z/{m} x Z/{n}"),
            generator_names: vec!["s".into(), "t".into()],
            relations: vec![
                words::power(&[1], m as i64),
                words::power(&[2], n as i64),
                vec![1, 2, -1, -2],
            ],
        },
        points,
    };
    surface.validate()?;
    Ok(surface)
}

/// The genus-5 surface around the five-circle pattern (unit circle plus
/// four tangent circles), with its dihedral symmetry of order eight and the
/// four marked points (labels m, m on the first axis, n, n on the second).
///
/// Generators: `rho`, the quarter turn about the vertical axis, and `r1`,
/// the half turn about the first in-plane axis. `r2 = r1·rho²` is the half
/// turn about the second axis; the diagonal half turns are `r1·rho` and
/// `r1·rho³`.
pub fn circle_pattern_surface(m: u64, n: u64) -> Result<PieceSurface, PieceError> {
    if !(2 <= m && m < n) {
        return Err(PieceError::InvalidParameters(m, n));
    }
    // pieces: vertex spheres V0..V3 (4-holed), tangency arcs A0..A3
    // (annuli), loops L0..L3 (annuli). Vertex Vi sits at the tangency in
    // direction 45° + 90°·i; arc Ai runs from Vi to V(i+1); arc A3 crosses
    // the positive first axis, A1 the negative one, A0 and A2 the second
    // axis.
    let v = |i: usize| i % 4;
    let a = |i: usize| 4 + i % 4;
    let lp = |i: usize| 8 + i % 4;
    let mut pieces = Vec::new();
    for _ in 0..4 {
        pieces.push(PieceKind::HoledSphere { holes: 4 });
    }
    for _ in 0..8 {
        pieces.push(PieceKind::HoledSphere { holes: 2 });
    }

    // vertex holes: 0 = incoming arc A(i-1), 1 = outgoing arc Ai,
    // 2 = loop end on the ccw side, 3 = loop end on the cw side
    let mut gluing = HashMap::new();
    let mut glue = |x: (usize, usize), y: (usize, usize)| {
        gluing.insert(x, y);
        gluing.insert(y, x);
    };
    for i in 0..4 {
        glue((a(i), 0), (v(i), 1));
        glue((a(i), 1), (v(i + 1), 0));
        glue((lp(i), 0), (v(i), 2));
        glue((lp(i), 1), (v(i), 3));
    }

    // special points, two per piece; arc slot 0 is the outer axis crossing
    // (marked), slot 1 the inner one
    let mut points = Vec::new();
    let arc_label = |i: usize| if i % 2 == 1 { m } else { n };
    for i in 0..4 {
        points.push(SpecialPoint {
            piece: a(i),
            marking: Some(arc_label(i)),
        });
        points.push(SpecialPoint { piece: a(i), marking: None });
    }
    for i in 0..4 {
        for _ in 0..2 {
            points.push(SpecialPoint { piece: v(i), marking: None });
        }
    }
    for i in 0..4 {
        for _ in 0..2 {
            points.push(SpecialPoint { piece: lp(i), marking: None });
        }
    }
    let arc_pole = |i: usize, s: usize| 2 * (i % 4) + s;
    let v_pole = |i: usize, s: usize| 8 + 2 * (i % 4) + s;
    let l_pole = |i: usize, s: usize| 16 + 2 * (i % 4) + s;

    let n_points = points.len();
    // quarter turn: preserves the plane orientation, shifts every index
    let rho = {
        let mut piece_map = vec![0usize; 12];
        let mut hole_maps: Vec<Vec<usize>> =
            pieces.iter().map(|p| vec![0; p.holes()]).collect();
        let mut point_map = vec![0usize; n_points];
        for i in 0..4 {
            piece_map[v(i)] = v(i + 1);
            piece_map[a(i)] = a(i + 1);
            piece_map[lp(i)] = lp(i + 1);
            hole_maps[v(i)] = vec![0, 1, 2, 3];
            hole_maps[a(i)] = vec![0, 1];
            hole_maps[lp(i)] = vec![0, 1];
            for s in 0..2 {
                point_map[arc_pole(i, s)] = arc_pole(i + 1, s);
                point_map[v_pole(i, s)] = v_pole(i + 1, s);
                point_map[l_pole(i, s)] = l_pole(i + 1, s);
            }
        }
        ElementAction {
            piece_map,
            hole_maps,
            point_map,
        }
    };
    // half turn about the first axis: reverses the plane orientation, so
    // ccw and cw hole sides swap; vertices 0<->3 and 1<->2; arcs A1 and A3
    // are setwise fixed with their holes swapped
    let r1 = {
        let vimg = [3usize, 2, 1, 0];
        let aimg = [2usize, 1, 0, 3];
        let mut piece_map = vec![0usize; 12];
        let mut hole_maps: Vec<Vec<usize>> =
            pieces.iter().map(|p| vec![0; p.holes()]).collect();
        let mut point_map = vec![0usize; n_points];
        for i in 0..4 {
            piece_map[v(i)] = v(vimg[i]);
            piece_map[a(i)] = a(aimg[i]);
            piece_map[lp(i)] = lp(vimg[i]);
            hole_maps[v(i)] = vec![1, 0, 3, 2];
            hole_maps[a(i)] = vec![1, 0];
            hole_maps[lp(i)] = vec![1, 0];
            for s in 0..2 {
                point_map[arc_pole(i, s)] = arc_pole(aimg[i], s);
                point_map[v_pole(i, s)] = v_pole(vimg[i], s);
                point_map[l_pole(i, s)] = l_pole(vimg[i], s);
            }
        }
        ElementAction {
            piece_map,
            hole_maps,
            point_map,
        }
    };

    let surface = PieceSurface {
        pieces,
        gluing,
        label: SymmetryGroupLabel {
            name: "dihedral of order 8".into(),
            generator_names: vec!["rho".into(), "r1".into()],
            relations: vec![
                words::power(&[1], 4),
                words::power(&[2], 2),
                vec![2, 1, 2, 1],
            ],
        },
        generators: vec![rho, r1],
        points,
    };
    surface.validate()?;
    Ok(surface)
}

/// Word for the quarter turn `rho` in the circle-pattern generators.
pub fn word_rho() -> Word {
    vec![1]
}

/// Word for `r1`, the half turn about the first in-plane axis.
pub fn word_r1() -> Word {
    vec![2]
}

/// Word for `r2 = r1·rho²`, the half turn about the second in-plane axis.
pub fn word_r2() -> Word {
    vec![2, 1, 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(g: u32, cones: &[u64]) -> OrbifoldSignature {
        OrbifoldSignature::new(g, cones.to_vec()).unwrap()
    }

    #[test]
    fn bipartite_genus_values() {
        assert_eq!(bipartite_surface(2, 3, 0).unwrap().genus(), 2);
        assert_eq!(bipartite_surface(3, 4, 0).unwrap().genus(), 6);
        assert_eq!(bipartite_surface(2, 3, 5).unwrap().genus(), 32);
    }

    #[test]
    fn bipartite_euler_formula() {
        for m in 2..8u64 {
            for n in (m + 1)..=8 {
                let s = bipartite_surface(m, n, 0).unwrap();
                let (mi, ni) = (m as i64, n as i64);
                assert_eq!(s.euler_characteristic(), 2 * (mi + ni - mi * ni));
                assert_eq!(s.genus(), m * n - m - n + 1);
            }
        }
    }

    #[test]
    fn bipartite_fixed_points() {
        let s = bipartite_surface(2, 3, 0).unwrap();
        // generator of Z/n fixes two poles near each A-vertex
        let fixed_t = s.fixed_point_data(&[2]).unwrap();
        assert_eq!(fixed_t.len(), 2 * 2);
        assert!(fixed_t.iter().all(|&(_, o)| o == 3));
        // generator of Z/m fixes two poles near each B-vertex
        let fixed_s = s.fixed_point_data(&[1]).unwrap();
        assert_eq!(fixed_s.len(), 2 * 3);
        assert!(fixed_s.iter().all(|&(_, o)| o == 2));
    }

    #[test]
    fn bipartite_full_quotients() {
        let both = vec![vec![1], vec![2]];
        assert_eq!(
            bipartite_surface(2, 3, 0)
                .unwrap()
                .quotient_signature(&both)
                .unwrap(),
            sig(0, &[2, 2, 3, 3])
        );
        assert_eq!(
            bipartite_surface(2, 3, 5)
                .unwrap()
                .quotient_signature(&both)
                .unwrap(),
            sig(5, &[2, 2, 3, 3])
        );
    }

    #[test]
    fn bipartite_group_order_and_genus_h() {
        let s = bipartite_surface(2, 3, 1).unwrap();
        assert_eq!(s.group_order().unwrap(), 6);
        assert_eq!(s.genus(), 6 + 2);
    }

    #[test]
    fn circle_pattern_genus_and_order() {
        let s = circle_pattern_surface(2, 3).unwrap();
        assert_eq!(s.genus(), 5);
        assert_eq!(s.group_order().unwrap(), 8);
        assert_eq!(s.marked_signature(), sig(5, &[2, 2, 3, 3]));
    }

    #[test]
    fn circle_pattern_rotation_fixed_points() {
        let s = circle_pattern_surface(2, 3).unwrap();
        let f1 = s.fixed_point_data(&word_r1()).unwrap();
        assert_eq!(f1.len(), 4);
        assert!(f1.iter().all(|&(_, o)| o == 2));
        let f2 = s.fixed_point_data(&word_r2()).unwrap();
        assert_eq!(f2.len(), 4);
        // the free involution rho^2 has no fixed points
        assert!(s.fixed_point_data(&[1, 1]).unwrap().is_empty());
        // a diagonal half turn fixes two vertex spheres and two loops
        let d = s.fixed_point_data(&[2, 1]).unwrap();
        assert_eq!(d.len(), 8);
    }

    #[test]
    fn circle_pattern_quotients() {
        let s = circle_pattern_surface(2, 3).unwrap();
        assert_eq!(
            s.quotient_signature(&[word_r1()]).unwrap(),
            sig(2, &[2, 2, 4, 4, 3])
        );
        assert_eq!(
            s.quotient_signature(&[word_r2()]).unwrap(),
            sig(2, &[2, 2, 2, 6, 6])
        );
        assert_eq!(
            s.quotient_signature(&[word_r1(), word_r2()]).unwrap(),
            sig(1, &[2, 2, 4, 6])
        );
    }

    #[test]
    fn quarter_turn_conjugates_the_involutions_and_swaps_labels() {
        let s = circle_pattern_surface(2, 3).unwrap();
        // rho^-1 r1 rho = r2 as actions
        let conj = s.action_of_word(&words::concat(&[
            &words::inverse(&word_rho()),
            &word_r1(),
            &word_rho(),
        ]));
        assert_eq!(conj, s.action_of_word(&word_r2()));
        // rho maps each m-marked point to an n-marked point and back
        let rho = s.action_of_word(&word_rho());
        for (x, pt) in s.points().iter().enumerate() {
            if let Some(l) = pt.marking {
                let y = rho.point_image(x);
                let other = s.points()[y].marking.unwrap();
                assert_ne!(l, other);
            }
        }
    }

    #[test]
    fn quotients_satisfy_riemann_hurwitz() {
        use crate::orbifold::riemann_hurwitz_check;
        let s = circle_pattern_surface(3, 4).unwrap();
        for (sub, deg) in [
            (vec![word_r1()], 2u64),
            (vec![word_r2()], 2),
            (vec![word_r1(), word_r2()], 4),
        ] {
            let q = s.quotient_signature(&sub).unwrap();
            assert!(riemann_hurwitz_check(&q, &s.marked_signature(), deg));
        }
    }
}
