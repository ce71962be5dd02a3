//! Branched covers of 2-orbifolds as monodromy representations.
//!
//! A cover of degree `d` over a base orbifold is a map from the generators
//! of the standard presentation to permutations of the fiber `{0..d-1}`
//! (a right action, words evaluated left to right). Validity means: every
//! relation maps to the identity, the image is transitive, and over each
//! cone generator every cycle length divides the cone order.

mod compose;
mod tower;

pub use compose::{compose, compose_with_values};
pub use tower::{build_tower, CoverTower, TowerError, DEFAULT_DEGREE_CAP};

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::orbifold::{
    riemann_hurwitz_check, OrbifoldPresentation, OrbifoldSignature, Rational,
};
use crate::perm::{
    centralizer_of_transitive, is_transitive_on, PermGroup, Permutation,
};
use crate::schreier::SchreierData;
use crate::words::{self, Word};
use crate::intmat;

#[derive(Debug, Error)]
pub enum CoverError {
    #[error("image count {got} does not match presentation generators {want}")]
    ImageCountMismatch { got: usize, want: usize },
    #[error("image degree {got} does not match cover degree {want}")]
    ImageDegreeMismatch { got: usize, want: usize },
    #[error("cover is invalid: {0}")]
    Invalid(Violation),
    #[error("total genus is not a non-negative integer: chi_top = {0}")]
    NonIntegralGenus(Rational),
    #[error("cover is not regular (deck order {deck} < degree {degree})")]
    NotRegular { deck: usize, degree: usize },
    #[error("basepoint {0} out of range for degree {1}")]
    BasepointOutOfRange(usize, usize),
    #[error("bases differ: {0} vs {1}")]
    BaseMismatch(OrbifoldSignature, OrbifoldSignature),
    #[error("degree cap exceeded: {0}")]
    DegreeCapExceeded(u64),
    #[error("composition mismatch: upper base {upper} is not lower total {total}")]
    CompositionMismatch {
        upper: OrbifoldSignature,
        total: OrbifoldSignature,
    },
    #[error("upper cover is not regular with abelian deck group")]
    UpperNotRegularAbelian,
    #[error("no transport of the upper cover matches the branching data")]
    NoTransport,
    #[error(transparent)]
    Perm(#[from] crate::perm::PermError),
    #[error(transparent)]
    Schreier(#[from] crate::schreier::SchreierError),
}

/// One failed validity condition, with the offending datum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    RelationNotKilled { relation: usize },
    NotTransitive { orbit_count: usize },
    CycleDoesNotDivide { cone: usize, cycle_len: usize, order: u64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RelationNotKilled { relation } => {
                write!(f, "relation {relation} does not map to the identity")
            }
            Violation::NotTransitive { orbit_count } => {
                write!(f, "monodromy is not transitive ({orbit_count} orbits)")
            }
            Violation::CycleDoesNotDivide { cone, cycle_len, order } => write!(
                f,
                "cone generator {cone}: cycle length {cycle_len} does not divide order {order}"
            ),
        }
    }
}

/// A branched cover encoded by permutation images of the base presentation
/// generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonodromyCover {
    base: OrbifoldSignature,
    degree: usize,
    images: Vec<Permutation>,
}

impl MonodromyCover {
    pub fn new(
        base: OrbifoldSignature,
        degree: usize,
        images: Vec<Permutation>,
    ) -> Result<Self, CoverError> {
        let pres = base.presentation();
        if images.len() != pres.generator_count() {
            return Err(CoverError::ImageCountMismatch {
                got: images.len(),
                want: pres.generator_count(),
            });
        }
        for p in &images {
            if p.degree() != degree {
                return Err(CoverError::ImageDegreeMismatch {
                    got: p.degree(),
                    want: degree,
                });
            }
        }
        Ok(MonodromyCover {
            base,
            degree,
            images,
        })
    }

    /// The trivial degree-1 cover of a base.
    pub fn trivial(base: OrbifoldSignature) -> Self {
        let n = base.presentation().generator_count();
        MonodromyCover {
            base,
            degree: 1,
            images: vec![Permutation::identity(1); n],
        }
    }

    pub fn base(&self) -> &OrbifoldSignature {
        &self.base
    }

    pub fn presentation(&self) -> OrbifoldPresentation {
        self.base.presentation()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn images(&self) -> &[Permutation] {
        &self.images
    }

    pub fn image_of_word(&self, w: &[i32]) -> Permutation {
        let mut p = Permutation::identity(self.degree);
        for &l in w {
            let g = words::gen_of(l);
            p = if l > 0 {
                p.then(&self.images[g])
            } else {
                p.then(&self.images[g].inverse())
            };
        }
        p
    }

    /// All violated invariants; empty means the cover is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let pres = self.presentation();
        let mut out = Vec::new();
        for (i, rel) in pres.relations().iter().enumerate() {
            if !self.image_of_word(rel).is_identity() {
                out.push(Violation::RelationNotKilled { relation: i });
            }
        }
        if !is_transitive_on(&self.images, self.degree) {
            let orbit_count = crate::perm::orbits_of(&self.images, self.degree).len();
            out.push(Violation::NotTransitive { orbit_count });
        }
        for j in 0..pres.cone_count() {
            let order = pres.cone_order(j);
            let image = &self.images[pres.cone_generator(j)];
            for cycle_len in image.cycle_type() {
                if order % cycle_len as u64 != 0 {
                    out.push(Violation::CycleDoesNotDivide {
                        cone: j,
                        cycle_len,
                        order,
                    });
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    fn require_valid(&self) -> Result<(), CoverError> {
        match self.validate().into_iter().next() {
            None => Ok(()),
            Some(v) => Err(CoverError::Invalid(v)),
        }
    }

    /// Signature of the total space. Genus comes from multiplicativity of
    /// the orbifold Euler characteristic; cone orders above cone `j` are
    /// `c_j / ℓ` over each cycle of length `ℓ`, dropped when trivial.
    pub fn total_signature(&self) -> Result<OrbifoldSignature, CoverError> {
        self.require_valid()?;
        let pres = self.presentation();
        let mut cones_above: Vec<u64> = Vec::new();
        for j in 0..pres.cone_count() {
            let order = pres.cone_order(j);
            for cycle_len in self.images[pres.cone_generator(j)].cycle_type() {
                let above = order / cycle_len as u64;
                if above > 1 {
                    cones_above.push(above);
                }
            }
        }
        let chi_orb = self.base.euler_characteristic()
            * Rational::from_integer(self.degree as i64);
        let mut chi_top = chi_orb;
        for &c in &cones_above {
            chi_top += Rational::new((c - 1) as i64, c as i64);
        }
        if !chi_top.is_integer() {
            return Err(CoverError::NonIntegralGenus(chi_top));
        }
        let chi = chi_top.to_integer();
        if (2 - chi) % 2 != 0 || chi > 2 {
            return Err(CoverError::NonIntegralGenus(chi_top));
        }
        let genus = ((2 - chi) / 2) as u32;
        let total = OrbifoldSignature::new(genus, cones_above)
            .expect("cone orders above are >= 2");
        debug_assert!(riemann_hurwitz_check(&self.base, &total, self.degree as u64));
        Ok(total)
    }

    /// Deck transformations: the centralizer of the monodromy image in the
    /// symmetric group on the fiber. It acts freely, so its order divides
    /// the degree, with equality exactly for regular covers.
    pub fn deck_elements(&self) -> Result<Vec<Permutation>, CoverError> {
        self.require_valid()?;
        Ok(centralizer_of_transitive(&self.images, self.degree)?)
    }

    pub fn is_regular(&self) -> Result<bool, CoverError> {
        Ok(self.deck_elements()?.len() == self.degree)
    }

    pub fn deck_group(&self) -> Result<PermGroup, CoverError> {
        let deck = self.deck_elements()?;
        if deck.len() != self.degree {
            return Err(CoverError::NotRegular {
                deck: deck.len(),
                degree: self.degree,
            });
        }
        Ok(PermGroup::closure(&deck, self.degree)?)
    }

    /// Reidemeister–Schreier presentation of the subgroup stabilizing the
    /// given fiber point.
    pub fn subgroup_presentation(
        &self,
        basepoint: usize,
    ) -> Result<SubgroupPresentation, CoverError> {
        self.require_valid()?;
        if basepoint >= self.degree {
            return Err(CoverError::BasepointOutOfRange(basepoint, self.degree));
        }
        // relabel so the basepoint is coset 0
        let relabel = if basepoint == 0 {
            Permutation::identity(self.degree)
        } else {
            let mut images: Vec<usize> = (0..self.degree).collect();
            images.swap(0, basepoint);
            Permutation::from_images(images).expect("transposition")
        };
        let action: Vec<Permutation> = self
            .images
            .iter()
            .map(|p| p.conjugate_by(&relabel))
            .collect();
        let schreier = SchreierData::new(&action, self.degree)?;
        let pres = self.presentation();
        let mut relations = Vec::new();
        for rel in pres.relations() {
            for coset in 0..self.degree {
                let r = schreier.rewrite(&rel, coset)?;
                if !r.is_empty() {
                    relations.push(r);
                }
            }
        }
        Ok(SubgroupPresentation {
            base: pres,
            schreier,
            relations,
        })
    }

    /// Multiset of cycle types over each cone generator, the branching data
    /// that survives any re-identification of the base: one entry per cone,
    /// sorted.
    pub fn branching_profile(&self) -> Vec<Vec<usize>> {
        let pres = self.presentation();
        let mut out: Vec<Vec<usize>> = (0..pres.cone_count())
            .map(|j| self.images[pres.cone_generator(j)].cycle_type())
            .collect();
        out.sort();
        out
    }

    /// Ramification orders: for each cone point, the local degrees over it
    /// (cycle lengths), flattened into one multiset per cone and returned
    /// as the common value when branching is uniform.
    pub fn ramification_orders(&self) -> Vec<u64> {
        let pres = self.presentation();
        let mut out: Vec<u64> = (0..pres.cone_count())
            .map(|j| {
                let ct = self.images[pres.cone_generator(j)].cycle_type();
                // uniform when the total space is a surface; report max local degree
                *ct.iter().max().unwrap_or(&1) as u64
            })
            .collect();
        out.sort_unstable();
        out
    }
}

/// Equivalence of two covers of the same base with the same fixed
/// presentation: simultaneous conjugacy of the generator images. Refuses
/// fast when per-generator cycle types differ.
pub fn are_equivalent(c1: &MonodromyCover, c2: &MonodromyCover) -> Result<bool, CoverError> {
    if c1.base != c2.base {
        return Err(CoverError::BaseMismatch(c1.base.clone(), c2.base.clone()));
    }
    if c1.degree != c2.degree {
        return Ok(false);
    }
    for (p, q) in c1.images.iter().zip(&c2.images) {
        if p.cycle_type() != q.cycle_type() {
            return Ok(false);
        }
    }
    Ok(crate::perm::conjugate_tuples(&c1.images, &c2.images)?.is_some())
}

/// Whether branching data alone rules out equivalence under *any*
/// identification of the bases as marked surfaces (genus plus marked
/// points, cone orders forgotten).
pub fn branch_data_distinguishes(c1: &MonodromyCover, c2: &MonodromyCover) -> bool {
    c1.degree != c2.degree
        || c1.base.genus() != c2.base.genus()
        || c1.base.cone_orders().len() != c2.base.cone_orders().len()
        || c1.branching_profile() != c2.branching_profile()
}

/// Reidemeister–Schreier output: Schreier generators with coset/edge
/// provenance, rewritten relator conjugates, and the rewriting map.
#[derive(Debug, Clone)]
pub struct SubgroupPresentation {
    base: OrbifoldPresentation,
    schreier: SchreierData,
    relations: Vec<Word>,
}

impl SubgroupPresentation {
    pub fn generator_count(&self) -> usize {
        self.schreier.generator_count()
    }

    pub fn relations(&self) -> &[Word] {
        &self.relations
    }

    pub fn base_presentation(&self) -> &OrbifoldPresentation {
        &self.base
    }

    pub fn schreier(&self) -> &SchreierData {
        &self.schreier
    }

    /// Rewrite a base word stabilizing the basepoint into the subgroup
    /// generators.
    pub fn rewrite(&self, word: &[i32]) -> Result<Word, CoverError> {
        Ok(self.schreier.rewrite(word, 0)?)
    }

    /// Generator provenance: `(coset, base generator)` and the base word
    /// `r_c · g · r_{c·g}^{-1}`.
    pub fn generator_origin(&self, idx: usize) -> (usize, usize, Word) {
        let (c, g) = self.schreier.edge(idx);
        (c, g, self.schreier.schreier_gen_in_base(idx))
    }

    /// Free rank and torsion coefficients of the abelianization.
    pub fn abelian_invariants(&self) -> (usize, Vec<u64>) {
        let n = self.generator_count();
        let rows: Vec<Vec<i64>> = self
            .relations
            .iter()
            .map(|r| words::exponent_vector(r, n))
            .collect();
        intmat::abelian_invariants(&rows, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbifold::OrbifoldSignature;

    fn sig(g: u32, cones: &[u64]) -> OrbifoldSignature {
        OrbifoldSignature::new(g, cones.to_vec()).unwrap()
    }

    fn perm(s: &str, d: usize) -> Permutation {
        Permutation::parse(s, d).unwrap()
    }

    /// The Z/2 cover of T(2,2,4,6) with cone images (1, s, 1, s).
    fn double_cover_of_t() -> MonodromyCover {
        let base = sig(1, &[2, 2, 4, 6]);
        let s = perm("(0 1)", 2);
        let id = Permutation::identity(2);
        MonodromyCover::new(
            base,
            2,
            vec![id.clone(), id.clone(), id.clone(), s.clone(), id, s],
        )
        .unwrap()
    }

    #[test]
    fn trivial_cover_is_valid() {
        for base in [sig(0, &[]), sig(1, &[2, 2, 4, 6]), sig(5, &[2, 2, 3, 3])] {
            let c = MonodromyCover::trivial(base.clone());
            assert!(c.validate().is_empty());
            assert_eq!(c.total_signature().unwrap(), base);
        }
    }

    #[test]
    fn double_cover_valid_and_long_relation_violation() {
        let c = double_cover_of_t();
        assert!(c.validate().is_empty());

        // moving one transposition to the first cone breaks the long relation
        let base = sig(1, &[2, 2, 4, 6]);
        let s = perm("(0 1)", 2);
        let id = Permutation::identity(2);
        let bad = MonodromyCover::new(
            base,
            2,
            vec![id.clone(), id.clone(), s, id.clone(), id.clone(), id],
        )
        .unwrap();
        let violations = bad.validate();
        assert!(violations
            .iter()
            .any(|v| matches!(v, Violation::RelationNotKilled { .. })));
    }

    #[test]
    fn total_signature_of_double_cover() {
        // cone images (s, 1, 1, s): total S(2; 2,2,4,4,3)
        let base = sig(1, &[2, 2, 4, 6]);
        let s = perm("(0 1)", 2);
        let id = Permutation::identity(2);
        let c = MonodromyCover::new(
            base,
            2,
            vec![id.clone(), id.clone(), s.clone(), id.clone(), id, s],
        )
        .unwrap();
        assert_eq!(c.total_signature().unwrap(), sig(2, &[2, 2, 4, 4, 3]));
    }

    #[test]
    fn degree_six_regular_cover_of_sigma5() {
        use crate::abelian::FiniteAbelianType;
        let t = FiniteAbelianType::new(vec![2, 3]).unwrap();
        let base = sig(5, &[2, 2, 3, 3]);
        let id = Permutation::identity(6);
        let mut images = vec![id; 10];
        images.push(t.translation_perm(&[1, 0]));
        images.push(t.translation_perm(&[-1, 0]));
        images.push(t.translation_perm(&[0, 1]));
        images.push(t.translation_perm(&[0, -1]));
        let c = MonodromyCover::new(base, 6, images).unwrap();
        assert!(c.validate().is_empty());
        assert_eq!(c.total_signature().unwrap(), sig(32, &[]));
        assert!(c.is_regular().unwrap());
        let deck = c.deck_group().unwrap();
        assert_eq!(deck.order(), 6);
        assert!(deck.is_abelian());
    }

    #[test]
    fn nonregular_cover_has_trivial_centralizer() {
        // degree-3 cover of the four-cone sphere with monodromy generating
        // S3: the point stabilizer is nontrivial, the centralizer of S3 in
        // S3 is trivial, so the cover is not regular
        let base = sig(0, &[2, 2, 2, 2]);
        let c = MonodromyCover::new(
            base,
            3,
            vec![
                perm("(0 1)", 3),
                perm("(0 1)", 3),
                perm("(1 2)", 3),
                perm("(1 2)", 3),
            ],
        )
        .unwrap();
        assert!(c.validate().is_empty());
        assert!(!c.is_regular().unwrap());
        assert!(c.deck_group().is_err());
        assert_eq!(c.deck_elements().unwrap().len(), 1);
    }

    #[test]
    fn any_valid_double_cover_is_regular() {
        let c = double_cover_of_t();
        assert!(c.is_regular().unwrap());
        assert_eq!(c.deck_group().unwrap().order(), 2);
    }

    #[test]
    fn subgroup_presentation_of_torus_double_cover() {
        // handle images (s, 1): covering torus, H1 of rank 2
        let base = sig(1, &[]);
        let c =
            MonodromyCover::new(base, 2, vec![perm("(0 1)", 2), Permutation::identity(2)])
                .unwrap();
        let sp = c.subgroup_presentation(0).unwrap();
        assert_eq!(sp.generator_count(), 3);
        let (rank, torsion) = sp.abelian_invariants();
        assert_eq!(rank, 2);
        assert!(torsion.is_empty());
    }

    #[test]
    fn subgroup_presentation_of_trivial_cover() {
        let base = sig(1, &[2, 2, 4, 6]);
        let c = MonodromyCover::trivial(base);
        let sp = c.subgroup_presentation(0).unwrap();
        assert_eq!(sp.generator_count(), 6);
        // abelianization: rank 2 plus torsion of the cone lattice
        let (rank, torsion) = sp.abelian_invariants();
        assert_eq!(rank, 2);
        assert_eq!(torsion, vec![2, 2, 2]);
    }

    #[test]
    fn subgroup_abelianization_matches_total_signature() {
        let c = double_cover_of_t();
        let total = c.total_signature().unwrap();
        assert_eq!(total, sig(2, &[2, 2, 3, 4, 4]));
        let sp = c.subgroup_presentation(0).unwrap();
        let (rank, torsion) = sp.abelian_invariants();
        assert_eq!(rank, 2 * total.genus() as usize);
        // torsion of H1^orb(S(2; 2,2,4,4,3)) is Z/2 + Z/2 + Z/4
        assert_eq!(torsion, vec![2, 2, 4]);
    }

    #[test]
    fn equivalence_basic() {
        let c = double_cover_of_t();
        assert!(are_equivalent(&c, &c).unwrap());
        let relabel = perm("(0 1)", 2);
        let conj = MonodromyCover::new(
            c.base().clone(),
            2,
            c.images().iter().map(|p| p.conjugate_by(&relabel)).collect(),
        )
        .unwrap();
        assert!(are_equivalent(&c, &conj).unwrap());
    }

    #[test]
    fn torsion_of_h1_orbifold_from_trivial_cover_of_sigma5() {
        let c = MonodromyCover::trivial(sig(5, &[2, 2, 3, 3]));
        let sp = c.subgroup_presentation(0).unwrap();
        let (rank, torsion) = sp.abelian_invariants();
        assert_eq!(rank, 10);
        // Z/2 + Z/3 in invariant-factor form
        assert_eq!(torsion, vec![6]);
    }
}
