//! The parameterized tower of covers over the four-cone torus.
//!
//! For n > m >= 2 the tower consists of five arrows
//!
//! ```text
//!            S_g
//!             |  (degree mn, deck Z/m x Z/n)
//!        S(5; m,m,n,n)
//!         /        \      (degree 2 each)
//! S(2; 2,2,2m,2m,n)  S(2; 2,2,2n,2n,m)
//!         \        /      (degree 2 each)
//!        T(2,2,2m,2n)
//! ```
//!
//! together with the two 2mn-sheeted composites over the genus-2 orbifolds
//! and the 4mn-sheeted composite over the torus. The cone images are the
//! unique assignments producing these signatures: on the top arrow the four
//! cones map to (1,0), (-1,0), (0,1), (0,-1) with trivial handle images;
//! each double cover sends exactly the cones whose order must halve above
//! to the transposition.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abelian::{AbElem, FiniteAbelianType};
use crate::orbifold::OrbifoldSignature;
use crate::perm::Permutation;
use crate::words;

use super::compose::{compose, compose_with_values, schreier_of};
use super::{are_equivalent, CoverError, MonodromyCover};

pub const DEFAULT_DEGREE_CAP: u64 = 256;

#[derive(Debug, Error)]
pub enum TowerError {
    #[error("parameters must satisfy n > m >= 2, got m={0}, n={1}")]
    InvalidParameters(u64, u64),
    #[error("full composite degree 4mn = {0} exceeds cap {1}")]
    DegreeCapExceeded(u64, u64),
    #[error("tower check failed: {0}")]
    Check(String),
    #[error(transparent)]
    Cover(#[from] CoverError),
}

/// The five arrows of the diagram plus the three composites.
#[derive(Debug, Clone)]
pub struct CoverTower {
    pub m: u64,
    pub n: u64,
    /// S_g over S(5; m,m,n,n), degree mn, regular with deck Z/m x Z/n.
    pub top: MonodromyCover,
    /// S(5; m,m,n,n) over S(2; 2,2,2m,2m,n), degree 2.
    pub mid_m: MonodromyCover,
    /// S(5; m,m,n,n) over S(2; 2,2,2n,2n,m), degree 2.
    pub mid_n: MonodromyCover,
    /// S(2; 2,2,2m,2m,n) over T(2,2,2m,2n), degree 2.
    pub bot_m: MonodromyCover,
    /// S(2; 2,2,2n,2n,m) over T(2,2,2m,2n), degree 2.
    pub bot_n: MonodromyCover,
    /// Composite S_g over S(2; 2,2,2m,2m,n), degree 2mn.
    pub comp_m: MonodromyCover,
    /// Composite S_g over S(2; 2,2,2n,2n,m), degree 2mn.
    pub comp_n: MonodromyCover,
    /// Composite S(5;…) over T, degree 4, through the 2m side.
    pub klein: MonodromyCover,
    /// Full composite S_g over T, degree 4mn.
    pub full: MonodromyCover,
    /// Whether the two degree-4 composites through either side are
    /// equivalent covers of T (the diagram commutes).
    pub commutes: bool,
}

/// Serializable per-cover summary for reports.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CoverSummary {
    pub name: String,
    pub base: String,
    pub degree: usize,
    pub images: Vec<String>,
    pub total: String,
    pub regular: bool,
    pub deck_order: usize,
}

impl CoverTower {
    pub fn expected_top_genus(m: u64, n: u64) -> u64 {
        6 * m * n - m - n + 1
    }

    /// The five single arrows, named.
    pub fn arrows(&self) -> Vec<(&'static str, &MonodromyCover)> {
        vec![
            ("top", &self.top),
            ("mid_m", &self.mid_m),
            ("mid_n", &self.mid_n),
            ("bot_m", &self.bot_m),
            ("bot_n", &self.bot_n),
        ]
    }

    pub fn all_covers(&self) -> Vec<(&'static str, &MonodromyCover)> {
        let mut out = self.arrows();
        out.push(("comp_m", &self.comp_m));
        out.push(("comp_n", &self.comp_n));
        out.push(("klein", &self.klein));
        out.push(("full", &self.full));
        out
    }

    pub fn summaries(&self) -> Result<Vec<CoverSummary>, CoverError> {
        self.all_covers()
            .into_iter()
            .map(|(name, c)| {
                let deck = c.deck_elements()?;
                Ok(CoverSummary {
                    name: name.to_string(),
                    base: c.base().to_string(),
                    degree: c.degree(),
                    images: c.images().iter().map(|p| p.to_string()).collect(),
                    total: c.total_signature()?.to_string(),
                    regular: deck.len() == c.degree(),
                    deck_order: deck.len(),
                })
            })
            .collect()
    }
}

pub fn build_tower(m: u64, n: u64) -> Result<CoverTower, TowerError> {
    build_tower_capped(m, n, DEFAULT_DEGREE_CAP)
}

pub fn build_tower_capped(m: u64, n: u64, cap: u64) -> Result<CoverTower, TowerError> {
    if !(2 <= m && m < n) {
        return Err(TowerError::InvalidParameters(m, n));
    }
    if 4 * m * n > cap {
        return Err(TowerError::DegreeCapExceeded(4 * m * n, cap));
    }
    let sig = |g: u32, cones: &[u64]| {
        OrbifoldSignature::new(g, cones.to_vec()).expect("cone orders >= 2")
    };
    let sigma5 = sig(5, &[m, m, n, n]);
    let s2m = sig(2, &[2, 2, 2 * m, 2 * m, n]);
    let s2n = sig(2, &[2, 2, 2 * n, 2 * n, m]);
    let t_base = sig(1, &[2, 2, 2 * m, 2 * n]);

    // top arrow: regular Z/m x Z/n cover via the regular representation
    let ab = FiniteAbelianType::new(vec![m, n]).expect("m, n >= 2");
    let mn = (m * n) as usize;
    let top = {
        let id = Permutation::identity(mn);
        let mut images = vec![id; 10];
        // sorted cones are [m, m, n, n] since m < n
        images.push(ab.translation_perm(&[1, 0]));
        images.push(ab.translation_perm(&[-1, 0]));
        images.push(ab.translation_perm(&[0, 1]));
        images.push(ab.translation_perm(&[0, -1]));
        MonodromyCover::new(sigma5.clone(), mn, images)?
    };

    // middle arrows: double covers where every cone except the order-n
    // (resp. order-m) one maps to the transposition
    let mid_m = double_cover_with_trivial_role(&s2m, n, 0)?;
    let mid_n = double_cover_with_trivial_role(&s2n, m, 0)?;

    // bottom arrows: cones of T are (2, 2, 2m, 2n); the 2m side sends
    // (u1, u2, v, t) to (1, s, 1, s), the 2n side to (s, 1, s, 1)
    let swap = Permutation::parse("(0 1)", 2).expect("transposition");
    let id2 = Permutation::identity(2);
    let bot_m = MonodromyCover::new(
        t_base.clone(),
        2,
        vec![
            id2.clone(),
            id2.clone(),
            id2.clone(),
            swap.clone(),
            id2.clone(),
            swap.clone(),
        ],
    )?;
    let bot_n = MonodromyCover::new(
        t_base.clone(),
        2,
        vec![
            id2.clone(),
            id2.clone(),
            swap.clone(),
            id2.clone(),
            swap.clone(),
            id2,
        ],
    )?;

    check(
        bot_m.total_signature()? == s2m && bot_n.total_signature()? == s2n,
        "bottom double covers must have the genus-2 orbifold totals",
    )?;
    check(
        mid_m.total_signature()? == sigma5 && mid_n.total_signature()? == sigma5,
        "middle double covers must have the genus-5 orbifold total",
    )?;
    let expected_genus = CoverTower::expected_top_genus(m, n) as u32;
    check(
        top.total_signature()? == OrbifoldSignature::surface(expected_genus),
        "top cover must produce the closed surface of genus 6mn-m-n+1",
    )?;

    // the two 2mn-sheeted composites
    let comp_m = compose(&mid_m, &top)?;
    let comp_n = compose(&mid_n, &top)?;

    // degree-4 composites over T through either side; the Klein-group
    // structure of the diagram supplies the canonical transport
    let klein = compose_with_values(&bot_m, &mid_m, &klein_transport(&bot_m, 0)?)?;
    let klein_other = compose_with_values(&bot_n, &mid_n, &klein_transport(&bot_n, 1)?)?;
    let commutes = are_equivalent(&klein, &klein_other)?;

    // full 4mn composite, bracketed through the Klein cover
    let full = compose(&klein, &top)?;

    check(
        comp_m.degree() == 2 * mn && comp_n.degree() == 2 * mn && full.degree() == 4 * mn,
        "composite degrees must be 2mn, 2mn, 4mn",
    )?;
    check(
        comp_m.total_signature()? == OrbifoldSignature::surface(expected_genus)
            && comp_n.total_signature()? == OrbifoldSignature::surface(expected_genus)
            && full.total_signature()? == OrbifoldSignature::surface(expected_genus),
        "composites must have the genus-g surface total",
    )?;

    Ok(CoverTower {
        m,
        n,
        top,
        mid_m,
        mid_n,
        bot_m,
        bot_n,
        comp_m,
        comp_n,
        klein,
        full,
        commutes,
    })
}

fn check(ok: bool, what: &str) -> Result<(), TowerError> {
    if ok {
        Ok(())
    } else {
        Err(TowerError::Check(what.to_string()))
    }
}

/// Double cover of a genus-2 five-cone orbifold where exactly one cone of
/// order `trivial_order` maps trivially (the last one among equal orders)
/// and all other cones map to the transposition.
fn double_cover_with_trivial_role(
    base: &OrbifoldSignature,
    trivial_order: u64,
    _role: usize,
) -> Result<MonodromyCover, CoverError> {
    let swap = Permutation::parse("(0 1)", 2).expect("transposition");
    let id = Permutation::identity(2);
    let pres = base.presentation();
    let trivial_index = (0..pres.cone_count())
        .rev()
        .find(|&j| pres.cone_order(j) == trivial_order)
        .expect("base carries a cone of the trivial order");
    let mut images = vec![id.clone(); 2 * pres.genus()];
    for j in 0..pres.cone_count() {
        images.push(if j == trivial_index { id.clone() } else { swap.clone() });
    }
    MonodromyCover::new(base.clone(), 2, images)
}

/// Transport values for composing a bottom arrow with a middle arrow: the
/// Klein-group homomorphism of the diagram evaluated on the Schreier
/// generators, projected to the relevant Z/2 factor (`component` 0 for the
/// 2m side, 1 for the 2n side).
fn klein_transport(bot: &MonodromyCover, component: usize) -> Result<Vec<AbElem>, CoverError> {
    // Klein values per T-presentation generator: handles 0, cones
    // (u1, u2, v, t) -> (e1, e2, e1, e2)
    let phi: [(i64, i64); 6] = [
        (0, 0),
        (0, 0),
        (1, 0),
        (0, 1),
        (1, 0),
        (0, 1),
    ];
    let schreier = schreier_of(bot)?;
    let mut out = Vec::with_capacity(schreier.generator_count());
    for idx in 0..schreier.generator_count() {
        let w = schreier.schreier_gen_in_base(idx);
        let mut v = (0i64, 0i64);
        for &l in &w {
            let g = words::gen_of(l);
            let s = l.signum() as i64;
            v.0 = (v.0 + s * phi[g].0).rem_euclid(2);
            v.1 = (v.1 + s * phi[g].1).rem_euclid(2);
        }
        let (keep, other) = if component == 0 { (v.0, v.1) } else { (v.1, v.0) };
        if other != 0 {
            return Err(CoverError::NoTransport);
        }
        out.push(vec![keep]);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbifold::riemann_hurwitz_check;

    #[test]
    fn tower_2_3_signatures_and_degrees() {
        let t = build_tower(2, 3).unwrap();
        assert_eq!(t.top.total_signature().unwrap().to_string(), "S(32;)");
        assert_eq!(t.top.base().to_string(), "S(5; 2,2,3,3)");
        assert_eq!(t.mid_m.base().to_string(), "S(2; 2,2,3,4,4)");
        assert_eq!(t.mid_n.base().to_string(), "S(2; 2,2,2,6,6)");
        assert_eq!(t.bot_m.base().to_string(), "S(1; 2,2,4,6)");
        assert_eq!(t.comp_m.degree(), 12);
        assert_eq!(t.comp_n.degree(), 12);
        assert_eq!(t.full.degree(), 24);
        assert!(t.commutes);
    }

    #[test]
    fn tower_2_3_exact_chi_values() {
        use crate::orbifold::Rational;
        let t = build_tower(2, 3).unwrap();
        let chi = |c: &MonodromyCover| c.base().euler_characteristic();
        assert_eq!(
            t.top.total_signature().unwrap().euler_characteristic(),
            Rational::from_integer(-62)
        );
        assert_eq!(chi(&t.top), Rational::new(-31, 3));
        assert_eq!(chi(&t.mid_m), Rational::new(-31, 6));
        assert_eq!(chi(&t.mid_n), Rational::new(-31, 6));
        assert_eq!(chi(&t.bot_m), Rational::new(-31, 12));
    }

    #[test]
    fn tower_3_4_top_genus() {
        let t = build_tower(3, 4).unwrap();
        assert_eq!(
            t.top.total_signature().unwrap(),
            OrbifoldSignature::surface(66)
        );
    }

    #[test]
    fn every_tower_cover_satisfies_riemann_hurwitz() {
        let t = build_tower(2, 3).unwrap();
        for (_, c) in t.all_covers() {
            let total = c.total_signature().unwrap();
            assert!(riemann_hurwitz_check(c.base(), &total, c.degree() as u64));
        }
    }

    #[test]
    fn arrows_are_regular() {
        let t = build_tower(2, 3).unwrap();
        for (name, c) in t.arrows() {
            assert!(c.is_regular().unwrap(), "arrow {name} must be regular");
        }
        let deck = t.top.deck_group().unwrap();
        assert_eq!(deck.order(), 6);
        assert!(deck.is_abelian());
    }

    #[test]
    fn composites_distinguished_by_branch_data() {
        let t = build_tower(2, 3).unwrap();
        assert_eq!(t.comp_m.ramification_orders(), vec![2, 2, 3, 4, 4]);
        assert_eq!(t.comp_n.ramification_orders(), vec![2, 2, 2, 6, 6]);
        assert!(super::super::branch_data_distinguishes(&t.comp_m, &t.comp_n));
    }
}
