//! Closed orientable 2-orbifolds: signatures, exact orbifold Euler
//! characteristics, and the standard presentation of the orbifold
//! fundamental group.
//!
//! All Euler-characteristic arithmetic is exact rational; this module never
//! touches floating point.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::words::{self, Word};

pub type Rational = Ratio<i64>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrbifoldError {
    #[error("cone order {0} is smaller than 2")]
    ConeOrderTooSmall(u64),
    #[error("cannot parse signature from {0:?}")]
    Parse(String),
}

/// Genus plus cone-order multiset. Two signatures are equal iff genus and
/// the sorted multisets agree; cone orders are stored sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrbifoldSignature {
    genus: u32,
    cone_orders: Vec<u64>,
}

impl OrbifoldSignature {
    pub fn new(genus: u32, mut cone_orders: Vec<u64>) -> Result<Self, OrbifoldError> {
        for &c in &cone_orders {
            if c < 2 {
                return Err(OrbifoldError::ConeOrderTooSmall(c));
            }
        }
        cone_orders.sort_unstable();
        Ok(OrbifoldSignature { genus, cone_orders })
    }

    pub fn surface(genus: u32) -> Self {
        OrbifoldSignature {
            genus,
            cone_orders: Vec::new(),
        }
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn cone_orders(&self) -> &[u64] {
        &self.cone_orders
    }

    pub fn is_surface(&self) -> bool {
        self.cone_orders.is_empty()
    }

    /// Orbifold Euler characteristic `2 - 2g - Σ (1 - 1/c_j)`, exact.
    pub fn euler_characteristic(&self) -> Rational {
        let mut chi = Rational::from_integer(2 - 2 * self.genus as i64);
        for &c in &self.cone_orders {
            chi -= Rational::new((c - 1) as i64, c as i64);
        }
        chi
    }

    /// Euler characteristic of the underlying surface.
    pub fn underlying_euler(&self) -> i64 {
        2 - 2 * self.genus as i64
    }

    pub fn presentation(&self) -> OrbifoldPresentation {
        OrbifoldPresentation {
            signature: self.clone(),
        }
    }
}

impl fmt::Display for OrbifoldSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S({};", self.genus)?;
        for (i, c) in self.cone_orders.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            } else {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for OrbifoldSignature {
    type Err = OrbifoldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let body = t
            .strip_prefix("S(")
            .and_then(|x| x.strip_suffix(')'))
            .ok_or_else(|| OrbifoldError::Parse(s.into()))?;
        let (g, cones) = body
            .split_once(';')
            .ok_or_else(|| OrbifoldError::Parse(s.into()))?;
        let genus: u32 = g.trim().parse().map_err(|_| OrbifoldError::Parse(s.into()))?;
        let cone_orders = cones
            .split(',')
            .map(|x| x.trim())
            .filter(|x| !x.is_empty())
            .map(|x| x.parse::<u64>().map_err(|_| OrbifoldError::Parse(s.into())))
            .collect::<Result<Vec<_>, _>>()?;
        OrbifoldSignature::new(genus, cone_orders)
    }
}

/// `χ^orb(total) = degree · χ^orb(base)`, compared exactly.
pub fn riemann_hurwitz_check(
    base: &OrbifoldSignature,
    total: &OrbifoldSignature,
    degree: u64,
) -> bool {
    total.euler_characteristic() == base.euler_characteristic() * Rational::from_integer(degree as i64)
}

/// Generators of the standard presentation, in the fixed order
/// `a_1, b_1, …, a_g, b_g, x_1, …, x_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    Handle { pair: usize, which: HandleSide },
    Cone { index: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HandleSide {
    A,
    B,
}

/// The standard presentation: `x_j^{c_j} = 1` and
/// `[a_1,b_1]⋯[a_g,b_g]·x_1⋯x_k = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbifoldPresentation {
    signature: OrbifoldSignature,
}

impl OrbifoldPresentation {
    pub fn signature(&self) -> &OrbifoldSignature {
        &self.signature
    }

    pub fn genus(&self) -> usize {
        self.signature.genus as usize
    }

    pub fn cone_count(&self) -> usize {
        self.signature.cone_orders.len()
    }

    pub fn generator_count(&self) -> usize {
        2 * self.genus() + self.cone_count()
    }

    pub fn handle_a(&self, pair: usize) -> usize {
        2 * pair
    }

    pub fn handle_b(&self, pair: usize) -> usize {
        2 * pair + 1
    }

    pub fn cone_generator(&self, index: usize) -> usize {
        2 * self.genus() + index
    }

    pub fn cone_order(&self, index: usize) -> u64 {
        self.signature.cone_orders[index]
    }

    pub fn generator_kind(&self, index: usize) -> Generator {
        if index < 2 * self.genus() {
            Generator::Handle {
                pair: index / 2,
                which: if index % 2 == 0 {
                    HandleSide::A
                } else {
                    HandleSide::B
                },
            }
        } else {
            Generator::Cone {
                index: index - 2 * self.genus(),
            }
        }
    }

    pub fn generator_label(&self, index: usize) -> String {
        match self.generator_kind(index) {
            Generator::Handle {
                pair,
                which: HandleSide::A,
            } => format!("a{}", pair + 1),
            Generator::Handle {
                pair,
                which: HandleSide::B,
            } => format!("b{}", pair + 1),
            Generator::Cone { index } => format!("x{}", index + 1),
        }
    }

    /// The `k` power relations followed by the long relation.
    pub fn relations(&self) -> Vec<Word> {
        let mut rels = Vec::new();
        for j in 0..self.cone_count() {
            rels.push(words::power(
                &[words::letter(self.cone_generator(j), 1)],
                self.cone_order(j) as i64,
            ));
        }
        rels.push(self.long_relation());
        rels
    }

    pub fn long_relation(&self) -> Word {
        let mut w: Word = Vec::new();
        for i in 0..self.genus() {
            let a = words::letter(self.handle_a(i), 1);
            let b = words::letter(self.handle_b(i), 1);
            w.extend_from_slice(&[a, b, -a, -b]);
        }
        for j in 0..self.cone_count() {
            w.push(words::letter(self.cone_generator(j), 1));
        }
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(g: u32, cones: &[u64]) -> OrbifoldSignature {
        OrbifoldSignature::new(g, cones.to_vec()).unwrap()
    }

    #[test]
    fn chi_sphere() {
        assert_eq!(sig(0, &[]).euler_characteristic(), Rational::from_integer(2));
    }

    #[test]
    fn chi_torus_with_cones() {
        // T(2,2,4,6) at (m,n) = (2,3)
        assert_eq!(
            sig(1, &[2, 2, 4, 6]).euler_characteristic(),
            Rational::new(-31, 12)
        );
    }

    #[test]
    fn chi_genus_five_orbifold() {
        let five = sig(5, &[2, 2, 3, 3]);
        assert_eq!(five.euler_characteristic(), Rational::new(-31, 3));
        // consistent with the double cover of S(2; 2,2,4,4,3)
        let two = sig(2, &[2, 2, 4, 4, 3]);
        assert_eq!(
            five.euler_characteristic(),
            two.euler_characteristic() * Rational::from_integer(2)
        );
    }

    #[test]
    fn chi_closed_surfaces() {
        for g in 0..=20u32 {
            assert_eq!(
                sig(g, &[]).euler_characteristic(),
                Rational::from_integer(2 - 2 * g as i64)
            );
        }
    }

    #[test]
    fn cone_decrement() {
        for c in 2..=12u64 {
            let with = sig(3, &[c]).euler_characteristic();
            let without = sig(3, &[]).euler_characteristic();
            assert_eq!(without - with, Rational::new((c - 1) as i64, c as i64));
        }
    }

    #[test]
    fn riemann_hurwitz_examples() {
        let t = sig(1, &[2, 2, 4, 6]);
        let s2 = sig(2, &[2, 2, 4, 4, 3]);
        assert!(riemann_hurwitz_check(&t, &s2, 2));
        assert!(!riemann_hurwitz_check(&t, &s2, 3));
        // S(5; 2,2,3,3) six-fold covered by the genus-32 surface
        assert!(riemann_hurwitz_check(&sig(5, &[2, 2, 3, 3]), &sig(32, &[]), 6));
        for s in [sig(0, &[]), sig(2, &[2, 2, 4, 4, 3]), sig(1, &[5, 7])] {
            assert!(riemann_hurwitz_check(&s, &s, 1));
        }
    }

    #[test]
    fn signature_equality_ignores_listing_order() {
        assert_eq!(sig(2, &[2, 2, 4, 4, 3]), sig(2, &[3, 4, 2, 4, 2]));
    }

    #[test]
    fn display_and_parse() {
        let s = sig(2, &[2, 2, 4, 4, 3]);
        assert_eq!(s.to_string(), "S(2; 2,2,3,4,4)");
        assert_eq!("S(2; 2,2,4,4,3)".parse::<OrbifoldSignature>().unwrap(), s);
        assert_eq!(sig(32, &[]).to_string(), "S(32;)");
        assert_eq!("S(32;)".parse::<OrbifoldSignature>().unwrap(), sig(32, &[]));
    }

    #[test]
    fn presentation_shapes() {
        // sphere with cones (2,2): two generators, relations x1^2, x2^2, x1 x2
        let p = sig(0, &[2, 2]).presentation();
        assert_eq!(p.generator_count(), 2);
        let rels = p.relations();
        assert_eq!(rels.len(), 3);
        assert_eq!(rels[0], vec![1, 1]);
        assert_eq!(rels[1], vec![2, 2]);
        assert_eq!(rels[2], vec![1, 2]);

        // torus: a1, b1 with the single commutator relation
        let p = sig(1, &[]).presentation();
        assert_eq!(p.generator_count(), 2);
        assert_eq!(p.relations(), vec![vec![1, 2, -1, -2]]);

        // T(2,2,4,6): 2 handle + 4 cone generators, 5 relations
        let p = sig(1, &[2, 2, 4, 6]).presentation();
        assert_eq!(p.generator_count(), 6);
        assert_eq!(p.relations().len(), 5);
        assert_eq!(p.generator_label(0), "a1");
        assert_eq!(p.generator_label(1), "b1");
        assert_eq!(p.generator_label(2), "x1");
    }
}
