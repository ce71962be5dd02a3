//! Linear Anosov maps on the torus: exact periodic points, elliptic
//! involution pairing, and the search for a power with enough paired fixed
//! points.
//!
//! Points are rational pairs mod 1 with reduced denominators; periodic
//! points of `A^k` are read off an integer normal form of `A^k − I`, so
//! counts and coordinates are exact.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intmat;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DynamicsError {
    #[error("matrix determinant must be 1, got {0}")]
    BadDeterminant(i64),
    #[error("cannot parse matrix from {0:?}")]
    ParseMatrix(String),
    #[error("cannot parse point from {0:?}")]
    ParsePoint(String),
    #[error("A^{k} - I is singular")]
    SingularFixedSet { k: u32 },
    #[error("point set is not closed under negation")]
    NotNegationClosed,
    #[error("no power up to {0} has the required fixed-point data")]
    PowerCapExceeded(u32),
    #[error("matrix entries overflow at power {0}")]
    Overflow(u32),
}

/// A 2×2 integer matrix of determinant exactly 1, acting on the torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusMap {
    entries: [[i64; 2]; 2],
}

impl TorusMap {
    pub fn new(entries: [[i64; 2]; 2]) -> Result<Self, DynamicsError> {
        let det = entries[0][0] * entries[1][1] - entries[0][1] * entries[1][0];
        if det != 1 {
            return Err(DynamicsError::BadDeterminant(det));
        }
        Ok(TorusMap { entries })
    }

    pub fn entries(&self) -> [[i64; 2]; 2] {
        self.entries
    }

    pub fn trace(&self) -> i64 {
        self.entries[0][0] + self.entries[1][1]
    }

    /// Anosov exactly when |trace| > 2.
    pub fn is_anosov(&self) -> bool {
        self.trace().abs() > 2
    }

    /// Exact k-th power, erroring on i128 overflow.
    pub fn power(&self, k: u32) -> Result<[[i128; 2]; 2], DynamicsError> {
        let mut out = [[1i128, 0], [0, 1]];
        let a = self.entries;
        for _ in 0..k {
            let mut next = [[0i128; 2]; 2];
            for (i, row) in next.iter_mut().enumerate() {
                for (j, cell) in row.iter_mut().enumerate() {
                    let mut acc: i128 = 0;
                    for (l, arow) in a.iter().enumerate() {
                        let term = out[i][l]
                            .checked_mul(arow[j] as i128)
                            .ok_or(DynamicsError::Overflow(k))?;
                        acc = acc.checked_add(term).ok_or(DynamicsError::Overflow(k))?;
                    }
                    *cell = acc;
                }
            }
            out = next;
        }
        Ok(out)
    }

    pub fn apply(&self, p: &TorusPoint) -> TorusPoint {
        let a = self.entries;
        TorusPoint::new(
            Ratio::from_integer(a[0][0]) * p.x + Ratio::from_integer(a[0][1]) * p.y,
            Ratio::from_integer(a[1][0]) * p.x + Ratio::from_integer(a[1][1]) * p.y,
        )
    }
}

impl fmt::Display for TorusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = self.entries;
        write!(f, "{},{},{},{}", a[0][0], a[0][1], a[1][0], a[1][1])
    }
}

impl FromStr for TorusMap {
    type Err = DynamicsError;

    /// Row-major "a,b,c,d".
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let nums: Result<Vec<i64>, _> = s.split(',').map(|t| t.trim().parse::<i64>()).collect();
        let nums = nums.map_err(|_| DynamicsError::ParseMatrix(s.into()))?;
        if nums.len() != 4 {
            return Err(DynamicsError::ParseMatrix(s.into()));
        }
        TorusMap::new([[nums[0], nums[1]], [nums[2], nums[3]]])
    }
}

/// A rational point of the torus, both coordinates normalized to [0, 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TorusPoint {
    x: Ratio<i64>,
    y: Ratio<i64>,
}

impl TorusPoint {
    pub fn new(x: Ratio<i64>, y: Ratio<i64>) -> Self {
        TorusPoint {
            x: x - x.floor(),
            y: y - y.floor(),
        }
    }

    pub fn from_fractions(px: i64, qx: i64, py: i64, qy: i64) -> Self {
        TorusPoint::new(Ratio::new(px, qx), Ratio::new(py, qy))
    }

    pub fn origin() -> Self {
        TorusPoint::new(Ratio::zero(), Ratio::zero())
    }

    pub fn x(&self) -> Ratio<i64> {
        self.x
    }

    pub fn y(&self) -> Ratio<i64> {
        self.y
    }

    /// The elliptic involution −I.
    pub fn negate(&self) -> TorusPoint {
        TorusPoint::new(-self.x, -self.y)
    }

    /// Fixed by the involution, i.e. 2-torsion.
    pub fn is_two_torsion(&self) -> bool {
        *self == self.negate()
    }

    /// Common denominator of the two coordinates.
    pub fn denominator(&self) -> i64 {
        num_integer::lcm(*self.x.denom(), *self.y.denom())
    }

    fn sort_key(&self) -> (i64, i64, i64) {
        let l = self.denominator();
        (
            l,
            self.x.numer() * (l / self.x.denom()),
            self.y.numer() * (l / self.y.denom()),
        )
    }
}

impl Ord for TorusPoint {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for TorusPoint {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{},{}/{}",
            self.x.numer(),
            self.x.denom(),
            self.y.numer(),
            self.y.denom()
        )
    }
}

impl FromStr for TorusPoint {
    type Err = DynamicsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 2 {
            return Err(DynamicsError::ParsePoint(s.into()));
        }
        let frac = |t: &str| -> Result<Ratio<i64>, DynamicsError> {
            let t = t.trim();
            if let Some((p, q)) = t.split_once('/') {
                let p: i64 = p.trim().parse().map_err(|_| DynamicsError::ParsePoint(s.into()))?;
                let q: i64 = q.trim().parse().map_err(|_| DynamicsError::ParsePoint(s.into()))?;
                if q == 0 {
                    return Err(DynamicsError::ParsePoint(s.into()));
                }
                Ok(Ratio::new(p, q))
            } else {
                let p: i64 = t.parse().map_err(|_| DynamicsError::ParsePoint(s.into()))?;
                Ok(Ratio::from_integer(p))
            }
        };
        Ok(TorusPoint::new(frac(parts[0])?, frac(parts[1])?))
    }
}

/// Fixed points of `A^k` on the torus: the count is `|det(A^k − I)|` and
/// the points come from an integer normal form of `A^k − I`, sorted by
/// (denominator, numerators).
pub fn periodic_points(
    t: &TorusMap,
    k: u32,
) -> Result<(u64, Vec<TorusPoint>), DynamicsError> {
    let ak = t.power(k)?;
    let m = [
        [ak[0][0] - 1, ak[0][1]],
        [ak[1][0], ak[1][1] - 1],
    ];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det == 0 {
        return Err(DynamicsError::SingularFixedSet { k });
    }
    let count = det.unsigned_abs();
    let count_u64 =
        u64::try_from(count).map_err(|_| DynamicsError::Overflow(k))?;

    // Solutions of M x ∈ Z² mod Z²: with U M V = D, they are V (i/d1, j/d2)
    let mat: intmat::Mat = m
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let snf = intmat::smith_normal_form(&mat);
    let d1 = snf.d[0][0].to_i64().ok_or(DynamicsError::Overflow(k))?;
    let d2 = snf.d[1][1].to_i64().ok_or(DynamicsError::Overflow(k))?;
    let v: Vec<Vec<i64>> = snf
        .v
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| x.to_i64().ok_or(DynamicsError::Overflow(k)))
                .collect::<Result<_, _>>()
        })
        .collect::<Result<_, _>>()?;
    let mut points = Vec::with_capacity(count_u64 as usize);
    for i in 0..d1 {
        for j in 0..d2 {
            let y0 = Ratio::new(i, d1);
            let y1 = Ratio::new(j, d2);
            let x = Ratio::from_integer(v[0][0]) * y0 + Ratio::from_integer(v[0][1]) * y1;
            let y = Ratio::from_integer(v[1][0]) * y0 + Ratio::from_integer(v[1][1]) * y1;
            points.push(TorusPoint::new(x, y));
        }
    }
    points.sort();
    points.dedup();
    debug_assert_eq!(points.len() as u64, count_u64);
    Ok((count_u64, points))
}

/// Partition a negation-closed point set into −I-fixed points (2-torsion)
/// and unordered pairs {p, −p}, each pair listed with its smaller member
/// first, pairs sorted.
#[allow(clippy::type_complexity)]
pub fn involution_classify(
    pts: &[TorusPoint],
) -> Result<(Vec<TorusPoint>, Vec<(TorusPoint, TorusPoint)>), DynamicsError> {
    for p in pts {
        if !pts.contains(&p.negate()) {
            return Err(DynamicsError::NotNegationClosed);
        }
    }
    let mut fixed = Vec::new();
    let mut pairs = Vec::new();
    let mut sorted = pts.to_vec();
    sorted.sort();
    sorted.dedup();
    for p in &sorted {
        if p.is_two_torsion() {
            fixed.push(*p);
        } else if *p < p.negate() {
            pairs.push((*p, p.negate()));
        }
    }
    Ok((fixed, pairs))
}

pub const DEFAULT_POWER_SEARCH_CAP: u32 = 64;

/// Result of `find_power`: the least suitable exponent and the first two
/// involution pairs in canonical order.
#[derive(Debug, Clone)]
pub struct PowerSearch {
    pub k: u32,
    pub fixed_count: u64,
    pub paired_count: u64,
    pub pairs: Vec<(TorusPoint, TorusPoint)>,
}

/// Least k ≥ 1 with at least `min_fixed` fixed points of `A^k` of which at
/// least `min_paired` lie in two-element −I-orbits. The selected pairs are
/// the first two in the canonical point order.
pub fn find_power(
    t: &TorusMap,
    min_fixed: u64,
    min_paired: u64,
    cap: u32,
) -> Result<PowerSearch, DynamicsError> {
    for k in 1..=cap {
        let (count, pts) = periodic_points(t, k)?;
        if count < min_fixed {
            continue;
        }
        let (_, pairs) = involution_classify(&pts)?;
        let paired = 2 * pairs.len() as u64;
        if paired >= min_paired {
            return Ok(PowerSearch {
                k,
                fixed_count: count,
                paired_count: paired,
                pairs: pairs.into_iter().take(2).collect(),
            });
        }
    }
    Err(DynamicsError::PowerCapExceeded(cap))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a213() -> TorusMap {
        TorusMap::new([[2, 1], [1, 1]]).unwrap()
    }

    #[test]
    fn anosov_detection() {
        assert!(a213().is_anosov());
        assert!(!TorusMap::new([[1, 1], [0, 1]]).unwrap().is_anosov());
        assert!(!TorusMap::new([[0, -1], [1, 0]]).unwrap().is_anosov());
    }

    #[test]
    fn determinant_enforced() {
        assert!(TorusMap::new([[2, 0], [0, 1]]).is_err());
    }

    #[test]
    fn periodic_counts_for_standard_anosov() {
        let a = a213();
        let expected = [1u64, 5, 16, 45];
        for (k, &want) in expected.iter().enumerate() {
            let (count, pts) = periodic_points(&a, k as u32 + 1).unwrap();
            assert_eq!(count, want);
            assert_eq!(pts.len() as u64, want);
            // count identity |2 - tr(A^k)| for determinant-1 matrices
            let ak = a.power(k as u32 + 1).unwrap();
            let tr = ak[0][0] + ak[1][1];
            assert_eq!(count as i128, (2 - tr).abs());
        }
    }

    #[test]
    fn fixed_points_closed_under_negation() {
        let a = a213();
        for k in 1..=5 {
            let (_, pts) = periodic_points(&a, k).unwrap();
            for p in &pts {
                assert!(pts.contains(&p.negate()));
            }
        }
    }

    #[test]
    fn fixed_sets_nest_under_power_multiples() {
        let a = a213();
        let (_, fix2) = periodic_points(&a, 2).unwrap();
        for j in [2u32, 3] {
            let (_, bigger) = periodic_points(&a, 2 * j).unwrap();
            for p in &fix2 {
                assert!(bigger.contains(p));
            }
        }
    }

    #[test]
    fn classify_two_torsion() {
        let pts = vec![
            TorusPoint::origin(),
            TorusPoint::from_fractions(1, 2, 0, 1),
            TorusPoint::from_fractions(0, 1, 1, 2),
            TorusPoint::from_fractions(1, 2, 1, 2),
        ];
        let (fixed, pairs) = involution_classify(&pts).unwrap();
        assert_eq!(fixed.len(), 4);
        assert!(pairs.is_empty());
    }

    #[test]
    fn classify_fix_a_cubed() {
        let (_, pts) = periodic_points(&a213(), 3).unwrap();
        let (fixed, pairs) = involution_classify(&pts).unwrap();
        assert_eq!(fixed.len(), 4);
        assert_eq!(pairs.len(), 6);
    }

    #[test]
    fn classify_single_pair() {
        let p = TorusPoint::from_fractions(1, 5, 2, 5);
        let (fixed, pairs) = involution_classify(&[p, p.negate()]).unwrap();
        assert!(fixed.is_empty());
        assert_eq!(pairs.len(), 1);
    }

    #[test]
    fn classify_rejects_unclosed_input() {
        let p = TorusPoint::from_fractions(1, 5, 2, 5);
        assert_eq!(
            involution_classify(&[p]),
            Err(DynamicsError::NotNegationClosed)
        );
    }

    #[test]
    fn find_power_standard() {
        let s = find_power(&a213(), 8, 4, DEFAULT_POWER_SEARCH_CAP).unwrap();
        assert_eq!(s.k, 3);
        assert_eq!(s.fixed_count, 16);
        assert_eq!(s.paired_count, 12);
        assert_eq!(s.pairs.len(), 2);
        // selected pairs are genuinely fixed by A^3 and exchanged by -I
        let a3 = a213();
        for (p, q) in &s.pairs {
            assert_eq!(&p.negate(), q);
            let mut img = *p;
            for _ in 0..3 {
                img = a3.apply(&img);
            }
            assert_eq!(&img, p);
        }
    }

    #[test]
    fn find_power_trivial_requirements() {
        let s = find_power(&a213(), 1, 0, 8).unwrap();
        assert_eq!(s.k, 1);
    }

    #[test]
    fn find_power_other_matrix() {
        // trace 4: counts |2 - tr(A^k)| = 2, 12, ...
        let a = TorusMap::new([[3, 2], [1, 1]]).unwrap();
        let s = find_power(&a, 8, 4, 16).unwrap();
        assert_eq!(s.k, 2);
        assert_eq!(s.fixed_count, 12);
    }

    #[test]
    fn point_serialization() {
        let p = TorusPoint::from_fractions(1, 4, 3, 4);
        assert_eq!(p.to_string(), "1/4,3/4");
        assert_eq!("1/4,3/4".parse::<TorusPoint>().unwrap(), p);
        assert_eq!(TorusPoint::origin().to_string(), "0/1,0/1");
    }

    #[test]
    fn matrix_serialization() {
        let a = a213();
        assert_eq!(a.to_string(), "2,1,1,1");
        assert_eq!("2,1,1,1".parse::<TorusMap>().unwrap(), a);
        assert!("2,1,1".parse::<TorusMap>().is_err());
    }

    #[test]
    fn map_commutes_with_involution() {
        let a = a213();
        let (_, pts) = periodic_points(&a, 3).unwrap();
        for p in pts {
            assert_eq!(a.apply(&p.negate()), a.apply(&p).negate());
        }
    }
}
