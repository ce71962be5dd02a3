//! Small finite abelian groups: element arithmetic, automorphism
//! enumeration, regular permutation representations, and recovery of an
//! explicit basis from a regular abelian permutation action.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::{PermGroup, Permutation};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AbelianError {
    #[error("factor {0} is smaller than 2")]
    FactorTooSmall(u64),
    #[error("group order {order} exceeds bound {bound}")]
    BoundExceeded { order: u64, bound: u64 },
    #[error("action is not regular: order {order} on {degree} points")]
    NotRegular { order: usize, degree: usize },
    #[error("action is not abelian")]
    NotAbelian,
}

/// A finite abelian group presented as a direct product of cyclic factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteAbelianType {
    factors: Vec<u64>,
}

/// Element in factor coordinates, normalized to `0 <= v[i] < factors[i]`.
pub type AbElem = Vec<i64>;

impl FiniteAbelianType {
    pub fn new(factors: Vec<u64>) -> Result<Self, AbelianError> {
        for &f in &factors {
            if f < 2 {
                return Err(AbelianError::FactorTooSmall(f));
            }
        }
        Ok(FiniteAbelianType { factors })
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn zero(&self) -> AbElem {
        vec![0; self.factors.len()]
    }

    pub fn normalize(&self, v: &[i64]) -> AbElem {
        v.iter()
            .zip(&self.factors)
            .map(|(&x, &f)| x.rem_euclid(f as i64))
            .collect()
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> AbElem {
        self.normalize(&a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>())
    }

    pub fn neg(&self, a: &[i64]) -> AbElem {
        self.normalize(&a.iter().map(|x| -x).collect::<Vec<_>>())
    }

    pub fn scale(&self, k: i64, a: &[i64]) -> AbElem {
        self.normalize(&a.iter().map(|x| k * x).collect::<Vec<_>>())
    }

    pub fn order_of(&self, a: &[i64]) -> u64 {
        let a = self.normalize(a);
        a.iter()
            .zip(&self.factors)
            .map(|(&x, &f)| {
                if x == 0 {
                    1
                } else {
                    f / num_integer::gcd(f, x as u64)
                }
            })
            .fold(1, num_integer::lcm)
    }

    /// All elements in mixed-radix order (last factor varies fastest).
    pub fn elements(&self) -> Vec<AbElem> {
        (0..self.order()).map(|i| self.elem_at(i as usize)).collect()
    }

    pub fn index_of(&self, a: &[i64]) -> usize {
        let a = self.normalize(a);
        let mut idx = 0usize;
        for (x, f) in a.iter().zip(&self.factors) {
            idx = idx * (*f as usize) + *x as usize;
        }
        idx
    }

    pub fn elem_at(&self, mut idx: usize) -> AbElem {
        let mut out = vec![0i64; self.factors.len()];
        for i in (0..self.factors.len()).rev() {
            let f = self.factors[i] as usize;
            out[i] = (idx % f) as i64;
            idx /= f;
        }
        out
    }

    /// Right-translation permutation of the regular representation.
    pub fn translation_perm(&self, g: &[i64]) -> Permutation {
        let d = self.order() as usize;
        let mut images = vec![0usize; d];
        for idx in 0..d {
            let x = self.elem_at(idx);
            images[idx] = self.index_of(&self.add(&x, g));
        }
        Permutation::from_images(images).expect("translation is a bijection")
    }
}

/// An automorphism given by the images of the standard generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianAut {
    typ: FiniteAbelianType,
    images: Vec<AbElem>,
}

impl AbelianAut {
    pub fn identity(typ: &FiniteAbelianType) -> Self {
        let images = (0..typ.rank())
            .map(|j| {
                let mut e = typ.zero();
                e[j] = 1;
                e
            })
            .collect();
        AbelianAut {
            typ: typ.clone(),
            images,
        }
    }

    pub fn images(&self) -> &[AbElem] {
        &self.images
    }

    pub fn apply(&self, a: &[i64]) -> AbElem {
        let a = self.typ.normalize(a);
        let mut out = self.typ.zero();
        for (x, img) in a.iter().zip(&self.images) {
            out = self.typ.add(&out, &self.typ.scale(*x, img));
        }
        out
    }

    pub fn compose(&self, other: &AbelianAut) -> AbelianAut {
        AbelianAut {
            typ: self.typ.clone(),
            images: self.images.iter().map(|img| other.apply(img)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == AbelianAut::identity(&self.typ)
    }
}

const DEFAULT_AUT_BOUND: u64 = 4096;

/// Enumerate all automorphisms of the group, each verified bijective.
pub fn abelian_automorphisms(typ: &FiniteAbelianType) -> Result<Vec<AbelianAut>, AbelianError> {
    abelian_automorphisms_bounded(typ, DEFAULT_AUT_BOUND)
}

pub fn abelian_automorphisms_bounded(
    typ: &FiniteAbelianType,
    bound: u64,
) -> Result<Vec<AbelianAut>, AbelianError> {
    if typ.order() > bound {
        return Err(AbelianError::BoundExceeded {
            order: typ.order(),
            bound,
        });
    }
    let k = typ.rank();
    // entry (i, j): image of generator j in coordinate i must be a multiple
    // of factors[i] / gcd(factors[i], factors[j]) for the map to be a
    // homomorphism
    let mut choices: Vec<Vec<i64>> = Vec::new(); // per (j, i) the allowed values
    for j in 0..k {
        for i in 0..k {
            let fi = typ.factors[i];
            let fj = typ.factors[j];
            let step = fi / num_integer::gcd(fi, fj);
            choices.push((0..num_integer::gcd(fi, fj)).map(|t| (t * step) as i64).collect());
        }
    }
    let mut out = Vec::new();
    let mut pick = vec![0usize; k * k];
    'outer: loop {
        let images: Vec<AbElem> = (0..k)
            .map(|j| (0..k).map(|i| choices[j * k + i][pick[j * k + i]]).collect())
            .collect();
        let aut = AbelianAut {
            typ: typ.clone(),
            images,
        };
        if is_bijective(typ, &aut) {
            out.push(aut);
        }
        // advance the mixed-radix counter
        for pos in (0..k * k).rev() {
            pick[pos] += 1;
            if pick[pos] < choices[pos].len() {
                continue 'outer;
            }
            pick[pos] = 0;
        }
        break;
    }
    // identity first, then lexicographic: callers iterate in this order
    out.sort_by(|a, b| {
        (!a.is_identity(), &a.images).cmp(&(!b.is_identity(), &b.images))
    });
    Ok(out)
}

fn is_bijective(typ: &FiniteAbelianType, aut: &AbelianAut) -> bool {
    let mut seen = vec![false; typ.order() as usize];
    for e in typ.elements() {
        let idx = typ.index_of(&aut.apply(&e));
        if seen[idx] {
            return false;
        }
        seen[idx] = true;
    }
    true
}

/// A transitive abelian permutation action that is regular, together with
/// explicit coordinates: `coord_of_point[p]` is the unique group element
/// carrying point 0 to `p`.
#[derive(Debug, Clone)]
pub struct RegularAbelian {
    pub typ: FiniteAbelianType,
    pub coord_of_point: Vec<AbElem>,
}

impl RegularAbelian {
    /// Decompose a regular abelian action on `degree` points.
    pub fn from_action(gens: &[Permutation], degree: usize) -> Result<Self, AbelianError> {
        let group = PermGroup::closure(gens, degree)
            .map_err(|_| AbelianError::NotRegular { order: usize::MAX, degree })?;
        if !group.is_abelian() {
            return Err(AbelianError::NotAbelian);
        }
        if group.order() != degree || !group.is_transitive() {
            return Err(AbelianError::NotRegular {
                order: group.order(),
                degree,
            });
        }
        // identify element <-> image of point 0; addition via translation
        let mut perm_of_point: Vec<Option<&Permutation>> = vec![None; degree];
        for e in group.elements() {
            perm_of_point[e.apply(0)] = Some(e);
        }
        let perm_of_point: Vec<&Permutation> = perm_of_point
            .into_iter()
            .map(|p| p.expect("regular action covers all points"))
            .collect();
        let add = |p: usize, q: usize| perm_of_point[q].apply(p);
        let table: Vec<Vec<usize>> = (0..degree)
            .map(|p| (0..degree).map(|q| add(p, q)).collect())
            .collect();
        let (factors, basis) = decompose_table(&table);
        let typ = FiniteAbelianType::new(factors)?;
        // coordinates of every point by full enumeration over the basis span
        let mut coord_of_point: Vec<Option<AbElem>> = vec![None; degree];
        for e in typ.elements() {
            let mut p = 0usize;
            for (c, &b) in e.iter().zip(&basis) {
                for _ in 0..*c {
                    p = table[p][b];
                }
            }
            if coord_of_point[p].is_none() {
                coord_of_point[p] = Some(e);
            }
        }
        let coord_of_point = coord_of_point
            .into_iter()
            .map(|c| c.expect("basis spans the group"))
            .collect();
        Ok(RegularAbelian {
            typ,
            coord_of_point,
        })
    }

    pub fn coord_of_perm(&self, p: &Permutation) -> AbElem {
        self.coord_of_point[p.apply(0)].clone()
    }
}

/// Invariant-style decomposition of a finite abelian group given by its
/// addition table on `{0..n-1}` with identity 0. Returns factor orders
/// (largest first) and one basis point per factor.
fn decompose_table(table: &[Vec<usize>]) -> (Vec<u64>, Vec<usize>) {
    let n = table.len();
    if n == 1 {
        return (Vec::new(), Vec::new());
    }
    let order_of = |x: usize| -> u64 {
        let mut k = 1u64;
        let mut p = x;
        while p != 0 {
            p = table[p][x];
            k += 1;
        }
        k
    };
    let b = (1..n).max_by_key(|&x| (order_of(x), std::cmp::Reverse(x))).unwrap();
    let e = order_of(b);
    // cyclic subgroup <b> and cosets
    let mut sub = vec![0usize];
    let mut p = b;
    while p != 0 {
        sub.push(p);
        p = table[p][b];
    }
    let mut coset_of = vec![usize::MAX; n];
    let mut reps: Vec<usize> = Vec::new();
    for x in 0..n {
        if coset_of[x] != usize::MAX {
            continue;
        }
        let rep_idx = reps.len();
        for &s in &sub {
            coset_of[table[x][s]] = rep_idx;
        }
        reps.push(x);
    }
    let q = reps.len();
    let qtable: Vec<Vec<usize>> = (0..q)
        .map(|i| (0..q).map(|j| coset_of[table[reps[i]][reps[j]]]).collect())
        .collect();
    let (mut factors, qbasis) = decompose_table(&qtable);
    let mut basis = Vec::new();
    for (f, &qb) in factors.iter().zip(&qbasis) {
        // lift the quotient basis element and correct it to exact order f
        let x = reps[qb];
        let mut fx = 0usize;
        for _ in 0..*f {
            fx = table[fx][x];
        }
        // fx lies in <b>: fx = k*b with f | k; corrected element x - (k/f)*b
        let k = sub.iter().position(|&s| s == fx).expect("f*x in <b>") as u64;
        debug_assert_eq!(k % f, 0);
        let c = (k / f) as usize;
        let b_inv = sub[(sub.len() - 1) % sub.len()]; // -b, i.e. (e-1)*b
        let mut corrected = x;
        for _ in 0..c {
            corrected = table[corrected][b_inv];
        }
        debug_assert_eq!(order_of(corrected), *f);
        basis.push(corrected);
    }
    factors.insert(0, e);
    basis.insert(0, b);
    (factors, basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn automorphism_counts() {
        let z6 = FiniteAbelianType::new(vec![2, 3]).unwrap();
        assert_eq!(abelian_automorphisms(&z6).unwrap().len(), 2);
        let klein = FiniteAbelianType::new(vec![2, 2]).unwrap();
        assert_eq!(abelian_automorphisms(&klein).unwrap().len(), 6);
        let z2 = FiniteAbelianType::new(vec![2]).unwrap();
        assert_eq!(abelian_automorphisms(&z2).unwrap().len(), 1);
    }

    #[test]
    fn automorphisms_are_closed_under_composition() {
        let t = FiniteAbelianType::new(vec![2, 4]).unwrap();
        let auts = abelian_automorphisms(&t).unwrap();
        // |Aut(Z/2 x Z/4)| = 8
        assert_eq!(auts.len(), 8);
        for a in &auts {
            for b in &auts {
                assert!(auts.contains(&a.compose(b)));
            }
        }
    }

    #[test]
    fn element_orders() {
        let t = FiniteAbelianType::new(vec![2, 3]).unwrap();
        assert_eq!(t.order_of(&[1, 0]), 2);
        assert_eq!(t.order_of(&[0, 1]), 3);
        assert_eq!(t.order_of(&[1, 1]), 6);
    }

    #[test]
    fn regular_action_recovers_type() {
        let t = FiniteAbelianType::new(vec![2, 3]).unwrap();
        let g1 = t.translation_perm(&[1, 0]);
        let g2 = t.translation_perm(&[0, 1]);
        let reg = RegularAbelian::from_action(&[g1.clone(), g2.clone()], 6).unwrap();
        assert_eq!(reg.typ.order(), 6);
        // coordinates must be additive: coord(p then q) = coord p + coord q
        let cp = reg.coord_of_perm(&g1);
        let cq = reg.coord_of_perm(&g2);
        let sum = reg.typ.add(&cp, &cq);
        assert_eq!(reg.coord_of_perm(&g1.then(&g2)), sum);
    }

    #[test]
    fn regular_action_klein() {
        let t = FiniteAbelianType::new(vec![2, 2]).unwrap();
        let g1 = t.translation_perm(&[1, 0]);
        let g2 = t.translation_perm(&[0, 1]);
        let reg = RegularAbelian::from_action(&[g1, g2], 4).unwrap();
        assert_eq!(reg.typ.factors(), &[2, 2]);
    }

    #[test]
    fn non_regular_rejected() {
        let s3 = [
            Permutation::parse("(0 1)", 3).unwrap(),
            Permutation::parse("(0 1 2)", 3).unwrap(),
        ];
        assert!(RegularAbelian::from_action(&s3, 3).is_err());
    }
}
