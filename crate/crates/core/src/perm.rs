//! Exact permutations on `{0, …, d-1}` and small permutation groups.
//!
//! Composition is left-to-right throughout the crate: `p.then(&q)` applies
//! `p` first, so points transform as `x^(p·q) = (x^p)^q` (a right action).
//! Conjugation follows the same convention: `p.conjugate_by(&c)` relabels
//! points by `c`, i.e. maps `x^c ↦ (x^p)^c`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermError {
    #[error("images of length {0} do not form a bijection")]
    NotBijective(usize),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("cycle reuses point {0}")]
    RepeatedPoint(usize),
    #[error("group closure exceeded cap of {0} elements")]
    ClosureCapExceeded(usize),
    #[error("tuple length mismatch: {0} vs {1}")]
    TupleLengthMismatch(usize, usize),
    #[error("cannot parse permutation from {0:?}")]
    Parse(String),
}

/// A permutation of `{0, …, degree-1}`, stored by its image vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if x >= images.len() || seen[x] {
                return Err(PermError::NotBijective(images.len()));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Build from disjoint cycles; points absent from all cycles are fixed.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut used = vec![false; degree];
        for cycle in cycles {
            for &p in cycle {
                if p >= degree {
                    return Err(PermError::PointOutOfRange { point: p, degree });
                }
                if used[p] {
                    return Err(PermError::RepeatedPoint(p));
                }
                used[p] = true;
            }
            for i in 0..cycle.len() {
                images[cycle[i]] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self` then `other` (left-to-right composition).
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Permutation {
            images: self.images.iter().map(|&x| other.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x] = i;
        }
        Permutation { images }
    }

    pub fn pow(&self, k: i64) -> Permutation {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Permutation::identity(self.degree());
        for _ in 0..k.unsigned_abs() {
            out = out.then(&base);
        }
        out
    }

    /// Relabel points by `c`: returns the permutation `x^c ↦ (x^self)^c`,
    /// i.e. `c⁻¹ · self · c` in left-to-right composition.
    pub fn conjugate_by(&self, c: &Permutation) -> Permutation {
        c.inverse().then(self).then(c)
    }

    /// Cycle decomposition; nontrivial cycles only, each starting at its
    /// minimum, sorted by first point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut p = self.images[start];
            while p != start {
                seen[p] = true;
                cycle.push(p);
                p = self.images[p];
            }
            out.push(cycle);
        }
        out
    }

    /// Multiset of cycle lengths, fixed points included, sorted ascending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lens: Vec<usize> = self.cycles().iter().map(|c| c.len()).collect();
        let moved: usize = lens.iter().sum();
        lens.extend(std::iter::repeat(1).take(self.degree() - moved));
        lens.sort_unstable();
        lens
    }

    /// Length of the cycle through `x`.
    pub fn cycle_length_through(&self, x: usize) -> usize {
        let mut len = 1;
        let mut p = self.images[x];
        while p != x {
            len += 1;
            p = self.images[p];
        }
        len
    }

    pub fn order(&self) -> u64 {
        self.cycle_type()
            .into_iter()
            .fold(1u64, |acc, l| num_integer::lcm(acc, l as u64))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            write!(f, "(")?;
            for (i, p) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl Permutation {
    /// Parse cycle notation at a given degree, e.g. `"(0 1 2)(3 4)"` or `"()"`.
    pub fn parse(s: &str, degree: usize) -> Result<Self, PermError> {
        let s = s.trim();
        if s == "()" || s.is_empty() {
            return Ok(Permutation::identity(degree));
        }
        let mut cycles = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            let open = rest.find('(').ok_or_else(|| PermError::Parse(s.into()))?;
            let close = rest.find(')').ok_or_else(|| PermError::Parse(s.into()))?;
            if close < open {
                return Err(PermError::Parse(s.into()));
            }
            let body = &rest[open + 1..close];
            let cycle: Result<Vec<usize>, _> = body
                .split([' ', ','])
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>())
                .collect();
            let cycle = cycle.map_err(|_| PermError::Parse(s.into()))?;
            if !cycle.is_empty() {
                cycles.push(cycle);
            }
            rest = &rest[close + 1..];
        }
        Permutation::from_cycles(degree, &cycles)
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    /// Parse with degree inferred as (max point + 1).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let max = s
            .split(|c: char| !c.is_ascii_digit())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().map_err(|_| PermError::Parse(s.into())))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .max();
        Permutation::parse(s, max.map_or(0, |m| m + 1))
    }
}

const DEFAULT_CLOSURE_CAP: usize = 1 << 17;

/// A finite permutation group given by generators, with its full element
/// list enumerated in deterministic breadth-first order.
#[derive(Debug, Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
}

impl PermGroup {
    /// Close the generators under composition (breadth-first, so the element
    /// order is deterministic). The identity is always element 0.
    pub fn closure(generators: &[Permutation], degree: usize) -> Result<Self, PermError> {
        Self::closure_capped(generators, degree, DEFAULT_CLOSURE_CAP)
    }

    pub fn closure_capped(
        generators: &[Permutation],
        degree: usize,
        cap: usize,
    ) -> Result<Self, PermError> {
        for g in generators {
            if g.degree() != degree {
                return Err(PermError::DegreeMismatch(g.degree(), degree));
            }
        }
        let mut elements = vec![Permutation::identity(degree)];
        let mut index: HashMap<Permutation, usize> = HashMap::new();
        index.insert(elements[0].clone(), 0);
        let mut head = 0;
        while head < elements.len() {
            let current = elements[head].clone();
            head += 1;
            for g in generators {
                let next = current.then(g);
                if !index.contains_key(&next) {
                    if elements.len() >= cap {
                        return Err(PermError::ClosureCapExceeded(cap));
                    }
                    index.insert(next.clone(), elements.len());
                    elements.push(next);
                }
            }
        }
        Ok(PermGroup {
            degree,
            generators: generators.to_vec(),
            elements,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        p.degree() == self.degree && self.elements.contains(p)
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().enumerate().all(|(i, g)| {
            self.generators[i + 1..]
                .iter()
                .all(|h| g.then(h) == h.then(g))
        })
    }

    /// Orbits of the natural action, each sorted, ordered by minimum point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        orbits_of(&self.generators, self.degree)
    }

    pub fn is_transitive(&self) -> bool {
        self.degree == 0 || self.orbits().len() == 1
    }
}

/// Orbits of a set of permutations (not necessarily a closed group).
pub fn orbits_of(gens: &[Permutation], degree: usize) -> Vec<Vec<usize>> {
    let mut seen = vec![false; degree];
    let mut orbits = Vec::new();
    for start in 0..degree {
        if seen[start] {
            continue;
        }
        let mut orbit = vec![start];
        seen[start] = true;
        let mut head = 0;
        while head < orbit.len() {
            let p = orbit[head];
            head += 1;
            for g in gens {
                let q = g.apply(p);
                if !seen[q] {
                    seen[q] = true;
                    orbit.push(q);
                }
            }
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    orbits
}

pub fn is_transitive_on(gens: &[Permutation], degree: usize) -> bool {
    degree == 0 || orbits_of(gens, degree).len() == 1
}

/// Centralizer of a *transitive* set of permutations in the full symmetric
/// group. Each centralizing element is determined by the image of point 0,
/// so the search is over that single choice; the action is free, so the
/// result has at most `degree` elements.
pub fn centralizer_of_transitive(
    gens: &[Permutation],
    degree: usize,
) -> Result<Vec<Permutation>, PermError> {
    for g in gens {
        if g.degree() != degree {
            return Err(PermError::DegreeMismatch(g.degree(), degree));
        }
    }
    assert!(
        is_transitive_on(gens, degree),
        "centralizer_of_transitive requires a transitive action"
    );
    let mut out = Vec::new();
    'candidates: for y in 0..degree {
        let mut images = vec![usize::MAX; degree];
        images[0] = y;
        let mut queue = vec![0usize];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for g in gens {
                let xn = g.apply(x);
                let yn = g.apply(images[x]);
                if images[xn] == usize::MAX {
                    images[xn] = yn;
                    queue.push(xn);
                } else if images[xn] != yn {
                    continue 'candidates;
                }
            }
        }
        if let Ok(c) = Permutation::from_images(images) {
            let commutes = gens.iter().all(|g| g.then(&c) == c.then(g));
            if commutes {
                out.push(c);
            }
        }
    }
    Ok(out)
}

/// Search for `c` with `t1[i].conjugate_by(&c) == t2[i]` for all `i`.
///
/// Backtracking over point images; refuses fast when cycle types differ and
/// prunes by matching cycle lengths pointwise.
pub fn conjugate_tuples(
    t1: &[Permutation],
    t2: &[Permutation],
) -> Result<Option<Permutation>, PermError> {
    if t1.len() != t2.len() {
        return Err(PermError::TupleLengthMismatch(t1.len(), t2.len()));
    }
    if t1.is_empty() {
        return Ok(Some(Permutation::identity(0)));
    }
    let degree = t1[0].degree();
    for p in t1.iter().chain(t2.iter()) {
        if p.degree() != degree {
            return Err(PermError::DegreeMismatch(p.degree(), degree));
        }
    }
    for (p, q) in t1.iter().zip(t2.iter()) {
        if p.cycle_type() != q.cycle_type() {
            return Ok(None);
        }
    }

    // cycle-length profile of each point under every tuple entry
    let profile = |tuple: &[Permutation], x: usize| -> Vec<usize> {
        tuple.iter().map(|p| p.cycle_length_through(x)).collect()
    };
    let prof1: Vec<Vec<usize>> = (0..degree).map(|x| profile(t1, x)).collect();
    let prof2: Vec<Vec<usize>> = (0..degree).map(|x| profile(t2, x)).collect();

    let mut images = vec![usize::MAX; degree];
    let mut used = vec![false; degree];

    // propagate c(x^{t1[i]}) = c(x)^{t2[i]}; records assignments made so
    // they can be undone on backtrack
    fn propagate(
        t1: &[Permutation],
        t2: &[Permutation],
        images: &mut [usize],
        used: &mut [bool],
        start: usize,
        trail: &mut Vec<usize>,
    ) -> bool {
        let mut queue = vec![start];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for (p, q) in t1.iter().zip(t2.iter()) {
                let xn = p.apply(x);
                let yn = q.apply(images[x]);
                if images[xn] == usize::MAX {
                    if used[yn] {
                        return false;
                    }
                    images[xn] = yn;
                    used[yn] = true;
                    trail.push(xn);
                    queue.push(xn);
                } else if images[xn] != yn {
                    return false;
                }
            }
        }
        true
    }

    fn search(
        t1: &[Permutation],
        t2: &[Permutation],
        prof1: &[Vec<usize>],
        prof2: &[Vec<usize>],
        images: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        let Some(x) = (0..images.len()).find(|&x| images[x] == usize::MAX) else {
            return true;
        };
        for y in 0..images.len() {
            if used[y] || prof1[x] != prof2[y] {
                continue;
            }
            images[x] = y;
            used[y] = true;
            let mut trail = vec![x];
            if propagate(t1, t2, images, used, x, &mut trail)
                && search(t1, t2, prof1, prof2, images, used)
            {
                return true;
            }
            for &z in &trail {
                used[images[z]] = false;
                images[z] = usize::MAX;
            }
        }
        false
    }

    if search(t1, t2, &prof1, &prof2, &mut images, &mut used) {
        let c = Permutation::from_images(images).expect("search yields bijection");
        for (p, q) in t1.iter().zip(t2.iter()) {
            debug_assert_eq!(&p.conjugate_by(&c), q);
        }
        Ok(Some(c))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(s: &str, d: usize) -> Permutation {
        Permutation::parse(s, d).unwrap()
    }

    #[test]
    fn cycle_type_identity() {
        assert_eq!(Permutation::identity(4).cycle_type(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn cycle_type_direct() {
        assert_eq!(perm("(0 1 2)(3 4)", 5).cycle_type(), vec![2, 3]);
    }

    #[test]
    fn cycle_type_of_composition() {
        // (0 1) then (1 2) sends 0->2, 1->... check it's a 3-cycle
        let p = perm("(0 1)", 3).then(&perm("(1 2)", 3));
        assert_eq!(p.cycle_type(), vec![3]);
    }

    #[test]
    fn display_round_trip() {
        let p = perm("(0 1 2)(3 4)", 5);
        assert_eq!(p.to_string(), "(0 1 2)(3 4)");
        assert_eq!(Permutation::parse(&p.to_string(), 5).unwrap(), p);
        assert_eq!(Permutation::identity(3).to_string(), "()");
    }

    #[test]
    fn closure_s3() {
        let g = PermGroup::closure(&[perm("(0 1)", 3), perm("(0 1 2)", 3)], 3).unwrap();
        assert_eq!(g.order(), 6);
        assert!(g.is_transitive());
    }

    #[test]
    fn closure_cyclic() {
        let g = PermGroup::closure(&[perm("(0 1 2 3)", 4)], 4).unwrap();
        assert_eq!(g.order(), 4);
    }

    #[test]
    fn closure_z2_times_z3_regular() {
        // commuting generators of the regular Z/2 x Z/3 action on 6 points
        // indexing (a, b) -> 3a + b
        let g2 = Permutation::from_images(vec![3, 4, 5, 0, 1, 2]).unwrap();
        let g3 = Permutation::from_images(vec![1, 2, 0, 4, 5, 3]).unwrap();
        assert_eq!(g2.then(&g3), g3.then(&g2));
        let g = PermGroup::closure(&[g2, g3], 6).unwrap();
        assert_eq!(g.order(), 6);
        assert!(g.is_transitive());
    }

    #[test]
    fn closure_idempotent() {
        let g = PermGroup::closure(&[perm("(0 1)", 4), perm("(2 3)", 4)], 4).unwrap();
        let again = PermGroup::closure(g.elements(), 4).unwrap();
        assert_eq!(again.order(), g.order());
    }

    #[test]
    fn transitivity_examples() {
        assert!(PermGroup::closure(&[perm("(0 1 2 3)", 4)], 4)
            .unwrap()
            .is_transitive());
        assert!(!PermGroup::closure(&[perm("(0 1)", 3)], 3)
            .unwrap()
            .is_transitive());
    }

    #[test]
    fn conjugate_tuples_single_entries() {
        let c = conjugate_tuples(&[perm("(0 1)", 4)], &[perm("(2 3)", 4)])
            .unwrap()
            .expect("same cycle type");
        assert_eq!(perm("(0 1)", 4).conjugate_by(&c), perm("(2 3)", 4));
        assert!(conjugate_tuples(&[perm("(0 1)", 3)], &[perm("(0 1 2)", 3)])
            .unwrap()
            .is_none());
    }

    #[test]
    fn conjugate_tuples_self_is_some() {
        let t = vec![perm("(0 1 2)", 5), perm("(3 4)", 5)];
        assert!(conjugate_tuples(&t, &t).unwrap().is_some());
    }

    #[test]
    fn centralizer_of_regular_action() {
        let g2 = Permutation::from_images(vec![3, 4, 5, 0, 1, 2]).unwrap();
        let g3 = Permutation::from_images(vec![1, 2, 0, 4, 5, 3]).unwrap();
        let cent = centralizer_of_transitive(&[g2, g3], 6).unwrap();
        assert_eq!(cent.len(), 6);
    }

    #[test]
    fn centralizer_of_s3_natural() {
        let cent =
            centralizer_of_transitive(&[perm("(0 1)", 3), perm("(0 1 2)", 3)], 3).unwrap();
        assert_eq!(cent.len(), 1);
    }
}
