//! Composition of covers through the coset rewriting map.
//!
//! The upper cover must be regular with abelian deck group; its monodromy
//! is transported to the Schreier generators of the lower cover's subgroup
//! by solving for a homomorphism that matches the branching data. Among
//! valid transports, one making the composite regular is preferred when it
//! exists (found by pairing the transport with a deck-compatibility
//! constraint for each automorphism of the deck group); the search order is
//! deterministic, so composition is reproducible.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::abelian::{abelian_automorphisms_bounded, AbElem, AbelianAut, RegularAbelian};
use crate::intmat;
use crate::perm::{PermGroup, Permutation};
use crate::schreier::SchreierData;
use crate::words;

use super::{CoverError, MonodromyCover};

/// Compose `lower: X -> B` with `upper: Y -> total(lower)` into a cover
/// `Y -> B` of degree `deg(lower) * deg(upper)`.
pub fn compose(
    lower: &MonodromyCover,
    upper: &MonodromyCover,
) -> Result<MonodromyCover, CoverError> {
    let setup = ComposeSetup::new(lower, upper)?;
    let values = setup.solve_transport()?;
    setup.assemble(&values)
}

/// Compose with caller-supplied transport values: `values[s]` is the deck
/// coordinate (in `RegularAbelian::from_action(upper…)` coordinates) of the
/// `s`-th Schreier generator of the lower cover's subgroup.
pub fn compose_with_values(
    lower: &MonodromyCover,
    upper: &MonodromyCover,
    values: &[AbElem],
) -> Result<MonodromyCover, CoverError> {
    let setup = ComposeSetup::new(lower, upper)?;
    if values.len() != setup.schreier.generator_count() {
        return Err(CoverError::NoTransport);
    }
    setup.assemble(values)
}

/// Deterministic Schreier data for a cover's basepoint-0 subgroup, shared
/// between composition and the tower builder.
pub(crate) fn schreier_of(cover: &MonodromyCover) -> Result<SchreierData, CoverError> {
    Ok(SchreierData::new(cover.images(), cover.degree())?)
}

struct ComposeSetup<'a> {
    lower: &'a MonodromyCover,
    upper: &'a MonodromyCover,
    schreier: SchreierData,
    reg: RegularAbelian,
    /// exponent vectors of the rewritten subgroup relations
    relation_rows: Vec<Vec<i64>>,
    /// middle cones: (order above, exponent vector of the class)
    middle_cones: Vec<(u64, Vec<i64>)>,
    /// base cone index and cycle representative of each middle cone, for
    /// tracking how deck transformations permute them
    middle_cone_sites: Vec<(usize, usize)>,
    /// upper cones: (order, deck coordinate of the image)
    upper_cones: Vec<(u64, AbElem)>,
}

impl<'a> ComposeSetup<'a> {
    fn new(lower: &'a MonodromyCover, upper: &'a MonodromyCover) -> Result<Self, CoverError> {
        let total = lower.total_signature()?;
        if &total != upper.base() {
            return Err(CoverError::CompositionMismatch {
                upper: upper.base().clone(),
                total,
            });
        }
        if let Some(v) = upper.validate().into_iter().next() {
            return Err(CoverError::Invalid(v));
        }
        let reg = RegularAbelian::from_action(upper.images(), upper.degree())
            .map_err(|_| CoverError::UpperNotRegularAbelian)?;
        let schreier = schreier_of(lower)?;

        let pres = lower.presentation();
        let mut relation_rows = Vec::new();
        for rel in pres.relations() {
            for coset in 0..lower.degree() {
                let row = schreier.rewrite_exponents(&rel, coset)?;
                if row.iter().any(|&x| x != 0) {
                    relation_rows.push(row);
                }
            }
        }
        let mut middle_cones = Vec::new();
        let mut middle_cone_sites = Vec::new();
        for j in 0..pres.cone_count() {
            let order = pres.cone_order(j);
            let image = &lower.images()[pres.cone_generator(j)];
            for cycle in all_cycles(image) {
                let above = order / cycle.len() as u64;
                if above < 2 {
                    continue;
                }
                let rep = cycle[0];
                let word = words::power(&[words::letter(pres.cone_generator(j), 1)],
                                        cycle.len() as i64);
                let row = schreier.rewrite_exponents(&word, rep)?;
                middle_cones.push((above, row));
                middle_cone_sites.push((j, rep));
            }
        }
        let upres = upper.presentation();
        let upper_cones: Vec<(u64, AbElem)> = (0..upres.cone_count())
            .map(|t| {
                let coord = reg.coord_of_perm(&upper.images()[upres.cone_generator(t)]);
                (upres.cone_order(t), coord)
            })
            .collect();
        Ok(ComposeSetup {
            lower,
            upper,
            schreier,
            reg,
            relation_rows,
            middle_cones,
            middle_cone_sites,
            upper_cones,
        })
    }

    /// Search for transport values, preferring ones that make the composite
    /// regular.
    fn solve_transport(&self) -> Result<Vec<AbElem>, CoverError> {
        let pairings = self.cone_pairings()?;
        let deck_constraints = self.deck_constraints()?;
        let auts = abelian_automorphisms_bounded(&self.reg.typ, 1 << 14)
            .map_err(|_| CoverError::UpperNotRegularAbelian)?;

        // phase 1: require deck compatibility (composite regularity)
        if let Some(taus) = &deck_constraints {
            let mut tuples: Vec<Vec<&AbelianAut>> = vec![Vec::new()];
            for _ in 0..taus.len() {
                tuples = tuples
                    .into_iter()
                    .flat_map(|t| {
                        auts.iter().map(move |a| {
                            let mut t2 = t.clone();
                            t2.push(a);
                            t2
                        })
                    })
                    .collect();
            }
            for pairing in &pairings {
                for betas in &tuples {
                    // a compatible beta must permute the cone targets the
                    // way the deck element permutes the cones; filter cheaply
                    if !taus
                        .iter()
                        .zip(betas.iter())
                        .all(|(tau, beta)| self.cone_targets_compatible(pairing, &tau.1, beta))
                    {
                        continue;
                    }
                    for invert in [false, true] {
                        if let Some(values) =
                            self.try_solve(pairing, invert, Some((taus, betas)))
                        {
                            return Ok(values);
                        }
                    }
                }
            }
        }
        // phase 2: any valid transport
        for pairing in &pairings {
            for invert in [false, true] {
                if let Some(values) = self.try_solve(pairing, invert, None) {
                    return Ok(values);
                }
            }
        }
        Err(CoverError::NoTransport)
    }

    fn cone_targets_compatible(
        &self,
        pairing: &[usize],
        cone_perm: &[usize],
        beta: &AbelianAut,
    ) -> bool {
        self.middle_cones.iter().enumerate().all(|(c, _)| {
            let t_c = &self.upper_cones[pairing[c]].1;
            let t_img = &self.upper_cones[pairing[cone_perm[c]]].1;
            &beta.apply(t_c) == t_img
        })
    }

    /// All bijections middle cone -> upper cone respecting cone orders.
    fn cone_pairings(&self) -> Result<Vec<Vec<usize>>, CoverError> {
        let n = self.middle_cones.len();
        if n != self.upper_cones.len() {
            return Err(CoverError::NoTransport);
        }
        let mut out: Vec<Vec<usize>> = vec![Vec::new()];
        for (order, _) in &self.middle_cones {
            let mut next = Vec::new();
            for partial in &out {
                for (u, (uo, _)) in self.upper_cones.iter().enumerate() {
                    if uo == order && !partial.contains(&u) {
                        let mut p = partial.clone();
                        p.push(u);
                        next.push(p);
                    }
                }
            }
            out = next;
            if out.len() > 1024 {
                return Err(CoverError::NoTransport);
            }
        }
        if out.is_empty() {
            return Err(CoverError::NoTransport);
        }
        Ok(out)
    }

    /// Conjugation data of a deck generating set: for each deck generator,
    /// its action on the Schreier generators (as exponent rows) and the
    /// induced permutation of the middle cones. Only available when the
    /// lower cover is regular.
    #[allow(clippy::type_complexity)]
    fn deck_constraints(&self) -> Result<Option<Vec<(Vec<Vec<i64>>, Vec<usize>)>>, CoverError> {
        let deck = self.lower.deck_elements()?;
        if deck.len() != self.lower.degree() {
            return Ok(None);
        }
        let gens = minimal_generators(&deck, self.lower.degree());
        let n = self.schreier.generator_count();
        let pres = self.lower.presentation();
        let mut out = Vec::new();
        for delta in &gens {
            let j = delta.apply(0);
            if j == 0 {
                continue;
            }
            let gamma = self.schreier.transversal(j).clone();
            let mut rows = Vec::with_capacity(n);
            for s in 0..n {
                let w = self.schreier.schreier_gen_in_base(s);
                let conj = words::conjugate(&gamma, &w);
                if self.schreier.coset_after(0, &conj) != 0 {
                    // subgroup is not normal after all; no preference possible
                    return Ok(None);
                }
                rows.push(self.schreier.rewrite_exponents(&conj, 0)?);
            }
            // delta maps the cone over (j, cycle through rep) to the cone
            // over (j, cycle through delta(rep))
            let mut cone_perm = vec![usize::MAX; self.middle_cone_sites.len()];
            for (c, &(cone_j, rep)) in self.middle_cone_sites.iter().enumerate() {
                let image_rep = delta.apply(rep);
                let image_perm = &self.lower.images()[pres.cone_generator(cone_j)];
                let target = self
                    .middle_cone_sites
                    .iter()
                    .position(|&(j2, rep2)| {
                        j2 == cone_j && {
                            // same cycle test: rep2 on the orbit of image_rep
                            let mut p = image_rep;
                            loop {
                                if p == rep2 {
                                    break true;
                                }
                                p = image_perm.apply(p);
                                if p == image_rep {
                                    break false;
                                }
                            }
                        }
                    })
                    .expect("deck permutes cones over the same base cone");
                cone_perm[c] = target;
            }
            out.push((rows, cone_perm));
        }
        Ok(Some(out))
    }

    /// Solve the transport system for one candidate configuration.
    #[allow(clippy::type_complexity)]
    fn try_solve(
        &self,
        pairing: &[usize],
        invert: bool,
        preference: Option<(&Vec<(Vec<Vec<i64>>, Vec<usize>)>, &Vec<&AbelianAut>)>,
    ) -> Option<Vec<AbElem>> {
        let k = self.reg.typ.rank();
        let g = self.schreier.generator_count();
        let factors = self.reg.typ.factors();
        // unknowns: X[i][s] (k rows, g cols) followed by one slack per equation
        let x_index = |i: usize, s: usize| i * g + s;
        let mut rows: Vec<Vec<i64>> = Vec::new();
        let mut rhs: Vec<i64> = Vec::new();
        let mut push_eq = |coeffs: Vec<(usize, i64)>, modulus: u64, b: i64| {
            let mut row = vec![0i64; k * g];
            for (idx, c) in coeffs {
                row[idx] += c;
            }
            row.push(modulus as i64); // slack column, filled diagonally later
            rows.push(row);
            rhs.push(b);
        };

        for ((_, class), &u) in self.middle_cones.iter().zip(pairing) {
            let target = if invert {
                self.reg.typ.neg(&self.upper_cones[u].1)
            } else {
                self.upper_cones[u].1.clone()
            };
            for i in 0..k {
                let coeffs = (0..g).map(|s| (x_index(i, s), class[s])).collect();
                push_eq(coeffs, factors[i], target[i]);
            }
        }
        for rel in &self.relation_rows {
            for i in 0..k {
                let coeffs = (0..g).map(|s| (x_index(i, s), rel[s])).collect();
                push_eq(coeffs, factors[i], 0);
            }
        }
        if let Some((taus, betas)) = preference {
            for ((tau, _), beta) in taus.iter().zip(betas.iter()) {
                for s in 0..g {
                    for i in 0..k {
                        let mut coeffs: Vec<(usize, i64)> =
                            (0..g).map(|t| (x_index(i, t), tau[s][t])).collect();
                        for j in 0..k {
                            coeffs.push((x_index(j, s), -beta.images()[j][i]));
                        }
                        push_eq(coeffs, factors[i], 0);
                    }
                }
            }
        }

        // widen rows with one slack column per equation
        let n_eq = rows.len();
        let n_unknowns = k * g + n_eq;
        let mut mat: Vec<Vec<BigInt>> = Vec::with_capacity(n_eq);
        for (e, row) in rows.iter().enumerate() {
            let mut full = vec![BigInt::zero(); n_unknowns];
            for (idx, &c) in row[..k * g].iter().enumerate() {
                full[idx] = BigInt::from(c);
            }
            full[k * g + e] = BigInt::from(row[k * g]);
            mat.push(full);
        }
        let b: Vec<BigInt> = rhs.iter().map(|&x| BigInt::from(x)).collect();
        let (particular, kernel) = intmat::solve_with_kernel(&mat, &b)?;
        let extract = |sol: &[BigInt]| -> Vec<AbElem> {
            (0..g)
                .map(|s| {
                    let v: Vec<i64> = (0..k)
                        .map(|i| {
                            let f = factors[i] as i128;
                            sol[x_index(i, s)]
                                .clone()
                                .to_i128()
                                .map(|x| x.rem_euclid(f) as i64)
                                .expect("transport value fits")
                        })
                        .collect();
                    self.reg.typ.normalize(&v)
                })
                .collect()
        };
        let base = extract(&particular);
        // the transported subgroup image must be all of the deck group,
        // otherwise the composite is disconnected; walk the solution lattice
        // until a spanning transport appears
        if self.spans_deck(&base) {
            return Some(base);
        }
        let typ = &self.reg.typ;
        let mut offsets: Vec<Vec<AbElem>> = Vec::new();
        for kv in &kernel {
            let off = extract(kv);
            if off.iter().any(|e| e.iter().any(|&x| x != 0)) && !offsets.contains(&off) {
                offsets.push(off);
            }
        }
        // quick refusal: even the full achievable span may be too small
        let mut all_values: Vec<AbElem> = base.clone();
        for off in &offsets {
            all_values.extend(off.iter().cloned());
        }
        if !self.spans_deck(&all_values) {
            return None;
        }
        let add_vectors = |a: &[AbElem], b: &[AbElem]| -> Vec<AbElem> {
            a.iter().zip(b).map(|(x, y)| typ.add(x, y)).collect()
        };
        let mut seen = std::collections::HashSet::new();
        let zero = vec![typ.zero(); g];
        seen.insert(zero.clone());
        let mut frontier = vec![zero];
        const WALK_CAP: usize = 512;
        while let Some(cur) = frontier.pop() {
            for off in &offsets {
                let next = add_vectors(&cur, off);
                if seen.contains(&next) {
                    continue;
                }
                let candidate = add_vectors(&base, &next);
                if self.spans_deck(&candidate) {
                    return Some(candidate);
                }
                if seen.len() >= WALK_CAP {
                    return None;
                }
                seen.insert(next.clone());
                frontier.push(next);
            }
        }
        None
    }

    fn spans_deck(&self, values: &[AbElem]) -> bool {
        let typ = &self.reg.typ;
        let order = typ.order() as usize;
        let mut seen = vec![false; order];
        seen[typ.index_of(&typ.zero())] = true;
        let mut frontier = vec![typ.zero()];
        let mut count = 1usize;
        while let Some(e) = frontier.pop() {
            for v in values {
                for w in [v.clone(), typ.neg(v)] {
                    let next = typ.add(&e, &w);
                    let idx = typ.index_of(&next);
                    if !seen[idx] {
                        seen[idx] = true;
                        count += 1;
                        frontier.push(next);
                    }
                }
            }
        }
        count == order
    }

    fn assemble(&self, values: &[AbElem]) -> Result<MonodromyCover, CoverError> {
        let typ = &self.reg.typ;
        let d1 = self.lower.degree();
        let d2 = typ.order() as usize;
        let degree = d1 * d2;
        let point = |coset: usize, elem: &AbElem| coset * d2 + typ.index_of(elem);
        let pres = self.lower.presentation();
        let mut images = Vec::with_capacity(pres.generator_count());
        for gidx in 0..pres.generator_count() {
            let mut img = vec![0usize; degree];
            for coset in 0..d1 {
                let letter = [words::letter(gidx, 1)];
                let target_coset = self.schreier.coset_after(coset, &letter);
                let exps = self.schreier.rewrite_exponents(&letter, coset)?;
                let shift = eval_values(typ, values, &exps);
                for e_idx in 0..d2 {
                    let e = typ.elem_at(e_idx);
                    img[point(coset, &e)] = point(target_coset, &typ.add(&e, &shift));
                }
            }
            images.push(Permutation::from_images(img)?);
        }
        let composite = MonodromyCover::new(self.lower.base().clone(), degree, images)?;
        if let Some(v) = composite.validate().into_iter().next() {
            return Err(CoverError::Invalid(v));
        }
        let expected = self.upper.total_signature()?;
        let got = composite.total_signature()?;
        if got != expected {
            return Err(CoverError::CompositionMismatch {
                upper: expected,
                total: got,
            });
        }
        Ok(composite)
    }
}

fn eval_values(
    typ: &crate::abelian::FiniteAbelianType,
    values: &[AbElem],
    exps: &[i64],
) -> AbElem {
    let mut out = typ.zero();
    for (v, &e) in values.iter().zip(exps) {
        if e != 0 {
            out = typ.add(&out, &typ.scale(e, v));
        }
    }
    out
}

/// Every cycle of a permutation, fixed points included, each starting at
/// its minimum, ordered by minimum.
pub(crate) fn all_cycles(p: &Permutation) -> Vec<Vec<usize>> {
    let mut seen = vec![false; p.degree()];
    let mut out = Vec::new();
    for start in 0..p.degree() {
        if seen[start] {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut q = p.apply(start);
        while q != start {
            seen[q] = true;
            cycle.push(q);
            q = p.apply(q);
        }
        out.push(cycle);
    }
    out
}

/// Greedy minimal generating subset of a closed element list.
fn minimal_generators(elements: &[Permutation], degree: usize) -> Vec<Permutation> {
    let total = elements.len();
    let mut gens: Vec<Permutation> = Vec::new();
    let mut reached = 1usize;
    for e in elements {
        if e.is_identity() {
            continue;
        }
        let mut candidate = gens.clone();
        candidate.push(e.clone());
        if let Ok(g) = PermGroup::closure(&candidate, degree) {
            if g.order() > reached {
                reached = g.order();
                gens = candidate;
                if reached == total {
                    break;
                }
            }
        }
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbifold::OrbifoldSignature;

    fn sig(g: u32, cones: &[u64]) -> OrbifoldSignature {
        OrbifoldSignature::new(g, cones.to_vec()).unwrap()
    }

    #[test]
    fn compose_with_trivial_upper() {
        let base = sig(1, &[2, 2, 4, 6]);
        let s = Permutation::parse("(0 1)", 2).unwrap();
        let id = Permutation::identity(2);
        let lower = MonodromyCover::new(
            base,
            2,
            vec![id.clone(), id.clone(), id.clone(), s.clone(), id, s],
        )
        .unwrap();
        let upper = MonodromyCover::trivial(lower.total_signature().unwrap());
        let comp = compose(&lower, &upper).unwrap();
        assert_eq!(comp.degree(), 2);
        assert_eq!(
            comp.total_signature().unwrap(),
            lower.total_signature().unwrap()
        );
        assert!(are_same_cover(&comp, &lower));
    }

    fn are_same_cover(a: &MonodromyCover, b: &MonodromyCover) -> bool {
        super::super::are_equivalent(a, b).unwrap()
    }

    #[test]
    fn compose_two_torus_double_covers() {
        // unbranched: double cover of the torus, then double cover of that
        let torus = sig(1, &[]);
        let s = Permutation::parse("(0 1)", 2).unwrap();
        let id = Permutation::identity(2);
        let lower = MonodromyCover::new(torus.clone(), 2, vec![s.clone(), id.clone()]).unwrap();
        assert_eq!(lower.total_signature().unwrap(), torus);
        let upper = MonodromyCover::new(torus.clone(), 2, vec![s, id]).unwrap();
        let comp = compose(&lower, &upper).unwrap();
        assert_eq!(comp.degree(), 4);
        assert_eq!(comp.total_signature().unwrap(), torus);
        assert!(comp.is_regular().unwrap());
    }

    #[test]
    fn degrees_multiply_and_total_matches_upper() {
        // double cover of T(2,2,4,6) with total S(2;2,2,4,4,3), then the
        // double cover of that with total S(5;2,2,3,3)
        let t = sig(1, &[2, 2, 4, 6]);
        let s = Permutation::parse("(0 1)", 2).unwrap();
        let id = Permutation::identity(2);
        let lower = MonodromyCover::new(
            t,
            2,
            vec![id.clone(), id.clone(), id.clone(), s.clone(), id.clone(), s.clone()],
        )
        .unwrap();
        let mid = lower.total_signature().unwrap();
        assert_eq!(mid, sig(2, &[2, 2, 4, 4, 3]));
        // cones sorted (2,2,3,4,4): n-cone (3) trivial, the rest -> s
        let upper = MonodromyCover::new(
            mid,
            2,
            vec![
                id.clone(),
                id.clone(),
                id.clone(),
                id.clone(),
                s.clone(),
                s.clone(),
                id,
                s.clone(),
                s,
            ],
        )
        .unwrap();
        assert_eq!(upper.total_signature().unwrap(), sig(5, &[2, 2, 3, 3]));
        let comp = compose(&lower, &upper).unwrap();
        assert_eq!(comp.degree(), 4);
        assert_eq!(comp.total_signature().unwrap(), sig(5, &[2, 2, 3, 3]));
    }
}
