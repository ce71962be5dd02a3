//! Schreier transversals and Reidemeister–Schreier rewriting for a
//! finite-index subgroup given by a coset action.
//!
//! The subgroup is the stabilizer of coset 0. Transversal words are built
//! breadth-first over generators in index order, so everything here is
//! deterministic.

use thiserror::Error;

use crate::perm::Permutation;
use crate::words::{self, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SchreierError {
    #[error("coset {0} out of range ({1} cosets)")]
    CosetOutOfRange(usize, usize),
    #[error("coset action is not transitive")]
    NotTransitive,
    #[error("generator {0} out of range")]
    GeneratorOutOfRange(usize),
}

/// Schreier data for the stabilizer of coset 0 under a transitive action.
#[derive(Debug, Clone)]
pub struct SchreierData {
    action: Vec<Permutation>,
    degree: usize,
    /// Transversal word carrying coset 0 to coset `i`.
    transversal: Vec<Word>,
    /// `(coset, generator)` pairs that are tree edges (rewrite to nothing).
    is_tree: Vec<Vec<bool>>,
    /// Schreier generator index for each non-tree `(coset, generator)` edge.
    edge_index: Vec<Vec<Option<usize>>>,
    /// Inverse of `edge_index`.
    edges: Vec<(usize, usize)>,
}

impl SchreierData {
    pub fn new(action: &[Permutation], degree: usize) -> Result<Self, SchreierError> {
        for g in action {
            if g.degree() != degree {
                return Err(SchreierError::CosetOutOfRange(g.degree(), degree));
            }
        }
        let n_gens = action.len();
        let mut transversal: Vec<Option<Word>> = vec![None; degree];
        let mut is_tree = vec![vec![false; n_gens]; degree];
        transversal[0] = Some(Vec::new());
        let mut queue = vec![0usize];
        let mut head = 0;
        while head < queue.len() {
            let c = queue[head];
            head += 1;
            for (g, perm) in action.iter().enumerate() {
                let fwd = perm.apply(c);
                if transversal[fwd].is_none() {
                    let mut w = transversal[c].clone().unwrap();
                    w.push(words::letter(g, 1));
                    transversal[fwd] = Some(w);
                    is_tree[c][g] = true;
                    queue.push(fwd);
                }
                let back = perm.inverse().apply(c);
                if transversal[back].is_none() {
                    let mut w = transversal[c].clone().unwrap();
                    w.push(words::letter(g, -1));
                    transversal[back] = Some(w);
                    is_tree[back][g] = true;
                    queue.push(back);
                }
            }
        }
        if transversal.iter().any(|t| t.is_none()) {
            return Err(SchreierError::NotTransitive);
        }
        let transversal: Vec<Word> = transversal.into_iter().map(Option::unwrap).collect();
        let mut edge_index = vec![vec![None; n_gens]; degree];
        let mut edges = Vec::new();
        for c in 0..degree {
            for g in 0..n_gens {
                if !is_tree[c][g] {
                    edge_index[c][g] = Some(edges.len());
                    edges.push((c, g));
                }
            }
        }
        Ok(SchreierData {
            action: action.to_vec(),
            degree,
            transversal,
            is_tree,
            edge_index,
            edges,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generator_count(&self) -> usize {
        self.edges.len()
    }

    pub fn transversal(&self, coset: usize) -> &Word {
        &self.transversal[coset]
    }

    /// The `(coset, base generator)` edge behind Schreier generator `idx`.
    pub fn edge(&self, idx: usize) -> (usize, usize) {
        self.edges[idx]
    }

    /// The Schreier generator as a word in the base group:
    /// `r_c · g · r_{c·g}^{-1}`.
    pub fn schreier_gen_in_base(&self, idx: usize) -> Word {
        let (c, g) = self.edges[idx];
        let target = self.action[g].apply(c);
        words::concat(&[
            &self.transversal[c],
            &[words::letter(g, 1)],
            &words::inverse(&self.transversal[target]),
        ])
    }

    pub fn coset_after(&self, start: usize, word: &[i32]) -> usize {
        let mut c = start;
        for &l in word {
            let g = words::gen_of(l);
            c = if l > 0 {
                self.action[g].apply(c)
            } else {
                self.action[g].inverse().apply(c)
            };
        }
        c
    }

    /// Rewrite `r_start · w · r_{start·w}^{-1}` as a word in the Schreier
    /// generators.
    pub fn rewrite(&self, word: &[i32], start: usize) -> Result<Word, SchreierError> {
        if start >= self.degree {
            return Err(SchreierError::CosetOutOfRange(start, self.degree));
        }
        let mut out: Word = Vec::new();
        let mut c = start;
        for &l in word {
            let g = words::gen_of(l);
            if g >= self.action.len() {
                return Err(SchreierError::GeneratorOutOfRange(g));
            }
            if l > 0 {
                if let Some(idx) = self.edge_index[c][g] {
                    out.push(words::letter(idx, 1));
                }
                c = self.action[g].apply(c);
            } else {
                c = self.action[g].inverse().apply(c);
                if let Some(idx) = self.edge_index[c][g] {
                    out.push(words::letter(idx, -1));
                }
            }
        }
        words::reduce(&mut out);
        Ok(out)
    }

    /// Exponent vector of the rewrite, over the Schreier generators. Avoids
    /// materializing the word; the result only makes sense when
    /// `start·w = start` or the caller accounts for the transversal tails.
    pub fn rewrite_exponents(&self, word: &[i32], start: usize) -> Result<Vec<i64>, SchreierError> {
        if start >= self.degree {
            return Err(SchreierError::CosetOutOfRange(start, self.degree));
        }
        let mut out = vec![0i64; self.edges.len()];
        let mut c = start;
        for &l in word {
            let g = words::gen_of(l);
            if g >= self.action.len() {
                return Err(SchreierError::GeneratorOutOfRange(g));
            }
            if l > 0 {
                if let Some(idx) = self.edge_index[c][g] {
                    out[idx] += 1;
                }
                c = self.action[g].apply(c);
            } else {
                c = self.action[g].inverse().apply(c);
                if let Some(idx) = self.edge_index[c][g] {
                    out[idx] -= 1;
                }
            }
        }
        Ok(out)
    }

    pub fn is_tree_edge(&self, coset: usize, gen: usize) -> bool {
        self.is_tree[coset][gen]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_two_subgroup_of_free_rank_two() {
        // action of a, b on two cosets: a swaps, b fixes
        let a = Permutation::parse("(0 1)", 2).unwrap();
        let b = Permutation::identity(2);
        let s = SchreierData::new(&[a, b], 2).unwrap();
        // 2*2 - 1 = 3 Schreier generators: a^2, b at coset 0, b at coset 1
        assert_eq!(s.generator_count(), 3);
        // a^2 stabilizes coset 0 and rewrites to a single generator
        let w = s.rewrite(&[1, 1], 0).unwrap();
        assert_eq!(w.len(), 1);
        // b rewrites to one generator at each coset, and they differ
        let w0 = s.rewrite(&[2], 0).unwrap();
        let w1 = s.rewrite(&[2], 1).unwrap();
        assert_eq!(w0.len(), 1);
        assert_eq!(w1.len(), 1);
        assert_ne!(w0, w1);
    }

    #[test]
    fn rewrite_is_multiplicative_on_stabilizing_words() {
        let a = Permutation::parse("(0 1 2)", 3).unwrap();
        let b = Permutation::parse("(0 1)", 3).unwrap();
        let s = SchreierData::new(&[a, b], 3).unwrap();
        // two stabilizers of coset 0: a^3 and b a b^-1 a ... use b^2
        let w1 = vec![1, 1, 1];
        let w2 = vec![2, 2];
        assert_eq!(s.coset_after(0, &w1), 0);
        assert_eq!(s.coset_after(0, &w2), 0);
        let cat = words::concat(&[&w1, &w2]);
        let r1 = s.rewrite(&w1, 0).unwrap();
        let r2 = s.rewrite(&w2, 0).unwrap();
        assert_eq!(s.rewrite(&cat, 0).unwrap(), words::concat(&[&r1, &r2]));
    }

    #[test]
    fn schreier_gen_words_stabilize_basepoint_conjugate() {
        let a = Permutation::parse("(0 1 2 3)", 4).unwrap();
        let s = SchreierData::new(&[a], 4).unwrap();
        assert_eq!(s.generator_count(), 1);
        let w = s.schreier_gen_in_base(0);
        assert_eq!(s.coset_after(0, &w), 0);
        // the lone generator is a^4
        assert_eq!(w, vec![1, 1, 1, 1]);
    }

    #[test]
    fn exponents_match_word_rewrite() {
        let a = Permutation::parse("(0 1)", 2).unwrap();
        let b = Permutation::parse("(0 1)", 2).unwrap();
        let s = SchreierData::new(&[a, b], 2).unwrap();
        let w = vec![1, 2, -1, -2, 1, 1];
        assert_eq!(s.coset_after(0, &w), 0);
        let word = s.rewrite(&w, 0).unwrap();
        let expo = s.rewrite_exponents(&w, 0).unwrap();
        let direct = words::exponent_vector(&word, s.generator_count());
        assert_eq!(expo, direct);
    }
}
