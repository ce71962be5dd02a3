//! Words in a finitely generated group.
//!
//! A [`Word`] is a sequence of signed generator letters. Generator `g` (a
//! 0-based index) appears as the letter `g+1`, its inverse as `-(g+1)`; the
//! empty word is the identity. Words are kept freely reduced by the
//! constructors here, which is all the cancellation any caller needs: the
//! presented groups in this crate are either free or have their relations
//! handled explicitly.

/// A freely reduced word; letters are nonzero `i32`s, generator `g` is `g+1`.
pub type Word = Vec<i32>;

/// Single letter for generator index `gen` with exponent sign `+1`/`-1`.
pub fn letter(gen: usize, sign: i32) -> i32 {
    debug_assert!(sign == 1 || sign == -1);
    sign * (gen as i32 + 1)
}

/// Generator index of a letter.
pub fn gen_of(letter: i32) -> usize {
    (letter.abs() - 1) as usize
}

/// Freely reduce a word in place.
pub fn reduce(w: &mut Word) {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w.iter() {
        if l == 0 {
            continue;
        }
        if out.last().copied() == Some(-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    *w = out;
}

/// Concatenate and reduce.
pub fn concat(parts: &[&[i32]]) -> Word {
    let mut w: Word = Vec::new();
    for p in parts {
        w.extend_from_slice(p);
    }
    reduce(&mut w);
    w
}

/// Inverse word.
pub fn inverse(w: &[i32]) -> Word {
    w.iter().rev().map(|&l| -l).collect()
}

/// `w^k` for any integer `k`, reduced.
pub fn power(w: &[i32], k: i64) -> Word {
    let base: Word = if k < 0 { inverse(w) } else { w.to_vec() };
    let mut out = Vec::new();
    for _ in 0..k.unsigned_abs() {
        out.extend_from_slice(&base);
    }
    reduce(&mut out);
    out
}

/// Conjugate `c w c^-1`, reduced.
pub fn conjugate(c: &[i32], w: &[i32]) -> Word {
    concat(&[c, w, &inverse(c)])
}

/// Cyclically reduce a word; returns the core.
pub fn cyclic_reduce(w: &[i32]) -> Word {
    let mut v = w.to_vec();
    reduce(&mut v);
    while v.len() >= 2 && v[0] == -v[v.len() - 1] {
        v.remove(0);
        v.pop();
    }
    v
}

/// Whether two words are conjugate in the free group on their letters.
pub fn conjugate_in_free(a: &[i32], b: &[i32]) -> bool {
    let a = cyclic_reduce(a);
    let b = cyclic_reduce(b);
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    // cyclic rotation match
    (0..a.len()).any(|r| (0..a.len()).all(|i| b[(i + r) % a.len()] == a[i]))
}

/// Exponent-sum vector of a word over `n_gens` generators.
pub fn exponent_vector(w: &[i32], n_gens: usize) -> Vec<i64> {
    let mut v = vec![0i64; n_gens];
    for &l in w {
        let g = gen_of(l);
        v[g] += l.signum() as i64;
    }
    v
}

/// Apply a substitution sending generator `g` to `images[g]`, then reduce.
pub fn substitute(w: &[i32], images: &[Word]) -> Word {
    let mut out: Word = Vec::new();
    for &l in w {
        let img = &images[gen_of(l)];
        if l > 0 {
            out.extend_from_slice(img);
        } else {
            out.extend(img.iter().rev().map(|&x| -x));
        }
        // reduce incrementally to keep memory in check on long substitutions
        let mut i = out.len();
        while i >= 2 && out[i - 1] == -out[i - 2] {
            out.truncate(i - 2);
            i = out.len();
        }
    }
    reduce(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduce_cancels() {
        let mut w = vec![1, 2, -2, -1, 3];
        reduce(&mut w);
        assert_eq!(w, vec![3]);
    }

    #[test]
    fn power_and_inverse() {
        let w = vec![1, 2];
        assert_eq!(power(&w, 2), vec![1, 2, 1, 2]);
        assert_eq!(power(&w, -1), vec![-2, -1]);
        assert_eq!(concat(&[&w, &inverse(&w)]), Vec::<i32>::new());
    }

    #[test]
    fn conjugacy_detection() {
        let a = vec![1, 2, -1];
        assert!(conjugate_in_free(&a, &[2]));
        assert!(!conjugate_in_free(&a, &[1]));
        assert!(conjugate_in_free(&[1, 2], &[2, 1]));
    }

    #[test]
    fn substitution_composes() {
        // g0 -> g0 g1, g1 -> g1
        let images = vec![vec![1, 2], vec![2]];
        assert_eq!(substitute(&[1, -2], &images), vec![1]);
    }
}
