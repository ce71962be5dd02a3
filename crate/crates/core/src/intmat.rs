//! Exact integer matrices: Smith normal form, linear solving, abelian
//! invariants.
//!
//! Everything runs over `BigInt`; entry growth during elimination is the
//! price of exactness and the matrices here stay small (a few hundred rows).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Mat = Vec<Vec<BigInt>>;

pub fn from_i64(rows: &[Vec<i64>]) -> Mat {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let k = if n == 0 { 0 } else { a[0].len() };
    let m = if b.is_empty() { 0 } else { b[0].len() };
    assert_eq!(k, b.len(), "dimension mismatch");
    let mut out = vec![vec![BigInt::zero(); m]; n];
    for i in 0..n {
        for (l, brow) in b.iter().enumerate() {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                let t = &a[i][l] * &brow[j];
                out[i][j] += t;
            }
        }
    }
    out
}

pub fn mat_vec(a: &Mat, v: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

/// Result of `U * A * V = D` with `U`, `V` unimodular and `D` in Smith form.
pub struct Snf {
    pub d: Mat,
    pub u: Mat,
    pub v: Mat,
    pub rank: usize,
}

impl Snf {
    /// Nonzero diagonal entries (the invariant factors, in divisibility order).
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[i][i].clone()).collect()
    }
}

/// Smith normal form with transform tracking.
pub fn smith_normal_form(a: &Mat) -> Snf {
    let nr = a.len();
    let nc = if nr == 0 { 0 } else { a[0].len() };
    let mut d = a.clone();
    let mut u = identity(nr);
    let mut v = identity(nc);

    let mut k = 0usize;
    while k < nr && k < nc {
        // find pivot: smallest nonzero absolute value in the trailing block
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..nr {
            for j in k..nc {
                if !d[i][j].is_zero() {
                    let better = match pivot {
                        None => true,
                        Some((pi, pj)) => d[i][j].abs() < d[pi][pj].abs(),
                    };
                    if better {
                        pivot = Some((i, j));
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        d.swap(k, pi);
        u.swap(k, pi);
        if pj != k {
            for row in d.iter_mut() {
                row.swap(k, pj);
            }
            for row in v.iter_mut() {
                row.swap(k, pj);
            }
        }

        // clear row and column k, restarting whenever a remainder appears
        loop {
            let mut dirty = false;
            for i in (k + 1)..nr {
                if d[i][k].is_zero() {
                    continue;
                }
                let q = div_round(&d[i][k], &d[k][k]);
                if !q.is_zero() {
                    for j in 0..nc {
                        let t = &q * &d[k][j];
                        d[i][j] -= t;
                    }
                    for j in 0..nr {
                        let t = &q * &u[k][j];
                        u[i][j] -= t;
                    }
                }
                if !d[i][k].is_zero() {
                    // remainder is strictly smaller; swap it up as new pivot
                    d.swap(k, i);
                    u.swap(k, i);
                    dirty = true;
                }
            }
            for j in (k + 1)..nc {
                if d[k][j].is_zero() {
                    continue;
                }
                let q = div_round(&d[k][j], &d[k][k]);
                if !q.is_zero() {
                    for row in d.iter_mut() {
                        let t = &q * &row[k];
                        row[j] -= t;
                    }
                    for row in v.iter_mut() {
                        let t = &q * &row[k];
                        row[j] -= t;
                    }
                }
                if !d[k][j].is_zero() {
                    for row in d.iter_mut() {
                        row.swap(k, j);
                    }
                    for row in v.iter_mut() {
                        row.swap(k, j);
                    }
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }
        k += 1;
    }
    let rank = k.min(count_nonzero_diag(&d, k));

    // enforce divisibility chain d[i] | d[i+1]
    let mut i = 0;
    while i + 1 < rank {
        if (&d[i + 1][i + 1] % &d[i][i]).is_zero() {
            i += 1;
            continue;
        }
        // fold d[i+1][i+1] into column i and redo the 2x2 block
        for row in 0..d.len() {
            let t = d[row][i + 1].clone();
            d[row][i] += t;
        }
        for row in v.iter_mut() {
            let t = row[i + 1].clone();
            row[i] += t;
        }
        let sub = reduce_two_by_two(&mut d, &mut u, &mut v, i);
        debug_assert!(sub);
        i = i.saturating_sub(1);
    }
    for i in 0..rank {
        if d[i][i].is_negative() {
            for row in d.iter_mut() {
                let t = -row[i].clone();
                row[i] = t;
            }
            for row in v.iter_mut() {
                let t = -row[i].clone();
                row[i] = t;
            }
        }
    }
    Snf { d, u, v, rank }
}

fn count_nonzero_diag(d: &Mat, upto: usize) -> usize {
    (0..upto).take_while(|&i| !d[i][i].is_zero()).count()
}

/// Re-run elimination on the trailing block starting at `k` until the 2x2
/// corner is diagonal again. Returns true when it made progress.
fn reduce_two_by_two(d: &mut Mat, u: &mut Mat, v: &mut Mat, k: usize) -> bool {
    let nr = d.len();
    let nc = d[0].len();
    loop {
        // pivot selection within rows/cols {k, k+1}
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..nr.min(k + 2) {
            for j in k..nc {
                if !d[i][j].is_zero() {
                    let better = match pivot {
                        None => true,
                        Some((pi, pj)) => d[i][j].abs() < d[pi][pj].abs(),
                    };
                    if better {
                        pivot = Some((i, j));
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { return true };
        d.swap(k, pi);
        u.swap(k, pi);
        if pj != k {
            for row in d.iter_mut() {
                row.swap(k, pj);
            }
            for row in v.iter_mut() {
                row.swap(k, pj);
            }
        }
        let mut clean = true;
        for i in (k + 1)..nr {
            if d[i][k].is_zero() {
                continue;
            }
            let q = div_round(&d[i][k], &d[k][k]);
            for j in 0..nc {
                let t = &q * &d[k][j];
                d[i][j] -= t;
            }
            for j in 0..u[0].len() {
                let t = &q * &u[k][j];
                u[i][j] -= t;
            }
            if !d[i][k].is_zero() {
                clean = false;
            }
        }
        for j in (k + 1)..nc {
            if d[k][j].is_zero() {
                continue;
            }
            let q = div_round(&d[k][j], &d[k][k]);
            for row in d.iter_mut() {
                let t = &q * &row[k];
                row[j] -= t;
            }
            for row in v.iter_mut() {
                let t = &q * &row[k];
                row[j] -= t;
            }
            if !d[k][j].is_zero() {
                clean = false;
            }
        }
        if clean {
            if d[k][k].is_negative() {
                for row in d.iter_mut() {
                    let t = -row[k].clone();
                    row[k] = t;
                }
                for row in v.iter_mut() {
                    let t = -row[k].clone();
                    row[k] = t;
                }
            }
            return true;
        }
    }
}

/// Round-to-nearest division, which keeps remainders at most half the pivot.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    let (q, r) = num_integer::Integer::div_mod_floor(a, b);
    if &(r * two) > &b.abs() {
        q + BigInt::one()
    } else {
        q
    }
}

/// Invariant factors of the abelian group `Z^n_gens / <rows>`.
///
/// Returns `(free_rank, torsion)` with torsion coefficients > 1 in
/// divisibility order.
pub fn abelian_invariants(rows: &[Vec<i64>], n_gens: usize) -> (usize, Vec<u64>) {
    if rows.is_empty() {
        return (n_gens, Vec::new());
    }
    for r in rows {
        assert_eq!(r.len(), n_gens, "relation width mismatch");
    }
    let snf = smith_normal_form(&from_i64(rows));
    let mut torsion = Vec::new();
    for d in snf.diagonal() {
        if d > BigInt::one() {
            torsion.push(u64::try_from(&d).expect("torsion fits u64"));
        }
    }
    (n_gens - snf.rank, torsion)
}

/// Solve `A x = b` over the integers. Returns one solution if any exists.
pub fn solve(a: &Mat, b: &[BigInt]) -> Option<Vec<BigInt>> {
    solve_with_kernel(a, b).map(|(x, _)| x)
}

/// Solve `A x = b` over the integers, returning a particular solution and a
/// basis of the kernel lattice (so every solution is `x + Z-span(kernel)`).
pub fn solve_with_kernel(a: &Mat, b: &[BigInt]) -> Option<(Vec<BigInt>, Vec<Vec<BigInt>>)> {
    let nr = a.len();
    let nc = if nr == 0 { 0 } else { a[0].len() };
    assert_eq!(b.len(), nr);
    let snf = smith_normal_form(a);
    // U A V = D, so A x = b  <=>  D y = U b with x = V y
    let ub: Vec<BigInt> = (0..nr)
        .map(|i| (0..nr).map(|j| &snf.u[i][j] * &b[j]).sum())
        .collect();
    let mut y = vec![BigInt::zero(); nc];
    for i in 0..nr {
        if i < snf.rank {
            let d = &snf.d[i][i];
            if (&ub[i] % d).is_zero() {
                y[i] = &ub[i] / d;
            } else {
                return None;
            }
        } else if !ub[i].is_zero() {
            return None;
        }
    }
    let x: Vec<BigInt> = (0..nc)
        .map(|i| (0..nc).map(|j| &snf.v[i][j] * &y[j]).sum())
        .collect();
    // kernel basis: columns of V past the rank
    let kernel: Vec<Vec<BigInt>> = (snf.rank..nc)
        .map(|j| (0..nc).map(|i| snf.v[i][j].clone()).collect())
        .collect();
    Some((x, kernel))
}

/// Whether the square matrix is unimodular (all invariant factors 1).
pub fn is_unimodular(a: &Mat) -> bool {
    let n = a.len();
    if n == 0 {
        return true;
    }
    if a[0].len() != n {
        return false;
    }
    let snf = smith_normal_form(a);
    snf.rank == n && snf.diagonal().iter().all(|d| d.is_one())
}

/// Exact determinant (fraction-free Gaussian elimination).
pub fn determinant(a: &Mat) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    assert_eq!(a[0].len(), n);
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = t;
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_transforms(a: &Mat) {
        let snf = smith_normal_form(a);
        let uav = mat_mul(&mat_mul(&snf.u, a), &snf.v);
        assert_eq!(uav, snf.d);
        for i in 0..snf.rank.saturating_sub(1) {
            assert!((&snf.d[i + 1][i + 1] % &snf.d[i][i]).is_zero());
        }
        assert!(is_unimodular(&snf.u));
        assert!(is_unimodular(&snf.v));
    }

    #[test]
    fn snf_known_case() {
        let a = from_i64(&[
            vec![-6, 111, -36, 6],
            vec![5, -672, 210, 74],
            vec![0, -255, 81, 24],
            vec![-7, 255, -81, -10],
        ]);
        let snf = smith_normal_form(&a);
        assert_eq!(
            snf.diagonal(),
            vec![BigInt::from(1), BigInt::from(3), BigInt::from(21)]
        );
        check_transforms(&a);
    }

    #[test]
    fn snf_divisibility_fixup() {
        let a = from_i64(&[vec![2, 0], vec![0, 3]]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
        check_transforms(&a);
    }

    #[test]
    fn invariants_of_orbifold_torsion() {
        // cone orders (2,2,4,4,3) with the long relation: Z/2 + Z/2 + Z/4
        let rows = vec![
            vec![2, 0, 0, 0, 0],
            vec![0, 2, 0, 0, 0],
            vec![0, 0, 4, 0, 0],
            vec![0, 0, 0, 4, 0],
            vec![0, 0, 0, 0, 3],
            vec![1, 1, 1, 1, 1],
        ];
        let (rank, torsion) = abelian_invariants(&rows, 5);
        assert_eq!(rank, 0);
        assert_eq!(torsion, vec![2, 2, 4]);
    }

    #[test]
    fn solve_linear_system() {
        let a = from_i64(&[vec![2, 4], vec![0, 3]]);
        let b = vec![BigInt::from(6), BigInt::from(3)];
        let x = solve(&a, &b).unwrap();
        assert_eq!(&a[0][0] * &x[0] + &a[0][1] * &x[1], BigInt::from(6));
        assert_eq!(&a[1][1] * &x[1], BigInt::from(3));
        assert!(solve(&a, &[BigInt::from(1), BigInt::from(0)]).is_none());
    }

    #[test]
    fn determinant_matches() {
        let a = from_i64(&[vec![2, 1], vec![1, 1]]);
        assert_eq!(determinant(&a), BigInt::one());
        let b = from_i64(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(determinant(&b), BigInt::from(-1));
    }
}
