//! Smith normal form over a Euclidean domain, with transformation witnesses.
//!
//! Pivot rule: smallest nonzero Euclidean norm in the working submatrix, ties
//! broken in row-major order.  The invariant `U * A * V = D` is maintained
//! throughout and re-checked before returning.

use super::matrix::Matrix;
use super::ring::EuclideanRing;

#[derive(Debug, Clone)]
pub struct Snf<R> {
    /// Diagonal matrix, same shape as the input.
    pub d: Matrix<R>,
    /// Unimodular row witness.
    pub u: Matrix<R>,
    /// Unimodular column witness.
    pub v: Matrix<R>,
}

impl<R: EuclideanRing> Snf<R> {
    /// Nonzero diagonal entries in order (each divides the next).
    pub fn invariant_factors(&self) -> Vec<R> {
        let n = self.d.rows.min(self.d.cols);
        (0..n)
            .map(|i| self.d[(i, i)].clone())
            .filter(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

fn find_pivot<R: EuclideanRing>(a: &Matrix<R>, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), num_bigint::BigUint)> = None;
    for i in k..a.rows {
        for j in k..a.cols {
            if let Some(n) = a[(i, j)].norm() {
                match &best {
                    Some((_, bn)) if *bn <= n => {}
                    _ => best = Some(((i, j), n)),
                }
            }
        }
    }
    best.map(|(p, _)| p)
}

pub fn smith<R: EuclideanRing>(a: &Matrix<R>) -> Snf<R> {
    let mut d = a.clone();
    let mut u = Matrix::<R>::identity(a.rows);
    let mut v = Matrix::<R>::identity(a.cols);
    let n = a.rows.min(a.cols);

    let mut k = 0;
    while k < n {
        let Some((pi, pj)) = find_pivot(&d, k) else {
            break;
        };
        d.swap_rows(k, pi);
        u.swap_rows(k, pi);
        d.swap_cols(k, pj);
        v.swap_cols(k, pj);

        // Eliminate column and row k; a nonzero remainder becomes the new,
        // strictly smaller pivot, so this terminates.
        let mut dirty = true;
        while dirty {
            dirty = false;
            for i in k + 1..d.rows {
                if d[(i, k)].is_zero() {
                    continue;
                }
                let (q, r) = d[(i, k)].div_rem(&d[(k, k)]);
                let nq = q.neg();
                d.add_row_mul(i, k, &nq);
                u.add_row_mul(i, k, &nq);
                if !r.is_zero() {
                    d.swap_rows(k, i);
                    u.swap_rows(k, i);
                    dirty = true;
                }
            }
            for j in k + 1..d.cols {
                if d[(k, j)].is_zero() {
                    continue;
                }
                let (q, r) = d[(k, j)].div_rem(&d[(k, k)]);
                let nq = q.neg();
                d.add_col_mul(j, k, &nq);
                v.add_col_mul(j, k, &nq);
                if !r.is_zero() {
                    d.swap_cols(k, j);
                    v.swap_cols(k, j);
                    dirty = true;
                }
            }
        }

        // Pull any entry the pivot does not divide into row k and repeat.
        let mut fixed = false;
        'scan: for i in k + 1..d.rows {
            for j in k + 1..d.cols {
                if d[(i, j)].exact_div(&d[(k, k)]).is_none() && !d[(i, j)].is_zero() {
                    let one = R::one();
                    d.add_row_mul(k, i, &one);
                    u.add_row_mul(k, i, &one);
                    fixed = true;
                    break 'scan;
                }
            }
        }
        if fixed {
            continue;
        }

        let (u_inv, canon) = d[(k, k)].unit_and_canonical();
        if canon != d[(k, k)] {
            d.scale_row(k, &u_inv);
            u.scale_row(k, &u_inv);
        }
        k += 1;
    }

    debug_assert!(chain_ok(&d));
    let check = u.mul(a).mul(&v);
    assert!(check == d, "SNF verification U*A*V = D failed");
    Snf { d, u, v }
}

/// Solve `A x = b` exactly over a Euclidean domain, via the SNF witnesses:
/// with `U A V = D`, the system becomes `D y = U b`, `x = V y`.
pub fn solve<R: EuclideanRing>(a: &Matrix<R>, b: &[R]) -> Option<Vec<R>> {
    assert_eq!(a.rows, b.len());
    let s = smith(a);
    let n = a.rows.min(a.cols);
    // g = U b
    let mut g = Vec::with_capacity(a.rows);
    for i in 0..a.rows {
        let mut acc = R::zero();
        for j in 0..a.rows {
            acc = acc.add(&s.u[(i, j)].mul(&b[j]));
        }
        g.push(acc);
    }
    let mut y = vec![R::zero(); a.cols];
    for i in 0..a.rows {
        let d = if i < n { s.d[(i, i)].clone() } else { R::zero() };
        if d.is_zero() {
            if !g[i].is_zero() {
                return None;
            }
        } else {
            y[i] = g[i].exact_div(&d)?;
        }
    }
    // x = V y
    let mut x = Vec::with_capacity(a.cols);
    for i in 0..a.cols {
        let mut acc = R::zero();
        for j in 0..a.cols {
            acc = acc.add(&s.v[(i, j)].mul(&y[j]));
        }
        x.push(acc);
    }
    Some(x)
}

fn chain_ok<R: EuclideanRing>(d: &Matrix<R>) -> bool {
    let n = d.rows.min(d.cols);
    for i in 0..n {
        for j in 0..d.cols {
            if j != i && !d[(i, j)].is_zero() {
                return false;
            }
        }
        for r in 0..d.rows {
            if r != i && !d[(r, i)].is_zero() {
                return false;
            }
        }
        if i + 1 < n
            && !d[(i + 1, i + 1)].is_zero()
            && d[(i + 1, i + 1)].exact_div(&d[(i, i)]).is_none()
        {
            return false;
        }
    }
    true
}
