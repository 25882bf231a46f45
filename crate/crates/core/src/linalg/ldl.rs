//! Symmetric indefinite factorization `P B Pᵀ = L D Lᵀ` with 1×1 and 2×2 pivots.
//!
//! Over ℚ the pivot rule is: the largest nonzero diagonal entry if any, else
//! the largest off-diagonal entry `a_ij`, which yields the 2×2 pivot
//! `[[0, a], [a, 0]]` with one positive and one negative eigenvalue. When the
//! trailing block vanishes the remaining pivots are zero. By Sylvester's law
//! the inertia of `B` is the sum of the pivot inertias.

use crate::field::Field;
use crate::linalg::IndexReport;
use crate::matrix::Matrix;

#[derive(Clone, Debug, PartialEq)]
pub enum Pivot<T> {
    One(T),
    /// Symmetric block `[[a, b], [b, c]]`.
    Two(T, T, T),
}

#[derive(Clone, Debug)]
pub struct Ldl<T: Field> {
    /// `perm[k]` is the original index placed at position `k`.
    pub perm: Vec<usize>,
    /// Unit lower triangular (identity on 2×2 pivot diagonals).
    pub l: Matrix<T>,
    pub pivots: Vec<Pivot<T>>,
    tol: f64,
}

impl<T: Field> Ldl<T> {
    pub fn inertia(&self) -> IndexReport {
        let (mut neg, mut zero, mut pos) = (0, 0, 0);
        for p in &self.pivots {
            match p {
                Pivot::One(d) => match d.sign(self.tol) {
                    -1 => neg += 1,
                    0 => zero += 1,
                    _ => pos += 1,
                },
                Pivot::Two(a, b, c) => {
                    let det = a.clone() * c.clone() - b.clone() * b.clone();
                    match det.sign(self.tol) {
                        -1 => {
                            neg += 1;
                            pos += 1;
                        }
                        // a 2×2 pivot has negligible diagonal, so det < 0 in practice
                        _ => {
                            let tr = (a.clone() + c.clone()).sign(self.tol);
                            if tr < 0 {
                                neg += 2
                            } else {
                                pos += 2
                            }
                        }
                    }
                }
            }
        }
        IndexReport::new(neg, zero, pos)
    }

    /// Block diagonal `D`.
    pub fn d(&self) -> Matrix<T> {
        let n = self.perm.len();
        let mut d = Matrix::zeros(n, n);
        let mut k = 0;
        for p in &self.pivots {
            match p {
                Pivot::One(v) => {
                    d[(k, k)] = v.clone();
                    k += 1;
                }
                Pivot::Two(a, b, c) => {
                    d[(k, k)] = a.clone();
                    d[(k, k + 1)] = b.clone();
                    d[(k + 1, k)] = b.clone();
                    d[(k + 1, k + 1)] = c.clone();
                    k += 2;
                }
            }
        }
        d
    }

    /// Permutation matrix `P` with `(P B Pᵀ)_{ij} = B_{perm[i], perm[j]}`.
    pub fn p(&self) -> Matrix<T> {
        let n = self.perm.len();
        let mut p = Matrix::zeros(n, n);
        for (k, &orig) in self.perm.iter().enumerate() {
            p[(k, orig)] = T::one();
        }
        p
    }
}

fn swap_sym<T: Field>(
    a: &mut Matrix<T>,
    l: &mut Matrix<T>,
    perm: &mut [usize],
    i: usize,
    j: usize,
    done: usize,
) {
    if i == j {
        return;
    }
    let n = a.rows();
    for k in 0..n {
        let t = a[(i, k)].clone();
        a[(i, k)] = a[(j, k)].clone();
        a[(j, k)] = t;
    }
    for k in 0..n {
        let t = a[(k, i)].clone();
        a[(k, i)] = a[(k, j)].clone();
        a[(k, j)] = t;
    }
    for k in 0..done {
        let t = l[(i, k)].clone();
        l[(i, k)] = l[(j, k)].clone();
        l[(j, k)] = t;
    }
    perm.swap(i, j);
}

/// Factorizes a symmetric matrix. `tol` is ignored on the exact backend.
pub fn ldlt<T: Field>(b: &Matrix<T>, tol: f64) -> Ldl<T> {
    let n = b.rows();
    let mut a = b.clone();
    let mut l = Matrix::<T>::identity(n);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut pivots = Vec::new();
    let mut k = 0;
    while k < n {
        let diag = (k..n)
            .filter(|&i| !a[(i, i)].is_negligible(tol))
            .max_by(|&i, &j| a[(i, i)].magnitude().total_cmp(&a[(j, j)].magnitude()));
        if let Some(i) = diag {
            swap_sym(&mut a, &mut l, &mut perm, k, i, k);
            let d = a[(k, k)].clone();
            for r in (k + 1)..n {
                l[(r, k)] = a[(r, k)].clone() / d.clone();
            }
            for r in (k + 1)..n {
                for s in (k + 1)..n {
                    let v = a[(r, s)].clone() - l[(r, k)].clone() * a[(k, s)].clone();
                    a[(r, s)] = v;
                }
            }
            for r in (k + 1)..n {
                a[(r, k)] = T::zero();
                a[(k, r)] = T::zero();
            }
            pivots.push(Pivot::One(d));
            k += 1;
            continue;
        }
        let mut best: Option<(usize, usize)> = None;
        for i in k..n {
            for j in (i + 1)..n {
                if a[(i, j)].is_negligible(tol) {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| a[(i, j)].magnitude() > a[(bi, bj)].magnitude()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((i, j)) = best else {
            // trailing block is zero
            while k < n {
                pivots.push(Pivot::One(T::zero()));
                k += 1;
            }
            break;
        };
        swap_sym(&mut a, &mut l, &mut perm, k, i, k);
        swap_sym(&mut a, &mut l, &mut perm, k + 1, j, k);
        let off = a[(k, k + 1)].clone();
        let (d00, d11) = (a[(k, k)].clone(), a[(k + 1, k + 1)].clone());
        // diagonal entries are negligible by the pivot rule; inverse of [[d00, off], [off, d11]]
        let det = d00.clone() * d11.clone() - off.clone() * off.clone();
        let inv = [
            [d11.clone() / det.clone(), -off.clone() / det.clone()],
            [-off.clone() / det.clone(), d00.clone() / det.clone()],
        ];
        for r in (k + 2)..n {
            let (x0, x1) = (a[(r, k)].clone(), a[(r, k + 1)].clone());
            l[(r, k)] = x0.clone() * inv[0][0].clone() + x1.clone() * inv[1][0].clone();
            l[(r, k + 1)] = x0 * inv[0][1].clone() + x1 * inv[1][1].clone();
        }
        for r in (k + 2)..n {
            for s in (k + 2)..n {
                let v = a[(r, s)].clone()
                    - l[(r, k)].clone() * a[(k, s)].clone()
                    - l[(r, k + 1)].clone() * a[(k + 1, s)].clone();
                a[(r, s)] = v;
            }
        }
        for r in (k + 2)..n {
            for c in [k, k + 1] {
                a[(r, c)] = T::zero();
                a[(c, r)] = T::zero();
            }
        }
        pivots.push(Pivot::Two(d00, off, d11));
        k += 2;
    }
    Ldl {
        perm,
        l,
        pivots,
        tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;

    fn reconstruct(f: &Ldl<Rational>) -> Matrix<Rational> {
        let ld = &f.l * &f.d();
        let pbp = &ld * &f.l.transpose();
        // undo the permutation: B = Pᵀ (L D Lᵀ) P
        let p = f.p();
        &(&p.transpose() * &pbp) * &p
    }

    #[test]
    fn two_by_two_pivot_on_zero_diagonal() {
        let b = Matrix::from_i64_rows(&[&[0, 3, 1], &[3, 0, 2], &[1, 2, 0]]);
        let f = ldlt(&b, 0.0);
        assert!(matches!(f.pivots[0], Pivot::Two(..)));
        assert_eq!(reconstruct(&f), b);
        // det = 12 > 0 with zero trace: one positive, two negative
        let r = f.inertia();
        assert_eq!((r.morse_index, r.nullity, r.coindex), (2, 0, 1));
    }

    #[test]
    fn zero_trailing_block_counts_as_nullity() {
        let b = Matrix::from_i64_rows(&[&[1, 1, 0], &[1, 1, 0], &[0, 0, 0]]);
        let f = ldlt(&b, 0.0);
        assert_eq!(reconstruct(&f), b);
        let r = f.inertia();
        assert_eq!((r.morse_index, r.nullity, r.coindex), (0, 2, 1));
    }

    #[test]
    fn mixed_pivots_reconstruct() {
        let b =
            Matrix::from_i64_rows(&[&[0, 0, 2, 1], &[0, 0, 1, 0], &[2, 1, 0, 0], &[1, 0, 0, 5]]);
        let f = ldlt(&b, 0.0);
        assert_eq!(reconstruct(&f), b);
    }
}
