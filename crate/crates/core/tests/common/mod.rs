#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use relequil::field::rat;
use relequil::{Matrix, Rational};

/// Case count with a fixed seed when `RELEQUIL_SEED` is set.
pub fn config(cases: u32) -> ProptestConfig {
    let mut c = ProptestConfig::with_cases(cases);
    c.failure_persistence = None;
    if let Some(seed) = std::env::var("RELEQUIL_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
    {
        c.rng_seed = RngSeed::Fixed(seed);
    }
    c
}

pub fn rational() -> impl Strategy<Value = Rational> {
    prop_oneof![
        3 => Just(rat(0, 1)),
        7 => (-4i64..=4, 1i64..=3).prop_map(|(p, q)| rat(p, q)),
    ]
}

pub fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (prop_oneof![-4i64..=-1, 1i64..=4], 1i64..=3).prop_map(|(p, q)| rat(p, q))
}

pub fn symmetric_from(n: usize, upper: &[Rational]) -> Matrix<Rational> {
    let mut m = Matrix::zeros(n, n);
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            m[(i, j)] = upper[k].clone();
            m[(j, i)] = upper[k].clone();
            k += 1;
        }
    }
    m
}

pub fn symmetric(n: usize) -> impl Strategy<Value = Matrix<Rational>> {
    proptest::collection::vec(rational(), n * (n + 1) / 2).prop_map(move |v| symmetric_from(n, &v))
}

pub fn symmetric_in(
    dims: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = Matrix<Rational>> {
    dims.prop_flat_map(symmetric)
}

/// Even dimension `2n` with `n` in the range.
pub fn symmetric_even(
    half: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = Matrix<Rational>> {
    half.prop_flat_map(|n| symmetric(2 * n))
}

pub fn square(n: usize) -> impl Strategy<Value = Matrix<Rational>> {
    proptest::collection::vec(rational(), n * n)
        .prop_map(move |v| Matrix::from_fn(n, n, |i, j| v[i * n + j].clone()))
}

/// `L·U` with unit lower `L` and nonzero-diagonal upper `U`.
pub fn invertible(n: usize) -> impl Strategy<Value = Matrix<Rational>> {
    (
        proptest::collection::vec(rational(), n * n),
        proptest::collection::vec(rational(), n * n),
        proptest::collection::vec(nonzero_rational(), n),
    )
        .prop_map(move |(l, u, d)| {
            let lm = Matrix::from_fn(n, n, |i, j| {
                if i == j {
                    rat(1, 1)
                } else if i > j {
                    l[i * n + j].clone()
                } else {
                    rat(0, 1)
                }
            });
            let um = Matrix::from_fn(n, n, |i, j| {
                if i == j {
                    d[i].clone()
                } else if i < j {
                    u[i * n + j].clone()
                } else {
                    rat(0, 1)
                }
            });
            &lm * &um
        })
}

fn block_identity(n: usize, lower: bool, s: &Matrix<Rational>) -> Matrix<Rational> {
    Matrix::from_fn(2 * n, 2 * n, |i, j| {
        if i == j {
            rat(1, 1)
        } else if lower && i >= n && j < n {
            s[(i - n, j)].clone()
        } else if !lower && i < n && j >= n {
            s[(i, j - n)].clone()
        } else {
            rat(0, 1)
        }
    })
}

/// Product of an upper and a lower symplectic shear.
pub fn symplectic(n: usize) -> impl Strategy<Value = Matrix<Rational>> {
    (symmetric(n), symmetric(n))
        .prop_map(move |(s1, s2)| &block_identity(n, false, &s1) * &block_identity(n, true, &s2))
}

/// `SᵀDS` with `D` built from same-sign diagonal pairs and zero pairs, so `JB` is
/// linearly stable. Also returns the number of zero pairs.
pub fn linearly_stable(n: usize) -> impl Strategy<Value = (Matrix<Rational>, usize)> {
    (
        proptest::collection::vec((0u8..4, 1i64..=5, 1i64..=5, 1i64..=3), n),
        symplectic(n),
    )
        .prop_map(move |(pairs, s)| {
            let mut d = vec![rat(0, 1); 2 * n];
            let mut zeros = 0;
            for (k, (kind, a, b, q)) in pairs.into_iter().enumerate() {
                match kind {
                    0 => zeros += 1,
                    1 => {
                        d[k] = rat(-a, q);
                        d[n + k] = rat(-b, 1);
                    }
                    _ => {
                        d[k] = rat(a, q);
                        d[n + k] = rat(b, 1);
                    }
                }
            }
            (Matrix::diagonal(&d).congruence(&s), zeros)
        })
}
