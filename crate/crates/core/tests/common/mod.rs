//! Random inputs for the Weil-representation checks.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use theta_local::mat2::ProjMat;
use theta_local::padic::{Prime, ValuedRational};
use theta_local::quadspace::{act, TracelessMat};
use theta_local::weil::lattice::LatticeCoset;
use theta_local::weil::matrix::QMatrix;
use theta_local::weil::{Phase, Scalar, SchwartzSum, WeilSpace};

pub fn q(n: i64, d: i64) -> ValuedRational {
    ValuedRational::new(n, d)
}

/// A rational of valuation at least `min_val`, often integral.
pub fn small_rational(rng: &mut ChaCha8Rng, p: Prime, min_val: i64) -> ValuedRational {
    let num = rng.gen_range(-6i64..=6);
    let v = rng.gen_range(min_val..=1);
    ValuedRational::from(num) * p.rat_pow(v)
}

pub fn unit(rng: &mut ChaCha8Rng, p: Prime) -> ValuedRational {
    loop {
        let u = rng.gen_range(1i64..=12);
        if u % p.get() as i64 != 0 {
            let den = loop {
                let d = rng.gen_range(1i64..=4);
                if d % p.get() as i64 != 0 {
                    break d;
                }
            };
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            return q(sign * u, den);
        }
    }
}

/// One of: hyperbolic plane with n = 1, traceless space with n = 1,
/// hyperbolic plane with n = 2.
pub fn space(i: usize, p: Prime) -> WeilSpace {
    match i % 3 {
        0 => WeilSpace::hyperbolic_plane(1, p).unwrap(),
        1 => WeilSpace::traceless(1, p).unwrap(),
        _ => WeilSpace::hyperbolic_plane(2, p).unwrap(),
    }
}

/// A sum of one to three characteristic functions of cosets of `p^k Z_p^N`
/// with random scalars.
pub fn schwartz(rng: &mut ChaCha8Rng, space: &WeilSpace) -> SchwartzSum {
    let p = space.prime();
    let dim = space.ambient_dim();
    let k = rng.gen_range(0i64..=1);
    let count = rng.gen_range(1..=3);
    let mut terms: Vec<(Scalar, LatticeCoset)> = Vec::new();
    for _ in 0..count {
        let center: Vec<_> = (0..dim)
            .map(|_| ValuedRational::from(rng.gen_range(0i64..9)))
            .collect();
        let coset = LatticeCoset::scaled_standard(center, k, p);
        if terms.iter().any(|(_, c)| c == &coset) {
            continue;
        }
        let s = Scalar::new(
            ValuedRational::from(rng.gen_range(1i64..=5)),
            rng.gen_range(-1i64..=1),
            Phase::new(q(rng.gen_range(0i64..9), 9)),
            p,
        );
        terms.push((s, coset));
    }
    SchwartzSum::from_terms(space.clone(), terms).unwrap()
}

/// Entries of valuation at least -1 for `n = 1`, integral for larger `n`.
pub fn symmetric(rng: &mut ChaCha8Rng, n: usize, p: Prime) -> QMatrix {
    let mut b = QMatrix::zeros(n, n);
    let min_val = if n == 1 { -1 } else { 0 };
    for i in 0..n {
        for j in i..n {
            let x = small_rational(rng, p, min_val);
            b.set(i, j, x.clone());
            b.set(j, i, x);
        }
    }
    b
}

/// Diagonal entries `unit · p^e` with `|e| <= 1` for `n = 1`, units otherwise;
/// off-diagonal entries integral.
pub fn invertible(rng: &mut ChaCha8Rng, n: usize, p: Prime) -> QMatrix {
    let spread = if n == 1 { 1 } else { 0 };
    loop {
        let mut a = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let x = if i == j {
                    unit(rng, p) * p.rat_pow(rng.gen_range(-spread..=spread))
                } else if rng.gen_bool(0.5) {
                    small_rational(rng, p, 0)
                } else {
                    ValuedRational::zero()
                };
                a.set(i, j, x);
            }
        }
        if !a.det().unwrap().is_zero() {
            return a;
        }
    }
}

/// The matrix of `x ↦ g x g^{-1}` on traceless coordinates `(a, b, c)`.
pub fn conjugation_matrix(g: &ProjMat) -> QMatrix {
    let basis = [
        TracelessMat::new(1, 0, 0),
        TracelessMat::new(0, 1, 0),
        TracelessMat::new(0, 0, 1),
    ];
    let cols: Vec<Vec<ValuedRational>> = basis
        .iter()
        .map(|e| {
            let y = act(g, e);
            vec![y.a, y.b, y.c]
        })
        .collect();
    QMatrix::from_columns(&cols).unwrap()
}

/// A random isometry of the space's Gram matrix.
pub fn isometry(rng: &mut ChaCha8Rng, space: &WeilSpace) -> QMatrix {
    let p = space.prime();
    if space.m() == 2 {
        let u = unit(rng, p) * p.rat_pow(rng.gen_range(-1i64..=1));
        let d = QMatrix::from_rows(vec![
            vec![u.clone(), ValuedRational::zero()],
            vec![ValuedRational::zero(), u.recip().unwrap()],
        ])
        .unwrap();
        if rng.gen_bool(0.5) {
            let swap = QMatrix::from_rows(vec![
                vec![ValuedRational::zero(), ValuedRational::one()],
                vec![ValuedRational::one(), ValuedRational::zero()],
            ])
            .unwrap();
            &swap * &d
        } else {
            d
        }
    } else {
        loop {
            let e: Vec<ValuedRational> = (0..4).map(|_| small_rational(rng, p, 0)).collect();
            if let Ok(g) = ProjMat::from_entries(e[0].clone(), e[1].clone(), e[2].clone(), e[3].clone()) {
                return conjugation_matrix(&g);
            }
        }
    }
}
