//! `Z_p`-lattices in `Q_p^N` given by rational bases, and their cosets.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::padic::{reduce_mod_power, unit_part, Prime, Valuation, ValuedRational};

use super::matrix::QMatrix;

/// Upper bound on the number of sub-cosets one subdivision may produce.
pub const MAX_SUBDIVISION: usize = 1 << 16;

/// The Hermite form at `p` of the lattice spanned by the columns of `gens`
/// (an `N × K` matrix of rank `N`).
///
/// The result is lower triangular with diagonal entries `p^{k_i}` and each
/// entry below the diagonal reduced into `Z[1/p] ∩ [0, p^{k_r})`, where `r` is
/// its row. Two generating sets span the same lattice iff their forms agree.
pub fn hermite(gens: &QMatrix, p: Prime) -> Result<QMatrix> {
    let n = gens.rows();
    let k = gens.cols();
    if k < n {
        return Err(Error::Singular);
    }
    let mut cols: Vec<Vec<ValuedRational>> = (0..k).map(|j| gens.column(j)).collect();
    let mut pivots = Vec::with_capacity(n);
    for i in 0..n {
        let best = (i..k)
            .filter(|&j| !cols[j][i].is_zero())
            .min_by_key(|&j| cols[j][i].valuation(p))
            .ok_or(Error::Singular)?;
        cols.swap(i, best);
        let (v, u) = unit_part(&cols[i][i], p)?;
        let s = u.recip()?;
        for x in cols[i].iter_mut() {
            *x = &*x * &s;
        }
        pivots.push(v);
        for j in i + 1..k {
            if cols[j][i].is_zero() {
                continue;
            }
            let f = &cols[j][i] / &cols[i][i];
            for r in i..n {
                let x = &cols[j][r] - &(&f * &cols[i][r]);
                cols[j][r] = x;
            }
        }
    }
    cols.truncate(n);
    for i in 0..n {
        for r in i + 1..n {
            let (head, tail) = cols.split_at_mut(r);
            let col_i = &mut head[i];
            let col_r = &tail[0];
            let q = reduction_quotient(&col_i[r], pivots[r], p);
            if !q.is_zero() {
                for t in r..n {
                    col_i[t] = &col_i[t] - &(&q * &col_r[t]);
                }
            }
        }
    }
    QMatrix::from_columns(&cols)
}

/// `q ∈ Z_(p)` with `x - q p^k` the canonical representative of `x` mod `p^k`.
fn reduction_quotient(x: &ValuedRational, k: i64, p: Prime) -> ValuedRational {
    let rep = reduce_mod_power(x, p, k);
    (x - &rep) * p.rat_pow(-k)
}

/// The canonical representative of `v` modulo the lattice with Hermite form `h`.
pub fn reduce_mod(v: &[ValuedRational], h: &QMatrix, p: Prime) -> Vec<ValuedRational> {
    let n = h.rows();
    let mut v = v.to_vec();
    for i in 0..n {
        let k = h
            .get(i, i)
            .valuation(p)
            .finite()
            .expect("Hermite pivots are nonzero");
        let q = reduction_quotient(&v[i], k, p);
        if !q.is_zero() {
            for r in i..n {
                v[r] = &v[r] - &(&q * h.get(r, i));
            }
        }
    }
    v
}

/// The sublattice `{w ∈ L : gᵀw ∈ Z_p}` of the lattice with basis `basis`.
pub fn restrict_by_functional(basis: &QMatrix, g: &[ValuedRational], p: Prime) -> Result<QMatrix> {
    let n = basis.cols();
    let lambda: Vec<ValuedRational> = (0..n)
        .map(|j| basis.column(j).iter().zip(g).map(|(a, b)| a * b).sum())
        .collect();
    let Some(i0) = (0..n)
        .filter(|&j| !lambda[j].is_zero())
        .min_by_key(|&j| lambda[j].valuation(p))
    else {
        return Ok(basis.clone());
    };
    let v = lambda[i0].valuation(p).finite().expect("nonzero");
    if v >= 0 {
        return Ok(basis.clone());
    }
    let col_i0 = basis.column(i0);
    let cols: Vec<Vec<ValuedRational>> = (0..n)
        .map(|j| {
            if j == i0 {
                col_i0.iter().map(|x| x * &p.rat_pow(-v)).collect()
            } else {
                let f = &lambda[j] / &lambda[i0];
                basis.column(j).iter().zip(&col_i0).map(|(a, b)| a - &(&f * b)).collect()
            }
        })
        .collect();
    hermite(&QMatrix::from_columns(&cols)?, p)
}

/// Whether `v` lies in the lattice with basis `basis`.
pub fn lattice_contains(basis: &QMatrix, v: &[ValuedRational], p: Prime) -> Result<bool> {
    let coords = basis.inverse()?.mul_vec(v);
    Ok(coords.iter().all(|c| c.is_integral_at(p)))
}

/// Representatives of `L / M` for lattices `M ⊆ L` with Hermite forms `l`, `m`,
/// as vectors of `L`, in lexicographic order of their coordinates.
pub fn quotient_representatives(l: &QMatrix, m: &QMatrix, p: Prime) -> Result<Vec<Vec<ValuedRational>>> {
    let rel = l.inverse()?.try_mul(m)?;
    if !rel.is_integral(p) {
        return Err(Error::Dimension("lattice is not a sublattice".into()));
    }
    let rel = hermite(&rel, p)?;
    let exps: Vec<u32> = (0..rel.rows())
        .map(|i| {
            let v = rel.get(i, i).valuation(p).finite().expect("nonzero pivot");
            u32::try_from(v).expect("integral Hermite form has nonnegative pivots")
        })
        .collect();
    let total: u64 = exps.iter().map(|&e| p.get().pow(e)).product();
    if total as usize > MAX_SUBDIVISION {
        return Err(Error::GuardExceeded(total as usize));
    }
    let mut coords: Vec<Vec<BigInt>> = vec![Vec::new()];
    for &e in &exps {
        let bound = p.pow(e);
        let mut next = Vec::new();
        for prefix in &coords {
            let mut x = BigInt::zero();
            while x < bound {
                let mut v = prefix.clone();
                v.push(x.clone());
                next.push(v);
                x += BigInt::one();
            }
        }
        coords = next;
    }
    Ok(coords
        .into_iter()
        .map(|x| {
            let x: Vec<ValuedRational> = x.into_iter().map(ValuedRational::from).collect();
            l.mul_vec(&x)
        })
        .collect())
}

/// `center + basis · Z_p^N`, kept in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LatticeCoset {
    center: Vec<ValuedRational>,
    basis: QMatrix,
}

impl LatticeCoset {
    pub fn new(center: Vec<ValuedRational>, basis: &QMatrix, p: Prime) -> Result<Self> {
        if !basis.is_square() || basis.rows() != center.len() {
            return Err(Error::Dimension(format!(
                "center of length {} with a {}x{} basis",
                center.len(),
                basis.rows(),
                basis.cols()
            )));
        }
        let basis = hermite(basis, p)?;
        let center = reduce_mod(&center, &basis, p);
        Ok(LatticeCoset { center, basis })
    }

    /// `Z_p^N`.
    pub fn standard(n: usize) -> Self {
        LatticeCoset {
            center: vec![ValuedRational::zero(); n],
            basis: QMatrix::identity(n),
        }
    }

    /// `center + p^k Z_p^N`.
    pub fn scaled_standard(center: Vec<ValuedRational>, k: i64, p: Prime) -> Self {
        let n = center.len();
        LatticeCoset::new(center, &QMatrix::scalar(n, &p.rat_pow(k)), p).expect("nonsingular")
    }

    pub fn center(&self) -> &[ValuedRational] {
        &self.center
    }

    pub fn basis(&self) -> &QMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn contains(&self, v: &[ValuedRational], p: Prime) -> bool {
        reduce_mod(v, &self.basis, p) == self.center
    }

    /// The image under the invertible linear map `t`.
    pub fn mapped(&self, t: &QMatrix, p: Prime) -> Result<Self> {
        LatticeCoset::new(t.mul_vec(&self.center), &t.try_mul(&self.basis)?, p)
    }

    /// The cosets of the sublattice with Hermite form `sub` that make up `self`.
    pub fn split(&self, sub: &QMatrix, p: Prime) -> Result<Vec<LatticeCoset>> {
        Ok(quotient_representatives(&self.basis, sub, p)?
            .into_iter()
            .map(|r| {
                let c: Vec<ValuedRational> = self.center.iter().zip(&r).map(|(a, b)| a + b).collect();
                LatticeCoset {
                    center: reduce_mod(&c, sub, p),
                    basis: sub.clone(),
                }
            })
            .collect())
    }

    /// Minimal valuation of the basis entries, a measure of how coarse the lattice is.
    pub fn min_valuation(&self, p: Prime) -> Valuation {
        self.basis.min_valuation(p)
    }
}

impl fmt::Debug for LatticeCoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + {:?}·Z_p^{}", self.center, self.basis, self.dim())
    }
}
