//! 2x2 rational matrices and their classes modulo scalars.

use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};
use crate::padic::{Prime, Valuation, ValuedRational};

/// A 2x2 matrix `[[a, b], [c, d]]` over Q.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: ValuedRational,
    pub b: ValuedRational,
    pub c: ValuedRational,
    pub d: ValuedRational,
}

impl Mat2 {
    pub fn new(
        a: impl Into<ValuedRational>,
        b: impl Into<ValuedRational>,
        c: impl Into<ValuedRational>,
        d: impl Into<ValuedRational>,
    ) -> Self {
        Mat2 {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    pub fn identity() -> Self {
        Mat2::new(1, 0, 0, 1)
    }

    pub fn diag(x: impl Into<ValuedRational>, y: impl Into<ValuedRational>) -> Self {
        Mat2::new(x.into(), ValuedRational::zero(), ValuedRational::zero(), y.into())
    }

    pub fn det(&self) -> ValuedRational {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> ValuedRational {
        &self.a + &self.d
    }

    pub fn adjugate(&self) -> Mat2 {
        Mat2 {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    pub fn inverse(&self) -> Result<Mat2> {
        let det = self.det();
        if det.is_zero() {
            return Err(Error::Singular);
        }
        let inv = det.recip()?;
        Ok(self.adjugate().scale(&inv))
    }

    pub fn scale(&self, s: &ValuedRational) -> Mat2 {
        Mat2 {
            a: &self.a * s,
            b: &self.b * s,
            c: &self.c * s,
            d: &self.d * s,
        }
    }

    /// Entries in column-major order `a, c, b, d`.
    pub fn entries(&self) -> [&ValuedRational; 4] {
        [&self.a, &self.c, &self.b, &self.d]
    }

    pub fn min_valuation(&self, p: Prime) -> Valuation {
        self.entries()
            .iter()
            .map(|e| e.valuation(p))
            .min()
            .expect("four entries")
    }

    pub fn is_integral(&self, p: Prime) -> bool {
        self.min_valuation(p).is_nonnegative()
    }

    /// Integral with unit determinant, i.e. an element of `GL_2(Z_p)`.
    pub fn is_unimodular(&self, p: Prime) -> bool {
        self.is_integral(p) && self.det().valuation(p) == Valuation::Finite(0)
    }

    pub fn apply(&self, v: &[ValuedRational; 2]) -> [ValuedRational; 2] {
        [
            &self.a * &v[0] + &self.b * &v[1],
            &self.c * &v[0] + &self.d * &v[1],
        ]
    }

    /// The scalar multiple with coprime integer entries whose first nonzero
    /// entry (column-major) is positive.
    pub fn primitive_integral(&self) -> Mat2 {
        use num_integer::Integer;
        use num_traits::{One, Signed, Zero};
        let entries = self.entries();
        let den = entries
            .iter()
            .fold(num_bigint::BigInt::one(), |acc, e| acc.lcm(e.denom()));
        let scaled: Vec<_> = entries.iter().map(|e| (*e * &ValuedRational::from(den.clone())).numer().clone()).collect();
        let g = scaled.iter().fold(num_bigint::BigInt::zero(), |acc, n| acc.gcd(n));
        if g.is_zero() {
            return self.clone();
        }
        let lead_negative = scaled.iter().find(|n| !n.is_zero()).is_some_and(|n| n.is_negative());
        let g = if lead_negative { -g } else { g };
        let f = |n: &num_bigint::BigInt| ValuedRational::from(n / &g);
        Mat2 {
            a: f(&scaled[0]),
            c: f(&scaled[1]),
            b: f(&scaled[2]),
            d: f(&scaled[3]),
        }
    }

    pub fn to_strings(&self) -> [[String; 2]; 2] {
        [
            [self.a.to_fraction_string(), self.b.to_fraction_string()],
            [self.c.to_fraction_string(), self.d.to_fraction_string()],
        ]
    }

    pub fn from_strings(rows: &[[String; 2]; 2]) -> Result<Mat2> {
        Ok(Mat2 {
            a: rows[0][0].parse()?,
            b: rows[0][1].parse()?,
            c: rows[1][0].parse()?,
            d: rows[1][1].parse()?,
        })
    }
}

impl Mul<&Mat2> for &Mat2 {
    type Output = Mat2;
    fn mul(self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// An element of `PGL_2(Q)`: an invertible matrix up to nonzero scalars.
///
/// Stored with the first nonzero entry in column-major order equal to 1, so
/// structural equality is equality in `PGL_2`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjMat(Mat2);

impl ProjMat {
    pub fn new(m: Mat2) -> Result<Self> {
        if m.det().is_zero() {
            return Err(Error::Singular);
        }
        let lead = m
            .entries()
            .into_iter()
            .find(|e| !e.is_zero())
            .expect("nonsingular matrix has a nonzero entry")
            .recip()?;
        Ok(ProjMat(m.scale(&lead)))
    }

    pub fn from_entries(
        a: impl Into<ValuedRational>,
        b: impl Into<ValuedRational>,
        c: impl Into<ValuedRational>,
        d: impl Into<ValuedRational>,
    ) -> Result<Self> {
        ProjMat::new(Mat2::new(a, b, c, d))
    }

    pub fn identity() -> Self {
        ProjMat(Mat2::identity())
    }

    /// `diag(p^k, 1)` for any integer `k`.
    pub fn diag_power(p: Prime, k: i64) -> Self {
        ProjMat::new(Mat2::diag(p.rat_pow(k), 1)).expect("nonsingular")
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn into_matrix(self) -> Mat2 {
        self.0
    }

    pub fn inverse(&self) -> ProjMat {
        // the adjugate is a scalar multiple of the inverse
        ProjMat::new(self.0.adjugate()).expect("inverse of a nonsingular matrix")
    }

    /// Determinant of the normalized representative; well defined up to squares.
    pub fn det(&self) -> ValuedRational {
        self.0.det()
    }

    /// Whether some scalar multiple lies in `GL_2(Z_p)`, i.e. the class lies in `K`.
    pub fn in_maximal_compact(&self, p: Prime) -> bool {
        let (a, b) = elementary_divisor_valuations(&self.0, p);
        a == b
    }
}

impl Mul<&ProjMat> for &ProjMat {
    type Output = ProjMat;
    fn mul(self, o: &ProjMat) -> ProjMat {
        ProjMat::new(&self.0 * &o.0).expect("product of nonsingular matrices")
    }
}

impl fmt::Debug for ProjMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<ProjMat> for Mat2 {
    fn from(m: ProjMat) -> Mat2 {
        m.0
    }
}

/// Valuations `(a, b)`, `a <= b`, of the elementary divisors `p^a, p^b` of a
/// nonsingular matrix over `Z_p`.
pub fn elementary_divisor_valuations(m: &Mat2, p: Prime) -> (i64, i64) {
    let a = m
        .min_valuation(p)
        .finite()
        .expect("nonsingular matrix has a nonzero entry");
    let det = m
        .det()
        .valuation(p)
        .finite()
        .expect("nonsingular matrix");
    (a, det - a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_is_scalar_invariant() {
        let m = ProjMat::from_entries(2, 4, 6, 10).unwrap();
        let n = ProjMat::from_entries(ValuedRational::new(1, 3), ValuedRational::new(2, 3), 1, ValuedRational::new(5, 3)).unwrap();
        assert_eq!(m, n);
        assert_eq!(m.matrix().a, ValuedRational::one());
        let z = ProjMat::from_entries(0, 5, 3, 1).unwrap();
        assert_eq!(z.matrix().c, ValuedRational::one());
        assert_eq!(ProjMat::from_entries(1, 2, 2, 4), Err(Error::Singular));
    }

    #[test]
    fn inverse_and_product() {
        let m = ProjMat::from_entries(3, 1, 0, 1).unwrap();
        assert_eq!(&m * &m.inverse(), ProjMat::identity());
        let p = Prime::new(3).unwrap();
        assert!(!m.in_maximal_compact(p));
        assert!(ProjMat::from_entries(3, 3, 6, 9).unwrap().in_maximal_compact(Prime::new(5).unwrap()));
        assert!(ProjMat::from_entries(9, 3, 3, 0).unwrap().in_maximal_compact(p));
    }

    #[test]
    fn elementary_divisors() {
        let p = Prime::new(3).unwrap();
        assert_eq!(elementary_divisor_valuations(&Mat2::diag(9, 1), p), (0, 2));
        assert_eq!(elementary_divisor_valuations(&Mat2::new(3, 1, 0, 1), p), (0, 1));
        assert_eq!(elementary_divisor_valuations(&Mat2::diag(ValuedRational::new(1, 3), 3), p), (-1, 1));
    }

    #[test]
    fn primitive_integral_form() {
        assert_eq!(Mat2::diag(1, ValuedRational::new(1, 3)).primitive_integral(), Mat2::diag(3, 1));
        assert_eq!(Mat2::new(0, -4, -6, 2).primitive_integral(), Mat2::new(0, 2, 3, -1));
    }
}
