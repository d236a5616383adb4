//! Exact p-adic arithmetic on rational numbers.
//!
//! Every scalar in the crate is a [`ValuedRational`]: an exact reduced fraction
//! that can be asked for its p-adic valuation, unit part and square class.
//! Legendre and Hilbert symbols are provided for odd primes.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A rational prime. Odd by default; `p = 2` only through [`Prime::allowing_two`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        let prime = Self::allowing_two(p)?;
        if p == 2 {
            return Err(Error::EvenPrime);
        }
        Ok(prime)
    }

    /// Tree combinatorics make sense at `p = 2`; everything involving square
    /// classes rejects it later with [`Error::EvenPrime`].
    pub fn allowing_two(p: u64) -> Result<Self> {
        if p < 2 || (2..).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
            return Err(Error::NotPrime(p));
        }
        Ok(Prime(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn is_odd(self) -> bool {
        self.0 != 2
    }

    pub fn require_odd(self) -> Result<()> {
        if self.is_odd() {
            Ok(())
        } else {
            Err(Error::EvenPrime)
        }
    }

    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.0)
    }

    pub fn pow(self, k: u32) -> BigInt {
        num_traits::pow(self.to_bigint(), k as usize)
    }

    /// `p^k` as a rational, for any integer `k`.
    pub fn rat_pow(self, k: i64) -> ValuedRational {
        let base = self.pow(k.unsigned_abs() as u32);
        if k >= 0 {
            ValuedRational::from(base)
        } else {
            ValuedRational::new(BigInt::one(), base)
        }
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// p-adic valuation; `Infinite` is the valuation of zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_nonnegative(self) -> bool {
        self >= Valuation::Finite(0)
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

/// Exact rational number, always kept in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ValuedRational(BigRational);

impl ValuedRational {
    /// Panics if `den` is zero.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        ValuedRational(BigRational::new(num.into(), den.into()))
    }

    pub fn zero() -> Self {
        ValuedRational(BigRational::zero())
    }

    pub fn one() -> Self {
        ValuedRational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        Ok(ValuedRational(self.0.recip()))
    }

    pub fn abs(&self) -> Self {
        ValuedRational(self.0.abs())
    }

    pub fn pow(&self, k: i32) -> Self {
        ValuedRational(num_traits::Pow::pow(&self.0, k))
    }

    /// `None` if the rational is not an integer.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.0.to_integer())
    }

    pub fn valuation(&self, p: Prime) -> Valuation {
        valuation(self, p)
    }

    pub fn is_integral_at(&self, p: Prime) -> bool {
        self.valuation(p).is_nonnegative()
    }

    /// Serialized form `"num/den"` in lowest terms; integers keep the `/1`.
    pub fn to_fraction_string(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for ValuedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for ValuedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom().is_one() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl FromStr for ValuedRational {
    type Err = Error;

    /// Accepts `"n"` or `"n/d"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse = |t: &str| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
        };
        match s.split_once('/') {
            Some((n, d)) => {
                let d = parse(d)?;
                if d.is_zero() {
                    return Err(Error::Parse(format!("zero denominator in {s:?}")));
                }
                Ok(ValuedRational::new(parse(n)?, d))
            }
            None => Ok(ValuedRational::from(parse(s)?)),
        }
    }
}

impl From<BigInt> for ValuedRational {
    fn from(n: BigInt) -> Self {
        ValuedRational(BigRational::from_integer(n))
    }
}

impl From<i64> for ValuedRational {
    fn from(n: i64) -> Self {
        ValuedRational::from(BigInt::from(n))
    }
}

impl From<u64> for ValuedRational {
    fn from(n: u64) -> Self {
        ValuedRational::from(BigInt::from(n))
    }
}

impl From<i32> for ValuedRational {
    fn from(n: i32) -> Self {
        ValuedRational::from(BigInt::from(n))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&ValuedRational> for &ValuedRational {
            type Output = ValuedRational;
            fn $method(self, rhs: &ValuedRational) -> ValuedRational {
                ValuedRational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<ValuedRational> for ValuedRational {
            type Output = ValuedRational;
            fn $method(self, rhs: ValuedRational) -> ValuedRational {
                ValuedRational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&ValuedRational> for ValuedRational {
            type Output = ValuedRational;
            fn $method(self, rhs: &ValuedRational) -> ValuedRational {
                ValuedRational(self.0.$method(&rhs.0))
            }
        }
        impl $trait<ValuedRational> for &ValuedRational {
            type Output = ValuedRational;
            fn $method(self, rhs: ValuedRational) -> ValuedRational {
                ValuedRational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for ValuedRational {
    type Output = ValuedRational;
    fn neg(self) -> ValuedRational {
        ValuedRational(-self.0)
    }
}

impl Neg for &ValuedRational {
    type Output = ValuedRational;
    fn neg(self) -> ValuedRational {
        ValuedRational(-&self.0)
    }
}

impl AddAssign<&ValuedRational> for ValuedRational {
    fn add_assign(&mut self, rhs: &ValuedRational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&ValuedRational> for ValuedRational {
    fn sub_assign(&mut self, rhs: &ValuedRational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&ValuedRational> for ValuedRational {
    fn mul_assign(&mut self, rhs: &ValuedRational) {
        self.0 *= &rhs.0;
    }
}

impl std::iter::Sum for ValuedRational {
    fn sum<I: Iterator<Item = ValuedRational>>(iter: I) -> Self {
        iter.fold(ValuedRational::zero(), |acc, x| acc + x)
    }
}

fn int_valuation(n: &BigInt, p: &BigInt) -> i64 {
    debug_assert!(!n.is_zero());
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// Strips every factor of `p`; returns `(v_p(n), n / p^v)`.
fn split_int(n: &BigInt, p: &BigInt) -> (i64, BigInt) {
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return (v, n);
        }
        n = q;
        v += 1;
    }
}

pub fn valuation(r: &ValuedRational, p: Prime) -> Valuation {
    if r.is_zero() {
        return Valuation::Infinite;
    }
    let pb = p.to_bigint();
    Valuation::Finite(int_valuation(r.numer(), &pb) - int_valuation(r.denom(), &pb))
}

/// Writes `r = p^v * u` with `u` a p-adic unit.
pub fn unit_part(r: &ValuedRational, p: Prime) -> Result<(i64, ValuedRational)> {
    if r.is_zero() {
        return Err(Error::ZeroInput);
    }
    let pb = p.to_bigint();
    let (vn, n) = split_int(r.numer(), &pb);
    let (vd, d) = split_int(r.denom(), &pb);
    Ok((vn - vd, ValuedRational::new(n, d)))
}

/// Canonical representative of `r` modulo `p^k Z_p`.
///
/// The result is the unique element of `Z[1/p]` in `[0, p^k)` congruent to `r`,
/// i.e. the p-adic expansion of `r` truncated below `p^k`. Works for any sign of `k`.
pub fn reduce_mod_power(r: &ValuedRational, p: Prime, k: i64) -> ValuedRational {
    if r.is_zero() {
        return ValuedRational::zero();
    }
    let pb = p.to_bigint();
    let (s, d_prime) = split_int(r.denom(), &pb);
    // r * p^t is p-integral and reduced mod p^(k+t) with k + t >= 0
    let t = s.max(-k);
    let modulus = num_traits::pow(pb.clone(), (k + t) as usize);
    let scaled = r.numer() * num_traits::pow(pb.clone(), (t - s) as usize);
    let inv = mod_inverse(&d_prime, &modulus);
    let m = (scaled * inv).mod_floor(&modulus);
    ValuedRational::new(m, num_traits::pow(pb, t as usize))
}

/// p-adic fractional part `{x}_p`, the representative of `x mod Z_p` in `[0, 1)`.
pub fn fractional_part(r: &ValuedRational, p: Prime) -> ValuedRational {
    reduce_mod_power(r, p, 0)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    if m.is_one() {
        return BigInt::zero();
    }
    let g = a.extended_gcd(m);
    assert!(g.gcd.abs().is_one(), "{a} is not invertible mod {m}");
    g.x.mod_floor(m)
}

/// Legendre symbol of a p-adic unit, via its reduction mod p.
pub fn legendre(u: &ValuedRational, p: Prime) -> Result<i8> {
    p.require_odd()?;
    if valuation(u, p) != Valuation::Finite(0) {
        return Err(Error::NotAUnit(u.to_string()));
    }
    let pb = p.to_bigint();
    let e = (&pb - 1u32) / 2u32;
    let sym = |n: &BigInt| -> i8 {
        let r = n.mod_floor(&pb).modpow(&e, &pb);
        if r.is_one() {
            1
        } else {
            -1
        }
    };
    Ok(sym(u.numer()) * sym(u.denom()))
}

/// The four square classes of `Q_p^x` for odd `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SquareClass {
    UnitSquare,
    UnitNonsquare,
    PTimesSquare,
    PTimesNonsquare,
}

impl SquareClass {
    pub const ALL: [SquareClass; 4] = [
        SquareClass::UnitSquare,
        SquareClass::UnitNonsquare,
        SquareClass::PTimesSquare,
        SquareClass::PTimesNonsquare,
    ];

    /// Representative from `{1, eps, p, p*eps}` with `eps` the canonical nonresidue.
    pub fn representative(self, p: Prime) -> ValuedRational {
        let eps = ValuedRational::from(canonical_nonresidue(p));
        let pr = ValuedRational::from(p.get());
        match self {
            SquareClass::UnitSquare => ValuedRational::one(),
            SquareClass::UnitNonsquare => eps,
            SquareClass::PTimesSquare => pr,
            SquareClass::PTimesNonsquare => pr * eps,
        }
    }
}

pub fn square_class(r: &ValuedRational, p: Prime) -> Result<SquareClass> {
    p.require_odd()?;
    let (v, u) = unit_part(r, p)?;
    let square = legendre(&u, p)? == 1;
    Ok(match (v.rem_euclid(2) == 0, square) {
        (true, true) => SquareClass::UnitSquare,
        (true, false) => SquareClass::UnitNonsquare,
        (false, true) => SquareClass::PTimesSquare,
        (false, false) => SquareClass::PTimesNonsquare,
    })
}

/// Local Hilbert symbol `(a, b)_p` at an odd prime:
/// `(-1)^(αβ(p-1)/2) (u/p)^β (w/p)^α` for `a = p^α u`, `b = p^β w`.
pub fn hilbert(a: &ValuedRational, b: &ValuedRational, p: Prime) -> Result<i8> {
    p.require_odd()?;
    let (alpha, u) = unit_part(a, p)?;
    let (beta, w) = unit_part(b, p)?;
    let mut sign = 1i8;
    let half = ((p.get() - 1) / 2) as i64;
    if (alpha * beta * half).rem_euclid(2) == 1 {
        sign = -sign;
    }
    if beta.rem_euclid(2) == 1 {
        sign *= legendre(&u, p)?;
    }
    if alpha.rem_euclid(2) == 1 {
        sign *= legendre(&w, p)?;
    }
    Ok(sign)
}

/// Smallest positive integer that is a quadratic nonresidue mod `p`.
pub fn canonical_nonresidue(p: Prime) -> u64 {
    assert!(p.is_odd(), "no nonresidue convention at p = 2");
    (2..p.get())
        .find(|&n| legendre(&ValuedRational::from(n), p) == Ok(-1))
        .expect("every odd prime has a nonresidue")
}

impl PartialOrd<i64> for ValuedRational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.0.cmp(&BigRational::from_integer(BigInt::from(*other))))
    }
}

impl PartialEq<i64> for ValuedRational {
    fn eq(&self, other: &i64) -> bool {
        self.0 == BigRational::from_integer(BigInt::from(*other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> ValuedRational {
        ValuedRational::new(n, d)
    }

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn prime_construction() {
        assert_eq!(Prime::new(2), Err(Error::EvenPrime));
        assert_eq!(Prime::new(9), Err(Error::NotPrime(9)));
        assert_eq!(Prime::new(1), Err(Error::NotPrime(1)));
        assert!(Prime::allowing_two(2).is_ok());
        assert_eq!(Prime::new(13).unwrap().get(), 13);
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(&q(1, 9), p(3)), Valuation::Finite(-2));
        assert_eq!(valuation(&q(0, 1), p(5)), Valuation::Infinite);
        assert_eq!(valuation(&q(18, 5), p(3)), Valuation::Finite(2));
        assert!(Valuation::Finite(1_000_000) < Valuation::Infinite);
    }

    #[test]
    fn square_class_examples() {
        assert_eq!(square_class(&q(1, 1), p(3)), Ok(SquareClass::UnitSquare));
        assert_eq!(square_class(&q(2, 1), p(3)), Ok(SquareClass::UnitNonsquare));
        assert_eq!(square_class(&q(12, 1), p(3)), Ok(SquareClass::PTimesSquare));
        assert_eq!(square_class(&q(0, 1), p(3)), Err(Error::ZeroInput));
        assert_eq!(square_class(&q(2, 3), p(3)), Ok(SquareClass::PTimesNonsquare));
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(&q(1, 1), p(7)), Ok(1));
        assert_eq!(legendre(&q(3, 1), p(7)), Ok(-1));
        assert_eq!(legendre(&q(2, 1), p(7)), Ok(1));
        // 1/3 has the same symbol as 3
        assert_eq!(legendre(&q(1, 3), p(7)), Ok(-1));
        assert!(matches!(legendre(&q(7, 1), p(7)), Err(Error::NotAUnit(_))));
        assert!(matches!(legendre(&q(1, 7), p(7)), Err(Error::NotAUnit(_))));
    }

    #[test]
    fn hilbert_examples() {
        for b in [q(1, 1), q(3, 1), q(2, 9), q(-5, 7)] {
            assert_eq!(hilbert(&q(1, 1), &b, p(3)), Ok(1));
        }
        assert_eq!(hilbert(&q(3, 1), &q(3, 1), p(3)), Ok(-1));
        assert_eq!(hilbert(&q(2, 1), &q(5, 1), p(3)), Ok(1));
        assert_eq!(hilbert(&q(0, 1), &q(5, 1), p(3)), Err(Error::ZeroInput));
    }

    #[test]
    fn nonresidues() {
        assert_eq!(canonical_nonresidue(p(3)), 2);
        assert_eq!(canonical_nonresidue(p(5)), 2);
        assert_eq!(canonical_nonresidue(p(7)), 3);
        assert_eq!(canonical_nonresidue(p(17)), 3);
        assert_eq!(canonical_nonresidue(p(23)), 5);
    }

    #[test]
    fn reduction_mod_powers() {
        let three = p(3);
        assert_eq!(reduce_mod_power(&q(10, 1), three, 2), q(1, 1));
        assert_eq!(reduce_mod_power(&q(-1, 1), three, 1), q(2, 1));
        // 1/2 = 2 mod 3
        assert_eq!(reduce_mod_power(&q(1, 2), three, 1), q(2, 1));
        // 1/3 mod Z_3 is itself; 4/3 = 1 + 1/3
        assert_eq!(fractional_part(&q(4, 3), three), q(1, 3));
        assert_eq!(fractional_part(&q(-1, 3), three), q(2, 3));
        // 1/6 = (1/3)(1/2), 1/2 = 2 + 3*(...) so {1/6} = 2/3
        assert_eq!(fractional_part(&q(1, 6), three), q(2, 3));
        assert_eq!(reduce_mod_power(&q(5, 9), three, -1), q(2, 9));
        assert_eq!(reduce_mod_power(&q(7, 9), three, -1), q(1, 9));
        for r in [q(7, 12), q(-22, 5), q(1, 81)] {
            for k in -3..4 {
                let red = reduce_mod_power(&r, three, k);
                assert!(red >= 0 && red < three.rat_pow(k));
                assert!((&r - &red).valuation(three) >= Valuation::Finite(k));
            }
        }
    }

    #[test]
    fn parse_and_format() {
        assert_eq!("4/1".parse::<ValuedRational>().unwrap(), q(4, 1));
        assert_eq!("-6/4".parse::<ValuedRational>().unwrap(), q(-3, 2));
        assert_eq!(q(-3, 2).to_fraction_string(), "-3/2");
        assert_eq!(q(4, 1).to_fraction_string(), "4/1");
        assert!("1/0".parse::<ValuedRational>().is_err());
        assert!("x".parse::<ValuedRational>().is_err());
    }
}
