//! The ternary quadratic space of traceless 2x2 matrices.
//!
//! `V = {[[a, b], [c, -a]]}` with `Q(x) = -det(x) = a^2 + bc` and bilinear form
//! `(x, y) = tr(xy)`. `PGL_2` acts by conjugation and `L` is the lattice of
//! integral elements.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mat2::{Mat2, ProjMat};
use crate::padic::{
    canonical_nonresidue, hilbert, square_class, unit_part, Prime, SquareClass, Valuation,
    ValuedRational,
};

/// `det` of the Gram matrix of `tr(xy)` in the basis
/// `{diag(1,-1), [[0,1],[0,0]], [[0,0],[1,0]]}`: `[[2,0,0],[0,0,1],[0,1,0]]` has determinant -2.
pub const TRACELESS_GRAM_DET: i64 = -2;

/// `[[a, b], [c, -a]]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TracelessMat {
    pub a: ValuedRational,
    pub b: ValuedRational,
    pub c: ValuedRational,
}

impl TracelessMat {
    pub fn new(
        a: impl Into<ValuedRational>,
        b: impl Into<ValuedRational>,
        c: impl Into<ValuedRational>,
    ) -> Self {
        TracelessMat {
            a: a.into(),
            b: b.into(),
            c: c.into(),
        }
    }

    pub fn zero() -> Self {
        TracelessMat::new(0, 0, 0)
    }

    /// Fails unless `m` has trace zero.
    pub fn from_matrix(m: &Mat2) -> Result<Self> {
        if !m.trace().is_zero() {
            return Err(Error::Dimension(format!("{m:?} is not traceless")));
        }
        Ok(TracelessMat {
            a: m.a.clone(),
            b: m.b.clone(),
            c: m.c.clone(),
        })
    }

    pub fn to_matrix(&self) -> Mat2 {
        Mat2 {
            a: self.a.clone(),
            b: self.b.clone(),
            c: self.c.clone(),
            d: -&self.a,
        }
    }

    pub fn scale(&self, s: &ValuedRational) -> Self {
        TracelessMat {
            a: &self.a * s,
            b: &self.b * s,
            c: &self.c * s,
        }
    }
}

impl fmt::Debug for TracelessMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, -&self.a)
    }
}

pub fn q_value(x: &TracelessMat) -> ValuedRational {
    &x.a * &x.a + &x.b * &x.c
}

pub fn inner(x: &TracelessMat, y: &TracelessMat) -> ValuedRational {
    ValuedRational::from(2) * &x.a * &y.a + &x.b * &y.c + &x.c * &y.b
}

pub fn in_lattice(x: &TracelessMat, p: Prime) -> bool {
    [&x.a, &x.b, &x.c].iter().all(|e| e.is_integral_at(p))
}

/// `h x h^{-1}`.
pub fn act(h: &ProjMat, x: &TracelessMat) -> TracelessMat {
    let m = h.matrix();
    let det = m.det();
    let conj = &(m * &x.to_matrix()) * &m.adjugate();
    let inv = det.recip().expect("ProjMat is nonsingular");
    TracelessMat::from_matrix(&conj.scale(&inv)).expect("conjugation preserves trace")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseKind {
    Inert,
    Ramified,
    Split,
}

impl CaseKind {
    pub const ALL: [CaseKind; 3] = [CaseKind::Inert, CaseKind::Ramified, CaseKind::Split];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseKind::Inert => "inert",
            CaseKind::Ramified => "ramified",
            CaseKind::Split => "split",
        }
    }

    pub fn admits_alpha(self, alpha: u32) -> bool {
        match self {
            CaseKind::Ramified => alpha % 2 == 1,
            CaseKind::Inert | CaseKind::Split => alpha.is_multiple_of(2),
        }
    }
}

impl fmt::Display for CaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for CaseKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inert" => Ok(CaseKind::Inert),
            "ramified" => Ok(CaseKind::Ramified),
            "split" => Ok(CaseKind::Split),
            other => Err(Error::Parse(format!("unknown case {other:?}"))),
        }
    }
}

/// Case data for `Q(x) = p^alpha * unit` with `unit` a p-adic unit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CaseClass {
    kind: CaseKind,
    alpha: u32,
    unit: ValuedRational,
}

impl CaseClass {
    pub fn new(kind: CaseKind, alpha: u32, unit: ValuedRational, p: Prime) -> Result<Self> {
        p.require_odd()?;
        if !kind.admits_alpha(alpha) {
            return Err(Error::InconsistentCase(format!(
                "{kind} requires {} alpha, got {alpha}",
                if kind == CaseKind::Ramified { "odd" } else { "even" }
            )));
        }
        let class = square_class(&unit, p)?;
        let ok = match kind {
            CaseKind::Inert => class == SquareClass::UnitNonsquare,
            CaseKind::Split => class == SquareClass::UnitSquare,
            CaseKind::Ramified => {
                matches!(class, SquareClass::UnitSquare | SquareClass::UnitNonsquare)
            }
        };
        if !ok {
            return Err(Error::InconsistentCase(format!(
                "unit {unit} has square class {class:?}, incompatible with {kind}"
            )));
        }
        Ok(CaseClass { kind, alpha, unit })
    }

    /// The canonical nonresidue for inert and ramified, 1 for split.
    pub fn with_default_unit(kind: CaseKind, alpha: u32, p: Prime) -> Result<Self> {
        p.require_odd()?;
        let unit = match kind {
            CaseKind::Split => ValuedRational::one(),
            _ => ValuedRational::from(canonical_nonresidue(p)),
        };
        CaseClass::new(kind, alpha, unit, p)
    }

    pub fn kind(&self) -> CaseKind {
        self.kind
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    pub fn unit(&self) -> &ValuedRational {
        &self.unit
    }

    /// `p^alpha * unit`.
    pub fn q_value(&self, p: Prime) -> ValuedRational {
        p.rat_pow(self.alpha as i64) * &self.unit
    }
}

/// Result of [`classify`]: when `Q(x)` is zero or non-integral, `phi(h^{-1} x)`
/// vanishes identically and there is nothing to match.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    Case(CaseClass),
    NotApplicable,
}

impl Classification {
    pub fn case(self) -> Option<CaseClass> {
        match self {
            Classification::Case(c) => Some(c),
            Classification::NotApplicable => None,
        }
    }
}

/// Splits `x` into inert, ramified or split according to `Q(x) = p^alpha * eps`.
/// Only fails for `p = 2`.
pub fn classify(x: &TracelessMat, p: Prime) -> Result<Classification> {
    p.require_odd()?;
    let q = q_value(x);
    if q.is_zero() || q.valuation(p) < Valuation::Finite(0) {
        return Ok(Classification::NotApplicable);
    }
    let (alpha, unit) = unit_part(&q, p)?;
    let alpha = alpha as u32;
    let kind = if alpha % 2 == 1 {
        CaseKind::Ramified
    } else if square_class(&unit, p)? == SquareClass::UnitSquare {
        CaseKind::Split
    } else {
        CaseKind::Inert
    };
    Ok(Classification::Case(CaseClass { kind, alpha, unit }))
}

/// The normal form of the case: `p^(alpha/2) [[0, eps], [1, 0]]`,
/// `p^((alpha-1)/2) [[0, p eps], [1, 0]]` or `p^(alpha/2) diag(1, -1)`.
pub fn standard_rep(c: &CaseClass, p: Prime) -> TracelessMat {
    let half = (c.alpha / 2) as i64;
    let scale = p.rat_pow(half);
    match c.kind {
        CaseKind::Inert => TracelessMat::new(0, c.unit.clone(), 1).scale(&scale),
        CaseKind::Ramified => {
            TracelessMat::new(0, ValuedRational::from(p.get()) * &c.unit, 1).scale(&scale)
        }
        CaseKind::Split => TracelessMat::new(1, 0, 0).scale(&scale),
    }
}

/// Dimension and Gram determinant of a quadratic space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadSpaceDescriptor {
    pub dim: u32,
    pub det: ValuedRational,
}

impl QuadSpaceDescriptor {
    pub fn new(dim: u32, det: ValuedRational) -> Result<Self> {
        if det.is_zero() {
            return Err(Error::ZeroInput);
        }
        Ok(QuadSpaceDescriptor { dim, det })
    }

    pub fn traceless() -> Self {
        QuadSpaceDescriptor {
            dim: 3,
            det: ValuedRational::from(TRACELESS_GRAM_DET),
        }
    }

    pub fn hyperbolic_plane() -> Self {
        QuadSpaceDescriptor {
            dim: 2,
            det: ValuedRational::from(-1),
        }
    }

    /// `(-1)^(m(m-1)/2) det V`.
    pub fn discriminant(&self) -> ValuedRational {
        let m = self.dim as u64;
        if (m * m.saturating_sub(1) / 2) % 2 == 1 {
            -&self.det
        } else {
            self.det.clone()
        }
    }
}

/// `chi_V(t) = (t, (-1)^(m(m-1)/2) det V)_p`. Applied literally for odd `m` too.
pub fn chi_v(t: &ValuedRational, d: &QuadSpaceDescriptor, p: Prime) -> Result<i8> {
    hilbert(t, &d.discriminant(), p)
}
