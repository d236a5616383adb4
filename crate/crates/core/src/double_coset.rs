//! Double cosets `H_x \ H / K` for the torus `H_x` of each case.
//!
//! A double coset is an `H_x`-orbit of tree vertices and is detected by a
//! tree invariant: distance to the fixed vertex `K` (inert), one plus the
//! distance to the fixed edge `{K, diag(p,1)K}` (ramified), or distance to
//! the diagonal apartment (split).

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::mat2::{Mat2, ProjMat};
use crate::padic::{Prime, ValuedRational};
use crate::quadspace::{CaseClass, CaseKind};
use crate::tree::{canonicalize, dist_to_apartment, dist_to_edge, EdgeRef};

/// A representative `γ_d = diag(p^d, 1)` (inert, ramified) or
/// `δ_d = [[p^d, 1], [0, 1]]` (split) of a double coset.
///
/// [`CosetRep::translated`] replaces the matrix by a left `H_x`-translate, which
/// represents the same double coset.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CosetRep {
    kind: CaseKind,
    d: u32,
    matrix: ProjMat,
}

impl CosetRep {
    pub fn new(kind: CaseKind, d: u32, p: Prime) -> Result<Self> {
        if kind == CaseKind::Ramified && d == 0 {
            return Err(Error::InconsistentCase(
                "ramified representatives start at d = 1".into(),
            ));
        }
        let pd = p.pow(d);
        let matrix = match kind {
            CaseKind::Inert | CaseKind::Ramified => Mat2::diag(pd, 1),
            CaseKind::Split => Mat2::new(pd, 1, 0, 1),
        };
        Ok(CosetRep {
            kind,
            d,
            matrix: ProjMat::new(matrix)?,
        })
    }

    /// A representative with an explicit matrix, e.g. one read back from JSON.
    /// The matrix is trusted to lie in the double coset labelled by `d`.
    pub fn with_matrix(kind: CaseKind, d: u32, matrix: ProjMat) -> Self {
        CosetRep { kind, d, matrix }
    }

    /// `t γ` for `t ∈ H_x`: same double coset, different representative.
    pub fn translated(&self, t: &ProjMat) -> Self {
        CosetRep {
            kind: self.kind,
            d: self.d,
            matrix: t * &self.matrix,
        }
    }

    pub fn kind(&self) -> CaseKind {
        self.kind
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn matrix(&self) -> &ProjMat {
        &self.matrix
    }
}

/// Haar measure normalization.
///
/// `vol_k` is the volume of `K` in `H`; `vol_hx` the total volume of the compact
/// torus (inert, ramified); `vol_hx_cap_k` the volume of `H_x ∩ K` for the split torus.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MeasureSpec {
    pub vol_k: ValuedRational,
    pub vol_hx: ValuedRational,
    pub vol_hx_cap_k: ValuedRational,
}

impl Default for MeasureSpec {
    fn default() -> Self {
        MeasureSpec {
            vol_k: ValuedRational::one(),
            vol_hx: ValuedRational::one(),
            vol_hx_cap_k: ValuedRational::one(),
        }
    }
}

impl MeasureSpec {
    /// The torus volume the case is normalized against.
    pub fn torus_normalizer(&self, kind: CaseKind) -> &ValuedRational {
        match kind {
            CaseKind::Inert | CaseKind::Ramified => &self.vol_hx,
            CaseKind::Split => &self.vol_hx_cap_k,
        }
    }

    /// The same normalization with the torus measure multiplied by `factor`.
    pub fn with_torus_scaled(&self, factor: &ValuedRational) -> Self {
        MeasureSpec {
            vol_k: self.vol_k.clone(),
            vol_hx: &self.vol_hx * factor,
            vol_hx_cap_k: &self.vol_hx_cap_k * factor,
        }
    }
}

/// Representatives `γ ∈ 𝒞` with `x ∈ γL` for the normal form `x` of `c`.
pub fn support_set(c: &CaseClass, p: Prime) -> Vec<CosetRep> {
    let alpha = c.alpha();
    let range = match c.kind() {
        CaseKind::Inert | CaseKind::Split => 0..=alpha / 2,
        CaseKind::Ramified => 1..=alpha.div_ceil(2),
    };
    range
        .map(|d| CosetRep::new(c.kind(), d, p).expect("d is in range for the case"))
        .collect()
}

/// The first `d` indexing 𝒞 for the case.
pub fn first_index(kind: CaseKind) -> u32 {
    match kind {
        CaseKind::Ramified => 1,
        CaseKind::Inert | CaseKind::Split => 0,
    }
}

/// `[H_x ∩ K' : H_x ∩ γKγ^{-1}]` where `K'` is `H_x` (compact cases) or `K` (split).
///
/// Inert: `1` at `d = 0`, else `p^d + p^(d-1)`. Ramified: `2 p^(d-1)`.
/// Split: `1` at `d = 0`, else `(p - 1) p^(d-1)`, the number of vertices at
/// distance `d` from the apartment that project to `K`.
pub fn stabilizer_index_formula(kind: CaseKind, d: u32, p: Prime) -> Result<BigInt> {
    let pp = |k: u32| p.pow(k);
    Ok(match (kind, d) {
        (CaseKind::Ramified, 0) => {
            return Err(Error::InconsistentCase("ramified d = 0".into()));
        }
        (CaseKind::Inert | CaseKind::Split, 0) => BigInt::one(),
        (CaseKind::Inert, d) => pp(d) + pp(d - 1),
        (CaseKind::Ramified, d) => BigInt::from(2) * pp(d - 1),
        (CaseKind::Split, d) => (p.to_bigint() - 1) * pp(d - 1),
    })
}

/// `vol(H_x ∩ γKγ^{-1})` under the default [`MeasureSpec`].
pub fn stabilizer_volume(c: &CaseClass, rep: &CosetRep, p: Prime) -> Result<ValuedRational> {
    stabilizer_volume_with(&MeasureSpec::default(), c, rep, p)
}

pub fn stabilizer_volume_with(
    measure: &MeasureSpec,
    c: &CaseClass,
    rep: &CosetRep,
    p: Prime,
) -> Result<ValuedRational> {
    if rep.kind() != c.kind() {
        return Err(Error::InconsistentCase(format!(
            "{} representative used with a {} case",
            rep.kind(),
            c.kind()
        )));
    }
    let index = stabilizer_index_formula(c.kind(), rep.d(), p)?;
    Ok(measure.torus_normalizer(c.kind()) / ValuedRational::from(index))
}

/// The `d` with `h ∈ H_x γ_d K` (resp. `δ_d K`).
pub fn classify_double_coset(h: &ProjMat, c: &CaseClass, p: Prime) -> (CaseKind, u32) {
    let v = canonicalize(h, p);
    let d = match c.kind() {
        CaseKind::Inert => v.depth(),
        CaseKind::Ramified => 1 + dist_to_edge(&v, &EdgeRef::standard(), p),
        CaseKind::Split => dist_to_apartment(&v, p),
    };
    (c.kind(), d)
}

/// Torus elements with parameters running over `0..=p^N` (`1..=p^N` for split),
/// scalar-normalized, nonsingular and deduplicated, in enumeration order.
///
/// Inert `[[a, bε], [b, a]]`, ramified `[[a, bεp], [b, a]]`, split `diag(a, b)`.
/// The range includes `p^N` itself so the uniformizer translations are present.
pub fn hx_generators_mod(c: &CaseClass, p: Prime, n: u32) -> Vec<ProjMat> {
    let top = p.pow(n);
    let eps = c.unit().clone();
    let pr = ValuedRational::from(p.get());
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let lo = match c.kind() {
        CaseKind::Split => BigInt::one(),
        _ => BigInt::zero(),
    };
    let mut a = lo.clone();
    while a <= top {
        let mut b = lo.clone();
        while b <= top {
            let (ra, rb) = (ValuedRational::from(a.clone()), ValuedRational::from(b.clone()));
            let m = match c.kind() {
                CaseKind::Inert => Mat2::new(ra.clone(), &rb * &eps, rb, ra),
                CaseKind::Ramified => Mat2::new(ra.clone(), &rb * &eps * &pr, rb, ra),
                CaseKind::Split => Mat2::diag(ra, rb),
            };
            if let Ok(g) = ProjMat::new(m) {
                if seen.insert(g.clone()) {
                    out.push(g);
                }
            }
            b += 1;
        }
        a += 1;
    }
    out
}
