//! The Bruhat-Tits tree of `PGL_2(Q_p)`.
//!
//! Vertices are cosets `hK`, i.e. homothety classes of `Z_p`-lattices in `Q_p^2`.
//! Each class has a unique primitive lattice `Λ ⊆ Z_p^2` with cyclic quotient
//! `Z_p^2 / Λ ≅ Z/p^d`, and a unique basis of one of two shapes:
//!
//! * `[[p^d, u], [0, 1]]` with `0 <= u < p^d`
//! * `[[1, 0], [u, p^d]]` with `d >= 1`, `0 <= u < p^d` and `p | u`
//!
//! `d` is the distance from the base vertex `K`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mat2::{elementary_divisor_valuations, Mat2, ProjMat};
use crate::padic::{reduce_mod_power, unit_part, Prime, Valuation};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TreeVertex {
    /// `[[p^d, u], [0, 1]] K`
    Upper { d: u32, u: BigInt },
    /// `[[1, 0], [u, p^d]] K`
    Lower { d: u32, u: BigInt },
}

impl TreeVertex {
    pub fn base() -> Self {
        TreeVertex::Upper {
            d: 0,
            u: BigInt::zero(),
        }
    }

    pub fn upper(d: u32, u: impl Into<BigInt>) -> Self {
        TreeVertex::Upper { d, u: u.into() }
    }

    pub fn lower(d: u32, u: impl Into<BigInt>) -> Self {
        TreeVertex::Lower { d, u: u.into() }
    }

    /// Distance from the base vertex.
    pub fn depth(&self) -> u32 {
        match self {
            TreeVertex::Upper { d, .. } | TreeVertex::Lower { d, .. } => *d,
        }
    }

    pub fn is_base(&self) -> bool {
        self.depth() == 0
    }

    /// Checks the shape constraints for prime `p`.
    pub fn is_valid(&self, p: Prime) -> bool {
        match self {
            TreeVertex::Upper { d, u } => !u.is_negative_or_ge(&p.pow(*d)),
            TreeVertex::Lower { d, u } => {
                *d >= 1 && !u.is_negative_or_ge(&p.pow(*d)) && u.is_multiple_of(&p.to_bigint())
            }
        }
    }

    pub fn matrix(&self, p: Prime) -> ProjMat {
        let m = match self {
            TreeVertex::Upper { d, u } => Mat2::new(p.pow(*d), u.clone(), 0, 1),
            TreeVertex::Lower { d, u } => Mat2::new(1, 0, u.clone(), p.pow(*d)),
        };
        ProjMat::new(m).expect("vertex matrices are nonsingular")
    }
}

trait RangeCheck {
    fn is_negative_or_ge(&self, bound: &BigInt) -> bool;
}

impl RangeCheck for BigInt {
    fn is_negative_or_ge(&self, bound: &BigInt) -> bool {
        self.sign() == num_bigint::Sign::Minus || self >= bound
    }
}

impl fmt::Debug for TreeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeVertex::Upper { d, u } => write!(f, "Upper(d={d}, u={u})"),
            TreeVertex::Lower { d, u } => write!(f, "Lower(d={d}, u={u})"),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct VertexJson {
    shape: String,
    d: u32,
    u: String,
}

impl Serialize for TreeVertex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (shape, d, u) = match self {
            TreeVertex::Upper { d, u } => ("upper", *d, u),
            TreeVertex::Lower { d, u } => ("lower", *d, u),
        };
        VertexJson {
            shape: shape.to_string(),
            d,
            u: u.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TreeVertex {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = VertexJson::deserialize(de)?;
        let u: BigInt = j.u.parse().map_err(D::Error::custom)?;
        match j.shape.as_str() {
            "upper" => Ok(TreeVertex::Upper { d: j.d, u }),
            "lower" => Ok(TreeVertex::Lower { d: j.d, u }),
            other => Err(D::Error::custom(format!("unknown vertex shape {other}"))),
        }
    }
}

/// An edge of the tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeRef {
    endpoints: (TreeVertex, TreeVertex),
}

impl EdgeRef {
    pub fn new(a: TreeVertex, b: TreeVertex, p: Prime) -> Result<Self> {
        if distance(&a, &b, p) != 1 {
            return Err(Error::Dimension(format!("{a:?} and {b:?} are not adjacent")));
        }
        Ok(EdgeRef { endpoints: (a, b) })
    }

    /// `{K, diag(p, 1) K}`.
    pub fn standard() -> Self {
        EdgeRef {
            endpoints: (TreeVertex::base(), TreeVertex::upper(1, 0)),
        }
    }

    pub fn endpoints(&self) -> (&TreeVertex, &TreeVertex) {
        (&self.endpoints.0, &self.endpoints.1)
    }
}

/// The canonical representative of `gK`.
pub fn canonicalize(g: &ProjMat, p: Prime) -> TreeVertex {
    let m = g.matrix();
    // columns (x1, y1), (x2, y2); column-reduce over Z_(p) to [[p^alpha, x], [0, p^beta]]
    let (mut x1, mut y1, mut x2, mut y2) = (m.a.clone(), m.c.clone(), m.b.clone(), m.d.clone());
    if y1.valuation(p) < y2.valuation(p) {
        std::mem::swap(&mut x1, &mut x2);
        std::mem::swap(&mut y1, &mut y2);
    }
    // y2 is now a nonzero entry of minimal valuation in the bottom row
    let factor = &y1 / &y2;
    let top_left = &x1 - &factor * &x2;
    let (alpha, _) = unit_part(&top_left, p).expect("nonsingular");
    let (beta, w) = unit_part(&y2, p).expect("nonsingular");
    let x = reduce_mod_power(&(&x2 / &w), p, alpha);

    let shift = match x.valuation(p) {
        Valuation::Finite(vx) => alpha.min(beta).min(vx),
        Valuation::Infinite => alpha.min(beta),
    };
    let alpha = alpha - shift;
    let beta = beta - shift;
    let x = x * p.rat_pow(-shift);

    if beta == 0 {
        let u = x.to_integer().expect("reduced representative is integral");
        return TreeVertex::Upper { d: alpha as u32, u };
    }
    if alpha == 0 {
        return TreeVertex::Lower {
            d: beta as u32,
            u: BigInt::zero(),
        };
    }
    // x is a unit; the lattice contains (1, p^beta / x)
    let d = alpha + beta;
    let u = reduce_mod_power(&(p.rat_pow(beta) / &x), p, d)
        .to_integer()
        .expect("integral");
    TreeVertex::Lower { d: d as u32, u }
}

/// Number of edges between two vertices, from the elementary divisors of `g1^{-1} g2`.
pub fn distance(v1: &TreeVertex, v2: &TreeVertex, p: Prime) -> u32 {
    let rel = &v1.matrix(p).inverse() * &v2.matrix(p);
    let (a, b) = elementary_divisor_valuations(rel.matrix(), p);
    (b - a) as u32
}

/// Distance between `gK` and `hK` for arbitrary group elements.
pub fn matrix_distance(g: &ProjMat, h: &ProjMat, p: Prime) -> u32 {
    let rel = &g.inverse() * h;
    let (a, b) = elementary_divisor_valuations(rel.matrix(), p);
    (b - a) as u32
}

/// The `p + 1` neighbours of the base vertex, as matrices.
pub fn base_neighbor_matrices(p: Prime) -> Vec<ProjMat> {
    let mut out: Vec<ProjMat> = (0..p.get())
        .map(|u| ProjMat::from_entries(p.get(), u, 0, 1).expect("nonsingular"))
        .collect();
    out.push(ProjMat::from_entries(1, 0, 0, p.get()).expect("nonsingular"));
    out
}

pub fn neighbors(v: &TreeVertex, p: Prime) -> Vec<TreeVertex> {
    let g = v.matrix(p);
    base_neighbor_matrices(p)
        .iter()
        .map(|n| canonicalize(&(&g * n), p))
        .collect()
}

pub fn dist_to_edge(v: &TreeVertex, e: &EdgeRef, p: Prime) -> u32 {
    let (a, b) = e.endpoints();
    distance(v, a, p).min(distance(v, b, p))
}

/// `diag(p^k, 1) K`.
pub fn apartment_vertex(k: i64) -> TreeVertex {
    if k >= 0 {
        TreeVertex::upper(k as u32, 0)
    } else {
        TreeVertex::lower((-k) as u32, 0)
    }
}

/// Distance to the standard apartment `{diag(p^k, 1) K : k ∈ Z}`.
///
/// Along a geodesic the distance from a fixed vertex is `D + |k - k0|`, so the
/// scan walks from `k = 0` in the decreasing direction until it stops decreasing.
pub fn dist_to_apartment(v: &TreeVertex, p: Prime) -> u32 {
    let f = |k: i64| distance(v, &apartment_vertex(k), p);
    let at_zero = f(0);
    let (up, down) = (f(1), f(-1));
    let step = if up < at_zero {
        1
    } else if down < at_zero {
        -1
    } else {
        return at_zero;
    };
    let mut best = at_zero;
    let mut k = 0i64;
    loop {
        let next = f(k + step);
        if next >= best {
            return best;
        }
        best = next;
        k += step;
    }
}

/// Same quantity by brute force over `|k| <= bound`; used to cross-check the scan.
pub fn dist_to_apartment_brute(v: &TreeVertex, p: Prime, bound: i64) -> u32 {
    (-bound..=bound)
        .map(|k| distance(v, &apartment_vertex(k), p))
        .min()
        .expect("nonempty range")
}

/// The full list of canonical representatives at distance at most `max_depth`
/// from the base vertex, in the order `Upper` by `(d, u)` then `Lower` by `(d, u)`.
pub fn representatives_up_to(p: Prime, max_depth: u32) -> Vec<TreeVertex> {
    let pb = p.to_bigint();
    let mut out = Vec::new();
    for d in 0..=max_depth {
        let bound = p.pow(d);
        let mut u = BigInt::zero();
        while u < bound {
            out.push(TreeVertex::Upper { d, u: u.clone() });
            u += 1;
        }
    }
    for d in 1..=max_depth {
        let bound = p.pow(d);
        let mut u = BigInt::zero();
        while u < bound {
            out.push(TreeVertex::Lower { d, u: u.clone() });
            u += &pb;
        }
    }
    out
}

/// The representatives at distance exactly `depth`.
pub fn sphere_representatives(p: Prime, depth: u32) -> Vec<TreeVertex> {
    representatives_up_to(p, depth)
        .into_iter()
        .filter(|v| v.depth() == depth)
        .collect()
}

/// Whether `k` fixes the base vertex, i.e. `k ∈ K`.
pub fn fixes_base(k: &ProjMat, p: Prime) -> bool {
    k.in_maximal_compact(p)
}
