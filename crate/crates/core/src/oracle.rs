//! Brute-force checks that do not rely on the closed-form counts: breadth-first
//! search of the tree, orbit closures under explicit torus elements, and a
//! discretized torus integral.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::double_coset::MeasureSpec;
use crate::error::{Error, Result};
use crate::mat2::{Mat2, ProjMat};
use crate::matching::{evaluate_xi, FormalCosetSum};
use crate::padic::{Prime, ValuedRational};
use crate::quadspace::{CaseClass, CaseKind};
use crate::tree::{canonicalize, fixes_base, neighbors, TreeVertex};

pub const MAX_RADIUS: u32 = 6;
pub const MAX_ORBIT: usize = 100_000;

/// Every vertex within `radius` of `K` with its distance, found by walking
/// neighbours, sorted by `(distance, vertex)`.
pub fn bfs_ball(p: Prime, radius: u32) -> Result<Vec<(TreeVertex, u32)>> {
    if radius > MAX_RADIUS {
        return Err(Error::RadiusTooLarge(radius));
    }
    let mut dist = BTreeMap::new();
    dist.insert(TreeVertex::base(), 0u32);
    let mut queue = VecDeque::from([TreeVertex::base()]);
    while let Some(v) = queue.pop_front() {
        let dv = dist[&v];
        if dv == radius {
            continue;
        }
        for w in neighbors(&v, p) {
            if !dist.contains_key(&w) {
                dist.insert(w.clone(), dv + 1);
                queue.push_back(w);
            }
        }
    }
    let mut out: Vec<_> = dist.into_iter().collect();
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    Ok(out)
}

/// Number of vertices at each distance `0..=radius`.
pub fn sphere_counts(p: Prime, radius: u32) -> Result<Vec<usize>> {
    let mut counts = vec![0; radius as usize + 1];
    for (_, d) in bfs_ball(p, radius)? {
        counts[d as usize] += 1;
    }
    Ok(counts)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub start: TreeVertex,
    pub orbit: BTreeSet<TreeVertex>,
    pub generator_count: usize,
    pub closure_rounds: usize,
}

/// The closure of `{start}` under the generators, keeping only vertices within
/// `ball_radius` of `K`. Images leaving the ball are dropped, so the result is
/// the generator-closed set as seen from inside the ball.
pub fn orbit_closure(
    gens: &[ProjMat],
    start: &TreeVertex,
    ball_radius: u32,
    p: Prime,
) -> Result<OrbitReport> {
    let mut orbit = BTreeSet::new();
    if start.depth() <= ball_radius {
        orbit.insert(start.clone());
    }
    let mut frontier: Vec<TreeVertex> = orbit.iter().cloned().collect();
    let mut rounds = 0;
    while !frontier.is_empty() {
        rounds += 1;
        let mut next = Vec::new();
        for v in &frontier {
            let m = v.matrix(p);
            for g in gens {
                let w = canonicalize(&(g * &m), p);
                if w.depth() <= ball_radius && orbit.insert(w.clone()) {
                    if orbit.len() > MAX_ORBIT {
                        return Err(Error::GuardExceeded(orbit.len()));
                    }
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    Ok(OrbitReport {
        start: start.clone(),
        orbit,
        generator_count: gens.len(),
        closure_rounds: rounds,
    })
}

/// Size of the orbit of `target`, i.e. the index of its stabilizer in the
/// generated group. Fails if the orbit reaches the edge of the guard ball,
/// where it could not be told apart from an infinite one.
pub fn stabilizer_index(gens: &[ProjMat], target: &TreeVertex, p: Prime) -> Result<usize> {
    if target.depth() >= MAX_RADIUS {
        return Err(Error::RadiusTooLarge(target.depth()));
    }
    let report = orbit_closure(gens, target, MAX_RADIUS, p)?;
    if report.orbit.iter().any(|v| v.depth() == MAX_RADIUS) {
        return Err(Error::GuardExceeded(report.orbit.len()));
    }
    Ok(report.orbit.len())
}

/// The generators lying in `K`.
pub fn compact_part(gens: &[ProjMat], p: Prime) -> Vec<ProjMat> {
    gens.iter().filter(|g| fixes_base(g, p)).cloned().collect()
}

/// One representative per cell of a partition of the torus of `c` into
/// congruence cells of level `p^n`, with the Haar measure of each cell.
///
/// Compact tori are enumerated in full: `p^n + p^{n-1}` cells (inert) or
/// `2p^n` (ramified). The split torus `{diag(t, 1)}` is enumerated on the
/// slices `|v(t)| <= max_shift`.
pub fn torus_cells(
    c: &CaseClass,
    p: Prime,
    n: u32,
    max_shift: u32,
    measure: &MeasureSpec,
) -> Vec<(ProjMat, ValuedRational)> {
    let eps = c.unit().clone();
    let pn = p.pow(n);
    let pr = ValuedRational::from(p.get());
    let mut cells = Vec::new();
    let mut b = num_bigint::BigInt::from(0);
    match c.kind() {
        CaseKind::Inert => {
            while b < pn {
                let rb = ValuedRational::from(b.clone());
                cells.push(Mat2::new(1, &rb * &eps, rb, 1));
                if &b % p.to_bigint() == num_bigint::BigInt::from(0) {
                    let rb = ValuedRational::from(b.clone());
                    cells.push(Mat2::new(rb.clone(), eps.clone(), 1, rb));
                }
                b += 1;
            }
        }
        CaseKind::Ramified => {
            let pi = Mat2::new(0, &eps * &pr, 1, 0);
            while b < pn {
                let rb = ValuedRational::from(b.clone());
                let unit = Mat2::new(1, &rb * &eps * &pr, rb, 1);
                cells.push(&pi * &unit);
                cells.push(unit);
                b += 1;
            }
        }
        CaseKind::Split => {
            let shift = max_shift as i64;
            for k in -shift..=shift {
                let mut u = num_bigint::BigInt::from(1);
                while u < pn {
                    if &u % p.to_bigint() != num_bigint::BigInt::from(0) {
                        cells.push(Mat2::diag(p.rat_pow(k) * ValuedRational::from(u.clone()), 1));
                    }
                    u += 1;
                }
            }
        }
    }
    let count = match c.kind() {
        CaseKind::Split => ValuedRational::from((p.to_bigint() - 1) * p.pow(n.saturating_sub(1))),
        _ => ValuedRational::from(cells.len() as u64),
    };
    let weight = measure.torus_normalizer(c.kind()) / &count;
    cells
        .into_iter()
        .map(|m| (ProjMat::new(m).expect("torus elements are nonsingular"), weight.clone()))
        .collect()
}

/// `∫_{H_x} ξ(h₀h) dh₀` by summing `ξ` over congruence cells.
///
/// `ξ(h₀ k h) = ξ(h₀ h)` when `k ≡ 1 mod p^n` and `n >= dist(hK, K)`, so the
/// sum is exact once `n` reaches the depth of `h`. For the split torus every
/// slice `v(t) = k` that can meet the support of `ξ` is included.
pub fn torus_integral(
    xi: &FormalCosetSum,
    h: &ProjMat,
    measure: &MeasureSpec,
    n: u32,
) -> Result<ValuedRational> {
    let p = xi.prime();
    let depth = canonicalize(h, p).depth();
    if n < depth.max(1) {
        return Err(Error::Dimension(format!(
            "congruence level {n} is below the depth {depth} of h"
        )));
    }
    let support_depth = xi
        .terms()
        .iter()
        .map(|(_, rep)| canonicalize(rep.matrix(), p).depth())
        .max()
        .unwrap_or(0);
    let cells = torus_cells(xi.case(), p, n, depth + support_depth + 1, measure);
    Ok(cells
        .iter()
        .map(|(t, w)| evaluate_xi(xi, &(t * h)) * w)
        .sum())
}
