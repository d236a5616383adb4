//! The Weil representation of `Sp_n × O(V)` on Schwartz functions of `V^n`,
//! restricted to the Siegel parabolic and the orthogonal group:
//!
//! * `ω(m(a))φ(v) = χ_V(det a) |det a|^{m/2} φ(va)`
//! * `ω(n(b))φ(v) = ψ(tr b Q[v]) φ(v)`
//! * `ω(h)φ(v) = φ(h^{-1}v)`
//!
//! `V` is `Q_p^m` with a symmetric Gram matrix `S`, `(x, y) = xᵀSy`,
//! `Q(x) = (x, x)/2`, and `Q[v]` is the `n × n` matrix `((v_i, v_j)/2)`. A point
//! `v ∈ V^n` is an `m × n` matrix, flattened column by column into `Q_p^{mn}`.
//!
//! `ψ(x) = e^{2πi{x}_p}` with `{x}_p` the `p`-adic fractional part, so `ψ` is
//! trivial exactly on `Z_p`.

pub mod lattice;
pub mod matrix;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{fractional_part, Prime, ValuedRational};
use crate::quadspace::{chi_v, QuadSpaceDescriptor};

use lattice::{hermite, reduce_mod, restrict_by_functional, LatticeCoset};
use matrix::QMatrix;

/// `e^{2πit}` for `t ∈ [0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase(ValuedRational);

impl Phase {
    pub fn zero() -> Self {
        Phase(ValuedRational::zero())
    }

    /// `t mod 1`.
    pub fn new(t: ValuedRational) -> Self {
        let floor = num_integer::Integer::div_floor(t.numer(), t.denom());
        Phase(t - ValuedRational::from(floor))
    }

    pub fn value(&self) -> &ValuedRational {
        &self.0
    }

    pub fn add(&self, o: &Phase) -> Phase {
        Phase::new(&self.0 + &o.0)
    }

    /// The phase of `ψ(x)`.
    pub fn psi(x: &ValuedRational, p: Prime) -> Phase {
        Phase(fractional_part(x, p))
    }
}

/// `coeff · p^{half_power/2} · e^{2πi·phase}`, normalized so that `coeff > 0`,
/// `half_power ∈ {0, 1}` and `phase ∈ [0, 1)`; zero is `(0, 0, 0)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    coeff: ValuedRational,
    half_power: i64,
    phase: Phase,
}

impl Scalar {
    pub fn new(coeff: ValuedRational, half_power: i64, phase: Phase, p: Prime) -> Self {
        if coeff.is_zero() {
            return Scalar::zero();
        }
        let (coeff, phase) = if coeff.is_negative() {
            (-coeff, phase.add(&Phase(ValuedRational::new(1, 2))))
        } else {
            (coeff, phase)
        };
        let whole = half_power.div_euclid(2);
        Scalar {
            coeff: coeff * p.rat_pow(whole),
            half_power: half_power.rem_euclid(2),
            phase,
        }
    }

    pub fn zero() -> Self {
        Scalar {
            coeff: ValuedRational::zero(),
            half_power: 0,
            phase: Phase::zero(),
        }
    }

    pub fn one() -> Self {
        Scalar::rational(ValuedRational::one())
    }

    /// A rational with the sign carried as phase `1/2`. Only for exact rationals;
    /// the prime is irrelevant when there is no half power.
    pub fn rational(r: ValuedRational) -> Self {
        if r.is_zero() {
            return Scalar::zero();
        }
        let phase = if r.is_negative() {
            Phase(ValuedRational::new(1, 2))
        } else {
            Phase::zero()
        };
        Scalar {
            coeff: r.abs(),
            half_power: 0,
            phase,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn coeff(&self) -> &ValuedRational {
        &self.coeff
    }

    pub fn half_power(&self) -> i64 {
        self.half_power
    }

    pub fn phase(&self) -> &Phase {
        &self.phase
    }

    pub fn mul(&self, o: &Scalar, p: Prime) -> Scalar {
        Scalar::new(
            &self.coeff * &o.coeff,
            self.half_power + o.half_power,
            self.phase.add(&o.phase),
            p,
        )
    }

    pub fn with_phase_shift(&self, t: &Phase) -> Scalar {
        if self.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            coeff: self.coeff.clone(),
            half_power: self.half_power,
            phase: self.phase.add(t),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}·p^({}/2)·e(2πi·{})",
            self.coeff, self.half_power, self.phase.0
        )
    }
}

/// The quadratic space `(Q_p^m, S)` together with `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeilSpace {
    gram: QMatrix,
    n: usize,
    p: Prime,
}

impl WeilSpace {
    pub fn new(gram: QMatrix, n: usize, p: Prime) -> Result<Self> {
        p.require_odd()?;
        if !gram.is_symmetric() {
            return Err(Error::Dimension("Gram matrix must be symmetric".into()));
        }
        if gram.det()?.is_zero() {
            return Err(Error::Singular);
        }
        if n == 0 {
            return Err(Error::Dimension("n must be positive".into()));
        }
        Ok(WeilSpace { gram, n, p })
    }

    /// `xy` on `Q_p^2`.
    pub fn hyperbolic_plane(n: usize, p: Prime) -> Result<Self> {
        let (o, z) = (ValuedRational::one(), ValuedRational::zero());
        WeilSpace::new(QMatrix::from_rows(vec![vec![z.clone(), o.clone()], vec![o, z]])?, n, p)
    }

    /// `a² + bc` on traceless matrices `(a, b, c)`.
    pub fn traceless(n: usize, p: Prime) -> Result<Self> {
        let r = |xs: [i64; 3]| xs.iter().map(|&x| ValuedRational::from(x)).collect();
        WeilSpace::new(QMatrix::from_rows(vec![r([2, 0, 0]), r([0, 0, 1]), r([0, 1, 0])])?, n, p)
    }

    pub fn gram(&self) -> &QMatrix {
        &self.gram
    }

    pub fn m(&self) -> usize {
        self.gram.rows()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    /// Length `mn` of a flattened point of `V^n`.
    pub fn ambient_dim(&self) -> usize {
        self.m() * self.n
    }

    pub fn descriptor(&self) -> QuadSpaceDescriptor {
        QuadSpaceDescriptor::new(self.m() as u32, self.gram.det().expect("square"))
            .expect("nondegenerate")
    }

    /// `tr(b Q[v])` for a flattened `v`.
    pub fn trace_form(&self, b: &QMatrix, v: &[ValuedRational]) -> ValuedRational {
        let g = b.kron(&self.gram);
        let gv = g.mul_vec(v);
        let s: ValuedRational = v.iter().zip(&gv).map(|(x, y)| x * y).sum();
        s * ValuedRational::new(1, 2)
    }
}

/// A finite sum `Σ c_i · char(C_i)` over disjoint cosets `C_i` of one lattice,
/// kept in a canonical form: the lattice is the full group of periods of the
/// function (in Hermite form) and the cosets are listed by canonical center.
/// Two sums are equal as functions iff they are structurally equal.
#[derive(Clone, PartialEq, Eq)]
pub struct SchwartzSum {
    space: WeilSpace,
    grid: Option<QMatrix>,
    terms: Vec<(Vec<ValuedRational>, Scalar)>,
}

impl fmt::Debug for SchwartzSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SchwartzSum")
            .field("grid", &self.grid)
            .field("terms", &self.terms)
            .finish()
    }
}

impl SchwartzSum {
    pub fn zero(space: WeilSpace) -> Self {
        SchwartzSum {
            space,
            grid: None,
            terms: Vec::new(),
        }
    }

    /// `char(Z_p^{mn})`.
    pub fn standard(space: WeilSpace) -> Self {
        let n = space.ambient_dim();
        SchwartzSum::from_terms(space, vec![(Scalar::one(), LatticeCoset::standard(n))])
            .expect("a single term")
    }

    /// Builds the sum from terms with arbitrary lattices; overlapping supports are rejected.
    pub fn from_terms(space: WeilSpace, terms: Vec<(Scalar, LatticeCoset)>) -> Result<Self> {
        let p = space.p;
        let terms: Vec<_> = terms.into_iter().filter(|(s, _)| !s.is_zero()).collect();
        if terms.is_empty() {
            return Ok(SchwartzSum::zero(space));
        }
        let dim = space.ambient_dim();
        if terms.iter().any(|(_, c)| c.dim() != dim) {
            return Err(Error::Dimension(format!("supports must live in dimension {dim}")));
        }
        let base = terms[0].1.basis().clone();
        let mut shift = 0i64;
        for (_, c) in &terms {
            let rel = c.basis().inverse()?.try_mul(&base)?;
            let v = rel.min_valuation(p).finite().expect("nonsingular");
            shift = shift.max(-v);
        }
        let grid = hermite(&base.scale(&p.rat_pow(shift)), p)?;
        let mut cells = HashMap::new();
        for (s, c) in &terms {
            for piece in c.split(&grid, p)? {
                if cells.insert(piece.center().to_vec(), s.clone()).is_some() {
                    return Err(Error::OverlappingSupports);
                }
            }
        }
        Ok(SchwartzSum::on_grid(space, grid, cells))
    }

    /// Canonical form of a function given on the cosets of `grid`.
    fn on_grid(
        space: WeilSpace,
        grid: QMatrix,
        mut cells: HashMap<Vec<ValuedRational>, Scalar>,
    ) -> Self {
        let p = space.p;
        cells.retain(|_, s| !s.is_zero());
        if cells.is_empty() {
            return SchwartzSum::zero(space);
        }
        let mut grid = grid;
        'coarsen: loop {
            let dim = grid.rows();
            let step = grid.scale(&p.rat_pow(-1));
            let mut digits = vec![0u64; dim];
            loop {
                // next nonzero digit vector in 0..p
                let mut i = 0;
                loop {
                    if i == dim {
                        break 'coarsen;
                    }
                    digits[i] += 1;
                    if digits[i] < p.get() {
                        break;
                    }
                    digits[i] = 0;
                    i += 1;
                }
                let coords: Vec<ValuedRational> = digits.iter().map(|&x| ValuedRational::from(x)).collect();
                let w = step.mul_vec(&coords);
                let periodic = cells.iter().all(|(c, s)| {
                    let shifted: Vec<_> = c.iter().zip(&w).map(|(a, b)| a + b).collect();
                    cells.get(&reduce_mod(&shifted, &grid, p)) == Some(s)
                });
                if periodic {
                    let mut cols: Vec<Vec<ValuedRational>> = (0..dim).map(|j| grid.column(j)).collect();
                    cols.push(w);
                    let coarser = hermite(&QMatrix::from_columns(&cols).expect("rectangular"), p)
                        .expect("full rank");
                    cells = cells
                        .into_iter()
                        .map(|(c, s)| (reduce_mod(&c, &coarser, p), s))
                        .collect();
                    grid = coarser;
                    continue 'coarsen;
                }
            }
        }
        let mut terms: Vec<_> = cells.into_iter().collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        SchwartzSum {
            space,
            grid: Some(grid),
            terms,
        }
    }


    pub fn space(&self) -> &WeilSpace {
        &self.space
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The lattice of periods, `None` for the zero function.
    pub fn grid(&self) -> Option<&QMatrix> {
        self.grid.as_ref()
    }

    /// `(value, support)` pairs in canonical order.
    pub fn terms(&self) -> Vec<(Scalar, LatticeCoset)> {
        let Some(grid) = &self.grid else {
            return Vec::new();
        };
        self.terms
            .iter()
            .map(|(c, s)| {
                (
                    s.clone(),
                    LatticeCoset::new(c.clone(), grid, self.space.p).expect("canonical grid"),
                )
            })
            .collect()
    }

    pub fn evaluate(&self, v: &[ValuedRational]) -> Scalar {
        let Some(grid) = &self.grid else {
            return Scalar::zero();
        };
        let key = reduce_mod(v, grid, self.space.p);
        self.terms
            .binary_search_by(|(c, _)| c.as_slice().cmp(key.as_slice()))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| Scalar::zero())
    }

    /// Pushes every support forward along `t` and multiplies values by `factor`.
    fn transported(&self, t: &QMatrix, factor: &Scalar) -> Result<Self> {
        let Some(grid) = &self.grid else {
            return Ok(self.clone());
        };
        let p = self.space.p;
        let new_grid = hermite(&t.try_mul(grid)?, p)?;
        let cells = self
            .terms
            .iter()
            .map(|(c, s)| (reduce_mod(&t.mul_vec(c), &new_grid, p), s.mul(factor, p)))
            .collect();
        Ok(SchwartzSum::on_grid(self.space.clone(), new_grid, cells))
    }

    /// `ω(m(a))`.
    pub fn act_levi(&self, a: &QMatrix) -> Result<Self> {
        let n = self.space.n;
        if a.rows() != n || !a.is_square() {
            return Err(Error::Dimension(format!("Levi parameter must be {n}x{n}")));
        }
        let p = self.space.p;
        let det = a.det()?;
        if det.is_zero() {
            return Err(Error::Singular);
        }
        let t = a.inverse()?.transpose().kron(&QMatrix::identity(self.space.m()));
        let sign = chi_v(&det, &self.space.descriptor(), p)?;
        let v = det.valuation(p).finite().expect("nonzero determinant");
        let factor = Scalar::new(
            ValuedRational::from(i64::from(sign)),
            -v * self.space.m() as i64,
            Phase::zero(),
            p,
        );
        self.transported(&t, &factor)
    }

    /// `ω(h)` for an isometry `h` of `S`.
    pub fn act_orth(&self, h: &QMatrix) -> Result<Self> {
        let m = self.space.m();
        if h.rows() != m || !h.is_square() {
            return Err(Error::Dimension(format!("orthogonal element must be {m}x{m}")));
        }
        if h.det()?.is_zero() {
            return Err(Error::Singular);
        }
        if h.transpose().try_mul(&self.space.gram)?.try_mul(h)? != self.space.gram {
            return Err(Error::NotIsometry);
        }
        let t = QMatrix::identity(self.space.n).kron(h);
        self.transported(&t, &Scalar::one())
    }

    /// `ω(n(b))`.
    pub fn act_unipotent(&self, b: &QMatrix) -> Result<Self> {
        let n = self.space.n;
        if b.rows() != n || !b.is_symmetric() {
            return Err(Error::Dimension(format!("unipotent parameter must be symmetric {n}x{n}")));
        }
        let Some(grid) = &self.grid else {
            return Ok(self.clone());
        };
        let p = self.space.p;
        let form = b.kron(&self.space.gram);
        // On c + M the phase q_b(c + w) - q_b(c) = B_b(c, w) + B_b(r, w) + q_b(w)
        // is integral for every r ∈ M exactly when w lies in M, pairs integrally
        // with M and with c.
        let mut fine = grid.clone();
        for j in 0..grid.cols() {
            fine = restrict_by_functional(&fine, &form.mul_vec(&grid.column(j)), p)?;
        }
        for (c, _) in &self.terms {
            fine = restrict_by_functional(&fine, &form.mul_vec(c), p)?;
        }
        let mut cells = HashMap::new();
        for (c, s) in &self.terms {
            let coset = LatticeCoset::new(c.clone(), grid, p)?;
            for piece in coset.split(&fine, p)? {
                cells.insert(piece.center().to_vec(), s.clone());
            }
        }
        let grid = fine;
        let cells = cells
            .into_iter()
            .map(|(c, s)| {
                let t = Phase::psi(&self.space.trace_form(b, &c), p);
                (c, s.with_phase_shift(&t))
            })
            .collect();
        Ok(SchwartzSum::on_grid(self.space.clone(), grid, cells))
    }

    pub fn apply(&self, op: &WeilOp) -> Result<Self> {
        match op {
            WeilOp::Levi(a) => self.act_levi(a),
            WeilOp::Unipotent(b) => self.act_unipotent(b),
            WeilOp::Orth(h) => self.act_orth(h),
        }
    }

    /// Applies the letters of `word` in order, the first letter first.
    pub fn apply_word(&self, word: &[WeilOp]) -> Result<Self> {
        word.iter().try_fold(self.clone(), |f, op| f.apply(op))
    }
}

/// One letter of an operator word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeilOp {
    Levi(QMatrix),
    Unipotent(QMatrix),
    Orth(QMatrix),
}

type StrMatrix = Vec<Vec<String>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeilOpJson {
    Levi(StrMatrix),
    Unipotent(StrMatrix),
    Orth(StrMatrix),
}

impl WeilOpJson {
    pub fn to_op(&self) -> Result<WeilOp> {
        Ok(match self {
            WeilOpJson::Levi(m) => WeilOp::Levi(QMatrix::from_strings(m)?),
            WeilOpJson::Unipotent(m) => WeilOp::Unipotent(QMatrix::from_strings(m)?),
            WeilOpJson::Orth(m) => WeilOp::Orth(QMatrix::from_strings(m)?),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchwartzTermJson {
    pub coeff: String,
    pub half_power: i64,
    pub phase: String,
    pub center: Vec<String>,
    pub basis: StrMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchwartzSumJson {
    pub p: u64,
    pub gram: StrMatrix,
    pub n: usize,
    pub terms: Vec<SchwartzTermJson>,
}

/// Input of the `weil` command: a function and a word applied first letter first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeilRequest {
    pub function: SchwartzSumJson,
    #[serde(default)]
    pub word: Vec<WeilOpJson>,
}

impl SchwartzSum {
    pub fn to_json(&self) -> SchwartzSumJson {
        SchwartzSumJson {
            p: self.space.p.get(),
            gram: self.space.gram.to_strings(),
            n: self.space.n,
            terms: self
                .terms()
                .iter()
                .map(|(s, c)| SchwartzTermJson {
                    coeff: s.coeff.to_fraction_string(),
                    half_power: s.half_power,
                    phase: s.phase.0.to_fraction_string(),
                    center: c.center().iter().map(ValuedRational::to_fraction_string).collect(),
                    basis: c.basis().to_strings(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &SchwartzSumJson) -> Result<Self> {
        let p = Prime::new(j.p)?;
        let space = WeilSpace::new(QMatrix::from_strings(&j.gram)?, j.n, p)?;
        let terms = j
            .terms
            .iter()
            .map(|t| {
                let s = Scalar::new(t.coeff.parse()?, t.half_power, Phase::new(t.phase.parse()?), p);
                let center = t.center.iter().map(|x| x.parse()).collect::<Result<Vec<_>>>()?;
                let c = LatticeCoset::new(center, &QMatrix::from_strings(&t.basis)?, p)?;
                Ok((s, c))
            })
            .collect::<Result<Vec<_>>>()?;
        SchwartzSum::from_terms(space, terms)
    }
}

impl WeilRequest {
    pub fn run(&self) -> Result<SchwartzSum> {
        let f = SchwartzSum::from_json(&self.function)?;
        let word = self.word.iter().map(WeilOpJson::to_op).collect::<Result<Vec<_>>>()?;
        f.apply_word(&word)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn q(n: i64, d: i64) -> ValuedRational {
        ValuedRational::new(n, d)
    }

    fn scalar_matrix(x: ValuedRational) -> QMatrix {
        QMatrix::scalar(1, &x)
    }

    #[test]
    fn scalar_normalization() {
        let p = pr(3);
        let s = Scalar::new(q(-2, 1), -3, Phase::zero(), p);
        assert_eq!(s.coeff(), &q(2, 9));
        assert_eq!(s.half_power(), 1);
        assert_eq!(s.phase().value(), &q(1, 2));
        let r = Scalar::new(q(1, 1), 1, Phase::zero(), p);
        assert_eq!(r.mul(&r, p), Scalar::rational(q(3, 1)));
        assert_eq!(Phase::new(q(-1, 3)).value(), &q(2, 3));
    }

    #[test]
    fn levi_examples() {
        let p = pr(3);
        let space = WeilSpace::hyperbolic_plane(1, p).unwrap();
        let f = SchwartzSum::standard(space.clone());
        assert_eq!(f.act_levi(&scalar_matrix(q(1, 1))).unwrap(), f);
        let g = f.act_levi(&scalar_matrix(q(3, 1))).unwrap();
        let want = SchwartzSum::from_terms(
            space,
            vec![(Scalar::rational(q(1, 3)), LatticeCoset::scaled_standard(vec![q(0, 1); 2], -1, p))],
        )
        .unwrap();
        assert_eq!(g, want);

        let t = SchwartzSum::standard(WeilSpace::traceless(1, p).unwrap());
        let g = t.act_levi(&scalar_matrix(q(3, 1))).unwrap();
        let (s, _) = &g.terms()[0];
        assert_eq!(s, &Scalar::new(q(1, 1), -3, Phase::zero(), p).mul(
            &Scalar::rational(q(i64::from(chi_v(&q(3, 1), &QuadSpaceDescriptor::traceless(), p).unwrap()), 1)),
            p,
        ));
        assert_eq!(s.coeff(), &q(1, 9));
        assert_eq!(s.half_power(), 1);
    }

    #[test]
    fn unipotent_examples() {
        let p = pr(3);
        let space = WeilSpace::hyperbolic_plane(1, p).unwrap();
        let f = SchwartzSum::standard(space.clone());
        assert_eq!(f.act_unipotent(&scalar_matrix(q(5, 1))).unwrap(), f);
        let g = f.act_unipotent(&scalar_matrix(q(1, 3))).unwrap();
        let terms = g.terms();
        assert_eq!(terms.len(), 9);
        let piece = terms
            .iter()
            .find(|(_, c)| c.center() == [q(1, 1), q(1, 1)])
            .unwrap();
        assert_eq!(piece.0.phase().value(), &q(1, 3));
        assert_eq!(g.evaluate(&[q(4, 1), q(1, 1)]).phase().value(), &q(1, 3));
        assert_eq!(g.evaluate(&[q(1, 3), q(0, 1)]), Scalar::zero());
        let back = g.act_unipotent(&scalar_matrix(q(-1, 3))).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn orth_examples() {
        let p = pr(5);
        let space = WeilSpace::hyperbolic_plane(1, p).unwrap();
        let f = SchwartzSum::standard(space.clone());
        let rows = |r: [[i64; 2]; 2]| {
            QMatrix::from_rows(r.iter().map(|x| x.iter().map(|&y| q(y, 1)).collect()).collect()).unwrap()
        };
        assert_eq!(f.act_orth(&QMatrix::identity(2)).unwrap(), f);
        let u = QMatrix::from_rows(vec![vec![q(2, 1), q(0, 1)], vec![q(0, 1), q(1, 2)]]).unwrap();
        assert_eq!(f.act_orth(&u).unwrap(), f);
        let e1 = SchwartzSum::from_terms(
            space.clone(),
            vec![(Scalar::one(), LatticeCoset::scaled_standard(vec![q(1, 1), q(0, 1)], 1, p))],
        )
        .unwrap();
        let e2 = SchwartzSum::from_terms(
            space,
            vec![(Scalar::one(), LatticeCoset::scaled_standard(vec![q(0, 1), q(1, 1)], 1, p))],
        )
        .unwrap();
        assert_eq!(e1.act_orth(&rows([[0, 1], [1, 0]])).unwrap(), e2);
        assert_eq!(e1.act_orth(&rows([[1, 1], [0, 1]])), Err(Error::NotIsometry));
    }

    #[test]
    fn canonical_form_coarsens_split_functions() {
        let p = pr(3);
        let space = WeilSpace::hyperbolic_plane(1, p).unwrap();
        let parts: Vec<_> = LatticeCoset::standard(2)
            .split(&QMatrix::scalar(2, &q(3, 1)), p)
            .unwrap()
            .into_iter()
            .map(|c| (Scalar::one(), c))
            .collect();
        assert_eq!(SchwartzSum::from_terms(space.clone(), parts).unwrap(), SchwartzSum::standard(space.clone()));
        let overlap = vec![
            (Scalar::one(), LatticeCoset::standard(2)),
            (Scalar::one(), LatticeCoset::scaled_standard(vec![q(0, 1); 2], 1, p)),
        ];
        assert_eq!(SchwartzSum::from_terms(space, overlap), Err(Error::OverlappingSupports));
    }

    #[test]
    fn json_round_trip_and_word() {
        let p = pr(3);
        let f = SchwartzSum::standard(WeilSpace::hyperbolic_plane(1, p).unwrap());
        let req = WeilRequest {
            function: f.to_json(),
            word: vec![
                WeilOpJson::Unipotent(vec![vec!["1/3".into()]]),
                WeilOpJson::Levi(vec![vec!["3".into()]]),
            ],
        };
        let text = serde_json::to_string(&req).unwrap();
        let back: WeilRequest = serde_json::from_str(&text).unwrap();
        let out = back.run().unwrap();
        let want = f
            .act_unipotent(&scalar_matrix(q(1, 3)))
            .unwrap()
            .act_levi(&scalar_matrix(q(3, 1)))
            .unwrap();
        assert_eq!(out, want);
        assert_eq!(SchwartzSum::from_json(&out.to_json()).unwrap(), out);
    }
}
