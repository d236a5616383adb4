//! Matching functions `ξ` for `φ = char(L)`.
//!
//! `ξ` is a finite combination of characteristic functions of cosets `γK`
//! and must satisfy `φ(h^{-1}x) = ∫_{H_x} ξ(h₀h) dh₀` for every `h`. The
//! general recipe sums `φ(γ^{-1}x) / vol(H_x ∩ γKγ^{-1})` over double coset
//! representatives `γ`; the closed forms are the three explicit formulas for
//! the inert, ramified and split normal forms.

use serde::{Deserialize, Serialize};

use crate::double_coset::{
    classify_double_coset, first_index, stabilizer_volume_with, CosetRep, MeasureSpec,
};
use crate::error::{Error, Result};
use crate::mat2::{Mat2, ProjMat};
use crate::padic::{Prime, ValuedRational};
use crate::quadspace::{
    act, classify, in_lattice, standard_rep, CaseClass, CaseKind, Classification, TracelessMat,
};
use crate::tree::canonicalize;

/// `Σ coeff · C_{γK}` with distinct representatives, sorted by `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalCosetSum {
    case: CaseClass,
    p: Prime,
    terms: Vec<(ValuedRational, CosetRep)>,
}

impl FormalCosetSum {
    /// Drops zero coefficients and sorts by `d`; rejects two terms on the same coset.
    pub fn new(
        case: CaseClass,
        p: Prime,
        terms: impl IntoIterator<Item = (ValuedRational, CosetRep)>,
    ) -> Result<Self> {
        let mut terms: Vec<_> = terms.into_iter().filter(|(c, _)| !c.is_zero()).collect();
        terms.sort_by_key(|(_, rep)| rep.d());
        for (_, rep) in &terms {
            if rep.kind() != case.kind() {
                return Err(Error::InconsistentCase(format!(
                    "{} term in a {} sum",
                    rep.kind(),
                    case.kind()
                )));
            }
        }
        for w in terms.windows(2) {
            if w[0].1.d() == w[1].1.d()
                || canonicalize(w[0].1.matrix(), p) == canonicalize(w[1].1.matrix(), p)
            {
                return Err(Error::InconsistentCase(format!(
                    "duplicate representative at d = {}",
                    w[1].1.d()
                )));
            }
        }
        Ok(FormalCosetSum { case, p, terms })
    }

    pub fn case(&self) -> &CaseClass {
        &self.case
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn terms(&self) -> &[(ValuedRational, CosetRep)] {
        &self.terms
    }

    /// Coefficient on the representative with index `d`, zero if absent.
    pub fn coefficient(&self, d: u32) -> ValuedRational {
        self.terms
            .iter()
            .find(|(_, rep)| rep.d() == d)
            .map(|(c, _)| c.clone())
            .unwrap_or_else(ValuedRational::zero)
    }

    /// Replaces every representative `γ` by `t γ`.
    pub fn with_translated_reps(&self, translations: &[ProjMat]) -> Self {
        let terms = self
            .terms
            .iter()
            .zip(translations.iter().cycle())
            .map(|((c, rep), t)| (c.clone(), rep.translated(t)))
            .collect();
        FormalCosetSum {
            case: self.case.clone(),
            p: self.p,
            terms,
        }
    }
}

/// The triple `(φ, ξ; x)` with `φ` the characteristic function of `L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingDatum {
    pub x: TracelessMat,
    pub case: CaseClass,
    pub xi: FormalCosetSum,
    pub measure: MeasureSpec,
}

/// Whether `x` commutes with the normal form of its case, so that its torus is
/// the standard one and the representatives `γ_d`, `δ_d` apply verbatim.
pub fn in_standard_position(x: &TracelessMat, c: &CaseClass, p: Prime) -> bool {
    let xm = x.to_matrix();
    let s = standard_rep(c, p).to_matrix();
    &xm * &s == &s * &xm
}

/// No `γ_d` with `d` past this bound has `γ_d^{-1} x ∈ L`: the off-diagonal
/// entries of `γ_d^{-1} x γ_d` pick up `p^{∓d}` and `x` has entries of valuation
/// about `α/2`.
fn scan_limit(c: &CaseClass) -> u32 {
    c.alpha() + 2
}

pub fn build_xi_general(x: &TracelessMat, p: Prime) -> Result<MatchingDatum> {
    build_xi_general_with(x, p, &MeasureSpec::default())
}

/// The recipe: for each `γ ∈ 𝒞` with `φ(γ^{-1}x) ≠ 0`, coefficient
/// `φ(γ^{-1}x) / vol(H_x ∩ γKγ^{-1})` on `C_{γK}`.
pub fn build_xi_general_with(
    x: &TracelessMat,
    p: Prime,
    measure: &MeasureSpec,
) -> Result<MatchingDatum> {
    let case = match classify(x, p)? {
        Classification::Case(c) => c,
        Classification::NotApplicable => return Err(Error::NotApplicable),
    };
    if !in_standard_position(x, &case, p) {
        return Err(Error::NotStandardPosition(format!("{x:?}")));
    }
    let mut terms = Vec::new();
    for d in first_index(case.kind())..=scan_limit(&case) {
        let rep = CosetRep::new(case.kind(), d, p)?;
        let phi = in_lattice(&act(&rep.matrix().inverse(), x), p);
        if phi {
            let vol = stabilizer_volume_with(measure, &case, &rep, p)?;
            terms.push((vol.recip()?, rep));
        }
    }
    let xi = FormalCosetSum::new(case.clone(), p, terms)?;
    Ok(MatchingDatum {
        x: x.clone(),
        case,
        xi,
        measure: measure.clone(),
    })
}

pub fn build_xi_closed_form(c: &CaseClass, p: Prime) -> FormalCosetSum {
    build_xi_closed_form_with(c, p, &MeasureSpec::default())
}

/// The explicit formulas:
///
/// * inert: `(1/vol H_x)(C_K + Σ_{1≤d≤α/2} (p^d + p^{d-1}) C_{γ_d K})`
/// * ramified: `(1/vol H_x) Σ_{1≤d≤(α+1)/2} 2p^{d-1} C_{γ_d K}`
/// * split: `(1/vol(H_x ∩ K))(C_K + Σ_{1≤d≤α/2} C_{δ_d K})`
///
/// The split formula disagrees with the recipe for `d ≥ 1`; see
/// [`crate::double_coset::stabilizer_index_formula`].
pub fn build_xi_closed_form_with(c: &CaseClass, p: Prime, measure: &MeasureSpec) -> FormalCosetSum {
    let prefactor = measure
        .torus_normalizer(c.kind())
        .recip()
        .expect("volumes are nonzero");
    let alpha = c.alpha();
    let pp = |k: u32| ValuedRational::from(p.pow(k));
    let terms: Vec<(ValuedRational, u32)> = match c.kind() {
        CaseKind::Inert => std::iter::once((ValuedRational::one(), 0))
            .chain((1..=alpha / 2).map(|d| (pp(d) + pp(d - 1), d)))
            .collect(),
        CaseKind::Ramified => (1..=alpha.div_ceil(2))
            .map(|d| (ValuedRational::from(2) * pp(d - 1), d))
            .collect(),
        CaseKind::Split => (0..=alpha / 2).map(|d| (ValuedRational::one(), d)).collect(),
    };
    FormalCosetSum::new(
        c.clone(),
        p,
        terms.into_iter().map(|(coeff, d)| {
            (
                &coeff * &prefactor,
                CosetRep::new(c.kind(), d, p).expect("valid index"),
            )
        }),
    )
    .expect("closed forms have distinct representatives")
}

/// `ξ(h)`: the coefficient of the term whose coset `γK` contains `h`, or zero.
pub fn evaluate_xi(xi: &FormalCosetSum, h: &ProjMat) -> ValuedRational {
    let p = xi.prime();
    let v = canonicalize(h, p);
    xi.terms()
        .iter()
        .filter(|(_, rep)| canonicalize(rep.matrix(), p) == v)
        .map(|(c, _)| c.clone())
        .sum()
}

/// `(φ(h^{-1}x), ∫_{H_x} ξ(h₀h) dh₀)`.
///
/// The integral of `C_{γK}(h₀h)` over `H_x` is `vol(H_x ∩ γKγ^{-1})` when
/// `h ∈ H_x γ K` and zero otherwise, so only the term in the double coset of
/// `h` contributes.
pub fn matching_sides(md: &MatchingDatum, h: &ProjMat, p: Prime) -> Result<(ValuedRational, ValuedRational)> {
    let lhs = if in_lattice(&act(&h.inverse(), &md.x), p) {
        ValuedRational::one()
    } else {
        ValuedRational::zero()
    };
    let (_, d) = classify_double_coset(h, &md.case, p);
    let mut rhs = ValuedRational::zero();
    for (coeff, rep) in md.xi.terms() {
        if rep.d() == d {
            rhs += &(coeff * stabilizer_volume_with(&md.measure, &md.case, rep, p)?);
        }
    }
    Ok((lhs, rhs))
}

pub fn verify_matching_at(md: &MatchingDatum, h: &ProjMat, p: Prime) -> bool {
    match matching_sides(md, h, p) {
        Ok((lhs, rhs)) => lhs == rhs,
        Err(_) => false,
    }
}

/// A rational serialized as a bare JSON integer when integral, else `"num/den"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonVolume {
    Int(i64),
    Frac(String),
}

impl JsonVolume {
    fn from_rational(r: &ValuedRational) -> Self {
        r.to_integer()
            .and_then(|n| i64::try_from(n).ok())
            .map(JsonVolume::Int)
            .unwrap_or_else(|| JsonVolume::Frac(r.to_fraction_string()))
    }

    fn to_rational(&self) -> Result<ValuedRational> {
        match self {
            JsonVolume::Int(n) => Ok(ValuedRational::from(*n)),
            JsonVolume::Frac(s) => s.parse(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizationJson {
    #[serde(rename = "vol_K")]
    pub vol_k: JsonVolume,
    /// `vol H_x` for the compact tori, `vol(H_x ∩ K)` for split.
    #[serde(rename = "vol_Hx")]
    pub vol_hx: JsonVolume,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub d: u32,
    pub rep: [[String; 2]; 2],
    pub coeff: String,
}

/// Wire format of a [`MatchingDatum`]; field order is part of the format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchingDatumJson {
    pub p: u64,
    pub case: CaseKind,
    pub alpha: u32,
    pub epsilon: String,
    pub normalization: NormalizationJson,
    pub terms: Vec<TermJson>,
}

impl MatchingDatum {
    pub fn to_json(&self) -> MatchingDatumJson {
        let kind = self.case.kind();
        MatchingDatumJson {
            p: self.xi.prime().get(),
            case: kind,
            alpha: self.case.alpha(),
            epsilon: self.case.unit().to_fraction_string(),
            normalization: NormalizationJson {
                vol_k: JsonVolume::from_rational(&self.measure.vol_k),
                vol_hx: JsonVolume::from_rational(self.measure.torus_normalizer(kind)),
            },
            terms: self
                .xi
                .terms()
                .iter()
                .map(|(c, rep)| TermJson {
                    d: rep.d(),
                    rep: rep.matrix().matrix().primitive_integral().to_strings(),
                    coeff: c.to_fraction_string(),
                })
                .collect(),
        }
    }

    /// Rebuilds the datum for the normal form of the serialized case.
    pub fn from_json(j: &MatchingDatumJson) -> Result<Self> {
        let p = Prime::new(j.p)?;
        let case = CaseClass::new(j.case, j.alpha, j.epsilon.parse()?, p)?;
        let vol_k = j.normalization.vol_k.to_rational()?;
        let torus = j.normalization.vol_hx.to_rational()?;
        if vol_k.is_zero() || torus.is_zero() {
            return Err(Error::ZeroInput);
        }
        let measure = MeasureSpec {
            vol_k,
            vol_hx: torus.clone(),
            vol_hx_cap_k: torus,
        };
        let terms = j
            .terms
            .iter()
            .map(|t| {
                let m = ProjMat::new(Mat2::from_strings(&t.rep)?)?;
                Ok((t.coeff.parse()?, CosetRep::with_matrix(j.case, t.d, m)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MatchingDatum {
            x: standard_rep(&case, p),
            xi: FormalCosetSum::new(case.clone(), p, terms)?,
            case,
            measure,
        })
    }
}
