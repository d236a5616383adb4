//! Markdown table of the closed-form coefficients beside the general recipe.

use theta_local::error::Result;
use theta_local::matching::{build_xi_closed_form, build_xi_general, FormalCosetSum};
use theta_local::padic::{Prime, ValuedRational};
use theta_local::quadspace::{standard_rep, CaseClass, CaseKind};

fn range_condition(kind: CaseKind, d: u32) -> &'static str {
    match (kind, d) {
        (CaseKind::Ramified, _) => "1 ≤ d ≤ (α+1)/2",
        (_, 0) => "d = 0",
        _ => "1 ≤ d ≤ α/2",
    }
}

fn representative(xi: &FormalCosetSum, d: u32) -> Option<String> {
    xi.terms().iter().find(|(_, r)| r.d() == d).map(|(_, r)| {
        let m = r.matrix().matrix().primitive_integral();
        format!("[[{}, {}], [{}, {}]]", m.a, m.b, m.c, m.d)
    })
}

fn show(r: &ValuedRational) -> String {
    if r.is_zero() {
        "0".to_string()
    } else {
        r.to_string()
    }
}

pub fn render(p: Prime, cases: &[CaseKind], max_alpha: u32) -> Result<String> {
    let mut out = String::new();
    out.push_str(&format!("Matching coefficients at p = {}\n\n", p.get()));
    out.push_str("| case | α range condition | d | representative | coefficient (closed form) | coefficient (general recipe) |\n");
    out.push_str("|------|-------------------|---|----------------|---------------------------|------------------------------|\n");
    for &kind in cases {
        for alpha in (0..=max_alpha).filter(|&a| kind.admits_alpha(a)) {
            let c = CaseClass::with_default_unit(kind, alpha, p)?;
            let closed = build_xi_closed_form(&c, p);
            let general = build_xi_general(&standard_rep(&c, p), p)?.xi;
            let mut ds: Vec<u32> = closed
                .terms()
                .iter()
                .chain(general.terms())
                .map(|(_, r)| r.d())
                .collect();
            ds.sort_unstable();
            ds.dedup();
            for d in ds {
                let rep = representative(&closed, d)
                    .or_else(|| representative(&general, d))
                    .expect("d comes from one of the sums");
                out.push_str(&format!(
                    "| {kind} | α = {alpha}, {} | {d} | {rep} | {} | {} |\n",
                    range_condition(kind, d),
                    show(&closed.coefficient(d)),
                    show(&general.coefficient(d)),
                ));
            }
        }
    }
    Ok(out)
}
