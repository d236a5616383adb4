//! Exhaustive verification of the matching identity over a configured grid.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use theta_local::error::{Error, Result};
use theta_local::matching::{build_xi_general, matching_sides, MatchingDatum};
use theta_local::padic::Prime;
use theta_local::quadspace::{standard_rep, CaseClass, CaseKind};
use theta_local::tree::representatives_up_to;

pub const MAX_SWEEP_DISTANCE: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Emit {
    #[default]
    Markdown,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub primes: Vec<u64>,
    pub alphas: Vec<u32>,
    pub cases: Vec<CaseKind>,
    pub max_vertex_distance: u32,
    #[serde(default)]
    pub emit: Emit,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        for &p in &self.primes {
            Prime::new(p)?;
        }
        if self.max_vertex_distance > MAX_SWEEP_DISTANCE {
            return Err(Error::RadiusTooLarge(self.max_vertex_distance));
        }
        Ok(())
    }

    /// The matching data of the sweep, ordered by prime, case, then alpha.
    /// Alphas of the wrong parity for a case are skipped.
    pub fn data(&self) -> Result<Vec<MatchingDatum>> {
        self.validate()?;
        let mut primes = self.primes.clone();
        primes.sort_unstable();
        primes.dedup();
        let mut cases = self.cases.clone();
        cases.sort();
        cases.dedup();
        let mut alphas = self.alphas.clone();
        alphas.sort_unstable();
        alphas.dedup();
        let mut out = Vec::new();
        for &p in &primes {
            let p = Prime::new(p)?;
            for &kind in &cases {
                for &alpha in alphas.iter().filter(|&&a| kind.admits_alpha(a)) {
                    let c = CaseClass::with_default_unit(kind, alpha, p)?;
                    out.push(build_xi_general(&standard_rep(&c, p), p)?);
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceResult {
    pub p: u64,
    pub case: CaseKind,
    pub alpha: u32,
    pub epsilon: String,
    pub checks: usize,
    pub failures: usize,
    /// Canonical vertices where the two sides differ.
    pub failing_vertices: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub max_vertex_distance: u32,
    pub instances: Vec<InstanceResult>,
    pub checks: usize,
    pub failures: usize,
}

pub fn verify_datum(md: &MatchingDatum, max_distance: u32) -> Result<InstanceResult> {
    let p = md.xi.prime();
    let vertices = representatives_up_to(p, max_distance);
    let outcomes: Vec<Option<String>> = vertices
        .par_iter()
        .map(|v| match matching_sides(md, &v.matrix(p), p) {
            Ok((lhs, rhs)) if lhs == rhs => Ok(None),
            Ok(_) => Ok(Some(format!("{v:?}"))),
            Err(e) => Err(e),
        })
        .collect::<Result<_>>()?;
    let failing: Vec<String> = outcomes.into_iter().flatten().collect();
    Ok(InstanceResult {
        p: p.get(),
        case: md.case.kind(),
        alpha: md.case.alpha(),
        epsilon: md.case.unit().to_fraction_string(),
        checks: vertices.len(),
        failures: failing.len(),
        failing_vertices: failing,
    })
}

pub fn run_sweep(data: &[MatchingDatum], max_distance: u32) -> Result<SweepReport> {
    if max_distance > MAX_SWEEP_DISTANCE {
        return Err(Error::RadiusTooLarge(max_distance));
    }
    let instances = data
        .par_iter()
        .map(|md| verify_datum(md, max_distance))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepReport {
        max_vertex_distance: max_distance,
        checks: instances.iter().map(|r| r.checks).sum(),
        failures: instances.iter().map(|r| r.failures).sum(),
        instances,
    })
}

pub fn render_markdown(report: &SweepReport) -> String {
    let mut out = String::new();
    out.push_str("| p | case | α | ε | checks | failures |\n");
    out.push_str("|---|------|---|---|--------|----------|\n");
    for r in &report.instances {
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} | {} |\n",
            r.p, r.case, r.alpha, r.epsilon, r.checks, r.failures
        ));
    }
    out.push('\n');
    out.push_str(&summary_line(report));
    out.push('\n');
    out
}

pub fn summary_line(report: &SweepReport) -> String {
    format!(
        "{} checks over {} instances up to distance {}: {} failures",
        report.checks,
        report.instances.len(),
        report.max_vertex_distance,
        report.failures
    )
}
