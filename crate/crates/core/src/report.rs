//! Assembled results for one manifold: the data behind the command-line
//! front end, with deterministic text and JSON renderings that carry the
//! same information.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cohomotopy::{
    compute, compute_all, cross_check, CohomotopyError, CohomotopyResult, CrossCheck,
};
use crate::group::{superscript, FgAbGroup};
use crate::manifold::ManifoldDescriptor;
use crate::splitting::{
    normalize, orbit_oracle, suspension_splitting, HomologyMismatch, NormalizedAttachment,
    OrbitOptions, WedgeDecomposition,
};
use crate::stable::{GroupEstimate, SesDescriptor, SplitStatus};

/// Consistency checks requested with the report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChecksReport {
    /// Degrees where the wedge's homology disagrees with the manifold's.
    pub homology_mismatches: Vec<HomologyMismatch>,
    /// Agreement between the per-degree engine and the stable range.
    pub cross_checks: Vec<CrossCheck>,
}

/// Outcome of certifying the canonical form against the move-closure
/// oracle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    /// Whether the oracle ran (it refuses blocks beyond test scale).
    pub ran: bool,
    /// Orbit size when it ran.
    pub states: usize,
    /// Whether the canonical form is the orbit minimum and agrees with the
    /// normal form recomputed from orbit states (spot-checked at scale).
    pub agrees: bool,
    pub note: String,
}

/// Everything computed for one descriptor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub descriptor: ManifoldDescriptor,
    /// Validation findings; empty for every report that gets assembled.
    pub violations: Vec<String>,
    pub normalized: NormalizedAttachment,
    pub splitting: WedgeDecomposition,
    /// Human-readable wedge, duplicated from `splitting` for convenience.
    pub splitting_rendering: String,
    pub cohomotopy: BTreeMap<u32, CohomotopyResult>,
    pub checks: Option<ChecksReport>,
    pub oracle: Option<OracleReport>,
}

/// What to include in an assembled report.
#[derive(Clone, Copy, Debug, Default)]
pub struct ReportOptions {
    /// Restrict the cohomotopy table to one degree.
    pub degree: Option<u32>,
    /// Run the homology and cross-engine checks.
    pub checks: bool,
    /// Certify the canonical attaching form against the orbit oracle.
    pub oracle: bool,
}

fn certify(d: &ManifoldDescriptor) -> OracleReport {
    let norm = normalize(&d.attach, d);
    match orbit_oracle(&d.attach, d, &OrbitOptions::default()) {
        Err(refusal) => OracleReport {
            ran: false,
            states: 0,
            agrees: true,
            note: format!("oracle skipped: {refusal}"),
        },
        Ok(orbit) => {
            let minimum = orbit
                .iter()
                .min_by_key(|v| v.colex_key())
                .cloned()
                .expect("orbit contains its seed");
            let canonical_is_minimum = norm.vector == minimum;
            // Re-normalizing every orbit state is quadratic on the paired
            // blocks (each call there runs its own search), so large orbits
            // get an evenly spaced spot check plus the minimum itself.
            let stride = (orbit.len() / 16).max(1);
            let constant_on_orbit = orbit
                .iter()
                .step_by(stride)
                .chain(std::iter::once(&minimum))
                .all(|v| normalize(v, d).vector == norm.vector);
            let agrees = canonical_is_minimum && constant_on_orbit;
            let note = if agrees {
                format!(
                    "canonical form certified against {} orbit states",
                    orbit.len()
                )
            } else if canonical_is_minimum {
                "canonical form is not constant on the orbit".to_string()
            } else {
                format!(
                    "canonical form differs from the orbit minimum {minimum}",
                    minimum = render_vector(&minimum)
                )
            };
            OracleReport {
                ran: true,
                states: orbit.len(),
                agrees,
                note,
            }
        }
    }
}

/// Build the full report. The descriptor must validate; the error carries
/// the violations otherwise.
pub fn assemble(
    d: &ManifoldDescriptor,
    options: &ReportOptions,
) -> Result<Report, CohomotopyError> {
    let cohomotopy = match options.degree {
        Some(degree) => BTreeMap::from([(degree, compute(d, degree)?)]),
        None => compute_all(d)?,
    };
    let normalized = normalize(&d.attach, d);
    let splitting = suspension_splitting(d);
    let splitting_rendering = splitting.to_string();
    let checks = if options.checks {
        Some(ChecksReport {
            homology_mismatches: splitting.homology_check(d),
            cross_checks: cross_check(d)?,
        })
    } else {
        None
    };
    let oracle = options.oracle.then(|| certify(d));
    Ok(Report {
        descriptor: d.clone(),
        violations: Vec::new(),
        normalized,
        splitting,
        splitting_rendering,
        cohomotopy,
        checks,
        oracle,
    })
}

impl Report {
    /// False when any requested check or certification found a
    /// disagreement.
    pub fn consistency_ok(&self) -> bool {
        let checks_ok = self.checks.as_ref().is_none_or(|c| {
            c.homology_mismatches.is_empty() && c.cross_checks.iter().all(|x| x.agrees)
        });
        let oracle_ok = self.oracle.as_ref().is_none_or(|o| o.agrees);
        checks_ok && oracle_ok
    }

    /// Byte-deterministic machine-readable rendering.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Human-readable rendering of the same data.
    pub fn to_text(&self) -> String {
        let d = &self.descriptor;
        let mut out = String::new();
        let spin = if d.spin { "spin" } else { "nonspin" };
        let _ = writeln!(
            out,
            "manifold: n={} (dimension {}), l={}, k={}, c={}, {}, T = {}",
            d.n,
            d.dim(),
            d.l,
            d.k,
            d.c,
            spin,
            d.torsion.as_group().display_primary()
        );
        let _ = writeln!(out, "attaching vector: {}", render_vector(&d.attach));
        let _ = writeln!(
            out,
            "normalized: {} (r_j0={}, r_j1={}, delta={})",
            render_vector(&self.normalized.vector),
            self.normalized.r_j0,
            self.normalized.r_j1,
            self.normalized.delta
        );
        let _ = writeln!(out, "suspension splitting: {}", self.splitting_rendering);
        let _ = writeln!(out, "cohomotopy:");
        for (&degree, result) in &self.cohomotopy {
            let _ = writeln!(out, "  {}", render_degree(degree, result));
        }
        if let Some(checks) = &self.checks {
            let _ = writeln!(out, "checks:");
            if checks.homology_mismatches.is_empty() {
                let _ = writeln!(out, "  homology of the wedge matches the manifold");
            } else {
                for m in &checks.homology_mismatches {
                    let _ = writeln!(
                        out,
                        "  homology mismatch in degree {}: expected {}, found {}",
                        m.degree,
                        m.expected.display_primary(),
                        m.found.display_primary()
                    );
                }
            }
            for x in &checks.cross_checks {
                let verdict = if x.agrees { "agree" } else { "DISAGREE" };
                let _ = writeln!(
                    out,
                    "  stable range, degree {}: {} ({})",
                    x.degree, verdict, x.detail
                );
            }
        }
        if let Some(oracle) = &self.oracle {
            let _ = writeln!(out, "oracle: {}", oracle.note);
        }
        out
    }
}

fn render_vector(v: &crate::splitting::AttachingVector) -> String {
    let blocks: [(&str, &Vec<u64>); 6] = [
        ("x", &v.x),
        ("y", &v.y),
        ("z", &v.z),
        ("z2", &v.z2),
        ("u", &v.u),
        ("w", &v.w),
    ];
    let mut parts = Vec::new();
    for (name, block) in blocks {
        if !block.is_empty() {
            let entries = block
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(",");
            parts.push(format!("{name}=[{entries}]"));
        }
    }
    if parts.is_empty() {
        "(empty)".to_string()
    } else {
        parts.join(" ")
    }
}

fn render_estimate(e: &GroupEstimate) -> String {
    match e {
        GroupEstimate::Exact(g) => g.display_primary(),
        GroupEstimate::Candidates(set) => format!(
            "one of {{{}}}",
            set.iter()
                .map(FgAbGroup::display_primary)
                .collect::<Vec<_>>()
                .join(", ")
        ),
    }
}

fn render_ses(name: &str, ses: &SesDescriptor) -> String {
    let split = match ses.split {
        SplitStatus::Yes => "splits",
        SplitStatus::No => "does not split",
        SplitStatus::Unknown => "splitting undetermined",
    };
    format!(
        "{name} = {middle} from 0 → {sub} → {name} → {quot} → 0 ({split}; {provenance})",
        middle = render_estimate(&ses.middle),
        sub = render_estimate(&ses.sub),
        quot = ses.quot.display_primary(),
        provenance = ses.provenance,
    )
}

fn render_degree(degree: u32, result: &CohomotopyResult) -> String {
    let name = format!("π{}", superscript(degree as usize));
    match result {
        CohomotopyResult::ExactGroup { formula, .. } => format!("{name} = {formula}"),
        CohomotopyResult::Extension(ses) => render_ses(&name, ses),
        CohomotopyResult::TorsorOver { degree } => format!(
            "{name}: no group structure; in bijection with π{}",
            superscript(*degree as usize)
        ),
        CohomotopyResult::Structural { statement, .. } => format!("{name}: {statement}"),
        CohomotopyResult::Unknown { reason } => format!("{name}: unknown — {reason}"),
    }
}
