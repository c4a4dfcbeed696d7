//! Check results and reports: the machine-readable output shared by the
//! verification suites, the command-line tool, and the acceptance battery.
//!
//! JSON output is schema-versioned and deterministic: field order follows
//! struct declaration order, no timestamps are embedded, and the seed used
//! for sampling is echoed so every run can be reproduced bit-for-bit.

use serde::Serialize;

use crate::bundle::BundleSelector;
use crate::scalar::Mode;
use crate::spectrum::{KillingReport, SpectrumTable};

/// Version of the JSON document layout produced by this crate.
pub const SCHEMA_VERSION: &str = "1";

/// Version of the library producing the reports.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// One verified identity: its worst residual over everything it covered,
/// against the threshold it must stay under.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub check_name: String,
    /// Dimension the check ran at.
    pub n: usize,
    /// Number of cases covered (basis fields, random samples, monomial
    /// pairs — whatever the check enumerates).
    pub samples: usize,
    pub max_residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl CheckResult {
    /// `pass` is derived, never set by hand: residual within threshold.
    pub fn new(
        check_name: impl Into<String>,
        n: usize,
        samples: usize,
        max_residual: f64,
        threshold: f64,
    ) -> Self {
        CheckResult {
            check_name: check_name.into(),
            n,
            samples,
            max_residual,
            threshold,
            pass: max_residual <= threshold,
        }
    }
}

/// The semantic part of a tool invocation, echoed into every report.
#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub n: usize,
    pub m: u32,
    pub selector: BundleSelector,
    pub mode: Mode,
    pub sample_count: usize,
    pub seed: u64,
}

/// Outcome of a verification run: all checks, overall pass iff every check
/// passed.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub schema_version: &'static str,
    pub tool_version: &'static str,
    pub config: ConfigEcho,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn new(config: ConfigEcho, checks: Vec<CheckResult>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        VerificationReport {
            schema_version: SCHEMA_VERSION,
            tool_version: TOOL_VERSION,
            config,
            checks,
            pass,
        }
    }
}

/// Single-document bundle: config, verification outcome, spectrum tables,
/// Killing reports.
#[derive(Debug, Clone, Serialize)]
pub struct FullReport {
    pub schema_version: &'static str,
    pub tool_version: &'static str,
    pub config: ConfigEcho,
    pub verification: VerificationReport,
    pub spectra: Vec<SpectrumTable>,
    pub killing: Vec<KillingReport>,
}

/// Terminal rendering of a verification report; lossy by design (residuals
/// rounded for display — the JSON form is the archival one).
pub fn render_verification_text(r: &VerificationReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "verification (schema {}, tool {})\n",
        r.schema_version, r.tool_version
    ));
    out.push_str(&format!(
        "config: n={} m={} selector={} mode={} samples={} seed={}\n",
        r.config.n,
        r.config.m,
        r.config.selector,
        r.config.mode,
        r.config.sample_count,
        r.config.seed
    ));
    let width = r
        .checks
        .iter()
        .map(|c| c.check_name.len())
        .max()
        .unwrap_or(8);
    for c in &r.checks {
        out.push_str(&format!(
            "{}  {:width$}  n={:<2} cases={:<6} residual={:.3e}  threshold={:.1e}\n",
            if c.pass { "PASS" } else { "FAIL" },
            c.check_name,
            c.n,
            c.samples,
            c.max_residual,
            c.threshold,
            width = width
        ));
    }
    out.push_str(&format!(
        "overall: {}\n",
        if r.pass { "PASS" } else { "FAIL" }
    ));
    out
}

/// Terminal rendering of a spectrum table.
pub fn render_spectrum_text(t: &SpectrumTable) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "spectrum: n={} m={} selector={} mode={} basis_dim={}\n",
        t.n, t.m, t.selector, t.mode, t.basis_dim
    ));
    out.push_str(&format!(
        "closure_residual={:.3e} hermiticity_defect={:.3e} cluster_tol={:.1e}\n",
        t.closure_residual, t.hermiticity_defect, t.cluster_tol
    ));
    out.push_str("  eigenvalue  multiplicity  flags\n");
    for e in &t.entries {
        out.push_str(&format!(
            "  {:>10.6}  {:>12}  {}\n",
            e.eigenvalue,
            e.multiplicity,
            if e.truncated { "truncated" } else { "" }
        ));
    }
    out
}

/// Terminal rendering of a Killing verification.
pub fn render_killing_text(k: &KillingReport) -> String {
    format!(
        "killing: lambda={} residual={:.3e} dirac_eigenvalue={} \
         dirac_residual={:.3e} selector={} section_residual={:.3e} \
         curvature_consistency={:.3e}\n",
        k.lambda,
        k.residual,
        k.dirac_eigenvalue,
        k.dirac_residual,
        k.selector,
        k.section_residual,
        k.curvature_consistency
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn echo() -> ConfigEcho {
        ConfigEcho {
            n: 2,
            m: 1,
            selector: BundleSelector::Sphere,
            mode: Mode::Exact,
            sample_count: 10,
            seed: 7,
        }
    }

    #[test]
    fn pass_is_derived_and_overall_is_conjunction() {
        let good = CheckResult::new("a", 2, 3, 0.0, 1e-10);
        let bad = CheckResult::new("b", 2, 3, 1.0, 1e-10);
        assert!(good.pass);
        assert!(!bad.pass);
        assert!(VerificationReport::new(echo(), vec![good.clone()]).pass);
        assert!(!VerificationReport::new(echo(), vec![good, bad]).pass);
    }

    #[test]
    fn json_has_schema_version_and_no_timestamp() {
        let r = VerificationReport::new(echo(), vec![CheckResult::new("a", 2, 1, 0.0, 0.0)]);
        let s = serde_json::to_string_pretty(&r).unwrap();
        assert!(s.contains("\"schema_version\": \"1\""));
        assert!(s.contains("\"seed\": 7"));
        assert!(!s.to_lowercase().contains("time"));
        // Serialization is deterministic.
        assert_eq!(s, serde_json::to_string_pretty(&r).unwrap());
    }

    #[test]
    fn text_renderers_cover_fields() {
        let r = VerificationReport::new(echo(), vec![CheckResult::new("xy", 2, 1, 0.0, 0.0)]);
        let t = render_verification_text(&r);
        assert!(t.contains("PASS  xy"));
        assert!(t.contains("overall: PASS"));
    }
}
