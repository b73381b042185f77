//! Brute-force root finding used to check the ladder solver.
//!
//! Nothing here touches the derivative ladder or the separators: the scan
//! works from the cosine sum alone, with its own derivative for locating
//! tangencies.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::solver::RootTable;
use crate::trigcore::TrigSpectralFunction;

/// Grid points with `|f|` below this and no neighbouring sign change are
/// probed for a tangency or a close pair of roots.
pub const DEFAULT_TANGENCY_THRESHOLD: f64 = 0.05;
/// Default grid density in points per `π / S0`.
pub const DEFAULT_OVERSAMPLING: f64 = 40.0;

#[derive(Debug, Clone, PartialEq)]
pub struct ScanOptions {
    pub scan_step: f64,
    pub refine_tol: f64,
    pub tangency_threshold: f64,
    /// A tangency is a double root when `|f| <= coincidence_tol * (1 + Σ|a_j|)`
    /// at the extremum.
    pub coincidence_tol: f64,
}

impl ScanOptions {
    /// Step `π / (40 S0)` and refinement to `1e-13`.
    pub fn for_function(f: &TrigSpectralFunction) -> Self {
        ScanOptions {
            scan_step: PI / (DEFAULT_OVERSAMPLING * f.s0()),
            refine_tol: 1e-13,
            tangency_threshold: DEFAULT_TANGENCY_THRESHOLD,
            coincidence_tol: 1e-10,
        }
    }

    pub fn with_step(mut self, scan_step: f64) -> Self {
        self.scan_step = scan_step;
        self
    }
}

fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// `dg/dk` summed directly from the cosine terms.
fn slope(f: &TrigSpectralFunction, k: f64) -> f64 {
    let lead = -f.s0() * (f.s0() * k - PI * f.gamma0()).sin();
    f.terms().iter().fold(lead, |acc, t| {
        acc + t.amplitude * t.action * (t.action * k - PI * t.phase).sin()
    })
}

fn bisect_by<F: Fn(f64) -> f64>(g: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let s_lo = sign(g(lo));
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let s = sign(g(mid));
        if s == 0 {
            return mid;
        }
        if s == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// All roots of `f` in the window `(lo, hi]` from a uniform grid scan.
///
/// Sign-change cells are bisected. A grid point that is a local minimum of
/// `|f|` below the tangency threshold, with no sign change on either side,
/// is refined to the extremum of `f`; there the function either crosses
/// (two close roots) or touches zero (one double root, recorded once).
/// Points within a thousandth of a step of `lo` are never reported.
pub fn scan_roots(
    f: &TrigSpectralFunction,
    window: (f64, f64),
    opts: &ScanOptions,
) -> Result<Vec<f64>> {
    let (lo, hi) = window;
    if !(hi > lo) {
        return Ok(Vec::new());
    }
    let limit = PI / (4.0 * f.s0());
    if !(opts.scan_step > 0.0 && opts.scan_step <= limit) {
        return Err(Error::InvalidConfig(format!(
            "scan step {} must lie in (0, {limit}]",
            opts.scan_step
        )));
    }
    if !(opts.refine_tol > 0.0) {
        return Err(Error::InvalidConfig("refine_tol must be positive".into()));
    }

    let start = lo + 1e-3 * opts.scan_step;
    if start >= hi {
        return Ok(Vec::new());
    }
    let cells = ((hi - start) / opts.scan_step).ceil().max(1.0) as usize;
    let h = (hi - start) / cells as f64;
    let xs: Vec<f64> = (0..=cells)
        .map(|i| if i == cells { hi } else { start + i as f64 * h })
        .collect();
    let vs: Vec<f64> = xs.iter().map(|&x| f.evaluate(x)).collect();

    let g = |k: f64| f.evaluate(k);
    let mut roots = Vec::new();
    for i in 0..=cells {
        if vs[i] == 0.0 {
            roots.push(xs[i]);
            continue;
        }
        if i < cells && vs[i + 1] != 0.0 && sign(vs[i]) != sign(vs[i + 1]) {
            roots.push(bisect_by(g, xs[i], xs[i + 1], opts.refine_tol));
        }
    }

    let zero_level = opts.coincidence_tol * f.envelope();
    for i in 1..cells {
        let (a, b, c) = (vs[i - 1], vs[i], vs[i + 1]);
        let same_side = sign(a) == sign(b) && sign(b) == sign(c) && b != 0.0;
        if !same_side || b.abs() >= opts.tangency_threshold {
            continue;
        }
        if b.abs() > a.abs() || b.abs() > c.abs() {
            continue;
        }
        let (left, right) = (xs[i - 1], xs[i + 1]);
        let d = |k: f64| slope(f, k);
        if sign(d(left)) == sign(d(right)) {
            continue;
        }
        let extremum = bisect_by(d, left, right, opts.refine_tol);
        let at = f.evaluate(extremum);
        if at.abs() <= zero_level {
            roots.push(extremum);
        } else if sign(at) != sign(b) {
            roots.push(bisect_by(g, left, extremum, opts.refine_tol));
            roots.push(bisect_by(g, extremum, right, opts.refine_tol));
        }
    }

    roots.sort_by(|x, y| x.total_cmp(y));
    roots.dedup_by(|x, y| (*x - *y).abs() <= opts.refine_tol);
    Ok(roots)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Pass,
    /// First 1-based index at which the two lists disagree.
    Fail {
        index: usize,
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub roots: Vec<f64>,
    pub scan_step: Option<f64>,
    /// `(solver index n, |Δk|)` for every index present in both lists.
    pub matched: Vec<(usize, f64)>,
    pub max_delta: f64,
    pub verdict: Verdict,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "oracle roots: {}", self.roots.len())?;
        if let Some(step) = self.scan_step {
            writeln!(f, "scan step: {step:e}")?;
        }
        writeln!(f, "matched pairs: {}", self.matched.len())?;
        writeln!(f, "max |dk|: {:e}", self.max_delta)?;
        match &self.verdict {
            Verdict::Pass => write!(f, "verdict: pass"),
            Verdict::Fail { index, reason } => write!(f, "verdict: FAIL at n = {index}: {reason}"),
        }
    }
}

/// Pairwise comparison: pass iff equal length and every `|Δk| <= tol`.
pub fn compare(solver_roots: &RootTable, oracle_roots: &[f64], tol: f64) -> OracleReport {
    let matched: Vec<(usize, f64)> = solver_roots
        .roots
        .iter()
        .zip(oracle_roots)
        .map(|(r, &k)| (r.index, (r.k - k).abs()))
        .collect();
    let max_delta = matched.iter().map(|m| m.1).fold(0.0, f64::max);

    let verdict = match matched.iter().position(|m| !(m.1 <= tol)) {
        Some(i) => Verdict::Fail {
            index: i + 1,
            reason: format!(
                "solver k = {} vs oracle k = {} (|dk| = {:e} > {tol:e})",
                solver_roots.roots[i].k, oracle_roots[i], matched[i].1
            ),
        },
        None if solver_roots.len() != oracle_roots.len() => Verdict::Fail {
            index: matched.len() + 1,
            reason: format!(
                "solver found {} roots, oracle {}",
                solver_roots.len(),
                oracle_roots.len()
            ),
        },
        None => Verdict::Pass,
    };

    OracleReport {
        roots: oracle_roots.to_vec(),
        scan_step: None,
        matched,
        max_delta,
        verdict,
    }
}

/// Scan `f` over `(0, k_max]` with `opts` and compare against a solver table.
pub fn verify_table(
    f: &TrigSpectralFunction,
    table: &RootTable,
    k_max: f64,
    opts: &ScanOptions,
    tol: f64,
) -> Result<OracleReport> {
    let roots = scan_roots(f, (0.0, k_max), opts)?;
    let mut report = compare(table, &roots, tol);
    report.scan_step = Some(opts.scan_step);
    Ok(report)
}

/// Root count in a window against the mean density `S0 / π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeylAudit {
    pub expected: f64,
    pub actual: usize,
    pub deviation: f64,
    /// Largest admissible `|deviation|`, `N + 1`.
    pub allowed: f64,
}

impl WeylAudit {
    pub fn passed(&self) -> bool {
        self.deviation.abs() <= self.allowed
    }
}

impl fmt::Display for WeylAudit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "weyl: expected {:.6}, actual {}, deviation {:+.6} (allowed ±{}) {}",
            self.expected,
            self.actual,
            self.deviation,
            self.allowed,
            if self.passed() { "pass" } else { "FAIL" }
        )
    }
}

/// Count roots in `(lo, hi]` and compare with `S0 (hi - lo) / π`.
pub fn weyl_audit(roots: &[f64], s0: f64, window: (f64, f64), n_terms: usize) -> WeylAudit {
    let (lo, hi) = window;
    let allowed = (n_terms + 1) as f64;
    if !(hi > lo) {
        return WeylAudit {
            expected: 0.0,
            actual: 0,
            deviation: 0.0,
            allowed,
        };
    }
    let expected = s0 * (hi - lo) / PI;
    let actual = roots.iter().filter(|&&k| k > lo && k <= hi).count();
    WeylAudit {
        expected,
        actual,
        deviation: actual as f64 - expected,
        allowed,
    }
}
