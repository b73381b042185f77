//! Explicit spectrum extraction.
//!
//! The top (regular) ladder level has separators at the extrema of its
//! leading cosine, with exactly one root between neighbours. Each level's
//! roots are the extrema of the level below, so they separate its roots
//! (Rolle), and the recursion walks down to `g^(0)`.
//!
//! The delta-function integral over a separator interval that holds one
//! simple zero is that zero, so it is evaluated by bracketed bisection.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::trigcore::{build_ladder, DerivativeLadder, TrigSpectralFunction, DEFAULT_MAX_ORDER};

pub const DEFAULT_ROOT_TOL: f64 = 1e-12;
pub const DEFAULT_COINCIDENCE_TOL: f64 = 1e-10;
pub const DEFAULT_INTERVAL_PROBES: usize = 8;

const MAX_BISECTIONS: usize = 400;
/// How many extra derivative levels to try when resolving the sign of a
/// function next to one of its zeros.
const MAX_SIDE_ORDER: usize = 32;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Upper end of the window `(0, k_max]`.
    pub k_max: f64,
    /// Absolute tolerance on every root.
    pub root_tol: f64,
    /// A separator `x` is a root of the level below when
    /// `|g(x)| <= coincidence_tol * (1 + Σ|a_j|)`.
    pub coincidence_tol: f64,
    pub max_order: usize,
    /// Interior sample points per interval used to detect a broken
    /// separator (more than one sign change).
    pub interval_probes: usize,
    /// Process the intervals of one level on the rayon pool.
    pub parallel: bool,
}

impl SolverConfig {
    pub fn new(k_max: f64) -> Self {
        SolverConfig {
            k_max,
            root_tol: DEFAULT_ROOT_TOL,
            coincidence_tol: DEFAULT_COINCIDENCE_TOL,
            max_order: DEFAULT_MAX_ORDER,
            interval_probes: DEFAULT_INTERVAL_PROBES,
            parallel: true,
        }
    }

    pub fn validate(&self, f: &TrigSpectralFunction) -> Result<()> {
        if !(self.k_max.is_finite() && self.k_max > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "k_max must be positive and finite, got {}",
                self.k_max
            )));
        }
        if !(self.root_tol.is_finite() && self.root_tol > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "root_tol must be positive, got {}",
                self.root_tol
            )));
        }
        if !(self.coincidence_tol.is_finite() && self.coincidence_tol > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "coincidence_tol must be positive, got {}",
                self.coincidence_tol
            )));
        }
        let spacing = std::f64::consts::PI / f.s0();
        if self.root_tol >= spacing {
            return Err(Error::InvalidConfig(format!(
                "root_tol {} is not below the separator spacing {spacing}",
                self.root_tol
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootKind {
    /// Found strictly inside a separator interval.
    Interior,
    /// The separator itself is a root of the level below.
    Coincidence,
}

impl RootKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RootKind::Interior => "interior",
            RootKind::Coincidence => "coincidence",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    /// Counting index, starting at 1 for the first positive root.
    pub index: usize,
    pub k: f64,
    pub kind: RootKind,
    /// Order of the zero: 1 for interior roots, at least 2 for coincidences.
    pub multiplicity: usize,
}

type Found = (f64, RootKind, usize);

/// The positive roots of one ladder level inside the window, in order.
#[derive(Debug, Clone, PartialEq)]
pub struct RootTable {
    pub level: usize,
    pub roots: Vec<Root>,
}

impl RootTable {
    /// Table from sorted `(k, kind)` pairs; coincidences are taken as double.
    pub fn from_roots(level: usize, found: Vec<(f64, RootKind)>) -> Self {
        Self::from_found(
            level,
            found
                .into_iter()
                .map(|(k, kind)| {
                    let multiplicity = match kind {
                        RootKind::Interior => 1,
                        RootKind::Coincidence => 2,
                    };
                    (k, kind, multiplicity)
                })
                .collect(),
        )
    }

    fn from_found(level: usize, found: Vec<Found>) -> Self {
        let roots = found
            .into_iter()
            .enumerate()
            .map(|(i, (k, kind, multiplicity))| Root {
                index: i + 1,
                k,
                kind,
                multiplicity,
            })
            .collect();
        RootTable { level, roots }
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Root number `n` (1-based).
    pub fn get(&self, n: usize) -> Option<&Root> {
        n.checked_sub(1).and_then(|i| self.roots.get(i))
    }

    pub fn ks(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.k).collect()
    }

    /// Root positions with each repeated according to its multiplicity, the
    /// form a state count (Weyl audit) expects.
    pub fn ks_with_multiplicity(&self) -> Vec<f64> {
        self.roots
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.k, r.multiplicity))
            .collect()
    }
}

/// Extrema of the leading cosine of a regular function inside `(0, k_max]`:
/// `k = (γ0 + n) π / S0`.
pub fn regular_separators(f: &TrigSpectralFunction, k_max: f64) -> Result<Vec<f64>> {
    if !f.is_regular() {
        return Err(Error::NotRegular(f.regularity_sum()));
    }
    let step = std::f64::consts::PI / f.s0();
    let gamma = f.gamma0();
    let mut n = (-gamma).floor() + 1.0;
    let mut out = Vec::new();
    loop {
        let k = (gamma + n) * step;
        if k > k_max {
            break;
        }
        if k > 0.0 {
            out.push(k);
        }
        n += 1.0;
    }
    Ok(out)
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

/// Bisection on `(lo, hi)` given the sign of `f` just right of `lo`.
fn bisect(
    f: &TrigSpectralFunction,
    mut lo: f64,
    mut hi: f64,
    sign_lo: i8,
    tol: f64,
) -> Result<f64> {
    let (lo0, hi0) = (lo, hi);
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= tol {
            return Ok(lo + 0.5 * (hi - lo));
        }
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            return Err(Error::RefinementStall { lo: lo0, hi: hi0 });
        }
        let v = f.evaluate(mid);
        match sign(v) {
            0 => return Ok(mid),
            s if s == sign_lo => lo = mid,
            _ => hi = mid,
        }
    }
    Err(Error::RefinementStall { lo: lo0, hi: hi0 })
}

/// The simple zero of `f` inside a sign-changing bracket, to within `tol`.
pub fn extract_root(f: &TrigSpectralFunction, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let (flo, fhi) = (f.evaluate(lo), f.evaluate(hi));
    if !(lo < hi) || sign(flo) * sign(fhi) >= 0 {
        return Err(Error::BracketViolation { lo, hi });
    }
    bisect(f, lo, hi, sign(flo), tol)
}

/// Signs of `f` immediately left and right of `x`, resolved through higher
/// derivatives when `f(x)` is zero at the given tolerance.
///
/// Returns `(left, right, order)` where `order` is the derivative order that
/// decided the sign (0 when `f(x)` is itself nonzero).
fn side_signs(
    f: &TrigSpectralFunction,
    x: f64,
    tol: f64,
    skip_first_derivative: bool,
) -> Option<(i8, i8, usize)> {
    for p in 0..=MAX_SIDE_ORDER {
        if p == 1 && skip_first_derivative {
            continue;
        }
        let (v, scale) = if p == 0 {
            (f.evaluate(x), f.envelope())
        } else {
            let h = f.derivative_level(p);
            (h.evaluate(x), h.envelope())
        };
        if v.abs() > tol * scale {
            let right = sign(v);
            let left = if p % 2 == 1 { -right } else { right };
            return Some((left, right, p));
        }
    }
    None
}

fn map_indexed<T, F>(n: usize, parallel: bool, op: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    if parallel {
        (0..n).into_par_iter().map(op).collect()
    } else {
        (0..n).map(op).collect()
    }
}

struct PointInfo {
    left: i8,
    right: i8,
    /// Order of the zero at the point, 0 when it is not a root.
    zero_order: usize,
}

/// Roots of `f` in `(0, k_max]` given sorted interior separator points.
///
/// When `points_are_upper_roots` is set the points are zeros of the next
/// ladder level, so the first derivative of `f` is known to vanish there.
fn roots_on_partition(
    f: &TrigSpectralFunction,
    level: usize,
    points: &[f64],
    config: &SolverConfig,
    points_are_upper_roots: bool,
) -> Result<RootTable> {
    let unresolved = |x: f64| Error::SeparatorFailure {
        level,
        lo: x,
        hi: x,
        reason: "sign next to separator could not be resolved",
    };

    let info: Vec<Result<PointInfo>> = map_indexed(points.len(), config.parallel, |i| {
        let x = points[i];
        let v = f.evaluate(x);
        if v.abs() <= config.coincidence_tol * f.envelope() {
            let (left, right, zero_order) =
                side_signs(f, x, config.coincidence_tol, points_are_upper_roots)
                    .ok_or_else(|| unresolved(x))?;
            Ok(PointInfo {
                left,
                right,
                zero_order,
            })
        } else {
            Ok(PointInfo {
                left: sign(v),
                right: sign(v),
                zero_order: 0,
            })
        }
    });
    let info = info.into_iter().collect::<Result<Vec<_>>>()?;

    // the zero at k = 0 itself is never counted
    let (_, right_of_zero, _) =
        side_signs(f, 0.0, config.coincidence_tol, false).ok_or_else(|| unresolved(0.0))?;

    let k_max = config.k_max;
    let f_at_end = f.evaluate(k_max);
    let last_point = points.last().copied().unwrap_or(0.0);

    let n_intervals = points.len() + 1;
    let interval_roots: Vec<Result<Vec<Found>>> = map_indexed(n_intervals, config.parallel, |i| {
        let (lo, s_lo) = if i == 0 {
            (0.0, right_of_zero)
        } else {
            (points[i - 1], info[i - 1].right)
        };
        let (hi, s_hi, hi_is_end) = if i == points.len() {
            (k_max, sign(f_at_end), true)
        } else {
            (points[i], info[i].left, false)
        };
        if hi <= lo {
            return Ok(Vec::new());
        }
        let mut found = interval_roots(f, level, lo, s_lo, hi, s_hi, config)?;
        if hi_is_end && s_hi == 0 && k_max > last_point {
            found.push((k_max, RootKind::Interior, 1));
        }
        Ok(found)
    });

    let mut found = Vec::new();
    for (i, roots) in interval_roots.into_iter().enumerate() {
        found.extend(roots?);
        if i < points.len() && info[i].zero_order > 0 {
            found.push((points[i], RootKind::Coincidence, info[i].zero_order));
        }
    }
    Ok(RootTable::from_found(level, found))
}

/// The root (if any) of `f` inside `(lo, hi)` given the one-sided signs at
/// the ends. More than one sign change among the probes aborts.
fn interval_roots(
    f: &TrigSpectralFunction,
    level: usize,
    lo: f64,
    s_lo: i8,
    hi: f64,
    s_hi: i8,
    config: &SolverConfig,
) -> Result<Vec<Found>> {
    let probes = config.interval_probes;
    let width = hi - lo;
    let mut xs = Vec::with_capacity(probes + 2);
    let mut signs = Vec::with_capacity(probes + 2);
    xs.push(lo);
    signs.push(s_lo);
    for j in 1..=probes {
        let x = lo + width * j as f64 / (probes + 1) as f64;
        xs.push(x);
        signs.push(sign(f.evaluate(x)));
    }
    xs.push(hi);
    signs.push(s_hi);

    let mut found = Vec::new();
    let (mut prev_x, mut prev_s) = (lo, s_lo);
    let mut hit_since_prev = false;
    let last = xs.len() - 1;
    for j in 1..=last {
        let (x, s) = (xs[j], signs[j]);
        if s == 0 {
            // an exact zero at `hi` is the caller's business
            if j < last {
                found.push((x, RootKind::Interior, 1));
                hit_since_prev = true;
            }
            continue;
        }
        if s != prev_s && !hit_since_prev {
            let k = bisect(f, prev_x, x, prev_s, config.root_tol)?;
            found.push((k, RootKind::Interior, 1));
        }
        prev_x = x;
        prev_s = s;
        hit_since_prev = false;
    }
    if found.len() > 1 {
        return Err(Error::SeparatorFailure {
            level,
            lo,
            hi,
            reason: "more than one sign change between adjacent separators",
        });
    }
    Ok(found)
}

/// Roots of `f_lower = g^(m-1)` from the complete roots of `g^(m)`.
pub fn descend_level(
    f_lower: &TrigSpectralFunction,
    upper: &RootTable,
    config: &SolverConfig,
) -> Result<RootTable> {
    let level = upper
        .level
        .checked_sub(1)
        .ok_or_else(|| Error::InvalidConfig("cannot descend below level 0".to_string()))?;
    roots_on_partition(f_lower, level, &upper.ks(), config, true)
}

/// Roots of the regular top level between its leading-cosine separators.
pub fn top_level_roots(
    f_top: &TrigSpectralFunction,
    level: usize,
    config: &SolverConfig,
) -> Result<RootTable> {
    let separators = regular_separators(f_top, config.k_max)?;
    roots_on_partition(f_top, level, &separators, config, false)
}

/// Result of a full ladder solve.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub ladder: DerivativeLadder,
    /// Root tables for levels `M, M-1, …, 0`.
    pub tables: Vec<RootTable>,
}

impl Spectrum {
    pub fn order(&self) -> usize {
        self.ladder.order()
    }

    pub fn level(&self, m: usize) -> Option<&RootTable> {
        self.tables.iter().find(|t| t.level == m)
    }

    /// Level-0 roots `k_n`.
    pub fn roots(&self) -> &RootTable {
        self.tables.last().expect("at least one level")
    }

    /// `E_n = k_n²`.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.roots().roots.iter().map(|r| r.k * r.k).collect()
    }
}

pub fn solve_ladder(f0: &TrigSpectralFunction, config: &SolverConfig) -> Result<Spectrum> {
    config.validate(f0)?;
    let ladder = build_ladder(f0, config.max_order)?;
    let order = ladder.order();
    let mut tables = Vec::with_capacity(order + 1);
    tables.push(top_level_roots(ladder.top(), order, config)?);
    for m in (1..=order).rev() {
        let below = descend_level(&ladder.levels()[m - 1], tables.last().unwrap(), config)?;
        tables.push(below);
    }
    Ok(Spectrum { ladder, tables })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{build_star, StarGraphSpec};
    use crate::trigcore::{normalize, Term};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn eq6() -> TrigSpectralFunction {
        build_star(&StarGraphSpec::from_actions([1.0, 7.0, 11.0], [0.1, 0.2, 0.5]).unwrap())
            .unwrap()
    }

    #[test]
    fn separators_of_worked_example() {
        let g1 = eq6().derivative_level(1);
        let seps = regular_separators(&g1, 1.0).unwrap();
        for (n, k) in seps.iter().enumerate() {
            assert_abs_diff_eq!(*k, (2 * n + 1) as f64 * PI / 38.0, epsilon = 1e-15);
            assert!(g1.evaluate(*k).abs() >= 1.0 - g1.regularity_sum());
        }
        assert_eq!(seps.len(), 6);
    }

    #[test]
    fn separators_of_pure_cosines() {
        let c = TrigSpectralFunction::pure(2.0, 0.0).unwrap();
        let seps = regular_separators(&c, 5.0).unwrap();
        assert_eq!(seps.len(), 3);
        assert_abs_diff_eq!(seps[0], PI / 2.0, epsilon = 1e-15);

        let s = TrigSpectralFunction::pure(1.0, 0.5).unwrap();
        let seps = regular_separators(&s, 8.0).unwrap();
        assert_abs_diff_eq!(seps[0], 0.5 * PI, epsilon = 1e-15);
        assert_abs_diff_eq!(seps[1], 1.5 * PI, epsilon = 1e-15);
        assert_eq!(seps.len(), 3);
    }

    #[test]
    fn separators_refuse_irregular() {
        assert!(matches!(
            regular_separators(&eq6(), 4.0),
            Err(Error::NotRegular(_))
        ));
    }

    #[test]
    fn extract_cosine_root() {
        let c = TrigSpectralFunction::pure(1.0, 0.0).unwrap();
        let r = extract_root(&c, 1.0, 2.0, 1e-13).unwrap();
        assert_abs_diff_eq!(r, PI / 2.0, epsilon = 1e-13);
        assert!(matches!(
            extract_root(&c, 0.0, 1.0, 1e-13),
            Err(Error::BracketViolation { .. })
        ));
    }

    #[test]
    fn extract_reports_stall() {
        let c = TrigSpectralFunction::pure(1.0, 0.0).unwrap();
        // ulp near 1e6 is ~1.2e-10
        let lo = 1e6 * 1.0;
        let target = (lo / PI).floor() * PI + PI / 2.0;
        let r = extract_root(&c, target - 1.0, target + 1.0, 1e-13);
        assert!(matches!(r, Err(Error::RefinementStall { .. })));
    }

    #[test]
    fn descend_onto_cosine() {
        let c = TrigSpectralFunction::pure(1.0, 0.0).unwrap();
        // zeros of -sin(k) are the extrema of cos(k)
        let upper = RootTable::from_roots(
            1,
            (1..=3)
                .map(|n| (n as f64 * PI, RootKind::Interior))
                .collect(),
        );
        let cfg = SolverConfig::new(10.0);
        let t = descend_level(&c, &upper, &cfg).unwrap();
        assert_eq!(t.level, 0);
        assert_eq!(t.len(), 3);
        for (i, r) in t.roots.iter().enumerate() {
            assert_abs_diff_eq!(r.k, (i as f64 + 0.5) * PI, epsilon = 1e-12);
            assert_eq!(r.index, i + 1);
        }
    }

    #[test]
    fn worked_example_root_18_is_pi() {
        let spectrum = solve_ladder(&eq6(), &SolverConfig::new(4.0)).unwrap();
        assert_eq!(spectrum.order(), 1);
        let r18 = spectrum.roots().get(18).unwrap();
        assert_abs_diff_eq!(r18.k, PI, epsilon = 1e-10);
        assert_eq!(r18.kind, RootKind::Coincidence);
        assert_eq!(r18.multiplicity, 2);
        assert_eq!(spectrum.roots().len(), 22);
        assert_abs_diff_eq!(spectrum.eigenvalues()[17], PI * PI, epsilon = 1e-9);
    }

    #[test]
    fn pure_cosine_spectrum() {
        for &(s0, g0) in &[(1.0, 0.0), (3.0, 0.25), (2.5, 0.5), (7.0, 1.75)] {
            let f = TrigSpectralFunction::pure(s0, g0).unwrap();
            let spectrum = solve_ladder(&f, &SolverConfig::new(12.0)).unwrap();
            assert_eq!(spectrum.order(), 0);
            // zeros of cos(S0 k - π γ0): k = (γ0 + n - 1/2) π / S0, n chosen so k > 0
            let mut expected = Vec::new();
            let mut n = (0.5 - g0).floor();
            loop {
                let k = (g0 + n - 0.5) * PI / s0;
                if k > 12.0 {
                    break;
                }
                if k > 0.0 {
                    expected.push(k);
                }
                n += 1.0;
            }
            let got = spectrum.roots().ks();
            assert_eq!(got.len(), expected.len(), "S0 {s0} gamma0 {g0}");
            for (a, b) in got.iter().zip(&expected) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-11);
            }
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let mut cfg = SolverConfig::new(20.0);
        let par = solve_ladder(&eq6(), &cfg).unwrap();
        cfg.parallel = false;
        let seq = solve_ladder(&eq6(), &cfg).unwrap();
        assert_eq!(par.tables, seq.tables);
    }

    #[test]
    fn index_stability_under_window_growth() {
        let small = solve_ladder(&eq6(), &SolverConfig::new(4.0)).unwrap();
        let large = solve_ladder(&eq6(), &SolverConfig::new(9.0)).unwrap();
        for r in &small.roots().roots {
            let other = large.roots().get(r.index).unwrap();
            assert_eq!(other.kind, r.kind);
            assert!((other.k - r.k).abs() <= 2e-12);
        }
    }

    #[test]
    fn coincidence_roots_are_roots_of_both_levels() {
        let spectrum = solve_ladder(&eq6(), &SolverConfig::new(30.0)).unwrap();
        let g0 = spectrum.ladder.base();
        let g1 = &spectrum.ladder.levels()[1];
        let coincident: Vec<_> = spectrum
            .roots()
            .roots
            .iter()
            .filter(|r| r.kind == RootKind::Coincidence)
            .collect();
        assert!(!coincident.is_empty());
        for r in coincident {
            assert!(g0.evaluate(r.k).abs() <= 1e-10 * g0.envelope());
            assert!(g1.evaluate(r.k).abs() <= 1e-10 * g1.envelope());
        }
    }

    #[test]
    fn irregular_symmetric_star_has_coincidences() {
        // cos(3k) - cos(k) = -2 sin(2k) sin(k): double zeros at multiples of π
        let f = normalize((3.0, 0.0), &[Term::new(1.0, 0.0, 1.0)]).unwrap();
        let spectrum = solve_ladder(&f, &SolverConfig::new(10.0)).unwrap();
        assert_eq!(spectrum.order(), 1);
        let want: Vec<f64> = (1..=6).map(|n| n as f64 * PI / 2.0).collect();
        let got = spectrum.roots();
        assert_eq!(got.len(), want.len());
        for (r, w) in got.roots.iter().zip(&want) {
            assert_abs_diff_eq!(r.k, *w, epsilon = 1e-11);
            let even = ((r.k / PI).round() * PI - r.k).abs() < 1e-9;
            assert_eq!(r.kind == RootKind::Coincidence, even);
        }
    }

    #[test]
    fn config_validation() {
        let f = eq6();
        assert!(SolverConfig::new(0.0).validate(&f).is_err());
        let mut cfg = SolverConfig::new(1.0);
        cfg.root_tol = 1.0;
        assert!(cfg.validate(&f).is_err());
        cfg.root_tol = 1e-12;
        cfg.coincidence_tol = -1.0;
        assert!(cfg.validate(&f).is_err());
    }
}
