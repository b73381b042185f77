//! Graph spec files and the `solve`, `order`, `verify` and `eval` commands.
//!
//! Spec files are TOML with a `kind` discriminator:
//!
//! ```toml
//! kind = "star"            # or "chain" / "trig"
//! alpha = [1, 7, 11]       # star: alpha + beta, or L + lambda
//! beta = [0.1, 0.2, 0.5]
//!
//! [solver]                 # optional
//! k_max = 4.0
//! root_tol = 1e-12
//! coincidence_tol = 1e-10
//! ```
//!
//! A chain takes `actions = [S0, S1, S2, S3]` and `beta = [b1, b2, b3]`; a raw
//! trigonometric function takes `leading = { S0 = .., gamma0 = .. }` and an
//! optional `[[terms]]` array with `S`, `gamma` and `a` keys. Phases are in
//! units of π.
//!
//! The command functions write data to `out` and diagnostics to `diag` so
//! the binary can route them to stdout and stderr.

use std::io::Write;
use std::ops::Range;
use std::path::Path;

use serde::Deserialize;
use toml::Spanned;

use crate::error::{Error, Result};
use crate::graphs::{build_chain, build_star, ChainGraphSpec, StarGraphSpec};
use crate::oracle::{verify_table, weyl_audit, OracleReport, ScanOptions, WeylAudit};
use crate::solver::{solve_ladder, RootTable, SolverConfig};
use crate::trigcore::{build_ladder, normalize, Term, TrigSpectralFunction, DEFAULT_MAX_ORDER};

/// Default pairwise tolerance for `verify`.
pub const DEFAULT_VERIFY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverOverrides {
    pub k_max: Option<f64>,
    pub root_tol: Option<f64>,
    pub coincidence_tol: Option<f64>,
    pub max_order: Option<usize>,
}

impl SolverOverrides {
    /// Values set in `other` win.
    pub fn overlay(self, other: SolverOverrides) -> SolverOverrides {
        SolverOverrides {
            k_max: other.k_max.or(self.k_max),
            root_tol: other.root_tol.or(self.root_tol),
            coincidence_tol: other.coincidence_tol.or(self.coincidence_tol),
            max_order: other.max_order.or(self.max_order),
        }
    }

    pub fn max_order(&self) -> usize {
        self.max_order.unwrap_or(DEFAULT_MAX_ORDER)
    }

    pub fn solver_config(&self) -> Result<SolverConfig> {
        let k_max = self.k_max.ok_or_else(|| {
            Error::Parse("no k_max given (use --kmax or [solver] k_max)".to_string())
        })?;
        let mut cfg = SolverConfig::new(k_max);
        if let Some(t) = self.root_tol {
            cfg.root_tol = t;
        }
        if let Some(t) = self.coincidence_tol {
            cfg.coincidence_tol = t;
        }
        cfg.max_order = self.max_order();
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GraphSpec {
    Star(StarGraphSpec),
    Chain(ChainGraphSpec),
    Trig(TrigSpectralFunction),
}

impl GraphSpec {
    pub fn function(&self) -> Result<TrigSpectralFunction> {
        match self {
            GraphSpec::Star(s) => build_star(s),
            GraphSpec::Chain(c) => build_chain(c),
            GraphSpec::Trig(f) => Ok(f.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphSpecFile {
    pub graph: GraphSpec,
    pub solver: SolverOverrides,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLeading {
    #[serde(rename = "S0")]
    s0: f64,
    #[serde(default)]
    gamma0: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    #[serde(rename = "S")]
    action: f64,
    #[serde(default)]
    gamma: f64,
    a: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    kind: Spanned<String>,
    #[serde(rename = "L")]
    lengths: Option<Spanned<Vec<f64>>>,
    lambda: Option<Spanned<Vec<f64>>>,
    alpha: Option<Spanned<Vec<f64>>>,
    beta: Option<Spanned<Vec<f64>>>,
    actions: Option<Spanned<Vec<f64>>>,
    leading: Option<Spanned<RawLeading>>,
    terms: Option<Spanned<Vec<RawTerm>>>,
    solver: Option<SolverOverrides>,
}

/// 1-based line and column of a byte offset.
fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before
        .rfind('\n')
        .map_or(before.len(), |i| before.len() - i - 1)
        + 1;
    (line, col)
}

struct Anchor<'a> {
    text: &'a str,
    origin: &'a str,
}

impl Anchor<'_> {
    fn err(&self, span: Range<usize>, msg: impl std::fmt::Display) -> Error {
        let (line, col) = line_col(self.text, span.start);
        Error::Parse(format!("{}:{line}:{col}: {msg}", self.origin))
    }

    fn triple(&self, v: &Spanned<Vec<f64>>, name: &str) -> Result<[f64; 3]> {
        <[f64; 3]>::try_from(v.get_ref().as_slice()).map_err(|_| {
            self.err(
                v.span(),
                format!("{name} needs 3 values, found {}", v.get_ref().len()),
            )
        })
    }

    /// Map a constructor error onto the span of the offending field.
    fn wrap(&self, span: Range<usize>, e: Error) -> Error {
        match e {
            Error::InvalidParameter(msg) => self.err(span, msg),
            other => self.err(span, other),
        }
    }
}

impl GraphSpecFile {
    /// Parse and validate a spec document; `origin` prefixes error locations.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let raw: RawSpec = toml::from_str(text).map_err(|e| match e.span() {
            Some(span) => {
                let (line, col) = line_col(text, span.start);
                Error::Parse(format!("{origin}:{line}:{col}: {}", e.message()))
            }
            None => Error::Parse(format!("{origin}: {}", e.message())),
        })?;
        let at = Anchor { text, origin };
        let kind_span = raw.kind.span();

        let stray = |fields: &[(&str, bool)]| -> Result<()> {
            match fields.iter().find(|(_, present)| *present) {
                Some((name, _)) => Err(at.err(
                    kind_span.clone(),
                    format!(
                        "field `{name}` does not belong to kind `{}`",
                        raw.kind.get_ref()
                    ),
                )),
                None => Ok(()),
            }
        };

        let graph = match raw.kind.get_ref().as_str() {
            "star" => {
                stray(&[
                    ("actions", raw.actions.is_some()),
                    ("leading", raw.leading.is_some()),
                    ("terms", raw.terms.is_some()),
                ])?;
                let spec = match (&raw.lengths, &raw.lambda, &raw.alpha, &raw.beta) {
                    (Some(l), Some(lam), None, None) => {
                        StarGraphSpec::from_lengths(at.triple(l, "L")?, at.triple(lam, "lambda")?)
                            .map_err(|e| at.wrap(l.span().start..lam.span().end, e))?
                    }
                    (None, None, Some(a), Some(b)) => {
                        StarGraphSpec::from_actions(at.triple(a, "alpha")?, at.triple(b, "beta")?)
                            .map_err(|e| at.wrap(a.span().start..b.span().end, e))?
                    }
                    _ => {
                        return Err(at.err(
                            kind_span,
                            "star needs either `L` and `lambda` or `alpha` and `beta`",
                        ))
                    }
                };
                GraphSpec::Star(spec)
            }
            "chain" => {
                stray(&[
                    ("L", raw.lengths.is_some()),
                    ("lambda", raw.lambda.is_some()),
                    ("alpha", raw.alpha.is_some()),
                    ("leading", raw.leading.is_some()),
                    ("terms", raw.terms.is_some()),
                ])?;
                let (Some(actions), Some(beta)) = (&raw.actions, &raw.beta) else {
                    return Err(at.err(kind_span, "chain needs `actions` and `beta`"));
                };
                let s: [f64; 4] =
                    <[f64; 4]>::try_from(actions.get_ref().as_slice()).map_err(|_| {
                        at.err(
                            actions.span(),
                            format!("actions needs 4 values, found {}", actions.get_ref().len()),
                        )
                    })?;
                let spec = ChainGraphSpec::new(s, at.triple(beta, "beta")?)
                    .map_err(|e| at.wrap(actions.span().start..beta.span().end, e))?;
                GraphSpec::Chain(spec)
            }
            "trig" => {
                stray(&[
                    ("L", raw.lengths.is_some()),
                    ("lambda", raw.lambda.is_some()),
                    ("alpha", raw.alpha.is_some()),
                    ("beta", raw.beta.is_some()),
                    ("actions", raw.actions.is_some()),
                ])?;
                let Some(leading) = &raw.leading else {
                    return Err(
                        at.err(kind_span, "trig needs `leading = { S0 = .., gamma0 = .. }`")
                    );
                };
                let terms: Vec<Term> = raw
                    .terms
                    .as_ref()
                    .map(|t| {
                        t.get_ref()
                            .iter()
                            .map(|r| Term::new(r.action, r.gamma, r.a))
                            .collect()
                    })
                    .unwrap_or_default();
                let span = match &raw.terms {
                    Some(t) => leading.span().start.min(t.span().start)..t.span().end,
                    None => leading.span(),
                };
                let lead = leading.get_ref();
                let f = normalize((lead.s0, lead.gamma0), &terms).map_err(|e| at.wrap(span, e))?;
                GraphSpec::Trig(f)
            }
            other => {
                return Err(at.err(
                    kind_span,
                    format!("unknown kind `{other}` (expected star, chain or trig)"),
                ))
            }
        };

        Ok(GraphSpecFile {
            graph,
            solver: raw.solver.unwrap_or_default(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }
}

/// A `trig` spec document that reloads to exactly `f`.
pub fn trig_spec_toml(f: &TrigSpectralFunction) -> String {
    let mut s = format!(
        "kind = \"trig\"\nleading = {{ S0 = {:?}, gamma0 = {:?} }}\n",
        f.s0(),
        f.gamma0()
    );
    for t in f.terms() {
        s.push_str(&format!(
            "\n[[terms]]\nS = {:?}\ngamma = {:?}\na = {:?}\n",
            t.action, t.phase, t.amplitude
        ));
    }
    s
}

/// Fixed-width scientific notation carrying 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn cmd_solve(
    spec: &GraphSpecFile,
    config: &SolverConfig,
    out: &mut dyn Write,
    diag: &mut dyn Write,
) -> Result<()> {
    let f = spec.graph.function()?;
    let spectrum = solve_ladder(&f, config)?;
    writeln!(out, "n,k,E,kind")?;
    for r in &spectrum.roots().roots {
        writeln!(
            out,
            "{},{},{},{}",
            r.index,
            num(r.k),
            num(r.k * r.k),
            r.kind.as_str()
        )?;
    }
    writeln!(
        diag,
        "order M = {}; roots = {}; window = (0, {}]",
        spectrum.order(),
        spectrum.roots().len(),
        config.k_max
    )?;
    Ok(())
}

pub fn cmd_order(spec: &GraphSpecFile, max_order: usize, out: &mut dyn Write) -> Result<()> {
    let f = spec.graph.function()?;
    let ladder = build_ladder(&f, max_order)?;
    let sums: Vec<String> = ladder
        .regularity_sums()
        .iter()
        .map(|s| s.to_string())
        .collect();
    writeln!(out, "M = {}; sums: {}", ladder.order(), sums.join(", "))?;
    Ok(())
}

#[derive(Debug, Clone)]
pub struct VerifyOutcome {
    pub report: OracleReport,
    pub weyl: WeylAudit,
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        self.report.passed() && self.weyl.passed()
    }
}

/// Solver against oracle plus a Weyl audit over the whole window.
///
/// `tamper` may alter the solver table before comparison (test hook).
pub fn cmd_verify(
    spec: &GraphSpecFile,
    config: &SolverConfig,
    tol: f64,
    out: &mut dyn Write,
    tamper: Option<&dyn Fn(&mut RootTable)>,
) -> Result<VerifyOutcome> {
    let f = spec.graph.function()?;
    let spectrum = solve_ladder(&f, config)?;
    let mut table = spectrum.roots().clone();
    if let Some(hook) = tamper {
        hook(&mut table);
    }
    let mut opts = ScanOptions::for_function(&f);
    opts.coincidence_tol = config.coincidence_tol;
    let report = verify_table(&f, &table, config.k_max, &opts, tol)?;
    let weyl = weyl_audit(
        &table.ks_with_multiplicity(),
        f.s0(),
        (0.0, config.k_max),
        f.len(),
    );
    writeln!(out, "order M = {}", spectrum.order())?;
    writeln!(out, "solver roots: {}", table.len())?;
    writeln!(out, "{report}")?;
    writeln!(out, "{weyl}")?;
    Ok(VerifyOutcome { report, weyl })
}

#[derive(Debug, Clone, PartialEq)]
pub enum EvalPoints {
    List(Vec<f64>),
    /// Inclusive uniform grid `from, from + step, …, to`.
    Grid {
        from: f64,
        to: f64,
        step: f64,
    },
}

impl EvalPoints {
    pub fn points(&self) -> Result<Vec<f64>> {
        match *self {
            EvalPoints::List(ref ks) => Ok(ks.clone()),
            EvalPoints::Grid { from, to, step } => {
                if !(step > 0.0 && to >= from && step.is_finite() && from.is_finite()) {
                    return Err(Error::Parse(format!(
                        "bad grid from {from} to {to} step {step}"
                    )));
                }
                let n = ((to - from) / step).round() as usize;
                Ok((0..=n).map(|i| from + i as f64 * step).collect())
            }
        }
    }
}

/// Columns `k, g0, …, gM` for every requested point.
pub fn cmd_eval(
    spec: &GraphSpecFile,
    max_order: usize,
    points: &EvalPoints,
    out: &mut dyn Write,
) -> Result<()> {
    let f = spec.graph.function()?;
    let ladder = build_ladder(&f, max_order)?;
    let header: Vec<String> = std::iter::once("k".to_string())
        .chain((0..=ladder.order()).map(|m| format!("g{m}")))
        .collect();
    writeln!(out, "{}", header.join(","))?;
    for k in points.points()? {
        let mut row = vec![num(k)];
        row.extend(ladder.levels().iter().map(|g| num(g.evaluate(k))));
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}
