// Cross-check the ladder solver against a brute-force scan and Weyl's law.

use qgraph::oracle::{verify_table, weyl_audit, ScanOptions};
use qgraph::{build_star, solve_ladder, SolverConfig, StarGraphSpec};

pub fn run_example() -> qgraph::Result<bool> {
    let star = StarGraphSpec::from_lengths([10.0, 35.0, 22.0], [0.99, 0.96, 0.75])?;
    let g = build_star(&star)?;
    let k_max = 200.0 / g.s0();
    let spectrum = solve_ladder(&g, &SolverConfig::new(k_max))?;

    let report = verify_table(
        &g,
        spectrum.roots(),
        k_max,
        &ScanOptions::for_function(&g),
        1e-9,
    )?;
    println!("{report}");
    let weyl = weyl_audit(
        &spectrum.roots().ks_with_multiplicity(),
        g.s0(),
        (0.0, k_max),
        g.len(),
    );
    println!("{weyl}");
    Ok(report.passed() && weyl.passed())
}

#[allow(dead_code)]
fn main() -> qgraph::Result<()> {
    let ok = run_example()?;
    std::process::exit(if ok { 0 } else { 3 });
}
