// Eigenvalues of a three-bond star graph below k = 4.

use qgraph::{build_star, solve_ladder, SolverConfig, StarGraphSpec};

pub fn run_example() -> qgraph::Result<Vec<f64>> {
    let star = StarGraphSpec::from_actions([1.0, 7.0, 11.0], [0.1, 0.2, 0.5])?;
    let g = build_star(&star)?;
    let spectrum = solve_ladder(&g, &SolverConfig::new(4.0))?;

    println!(
        "g(k) = cos({}k) - ...  ({} terms), order M = {}",
        g.s0(),
        g.len(),
        spectrum.order()
    );
    for r in &spectrum.roots().roots {
        println!(
            "k_{:<2} = {:.15}  E = {:.12}  {}",
            r.index,
            r.k,
            r.k * r.k,
            r.kind.as_str()
        );
    }
    Ok(spectrum.eigenvalues())
}

#[allow(dead_code)]
fn main() -> qgraph::Result<()> {
    run_example().map(|_| ())
}
