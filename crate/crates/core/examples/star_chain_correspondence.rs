// The derivative of a star's spectral function against a chain on the same
// bond actions and vertex positions.
//
// For bond actions in ratio 1 : 5/3 : 4/3 with positions (0.3, 0.5, 0.4)
// the roots of the star's g' coincide with the chain eigenvalues.

use std::f64::consts::PI;

use qgraph::{build_chain, build_star, solve_ladder, ChainGraphSpec, SolverConfig, StarGraphSpec};

pub fn run_example() -> qgraph::Result<f64> {
    let alpha = [1.0, 5.0 / 3.0, 4.0 / 3.0];
    let beta = [0.3, 0.5, 0.4];
    let star = build_star(&StarGraphSpec::from_actions(alpha, beta)?)?;
    let chain = build_chain(&ChainGraphSpec::from_bond_actions(alpha, beta)?)?;

    let k_max = 20.0 * PI / star.s0();
    let a = solve_ladder(&star.derivative_level(1), &SolverConfig::new(k_max))?;
    let b = solve_ladder(&chain, &SolverConfig::new(k_max))?;

    println!("{:>3} {:>18} {:>18}", "n", "star g' root", "chain k");
    let mut worst: f64 = 0.0;
    for (n, (x, y)) in a.roots().ks().iter().zip(b.roots().ks()).enumerate() {
        worst = worst.max((x - y).abs());
        println!("{:>3} {x:>18.13} {y:>18.13}", n + 1);
    }
    println!(
        "{} vs {} roots, max |dk| = {worst:e}",
        a.roots().len(),
        b.roots().len()
    );
    Ok(worst)
}

#[allow(dead_code)]
fn main() -> qgraph::Result<()> {
    run_example().map(|_| ())
}
