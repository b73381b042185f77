// A four-vertex chain with reflecting inner vertices.

use qgraph::{build_chain, solve_ladder, ChainGraphSpec, SolverConfig};

pub fn run_example() -> qgraph::Result<usize> {
    let chain = ChainGraphSpec::from_bond_actions([1.0, 5.0 / 3.0, 4.0 / 3.0], [0.3, 0.5, 0.4])?;
    let (r2, r3) = chain.reflections();
    let g = build_chain(&chain)?;
    println!(
        "actions {:?}, reflections r2 = {r2:.4}, r3 = {r3:.4}",
        chain.actions()
    );

    let spectrum = solve_ladder(&g, &SolverConfig::new(6.0))?;
    println!("order M = {}", spectrum.order());
    for (m, table) in spectrum.tables.iter().enumerate() {
        println!("level {}: {} roots", spectrum.order() - m, table.len());
    }
    for r in spectrum.roots().roots.iter().take(8) {
        println!("k_{} = {:.14}", r.index, r.k);
    }
    Ok(spectrum.roots().len())
}

#[allow(dead_code)]
fn main() -> qgraph::Result<()> {
    run_example().map(|_| ())
}
