// Build the derivative ladder and inspect where regularity sets in.

use qgraph::trigcore::DEFAULT_MAX_ORDER;
use qgraph::{build_ladder, normalize, Term};

pub fn run_example() -> qgraph::Result<usize> {
    // cos(10k) - 0.6 cos(9k) - 0.5 cos(3k + π/3): irregular until the 9k term is damped
    let g = normalize(
        (10.0, 0.0),
        &[Term::new(9.0, 0.0, 0.6), Term::new(3.0, -1.0 / 3.0, 0.5)],
    )?;
    let ladder = build_ladder(&g, DEFAULT_MAX_ORDER)?;
    for (m, level) in ladder.levels().iter().enumerate() {
        let amps: Vec<String> = level
            .terms()
            .iter()
            .map(|t| format!("{:.4}", t.amplitude))
            .collect();
        println!(
            "g^({m}): gamma0 = {:.2}, amplitudes [{}], sum = {:.4}",
            level.gamma0(),
            amps.join(", "),
            level.regularity_sum()
        );
    }
    println!("order M = {}", ladder.order());
    Ok(ladder.order())
}

#[allow(dead_code)]
fn main() -> qgraph::Result<()> {
    run_example().map(|_| ())
}
