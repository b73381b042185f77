// Load a TOML graph description and solve it, as the `qgraph` binary does.

use qgraph::cli::{cmd_solve, GraphSpecFile};

const SPEC: &str = r#"
kind = "trig"
leading = { S0 = 2.0, gamma0 = 0.0 }

[[terms]]
S = 1.0
gamma = 0.25
a = 0.5

[solver]
k_max = 10.0
"#;

pub fn run_example() -> qgraph::Result<String> {
    let spec = GraphSpecFile::parse(SPEC, "inline")?;
    let config = spec.solver.solver_config()?;
    let mut csv = Vec::new();
    cmd_solve(&spec, &config, &mut csv, &mut std::io::stderr())?;
    let csv = String::from_utf8(csv).expect("ascii output");
    print!("{csv}");
    Ok(csv)
}

#[allow(dead_code)]
fn main() -> qgraph::Result<()> {
    run_example().map(|_| ())
}
