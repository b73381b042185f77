// Tabulate every ladder level on a grid, e.g. for plotting.

use qgraph::cli::{cmd_eval, EvalPoints, GraphSpec, GraphSpecFile};
use qgraph::trigcore::DEFAULT_MAX_ORDER;
use qgraph::StarGraphSpec;

pub fn run_example() -> qgraph::Result<String> {
    let spec = GraphSpecFile {
        graph: GraphSpec::Star(StarGraphSpec::from_actions(
            [1.0, 7.0, 11.0],
            [0.1, 0.2, 0.5],
        )?),
        solver: Default::default(),
    };
    let grid = EvalPoints::Grid {
        from: 0.0,
        to: 1.0,
        step: 0.05,
    };
    let mut csv = Vec::new();
    cmd_eval(&spec, DEFAULT_MAX_ORDER, &grid, &mut csv)?;
    let csv = String::from_utf8(csv).expect("ascii output");
    print!("{csv}");
    Ok(csv)
}

#[allow(dead_code)]
fn main() -> qgraph::Result<()> {
    run_example().map(|_| ())
}
