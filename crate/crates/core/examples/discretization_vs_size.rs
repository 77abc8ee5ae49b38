//! Error ratio of local thresholds to global discretization as the training
//! set grows, on a curved class boundary with label noise.

use c45::experiments::{discretization_experiment, render_scatter_csv, CvParams};
use c45::synthetic::wavy_boundary;
use c45::tree::GrowParams;

fn main() -> c45::Result<()> {
    let cv = CvParams {
        repeats: 5,
        ..Default::default()
    };
    let mut points = Vec::new();
    for (i, n) in [100, 200, 500, 1000, 2000].into_iter().enumerate() {
        let ds = wavy_boundary(n, 0.1, 0.1, 8, i as u64);
        let name = format!("wavy{n}");
        let result = discretization_experiment(&ds, &name, &GrowParams::default(), &cv)?;
        points.push((name, result.scatter));
    }
    print!(
        "{}",
        render_scatter_csv(&points, "local/global error ratio by size")
    );
    Ok(())
}
