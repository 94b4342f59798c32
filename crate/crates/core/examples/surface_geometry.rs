//! Charts, adapted frames and curvature on the built-in surfaces; writes
//! one OBJ per surface into `target/examples_out`.

use spinorsurf::charts::{compute_geometry, DerivativeMode};
use spinorsurf::export::write_obj;
use spinorsurf::grid::sup_over;
use spinorsurf::presets::{self, SphereKind};

fn main() -> spinorsurf::Result<()> {
    let out = std::path::Path::new("target/examples_out");
    std::fs::create_dir_all(out).map_err(|e| spinorsurf::Error::io(out, e))?;
    let charts = [
        presets::sphere(1.0, SphereKind::Capped { cap: 0.1 }, 64, 32)?,
        presets::catenoid(1.0, 64, 32)?,
        presets::helicoid(1.0, 48, 48)?,
        presets::enneper(1.0, 48, 48)?,
        presets::graph(0.3, 0.2, 48, 48)?,
    ];
    println!("{:<10} {:>10} {:>10} {:>10} {:>10}", "surface", "frame", "sup|H|", "min G", "max G");
    for chart in &charts {
        let geom = compute_geometry(chart, DerivativeMode::Analytic)?;
        let g = geom.gauss_curvature();
        println!(
            "{:<10} {:>10.1e} {:>10.4} {:>10.4} {:>10.4}",
            chart.name,
            geom.frame_defect(),
            sup_over(&geom.mean_curvature(), 0, |h| h.abs()),
            g.data.iter().copied().fold(f64::INFINITY, f64::min),
            g.data.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        );
        write_obj(&out.join(format!("{}.obj", chart.name)), &chart.name, &chart.grid, &chart.positions())?;
    }

    // finite differences against the analytic jets
    let chart = presets::enneper(1.0, 64, 64)?;
    let exact = compute_geometry(&chart, DerivativeMode::Analytic)?.gauss_curvature();
    let fd = compute_geometry(&chart, DerivativeMode::FiniteDifference { step: None })?.gauss_curvature();
    let err = exact.zip_map(&fd, |a, b| a - b);
    println!("enneper G, finite differences vs analytic: {:.2e}", sup_over(&err, 0, |x| x.abs()));
    Ok(())
}
