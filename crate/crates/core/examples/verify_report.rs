//! Running the verification suite from a JSON config and reading the report.

use spinorsurf::config::RunConfig;
use spinorsurf::verify;

fn main() -> spinorsurf::Result<()> {
    let cfg = RunConfig::from_json(
        r#"{
            "surfaces": [{"preset": "enneper"}, {"preset": "catenoid"}, {"preset": "weierstrass", "data": "helicoid"}],
            "grids": [[24, 24], [48, 48], [96, 96]],
            "checks": ["spinor.", "periods.closed", "weierstrass."]
        }"#,
    )?;
    let report = verify::run(&cfg);
    for e in &report.entries {
        println!(
            "{} {:<34} {:<22} {:>10} order {}",
            if e.pass { "PASS" } else { "FAIL" },
            e.check_id,
            e.surface,
            e.residual.map_or("-".into(), |r| format!("{r:.2e}")),
            e.measured_order.map_or("-".into(), |o| format!("{o:.2}")),
        );
    }
    println!("{} passed, {} failed", report.passed, report.failed);
    Ok(())
}
