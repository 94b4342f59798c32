//! Minimal patches from holomorphic data: Enneper, catenoid, helicoid.

use num_complex::Complex64;
use spinorsurf::weierstrass::{holomorphy_check, minimality_check, weierstrass_immersion, weierstrass_point, HoloData, WeierstrassPreset};

fn main() -> spinorsurf::Result<()> {
    let z0 = Complex64::new(0.0, 0.0);
    for preset in [WeierstrassPreset::Enneper, WeierstrassPreset::Catenoid, WeierstrassPreset::Helicoid] {
        let data = HoloData::preset(preset);
        let patch = weierstrass_immersion(&data, 64, 64, z0)?;
        let holo = holomorphy_check(&data, &patch.grid);
        let min = minimality_check(&patch)?;
        println!(
            "{preset:?}: sup|H| {:.1e}, conformality {:.1e}, CR {:.1e}",
            min.max_mean_curvature, min.conformality, holo.cr_g
        );
    }

    // Enneper in closed form at z = 1: (2/3, 0, 1) up to orientation
    let p = weierstrass_point(&HoloData::preset(WeierstrassPreset::Enneper), z0, Complex64::new(1.0, 0.0), 64);
    println!("enneper(1) = ({:.6}, {:.6}, {:.6})", p[0], p[1], p[2]);
    Ok(())
}
