//! The endomorphism `E` read off `phi*`, compared with the second
//! fundamental form, and the two forms `F+` and `F-`.

use spinorsurf::algebra::Spinor;
use spinorsurf::charts::{compute_geometry, DerivativeMode};
use spinorsurf::grid::sup_over;
use spinorsurf::presets;
use spinorsurf::spinor::{codazzi_residual, extract_e, forms_f, second_fundamental_form_residual, SpinorFieldGrid};

fn main() -> spinorsurf::Result<()> {
    let chart = presets::graph(0.3, 0.2, 96, 96)?;
    let geom = compute_geometry(&chart, DerivativeMode::Analytic)?;
    let phi = SpinorFieldGrid::restrict_parallel(&geom, Spinor::from_parts(1.0, 0.0, 0.3, -0.2), 0)?.star();
    let endo = extract_e(&phi, &geom)?;
    let sup = |f: &spinorsurf::grid::ScalarField| sup_over(f, 2, |x| *x);

    println!("E - E^T        {:.2e}", sup(&endo.asymmetry));
    println!("Tr E + H       {:.2e}", sup(&endo.trace));
    println!("det E - G/4    {:.2e}", sup(&endo.det));
    println!("twistor        {:.2e}", sup(&endo.twistor));
    println!("codazzi        {:.2e}", sup(&codazzi_residual(&endo.e, &geom)));
    // 2E = -II
    println!("2E + II        {:.2e}", sup(&second_fundamental_form_residual(&endo.e, &geom, -1.0)));

    let centre = chart.grid.len() / 2;
    let e = endo.e[centre];
    println!("E at the centre: [[{:.4}, {:.4}], [{:.4}, {:.4}]]", e[0][0], e[0][1], e[1][0], e[1][1]);

    let forms = forms_f(&phi, &geom);
    println!("F symmetric    {:.2e}", sup(&forms.asymmetry));
    println!("F traces       {:.2e}", sup(&forms.trace));
    println!("F relation     {:.2e}", sup(&forms.relation));
    Ok(())
}
