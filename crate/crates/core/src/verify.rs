//! Check catalogue and report assembly.
//!
//! Every check measures one residual. Sweep checks evaluate it on each
//! configured grid, always over the region left after insetting the
//! coarsest grid by the check's margin, and derive the convergence order
//! from successive grids. Exact checks run once on the finest grid.

use std::cell::OnceCell;
use std::f64::consts::PI;

use nalgebra::{Rotation3, Unit, Vector3};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{self, alpha, basis_mul, clifford_mul, split_pm, star_spinor, Spinor};
use crate::charts::{
    cell_average, compute_geometry, exterior_d_cells, ChartSpec, DerivativeMode, GeometryField, IntrinsicGeometry,
    SurfaceMap,
};
use crate::config::{RunConfig, SphereChart, SurfaceConfig};
use crate::grid::{inset, sup_within, Field, ScalarField};
use crate::periods::{
    self, closedness_report, conformal_covariance, conformal_eigen_residual, diameter, hessian_report,
    integral_identities, metric_defect, period_forms, reconstruct, rigid_align, rigid_align_points,
    torus_eigenspinor, ClosednessReport, Reconstruction,
};
use crate::presets::{self, SphereKind};
use crate::spinor::{
    codazzi_residual, dirac, dirac_square_residual, extract_e, forms_f, laplacian_identities, restriction_residual,
    second_fundamental_form_residual, twistor_residual, EndoReport, FormsReport, SpinorFieldGrid,
};
use crate::weierstrass::{holomorphy_check, minimality_check, weierstrass_point, HoloData, WeierstrassPreset};

/// Finest residual below which an order is not meaningful.
pub const ROUNDOFF_FLOOR: f64 = 1e-10;

/// Samples per randomized algebra check.
pub const ALGEBRA_SAMPLES: usize = 1000;

/// Sign `s` in `2E = s II` for `phi*`; the same for every surface.
pub const SFF_SIGN: f64 = -1.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub grid: String,
    pub residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Entry {
    pub check_id: String,
    /// The identity being measured.
    pub anchor: String,
    pub surface: String,
    pub grid: String,
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measured_order: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_order: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sweep: Vec<SweepPoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Conventions {
    pub orientation: &'static str,
    pub representation: &'static str,
    pub alpha: &'static str,
    pub laplacian: &'static str,
    pub connection: &'static str,
    pub restriction: &'static str,
    pub second_fundamental_form: &'static str,
    pub norms: &'static str,
    pub order: &'static str,
}

pub const CONVENTIONS: Conventions = Conventions {
    orientation: "N = x_u x x_v / |x_u x x_v|, e1 = x_u / |x_u|, e2 completes (e1, e2, N) positively; outward unit sphere has H = G = 1",
    representation: "E_j = -i sigma_j; in frame gauge phi+ = (c1, 0), phi- = (0, c2), i N phi+ = phi+",
    alpha: "alpha(c1, c2) = (-conj c2, conj c1), conjugate linear, alpha^2 = -1",
    laplacian: "positive: Delta f = -g^ij (f_ij - Gamma^k_ij f_k); spinor Delta = -(nabla_1 nabla_1 + nabla_2 nabla_2 - omega_1 nabla_2 + omega_2 nabla_1)",
    connection: "omega(X) = <nabla_X e1, e2>, nabla_X phi = X(phi) + 1/2 omega(X) E3 phi, d omega = -G dA",
    restriction: "nabla_X phi = 1/2 II(X) N phi for a parallel ambient spinor; phi* = phi+ - i phi-",
    second_fundamental_form: "II(X) = dN(X); 2E = -II for phi*",
    norms: "sup over nodes at least `margin` coarsest-grid spacings from non-periodic edges; cell checks use whole cells inside that region",
    order: "log(r_coarse / r_fine) / log(n_fine / n_coarse), minimum over successive grids; waived when the finest residual is below 1e-10",
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub conventions: Conventions,
    pub entries: Vec<Entry>,
    pub passed: usize,
    pub failed: usize,
}

impl Report {
    pub fn new(seed: u64, mut entries: Vec<Entry>) -> Self {
        entries.sort_by(|a, b| (&a.check_id, &a.surface).cmp(&(&b.check_id, &b.surface)));
        let failed = entries.iter().filter(|e| !e.pass).count();
        Report {
            tool: "spinorsurf",
            version: env!("CARGO_PKG_VERSION"),
            seed,
            conventions: CONVENTIONS,
            passed: entries.len() - failed,
            failed,
            entries,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn find(&self, check_id: &str, surface: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.check_id == check_id && e.surface == surface)
    }
}

pub fn grid_label(g: [usize; 2]) -> String {
    format!("{}x{}", g[0], g[1])
}

/// Minimum order over successive residuals; `None` when undefined.
pub fn measured_order(points: &[([usize; 2], f64)]) -> Option<f64> {
    let orders: Vec<f64> = points
        .windows(2)
        .map(|w| {
            let ratio = w[1].0[0].max(w[1].0[1]) as f64 / w[0].0[0].max(w[0].0[1]) as f64;
            (w[0].1 / w[1].1).ln() / ratio.ln()
        })
        .collect();
    if orders.is_empty() || orders.iter().any(|o| o.is_nan()) {
        return None;
    }
    Some(orders.into_iter().fold(f64::INFINITY, f64::min))
}

fn judge(residual: Option<f64>, tolerance: f64, order: Option<f64>, min_order: Option<f64>) -> bool {
    let Some(r) = residual else { return false };
    let order_ok = match (min_order, order) {
        (Some(min), Some(o)) => r < ROUNDOFF_FLOOR || o >= min,
        (Some(_), None) => true,
        (None, _) => true,
    };
    r.is_finite() && r <= tolerance && order_ok
}

type Measured = std::result::Result<f64, String>;

/// One chart resolution with the fields every check draws from. Derived
/// quantities are computed on first use.
pub struct Sample {
    pub chart: ChartSpec,
    pub geom: GeometryField,
    /// Restriction of the ambient parallel spinor.
    pub phi: SpinorFieldGrid,
    pub star: SpinorFieldGrid,
    endo: OnceCell<std::result::Result<EndoReport, String>>,
    forms: OnceCell<FormsReport>,
    closed: OnceCell<ClosednessReport>,
    recon: OnceCell<std::result::Result<Reconstruction, String>>,
}

impl Sample {
    pub fn new(chart: ChartSpec, mode: DerivativeMode, ambient: Spinor) -> crate::Result<Self> {
        let geom = compute_geometry(&chart, mode)?;
        let phi = SpinorFieldGrid::restrict_parallel(&geom, ambient, 0)?;
        let star = phi.star();
        Ok(Sample {
            chart,
            geom,
            phi,
            star,
            endo: OnceCell::new(),
            forms: OnceCell::new(),
            closed: OnceCell::new(),
            recon: OnceCell::new(),
        })
    }

    pub fn endo(&self) -> std::result::Result<&EndoReport, String> {
        self.endo
            .get_or_init(|| extract_e(&self.star, &self.geom).map_err(|e| e.to_string()))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn forms(&self) -> &FormsReport {
        self.forms.get_or_init(|| forms_f(&self.star, &self.geom))
    }

    pub fn closedness(&self) -> &ClosednessReport {
        self.closed
            .get_or_init(|| closedness_report(&period_forms(&self.star), &self.star, &self.geom))
    }

    /// Reconstruction from `phi*`, based at the central node.
    pub fn reconstruction(&self) -> std::result::Result<&Reconstruction, String> {
        self.recon
            .get_or_init(|| {
                let g = self.geom.grid;
                reconstruct(&period_forms(&self.star), &self.geom, g.index(g.n_u / 2, g.n_v / 2))
                    .map_err(|e| e.to_string())
            })
            .as_ref()
            .map_err(Clone::clone)
    }
}

fn sup(f: &ScalarField, region: [f64; 2]) -> f64 {
    sup_within(f, region, |x| *x)
}

fn sup_pointwise<T>(f: &Field<T>, region: [f64; 2], norm: impl Fn(&T) -> f64) -> f64 {
    sup_within(f, region, norm)
}

// ---- sweep measurements -------------------------------------------------

fn structure_equation(s: &Sample, region: [f64; 2]) -> Measured {
    let dw = exterior_d_cells(&s.geom.connection_form(), &s.geom);
    let g = cell_average(&s.geom.gauss_curvature());
    let r = crate::charts::CellField {
        grid: dw.grid,
        data: dw.data.iter().zip(&g.data).map(|(a, b)| a + b).collect(),
    };
    Ok(r.sup_within(region))
}

fn restriction(s: &Sample, region: [f64; 2]) -> Measured {
    Ok(sup(&restriction_residual(&s.phi, &s.geom), region))
}

fn dirac_restricted(s: &Sample, region: [f64; 2]) -> Measured {
    let d = dirac(&s.phi, &s.geom);
    let r = Field::from_fn(s.geom.grid, |n| {
        (d.values[n] + basis_mul(2, &s.phi.values[n]) * s.geom.nodes[n].mean).norm()
    });
    Ok(sup(&r, region))
}

fn dirac_star(s: &Sample, region: [f64; 2]) -> Measured {
    let d = dirac(&s.star, &s.geom);
    let r = Field::from_fn(s.geom.grid, |n| {
        (d.values[n] - s.star.values[n] * s.geom.nodes[n].mean).norm()
    });
    Ok(sup(&r, region))
}

fn forms_symmetry(s: &Sample, region: [f64; 2]) -> Measured {
    Ok(sup(&s.forms().asymmetry, region))
}

fn forms_trace(s: &Sample, region: [f64; 2]) -> Measured {
    Ok(sup(&s.forms().trace, region))
}

fn forms_relation(s: &Sample, region: [f64; 2]) -> Measured {
    Ok(sup(&s.forms().relation, region))
}

fn endo_symmetry(s: &Sample, region: [f64; 2]) -> Measured {
    Ok(sup(&s.endo()?.asymmetry, region))
}

fn endo_trace(s: &Sample, region: [f64; 2]) -> Measured {
    Ok(sup(&s.endo()?.trace, region))
}

fn endo_det(s: &Sample, region: [f64; 2]) -> Measured {
    Ok(sup(&s.endo()?.det, region))
}

fn twistor(s: &Sample, region: [f64; 2]) -> Measured {
    Ok(sup(&s.endo()?.twistor, region))
}

fn codazzi(s: &Sample, region: [f64; 2]) -> Measured {
    Ok(sup(&codazzi_residual(&s.endo()?.e, &s.geom), region))
}

fn sff_sign(s: &Sample, region: [f64; 2]) -> Measured {
    Ok(sup(&second_fundamental_form_residual(&s.endo()?.e, &s.geom, SFF_SIGN), region))
}

fn laplacian_pm(s: &Sample, region: [f64; 2]) -> Measured {
    Ok(sup(&laplacian_identities(&s.star, &s.geom).l_pm, region))
}

fn laplacian_u(s: &Sample, region: [f64; 2]) -> Measured {
    Ok(sup(&laplacian_identities(&s.star, &s.geom).u, region))
}

/// Divided by the curvature scale `max(1, sup |G|)`; unchanged on the unit sphere.
fn dirac_square(s: &Sample, region: [f64; 2]) -> Measured {
    let scale = sup_pointwise(&s.geom.gauss_curvature(), region, |g| g.abs()).max(1.0);
    Ok(sup(&dirac_square_residual(&s.phi, &s.geom), region) / scale)
}

fn closed_w(s: &Sample, region: [f64; 2]) -> Measured {
    Ok(s.closedness().dw.sup_within(region))
}

fn closed_omega(s: &Sample, region: [f64; 2]) -> Measured {
    Ok(s.closedness().domega.sup_within(region))
}

fn closed_mu(s: &Sample, region: [f64; 2]) -> Measured {
    Ok(s.closedness().dmu.sup_within(region))
}

fn round_trip(s: &Sample, _region: [f64; 2]) -> Measured {
    let rec = s.reconstruction()?;
    let fit = rigid_align(&rec.immersion, &s.chart);
    Ok(fit.rms / diameter(&s.chart.positions()))
}

fn first_fundamental_form(s: &Sample, region: [f64; 2]) -> Measured {
    let rec = s.reconstruction()?;
    let m = metric_defect(&rec.immersion, &s.geom).map_err(|e| e.to_string())?;
    Ok(sup(&m, region))
}

fn hessian(s: &Sample, region: [f64; 2], pick: fn(&periods::HessianReport) -> &ScalarField) -> Measured {
    let rec = s.reconstruction()?;
    let rep = hessian_report(&s.star, &s.geom, &s.endo()?.e, &rec.immersion);
    Ok(sup(pick(&rep), region))
}

fn hessian_a(s: &Sample, r: [f64; 2]) -> Measured {
    hessian(s, r, |h| &h.a)
}

fn hessian_b(s: &Sample, r: [f64; 2]) -> Measured {
    hessian(s, r, |h| &h.b)
}

fn hessian_c(s: &Sample, r: [f64; 2]) -> Measured {
    hessian(s, r, |h| &h.c)
}

fn hessian_d(s: &Sample, r: [f64; 2]) -> Measured {
    hessian(s, r, |h| &h.d)
}

fn hessian_d_hermitian(s: &Sample, r: [f64; 2]) -> Measured {
    hessian(s, r, |h| &h.d_hermitian)
}

fn hessian_det(s: &Sample, r: [f64; 2]) -> Measured {
    hessian(s, r, |h| &h.det)
}

// ---- exact measurements, finest grid ------------------------------------

fn frame_defect(s: &Sample, _region: [f64; 2]) -> Measured {
    Ok(s.geom.frame_defect())
}

fn alpha_invariance(s: &Sample, region: [f64; 2]) -> Measured {
    let e = s.endo()?;
    let a = twistor_residual(&s.star.alpha(), &e.e, &s.geom);
    Ok(sup_pointwise(&a.zip_map(&e.twistor, |x, y| (x - y).abs()), region, |x| *x))
}

fn hodge_types(s: &Sample, _region: [f64; 2]) -> Measured {
    let r = periods::hodge_report(&period_forms(&s.star));
    Ok(r.xi.max(r.xi_plus).max(r.xi_minus).max(r.split))
}

fn constant_factor(s: &Sample, _region: [f64; 2]) -> Measured {
    let base = IntrinsicGeometry::of(&s.geom);
    let sigma = Field::from_fn(s.geom.grid, |_| 2.7);
    let r = conformal_covariance(&s.star, &sigma, &base).map_err(|e| e.to_string())?;
    Ok(r.data.iter().fold(0.0, |a: f64, b| a.max(*b)))
}

// ---- catalogue ----------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq)]
enum Stage {
    /// Every grid of the sweep, on the surface's own chart.
    Sweep,
    /// Every grid, on the chart used for reconstruction.
    PatchSweep,
    /// Finest grid only.
    Exact,
}

struct Check {
    id: &'static str,
    anchor: &'static str,
    tol: f64,
    min_order: Option<f64>,
    margin: usize,
    stage: Stage,
    applies: fn(&SurfaceConfig) -> bool,
    measure: fn(&Sample, [f64; 2]) -> Measured,
}

fn immersed(s: &SurfaceConfig) -> bool {
    !matches!(s, SurfaceConfig::FlatTorus | SurfaceConfig::Weierstrass { .. })
}

fn sphere(s: &SurfaceConfig) -> bool {
    s.is_sphere()
}

/// Surfaces with a non-periodic chart to reconstruct on.
fn patchable(s: &SurfaceConfig) -> bool {
    immersed(s) && (sphere(s) || !matches!(s, SurfaceConfig::Catenoid { .. }))
}

const fn sweep(
    id: &'static str,
    anchor: &'static str,
    tol: f64,
    min_order: f64,
    margin: usize,
    measure: fn(&Sample, [f64; 2]) -> Measured,
) -> Check {
    Check {
        id,
        anchor,
        tol,
        min_order: Some(min_order),
        margin,
        stage: Stage::Sweep,
        applies: immersed,
        measure,
    }
}

const fn hess(id: &'static str, anchor: &'static str, measure: fn(&Sample, [f64; 2]) -> Measured) -> Check {
    Check {
        id,
        anchor,
        tol: 1e-2,
        min_order: Some(1.5),
        margin: 2,
        stage: Stage::PatchSweep,
        applies: sphere,
        measure,
    }
}

const fn exact(id: &'static str, anchor: &'static str, margin: usize, measure: fn(&Sample, [f64; 2]) -> Measured) -> Check {
    Check {
        id,
        anchor,
        tol: 1e-12,
        min_order: None,
        margin,
        stage: Stage::Exact,
        applies: immersed,
        measure,
    }
}

const CHECKS: &[Check] = &[
    exact("charts.frame", "(e1, e2, N) orthonormal", 0, frame_defect),
    sweep("charts.structure_equation", "d omega_12 = -G dA", 1e-3, 1.8, 1, structure_equation),
    sweep("spinor.restriction", "nabla_X phi = 1/2 II(X) N phi", 1e-3, 1.8, 1, restriction),
    sweep("spinor.dirac", "D phi = -H N phi", 1e-3, 1.8, 1, dirac_restricted),
    sweep("spinor.dirac_star", "D phi* = H phi*", 1e-3, 1.8, 1, dirac_star),
    sweep("spinor.forms_symmetry", "F+, F- symmetric", 1e-3, 1.8, 1, forms_symmetry),
    sweep("spinor.forms_trace", "Tr F+ = -H |phi-|^2, Tr F- = -H |phi+|^2", 1e-3, 1.8, 1, forms_trace),
    sweep("spinor.forms_relation", "|phi+|^2 F+ = |phi-|^2 F-", 1e-3, 1.8, 1, forms_relation),
    sweep("spinor.endomorphism_symmetry", "E symmetric", 1e-3, 1.8, 1, endo_symmetry),
    sweep("spinor.endomorphism_trace", "Tr E = -H", 1e-3, 1.8, 1, endo_trace),
    sweep("spinor.endomorphism_det", "det E = G/4", 1e-3, 1.8, 1, endo_det),
    sweep("spinor.twistor", "nabla_X phi* = E(X) phi*", 1e-3, 1.8, 1, twistor),
    sweep("spinor.codazzi", "(nabla_X E)Y = (nabla_Y E)X", 1e-3, 1.5, 2, codazzi),
    sweep("spinor.second_fundamental_form", "2E = -II", 1e-3, 1.8, 1, sff_sign),
    sweep(
        "spinor.laplacian_pm",
        "Delta |phi+-|^2 = 2(H^2 - G/2)(|phi+-|^2 - |phi-+|^2) + 2 Re(grad H phi-+, phi+-)",
        1e-2,
        1.5,
        1,
        laplacian_pm,
    ),
    Check {
        id: "spinor.laplacian_u",
        anchor: "Delta u = 4(H^2 - G/2) u, u = |phi+|^2 - |phi-|^2",
        tol: 1e-2,
        min_order: Some(1.5),
        margin: 1,
        stage: Stage::Sweep,
        applies: sphere,
        measure: laplacian_u,
    },
    sweep("spinor.dirac_square", "D^2 = Delta + G/2, relative to max(1, sup |G|)", 1e-3, 1.5, 2, dirac_square),
    exact("spinor.alpha_invariance", "alpha phi* solves the same twistor equation", 1, alpha_invariance),
    exact("periods.hodge", "*xi = -i xi, *xi+ = -i xi+, *xi- = i xi-, xi = w + i mu", 0, hodge_types),
    sweep("periods.closed_w", "dw = 0", 1e-3, 1.8, 1, closed_w),
    sweep("periods.closed_omega", "d Omega = 0", 1e-3, 1.8, 1, closed_omega),
    sweep("periods.dmu", "d mu = 2H(|phi-|^2 - |phi+|^2) dA", 1e-3, 1.8, 1, closed_mu),
    Check {
        id: "periods.round_trip",
        anchor: "F = (f, g) integrated from (w, Omega) is congruent to x; RMS / diameter",
        tol: 1e-3,
        min_order: None,
        margin: 0,
        stage: Stage::PatchSweep,
        applies: patchable,
        measure: round_trip,
    },
    Check {
        id: "periods.metric",
        anchor: "F* <,> = g, relative",
        tol: 1e-3,
        min_order: None,
        margin: 0,
        stage: Stage::PatchSweep,
        applies: patchable,
        measure: first_fundamental_form,
    },
    hess("periods.hessian_f", "Hess f = 2(|phi+|^2 - |phi-|^2) E", hessian_a),
    hess("periods.gradient_f", "|grad f|^2 = 4 |phi+|^2 |phi-|^2", hessian_b),
    hess("periods.hessian_g", "Hess g = -4 (phi-, alpha phi+) E", hessian_c),
    hess("periods.gradient_g", "|grad g|^2 = (|phi+|^2 - |phi-|^2)^2", hessian_d),
    hess("periods.gradient_g_hermitian", "|grad g|^2 = 2(|phi+|^4 + |phi-|^4)", hessian_d_hermitian),
    hess("periods.det_hessian_f", "det Hess f = (|phi+|^2 - |phi-|^2)^2 G", hessian_det),
    exact("conformal.constant", "sigma = c: D~ = c^(-1/2) D", 0, constant_factor),
];

// ---- driver -------------------------------------------------------------

struct Ctx<'a> {
    cfg: &'a RunConfig,
    entries: Vec<Entry>,
}

impl Ctx<'_> {
    fn tol(&self, id: &str, default: f64) -> f64 {
        self.cfg.tolerances.get(id).copied().unwrap_or(default)
    }

    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        id: &str,
        anchor: &str,
        surface: &str,
        default_tol: f64,
        min_order: Option<f64>,
        points: Vec<([usize; 2], Measured)>,
        grid: String,
    ) {
        let tolerance = self.tol(id, default_tol);
        let note = points.iter().find_map(|(_, r)| r.as_ref().err().cloned());
        let residual = points.last().and_then(|(_, r)| r.as_ref().ok().copied());
        let ok: Vec<([usize; 2], f64)> = points
            .iter()
            .filter_map(|(g, r)| r.as_ref().ok().map(|x| (*g, *x)))
            .collect();
        let sweeping = points.len() > 1;
        let order = if sweeping && ok.len() == points.len() {
            measured_order(&ok)
        } else {
            None
        };
        let pass = note.is_none() && judge(residual, tolerance, order, if sweeping { min_order } else { None });
        self.entries.push(Entry {
            check_id: id.to_owned(),
            anchor: anchor.to_owned(),
            surface: surface.to_owned(),
            grid,
            residual,
            measured_order: order.filter(|o| o.is_finite()),
            min_order: if sweeping { min_order } else { None },
            tolerance,
            pass,
            sweep: if sweeping {
                points
                    .iter()
                    .map(|(g, r)| SweepPoint {
                        grid: grid_label(*g),
                        residual: r.as_ref().ok().copied(),
                    })
                    .collect()
            } else {
                Vec::new()
            },
            note,
        });
    }

    fn single(&mut self, id: &str, anchor: &str, surface: &str, tol: f64, grid: &str, r: Measured) {
        if self.cfg.wants(id) {
            self.push(id, anchor, surface, tol, None, vec![([0, 0], r)], grid.to_owned());
        }
    }
}

/// Runs every selected check for the configured surfaces.
pub fn run(cfg: &RunConfig) -> Report {
    let mut ctx = Ctx {
        cfg,
        entries: Vec::new(),
    };
    algebra_checks(&mut ctx);
    for surface in &cfg.surfaces {
        match surface {
            SurfaceConfig::Weierstrass { data } => weierstrass_checks(&mut ctx, *data, &surface.label()),
            SurfaceConfig::FlatTorus => torus_checks(&mut ctx),
            _ => surface_checks(&mut ctx, surface),
        }
    }
    Report::new(cfg.seed, ctx.entries)
}

fn build_samples(cfg: &RunConfig, surface: &SurfaceConfig) -> std::result::Result<Vec<Sample>, String> {
    cfg.grids
        .iter()
        .map(|g| {
            let chart = surface.build(g[0], g[1])?;
            Sample::new(chart, cfg.derivative_mode, cfg.spinor())
        })
        .collect::<crate::Result<Vec<_>>>()
        .map_err(|e| e.to_string())
}

/// The chart the reconstruction checks use: spheres switch to a patch.
pub fn patch_surface(surface: &SurfaceConfig) -> SurfaceConfig {
    match *surface {
        SurfaceConfig::Sphere { radius, cap, .. } => SurfaceConfig::Sphere {
            radius,
            chart: SphereChart::Patch,
            cap,
        },
        ref other => other.clone(),
    }
}

fn surface_checks(ctx: &mut Ctx, surface: &SurfaceConfig) {
    let label = surface.label();
    let wanted: Vec<&Check> = CHECKS
        .iter()
        .filter(|c| (c.applies)(surface) && ctx.cfg.wants(c.id))
        .collect();
    let needs_patch = wanted.iter().any(|c| c.stage == Stage::PatchSweep);
    let main = build_samples(ctx.cfg, surface);
    let patch_cfg = patch_surface(surface);
    let patch = if !needs_patch {
        None
    } else if patch_cfg == *surface {
        None
    } else {
        Some(build_samples(ctx.cfg, &patch_cfg))
    };
    for c in wanted {
        let samples = match (c.stage, &patch) {
            (Stage::PatchSweep, Some(p)) => p,
            _ => &main,
        };
        let surface_label = if c.stage == Stage::PatchSweep { patch_cfg.label() } else { label.clone() };
        let samples = match samples {
            Ok(s) => s,
            Err(e) => {
                let finest = ctx.cfg.finest();
                ctx.push(c.id, c.anchor, &surface_label, c.tol, c.min_order, vec![(finest, Err(e.clone()))], grid_label(finest));
                continue;
            }
        };
        let region = inset(&samples[0].geom.grid, c.margin);
        let picked: Vec<&Sample> = match c.stage {
            Stage::Exact => vec![samples.last().expect("validated")],
            _ => samples.iter().collect(),
        };
        let points: Vec<([usize; 2], Measured)> = picked
            .iter()
            .map(|s| ([s.geom.grid.n_u, s.geom.grid.n_v], (c.measure)(s, region)))
            .collect();
        let grid = grid_label(points.last().expect("non-empty").0);
        ctx.push(c.id, c.anchor, &surface_label, c.tol, c.min_order, points, grid);
    }
    if surface.is_sphere() {
        integral_checks(ctx, surface);
    }
}

/// Resolution of the closed-sphere quadrature checks.
pub const INTEGRAL_GRID: [usize; 2] = [256, 128];

fn integral_checks(ctx: &mut Ctx, surface: &SurfaceConfig) {
    let SurfaceConfig::Sphere { radius, .. } = *surface else { return };
    let ids = [
        "integral.total_curvature",
        "integral.normal_component",
        "integral.six",
        "integral.min_plus",
        "integral.min_minus",
    ];
    if !ids.iter().any(|id| ctx.cfg.wants(id)) {
        return;
    }
    let label = SurfaceConfig::Sphere {
        radius,
        chart: SphereChart::Full,
        cap: 0.1,
    }
    .label();
    let grid = grid_label(INTEGRAL_GRID);
    let rep = presets::sphere(radius, SphereKind::Full, INTEGRAL_GRID[0], INTEGRAL_GRID[1])
        .and_then(|c| compute_geometry(&c, ctx.cfg.derivative_mode))
        .and_then(|g| integral_identities(&g, &ctx.cfg.spinor()))
        .map_err(|e| e.to_string());
    let get = |f: fn(&periods::IntegralReport) -> f64| rep.as_ref().map(f).map_err(Clone::clone);
    let n4 = ctx.cfg.spinor().norm_sqr().powi(2);
    ctx.single(ids[0], "int G dA = 4 pi", &label, 1e-3, &grid, get(|r| (r.total_curvature - 4.0 * PI).abs()));
    ctx.single(ids[1], "int G = 3 int <N, a3>^2 G", &label, 1e-3, &grid, get(|r| r.a3_defect.abs()));
    ctx.single(
        ids[2],
        "int (|phi|^4 - 6 |phi+|^2 |phi-|^2) G = 0",
        &label,
        1e-3,
        &grid,
        get(|r| r.six_defect.abs()).map(|x| x / n4),
    );
    ctx.single(ids[3], "min |phi+| = 0 (pole)", &label, 1e-2, &grid, get(|r| r.min_plus));
    ctx.single(ids[4], "min |phi-| = 0 (pole)", &label, 1e-2, &grid, get(|r| r.min_minus));
}

/// Smooth periodic factor `exp(sum a_k cos(m_k u + n_k v + t_k))` with
/// seeded coefficients, `|log sigma| <= 0.4`.
pub fn random_factor(seed: u64, grid: crate::grid::Grid) -> ScalarField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5157_0a11);
    let modes: Vec<(f64, f64, f64, f64)> = (0..4)
        .map(|_| {
            (
                rng.gen_range(-0.1..0.1),
                rng.gen_range(0..3) as f64,
                rng.gen_range(-2..3) as f64,
                rng.gen_range(0.0..2.0 * PI),
            )
        })
        .collect();
    Field::from_fn(grid, |n| {
        let (u, v) = grid.coords(n);
        modes.iter().map(|(a, m, k, t)| a * (m * u + k * v + t).cos()).sum::<f64>().exp()
    })
}

fn torus_checks(ctx: &mut Ctx) {
    let cfg = ctx.cfg;
    let label = SurfaceConfig::FlatTorus.label();
    let geoms: std::result::Result<Vec<GeometryField>, String> = cfg
        .grids
        .iter()
        .map(|g| presets::flat_torus(g[0], g[1]).and_then(|c| compute_geometry(&c, cfg.derivative_mode)))
        .collect::<crate::Result<_>>()
        .map_err(|e| e.to_string());
    let measure = |f: &dyn Fn(&GeometryField) -> Measured| -> Vec<([usize; 2], Measured)> {
        match &geoms {
            Ok(gs) => gs.iter().map(|g| ([g.grid.n_u, g.grid.n_v], f(g))).collect(),
            Err(e) => vec![(cfg.finest(), Err(e.clone()))],
        }
    };
    let max = |f: ScalarField| f.data.iter().fold(0.0, |a: f64, b| a.max(*b));
    let finest = grid_label(cfg.finest());
    if cfg.wants("conformal.random") {
        let pts = measure(&|g| {
            let phi = torus_eigenspinor(g.grid);
            let base = IntrinsicGeometry::of(g);
            let sigma = random_factor(cfg.seed, g.grid);
            conformal_covariance(&phi, &sigma, &base).map(max).map_err(|e| e.to_string())
        });
        ctx.push(
            "conformal.random",
            "D~ phi = sigma^(-3/4) D(sigma^(1/4) phi), g~ = sigma g",
            &label,
            1e-3,
            Some(1.8),
            pts,
            finest.clone(),
        );
    }
    if cfg.wants("conformal.eigen") {
        let pts = measure(&|g| {
            conformal_eigen_residual(&torus_eigenspinor(g.grid), 1.0, g)
                .map(max)
                .map_err(|e| e.to_string())
        });
        ctx.push(
            "conformal.eigen",
            "D phi = phi => D~ phi* = |phi|^-2 phi* for g~ = |phi|^4 g",
            &label,
            1e-2,
            Some(1.8),
            pts,
            finest.clone(),
        );
    }
    if cfg.wants("conformal.constant") {
        let pts = measure(&|g| {
            let sigma = Field::from_fn(g.grid, |_| 2.7);
            conformal_covariance(&torus_eigenspinor(g.grid), &sigma, &IntrinsicGeometry::of(g))
                .map(max)
                .map_err(|e| e.to_string())
        });
        let last = pts.into_iter().last().expect("non-empty");
        ctx.push("conformal.constant", "sigma = c: D~ = c^(-1/2) D", &label, 1e-12, None, vec![last], finest);
    }
}

fn weierstrass_checks(ctx: &mut Ctx, preset: WeierstrassPreset, label: &str) {
    let cfg = ctx.cfg;
    let data = HoloData::preset(preset);
    let z0 = Complex64::new(0.0, 0.0);
    let finest = grid_label(cfg.finest());
    let charts: std::result::Result<Vec<ChartSpec>, String> = cfg
        .grids
        .iter()
        .map(|g| crate::weierstrass::weierstrass_immersion(&data, g[0], g[1], z0))
        .collect::<crate::Result<_>>()
        .map_err(|e| e.to_string());
    let sweep_of = |f: &dyn Fn(&ChartSpec) -> Measured| -> Vec<([usize; 2], Measured)> {
        match &charts {
            Ok(cs) => cs.iter().map(|c| ([c.grid.n_u, c.grid.n_v], f(c))).collect(),
            Err(e) => vec![(cfg.finest(), Err(e.clone()))],
        }
    };
    if cfg.wants("weierstrass.minimality") {
        let pts = sweep_of(&|c| minimality_check(c).map(|r| r.max_mean_curvature).map_err(|e| e.to_string()));
        ctx.push("weierstrass.minimality", "H = 0", label, 1e-3, Some(1.8), pts, finest.clone());
    }
    if cfg.wants("weierstrass.conformality") {
        let pts = sweep_of(&|c| minimality_check(c).map(|r| r.conformality).map_err(|e| e.to_string()));
        ctx.push(
            "weierstrass.conformality",
            "<x_u, x_u> = <x_v, x_v>, <x_u, x_v> = 0",
            label,
            1e-3,
            Some(1.8),
            pts,
            finest.clone(),
        );
    }
    if cfg.wants("weierstrass.holomorphy") {
        let pts = sweep_of(&|c| {
            let r = holomorphy_check(&data, &c.grid);
            Ok(r.cr_g.max(r.cr_mu))
        });
        ctx.push("weierstrass.holomorphy", "g, mu satisfy Cauchy-Riemann", label, 1e-3, None, pts, finest.clone());
    }
    match preset {
        WeierstrassPreset::Enneper => {
            let f = weierstrass_point(&data, z0, Complex64::new(1.0, 0.0), 64);
            let r = (Vector3::from(f) - Vector3::new(2.0 / 3.0, 0.0, 1.0)).norm();
            ctx.single("weierstrass.enneper_value", "F(1) = (2/3, 0, 1)", label, 1e-6, "z = 1", Ok(r));
        }
        WeierstrassPreset::Catenoid => {
            let r = charts.as_ref().map_err(Clone::clone).map(|cs| {
                let c = cs.last().expect("validated");
                let closed: Vec<_> = (0..c.grid.len())
                    .map(|n| {
                        let (u, v) = c.grid.coords(n);
                        presets::Catenoid.point(u, v)
                    })
                    .collect();
                rigid_align_points(&c.positions(), &closed).rms
            });
            ctx.single("weierstrass.closed_form", "catenoid congruent to (cosh v cos u, cosh v sin u, v)", label, 1e-6, &finest, r);
        }
        WeierstrassPreset::Helicoid => {
            let z = Complex64::new(0.7, -0.4);
            let f = weierstrass_point(&data, z0, z, 64);
            let want = Vector3::new(-z.re.sin() * z.im.sinh(), z.re.cos() * z.im.sinh(), z.re);
            let r = (Vector3::from(f) - want).norm();
            ctx.single("weierstrass.closed_form", "F(z) = (-sin u sinh v, cos u sinh v, u)", label, 1e-6, "z = 0.7-0.4i", Ok(r));
        }
        WeierstrassPreset::Plane => {}
    }
}

// ---- algebra ------------------------------------------------------------

fn random_spinor(rng: &mut ChaCha8Rng) -> Spinor {
    Spinor::from_parts(
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    )
}

fn random_vector(rng: &mut ChaCha8Rng) -> Vector3<f64> {
    Vector3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn random_unit(rng: &mut ChaCha8Rng) -> Vector3<f64> {
    loop {
        let v = random_vector(rng);
        if v.norm() > 0.1 {
            return v.normalize();
        }
    }
}

/// Largest residual of each algebra identity over seeded random inputs.
pub fn algebra_residuals(seed: u64, samples: usize) -> Vec<(&'static str, &'static str, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = [0.0f64; 6];
    let i = Complex64::i();
    for _ in 0..samples {
        let phi = random_spinor(&mut rng);
        let (v, w) = (random_vector(&mut rng), random_vector(&mut rng));
        let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let n = random_unit(&mut rng);
        let axis = Unit::new_normalize(random_unit(&mut rng));
        let rot = Rotation3::from_axis_angle(&axis, rng.gen_range(-PI..PI)).into_inner();

        let vw = clifford_mul(&v, &clifford_mul(&w, &phi));
        let wv = clifford_mul(&w, &clifford_mul(&v, &phi));
        r[0] = r[0].max((vw + wv + phi * (2.0 * v.dot(&w))).norm());
        r[1] = r[1].max((basis_mul(0, &basis_mul(1, &phi)) - basis_mul(2, &phi)).norm());
        let a = alpha(&phi);
        r[2] = r[2]
            .max((alpha(&a) + phi).norm())
            .max((alpha(&clifford_mul(&v, &phi)) - clifford_mul(&v, &a)).norm())
            .max((alpha(&phi.scale(z)) - a.scale(z.conj())).norm())
            .max(phi.inner(&a).norm())
            .max((a.norm() - phi.norm()).abs());
        let split = split_pm(&phi, &n).expect("unit normal");
        let inp = clifford_mul(&n, &split.0).scale(i);
        let inm = clifford_mul(&n, &split.1).scale(i);
        r[3] = r[3]
            .max((split.0 + split.1 - phi).norm())
            .max((inp - split.0).norm())
            .max((inm + split.1).norm())
            .max(split.0.inner(&split.1).norm());
        let star = star_spinor(&phi, &n).expect("unit normal");
        let star2 = star_spinor(&star, &n).expect("unit normal");
        r[4] = r[4]
            .max((star.norm() - phi.norm()).abs())
            .max((star2 - clifford_mul(&n, &phi).scale(i)).norm());
        let u = algebra::su2_from_rotation(&rot);
        r[5] = r[5].max(algebra::conjugation_residual(&u, &rot));
    }
    vec![
        ("algebra.clifford", "v w + w v = -2 <v, w>", r[0]),
        ("algebra.volume", "e1 e2 = e3", r[1]),
        ("algebra.alpha", "alpha^2 = -1, alpha(v phi) = v alpha(phi), conjugate linear, isometric", r[2]),
        ("algebra.split", "phi = phi+ + phi-, i N phi+- = +-phi+-, orthogonal", r[3]),
        ("algebra.star", "|phi*| = |phi|, phi** = i N phi", r[4]),
        ("algebra.spin_lift", "U E_j U^* = R_kj E_k", r[5]),
    ]
}

fn algebra_checks(ctx: &mut Ctx) {
    let grid = format!("{ALGEBRA_SAMPLES} samples");
    for (id, anchor, r) in algebra_residuals(ctx.cfg.seed, ALGEBRA_SAMPLES) {
        ctx.single(id, anchor, "algebra", 1e-12, &grid, Ok(r));
    }
}
