//! The twelve acceptance criteria at their pinned tolerances.
//!
//! Runs without the test harness so each criterion prints exactly one
//! PASS/FAIL line; the process fails if any criterion does.

use std::f64::consts::PI;
use std::process::Command;

use nalgebra::{Matrix2, Rotation3, Unit, Vector2, Vector3};
use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spinorsurf::algebra::{self, alpha, basis_mul, clifford_mul, split_pm, star_spinor, Spinor};
use spinorsurf::charts::{
    compute_geometry, laplace_beltrami, quadrature, ChartSpec, DerivativeMode, GeometryField, IntrinsicGeometry,
    SurfaceMap,
};
use spinorsurf::export::obj_string;
use spinorsurf::grid::{inset, sup_within, Field, Grid, ScalarField};
use spinorsurf::periods::{
    closedness_report, conformal_covariance, diameter, hessian_report, metric_defect, period_forms, reconstruct,
    rigid_align, rigid_align_points, torus_eigenspinor,
};
use spinorsurf::presets::{self, SphereKind};
use spinorsurf::spinor::{
    codazzi_residual, dirac, dirac_square_residual, extract_e, forms_f, second_fundamental_form_residual,
    SpinorFieldGrid,
};
use spinorsurf::verify::random_factor;
use spinorsurf::weierstrass::{minimality_check, weierstrass_immersion, weierstrass_point, HoloData, WeierstrassPreset};

const SWEEP: [usize; 3] = [32, 64, 128];
const FLOOR: f64 = 1e-10;
const SEED: u64 = 20240611;

struct Criterion {
    n: usize,
    title: &'static str,
    checks: usize,
    failures: Vec<String>,
}

impl Criterion {
    fn new(n: usize, title: &'static str) -> Self {
        Criterion {
            n,
            title,
            checks: 0,
            failures: Vec::new(),
        }
    }

    fn at_most(&mut self, what: &str, r: f64, tol: f64) {
        self.checks += 1;
        if !(r <= tol) {
            self.failures.push(format!("{what}: {r:.3e} > {tol:.0e}"));
        }
    }

    fn holds(&mut self, what: &str, ok: bool) {
        self.checks += 1;
        if !ok {
            self.failures.push(what.to_owned());
        }
    }

    /// Finest residual within `tol`, every successive order at least
    /// `min_order` unless the finest residual is at roundoff.
    fn sweep(&mut self, what: &str, errs: &[f64], tol: f64, min_order: f64) {
        self.at_most(what, errs[errs.len() - 1], tol);
        let worst = errs.windows(2).map(|w| (w[0] / w[1]).log2()).fold(f64::INFINITY, f64::min);
        self.checks += 1;
        if errs[errs.len() - 1] >= FLOOR && !(worst >= min_order) {
            let shown: Vec<String> = errs.iter().map(|e| format!("{e:.2e}")).collect();
            self.failures.push(format!("{what}: order {worst:.2} < {min_order} ({})", shown.join(", ")));
        }
    }

    fn finish(self) -> bool {
        let ok = self.failures.is_empty();
        println!(
            "{} criterion {:>2} {}: {} checks{}",
            if ok { "PASS" } else { "FAIL" },
            self.n,
            self.title,
            self.checks,
            if ok { String::new() } else { format!(", failed: {}", self.failures.join("; ")) }
        );
        ok
    }
}

fn geom(chart: ChartSpec) -> GeometryField {
    compute_geometry(&chart, DerivativeMode::Analytic).unwrap()
}

fn phi0() -> Spinor {
    Spinor::from_parts(1.0, 0.0, 0.0, 0.0)
}

fn star(g: &GeometryField) -> SpinorFieldGrid {
    SpinorFieldGrid::restrict_parallel(g, phi0(), 0).unwrap().star()
}

fn sphere(n: usize) -> GeometryField {
    geom(presets::sphere(1.0, SphereKind::Capped { cap: 0.1 }, n, n).unwrap())
}

fn patch(n: usize) -> GeometryField {
    geom(presets::sphere(1.0, SphereKind::Patch, n, n).unwrap())
}

fn enneper(n: usize) -> GeometryField {
    geom(presets::enneper(1.0, n, n).unwrap())
}

fn catenoid(n: usize) -> GeometryField {
    geom(presets::catenoid(1.0, n, n).unwrap())
}

/// Same parameter region at every resolution: the inset of the 32-grid.
fn region(g: &GeometryField, margin: usize) -> [f64; 2] {
    inset(&g.grid.with_resolution(32, 32), margin)
}

fn sweep(f: impl Fn(usize) -> f64) -> Vec<f64> {
    SWEEP.iter().map(|&n| f(n)).collect()
}

fn center(g: &Grid) -> usize {
    g.index(g.n_u / 2, g.n_v / 2)
}

/// Closed-form mean and Gauss curvature of the presets used here.
fn curvature(name: &str, u: f64, v: f64) -> (f64, f64) {
    let _ = u;
    match name {
        "sphere" | "sphere_patch" => (1.0, 1.0),
        "enneper" => (0.0, -4.0 / (1.0 + u * u + v * v).powi(4)),
        "catenoid" => (0.0, -1.0 / v.cosh().powi(4)),
        other => panic!("no closed form for {other}"),
    }
}

fn oracle_field(g: &GeometryField, pick: fn((f64, f64)) -> f64) -> ScalarField {
    Field::from_fn(g.grid, |n| {
        let (u, v) = g.grid.coords(n);
        pick(curvature(&g.name, u, v))
    })
}

// ---- 1 ------------------------------------------------------------------

type M2 = Matrix2<C>;

/// `E_j = -i sigma_j`, written out independently of the library.
fn generators() -> [M2; 3] {
    let (o, l, i) = (C::new(0.0, 0.0), C::new(1.0, 0.0), C::i());
    let s1 = M2::new(o, l, l, o);
    let s2 = M2::new(o, -i, i, o);
    let s3 = M2::new(l, o, o, -l);
    [s1 * -i, s2 * -i, s3 * -i]
}

fn col(p: &Spinor) -> Vector2<C> {
    Vector2::new(p.c1, p.c2)
}

fn diff(p: &Spinor, q: Vector2<C>) -> f64 {
    (col(p) - q).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn criterion_1() -> bool {
    let mut c = Criterion::new(1, "algebra suite, 1000 seeded samples");
    let e = generators();
    let id = M2::identity();
    let mut anti: f64 = 0.0;
    for j in 0..3 {
        for k in 0..3 {
            let want = if j == k { id * C::from(-2.0) } else { M2::zeros() };
            anti = anti.max((e[j] * e[k] + e[k] * e[j] - want).norm());
        }
    }
    c.at_most("E_j E_k + E_k E_j = -2 delta_jk", anti, 1e-12);
    c.at_most("e1 e2 = e3", (e[0] * e[1] - e[2]).norm(), 1e-12);

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let unit = |rng: &mut ChaCha8Rng| loop {
        let v = Vector3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if v.norm() > 0.1 {
            break v.normalize();
        }
    };
    let mut worst = [0.0f64; 7];
    let j_mat = M2::new(C::new(0.0, 0.0), C::new(-1.0, 0.0), C::new(1.0, 0.0), C::new(0.0, 0.0));
    for _ in 0..1000 {
        let p = Spinor::from_parts(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let v = Vector3::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let w = Vector3::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let z = C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let nrm = unit(&mut rng);
        let rot = Rotation3::from_axis_angle(&Unit::new_normalize(unit(&mut rng)), rng.gen_range(-PI..PI)).into_inner();
        let mat = |x: &Vector3<f64>| e[0] * C::from(x.x) + e[1] * C::from(x.y) + e[2] * C::from(x.z);

        // multiplication matches the matrices
        for j in 0..3 {
            worst[0] = worst[0].max(diff(&basis_mul(j, &p), e[j] * col(&p)));
        }
        worst[0] = worst[0].max(diff(&clifford_mul(&v, &p), mat(&v) * col(&p)));
        // v w + w v = -2 <v, w>
        let vw = clifford_mul(&v, &clifford_mul(&w, &p)) + clifford_mul(&w, &clifford_mul(&v, &p));
        worst[1] = worst[1].max(diff(&vw, col(&p) * C::from(-2.0 * v.dot(&w))));
        // alpha = J conj, alpha^2 = -1, commutes with Clifford multiplication, conjugate linear
        let a = alpha(&p);
        worst[2] = worst[2]
            .max(diff(&a, j_mat * col(&p).map(|x| x.conj())))
            .max(diff(&alpha(&a), -col(&p)))
            .max(diff(&alpha(&clifford_mul(&v, &p)), col(&clifford_mul(&v, &a))))
            .max(diff(&alpha(&p.scale(z)), col(&a) * z.conj()));
        // split against the projectors (1 +- i N)/2
        let (pp, pm) = split_pm(&p, &nrm).unwrap();
        let proj = (id + mat(&nrm) * C::i()) * C::from(0.5);
        let projm = (id - mat(&nrm) * C::i()) * C::from(0.5);
        worst[3] = worst[3]
            .max(diff(&pp, proj * col(&p)))
            .max(diff(&pm, projm * col(&p)))
            .max(pp.inner(&pm).norm());
        // phi* = phi+ - i phi-, isometric, phi** = i N phi
        let s = star_spinor(&p, &nrm).unwrap();
        worst[4] = worst[4]
            .max(diff(&s, proj * col(&p) - projm * col(&p) * C::i()))
            .max((s.norm() - p.norm()).abs())
            .max(diff(&star_spinor(&s, &nrm).unwrap(), mat(&nrm) * col(&p) * C::i()));
        // spin lift covers the rotation
        let u = algebra::su2_from_rotation(&rot);
        for j in 0..3 {
            let lhs = u * e[j] * u.adjoint();
            let rhs = mat(&rot.column(j).into_owned());
            worst[5] = worst[5].max((lhs - rhs).norm());
        }
        worst[6] = worst[6].max((u.determinant() - C::new(1.0, 0.0)).norm()).max((u * u.adjoint() - id).norm());
    }
    for (what, r) in [
        "Clifford multiplication matches E_j",
        "v w + w v = -2 <v, w>",
        "alpha properties",
        "split into i N eigenparts",
        "star identities",
        "U E_j U* = R_kj E_k",
        "U in SU(2)",
    ]
    .iter()
    .zip(worst)
    {
        c.at_most(what, r, 1e-12);
    }
    c.finish()
}

// ---- 2 ------------------------------------------------------------------

fn criterion_2() -> bool {
    let mut c = Criterion::new(2, "Dirac eigen-relation");
    let errs = sweep(|n| {
        let g = sphere(n);
        let phi = star(&g);
        let d = dirac(&phi, &g);
        // H = 1 on the unit sphere
        sup_within(&d.values.zip_map(&phi.values, |a, b| *a - *b), region(&g, 1), |x| x.norm())
    });
    c.sweep("sphere |D phi* - H phi*|", &errs, 1e-3, 1.8);
    for (name, build) in [("catenoid", catenoid as fn(usize) -> GeometryField), ("enneper", enneper)] {
        let errs = sweep(|n| {
            let g = build(n);
            sup_within(&dirac(&star(&g), &g).values, region(&g, 1), |x| x.norm())
        });
        c.sweep(&format!("{name} |D phi|"), &errs, 1e-3, 1.8);
    }
    c.finish()
}

// ---- 3 ------------------------------------------------------------------

fn criterion_3() -> bool {
    let mut c = Criterion::new(3, "F+- symmetry, trace, relation");
    for (name, build) in [("sphere", sphere as fn(usize) -> GeometryField), ("enneper", enneper)] {
        let res: Vec<[f64; 3]> = SWEEP
            .iter()
            .map(|&n| {
                let g = build(n);
                let phi = star(&g);
                let f = forms_f(&phi, &g);
                let (lp, lm) = phi.lengths();
                let h = oracle_field(&g, |x| x.0);
                let trace = Field::from_fn(g.grid, |k| {
                    let (a, b) = (f.f_plus[k], f.f_minus[k]);
                    (a[0][0] + a[1][1] + h[k] * lm[k]).abs().max((b[0][0] + b[1][1] + h[k] * lp[k]).abs())
                });
                let r = region(&g, 1);
                [sup_within(&f.asymmetry, r, |x| *x), sup_within(&trace, r, |x| *x), sup_within(&f.relation, r, |x| *x)]
            })
            .collect();
        for (k, what) in ["symmetry", "trace = -H |phi-+|^2", "|phi+|^2 F+ = |phi-|^2 F-"].iter().enumerate() {
            let errs: Vec<f64> = res.iter().map(|r| r[k]).collect();
            c.sweep(&format!("{name} {what}"), &errs, 1e-3, 1.8);
        }
    }
    c.finish()
}

// ---- 4 ------------------------------------------------------------------

fn criterion_4() -> bool {
    let mut c = Criterion::new(4, "E trace, determinant, Codazzi, 2E vs II sign");
    for build in [sphere as fn(usize) -> GeometryField, enneper, catenoid] {
        let g = build(128);
        let e = extract_e(&star(&g), &g).unwrap();
        let (h, k) = (oracle_field(&g, |x| x.0), oracle_field(&g, |x| x.1));
        let tr = Field::from_fn(g.grid, |n| (e.e[n][0][0] + e.e[n][1][1] + h[n]).abs());
        let det = Field::from_fn(g.grid, |n| {
            let m = e.e[n];
            (m[0][0] * m[1][1] - m[0][1] * m[1][0] - k[n] / 4.0).abs()
        });
        c.at_most(&format!("{} |Tr E + H|", g.name), sup_within(&tr, region(&g, 1), |x| *x), 1e-3);
        c.at_most(&format!("{} |det E - G/4|", g.name), sup_within(&det, region(&g, 1), |x| *x), 1e-3);
        c.at_most(
            &format!("{} Codazzi", g.name),
            sup_within(&codazzi_residual(&e.e, &g), region(&g, 2), |x| *x),
            1e-3,
        );
    }
    let mut signs = Vec::new();
    for chart in [
        presets::sphere(1.0, SphereKind::Capped { cap: 0.1 }, 128, 128),
        presets::sphere(1.0, SphereKind::Patch, 128, 128),
        presets::enneper(1.0, 128, 128),
        presets::catenoid(1.0, 128, 128),
        presets::helicoid(1.0, 128, 128),
        presets::graph(0.3, 0.2, 128, 128),
        presets::plane(128, 128),
    ] {
        let g = geom(chart.unwrap());
        let e = extract_e(&star(&g), &g).unwrap();
        let r = |s: f64| sup_within(&second_fundamental_form_residual(&e.e, &g, s), region(&g, 1), |x| *x);
        let (minus, plus) = (r(-1.0), r(1.0));
        let (best, res) = if minus <= plus { (-1.0, minus) } else { (1.0, plus) };
        if g.name != "plane" {
            signs.push(best);
        }
        c.at_most(&format!("{} |2E - s II| at the best sign", g.name), res, 1e-3);
    }
    c.holds("2E = s II with one sign on every preset", signs.windows(2).all(|w| w[0] == w[1]));
    c.finish()
}

// ---- 5 ------------------------------------------------------------------

fn criterion_5() -> bool {
    let mut c = Criterion::new(5, "closed forms and Hodge types");
    for build in [sphere as fn(usize) -> GeometryField, enneper] {
        let mut name = String::new();
        let res: Vec<[f64; 3]> = SWEEP
            .iter()
            .map(|&n| {
                let g = build(n);
                name = g.name.clone();
                let phi = star(&g);
                let r = closedness_report(&period_forms(&phi), &phi, &g);
                let reg = region(&g, 1);
                [r.dw.sup_within(reg), r.domega.sup_within(reg), r.dmu.sup_within(reg)]
            })
            .collect();
        for (k, what) in ["dw", "d Omega", "d mu - 2H(|phi-|^2 - |phi+|^2) dA"].iter().enumerate() {
            let errs: Vec<f64> = res.iter().map(|r| r[k]).collect();
            c.sweep(&format!("{name} {what}"), &errs, 1e-3, 1.8);
        }
        // star from its definition: (*x)(e1) = -x(e2), (*x)(e2) = x(e1)
        let g = build(128);
        let p = period_forms(&star(&g));
        let star_gap = |f: &Field<[C; 2]>, lambda: C| {
            f.data
                .iter()
                .map(|x| (-x[1] - lambda * x[0]).norm().max((x[0] - lambda * x[1]).norm()))
                .fold(0.0, f64::max)
        };
        let i = C::i();
        c.at_most(&format!("{name} *xi = -i xi"), star_gap(&p.xi, -i), 1e-12);
        c.at_most(&format!("{name} *xi+ = -i xi+"), star_gap(&p.xi_plus, -i), 1e-12);
        c.at_most(&format!("{name} *xi- = i xi-"), star_gap(&p.xi_minus, i), 1e-12);
    }
    c.finish()
}

// ---- 6 ------------------------------------------------------------------

fn obj_vertices(text: &str) -> Vec<Vector3<f64>> {
    text.lines()
        .filter_map(|l| l.strip_prefix("v "))
        .map(|l| {
            let x: Vec<f64> = l.split(' ').map(|s| s.parse().unwrap()).collect();
            Vector3::new(x[0], x[1], x[2])
        })
        .collect()
}

fn criterion_6() -> bool {
    let mut c = Criterion::new(6, "round trip through the period forms");
    for chart in [presets::enneper(1.0, 128, 128).unwrap(), presets::sphere(1.0, SphereKind::Patch, 128, 128).unwrap()] {
        let g = geom(chart.clone());
        let rec = reconstruct(&period_forms(&star(&g)), &g, center(&g.grid)).unwrap();
        let fit = rigid_align(&rec.immersion, &chart);
        let d = diameter(&chart.positions());
        c.at_most(&format!("{} RMS / diameter", g.name), fit.rms / d, 1e-3);
        let m = metric_defect(&rec.immersion, &g).unwrap();
        c.at_most(&format!("{} first fundamental form, relative", g.name), sup_within(&m, [0.0; 2], |x| *x), 1e-3);
        // through the OBJ files
        let aligned: Vec<_> = rec.immersion.points().iter().map(|p| fit.rotation * p + fit.translation).collect();
        let a = obj_vertices(&obj_string("rec", &g.grid, &aligned));
        let b = obj_vertices(&obj_string("gen", &g.grid, &chart.positions()));
        let worst = a.iter().zip(&b).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
        c.at_most(&format!("{} OBJ vertexwise distance", g.name), worst, 1e-3);
    }
    c.finish()
}

// ---- 7 ------------------------------------------------------------------

fn criterion_7() -> bool {
    let mut c = Criterion::new(7, "Hessian and gradient identities, sphere patch");
    let res: Vec<[f64; 6]> = SWEEP
        .iter()
        .map(|&n| {
            let g = patch(n);
            let phi = star(&g);
            let e = extract_e(&phi, &g).unwrap();
            let rec = reconstruct(&period_forms(&phi), &g, center(&g.grid)).unwrap();
            let h = hessian_report(&phi, &g, &e.e, &rec.immersion);
            let r = region(&g, 2);
            [&h.a, &h.b, &h.c, &h.d, &h.d_hermitian, &h.det].map(|f| sup_within(f, r, |x| *x))
        })
        .collect();
    for (k, what) in [
        "Hess f = 2(|phi+|^2 - |phi-|^2) E",
        "|grad f|^2 = 4 |phi+|^2 |phi-|^2",
        "Hess g = -4 (phi-, alpha phi+) E",
        "|grad g|^2 = (|phi+|^2 - |phi-|^2)^2",
    ]
    .iter()
    .enumerate()
    {
        let errs: Vec<f64> = res.iter().map(|r| r[k]).collect();
        c.sweep(what, &errs, 1e-2, 1.5);
    }
    let ok = c.finish();
    println!(
        "     (|grad g|^2 = 2(|phi+|^4 + |phi-|^4): {:.2e}; det Hess f = (|phi+|^2 - |phi-|^2)^2 G: {:.2e})",
        res[2][4], res[2][5]
    );
    ok
}

// ---- 8 ------------------------------------------------------------------

fn criterion_8() -> bool {
    let mut c = Criterion::new(8, "integral identities on the unit sphere, 256x128");
    let g = geom(presets::sphere(1.0, SphereKind::Full, 256, 128).unwrap());
    let phi = star(&g);
    let (lp, lm) = phi.lengths();
    let gauss = g.gauss_curvature();
    // Phi = (1, 0) points along e3, so <N, a3> = N_z
    let nz2 = g.scalar(|n| n.normal.z * n.normal.z);
    let total = quadrature(&gauss, &g);
    c.at_most("|int G - 4 pi|", (total - 4.0 * PI).abs(), 1e-3);
    c.at_most(
        "|int G - 3 int <N, a3>^2 G|",
        (total - 3.0 * quadrature(&nz2.zip_map(&gauss, |a, b| a * b), &g)).abs(),
        1e-3,
    );
    let six = Field::from_fn(g.grid, |n| (1.0 - 6.0 * lp[n] * lm[n]) * gauss[n]);
    c.at_most("|int (1 - 6 |phi+|^2 |phi-|^2) G|", quadrature(&six, &g).abs(), 1e-3);
    let min = |f: &ScalarField| f.data.iter().fold(f64::INFINITY, |a, b| a.min(b.sqrt()));
    c.at_most("min |phi+|", min(&lp), 1e-2);
    c.at_most("min |phi-|", min(&lm), 1e-2);
    c.finish()
}

// ---- 9 ------------------------------------------------------------------

fn criterion_9() -> bool {
    let mut c = Criterion::new(9, "Laplacian identities on the unit sphere");
    let errs = sweep(|n| {
        let g = sphere(n);
        let (lp, lm) = star(&g).lengths();
        let u = lp.zip_map(&lm, |a, b| a - b);
        let du = laplace_beltrami(&u, &g);
        sup_within(&du.zip_map(&u, |d, u| (d - 2.0 * u).abs()), region(&g, 1), |x| *x)
    });
    c.sweep("|Delta u - 2u|", &errs, 1e-2, 1.5);
    let g = sphere(128);
    let phi = SpinorFieldGrid::restrict_parallel(&g, phi0(), 0).unwrap();
    c.at_most("D^2 = Delta + G/2", sup_within(&dirac_square_residual(&phi, &g), region(&g, 2), |x| *x), 1e-3);
    c.finish()
}

// ---- 10 -----------------------------------------------------------------

fn criterion_10() -> bool {
    let mut c = Criterion::new(10, "conformal covariance");
    let max = |f: ScalarField| f.data.iter().fold(0.0, |a: f64, b| a.max(*b));
    let torus = geom(presets::flat_torus(64, 64).unwrap());
    let sph = sphere(64);
    for (g, phi) in [(&torus, torus_eigenspinor(torus.grid)), (&sph, star(&sph))] {
        for s in [0.3, 2.7] {
            let sigma = Field::from_fn(g.grid, |_| s);
            let r = conformal_covariance(&phi, &sigma, &IntrinsicGeometry::of(g)).unwrap();
            c.at_most(&format!("{} sigma = {s}", g.name), max(r), 1e-12);
        }
    }
    let errs = sweep(|n| {
        let g = geom(presets::flat_torus(n, n).unwrap());
        let sigma = random_factor(SEED, g.grid);
        max(conformal_covariance(&torus_eigenspinor(g.grid), &sigma, &IntrinsicGeometry::of(&g)).unwrap())
    });
    c.sweep("flat torus, random smooth sigma", &errs, 1e-3, 1.8);
    c.finish()
}

// ---- 11 -----------------------------------------------------------------

fn criterion_11() -> bool {
    let mut c = Criterion::new(11, "Weierstrass generator");
    let z0 = C::new(0.0, 0.0);
    let f = weierstrass_point(&HoloData::preset(WeierstrassPreset::Enneper), z0, C::new(1.0, 0.0), 64);
    c.at_most("Enneper F(1) = (2/3, 0, 1)", (Vector3::from(f) - Vector3::new(2.0 / 3.0, 0.0, 1.0)).norm(), 1e-6);
    let cat = weierstrass_immersion(&HoloData::preset(WeierstrassPreset::Catenoid), 128, 128, z0).unwrap();
    let closed: Vec<_> = (0..cat.grid.len())
        .map(|n| {
            let (u, v) = cat.grid.coords(n);
            presets::Catenoid.point(u, v)
        })
        .collect();
    c.at_most("catenoid RMS to closed form", rigid_align_points(&cat.positions(), &closed).rms, 1e-6);
    for p in [WeierstrassPreset::Enneper, WeierstrassPreset::Catenoid, WeierstrassPreset::Helicoid] {
        let chart = weierstrass_immersion(&HoloData::preset(p), 128, 128, z0).unwrap();
        let r = minimality_check(&chart).unwrap();
        c.at_most(&format!("{p:?} minimality"), r.max_mean_curvature, 1e-3);
        c.at_most(&format!("{p:?} conformality"), r.conformality, 1e-3);
    }
    c.finish()
}

// ---- 12 -----------------------------------------------------------------

fn criterion_12() -> bool {
    let mut c = Criterion::new(12, "determinism");
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"surfaces": [{"preset": "sphere"}, {"preset": "enneper"}, {"preset": "flat_torus"},
                         {"preset": "weierstrass", "data": "catenoid"}],
            "grids": [[16, 16], [32, 32]], "seed": 99}"#,
    )
    .unwrap();
    let run = |cmd: &str, out: &str| {
        let out = dir.path().join(out);
        let status = Command::new(env!("CARGO_BIN_EXE_spinorsurf"))
            .args([cmd, "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(&out)
            .output()
            .unwrap()
            .status;
        (status.code(), out)
    };
    for (cmd, file) in [("verify", "report.json"), ("report", "aggregate.json")] {
        let (sa, a) = run(cmd, &format!("{cmd}_a"));
        let (sb, b) = run(cmd, &format!("{cmd}_b"));
        let (ta, tb) = (std::fs::read(a.join(file)), std::fs::read(b.join(file)));
        c.holds(&format!("{cmd}: exit codes agree"), sa == sb && sa.is_some());
        c.holds(
            &format!("{cmd}: {file} byte-identical"),
            matches!((&ta, &tb), (Ok(x), Ok(y)) if x == y && !x.is_empty()),
        );
    }
    c.finish()
}

fn main() {
    let results = [
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
        criterion_11(),
        criterion_12(),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("acceptance: {} of 12 criteria pass", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
