//! JSON run configuration.
//!
//! ```json
//! {
//!   "surfaces": [{"preset": "sphere", "chart": "capped"}, {"preset": "enneper"}],
//!   "grids": [[32, 32], [64, 64], [128, 128]],
//!   "ambient_spinor": [[1.0, 0.0], [0.0, 0.0]],
//!   "derivative_mode": "analytic",
//!   "tolerances": {"spinor.dirac_star": 1e-3},
//!   "checks": ["spinor."],
//!   "seed": 7
//! }
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::Spinor;
use crate::charts::{ChartSpec, DerivativeMode};
use crate::error::{Error, Result};
use crate::presets::{self, SphereKind};
use crate::weierstrass::{weierstrass_immersion, HoloData, WeierstrassPreset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Generate,
    Restrict,
    Verify,
    Reconstruct,
    Report,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SphereChart {
    #[default]
    Capped,
    Patch,
    Full,
}

fn one() -> f64 {
    1.0
}

fn default_cap() -> f64 {
    0.1
}

fn default_a() -> f64 {
    0.3
}

fn default_b() -> f64 {
    0.2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case", deny_unknown_fields)]
pub enum SurfaceConfig {
    Plane,
    FlatTorus,
    Sphere {
        #[serde(default = "one")]
        radius: f64,
        #[serde(default)]
        chart: SphereChart,
        #[serde(default = "default_cap")]
        cap: f64,
    },
    Catenoid {
        #[serde(default = "one")]
        height: f64,
    },
    Helicoid {
        #[serde(default = "one")]
        pitch: f64,
    },
    Enneper {
        #[serde(default = "one")]
        extent: f64,
    },
    Graph {
        #[serde(default = "default_a")]
        a: f64,
        #[serde(default = "default_b")]
        b: f64,
    },
    /// Patch generated from holomorphic data, basepoint `0`.
    Weierstrass { data: WeierstrassPreset },
}

impl SurfaceConfig {
    pub fn label(&self) -> String {
        match self {
            SurfaceConfig::Plane => "plane".into(),
            SurfaceConfig::FlatTorus => "flat_torus".into(),
            SurfaceConfig::Sphere { radius, chart, .. } => {
                let kind = match chart {
                    SphereChart::Capped => "sphere",
                    SphereChart::Patch => "sphere_patch",
                    SphereChart::Full => "sphere_full",
                };
                if *radius == 1.0 {
                    kind.into()
                } else {
                    format!("{kind}_r{radius}")
                }
            }
            SurfaceConfig::Catenoid { .. } => "catenoid".into(),
            SurfaceConfig::Helicoid { .. } => "helicoid".into(),
            SurfaceConfig::Enneper { .. } => "enneper".into(),
            SurfaceConfig::Graph { .. } => "graph".into(),
            SurfaceConfig::Weierstrass { data } => format!("weierstrass_{}", serde_plain(data)),
        }
    }

    pub fn build(&self, n_u: usize, n_v: usize) -> Result<ChartSpec> {
        match *self {
            SurfaceConfig::Plane => presets::plane(n_u, n_v),
            SurfaceConfig::FlatTorus => presets::flat_torus(n_u, n_v),
            SurfaceConfig::Sphere { radius, chart, cap } => {
                let kind = match chart {
                    SphereChart::Capped => SphereKind::Capped { cap },
                    SphereChart::Patch => SphereKind::Patch,
                    SphereChart::Full => SphereKind::Full,
                };
                presets::sphere(radius, kind, n_u, n_v)
            }
            SurfaceConfig::Catenoid { height } => presets::catenoid(height, n_u, n_v),
            SurfaceConfig::Helicoid { pitch } => presets::helicoid(pitch, n_u, n_v),
            SurfaceConfig::Enneper { extent } => presets::enneper(extent, n_u, n_v),
            SurfaceConfig::Graph { a, b } => presets::graph(a, b, n_u, n_v),
            SurfaceConfig::Weierstrass { data } => {
                weierstrass_immersion(&HoloData::preset(data), n_u, n_v, Complex64::new(0.0, 0.0))
            }
        }
    }

    /// Weierstrass patches are sampled and only support finite differences.
    pub fn derivative_mode(&self, requested: DerivativeMode) -> DerivativeMode {
        match self {
            SurfaceConfig::Weierstrass { .. } => DerivativeMode::FiniteDifference { step: None },
            _ => requested,
        }
    }

    pub fn is_sphere(&self) -> bool {
        matches!(self, SurfaceConfig::Sphere { .. })
    }

    fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Config(format!("{}: {what}", self.label())));
        match *self {
            SurfaceConfig::Sphere { radius, cap, .. } => {
                if !(radius > 0.0) {
                    return bad("radius must be positive");
                }
                if !(cap > 0.0 && cap < 1.5) {
                    return bad("cap must lie in (0, 1.5)");
                }
            }
            SurfaceConfig::Catenoid { height: x } | SurfaceConfig::Enneper { extent: x } if !(x > 0.0) => {
                return bad("extent must be positive");
            }
            SurfaceConfig::Helicoid { pitch } if pitch == 0.0 || !pitch.is_finite() => {
                return bad("pitch must be non-zero");
            }
            _ => {}
        }
        Ok(())
    }
}

fn serde_plain<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default()
}

fn default_grids() -> Vec<[usize; 2]> {
    vec![[32, 32], [64, 64], [128, 128]]
}

fn default_spinor() -> [[f64; 2]; 2] {
    [[1.0, 0.0], [0.0, 0.0]]
}

fn default_seed() -> u64 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Optional; must agree with the command given on the command line.
    #[serde(default)]
    pub command: Option<Command>,
    pub surfaces: Vec<SurfaceConfig>,
    /// Convergence sweep, strictly increasing; the last entry is the
    /// resolution used for export.
    #[serde(default = "default_grids")]
    pub grids: Vec<[usize; 2]>,
    /// `[[re c1, im c1], [re c2, im c2]]`.
    #[serde(default = "default_spinor")]
    pub ambient_spinor: [[f64; 2]; 2],
    #[serde(default)]
    pub derivative_mode: DerivativeMode,
    /// Per-check tolerance overrides.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    /// Check id prefixes to run (all when empty).
    #[serde(default)]
    pub checks: Vec<String>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.surfaces.is_empty() {
            return Err(Error::Config("no surfaces configured".into()));
        }
        if self.grids.is_empty() {
            return Err(Error::Config("no grids configured".into()));
        }
        for g in &self.grids {
            if g[0] < 8 || g[1] < 8 {
                return Err(Error::Config(format!("grid {}x{} below the minimum 8x8", g[0], g[1])));
            }
        }
        for w in self.grids.windows(2) {
            if !(w[1][0] > w[0][0] && w[1][1] > w[0][1]) {
                return Err(Error::Config("grids must be strictly increasing".into()));
            }
        }
        for (id, tol) in &self.tolerances {
            if !(*tol > 0.0) || !tol.is_finite() {
                return Err(Error::Config(format!("tolerance for `{id}` must be positive")));
            }
        }
        if let DerivativeMode::FiniteDifference { step: Some(h) } = self.derivative_mode {
            if !(h > 0.0) {
                return Err(Error::Config("finite-difference step must be positive".into()));
            }
        }
        if self.spinor().norm() == 0.0 || !self.spinor().is_finite() {
            return Err(Error::Config("ambient spinor must be finite and non-zero".into()));
        }
        for s in &self.surfaces {
            s.validate()?;
        }
        Ok(())
    }

    pub fn spinor(&self) -> Spinor {
        let [[a, b], [c, d]] = self.ambient_spinor;
        Spinor::from_parts(a, b, c, d)
    }

    pub fn finest(&self) -> [usize; 2] {
        *self.grids.last().expect("validated")
    }

    pub fn wants(&self, check_id: &str) -> bool {
        self.checks.is_empty() || self.checks.iter().any(|p| check_id.starts_with(p.as_str()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_uses_defaults() {
        let c = RunConfig::from_json(r#"{"surfaces": [{"preset": "plane"}]}"#).unwrap();
        assert_eq!(c.grids, default_grids());
        assert_eq!(c.derivative_mode, DerivativeMode::Analytic);
        assert_eq!(c.seed, 1);
    }

    #[test]
    fn rejects_small_grids_and_unknown_fields() {
        for text in [
            r#"{"surfaces": [{"preset": "plane"}], "grids": [[4, 32]]}"#,
            r#"{"surfaces": [{"preset": "plane"}], "grids": [[64, 64], [32, 32]]}"#,
            r#"{"surfaces": [{"preset": "plane"}], "tolerances": {"x": 0}}"#,
            r#"{"surfaces": [{"preset": "plane"}], "colour": 1}"#,
            r#"{"surfaces": [{"preset": "torus"}]}"#,
            r#"{"surfaces": []}"#,
            r#"{"surfaces": [{"preset": "sphere", "radius": -1}]}"#,
            r#"{"surfaces": [{"preset": "plane"}], "ambient_spinor": [[0, 0], [0, 0]]}"#,
        ] {
            assert!(matches!(RunConfig::from_json(text), Err(Error::Config(_))), "{text}");
        }
    }

    #[test]
    fn surface_presets_parse() {
        let c = RunConfig::from_json(
            r#"{"surfaces": [
                {"preset": "sphere", "chart": "full"},
                {"preset": "weierstrass", "data": "catenoid"},
                {"preset": "finite"} ]}"#,
        );
        assert!(c.is_err());
        let c = RunConfig::from_json(
            r#"{"surfaces": [{"preset": "sphere", "chart": "full"}, {"preset": "weierstrass", "data": "catenoid"}],
                "derivative_mode": {"finite_difference": {"step": null}}}"#,
        )
        .unwrap();
        assert_eq!(c.surfaces[0].label(), "sphere_full");
        assert_eq!(c.surfaces[1].label(), "weierstrass_catenoid");
        assert_eq!(c.derivative_mode, DerivativeMode::FiniteDifference { step: None });
    }
}
