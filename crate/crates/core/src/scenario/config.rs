//! Scenario configuration: a TOML file of flat keys grouped in sections.
//!
//! ```toml
//! seed = 7
//! checks = ["norms", "cz-roundtrip"]
//!
//! [grid]
//! origin = [-8.0]
//! h = 0.015625
//! extents = [1024]
//!
//! [functional]
//! phi = "log_damped:0.9"
//! q = 1.0
//! ```
//!
//! Every key is optional; missing keys take the defaults below.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::atomic::{AtomTolerances, CzParams};
use crate::campanato::CubeSweep;
use crate::error::{Error, Result};
use crate::grid::{build_dictionary, GridSpec};
use crate::maximal::{MaximalParams, EPS_CUT};
use crate::orlicz::OrliczFunction;
use crate::slice::SliceParams;

use super::family::Generator;
use super::CheckName;

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    pub dim: usize,
    pub origin: Vec<f64>,
    pub h: f64,
    pub extents: Vec<usize>,
}

impl Default for GridSection {
    fn default() -> Self {
        Self { dim: 1, origin: vec![-8.0], h: 1.0 / 64.0, extents: vec![1024] }
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct FunctionalSection {
    /// `power:p`, `log_damped` or `log_damped:p_minus`.
    pub phi: String,
    pub q: f64,
    pub t: f64,
    /// Slice radii for the t-stability checks.
    pub t_values: Vec<f64>,
}

impl Default for FunctionalSection {
    fn default() -> Self {
        Self { phi: "log_damped:0.9".into(), q: 1.0, t: 1.0, t_values: vec![0.5, 1.0, 2.0] }
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct MaximalSection {
    pub a: f64,
    pub b: f64,
    /// Grand order N.
    pub order: usize,
    pub dictionary_size: usize,
    /// Ladder depth M: scales `2^0 .. 2^{-M+1}`.
    pub depth: usize,
    pub eps_cut: f64,
}

impl Default for MaximalSection {
    fn default() -> Self {
        Self { a: 1.0, b: 6.0, order: 7, dictionary_size: 4, depth: 4, eps_cut: EPS_CUT }
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct AtomicSection {
    /// Moment order; defaults to `⌊n(1/s − 1)⌋`.
    pub d: Option<usize>,
    pub r: f64,
    /// Atomic exponent; defaults to `0.9 min{p_minus, q, 1}`.
    pub s: Option<f64>,
    pub c0: f64,
    pub max_levels: usize,
}

impl Default for AtomicSection {
    fn default() -> Self {
        Self { d: None, r: f64::INFINITY, s: None, c0: crate::atomic::DEFAULT_C0, max_levels: 64 }
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    /// Dyadic cube sides `2^side_min_exp ..= 2^side_max_exp`.
    pub side_min_exp: i32,
    pub side_max_exp: i32,
    /// Grid spacing for the bmo facts.
    pub bmo_h: f64,
    /// Centers of the unit cubes for the bmo_log growth check.
    pub bmo_radii: Vec<f64>,
    /// Ball radii `2^ball_min_exp ..= 2^ball_max_exp` for the indicator band.
    pub ball_min_exp: i32,
    pub ball_max_exp: i32,
    /// Grid spacing of the ball-indicator band (also run at half of it).
    pub ball_h: f64,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            side_min_exp: -6,
            side_max_exp: 5,
            bmo_h: 1.0 / 256.0,
            bmo_radii: vec![0.0, 4.0, 16.0, 64.0],
            ball_min_exp: -6,
            ball_max_exp: 6,
            ball_h: 1.0 / 256.0,
        }
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct FamilySection {
    pub generator: String,
    pub count: usize,
    /// Translate distances appended to the embedding family.
    pub translates: Vec<f64>,
    /// Number of bounded fields paired against the atoms.
    pub fields: usize,
    /// Members per vector family in the Fefferman–Stein check.
    pub vector_members: usize,
    /// Vector exponent r of the Fefferman–Stein check.
    pub vector_r: f64,
    /// Slice radii of the Fefferman–Stein check.
    pub vector_t_values: Vec<f64>,
    /// Functional and outer exponent of the Fefferman–Stein check.
    pub vector_phi: String,
    pub vector_q: f64,
    /// Families in the Fefferman–Stein and superadditivity checks.
    pub vector_families: usize,
}

impl Default for FamilySection {
    fn default() -> Self {
        Self {
            generator: "mixed".into(),
            count: 20,
            translates: vec![0.0, 4.0, 16.0, 64.0],
            fields: 10,
            vector_members: 4,
            vector_r: 2.0,
            vector_t_values: vec![0.25, 1.0, 4.0],
            vector_phi: "power:2".into(),
            vector_q: 2.0,
            vector_families: 20,
        }
    }
}

/// Acceptance thresholds. Exact checks compare against a tolerance; band
/// checks compare a fitted quantity against a cap.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub luxemburg: f64,
    pub slice_lq: f64,
    pub ball_spread: f64,
    pub ball_refinement: f64,
    pub reconstruction: f64,
    pub moment: f64,
    pub size: f64,
    pub atomic_stability: f64,
    pub chain: f64,
    pub band_stability: f64,
    pub pairing_slack: f64,
    pub embedding_refinement: f64,
    pub fefferman_stein_stability: f64,
    pub superadditivity_floor: f64,
    pub bmo_phi: f64,
    pub bmo_log_factor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            luxemburg: 1e-9,
            slice_lq: 0.02,
            ball_spread: 20.0,
            ball_refinement: 0.10,
            reconstruction: 1e-6,
            moment: 1e-8,
            size: 1e-12,
            atomic_stability: 0.25,
            chain: 1e-12,
            band_stability: 0.25,
            pairing_slack: 1.01,
            embedding_refinement: 0.10,
            fefferman_stein_stability: 4.0,
            superadditivity_floor: 0.05,
            bmo_phi: 1e-6,
            bmo_log_factor: 2.0,
        }
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
#[derive(Default)]
pub struct ScenarioConfig {
    pub seed: u64,
    pub checks: Vec<String>,
    pub out: Option<PathBuf>,
    pub grid: GridSection,
    pub functional: FunctionalSection,
    pub maximal: MaximalSection,
    pub atomic: AtomicSection,
    pub sweep: SweepSection,
    pub family: FamilySection,
    pub tolerances: Tolerances,
}


/// A configuration with every derived object built and every hypothesis
/// checked.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub checks: Vec<CheckName>,
    pub spec: GridSpec,
    pub slice: SliceParams,
    pub maximal: MaximalParams,
    pub cz: CzParams,
    pub generator: Generator,
    pub sweep: CubeSweep,
}

fn cfg<T>(r: Result<T>, what: &str) -> Result<T> {
    r.map_err(|e| match e {
        Error::Config(m) => Error::Config(m),
        other => Error::Config(format!("{what}: {other}")),
    })
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Builds the grid, functional and parameter objects and checks
    /// `b > 2n/min{p_minus, q}`, `N ≥ ⌊b + 1⌋`, `s < min{p_minus, q, 1}` and
    /// `d ≥ ⌊n(1/s − 1)⌋`. Any failure is a [`Error::Config`].
    pub fn validate(self) -> Result<Scenario> {
        let g = &self.grid;
        if !(g.dim == 1 || g.dim == 2) {
            return Err(Error::Config(format!("grid.dim must be 1 or 2, got {}", g.dim)));
        }
        if g.origin.len() != g.dim || g.extents.len() != g.dim {
            return Err(Error::Config(format!(
                "grid.origin and grid.extents need {} entries each, got {} and {}",
                g.dim,
                g.origin.len(),
                g.extents.len()
            )));
        }
        let spec = cfg(GridSpec::new(g.dim, &g.origin, g.h, &g.extents), "grid")?;
        let n = g.dim as f64;

        let phi = cfg(OrliczFunction::from_tag(&self.functional.phi), "functional.phi")?;
        let f = &self.functional;
        let slice = cfg(SliceParams::new(phi.clone(), f.q, f.t), "functional")?;
        for &t in &f.t_values {
            cfg(slice.with_t(t), "functional.t_values")?;
        }

        let m = &self.maximal;
        let dict = cfg(build_dictionary(g.dim, m.order, m.depth, g.h, m.dictionary_size), "maximal")?;
        let maximal = cfg(MaximalParams::new(m.a, m.b, m.eps_cut, dict), "maximal")?;
        let pq = phi.p_minus().min(f.q);
        if !(m.b > 2.0 * n / pq) {
            return Err(Error::Config(format!(
                "hypothesis b > 2n/min{{p_minus, q}} fails: b = {}, 2n/min{{p_minus, q}} = {}",
                m.b,
                2.0 * n / pq
            )));
        }
        let need_n = (m.b + 1.0).floor() as usize;
        if m.order < need_n {
            return Err(Error::Config(format!(
                "hypothesis N >= floor(b + 1) fails: N = {}, floor(b + 1) = {need_n}",
                m.order
            )));
        }

        let a = &self.atomic;
        let cap = pq.min(1.0);
        let mut cz = CzParams::new(slice.clone(), maximal.clone());
        if let Some(s) = a.s {
            cz.s = s;
        }
        if !(cz.s > 0.0 && cz.s < cap) {
            return Err(Error::Config(format!(
                "hypothesis 0 < s < min{{p_minus, q, 1}} fails: s = {}, min{{p_minus, q, 1}} = {cap}",
                cz.s
            )));
        }
        let need_d = (n * (1.0 / cz.s - 1.0)).floor().max(0.0) as usize;
        cz.d = a.d.unwrap_or(need_d);
        if cz.d < need_d {
            return Err(Error::Config(format!(
                "hypothesis d >= floor(n(1/s - 1)) fails: d = {}, floor(n(1/s - 1)) = {need_d}",
                cz.d
            )));
        }
        cz.r = a.r;
        cz.c0 = a.c0;
        cz.max_levels = a.max_levels;
        cz.tol = AtomTolerances { moment: self.tolerances.moment, size: self.tolerances.size };
        cfg(cz.check(g.dim), "atomic")?;

        let s = &self.sweep;
        if s.side_min_exp > s.side_max_exp || s.ball_min_exp > s.ball_max_exp {
            return Err(Error::Config("sweep exponent ranges must be nonempty".into()));
        }
        if 2f64.powi(s.side_min_exp) < g.h {
            return Err(Error::Config(format!(
                "smallest sweep side 2^{} is below the grid spacing {}",
                s.side_min_exp, g.h
            )));
        }
        if !(s.bmo_h > 0.0 && s.ball_h > 0.0) {
            return Err(Error::Config("sweep spacings must be positive".into()));
        }
        let sweep = CubeSweep::dyadic(s.side_min_exp, s.side_max_exp);

        let generator: Generator = self.family.generator.parse()?;
        let fam = &self.family;
        if !(fam.vector_r > 1.0) {
            return Err(Error::Config(format!("family.vector_r must exceed 1, got {}", fam.vector_r)));
        }
        if fam.vector_t_values.iter().any(|t| !(*t > 0.0)) {
            return Err(Error::Config("family.vector_t_values must be positive".into()));
        }
        let vphi = cfg(OrliczFunction::from_tag(&fam.vector_phi), "family.vector_phi")?;
        if !(vphi.p_minus() > 1.0 && fam.vector_q > 1.0) {
            return Err(Error::Config(format!(
                "hypothesis p_minus > 1 and q > 1 for the vector maximal check fails: p_minus = {}, q = {}",
                vphi.p_minus(),
                fam.vector_q
            )));
        }
        let checks = self.checks.iter().map(|c| c.parse()).collect::<Result<Vec<CheckName>>>()?;

        Ok(Scenario { config: self, checks, spec, slice, maximal, cz, generator, sweep })
    }
}
