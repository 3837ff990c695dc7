//! Seeded test families.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::{bump, GridFunction, GridSpec};

#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    /// Signed smooth bumps.
    Bumps,
    /// Nonnegative smooth bumps.
    Nonnegative,
    /// Random trigonometric bursts under a bump envelope.
    Bursts,
    /// Indicators of random cubes.
    Indicators,
    /// `1_{[0, 2^{-m}]}` for `m = 0, 1, ...` (cubes in 2-D).
    IndicatorLadder,
    /// The unit bump shifted to distance R along the first axis, each on
    /// its own grid.
    Translates(Vec<f64>),
    /// Bumps, bursts and indicators in turn.
    Mixed,
}

impl FromStr for Generator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("translates:") {
            let list = rest
                .strip_prefix("R=")
                .ok_or_else(|| Error::Config(format!("translates generator expects 'translates:R=a,b,...', got '{s}'")))?;
            let rs = list
                .split(',')
                .map(|v| v.trim().parse::<f64>().map_err(|_| Error::Config(format!("bad translate distance '{v}'"))))
                .collect::<Result<Vec<_>>>()?;
            if rs.is_empty() || rs.iter().any(|r| !r.is_finite()) {
                return Err(Error::Config("translate distances must be finite".into()));
            }
            return Ok(Generator::Translates(rs));
        }
        match s {
            "bumps" => Ok(Generator::Bumps),
            "nonnegative" => Ok(Generator::Nonnegative),
            "bursts" => Ok(Generator::Bursts),
            "indicators" => Ok(Generator::Indicators),
            "indicator-ladder" => Ok(Generator::IndicatorLadder),
            "mixed" => Ok(Generator::Mixed),
            _ => Err(Error::Config(format!("unknown family generator '{s}'"))),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Bumps => f.write_str("bumps"),
            Generator::Nonnegative => f.write_str("nonnegative"),
            Generator::Bursts => f.write_str("bursts"),
            Generator::Indicators => f.write_str("indicators"),
            Generator::IndicatorLadder => f.write_str("indicator-ladder"),
            Generator::Mixed => f.write_str("mixed"),
            Generator::Translates(rs) => {
                let v: Vec<String> = rs.iter().map(|r| r.to_string()).collect();
                write!(f, "translates:R={}", v.join(","))
            }
        }
    }
}

fn radial_bump(x: [f64; 2], c: [f64; 2], w: f64, dim: usize) -> f64 {
    let mut y = [0.0; 2];
    for a in 0..dim {
        y[a] = (x[a] - c[a]) / w;
    }
    bump(y)
}

/// Random center in the middle 60% of the box.
fn center(rng: &mut ChaCha8Rng, spec: &GridSpec) -> [f64; 2] {
    let mut c = [0.0; 2];
    for a in 0..spec.dim() {
        let (lo, hi) = (spec.lo(a), spec.hi(a));
        let m = 0.2 * (hi - lo);
        c[a] = rng.gen_range(lo + m..hi - m);
    }
    c
}

fn width(rng: &mut ChaCha8Rng, spec: &GridSpec) -> f64 {
    let span = (0..spec.dim()).map(|a| spec.hi(a) - spec.lo(a)).fold(f64::INFINITY, f64::min);
    let hi = (0.15 * span).clamp(8.0 * spec.h(), 2.0);
    let lo = (0.25f64).min(hi / 2.0).max(4.0 * spec.h());
    rng.gen_range(lo..=hi.max(lo))
}

fn signed_amplitude(rng: &mut ChaCha8Rng) -> f64 {
    let a = rng.gen_range(0.5..3.0);
    if rng.gen_bool(0.5) {
        a
    } else {
        -a
    }
}

fn draw(kind: &Generator, rng: &mut ChaCha8Rng, spec: &GridSpec) -> GridFunction {
    let dim = spec.dim();
    match kind {
        Generator::Bumps | Generator::Nonnegative => {
            let c = center(rng, spec);
            let w = width(rng, spec);
            let amp = if matches!(kind, Generator::Bumps) { signed_amplitude(rng) } else { rng.gen_range(0.5..3.0) };
            GridFunction::from_fn(*spec, |x| amp * radial_bump(x, c, w, dim))
        }
        Generator::Bursts => {
            let c = center(rng, spec);
            let w = width(rng, spec);
            let amp = signed_amplitude(rng);
            let omega: f64 = rng.gen_range(2.0..12.0);
            let phase: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let dir: f64 = rng.gen_range(0.0..std::f64::consts::PI);
            GridFunction::from_fn(*spec, |x| {
                let s = if dim == 2 { (x[0] - c[0]) * dir.cos() + (x[1] - c[1]) * dir.sin() } else { x[0] - c[0] };
                amp * (omega * s + phase).cos() * radial_bump(x, c, w, dim)
            })
        }
        Generator::Indicators => {
            let c = center(rng, spec);
            let w = width(rng, spec);
            let amp = signed_amplitude(rng);
            GridFunction::from_fn(*spec, |x| {
                if (0..dim).all(|a| (x[a] - c[a]).abs() < w / 2.0) {
                    amp
                } else {
                    0.0
                }
            })
        }
        _ => unreachable!("handled by generate_family"),
    }
}

/// Deterministic family: the same generator, grid, count and seed give
/// bit-identical samples.
pub fn generate_family(kind: &Generator, spec: &GridSpec, count: usize, seed: u64) -> Result<Vec<GridFunction>> {
    let dim = spec.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        Generator::IndicatorLadder => (0..count)
            .map(|m| {
                let side = 2f64.powi(-(m as i32));
                if side < spec.h() {
                    return Err(Error::Resolution { scale: side, h: spec.h() });
                }
                Ok(GridFunction::from_fn(*spec, |x| {
                    if (0..dim).all(|a| x[a] >= 0.0 && x[a] <= side) {
                        1.0
                    } else {
                        0.0
                    }
                }))
            })
            .collect(),
        Generator::Translates(rs) => rs
            .iter()
            .map(|&r| {
                let mut lo = [-2.0; 2];
                lo[0] = (r - 2.0).floor();
                let ext = ((4.0 / spec.h()).ceil() as usize + 1, (4.0 / spec.h()).ceil() as usize);
                let g = if dim == 1 {
                    GridSpec::new_1d(lo[0], spec.h(), ext.0)?
                } else {
                    GridSpec::new_2d(lo, spec.h(), [ext.0, ext.1])?
                };
                let c = [r, 0.0];
                Ok(GridFunction::from_fn(g, |x| radial_bump(x, c, 1.0, dim)))
            })
            .collect(),
        Generator::Mixed => {
            let kinds = [Generator::Bumps, Generator::Bursts, Generator::Indicators];
            Ok((0..count).map(|i| draw(&kinds[i % 3], &mut rng, spec)).collect())
        }
        _ => Ok((0..count).map(|_| draw(kind, &mut rng, spec)).collect()),
    }
}

/// Bounded random fields for duality checks: a few random Fourier modes
/// plus a small cell-wise perturbation, sup-normalized to 1.
pub fn random_fields(spec: &GridSpec, count: usize, seed: u64) -> Vec<GridFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let modes: Vec<([f64; 2], f64, f64)> = (0..4)
                .map(|_| {
                    let k = [rng.gen_range(-6.0..6.0), rng.gen_range(-6.0..6.0)];
                    (k, rng.gen_range(0.0..std::f64::consts::TAU), rng.gen_range(0.2..1.0))
                })
                .collect();
            let noise: Vec<f64> = (0..spec.len()).map(|_| rng.gen_range(-0.2..0.2)).collect();
            let mut g = GridFunction::from_fn(*spec, |x| {
                modes.iter().map(|(k, p, a)| a * (k[0] * x[0] + k[1] * x[1] + p).cos()).sum()
            });
            for (v, n) in g.values_mut().iter_mut().zip(&noise) {
                *v += n;
            }
            let s = g.sup_norm();
            g.scaled(1.0 / s)
        })
        .collect()
}
