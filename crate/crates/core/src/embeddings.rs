//! Inclusion checks between the amalgam space `L*^Φ`, the Musielak–Orlicz
//! space `L^θ` with `θ(x,τ) = τ/(log(e+|x|) + log(e+τ))`, and the Hardy
//! spaces built on them.

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::maximal::{hardy_quasinorm, MaximalParams, SpaceTag};
use crate::orlicz::{musielak_modular, musielak_norm, MusielakFunction, OrliczFunction};
use crate::slice::star_norm;

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingRow {
    pub index: usize,
    /// Norm of the larger space's side (`L*^Φ` or `h*^Φ`).
    pub source: f64,
    /// Norm in the target space (`L^θ` or `h^log`).
    pub target: f64,
    pub ratio: f64,
    /// θ-modular of `f/‖f‖_{L*^Φ}` (star check only).
    pub modular: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingReport {
    pub rows: Vec<EmbeddingRow>,
    /// Zero inputs.
    pub skipped: Vec<usize>,
    /// Fitted `C = max target/source`.
    pub constant: f64,
    /// Fitted `C' = max modular` (star check only).
    pub modular_bound: Option<f64>,
}

impl EmbeddingReport {
    pub fn passed(&self) -> bool {
        self.constant.is_finite() && self.modular_bound.is_none_or(f64::is_finite)
    }

    fn fit(rows: Vec<EmbeddingRow>, skipped: Vec<usize>) -> Self {
        let constant = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
        let modular_bound = rows.iter().filter_map(|r| r.modular).reduce(f64::max);
        Self { rows, skipped, constant, modular_bound }
    }
}

/// `‖f‖_{L^θ} ≤ C ‖f‖_{L*^Φ}` and `∫ θ(x, |f|/‖f‖_{L*^Φ}) ≤ C'` over the family.
pub fn star_to_muslog_check(family: &[GridFunction], phi: &OrliczFunction) -> Result<EmbeddingReport> {
    let theta = MusielakFunction::Log;
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for (index, f) in family.iter().enumerate() {
        if f.is_zero() {
            skipped.push(index);
            continue;
        }
        let source = star_norm(f, phi)?;
        let target = musielak_norm(&theta, f)?;
        let modular = musielak_modular(&theta, f, source)?;
        rows.push(EmbeddingRow { index, source, target, ratio: target / source, modular: Some(modular) });
    }
    Ok(EmbeddingReport::fit(rows, skipped))
}

/// One-sided `‖f‖_{h^log} ≤ C ‖f‖_{h*^Φ}` with both quasi-norms built on the
/// Peetre maximal function of the distinguished kernel. Requires `b > 2n`.
pub fn hardy_embedding_check(family: &[GridFunction], phi: &OrliczFunction, params: &MaximalParams) -> Result<EmbeddingReport> {
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    let star = SpaceTag::Star(phi.clone());
    for (index, f) in family.iter().enumerate() {
        let n = f.dim() as f64;
        if !(params.b > 2.0 * n) {
            return Err(Error::Precondition(format!("Peetre exponent b = {} must exceed 2n = {}", params.b, 2.0 * n)));
        }
        if f.is_zero() {
            skipped.push(index);
            continue;
        }
        let source = hardy_quasinorm(f, &star, params)?;
        let target = hardy_quasinorm(f, &SpaceTag::MusLog, params)?;
        rows.push(EmbeddingRow { index, source, target, ratio: target / source, modular: None });
    }
    Ok(EmbeddingReport::fit(rows, skipped))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_dictionary, bump, GridSpec};
    use crate::maximal::EPS_CUT;

    fn translates(h: f64, shifts: &[f64], f: impl Fn(f64) -> f64) -> Vec<GridFunction> {
        shifts
            .iter()
            .map(|r| {
                let spec = GridSpec::covering(1, r - 2.0, r + 3.0, h).unwrap();
                GridFunction::from_fn(spec, |x| f(x[0] - r))
            })
            .collect()
    }

    #[test]
    fn indicator_translates_decrease() {
        let phi = OrliczFunction::log_damped(0.9).unwrap();
        let mut fam = translates(1.0 / 64.0, &[0.0, 4.0, 16.0, 64.0], |x| if (0.0..1.0).contains(&x) { 1.0 } else { 0.0 });
        fam.push(GridFunction::zeros(GridSpec::new_1d(0.0, 1.0 / 64.0, 8).unwrap()));
        let rep = star_to_muslog_check(&fam, &phi).unwrap();
        assert_eq!(rep.skipped, vec![4]);
        assert!(rep.passed());
        for w in rep.rows.windows(2) {
            assert!(w[1].ratio < w[0].ratio);
        }
        // direct oracle at the origin: star norm is ‖1_{[0,1)}‖_Φ = 1/Φ^{-1}(1)
        let r0 = &rep.rows[0];
        assert!((phi.eval(1.0 / r0.source) - 1.0).abs() < 1e-8);
        assert!(rep.modular_bound.unwrap() <= 1.0 + 1e-9);
    }

    #[test]
    fn hardy_embedding_trend() {
        let h = 1.0 / 16.0;
        let dict = build_dictionary(1, 7, 3, h, 1).unwrap();
        let params = MaximalParams::new(1.0, 6.0, EPS_CUT, dict).unwrap();
        let phi = OrliczFunction::log_damped(0.9).unwrap();
        let fam = translates(h, &[0.0, 8.0, 32.0], |x| bump([x / 1.5, 0.0]));
        let rep = hardy_embedding_check(&fam, &phi, &params).unwrap();
        assert!(rep.passed());
        for w in rep.rows.windows(2) {
            assert!(w[1].ratio < w[0].ratio);
        }
        let low = MaximalParams::new(1.0, 1.5, EPS_CUT, build_dictionary(1, 7, 3, h, 1).unwrap()).unwrap();
        assert!(matches!(hardy_embedding_check(&fam, &phi, &low), Err(Error::Precondition(_))));
    }
}
