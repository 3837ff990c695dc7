//! Local `(Φ, q, t; r, d)` atoms and the atomic quasi-norm.

use super::polynomial::multi_indices;
use crate::error::{Error, Result};
use crate::grid::{Cube, GridFunction, GridSpec};
use crate::numeric::KahanSum;
use crate::slice::{slice_norm, CubeNormCache, SliceParams};

/// A sampled function `a` with a cube `Q`, a size exponent `r ∈ (1, ∞]` and
/// a moment order `d`. Moments are only required when `ℓ(Q) < 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub cube: Cube,
    pub values: GridFunction,
    pub r: f64,
    pub d: usize,
}

impl Atom {
    pub fn new(cube: Cube, values: GridFunction, r: f64, d: usize) -> Result<Self> {
        if !(r > 1.0) {
            return Err(Error::InvalidArgument(format!("atom size exponent must exceed 1, got {r}")));
        }
        if cube.dim() != values.dim() {
            return Err(Error::InvalidArgument("atom cube and samples differ in dimension".into()));
        }
        Ok(Self { cube, values, r, d })
    }

    pub fn needs_moments(&self) -> bool {
        self.cube.side() < 1.0
    }

    /// `‖a‖_{L^r}` on the grid.
    pub fn size(&self) -> f64 {
        if self.r.is_infinite() {
            self.values.sup_norm()
        } else {
            self.values.lp_norm(self.r)
        }
    }

    /// Lattice measure of `Q` on the atom's grid.
    pub fn cube_measure(&self) -> f64 {
        self.cube.lattice_cell_count(self.values.spec()) as f64 * self.values.cell_measure()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct AtomTolerances {
    /// `|∫ a m_α| ≤ moment · ‖a‖₁` in the scaled centered basis.
    pub moment: f64,
    /// Relative slack allowed in the size bound.
    pub size: f64,
}

impl Default for AtomTolerances {
    fn default() -> Self {
        Self { moment: 1e-8, size: 1e-12 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AtomReport {
    /// Largest `|a|` at a cell whose center is outside Q.
    pub support_leak: f64,
    pub size: f64,
    pub size_bound: f64,
    /// `ln(size_bound / size)`; negative when the size condition fails.
    pub size_slack: f64,
    /// Largest `|∫ a m_α| / ‖a‖₁`.
    pub moment_max: f64,
    pub moments_required: bool,
    pub support_ok: bool,
    pub size_ok: bool,
    pub moments_ok: bool,
}

impl AtomReport {
    pub fn valid(&self) -> bool {
        self.support_ok && self.size_ok && self.moments_ok
    }
}

/// Checks support, size and moment conditions of one atom.
pub fn validate_atom(atom: &Atom, norms: &CubeNormCache, tol: AtomTolerances) -> Result<AtomReport> {
    let spec = atom.values.spec();
    let ind = norms.cube(&atom.cube, spec)?;
    let mut leak: f64 = 0.0;
    let mut l1 = KahanSum::new();
    let alphas = multi_indices(atom.values.dim(), atom.d);
    let mut moments = vec![KahanSum::new(); alphas.len()];
    let c = atom.cube.center();
    let l = atom.cube.side();
    for (x, v) in atom.values.iter_cells() {
        if v == 0.0 {
            continue;
        }
        if !atom.cube.contains(x) {
            leak = leak.max(v.abs());
        }
        l1.add(v.abs());
        let t = [(x[0] - c[0]) / l, (x[1] - c[1]) / l];
        for (m, a) in moments.iter_mut().zip(&alphas) {
            let mono = t[0].powi(a[0] as i32) * if spec.dim() == 2 { t[1].powi(a[1] as i32) } else { 1.0 };
            m.add(v * mono);
        }
    }
    let l1 = l1.value();
    let moment_max = if l1 > 0.0 {
        moments.iter().map(|m| m.value().abs() / l1).fold(0.0, f64::max)
    } else {
        0.0
    };
    let size = atom.size();
    let size_bound = if atom.r.is_infinite() {
        1.0 / ind
    } else {
        atom.cube_measure().powf(1.0 / atom.r) / ind
    };
    let size_slack = if size > 0.0 { (size_bound / size).ln() } else { f64::INFINITY };
    let moments_required = atom.needs_moments();
    Ok(AtomReport {
        support_leak: leak,
        size,
        size_bound,
        size_slack,
        moment_max,
        moments_required,
        support_ok: leak == 0.0,
        size_ok: size_slack >= -tol.size,
        moments_ok: !moments_required || moment_max <= tol.moment,
    })
}

/// Smallest grid compatible with `base` containing `base` and the lattice
/// cells of every cube.
pub fn covering_grid<'a>(base: &GridSpec, cubes: impl IntoIterator<Item = &'a Cube>) -> Result<GridSpec> {
    let mut spec = *base;
    for q in cubes {
        let r = q.lattice_range(base);
        let mut lo = [0i64; 2];
        let mut ext = [1usize; 2];
        for a in 0..base.dim() {
            lo[a] = r[a].0;
            ext[a] = (r[a].1 - r[a].0).max(1) as usize;
        }
        spec = spec.union(&base.sub_box(lo, ext))?;
    }
    Ok(spec)
}

/// `‖ (Σ_i [λ_i / ‖1_{Q_i}‖]^s 1_{Q_i})^{1/s} ‖` in the slice quasi-norm.
/// Requires `0 < s < min{p_minus, q, 1}`.
pub fn atomic_quasinorm<'a>(
    terms: impl IntoIterator<Item = (f64, &'a Cube)>,
    base: &GridSpec,
    slice: &SliceParams,
    s: f64,
) -> Result<f64> {
    let smax = slice.phi.p_minus().min(slice.q).min(1.0);
    if !(s > 0.0 && s < smax) {
        return Err(Error::Precondition(format!("atomic exponent s = {s} must lie in (0, {smax})")));
    }
    let terms: Vec<(f64, &Cube)> = terms.into_iter().collect();
    let spec = covering_grid(base, terms.iter().map(|(_, q)| *q))?;
    let norms = CubeNormCache::new(slice.clone(), spec.dim(), spec.h());
    let mut acc = vec![0.0; spec.len()];
    for (lambda, q) in &terms {
        if *lambda == 0.0 {
            continue;
        }
        let w = (lambda.abs() / norms.cube(q, &spec)?).powf(s);
        for k in q.cells(&spec) {
            acc[k] += w;
        }
    }
    let g = GridFunction::new(spec, acc.into_iter().map(|v| v.powf(1.0 / s)).collect())?;
    slice_norm(&g, slice)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orlicz::OrliczFunction;

    fn setup() -> (GridSpec, CubeNormCache, SliceParams) {
        let spec = GridSpec::new_1d(-2.0, 1.0 / 32.0, 128).unwrap();
        let p = SliceParams::new(OrliczFunction::log_damped(0.9).unwrap(), 1.0, 1.0).unwrap();
        (spec, CubeNormCache::new(p.clone(), 1, spec.h()), p)
    }

    #[test]
    fn odd_atom_on_small_cube() {
        let (spec, norms, _) = setup();
        let q = Cube::new(&[0.0], 0.5).unwrap();
        let ind = norms.cube(&q, &spec).unwrap();
        let a = GridFunction::from_fn(spec, |x| if q.contains(x) { x[0].signum() / ind } else { 0.0 });
        let atom = Atom::new(q, a.clone(), f64::INFINITY, 0).unwrap();
        let rep = validate_atom(&atom, &norms, AtomTolerances::default()).unwrap();
        assert!(rep.valid(), "{rep:?}");
        assert!(rep.size_slack.abs() < 1e-12);
        // twice too large
        let big = Atom::new(q, a.scaled(2.0), f64::INFINITY, 0).unwrap();
        let rep = validate_atom(&big, &norms, AtomTolerances::default()).unwrap();
        assert!(!rep.valid());
        assert!((rep.size_slack + 2f64.ln()).abs() < 1e-12);
        // a nonzero mean on a small cube fails the moment condition
        let pos = Atom::new(q, a.abs(), f64::INFINITY, 0).unwrap();
        let rep = validate_atom(&pos, &norms, AtomTolerances::default()).unwrap();
        assert!(!rep.moments_ok && rep.size_ok && rep.support_ok);
        // degree 1 moments of the odd atom fail
        let odd1 = Atom::new(q, a, f64::INFINITY, 1).unwrap();
        assert!(!validate_atom(&odd1, &norms, AtomTolerances::default()).unwrap().moments_ok);
    }

    #[test]
    fn large_cubes_need_no_moments_and_leaks_are_caught() {
        let (spec, norms, _) = setup();
        let q = Cube::new(&[0.0], 1.0).unwrap();
        let ind = norms.cube(&q, &spec).unwrap();
        let a = GridFunction::from_fn(spec, |x| if q.contains(x) { 1.0 / ind } else { 0.0 });
        assert!(validate_atom(&Atom::new(q, a.clone(), f64::INFINITY, 2).unwrap(), &norms, AtomTolerances::default())
            .unwrap()
            .valid());
        let small = Cube::new(&[0.0], 0.5).unwrap();
        let rep = validate_atom(&Atom::new(small, a, f64::INFINITY, 0).unwrap(), &norms, AtomTolerances::default()).unwrap();
        assert!(!rep.support_ok && rep.support_leak > 0.0);
    }

    #[test]
    fn finite_size_exponent() {
        let (spec, norms, _) = setup();
        let q = Cube::new(&[0.0], 1.0).unwrap();
        let ind = norms.cube(&q, &spec).unwrap();
        let a = GridFunction::from_fn(spec, |x| if q.contains(x) { 1.0 / ind } else { 0.0 });
        let rep = validate_atom(&Atom::new(q, a, 2.0, 0).unwrap(), &norms, AtomTolerances::default()).unwrap();
        // ‖1_Q/‖1_Q‖‖_2 = |Q|^{1/2}/‖1_Q‖ exactly
        assert!(rep.size_slack.abs() < 1e-12 && rep.valid());
    }

    #[test]
    fn single_atom_quasinorm_is_indicator_norm() {
        let (spec, norms, p) = setup();
        let q = Cube::new(&[0.25], 0.5).unwrap();
        let ind = norms.cube(&q, &spec).unwrap();
        let v = atomic_quasinorm([(ind, &q)], &spec, &p, 0.81).unwrap();
        assert!((v - ind).abs() < 1e-9 * ind);
        assert!(matches!(atomic_quasinorm([(ind, &q)], &spec, &p, 0.95), Err(Error::Precondition(_))));
        // cube sticking out of the base grid
        let far = Cube::new(&[5.0], 1.0).unwrap();
        let v = atomic_quasinorm([(2.0, &far)], &spec, &p, 0.5).unwrap();
        assert!((v - 2.0).abs() < 1e-9);
    }
}
