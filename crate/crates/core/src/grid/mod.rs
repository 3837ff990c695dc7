//! Uniform-grid sampled functions in dimension 1 or 2.
//!
//! A sample sits at the center of its cell: cell `i` of a grid with origin
//! `o` and spacing `h` covers `[o + i h, o + (i+1) h)` per axis and carries
//! the value at `o + (i + 1/2) h`. Functions vanish outside the box.
//! Values are stored row-major with axis 0 slowest.

mod geometry;
pub mod io;
mod kernel;

pub use geometry::{integrate, Ball, Cube, Region};
pub use kernel::{
    bump, build_dictionary, centered_lattice, convolve, fn_bound, max_ladder_depth, sample_kernel, unit_mass_bump, KernelStencil,
    MollifierDictionary,
};

use crate::error::{Error, Result};
use crate::numeric::near_integer;

/// Geometry of a grid: dimension, origin, spacing and per-axis cell counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    dim: usize,
    origin: [f64; 2],
    h: f64,
    extents: [usize; 2],
}

const ALIGN_TOL: f64 = 1e-9;

impl GridSpec {
    pub fn new(dim: usize, origin: &[f64], h: f64, extents: &[usize]) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidArgument(format!("dimension must be 1 or 2, got {dim}")));
        }
        if origin.len() != dim || extents.len() != dim {
            return Err(Error::InvalidArgument(format!(
                "origin and extents must have {dim} entries, got {} and {}",
                origin.len(),
                extents.len()
            )));
        }
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::InvalidArgument(format!("spacing must be positive, got {h}")));
        }
        if extents.contains(&0) {
            return Err(Error::InvalidArgument("every extent must be at least 1".into()));
        }
        if origin.iter().any(|o| !o.is_finite()) {
            return Err(Error::InvalidArgument("origin must be finite".into()));
        }
        let mut o = [0.0; 2];
        let mut e = [1usize; 2];
        o[..dim].copy_from_slice(origin);
        e[..dim].copy_from_slice(extents);
        Ok(Self { dim, origin: o, h, extents: e })
    }

    pub fn new_1d(origin: f64, h: f64, cells: usize) -> Result<Self> {
        Self::new(1, &[origin], h, &[cells])
    }

    pub fn new_2d(origin: [f64; 2], h: f64, extents: [usize; 2]) -> Result<Self> {
        Self::new(2, &origin, h, &extents)
    }

    /// Grid covering `[lo, hi)` per axis with spacing `h` (the upper end is
    /// rounded up to a whole cell).
    pub fn covering(dim: usize, lo: f64, hi: f64, h: f64) -> Result<Self> {
        if !(hi > lo) {
            return Err(Error::InvalidArgument(format!("empty interval [{lo}, {hi})")));
        }
        let cells = ((hi - lo) / h - ALIGN_TOL).ceil().max(1.0) as usize;
        Self::new(dim, &vec![lo; dim], h, &vec![cells; dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn h(&self) -> f64 {
        self.h
    }
    pub fn origin(&self) -> [f64; 2] {
        self.origin
    }
    pub fn extents(&self) -> [usize; 2] {
        self.extents
    }
    pub fn len(&self) -> usize {
        self.extents[0] * self.extents[1]
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
    /// Measure `h^n` of one cell.
    pub fn cell_measure(&self) -> f64 {
        self.h.powi(self.dim as i32)
    }

    /// Lower corner of the box along `axis`.
    pub fn lo(&self, axis: usize) -> f64 {
        self.origin[axis]
    }
    /// Upper corner of the box along `axis`.
    pub fn hi(&self, axis: usize) -> f64 {
        self.origin[axis] + self.extents[axis] as f64 * self.h
    }

    /// Euclidean diameter of the box.
    pub fn diameter(&self) -> f64 {
        let mut s = 0.0;
        for a in 0..self.dim {
            let l = self.extents[a] as f64 * self.h;
            s += l * l;
        }
        s.sqrt()
    }

    #[inline]
    pub fn flat(&self, i0: usize, i1: usize) -> usize {
        i0 * self.extents[1] + i1
    }

    #[inline]
    pub fn unflat(&self, k: usize) -> [usize; 2] {
        [k / self.extents[1], k % self.extents[1]]
    }

    /// Center of the (possibly out-of-box) lattice cell `idx`.
    #[inline]
    pub fn center(&self, idx: [i64; 2]) -> [f64; 2] {
        let mut x = [0.0; 2];
        for a in 0..self.dim {
            x[a] = self.origin[a] + (idx[a] as f64 + 0.5) * self.h;
        }
        x
    }

    #[inline]
    pub fn center_of(&self, k: usize) -> [f64; 2] {
        let [i0, i1] = self.unflat(k);
        self.center([i0 as i64, i1 as i64])
    }

    /// Flat index of lattice cell `idx`, or `None` outside the box.
    #[inline]
    pub fn index(&self, idx: [i64; 2]) -> Option<usize> {
        if idx[0] < 0 || idx[1] < 0 {
            return None;
        }
        let (i0, i1) = (idx[0] as usize, idx[1] as usize);
        if i0 >= self.extents[0] || i1 >= self.extents[1] {
            return None;
        }
        Some(self.flat(i0, i1))
    }

    /// Index of the cell containing the point `x` (possibly out of box).
    pub fn locate(&self, x: [f64; 2]) -> [i64; 2] {
        let mut idx = [0i64; 2];
        for a in 0..self.dim {
            idx[a] = ((x[a] - self.origin[a]) / self.h).floor() as i64;
        }
        idx
    }

    /// Shift `s` such that cell `i` of `other` is cell `i + s` of `self`,
    /// when the grids are compatible (same dimension and spacing, origins
    /// differing by whole cells).
    pub fn offset_of(&self, other: &GridSpec) -> Option<[i64; 2]> {
        if self.dim != other.dim || (self.h - other.h).abs() > ALIGN_TOL * self.h {
            return None;
        }
        let mut s = [0i64; 2];
        for a in 0..self.dim {
            let d = (other.origin[a] - self.origin[a]) / self.h;
            if !near_integer(d, 1e-6) {
                return None;
            }
            s[a] = d.round() as i64;
        }
        Some(s)
    }

    pub fn is_compatible(&self, other: &GridSpec) -> bool {
        self.offset_of(other).is_some()
    }

    /// Same grid with `cells` extra cells on every side.
    pub fn padded(&self, cells: usize) -> GridSpec {
        let mut out = *self;
        for a in 0..self.dim {
            out.origin[a] -= cells as f64 * self.h;
            out.extents[a] += 2 * cells;
        }
        out
    }

    /// Smallest compatible box containing both boxes.
    pub fn union(&self, other: &GridSpec) -> Result<GridSpec> {
        let s = self
            .offset_of(other)
            .ok_or_else(|| Error::InvalidData("grids are not compatible".into()))?;
        let mut out = *self;
        for a in 0..self.dim {
            let lo = s[a].min(0);
            let hi = (s[a] + other.extents[a] as i64).max(self.extents[a] as i64);
            out.origin[a] = self.origin[a] + lo as f64 * self.h;
            out.extents[a] = (hi - lo) as usize;
        }
        Ok(out)
    }

    /// Compatible box whose cell 0 is cell `lo` of `self` (which may lie
    /// outside the box), with `extents` cells per axis.
    pub fn sub_box(&self, lo: [i64; 2], extents: [usize; 2]) -> GridSpec {
        let mut out = *self;
        for a in 0..self.dim {
            out.origin[a] = self.origin[a] + lo[a] as f64 * self.h;
            out.extents[a] = extents[a].max(1);
        }
        out
    }

    /// Global lattice index of cell 0 when the origin is a whole multiple of h.
    pub fn global_offset(&self) -> Option<[i64; 2]> {
        let mut g = [0i64; 2];
        for a in 0..self.dim {
            let d = self.origin[a] / self.h;
            if !near_integer(d, 1e-6) {
                return None;
            }
            g[a] = d.round() as i64;
        }
        Some(g)
    }
}

/// A real function sampled on a [`GridSpec`], zero outside its box.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    spec: GridSpec,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(spec: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(Error::InvalidData(format!(
                "expected {} samples, got {}",
                spec.len(),
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidData(format!("sample {i} is not finite")));
        }
        Ok(Self { spec, values })
    }

    pub fn zeros(spec: GridSpec) -> Self {
        Self { spec, values: vec![0.0; spec.len()] }
    }

    pub fn constant(spec: GridSpec, c: f64) -> Self {
        Self { spec, values: vec![c; spec.len()] }
    }

    /// Samples `f` at every cell center.
    pub fn from_fn<F: Fn([f64; 2]) -> f64>(spec: GridSpec, f: F) -> Self {
        let values = (0..spec.len()).map(|k| f(spec.center_of(k))).collect();
        Self { spec, values }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }
    pub fn dim(&self) -> usize {
        self.spec.dim
    }
    pub fn h(&self) -> f64 {
        self.spec.h
    }
    pub fn origin(&self) -> [f64; 2] {
        self.spec.origin
    }
    pub fn extents(&self) -> [usize; 2] {
        self.spec.extents
    }
    pub fn len(&self) -> usize {
        self.values.len()
    }
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
    pub fn cell_measure(&self) -> f64 {
        self.spec.cell_measure()
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }
    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Value of lattice cell `idx`, zero outside the box.
    #[inline]
    pub fn at(&self, idx: [i64; 2]) -> f64 {
        self.spec.index(idx).map_or(0.0, |k| self.values[k])
    }

    /// `(center, value)` for every cell.
    pub fn iter_cells(&self) -> impl Iterator<Item = ([f64; 2], f64)> + '_ {
        self.values.iter().enumerate().map(move |(k, v)| (self.spec.center_of(k), *v))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == 0.0)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Midpoint-rule `(∫|f|^p)^{1/p}`.
    pub fn lp_norm(&self, p: f64) -> f64 {
        let m = self.cell_measure();
        if p == 1.0 {
            return self.values.iter().map(|v| v.abs()).sum::<f64>() * m;
        }
        (self.values.iter().map(|v| v.abs().powf(p)).sum::<f64>() * m).powf(1.0 / p)
    }

    /// Midpoint-rule `∫ f` over the whole box.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.cell_measure()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { spec: self.spec, values: self.values.iter().map(|v| v * c).collect() }
    }

    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> Self {
        Self { spec: self.spec, values: self.values.iter().map(|v| f(*v)).collect() }
    }

    pub fn abs(&self) -> Self {
        self.map(f64::abs)
    }

    /// Pointwise product; grids must coincide.
    pub fn mul(&self, other: &GridFunction) -> Result<Self> {
        self.require_same_grid(other)?;
        Ok(Self {
            spec: self.spec,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
        })
    }

    fn require_same_grid(&self, other: &GridFunction) -> Result<()> {
        match self.spec.offset_of(&other.spec) {
            Some([0, 0]) if self.spec.extents == other.spec.extents => Ok(()),
            _ => Err(Error::InvalidData("grid functions live on different grids".into())),
        }
    }

    /// `self += c · other`. `other` must be compatible and vanish on cells
    /// outside `self`'s box.
    pub fn add_scaled(&mut self, other: &GridFunction, c: f64) -> Result<()> {
        let s = self
            .spec
            .offset_of(&other.spec)
            .ok_or_else(|| Error::InvalidData("grid functions are not compatible".into()))?;
        let e = other.spec.extents;
        for i0 in 0..e[0] {
            for i1 in 0..e[1] {
                let v = other.values[other.spec.flat(i0, i1)];
                if v == 0.0 {
                    continue;
                }
                match self.spec.index([i0 as i64 + s[0], i1 as i64 + s[1]]) {
                    Some(k) => self.values[k] += c * v,
                    None => {
                        return Err(Error::InvalidData(
                            "added function is nonzero outside the target box".into(),
                        ))
                    }
                }
            }
        }
        Ok(())
    }

    /// Copy onto a compatible grid. Nonzero samples that would fall outside
    /// `spec` are an error.
    pub fn embed(&self, spec: &GridSpec) -> Result<Self> {
        let mut out = GridFunction::zeros(*spec);
        out.add_scaled(self, 1.0)?;
        Ok(out)
    }

    /// Copy onto a compatible grid, dropping whatever falls outside it.
    pub fn restrict(&self, spec: &GridSpec) -> Result<Self> {
        let s = spec
            .offset_of(&self.spec)
            .ok_or_else(|| Error::InvalidData("grid functions are not compatible".into()))?;
        let mut out = GridFunction::zeros(*spec);
        let e = spec.extents;
        for i0 in 0..e[0] {
            for i1 in 0..e[1] {
                out.values[spec.flat(i0, i1)] = self.at([i0 as i64 - s[0], i1 as i64 - s[1]]);
            }
        }
        Ok(out)
    }

    /// Zero-extension by `cells` cells on every side.
    pub fn padded(&self, cells: usize) -> Self {
        let spec = self.spec.padded(cells);
        self.embed(&spec).expect("padding keeps the box")
    }

    /// Inclusive index bounds of the nonzero samples, `None` for f ≡ 0.
    pub fn support_bounds(&self) -> Option<[(usize, usize); 2]> {
        let mut b = [(usize::MAX, 0usize); 2];
        let mut any = false;
        for (k, v) in self.values.iter().enumerate() {
            if *v != 0.0 {
                any = true;
                let idx = self.spec.unflat(k);
                for a in 0..2 {
                    b[a].0 = b[a].0.min(idx[a]);
                    b[a].1 = b[a].1.max(idx[a]);
                }
            }
        }
        any.then_some(b)
    }

    /// Inner product `∫ f g` on compatible grids.
    pub fn dot(&self, other: &GridFunction) -> Result<f64> {
        let s = self
            .spec
            .offset_of(&other.spec)
            .ok_or_else(|| Error::InvalidData("grid functions are not compatible".into()))?;
        let mut acc = crate::numeric::KahanSum::new();
        for (k, v) in self.values.iter().enumerate() {
            if *v == 0.0 {
                continue;
            }
            let [i0, i1] = self.spec.unflat(k);
            let w = other.at([i0 as i64 - s[0], i1 as i64 - s[1]]);
            acc.add(v * w);
        }
        Ok(acc.value() * self.cell_measure())
    }
}
