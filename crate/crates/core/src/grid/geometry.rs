use super::{GridFunction, GridSpec};
use crate::error::{Error, Result};
use crate::numeric::KahanSum;

/// Axis-aligned cube `∏ [c_a − ℓ/2, c_a + ℓ/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cube {
    dim: usize,
    center: [f64; 2],
    side: f64,
}

impl Cube {
    pub fn new(center: &[f64], side: f64) -> Result<Self> {
        let dim = center.len();
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidArgument(format!("cube dimension must be 1 or 2, got {dim}")));
        }
        if !(side.is_finite() && side > 0.0) {
            return Err(Error::InvalidArgument(format!("cube side must be positive, got {side}")));
        }
        let mut c = [0.0; 2];
        c[..dim].copy_from_slice(center);
        Ok(Self { dim, center: c, side })
    }

    pub(crate) fn from_parts(dim: usize, center: [f64; 2], side: f64) -> Self {
        Self { dim, center, side }
    }

    /// Cube with lower corner `lo` per axis.
    pub fn from_corner(dim: usize, lo: [f64; 2], side: f64) -> Result<Self> {
        let mut c = [0.0; 2];
        for a in 0..dim {
            c[a] = lo[a] + 0.5 * side;
        }
        Self::new(&c[..dim], side)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn center(&self) -> [f64; 2] {
        self.center
    }
    pub fn side(&self) -> f64 {
        self.side
    }
    pub fn lo(&self, axis: usize) -> f64 {
        self.center[axis] - 0.5 * self.side
    }
    pub fn hi(&self, axis: usize) -> f64 {
        self.center[axis] + 0.5 * self.side
    }
    pub fn measure(&self) -> f64 {
        self.side.powi(self.dim as i32)
    }
    pub fn diameter(&self) -> f64 {
        self.side * (self.dim as f64).sqrt()
    }

    /// `αQ`: same center, side multiplied by `alpha`.
    pub fn dilate(&self, alpha: f64) -> Cube {
        Cube { side: self.side * alpha, ..*self }
    }

    pub fn contains(&self, x: [f64; 2]) -> bool {
        (0..self.dim).all(|a| x[a] >= self.lo(a) && x[a] < self.hi(a))
    }

    /// Largest `|x|` over the closed cube.
    pub fn max_abs(&self) -> f64 {
        let mut s = 0.0;
        for a in 0..self.dim {
            let m = self.lo(a).abs().max(self.hi(a).abs());
            s += m * m;
        }
        s.sqrt()
    }

    /// `true` when the open interiors intersect.
    pub fn overlaps(&self, other: &Cube) -> bool {
        (0..self.dim).all(|a| self.lo(a) < other.hi(a) && other.lo(a) < self.hi(a))
    }

    /// Half-open lattice index range of the cells of `spec` whose centers
    /// lie in the cube, per axis, not clipped to the box.
    pub fn lattice_range(&self, spec: &GridSpec) -> [(i64, i64); 2] {
        let mut r = [(0i64, 1i64); 2];
        let h = spec.h();
        for a in 0..self.dim {
            let o = spec.origin()[a];
            let lo = ((self.lo(a) - o) / h - 0.5).ceil() as i64;
            let hi = ((self.hi(a) - o) / h - 0.5).ceil() as i64;
            r[a] = (lo, hi.max(lo));
        }
        r
    }

    /// As [`Cube::lattice_range`], clipped to the box of `spec`.
    pub fn index_range(&self, spec: &GridSpec) -> [(usize, usize); 2] {
        let r = self.lattice_range(spec);
        let e = spec.extents();
        let mut out = [(0usize, 0usize); 2];
        for a in 0..2 {
            let lo = r[a].0.clamp(0, e[a] as i64) as usize;
            let hi = r[a].1.clamp(0, e[a] as i64) as usize;
            out[a] = (lo, hi.max(lo));
        }
        out
    }

    /// Number of lattice cells of `spec` (ignoring the box) inside the cube.
    pub fn lattice_cell_count(&self, spec: &GridSpec) -> usize {
        let r = self.lattice_range(spec);
        ((r[0].1 - r[0].0) * (r[1].1 - r[1].0)) as usize
    }

    /// Flat indices of the box cells whose centers lie in the cube.
    pub fn cells(&self, spec: &GridSpec) -> Vec<usize> {
        let [(a0, b0), (a1, b1)] = self.index_range(spec);
        let mut out = Vec::with_capacity((b0 - a0) * (b1 - a1));
        for i0 in a0..b0 {
            for i1 in a1..b1 {
                out.push(spec.flat(i0, i1));
            }
        }
        out
    }

    /// `true` when every lattice cell of the cube lies inside the box.
    pub fn inside_box(&self, spec: &GridSpec) -> bool {
        let r = self.lattice_range(spec);
        let e = spec.extents();
        (0..self.dim).all(|a| r[a].0 >= 0 && r[a].1 <= e[a] as i64 && r[a].1 > r[a].0)
    }
}

/// Open Euclidean ball `{ y : |y − c| < r }`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ball {
    dim: usize,
    center: [f64; 2],
    radius: f64,
}

impl Ball {
    pub fn new(center: &[f64], radius: f64) -> Result<Self> {
        let dim = center.len();
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidArgument(format!("ball dimension must be 1 or 2, got {dim}")));
        }
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidArgument(format!("ball radius must be positive, got {radius}")));
        }
        let mut c = [0.0; 2];
        c[..dim].copy_from_slice(center);
        Ok(Self { dim, center: c, radius })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn center(&self) -> [f64; 2] {
        self.center
    }
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Lebesgue measure of the ball.
    pub fn measure(&self) -> f64 {
        match self.dim {
            1 => 2.0 * self.radius,
            _ => std::f64::consts::PI * self.radius * self.radius,
        }
    }

    pub fn contains(&self, x: [f64; 2]) -> bool {
        let mut s = 0.0;
        for a in 0..self.dim {
            let d = x[a] - self.center[a];
            s += d * d;
        }
        s < self.radius * self.radius
    }

    /// Flat indices of box cells whose centers lie in the ball.
    pub fn cells(&self, spec: &GridSpec) -> Vec<usize> {
        let bound = Cube::from_parts(self.dim, self.center, 2.0 * self.radius + 2.0 * spec.h());
        bound
            .cells(spec)
            .into_iter()
            .filter(|&k| self.contains(spec.center_of(k)))
            .collect()
    }
}

/// Integration domain accepted by [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    Cube(Cube),
    Ball(Ball),
    Whole,
}

/// Midpoint-rule integral of `f` over the cells whose centers lie in the
/// region. Additive over disjoint regions; cells outside the box contribute 0.
pub fn integrate(f: &GridFunction, region: &Region) -> f64 {
    let v = f.values();
    let mut acc = KahanSum::new();
    match region {
        Region::Whole => v.iter().for_each(|x| acc.add(*x)),
        Region::Cube(c) => c.cells(f.spec()).into_iter().for_each(|k| acc.add(v[k])),
        Region::Ball(b) => b.cells(f.spec()).into_iter().for_each(|k| acc.add(v[k])),
    }
    acc.value() * f.cell_measure()
}
