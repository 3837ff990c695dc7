use super::{GridFunction, GridSpec};
use crate::error::{Error, Result};
use crate::numeric::near_integer;

/// Grid whose cell centers are the lattice points `k h`, `|k_a| ≤ radius`.
pub fn centered_lattice(dim: usize, h: f64, radius: usize) -> Result<GridSpec> {
    let o = -(radius as f64 + 0.5) * h;
    GridSpec::new(dim, &vec![o; dim], h, &vec![2 * radius + 1; dim])
}

/// Samples `f` on the centered lattice covering the unit ball; samples at
/// `|x| ≥ 1` are set to zero.
pub fn sample_kernel<F: Fn([f64; 2]) -> f64>(dim: usize, h: f64, f: F) -> Result<GridFunction> {
    let radius = (1.0 / h).ceil() as usize;
    let spec = centered_lattice(dim, h, radius)?;
    Ok(GridFunction::from_fn(spec, |x| {
        let r2 = x[0] * x[0] + x[1] * x[1];
        if r2 < 1.0 {
            f(x)
        } else {
            0.0
        }
    }))
}

/// The standard bump `exp(−1/(1−|x|²))` on the unit ball.
pub fn bump(x: [f64; 2]) -> f64 {
    let r2 = x[0] * x[0] + x[1] * x[1];
    if r2 < 1.0 {
        (-1.0 / (1.0 - r2)).exp()
    } else {
        0.0
    }
}

/// [`bump`] sampled and rescaled to unit quadrature mass.
pub fn unit_mass_bump(dim: usize, h: f64) -> Result<GridFunction> {
    let k = sample_kernel(dim, h, bump)?;
    let m = k.integral();
    if !(m > 0.0) {
        return Err(Error::Construction(format!("bump is not resolved at spacing {h}")));
    }
    Ok(k.scaled(1.0 / m))
}

fn invert_scale(s: f64, h: f64) -> Result<i64> {
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::InvalidArgument(format!("scale must be positive, got {s}")));
    }
    if s < 2.0 * h * (1.0 - 1e-12) {
        return Err(Error::Resolution { scale: s, h });
    }
    let m = 1.0 / s;
    if s > 1.0 + 1e-12 || !near_integer(m, 1e-9) {
        return Err(Error::InvalidArgument(format!(
            "scale {s} is not the reciprocal of a positive integer"
        )));
    }
    Ok(m.round() as i64)
}

/// Nonzero taps of `ψ_s = s^{-n} ψ(·/s)` on the lattice `d h`, each weighted
/// by the cell measure so that applying the stencil is a quadrature
/// convolution.
#[derive(Debug, Clone)]
pub struct KernelStencil {
    dim: usize,
    taps: Vec<([i64; 2], f64)>,
}

impl KernelStencil {
    /// `kernel` must live on a centered lattice of spacing `h`.
    pub fn new(kernel: &GridFunction, s: f64) -> Result<Self> {
        let spec = kernel.spec();
        let h = spec.h();
        let m = invert_scale(s, h)?;
        let dim = spec.dim();
        let e = spec.extents();
        let radius = (e[0] as i64 - 1) / 2;
        for a in 0..dim {
            if e[a].is_multiple_of(2) || !near_integer(spec.origin()[a] / h + radius as f64 + 0.5, 1e-9) {
                return Err(Error::InvalidArgument("kernel must be sampled on a centered lattice".into()));
            }
        }
        let scale = s.powi(-(dim as i32)) * spec.cell_measure();
        let dmax = radius / m;
        let mut taps = Vec::new();
        let r1 = if dim == 2 { dmax } else { 0 };
        for d0 in -dmax..=dmax {
            for d1 in -r1..=r1 {
                let k0 = d0 * m + radius;
                let k1 = if dim == 2 { d1 * m + radius } else { 0 };
                let v = kernel.at([k0, k1]);
                if v != 0.0 {
                    taps.push(([d0, d1], v * scale));
                }
            }
        }
        Ok(Self { dim, taps })
    }

    pub fn taps(&self) -> &[([i64; 2], f64)] {
        &self.taps
    }

    /// Largest tap offset along any axis.
    pub fn reach(&self) -> i64 {
        self.taps.iter().map(|(d, _)| d[0].abs().max(d[1].abs())).max().unwrap_or(0)
    }

    /// `(ψ_s ∗ f)` at every cell of f's grid.
    pub fn apply(&self, f: &GridFunction) -> GridFunction {
        let spec = *f.spec();
        let mut out = vec![0.0; spec.len()];
        let e = spec.extents();
        let src = f.values();
        if self.dim == 1 {
            let n = e[0] as i64;
            for (i, o) in out.iter_mut().enumerate() {
                let mut acc = 0.0;
                for (d, w) in &self.taps {
                    let j = i as i64 - d[0];
                    if j >= 0 && j < n {
                        acc += w * src[j as usize];
                    }
                }
                *o = acc;
            }
        } else {
            let (n0, n1) = (e[0] as i64, e[1] as i64);
            for i0 in 0..n0 {
                for i1 in 0..n1 {
                    let mut acc = 0.0;
                    for (d, w) in &self.taps {
                        let j0 = i0 - d[0];
                        let j1 = i1 - d[1];
                        if j0 >= 0 && j0 < n0 && j1 >= 0 && j1 < n1 {
                            acc += w * src[(j0 * n1 + j1) as usize];
                        }
                    }
                    out[(i0 * n1 + i1) as usize] = acc;
                }
            }
        }
        GridFunction::new(spec, out).expect("finite convolution")
    }
}

/// Quadrature convolution `f ∗ ψ_s` sampled on f's grid. `1/s` must be an
/// integer and `s ≥ 2h`.
pub fn convolve(f: &GridFunction, kernel: &GridFunction, s: f64) -> Result<GridFunction> {
    if (kernel.h() - f.h()).abs() > 1e-12 * f.h() || kernel.dim() != f.dim() {
        return Err(Error::InvalidData("kernel and function must share spacing and dimension".into()));
    }
    Ok(KernelStencil::new(kernel, s)?.apply(f))
}

fn centered_difference(values: &[f64], e: [usize; 2], axis: usize, h: f64) -> Vec<f64> {
    let mut out = vec![0.0; values.len()];
    let inv = 0.5 / h;
    for i0 in 0..e[0] {
        for i1 in 0..e[1] {
            let k = i0 * e[1] + i1;
            let (prev, next) = if axis == 0 {
                (
                    if i0 > 0 { values[k - e[1]] } else { 0.0 },
                    if i0 + 1 < e[0] { values[k + e[1]] } else { 0.0 },
                )
            } else {
                (
                    if i1 > 0 { values[k - 1] } else { 0.0 },
                    if i1 + 1 < e[1] { values[k + 1] } else { 0.0 },
                )
            };
            out[k] = (next - prev) * inv;
        }
    }
    out
}

/// `Σ_{|β| ≤ N} sup_x (1+|x|)^{N+n} |∂^β ψ(x)|`, derivatives by repeated
/// centered differences with step h on the zero-extended lattice.
pub fn fn_bound(kernel: &GridFunction, order: usize) -> f64 {
    let dim = kernel.dim();
    let padded = kernel.padded(order + 1);
    let spec = *padded.spec();
    let e = spec.extents();
    let h = spec.h();
    let weight: Vec<f64> = (0..spec.len())
        .map(|k| {
            let x = spec.center_of(k);
            (1.0 + (x[0] * x[0] + x[1] * x[1]).sqrt()).powi((order + dim) as i32)
        })
        .collect();
    let sup = |v: &[f64]| v.iter().zip(&weight).fold(0.0f64, |m, (a, w)| m.max(a.abs() * w));

    let mut total = 0.0;
    let mut d0 = padded.values().to_vec();
    for b0 in 0..=order {
        if dim == 1 {
            total += sup(&d0);
        } else {
            let mut d1 = d0.clone();
            for _b1 in 0..=(order - b0) {
                total += sup(&d1);
                d1 = centered_difference(&d1, e, 1, h);
            }
        }
        d0 = centered_difference(&d0, e, 0, h);
    }
    total
}

/// Finite family of normalized smooth kernels with a dyadic scale ladder,
/// standing in for the class of test functions with bounded
/// `Σ (1+|x|)^{N+n}|∂^β ψ|`.
#[derive(Debug, Clone)]
pub struct MollifierDictionary {
    dim: usize,
    order: usize,
    h: f64,
    kernels: Vec<GridFunction>,
    bounds: Vec<f64>,
    scales: Vec<f64>,
}

/// Polynomially modulated bump: index 0 is the bump itself, index `k ≥ 1`
/// multiplies it by the Chebyshev polynomial `T_k` in one coordinate.
fn candidate(dim: usize, k: usize) -> impl Fn([f64; 2]) -> f64 {
    move |x: [f64; 2]| {
        let b = bump(x);
        if k == 0 {
            return b;
        }
        let axis = (k - 1) % dim;
        let deg = (k - 1) / dim + 1;
        let t = x[axis].clamp(-1.0, 1.0);
        b * (deg as f64 * t.acos()).cos()
    }
}

/// Largest scale-index `M` with `2^{-M} ≥ 2h`.
pub fn max_ladder_depth(h: f64) -> usize {
    (1.0 / (2.0 * h)).log2().floor().max(0.0) as usize
}

fn dyadic_ladder(depth: usize, h: f64) -> Result<Vec<f64>> {
    let smallest = 2f64.powi(-(depth as i32));
    if smallest < 2.0 * h * (1.0 - 1e-12) {
        return Err(Error::Resolution { scale: smallest, h });
    }
    Ok((0..=depth).map(|m| 2f64.powi(-(m as i32))).collect())
}

/// Builds `count` kernels of spacing `h`, each rescaled so its
/// [`fn_bound`] of order `order` is at most 1, with scale ladder
/// `{2^{-m} : m = 0..=depth}`. Kernel 0 is the distinguished positive bump.
pub fn build_dictionary(dim: usize, order: usize, depth: usize, h: f64, count: usize) -> Result<MollifierDictionary> {
    if order < 1 {
        return Err(Error::InvalidArgument("dictionary order must be at least 1".into()));
    }
    if count < 1 {
        return Err(Error::InvalidArgument("dictionary needs at least one kernel".into()));
    }
    let scales = dyadic_ladder(depth, h)?;
    let mut kernels = Vec::with_capacity(count);
    let mut bounds = Vec::with_capacity(count);
    for k in 0..count {
        let raw = sample_kernel(dim, h, candidate(dim, k))?;
        let b = fn_bound(&raw, order);
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::Construction(format!("candidate kernel {k} is degenerate at spacing {h}")));
        }
        let scale = 1.0 / (b * (1.0 + 1e-12));
        let kernel = raw.scaled(scale);
        bounds.push(fn_bound(&kernel, order));
        kernels.push(kernel);
    }
    if !(kernels[0].integral() > 0.0) {
        return Err(Error::Construction("distinguished kernel has zero mass".into()));
    }
    Ok(MollifierDictionary { dim, order, h, kernels, bounds, scales })
}

impl MollifierDictionary {
    /// Dictionary from explicit kernels (the first is distinguished) and an
    /// explicit ladder. No normalization is applied.
    pub fn from_kernels(order: usize, kernels: Vec<GridFunction>, scales: Vec<f64>) -> Result<Self> {
        let first = kernels
            .first()
            .ok_or_else(|| Error::InvalidArgument("dictionary needs at least one kernel".into()))?;
        let (dim, h) = (first.dim(), first.h());
        for s in &scales {
            invert_scale(*s, h)?;
        }
        let bounds = kernels.iter().map(|k| fn_bound(k, order)).collect();
        Ok(Self { dim, order, h, kernels, bounds, scales })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn order(&self) -> usize {
        self.order
    }
    pub fn h(&self) -> f64 {
        self.h
    }
    pub fn kernels(&self) -> &[GridFunction] {
        &self.kernels
    }
    pub fn len(&self) -> usize {
        self.kernels.len()
    }
    pub fn is_empty(&self) -> bool {
        self.kernels.is_empty()
    }
    pub fn scales(&self) -> &[f64] {
        &self.scales
    }
    /// Measured normalization bound of each kernel.
    pub fn bounds(&self) -> &[f64] {
        &self.bounds
    }
    /// The nonzero-mass kernel φ.
    pub fn distinguished(&self) -> &GridFunction {
        &self.kernels[0]
    }

    /// Same ladder, first `count` kernels.
    pub fn truncated(&self, count: usize) -> Self {
        let count = count.clamp(1, self.kernels.len());
        Self {
            kernels: self.kernels[..count].to_vec(),
            bounds: self.bounds[..count].to_vec(),
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;

    #[test]
    fn constants_are_reproduced_in_the_interior() {
        let h = 1.0 / 32.0;
        let spec = GridSpec::covering(1, -4.0, 4.0, h).unwrap();
        let f = GridFunction::constant(spec, 3.0);
        let phi = unit_mass_bump(1, h).unwrap();
        let g = convolve(&f, &phi, 1.0).unwrap();
        for (k, v) in g.values().iter().enumerate() {
            let x = spec.center_of(k)[0];
            if x.abs() < 3.0 - h {
                assert!((v - 3.0).abs() < 1e-12, "{x}: {v}");
            }
        }
        assert!(convolve(&GridFunction::zeros(spec), &phi, 0.5).unwrap().is_zero());
    }

    #[test]
    fn spike_reproduces_the_kernel() {
        let h = 1.0 / 16.0;
        let spec = GridSpec::covering(1, -2.0, 2.0, h).unwrap();
        let spike_at = spec.locate([0.01, 0.0]);
        let mut f = GridFunction::zeros(spec);
        f.values_mut()[spec.index(spike_at).unwrap()] = 1.0 / h;
        let psi = sample_kernel(1, h, |x| (1.0 - x[0] * x[0]).powi(2)).unwrap();
        for s in [1.0, 0.5, 0.25] {
            let g = convolve(&f, &psi, s).unwrap();
            let x0 = spec.center(spike_at)[0];
            for (k, v) in g.values().iter().enumerate() {
                let x = spec.center_of(k)[0];
                let u = (x - x0) / s;
                let oracle = if u.abs() < 1.0 { (1.0 - u * u).powi(2) / s } else { 0.0 };
                assert!((v - oracle).abs() < 1e-12, "s={s} x={x}: {v} vs {oracle}");
            }
        }
    }

    #[test]
    fn resolution_and_scale_errors() {
        let h = 1.0 / 8.0;
        let spec = GridSpec::covering(1, -1.0, 1.0, h).unwrap();
        let f = GridFunction::constant(spec, 1.0);
        let phi = unit_mass_bump(1, h).unwrap();
        assert!(matches!(convolve(&f, &phi, 0.125), Err(Error::Resolution { .. })));
        assert!(matches!(convolve(&f, &phi, 0.3), Err(Error::InvalidArgument(_))));
        assert!(convolve(&f, &phi, 0.25).is_ok());
    }

    #[test]
    fn translation_equivariance() {
        let h = 1.0 / 16.0;
        let spec = GridSpec::covering(1, -3.0, 3.0, h).unwrap();
        let f = GridFunction::from_fn(spec, |x| if x[0].abs() < 0.5 { 1.0 + x[0] } else { 0.0 });
        let phi = unit_mass_bump(1, h).unwrap();
        let g = convolve(&f, &phi, 0.5).unwrap();
        let shifted = GridFunction::new(
            GridSpec::new_1d(spec.origin()[0] + 5.0 * h, h, spec.extents()[0]).unwrap(),
            f.values().to_vec(),
        )
        .unwrap();
        let gs = convolve(&shifted, &phi, 0.5).unwrap();
        assert_eq!(g.values(), gs.values());
    }

    #[test]
    fn dictionary_is_normalized() {
        for dim in [1, 2] {
            let h = if dim == 1 { 1.0 / 64.0 } else { 1.0 / 16.0 };
            let d = build_dictionary(dim, 3, 2, h, 4).unwrap();
            assert_eq!(d.len(), 4);
            assert_eq!(d.scales(), &[1.0, 0.5, 0.25]);
            for (k, b) in d.kernels().iter().zip(d.bounds()) {
                assert!(*b <= 1.0, "{b}");
                assert!(*b > 0.999);
                for (x, v) in k.iter_cells() {
                    if x[0] * x[0] + x[1] * x[1] >= 1.0 {
                        assert_eq!(v, 0.0);
                    }
                }
            }
            assert!(d.distinguished().integral() > 0.0);
        }
        assert_eq!(build_dictionary(1, 2, 1, 1.0 / 64.0, 1).unwrap().len(), 1);
    }

    #[test]
    fn dictionary_rejects_fine_ladders() {
        assert!(matches!(build_dictionary(1, 2, 6, 1.0 / 32.0, 1), Err(Error::Resolution { .. })));
        assert_eq!(max_ladder_depth(1.0 / 32.0), 4);
        assert!(build_dictionary(1, 0, 1, 1.0 / 32.0, 1).is_err());
    }

    #[test]
    fn fn_bound_of_parabola() {
        // order 0: sup (1+|x|)(1−x²) = 32/27 at |x| = 1/3
        let h = 1.0 / 256.0;
        let psi = sample_kernel(1, h, |x| 1.0 - x[0] * x[0]).unwrap();
        let b0 = fn_bound(&psi, 0);
        assert!((b0 - 32.0 / 27.0).abs() < 1e-4, "{b0}");
        // order 1 adds sup (1+|x|)^2 |2x| = 2·(1+x)²x at the jump x → 1, minus O(h)
        let b1 = fn_bound(&psi, 1);
        let sup0 = (0..=1000).map(|i| i as f64 / 1000.0).map(|x| (1.0 + x).powi(2) * (1.0 - x * x)).fold(0.0, f64::max);
        assert!(b1 > sup0 + 7.0 && b1 < sup0 + 8.5, "{b1}");
    }
}
