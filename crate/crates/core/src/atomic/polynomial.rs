//! Polynomials of degree `≤ d` in the scaled variable `(x − c)/ℓ`, with
//! least-squares and weighted projections.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::grid::{Cube, GridFunction, GridSpec};
use crate::numeric::KahanSum;

/// Multi-indices `α` with `|α| ≤ d`, graded by total degree.
pub fn multi_indices(dim: usize, d: usize) -> Vec<[u32; 2]> {
    let mut out = Vec::new();
    for deg in 0..=d as u32 {
        if dim == 1 {
            out.push([deg, 0]);
        } else {
            for a0 in (0..=deg).rev() {
                out.push([a0, deg - a0]);
            }
        }
    }
    out
}

/// `dim P_d` in `n` variables.
pub fn space_dimension(dim: usize, d: usize) -> usize {
    if dim == 1 {
        d + 1
    } else {
        (d + 1) * (d + 2) / 2
    }
}

/// Values of the scaled monomials `((x − c)/ℓ)^α` at `x`.
pub fn scaled_monomials(dim: usize, d: usize, center: [f64; 2], scale: f64, x: [f64; 2]) -> Vec<f64> {
    let t = [(x[0] - center[0]) / scale, if dim == 2 { (x[1] - center[1]) / scale } else { 0.0 }];
    multi_indices(dim, d)
        .into_iter()
        .map(|a| t[0].powi(a[0] as i32) * if dim == 2 { t[1].powi(a[1] as i32) } else { 1.0 })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    dim: usize,
    degree: usize,
    center: [f64; 2],
    scale: f64,
    coeffs: Vec<f64>,
}

impl Polynomial {
    /// `coeffs` follow [`multi_indices`] order.
    pub fn new(dim: usize, degree: usize, center: [f64; 2], scale: f64, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != space_dimension(dim, degree) {
            return Err(Error::InvalidArgument(format!(
                "degree {degree} in {dim} variables needs {} coefficients, got {}",
                space_dimension(dim, degree),
                coeffs.len()
            )));
        }
        if !(scale > 0.0) {
            return Err(Error::InvalidArgument("polynomial scale must be positive".into()));
        }
        Ok(Self { dim, degree, center, scale, coeffs })
    }

    pub fn zero(dim: usize, degree: usize, center: [f64; 2], scale: f64) -> Self {
        Self { dim, degree, center, scale, coeffs: vec![0.0; space_dimension(dim, degree)] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn center(&self) -> [f64; 2] {
        self.center
    }
    pub fn scale(&self) -> f64 {
        self.scale
    }
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, x: [f64; 2]) -> f64 {
        scaled_monomials(self.dim, self.degree, self.center, self.scale, x)
            .iter()
            .zip(&self.coeffs)
            .map(|(m, c)| m * c)
            .sum()
    }

    pub fn sample(&self, spec: &GridSpec) -> GridFunction {
        GridFunction::from_fn(*spec, |x| self.eval(x))
    }
}

/// Least-squares fit over `(x, weight, value)` samples. Returns the
/// coefficients and the numerical rank of the Gram matrix.
fn fit(
    dim: usize,
    d: usize,
    center: [f64; 2],
    scale: f64,
    samples: impl Iterator<Item = ([f64; 2], f64, f64)>,
) -> Result<(Vec<f64>, usize)> {
    let m = space_dimension(dim, d);
    let mut gram = vec![KahanSum::new(); m * m];
    let mut rhs = vec![KahanSum::new(); m];
    for (x, w, v) in samples {
        if w == 0.0 {
            continue;
        }
        let b = scaled_monomials(dim, d, center, scale, x);
        for i in 0..m {
            rhs[i].add(w * v * b[i]);
            for j in i..m {
                gram[i * m + j].add(w * b[i] * b[j]);
            }
        }
    }
    let mut g = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        for j in i..m {
            let v = gram[i * m + j].value();
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    let r = DVector::from_iterator(m, rhs.iter().map(|k| k.value()));
    let svd = g.svd(true, true);
    let smax = svd.singular_values.max();
    if !(smax > 0.0) {
        return Ok((vec![0.0; m], 0));
    }
    let eps = smax * 1e-12 * m as f64;
    let rank = svd.singular_values.iter().filter(|s| **s > eps).count();
    let sol = svd
        .solve(&r, eps)
        .map_err(|e| Error::NumericFailure(format!("Gram solve failed: {e}")))?;
    Ok((sol.iter().copied().collect(), rank))
}

/// The `P ∈ P_d` minimizing `Σ_{cells in Q} |f − P|² h^n` over the lattice
/// cells of Q (f is zero outside its box). The basis is centered at Q with
/// scale `ℓ(Q)`.
pub fn minimizing_polynomial(f: &GridFunction, q: &Cube, d: usize) -> Result<Polynomial> {
    let dim = f.dim();
    if q.dim() != dim {
        return Err(Error::InvalidArgument("cube and function dimensions differ".into()));
    }
    let spec = f.spec();
    let r = q.lattice_range(spec);
    let count = q.lattice_cell_count(spec);
    let m = space_dimension(dim, d);
    if count < m {
        return Err(Error::Underdetermined(format!("{count} cells cannot determine {m} coefficients")));
    }
    let w = spec.cell_measure();
    let samples = (r[0].0..r[0].1).flat_map(move |i0| (r[1].0..r[1].1).map(move |i1| [i0, i1])).map(|idx| {
        (spec.center(idx), w, f.at(idx))
    });
    let (c, rank) = fit(dim, d, q.center(), q.side(), samples)?;
    if rank < m {
        return Err(Error::Underdetermined(format!("Gram matrix has rank {rank} < {m}")));
    }
    Polynomial::new(dim, d, q.center(), q.side(), c)
}

/// Center and side of the bounding cube of `supp η`.
fn support_frame(eta: &GridFunction) -> Option<([f64; 2], f64)> {
    let b = eta.support_bounds()?;
    let spec = eta.spec();
    let h = spec.h();
    let mut c = [0.0; 2];
    let mut side: f64 = h;
    for a in 0..spec.dim() {
        let lo = spec.origin()[a] + b[a].0 as f64 * h;
        let hi = spec.origin()[a] + (b[a].1 + 1) as f64 * h;
        c[a] = 0.5 * (lo + hi);
        side = side.max(hi - lo);
    }
    Some((c, side))
}

/// Weighted projection onto `P_d` with weight `η ≥ 0`, where `value(k, x)`
/// gives the function at cell `k` of `η`'s grid. The result satisfies
/// `Σ (g − P) q η = 0` for every `q ∈ P_d`; a singular Gram matrix yields
/// the minimum-norm solution of the normal equations.
pub fn weighted_projection_with(eta: &GridFunction, d: usize, value: impl Fn(usize, [f64; 2]) -> f64) -> Result<Polynomial> {
    let dim = eta.dim();
    let mass = eta.integral();
    if !(mass > 0.0) {
        return Err(Error::Underdetermined("projection weight has no mass".into()));
    }
    if eta.values().iter().any(|v| *v < 0.0) {
        return Err(Error::InvalidArgument("projection weight must be nonnegative".into()));
    }
    let (center, scale) = support_frame(eta).expect("positive mass");
    let spec = eta.spec();
    let w = spec.cell_measure();
    let samples = eta
        .values()
        .iter()
        .enumerate()
        .filter(|(_, e)| **e > 0.0)
        .map(|(k, e)| {
            let x = spec.center_of(k);
            (x, e * w, value(k, x))
        });
    let (c, _) = fit(dim, d, center, scale, samples)?;
    Polynomial::new(dim, d, center, scale, c)
}

/// [`weighted_projection_with`] for a sampled `g` on any compatible grid.
pub fn weighted_projection(g: &GridFunction, eta: &GridFunction, d: usize) -> Result<Polynomial> {
    let s = g
        .spec()
        .offset_of(eta.spec())
        .ok_or_else(|| Error::InvalidData("function and weight grids are not compatible".into()))?;
    let es = *eta.spec();
    weighted_projection_with(eta, d, |k, _| {
        let [i0, i1] = es.unflat(k);
        g.at([i0 as i64 + s[0], i1 as i64 + s[1]])
    })
}

/// `[Σ |P|² η / Σ η]^{1/2}`.
pub fn weighted_norm(p: &Polynomial, eta: &GridFunction) -> f64 {
    let mut num = KahanSum::new();
    let mut den = KahanSum::new();
    for (x, e) in eta.iter_cells() {
        if e > 0.0 {
            num.add(p.eval(x).powi(2) * e);
            den.add(e);
        }
    }
    if den.value() > 0.0 {
        (num.value() / den.value()).sqrt()
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_counts() {
        assert_eq!(multi_indices(1, 3).len(), 4);
        assert_eq!(multi_indices(2, 2), vec![[0, 0], [1, 0], [0, 1], [2, 0], [1, 1], [0, 2]]);
        assert_eq!(space_dimension(2, 3), 10);
    }

    #[test]
    fn square_on_unit_interval() {
        let h = 1.0 / 1024.0;
        let spec = GridSpec::new_1d(0.0, h, 1024).unwrap();
        let f = GridFunction::from_fn(spec, |x| x[0] * x[0]);
        let q = Cube::new(&[0.5], 1.0).unwrap();
        let p = minimizing_polynomial(&f, &q, 1).unwrap();
        // continuum minimizer x − 1/6, midpoint quadrature shifts it by O(h²)
        for x in [0.0, 0.3, 1.0] {
            assert!((p.eval([x, 0.0]) - (x - 1.0 / 6.0)).abs() < 1e-6);
        }
    }

    #[test]
    fn reproduces_polynomials_and_orthogonality() {
        let spec = GridSpec::new_2d([-1.0, -1.0], 1.0 / 16.0, [32, 32]).unwrap();
        let truth = Polynomial::new(2, 2, [0.2, -0.1], 0.7, vec![1.0, -2.0, 0.5, 3.0, 0.25, -1.0]).unwrap();
        let f = truth.sample(&spec);
        let q = Cube::new(&[0.0, 0.0], 1.0).unwrap();
        let p = minimizing_polynomial(&f, &q, 2).unwrap();
        let eta = GridFunction::from_fn(spec, |x| crate::grid::bump([x[0] / 0.9, x[1] / 0.9]));
        let pw = weighted_projection(&f, &eta, 2).unwrap();
        for x in [[0.1, 0.2], [-0.3, 0.4]] {
            assert!((p.eval(x) - truth.eval(x)).abs() < 1e-9);
            assert!((pw.eval(x) - truth.eval(x)).abs() < 1e-9);
        }
        let g = GridFunction::from_fn(spec, |x| (3.0 * x[0]).sin() + x[1].powi(4));
        let pg = weighted_projection(&g, &eta, 2).unwrap();
        for a in multi_indices(2, 2) {
            let mut s = 0.0;
            let mut scale = 0.0;
            for (x, e) in eta.iter_cells() {
                let m = x[0].powi(a[0] as i32) * x[1].powi(a[1] as i32);
                let val = g.at(spec.locate(x));
                s += (val - pg.eval(x)) * m * e;
                scale += (val * m * e).abs();
            }
            assert!(s.abs() < 1e-12 * scale.max(1.0), "{a:?}: {s}");
        }
    }

    #[test]
    fn underdetermined_cases() {
        let spec = GridSpec::new_1d(0.0, 0.25, 8).unwrap();
        let f = GridFunction::constant(spec, 1.0);
        let q = Cube::new(&[1.0], 0.5).unwrap();
        assert!(matches!(minimizing_polynomial(&f, &q, 2), Err(Error::Underdetermined(_))));
        let z = GridFunction::zeros(spec);
        assert!(matches!(weighted_projection(&f, &z, 1), Err(Error::Underdetermined(_))));
        // single-cell weight still projects (minimum-norm)
        let mut w = GridFunction::zeros(spec);
        w.values_mut()[3] = 1.0;
        let p = weighted_projection(&f, &w, 2).unwrap();
        assert!((p.eval(spec.center_of(3)) - 1.0).abs() < 1e-12);
        let n = weighted_norm(&p, &w);
        assert!((n - 1.0).abs() < 1e-12);
    }
}
