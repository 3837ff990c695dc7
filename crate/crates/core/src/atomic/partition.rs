//! Smooth partition of unity subordinate to a Whitney cover.

use super::whitney::WhitneyCube;
use crate::error::{Error, Result};
use crate::grid::{GridFunction, GridSpec};

/// Dilation from a Whitney cube `Q` to the support cube `Q* = (9/8) Q`.
pub const WHITNEY_DILATION: f64 = 9.0 / 8.0;

/// `η_k` for every Whitney cube, each stored on the smallest sub-box of the
/// parent grid holding the cells of `Q*_k`.
#[derive(Debug, Clone)]
pub struct PartitionOfUnity {
    pub etas: Vec<GridFunction>,
    /// Largest number of `η_k` that are positive at one cell.
    pub overlap: usize,
    /// `max |Σ_k η_k − 1|` over the cells of O.
    pub sum_error: f64,
}

fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / t).exp();
    let b = (-1.0 / (1.0 - t)).exp();
    a / (a + b)
}

/// Smooth profile equal to 1 on `Q` and vanishing outside `(9/8) Q`.
pub fn bump_profile(cube: &crate::grid::Cube, x: [f64; 2]) -> f64 {
    let half = cube.side() / 2.0;
    let margin = half * (WHITNEY_DILATION - 1.0);
    let c = cube.center();
    let mut v = 1.0;
    for a in 0..cube.dim() {
        let u = (x[a] - c[a]).abs();
        v *= 1.0 - smooth_step((u - half) / margin);
        if v == 0.0 {
            break;
        }
    }
    v
}

fn support_box(spec: &GridSpec, q: &WhitneyCube) -> ([i64; 2], [usize; 2]) {
    let star = q.cube.dilate(WHITNEY_DILATION);
    let r = star.lattice_range(spec);
    let e = spec.extents();
    let mut lo = [0i64; 2];
    let mut ext = [1usize; 2];
    for a in 0..spec.dim() {
        let a0 = r[a].0.max(0);
        let a1 = r[a].1.min(e[a] as i64);
        lo[a] = a0;
        ext[a] = (a1 - a0).max(1) as usize;
    }
    (lo, ext)
}

/// `η_k = ψ_k / Σ_i ψ_i` masked by `1_O`, where `ψ_k` is [`bump_profile`]
/// of Whitney cube `k`. Then `Σ_k η_k = 1` on O and `supp η_k ⊂ Q*_k`.
pub fn partition_of_unity(spec: &GridSpec, cubes: &[WhitneyCube], mask: &[bool]) -> Result<PartitionOfUnity> {
    if mask.len() != spec.len() {
        return Err(Error::InvalidArgument("mask does not match grid".into()));
    }
    let n1 = spec.extents()[1];
    let mut raw = Vec::with_capacity(cubes.len());
    let mut total = vec![0.0; spec.len()];
    let mut count = vec![0usize; spec.len()];
    for q in cubes {
        let (lo, ext) = support_box(spec, q);
        let sub = spec.sub_box(lo, ext);
        let mut vals = vec![0.0; sub.len()];
        for (k, v) in vals.iter_mut().enumerate() {
            let [i0, i1] = sub.unflat(k);
            let g = spec.flat(lo[0] as usize + i0, lo[1] as usize + i1);
            if !mask[g] {
                continue;
            }
            let psi = bump_profile(&q.cube, sub.center_of(k));
            if psi > 0.0 {
                *v = psi;
                total[g] += psi;
                count[g] += 1;
            }
        }
        raw.push((lo, sub, vals));
    }
    for (g, m) in mask.iter().enumerate() {
        if *m && total[g] <= 0.0 {
            return Err(Error::Internal(format!("cell {g} of O is not covered by the Whitney cubes")));
        }
    }
    let mut etas = Vec::with_capacity(raw.len());
    for (lo, sub, mut vals) in raw {
        for (k, v) in vals.iter_mut().enumerate() {
            if *v > 0.0 {
                let [i0, i1] = sub.unflat(k);
                *v /= total[(lo[0] as usize + i0) * n1 + lo[1] as usize + i1];
            }
        }
        etas.push(GridFunction::new(sub, vals)?);
    }
    let mut sum = vec![0.0; spec.len()];
    for (eta, q) in etas.iter().zip(cubes) {
        let (lo, _) = support_box(spec, q);
        for (k, v) in eta.values().iter().enumerate() {
            let [i0, i1] = eta.spec().unflat(k);
            sum[(lo[0] as usize + i0) * n1 + lo[1] as usize + i1] += v;
        }
    }
    let sum_error = mask
        .iter()
        .zip(&sum)
        .filter(|(m, _)| **m)
        .map(|(_, s)| (s - 1.0).abs())
        .fold(0.0, f64::max);
    let overlap = count.into_iter().max().unwrap_or(0);
    Ok(PartitionOfUnity { etas, overlap, sum_error })
}

#[cfg(test)]
mod tests {
    use super::super::whitney::{overlap_max, whitney_decompose};
    use super::*;

    fn check(spec: &GridSpec, mask: &[bool]) -> PartitionOfUnity {
        let cubes = whitney_decompose(spec, mask).unwrap();
        let pu = partition_of_unity(spec, &cubes, mask).unwrap();
        assert!(pu.sum_error < 1e-12, "{}", pu.sum_error);
        assert!(pu.overlap <= overlap_max(spec.dim()));
        for (eta, q) in pu.etas.iter().zip(&cubes) {
            let star = q.cube.dilate(WHITNEY_DILATION);
            for (k, v) in eta.values().iter().enumerate() {
                assert!((0.0..=1.0 + 1e-15).contains(v));
                if *v > 0.0 {
                    let x = eta.spec().center_of(k);
                    assert!(star.contains(x));
                    let g = spec.index(spec.locate(x)).unwrap();
                    assert!(mask[g]);
                }
            }
        }
        pu
    }

    #[test]
    fn smooth_step_limits() {
        assert_eq!(smooth_step(-1.0), 0.0);
        assert_eq!(smooth_step(2.0), 1.0);
        assert!((smooth_step(0.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn interval_partition() {
        let spec = GridSpec::covering(1, -1.0, 2.0, 1.0 / 128.0).unwrap();
        let mask: Vec<bool> = (0..spec.len()).map(|k| (0.0..1.0).contains(&spec.center_of(k)[0])).collect();
        let pu = check(&spec, &mask);
        assert!(pu.overlap >= 2);
    }

    #[test]
    fn annulus_partition() {
        let spec = GridSpec::new_2d([-2.0, -2.0], 1.0 / 16.0, [64, 64]).unwrap();
        let mask: Vec<bool> = (0..spec.len())
            .map(|k| {
                let x = spec.center_of(k);
                let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
                r > 0.5 && r < 1.6
            })
            .collect();
        check(&spec, &mask);
    }
}
