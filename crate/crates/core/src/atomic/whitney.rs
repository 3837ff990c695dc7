//! Whitney decomposition of a union of grid cells into dyadic blocks.

use crate::error::{Error, Result};
use crate::grid::{Cube, GridSpec};
use crate::numeric::near_integer;

/// Bound on how many dilated Whitney cubes may share a point, `12^n`.
pub fn overlap_max(dim: usize) -> usize {
    12usize.pow(dim as u32)
}

/// One emitted dyadic block.
#[derive(Debug, Clone, PartialEq)]
pub struct WhitneyCube {
    pub cube: Cube,
    /// Grid index of the first cell per axis.
    pub lo: [i64; 2],
    /// Cells per axis (`2^level`).
    pub cells: usize,
    /// `dist(Q, O^∁)` measured between cells.
    pub dist: f64,
    /// A single cell touching the complement: it cannot satisfy
    /// `diam ≤ dist` on the grid and only meets `dist ≤ 4 diam`.
    pub boundary: bool,
}

impl WhitneyCube {
    pub fn diameter(&self) -> f64 {
        self.cube.diameter()
    }

    /// `true` when `diam ≤ dist ≤ 4 diam` (boundary cells: `dist ≤ 4 diam`).
    pub fn satisfies_distance_bounds(&self) -> bool {
        let d = self.diameter();
        let upper = self.dist <= 4.0 * d * (1.0 + 1e-12);
        if self.boundary {
            upper
        } else {
            self.dist >= d * (1.0 - 1e-12) && upper
        }
    }
}

/// Per-cell distance to the complement (cells outside the box count as
/// complement). Distances are between closed cells: neighbours are at 0.
pub fn complement_distance(spec: &GridSpec, mask: &[bool]) -> Vec<f64> {
    let e = spec.extents();
    let (n0, n1) = (e[0], e[1]);
    let dim = spec.dim();
    let gap = |k: i64| ((k.abs() - 1).max(0)) as f64;
    // pass 1 along axis 1: squared gap to the nearest complement cell in the same row
    let mut g1 = vec![f64::INFINITY; n0 * n1];
    for i0 in 0..n0 {
        let row = &mask[i0 * n1..(i0 + 1) * n1];
        for x1 in 0..n1 {
            if !row[x1] {
                g1[i0 * n1 + x1] = 0.0;
                continue;
            }
            let mut best = f64::INFINITY;
            if dim == 2 {
                // virtual complement just outside the box
                best = best.min(gap(x1 as i64 + 1).powi(2)).min(gap(n1 as i64 - x1 as i64).powi(2));
            }
            for (c1, inside) in row.iter().enumerate() {
                if !inside {
                    best = best.min(gap(x1 as i64 - c1 as i64).powi(2));
                }
            }
            g1[i0 * n1 + x1] = best;
        }
    }
    // pass 2 along axis 0
    let mut out = vec![0.0; n0 * n1];
    for x0 in 0..n0 {
        for x1 in 0..n1 {
            if !mask[x0 * n1 + x1] {
                continue;
            }
            let mut best = gap(x0 as i64 + 1).powi(2).min(gap(n0 as i64 - x0 as i64).powi(2));
            for c0 in 0..n0 {
                let v = g1[c0 * n1 + x1];
                if v.is_finite() {
                    best = best.min(gap(x0 as i64 - c0 as i64).powi(2) + v);
                }
            }
            out[x0 * n1 + x1] = best.sqrt() * spec.h();
        }
    }
    out
}

/// Dyadic Whitney cover of the open set `O` given as a cell mask on `spec`.
///
/// Blocks are aligned to the global lattice (`origin / h` must be an
/// integer and `h` a power of two), so every block is a dyadic cube. Every
/// cell of O lies in exactly one emitted block. Each block is maximal with
/// `diam ≤ dist(Q, O^∁)`; cells where even a single cell fails are emitted as
/// boundary cells.
pub fn whitney_decompose(spec: &GridSpec, mask: &[bool]) -> Result<Vec<WhitneyCube>> {
    if mask.len() != spec.len() {
        return Err(Error::InvalidArgument(format!(
            "mask has {} entries for a grid of {} cells",
            mask.len(),
            spec.len()
        )));
    }
    if !mask.iter().any(|m| *m) {
        return Ok(Vec::new());
    }
    if mask.iter().all(|m| *m) {
        return Err(Error::NoBoundary);
    }
    let g0 = spec
        .global_offset()
        .ok_or_else(|| Error::InvalidArgument("grid origin must be a whole multiple of h".into()))?;
    if !near_integer(spec.h().log2(), 1e-12) {
        return Err(Error::InvalidArgument(format!("spacing {} is not a power of two", spec.h())));
    }
    let dim = spec.dim();
    let e = spec.extents();
    let dist = complement_distance(spec, mask);
    let h = spec.h();
    let diam_cell = h * (dim as f64).sqrt();

    let emax = e[..dim].iter().copied().max().unwrap();
    let mut top = 0u32;
    while (1usize << top) < emax + 1 {
        top += 1;
    }
    let size = 1i64 << top;
    // top-level blocks covering the box, aligned to multiples of 2^top in global indices
    let mut starts = [Vec::new(), Vec::new()];
    for a in 0..2 {
        if a >= dim {
            starts[a].push(0i64);
            continue;
        }
        let lo_g = g0[a].div_euclid(size) * size;
        let mut s = lo_g;
        while s < g0[a] + e[a] as i64 {
            starts[a].push(s - g0[a]);
            s += size;
        }
    }

    let mut out = Vec::new();
    let mut stack: Vec<([i64; 2], u32)> = Vec::new();
    for &s0 in starts[0].iter().rev() {
        for &s1 in starts[1].iter().rev() {
            stack.push(([s0, s1], top));
        }
    }
    while let Some((lo, level)) = stack.pop() {
        let n = 1i64 << level;
        let n1 = if dim == 2 { n } else { 1 };
        // block cells clipped to the box
        let a0 = lo[0].max(0);
        let b0 = (lo[0] + n).min(e[0] as i64);
        let a1 = lo[1].max(0);
        let b1 = (lo[1] + n1).min(e[1] as i64);
        if a0 >= b0 || a1 >= b1 {
            continue;
        }
        let full = a0 == lo[0] && b0 == lo[0] + n && a1 == lo[1] && b1 == lo[1] + n1;
        let mut any_in = false;
        let mut all_in = full;
        let mut min_d = f64::INFINITY;
        for i0 in a0..b0 {
            for i1 in a1..b1 {
                let k = spec.flat(i0 as usize, i1 as usize);
                if mask[k] {
                    any_in = true;
                    min_d = min_d.min(dist[k]);
                } else {
                    all_in = false;
                }
            }
        }
        if !any_in {
            continue;
        }
        let diam = diam_cell * n as f64;
        if all_in && diam <= min_d {
            out.push(make_cube(spec, lo, n as usize, min_d, false));
            continue;
        }
        if level == 0 {
            // a single O cell adjacent to the complement
            out.push(make_cube(spec, lo, 1, min_d, true));
            continue;
        }
        let half = n / 2;
        let mut children = Vec::new();
        for c0 in 0..2 {
            for c1 in 0..(if dim == 2 { 2 } else { 1 }) {
                children.push([lo[0] + c0 * half, lo[1] + c1 * half]);
            }
        }
        for c in children.into_iter().rev() {
            stack.push((c, level - 1));
        }
    }
    Ok(out)
}

fn make_cube(spec: &GridSpec, lo: [i64; 2], cells: usize, dist: f64, boundary: bool) -> WhitneyCube {
    let dim = spec.dim();
    let side = cells as f64 * spec.h();
    let mut corner = [0.0; 2];
    for a in 0..dim {
        corner[a] = spec.origin()[a] + lo[a] as f64 * spec.h();
    }
    let cube = Cube::from_corner(dim, corner, side).expect("positive side");
    WhitneyCube { cube, lo, cells, dist, boundary }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(lo: f64, hi: f64, h: f64) -> GridSpec {
        GridSpec::covering(1, lo, hi, h).unwrap()
    }

    fn mask_of(spec: &GridSpec, f: impl Fn([f64; 2]) -> bool) -> Vec<bool> {
        (0..spec.len()).map(|k| f(spec.center_of(k))).collect()
    }

    /// Brute-force distance between a block and the complement cells.
    fn brute_dist(spec: &GridSpec, mask: &[bool], q: &WhitneyCube) -> f64 {
        let dim = spec.dim();
        let n1 = if dim == 2 { q.cells as i64 } else { 1 };
        let e = spec.extents();
        let mut best = f64::INFINITY;
        let lo = [-1i64, if dim == 2 { -1 } else { 0 }];
        let hi = [e[0] as i64, if dim == 2 { e[1] as i64 } else { 0 }];
        for c0 in lo[0]..=hi[0] {
            for c1 in lo[1]..=hi[1] {
                let outside = spec.index([c0, c1]).is_none_or(|k| !mask[k]);
                if !outside {
                    continue;
                }
                let g0 = (q.lo[0] - c0).max(c0 - (q.lo[0] + q.cells as i64 - 1)).max(0);
                let g0 = (g0 - 1).max(0);
                let g1 = if dim == 2 {
                    let g = (q.lo[1] - c1).max(c1 - (q.lo[1] + n1 - 1)).max(0);
                    (g - 1).max(0)
                } else {
                    0
                };
                best = best.min(((g0 * g0 + g1 * g1) as f64).sqrt() * spec.h());
            }
        }
        best
    }

    #[test]
    fn empty_and_full_sets() {
        let spec = line(0.0, 1.0, 1.0 / 16.0);
        assert!(whitney_decompose(&spec, &vec![false; spec.len()]).unwrap().is_empty());
        assert!(matches!(whitney_decompose(&spec, &vec![true; spec.len()]), Err(Error::NoBoundary)));
    }

    #[test]
    fn single_cell_is_its_own_block() {
        let spec = line(0.0, 1.0, 1.0 / 16.0);
        let mut mask = vec![false; spec.len()];
        mask[5] = true;
        let cubes = whitney_decompose(&spec, &mask).unwrap();
        assert_eq!(cubes.len(), 1);
        assert_eq!(cubes[0].lo[0], 5);
        assert!(cubes[0].boundary);
        assert!(cubes[0].satisfies_distance_bounds());
    }

    #[test]
    fn unit_interval_accumulates_at_endpoints() {
        let h = 1.0 / 256.0;
        let spec = line(-1.0, 2.0, h);
        let mask = mask_of(&spec, |x| x[0] > 0.0 && x[0] < 1.0);
        let cubes = whitney_decompose(&spec, &mask).unwrap();
        // partition of O
        let mut cover = vec![0usize; spec.len()];
        for q in &cubes {
            for i in q.lo[0]..q.lo[0] + q.cells as i64 {
                cover[i as usize] += 1;
            }
            // dyadic lengths and alignment
            assert!(q.cells.is_power_of_two());
            let corner = q.cube.lo(0);
            assert!(near_integer(corner / q.cube.side(), 1e-9));
            assert!(q.satisfies_distance_bounds(), "{q:?}");
            assert!((q.dist - brute_dist(&spec, &mask, q)).abs() < 1e-12);
        }
        for (k, m) in mask.iter().enumerate() {
            assert_eq!(cover[k], usize::from(*m));
        }
        let largest = cubes.iter().map(|q| q.cube.side()).fold(0.0, f64::max);
        let smallest = cubes.iter().map(|q| q.cube.side()).fold(1.0, f64::min);
        assert!(largest >= 0.125 && smallest == h);
        // symmetric accumulation at both endpoints
        let near0 = cubes.iter().filter(|q| q.cube.hi(0) <= 0.25).count();
        let near1 = cubes.iter().filter(|q| q.cube.lo(0) >= 0.75).count();
        assert_eq!(near0, near1);
    }

    #[test]
    fn two_dimensional_disc() {
        let h = 1.0 / 32.0;
        let spec = GridSpec::new_2d([-1.5, -1.5], h, [96, 96]).unwrap();
        let mask = mask_of(&spec, |x| x[0] * x[0] + x[1] * x[1] < 1.0);
        let cubes = whitney_decompose(&spec, &mask).unwrap();
        let mut cover = vec![0usize; spec.len()];
        for q in &cubes {
            assert!(q.satisfies_distance_bounds());
            for i0 in q.lo[0]..q.lo[0] + q.cells as i64 {
                for i1 in q.lo[1]..q.lo[1] + q.cells as i64 {
                    cover[spec.index([i0, i1]).unwrap()] += 1;
                }
            }
        }
        for (k, m) in mask.iter().enumerate() {
            assert_eq!(cover[k], usize::from(*m));
        }
        for q in cubes.iter().filter(|q| q.cells >= 2).take(20) {
            assert!((q.dist - brute_dist(&spec, &mask, q)).abs() < 1e-12);
        }
    }

    #[test]
    fn misaligned_grids_are_rejected() {
        let spec = GridSpec::new_1d(0.01, 1.0 / 16.0, 16).unwrap();
        let mut mask = vec![false; 16];
        mask[3] = true;
        assert!(whitney_decompose(&spec, &mask).is_err());
        let spec = GridSpec::new_1d(0.0, 0.1, 16).unwrap();
        assert!(whitney_decompose(&spec, &mask).is_err());
    }
}
