//! Calderón–Zygmund decomposition of a sampled function into local atoms.
//!
//! Level sets `O_j = {m_N f > 2^j}` of the grand maximal function are
//! covered by Whitney cubes with a partition of unity `η_{j,k}`. On small
//! cubes (`ℓ(Q*) < 1`) f is corrected by its `η`-weighted projection
//! `c_{j,k}` onto `P_d`; the pieces
//!
//! `A_{j,k} = b_{j,k} − η_{j,k} Σ_i b_{j+1,i} + Σ_{i small} c_{k,i} η_{j+1,i}`
//!
//! telescope to `f − g_{j_lo}` and have vanishing moments whenever no
//! large level-`j+1` cube touches them. The remainder `g_{j_lo}` is cut
//! into unit cubes, which need no moments.

use rayon::prelude::*;

use super::atom::{Atom, AtomTolerances};
use super::partition::{partition_of_unity, WHITNEY_DILATION};
use super::polynomial::{weighted_projection_with, Polynomial};
use super::whitney::{overlap_max, whitney_decompose, WhitneyCube};
use crate::error::{Error, Result};
use crate::grid::{Cube, GridFunction, GridSpec};
use crate::maximal::{grand_maximal, MaximalParams};
use crate::numeric::{near_integer, KahanSum};
use crate::slice::{CubeNormCache, SliceParams};

/// Support dilation from `Q*` to the atom cube.
pub const DEFAULT_C0: f64 = 4.5;

#[derive(Debug, Clone)]
pub struct CzParams {
    pub slice: SliceParams,
    pub maximal: MaximalParams,
    /// Moment order.
    pub d: usize,
    /// Size exponent of the emitted atoms.
    pub r: f64,
    /// Atomic exponent.
    pub s: f64,
    pub c0: f64,
    pub max_levels: usize,
    pub tol: AtomTolerances,
}

impl CzParams {
    /// Defaults: `d = max(⌊n(1/s − 1)⌋, 0)` with `s = 0.9 min{p_minus, q, 1}`,
    /// `r = ∞`, `C_0 = 4.5`.
    pub fn new(slice: SliceParams, maximal: MaximalParams) -> Self {
        let dim = maximal.dictionary.dim();
        let s = 0.9 * exponent_cap(&slice);
        let d = ((dim as f64) * (1.0 / s - 1.0)).floor().max(0.0) as usize;
        Self { slice, maximal, d, r: f64::INFINITY, s, c0: DEFAULT_C0, max_levels: 64, tol: AtomTolerances::default() }
    }

    /// `d ≥ ⌊n(1/min{p_minus, q, 1} − 1)⌋` and `0 < s < min{p_minus, q, 1}`.
    pub fn check(&self, dim: usize) -> Result<()> {
        let cap = exponent_cap(&self.slice);
        let need = ((dim as f64) * (1.0 / cap - 1.0)).floor().max(0.0) as usize;
        if self.d < need {
            return Err(Error::Precondition(format!("moment order d = {} must be at least {need}", self.d)));
        }
        if !(self.s > 0.0 && self.s < cap) {
            return Err(Error::Precondition(format!("atomic exponent s = {} must lie in (0, {cap})", self.s)));
        }
        if !(self.r > 1.0) {
            return Err(Error::InvalidArgument(format!("size exponent r = {} must exceed 1", self.r)));
        }
        if !(self.c0 >= 1.0) {
            return Err(Error::InvalidArgument(format!("support dilation C0 = {} must be at least 1", self.c0)));
        }
        Ok(())
    }
}

fn exponent_cap(slice: &SliceParams) -> f64 {
    slice.phi.p_minus().min(slice.q).min(1.0)
}

/// One `(λ, a)` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub j: i32,
    pub k: usize,
    pub lambda: f64,
    pub atom: Atom,
    /// Unit-cube piece of the remainder `g_{j_lo}`.
    pub residual: bool,
    /// Small cube whose side was raised to 1 because a large cube of the
    /// next level touches it.
    pub promoted: bool,
    /// `‖A‖∞` exceeded `C_0 2^j`, so λ was raised to keep the size bound.
    pub saturated: bool,
}

impl Entry {
    fn key(&self) -> (bool, i32, usize) {
        (self.residual, self.j, self.k)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelSummary {
    pub j: i32,
    /// Cells of `O_j`.
    pub cells: usize,
    pub cubes: usize,
    pub boundary_cells: usize,
    pub small_cubes: usize,
    pub overlap: usize,
    pub partition_error: f64,
    /// Every Whitney cube meets its distance bounds.
    pub whitney_ok: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    /// Padded grid carrying f, the level sets and the reconstruction.
    pub spec: GridSpec,
    pub d: usize,
    pub r: f64,
    pub s: f64,
    pub c0: f64,
    pub j_lo: i32,
    /// First level with `O_j = ∅`.
    pub j_hi: i32,
    pub entries: Vec<Entry>,
    pub residual: GridFunction,
    pub levels: Vec<LevelSummary>,
    /// Pieces at rounding-noise level moved into the remainder.
    pub absorbed: usize,
}

impl Decomposition {
    /// Smallest K with `|λ a| ≤ K 2^j` for every entry.
    pub fn level_constant(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.lambda * e.atom.values.sup_norm() / 2f64.powi(e.j))
            .fold(0.0, f64::max)
    }

    pub fn promotions(&self) -> usize {
        self.entries.iter().filter(|e| e.promoted).count()
    }

    pub fn saturations(&self) -> usize {
        self.entries.iter().filter(|e| e.saturated).count()
    }

    pub fn max_overlap(&self) -> usize {
        self.levels.iter().map(|l| l.overlap).max().unwrap_or(0)
    }
}

struct Level {
    j: i32,
    cubes: Vec<WhitneyCube>,
    etas: Vec<GridFunction>,
    /// Cell of the padded grid holding cell 0 of `etas[k]`.
    lo: Vec<[i64; 2]>,
    small: Vec<bool>,
    proj: Vec<Option<Polynomial>>,
    /// `B_j = Σ_k b_{j,k}` on the padded grid.
    b: Vec<f64>,
    summary: LevelSummary,
}

fn star_side(q: &WhitneyCube) -> f64 {
    q.cube.side() * WHITNEY_DILATION
}

fn build_level(f: &GridFunction, m: &GridFunction, j: i32, d: usize) -> Result<Level> {
    let spec = *f.spec();
    let thr = 2f64.powi(j);
    let mask: Vec<bool> = m.values().iter().map(|v| *v > thr).collect();
    let cubes = whitney_decompose(&spec, &mask)?;
    let pu = partition_of_unity(&spec, &cubes, &mask)?;
    let lo: Vec<[i64; 2]> = pu
        .etas
        .iter()
        .map(|e| spec.offset_of(e.spec()).expect("sub-box of the padded grid"))
        .collect();
    let small: Vec<bool> = cubes.iter().map(|q| star_side(q) < 1.0).collect();
    let proj = pu
        .etas
        .par_iter()
        .zip(&lo)
        .zip(&small)
        .map(|((eta, o), s)| {
            if !*s {
                return Ok(None);
            }
            let es = *eta.spec();
            weighted_projection_with(eta, d, |k, _| {
                let [i0, i1] = es.unflat(k);
                f.at([i0 as i64 + o[0], i1 as i64 + o[1]])
            })
            .map(Some)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut b = vec![0.0; spec.len()];
    for k in 0..cubes.len() {
        let eta = &pu.etas[k];
        let es = *eta.spec();
        for (c, e) in eta.values().iter().enumerate() {
            if *e == 0.0 {
                continue;
            }
            let [i0, i1] = es.unflat(c);
            let g = spec.index([i0 as i64 + lo[k][0], i1 as i64 + lo[k][1]]).expect("inside");
            let x = es.center_of(c);
            let base = f.values()[g] - proj[k].as_ref().map_or(0.0, |p| p.eval(x));
            b[g] += base * e;
        }
    }
    let summary = LevelSummary {
        j,
        cells: mask.iter().filter(|m| **m).count(),
        cubes: cubes.len(),
        boundary_cells: cubes.iter().filter(|q| q.boundary).count(),
        small_cubes: small.iter().filter(|s| **s).count(),
        overlap: pu.overlap,
        partition_error: pu.sum_error,
        whitney_ok: cubes.iter().all(|q| q.satisfies_distance_bounds()) && pu.overlap <= overlap_max(spec.dim()),
    };
    Ok(Level { j, cubes, etas: pu.etas, lo, small, proj, b, summary })
}

/// Index box `[lo, lo + ext)` in padded-grid cells.
#[derive(Clone, Copy)]
struct IBox {
    lo: [i64; 2],
    hi: [i64; 2],
}

impl IBox {
    fn of(eta: &GridFunction, lo: [i64; 2]) -> Self {
        let e = eta.extents();
        IBox { lo, hi: [lo[0] + e[0] as i64, lo[1] + e[1] as i64] }
    }
    fn intersects(&self, o: &IBox) -> bool {
        (0..2).all(|a| self.lo[a] < o.hi[a] && o.lo[a] < self.hi[a])
    }
    fn union(&self, o: &IBox) -> IBox {
        IBox {
            lo: [self.lo[0].min(o.lo[0]), self.lo[1].min(o.lo[1])],
            hi: [self.hi[0].max(o.hi[0]), self.hi[1].max(o.hi[1])],
        }
    }
}

fn eta_at(eta: &GridFunction, lo: [i64; 2], p: [i64; 2]) -> f64 {
    eta.at([p[0] - lo[0], p[1] - lo[1]])
}

struct Piece {
    values: GridFunction,
    promoted: bool,
    /// Largest sum of term magnitudes (before cancellation) at a cell.
    scale: f64,
}

/// Pieces below this fraction of their term scale are rounding noise; they
/// go to the remainder instead of becoming atoms.
const NOISE_FLOOR: f64 = 1e-9;

/// `A_{j,k}` on the smallest box holding its terms.
fn piece(f: &GridFunction, cur: &Level, next: Option<&Level>, k: usize, d: usize) -> Result<Piece> {
    let spec = *f.spec();
    let eta = &cur.etas[k];
    let lo_k = cur.lo[k];
    let bk = IBox::of(eta, lo_k);
    let mut bx = bk;
    let mut corrections: Vec<(usize, Polynomial)> = Vec::new();
    let mut promoted = false;
    if let Some(nx) = next {
        for i in 0..nx.cubes.len() {
            let bi = IBox::of(&nx.etas[i], nx.lo[i]);
            if !bk.intersects(&bi) {
                continue;
            }
            let eta_i = &nx.etas[i];
            let es = *eta_i.spec();
            let touches = eta_i.values().iter().enumerate().any(|(c, e)| {
                if *e == 0.0 {
                    return false;
                }
                let [i0, i1] = es.unflat(c);
                eta_at(eta, lo_k, [i0 as i64 + nx.lo[i][0], i1 as i64 + nx.lo[i][1]]) > 0.0
            });
            if !touches {
                continue;
            }
            if !nx.small[i] {
                promoted = true;
                continue;
            }
            let ci = nx.proj[i].as_ref().expect("small cubes carry a projection");
            let oi = nx.lo[i];
            let p = weighted_projection_with(eta_i, d, |c, x| {
                let [i0, i1] = es.unflat(c);
                let g = [i0 as i64 + oi[0], i1 as i64 + oi[1]];
                (f.at(g) - ci.eval(x)) * eta_at(eta, lo_k, g)
            })?;
            bx = bx.union(&bi);
            corrections.push((i, p));
        }
    }
    let ext = [(bx.hi[0] - bx.lo[0]) as usize, (bx.hi[1] - bx.lo[1]) as usize];
    let local = spec.sub_box(bx.lo, ext);
    let mut vals = vec![0.0; local.len()];
    let mut mag = vec![0.0f64; local.len()];
    let proj_k = cur.proj[k].as_ref();
    let next_b = next.map(|n| &n.b);
    let es = *eta.spec();
    for (c, e) in eta.values().iter().enumerate() {
        if *e == 0.0 {
            continue;
        }
        let [i0, i1] = es.unflat(c);
        let g = [i0 as i64 + lo_k[0], i1 as i64 + lo_k[1]];
        let gk = spec.index(g).expect("inside");
        let x = es.center_of(c);
        let corr = proj_k.map_or(0.0, |p| p.eval(x));
        let nb = next_b.map_or(0.0, |b| b[gk]);
        let l = local.flat((g[0] - bx.lo[0]) as usize, (g[1] - bx.lo[1]) as usize);
        let fv = f.values()[gk];
        vals[l] += (fv - corr) * e - e * nb;
        mag[l] += (fv.abs() + corr.abs() + nb.abs()) * e;
    }
    if let Some(nx) = next {
        for (i, p) in &corrections {
            let eta_i = &nx.etas[*i];
            let es = *eta_i.spec();
            for (c, e) in eta_i.values().iter().enumerate() {
                if *e == 0.0 {
                    continue;
                }
                let [i0, i1] = es.unflat(c);
                let g = [i0 as i64 + nx.lo[*i][0], i1 as i64 + nx.lo[*i][1]];
                let l = local.flat((g[0] - bx.lo[0]) as usize, (g[1] - bx.lo[1]) as usize);
                let t = p.eval(es.center_of(c)) * e;
                vals[l] += t;
                mag[l] += t.abs();
            }
        }
    }
    let scale = mag.into_iter().fold(0.0, f64::max);
    Ok(Piece { values: GridFunction::new(local, vals)?, promoted, scale })
}

/// Cube centered at `c` containing every nonzero cell of `v`.
fn enclosing_side(v: &GridFunction, c: [f64; 2]) -> f64 {
    let Some(b) = v.support_bounds() else { return 0.0 };
    let s = v.spec();
    let h = s.h();
    let mut half: f64 = 0.0;
    for a in 0..s.dim() {
        let lo = s.origin()[a] + b[a].0 as f64 * h;
        let hi = s.origin()[a] + (b[a].1 + 1) as f64 * h;
        half = half.max(hi - c[a]).max(c[a] - lo);
    }
    2.0 * half
}

fn require_dyadic(spec: &GridSpec) -> Result<()> {
    if !near_integer(spec.h().log2(), 1e-12) || spec.global_offset().is_none() {
        return Err(Error::InvalidArgument(
            "decomposition needs a power-of-two spacing and an origin on the lattice".into(),
        ));
    }
    Ok(())
}

fn residual_atoms(
    g: &GridFunction,
    j_lo: i32,
    r: f64,
    d: usize,
    norms: &CubeNormCache,
) -> Result<Vec<Entry>> {
    let spec = *g.spec();
    let Some(b) = g.support_bounds() else { return Ok(Vec::new()) };
    let dim = spec.dim();
    let mut ranges = [(0i64, 1i64); 2];
    for a in 0..dim {
        let lo = spec.center([b[0].0 as i64, b[1].0 as i64])[a].floor() as i64;
        let hi = spec.center([b[0].1 as i64, b[1].1 as i64])[a].floor() as i64 + 1;
        ranges[a] = (lo, hi);
    }
    let mut out = Vec::new();
    for m0 in ranges[0].0..ranges[0].1 {
        for m1 in ranges[1].0..ranges[1].1 {
            let corner = [m0 as f64, m1 as f64];
            let q = Cube::from_corner(dim, corner, 1.0)?;
            let r_ = q.lattice_range(&spec);
            let mut lo = [0i64; 2];
            let mut ext = [1usize; 2];
            for a in 0..dim {
                lo[a] = r_[a].0;
                ext[a] = (r_[a].1 - r_[a].0) as usize;
            }
            let local = spec.sub_box(lo, ext);
            let vals: Vec<f64> = (0..local.len())
                .map(|c| {
                    let [i0, i1] = local.unflat(c);
                    g.at([i0 as i64 + lo[0], i1 as i64 + lo[1]])
                })
                .collect();
            let sup = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if sup == 0.0 {
                continue;
            }
            let lambda = sup * norms.cube(&q, &local)?;
            let values = GridFunction::new(local, vals.into_iter().map(|v| v / lambda).collect())?;
            let k = out.len();
            out.push(Entry { j: j_lo, k, lambda, atom: Atom::new(q, values, r, d)?, residual: true, promoted: false, saturated: false });
        }
    }
    Ok(out)
}

/// Decomposes f into `(λ, a)` entries plus unit-cube remainder atoms.
pub fn cz_decompose(f: &GridFunction, params: &CzParams) -> Result<Decomposition> {
    params.check(f.dim())?;
    require_dyadic(f.spec())?;
    if params.maximal.dictionary.dim() != f.dim() || (params.maximal.dictionary.h() - f.h()).abs() > 1e-12 * f.h() {
        return Err(Error::InvalidArgument("dictionary does not match the grid of f".into()));
    }
    let ladder = params.maximal.ladder();
    let smax = ladder.iter().copied().fold(0.0, f64::max);
    let pad = ((2.0 * smax + 1.0) / f.h()).ceil() as usize + 1;
    let fp = f.padded(pad);
    let spec = *fp.spec();
    let d = params.d;
    let empty = |j: i32| Decomposition {
        spec,
        d,
        r: params.r,
        s: params.s,
        c0: params.c0,
        j_lo: j,
        j_hi: j,
        entries: Vec::new(),
        residual: GridFunction::zeros(spec),
        levels: Vec::new(),
        absorbed: 0,
    };
    if fp.is_zero() {
        return Ok(empty(0));
    }
    let m = grand_maximal(&fp, &params.maximal.dictionary, ladder, false, params.maximal.b, params.maximal.eps_cut)?;
    let max_m = m.sup_norm();
    let min_on_supp = fp
        .values()
        .iter()
        .zip(m.values())
        .filter(|(v, _)| **v != 0.0)
        .map(|(_, mm)| *mm)
        .fold(f64::INFINITY, f64::min);
    if !(min_on_supp > 0.0) {
        return Err(Error::Range("grand maximal function vanishes on the support of f".into()));
    }
    let j_hi = max_m.log2().ceil() as i32;
    let j_lo = min_on_supp.log2().ceil() as i32 - 1;
    let nlev = (j_hi - j_lo) as usize;
    if nlev > params.max_levels {
        return Err(Error::Range(format!("{nlev} levels exceed the limit of {}", params.max_levels)));
    }
    let levels: Vec<Level> = (j_lo..j_hi)
        .into_par_iter()
        .map(|j| build_level(&fp, &m, j, d))
        .collect::<Result<Vec<_>>>()?;

    let norms = CubeNormCache::new(params.slice.clone(), spec.dim(), spec.h());
    let jobs: Vec<(usize, usize)> = levels
        .iter()
        .enumerate()
        .flat_map(|(li, l)| (0..l.cubes.len()).map(move |k| (li, k)))
        .collect();
    let entries: Vec<Option<Entry>> = jobs
        .par_iter()
        .map(|&(li, k)| {
            let cur = &levels[li];
            let next = levels.get(li + 1);
            let pc = piece(&fp, cur, next, k, d)?;
            let sup = pc.values.sup_norm();
            if sup <= NOISE_FLOOR * pc.scale {
                return Ok(None);
            }
            let q = &cur.cubes[k];
            let star = star_side(q);
            let center = q.cube.center();
            let mut side = (params.c0 * star).max(enclosing_side(&pc.values, center));
            let promoted = cur.small[k] && pc.promoted;
            if promoted {
                side = side.max(1.0);
            }
            let cube = Cube::new(&center[..spec.dim()], side)?;
            let level = params.c0 * 2f64.powi(cur.j);
            let lambda = level.max(sup) * norms.cube(&cube, &spec)?;
            let atom = Atom::new(cube, pc.values.scaled(1.0 / lambda), params.r, d)?;
            Ok(Some(Entry { j: cur.j, k, lambda, atom, residual: false, promoted, saturated: sup > level }))
        })
        .collect::<Result<Vec<_>>>()?;
    let absorbed = entries.iter().filter(|e| e.is_none()).count();
    let mut entries: Vec<Entry> = entries.into_iter().flatten().collect();
    entries.sort_by_key(|e| e.key());

    // g_{j_lo} plus the absorbed noise: f minus every kept piece
    let kept = Decomposition { spec, d, r: params.r, s: params.s, c0: params.c0, j_lo, j_hi, entries, residual: GridFunction::zeros(spec), levels: Vec::new(), absorbed };
    let mut residual = fp.clone();
    residual.add_scaled(&reconstruct(&kept)?, -1.0)?;
    let mut entries = kept.entries;
    entries.extend(residual_atoms(&residual, j_lo, params.r, d, &norms)?);
    Ok(Decomposition {
        spec,
        d,
        r: params.r,
        s: params.s,
        c0: params.c0,
        j_lo,
        j_hi,
        entries,
        residual,
        levels: levels.into_iter().map(|l| l.summary).collect(),
        absorbed,
    })
}

/// `Σ λ a` over all entries (remainder atoms included) on the decomposition
/// grid. Entries are summed in `(residual, j, k)` order with compensation,
/// so any permutation of `entries` gives bit-identical output.
pub fn reconstruct(dec: &Decomposition) -> Result<GridFunction> {
    let spec = dec.spec;
    let mut order: Vec<&Entry> = dec.entries.iter().collect();
    order.sort_by_key(|e| e.key());
    let mut acc = vec![KahanSum::new(); spec.len()];
    for e in order {
        let v = &e.atom.values;
        let o = spec
            .offset_of(v.spec())
            .ok_or_else(|| Error::InvalidData("atom grid is not compatible with the decomposition grid".into()))?;
        let vs = *v.spec();
        for (c, a) in v.values().iter().enumerate() {
            if *a == 0.0 {
                continue;
            }
            let [i0, i1] = vs.unflat(c);
            let g = spec
                .index([i0 as i64 + o[0], i1 as i64 + o[1]])
                .ok_or_else(|| Error::InvalidData("atom sample outside the decomposition grid".into()))?;
            acc[g].add(e.lambda * a);
        }
    }
    GridFunction::new(spec, acc.iter().map(|k| k.value()).collect())
}

/// Atomic quasi-norm of a decomposition at its own exponent s.
pub fn decomposition_quasinorm(dec: &Decomposition, slice: &SliceParams) -> Result<f64> {
    super::atom::atomic_quasinorm(dec.entries.iter().map(|e| (e.lambda, &e.atom.cube)), &dec.spec, slice, dec.s)
}
