//! Local maximal functions built from dyadic convolution ladders: radial,
//! non-tangential, Peetre-type and grand, and the Hardy quasi-norms that
//! compose them with an outer norm.
//!
//! All maximal functions are evaluated on the grid of their input. The
//! pipelines ([`hardy_quasinorm`], [`MaximalSet`]) first zero-pad the input
//! by [`MaximalParams::reach`], beyond which every maximal function vanishes.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{GridFunction, GridSpec, KernelStencil, MollifierDictionary};
use crate::orlicz::{musielak_norm, MusielakFunction, OrliczFunction};
use crate::slice::{slice_norm, star_norm, SliceParams};

/// Default Peetre window cutoff.
pub const EPS_CUT: f64 = 1e-6;

/// Aperture, Peetre exponent, window cutoff and the kernel dictionary (whose
/// order is the grand order N).
#[derive(Debug, Clone)]
pub struct MaximalParams {
    pub a: f64,
    pub b: f64,
    pub eps_cut: f64,
    pub dictionary: MollifierDictionary,
}

impl MaximalParams {
    pub fn new(a: f64, b: f64, eps_cut: f64, dictionary: MollifierDictionary) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidArgument(format!("aperture must be positive, got {a}")));
        }
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::InvalidArgument(format!("Peetre exponent must be positive, got {b}")));
        }
        if !(eps_cut > 0.0 && eps_cut < 1.0) {
            return Err(Error::InvalidArgument(format!("window cutoff must lie in (0,1), got {eps_cut}")));
        }
        Ok(Self { a, b, eps_cut, dictionary })
    }

    pub fn ladder(&self) -> &[f64] {
        self.dictionary.scales()
    }

    pub fn order(&self) -> usize {
        self.dictionary.order()
    }

    /// Peetre window radius in units of the scale: the weight
    /// `(1+|y|/s)^{-b}` exceeds `eps_cut` exactly for `|y| < s·peetre_radius`.
    pub fn peetre_radius(&self) -> f64 {
        peetre_radius(self.b, self.eps_cut)
    }

    /// Distance beyond the support of f past which every maximal function
    /// built from these parameters vanishes.
    pub fn reach(&self) -> f64 {
        let smax = self.ladder().iter().copied().fold(0.0, f64::max);
        smax * (1.0 + self.a.max(self.peetre_radius()).max(1.0))
    }

    /// Zero-pads f so that the maximal functions are fully captured.
    pub fn padded(&self, f: &GridFunction) -> GridFunction {
        f.padded((self.reach() / f.h()).ceil() as usize + 1)
    }

    /// `b > 2n / min{p_minus, q}`.
    pub fn check_peetre_exponent(&self, dim: usize, p_minus: f64, q: f64) -> Result<()> {
        let need = 2.0 * dim as f64 / p_minus.min(q);
        if self.b > need {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "Peetre exponent b = {} must exceed 2n/min{{p_minus, q}} = {need}",
                self.b
            )))
        }
    }

    /// `N ≥ ⌊b + 1⌋`.
    pub fn check_grand_order(&self) -> Result<()> {
        let need = (self.b + 1.0).floor() as usize;
        if self.order() >= need {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "grand order N = {} must be at least floor(b + 1) = {need}",
                self.order()
            )))
        }
    }
}

fn peetre_radius(b: f64, eps_cut: f64) -> f64 {
    eps_cut.powf(-1.0 / b) - 1.0
}

fn check_input(f: &GridFunction, kernel: &GridFunction) -> Result<()> {
    if kernel.dim() != f.dim() || (kernel.h() - f.h()).abs() > 1e-12 * f.h() {
        return Err(Error::InvalidData("kernel and function must share spacing and dimension".into()));
    }
    if f.values().iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidData("grid function has a non-finite sample".into()));
    }
    Ok(())
}

/// `|ψ_s ∗ f|` for every scale of the ladder.
fn convolution_ladder(f: &GridFunction, kernel: &GridFunction, ladder: &[f64]) -> Result<Vec<Vec<f64>>> {
    check_input(f, kernel)?;
    let stencils = ladder.iter().map(|s| KernelStencil::new(kernel, *s)).collect::<Result<Vec<_>>>()?;
    Ok(stencils
        .par_iter()
        .map(|st| st.apply(f).into_values().into_iter().map(f64::abs).collect())
        .collect())
}

fn pointwise_max(acc: &mut [f64], v: &[f64]) {
    for (a, b) in acc.iter_mut().zip(v) {
        if *b > *a {
            *a = *b;
        }
    }
}

/// `(d0, w)` rows of lattice offsets `d` with `|d| h < r`.
fn disc_rows(dim: usize, h: f64, r: f64) -> Vec<(i64, i64)> {
    let rr = r / h;
    let rmax = rr.ceil() as i64;
    let mut rows = Vec::new();
    for d0 in -rmax..=rmax {
        let d0f = d0 as f64;
        if dim == 1 {
            if d0f.abs() < rr {
                rows.push((d0, 0));
            }
            continue;
        }
        let mut w = -1i64;
        for d1 in 0..=rmax {
            let d1f = d1 as f64;
            if d0f * d0f + d1f * d1f < rr * rr {
                w = d1;
            }
        }
        if w >= 0 {
            rows.push((d0, w));
        }
    }
    if rows.is_empty() {
        rows.push((0, 0));
    }
    rows
}

/// `out(x) = max_{|y−x| < r} v(y)` over grid points y in the box; `x`
/// itself always counts.
fn disc_max(v: &[f64], spec: &GridSpec, r: f64) -> Vec<f64> {
    let dim = spec.dim();
    let rows = disc_rows(dim, spec.h(), r);
    let e = spec.extents();
    if dim == 1 {
        let n = e[0] as i64;
        let w = rows.iter().map(|(d, _)| d.abs()).max().unwrap_or(0);
        return (0..n)
            .into_par_iter()
            .map(|i| {
                let lo = (i - w).max(0) as usize;
                let hi = (i + w + 1).min(n) as usize;
                v[lo..hi].iter().copied().fold(0.0, f64::max)
            })
            .collect();
    }
    let (n0, n1) = (e[0] as i64, e[1] as i64);
    let mut widths: Vec<i64> = rows.iter().map(|(_, w)| *w).collect();
    widths.sort_unstable();
    widths.dedup();
    let horizontal: Vec<(i64, Vec<f64>)> = widths
        .par_iter()
        .map(|&w| {
            let mut h = vec![0.0; v.len()];
            for i0 in 0..n0 {
                for i1 in 0..n1 {
                    let lo = (i1 - w).max(0);
                    let hi = (i1 + w + 1).min(n1);
                    let base = (i0 * n1) as usize;
                    h[base + i1 as usize] = v[base + lo as usize..base + hi as usize].iter().copied().fold(0.0, f64::max);
                }
            }
            (w, h)
        })
        .collect();
    let lookup = |w: i64| &horizontal[horizontal.binary_search_by_key(&w, |(k, _)| *k).unwrap()].1;
    (0..v.len())
        .into_par_iter()
        .map(|k| {
            let i0 = k as i64 / n1;
            let i1 = k as i64 % n1;
            let mut best = 0.0f64;
            for (d0, w) in &rows {
                let r0 = i0 + d0;
                if r0 < 0 || r0 >= n0 {
                    continue;
                }
                best = best.max(lookup(*w)[(r0 * n1 + i1) as usize]);
            }
            best
        })
        .collect()
}

/// `out(x) = max_y v(x−y) (1+|y|/s)^{-b}` over y with weight above `eps`.
/// Candidates are scanned in decreasing magnitude and the scan stops once no
/// remaining candidate can beat the current maximum (weights are ≤ 1).
fn peetre_scan(v: &[f64], spec: &GridSpec, s: f64, b: f64, eps: f64) -> Vec<f64> {
    let mut cand: Vec<(usize, f64)> = v.iter().copied().enumerate().filter(|(_, x)| *x > 0.0).collect();
    cand.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let h = spec.h();
    let inv_s = 1.0 / s;
    (0..v.len())
        .into_par_iter()
        .map(|k| {
            let x = spec.unflat(k);
            let mut best = v[k];
            for &(j, val) in &cand {
                if val <= best {
                    break;
                }
                let y = spec.unflat(j);
                let d0 = (x[0] as f64 - y[0] as f64) * h;
                let d1 = (x[1] as f64 - y[1] as f64) * h;
                let w = (1.0 + (d0 * d0 + d1 * d1).sqrt() * inv_s).powf(-b);
                if w > eps {
                    let c = val * w;
                    if c > best {
                        best = c;
                    }
                }
            }
            best
        })
        .collect()
}

fn to_grid(spec: &GridSpec, values: Vec<f64>) -> GridFunction {
    GridFunction::new(*spec, values).expect("finite maximal function")
}

/// `m(f, φ)(x) = max_{s ∈ ladder} |φ_s ∗ f(x)|`.
pub fn radial_maximal(f: &GridFunction, phi: &GridFunction, ladder: &[f64]) -> Result<GridFunction> {
    let conv = convolution_ladder(f, phi, ladder)?;
    let mut acc = vec![0.0; f.len()];
    for c in &conv {
        pointwise_max(&mut acc, c);
    }
    Ok(to_grid(f.spec(), acc))
}

fn nontangential_from(conv: &[Vec<f64>], spec: &GridSpec, a: f64, ladder: &[f64]) -> Vec<f64> {
    let mut acc = vec![0.0; spec.len()];
    for (c, s) in conv.iter().zip(ladder) {
        pointwise_max(&mut acc, &disc_max(c, spec, a * s));
    }
    acc
}

fn peetre_from(conv: &[Vec<f64>], spec: &GridSpec, b: f64, eps: f64, ladder: &[f64]) -> Vec<f64> {
    let mut acc = vec![0.0; spec.len()];
    for (c, s) in conv.iter().zip(ladder) {
        pointwise_max(&mut acc, &peetre_scan(c, spec, *s, b, eps));
    }
    acc
}

/// `m_a^*(f, φ)(x) = max_s max_{|y−x| < a s} |φ_s ∗ f(y)|`.
pub fn nontangential_maximal(f: &GridFunction, phi: &GridFunction, a: f64, ladder: &[f64]) -> Result<GridFunction> {
    if !(a > 0.0) {
        return Err(Error::InvalidArgument(format!("aperture must be positive, got {a}")));
    }
    let conv = convolution_ladder(f, phi, ladder)?;
    Ok(to_grid(f.spec(), nontangential_from(&conv, f.spec(), a, ladder)))
}

/// `m_b^{**}(f, φ)(x) = max_s max_y |φ_s ∗ f(x−y)| (1 + |y|/s)^{-b}`, over
/// offsets whose weight exceeds `eps_cut`.
pub fn peetre_maximal(f: &GridFunction, phi: &GridFunction, b: f64, ladder: &[f64], eps_cut: f64) -> Result<GridFunction> {
    if !(b > 0.0) {
        return Err(Error::InvalidArgument(format!("Peetre exponent must be positive, got {b}")));
    }
    let conv = convolution_ladder(f, phi, ladder)?;
    Ok(to_grid(f.spec(), peetre_from(&conv, f.spec(), b, eps_cut, ladder)))
}

/// Grand maximal function over the dictionary: the non-tangential maximal
/// function of aperture 1 (or the Peetre-type one when `peetre` is set),
/// maximized over all kernels.
pub fn grand_maximal(
    f: &GridFunction,
    dictionary: &MollifierDictionary,
    ladder: &[f64],
    peetre: bool,
    b: f64,
    eps_cut: f64,
) -> Result<GridFunction> {
    let mut acc = vec![0.0; f.len()];
    for kernel in dictionary.kernels() {
        let conv = convolution_ladder(f, kernel, ladder)?;
        let m = if peetre {
            peetre_from(&conv, f.spec(), b, eps_cut, ladder)
        } else {
            nontangential_from(&conv, f.spec(), 1.0, ladder)
        };
        pointwise_max(&mut acc, &m);
    }
    Ok(to_grid(f.spec(), acc))
}

/// Outer norm composed with the Peetre maximal function.
#[derive(Debug, Clone)]
pub enum SpaceTag {
    /// `slice:PHI:q:t`
    Slice(SliceParams),
    /// `star:PHI`
    Star(OrliczFunction),
    /// `muslog`
    MusLog,
    /// `l1`
    L1,
}

impl FromStr for SpaceTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "muslog" {
            return Ok(SpaceTag::MusLog);
        }
        if s == "l1" {
            return Ok(SpaceTag::L1);
        }
        if let Some(rest) = s.strip_prefix("star:") {
            return Ok(SpaceTag::Star(OrliczFunction::from_tag(rest)?));
        }
        if let Some(rest) = s.strip_prefix("slice:") {
            let mut parts = rest.rsplitn(3, ':');
            let t = parts.next();
            let q = parts.next();
            let phi = parts.next();
            let (Some(t), Some(q), Some(phi)) = (t, q, phi) else {
                return Err(Error::InvalidArgument(format!("slice tag must be slice:PHI:q:t, got `{s}`")));
            };
            let num = |v: &str| {
                v.parse::<f64>()
                    .map_err(|_| Error::InvalidArgument(format!("bad number `{v}` in space tag `{s}`")))
            };
            return Ok(SpaceTag::Slice(SliceParams::new(OrliczFunction::from_tag(phi)?, num(q)?, num(t)?)?));
        }
        Err(Error::InvalidArgument(format!("unknown space tag `{s}`")))
    }
}

impl fmt::Display for SpaceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceTag::Slice(p) => write!(f, "slice:{}:{}:{}", p.phi.name(), p.q, p.t),
            SpaceTag::Star(phi) => write!(f, "star:{}", phi.name()),
            SpaceTag::MusLog => write!(f, "muslog"),
            SpaceTag::L1 => write!(f, "l1"),
        }
    }
}

/// Evaluates the outer norm named by `tag` on an already computed maximal
/// function.
pub fn outer_norm(m: &GridFunction, tag: &SpaceTag) -> Result<f64> {
    match tag {
        SpaceTag::Slice(p) => slice_norm(m, p),
        SpaceTag::Star(phi) => star_norm(m, phi),
        SpaceTag::MusLog => musielak_norm(&MusielakFunction::Log, m),
        SpaceTag::L1 => Ok(m.lp_norm(1.0)),
    }
}

fn check_tag_hypotheses(tag: &SpaceTag, dim: usize, params: &MaximalParams) -> Result<()> {
    match tag {
        SpaceTag::Slice(p) => params.check_peetre_exponent(dim, p.phi.p_minus(), p.q),
        _ => params.check_peetre_exponent(dim, 1.0, 1.0),
    }
}

/// `‖m_b^{**}(f, φ)‖` in the tagged outer norm, with φ the distinguished
/// dictionary kernel.
pub fn hardy_quasinorm(f: &GridFunction, tag: &SpaceTag, params: &MaximalParams) -> Result<f64> {
    check_tag_hypotheses(tag, f.dim(), params)?;
    if f.is_zero() {
        return Ok(0.0);
    }
    let fp = params.padded(f);
    let m = peetre_maximal(&fp, params.dictionary.distinguished(), params.b, params.ladder(), params.eps_cut)?;
    outer_norm(&m, tag)
}

/// Names of the five maximal functions of [`MaximalSet`], in order.
pub const MAXIMAL_NAMES: [&str; 5] = ["radial", "nontangential", "grand", "peetre", "grand_peetre"];

/// The five maximal functions of one input, sharing a padded grid.
#[derive(Debug, Clone)]
pub struct MaximalSet {
    pub radial: GridFunction,
    pub nontangential: GridFunction,
    pub grand: GridFunction,
    pub peetre: GridFunction,
    pub grand_peetre: GridFunction,
}

/// Largest relative violation found by [`MaximalSet::chain_violation`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainCheck {
    /// `max (lhs − rhs)/max(rhs, tiny)` over all points and links; ≤ 0 when
    /// the chain holds.
    pub worst: f64,
    pub points: usize,
}

impl ChainCheck {
    pub fn holds(&self, rel_tol: f64) -> bool {
        self.worst <= rel_tol
    }
}

impl MaximalSet {
    pub fn compute(f: &GridFunction, params: &MaximalParams) -> Result<Self> {
        let fp = params.padded(f);
        let spec = *fp.spec();
        let ladder = params.ladder();
        let phi = params.dictionary.distinguished();
        let conv = convolution_ladder(&fp, phi, ladder)?;
        let mut radial = vec![0.0; spec.len()];
        for c in &conv {
            pointwise_max(&mut radial, c);
        }
        let nontangential = nontangential_from(&conv, &spec, params.a, ladder);
        let peetre = peetre_from(&conv, &spec, params.b, params.eps_cut, ladder);
        let grand = grand_maximal(&fp, &params.dictionary, ladder, false, params.b, params.eps_cut)?;
        let grand_peetre = grand_maximal(&fp, &params.dictionary, ladder, true, params.b, params.eps_cut)?;
        Ok(Self {
            radial: to_grid(&spec, radial),
            nontangential: to_grid(&spec, nontangential),
            grand,
            peetre: to_grid(&spec, peetre),
            grand_peetre,
        })
    }

    pub fn as_array(&self) -> [&GridFunction; 5] {
        [&self.radial, &self.nontangential, &self.grand, &self.peetre, &self.grand_peetre]
    }

    /// Pointwise `radial ≤ nontangential ≤ (1+a)^b peetre`.
    pub fn chain_violation(&self, params: &MaximalParams) -> ChainCheck {
        let k = (1.0 + params.a).powf(params.b);
        let mut worst = f64::NEG_INFINITY;
        let r = self.radial.values();
        let n = self.nontangential.values();
        let p = self.peetre.values();
        for i in 0..r.len() {
            let links = [(r[i], n[i]), (n[i], k * p[i])];
            for (lhs, rhs) in links {
                let rel = (lhs - rhs) / rhs.max(f64::MIN_POSITIVE);
                if lhs == 0.0 && rhs == 0.0 {
                    worst = worst.max(0.0);
                } else {
                    worst = worst.max(rel);
                }
            }
        }
        ChainCheck { worst, points: r.len() }
    }

    /// The five quasi-norms in the given outer norm, ordered as [`MAXIMAL_NAMES`].
    pub fn norms(&self, tag: &SpaceTag) -> Result<[f64; 5]> {
        let mut out = [0.0; 5];
        for (o, m) in out.iter_mut().zip(self.as_array()) {
            *o = outer_norm(m, tag)?;
        }
        Ok(out)
    }
}

/// One input of a [`MaximalEquivalenceReport`].
#[derive(Debug, Clone)]
pub struct EquivalenceRow {
    pub index: usize,
    pub norms: [f64; 5],
    pub chain: ChainCheck,
}

/// Ratio band `norm_i / norm_j` over the family.
#[derive(Debug, Clone, Copy)]
pub struct PairBand {
    pub i: usize,
    pub j: usize,
    pub min: f64,
    pub max: f64,
}

impl PairBand {
    pub fn width(&self) -> f64 {
        self.max / self.min
    }
}

#[derive(Debug, Clone)]
pub struct MaximalEquivalenceReport {
    pub t: f64,
    pub rows: Vec<EquivalenceRow>,
    pub skipped: usize,
    pub bands: Vec<PairBand>,
}

impl MaximalEquivalenceReport {
    pub fn chain_holds(&self, rel_tol: f64) -> bool {
        self.rows.iter().all(|r| r.chain.holds(rel_tol))
    }

    pub fn band(&self, i: usize, j: usize) -> Option<&PairBand> {
        self.bands.iter().find(|b| b.i == i && b.j == j)
    }
}

fn pair_bands(rows: &[EquivalenceRow]) -> Vec<PairBand> {
    let mut bands = Vec::new();
    for i in 0..5 {
        for j in (i + 1)..5 {
            let ratios: Vec<f64> = rows.iter().map(|r| r.norms[i] / r.norms[j]).collect();
            if ratios.is_empty() {
                continue;
            }
            let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
            let max = ratios.iter().copied().fold(0.0, f64::max);
            bands.push(PairBand { i, j, min, max });
        }
    }
    bands
}

/// Checks the hypotheses relating b, N, Φ and q.
pub fn check_equivalence_hypotheses(dim: usize, slice: &SliceParams, params: &MaximalParams) -> Result<()> {
    params.check_grand_order()?;
    params.check_peetre_exponent(dim, slice.phi.p_minus(), slice.q)
}

/// Slice-norm equivalence report for precomputed maximal sets, so several
/// slice radii can reuse one set of maximal functions.
pub fn equivalence_from_sets(sets: &[Option<MaximalSet>], slice: &SliceParams, params: &MaximalParams) -> Result<MaximalEquivalenceReport> {
    let tag = SpaceTag::Slice(slice.clone());
    let mut rows = Vec::new();
    let mut skipped = 0;
    for (index, set) in sets.iter().enumerate() {
        match set {
            None => skipped += 1,
            Some(set) => rows.push(EquivalenceRow { index, norms: set.norms(&tag)?, chain: set.chain_violation(params) }),
        }
    }
    let bands = pair_bands(&rows);
    Ok(MaximalEquivalenceReport { t: slice.t, rows, skipped, bands })
}

/// Maximal sets for a family; zero members give `None`.
pub fn maximal_sets(family: &[GridFunction], params: &MaximalParams) -> Result<Vec<Option<MaximalSet>>> {
    family
        .iter()
        .map(|f| if f.is_zero() { Ok(None) } else { MaximalSet::compute(f, params).map(Some) })
        .collect()
}

/// For each input, the five maximal quasi-norms composed with the slice
/// norm, the pointwise chain check, and the pairwise ratio bands.
pub fn maximal_equivalence_report(family: &[GridFunction], slice: &SliceParams, params: &MaximalParams) -> Result<MaximalEquivalenceReport> {
    let dim = family.first().map_or(1, |f| f.dim());
    check_equivalence_hypotheses(dim, slice, params)?;
    let sets = maximal_sets(family, params)?;
    equivalence_from_sets(&sets, slice, params)
}
