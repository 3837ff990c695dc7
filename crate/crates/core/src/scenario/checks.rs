//! The named checks. Each returns CSV tables and summary lines; nothing
//! here touches the filesystem and nothing depends on wall-clock time, so
//! reruns are byte-identical.

use rayon::prelude::*;

use crate::atomic::{cz_decompose, decomposition_quasinorm, reconstruct, validate_atom, CzParams, Decomposition};
use crate::campanato::{bmo_variant_norm, conjugate, pairing_bound_check, BmoVariant, CampanatoParams, CubeSweep};
use crate::embeddings::{hardy_embedding_check, star_to_muslog_check, EmbeddingReport};
use crate::error::Result;
use crate::grid::{Cube, GridFunction, GridSpec};
use crate::maximal::{equivalence_from_sets, hardy_quasinorm, maximal_sets, SpaceTag, MAXIMAL_NAMES};
use crate::orlicz::{luxemburg_norm, OrliczFunction, DEFAULT_LOG_DAMPED_P_MINUS};
use crate::report::{real, SummaryLine, Table};
use crate::slice::{ball_indicator_ratio, fefferman_stein_check, reverse_superadditivity_check, slice_norm, CubeNormCache, SliceParams};

use super::config::Scenario;
use super::family::{generate_family, random_fields, Generator};
use super::CheckOutput;

/// Seed offsets so the families of different checks are independent.
const SEED_NONNEGATIVE: u64 = 0x9e37_79b9;
const SEED_VECTOR: u64 = 0x7f4a_7c15;
const SEED_FIELDS: u64 = 0x94d0_49bb;

fn family(sc: &Scenario) -> Result<Vec<GridFunction>> {
    generate_family(&sc.generator, &sc.spec, sc.config.family.count, sc.config.seed)
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }
}

fn spread(values: impl IntoIterator<Item = f64>) -> f64 {
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo > 0.0 {
        hi / lo
    } else {
        f64::INFINITY
    }
}

fn le(v: f64, cap: f64) -> bool {
    v.is_finite() && v <= cap
}

fn bool_str(b: bool) -> String {
    b.to_string()
}

/// Same grid with the spacing halved.
fn refined(spec: &GridSpec) -> Result<GridSpec> {
    let e = spec.extents();
    GridSpec::new(spec.dim(), &spec.origin()[..spec.dim()], spec.h() / 2.0, &[e[0] * 2, e[1] * 2][..spec.dim()])
}

fn superadditivity_params(sc: &Scenario) -> Result<SliceParams> {
    let phi = if sc.slice.phi.p_plus() <= 1.0 {
        sc.slice.phi.clone()
    } else {
        OrliczFunction::log_damped(DEFAULT_LOG_DAMPED_P_MINUS)?
    };
    SliceParams::new(phi, 1.0, sc.slice.t)
}

pub(super) fn norms(sc: &Scenario) -> Result<CheckOutput> {
    let tol = &sc.config.tolerances;
    let fam = family(sc)?;
    let mut lux = Table::new(&["p", "index", "luxemburg", "lp", "rel_error"]);
    let mut lux_worst: f64 = 0.0;
    for p in [1.0, 2.0, 4.0] {
        let phi = OrliczFunction::power(p)?;
        let rows = fam
            .par_iter()
            .map(|f| Ok((luxemburg_norm(&phi, f)?, f.lp_norm(p))))
            .collect::<Result<Vec<_>>>()?;
        for (i, (l, r)) in rows.into_iter().enumerate() {
            let e = rel(l, r);
            lux_worst = lux_worst.max(e);
            lux.push(vec![real(p), i.to_string(), real(l), real(r), real(e)]);
        }
    }

    let mut sl = Table::new(&["q", "t", "index", "slice", "lq", "rel_error"]);
    let mut sl_worst: f64 = 0.0;
    for q in [1.0, 2.0] {
        for &t in &sc.config.functional.t_values {
            let p = SliceParams::new(OrliczFunction::power(q)?, q, t)?;
            let rows = fam
                .par_iter()
                .map(|f| Ok((slice_norm(f, &p)?, f.lp_norm(q))))
                .collect::<Result<Vec<_>>>()?;
            for (i, (s, r)) in rows.into_iter().enumerate() {
                let e = rel(s, r);
                sl_worst = sl_worst.max(e);
                sl.push(vec![real(q), real(t), i.to_string(), real(s), real(r), real(e)]);
            }
        }
    }

    let sp = superadditivity_params(sc)?;
    let fc = &sc.config.family;
    let mut sup = Table::new(&["family", "sum_norm", "norm_sum", "ratio"]);
    let reports = (0..fc.vector_families)
        .into_par_iter()
        .map(|i| {
            let members = generate_family(&Generator::Nonnegative, &sc.spec, fc.vector_members, sc.config.seed ^ SEED_NONNEGATIVE ^ i as u64)?;
            reverse_superadditivity_check(&members, &sp)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut floor = f64::INFINITY;
    for (i, r) in reports.iter().enumerate() {
        if let Some(x) = r.ratio {
            floor = floor.min(x);
        }
        sup.push(vec![i.to_string(), real(r.sum_norm), real(r.norm_sum), r.ratio.map_or(String::new(), real)]);
    }

    let mut lines = vec![
        SummaryLine::exact("norms", "luxemburg vs L^p max rel error", lux_worst, &format!("<= {:e}", tol.luxemburg), lux_worst <= tol.luxemburg),
        SummaryLine::exact("norms", "slice vs L^q max rel error", sl_worst, &format!("<= {}", tol.slice_lq), sl_worst <= tol.slice_lq),
    ];
    if !reports.is_empty() {
        lines.push(SummaryLine::band(
            "norms",
            "superadditivity min ratio",
            floor,
            &format!(">= {}", tol.superadditivity_floor),
            floor.is_finite() && floor >= tol.superadditivity_floor,
        ));
    }
    Ok(CheckOutput {
        tables: vec![("norms_luxemburg".into(), lux), ("norms_slice".into(), sl), ("norms_superadditivity".into(), sup)],
        lines,
        decompositions: Vec::new(),
    })
}

pub(super) fn maximal_equivalence(sc: &Scenario) -> Result<CheckOutput> {
    let tol = &sc.config.tolerances;
    let fam = family(sc)?;
    let sets = maximal_sets(&fam, &sc.maximal)?;
    let mut hdr = vec!["t", "index"];
    hdr.extend(MAXIMAL_NAMES);
    hdr.push("chain_worst");
    let mut norms = Table::new(&hdr);
    let mut bands = Table::new(&["t", "numerator", "denominator", "min", "max"]);
    let mut chain_worst = f64::NEG_INFINITY;
    let mut per_pair: Vec<Vec<(f64, f64)>> = vec![Vec::new(); 10];
    for &t in &sc.config.functional.t_values {
        let rep = equivalence_from_sets(&sets, &sc.slice.with_t(t)?, &sc.maximal)?;
        for r in &rep.rows {
            let mut row = vec![real(t), r.index.to_string()];
            row.extend(r.norms.iter().map(|v| real(*v)));
            row.push(real(r.chain.worst));
            norms.push(row);
            chain_worst = chain_worst.max(r.chain.worst);
        }
        for (k, b) in rep.bands.iter().enumerate() {
            bands.push(vec![real(t), MAXIMAL_NAMES[b.i].into(), MAXIMAL_NAMES[b.j].into(), real(b.min), real(b.max)]);
            per_pair[k].push((b.min, b.max));
        }
    }
    let mut lines = vec![SummaryLine::exact(
        "maximal-equivalence",
        "pointwise chain worst rel violation",
        chain_worst,
        &format!("<= {:e}", tol.chain),
        chain_worst <= tol.chain,
    )];
    let mut k = 0;
    for i in 0..5 {
        for j in (i + 1)..5 {
            let ends = &per_pair[k];
            k += 1;
            if ends.is_empty() {
                continue;
            }
            let s = spread(ends.iter().map(|e| e.0)).max(spread(ends.iter().map(|e| e.1))) - 1.0;
            lines.push(SummaryLine::band(
                "maximal-equivalence",
                &format!("{}/{} band drift across t", MAXIMAL_NAMES[i], MAXIMAL_NAMES[j]),
                s,
                &format!("<= {}", tol.band_stability),
                le(s, tol.band_stability),
            ));
        }
    }
    Ok(CheckOutput {
        tables: vec![("maximal_equivalence".into(), norms), ("maximal_bands".into(), bands)],
        lines,
        decompositions: Vec::new(),
    })
}

fn decompose_all(fam: &[GridFunction], params: &CzParams) -> Result<Vec<Decomposition>> {
    fam.par_iter().map(|f| cz_decompose(f, params)).collect()
}

fn relative_error(f: &GridFunction, dec: &Decomposition) -> Result<f64> {
    let mut diff = reconstruct(dec)?;
    diff.add_scaled(&f.embed(&dec.spec)?, -1.0)?;
    let s = f.sup_norm();
    Ok(if s > 0.0 { diff.sup_norm() / s } else { diff.sup_norm() })
}

pub(super) fn cz_roundtrip(sc: &Scenario) -> Result<CheckOutput> {
    let tol = &sc.config.tolerances;
    let fam = family(sc)?;
    let decs = decompose_all(&fam, &sc.cz)?;
    let mut t1 = Table::new(&["index", "j_lo", "j_hi", "entries", "residual_atoms", "promotions", "saturations", "absorbed", "max_overlap", "level_constant", "rel_error"]);
    let mut worst: f64 = 0.0;
    let mut k_all: f64 = 0.0;
    for (i, (f, dec)) in fam.iter().zip(&decs).enumerate() {
        let e = relative_error(f, dec)?;
        worst = worst.max(e);
        k_all = k_all.max(dec.level_constant());
        t1.push(vec![
            i.to_string(),
            dec.j_lo.to_string(),
            dec.j_hi.to_string(),
            dec.entries.len().to_string(),
            dec.entries.iter().filter(|e| e.residual).count().to_string(),
            dec.promotions().to_string(),
            dec.saturations().to_string(),
            dec.absorbed.to_string(),
            dec.max_overlap().to_string(),
            real(dec.level_constant()),
            real(e),
        ]);
    }

    let mut t2 = Table::new(&["t", "index", "atomic", "hardy", "ratio"]);
    let mut fitted = Vec::new();
    for &t in &sc.config.functional.t_values {
        let slice = sc.slice.with_t(t)?;
        let mut p = sc.cz.clone();
        p.slice = slice.clone();
        let tag = SpaceTag::Slice(slice.clone());
        let rows = fam
            .par_iter()
            .enumerate()
            .filter(|(_, f)| !f.is_zero())
            .map(|(i, f)| {
                let dec = cz_decompose(f, &p)?;
                let a = decomposition_quasinorm(&dec, &slice)?;
                let h = hardy_quasinorm(f, &tag, &sc.maximal)?;
                Ok((i, a, h))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut c: f64 = 0.0;
        for (i, a, h) in rows {
            c = c.max(a / h);
            t2.push(vec![real(t), i.to_string(), real(a), real(h), real(a / h)]);
        }
        fitted.push(c);
    }
    let drift = spread(fitted.iter().copied()) - 1.0;

    let mut out = CheckOutput::default();
    out.lines.push(SummaryLine::exact(
        "cz-roundtrip",
        "reconstruction max rel sup error",
        worst,
        &format!("<= {:e}", tol.reconstruction),
        worst <= tol.reconstruction,
    ));
    out.lines.push(SummaryLine::band("cz-roundtrip", "level constant K", k_all, "finite", k_all.is_finite()));
    if !fitted.is_empty() {
        let c = fitted.iter().copied().fold(0.0, f64::max);
        out.lines.push(SummaryLine::band("cz-roundtrip", "atomic/hardy fitted C", c, "finite", c.is_finite()));
        out.lines.push(SummaryLine::band(
            "cz-roundtrip",
            "atomic/hardy C drift across t",
            drift,
            &format!("<= {}", tol.atomic_stability),
            le(drift, tol.atomic_stability),
        ));
    }
    out.tables.push(("cz_roundtrip".into(), t1));
    out.tables.push(("cz_atomic_norm".into(), t2));
    if let Some(d) = decs.into_iter().next() {
        out.decompositions.push(("cz_decomposition_0".into(), d));
    }
    Ok(out)
}

pub(super) fn atom_validation(sc: &Scenario) -> Result<CheckOutput> {
    let tol = &sc.config.tolerances;
    let fam = family(sc)?;
    let decs = decompose_all(&fam, &sc.cz)?;
    let mut t = Table::new(&[
        "index", "j", "k", "residual", "side", "lambda", "size", "size_bound", "size_slack", "moment_max", "moments_required", "valid",
    ]);
    let mut invalid = 0usize;
    let mut moment: f64 = 0.0;
    let mut atoms = 0usize;
    for (i, (f, dec)) in fam.iter().zip(&decs).enumerate() {
        let norms = CubeNormCache::new(sc.slice.clone(), f.dim(), f.h());
        let reps = dec.entries.par_iter().map(|e| validate_atom(&e.atom, &norms, sc.cz.tol)).collect::<Result<Vec<_>>>()?;
        for (e, r) in dec.entries.iter().zip(reps) {
            atoms += 1;
            invalid += usize::from(!r.valid());
            if r.moments_required {
                moment = moment.max(r.moment_max);
            }
            t.push(vec![
                i.to_string(),
                e.j.to_string(),
                e.k.to_string(),
                bool_str(e.residual),
                real(e.atom.cube.side()),
                real(e.lambda),
                real(r.size),
                real(r.size_bound),
                real(r.size_slack),
                real(r.moment_max),
                bool_str(r.moments_required),
                bool_str(r.valid()),
            ]);
        }
    }
    let lines = vec![
        SummaryLine::exact("atom-validation", &format!("invalid atoms of {atoms}"), invalid as f64, "= 0", invalid == 0),
        SummaryLine::exact("atom-validation", "worst moment", moment, &format!("<= {:e}", tol.moment), moment <= tol.moment),
    ];
    Ok(CheckOutput { tables: vec![("atom_validation".into(), t)], lines, decompositions: Vec::new() })
}

pub(super) fn duality(sc: &Scenario) -> Result<CheckOutput> {
    let tol = &sc.config.tolerances;
    let fam = family(sc)?;
    let decs = decompose_all(&fam, &sc.cz)?;
    let mut t = Table::new(&["index", "field", "j", "k", "residual", "side", "pairing", "campanato", "ratio"]);
    let mut worst: f64 = 0.0;
    for (i, dec) in decs.iter().enumerate() {
        if dec.entries.is_empty() {
            continue;
        }
        let p = CampanatoParams::new(sc.slice.clone(), conjugate(dec.r), dec.d, sc.sweep.clone())?;
        let fields = random_fields(&dec.spec, sc.config.family.fields, sc.config.seed ^ SEED_FIELDS ^ i as u64);
        let reps = fields.par_iter().map(|g| pairing_bound_check(dec, g, &p)).collect::<Result<Vec<_>>>()?;
        for (gi, rep) in reps.iter().enumerate() {
            if let Some(m) = rep.max_ratio() {
                worst = worst.max(m);
            }
            for r in &rep.rows {
                t.push(vec![
                    i.to_string(),
                    gi.to_string(),
                    r.j.to_string(),
                    r.k.to_string(),
                    bool_str(r.residual),
                    real(r.side),
                    real(r.pairing),
                    real(rep.norm),
                    r.ratio.map_or(String::new(), real),
                ]);
            }
        }
    }
    let lines = vec![SummaryLine::exact(
        "duality",
        "max |<a,g>| / campanato(g)",
        worst,
        &format!("<= {}", tol.pairing_slack),
        worst <= tol.pairing_slack,
    )];
    Ok(CheckOutput { tables: vec![("duality".into(), t)], lines, decompositions: Vec::new() })
}

fn embedding_family(sc: &Scenario, spec: &GridSpec) -> Result<Vec<GridFunction>> {
    let mut fam = generate_family(&sc.generator, spec, sc.config.family.count, sc.config.seed)?;
    if !sc.config.family.translates.is_empty() {
        fam.extend(generate_family(&Generator::Translates(sc.config.family.translates.clone()), spec, 0, 0)?);
    }
    Ok(fam)
}

fn push_embedding(t: &mut Table, kind: &str, h: f64, rep: &EmbeddingReport) {
    for r in &rep.rows {
        t.push(vec![
            kind.into(),
            real(h),
            r.index.to_string(),
            real(r.source),
            real(r.target),
            real(r.ratio),
            r.modular.map_or(String::new(), real),
        ]);
    }
}

pub(super) fn embeddings(sc: &Scenario) -> Result<CheckOutput> {
    let tol = &sc.config.tolerances;
    let phi = &sc.slice.phi;
    let fine = refined(&sc.spec)?;
    let coarse = star_to_muslog_check(&embedding_family(sc, &sc.spec)?, phi)?;
    let finer = star_to_muslog_check(&embedding_family(sc, &fine)?, phi)?;
    let mut t = Table::new(&["kind", "h", "index", "source", "target", "ratio", "modular"]);
    push_embedding(&mut t, "star_to_muslog", sc.spec.h(), &coarse);
    push_embedding(&mut t, "star_to_muslog", fine.h(), &finer);
    let c_drift = rel(coarse.constant, finer.constant);
    let cm = coarse.modular_bound.unwrap_or(0.0);
    let fm = finer.modular_bound.unwrap_or(0.0);
    let m_drift = rel(cm, fm);
    let cap = tol.embedding_refinement;
    let mut lines = vec![
        SummaryLine::band("embeddings", "star->muslog fitted C", coarse.constant, "finite", coarse.constant.is_finite()),
        SummaryLine::band("embeddings", "star->muslog fitted C'", cm, "finite", cm.is_finite()),
        SummaryLine::band("embeddings", "C refinement drift", c_drift, &format!("<= {cap}"), le(c_drift, cap)),
        SummaryLine::band("embeddings", "C' refinement drift", m_drift, &format!("<= {cap}"), le(m_drift, cap)),
    ];
    let n = sc.spec.dim() as f64;
    let translates = &sc.config.family.translates;
    if sc.maximal.b > 2.0 * n && !translates.is_empty() {
        let tr = generate_family(&Generator::Translates(translates.clone()), &sc.spec, 0, 0)?;
        let rep = hardy_embedding_check(&tr, phi, &sc.maximal)?;
        push_embedding(&mut t, "hardy_star_to_log", sc.spec.h(), &rep);
        lines.push(SummaryLine::band("embeddings", "hardy star->log fitted C", rep.constant, "finite", rep.constant.is_finite()));
    }
    Ok(CheckOutput { tables: vec![("embeddings".into(), t)], lines, decompositions: Vec::new() })
}

pub(super) fn lemma888(sc: &Scenario) -> Result<CheckOutput> {
    let tol = &sc.config.tolerances;
    let s = &sc.config.sweep;
    let radii: Vec<f64> = (s.ball_min_exp..=s.ball_max_exp).map(|k| 2f64.powi(k)).collect();
    let dim = sc.spec.dim();
    let hs = [s.ball_h, s.ball_h / 2.0];
    let reps = hs
        .par_iter()
        .map(|&h| ball_indicator_ratio(&sc.slice.phi, &radii, dim, h))
        .collect::<Result<Vec<_>>>()?;
    let mut t = Table::new(&["h", "radius", "measure", "model", "star_ratio", "orlicz_ratio"]);
    for (h, rep) in hs.iter().zip(&reps) {
        for r in &rep.rows {
            t.push(vec![real(*h), real(r.radius), real(r.measure), real(r.model), real(r.star_ratio), real(r.orlicz_ratio)]);
        }
    }
    let (a, b) = (&reps[0], &reps[1]);
    let drift = rel(a.min, b.min).max(rel(a.max, b.max));
    let lines = vec![
        SummaryLine::band("lemma888", "c2/c1", a.spread(), &format!("<= {}", tol.ball_spread), le(a.spread(), tol.ball_spread)),
        SummaryLine::band("lemma888", "c1", a.min, "> 0", a.min > 0.0),
        SummaryLine::band("lemma888", "c2", a.max, "finite", a.max.is_finite()),
        SummaryLine::band(
            "lemma888",
            "band refinement drift",
            drift,
            &format!("<= {}", tol.ball_refinement),
            le(drift, tol.ball_refinement),
        ),
    ];
    Ok(CheckOutput { tables: vec![("lemma888".into(), t)], lines, decompositions: Vec::new() })
}

pub(super) fn fefferman_stein(sc: &Scenario) -> Result<CheckOutput> {
    let tol = &sc.config.tolerances;
    let fc = &sc.config.family;
    let phi = OrliczFunction::from_tag(&fc.vector_phi)?;
    let rows = (0..fc.vector_families)
        .into_par_iter()
        .map(|i| {
            let members = generate_family(&sc.generator, &sc.spec, fc.vector_members, sc.config.seed ^ SEED_VECTOR ^ i as u64)?;
            fc.vector_t_values
                .iter()
                .map(|&t| fefferman_stein_check(&members, fc.vector_r, &SliceParams::new(phi.clone(), fc.vector_q, t)?))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new(&["family", "t", "lhs", "rhs", "ratio"]);
    let mut max_ratio: f64 = 0.0;
    let mut worst_spread: f64 = 1.0;
    for (i, reps) in rows.iter().enumerate() {
        let mut ratios = Vec::new();
        for r in reps {
            if let Some(x) = r.ratio {
                ratios.push(x);
                max_ratio = max_ratio.max(x);
            }
            table.push(vec![i.to_string(), real(r.t), real(r.lhs), real(r.rhs), r.ratio.map_or(String::new(), real)]);
        }
        if !ratios.is_empty() {
            worst_spread = worst_spread.max(spread(ratios));
        }
    }
    let cap = tol.fefferman_stein_stability;
    let lines = vec![
        SummaryLine::band("fefferman-stein", "max vector-maximal ratio", max_ratio, "finite", max_ratio.is_finite()),
        SummaryLine::band("fefferman-stein", "ratio spread across t", worst_spread, &format!("<= {cap}"), le(worst_spread, cap)),
    ];
    Ok(CheckOutput { tables: vec![("fefferman_stein".into(), table)], lines, decompositions: Vec::new() })
}

pub(super) fn bmo_facts(sc: &Scenario) -> Result<CheckOutput> {
    let tol = &sc.config.tolerances;
    let s = &sc.config.sweep;
    let dim = sc.spec.dim();
    let half = 2f64.powi(s.side_max_exp).max(1.0);
    let one = GridFunction::constant(GridSpec::covering(dim, -half, half, s.bmo_h)?, 1.0);
    let sweep = CubeSweep::dyadic(s.side_min_exp, s.side_max_exp);
    let target = (1.0 + std::f64::consts::E).ln();
    let bmo = bmo_variant_norm(&one, BmoVariant::Bmo, &sweep)?;
    let phi = bmo_variant_norm(&one, BmoVariant::BmoPhi, &sweep)?;

    let mut t = Table::new(&["variant", "center", "value", "reference"]);
    t.push(vec!["bmo".into(), String::new(), real(bmo), real(1.0)]);
    t.push(vec!["bmo_phi".into(), String::new(), real(phi), real(target)]);
    let mut logs = Vec::new();
    for &r in &s.bmo_radii {
        let mut lo = [-1.0; 2];
        lo[0] = ((r - 1.0) / s.bmo_h).floor() * s.bmo_h;
        let cells = (2.0 / s.bmo_h).ceil() as usize + 1;
        let spec = GridSpec::new(dim, &lo[..dim], s.bmo_h, &[cells, cells][..dim])?;
        let g = GridFunction::constant(spec, 1.0);
        let q = Cube::new(&[r, 0.0][..dim], 1.0)?;
        let v = bmo_variant_norm(&g, BmoVariant::BmoLog, &CubeSweep::explicit(vec![q]))?;
        t.push(vec!["bmo_log".into(), real(r), real(v), String::new()]);
        logs.push(v);
    }
    let e = (phi - target).abs();
    let mut lines = vec![
        SummaryLine::exact("bmo-facts", "bmo(1)", bmo, "= 1 +- 1e-12", (bmo - 1.0).abs() <= 1e-12),
        SummaryLine::exact("bmo-facts", "bmo_phi(1)", phi, &format!("= log(1+e) +- {:e}", tol.bmo_phi), e <= tol.bmo_phi),
    ];
    if !logs.is_empty() {
        let grows = logs.windows(2).all(|w| w[1] > w[0]);
        lines.push(SummaryLine::exact("bmo-facts", "bmo_log(1) grows with center", f64::from(u8::from(grows)), "= 1", grows));
        let last = *logs.last().unwrap();
        let ratio = last / phi;
        lines.push(SummaryLine::band(
            "bmo-facts",
            "bmo_log(1) at last center / bmo_phi(1)",
            ratio,
            &format!("> {}", tol.bmo_log_factor),
            ratio > tol.bmo_log_factor,
        ));
    }
    Ok(CheckOutput { tables: vec![("bmo_facts".into(), t)], lines, decompositions: Vec::new() })
}
