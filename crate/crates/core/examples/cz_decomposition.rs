//! Calderón–Zygmund decomposition of a two-bump signal into local atoms,
//! with reconstruction error, atom validation and the atomic quasi-norm.

use slice_hardy::atomic::{cz_decompose, decomposition_quasinorm, reconstruct, validate_atom, CzParams};
use slice_hardy::grid::{build_dictionary, bump};
use slice_hardy::maximal::{hardy_quasinorm, MaximalParams, SpaceTag, EPS_CUT};
use slice_hardy::slice::CubeNormCache;
use slice_hardy::{GridFunction, GridSpec, OrliczFunction, SliceParams};

fn main() -> slice_hardy::Result<()> {
    let h = 1.0 / 64.0;
    let spec = GridSpec::covering(1, -8.0, 8.0, h)?;
    let f = GridFunction::from_fn(spec, |x| {
        3.0 * bump([(x[0] + 2.0) / 1.5, 0.0]) - 2.0 * bump([(x[0] - 1.0) / 0.5, 0.0]) + (7.0 * x[0]).sin() * bump([x[0] / 4.0, 0.0])
    });
    let slice = SliceParams::new(OrliczFunction::log_damped(0.9)?, 1.0, 1.0)?;
    let dict = build_dictionary(1, 7, 4, h, 4)?;
    let maximal = MaximalParams::new(1.0, 6.0, EPS_CUT, dict)?;
    let params = CzParams::new(slice.clone(), maximal.clone());

    let t0 = std::time::Instant::now();
    let dec = cz_decompose(&f, &params)?;
    println!("decomposed in {:.2?}: levels {}..{}, {} entries", t0.elapsed(), dec.j_lo, dec.j_hi, dec.entries.len());
    println!(
        "promotions {}  saturations {}  absorbed {}  K = {:.3e}  max overlap {}",
        dec.promotions(),
        dec.saturations(),
        dec.absorbed,
        dec.level_constant(),
        dec.max_overlap()
    );

    let rec = reconstruct(&dec)?;
    let mut err = rec.clone();
    err.add_scaled(&f.embed(&dec.spec)?, -1.0)?;
    println!("reconstruction error (sup, relative): {:.3e}", err.sup_norm() / f.sup_norm());

    let norms = CubeNormCache::new(slice.clone(), 1, h);
    let mut worst_moment: f64 = 0.0;
    let mut min_slack = f64::INFINITY;
    let mut invalid = 0;
    for e in &dec.entries {
        let rep = validate_atom(&e.atom, &norms, params.tol)?;
        if rep.moments_required {
            worst_moment = worst_moment.max(rep.moment_max);
        }
        min_slack = min_slack.min(rep.size_slack);
        invalid += usize::from(!rep.valid());
    }
    println!("invalid atoms {invalid}  worst moment {worst_moment:.2e}  smallest size slack {min_slack:.3e}");

    let atomic = decomposition_quasinorm(&dec, &slice)?;
    let hardy = hardy_quasinorm(&f, &SpaceTag::Slice(slice), &maximal)?;
    println!("atomic quasi-norm {atomic:.6e}  Hardy quasi-norm {hardy:.6e}  ratio {:.4}", atomic / hardy);
    Ok(())
}
