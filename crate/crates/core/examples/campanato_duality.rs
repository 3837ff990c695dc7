//! Campanato norms of a bounded field and the pairing bound
//! |∫ a g| ≤ ‖g‖ for the atoms of a decomposition.

use slice_hardy::atomic::{cz_decompose, CzParams};
use slice_hardy::campanato::{campanato_sweep, conjugate, pairing_bound_check, CampanatoParams, CubeSweep};
use slice_hardy::grid::build_dictionary;
use slice_hardy::maximal::{MaximalParams, EPS_CUT};
use slice_hardy::scenario::{generate_family, random_fields, Generator};
use slice_hardy::{GridSpec, OrliczFunction, SliceParams};

fn main() -> slice_hardy::Result<()> {
    let h = 1.0 / 64.0;
    let spec = GridSpec::covering(1, -8.0, 8.0, h)?;
    let f = generate_family(&Generator::Bursts, &spec, 1, 42)?.remove(0);
    let slice = SliceParams::new(OrliczFunction::log_damped(0.9)?, 1.0, 1.0)?;
    let maximal = MaximalParams::new(1.0, 6.0, EPS_CUT, build_dictionary(1, 7, 4, h, 4)?)?;
    let dec = cz_decompose(&f, &CzParams::new(slice.clone(), maximal))?;
    let p = CampanatoParams::new(slice, conjugate(dec.r), dec.d, CubeSweep::dyadic(-6, 5))?;
    for (i, g) in random_fields(&dec.spec, 3, 7).iter().enumerate() {
        let sweep = campanato_sweep(g, &p, &[])?;
        let rep = pairing_bound_check(&dec, g, &p)?;
        println!(
            "field {i}: small branch {:.4}  large branch {:.4}  norm with atom cubes {:.4}  max |<a,g>|/norm {:.4} over {} atoms",
            sweep.small,
            sweep.large,
            rep.norm,
            rep.max_ratio().unwrap_or(0.0),
            rep.rows.len()
        );
    }
    Ok(())
}
