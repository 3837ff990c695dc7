//! bmo, bmo^Φ and bmo^log sweeps of the constant function 1.

use slice_hardy::campanato::{bmo_sweep, bmo_variant_norm, BmoVariant, CubeSweep};
use slice_hardy::{Cube, GridFunction, GridSpec};

fn main() -> slice_hardy::Result<()> {
    let h = 1.0 / 256.0;
    let one = GridFunction::constant(GridSpec::covering(1, -32.0, 32.0, h)?, 1.0);
    let sweep = CubeSweep::dyadic(-6, 5);
    for v in [BmoVariant::Bmo, BmoVariant::BmoPhi] {
        let r = bmo_sweep(&one, v, &sweep)?;
        println!("{v:<8} small {:.9}  large {:.9}  norm {:.9}", r.small, r.large, r.norm());
    }
    println!("log(1+e) = {:.9}", (1.0 + std::f64::consts::E).ln());
    for r in [0.0, 4.0, 16.0, 64.0, 256.0] {
        let g = GridFunction::constant(GridSpec::covering(1, r - 1.0, r + 1.0, h)?, 1.0);
        let v = bmo_variant_norm(&g, BmoVariant::BmoLog, &CubeSweep::explicit(vec![Cube::new(&[r], 1.0)?]))?;
        println!("bmo_log on the unit cube at {r:<5} {v:.6}");
    }
    Ok(())
}
