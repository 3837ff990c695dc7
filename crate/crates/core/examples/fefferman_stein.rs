//! Vector-valued Hardy–Littlewood maximal inequality in the slice norm,
//! across slice radii.

use slice_hardy::scenario::{generate_family, Generator};
use slice_hardy::slice::fefferman_stein_check;
use slice_hardy::{GridSpec, OrliczFunction, SliceParams};

fn main() -> slice_hardy::Result<()> {
    let spec = GridSpec::covering(1, -8.0, 8.0, 1.0 / 64.0)?;
    let fam = generate_family(&Generator::Mixed, &spec, 5, 3)?;
    for tag in ["power:2", "power:3"] {
        let phi = OrliczFunction::from_tag(tag)?;
        for t in [0.25, 1.0, 4.0] {
            for r in [1.5, 2.0, 4.0] {
                let rep = fefferman_stein_check(&fam, r, &SliceParams::new(phi.clone(), 2.0, t)?)?;
                println!("{tag} q=2 t={t:<4} r={r:<3} lhs {:.5}  rhs {:.5}  ratio {:.4}", rep.lhs, rep.rhs, rep.ratio.unwrap());
            }
        }
    }
    Ok(())
}
