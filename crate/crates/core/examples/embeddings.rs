//! The amalgam norm against the Musielak–Orlicz norm with weight
//! log(e + |x|), on indicators moved away from the origin.

use slice_hardy::embeddings::{hardy_embedding_check, star_to_muslog_check};
use slice_hardy::grid::build_dictionary;
use slice_hardy::maximal::{MaximalParams, EPS_CUT};
use slice_hardy::scenario::{generate_family, Generator};
use slice_hardy::{GridFunction, GridSpec, OrliczFunction};

fn main() -> slice_hardy::Result<()> {
    let h = 1.0 / 64.0;
    let phi = OrliczFunction::log_damped(0.9)?;
    let fam: Vec<GridFunction> = [0.0, 4.0, 16.0, 64.0, 256.0]
        .iter()
        .map(|&r| {
            let spec = GridSpec::covering(1, r - 1.0, r + 2.0, h)?;
            Ok(GridFunction::from_fn(spec, |x| if (r..r + 1.0).contains(&x[0]) { 1.0 } else { 0.0 }))
        })
        .collect::<slice_hardy::Result<_>>()?;
    let rep = star_to_muslog_check(&fam, &phi)?;
    for r in &rep.rows {
        println!("member {}: amalgam {:.5}  musielak {:.5}  ratio {:.5}  modular {:.5}", r.index, r.source, r.target, r.ratio, r.modular.unwrap());
    }
    println!("C = {:.5}  C' = {:.5}", rep.constant, rep.modular_bound.unwrap());

    let spec = GridSpec::covering(1, -8.0, 8.0, 1.0 / 32.0)?;
    let bumps = generate_family(&Generator::Translates(vec![0.0, 8.0, 32.0]), &spec, 0, 0)?;
    let params = MaximalParams::new(1.0, 6.0, EPS_CUT, build_dictionary(1, 7, 3, 1.0 / 32.0, 2)?)?;
    let rep = hardy_embedding_check(&bumps, &phi, &params)?;
    for r in &rep.rows {
        println!("bump {}: hardy amalgam {:.5e}  hardy log {:.5e}  ratio {:.5}", r.index, r.source, r.target, r.ratio);
    }
    Ok(())
}
