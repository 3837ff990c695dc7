//! The five local maximal functions of one signal, the pointwise chain and
//! the Hardy quasi-norms in slice, amalgam and Musielak outer norms.

use slice_hardy::grid::build_dictionary;
use slice_hardy::maximal::{hardy_quasinorm, MaximalParams, MaximalSet, SpaceTag, EPS_CUT, MAXIMAL_NAMES};
use slice_hardy::{GridFunction, GridSpec, OrliczFunction, SliceParams};

fn main() -> slice_hardy::Result<()> {
    let h = 1.0 / 64.0;
    let spec = GridSpec::covering(1, -4.0, 4.0, h)?;
    let f = GridFunction::from_fn(spec, |x| if x[0].abs() < 0.5 { (9.0 * x[0]).sin() } else { 0.0 });
    let params = MaximalParams::new(1.0, 6.0, EPS_CUT, build_dictionary(1, 7, 4, h, 4)?)?;
    let set = MaximalSet::compute(&f, &params)?;
    for (name, m) in MAXIMAL_NAMES.iter().zip(set.as_array()) {
        println!("{name:<14} sup {:.6e}", m.sup_norm());
    }
    let chain = set.chain_violation(&params);
    println!("chain radial <= nontangential <= (1+a)^b peetre: worst {:.2e} over {} points", chain.worst, chain.points);

    let phi = OrliczFunction::log_damped(0.9)?;
    for tag in [SpaceTag::Slice(SliceParams::new(phi.clone(), 1.0, 1.0)?), SpaceTag::Star(phi), SpaceTag::MusLog] {
        println!("hardy quasi-norm in {tag}: {:.6e}", hardy_quasinorm(&f, &tag, &params)?);
    }
    Ok(())
}
