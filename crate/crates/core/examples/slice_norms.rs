//! Orlicz-slice norms across the slice radius t, the amalgam norm, and the
//! ball-indicator comparison with |B| / log(e + 1/|B|).

use slice_hardy::slice::{ball_indicator_ratio, reverse_superadditivity_check, slice_norm, star_norm};
use slice_hardy::{GridFunction, GridSpec, OrliczFunction, SliceParams};

fn main() -> slice_hardy::Result<()> {
    let spec = GridSpec::covering(1, -8.0, 8.0, 1.0 / 64.0)?;
    let f = GridFunction::from_fn(spec, |x| if x[0].abs() < 1.0 { 1.0 - x[0].abs() } else { 0.0 });
    let phi = OrliczFunction::log_damped(0.9)?;
    for t in [0.25, 0.5, 1.0, 2.0, 4.0] {
        let p = SliceParams::new(phi.clone(), 1.0, t)?;
        let l2 = SliceParams::new(OrliczFunction::power(2.0)?, 2.0, t)?;
        println!("t = {t:<5} slice(log_damped, q=1) = {:.6}  slice(power 2, q=2) = {:.6}", slice_norm(&f, &p)?, slice_norm(&f, &l2)?);
    }
    println!("L^2 norm {:.6}  amalgam norm {:.6}", f.lp_norm(2.0), star_norm(&f, &phi)?);

    let radii: Vec<f64> = (-6..=6).map(|k| 2f64.powi(k)).collect();
    let rep = ball_indicator_ratio(&phi, &radii, 1, 1.0 / 256.0)?;
    for r in &rep.rows {
        println!("r = {:<9} star/model {:.4}  orlicz/model {:.4}", r.radius, r.star_ratio, r.orlicz_ratio);
    }
    println!("band [{:.4}, {:.4}], c2/c1 = {:.3}", rep.min, rep.max, rep.spread());

    let parts: Vec<GridFunction> = (0..4)
        .map(|k| GridFunction::from_fn(spec, move |x| if (x[0] - 3.0 * k as f64 + 4.0).abs() < 0.5 { 1.0 } else { 0.0 }))
        .collect();
    let sup = reverse_superadditivity_check(&parts, &SliceParams::new(phi, 1.0, 1.0)?)?;
    println!("‖Σ f_j‖ / Σ ‖f_j‖ = {:.4}", sup.ratio.unwrap());
    Ok(())
}
