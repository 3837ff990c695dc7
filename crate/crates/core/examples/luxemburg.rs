//! Luxemburg norms of a sampled function for several Orlicz functions,
//! plus a type-constant validation report.

use slice_hardy::orlicz::{indicator_norm, luxemburg_norm, validate_orlicz, SampleSpec};
use slice_hardy::{GridFunction, GridSpec, OrliczFunction};

fn main() -> slice_hardy::Result<()> {
    let spec = GridSpec::covering(1, -4.0, 4.0, 1.0 / 128.0)?;
    let f = GridFunction::from_fn(spec, |x| (-x[0] * x[0]).exp() * (3.0 * x[0]).cos());
    // the lower type in a log_damped tag is declared, not part of the formula
    for tag in ["power:1", "power:2", "power:4", "log_damped:0.9"] {
        let phi = OrliczFunction::from_tag(tag)?;
        let n = luxemburg_norm(&phi, &f)?;
        let extra = phi.power_exponent().map(|p| format!("  L^p quadrature {:.12}", f.lp_norm(p))).unwrap_or_default();
        println!("{tag:<16} ‖f‖ = {n:.12}{extra}");
    }
    let phi = OrliczFunction::log_damped(0.9)?;
    for m in [0.01, 1.0, 100.0] {
        println!("‖1_E‖ for |E| = {m:<6} {:.6}", indicator_norm(&phi, m)?);
    }
    let report = validate_orlicz(&phi, &SampleSpec::default());
    println!("type checks on log_damped:0.9: {} samples, {} violations", report.checked, report.violations.len());
    let bad = OrliczFunction::log_damped_with_types(0.9, 0.8, 1.0, 1.0);
    let report = validate_orlicz(&bad, &SampleSpec::default());
    println!("with a wrong upper type 0.8: {} violations", report.violations.len());
    Ok(())
}
