//! Orlicz and Musielak–Orlicz functionals, their modulars, and Luxemburg
//! gauges computed by bracketing and bisection.
//!
//! Every gauge in the crate (Orlicz, Musielak–Orlicz, indicator norms used by
//! the slice norm) goes through [`gauge`], which assumes only that the
//! modular is nonincreasing in the dilation parameter.

use std::f64::consts::E;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::GridFunction;

/// Default relative tolerance of the Luxemburg bisection.
pub const TOL_LUX: f64 = 1e-10;

/// Largest number of bracket doublings before a gauge is declared unbracketable.
pub const MAX_DOUBLINGS: usize = 2100;

#[derive(Clone)]
enum Evaluator {
    Power(f64),
    LogDamped,
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

/// A Young-type function Φ together with its declared lower and upper type
/// exponents and the constants in the type inequalities.
///
/// The declared types are attributes supplied by the caller; use
/// [`validate_orlicz`] to check them empirically.
#[derive(Clone)]
pub struct OrliczFunction {
    eval: Evaluator,
    name: String,
    p_minus: f64,
    p_plus: f64,
    c_lower: f64,
    c_upper: f64,
}

impl fmt::Debug for OrliczFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OrliczFunction")
            .field("name", &self.name)
            .field("p_minus", &self.p_minus)
            .field("p_plus", &self.p_plus)
            .field("c_lower", &self.c_lower)
            .field("c_upper", &self.c_upper)
            .finish()
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be a positive finite number, got {v}")))
    }
}

impl OrliczFunction {
    /// τ ↦ τ^p, of lower and upper type p with unit constants.
    pub fn power(p: f64) -> Result<Self> {
        check_positive("power exponent", p)?;
        Ok(Self {
            eval: Evaluator::Power(p),
            name: format!("power:{p}"),
            p_minus: p,
            p_plus: p,
            c_lower: 1.0,
            c_upper: 1.0,
        })
    }

    /// τ ↦ τ / log(e + τ) with declared lower type `p_minus ∈ (0, 1)` and
    /// upper type 1.
    ///
    /// The lower-type constant is `e^{ε-1}/ε` with `ε = 1 - p_minus`, which
    /// bounds `s^{ε} log(e+τ)/log(e+sτ)` for all `s ∈ (0,1]`, `τ ≥ 0`.
    pub fn log_damped(p_minus: f64) -> Result<Self> {
        if !(p_minus > 0.0 && p_minus < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "log_damped needs a declared lower type in (0, 1), got {p_minus}"
            )));
        }
        let eps = 1.0 - p_minus;
        Ok(Self::log_damped_with_types(p_minus, 1.0, (eps - 1.0).exp() / eps, 1.0))
    }

    /// τ ↦ τ / log(e + τ) with arbitrary declared types and constants.
    /// Nothing is checked; this exists to exercise [`validate_orlicz`].
    pub fn log_damped_with_types(p_minus: f64, p_plus: f64, c_lower: f64, c_upper: f64) -> Self {
        Self {
            eval: Evaluator::LogDamped,
            name: format!("log_damped:{p_minus}"),
            p_minus,
            p_plus,
            c_lower,
            c_upper,
        }
    }

    /// A user-supplied functional with declared types.
    pub fn custom<F>(
        name: impl Into<String>,
        f: F,
        p_minus: f64,
        p_plus: f64,
        c_lower: f64,
        c_upper: f64,
    ) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        check_positive("p_minus", p_minus)?;
        check_positive("p_plus", p_plus)?;
        check_positive("c_lower", c_lower)?;
        check_positive("c_upper", c_upper)?;
        Ok(Self {
            eval: Evaluator::Custom(Arc::new(f)),
            name: name.into(),
            p_minus,
            p_plus,
            c_lower,
            c_upper,
        })
    }

    /// Parses `power:p`, `log_damped` or `log_damped:p_minus`.
    pub fn from_tag(tag: &str) -> Result<Self> {
        match tag.parse::<BuiltinFunctional>()? {
            BuiltinFunctional::Power(p) => Self::power(p),
            BuiltinFunctional::LogDamped { p_minus } => Self::log_damped(p_minus),
            BuiltinFunctional::MusielakLog => Err(Error::InvalidArgument(
                "musielak_log is a Musielak–Orlicz function, not an Orlicz function".into(),
            )),
        }
    }

    #[inline]
    pub fn eval(&self, tau: f64) -> f64 {
        match &self.eval {
            Evaluator::Power(p) => {
                if *p == 1.0 {
                    tau
                } else if *p == 2.0 {
                    tau * tau
                } else {
                    tau.powf(*p)
                }
            }
            Evaluator::LogDamped => tau / (E + tau).ln(),
            Evaluator::Custom(f) => f(tau),
        }
    }

    /// The exponent p when this is a pure power τ^p.
    pub fn power_exponent(&self) -> Option<f64> {
        match self.eval {
            Evaluator::Power(p) => Some(p),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn p_minus(&self) -> f64 {
        self.p_minus
    }
    pub fn p_plus(&self) -> f64 {
        self.p_plus
    }
    pub fn c_lower(&self) -> f64 {
        self.c_lower
    }
    pub fn c_upper(&self) -> f64 {
        self.c_upper
    }
}

/// θ(x, τ), nondecreasing in τ with θ(x, 0) = 0.
#[derive(Clone)]
pub enum MusielakFunction {
    /// θ(x, τ) = τ / (log(e + |x|) + log(e + τ)).
    Log,
    /// θ(x, τ) = Φ(τ), independent of x.
    Orlicz(OrliczFunction),
    Custom(Arc<dyn Fn([f64; 2], f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for MusielakFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MusielakFunction::Log => write!(f, "MusielakFunction::Log"),
            MusielakFunction::Orlicz(phi) => write!(f, "MusielakFunction::Orlicz({})", phi.name()),
            MusielakFunction::Custom(_) => write!(f, "MusielakFunction::Custom(..)"),
        }
    }
}

impl MusielakFunction {
    pub fn custom<F>(f: F) -> Self
    where
        F: Fn([f64; 2], f64) -> f64 + Send + Sync + 'static,
    {
        MusielakFunction::Custom(Arc::new(f))
    }

    /// Evaluates at a point `x` (unused trailing coordinates are zero).
    #[inline]
    pub fn eval(&self, x: [f64; 2], tau: f64) -> f64 {
        match self {
            MusielakFunction::Log => {
                let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
                tau / ((E + r).ln() + (E + tau).ln())
            }
            MusielakFunction::Orlicz(phi) => phi.eval(tau),
            MusielakFunction::Custom(f) => f(x, tau),
        }
    }
}

/// Built-in functional tags, addressable by name: `power:p`, `log_damped`
/// (optionally `log_damped:p_minus`, default lower type 0.9) and
/// `musielak_log`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BuiltinFunctional {
    Power(f64),
    LogDamped { p_minus: f64 },
    MusielakLog,
}

/// Lower type declared for `log_damped` when the tag omits it.
pub const DEFAULT_LOG_DAMPED_P_MINUS: f64 = 0.9;

impl FromStr for BuiltinFunctional {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse_num = |v: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidArgument(format!("bad number `{v}` in functional tag `{s}`")))
        };
        if let Some(rest) = s.strip_prefix("power:") {
            return Ok(BuiltinFunctional::Power(parse_num(rest)?));
        }
        if s == "log_damped" {
            return Ok(BuiltinFunctional::LogDamped { p_minus: DEFAULT_LOG_DAMPED_P_MINUS });
        }
        if let Some(rest) = s.strip_prefix("log_damped:") {
            return Ok(BuiltinFunctional::LogDamped { p_minus: parse_num(rest)? });
        }
        if s == "musielak_log" {
            return Ok(BuiltinFunctional::MusielakLog);
        }
        Err(Error::InvalidArgument(format!("unknown functional tag `{s}`")))
    }
}

impl fmt::Display for BuiltinFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuiltinFunctional::Power(p) => write!(f, "power:{p}"),
            BuiltinFunctional::LogDamped { p_minus } => write!(f, "log_damped:{p_minus}"),
            BuiltinFunctional::MusielakLog => write!(f, "musielak_log"),
        }
    }
}

/// Tolerances for the gauge solver.
#[derive(Debug, Clone, Copy)]
pub struct GaugeOptions {
    pub tol: f64,
    pub max_doublings: usize,
}

impl Default for GaugeOptions {
    fn default() -> Self {
        Self { tol: TOL_LUX, max_doublings: MAX_DOUBLINGS }
    }
}

/// Smallest λ > 0 (to relative tolerance) with `modular(λ) ≤ 1`, for a
/// modular nonincreasing in λ. The returned λ always satisfies the
/// constraint. `start` seeds the bracket search.
pub fn gauge<M>(modular: M, start: f64, opts: GaugeOptions) -> Result<f64>
where
    M: Fn(f64) -> f64,
{
    if !(start.is_finite() && start > 0.0) {
        return Err(Error::InvalidArgument(format!("gauge start must be positive, got {start}")));
    }
    let mut hi = start;
    let mut steps = 0;
    while modular(hi) > 1.0 {
        hi *= 2.0;
        steps += 1;
        if steps > opts.max_doublings || !hi.is_finite() {
            return Err(Error::NumericFailure(format!(
                "could not bracket the gauge from above after {steps} doublings"
            )));
        }
    }
    let mut lo = hi * 0.5;
    steps = 0;
    while modular(lo) <= 1.0 {
        hi = lo;
        lo *= 0.5;
        steps += 1;
        if steps > opts.max_doublings || lo == 0.0 {
            return Err(Error::NumericFailure(format!(
                "could not bracket the gauge from below after {steps} halvings"
            )));
        }
    }
    // modular(lo) > 1 >= modular(hi)
    while hi - lo > opts.tol * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if modular(mid) <= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda.is_finite() && lambda > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("λ must be positive and finite, got {lambda}")))
    }
}

fn check_finite(f: &GridFunction) -> Result<()> {
    if f.values().iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidData("grid function has a non-finite sample".into()))
    }
}

/// Midpoint quadrature of ∫ Φ(|f|/λ).
pub fn modular(phi: &OrliczFunction, f: &GridFunction, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    check_finite(f)?;
    Ok(modular_of_values(phi, f.values(), f.cell_measure(), lambda))
}

/// `measure · Σ Φ(|v|/λ)` over a flat slice of samples.
#[inline]
pub fn modular_of_values(phi: &OrliczFunction, values: &[f64], measure: f64, lambda: f64) -> f64 {
    let inv = 1.0 / lambda;
    let mut acc = 0.0;
    for v in values {
        if *v != 0.0 {
            acc += phi.eval(v.abs() * inv);
        }
    }
    acc * measure
}

/// Luxemburg gauge of samples carried by several slices (each sample stands
/// for a cell of the given measure). Zero data gives zero.
pub fn luxemburg_of_slices(
    phi: &OrliczFunction,
    slices: &[&[f64]],
    measure: f64,
    opts: GaugeOptions,
) -> Result<f64> {
    let mut max = 0.0f64;
    for s in slices {
        for v in s.iter() {
            max = max.max(v.abs());
        }
    }
    if max == 0.0 {
        return Ok(0.0);
    }
    gauge(
        |lambda| slices.iter().map(|s| modular_of_values(phi, s, measure, lambda)).sum(),
        max,
        opts,
    )
}

/// ‖f‖ in L^Φ: inf{λ > 0 : ∫ Φ(|f|/λ) ≤ 1}.
pub fn luxemburg_norm(phi: &OrliczFunction, f: &GridFunction) -> Result<f64> {
    luxemburg_norm_with(phi, f, GaugeOptions::default())
}

pub fn luxemburg_norm_with(phi: &OrliczFunction, f: &GridFunction, opts: GaugeOptions) -> Result<f64> {
    check_finite(f)?;
    luxemburg_of_slices(phi, &[f.values()], f.cell_measure(), opts)
}

/// ‖1_E‖ in L^Φ for a set of the given measure: the λ with |E|·Φ(1/λ) = 1.
pub fn indicator_norm(phi: &OrliczFunction, measure: f64) -> Result<f64> {
    if measure <= 0.0 {
        return Ok(0.0);
    }
    if let Some(p) = phi.power_exponent() {
        return Ok(measure.powf(1.0 / p));
    }
    gauge(|lambda| measure * phi.eval(1.0 / lambda), 1.0, GaugeOptions::default())
}

/// ‖f‖ in L^θ: inf{λ > 0 : ∫ θ(x, |f(x)|/λ) dx ≤ 1}.
pub fn musielak_norm(theta: &MusielakFunction, f: &GridFunction) -> Result<f64> {
    check_finite(f)?;
    let max = f.sup_norm();
    if max == 0.0 {
        return Ok(0.0);
    }
    let points: Vec<([f64; 2], f64)> = f
        .iter_cells()
        .filter(|(_, v)| *v != 0.0)
        .map(|(x, v)| (x, v.abs()))
        .collect();
    let measure = f.cell_measure();
    gauge(
        |lambda| {
            let inv = 1.0 / lambda;
            points.iter().map(|(x, v)| theta.eval(*x, v * inv)).sum::<f64>() * measure
        },
        max,
        GaugeOptions::default(),
    )
}

/// Midpoint quadrature of ∫ θ(x, |f(x)|/λ) dx.
pub fn musielak_modular(theta: &MusielakFunction, f: &GridFunction, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    check_finite(f)?;
    let inv = 1.0 / lambda;
    Ok(f
        .iter_cells()
        .filter(|(_, v)| *v != 0.0)
        .map(|(x, v)| theta.eval(x, v.abs() * inv))
        .sum::<f64>()
        * f.cell_measure())
}

/// Log-spaced sweep used by [`validate_orlicz`]: `s = 2^k` and `τ = 2^k` for
/// integer exponents in the given ranges, `per_octave` points per factor 2.
#[derive(Debug, Clone, Copy)]
pub struct SampleSpec {
    pub s_min_exp: i32,
    pub s_max_exp: i32,
    pub tau_min_exp: i32,
    pub tau_max_exp: i32,
    pub per_octave: usize,
    /// Relative slack allowed in each inequality before it counts as violated.
    pub rel_tol: f64,
}

impl Default for SampleSpec {
    fn default() -> Self {
        Self { s_min_exp: -20, s_max_exp: 20, tau_min_exp: -20, tau_max_exp: 20, per_octave: 1, rel_tol: 1e-12 }
    }
}

impl SampleSpec {
    fn ladder(&self, lo: i32, hi: i32) -> Vec<f64> {
        let per = self.per_octave.max(1);
        let steps = (hi - lo) as usize * per;
        (0..=steps).map(|i| 2f64.powf(lo as f64 + i as f64 / per as f64)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    NonzeroAtOrigin,
    NotPositive,
    NotMonotone,
    LowerType,
    UpperType,
}

/// A violated inequality with its witness `(s, τ)` and both sides.
#[derive(Debug, Clone, Copy)]
pub struct Violation {
    pub kind: ViolationKind,
    pub s: f64,
    pub tau: f64,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, Default)]
pub struct OrliczValidation {
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl OrliczValidation {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks Φ(0) = 0, positivity, monotonicity and both declared type
/// inequalities on the sample sweep. Violations are reported, not raised.
pub fn validate_orlicz(phi: &OrliczFunction, spec: &SampleSpec) -> OrliczValidation {
    let mut report = OrliczValidation::default();
    let taus = spec.ladder(spec.tau_min_exp, spec.tau_max_exp);
    let slow: Vec<f64> = spec.ladder(spec.s_min_exp.min(0), 0);
    let shigh: Vec<f64> = spec.ladder(0, spec.s_max_exp.max(0));

    let z = phi.eval(0.0);
    report.checked += 1;
    if z != 0.0 {
        report.violations.push(Violation { kind: ViolationKind::NonzeroAtOrigin, s: 0.0, tau: 0.0, lhs: z, rhs: 0.0 });
    }
    let mut prev = 0.0;
    for &tau in &taus {
        let v = phi.eval(tau);
        report.checked += 2;
        if !(v > 0.0) {
            report.violations.push(Violation { kind: ViolationKind::NotPositive, s: 1.0, tau, lhs: v, rhs: 0.0 });
        }
        if v < prev {
            report.violations.push(Violation { kind: ViolationKind::NotMonotone, s: 1.0, tau, lhs: v, rhs: prev });
        }
        prev = v;
    }
    for &tau in &taus {
        let base = phi.eval(tau);
        for &s in &slow {
            let lhs = phi.eval(s * tau);
            let rhs = phi.c_lower() * s.powf(phi.p_minus()) * base;
            report.checked += 1;
            if lhs > rhs * (1.0 + spec.rel_tol) {
                report.violations.push(Violation { kind: ViolationKind::LowerType, s, tau, lhs, rhs });
            }
        }
        for &s in &shigh {
            let lhs = phi.eval(s * tau);
            let rhs = phi.c_upper() * s.powf(phi.p_plus()) * base;
            report.checked += 1;
            if lhs > rhs * (1.0 + spec.rel_tol) {
                report.violations.push(Violation { kind: ViolationKind::UpperType, s, tau, lhs, rhs });
            }
        }
    }
    report
}
