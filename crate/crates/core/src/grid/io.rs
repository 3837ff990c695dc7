//! Plain-text grid format.
//!
//! ```text
//! grid 1
//! origin -8
//! h 0.015625
//! extents 1024
//! 0 0 0.5 ...
//! ```
//!
//! Samples follow the header in row-major order, one axis-0 row per line,
//! written with the shortest representation that parses back to the same
//! `f64`.

use std::fmt::Write as _;
use std::path::Path;

use super::{GridFunction, GridSpec};
use crate::error::{Error, Result};

pub fn to_text(f: &GridFunction) -> String {
    let spec = f.spec();
    let n = spec.dim();
    let mut out = String::new();
    let join = |v: &[String]| v.join(" ");
    let origin: Vec<String> = spec.origin()[..n].iter().map(|x| format!("{x:?}")).collect();
    let extents: Vec<String> = spec.extents()[..n].iter().map(|x| x.to_string()).collect();
    writeln!(out, "grid {n}").unwrap();
    writeln!(out, "origin {}", join(&origin)).unwrap();
    writeln!(out, "h {:?}", spec.h()).unwrap();
    writeln!(out, "extents {}", join(&extents)).unwrap();
    let row = spec.extents()[1];
    for chunk in f.values().chunks(row.max(1)) {
        let line: Vec<String> = chunk.iter().map(|v| format!("{v:?}")).collect();
        writeln!(out, "{}", line.join(" ")).unwrap();
    }
    out
}

fn header<'a>(lines: &mut impl Iterator<Item = &'a str>, key: &str) -> Result<Vec<&'a str>> {
    let line = lines
        .next()
        .ok_or_else(|| Error::InvalidData(format!("missing `{key}` header line")))?;
    let mut parts = line.split_whitespace();
    if parts.next() != Some(key) {
        return Err(Error::InvalidData(format!("expected `{key}` header, got `{line}`")));
    }
    Ok(parts.collect())
}

fn num<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse().map_err(|_| Error::InvalidData(format!("cannot parse `{s}`")))
}

pub fn from_text(text: &str) -> Result<GridFunction> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let dim_field = header(&mut lines, "grid")?;
    let dim: usize = num(dim_field.first().copied().unwrap_or(""))?;
    let origin: Vec<f64> = header(&mut lines, "origin")?.into_iter().map(num).collect::<Result<_>>()?;
    let h: f64 = num(header(&mut lines, "h")?.first().copied().unwrap_or(""))?;
    let extents: Vec<usize> = header(&mut lines, "extents")?.into_iter().map(num).collect::<Result<_>>()?;
    let spec = GridSpec::new(dim, &origin, h, &extents).map_err(|e| Error::InvalidData(e.to_string()))?;
    let values: Vec<f64> = lines.flat_map(|l| l.split_whitespace()).map(num).collect::<Result<_>>()?;
    GridFunction::new(spec, values)
}

pub fn write_grid(path: impl AsRef<Path>, f: &GridFunction) -> Result<()> {
    std::fs::write(path, to_text(f))?;
    Ok(())
}

pub fn read_grid(path: impl AsRef<Path>) -> Result<GridFunction> {
    from_text(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let spec = GridSpec::new_2d([-1.0 / 3.0, 0.1], 0.1, [3, 4]).unwrap();
        let f = GridFunction::from_fn(spec, |x| (x[0] * 7.0).sin() / 3.0 + x[1].exp() * 1e-300);
        let mut f = f;
        f.values_mut()[0] = -0.0;
        f.values_mut()[1] = f64::MIN_POSITIVE / 4.0;
        let g = from_text(&to_text(&f)).unwrap();
        assert_eq!(g.spec(), f.spec());
        for (a, b) in f.values().iter().zip(g.values()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn rejects_malformed_text() {
        assert!(from_text("").is_err());
        assert!(from_text("grid 1\norigin 0\nh 1\nextents 2\n1\n").is_err());
        assert!(from_text("grid 1\norigin 0\nh 1\nextents 2\n1 x\n").is_err());
        assert!(from_text("grid 1\norigin 0\nh -1\nextents 2\n1 2\n").is_err());
        assert!(from_text("grid 1\norigin 0\nh 1\nextents 2\n1 NaN\n").is_err());
    }
}
