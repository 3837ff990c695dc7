//! On-disk form of a [`Decomposition`]: a directory holding a manifest
//! `decomposition.txt`, one grid file per atom under `atoms/` and the
//! remainder in `residual.grid`.
//!
//! ```text
//! decomposition 1
//! grid 1
//! origin -5
//! h 0.03125
//! extents 320
//! params 0 inf 0.81 4.5
//! levels -9 -3 0
//! level -9 212 14 2 10 3 2.2e-16 true
//! entry 0 -9 3 0.0123 false false true -0.75 0.5 atoms/00000.grid
//! ```
//!
//! `params` is `d r s C0`. `entry` is `index j k λ residual promoted
//! saturated center.. side file`. Reals are written in shortest round-trip
//! form, so reading gives back identical values.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::atom::Atom;
use super::decompose::{Decomposition, Entry, LevelSummary};
use crate::error::{Error, Result};
use crate::grid::io::{read_grid, write_grid};
use crate::grid::{Cube, GridFunction, GridSpec};

const MANIFEST: &str = "decomposition.txt";

pub fn write_decomposition(dir: impl AsRef<Path>, dec: &Decomposition) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir.join("atoms"))?;
    let spec = &dec.spec;
    let n = spec.dim();
    let mut m = String::new();
    writeln!(m, "decomposition 1").unwrap();
    writeln!(m, "grid {n}").unwrap();
    writeln!(m, "origin {}", join(spec.origin()[..n].iter().map(|x| format!("{x:?}")))).unwrap();
    writeln!(m, "h {:?}", spec.h()).unwrap();
    writeln!(m, "extents {}", join(spec.extents()[..n].iter().map(|x| x.to_string()))).unwrap();
    writeln!(m, "params {} {:?} {:?} {:?}", dec.d, dec.r, dec.s, dec.c0).unwrap();
    writeln!(m, "levels {} {} {}", dec.j_lo, dec.j_hi, dec.absorbed).unwrap();
    for l in &dec.levels {
        writeln!(
            m,
            "level {} {} {} {} {} {} {:?} {}",
            l.j, l.cells, l.cubes, l.boundary_cells, l.small_cubes, l.overlap, l.partition_error, l.whitney_ok
        )
        .unwrap();
    }
    for (idx, e) in dec.entries.iter().enumerate() {
        let file = format!("atoms/{idx:05}.grid");
        write_grid(dir.join(&file), &e.atom.values)?;
        let c = e.atom.cube.center();
        writeln!(
            m,
            "entry {idx} {} {} {:?} {} {} {} {} {:?} {file}",
            e.j,
            e.k,
            e.lambda,
            e.residual,
            e.promoted,
            e.saturated,
            join(c[..n].iter().map(|x| format!("{x:?}"))),
            e.atom.cube.side()
        )
        .unwrap();
    }
    write_grid(dir.join("residual.grid"), &dec.residual)?;
    fs::write(dir.join(MANIFEST), m)?;
    Ok(())
}

fn join(it: impl Iterator<Item = String>) -> String {
    it.collect::<Vec<_>>().join(" ")
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidData(format!("decomposition manifest: {}", msg.into()))
}

fn num<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse().map_err(|_| bad(format!("cannot parse '{s}'")))
}

struct Lines<'a> {
    it: std::iter::Peekable<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn expect(&mut self, key: &str) -> Result<Vec<&'a str>> {
        let line = self.it.next().ok_or_else(|| bad(format!("missing '{key}' line")))?;
        let mut w = line.split_whitespace();
        if w.next() != Some(key) {
            return Err(bad(format!("expected '{key}', found '{line}'")));
        }
        Ok(w.collect())
    }
    fn peek_key(&mut self) -> Option<&'a str> {
        self.it.peek().and_then(|l| l.split_whitespace().next())
    }
}

pub fn read_decomposition(dir: impl AsRef<Path>) -> Result<Decomposition> {
    let dir = dir.as_ref();
    let text = fs::read_to_string(dir.join(MANIFEST))?;
    let mut ls = Lines { it: text.lines().peekable() };
    if ls.expect("decomposition")? != ["1"] {
        return Err(bad("unsupported version"));
    }
    let n: usize = num(ls.expect("grid")?.first().ok_or_else(|| bad("grid dimension"))?)?;
    let origin: Vec<f64> = ls.expect("origin")?.iter().map(|s| num(s)).collect::<Result<_>>()?;
    let h: f64 = num(ls.expect("h")?.first().ok_or_else(|| bad("spacing"))?)?;
    let extents: Vec<usize> = ls.expect("extents")?.iter().map(|s| num(s)).collect::<Result<_>>()?;
    let spec = GridSpec::new(n, &origin, h, &extents)?;
    let p = ls.expect("params")?;
    if p.len() != 4 {
        return Err(bad("params needs d r s C0"));
    }
    let (d, r, s, c0): (usize, f64, f64, f64) = (num(p[0])?, num(p[1])?, num(p[2])?, num(p[3])?);
    let lv = ls.expect("levels")?;
    if lv.len() != 3 {
        return Err(bad("levels needs j_lo j_hi absorbed"));
    }
    let (j_lo, j_hi, absorbed): (i32, i32, usize) = (num(lv[0])?, num(lv[1])?, num(lv[2])?);
    let mut levels = Vec::new();
    while ls.peek_key() == Some("level") {
        let w = ls.expect("level")?;
        if w.len() != 8 {
            return Err(bad("level line needs 8 fields"));
        }
        levels.push(LevelSummary {
            j: num(w[0])?,
            cells: num(w[1])?,
            cubes: num(w[2])?,
            boundary_cells: num(w[3])?,
            small_cubes: num(w[4])?,
            overlap: num(w[5])?,
            partition_error: num(w[6])?,
            whitney_ok: num(w[7])?,
        });
    }
    let mut entries = Vec::new();
    while ls.peek_key() == Some("entry") {
        let w = ls.expect("entry")?;
        if w.len() != 9 + n {
            return Err(bad(format!("entry line needs {} fields", 9 + n)));
        }
        let center: Vec<f64> = w[7..7 + n].iter().map(|s| num(s)).collect::<Result<_>>()?;
        let side: f64 = num(w[7 + n])?;
        let values = read_grid(dir.join(w[8 + n]))?;
        if !values.spec().is_compatible(&spec) {
            return Err(bad("atom grid is not compatible with the decomposition grid"));
        }
        entries.push(Entry {
            j: num(w[1])?,
            k: num(w[2])?,
            lambda: num(w[3])?,
            residual: num(w[4])?,
            promoted: num(w[5])?,
            saturated: num(w[6])?,
            atom: Atom::new(Cube::new(&center, side)?, values, r, d)?,
        });
    }
    if let Some(line) = ls.it.find(|l| !l.trim().is_empty()) {
        return Err(bad(format!("unexpected line '{line}'")));
    }
    let residual: GridFunction = read_grid(dir.join("residual.grid"))?;
    if residual.spec() != &spec {
        return Err(bad("residual grid differs from the decomposition grid"));
    }
    Ok(Decomposition { spec, d, r, s, c0, j_lo, j_hi, entries, residual, levels, absorbed })
}
