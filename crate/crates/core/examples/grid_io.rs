//! Writes a sampled function and a decomposition to disk and reads them
//! back.

use slice_hardy::atomic::io::{read_decomposition, write_decomposition};
use slice_hardy::atomic::{cz_decompose, CzParams};
use slice_hardy::grid::build_dictionary;
use slice_hardy::grid::io::{read_grid, to_text, write_grid};
use slice_hardy::maximal::{MaximalParams, EPS_CUT};
use slice_hardy::{GridFunction, GridSpec, OrliczFunction, SliceParams};

fn main() -> slice_hardy::Result<()> {
    let dir = std::env::temp_dir().join("slice-hardy-grid-io");
    std::fs::create_dir_all(&dir)?;
    let h = 1.0 / 16.0;
    let f = GridFunction::from_fn(GridSpec::new_1d(-1.0, h, 32)?, |x| (1.0 - x[0] * x[0]).max(0.0) * 0.1);
    print!("{}", to_text(&f).lines().take(5).collect::<Vec<_>>().join("\n"));
    println!();
    write_grid(dir.join("f.grid"), &f)?;
    assert_eq!(read_grid(dir.join("f.grid"))?, f);

    let slice = SliceParams::new(OrliczFunction::log_damped(0.9)?, 1.0, 1.0)?;
    let maximal = MaximalParams::new(1.0, 6.0, EPS_CUT, build_dictionary(1, 7, 2, h, 2)?)?;
    let dec = cz_decompose(&f, &CzParams::new(slice, maximal))?;
    write_decomposition(dir.join("dec"), &dec)?;
    let back = read_decomposition(dir.join("dec"))?;
    println!("{} entries written and read back identically: {}", dec.entries.len(), back == dec);
    println!("files under {}", dir.display());
    Ok(())
}
