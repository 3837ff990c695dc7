//! Whitney cover and partition of unity of an annulus in the plane.

use slice_hardy::atomic::{overlap_max, partition_of_unity, whitney_decompose};
use slice_hardy::GridSpec;

fn main() -> slice_hardy::Result<()> {
    let spec = GridSpec::new_2d([-2.0, -2.0], 1.0 / 32.0, [128, 128])?;
    let mask: Vec<bool> = (0..spec.len())
        .map(|k| {
            let x = spec.center_of(k);
            let r = x[0].hypot(x[1]);
            (0.4..1.5).contains(&r)
        })
        .collect();
    let cubes = whitney_decompose(&spec, &mask)?;
    let mut by_side = std::collections::BTreeMap::new();
    for q in &cubes {
        *by_side.entry((q.cube.side() / spec.h()) as usize).or_insert(0usize) += 1;
    }
    for (cells, count) in by_side {
        println!("side {cells:>3} cells: {count} cubes");
    }
    let boundary = cubes.iter().filter(|q| q.boundary).count();
    let bad = cubes.iter().filter(|q| !q.satisfies_distance_bounds()).count();
    println!("{} cubes, {boundary} boundary cells, {bad} outside the distance bounds", cubes.len());
    let pu = partition_of_unity(&spec, &cubes, &mask)?;
    println!("overlap {} (bound {}), max |Σ η − 1| = {:.2e}", pu.overlap, overlap_max(2), pu.sum_error);
    Ok(())
}
