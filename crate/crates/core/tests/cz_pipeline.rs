use slice_hardy::atomic::{cz_decompose, reconstruct, validate_atom, CzParams};
use slice_hardy::campanato::{campanato_sweep, dual_pairing, CampanatoParams, CubeSweep};
use slice_hardy::grid::build_dictionary;
use slice_hardy::maximal::{MaximalParams, EPS_CUT};
use slice_hardy::scenario::{generate_family, Generator};
use slice_hardy::slice::CubeNormCache;
use slice_hardy::{GridFunction, GridSpec, OrliczFunction, SliceParams};

fn params(dim: usize, h: f64, depth: usize, d: usize) -> CzParams {
    let slice = SliceParams::new(OrliczFunction::log_damped(0.9).unwrap(), 1.0, 1.0).unwrap();
    let maximal = MaximalParams::new(1.0, 6.0, EPS_CUT, build_dictionary(dim, 7, depth, h, 2).unwrap()).unwrap();
    let mut p = CzParams::new(slice, maximal);
    p.d = d;
    p
}

#[test]
fn small_atoms_annihilate_low_degree_polynomials() {
    let h = 1.0 / 32.0;
    let spec = GridSpec::covering(1, -4.0, 4.0, h).unwrap();
    let p = params(1, h, 3, 1);
    for f in generate_family(&Generator::Mixed, &spec, 6, 77).unwrap() {
        let dec = cz_decompose(&f, &p).unwrap();
        let one = GridFunction::constant(dec.spec, 1.0);
        let x = GridFunction::from_fn(dec.spec, |y| y[0] - 0.3);
        for e in dec.entries.iter().filter(|e| e.atom.needs_moments()) {
            let scale = e.atom.values.sup_norm() * e.atom.cube_measure();
            assert!(dual_pairing(&e.atom.values, &one).unwrap().abs() <= 1e-9 * scale);
            assert!(dual_pairing(&e.atom.values, &x).unwrap().abs() <= 1e-9 * scale * (1.0 + e.atom.cube.max_abs()));
        }
    }
}

#[test]
fn pairing_with_constant_field_is_bounded_by_the_large_branch() {
    let h = 1.0 / 32.0;
    let spec = GridSpec::covering(1, -4.0, 4.0, h).unwrap();
    let p = params(1, h, 3, 0);
    let f = generate_family(&Generator::Bumps, &spec, 1, 3).unwrap().remove(0);
    let dec = cz_decompose(&f, &p).unwrap();
    let g = GridFunction::constant(dec.spec, 1.0);
    let cp = CampanatoParams::new(p.slice.clone(), 1.0, 0, CubeSweep::dyadic(-4, 2)).unwrap();
    let cubes: Vec<_> = dec.entries.iter().map(|e| e.atom.cube).collect();
    let sweep = campanato_sweep(&g, &cp, &cubes).unwrap();
    assert_eq!(sweep.small, 0.0);
    let norms = CubeNormCache::new(p.slice.clone(), 1, h);
    for e in &dec.entries {
        let v = dual_pairing(&e.atom.values, &g).unwrap().abs();
        // oracle: |∫a| ≤ ‖a‖∞ |Q| ≤ |Q| / ‖1_Q‖ for the lattice measure of Q
        let q = e.atom.cube;
        let lattice = q.lattice_cell_count(&dec.spec) as f64 * dec.spec.cell_measure();
        let bound = lattice / norms.cube(&q, &dec.spec).unwrap();
        assert!(v <= bound * (1.0 + 1e-12), "{v} > {bound}");
        assert!(v <= sweep.norm() * (1.0 + 1e-12));
    }
}

#[test]
fn two_dimensional_family_round_trip() {
    let h = 1.0 / 16.0;
    let spec = GridSpec::new_2d([-2.0, -2.0], h, [64, 64]).unwrap();
    let p = params(2, h, 2, 1);
    let norms = CubeNormCache::new(p.slice.clone(), 2, h);
    for f in generate_family(&Generator::Mixed, &spec, 3, 11).unwrap() {
        let dec = cz_decompose(&f, &p).unwrap();
        let mut diff = reconstruct(&dec).unwrap();
        diff.add_scaled(&f.embed(&dec.spec).unwrap(), -1.0).unwrap();
        assert!(diff.sup_norm() <= 1e-6 * f.sup_norm());
        for e in &dec.entries {
            assert!(validate_atom(&e.atom, &norms, p.tol).unwrap().valid());
        }
        assert!(dec.levels.iter().all(|l| l.whitney_ok));
    }
}
