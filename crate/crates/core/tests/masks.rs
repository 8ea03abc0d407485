use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use vecbeam::analysis::phase_winding;
use vecbeam::laguerre::{lg_mode, LgModeSpec};
use vecbeam::mask::{combine, kinoform_lens, lg_phase_mask, quantize};
use vecbeam::pipeline::scalar_overlap_fraction;
use vecbeam::{Grid, Mask};

const W0: f64 = 1e-3;
const LAMBDA: f64 = 1.56e-6;

/// |⟨LG_pl, G·e^{i·mask}⟩|², independent high-precision quadrature.
// The LG01 entry is exactly π/4.
#[allow(clippy::approx_constant)]
const GOLDEN: [[f64; 4]; 2] = [
    [1.0, 0.785398163397448, 0.5, 0.294524311274043],
    [0.541341132946451, 0.477234098988226, 0.373936097503986, 0.269481812905299],
];

fn circ_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

#[test]
fn phase_only_overlaps_match_oracle() {
    let grid = Grid::square(1024, 8.0 * W0).unwrap();
    let gauss = lg_mode(&LgModeSpec::new(0, 0, W0, LAMBDA).unwrap(), &grid).field;
    for p in 0..=1 {
        for l in 0..=3 {
            let mask = lg_phase_mask(p, l, W0, &grid).unwrap();
            let illuminated = gauss.zip_with(&mask.to_field(), |a, b| a * b).unwrap();
            let target = lg_mode(&LgModeSpec::new(p, l, W0, LAMBDA).unwrap(), &grid).field;
            let ov = scalar_overlap_fraction(&target, &illuminated).unwrap();
            let golden = GOLDEN[p as usize][l as usize];
            // The p = 1 sign ring is a pixel-sampled step.
            let tol = if p == 0 { 1e-6 } else { 2e-3 };
            assert!((ov - golden).abs() < tol, "LG{p}{l}: {ov} vs {golden}");
            // Opposite charge gives the same overlap with the opposite mode.
            if l > 0 {
                let m2 = lg_phase_mask(p, -l, W0, &grid).unwrap();
                let t2 = lg_mode(&LgModeSpec::new(p, -l, W0, LAMBDA).unwrap(), &grid).field;
                let i2 = gauss.zip_with(&m2.to_field(), |a, b| a * b).unwrap();
                let ov2 = scalar_overlap_fraction(&t2, &i2).unwrap();
                assert!((ov2 - ov).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn vortex_masks_wind_by_charge() {
    let grid = Grid::square(256, 8.0 * W0).unwrap();
    for l in -3..=3 {
        let m = lg_phase_mask(0, l, W0, &grid).unwrap();
        for r in [0.3, 1.0, 2.5] {
            let w = phase_winding(&m.to_field(), r * W0, 720).unwrap();
            assert!((w - TAU * l as f64).abs() < 1e-9, "l={l} r={r}: {w}");
        }
    }
}

#[test]
fn radial_index_adds_pi_ring() {
    let grid = Grid::square(256, 8.0 * W0).unwrap();
    let m0 = lg_phase_mask(0, 3, W0, &grid).unwrap();
    let m1 = lg_phase_mask(1, 3, W0, &grid).unwrap();
    // L_1^3(2r²/w0²) changes sign at r = √2·w0.
    let node = 2f64.sqrt() * W0;
    for (k, (&a, &b)) in m0.phase().iter().zip(m1.phase()).enumerate() {
        let (x, y) = grid.coords(k);
        let r = x.hypot(y);
        if (r - node).abs() < 2.0 * grid.dx() {
            continue;
        }
        let expect = if r > node { PI } else { 0.0 };
        assert!(circ_dist(b - a, expect) < 1e-9, "r = {r}");
    }
}

#[test]
fn kinoform_is_a_thin_lens() {
    let grid = Grid::square(128, 8.0 * W0).unwrap();
    let f = 0.8;
    let lens = kinoform_lens(f, LAMBDA, &grid).unwrap();
    for k in (0..grid.len()).step_by(97) {
        let (x, y) = grid.coords(k);
        let expect = -PI * (x * x + y * y) / (LAMBDA * f);
        assert!(circ_dist(lens.phase()[k], expect) < 1e-9);
    }
    assert!(kinoform_lens(0.0, LAMBDA, &grid).is_err());
    assert!(kinoform_lens(1.0, -LAMBDA, &grid).is_err());
}

#[test]
fn combine_adds_phases_mod_two_pi() {
    let grid = Grid::square(64, 8.0 * W0).unwrap();
    let a = lg_phase_mask(0, 2, W0, &grid).unwrap();
    let b = kinoform_lens(0.5, LAMBDA, &grid).unwrap();
    let c = combine(&[&a, &b]).unwrap();
    for k in 0..grid.len() {
        assert!(circ_dist(c.phase()[k], a.phase()[k] + b.phase()[k]) < 1e-12);
        assert!((0.0..TAU).contains(&c.phase()[k]));
    }
    assert!(combine::<f64>(&[]).is_err());
    let other = Mask::zeros(Grid::square(32, 8.0 * W0).unwrap());
    assert!(combine(&[&a, &other]).is_err());
}

proptest! {
    #[test]
    fn quantize_error_is_bounded(levels in 2u32..64, seed in 0u64..1000) {
        let grid = Grid::square(16, 1.0).unwrap();
        let m = Mask::from_fn(grid, |x, y| (seed as f64 * 0.37 + 13.0 * x + 7.0 * y * y + 29.0 * x * y).sin() * 9.0);
        let q = quantize(&m, levels).unwrap();
        prop_assert_eq!(q.levels(), levels);
        prop_assert!(q.max_deviation(&m).unwrap() <= PI / levels as f64 + 1e-12);
        let step = TAU / levels as f64;
        for &p in q.phase() {
            let k = p / step;
            prop_assert!((k - k.round()).abs() < 1e-9);
        }
        // Idempotent.
        let again = quantize(&q, levels).unwrap();
        prop_assert_eq!(again.phase(), q.phase());
    }
}
