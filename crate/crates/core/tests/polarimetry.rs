use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vecbeam::analysis::{dominant_harmonic, ring_profile};
use vecbeam::pipeline::{convert, ConversionConfig, Flavor, VectorBeamPreset};
use vecbeam::polarimetry::{
    degree_of_polarization, mean_degree_of_polarization, simulate_qwp_scan, stokes_direct, stokes_from_frames,
    uniform_angles, FrameStack, DEFAULT_DARK_FLOOR,
};
use vecbeam::{Complex, Field, Grid, VField};

const W0: f64 = 1e-3;
const LAMBDA: f64 = 1.56e-6;

fn random_field(rng: &mut ChaCha8Rng, grid: Grid) -> VField {
    let mut comp = || {
        let amps = (0..grid.len()).map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        Field::new(grid, amps).unwrap()
    };
    VField::new(comp(), comp()).unwrap()
}

fn radial_beam(grid: &Grid) -> VField {
    let pre = VectorBeamPreset::new(0, 1, Flavor::RadialLike).unwrap();
    convert(&ConversionConfig::from_preset(&pre, W0, LAMBDA, grid, 1.0).unwrap()).unwrap()
}

#[test]
fn round_trip_random_fields_any_uniform_angle_set() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let grid = Grid::square(16, 1.0).unwrap();
    for n in [5usize, 6, 7, 8, 16, 33] {
        let f = random_field(&mut rng, grid);
        let offset = rng.gen_range(-3.0..3.0);
        let mut angles: Vec<f64> = uniform_angles::<f64>(n).into_iter().map(|a| a + offset).collect();
        angles.reverse();
        angles.rotate_left(n / 3);
        let rec = stokes_from_frames(&simulate_qwp_scan(&f, &angles)).unwrap();
        let err = rec.max_relative_error(&stokes_direct(&f)).unwrap();
        assert!(err < 1e-12, "N={n}: {err:e}");
    }
}

#[test]
fn rejects_bad_angle_sets() {
    let grid = Grid::square(4, 1.0).unwrap();
    let f = VField::uniform(&Field::from_fn(grid, |_, _| Complex::new(1.0, 0.0)), vecbeam::jones::linear(0.3));
    assert!(matches!(
        stokes_from_frames(&simulate_qwp_scan(&f, &uniform_angles(4))),
        Err(vecbeam::Error::Precondition(_))
    ));
    let mut angles = uniform_angles::<f64>(8);
    angles[3] += 0.01;
    assert!(stokes_from_frames(&simulate_qwp_scan(&f, &angles)).is_err());
    // A full turn with 16 frames is not 16 samples of half a turn.
    let full: Vec<f64> = (0..16).map(|k| k as f64 * 2.0 * PI / 16.0).collect();
    assert!(stokes_from_frames(&simulate_qwp_scan(&f, &full)).is_err());
    let frames = vec![vec![0.0; grid.len()]; 4];
    assert!(FrameStack::new(grid, uniform_angles(5), frames).is_err());
}

#[test]
fn radial_beam_stokes_structure() {
    let grid = Grid::square(256, 8.0 * W0).unwrap();
    let f = radial_beam(&grid);
    let s = stokes_from_frames(&simulate_qwp_scan(&f, &uniform_angles(16))).unwrap();
    let max = s.max_s0();
    assert!(s.s3.iter().all(|v| v.abs() < 1e-10 * max));
    for k in 0..grid.len() {
        let (x, y) = grid.coords(k);
        let phi = y.atan2(x);
        assert!((s.s1[k] - s.s0[k] * (2.0 * phi).cos()).abs() < 1e-9 * max, "s1 at pixel {k}");
        assert!((s.s2[k] - s.s0[k] * (2.0 * phi).sin()).abs() < 1e-9 * max, "s2 at pixel {k}");
    }
    for r in [0.4, 0.8, 1.5] {
        let ring = ring_profile(&s.component(1), r * W0, 720).unwrap();
        let d = dominant_harmonic(&ring, 8);
        assert_eq!(d.order, 2);
        assert!(d.contrast > 1e3);
    }
}

#[test]
fn azimuthal_flavor_flips_s1_s2() {
    let grid = Grid::square(128, 8.0 * W0).unwrap();
    let pre = VectorBeamPreset::new(0, 1, Flavor::AzimuthalLike).unwrap();
    let a = stokes_direct(&convert(&ConversionConfig::from_preset(&pre, W0, LAMBDA, &grid, 1.0).unwrap()).unwrap());
    let r = stokes_direct(&radial_beam(&grid));
    let max = r.max_s0();
    for k in 0..grid.len() {
        assert!((a.s1[k] + r.s1[k]).abs() < 1e-12 * max);
        assert!((a.s2[k] + r.s2[k]).abs() < 1e-12 * max);
        assert!((a.s0[k] - r.s0[k]).abs() < 1e-12 * max);
    }
}

#[test]
fn calibration_offset_behaviour() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let grid = Grid::square(12, 1.0).unwrap();
    let f = random_field(&mut rng, grid);
    let nominal = uniform_angles::<f64>(16);
    let truth = stokes_from_frames(&simulate_qwp_scan(&f, &nominal)).unwrap();
    let delta = 0.05;
    let actual: Vec<f64> = nominal.iter().map(|a| a + delta).collect();
    let stack = simulate_qwp_scan(&f, &actual);
    let mislabeled = FrameStack::new(grid, nominal.clone(), stack.frames().to_vec()).unwrap();
    let shifted = stokes_from_frames(&mislabeled).unwrap();
    let mut s0_moved = 0.0f64;
    for k in 0..grid.len() {
        // The frame mean and the linear-polarization magnitude are unaffected.
        let mean_t = truth.s0[k] + truth.s1[k] / 2.0;
        let mean_s = shifted.s0[k] + shifted.s1[k] / 2.0;
        assert!((mean_t - mean_s).abs() < 1e-9 * truth.s0[k]);
        let lin_t = truth.s1[k].hypot(truth.s2[k]);
        let lin_s = shifted.s1[k].hypot(shifted.s2[k]);
        assert!((lin_t - lin_s).abs() < 1e-9 * truth.s0[k]);
        assert!((shifted.s3[k] - truth.s3[k] * (2.0 * delta).cos()).abs() < 1e-9 * truth.s0[k]);
        s0_moved = s0_moved.max((shifted.s0[k] - truth.s0[k]).abs() / truth.s0[k]);
    }
    // S0 = A − C picks up the rotated 4θ term.
    assert!(s0_moved > 1e-3);
}

#[test]
fn degree_of_polarization_masks_dark_pixels() {
    let grid = Grid::square(128, 8.0 * W0).unwrap();
    let s = stokes_direct(&radial_beam(&grid));
    let dop = degree_of_polarization(&s, DEFAULT_DARK_FLOOR);
    let cut = DEFAULT_DARK_FLOOR * s.max_s0();
    for (d, &s0) in dop.iter().zip(&s.s0) {
        assert_eq!(d.is_none(), s0 <= cut);
    }
    assert!(dop[0].is_none());
    assert!(dop.iter().flatten().all(|d| (d - 1.0).abs() < 1e-9));
    assert!((mean_degree_of_polarization(&s, DEFAULT_DARK_FLOOR).unwrap() - 1.0).abs() < 1e-9);
}
