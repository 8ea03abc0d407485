use vecbeam::analysis::{phase_winding, radial_peak_count};
use vecbeam::laguerre::{assoc_laguerre, lg_mode, LgModeSpec};
use vecbeam::{inner_product, Grid, Grid32};

const W0: f64 = 1e-3;
const LAMBDA: f64 = 1.56e-6;

fn modes() -> Vec<(i32, i32)> {
    (0..=1).flat_map(|p| (-3..=3).map(move |l| (p, l))).collect()
}

fn choose(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn factorial(n: u64) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

#[test]
fn orthonormality_on_default_grid() {
    let grid = Grid::square(512, 8.0 * W0).unwrap();
    let fields: Vec<_> = modes()
        .into_iter()
        .map(|(p, l)| {
            let m = lg_mode(&LgModeSpec::new(p, l, W0, LAMBDA).unwrap(), &grid);
            assert!(!m.truncated, "LG{p}{l} truncated");
            m.field
        })
        .collect();
    let mut worst = 0.0f64;
    for (a, fa) in fields.iter().enumerate() {
        for (b, fb) in fields.iter().enumerate() {
            let ip = inner_product(fa, fb).unwrap();
            let expect = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((ip.norm() - expect).abs());
        }
    }
    assert!(worst < 1e-6, "orthonormality deviation {worst:e}");
}

#[test]
fn orthonormality_away_from_waist() {
    let grid = Grid::square(512, 8.0 * W0).unwrap();
    let z = 0.3;
    let a = lg_mode(&LgModeSpec::new(0, 2, W0, LAMBDA).unwrap().at_z(z), &grid).field;
    let b = lg_mode(&LgModeSpec::new(1, 2, W0, LAMBDA).unwrap().at_z(z), &grid).field;
    assert!((inner_product(&a, &a).unwrap().re - 1.0).abs() < 1e-6);
    assert!(inner_product(&a, &b).unwrap().norm() < 1e-6);
}

#[test]
fn phase_winds_by_two_pi_l() {
    let grid = Grid::square(512, 8.0 * W0).unwrap();
    for (p, l) in modes() {
        let f = lg_mode(&LgModeSpec::new(p, l, W0, LAMBDA).unwrap(), &grid).field;
        // LG1±1 has its radial node exactly at r = w0.
        let r = if p == 1 && l.abs() == 1 { 0.6 * W0 } else { W0 };
        let w = phase_winding(&f, r, 1024).unwrap();
        assert!((w - std::f64::consts::TAU * l as f64).abs() < 1e-6, "LG{p}{l}: {w}");
    }
}

#[test]
fn radial_maxima_count() {
    let grid = Grid::square(512, 8.0 * W0).unwrap();
    for (p, l) in modes().into_iter().filter(|&(_, l)| l != 0) {
        let img = lg_mode(&LgModeSpec::new(p, l, W0, LAMBDA).unwrap(), &grid).field.intensity();
        for angle in [0.0, 0.7, 2.0, 4.1] {
            let n = radial_peak_count(&img, angle, 1000, 0.01);
            assert_eq!(n, p as usize + 1, "LG{p}{l} at {angle}");
        }
    }
}

#[test]
fn laguerre_matches_factorial_expansion() {
    for p in 0..=5u64 {
        for a in 0..=5u64 {
            for x in [0.0, 0.5, 1.0, 2.0, 5.0] {
                let direct: f64 = (0..=p)
                    .map(|k| {
                        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                        sign * choose(p + a, p - k) * f64::powi(x, k as i32) / factorial(k)
                    })
                    .sum();
                let r = assoc_laguerre(p as i32, a as i32, x).unwrap();
                let scale = direct.abs().max(1e-300);
                assert!(
                    (r - direct).abs() <= 1e-12 * scale.max(1.0),
                    "L_{p}^{a}({x}) = {r}, expansion {direct}"
                );
            }
        }
    }
}

#[test]
fn f32_modes_are_normalized() {
    let grid = Grid32::square(256, 8e-3).unwrap();
    let f = lg_mode(&LgModeSpec::new(1, 2, 1e-3f32, 1.56e-6).unwrap(), &grid).field;
    assert!((f.power() - 1.0).abs() < 1e-4);
}

#[test]
fn truncation_is_reported() {
    let grid = Grid::square(128, 2.0 * W0).unwrap();
    let m = lg_mode(&LgModeSpec::new(1, 3, W0, LAMBDA).unwrap(), &grid);
    assert!(m.truncated);
    assert!(m.power_deficit > vecbeam::laguerre::TRUNCATION_LIMIT);
}
