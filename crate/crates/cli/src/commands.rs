use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use vecbeam::analysis::{dominant_harmonic, ring_profile};
use vecbeam::io::csv::write_csv_grid;
use vecbeam::io::manifest::{load_frame_stack, write_manifest, ManifestEntry};
use vecbeam::io::pgm::{read_mask_pgm, write_intensity_pgm16, write_mask_pgm};
use vecbeam::io::vbf::{read_vbf, write_vbf, VbfFile};
use vecbeam::pipeline::{
    convert, overlap_fraction, polarizer_image, preset_masks_with, spiral_arm_count, spiral_twist,
    target_superposition, ConversionConfig, Flavor, MaskOptions, VectorBeamPreset,
};
use vecbeam::polarimetry::{
    mean_degree_of_polarization, simulate_qwp_scan, stokes_direct, stokes_from_frames, uniform_angles, StokesMaps,
};
use vecbeam::propagation::PropagationConfig;
use vecbeam::squeezing::{budget, loss_for_target, SqueezingState};
use vecbeam::{Grid, Mask, Raster, VField};

use crate::config::{FlavorCfg, Loaded};
use crate::error::CliError;

pub struct Ctx {
    pub loaded: Loaded,
    pub out: PathBuf,
    pub extended: bool,
}

type Res<T = ()> = Result<T, CliError>;

impl Ctx {
    fn cfg(&self) -> &crate::config::Config {
        &self.loaded.config
    }

    fn grid(&self) -> Res<Grid> {
        let c = self.cfg();
        if !(c.beam.w0 > 0.0) || !(c.beam.wavelength > 0.0) {
            return Err(CliError::Config("beam.w0 and beam.wavelength must be positive".into()));
        }
        if !(c.grid.extent_w0 > 0.0) {
            return Err(CliError::Config("grid.extent_w0 must be positive".into()));
        }
        Ok(Grid::square(c.grid.n, c.grid.extent_w0 * c.beam.w0)?)
    }

    fn flavor(&self) -> Flavor {
        match self.cfg().mode.flavor {
            FlavorCfg::Radial => Flavor::RadialLike,
            FlavorCfg::Azimuthal => Flavor::AzimuthalLike,
        }
    }

    fn preset(&self) -> Res<VectorBeamPreset> {
        let m = &self.cfg().mode;
        if !self.extended && (!(0..=1).contains(&m.p) || !(1..=3).contains(&m.l)) {
            return Err(CliError::Config(format!(
                "mode p={} l={} is outside p <= 1, 1 <= l <= 3 (pass --extended to allow)",
                m.p, m.l
            )));
        }
        Ok(VectorBeamPreset::new(m.p, m.l, self.flavor())?)
    }

    fn mask_options(&self) -> MaskOptions<f64> {
        let m = &self.cfg().mode;
        let mut opts = MaskOptions::new(self.cfg().beam.wavelength);
        if m.kinoform_f != 0.0 {
            opts = opts.with_kinoform(m.kinoform_f);
        }
        opts.levels = m.levels;
        opts
    }

    /// Masks from files when `[masks]` is present, otherwise from the preset.
    fn masks(&self, grid: &Grid) -> Res<(Mask, Mask, bool)> {
        match &self.cfg().masks {
            Some(files) => {
                let read = |p: &Path| -> Res<Mask> {
                    let path = self.loaded.resolve(p);
                    if !path.exists() {
                        return Err(CliError::Config(format!("mask file {} does not exist", path.display())));
                    }
                    Ok(read_mask_pgm(&path, *grid)?)
                };
                Ok((read(&files.mask_a)?, read(&files.mask_b)?, false))
            }
            None => {
                let (a, b) = preset_masks_with(&self.preset()?, self.cfg().beam.w0, grid, &self.mask_options())?;
                Ok((a, b, true))
            }
        }
    }

    fn conversion(&self, grid: &Grid) -> Res<(ConversionConfig<f64>, bool)> {
        let c = self.cfg();
        let (a, b, from_preset) = self.masks(grid)?;
        let mut cc = ConversionConfig::new(c.beam.w0, c.beam.wavelength, a, b, c.slm.eta_mod);
        cc.inter_half_distance = c.chain.inter_half_distance;
        cc.hwp_angle = c.chain.hwp_angle_deg.to_radians();
        cc.qwp_angle = c.chain.qwp_angle_deg.to_radians();
        cc.observation_distance = c.chain.observation_distance;
        if c.chain.padding < 1 {
            return Err(CliError::Config("chain.padding must be at least 1".into()));
        }
        cc.propagation = PropagationConfig { padding: c.chain.padding, band_limit: c.chain.band_limit };
        cc.validate()?;
        Ok((cc, from_preset))
    }

    fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    fn write_text(&self, name: &str, text: &str) -> Res {
        fs::write(self.path(name), text)?;
        Ok(())
    }
}

fn grid_lines(s: &mut String, g: &Grid) {
    let _ = writeln!(s, "nx = {}\nny = {}\ndx = {:e}\ndy = {:e}", g.nx(), g.ny(), g.dx(), g.dy());
}

fn write_intensity(ctx: &Ctx, stem: &str, r: &Raster<f64>, extra: &str) -> Res {
    let scale = write_intensity_pgm16(ctx.path(&format!("{stem}.pgm")), r)?;
    let mut s = format!("# {stem}.pgm: linear 16-bit, pixel value 65535 = full_scale\nfull_scale = {scale:e}\n");
    grid_lines(&mut s, &r.grid);
    s += extra;
    ctx.write_text(&format!("{stem}.txt"), &s)
}

pub fn mask(ctx: &Ctx) -> Res<String> {
    let grid = ctx.grid()?;
    let pre = ctx.preset()?;
    let opts = ctx.mask_options();
    let (a, b) = preset_masks_with(&pre, ctx.cfg().beam.w0, &grid, &opts)?;
    write_mask_pgm(ctx.path("mask_a.pgm"), &a)?;
    write_mask_pgm(ctx.path("mask_b.pgm"), &b)?;
    let m = &ctx.cfg().mode;
    let mut s = String::from("# phase masks: pixel value v encodes phase 2*pi*v/255\n");
    let _ = writeln!(
        s,
        "p = {}\nl = {}\nflavor = \"{}\"\nw0 = {:e}\nwavelength = {:e}\nkinoform_f = {:e}\nlevels = {}",
        m.p,
        m.l,
        if m.flavor == FlavorCfg::Radial { "radial" } else { "azimuthal" },
        ctx.cfg().beam.w0,
        ctx.cfg().beam.wavelength,
        m.kinoform_f,
        m.levels
    );
    grid_lines(&mut s, &grid);
    ctx.write_text("masks.txt", &s)?;
    Ok(s)
}

fn run_conversion(ctx: &Ctx) -> Res<(VField, Option<VectorBeamPreset>, Grid)> {
    let grid = ctx.grid()?;
    let (cc, from_preset) = ctx.conversion(&grid)?;
    let out = convert(&cc)?;
    let preset = if from_preset { Some(ctx.preset()?) } else { None };
    Ok((out, preset, grid))
}

fn total_intensity(f: &VField) -> Raster<f64> {
    let mut r = f.h().intensity();
    for (a, b) in r.values.iter_mut().zip(f.v().intensity().values) {
        *a += b;
    }
    r
}

pub fn convert_cmd(ctx: &Ctx) -> Res<String> {
    let (out, preset, grid) = run_conversion(ctx)?;
    write_vbf(ctx.path("field.vbf"), &VbfFile::from_vector(&out))?;
    let mut s = String::new();
    let _ = writeln!(s, "power = {:.12}", out.power());
    let _ = writeln!(s, "s3_fraction = {:.6e}", stokes_direct(&out).s3_fraction());
    if let Some(pre) = preset {
        let c = ctx.cfg();
        let target = target_superposition(&pre, c.beam.w0, c.beam.wavelength, &grid)?;
        let _ = writeln!(s, "target_overlap = {:.9}", overlap_fraction(&target, &out)?);
    }
    write_intensity(ctx, "intensity", &total_intensity(&out), "")?;
    ctx.write_text("convert.txt", &s)?;
    Ok(s)
}

pub fn polarizer_scan(ctx: &Ctx) -> Res<String> {
    let (out, _, _) = run_conversion(ctx)?;
    let c = ctx.cfg();
    let (r_in, r_out) = (c.polarizer.ring_inner_w0 * c.beam.w0, c.polarizer.ring_outer_w0 * c.beam.w0);
    if c.polarizer.angles_deg.is_empty() {
        return Err(CliError::Config("polarizer.angles_deg is empty".into()));
    }
    let mut s = String::from("# angle_deg arms_inner arms_outer twist_deg harmonic file\n");
    for &deg in &c.polarizer.angles_deg {
        let img = polarizer_image(&out, deg.to_radians());
        let stem = format!("polarizer_{:06.2}", deg.rem_euclid(360.0)).replace('.', "_");
        let arms = |r: f64| spiral_arm_count(&img, r).map(|n| n.to_string()).unwrap_or_else(|_| "-".into());
        let (m, twist) = spiral_twist(&img, r_in, r_out)?;
        let line = format!("{deg} {} {} {:.4} {m} {stem}.pgm\n", arms(r_in), arms(r_out), twist.to_degrees());
        write_intensity(ctx, &stem, &img, &format!("polarizer_deg = {deg}\n"))?;
        s += &line;
    }
    ctx.write_text("polarizer.txt", &s)?;
    Ok(s)
}

pub fn stokes_sim(ctx: &Ctx) -> Res<String> {
    let c = ctx.cfg();
    let field: VField = match &c.stokes.field {
        Some(p) => read_vbf(ctx.loaded.resolve(p))?.into_vector()?,
        None => run_conversion(ctx)?.0,
    };
    let angles = uniform_angles::<f64>(c.stokes.frames);
    vecbeam::polarimetry::check_uniform_half_turn(&angles)?;
    let stack = simulate_qwp_scan(&field, &angles);
    let dir = ctx.path("frames");
    fs::create_dir_all(&dir)?;
    let mut entries = Vec::with_capacity(angles.len());
    for (k, a) in angles.iter().enumerate() {
        let name = format!("frame_{k:03}.vbf");
        write_vbf(dir.join(&name), &VbfFile::from_raster(&stack.frame(k)))?;
        entries.push(ManifestEntry { angle_degrees: a.to_degrees(), file: name });
    }
    write_manifest(fs::File::create(dir.join("manifest.txt"))?, &entries)?;
    Ok(format!("frames = {}\nmanifest = \"{}\"\n", angles.len(), dir.join("manifest.txt").display()))
}

fn stokes_summary(s: &StokesMaps<f64>, floor: f64, frames: usize) -> String {
    let dop = mean_degree_of_polarization(s, floor);
    let mut out = String::new();
    let _ = writeln!(out, "frames = {frames}");
    let _ = writeln!(out, "mean_dop = {}", dop.map(|d| format!("{d:.9}")).unwrap_or_else(|| "nan".into()));
    let _ = writeln!(out, "s3_fraction = {:.9e}", s.s3_fraction());
    let _ = writeln!(out, "s1_over_s0 = {:.9}", s.s1_ratio());
    out
}

pub fn stokes_analyze(ctx: &Ctx) -> Res<String> {
    let c = ctx.cfg();
    let dir = ctx.loaded.resolve(&c.stokes.frames_dir);
    if !dir.join(&c.stokes.manifest).exists() {
        return Err(CliError::Config(format!(
            "manifest {} does not exist",
            dir.join(&c.stokes.manifest).display()
        )));
    }
    let stack = load_frame_stack::<f64>(&dir, &c.stokes.manifest)?;
    let s = stokes_from_frames(&stack)?;
    for k in 0..4 {
        let r = s.component(k);
        write_vbf(ctx.path(&format!("s{k}.vbf")), &VbfFile::from_raster(&r))?;
        write_csv_grid(ctx.path(&format!("s{k}.csv")), &r)?;
    }
    let text = stokes_summary(&s, c.stokes.dark_floor, stack.angles().len());
    ctx.write_text("stokes.txt", &text)?;
    Ok(text)
}

fn budget_text(ctx: &Ctx) -> Res<String> {
    let q = &ctx.cfg().squeezing;
    let unc = (q.uncertainty_db > 0.0).then_some(q.uncertainty_db);
    let report = budget(SqueezingState::from_db(q.input_db, unc)?, &q.transmissions)?;
    let mut s = String::from("# stage transmission cumulative variance db uncertainty_db\n");
    for st in &report.stages {
        let _ = writeln!(
            s,
            "{} {:.6} {:.6} {:.9} {:.6} {}",
            st.stage,
            st.transmission,
            st.cumulative_transmission,
            st.state.variance(),
            st.state.db(),
            st.state.uncertainty_db().map(|u| format!("{u:.6}")).unwrap_or_else(|| "-".into())
        );
    }
    let _ = writeln!(s, "output_db = {:.6}", report.output().db());
    if let Some(t) = q.target_db {
        let eta = loss_for_target(q.input_db, t)?;
        let _ = writeln!(s, "transmission_for_target = {eta:.9}\nloss_for_target = {:.9}", 1.0 - eta);
    }
    Ok(s)
}

pub fn squeeze_budget(ctx: &Ctx) -> Res<String> {
    let s = budget_text(ctx)?;
    ctx.write_text("budget.txt", &s)?;
    Ok(s)
}

/// Model-level summary of every supported mode at the configured and ideal modulation.
pub fn report(ctx: &Ctx) -> Res<String> {
    let grid = ctx.grid()?;
    let c = ctx.cfg();
    let mut s = String::from("# p l eta_mod target_overlap s3_fraction s1_harmonic s1_contrast\n");
    let etas = if c.slm.eta_mod == 1.0 { vec![1.0] } else { vec![1.0, c.slm.eta_mod] };
    for pre in VectorBeamPreset::supported_modes(ctx.flavor()) {
        let (a, b) = preset_masks_with(&pre, c.beam.w0, &grid, &ctx.mask_options())?;
        let target = target_superposition(&pre, c.beam.w0, c.beam.wavelength, &grid)?;
        for &eta in &etas {
            let mut cc = ConversionConfig::new(c.beam.w0, c.beam.wavelength, a.clone(), b.clone(), eta);
            cc.inter_half_distance = c.chain.inter_half_distance;
            cc.propagation = PropagationConfig { padding: c.chain.padding.max(1), band_limit: c.chain.band_limit };
            let out = convert(&cc)?;
            let st = stokes_direct(&out);
            let r = if pre.p == 1 { 0.5 * c.beam.w0 } else { c.beam.w0 * (pre.l as f64 / 2.0).sqrt() };
            let d = dominant_harmonic(&ring_profile(&st.component(1), r, 720)?, 4 * pre.l as usize);
            let _ = writeln!(
                s,
                "{} {} {eta} {:.6} {:.6e} {} {:.3e}",
                pre.p,
                pre.l,
                overlap_fraction(&target, &out)?,
                st.s3_fraction(),
                d.order,
                d.contrast
            );
        }
    }
    s += &budget_text(ctx)?;
    ctx.write_text("report.txt", &s)?;
    Ok(s)
}
