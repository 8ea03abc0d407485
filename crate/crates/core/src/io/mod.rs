//! File formats: VBF1 field files, PGM rasters, frame manifests and CSV grids.

pub mod csv;
pub mod manifest;
pub mod pgm;
pub mod vbf;

pub use manifest::{load_frame_stack, parse_manifest, write_manifest, ManifestEntry};
pub use pgm::{read_mask_pgm, read_pgm, write_intensity_pgm16, write_mask_pgm, PgmImage};
pub use vbf::{read_vbf, write_vbf, VbfFile};
