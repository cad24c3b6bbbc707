//! File formats: signal/spectrum CSV, the binary grid container with its
//! JSON sidecar, and 8-bit grayscale PGM heatmaps.

use crate::error::{Error, Result};
use crate::grid::{Provenance, TfrGrid};
use crate::saft::SaftSpectrum;
use crate::signal::SampledSignal;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

const GRID_MAGIC: &[u8; 8] = b"SASTGRID";
const GRID_VERSION: u32 = 1;
pub const SCHEMA_VERSION: u32 = 1;

/// Write a signal as CSV with header `t,re,im`.
pub fn write_signal_csv(path: &Path, f: &SampledSignal) -> Result<()> {
    let mut out = BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "t,re,im")?;
    for (i, z) in f.samples().iter().enumerate() {
        let t = f.t0() + f.dt() * i as f64;
        writeln!(out, "{},{},{}", fmt_f64(t), fmt_f64(z.re), fmt_f64(z.im))?;
    }
    Ok(())
}

/// Round-trippable float formatting (shortest representation that parses
/// back exactly).
fn fmt_f64(v: f64) -> String {
    let mut s = format!("{v}");
    if !s.contains('.') && !s.contains('e') && !s.contains("inf") && !s.contains("NaN") {
        s.push_str(".0");
    }
    s
}

/// Read a `t,re,im` CSV; the time column must be uniform.
pub fn read_signal_csv(path: &Path) -> Result<SampledSignal> {
    let file = std::fs::File::open(path)?;
    let reader = BufReader::new(file);
    let mut times = Vec::new();
    let mut samples = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if lineno == 0 {
            let h = trimmed.to_ascii_lowercase();
            if h != "t,re,im" {
                return Err(Error::Format(format!("expected header 't,re,im', found '{trimmed}'")));
            }
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').collect();
        if fields.len() != 3 {
            return Err(Error::Format(format!("line {}: expected 3 fields", lineno + 1)));
        }
        let parse = |s: &str| -> Result<f64> {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::Format(format!("line {}: {e}", lineno + 1)))
        };
        times.push(parse(fields[0])?);
        samples.push(Complex64::new(parse(fields[1])?, parse(fields[2])?));
    }
    if samples.len() < 2 {
        return Err(Error::Format("need at least two samples".into()));
    }
    let dt = times[1] - times[0];
    if !(dt > 0.0) || !crate::axis::is_uniform(&times, dt) {
        return Err(Error::Format("time axis must be uniform and increasing".into()));
    }
    SampledSignal::new(samples, times[0], dt)
}

/// Write a spectrum as CSV with header `w,re,im`.
pub fn write_spectrum_csv(path: &Path, s: &SaftSpectrum) -> Result<()> {
    let mut out = BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "w,re,im")?;
    for (j, z) in s.values.iter().enumerate() {
        writeln!(out, "{},{},{}", fmt_f64(s.axis.value(j)), fmt_f64(z.re), fmt_f64(z.im))?;
    }
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
struct GridSidecar {
    schema_version: u32,
    provenance: Provenance,
}

/// Binary grid container: magic `SASTGRID`, u32 version, u64 axis lengths,
/// little-endian f64 axes, then row-major interleaved (re, im) pairs.
/// Provenance travels in a JSON sidecar at `<path>.json`.
pub fn write_grid(path: &Path, grid: &TfrGrid) -> Result<()> {
    let mut out = BufWriter::new(std::fs::File::create(path)?);
    out.write_all(GRID_MAGIC)?;
    out.write_all(&GRID_VERSION.to_le_bytes())?;
    out.write_all(&(grid.n_scales() as u64).to_le_bytes())?;
    out.write_all(&(grid.n_translations() as u64).to_le_bytes())?;
    for &a in grid.scales() {
        out.write_all(&a.to_le_bytes())?;
    }
    for &b in grid.translations() {
        out.write_all(&b.to_le_bytes())?;
    }
    for z in grid.coeffs() {
        out.write_all(&z.re.to_le_bytes())?;
        out.write_all(&z.im.to_le_bytes())?;
    }
    out.flush()?;
    let sidecar = GridSidecar {
        schema_version: SCHEMA_VERSION,
        provenance: grid.provenance.clone(),
    };
    let text = serde_json::to_string_pretty(&sidecar)
        .map_err(|e| Error::Format(format!("sidecar: {e}")))?;
    std::fs::write(sidecar_path(path), text)?;
    Ok(())
}

fn sidecar_path(path: &Path) -> std::path::PathBuf {
    let mut os = path.as_os_str().to_owned();
    os.push(".json");
    os.into()
}

pub fn read_grid(path: &Path) -> Result<TfrGrid> {
    let mut file = BufReader::new(std::fs::File::open(path)?);
    let mut magic = [0u8; 8];
    file.read_exact(&mut magic)?;
    if &magic != GRID_MAGIC {
        return Err(Error::Format("bad magic: not a grid file".into()));
    }
    let version = read_u32(&mut file)?;
    if version != GRID_VERSION {
        return Err(Error::Format(format!("unsupported grid version {version}")));
    }
    let n_scales = read_u64(&mut file)? as usize;
    let n_trans = read_u64(&mut file)? as usize;
    if n_scales == 0 || n_trans == 0 || n_scales.saturating_mul(n_trans) > (1 << 34) {
        return Err(Error::Format(format!("implausible grid shape {n_scales} x {n_trans}")));
    }
    let mut scales = Vec::with_capacity(n_scales);
    for _ in 0..n_scales {
        scales.push(read_f64(&mut file)?);
    }
    let mut translations = Vec::with_capacity(n_trans);
    for _ in 0..n_trans {
        translations.push(read_f64(&mut file)?);
    }
    let mut coeffs = Vec::with_capacity(n_scales * n_trans);
    for _ in 0..n_scales * n_trans {
        let re = read_f64(&mut file)?;
        let im = read_f64(&mut file)?;
        coeffs.push(Complex64::new(re, im));
    }
    let sidecar_text = std::fs::read_to_string(sidecar_path(path))?;
    let sidecar: GridSidecar = serde_json::from_str(&sidecar_text)
        .map_err(|e| Error::Format(format!("sidecar: {e}")))?;
    TfrGrid::new(scales, translations, coeffs, sidecar.provenance)
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

/// 8-bit grayscale PGM (P5) heatmap: rows are scales with the lowest scale
/// at the bottom, columns are translations, pixel = round(255 |c| / max|c|).
/// An all-zero grid renders all black.
pub fn write_heatmap_pgm(path: &Path, grid: &TfrGrid) -> Result<()> {
    let (h, w) = (grid.n_scales(), grid.n_translations());
    let max = grid.max_abs();
    let mut out = BufWriter::new(std::fs::File::create(path)?);
    write!(out, "P5\n{w} {h}\n255\n")?;
    let mut row = vec![0u8; w];
    for r in 0..h {
        let j = h - 1 - r; // lowest scale at the bottom row
        for (k, px) in row.iter_mut().enumerate() {
            *px = if max > 0.0 {
                (255.0 * grid.at(j, k).norm() / max).round() as u8
            } else {
                0
            };
        }
        out.write_all(&row)?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::TransformTag;
    use crate::params::SaftParams;
    use crate::window::WindowSpec;

    fn tmpdir() -> std::path::PathBuf {
        let dir = std::env::temp_dir().join(format!("sast-io-{}-{}", std::process::id(), rand_tag()));
        std::fs::create_dir_all(&dir).unwrap();
        dir
    }

    fn rand_tag() -> u64 {
        use std::time::{SystemTime, UNIX_EPOCH};
        SystemTime::now().duration_since(UNIX_EPOCH).unwrap().as_nanos() as u64
    }

    fn sample_grid() -> TfrGrid {
        let coeffs: Vec<Complex64> = (0..12)
            .map(|i| Complex64::new(i as f64 * 0.31 - 1.0, (i as f64).sin()))
            .collect();
        TfrGrid::new(
            vec![1.0, 2.5, 7.0],
            vec![0.0, 0.125, 0.25, 0.375],
            coeffs,
            Provenance {
                params: SaftParams::new(1.0, 1.0, 1.0, 2.0, 0.5, 0.25).unwrap(),
                window: WindowSpec::GaussianPi,
                transform_tag: TransformTag::Sast,
            },
        )
        .unwrap()
    }

    #[test]
    fn signal_csv_round_trip() {
        let dir = tmpdir();
        let path = dir.join("sig.csv");
        let f = SampledSignal::from_fn(-1.0, 0.25, 9, |t| Complex64::new(t, -t * t)).unwrap();
        write_signal_csv(&path, &f).unwrap();
        let g = read_signal_csv(&path).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn grid_binary_round_trip_is_bit_exact() {
        let dir = tmpdir();
        let path = dir.join("grid.bin");
        let g = sample_grid();
        write_grid(&path, &g).unwrap();
        let h = read_grid(&path).unwrap();
        assert_eq!(g, h);
    }

    #[test]
    fn heatmap_trivial_images() {
        let dir = tmpdir();
        let zero = TfrGrid::new(
            vec![1.0, 2.0],
            vec![0.0, 0.5, 1.0],
            vec![Complex64::new(0.0, 0.0); 6],
            sample_grid().provenance.clone(),
        )
        .unwrap();
        let p1 = dir.join("zero.pgm");
        write_heatmap_pgm(&p1, &zero).unwrap();
        let bytes = std::fs::read(&p1).unwrap();
        let header = b"P5\n3 2\n255\n";
        assert_eq!(&bytes[..header.len()], header);
        assert!(bytes[header.len()..].iter().all(|&b| b == 0));
        assert_eq!(bytes.len(), header.len() + 6);

        // single nonzero coefficient -> exactly one 255 pixel, at the right spot
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 6];
        coeffs[0 * 3 + 1] = Complex64::new(0.7, 0.0); // scale idx 0 (bottom row), col 1
        let one = TfrGrid::new(
            vec![1.0, 2.0],
            vec![0.0, 0.5, 1.0],
            coeffs,
            sample_grid().provenance.clone(),
        )
        .unwrap();
        let p2 = dir.join("one.pgm");
        write_heatmap_pgm(&p2, &one).unwrap();
        let bytes = std::fs::read(&p2).unwrap();
        let data = &bytes[header.len()..];
        assert_eq!(data.iter().filter(|&&b| b == 255).count(), 1);
        // bottom row (scale idx 0) is written last
        assert_eq!(data[3 + 1], 255);
    }

    #[test]
    fn csv_rejects_bad_header_and_nonuniform_axis() {
        let dir = tmpdir();
        let p = dir.join("bad.csv");
        std::fs::write(&p, "time,re,im\n0,1,0\n1,1,0\n").unwrap();
        assert!(read_signal_csv(&p).is_err());
        std::fs::write(&p, "t,re,im\n0,1,0\n1,1,0\n3,1,0\n").unwrap();
        assert!(read_signal_csv(&p).is_err());
    }
}
