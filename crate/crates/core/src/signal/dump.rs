//! Binary frame dump and hop-sequence sidecar.
//!
//! Layout (little-endian): 4-byte magic `HOPF`, `u16` version, `u32` samples
//! per chirp, `u32` chirps, `f64` sample rate, 10 reserved zero bytes, then
//! `N_s × K` complex samples as `f32` pairs in row-major order (sample index
//! outer, chirp index inner).

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use super::ChirpFrame;
use crate::error::{Error, Result};

pub const FRAME_MAGIC: &[u8; 4] = b"HOPF";
pub const FRAME_VERSION: u16 = 1;
const HEADER_LEN: usize = 32;

pub fn write_frame(path: &Path, frame: &ChirpFrame, f_s: f64) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    let n_s = u32::try_from(frame.samples_per_chirp()).map_err(|_| Error::invalid("too many samples per chirp"))?;
    let k = u32::try_from(frame.chirp_count()).map_err(|_| Error::invalid("too many chirps"))?;
    let mut header = Vec::with_capacity(HEADER_LEN);
    header.extend_from_slice(FRAME_MAGIC);
    header.extend_from_slice(&FRAME_VERSION.to_le_bytes());
    header.extend_from_slice(&n_s.to_le_bytes());
    header.extend_from_slice(&k.to_le_bytes());
    header.extend_from_slice(&f_s.to_le_bytes());
    header.resize(HEADER_LEN, 0);
    out.write_all(&header).map_err(|e| Error::io(path, e))?;
    for n in 0..frame.samples_per_chirp() {
        for k in 0..frame.chirp_count() {
            let x = frame.sample(n, k);
            out.write_all(&(x.re as f32).to_le_bytes()).map_err(|e| Error::io(path, e))?;
            out.write_all(&(x.im as f32).to_le_bytes()).map_err(|e| Error::io(path, e))?;
        }
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// Reads a frame dump. Hop offsets are not stored in the dump; the returned
/// frame carries zeros until paired with [`read_hops`].
pub fn read_frame(path: &Path) -> Result<(ChirpFrame, f64)> {
    let mut bytes = Vec::new();
    fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| Error::io(path, e))?;
    if bytes.len() < HEADER_LEN || &bytes[..4] != FRAME_MAGIC {
        return Err(Error::Parse {
            line: None,
            message: format!("{} is not a frame dump", path.display()),
        });
    }
    let u32_at = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().expect("4 bytes")) as usize;
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != FRAME_VERSION {
        return Err(Error::Parse {
            line: None,
            message: format!("unsupported frame dump version {version}"),
        });
    }
    let n_s = u32_at(6);
    let k = u32_at(10);
    let f_s = f64::from_le_bytes(bytes[14..22].try_into().expect("8 bytes"));
    let expected = HEADER_LEN + n_s * k * 8;
    if bytes.len() != expected {
        return Err(Error::Parse {
            line: None,
            message: format!("frame dump holds {} bytes, header implies {expected}", bytes.len()),
        });
    }
    let mut chirps = vec![vec![Complex64::new(0.0, 0.0); n_s]; k];
    for (i, pair) in bytes[HEADER_LEN..].chunks_exact(8).enumerate() {
        let re = f32::from_le_bytes(pair[..4].try_into().expect("4 bytes"));
        let im = f32::from_le_bytes(pair[4..].try_into().expect("4 bytes"));
        chirps[i % k][i / k] = Complex64::new(re as f64, im as f64);
    }
    Ok((ChirpFrame::new(n_s, chirps, vec![0.0; k])?, f_s))
}

/// Writes `k,f_k_hz` rows (one-based `k`) with absolute start frequencies `f_c + Δb_k`.
pub fn write_hops(path: &Path, hops: &[f64], f_c: f64) -> Result<()> {
    let mut text = String::from("k,f_k_hz\n");
    for (k, db) in hops.iter().enumerate() {
        text.push_str(&format!("{},{}\n", k + 1, f_c + db));
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Reads a hop sidecar back into offsets `Δb_k` relative to `f_c`.
pub fn read_hops(path: &Path, f_c: f64) -> Result<Vec<f64>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut hops = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if i == 0 {
            if line.trim() != "k,f_k_hz" {
                return Err(Error::Parse {
                    line: Some(1),
                    message: format!("expected header `k,f_k_hz`, found `{line}`"),
                });
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            line: Some(i + 1),
            message,
        };
        let (k, f) = line
            .split_once(',')
            .ok_or_else(|| parse_err(format!("expected two fields in `{line}`")))?;
        let k: usize = k.trim().parse().map_err(|e| parse_err(format!("chirp index: {e}")))?;
        if k != hops.len() + 1 {
            return Err(parse_err(format!("chirp index {k} out of sequence")));
        }
        let f: f64 = f.trim().parse().map_err(|e| parse_err(format!("frequency: {e}")))?;
        hops.push(f - f_c);
    }
    Ok(hops)
}
