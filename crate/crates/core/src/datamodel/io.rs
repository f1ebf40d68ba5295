//! Binary matrix files and CSV import.
//!
//! Layout (little-endian):
//!
//! ```text
//! offset  size  field
//! 0       4     magic "RSAM"
//! 4       4     version (u32) = 1
//! 8       8     rows (u64)
//! 16      8     cols (u64)
//! 24      8*r*c IEEE-754 binary64 values, row-major
//! ```

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::datamodel::manifest::StimulusManifest;
use crate::datamodel::matrix::{Matrix, MatrixSource, RepresentationMatrix};
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"RSAM";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 24;

pub fn encode_matrix(matrix: &Matrix) -> Result<Vec<u8>> {
    if matrix.rows() == 0 || matrix.cols() < 2 {
        return Err(Error::Contract(format!(
            "refusing to write a {}x{} matrix: need rows >= 1 and cols >= 2",
            matrix.rows(),
            matrix.cols()
        )));
    }
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * matrix.data().len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(matrix.rows() as u64).to_le_bytes());
    out.extend_from_slice(&(matrix.cols() as u64).to_le_bytes());
    for v in matrix.data() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    Ok(out)
}

pub fn decode_matrix(bytes: &[u8]) -> Result<Matrix> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Format(format!(
            "truncated header: {} bytes, need {HEADER_LEN}",
            bytes.len()
        )));
    }
    if &bytes[0..4] != MAGIC {
        return Err(Error::Format(format!("bad magic {:?}", &bytes[0..4])));
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if version != VERSION {
        return Err(Error::Format(format!(
            "unsupported version {version}, expected {VERSION}"
        )));
    }
    let rows = u64::from_le_bytes(bytes[8..16].try_into().unwrap());
    let cols = u64::from_le_bytes(bytes[16..24].try_into().unwrap());
    let payload_len = rows
        .checked_mul(cols)
        .and_then(|n| n.checked_mul(8))
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| Error::Format(format!("dimensions {rows}x{cols} overflow")))?;
    let payload = &bytes[HEADER_LEN..];
    if payload.len() != payload_len {
        return Err(Error::Format(format!(
            "payload is {} bytes, header {rows}x{cols} needs {payload_len}",
            payload.len()
        )));
    }
    let data = payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Matrix::new(rows as usize, cols as usize, data)
}

pub fn write_matrix(path: impl AsRef<Path>, matrix: &Matrix) -> Result<()> {
    let bytes = encode_matrix(matrix)?;
    atomic_write(path, &bytes)
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<Matrix> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_matrix(&bytes).map_err(|e| e.context(path.display()))
}

/// Write to a sibling temp file, then rename over `path`.
pub fn atomic_write(path: impl AsRef<Path>, bytes: &[u8]) -> Result<()> {
    let path = path.as_ref();
    let tmp = temp_sibling(path);
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(Error::io(path, e));
    }
    Ok(())
}

pub(crate) fn temp_sibling(path: &Path) -> PathBuf {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!(".{name}.tmp-{}", std::process::id()))
}

/// Parse a CSV matrix: a header row (`stimulus_id,0,1,...`) followed by one
/// line per stimulus whose first field is the stimulus id. Rows may appear
/// in any order; the result is in manifest order.
pub fn import_csv(
    reader: impl std::io::Read,
    manifest: &StimulusManifest,
    source: MatrixSource,
) -> Result<RepresentationMatrix> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let header = rdr.headers()?.clone();
    let dim = header.len().saturating_sub(1);
    for (pos, field) in header.iter().skip(1).enumerate() {
        if field.trim().parse::<usize>().ok() != Some(pos) {
            return Err(Error::Format(format!(
                "csv header column {} is {field:?}, expected column index {pos}",
                pos + 1
            )));
        }
    }

    let mut rows: Vec<Option<Vec<f64>>> = vec![None; manifest.len()];
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let id = rec.get(0).unwrap_or_default();
        let pos = manifest.position(id).ok_or_else(|| {
            Error::Format(format!(
                "csv line {}: stimulus {id:?} not in manifest {}",
                line + 2,
                manifest.dataset_id()
            ))
        })?;
        if rec.len() != dim + 1 {
            return Err(Error::Format(format!(
                "csv line {}: {} values, expected {dim}",
                line + 2,
                rec.len() - 1
            )));
        }
        let values = rec
            .iter()
            .skip(1)
            .map(|f| {
                f.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Format(format!("csv line {}: {f:?}: {e}", line + 2)))
            })
            .collect::<Result<Vec<_>>>()?;
        if rows[pos].replace(values).is_some() {
            return Err(Error::Format(format!("csv: stimulus {id:?} appears twice")));
        }
    }

    let mut data = Vec::with_capacity(manifest.len() * dim);
    for (i, row) in rows.into_iter().enumerate() {
        let row = row.ok_or_else(|| {
            Error::Format(format!("csv: stimulus {:?} missing", manifest.id_at(i)))
        })?;
        data.extend(row);
    }
    let matrix = Matrix::new(manifest.len(), dim, data)?;
    RepresentationMatrix::with_missing(manifest, source, matrix)
}
