//! Document embeddings: the EMB1 interchange format and a feature-hashing
//! fallback embedder.
//!
//! EMB1 layout (all integers little-endian):
//!
//! ```text
//! 0..4    magic "EMB1"
//! 4       version = 1
//! 5       flags, bit 0 = rows are L2-normalized
//! 6..10   u32 row count
//! 10..14  u32 dim
//! ...     count * dim f32, row-major
//! ...     count ids, each a u16 byte length followed by UTF-8 bytes
//! ```

use std::collections::HashSet;
use std::io::{Read, Write};
use std::path::Path;

use thiserror::Error;
use twox_hash::XxHash64;

use crate::corpus::Document;

pub const MAGIC: &[u8; 4] = b"EMB1";
pub const VERSION: u8 = 1;
const FLAG_NORMALIZED: u8 = 1;
const HEADER_LEN: usize = 14;

/// Default dimension, matching the 384-d sentence encoder used upstream.
pub const DEFAULT_DIM: usize = 384;

#[derive(Debug, Error)]
pub enum EmbedError {
    #[error("bad magic bytes {0:?}, expected \"EMB1\"")]
    BadMagic([u8; 4]),
    #[error("unsupported EMB1 version {0}")]
    UnsupportedVersion(u8),
    #[error("payload size mismatch: {count} rows x {dim} dims needs {expected} bytes, found {found}")]
    DimMismatch {
        count: usize,
        dim: usize,
        expected: usize,
        found: usize,
    },
    #[error("duplicate document id {0:?}")]
    DuplicateId(String),
    #[error("malformed id table: {0}")]
    BadIdTable(String),
    #[error("invalid matrix: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// N x D dense row-major matrix of document vectors with their ids.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingMatrix {
    ids: Vec<String>,
    data: Vec<f32>,
    dim: usize,
    normalized: bool,
}

impl EmbeddingMatrix {
    pub fn new(ids: Vec<String>, data: Vec<f32>, dim: usize, normalized: bool) -> Result<Self, EmbedError> {
        if dim == 0 {
            return Err(EmbedError::Invalid("dim must be positive".into()));
        }
        if data.len() != ids.len() * dim {
            return Err(EmbedError::DimMismatch {
                count: ids.len(),
                dim,
                expected: ids.len() * dim * 4,
                found: data.len() * 4,
            });
        }
        let mut seen = HashSet::with_capacity(ids.len());
        for id in &ids {
            if !seen.insert(id.as_str()) {
                return Err(EmbedError::DuplicateId(id.clone()));
            }
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(EmbedError::Invalid(format!("non-finite entry in row {}", pos / dim)));
        }
        Ok(Self {
            ids,
            data,
            dim,
            normalized,
        })
    }

    pub fn from_rows(ids: Vec<String>, rows: &[Vec<f32>]) -> Result<Self, EmbedError> {
        let dim = rows.first().map_or(1, Vec::len);
        if rows.iter().any(|r| r.len() != dim) {
            return Err(EmbedError::Invalid("ragged rows".into()));
        }
        Self::new(ids, rows.concat(), dim, false)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn row(&self, i: usize) -> &[f32] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f32]> {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_slice(&self) -> &[f32] {
        &self.data
    }

    /// Reorders rows to follow `order` (a list of ids). Every id must exist.
    pub fn select(&self, order: &[String]) -> Result<Self, EmbedError> {
        let index: std::collections::HashMap<&str, usize> =
            self.ids.iter().enumerate().map(|(i, id)| (id.as_str(), i)).collect();
        let mut data = Vec::with_capacity(order.len() * self.dim);
        for id in order {
            let &i = index
                .get(id.as_str())
                .ok_or_else(|| EmbedError::Invalid(format!("no embedding for id {id:?}")))?;
            data.extend_from_slice(self.row(i));
        }
        Self::new(order.to_vec(), data, self.dim, self.normalized)
    }
}

pub fn read_embeddings<R: Read>(mut reader: R) -> Result<EmbeddingMatrix, EmbedError> {
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes)?;
    decode(&bytes)
}

pub fn load_embeddings(path: &Path) -> Result<EmbeddingMatrix, EmbedError> {
    decode(&std::fs::read(path)?)
}

fn decode(bytes: &[u8]) -> Result<EmbeddingMatrix, EmbedError> {
    if bytes.len() < 4 || &bytes[..4] != MAGIC {
        let mut magic = [0u8; 4];
        let n = bytes.len().min(4);
        magic[..n].copy_from_slice(&bytes[..n]);
        return Err(EmbedError::BadMagic(magic));
    }
    if bytes.len() < HEADER_LEN {
        return Err(EmbedError::DimMismatch {
            count: 0,
            dim: 0,
            expected: HEADER_LEN,
            found: bytes.len(),
        });
    }
    if bytes[4] != VERSION {
        return Err(EmbedError::UnsupportedVersion(bytes[4]));
    }
    let normalized = bytes[5] & FLAG_NORMALIZED != 0;
    let count = u32::from_le_bytes(bytes[6..10].try_into().unwrap()) as usize;
    let dim = u32::from_le_bytes(bytes[10..14].try_into().unwrap()) as usize;
    let payload_len = count
        .checked_mul(dim)
        .and_then(|n| n.checked_mul(4))
        .ok_or_else(|| EmbedError::Invalid("header sizes overflow".into()))?;
    let body = &bytes[HEADER_LEN..];
    if body.len() < payload_len {
        return Err(EmbedError::DimMismatch {
            count,
            dim,
            expected: payload_len,
            found: body.len(),
        });
    }
    let data: Vec<f32> = body[..payload_len]
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
        .collect();

    let mut table = &body[payload_len..];
    let mut ids = Vec::with_capacity(count);
    for i in 0..count {
        if table.len() < 2 {
            return Err(EmbedError::BadIdTable(format!("truncated before id {i}")));
        }
        let len = u16::from_le_bytes([table[0], table[1]]) as usize;
        table = &table[2..];
        if table.len() < len {
            return Err(EmbedError::BadIdTable(format!("id {i} truncated")));
        }
        let id = std::str::from_utf8(&table[..len]).map_err(|e| EmbedError::BadIdTable(format!("id {i}: {e}")))?;
        ids.push(id.to_string());
        table = &table[len..];
    }
    if !table.is_empty() {
        return Err(EmbedError::BadIdTable(format!(
            "{} trailing bytes after id table",
            table.len()
        )));
    }
    // a zero dim is only meaningful for an empty file
    EmbeddingMatrix::new(ids, data, dim.max(1), normalized)
}

pub fn write_embeddings<W: Write>(matrix: &EmbeddingMatrix, mut writer: W) -> Result<(), EmbedError> {
    let count = u32::try_from(matrix.len()).map_err(|_| EmbedError::Invalid("too many rows for EMB1".into()))?;
    let dim = u32::try_from(matrix.dim).map_err(|_| EmbedError::Invalid("dim too large for EMB1".into()))?;
    let mut buf = Vec::with_capacity(HEADER_LEN + matrix.data.len() * 4);
    buf.extend_from_slice(MAGIC);
    buf.push(VERSION);
    buf.push(if matrix.normalized { FLAG_NORMALIZED } else { 0 });
    buf.extend_from_slice(&count.to_le_bytes());
    buf.extend_from_slice(&dim.to_le_bytes());
    for v in &matrix.data {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    for id in &matrix.ids {
        let len = u16::try_from(id.len())
            .map_err(|_| EmbedError::Invalid(format!("id longer than 65535 bytes: {id:.32}...")))?;
        buf.extend_from_slice(&len.to_le_bytes());
        buf.extend_from_slice(id.as_bytes());
    }
    writer.write_all(&buf)?;
    writer.flush()?;
    Ok(())
}

/// Scales every nonzero row to unit Euclidean norm; zero rows stay zero.
pub fn l2_normalize(matrix: &EmbeddingMatrix) -> EmbeddingMatrix {
    let mut out = matrix.clone();
    for row in out.data.chunks_exact_mut(out.dim) {
        normalize_row(row);
    }
    out.normalized = true;
    out
}

fn normalize_row(row: &mut [f32]) {
    let norm = row.iter().map(|&v| f64::from(v).powi(2)).sum::<f64>().sqrt();
    if norm > 0.0 {
        for v in row.iter_mut() {
            *v = (f64::from(*v) / norm) as f32;
        }
    }
}

/// Signed feature-hashing embedder.
///
/// Each lowercase whitespace token is hashed with seeded XXH64; the low bits
/// pick a bucket in `[0, dim)` and the top bit picks the sign added to it.
/// Rows are L2-normalized. Documents without tokens produce a zero row and
/// their row indices are returned alongside the matrix.
pub fn hash_embed(documents: &[Document], dim: usize, seed: u64) -> Result<(EmbeddingMatrix, Vec<usize>), EmbedError> {
    if dim < 2 {
        return Err(EmbedError::Invalid("hash_embed needs dim >= 2".into()));
    }
    let mut data = vec![0f32; documents.len() * dim];
    let mut empty = Vec::new();
    for (i, doc) in documents.iter().enumerate() {
        let row = &mut data[i * dim..(i + 1) * dim];
        let mut counts = vec![0i64; dim];
        let mut tokens = 0usize;
        for token in doc.text.split_whitespace() {
            let h = XxHash64::oneshot(seed, token.to_lowercase().as_bytes());
            let bucket = ((h & 0x7fff_ffff_ffff_ffff) % dim as u64) as usize;
            counts[bucket] += if h >> 63 == 0 { 1 } else { -1 };
            tokens += 1;
        }
        if tokens == 0 {
            empty.push(i);
            continue;
        }
        for (slot, c) in row.iter_mut().zip(&counts) {
            *slot = *c as f32;
        }
        normalize_row(row);
    }
    let ids = documents.iter().map(|d| d.doc_id.clone()).collect();
    Ok((EmbeddingMatrix::new(ids, data, dim, true)?, empty))
}
