//! Cremona "allcurves" parsing, isogeny-class representatives, rank and
//! conductor slicing, and the `.apmx` binary cache of a_p matrices.

use std::collections::HashMap;
use std::io::{BufRead, Read, Write};
use std::path::Path;

use thiserror::Error;

use crate::curve_arith::{batch_ap_matrix, PrimeTable, WeierstrassCoefficients};

/// One minimal-model curve from the database.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveRecord {
    pub conductor: u32,
    pub isogeny_class: String,
    pub class_index: u16,
    pub coeffs: WeierstrassCoefficients,
    pub rank: u32,
    pub torsion_order: u32,
}

impl CurveRecord {
    /// Cremona-style label, e.g. "11a1".
    pub fn label(&self) -> String {
        format!("{}{}{}", self.conductor, self.isogeny_class, self.class_index)
    }
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Malformed { line: usize, column: usize, message: String },
    #[error("i/o error reading input: {0}")]
    Io(#[from] std::io::Error),
}

/// Parse Cremona allcurves lines:
/// `N class index [a1,a2,a3,a4,a6] rank torsion`. Blank lines and
/// `#` comments are skipped.
pub fn parse_allcurves<R: BufRead>(reader: R) -> Result<Vec<CurveRecord>, ParseError> {
    let mut records = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        records.push(parse_allcurves_line(&line, lineno)?);
    }
    Ok(records)
}

fn column_of(line: &str, rest: &str) -> usize {
    line.len() - rest.len() + 1
}

fn parse_allcurves_line(line: &str, lineno: usize) -> Result<CurveRecord, ParseError> {
    let err = |rest: &str, message: &str| ParseError::Malformed {
        line: lineno,
        column: column_of(line, rest),
        message: message.to_string(),
    };

    let mut rest = line.trim_start();
    let next_token = |rest: &mut &str, what: &str| -> Result<String, ParseError> {
        if rest.is_empty() {
            return Err(err(rest, &format!("missing {what}")));
        }
        let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
        let tok = &rest[..end];
        let out = tok.to_string();
        *rest = rest[end..].trim_start();
        Ok(out)
    };

    let cond_tok = next_token(&mut rest, "conductor")?;
    let conductor: u32 = cond_tok
        .parse()
        .map_err(|_| err(line.trim_start(), "conductor is not a positive integer"))?;

    let class_tok = next_token(&mut rest, "isogeny class")?;
    if class_tok.is_empty() || !class_tok.bytes().all(|b| b.is_ascii_lowercase()) {
        return Err(err(rest, "isogeny class must be lowercase letters"));
    }

    let index_rest = rest;
    let index_tok = next_token(&mut rest, "class index")?;
    let class_index: u16 = index_tok
        .parse()
        .map_err(|_| err(index_rest, "class index is not a positive integer"))?;

    let coeff_rest = rest;
    let coeff_tok = next_token(&mut rest, "coefficient list")?;
    let coeffs = parse_ainvs(&coeff_tok)
        .map_err(|m| err(coeff_rest, &m))?;

    let rank_rest = rest;
    let rank_tok = next_token(&mut rest, "rank")?;
    let rank: u32 = rank_tok
        .parse()
        .map_err(|_| err(rank_rest, "rank is not a nonnegative integer"))?;

    let torsion_rest = rest;
    let torsion_tok = next_token(&mut rest, "torsion order")?;
    let torsion_order: u32 = torsion_tok
        .parse()
        .map_err(|_| err(torsion_rest, "torsion order is not a positive integer"))?;

    Ok(CurveRecord {
        conductor,
        isogeny_class: class_tok,
        class_index,
        coeffs,
        rank,
        torsion_order,
    })
}

/// Parse a bracketed `[a1,a2,a3,a4,a6]` coefficient list.
pub fn parse_ainvs(s: &str) -> Result<WeierstrassCoefficients, String> {
    let inner = s
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| "coefficient list must be bracketed like [0,-1,1,-10,-20]".to_string())?;
    let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
    if parts.len() != 5 {
        return Err(format!("expected 5 coefficients, found {}", parts.len()));
    }
    let mut vals = [0i64; 5];
    for (v, part) in vals.iter_mut().zip(&parts) {
        *v = part
            .parse()
            .map_err(|_| format!("coefficient {part:?} is not an integer"))?;
    }
    Ok(WeierstrassCoefficients::new(vals[0], vals[1], vals[2], vals[3], vals[4]))
}

/// Parse the LMFDB CSV export (header with columns lmfdb_label, conductor,
/// rank, ainvs, torsion). Thin adapter onto [`CurveRecord`].
pub fn parse_lmfdb_csv<R: BufRead>(reader: R) -> Result<Vec<CurveRecord>, ParseError> {
    let mut records = Vec::new();
    let mut columns: Option<HashMap<String, usize>> = None;
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<String> = split_csv_line(&line);
        if columns.is_none() {
            columns = Some(
                fields
                    .iter()
                    .enumerate()
                    .map(|(j, name)| (name.trim().to_string(), j))
                    .collect(),
            );
            continue;
        }
        let cols = columns.as_ref().unwrap();
        let get = |name: &str| -> Result<&str, ParseError> {
            cols.get(name)
                .and_then(|&j| fields.get(j))
                .map(String::as_str)
                .ok_or_else(|| ParseError::Malformed {
                    line: lineno,
                    column: 1,
                    message: format!("missing column {name}"),
                })
        };
        let malformed = |message: String| ParseError::Malformed { line: lineno, column: 1, message };

        let label = get("lmfdb_label")?;
        // LMFDB labels look like "11.a1": conductor, dot, class letters, index.
        let after_dot = label
            .split_once('.')
            .map(|(_, t)| t)
            .ok_or_else(|| malformed(format!("label {label:?} has no '.' separator")))?;
        let split = after_dot
            .find(|ch: char| ch.is_ascii_digit())
            .ok_or_else(|| malformed(format!("label {label:?} has no class index")))?;
        let (class, index) = after_dot.split_at(split);
        let class_index: u16 = index
            .parse()
            .map_err(|_| malformed(format!("bad class index in label {label:?}")))?;

        let conductor: u32 = get("conductor")?
            .trim()
            .parse()
            .map_err(|_| malformed("conductor is not a positive integer".into()))?;
        let rank: u32 = get("rank")?
            .trim()
            .parse()
            .map_err(|_| malformed("rank is not a nonnegative integer".into()))?;
        let torsion_order: u32 = get("torsion")?
            .trim()
            .parse()
            .map_err(|_| malformed("torsion is not a positive integer".into()))?;
        let coeffs = parse_ainvs(get("ainvs")?.trim()).map_err(malformed)?;

        records.push(CurveRecord {
            conductor,
            isogeny_class: class.to_string(),
            class_index,
            coeffs,
            rank,
            torsion_order,
        });
    }
    Ok(records)
}

fn split_csv_line(line: &str) -> Vec<String> {
    // ainvs fields are quoted or bracketed and contain commas; split at
    // commas outside quotes and brackets.
    let mut fields = Vec::new();
    let mut cur = String::new();
    let mut depth = 0i32;
    let mut quoted = false;
    for ch in line.chars() {
        match ch {
            '"' => quoted = !quoted,
            '[' if !quoted => {
                depth += 1;
                cur.push(ch);
            }
            ']' if !quoted => {
                depth -= 1;
                cur.push(ch);
            }
            ',' if !quoted && depth == 0 => fields.push(std::mem::take(&mut cur)),
            _ => cur.push(ch),
        }
    }
    fields.push(cur);
    fields
}

/// Keep exactly the first curve of each isogeny class (class index 1),
/// preserving order.
pub fn isogeny_representatives(records: &[CurveRecord]) -> Vec<CurveRecord> {
    records.iter().filter(|r| r.class_index == 1).cloned().collect()
}

/// Anything with a rank, a conductor, and a label can be sliced.
pub trait CurveInfo {
    fn conductor(&self) -> u32;
    fn rank(&self) -> u32;
    fn label(&self) -> String;
}

impl CurveInfo for CurveRecord {
    fn conductor(&self) -> u32 {
        self.conductor
    }
    fn rank(&self) -> u32 {
        self.rank
    }
    fn label(&self) -> String {
        CurveRecord::label(self)
    }
}

#[derive(Debug, Error)]
pub enum SliceError {
    #[error("conductor bounds must satisfy N1 < N2 (got {n1} >= {n2})")]
    BadBounds { n1: u32, n2: u32 },
}

/// Curves of one rank with conductor in [N1, N2], both endpoints inclusive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetSlice {
    pub rank: u32,
    pub n1: u32,
    pub n2: u32,
    /// Labels of the member curves, in input order.
    pub members: Vec<String>,
}

impl DatasetSlice {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

pub fn slice<T: CurveInfo>(
    items: &[T],
    rank: u32,
    n1: u32,
    n2: u32,
) -> Result<DatasetSlice, SliceError> {
    if n1 >= n2 {
        return Err(SliceError::BadBounds { n1, n2 });
    }
    let members = items
        .iter()
        .filter(|c| c.rank() == rank && c.conductor() >= n1 && c.conductor() <= n2)
        .map(|c| c.label())
        .collect();
    Ok(DatasetSlice { rank, n1, n2, members })
}

/// Per-row curve metadata stored with the a_p cache.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveMeta {
    pub conductor: u32,
    pub isogeny_class: String,
    pub class_index: u16,
    pub rank: u32,
}

impl CurveMeta {
    pub fn label(&self) -> String {
        format!("{}{}{}", self.conductor, self.isogeny_class, self.class_index)
    }
}

impl CurveInfo for CurveMeta {
    fn conductor(&self) -> u32 {
        self.conductor
    }
    fn rank(&self) -> u32 {
        self.rank
    }
    fn label(&self) -> String {
        CurveMeta::label(self)
    }
}

/// Integer matrix of a_{p_n} values: one row per curve, one column per
/// prime, with a label index for slice lookups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApMatrix {
    pub num_primes: u32,
    pub curves: Vec<CurveMeta>,
    /// Row-major values, `curves.len() * num_primes` entries.
    values: Vec<i16>,
    index: HashMap<String, usize>,
}

impl ApMatrix {
    pub fn new(num_primes: u32, curves: Vec<CurveMeta>, values: Vec<i16>) -> Self {
        assert_eq!(values.len(), curves.len() * num_primes as usize);
        let index = curves
            .iter()
            .enumerate()
            .map(|(i, c)| (c.label(), i))
            .collect();
        Self { num_primes, curves, values, index }
    }

    /// Compute the matrix for a set of records over the first M primes.
    pub fn build(records: &[CurveRecord], table: &PrimeTable, workers: usize) -> Self {
        let coeffs: Vec<WeierstrassCoefficients> = records.iter().map(|r| r.coeffs).collect();
        let rows = batch_ap_matrix(&coeffs, table, workers);
        let mut values = Vec::with_capacity(records.len() * table.len());
        for row in rows {
            values.extend_from_slice(&row);
        }
        let curves = records
            .iter()
            .map(|r| CurveMeta {
                conductor: r.conductor,
                isogeny_class: r.isogeny_class.clone(),
                class_index: r.class_index,
                rank: r.rank,
            })
            .collect();
        Self::new(table.len() as u32, curves, values)
    }

    pub fn num_curves(&self) -> usize {
        self.curves.len()
    }

    pub fn row(&self, i: usize) -> &[i16] {
        let m = self.num_primes as usize;
        &self.values[i * m..(i + 1) * m]
    }

    pub fn row_index(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn row_by_label(&self, label: &str) -> Option<&[i16]> {
        self.row_index(label).map(|i| self.row(i))
    }
}

const CACHE_MAGIC: &[u8; 4] = b"APMX";
const CACHE_VERSION: u8 = 1;

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("not an apmx file (bad magic bytes)")]
    BadMagic,
    #[error("unsupported apmx version {0}")]
    BadVersion(u8),
    #[error("file truncated while reading {0}")]
    Truncated(&'static str),
    #[error("checksum mismatch: stored {stored:#010x}, computed {computed:#010x}")]
    Checksum { stored: u32, computed: u32 },
}

/// Write the `.apmx` cache: magic, version, M, curve count, per-curve
/// metadata + i16 rows (little-endian), trailing CRC32 of everything
/// before it.
pub fn save_cache(m: &ApMatrix, path: &Path) -> Result<(), CacheError> {
    std::fs::write(path, cache_bytes(m))?;
    Ok(())
}

pub fn load_cache(path: &Path) -> Result<ApMatrix, CacheError> {
    let mut file = std::fs::File::open(path)?;
    let mut buf = Vec::new();
    file.read_to_end(&mut buf)?;
    if buf.len() < 4 {
        return Err(CacheError::Truncated("magic"));
    }
    if &buf[..4] != CACHE_MAGIC {
        return Err(CacheError::BadMagic);
    }
    if buf.len() < 13 + 4 {
        return Err(CacheError::Truncated("header"));
    }
    let version = buf[4];
    if version != CACHE_VERSION {
        return Err(CacheError::BadVersion(version));
    }
    let body = &buf[..buf.len() - 4];
    let stored = u32::from_le_bytes(buf[buf.len() - 4..].try_into().unwrap());
    let computed = crc32fast::hash(body);
    if stored != computed {
        return Err(CacheError::Checksum { stored, computed });
    }

    let mut cursor = &body[5..];
    let mut take = |n: usize, what: &'static str| -> Result<&[u8], CacheError> {
        if cursor.len() < n {
            return Err(CacheError::Truncated(what));
        }
        let (head, tail) = cursor.split_at(n);
        cursor = tail;
        Ok(head)
    };

    let num_primes = u32::from_le_bytes(take(4, "num_primes")?.try_into().unwrap());
    let num_curves = u32::from_le_bytes(take(4, "curve count")?.try_into().unwrap());
    let m = num_primes as usize;
    let mut curves = Vec::with_capacity(num_curves as usize);
    let mut values = Vec::with_capacity(num_curves as usize * m);
    for _ in 0..num_curves {
        let conductor = u32::from_le_bytes(take(4, "conductor")?.try_into().unwrap());
        let class_len = take(1, "class length")?[0] as usize;
        let class_bytes = take(class_len, "class string")?;
        let isogeny_class = String::from_utf8_lossy(class_bytes).into_owned();
        let class_index = u16::from_le_bytes(take(2, "class index")?.try_into().unwrap());
        let rank = u32::from_le_bytes(take(4, "rank")?.try_into().unwrap());
        let row_bytes = take(2 * m, "a_p row")?;
        for chunk in row_bytes.chunks_exact(2) {
            values.push(i16::from_le_bytes(chunk.try_into().unwrap()));
        }
        curves.push(CurveMeta { conductor, isogeny_class, class_index, rank });
    }
    if !cursor.is_empty() {
        return Err(CacheError::Truncated("trailing bytes after matrix"));
    }
    Ok(ApMatrix::new(num_primes, curves, values))
}

/// Serialize without touching the filesystem; used by size accounting.
pub fn cache_byte_len(m: &ApMatrix) -> usize {
    let per_curve: usize = m
        .curves
        .iter()
        .map(|c| 4 + 1 + c.isogeny_class.len() + 2 + 4 + 2 * m.num_primes as usize)
        .sum();
    4 + 1 + 4 + 4 + per_curve + 4
}

impl ApMatrix {
    /// Convenience for writing through any `Write` sink.
    pub fn write_to<W: Write>(&self, mut sink: W) -> Result<(), CacheError> {
        sink.write_all(&cache_bytes(self))?;
        Ok(())
    }
}

fn cache_bytes(m: &ApMatrix) -> Vec<u8> {
    let mut buf = Vec::with_capacity(16 + m.values.len() * 2);
    buf.extend_from_slice(CACHE_MAGIC);
    buf.push(CACHE_VERSION);
    buf.extend_from_slice(&m.num_primes.to_le_bytes());
    buf.extend_from_slice(&(m.curves.len() as u32).to_le_bytes());
    for (i, c) in m.curves.iter().enumerate() {
        buf.extend_from_slice(&c.conductor.to_le_bytes());
        let class = c.isogeny_class.as_bytes();
        assert!(class.len() <= u8::MAX as usize, "isogeny class string too long");
        buf.push(class.len() as u8);
        buf.extend_from_slice(class);
        buf.extend_from_slice(&c.class_index.to_le_bytes());
        buf.extend_from_slice(&c.rank.to_le_bytes());
        for v in m.row(i) {
            buf.extend_from_slice(&v.to_le_bytes());
        }
    }
    let crc = crc32fast::hash(&buf);
    buf.extend_from_slice(&crc.to_le_bytes());
    buf
}
