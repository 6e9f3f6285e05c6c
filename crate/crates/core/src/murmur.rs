//! Murmuration averages over dataset slices: the index-parameterized mean
//! f_r(n), the prime-parameterized mean g_r(p), geometric means, Hasse
//! normalization, and distribution histograms.
//!
//! Averages accumulate in exact 64-bit integers and divide once, so the
//! result is independent of member order and worker count.

use std::fmt::Write as _;

use thiserror::Error;

use crate::curve_arith::PrimeTable;
use crate::dataset::{ApMatrix, DatasetSlice};

#[derive(Debug, Error)]
pub enum MurmurError {
    #[error("empty slice r={rank}, [{n1},{n2}]")]
    EmptySlice { rank: u32, n1: u32, n2: u32 },
    #[error("slice member {0} is not present in the matrix")]
    MissingMember(String),
    #[error("|a|={a} exceeds the Hasse bound 2*sqrt({p})")]
    HasseViolation { a: i64, p: u64 },
    #[error("histogram range must satisfy lo < hi (got [{lo}, {hi}])")]
    BadRange { lo: f64, hi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesMode {
    /// x = prime index n (1-based).
    ByIndex,
    /// x = the prime p_n itself.
    ByPrime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeanKind {
    Arithmetic,
    Geometric,
}

/// Averaged coefficient sequence together with the slice that defined it.
#[derive(Debug, Clone, PartialEq)]
pub struct MurmurationSeries {
    pub mode: SeriesMode,
    pub power: u32,
    pub mean_kind: MeanKind,
    /// (rank, N1, N2) of the slice this was computed from.
    pub slice_params: (u32, u32, u32),
    pub points: Vec<(u64, f64)>,
    /// Per-point count of members excluded as zeros (geometric mean only).
    pub excluded_zeros: Option<Vec<u32>>,
}

impl MurmurationSeries {
    /// CSV with a `#` header naming the slice; columns `n,p,value` (plus
    /// `excluded` for geometric series).
    pub fn to_csv(&self, table: &PrimeTable) -> String {
        let (r, n1, n2) = self.slice_params;
        let mean = match self.mean_kind {
            MeanKind::Arithmetic => "arithmetic",
            MeanKind::Geometric => "geometric",
        };
        let mut out = String::new();
        let _ = writeln!(out, "# rank={r} N1={n1} N2={n2} k={} mean={mean}", self.power);
        let has_excluded = self.excluded_zeros.is_some();
        if has_excluded {
            out.push_str("n,p,value,excluded\n");
        } else {
            out.push_str("n,p,value\n");
        }
        for (i, &(x, y)) in self.points.iter().enumerate() {
            let (n, p) = match self.mode {
                SeriesMode::ByIndex => (x, table.get(i)),
                SeriesMode::ByPrime => ((i + 1) as u64, x),
            };
            match &self.excluded_zeros {
                Some(ex) => {
                    let _ = writeln!(out, "{n},{p},{y},{}", ex[i]);
                }
                None => {
                    let _ = writeln!(out, "{n},{p},{y}");
                }
            }
        }
        out
    }
}

fn member_rows<'a>(
    m: &'a ApMatrix,
    s: &DatasetSlice,
) -> Result<Vec<&'a [i16]>, MurmurError> {
    if s.is_empty() {
        return Err(MurmurError::EmptySlice { rank: s.rank, n1: s.n1, n2: s.n2 });
    }
    s.members
        .iter()
        .map(|label| {
            m.row_by_label(label)
                .ok_or_else(|| MurmurError::MissingMember(label.clone()))
        })
        .collect()
}

fn mean_columns(rows: &[&[i16]], num_primes: usize, power: u32) -> Vec<f64> {
    let count = rows.len() as f64;
    (0..num_primes)
        .map(|j| {
            let sum: i64 = rows
                .iter()
                .map(|row| (row[j] as i64).pow(power))
                .sum();
            sum as f64 / count
        })
        .collect()
}

/// f_r(n): arithmetic mean of a_{p_n}^k over the slice, indexed by n.
pub fn average_by_index(
    m: &ApMatrix,
    s: &DatasetSlice,
    power: u32,
) -> Result<MurmurationSeries, MurmurError> {
    let rows = member_rows(m, s)?;
    let means = mean_columns(&rows, m.num_primes as usize, power);
    Ok(MurmurationSeries {
        mode: SeriesMode::ByIndex,
        power,
        mean_kind: MeanKind::Arithmetic,
        slice_params: (s.rank, s.n1, s.n2),
        points: means
            .into_iter()
            .enumerate()
            .map(|(i, y)| ((i + 1) as u64, y))
            .collect(),
        excluded_zeros: None,
    })
}

/// g_r(p): the same means re-parameterized by the prime itself.
pub fn average_by_prime(
    m: &ApMatrix,
    s: &DatasetSlice,
    table: &PrimeTable,
    power: u32,
) -> Result<MurmurationSeries, MurmurError> {
    let rows = member_rows(m, s)?;
    let means = mean_columns(&rows, m.num_primes as usize, power);
    Ok(MurmurationSeries {
        mode: SeriesMode::ByPrime,
        power,
        mean_kind: MeanKind::Arithmetic,
        slice_params: (s.rank, s.n1, s.n2),
        points: means
            .into_iter()
            .enumerate()
            .map(|(i, y)| (table.get(i), y))
            .collect(),
        excluded_zeros: None,
    })
}

/// Geometric mean of |a_{p_n}| with zero values excluded; 0 when every
/// member vanishes at an index. The per-index excluded counts ride along.
pub fn geometric_mean_series(
    m: &ApMatrix,
    s: &DatasetSlice,
) -> Result<MurmurationSeries, MurmurError> {
    let rows = member_rows(m, s)?;
    let num_primes = m.num_primes as usize;
    let mut points = Vec::with_capacity(num_primes);
    let mut excluded = Vec::with_capacity(num_primes);
    for j in 0..num_primes {
        let mut log_sum = 0.0f64;
        let mut nonzero = 0u32;
        let mut zeros = 0u32;
        for row in &rows {
            let a = row[j] as i64;
            if a == 0 {
                zeros += 1;
            } else {
                log_sum += (a.abs() as f64).ln();
                nonzero += 1;
            }
        }
        let y = if nonzero == 0 { 0.0 } else { (log_sum / nonzero as f64).exp() };
        points.push(((j + 1) as u64, y));
        excluded.push(zeros);
    }
    Ok(MurmurationSeries {
        mode: SeriesMode::ByIndex,
        power: 1,
        mean_kind: MeanKind::Geometric,
        slice_params: (s.rank, s.n1, s.n2),
        points,
        excluded_zeros: Some(excluded),
    })
}

/// Hasse-normalized coefficient a / (2*sqrt(p)), always in [-1, 1].
pub fn normalize(a: i64, p: u64) -> Result<f64, MurmurError> {
    // |a| <= 2 sqrt(p)  <=>  a^2 <= 4p, checked exactly in integers.
    if (a * a) as u64 > 4 * p {
        return Err(MurmurError::HasseViolation { a, p });
    }
    Ok(a as f64 / (2.0 * (p as f64).sqrt()))
}

/// Equal-width histogram; bins are half-open except the last, which is
/// closed. Out-of-range values land in `overflow` rather than vanishing.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub overflow: u64,
    pub normalized: bool,
}

impl Histogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum::<u64>() + self.overflow
    }

    /// CSV rows `lo,hi,count` under a `#` header with the bin parameters.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# bins={} range=[{},{}] overflow={}",
            self.counts.len(),
            self.bin_edges[0],
            self.bin_edges[self.bin_edges.len() - 1],
            self.overflow
        );
        out.push_str("lo,hi,count\n");
        for (i, &c) in self.counts.iter().enumerate() {
            let _ = writeln!(out, "{},{},{c}", self.bin_edges[i], self.bin_edges[i + 1]);
        }
        out
    }
}

pub fn histogram(values: &[f64], bins: usize, lo: f64, hi: f64) -> Result<Histogram, MurmurError> {
    if !(lo < hi) {
        return Err(MurmurError::BadRange { lo, hi });
    }
    assert!(bins >= 1, "need at least one bin");
    let width = (hi - lo) / bins as f64;
    let bin_edges: Vec<f64> = (0..=bins).map(|i| lo + width * i as f64).collect();
    let mut counts = vec![0u64; bins];
    let mut overflow = 0u64;
    for &v in values {
        if v < lo || v > hi || v.is_nan() {
            overflow += 1;
            continue;
        }
        let idx = if v == hi {
            bins - 1 // last bin is closed on the right
        } else {
            (((v - lo) / width) as usize).min(bins - 1)
        };
        counts[idx] += 1;
    }
    Ok(Histogram { bin_edges, counts, overflow, normalized: false })
}
