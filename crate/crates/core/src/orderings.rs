//! `r`-orderings and `r`-matrices.
//!
//! With `d = gcd(n, r)`, the `r`-matrix of a length-`n` word is the
//! `d × n/d` array whose entry `(i, j)` is the word's element at position
//! `(i - j·r) mod n`. That position map is the single source of truth for
//! the layout; for `d = 1` the single row is the `r`-ordering (decimation by
//! `-r`).

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::residue::BitSequence;

/// Least positive residue of `(r/d)^{-1}` modulo `n/d`, `d = gcd(n, r)`.
///
/// Returns 0 when `n/d = 1` (i.e. `r ≡ 0 mod n`), a degenerate case the
/// closed forms reject before getting here.
pub fn e_value(r: u64, n: u64) -> u64 {
    assert!(n >= 1, "n must be positive");
    let d = n.gcd(&r);
    let m = n / d;
    if m == 1 {
        return 0;
    }
    let rd = ((r / d) % m) as i128;
    let ext = rd.extended_gcd(&(m as i128));
    debug_assert_eq!(ext.gcd, 1);
    ext.x.rem_euclid(m as i128) as u64
}

/// A `d × n/d` integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RMatrix {
    n: u32,
    r: u64,
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

impl RMatrix {
    fn shape(n: u32, r: u64) -> Result<(usize, usize)> {
        if n == 0 || r == 0 {
            return Err(Error::InvalidParameter(format!(
                "r-matrix needs n, r >= 1 (n={n}, r={r})"
            )));
        }
        let d = u64::from(n).gcd(&r) as usize;
        Ok((d, n as usize / d))
    }

    /// Bit position of entry `(i, j)`.
    pub fn position(&self, i: usize, j: usize) -> usize {
        let n = self.n as i128;
        (i as i128 - j as i128 * (self.r % self.n as u64) as i128).rem_euclid(n) as usize
    }

    /// Reindexes a length-`n` word (`values[k]` is position `k`).
    pub fn from_sequence(values: &[i64], r: u64) -> Result<Self> {
        let n = u32::try_from(values.len())
            .map_err(|_| Error::InvalidParameter("word too long".into()))?;
        let (rows, cols) = Self::shape(n, r)?;
        let mut m = Self {
            n,
            r,
            rows,
            cols,
            entries: vec![0; rows * cols],
        };
        for i in 0..rows {
            for j in 0..cols {
                m.entries[i * cols + j] = values[m.position(i, j)];
            }
        }
        Ok(m)
    }

    /// Builds from explicit rows; they must have shape `gcd(n,r) × n/gcd(n,r)`.
    pub fn from_rows(n: u32, r: u64, rows: Vec<Vec<i64>>) -> Result<Self> {
        let (d, cols) = Self::shape(n, r)?;
        if rows.len() != d || rows.iter().any(|row| row.len() != cols) {
            return Err(Error::InvalidParameter(format!(
                "r-matrix for n={n}, r={r} must be {d}x{cols}"
            )));
        }
        Ok(Self {
            n,
            r,
            rows: d,
            cols,
            entries: rows.concat(),
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// The underlying length-`n` word.
    pub fn to_sequence(&self) -> Vec<i64> {
        let mut out = vec![0; self.n as usize];
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[self.position(i, j)] = self.get(i, j);
            }
        }
        out
    }

    pub fn entry_sum(&self) -> i64 {
        self.entries.iter().sum()
    }
}

impl fmt::Display for RMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .entries
            .iter()
            .map(|v| v.to_string().len())
            .max()
            .unwrap_or(1);
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|v| format!("{v:>width$}")).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// `r`-matrix of a binary word.
pub fn to_r_matrix(a: &BitSequence, r: u64) -> Result<RMatrix> {
    let values: Vec<i64> = a.as_slice().iter().map(|&b| i64::from(b)).collect();
    RMatrix::from_sequence(&values, r)
}

/// Reassembles the binary word `Σ a_{i,j} 2^{(i - j·r) mod n}`.
pub fn from_r_matrix(m: &RMatrix) -> Result<BitSequence> {
    if let Some(v) = m.entries.iter().find(|v| !(0..=1).contains(*v)) {
        return Err(Error::InvalidParameter(format!(
            "r-matrix entry {v} is not a bit"
        )));
    }
    BitSequence::new(m.to_sequence().into_iter().map(|v| v as u8).collect())
}

/// A word in `r`-ordering: entry `k` is the regular word's bit `-k·r mod n`.
/// Only exists when `gcd(r, n) = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ROrderedSeq {
    r: u64,
    entries: Vec<u8>,
}

impl ROrderedSeq {
    pub fn new(r: u64, entries: Vec<u8>) -> Result<Self> {
        let n = entries.len() as u64;
        if n < 2 || n.gcd(&r) != 1 {
            return Err(Error::InvalidParameter(format!(
                "r-ordering needs gcd(r, n) = 1 (r={r}, n={n})"
            )));
        }
        if entries.iter().any(|&b| b > 1) {
            return Err(Error::InvalidParameter(
                "r-ordered entries must be bits".into(),
            ));
        }
        Ok(Self { r, entries })
    }

    /// Decimates a regular word by `-r`.
    pub fn from_bits(a: &BitSequence, r: u64) -> Result<Self> {
        let n = a.len() as i64;
        let r_ = (r % n as u64) as i64;
        let entries = (0..n).map(|k| a.get(-k * r_)).collect();
        Self::new(r, entries)
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }
}

/// Back to regular order: bit `i` is entry `-i·e mod n`, `e = r^{-1} mod n`.
pub fn regular_from_r_ordered(a: &ROrderedSeq) -> Result<BitSequence> {
    let n = a.entries.len() as u64;
    let e = e_value(a.r, n) as i128;
    let bits = (0..n as i128)
        .map(|i| a.entries[(-i * e).rem_euclid(n as i128) as usize])
        .collect();
    BitSequence::new(bits)
}
