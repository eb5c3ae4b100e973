use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported matrix dimension: one `u64` per row.
pub const MAX_DIM: usize = 64;

/// Square 0/1 matrix with each row packed into a `u64` (bit `j` = column `j`).
///
/// The ordering is lexicographic on the row-major flattening with `0 < 1`,
/// which is the canonical graph order used throughout the crate.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BoolMatrix {
    dim: usize,
    rows: Vec<u64>,
}

impl BoolMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim <= MAX_DIM, "matrix dimension {dim} exceeds {MAX_DIM}");
        BoolMatrix { dim, rows: vec![0; dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.rows[i] = 1 << i;
        }
        m
    }

    /// Builds a matrix from packed rows. Bits at or above `rows.len()` must be clear.
    pub fn from_row_bits(rows: Vec<u64>) -> Self {
        let dim = rows.len();
        assert!(dim <= MAX_DIM);
        debug_assert!(rows.iter().all(|r| dim == 64 || r >> dim == 0));
        BoolMatrix { dim, rows }
    }

    /// Parses rows written as `"0101"` strings.
    pub fn parse_rows<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let dim = rows.len();
        if dim > MAX_DIM {
            return Err(Error::TooManyLabels { got: dim, max: MAX_DIM });
        }
        let mut m = Self::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref().trim();
            if row.len() != dim {
                return Err(Error::DimensionMismatch(dim, row.len()));
            }
            for (j, c) in row.chars().enumerate() {
                match c {
                    '0' => {}
                    '1' => m.set(i, j, true),
                    _ => return Err(Error::InvalidParameter(format!("matrix entry `{c}`"))),
                }
            }
        }
        Ok(m)
    }

    /// Parses the compact `"0001;0011;0001;0000"` notation.
    pub fn parse(s: &str) -> Result<Self> {
        let rows: Vec<&str> = if s.trim().is_empty() { Vec::new() } else { s.split(';').collect() };
        Self::parse_rows(&rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.dim && j < self.dim);
        if value {
            self.rows[i] |= 1 << j;
        } else {
            self.rows[i] &= !(1 << j);
        }
    }

    #[inline]
    pub fn row(&self, i: usize) -> u64 {
        self.rows[i]
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn count_ones(&self) -> u32 {
        self.rows.iter().map(|r| r.count_ones()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    /// Entry-wise `self <= other`.
    pub fn is_subset_of(&self, other: &BoolMatrix) -> bool {
        self.dim == other.dim && self.rows.iter().zip(&other.rows).all(|(a, b)| a & !b == 0)
    }

    pub fn union(&self, other: &BoolMatrix) -> BoolMatrix {
        assert_eq!(self.dim, other.dim);
        BoolMatrix {
            dim: self.dim,
            rows: self.rows.iter().zip(&other.rows).map(|(a, b)| a | b).collect(),
        }
    }

    pub fn intersection(&self, other: &BoolMatrix) -> BoolMatrix {
        assert_eq!(self.dim, other.dim);
        BoolMatrix {
            dim: self.dim,
            rows: self.rows.iter().zip(&other.rows).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn with_diagonal(&self, value: bool) -> BoolMatrix {
        let mut m = self.clone();
        for i in 0..self.dim {
            m.set(i, i, value);
        }
        m
    }

    pub fn has_diagonal_entry(&self) -> bool {
        (0..self.dim).any(|i| self.get(i, i))
    }

    /// Whole matrix packed into one word, `dim` bits per row. Only for `dim <= 8`.
    pub fn pack(&self) -> u64 {
        assert!(self.dim <= 8, "pack() needs dim <= 8");
        self.rows
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &r)| acc | r << (i * self.dim))
    }

    pub fn unpack(dim: usize, packed: u64) -> BoolMatrix {
        assert!(dim <= 8);
        let mask = if dim == 0 { 0 } else { (1u64 << dim) - 1 };
        BoolMatrix { dim, rows: (0..dim).map(|i| packed >> (i * dim) & mask).collect() }
    }

    /// Row strings, e.g. `["0001", "0011"]`.
    pub fn row_strings(&self) -> Vec<String> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| if self.get(i, j) { '1' } else { '0' }).collect())
            .collect()
    }

    /// Iterator over set entries `(i, j)`, row-major.
    pub fn ones(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.dim).flat_map(move |i| {
            let mut r = self.rows[i];
            std::iter::from_fn(move || {
                if r == 0 {
                    return None;
                }
                let j = r.trailing_zeros() as usize;
                r &= r - 1;
                Some((i, j))
            })
        })
    }
}

impl Ord for BoolMatrix {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dim.cmp(&other.dim).then_with(|| {
            for (a, b) in self.rows.iter().zip(&other.rows) {
                if a != b {
                    let first = (a ^ b).trailing_zeros();
                    return if a >> first & 1 == 1 { Ordering::Greater } else { Ordering::Less };
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for BoolMatrix {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BoolMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.row_strings().join(";"))
    }
}

impl fmt::Debug for BoolMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BoolMatrix({self})")
    }
}

impl Serialize for BoolMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.row_strings().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BoolMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<String>::deserialize(deserializer)?;
        BoolMatrix::parse_rows(&rows).map_err(serde::de::Error::custom)
    }
}
