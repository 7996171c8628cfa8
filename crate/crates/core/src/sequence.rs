use num_complex::Complex64;

use crate::error::{Error, Result};

/// A finitely supported complex sequence on the integer lattice with every
/// entry strictly inside the unit disk. Entries outside
/// `offset..offset + values.len()` are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Sequence {
    offset: i64,
    values: Vec<Complex64>,
}

impl Sequence {
    pub fn new(offset: i64, values: Vec<Complex64>) -> Result<Self> {
        for (i, v) in values.iter().enumerate() {
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "non-finite entry at site {}",
                    offset + i as i64
                )));
            }
            if v.norm_sqr() >= 1.0 {
                return Err(Error::InvalidInput(format!(
                    "entry at site {} has modulus {} >= 1",
                    offset + i as i64,
                    v.norm()
                )));
            }
        }
        Ok(Self { offset, values })
    }

    pub fn zeros(offset: i64, len: usize) -> Self {
        Self {
            offset,
            values: vec![Complex64::new(0.0, 0.0); len],
        }
    }

    pub fn empty() -> Self {
        Self::zeros(0, 0)
    }

    /// Construction without the modulus check, for values the caller has
    /// already guarded.
    pub(crate) fn from_trusted(offset: i64, values: Vec<Complex64>) -> Self {
        Self { offset, values }
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// One past the last stored index.
    pub fn end(&self) -> i64 {
        self.offset + self.values.len() as i64
    }

    pub fn get(&self, k: i64) -> Complex64 {
        let i = k - self.offset;
        if i < 0 || i >= self.values.len() as i64 {
            Complex64::new(0.0, 0.0)
        } else {
            self.values[i as usize]
        }
    }

    /// `(index, value)` over the stored block.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, v)| (self.offset + i as i64, *v))
    }

    /// Smallest and largest index of a nonzero entry.
    pub fn support(&self) -> Option<(i64, i64)> {
        let zero = Complex64::new(0.0, 0.0);
        let first = self.values.iter().position(|v| *v != zero)?;
        let last = self.values.iter().rposition(|v| *v != zero)?;
        Some((self.offset + first as i64, self.offset + last as i64))
    }

    /// `max |k|` over the nonzero support (0 for the zero sequence).
    pub fn support_radius(&self) -> u64 {
        self.support()
            .map(|(lo, hi)| lo.unsigned_abs().max(hi.unsigned_abs()))
            .unwrap_or(0)
    }

    /// `sum log(1 - |q(k)|^2)`, the logarithm of the conserved Szego product.
    pub fn log_szego_product(&self) -> f64 {
        self.values.iter().map(|v| (-v.norm_sqr()).ln_1p()).sum()
    }

    /// The sequence restricted to `lo..=hi` (zero elsewhere), stored on exactly
    /// that nonzero part.
    pub fn restrict(&self, lo: i64, hi: i64) -> Self {
        let a = lo.max(self.offset);
        let b = hi.min(self.end() - 1);
        if a > b {
            return Self::empty();
        }
        let i0 = (a - self.offset) as usize;
        let i1 = (b - self.offset) as usize;
        Self {
            offset: a,
            values: self.values[i0..=i1].to_vec(),
        }
    }

    /// `k -> q(k - s)`: the sequence translated right by `s`.
    pub fn shifted(&self, s: i64) -> Self {
        Self {
            offset: self.offset + s,
            values: self.values.clone(),
        }
    }

    /// `k -> q(-k)`.
    pub fn reflected(&self) -> Self {
        Self {
            offset: -(self.end() - 1),
            values: self.values.iter().rev().copied().collect(),
        }
    }

    pub fn negated(&self) -> Self {
        Self {
            offset: self.offset,
            values: self.values.iter().map(|v| -v).collect(),
        }
    }

    /// `sqrt(sum |q(m)|^2)` over indices outside `lo..=hi`.
    pub fn l2_outside(&self, lo: i64, hi: i64) -> f64 {
        self.iter()
            .filter(|(k, _)| *k < lo || *k > hi)
            .map(|(_, v)| v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_modulus(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}
