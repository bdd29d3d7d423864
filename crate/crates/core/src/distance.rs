//! Symbol-distance lookup table, the lower-bounding MINDIST measure,
//! Euclidean distance and the tightness of lower bound.

use crate::error::{Error, Result};
use crate::symbolizer::{symbolize, Breakpoints, SymbolWord, SymbolizerModel};
use crate::timeseries::{paa, TimeSeries};

/// `a x a` table of minimal distances between symbol bins.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceTable {
    alphabet_size: usize,
    cells: Vec<f64>,
}

impl DistanceTable {
    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn cell(&self, q: usize, c: usize) -> f64 {
        self.cells[q * self.alphabet_size + c]
    }

    /// Row-major cells.
    pub fn cells(&self) -> &[f64] {
        &self.cells
    }

    pub(crate) fn from_cells(alphabet_size: usize, cells: Vec<f64>) -> Self {
        debug_assert_eq!(cells.len(), alphabet_size * alphabet_size);
        Self { alphabet_size, cells }
    }
}

/// Build the lookup table from the interior breakpoints.
///
/// With 0-based symbols and 0-based interior breakpoints `b`, the gap between
/// bins `q < c` is `b[c - 1] - b[q]`: the lower edge of the greater bin minus
/// the upper edge of the smaller one. Bins that touch (`|q - c| <= 1`) are at
/// distance zero.
pub fn build_lookup(breakpoints: &Breakpoints) -> DistanceTable {
    let a = breakpoints.alphabet_size();
    let b = breakpoints.interior();
    let mut cells = vec![0.0; a * a];
    for q in 0..a {
        for c in 0..a {
            let (lo, hi) = if q < c { (q, c) } else { (c, q) };
            if hi - lo > 1 {
                cells[q * a + c] = b[hi - 1] - b[lo];
            }
        }
    }
    DistanceTable {
        alphabet_size: a,
        cells,
    }
}

/// `sqrt(n / w) * sqrt(sum cell(q_i, c_i)^2)`; never exceeds the Euclidean
/// distance between the series the words were built from.
pub fn mindist(q: &SymbolWord, c: &SymbolWord, table: &DistanceTable, n: usize) -> Result<f64> {
    if q.len() != c.len() {
        return Err(Error::WordMismatch(format!("word lengths {} and {}", q.len(), c.len())));
    }
    if q.alphabet_size() != c.alphabet_size() || q.alphabet_size() != table.alphabet_size() {
        return Err(Error::WordMismatch(format!(
            "alphabet sizes {}, {} with table of size {}",
            q.alphabet_size(),
            c.alphabet_size(),
            table.alphabet_size()
        )));
    }
    let w = q.len();
    if n < w {
        return Err(Error::InvalidLength { n, w });
    }
    let sum: f64 = q
        .symbols()
        .iter()
        .zip(c.symbols())
        .map(|(&x, &y)| table.cell(x as usize, y as usize).powi(2))
        .sum();
    Ok((n as f64 / w as f64).sqrt() * sum.sqrt())
}

pub fn euclidean(a: &TimeSeries, b: &TimeSeries) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt())
}

/// Tightness of lower bound, `MINDIST / ED`, for two series encoded with
/// `w` PAA segments. `None` when the series are identical (ED = 0).
pub fn tlb(q: &TimeSeries, c: &TimeSeries, model: &SymbolizerModel, w: usize) -> Result<Option<f64>> {
    let ed = euclidean(q, c)?;
    let qw = symbolize(model, &paa(q, w)?);
    let cw = symbolize(model, &paa(c, w)?);
    let md = mindist(&qw, &cw, model.lookup(), q.len())?;
    Ok((ed > 0.0).then(|| md / ed))
}
