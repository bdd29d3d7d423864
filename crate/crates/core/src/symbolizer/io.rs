//! Versioned binary model file.
//!
//! Layout (all integers and floats little-endian):
//!
//! ```text
//! magic        6 bytes  "EDWSAX"
//! version      u16
//! alphabet     u16      a
//! provenance   u8       0 = Gaussian, 1 = KDE, 2 = custom
//!   (KDE only) kernel u8, rule u8, fixed h f64, bandwidth f64,
//!              sample count u64, estimate-on u8
//! breakpoints  (a - 1) x f64
//! centroids    a x f64
//! lookup       a * a x f64, row-major
//! ```

use std::fs;
use std::path::Path;

use crate::density::{BandwidthRule, Kernel};
use crate::distance::{build_lookup, DistanceTable};
use crate::error::{Error, Result};
use crate::symbolizer::{Breakpoints, Centroids, DensitySummary, EstimateOn, Provenance, SymbolizerModel};

pub const MAGIC: &[u8; 6] = b"EDWSAX";
pub const FORMAT_VERSION: u16 = 1;

pub fn serialize_model(model: &SymbolizerModel) -> Vec<u8> {
    let a = model.alphabet_size();
    let mut out = Vec::with_capacity(64 + 8 * (a * a + 2 * a));
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(a as u16).to_le_bytes());
    match model.provenance() {
        Provenance::Gaussian => out.push(0),
        Provenance::Custom => out.push(2),
        Provenance::Kde(s) => {
            out.push(1);
            out.push(s.kernel.code());
            out.push(s.rule.code());
            let fixed = match s.rule {
                BandwidthRule::Fixed(h) => h,
                _ => 0.0,
            };
            out.extend_from_slice(&fixed.to_le_bytes());
            out.extend_from_slice(&s.bandwidth.to_le_bytes());
            out.extend_from_slice(&s.sample_count.to_le_bytes());
            out.push(match s.estimate_on {
                EstimateOn::Raw => 0,
                EstimateOn::Paa => 1,
            });
        }
    }
    let floats = model
        .breakpoints()
        .interior()
        .iter()
        .chain(model.centroids().values())
        .chain(model.lookup().cells());
    for v in floats {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8]> {
        let end = self.pos + n;
        let slice = self
            .bytes
            .get(self.pos..end)
            .ok_or_else(|| Error::CorruptModel(format!("truncated while reading {what} at byte {}", self.pos)))?;
        self.pos = end;
        Ok(slice)
    }

    fn u8(&mut self, what: &str) -> Result<u8> {
        Ok(self.take(1, what)?[0])
    }

    fn u16(&mut self, what: &str) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2, what)?.try_into().unwrap()))
    }

    fn u64(&mut self, what: &str) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }

    fn f64(&mut self, what: &str) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }

    fn f64s(&mut self, n: usize, what: &str) -> Result<Vec<f64>> {
        (0..n).map(|_| self.f64(what)).collect()
    }
}

pub fn deserialize_model(bytes: &[u8]) -> Result<SymbolizerModel> {
    let mut r = Reader { bytes, pos: 0 };
    if r.take(MAGIC.len(), "magic")? != MAGIC {
        return Err(Error::CorruptModel("bad magic, not an EDWSAX model".into()));
    }
    let version = r.u16("version")?;
    if version != FORMAT_VERSION {
        return Err(Error::FormatVersionMismatch {
            found: version,
            supported: FORMAT_VERSION,
        });
    }
    let a = r.u16("alphabet size")? as usize;
    let provenance = match r.u8("provenance")? {
        0 => Provenance::Gaussian,
        1 => {
            let kernel =
                Kernel::from_code(r.u8("kernel")?).ok_or_else(|| Error::CorruptModel("unknown kernel code".into()))?;
            let rule_code = r.u8("bandwidth rule")?;
            let fixed = r.f64("fixed bandwidth")?;
            let rule = BandwidthRule::from_code(rule_code, fixed)
                .ok_or_else(|| Error::CorruptModel(format!("unknown bandwidth rule code {rule_code}")))?;
            let bandwidth = r.f64("bandwidth")?;
            let sample_count = r.u64("sample count")?;
            let estimate_on = match r.u8("estimate-on")? {
                0 => EstimateOn::Raw,
                1 => EstimateOn::Paa,
                other => return Err(Error::CorruptModel(format!("unknown estimate-on code {other}"))),
            };
            Provenance::Kde(DensitySummary {
                kernel,
                rule,
                bandwidth,
                sample_count,
                estimate_on,
            })
        }
        2 => Provenance::Custom,
        other => return Err(Error::CorruptModel(format!("unknown provenance code {other}"))),
    };
    if !(2..=256).contains(&a) {
        return Err(Error::CorruptModel(format!("alphabet size {a} out of range")));
    }
    let corrupt = |e: Error| Error::CorruptModel(e.to_string());
    let breakpoints = Breakpoints::new(r.f64s(a - 1, "breakpoints")?).map_err(corrupt)?;
    let centroids = Centroids::new(r.f64s(a, "centroids")?, &breakpoints).map_err(corrupt)?;
    let stored = DistanceTable::from_cells(a, r.f64s(a * a, "lookup table")?);
    if r.pos != bytes.len() {
        return Err(Error::CorruptModel(format!(
            "{} trailing bytes after model",
            bytes.len() - r.pos
        )));
    }
    let regenerated = build_lookup(&breakpoints);
    let identical = stored
        .cells()
        .iter()
        .zip(regenerated.cells())
        .all(|(x, y)| x.to_bits() == y.to_bits());
    if !identical {
        return Err(Error::CorruptModel(
            "stored lookup table does not match its breakpoints".into(),
        ));
    }
    Ok(SymbolizerModel::assemble(breakpoints, centroids, provenance))
}

impl SymbolizerModel {
    pub fn to_bytes(&self) -> Vec<u8> {
        serialize_model(self)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        deserialize_model(bytes)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_bytes()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::from_bytes(&bytes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolizer::{train, TrainConfig};
    use crate::timeseries::TimeSeries;

    fn trained() -> SymbolizerModel {
        let series: Vec<TimeSeries> = (0..4)
            .map(|k| TimeSeries::new((0..64).map(|i| ((i * (k + 3)) as f64 * 0.37).sin()).collect()).unwrap())
            .collect();
        train(&series, 7, &TrainConfig::default()).unwrap()
    }

    #[test]
    fn round_trip_trained_and_gaussian() {
        let m = trained();
        let bytes = m.to_bytes();
        assert_eq!(&bytes[..6], MAGIC);
        assert_eq!(SymbolizerModel::from_bytes(&bytes).unwrap(), m);
        let g = SymbolizerModel::gaussian(100).unwrap();
        assert_eq!(SymbolizerModel::from_bytes(&g.to_bytes()).unwrap(), g);
        let bp = Breakpoints::new(vec![-1.0, 2.0]).unwrap();
        let c = Centroids::new(vec![-2.0, 0.5, 3.0], &bp).unwrap();
        let custom = SymbolizerModel::from_parts(bp, c).unwrap();
        assert_eq!(SymbolizerModel::from_bytes(&custom.to_bytes()).unwrap(), custom);
    }

    #[test]
    fn fixed_rule_round_trip() {
        let series = vec![TimeSeries::new((0..50).map(|i| (i as f64).sqrt()).collect()).unwrap()];
        let cfg = TrainConfig {
            bandwidth: BandwidthRule::Fixed(0.125),
            estimate_on: EstimateOn::Paa,
            ..TrainConfig::default()
        };
        let m = train(&series, 4, &cfg).unwrap();
        assert_eq!(SymbolizerModel::from_bytes(&m.to_bytes()).unwrap(), m);
    }

    #[test]
    fn truncation_is_corrupt() {
        let bytes = trained().to_bytes();
        for cut in [0, 3, 7, 9, 10, 20, bytes.len() - 1] {
            assert!(
                matches!(SymbolizerModel::from_bytes(&bytes[..cut]), Err(Error::CorruptModel(_))),
                "cut at {cut}"
            );
        }
        let mut extra = bytes.clone();
        extra.push(0);
        assert!(matches!(
            SymbolizerModel::from_bytes(&extra),
            Err(Error::CorruptModel(_))
        ));
    }

    #[test]
    fn version_mismatch() {
        let mut bytes = trained().to_bytes();
        bytes[6..8].copy_from_slice(&2u16.to_le_bytes());
        assert!(matches!(
            SymbolizerModel::from_bytes(&bytes),
            Err(Error::FormatVersionMismatch { found: 2, supported: 1 })
        ));
    }

    #[test]
    fn tampered_table_detected() {
        let mut bytes = trained().to_bytes();
        let n = bytes.len();
        bytes[n - 20] ^= 0x40;
        assert!(matches!(
            SymbolizerModel::from_bytes(&bytes),
            Err(Error::CorruptModel(_))
        ));
    }
}
