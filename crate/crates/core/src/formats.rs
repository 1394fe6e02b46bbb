//! JSON file formats for datasets, features and BN states.
//!
//! A complex scalar is `[re, im]`, a matrix is an array of rows. Every file
//! carries `format_version`, `kind` and the generating `seed`.

use num_complex::Complex;
use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::bn::BnState;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, RealMatrix};
use crate::radar::{Dataset, DatasetSpec, DiskState, LabeledSeries, ProductFeature, Projection, Split, TimeSeries};
use crate::reference::SpdPoint;
use crate::siegel::SiegelDiskPoint;

pub const FORMAT_VERSION: u32 = 1;

pub type JsonComplex = [f64; 2];
pub type JsonMatrix = Vec<Vec<JsonComplex>>;
pub type JsonRealMatrix = Vec<Vec<f64>>;

pub fn complex_to_json(z: Complex<f64>) -> JsonComplex {
    [z.re, z.im]
}

pub fn complex_from_json(z: JsonComplex) -> Complex<f64> {
    Complex::new(z[0], z[1])
}

pub fn matrix_to_json(m: &ComplexMatrix<f64>) -> JsonMatrix {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|z| complex_to_json(*z)).collect())
        .collect()
}

pub fn matrix_from_json(rows: &JsonMatrix) -> Result<ComplexMatrix<f64>> {
    let rows: Vec<Vec<Complex<f64>>> = rows
        .iter()
        .map(|r| r.iter().map(|z| complex_from_json(*z)).collect())
        .collect();
    ComplexMatrix::from_rows(&rows)
}

pub fn real_matrix_to_json(m: &RealMatrix<f64>) -> JsonRealMatrix {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

pub fn real_matrix_from_json(rows: &JsonRealMatrix) -> Result<RealMatrix<f64>> {
    RealMatrix::from_rows(rows)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitJson {
    Train,
    Test,
}

impl From<Split> for SplitJson {
    fn from(s: Split) -> Self {
        match s {
            Split::Train => SplitJson::Train,
            Split::Test => SplitJson::Test,
        }
    }
}

impl From<SplitJson> for Split {
    fn from(s: SplitJson) -> Self {
        match s {
            SplitJson::Train => Split::Train,
            SplitJson::Test => Split::Test,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecJson {
    pub classes: usize,
    pub per_class: usize,
    pub test_per_class: usize,
    pub dim: usize,
    pub length: usize,
    pub order: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub label: usize,
    pub index: usize,
    pub split: SplitJson,
    pub samples: Vec<Vec<JsonComplex>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetFile {
    pub format_version: u32,
    pub kind: String,
    pub seed: u64,
    pub spec: SpecJson,
    pub series: Vec<SeriesRecord>,
}

impl DatasetFile {
    pub const KIND: &'static str = "dataset";

    pub fn from_dataset(ds: &Dataset<f64>) -> Self {
        let s = ds.spec;
        Self {
            format_version: FORMAT_VERSION,
            kind: Self::KIND.into(),
            seed: s.seed,
            spec: SpecJson {
                classes: s.classes,
                per_class: s.per_class,
                test_per_class: s.test_per_class,
                dim: s.dim,
                length: s.length,
                order: s.order,
            },
            series: ds
                .records
                .iter()
                .map(|r| SeriesRecord {
                    label: r.label,
                    index: r.index,
                    split: r.split.into(),
                    samples: r
                        .series
                        .samples
                        .iter()
                        .map(|v| v.iter().map(|z| complex_to_json(*z)).collect())
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_dataset(&self) -> Result<Dataset<f64>> {
        check_header(self.format_version, &self.kind, Self::KIND)?;
        let spec = DatasetSpec {
            classes: self.spec.classes,
            per_class: self.spec.per_class,
            test_per_class: self.spec.test_per_class,
            dim: self.spec.dim,
            length: self.spec.length,
            order: self.spec.order,
            seed: self.seed,
        };
        let records = self
            .series
            .iter()
            .map(|r| {
                let samples = r
                    .samples
                    .iter()
                    .map(|v| v.iter().map(|z| complex_from_json(*z)).collect())
                    .collect();
                Ok(LabeledSeries {
                    label: r.label,
                    index: r.index,
                    split: r.split.into(),
                    series: TimeSeries::new(spec.dim, samples)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Dataset { spec, records })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureRecord {
    pub label: usize,
    pub index: usize,
    pub split: SplitJson,
    pub p0: JsonRealMatrix,
    pub w: Vec<JsonMatrix>,
    /// Components pass the SPD and disk membership checks.
    pub valid: bool,
    pub clamped_eigenvalues: usize,
    pub rescaled: usize,
}

impl FeatureRecord {
    pub fn from_projection(label: usize, index: usize, split: Split, p: &Projection<f64>) -> Self {
        let mut rec = Self::from_feature(label, index, split, &p.feature);
        rec.clamped_eigenvalues = p.clamped_eigenvalues;
        rec.rescaled = p.rescaled;
        rec
    }

    pub fn from_feature(label: usize, index: usize, split: Split, f: &ProductFeature<f64>) -> Self {
        let mut rec = Self {
            label,
            index,
            split: split.into(),
            p0: real_matrix_to_json(f.p0.matrix()),
            w: f.w.iter().map(|x| matrix_to_json(x.matrix())).collect(),
            valid: false,
            clamped_eigenvalues: 0,
            rescaled: 0,
        };
        rec.valid = rec.to_feature().is_ok();
        rec
    }

    pub fn to_feature(&self) -> Result<ProductFeature<f64>> {
        let p0 = SpdPoint::new(real_matrix_from_json(&self.p0)?)?;
        let w = self
            .w
            .iter()
            .map(|m| SiegelDiskPoint::new(matrix_from_json(m)?))
            .collect::<Result<Vec<_>>>()?;
        ProductFeature::new(p0, w)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeaturesFile {
    pub format_version: u32,
    pub kind: String,
    pub seed: u64,
    pub classes: usize,
    pub dim: usize,
    pub order: usize,
    pub features: Vec<FeatureRecord>,
}

impl FeaturesFile {
    pub const KIND: &'static str = "features";

    pub fn new(seed: u64, classes: usize, dim: usize, order: usize, features: Vec<FeatureRecord>) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            kind: Self::KIND.into(),
            seed,
            classes,
            dim,
            order,
            features,
        }
    }

    pub fn check(&self) -> Result<()> {
        check_header(self.format_version, &self.kind, Self::KIND)
    }

    /// Parsed features and labels, failing on the first invalid record.
    pub fn features(&self) -> Result<(Vec<ProductFeature<f64>>, Vec<usize>)> {
        self.check()?;
        let feats = self
            .features
            .iter()
            .map(|r| {
                let f = r.to_feature()?;
                if f.dim() != self.dim || f.order() != self.order {
                    return Err(Error::Format(format!(
                        "record {} of class {} has size {} and order {}",
                        r.index,
                        r.label,
                        f.dim(),
                        f.order()
                    )));
                }
                Ok(f)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((feats, self.features.iter().map(|r| r.label).collect()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlotStateJson {
    pub running_mean: JsonMatrix,
    pub bias: JsonMatrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BnStateFile {
    pub format_version: u32,
    pub kind: String,
    pub seed: u64,
    pub dim: usize,
    pub momentum: f64,
    pub slots: Vec<SlotStateJson>,
}

impl BnStateFile {
    pub const KIND: &'static str = "bn-state";

    pub fn from_states(seed: u64, dim: usize, momentum: f64, states: &[DiskState<f64>]) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            kind: Self::KIND.into(),
            seed,
            dim,
            momentum,
            slots: states
                .iter()
                .map(|s| SlotStateJson {
                    running_mean: matrix_to_json(s.running_mean.matrix()),
                    bias: matrix_to_json(s.bias.matrix()),
                })
                .collect(),
        }
    }

    pub fn to_states(&self) -> Result<Vec<DiskState<f64>>> {
        check_header(self.format_version, &self.kind, Self::KIND)?;
        self.slots
            .iter()
            .map(|s| {
                Ok(BnState {
                    running_mean: SiegelDiskPoint::new(matrix_from_json(&s.running_mean)?)?,
                    bias: SiegelDiskPoint::new(matrix_from_json(&s.bias)?)?,
                    momentum: self.momentum,
                })
            })
            .collect()
    }
}

fn check_header(version: u32, kind: &str, expected: &str) -> Result<()> {
    if version != FORMAT_VERSION {
        return Err(Error::Format(format!(
            "format version {version}, expected {FORMAT_VERSION}"
        )));
    }
    if kind != expected {
        return Err(Error::Format(format!("file kind {kind:?}, expected {expected:?}")));
    }
    Ok(())
}

pub fn to_json<S: Serialize>(value: &S) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Format(e.to_string()))
}

pub fn from_json<S: DeserializeOwned>(text: &str) -> Result<S> {
    serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radar::{generate_dataset, represent_all, DatasetSpec};

    fn small_spec() -> DatasetSpec {
        DatasetSpec {
            classes: 2,
            per_class: 3,
            test_per_class: 1,
            dim: 2,
            length: 12,
            order: 2,
            seed: 5,
        }
    }

    #[test]
    fn dataset_roundtrip() {
        let ds = generate_dataset::<f64>(&small_spec()).unwrap();
        let file = DatasetFile::from_dataset(&ds);
        let back: DatasetFile = from_json(&to_json(&file).unwrap()).unwrap();
        assert_eq!(back.to_dataset().unwrap(), ds);
    }

    #[test]
    fn complex_encoding() {
        let m = ComplexMatrix::from_rows(&[vec![Complex::new(1.0, -2.0), Complex::new(0.5, 0.0)]]).unwrap();
        let text = serde_json::to_string(&matrix_to_json(&m)).unwrap();
        assert_eq!(text, "[[[1.0,-2.0],[0.5,0.0]]]");
    }

    #[test]
    fn feature_roundtrip() {
        let ds = generate_dataset::<f64>(&small_spec()).unwrap();
        let series: Vec<_> = ds.records.iter().map(|r| &r.series).collect();
        let proj = represent_all(&series, 2).unwrap();
        let recs: Vec<_> = ds
            .records
            .iter()
            .zip(&proj)
            .map(|(r, p)| FeatureRecord::from_projection(r.label, r.index, r.split, p))
            .collect();
        assert!(recs.iter().all(|r| r.valid));
        let file = FeaturesFile::new(5, 2, 2, 2, recs);
        let back: FeaturesFile = from_json(&to_json(&file).unwrap()).unwrap();
        let (feats, labels) = back.features().unwrap();
        assert_eq!(labels, vec![0, 0, 0, 0, 1, 1, 1, 1]);
        assert_eq!(feats[0], proj[0].feature);
    }

    #[test]
    fn wrong_kind_is_rejected() {
        let mut file = FeaturesFile::new(0, 1, 1, 1, Vec::new());
        file.kind = "dataset".into();
        assert!(matches!(file.features(), Err(Error::Format(_))));
    }
}
