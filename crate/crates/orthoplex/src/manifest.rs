//! JSON code manifests: check matrices as sorted column lists plus label tables.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::chain::{repetition_complex, tensor_power, validate_complex, ComplexReport, Label};
use crate::error::{Error, Result};
use crate::f2::BitMatrix;
use crate::hgp::{build_css, orthoplex_partition, standard_hgp_partition, CssCode};
use crate::lattice::LatticeShape;
use crate::model::OrthoplexModel;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    OrthoplexPd,
    StandardHgp,
    Custom,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseMatrix {
    pub cols: usize,
    pub rows: Vec<Vec<usize>>,
}

impl From<&BitMatrix> for SparseMatrix {
    fn from(m: &BitMatrix) -> Self {
        Self {
            cols: m.cols(),
            rows: m.to_sparse(),
        }
    }
}

impl SparseMatrix {
    pub fn to_bit_matrix(&self) -> Result<BitMatrix> {
        if let Some(r) = self.rows.iter().find(|r| r.windows(2).any(|w| w[0] >= w[1])) {
            return Err(Error::Manifest(format!("row {r:?} is not strictly increasing")));
        }
        BitMatrix::from_sparse(self.cols, &self.rows)
    }
}

/// Provenance of the file; ignored when comparing manifests.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool_version: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeManifest {
    pub format_version: u32,
    pub kind: ModelKind,
    pub sizes: Vec<usize>,
    pub periodic: Vec<bool>,
    /// Qubit degree `q` of a standard product.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    pub hx: SparseMatrix,
    pub hz: SparseMatrix,
    pub qubit_labels: Vec<Label>,
    pub x_labels: Vec<Label>,
    pub z_labels: Vec<Label>,
    #[serde(default)]
    pub metadata: Metadata,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub css: bool,
    /// Boundary checks of the product complex the code was cut from.
    pub chain: Option<ComplexReport>,
    /// The stored matrices equal a fresh build of the same kind and shape.
    pub matches_reference: Option<bool>,
    pub pass: bool,
}

fn factors(shape: &LatticeShape) -> Result<Vec<crate::chain::ChainComplex>> {
    shape
        .sizes
        .iter()
        .zip(&shape.periodic)
        .map(|(&l, &per)| repetition_complex(l, per))
        .collect()
}

impl CodeManifest {
    pub fn new(kind: ModelKind, shape: &LatticeShape, degree: Option<usize>, code: &CssCode) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            kind,
            sizes: shape.sizes.clone(),
            periodic: shape.periodic.clone(),
            degree,
            hx: (&code.hx).into(),
            hz: (&code.hz).into(),
            qubit_labels: code.qubit_labels.clone(),
            x_labels: code.x_labels.clone(),
            z_labels: code.z_labels.clone(),
            metadata: Metadata::default(),
        }
    }

    pub fn from_model(model: &OrthoplexModel) -> Self {
        Self::new(ModelKind::OrthoplexPd, &model.shape, None, &model.code)
    }

    /// Standard product of repetition codes with qubits in degree `q`.
    pub fn standard_hgp(shape: &LatticeShape, q: usize) -> Result<Self> {
        let code = build_css(&factors(shape)?, &standard_hgp_partition(shape.p(), q)?)?;
        Ok(Self::new(ModelKind::StandardHgp, shape, Some(q), &code))
    }

    pub fn with_metadata(mut self, metadata: Metadata) -> Self {
        self.metadata = metadata;
        self
    }

    pub fn shape(&self) -> Result<LatticeShape> {
        LatticeShape::new(self.sizes.clone(), self.periodic.clone())
    }

    /// The stored code, without the commutation check.
    pub fn code(&self) -> Result<CssCode> {
        CssCode::new_unchecked(
            self.hx.to_bit_matrix()?,
            self.hz.to_bit_matrix()?,
            self.qubit_labels.clone(),
            self.x_labels.clone(),
            self.z_labels.clone(),
        )
    }

    /// Same code and labels, ignoring metadata.
    pub fn same_code(&self, other: &CodeManifest) -> bool {
        let strip = |m: &CodeManifest| CodeManifest {
            metadata: Metadata::default(),
            ..m.clone()
        };
        strip(self) == strip(other)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: CodeManifest = serde_json::from_str(text).map_err(|e| Error::Manifest(e.to_string()))?;
        if m.format_version != FORMAT_VERSION {
            return Err(Error::Manifest(format!(
                "format version {} (expected {FORMAT_VERSION})",
                m.format_version
            )));
        }
        Ok(m)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path.as_ref(), self.to_json() + "\n")
            .map_err(|e| Error::Manifest(format!("{}: {e}", path.as_ref().display())))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::Manifest(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_json(&text)
    }

    /// CSS condition on the stored matrices, plus the product complex and a
    /// rebuild comparison for the built-in kinds.
    pub fn check(&self) -> Result<CheckReport> {
        let code = self.code()?;
        let css = code.is_css();
        let (chain, matches_reference) = match self.kind {
            ModelKind::Custom => (None, None),
            kind => {
                let shape = self.shape()?;
                let reps = factors(&shape)?;
                let complex = tensor_power(&reps).ok_or_else(|| Error::InvalidDimension(0))?;
                let reference = match kind {
                    ModelKind::OrthoplexPd => build_css(&reps, &orthoplex_partition(shape.p())?)?,
                    _ => {
                        let q = self.degree.ok_or_else(|| Error::Manifest("standard-hgp needs a degree".into()))?;
                        build_css(&reps, &standard_hgp_partition(shape.p(), q)?)?
                    }
                };
                (Some(validate_complex(&complex)), Some(reference == code))
            }
        };
        let pass = css && chain.as_ref().map_or(true, |c| c.pass) && matches_reference.unwrap_or(true);
        Ok(CheckReport {
            css,
            chain,
            matches_reference,
            pass,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bitwise() {
        let model = OrthoplexModel::build(LatticeShape::periodic(&[3, 2, 2]).unwrap()).unwrap();
        let m = CodeManifest::from_model(&model).with_metadata(Metadata {
            tool_version: "test".into(),
        });
        let back = CodeManifest::from_json(&m.to_json()).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.code().unwrap(), model.code);
        assert!(back.same_code(&CodeManifest::from_model(&model)));
        assert!(m.check().unwrap().pass);
    }

    #[test]
    fn flipped_bit_fails_check() {
        let model = OrthoplexModel::build(LatticeShape::periodic(&[2, 2, 2]).unwrap()).unwrap();
        let mut m = CodeManifest::from_model(&model);
        let row = &mut m.hx.rows[0];
        match row.binary_search(&0) {
            Ok(i) => {
                row.remove(i);
            }
            Err(i) => row.insert(i, 0),
        }
        let report = m.check().unwrap();
        assert!(!report.pass);
        assert_eq!(report.matches_reference, Some(false));
    }

    #[test]
    fn toric_manifest() {
        let m = CodeManifest::standard_hgp(&LatticeShape::periodic(&[3, 3]).unwrap(), 1).unwrap();
        assert_eq!(m.qubit_labels.len(), 18);
        assert!(m.check().unwrap().pass);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(CodeManifest::from_json("{"), Err(Error::Manifest(_))));
        let model = OrthoplexModel::build(LatticeShape::periodic(&[2, 2]).unwrap()).unwrap();
        let mut m = CodeManifest::from_model(&model);
        m.format_version = 99;
        assert!(matches!(CodeManifest::from_json(&m.to_json()), Err(Error::Manifest(_))));
    }
}
