//! Orthoplex models built straight from the lattice rule.
//!
//! Qubits sit on odd-dimensional cells. Even-dimensional cells carry checks:
//! X-type (A terms) if they extend along the last axis, Z-type (B terms)
//! otherwise. Every check acts on all of its neighbor cells.

use std::collections::HashMap;

use serde::Serialize;

use crate::chain::{repetition_complex, Label};
use crate::error::{Error, Result};
use crate::f2::{BitMatrix, BitVector};
use crate::hgp::{build_css, orthoplex_partition, CssCode, Partition};
use crate::lattice::{Cell, LatticeShape};

#[derive(Clone, Debug)]
pub struct OrthoplexModel {
    pub shape: LatticeShape,
    pub code: CssCode,
    pub qubit_cells: Vec<Cell>,
    pub x_cells: Vec<Cell>,
    pub z_cells: Vec<Cell>,
    qubit_index: HashMap<Cell, usize>,
    x_index: HashMap<Cell, usize>,
    z_index: HashMap<Cell, usize>,
}

fn sorted_by_signature(mut cells: Vec<Cell>) -> Vec<Cell> {
    cells.sort_by(|a, b| (a.signature(), &a.0).cmp(&(b.signature(), &b.0)));
    cells
}

fn index_of(cells: &[Cell]) -> HashMap<Cell, usize> {
    cells.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect()
}

impl OrthoplexModel {
    pub fn build(shape: LatticeShape) -> Result<Self> {
        let p = shape.p();
        if p < 2 {
            return Err(Error::InvalidDimension(p));
        }
        let cells = shape.all_cells();
        let qubit_cells =
            sorted_by_signature(cells.iter().filter(|c| c.dimension() % 2 == 1).cloned().collect());
        let (x_cells, z_cells): (Vec<Cell>, Vec<Cell>) = cells
            .into_iter()
            .filter(|c| c.dimension() % 2 == 0)
            .partition(|c| c.extends_along(p - 1));
        let x_cells = sorted_by_signature(x_cells);
        let z_cells = sorted_by_signature(z_cells);
        let qubit_index = index_of(&qubit_cells);
        let checks = |stabs: &[Cell]| {
            let rows = stabs
                .iter()
                .map(|s| {
                    BitVector::from_indices(
                        qubit_cells.len(),
                        shape.neighbors(s).iter().map(|q| qubit_index[q]),
                    )
                })
                .collect();
            BitMatrix::from_rows(qubit_cells.len(), rows)
        };
        let hx = checks(&x_cells)?;
        let hz = checks(&z_cells)?;
        let labels = |cs: &[Cell]| -> Vec<Label> {
            cs.iter()
                .map(|c| Label::new(c.signature(), c.0.clone()))
                .collect()
        };
        let code = CssCode::new(
            hx,
            hz,
            labels(&qubit_cells),
            labels(&x_cells),
            labels(&z_cells),
        )?;
        Ok(Self {
            shape,
            code,
            x_index: index_of(&x_cells),
            z_index: index_of(&z_cells),
            qubit_index,
            qubit_cells,
            x_cells,
            z_cells,
        })
    }

    pub fn p(&self) -> usize {
        self.shape.p()
    }

    pub fn n(&self) -> usize {
        self.qubit_cells.len()
    }

    pub fn qubit(&self, cell: &Cell) -> Option<usize> {
        self.shape
            .canonicalize(cell)
            .and_then(|c| self.qubit_index.get(&c).copied())
    }

    pub fn x_check(&self, cell: &Cell) -> Option<usize> {
        self.shape
            .canonicalize(cell)
            .and_then(|c| self.x_index.get(&c).copied())
    }

    pub fn z_check(&self, cell: &Cell) -> Option<usize> {
        self.shape
            .canonicalize(cell)
            .and_then(|c| self.z_index.get(&c).copied())
    }

    /// X-support vector over the given qubit cells; cells repeated an even number of times cancel.
    pub fn qubit_vector<'a>(&self, cells: impl IntoIterator<Item = &'a Cell>) -> Result<BitVector> {
        let mut v = BitVector::zeros(self.n());
        for c in cells {
            let i = self
                .qubit(c)
                .ok_or_else(|| Error::invalid_cell(&c.0, "not a qubit cell of this lattice"))?;
            v.flip(i);
        }
        Ok(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowMismatch {
    pub kind: char,
    pub cell: Cell,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossValidation {
    pub pass: bool,
    pub mismatches: Vec<RowMismatch>,
}

/// Rebuilds the model from repetition complexes and `partition`, and compares
/// the check matrices row by row through the label-to-cell bijection.
pub fn cross_validate_with(model: &OrthoplexModel, partition: &Partition) -> Result<CrossValidation> {
    let complexes = model
        .shape
        .sizes
        .iter()
        .zip(&model.shape.periodic)
        .map(|(&l, &per)| repetition_complex(l, per))
        .collect::<Result<Vec<_>>>()?;
    let other = match build_css(&complexes, partition) {
        Ok(code) => code,
        Err(Error::InvalidPartition(_)) => {
            return Ok(CrossValidation {
                pass: false,
                mismatches: Vec::new(),
            })
        }
        Err(e) => return Err(e),
    };
    let mut mismatches = Vec::new();
    let qubit_map: Vec<Option<usize>> = other
        .qubit_labels
        .iter()
        .map(|l| model.shape.cell_of_label(l).ok().and_then(|c| model.qubit(&c)))
        .collect();
    if qubit_map.len() != model.n() || qubit_map.iter().any(Option::is_none) {
        return Ok(CrossValidation {
            pass: false,
            mismatches,
        });
    }
    let compare = |kind: char,
                   labels: &[Label],
                   rows: &BitMatrix,
                   own_cells: &[Cell],
                   own: &BitMatrix,
                   lookup: &dyn Fn(&Cell) -> Option<usize>,
                   mismatches: &mut Vec<RowMismatch>| {
        let mut seen = vec![false; own_cells.len()];
        for (r, label) in labels.iter().enumerate() {
            let Ok(cell) = model.shape.cell_of_label(label) else {
                continue;
            };
            let mapped = BitVector::from_indices(
                model.n(),
                rows.row(r).ones().map(|q| qubit_map[q].unwrap()),
            );
            match lookup(&cell) {
                Some(i) if own.row(i) == &mapped => seen[i] = true,
                Some(i) => {
                    seen[i] = true;
                    mismatches.push(RowMismatch { kind, cell });
                }
                None => mismatches.push(RowMismatch { kind, cell }),
            }
        }
        for (i, s) in seen.iter().enumerate() {
            if !s {
                mismatches.push(RowMismatch {
                    kind,
                    cell: own_cells[i].clone(),
                });
            }
        }
    };
    compare(
        'X',
        &other.x_labels,
        &other.hx,
        &model.x_cells,
        &model.code.hx,
        &|c| model.x_check(c),
        &mut mismatches,
    );
    compare(
        'Z',
        &other.z_labels,
        &other.hz,
        &model.z_cells,
        &model.code.hz,
        &|c| model.z_check(c),
        &mut mismatches,
    );
    mismatches.sort_by(|a, b| (a.kind, &a.cell).cmp(&(b.kind, &b.cell)));
    mismatches.dedup();
    Ok(CrossValidation {
        pass: mismatches.is_empty(),
        mismatches,
    })
}

pub fn cross_validate(model: &OrthoplexModel) -> Result<CrossValidation> {
    cross_validate_with(model, &orthoplex_partition(model.p())?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    pub shift: Vec<i64>,
    /// Shift maps qubits to qubits and X checks onto Z checks with matching supports.
    pub x_to_z: bool,
    pub z_to_x: bool,
}

impl DualityReport {
    pub fn holds(&self) -> bool {
        self.x_to_z && self.z_to_x
    }
}

/// Tests whether translating by `shift` and exchanging X with Z maps the
/// stabilizer set onto itself.
pub fn duality_check(model: &OrthoplexModel, shift: &[i64]) -> DualityReport {
    let moved = |c: &Cell| model.shape.canonicalize(&c.offset(shift));
    let maps = |from: &[Cell], hfrom: &BitMatrix, to: &dyn Fn(&Cell) -> Option<usize>, hto: &BitMatrix| {
        from.iter().enumerate().all(|(r, s)| {
            let Some(t) = moved(s).and_then(|m| to(&m)) else {
                return false;
            };
            let image: Option<Vec<usize>> = hfrom
                .row(r)
                .ones()
                .map(|q| moved(&model.qubit_cells[q]).and_then(|m| model.qubit_index.get(&m).copied()))
                .collect();
            match image {
                Some(img) => BitVector::from_indices(model.n(), img) == *hto.row(t),
                None => false,
            }
        })
    };
    DualityReport {
        shift: shift.to_vec(),
        x_to_z: maps(&model.x_cells, &model.code.hx, &|c| model.z_index.get(c).copied(), &model.code.hz),
        z_to_x: maps(&model.z_cells, &model.code.hz, &|c| model.x_index.get(c).copied(), &model.code.hx),
    }
}

/// Half-translation that exchanges the two check types of the 3D model.
pub const SELF_DUAL_SHIFT_3D: [i64; 3] = [1, 0, 1];

#[cfg(test)]
mod tests {
    use super::*;

    fn model(sizes: &[usize]) -> OrthoplexModel {
        OrthoplexModel::build(LatticeShape::periodic(sizes).unwrap()).unwrap()
    }

    #[test]
    fn per_vertex_counts_3d() {
        let m = model(&[3, 3, 3]);
        let v = 27;
        assert_eq!(m.n(), 4 * v);
        assert_eq!(m.x_cells.len(), 2 * v);
        assert_eq!(m.z_cells.len(), 2 * v);
        let xs: Vec<Vec<usize>> = m.x_cells.iter().map(Cell::extent).collect();
        assert!(xs.iter().all(|e| e == &vec![0, 2] || e == &vec![1, 2]));
        let zs: Vec<Vec<usize>> = m.z_cells.iter().map(Cell::extent).collect();
        assert!(zs.iter().all(|e| e.is_empty() || e == &vec![0, 1]));
    }

    #[test]
    fn check_weights_are_2p() {
        for sizes in [&[2, 2][..], &[3, 3, 3], &[2, 2, 2, 2]] {
            let m = model(sizes);
            let p = sizes.len();
            for h in [&m.code.hx, &m.code.hz] {
                assert!(h.row_vectors().iter().all(|r| r.count_ones() == 2 * p));
            }
            assert!(m.code.is_css());
        }
    }

    #[test]
    fn layering_by_last_coordinate() {
        let m = model(&[2, 2, 2, 2]);
        assert!(m.x_cells.iter().all(|c| c.0[3] % 2 == 1));
        assert!(m.z_cells.iter().all(|c| c.0[3] % 2 == 0));
    }

    #[test]
    fn lattice_and_partition_agree() {
        for sizes in [&[2, 2][..], &[2, 2, 2], &[3, 4, 2], &[2, 2, 2, 2]] {
            let report = cross_validate(&model(sizes)).unwrap();
            assert!(report.pass, "{sizes:?}: {:?}", report.mismatches);
        }
        let open = OrthoplexModel::build(LatticeShape::open(&[3, 3, 3]).unwrap()).unwrap();
        assert!(cross_validate(&open).unwrap().pass);
    }

    #[test]
    fn swapped_partition_is_reported() {
        let m = model(&[2, 2, 2]);
        let swapped = orthoplex_partition(3).unwrap().swapped();
        let report = cross_validate_with(&m, &swapped).unwrap();
        assert!(!report.pass);
        assert!(!report.mismatches.is_empty());
    }

    #[test]
    fn self_duality_3d() {
        for sizes in [[2, 2, 2], [4, 4, 4], [3, 4, 5]] {
            let m = model(&sizes);
            assert!(duality_check(&m, &SELF_DUAL_SHIFT_3D).holds());
            assert!(duality_check(&m, &[0, 1, 1]).holds());
            // The full body-diagonal half shift moves checks onto qubits.
            assert!(!duality_check(&m, &[1, 1, 1]).holds());
        }
    }

    #[test]
    fn two_dimensional_model_is_toric() {
        let m = model(&[3, 3]);
        assert_eq!(m.code.params(), (18, 2));
    }

    #[test]
    fn open_boundaries_truncate_checks() {
        let m = OrthoplexModel::build(LatticeShape::open(&[3, 3, 3]).unwrap()).unwrap();
        let weights: Vec<usize> = m.code.hz.row_vectors().iter().map(BitVector::count_ones).collect();
        assert!(weights.iter().any(|&w| w < 6));
        assert!(weights.iter().all(|&w| w <= 6));
        assert!(m.code.is_css());
    }

    #[test]
    fn rejects_one_dimension() {
        assert!(matches!(
            OrthoplexModel::build(LatticeShape::periodic(&[4]).unwrap()),
            Err(Error::InvalidDimension(1))
        ));
    }
}
