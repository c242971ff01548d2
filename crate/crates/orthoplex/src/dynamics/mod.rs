//! Pauli operators, syndromes and excitation dynamics.
//!
//! "Energy" throughout is the number of violated stabilizers.

mod membrane;
mod motion;
mod script;
mod topology;

pub use membrane::{
    chairon_residual, membrane_cells, membrane_operator, octahedron_operator, segment_profile,
    space_diagonal_check, space_diagonal_direction, ChaironReport, MembraneRegion, MembraneSpec,
    Plane, Segment, SegmentProfile, SpaceDiagonalVerdict,
};
pub use motion::{
    alignment_cancellation, fragment_loop, move_lineon, move_planon, random_offsets,
    AlignmentReport, PlanonMove,
};
pub use script::{run_script, MoveSpec, PauliAxis, Script, Step, TraceEntry};
pub use topology::{adjacency_patterns, project_and_classify, project_with, TopologyReport};

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2::BitVector;
use crate::lattice::Cell;
use crate::model::OrthoplexModel;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliOp {
    pub x: BitVector,
    pub z: BitVector,
}

impl PauliOp {
    pub fn identity(n: usize) -> Self {
        Self {
            x: BitVector::zeros(n),
            z: BitVector::zeros(n),
        }
    }

    pub fn x_type(x: BitVector) -> Self {
        let n = x.len();
        Self {
            x,
            z: BitVector::zeros(n),
        }
    }

    pub fn z_type(z: BitVector) -> Self {
        let n = z.len();
        Self {
            x: BitVector::zeros(n),
            z,
        }
    }

    /// X on every listed qubit cell.
    pub fn x_on<'a>(model: &OrthoplexModel, cells: impl IntoIterator<Item = &'a Cell>) -> Result<Self> {
        Ok(Self::x_type(model.qubit_vector(cells)?))
    }

    pub fn z_on<'a>(model: &OrthoplexModel, cells: impl IntoIterator<Item = &'a Cell>) -> Result<Self> {
        Ok(Self::z_type(model.qubit_vector(cells)?))
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// Product up to phase.
    pub fn compose(&self, other: &PauliOp) -> PauliOp {
        PauliOp {
            x: self.x.xor(&other.x),
            z: self.z.xor(&other.z),
        }
    }

    pub fn weight(&self) -> usize {
        self.x.ones().chain(self.z.ones()).collect::<BTreeSet<_>>().len()
    }

    pub fn commutes_with(&self, other: &PauliOp) -> bool {
        self.x.dot(&other.z) == self.z.dot(&other.x)
    }
}

/// Violated stabilizers, as sorted cell lists.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Syndrome {
    /// A terms (X-type checks) flipped by the Z part.
    #[serde(rename = "violatedX")]
    pub violated_x: Vec<Cell>,
    /// B terms (Z-type checks) flipped by the X part.
    #[serde(rename = "violatedZ")]
    pub violated_z: Vec<Cell>,
}

impl Syndrome {
    pub fn len(&self) -> usize {
        self.violated_x.len() + self.violated_z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn symmetric_difference(&self, other: &Syndrome) -> Syndrome {
        let sd = |a: &[Cell], b: &[Cell]| -> Vec<Cell> {
            let a: BTreeSet<&Cell> = a.iter().collect();
            let b: BTreeSet<&Cell> = b.iter().collect();
            a.symmetric_difference(&b).map(|c| (*c).clone()).collect()
        };
        Syndrome {
            violated_x: sd(&self.violated_x, &other.violated_x),
            violated_z: sd(&self.violated_z, &other.violated_z),
        }
    }
}

pub fn syndrome(model: &OrthoplexModel, op: &PauliOp) -> Result<Syndrome> {
    if op.x.len() != model.n() || op.z.len() != model.n() {
        return Err(Error::LengthMismatch {
            expected: model.n(),
            got: op.x.len().max(op.z.len()),
        });
    }
    let collect = |flags: BitVector, cells: &[Cell]| -> Vec<Cell> {
        let mut v: Vec<Cell> = flags.ones().map(|i| cells[i].clone()).collect();
        v.sort();
        v
    };
    Ok(Syndrome {
        violated_x: collect(model.code.hx.mul_vec(&op.z)?, &model.x_cells),
        violated_z: collect(model.code.hz.mul_vec(&op.x)?, &model.z_cells),
    })
}

/// Violated B terms after applying `op` to a state whose violated B terms are `start`.
pub fn moved_z_syndrome(model: &OrthoplexModel, start: &[Cell], op: &PauliOp) -> Result<Vec<Cell>> {
    let delta = syndrome(model, op)?;
    Ok(Syndrome {
        violated_x: vec![],
        violated_z: start.to_vec(),
    }
    .symmetric_difference(&delta)
    .violated_z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::logical_basis;
    use crate::lattice::LatticeShape;
    use proptest::prelude::*;

    fn model(sizes: &[usize]) -> OrthoplexModel {
        OrthoplexModel::build(LatticeShape::periodic(sizes).unwrap()).unwrap()
    }

    fn c(v: &[i64]) -> Cell {
        Cell::new(v.to_vec())
    }

    #[test]
    fn identity_has_no_syndrome() {
        let m = model(&[3, 3, 3]);
        assert!(syndrome(&m, &PauliOp::identity(m.n())).unwrap().is_empty());
        assert!(matches!(
            syndrome(&m, &PauliOp::identity(5)),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn single_x_in_4d() {
        let m = model(&[4, 4, 4, 4]);
        let gamma = c(&[3, 2, 2, 0]);
        let s = syndrome(&m, &PauliOp::x_on(&m, [&gamma]).unwrap()).unwrap();
        let mut want: Vec<Cell> = (0..3)
            .flat_map(|a| [-1, 1].map(|d| m.shape.canonicalize(&gamma.step(a, d)).unwrap()))
            .collect();
        want.sort();
        assert_eq!(s.violated_z, want);
        assert!(s.violated_x.is_empty());
        let dims: Vec<usize> = want.iter().map(Cell::dimension).collect();
        assert_eq!(dims.iter().filter(|&&d| d == 0).count(), 2);
        assert_eq!(dims.iter().filter(|&&d| d == 2).count(), 4);
    }

    #[test]
    fn z_link_flips_endpoint_terms() {
        let m = model(&[3, 3, 3]);
        let link = c(&[2, 2, 3]);
        let s = syndrome(&m, &PauliOp::x_on(&m, [&link]).unwrap()).unwrap();
        // Oracle: B cells among the lattice neighbors of the link.
        let mut want: Vec<Cell> = m
            .shape
            .neighbors(&link)
            .into_iter()
            .filter(|n| m.z_check(n).is_some())
            .collect();
        want.sort();
        assert_eq!(s.violated_z, want);
        assert_eq!(want, vec![c(&[2, 2, 2]), c(&[2, 2, 4])]);
    }

    #[test]
    fn logicals_have_empty_syndrome() {
        let m = model(&[4, 2, 3]);
        let set = logical_basis(&m.code);
        for x in &set.x {
            assert!(syndrome(&m, &PauliOp::x_type(x.clone())).unwrap().is_empty());
        }
        for z in &set.z {
            assert!(syndrome(&m, &PauliOp::z_type(z.clone())).unwrap().is_empty());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn syndrome_is_linear(a in proptest::collection::vec(any::<bool>(), 2 * 108), b in proptest::collection::vec(any::<bool>(), 2 * 108)) {
            let m = model(&[3, 3, 3]);
            let op = |bits: &[bool]| PauliOp {
                x: BitVector::from_bools(&bits[..108]),
                z: BitVector::from_bools(&bits[108..]),
            };
            let (pa, pb) = (op(&a), op(&b));
            let lhs = syndrome(&m, &pa.compose(&pb)).unwrap();
            let rhs = syndrome(&m, &pa).unwrap().symmetric_difference(&syndrome(&m, &pb).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
