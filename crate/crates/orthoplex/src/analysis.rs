//! Code parameters, logical operators and the string logicals of the 3D model.

use num_integer::{gcd, lcm};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::f2::{quotient_basis, BitMatrix, BitVector, Echelon};
use crate::hgp::CssCode;
use crate::lattice::{Cell, LatticeShape};
use crate::model::OrthoplexModel;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GsdRecord {
    pub sizes: Vec<usize>,
    pub n: usize,
    /// log2 of the ground-state degeneracy.
    pub k: usize,
    pub predicted: Option<usize>,
    #[serde(rename = "match")]
    pub matched: Option<bool>,
}

/// `4 gcd(Lx, Ly)` for periodic 3D shapes; no closed form otherwise.
pub fn predicted_k(shape: &LatticeShape) -> Option<usize> {
    (shape.p() == 3 && shape.is_periodic()).then(|| 4 * gcd(shape.sizes[0], shape.sizes[1]))
}

pub fn gsd_record(shape: &LatticeShape) -> Result<GsdRecord> {
    let model = OrthoplexModel::build(shape.clone())?;
    let (n, k) = model.code.params();
    let predicted = predicted_k(shape);
    Ok(GsdRecord {
        sizes: shape.sizes.clone(),
        n,
        k,
        predicted,
        matched: predicted.map(|p| p == k),
    })
}

/// One record per shape, in input order.
pub fn gsd_scan(shapes: &[LatticeShape]) -> Result<Vec<GsdRecord>> {
    shapes.par_iter().map(gsd_record).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicalSet {
    /// X-type representatives: in ker Hz, independent modulo rowspace(Hx).
    pub x: Vec<BitVector>,
    /// Z-type representatives: in ker Hx, independent modulo rowspace(Hz).
    pub z: Vec<BitVector>,
}

impl LogicalSet {
    pub fn k(&self) -> usize {
        self.x.len()
    }

    /// `overlap[i][j] = x_i · z_j`.
    pub fn pairing_matrix(&self) -> BitMatrix {
        let n = self.z.len();
        let rows = self
            .x
            .iter()
            .map(|x| BitVector::from_indices(n, (0..n).filter(|&j| x.dot(&self.z[j]))))
            .collect();
        BitMatrix::from_rows(n, rows).expect("pairing rows have uniform length")
    }

    pub fn pairing_full_rank(&self) -> bool {
        self.x.len() == self.z.len() && self.pairing_matrix().rank() == self.x.len()
    }
}

pub fn logical_basis(code: &CssCode) -> LogicalSet {
    let x = quotient_basis(&code.hz.nullspace_basis(), code.hx.row_vectors())
        .expect("CSS code: rows of Hx lie in ker Hz");
    let z = quotient_basis(&code.hx.nullspace_basis(), code.hz.row_vectors())
        .expect("CSS code: rows of Hz lie in ker Hx");
    LogicalSet { x, z }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StringKind {
    VerticalZ,
    /// Staircase along the (1,-1,0) direction, i.e. within the plane x + y = const.
    DiagonalPlus,
    /// Staircase along (1,1,0), within x - y = const.
    DiagonalMinus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StringVerdict {
    pub kind: StringKind,
    pub length: usize,
    pub commutes: bool,
    pub outside_rowspace: bool,
}

impl StringVerdict {
    pub fn is_logical(&self) -> bool {
        self.commutes && self.outside_rowspace
    }
}

/// Link cells of the closed string through vertex `anchor`.
pub fn string_cells(model: &OrthoplexModel, kind: StringKind, anchor: &Cell) -> Result<Vec<Cell>> {
    let shape = &model.shape;
    if shape.p() != 3 {
        return Err(Error::InvalidDimension(shape.p()));
    }
    if !shape.contains(anchor) || anchor.dimension() != 0 {
        return Err(Error::invalid_cell(&anchor.0, "string anchor must be a lattice vertex"));
    }
    let a = &anchor.0;
    match kind {
        StringKind::VerticalZ => {
            if !shape.periodic[2] {
                return Err(Error::NonClosingPath("z axis is open".into()));
            }
            Ok((0..shape.sizes[2] as i64)
                .map(|z| Cell::new(vec![a[0], a[1], 2 * z + 1]))
                .collect())
        }
        StringKind::DiagonalPlus | StringKind::DiagonalMinus => {
            if !(shape.periodic[0] && shape.periodic[1]) {
                return Err(Error::NonClosingPath("diagonal needs periodic x and y".into()));
            }
            let dy = if kind == StringKind::DiagonalPlus { -1 } else { 1 };
            let steps = 2 * lcm(shape.sizes[0], shape.sizes[1]) as i64;
            (0..steps)
                .map(|k| {
                    shape
                        .canonicalize(&Cell::new(vec![a[0] + 1 + k, a[1] + dy * k, a[2]]))
                        .ok_or_else(|| Error::NonClosingPath("string left the lattice".into()))
                })
                .collect()
        }
    }
}

/// Logical test for an arbitrary X-type support.
pub fn check_x_support(model: &OrthoplexModel, support: &BitVector) -> Result<(bool, bool)> {
    let commutes = model.code.hz.mul_vec(support)?.is_zero();
    let rowspace = Echelon::from_vectors(model.n(), model.code.hx.row_vectors());
    Ok((commutes, !rowspace.contains(support)))
}

pub fn check_string_logical(
    model: &OrthoplexModel,
    kind: StringKind,
    anchor: &Cell,
) -> Result<StringVerdict> {
    let cells = string_cells(model, kind, anchor)?;
    let support = model.qubit_vector(&cells)?;
    let (commutes, outside_rowspace) = check_x_support(model, &support)?;
    Ok(StringVerdict {
        kind,
        length: cells.len(),
        commutes,
        outside_rowspace,
    })
}
