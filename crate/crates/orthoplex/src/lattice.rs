//! Hypercubic lattice cells in doubled coordinates.
//!
//! A coordinate is even on integer positions and odd on half-integer ones, so a
//! cell's dimension is its number of odd entries. Periodic axes of size `L` use
//! coordinates `0..2L`; open axes use `0..=2L-2` (no link past the last vertex).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::chain::Label;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cell(pub Vec<i64>);

impl Cell {
    pub fn new(coords: impl Into<Vec<i64>>) -> Self {
        Cell(coords.into())
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn p(&self) -> usize {
        self.0.len()
    }

    pub fn dimension(&self) -> usize {
        self.0.iter().filter(|x| x.rem_euclid(2) == 1).count()
    }

    /// Axes along which the cell extends.
    pub fn extent(&self) -> Vec<usize> {
        (0..self.p()).filter(|&a| self.0[a].rem_euclid(2) == 1).collect()
    }

    pub fn extends_along(&self, axis: usize) -> bool {
        self.0[axis].rem_euclid(2) == 1
    }

    /// Parity signature, one entry per axis.
    pub fn signature(&self) -> Vec<u8> {
        self.0.iter().map(|x| x.rem_euclid(2) as u8).collect()
    }

    /// Raw offset by a doubled displacement, without wrapping.
    pub fn offset(&self, d: &[i64]) -> Cell {
        assert_eq!(d.len(), self.p(), "displacement dimension mismatch");
        Cell(self.0.iter().zip(d).map(|(a, b)| a + b).collect())
    }

    pub fn step(&self, axis: usize, delta: i64) -> Cell {
        let mut c = self.clone();
        c.0[axis] += delta;
        c
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            if x.rem_euclid(2) == 0 {
                write!(f, "{}", x / 2)?;
            } else {
                write!(f, "{}/2", x)?;
            }
        }
        f.write_str(")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeShape {
    pub sizes: Vec<usize>,
    pub periodic: Vec<bool>,
}

impl LatticeShape {
    pub fn new(sizes: Vec<usize>, periodic: Vec<bool>) -> Result<Self> {
        if sizes.len() != periodic.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} sizes with {} boundary flags",
                sizes.len(),
                periodic.len()
            )));
        }
        for (a, (&l, &per)) in sizes.iter().zip(&periodic).enumerate() {
            if l < 1 || (per && l < 2) {
                return Err(Error::InvalidSize(format!(
                    "axis {a} has size {l} (periodic: {per})"
                )));
            }
        }
        Ok(Self { sizes, periodic })
    }

    pub fn periodic(sizes: &[usize]) -> Result<Self> {
        Self::new(sizes.to_vec(), vec![true; sizes.len()])
    }

    pub fn open(sizes: &[usize]) -> Result<Self> {
        Self::new(sizes.to_vec(), vec![false; sizes.len()])
    }

    pub fn p(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic.iter().all(|&b| b)
    }

    /// Number of doubled coordinate values along `axis`.
    pub fn extent(&self, axis: usize) -> i64 {
        let l = self.sizes[axis] as i64;
        if self.periodic[axis] {
            2 * l
        } else {
            2 * l - 1
        }
    }

    /// Wraps periodic axes; `None` if an open axis is out of range.
    pub fn canonicalize(&self, cell: &Cell) -> Option<Cell> {
        if cell.p() != self.p() {
            return None;
        }
        let mut out = Vec::with_capacity(self.p());
        for (a, &x) in cell.0.iter().enumerate() {
            let m = self.extent(a);
            if self.periodic[a] {
                out.push(x.rem_euclid(m));
            } else if (0..m).contains(&x) {
                out.push(x);
            } else {
                return None;
            }
        }
        Some(Cell(out))
    }

    pub fn contains(&self, cell: &Cell) -> bool {
        cell.p() == self.p()
            && cell
                .0
                .iter()
                .enumerate()
                .all(|(a, &x)| (0..self.extent(a)).contains(&x))
    }

    /// The cells `γ ± ½ x̂_μ`, minus those falling off open boundaries.
    pub fn neighbors(&self, cell: &Cell) -> Vec<Cell> {
        let mut out = Vec::with_capacity(2 * self.p());
        for a in 0..self.p() {
            for d in [-1, 1] {
                if let Some(c) = self.canonicalize(&cell.step(a, d)) {
                    out.push(c);
                }
            }
        }
        out
    }

    /// Every cell of the lattice in lexicographic order.
    pub fn all_cells(&self) -> Vec<Cell> {
        let mut out = vec![Vec::new()];
        for a in 0..self.p() {
            let m = self.extent(a);
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<i64>| {
                    (0..m).map(move |x| {
                        let mut v = prefix.clone();
                        v.push(x);
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(Cell).collect()
    }

    /// Cells of dimension `dim` whose extent satisfies `filter`, in lexicographic order.
    pub fn enumerate_cells(
        &self,
        dim: usize,
        filter: Option<&dyn Fn(&[usize]) -> bool>,
    ) -> Vec<Cell> {
        if dim > self.p() {
            return Vec::new();
        }
        self.all_cells()
            .into_iter()
            .filter(|c| c.dimension() == dim && filter.map_or(true, |f| f(&c.extent())))
            .collect()
    }

    pub fn cell_of_label(&self, label: &Label) -> Result<Cell> {
        let cell = Cell(label.coords.clone());
        if label.sig.len() != self.p() || !self.contains(&cell) || cell.signature() != label.sig {
            return Err(Error::ShapeMismatch(format!(
                "label {label:?} does not fit a {}-dimensional lattice {:?}",
                self.p(),
                self.sizes
            )));
        }
        Ok(cell)
    }

    pub fn label_of_cell(&self, cell: &Cell) -> Result<Label> {
        if !self.contains(cell) {
            return Err(Error::ShapeMismatch(format!(
                "cell {cell} outside lattice {:?}",
                self.sizes
            )));
        }
        Ok(Label::new(cell.signature(), cell.0.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(v: &[i64]) -> Cell {
        Cell::new(v.to_vec())
    }

    #[test]
    fn link_neighbors_3d() {
        let s = LatticeShape::periodic(&[4, 4, 4]).unwrap();
        let mut got = s.neighbors(&c(&[1, 0, 0]));
        got.sort();
        let mut want = vec![
            c(&[0, 0, 0]),
            c(&[2, 0, 0]),
            c(&[1, 1, 0]),
            c(&[1, 7, 0]),
            c(&[1, 0, 1]),
            c(&[1, 0, 7]),
        ];
        want.sort();
        assert_eq!(got, want);
        assert_eq!(got.iter().filter(|n| n.dimension() == 0).count(), 2);
        assert_eq!(got.iter().filter(|n| n.dimension() == 2).count(), 4);
    }

    #[test]
    fn neighbor_counts() {
        let s = LatticeShape::periodic(&[2, 2, 2, 2]).unwrap();
        for cell in s.all_cells() {
            assert_eq!(s.neighbors(&cell).len(), 8);
        }
        let open = LatticeShape::open(&[3, 3, 3]).unwrap();
        let mut got = open.neighbors(&c(&[0, 0, 0]));
        got.sort();
        assert_eq!(got, vec![c(&[0, 0, 1]), c(&[0, 1, 0]), c(&[1, 0, 0])]);
    }

    #[test]
    fn enumeration_counts() {
        let s = LatticeShape::periodic(&[2, 2, 2]).unwrap();
        let xy = |e: &[usize]| e == [0, 1];
        assert_eq!(s.enumerate_cells(2, Some(&xy)).len(), 8);
        assert_eq!(s.enumerate_cells(4, None).len(), 0);
        let s4 = LatticeShape::periodic(&[2, 2, 2, 2]).unwrap();
        assert_eq!(s4.enumerate_cells(1, None).len(), 64);
        let open = LatticeShape::open(&[3]).unwrap();
        assert_eq!(open.enumerate_cells(1, None).len(), 2);
    }

    #[test]
    fn label_bijection() {
        let s = LatticeShape::periodic(&[2, 2, 2]).unwrap();
        for cell in s.all_cells() {
            let label = s.label_of_cell(&cell).unwrap();
            assert_eq!(label.degree(), cell.dimension());
            assert_eq!(s.cell_of_label(&label).unwrap(), cell);
        }
        let x_link = Label::new(vec![1, 0, 0], vec![3, 2, 0]);
        assert_eq!(s.cell_of_label(&x_link).unwrap(), c(&[3, 2, 0]));
        assert_eq!(s.cell_of_label(&x_link).unwrap().extent(), vec![0]);
        let vertex = s.label_of_cell(&c(&[0, 2, 2])).unwrap();
        assert_eq!(vertex.sig, vec![0, 0, 0]);
        assert!(s.cell_of_label(&Label::new(vec![0, 0], vec![0, 0])).is_err());
        assert!(s.cell_of_label(&Label::new(vec![1, 0, 0], vec![5, 0, 0])).is_err());
    }

    #[test]
    fn display_uses_halves() {
        assert_eq!(c(&[1, 2, -3]).to_string(), "(1/2,1,-3/2)");
    }

    proptest! {
        #[test]
        fn neighbor_symmetry(
            sizes in proptest::collection::vec(2usize..5, 2..5),
            seed in any::<u64>(),
        ) {
            let s = LatticeShape::periodic(&sizes).unwrap();
            let cell = Cell((0..s.p()).map(|a| ((seed >> (8 * a)) as i64).rem_euclid(s.extent(a))).collect());
            let nb = s.neighbors(&cell);
            prop_assert_eq!(nb.len(), 2 * s.p());
            for n in &nb {
                let diffs: Vec<usize> = (0..s.p()).filter(|&a| n.0[a] != cell.0[a]).collect();
                prop_assert_eq!(diffs.len(), 1);
                prop_assert_eq!(n.dimension().abs_diff(cell.dimension()), 1);
                prop_assert!(s.neighbors(n).contains(&cell));
            }
        }
    }
}
