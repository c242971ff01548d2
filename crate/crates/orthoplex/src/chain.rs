//! Chain complexes over GF(2) with labeled bases.
//!
//! Labels carry a per-factor degree signature and per-factor coordinates. For
//! repetition complexes the coordinate is doubled: vertex `j` is `2j`, link
//! `j + 1/2` is `2j + 1`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2::{BitMatrix, BitVector};

/// Basis element of a (product) chain group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Label {
    pub sig: Vec<u8>,
    pub coords: Vec<i64>,
}

impl Label {
    pub fn new(sig: Vec<u8>, coords: Vec<i64>) -> Self {
        Self { sig, coords }
    }

    pub fn degree(&self) -> usize {
        self.sig.iter().map(|&d| d as usize).sum()
    }

    fn concat(&self, other: &Label) -> Label {
        Label {
            sig: self.sig.iter().chain(&other.sig).copied().collect(),
            coords: self.coords.iter().chain(&other.coords).copied().collect(),
        }
    }
}

/// `groups[q]` is the basis of degree `q`; `boundary(q)` maps degree `q` to `q - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    groups: Vec<Vec<Label>>,
    boundaries: Vec<BitMatrix>,
}

impl ChainComplex {
    pub fn new(groups: Vec<Vec<Label>>, boundaries: Vec<BitMatrix>) -> Result<Self> {
        if groups.is_empty() || boundaries.len() + 1 != groups.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} groups need {} boundaries, got {}",
                groups.len(),
                groups.len().saturating_sub(1),
                boundaries.len()
            )));
        }
        Ok(Self { groups, boundaries })
    }

    /// Number of chain groups.
    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn top_degree(&self) -> usize {
        self.groups.len() - 1
    }

    pub fn group(&self, q: usize) -> &[Label] {
        &self.groups[q]
    }

    pub fn dim(&self, q: usize) -> usize {
        self.groups.get(q).map_or(0, Vec::len)
    }

    /// ∂_q for `1 <= q <= top_degree`.
    pub fn boundary(&self, q: usize) -> &BitMatrix {
        assert!(q >= 1 && q <= self.top_degree(), "no boundary at degree {q}");
        &self.boundaries[q - 1]
    }

    pub fn boundary_mut(&mut self, q: usize) -> &mut BitMatrix {
        assert!(q >= 1 && q <= self.top_degree(), "no boundary at degree {q}");
        &mut self.boundaries[q - 1]
    }

    /// dim ker ∂_q − rank ∂_{q+1}.
    pub fn homology_rank(&self, q: usize) -> usize {
        let down = if q >= 1 { self.boundary(q).rank() } else { 0 };
        let up = if q < self.top_degree() {
            self.boundary(q + 1).rank()
        } else {
            0
        };
        self.dim(q) - down - up
    }
}

/// One-dimensional repetition chain: vertices in degree 0, links in degree 1.
pub fn repetition_complex(l: usize, periodic: bool) -> Result<ChainComplex> {
    if l < 1 || (periodic && l < 2) {
        return Err(Error::InvalidSize(format!(
            "repetition chain of length {l} (periodic: {periodic})"
        )));
    }
    let links = if periodic { l } else { l - 1 };
    let vertices = (0..l).map(|j| Label::new(vec![0], vec![2 * j as i64])).collect();
    let edges = (0..links)
        .map(|j| Label::new(vec![1], vec![2 * j as i64 + 1]))
        .collect();
    let mut delta = BitMatrix::zeros(l, links);
    for j in 0..links {
        delta.flip(j, j);
        delta.flip((j + 1) % l, j);
    }
    ChainComplex::new(vec![vertices, edges], vec![delta])
}

/// Tensor product with trivial signs; bases ordered by (signature, coordinates).
pub fn tensor_product(a: &ChainComplex, b: &ChainComplex) -> ChainComplex {
    let top = a.top_degree() + b.top_degree();
    let mut groups: Vec<Vec<(Label, usize, usize)>> = vec![Vec::new(); top + 1];
    for (i, ga) in a.groups.iter().enumerate() {
        for (j, gb) in b.groups.iter().enumerate() {
            for (ia, la) in ga.iter().enumerate() {
                for (ib, lb) in gb.iter().enumerate() {
                    groups[i + j].push((la.concat(lb), ia, ib));
                }
            }
        }
    }
    for g in &mut groups {
        g.sort_by(|x, y| x.0.cmp(&y.0));
    }
    let index: Vec<HashMap<&Label, usize>> = groups
        .iter()
        .map(|g| g.iter().enumerate().map(|(k, (l, _, _))| (l, k)).collect())
        .collect();
    let da = a.sig_len();
    let at: Vec<BitMatrix> = a.boundaries.iter().map(BitMatrix::transpose).collect();
    let bt: Vec<BitMatrix> = b.boundaries.iter().map(BitMatrix::transpose).collect();
    let mut boundaries = Vec::with_capacity(top);
    for q in 1..=top {
        let mut m = BitMatrix::zeros(groups[q - 1].len(), groups[q].len());
        for (col, (label, ia, ib)) in groups[q].iter().enumerate() {
            let (ldeg_a, ldeg_b) = (
                label.sig[..da].iter().map(|&d| d as usize).sum::<usize>(),
                label.sig[da..].iter().map(|&d| d as usize).sum::<usize>(),
            );
            if ldeg_a >= 1 {
                for r in at[ldeg_a - 1].row(*ia).ones() {
                    let img = a.groups[ldeg_a - 1][r].concat(&b.groups[ldeg_b][*ib]);
                    m.flip(index[q - 1][&img], col);
                }
            }
            if ldeg_b >= 1 {
                for r in bt[ldeg_b - 1].row(*ib).ones() {
                    let img = a.groups[ldeg_a][*ia].concat(&b.groups[ldeg_b - 1][r]);
                    m.flip(index[q - 1][&img], col);
                }
            }
        }
        boundaries.push(m);
    }
    ChainComplex {
        groups: groups
            .into_iter()
            .map(|g| g.into_iter().map(|(l, _, _)| l).collect())
            .collect(),
        boundaries,
    }
}

/// Left-nested product of all factors; labels come out as flat tuples.
pub fn tensor_power(factors: &[ChainComplex]) -> Option<ChainComplex> {
    let (first, rest) = factors.split_first()?;
    Some(rest.iter().fold(first.clone(), |acc, f| tensor_product(&acc, f)))
}

impl ChainComplex {
    fn sig_len(&self) -> usize {
        self.groups
            .iter()
            .flat_map(|g| g.first())
            .map(|l| l.sig.len())
            .next()
            .unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeCheck {
    pub degree: usize,
    pub shape_ok: bool,
    /// Whether ∂_{degree-1} ∘ ∂_degree vanishes; `None` at degree 1.
    pub chain_ok: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexReport {
    pub degrees: Vec<DegreeCheck>,
    pub pass: bool,
}

pub fn validate_complex(c: &ChainComplex) -> ComplexReport {
    let mut degrees = Vec::new();
    for q in 1..=c.top_degree() {
        let m = c.boundary(q);
        let shape_ok = m.cols() == c.dim(q) && m.rows() == c.dim(q - 1);
        let chain_ok = (q >= 2).then(|| {
            let lower = c.boundary(q - 1);
            lower.cols() == m.rows() && lower.mat_mul(m).map(|p| p.is_zero()).unwrap_or(false)
        });
        degrees.push(DegreeCheck {
            degree: q,
            shape_ok,
            chain_ok,
        });
    }
    let pass = degrees
        .iter()
        .all(|d| d.shape_ok && d.chain_ok.unwrap_or(true));
    ComplexReport { degrees, pass }
}

/// Column `j` of ∂_q as a vector over degree `q-1`.
pub fn boundary_of(c: &ChainComplex, q: usize, j: usize) -> BitVector {
    let m = c.boundary(q);
    BitVector::from_indices(m.rows(), (0..m.rows()).filter(|&r| m.get(r, j)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn repetition_shapes() {
        let c = repetition_complex(3, true).unwrap();
        assert_eq!((c.dim(0), c.dim(1)), (3, 3));
        let d = c.boundary(1);
        for j in 0..3 {
            assert_eq!(boundary_of(&c, 1, j).count_ones(), 2);
        }
        assert_eq!(d.rank(), 2);

        let open = repetition_complex(2, false).unwrap();
        assert_eq!(open.dim(1), 1);
        assert_eq!(boundary_of(&open, 1, 0), BitVector::from_bools(&[true, true]));

        assert!(repetition_complex(1, true).is_err());
        assert!(repetition_complex(0, false).is_err());
        assert!(repetition_complex(1, false).is_ok());
    }

    #[test]
    fn circle_homology() {
        for l in 2..7 {
            let c = repetition_complex(l, true).unwrap();
            assert_eq!((c.homology_rank(0), c.homology_rank(1)), (1, 1));
        }
    }

    #[test]
    fn square_product_dims() {
        let r = repetition_complex(2, true).unwrap();
        let k = tensor_product(&r, &r);
        assert_eq!((k.dim(2), k.dim(1), k.dim(0)), (4, 8, 4));
        assert!(validate_complex(&k).pass);
    }

    #[test]
    fn cube_links_are_lattice_links() {
        let l = 3;
        let r = repetition_complex(l, true).unwrap();
        let k = tensor_power(&[r.clone(), r.clone(), r]).unwrap();
        let mut expected = Vec::new();
        for x in 0..2 * l as i64 {
            for y in 0..2 * l as i64 {
                for z in 0..2 * l as i64 {
                    if (x % 2 + y % 2 + z % 2) == 1 {
                        expected.push(vec![x, y, z]);
                    }
                }
            }
        }
        let mut got: Vec<Vec<i64>> = k.group(1).iter().map(|l| l.coords.clone()).collect();
        got.sort();
        assert_eq!(got, expected);
        assert_eq!(got.len(), 3 * l * l * l);
    }

    #[test]
    fn product_dims_are_binomial() {
        for n in 1..=4 {
            let l = 2;
            let r = repetition_complex(l, true).unwrap();
            let k = tensor_power(&vec![r; n]).unwrap();
            for q in 0..=n {
                assert_eq!(k.dim(q), binom(n, q) * l.pow(n as u32));
            }
            assert!(validate_complex(&k).pass);
        }
    }

    #[test]
    fn swapped_factors_keep_ranks() {
        let a = repetition_complex(3, true).unwrap();
        let b = repetition_complex(4, false).unwrap();
        let ab = tensor_product(&a, &b);
        let ba = tensor_product(&b, &a);
        for q in 1..=2 {
            assert_eq!(ab.boundary(q).rank(), ba.boundary(q).rank());
        }
    }

    #[test]
    fn corrupted_entry_fails_at_its_degree() {
        let r = repetition_complex(3, true).unwrap();
        let mut k = tensor_power(&[r.clone(), r.clone(), r]).unwrap();
        k.boundary_mut(2).flip(0, 0);
        let report = validate_complex(&k);
        assert!(!report.pass);
        let failing: Vec<usize> = report
            .degrees
            .iter()
            .filter(|d| d.chain_ok == Some(false))
            .map(|d| d.degree)
            .collect();
        // ∂2 feeds both ∂1∘∂2 and ∂2∘∂3.
        assert_eq!(failing, vec![2, 3]);
    }
}
