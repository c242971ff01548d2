//! Generalized hypergraph product: assign every direct summand of a product of
//! two-term complexes to a role and read off the CSS parity checks.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::chain::{ChainComplex, Label};
use crate::error::{Error, Result};
use crate::f2::BitMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    Q,
    X,
    Z,
    U,
}

/// Role of each summand signature `(i_1, .., i_p)`, `i_j ∈ {0, 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    p: usize,
    roles: BTreeMap<Vec<u8>, Role>,
}

/// All `2^p` signatures in lexicographic order.
pub fn signatures(p: usize) -> Vec<Vec<u8>> {
    (0..1usize << p)
        .map(|m| (0..p).map(|j| (m >> (p - 1 - j) & 1) as u8).collect())
        .collect()
}

fn weight(sig: &[u8]) -> usize {
    sig.iter().map(|&b| b as usize).sum()
}

impl Partition {
    /// Arbitrary assignment; must cover every signature exactly once.
    pub fn new(p: usize, roles: BTreeMap<Vec<u8>, Role>) -> Result<Self> {
        let all = signatures(p);
        if roles.len() != all.len() || all.iter().any(|s| !roles.contains_key(s)) {
            return Err(Error::InvalidPartition(format!(
                "assignment does not cover all {} signatures",
                all.len()
            )));
        }
        Ok(Self { p, roles })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn role(&self, sig: &[u8]) -> Role {
        self.roles[sig]
    }

    pub fn with_role(&self, role: Role) -> Vec<Vec<u8>> {
        self.roles
            .iter()
            .filter(|(_, &r)| r == role)
            .map(|(s, _)| s.clone())
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u8>, Role)> {
        self.roles.iter().map(|(s, &r)| (s, r))
    }

    /// Same partition with the X and Z roles exchanged.
    pub fn swapped(&self) -> Self {
        let roles = self
            .roles
            .iter()
            .map(|(s, &r)| {
                let r = match r {
                    Role::X => Role::Z,
                    Role::Z => Role::X,
                    other => other,
                };
                (s.clone(), r)
            })
            .collect();
        Self { p: self.p, roles }
    }
}

/// Length-3 segment at degree `q`: qubits on weight `q`, X checks below, Z checks above.
pub fn standard_hgp_partition(p: usize, q: usize) -> Result<Partition> {
    if q < 1 || q + 1 > p {
        return Err(Error::DegreeOutOfRange { p, q });
    }
    let roles = signatures(p)
        .into_iter()
        .map(|s| {
            let w = weight(&s);
            let r = if w == q {
                Role::Q
            } else if w + 1 == q {
                Role::X
            } else if w == q + 1 {
                Role::Z
            } else {
                Role::U
            };
            (s, r)
        })
        .collect();
    Ok(Partition { p, roles })
}

/// Odd weight → qubit; even weight splits on the last entry (1 → X, 0 → Z).
pub fn orthoplex_partition(p: usize) -> Result<Partition> {
    if p < 2 {
        return Err(Error::InvalidDimension(p));
    }
    let roles = signatures(p)
        .into_iter()
        .map(|s| {
            let r = if weight(&s) % 2 == 1 {
                Role::Q
            } else if s[p - 1] == 1 {
                Role::X
            } else {
                Role::Z
            };
            (s, r)
        })
        .collect();
    Ok(Partition { p, roles })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CssCode {
    pub hx: BitMatrix,
    pub hz: BitMatrix,
    pub qubit_labels: Vec<Label>,
    pub x_labels: Vec<Label>,
    pub z_labels: Vec<Label>,
}

impl CssCode {
    /// Checks shapes and the CSS condition.
    pub fn new(
        hx: BitMatrix,
        hz: BitMatrix,
        qubit_labels: Vec<Label>,
        x_labels: Vec<Label>,
        z_labels: Vec<Label>,
    ) -> Result<Self> {
        let code = Self {
            hx,
            hz,
            qubit_labels,
            x_labels,
            z_labels,
        };
        code.check_shapes()?;
        if !code.is_css() {
            return Err(Error::InvalidPartition(
                "X and Z checks do not commute".into(),
            ));
        }
        Ok(code)
    }

    /// Skips the commutation check; for negative controls and loaded data.
    pub fn new_unchecked(
        hx: BitMatrix,
        hz: BitMatrix,
        qubit_labels: Vec<Label>,
        x_labels: Vec<Label>,
        z_labels: Vec<Label>,
    ) -> Result<Self> {
        let code = Self {
            hx,
            hz,
            qubit_labels,
            x_labels,
            z_labels,
        };
        code.check_shapes()?;
        Ok(code)
    }

    fn check_shapes(&self) -> Result<()> {
        let n = self.qubit_labels.len();
        if self.hx.cols() != n
            || self.hz.cols() != n
            || self.hx.rows() != self.x_labels.len()
            || self.hz.rows() != self.z_labels.len()
        {
            return Err(Error::ShapeMismatch(format!(
                "hx {}x{}, hz {}x{} against {n} qubits, {} X and {} Z labels",
                self.hx.rows(),
                self.hx.cols(),
                self.hz.rows(),
                self.hz.cols(),
                self.x_labels.len(),
                self.z_labels.len()
            )));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.qubit_labels.len()
    }

    /// Hx · Hzᵀ = 0.
    pub fn is_css(&self) -> bool {
        self.hx
            .mat_mul(&self.hz.transpose())
            .map(|m| m.is_zero())
            .unwrap_or(false)
    }

    /// `(n, k)` with `k = n − rank Hx − rank Hz`.
    pub fn params(&self) -> (usize, usize) {
        let n = self.n();
        (n, n - self.hx.rank() - self.hz.rank())
    }
}

pub fn code_params(code: &CssCode) -> (usize, usize) {
    code.params()
}

/// Restricts the symmetric operator Σ_j (δ^j + δ^jᵀ) to qubit→check summands.
pub fn build_css(complexes: &[ChainComplex], partition: &Partition) -> Result<CssCode> {
    let p = complexes.len();
    if partition.p() != p {
        return Err(Error::InvalidPartition(format!(
            "partition over {} factors applied to {p} complexes",
            partition.p()
        )));
    }
    if let Some(c) = complexes.iter().find(|c| c.len() != 2) {
        return Err(Error::ShapeMismatch(format!(
            "factor has {} chain groups, expected 2",
            c.len()
        )));
    }
    let deltas: Vec<&BitMatrix> = complexes.iter().map(|c| c.boundary(1)).collect();
    let deltas_t: Vec<BitMatrix> = deltas.iter().map(|d| d.transpose()).collect();

    // Elements of a summand, as index tuples in lexicographic order.
    let summand = |sig: &[u8]| -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for (j, &d) in sig.iter().enumerate() {
            let dim = complexes[j].dim(d as usize);
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..dim).map(move |i| {
                        let mut v = prefix.clone();
                        v.push(i);
                        v
                    })
                })
                .collect();
        }
        out
    };
    let label_of = |sig: &[u8], idx: &[usize]| -> Label {
        let coords = sig
            .iter()
            .zip(idx)
            .enumerate()
            .flat_map(|(j, (&d, &i))| complexes[j].group(d as usize)[i].coords.clone())
            .collect();
        Label::new(sig.to_vec(), coords)
    };

    let mut tables: HashMap<Role, (Vec<Label>, HashMap<(Vec<u8>, Vec<usize>), usize>)> =
        HashMap::new();
    for (sig, role) in partition.iter() {
        let (labels, index) = tables.entry(role).or_default();
        for idx in summand(sig) {
            index.insert((sig.clone(), idx.clone()), labels.len());
            labels.push(label_of(sig, &idx));
        }
    }
    let empty = (Vec::new(), HashMap::new());
    let (q_labels, _) = tables.get(&Role::Q).unwrap_or(&empty);
    let (x_labels, x_index) = tables.get(&Role::X).unwrap_or(&empty);
    let (z_labels, z_index) = tables.get(&Role::Z).unwrap_or(&empty);

    let mut hx = BitMatrix::zeros(x_labels.len(), q_labels.len());
    let mut hz = BitMatrix::zeros(z_labels.len(), q_labels.len());
    let mut col = 0;
    for sig in partition.with_role(Role::Q) {
        for idx in summand(&sig) {
            for j in 0..p {
                let (image, target): (Vec<usize>, u8) = if sig[j] == 1 {
                    (deltas_t[j].row(idx[j]).ones().collect(), 0)
                } else {
                    (deltas[j].row(idx[j]).ones().collect(), 1)
                };
                let mut tsig = sig.clone();
                tsig[j] = target;
                for i in image {
                    let mut tidx = idx.clone();
                    tidx[j] = i;
                    let key = (tsig.clone(), tidx);
                    match partition.role(&tsig) {
                        Role::X => hx.flip(x_index[&key], col),
                        Role::Z => hz.flip(z_index[&key], col),
                        Role::Q | Role::U => {}
                    }
                }
            }
            col += 1;
        }
    }
    CssCode::new(
        hx,
        hz,
        q_labels.clone(),
        x_labels.clone(),
        z_labels.clone(),
    )
}
