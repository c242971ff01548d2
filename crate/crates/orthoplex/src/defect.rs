//! Dislocation defect in the open-boundary 3D model and planon transport around it.
//!
//! Geometry uses physical doubled coordinates, the lattice coordinates minus
//! [`DefectModel::origin`]. The removed half-plane is `x + y − z = ½, z ≤ −½`;
//! its `z = −½` edge is the dislocation line. Every stabilizer touching a removed
//! qubit is dropped, and for each removed qubit `r` at half-integer `z` the
//! truncated terms are glued into `A_{r+½ŷ} B_{r+½ẑ}` and `A_{r−½ŷ} B_{r−½ẑ}`.
//! Along the line every other removed qubit (starting from the smallest) deletes
//! `A_{r−½ŷ}` and `B_{r+½ẑ}` instead of pairing.
//!
//! Generators are kept sparse so that transport can be checked on lattices far
//! larger than a dense check matrix allows.

use std::collections::{BTreeSet, HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2::{BitMatrix, BitVector};
use crate::lattice::{Cell, LatticeShape};
use crate::model::OrthoplexModel;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GeneratorKind {
    A(Cell),
    B(Cell),
    /// Product of the truncated terms `A_a B_b` left by removing `removed`.
    Paired { removed: Cell, a: Cell, b: Cell },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub kind: GeneratorKind,
    /// Sorted indices into [`DefectModel::qubits`].
    pub x: Vec<usize>,
    pub z: Vec<usize>,
}

impl Generator {
    fn anticommutes(&self, other: &Generator) -> bool {
        let overlap = |a: &[usize], b: &[usize]| a.iter().filter(|q| b.binary_search(q).is_ok()).count();
        (overlap(&self.x, &other.z) + overlap(&self.z, &other.x)) % 2 == 1
    }
}

#[derive(Clone, Debug)]
pub struct DefectModel {
    pub shape: LatticeShape,
    pub origin: [i64; 3],
    /// Remaining qubits, sorted.
    pub qubits: Vec<Cell>,
    pub removed: Vec<Cell>,
    pub line: Vec<Cell>,
    /// Stabilizers touching a removed qubit before pairing.
    pub touched: usize,
    pub generators: Vec<Generator>,
    qubit_index: HashMap<Cell, usize>,
    plain_index: HashMap<Cell, usize>,
    by_qubit: Vec<Vec<usize>>,
}

const E_Y: [i64; 3] = [0, 1, 0];
const E_Z: [i64; 3] = [0, 0, 1];

fn neg(d: [i64; 3]) -> [i64; 3] {
    d.map(|x| -x)
}

fn is_a(cell: &Cell) -> bool {
    cell.dimension() % 2 == 0 && cell.extends_along(2)
}

fn is_b(cell: &Cell) -> bool {
    cell.dimension() % 2 == 0 && !cell.extends_along(2)
}

/// Removes the half-plane and re-pairs the truncated stabilizers.
pub fn build_dislocation(shape: &LatticeShape) -> Result<DefectModel> {
    if shape.p() != 3 {
        return Err(Error::InvalidDimension(shape.p()));
    }
    if shape.periodic.iter().any(|&p| p) {
        return Err(Error::ShapeMismatch("the dislocation needs open boundaries".into()));
    }
    if let Some(&l) = shape.sizes.iter().find(|&&l| l < 6) {
        return Err(Error::ShapeTooSmall(format!("side {l} < 6 leaves no interior")));
    }
    let origin: [i64; 3] = [0, 1, 2].map(|a| (shape.sizes[a] as i64 / 2) * 2);
    let phys = |c: &Cell| -> [i64; 3] { [0, 1, 2].map(|a| c.0[a] - origin[a]) };
    let in_d = |c: &Cell| {
        let [x, y, z] = phys(c);
        c.dimension() % 2 == 1 && x + y - z == 1 && z <= -1
    };

    let all = shape.all_cells();
    let removed: Vec<Cell> = all.iter().filter(|c| in_d(c)).cloned().collect();
    let removed_set: HashSet<&Cell> = removed.iter().collect();
    let qubits: Vec<Cell> = all
        .iter()
        .filter(|c| c.dimension() % 2 == 1 && !removed_set.contains(c))
        .cloned()
        .collect();
    let qubit_index: HashMap<Cell, usize> = qubits.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
    let trunc = |s: &Cell| -> Vec<usize> {
        let mut v: Vec<usize> = shape
            .neighbors(s)
            .iter()
            .filter_map(|q| qubit_index.get(q).copied())
            .collect();
        v.sort_unstable();
        v
    };
    let touched: HashSet<Cell> = removed.iter().flat_map(|q| shape.neighbors(q)).collect();

    let mut generators = Vec::new();
    for s in &all {
        if touched.contains(s) {
            continue;
        }
        if is_a(s) {
            generators.push(Generator {
                kind: GeneratorKind::A(s.clone()),
                x: trunc(s),
                z: vec![],
            });
        } else if is_b(s) {
            generators.push(Generator {
                kind: GeneratorKind::B(s.clone()),
                x: vec![],
                z: trunc(s),
            });
        }
    }

    let line: Vec<Cell> = removed.iter().filter(|c| phys(c)[2] == -1).cloned().collect();
    let skipping: HashSet<&Cell> = line.iter().step_by(2).collect();
    let mut deleted: HashSet<Cell> = HashSet::new();
    let mut paired = Vec::new();
    for r in removed.iter().filter(|c| c.extends_along(2)) {
        if skipping.contains(r) {
            deleted.insert(r.offset(&neg(E_Y)));
            deleted.insert(r.offset(&E_Z));
            continue;
        }
        for (dy, dz) in [(E_Y, E_Z), (neg(E_Y), neg(E_Z))] {
            let (a, b) = (r.offset(&dy), r.offset(&dz));
            if !(shape.contains(&a) && shape.contains(&b)) || deleted.contains(&a) || deleted.contains(&b) {
                continue;
            }
            paired.push(Generator {
                x: trunc(&a),
                z: trunc(&b),
                kind: GeneratorKind::Paired { removed: r.clone(), a, b },
            });
        }
    }
    generators.extend(paired.into_iter().filter(|g| match &g.kind {
        GeneratorKind::Paired { a, b, .. } => !deleted.contains(a) && !deleted.contains(b),
        _ => true,
    }));

    let mut by_qubit = vec![Vec::new(); qubits.len()];
    let mut plain_index = HashMap::new();
    for (i, g) in generators.iter().enumerate() {
        for &q in g.x.iter().chain(&g.z) {
            if by_qubit[q].last() != Some(&i) {
                by_qubit[q].push(i);
            }
        }
        if let GeneratorKind::A(c) | GeneratorKind::B(c) = &g.kind {
            plain_index.insert(c.clone(), i);
        }
    }
    Ok(DefectModel {
        shape: shape.clone(),
        origin,
        qubits,
        removed,
        line,
        touched: touched.len(),
        generators,
        qubit_index,
        plain_index,
        by_qubit,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommutationReport {
    pub generators: usize,
    pub anticommuting: Vec<(usize, usize)>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZeroModes {
    pub remaining_qubits: usize,
    pub generator_rank: usize,
    /// Encoded qubits with the defect.
    pub defect_k: usize,
    /// Encoded qubits of the same open lattice without it.
    pub clean_k: usize,
    pub zero_modes: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlanonType {
    /// B-term dipole.
    Electric,
    /// A-term dipole.
    Magnetic,
}

/// Transport path in the mobility plane of the planon: waypoints `(i, c)` stand
/// for the anchor `(i, i, c)` in physical doubled coordinates, and consecutive
/// waypoints must share `i` or `c`. The path is not closed; the verdict compares
/// the dipole at its end with the one at its start.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanonPath {
    pub waypoints: Vec<[i64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Transport {
    pub x: Vec<Cell>,
    pub z: Vec<Cell>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BraidVerdict {
    pub start: Cell,
    pub end: Cell,
    /// Signed number of times the path passes through the removed half-plane.
    pub crossings: i64,
    /// Winding of the path, closed by a chord, around the dislocation line.
    pub winding: i64,
    pub tube_qubits: usize,
    /// An X-only operator on the tube cannot carry the start dipole to the end.
    pub pure_x_residual: bool,
    /// A mixed operator on the tube carries it to some dipole at the end.
    pub mixed_clean: bool,
    pub start_type: PlanonType,
    pub end_type: Option<PlanonType>,
    /// Offset of the end dipole from the path's end anchor.
    pub end_shift: Option<[i64; 3]>,
    pub swapped: bool,
    pub transport: Option<Transport>,
}

impl DefectModel {
    pub fn physical(&self, cell: &Cell) -> [i64; 3] {
        [0, 1, 2].map(|a| cell.0[a] - self.origin[a])
    }

    pub fn lattice_cell(&self, phys: [i64; 3]) -> Cell {
        Cell::new((0..3).map(|a| phys[a] + self.origin[a]).collect::<Vec<_>>())
    }

    pub fn n(&self) -> usize {
        self.qubits.len()
    }

    /// Exact symplectic check over every pair of generators sharing a qubit;
    /// disjoint pairs commute trivially.
    pub fn commutation_check(&self) -> CommutationReport {
        let anticommuting: Vec<(usize, usize)> = (0..self.generators.len())
            .into_par_iter()
            .flat_map_iter(|i| {
                let g = &self.generators[i];
                let partners: BTreeSet<usize> = g
                    .x
                    .iter()
                    .chain(&g.z)
                    .flat_map(|&q| self.by_qubit[q].iter().copied())
                    .filter(|&j| j > i)
                    .collect();
                partners
                    .into_iter()
                    .filter(move |&j| g.anticommutes(&self.generators[j]))
                    .map(move |j| (i, j))
            })
            .collect();
        CommutationReport {
            generators: self.generators.len(),
            pass: anticommuting.is_empty(),
            anticommuting,
        }
    }

    /// Dense symplectic matrix `[X | Z]`, one row per generator.
    pub fn symplectic_matrix(&self) -> BitMatrix {
        let n = self.n();
        let rows = self
            .generators
            .iter()
            .map(|g| BitVector::from_indices(2 * n, g.x.iter().copied().chain(g.z.iter().map(|&q| n + q))))
            .collect();
        BitMatrix::from_rows(2 * n, rows).expect("uniform row length")
    }

    /// Extra encoded qubits created by the defect. Dense, so meant for small lattices.
    pub fn zero_modes(&self) -> Result<ZeroModes> {
        let generator_rank = self.symplectic_matrix().rank();
        let defect_k = self.n() - generator_rank;
        let (_, clean_k) = OrthoplexModel::build(self.shape.clone())?.code.params();
        Ok(ZeroModes {
            remaining_qubits: self.n(),
            generator_rank,
            defect_k,
            clean_k,
            zero_modes: defect_k.saturating_sub(clean_k),
        })
    }

    /// Generators anticommuting with the Pauli operator `X(x) Z(z)`.
    pub fn syndrome_of(&self, x: &[usize], z: &[usize]) -> BTreeSet<usize> {
        let mut flips: HashMap<usize, bool> = HashMap::new();
        for (support, other_z) in [(x, true), (z, false)] {
            for &q in support {
                for &g in &self.by_qubit[q] {
                    let part = if other_z { &self.generators[g].z } else { &self.generators[g].x };
                    if part.binary_search(&q).is_ok() {
                        *flips.entry(g).or_default() ^= true;
                    }
                }
            }
        }
        flips.into_iter().filter(|&(_, f)| f).map(|(g, _)| g).collect()
    }

    /// B terms `{a, a + (½, −½, 0)}`.
    fn electric(&self, anchor: [i64; 3]) -> Option<BTreeSet<usize>> {
        self.pair_at(anchor)
    }

    /// A terms one half step off the anchor's plane, on the side `sign`.
    fn magnetic(&self, anchor: [i64; 3], sign: i64) -> Option<BTreeSet<usize>> {
        self.pair_at([anchor[0], anchor[1] + sign, anchor[2] - sign])
    }

    fn pair_at(&self, base: [i64; 3]) -> Option<BTreeSet<usize>> {
        [base, [base[0] + 1, base[1] - 1, base[2]]]
            .into_iter()
            .map(|p| self.plain_index.get(&self.lattice_cell(p)).copied())
            .collect()
    }

    /// Qubits within two half-steps of any dipole cell along the path.
    fn tube(&self, anchors: &[[i64; 3]]) -> Vec<usize> {
        let mut out = BTreeSet::new();
        for a in anchors {
            for cell in [*a, [a[0] + 1, a[1] - 1, a[2]]] {
                for dx in -2..=2 {
                    for dy in -2..=2 {
                        for dz in -2..=2 {
                            let c = self.lattice_cell([cell[0] + dx, cell[1] + dy, cell[2] + dz]);
                            if let Some(&q) = self.qubit_index.get(&c) {
                                out.insert(q);
                            }
                        }
                    }
                }
            }
        }
        out.into_iter().collect()
    }

    /// Some operator supported on `tube` whose syndrome is exactly `target`.
    fn transport_on(&self, tube: &[usize], target: &BTreeSet<usize>, x_only: bool) -> Option<(Vec<usize>, Vec<usize>)> {
        let col: HashMap<usize, usize> = tube.iter().enumerate().map(|(i, &q)| (q, i)).collect();
        let rows: BTreeSet<usize> = tube
            .iter()
            .flat_map(|&q| self.by_qubit[q].iter().copied())
            .chain(target.iter().copied())
            .collect();
        let n = tube.len();
        let width = if x_only { n } else { 2 * n };
        let mut rhs = BitVector::zeros(rows.len());
        let matrix_rows = rows
            .iter()
            .enumerate()
            .map(|(r, &g)| {
                rhs.set(r, target.contains(&g));
                let gen = &self.generators[g];
                // X on the tube is detected by the Z part of a generator and vice versa.
                let px = gen.z.iter().filter_map(|q| col.get(q).copied());
                let pz = gen.x.iter().filter_map(|q| col.get(q).map(|&c| n + c));
                if x_only {
                    BitVector::from_indices(width, px)
                } else {
                    BitVector::from_indices(width, px.chain(pz))
                }
            })
            .collect();
        let m = BitMatrix::from_rows(width, matrix_rows).expect("uniform row length");
        let sol = m.solve(&rhs).expect("matching lengths")?;
        let x = sol.ones().filter(|&i| i < n).map(|i| tube[i]).collect();
        let z = sol.ones().filter(|&i| i >= n).map(|i| tube[i - n]).collect();
        Some((x, z))
    }

    fn anchors(&self, path: &PlanonPath) -> Result<Vec<[i64; 3]>> {
        let w = &path.waypoints;
        if w.len() < 2 {
            return Err(Error::InvalidPath("need at least two waypoints".into()));
        }
        if w.iter().any(|p| p[1].rem_euclid(2) != 0) {
            return Err(Error::InvalidPath("waypoint heights must be even".into()));
        }
        let mut out = vec![[w[0][0], w[0][0], w[0][1]]];
        for pair in w.windows(2) {
            let ([i0, c0], [i1, c1]) = (pair[0], pair[1]);
            let steps: Vec<[i64; 2]> = if i0 == i1 {
                let s = (c1 - c0).signum() * 2;
                (1..=(c1 - c0).abs() / 2).map(|k| [i0, c0 + s * k]).collect()
            } else if c0 == c1 {
                let s = (i1 - i0).signum();
                (1..=(i1 - i0).abs()).map(|k| [i0 + s * k, c0]).collect()
            } else {
                return Err(Error::InvalidPath(format!("{:?} -> {:?} is not axis-aligned", pair[0], pair[1])));
            };
            out.extend(steps.into_iter().map(|[i, c]| [i, i, c]));
        }
        for a in &out {
            let end = [a[0] + 1, a[1] - 1, a[2]];
            if !self.shape.contains(&self.lattice_cell(*a)) || !self.shape.contains(&self.lattice_cell(end)) {
                return Err(Error::InvalidPath(format!("anchor {a:?} leaves the lattice")));
            }
        }
        Ok(out)
    }

    /// Carries an electric dipole along `path` and identifies what arrives.
    pub fn braid_planon(&self, path: &PlanonPath) -> Result<BraidVerdict> {
        let anchors = self.anchors(path)?;
        let (start, end) = (anchors[0], *anchors.last().expect("nonempty"));
        let start_dipole = self
            .electric(start)
            .ok_or_else(|| Error::InvalidPath("start dipole touches the defect".into()))?;
        let tube = self.tube(&anchors);
        let xor = |a: &BTreeSet<usize>, b: &BTreeSet<usize>| -> BTreeSet<usize> {
            a.symmetric_difference(b).copied().collect()
        };

        let straight = self.electric(end);
        let pure_x_residual = match &straight {
            Some(d) => self.transport_on(&tube, &xor(&start_dipole, d), true).is_none(),
            None => true,
        };

        let mut found = None;
        'search: for shift in [[0, 0, 0], [1, -1, 0], [-1, 1, 0]] {
            let at = [end[0] + shift[0], end[1] + shift[1], end[2] + shift[2]];
            let candidates = [
                (PlanonType::Electric, self.electric(at)),
                (PlanonType::Magnetic, self.magnetic(at, 1)),
                (PlanonType::Magnetic, self.magnetic(at, -1)),
            ];
            for (kind, dipole) in candidates {
                let Some(dipole) = dipole else { continue };
                if let Some(op) = self.transport_on(&tube, &xor(&start_dipole, &dipole), false) {
                    found = Some((kind, shift, op));
                    break 'search;
                }
            }
        }

        let cells = |v: &[usize]| v.iter().map(|&q| self.qubits[q].clone()).collect();
        let (crossings, winding) = path_topology(&anchors, &path.waypoints);
        Ok(BraidVerdict {
            start: self.lattice_cell(start),
            end: self.lattice_cell(end),
            crossings,
            winding,
            tube_qubits: tube.len(),
            pure_x_residual,
            mixed_clean: found.is_some(),
            start_type: PlanonType::Electric,
            end_type: found.as_ref().map(|f| f.0),
            end_shift: found.as_ref().map(|f| f.1),
            swapped: matches!(found, Some((PlanonType::Magnetic, _, _))),
            transport: found.map(|(_, _, (x, z))| Transport { x: cells(&x), z: cells(&z) }),
        })
    }
}

impl DefectModel {
    pub fn qubit(&self, cell: &Cell) -> Option<usize> {
        self.qubit_index.get(cell).copied()
    }

    /// Recomputes the syndrome of the reported transport over all generators and
    /// compares it with the start dipole and the identified end dipole.
    pub fn check_transport(&self, verdict: &BraidVerdict) -> bool {
        let (Some(t), Some(kind), Some(shift)) = (&verdict.transport, verdict.end_type, verdict.end_shift) else {
            return false;
        };
        let idx = |cells: &[Cell]| -> Option<Vec<usize>> { cells.iter().map(|c| self.qubit(c)).collect() };
        let (Some(x), Some(z)) = (idx(&t.x), idx(&t.z)) else {
            return false;
        };
        let start = self.physical(&verdict.start);
        let end = self.physical(&verdict.end);
        let at = [end[0] + shift[0], end[1] + shift[1], end[2] + shift[2]];
        let ends: Vec<BTreeSet<usize>> = match kind {
            PlanonType::Electric => self.electric(at).into_iter().collect(),
            PlanonType::Magnetic => [1, -1].into_iter().filter_map(|s| self.magnetic(at, s)).collect(),
        };
        let Some(first) = self.electric(start) else {
            return false;
        };
        let syn = self.syndrome_of(&x, &z);
        ends.iter()
            .any(|e| syn == first.symmetric_difference(e).copied().collect::<BTreeSet<_>>())
    }
}

/// Paths winding zero, one and two times around the line. They start at the
/// anchor `(4, 4, 8)` and need sides of at least 24.
pub fn reference_paths() -> Vec<(&'static str, PlanonPath)> {
    let once = vec![[4, 8], [5, 8], [5, -10], [-5, -10], [-5, 8], [-4, 8]];
    let mut twice = once.clone();
    twice.extend([[-4, 16], [13, 16], [13, -18], [-13, -18], [-13, 6]]);
    let none = vec![[4, 8], [8, 8], [8, -6], [4, -6], [4, 2]];
    [("winding-0", none), ("winding-1", once), ("winding-2", twice)]
        .into_iter()
        .map(|(name, waypoints)| (name, PlanonPath { waypoints }))
        .collect()
}

/// Signed crossings of the removed half-plane along the anchors, and winding of
/// the chord-closed waypoint polygon around the line, both in the `(x + y, z)` plane.
fn path_topology(anchors: &[[i64; 3]], waypoints: &[[i64; 2]]) -> (i64, i64) {
    // The half-plane is the ray s − c = 1, c ≤ −1, ending on the line at (0, −1).
    let f = |s: i64, c: i64| s - c - 1;
    let mut crossings = 0;
    for pair in anchors.windows(2) {
        let (s0, c0, s1, c1) = (pair[0][0] + pair[0][1], pair[0][2], pair[1][0] + pair[1][1], pair[1][2]);
        let (f0, f1) = (f(s0, c0), f(s1, c1));
        if f0.signum() == f1.signum() {
            continue;
        }
        // Unit steps cross the plane at c = s − 1 (vertical) or at their own height.
        let c_cross = if c0 == c1 { c0 } else { s0 - 1 };
        if c_cross <= -1 {
            crossings += if f1 > 0 { 1 } else { -1 };
        }
    }
    let pts: Vec<(i64, i64)> = waypoints.iter().map(|w| (2 * w[0], w[1])).collect();
    let (ps, pc) = (0, -1);
    let mut winding = 0;
    for k in 0..pts.len() {
        let (a, b) = (pts[k], pts[(k + 1) % pts.len()]);
        let left = (b.0 - a.0) * (pc - a.1) - (ps - a.0) * (b.1 - a.1);
        if a.1 < pc && b.1 > pc && left > 0 {
            winding += 1;
        } else if a.1 > pc && b.1 < pc && left < 0 {
            winding -= 1;
        }
    }
    (crossings, winding)
}
