//! Planar X membranes and the geometry of their boundary excitations.
//!
//! A membrane lives in a plane `u + s·v = C` of the `(x, y, z)` subspace (at a
//! fixed even `w` in four dimensions). Writing `t` for the remaining axis, a
//! rectangle covers doubled coordinates `v ∈ [v0, v0 + 2·lv]`,
//! `t ∈ [t0, t0 + 2·lt]`. A triangle with leg `m` keeps rows `t = t0 + 2k` for
//! `k = 0..=m`, each with `v ∈ [v0 + k, v0 + m]`, so its hypotenuse runs along a
//! space diagonal. Only qubit cells in the region are kept.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use num_integer::gcd;
use serde::{Deserialize, Serialize};

use super::{syndrome, PauliOp, Syndrome};
use crate::error::{Error, Result};
use crate::lattice::Cell;
use crate::model::OrthoplexModel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Plane {
    #[serde(rename = "x+y")]
    XPlusY,
    #[serde(rename = "x-y")]
    XMinusY,
    #[serde(rename = "x+z")]
    XPlusZ,
    #[serde(rename = "x-z")]
    XMinusZ,
    #[serde(rename = "y+z")]
    YPlusZ,
    #[serde(rename = "y-z")]
    YMinusZ,
}

impl Plane {
    pub const ALL: [Plane; 6] = [
        Plane::XPlusY,
        Plane::XMinusY,
        Plane::XPlusZ,
        Plane::XMinusZ,
        Plane::YPlusZ,
        Plane::YMinusZ,
    ];

    /// `(u, v, t, s)` with the plane written as `u + s·v = C`.
    pub fn axes(self) -> (usize, usize, usize, i64) {
        match self {
            Plane::XPlusY => (0, 1, 2, 1),
            Plane::XMinusY => (0, 1, 2, -1),
            Plane::XPlusZ => (0, 2, 1, 1),
            Plane::XMinusZ => (0, 2, 1, -1),
            Plane::YPlusZ => (1, 2, 0, 1),
            Plane::YMinusZ => (1, 2, 0, -1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Plane::XPlusY => "x+y",
            Plane::XMinusY => "x-y",
            Plane::XPlusZ => "x+z",
            Plane::XMinusZ => "x-z",
            Plane::YPlusZ => "y+z",
            Plane::YMinusZ => "y-z",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MembraneRegion {
    Rectangle { v0: i64, lv: i64, t0: i64, lt: i64 },
    Triangle { v0: i64, t0: i64, leg: i64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MembraneSpec {
    pub plane: Plane,
    /// The constant `C`, doubled.
    pub offset: i64,
    pub region: MembraneRegion,
    /// Doubled `w` coordinate of the hyperplane; ignored in three dimensions.
    #[serde(default)]
    pub w: i64,
}

impl MembraneSpec {
    pub fn rectangle(plane: Plane, offset: i64, v0: i64, lv: i64, t0: i64, lt: i64) -> Self {
        Self {
            plane,
            offset,
            region: MembraneRegion::Rectangle { v0, lv, t0, lt },
            w: 0,
        }
    }

    pub fn triangle(plane: Plane, offset: i64, v0: i64, t0: i64, leg: i64) -> Self {
        Self {
            plane,
            offset,
            region: MembraneRegion::Triangle { v0, t0, leg },
            w: 0,
        }
    }

    pub fn at_w(mut self, w: i64) -> Self {
        self.w = w;
        self
    }

    /// Same membrane moved `k` steps along the plane normal `(u, v) += (k, s·k)`.
    pub fn shifted_normal(mut self, k: i64) -> Self {
        let (_, _, _, s) = self.plane.axes();
        self.offset += 2 * k;
        match &mut self.region {
            MembraneRegion::Rectangle { v0, .. } | MembraneRegion::Triangle { v0, .. } => {
                *v0 += s * k
            }
        }
        self
    }

    fn raw_cells(&self) -> Vec<[i64; 3]> {
        let (u, v, t, s) = self.plane.axes();
        let mut rows: Vec<(i64, i64, i64)> = Vec::new();
        match self.region {
            MembraneRegion::Rectangle { v0, lv, t0, lt } => {
                for vv in v0..=v0 + 2 * lv {
                    for tt in t0..=t0 + 2 * lt {
                        rows.push((vv, tt, 0));
                    }
                }
            }
            MembraneRegion::Triangle { v0, t0, leg } => {
                for k in 0..=leg {
                    for vv in v0 + k..=v0 + leg {
                        rows.push((vv, t0 + 2 * k, 0));
                    }
                }
            }
        }
        rows.into_iter()
            .map(|(vv, tt, _)| {
                let mut c = [0; 3];
                c[v] = vv;
                c[u] = self.offset - s * vv;
                c[t] = tt;
                c
            })
            .filter(|c| c.iter().map(|x| x.rem_euclid(2)).sum::<i64>() % 2 == 1)
            .collect()
    }
}

fn check_dims(model: &OrthoplexModel) -> Result<()> {
    match model.p() {
        3 | 4 => Ok(()),
        p => Err(Error::InvalidDimension(p)),
    }
}

/// Qubit cells covered by the membrane, canonicalized and sorted.
pub fn membrane_cells(model: &OrthoplexModel, spec: &MembraneSpec) -> Result<Vec<Cell>> {
    check_dims(model)?;
    if model.p() == 4 && spec.w.rem_euclid(2) != 0 {
        return Err(Error::SpecOutOfRange(format!("hyperplane w = {} is not integer", spec.w)));
    }
    let (lv, lt) = match spec.region {
        MembraneRegion::Rectangle { lv, lt, .. } => (lv, lt),
        MembraneRegion::Triangle { leg, .. } => (leg, leg),
    };
    if lv < 0 || lt < 0 {
        return Err(Error::SpecOutOfRange("negative membrane extent".into()));
    }
    let mut out = BTreeSet::new();
    for c in spec.raw_cells() {
        let mut coords = c.to_vec();
        if model.p() == 4 {
            coords.push(spec.w);
        }
        let cell = model
            .shape
            .canonicalize(&Cell::new(coords))
            .ok_or_else(|| Error::SpecOutOfRange(format!("{spec:?} leaves the lattice")))?;
        if !out.insert(cell) {
            return Err(Error::SpecOutOfRange(format!(
                "{spec:?} overlaps itself under the periodic wrap"
            )));
        }
    }
    Ok(out.into_iter().collect())
}

pub fn membrane_operator(model: &OrthoplexModel, spec: &MembraneSpec) -> Result<PauliOp> {
    PauliOp::x_on(model, &membrane_cells(model, spec)?)
}

/// X on the six qubits `center ± ½ x̂_k`, `k ∈ {x, y, z}`.
pub fn octahedron_operator(model: &OrthoplexModel, center: &Cell) -> Result<PauliOp> {
    check_dims(model)?;
    if model.z_check(center).is_none() {
        return Err(Error::invalid_cell(&center.0, "octahedron center must carry a B term"));
    }
    let cells: Vec<Cell> = (0..3)
        .flat_map(|a| [-1, 1].map(|d| center.step(a, d)))
        .collect();
    PauliOp::x_on(model, &cells)
}

// ---- geometry helpers on the (x, y, z) part of cells --------------------------

struct Geometry<'a> {
    model: &'a OrthoplexModel,
}

impl Geometry<'_> {
    /// Signed displacement `b − a` along `axis`, wrapped to the short way round.
    fn diff(&self, axis: usize, a: i64, b: i64) -> i64 {
        let shape = &self.model.shape;
        let d = b - a;
        if !shape.periodic[axis] {
            return d;
        }
        let m = shape.extent(axis);
        let r = d.rem_euclid(m);
        if r > m / 2 {
            r - m
        } else {
            r
        }
    }

    fn wrap(&self, axis: usize, x: i64) -> i64 {
        let shape = &self.model.shape;
        if shape.periodic[axis] {
            x.rem_euclid(shape.extent(axis))
        } else {
            x
        }
    }

    fn disp(&self, a: &Cell, b: &Cell) -> [i64; 3] {
        [0, 1, 2].map(|k| self.diff(k, a.0[k], b.0[k]))
    }
}

fn others(t: usize) -> (usize, usize) {
    match t {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

fn extent_name(cell: &Cell) -> String {
    const NAMES: [char; 4] = ['x', 'y', 'z', 'w'];
    let e = cell.extent();
    if e.is_empty() {
        "vertex".into()
    } else {
        e.iter().map(|&a| NAMES[a]).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub cells: Vec<Cell>,
    /// Cell counts keyed by the axes each cell extends along.
    pub types: BTreeMap<String, usize>,
    /// Lattice positions spanned: levels for a double line, diagonal steps for a diagonal.
    pub positions: usize,
}

impl Segment {
    fn new(cells: Vec<Cell>, positions: usize) -> Self {
        let mut types = BTreeMap::new();
        for c in &cells {
            *types.entry(extent_name(c)).or_default() += 1;
        }
        Self {
            cells,
            types,
            positions,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SegmentProfile {
    /// Axis the double lines run along.
    pub axis: Option<usize>,
    pub vertical: Vec<Segment>,
    pub diagonal: Vec<Segment>,
    /// Displacement between the two strands of each double line, sign-normalized
    /// so that its last nonzero entry is negative.
    pub strand_offsets: Vec<[i64; 3]>,
    /// Cells per unit length of a double line, as a reduced fraction.
    pub vertical_density: (usize, usize),
    /// Cells per half-diagonal step of a diagonal line, as a reduced fraction.
    pub diagonal_density: (usize, usize),
    /// Square of the ratio of the two densities per unit Euclidean length.
    pub density_ratio_squared: (usize, usize),
}

impl SegmentProfile {
    fn empty() -> Self {
        Self {
            axis: None,
            vertical: vec![],
            diagonal: vec![],
            strand_offsets: vec![],
            vertical_density: (0, 1),
            diagonal_density: (0, 1),
            density_ratio_squared: (0, 1),
        }
    }
}

fn reduced(num: usize, den: usize) -> (usize, usize) {
    if den == 0 {
        return (0, 1);
    }
    let g = gcd(num, den).max(1);
    (num / g, den / g)
}

fn normalize_last_negative(mut d: [i64; 3]) -> [i64; 3] {
    if let Some(&last) = d.iter().rev().find(|&&x| x != 0) {
        if last > 0 {
            d = d.map(|x| -x);
        }
    }
    d
}

type Run = Vec<Cell>;

/// Maximal chains of cells spaced two apart along `t` with fixed other coordinates.
fn runs_along(geo: &Geometry, cells: &[Cell], t: usize) -> Vec<Run> {
    let (a, b) = others(t);
    let mut groups: BTreeMap<(i64, i64), Vec<Cell>> = BTreeMap::new();
    for c in cells {
        groups.entry((c.0[a], c.0[b])).or_default().push(c.clone());
    }
    let mut runs = Vec::new();
    for (_, group) in groups {
        let present: HashSet<i64> = group.iter().map(|c| c.0[t]).collect();
        let by_t: HashMap<i64, &Cell> = group.iter().map(|c| (c.0[t], c)).collect();
        let mut seen = HashSet::new();
        for c in &group {
            // Start only at chain heads.
            let prev = geo.wrap(t, c.0[t] - 2);
            if present.contains(&prev) && prev != c.0[t] {
                continue;
            }
            let mut run = vec![c.clone()];
            seen.insert(c.0[t]);
            let mut x = c.0[t];
            loop {
                let next = geo.wrap(t, x + 2);
                if !present.contains(&next) || seen.contains(&next) {
                    break;
                }
                seen.insert(next);
                run.push(by_t[&next].clone());
                x = next;
            }
            if run.len() >= 2 {
                runs.push(run);
            }
        }
    }
    runs
}

/// Pairs runs with identical `t` levels whose cross-section offsets are `(±1, ±1)`.
fn double_lines(geo: &Geometry, runs: &[Run], t: usize) -> Vec<(usize, usize)> {
    let (a, b) = others(t);
    let levels = |r: &Run| -> BTreeSet<i64> { r.iter().map(|c| c.0[t]).collect() };
    let mut used = vec![false; runs.len()];
    let mut pairs = Vec::new();
    for i in 0..runs.len() {
        if used[i] {
            continue;
        }
        for j in i + 1..runs.len() {
            if used[j] || levels(&runs[i]) != levels(&runs[j]) {
                continue;
            }
            let (ci, cj) = (&runs[i][0], &runs[j][0]);
            let da = geo.diff(a, ci.0[a], cj.0[a]);
            let db = geo.diff(b, ci.0[b], cj.0[b]);
            if da.abs() == 1 && db.abs() == 1 {
                used[i] = true;
                used[j] = true;
                pairs.push((i, j));
                break;
            }
        }
    }
    pairs
}

fn is_octahedron(geo: &Geometry, cells: &[Cell]) -> bool {
    if cells.len() != 6 {
        return false;
    }
    let (first, rest) = cells.split_first().unwrap();
    // Find the center as the midpoint of the antipodal partner of `first`.
    rest.iter().any(|other| {
        let d = geo.disp(first, other);
        let Some(axis) = (0..3).find(|&k| d[k].abs() == 2) else {
            return false;
        };
        if d.iter().filter(|&&x| x != 0).count() != 1 {
            return false;
        }
        let center = first.step(axis, d[axis] / 2);
        let mut want: Vec<[i64; 3]> = (0..3)
            .flat_map(|k| {
                [-1, 1].map(|s| {
                    let mut v = [0; 3];
                    v[k] = s;
                    v
                })
            })
            .collect();
        want.sort();
        let mut got: Vec<[i64; 3]> = cells.iter().map(|c| geo.disp(&center, c)).collect();
        got.sort();
        got == want
    })
}

/// A chain of distinct cells at one `t` level with a constant `(±1, ±1)` step.
fn diagonal_chain(geo: &Geometry, cells: &[Cell], t: usize) -> Option<Vec<Cell>> {
    let (a, b) = others(t);
    let key = |c: &Cell| (geo.wrap(a, c.0[a]), geo.wrap(b, c.0[b]));
    let set: HashSet<(i64, i64)> = cells.iter().map(key).collect();
    if set.len() != cells.len() {
        return None;
    }
    if cells.len() == 1 {
        return Some(cells.to_vec());
    }
    for (da, db) in [(1, 1), (1, -1)] {
        let step = |c: &Cell, s: i64| (geo.wrap(a, c.0[a] + s * da), geo.wrap(b, c.0[b] + s * db));
        let heads: Vec<&Cell> = cells.iter().filter(|c| !set.contains(&step(c, -1))).collect();
        let linked = cells.iter().filter(|c| set.contains(&step(c, 1))).count();
        if heads.len() == 1 && linked == cells.len() - 1 {
            let by_key: HashMap<(i64, i64), &Cell> = cells.iter().map(|c| (key(c), c)).collect();
            let mut chain = vec![heads[0].clone()];
            while chain.len() < cells.len() {
                let next = step(chain.last().unwrap(), 1);
                chain.push(by_key[&next].clone());
            }
            return Some(chain);
        }
    }
    None
}

/// Splits a rectangle-membrane boundary into two double lines and two diagonal lines.
pub fn segment_profile(model: &OrthoplexModel, syn: &Syndrome) -> Result<SegmentProfile> {
    check_dims(model)?;
    let cells = &syn.violated_z;
    if model.p() == 4 && cells.iter().map(|c| c.0[3]).collect::<BTreeSet<_>>().len() > 1 {
        return Err(Error::UnrecognizedPattern("cells span several w hyperplanes".into()));
    }
    let geo = Geometry { model };
    let best = (0..3)
        .map(|t| {
            let runs = runs_along(&geo, cells, t);
            let pairs = double_lines(&geo, &runs, t);
            let covered: usize = pairs.iter().map(|&(i, j)| runs[i].len() + runs[j].len()).sum();
            (covered, t, runs, pairs)
        })
        .max_by_key(|(covered, t, _, _)| (*covered, std::cmp::Reverse(*t)))
        .expect("three axes");
    let (covered, t, runs, pairs) = best;
    if covered == 0 {
        if cells.is_empty() || is_octahedron(&geo, cells) {
            return Ok(SegmentProfile::empty());
        }
        return Err(Error::UnrecognizedPattern("no double lines found".into()));
    }
    if pairs.len() != 2 {
        return Err(Error::UnrecognizedPattern(format!(
            "{} double lines, expected 2",
            pairs.len()
        )));
    }
    let mut in_vertical = HashSet::new();
    let mut vertical = Vec::new();
    let mut strand_offsets = Vec::new();
    for &(i, j) in &pairs {
        let mut seg: Vec<Cell> = runs[i].iter().chain(&runs[j]).cloned().collect();
        seg.sort();
        in_vertical.extend(seg.iter().cloned());
        strand_offsets.push(normalize_last_negative(geo.disp(&runs[i][0], &runs[j][0])));
        vertical.push(Segment::new(seg, runs[i].len()));
    }
    let rest: Vec<Cell> = cells.iter().filter(|c| !in_vertical.contains(*c)).cloned().collect();
    let mut by_level: BTreeMap<i64, Vec<Cell>> = BTreeMap::new();
    for c in rest {
        by_level.entry(c.0[t]).or_default().push(c);
    }
    if by_level.len() != 2 {
        return Err(Error::UnrecognizedPattern(format!(
            "{} diagonal levels, expected 2",
            by_level.len()
        )));
    }
    let mut diagonal = Vec::new();
    for (_, group) in by_level {
        let chain = diagonal_chain(&geo, &group, t)
            .ok_or_else(|| Error::UnrecognizedPattern("diagonal cells are not collinear".into()))?;
        let positions = chain.len();
        diagonal.push(Segment::new(chain, positions));
    }
    let v = &vertical[0];
    let vertical_density = reduced(v.cells.len(), v.positions);
    let d = &diagonal[0];
    let diagonal_density = reduced(d.cells.len(), d.positions);
    // A level step is one unit long; a diagonal step is 1/√2.
    let density_ratio_squared = reduced(
        vertical_density.0 * vertical_density.0 * diagonal_density.1 * diagonal_density.1,
        2 * diagonal_density.0 * diagonal_density.0 * vertical_density.1 * vertical_density.1,
    );
    Ok(SegmentProfile {
        axis: Some(t),
        vertical,
        diagonal,
        strand_offsets,
        vertical_density,
        diagonal_density,
        density_ratio_squared,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChaironReport {
    /// Qubit cells shared by both membranes (empty without a second membrane).
    pub crease: Vec<Cell>,
    pub residual: Vec<Cell>,
    pub nonempty: bool,
    pub composite_size: usize,
    pub strand_offset_a: Option<[i64; 3]>,
    pub strand_offset_b: Option<[i64; 3]>,
}

/// Glues two membranes along a shared edge and reports the excitations left at the crease.
pub fn chairon_residual(
    model: &OrthoplexModel,
    a: &MembraneSpec,
    b: Option<&MembraneSpec>,
) -> Result<ChaironReport> {
    let op_a = membrane_operator(model, a)?;
    let syn_a = syndrome(model, &op_a)?;
    let offset_of = |s: &Syndrome| -> Option<[i64; 3]> {
        segment_profile(model, s)
            .ok()
            .and_then(|p| p.strand_offsets.first().copied())
    };
    let Some(b) = b else {
        return Ok(ChaironReport {
            crease: vec![],
            nonempty: !syn_a.violated_z.is_empty(),
            composite_size: syn_a.violated_z.len(),
            residual: syn_a.violated_z.clone(),
            strand_offset_a: offset_of(&syn_a),
            strand_offset_b: None,
        });
    };
    let (_, _, ta, _) = a.plane.axes();
    let (_, _, tb, _) = b.plane.axes();
    if ta != tb || a.plane == b.plane {
        return Err(Error::SpecsDoNotShareEdge);
    }
    let cells_a: BTreeSet<Cell> = membrane_cells(model, a)?.into_iter().collect();
    let cells_b: BTreeSet<Cell> = membrane_cells(model, b)?.into_iter().collect();
    let crease: Vec<Cell> = cells_a.intersection(&cells_b).cloned().collect();
    let (p, q) = others(ta);
    let column: BTreeSet<(i64, i64)> = crease.iter().map(|c| (c.0[p], c.0[q])).collect();
    if column.len() != 1 {
        return Err(Error::SpecsDoNotShareEdge);
    }
    let (cp, cq) = *column.iter().next().unwrap();
    let (tmin, tmax) = (
        crease.iter().map(|c| c.0[ta]).min().unwrap(),
        crease.iter().map(|c| c.0[ta]).max().unwrap(),
    );
    let op_b = membrane_operator(model, b)?;
    let syn_b = syndrome(model, &op_b)?;
    let composite = syndrome(model, &op_a.compose(&op_b))?;
    let geo = Geometry { model };
    let residual: Vec<Cell> = composite
        .violated_z
        .iter()
        .filter(|c| {
            geo.diff(p, cp, c.0[p]).abs() <= 1
                && geo.diff(q, cq, c.0[q]).abs() <= 1
                && (tmin..=tmax).contains(&c.0[ta])
        })
        .cloned()
        .collect();
    Ok(ChaironReport {
        crease,
        nonempty: !residual.is_empty(),
        residual,
        composite_size: composite.violated_z.len(),
        strand_offset_a: offset_of(&syn_a),
        strand_offset_b: offset_of(&syn_b),
    })
}

/// Dominant `(±1, ±1, ±2)`-type pair displacement in a triangle's boundary,
/// sign-normalized to a positive `z` entry.
pub fn space_diagonal_direction(model: &OrthoplexModel, spec: &MembraneSpec) -> Result<Option<[i64; 3]>> {
    let syn = syndrome(model, &membrane_operator(model, spec)?)?;
    let geo = Geometry { model };
    let mut counts: BTreeMap<[i64; 3], usize> = BTreeMap::new();
    for (i, a) in syn.violated_z.iter().enumerate() {
        for b in &syn.violated_z[i + 1..] {
            let mut d = geo.disp(a, b);
            let mut mags: Vec<i64> = d.iter().map(|x| x.abs()).collect();
            mags.sort();
            if mags != [1, 1, 2] {
                continue;
            }
            if d[2] < 0 {
                d = d.map(|x| -x);
            }
            *counts.entry(d).or_default() += 1;
        }
    }
    Ok(counts
        .into_iter()
        .max_by_key(|(d, n)| (*n, std::cmp::Reverse(*d)))
        .map(|(d, _)| d))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpaceDiagonalVerdict {
    pub direction_a: Option<[i64; 3]>,
    pub direction_b: Option<[i64; 3]>,
    /// Distinct directions: the two space-diagonal segments can share at most a point.
    pub no_overlap: bool,
}

pub fn space_diagonal_check(
    model: &OrthoplexModel,
    a: &MembraneSpec,
    b: &MembraneSpec,
) -> Result<SpaceDiagonalVerdict> {
    let da = space_diagonal_direction(model, a)?;
    let db = space_diagonal_direction(model, b)?;
    Ok(SpaceDiagonalVerdict {
        direction_a: da,
        direction_b: db,
        no_overlap: da.is_some() && db.is_some() && da != db,
    })
}
