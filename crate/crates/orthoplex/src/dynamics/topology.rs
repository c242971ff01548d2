//! Projection of scattered excitations and the loop test on the projected set.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::Serialize;

use super::membrane::Plane;
use super::Syndrome;
use crate::error::{Error, Result};
use crate::lattice::{Cell, LatticeShape};

/// Neighbor displacements along a membrane boundary in the `x + y` plane: the
/// diagonal step, the two rungs of a double line, and the two corner links.
const XY_STEPS: [[i64; 3]; 5] = [[-1, 1, 0], [1, 1, 0], [1, 1, -2], [0, 1, -1], [1, 0, -1]];

/// Signed displacements linking consecutive boundary cells of a membrane in `plane`.
pub fn adjacency_patterns(plane: Plane) -> Vec<[i64; 3]> {
    let (u, v, t, s) = plane.axes();
    let mut out = BTreeSet::new();
    for p in XY_STEPS {
        let mut q = [0; 3];
        q[u] = p[0];
        q[v] = s * p[1];
        q[t] = p[2];
        out.insert(q);
        out.insert(q.map(|x| -x));
    }
    out.into_iter().collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TopologyReport {
    pub cells: usize,
    pub components: usize,
    pub all_degree_two: bool,
    pub degrees: BTreeMap<usize, usize>,
    pub orientation: Option<Plane>,
}

fn projected_shape(shape: &LatticeShape, drop_axis: usize) -> Result<LatticeShape> {
    if drop_axis >= shape.p() {
        return Err(Error::InvalidDimension(drop_axis));
    }
    if shape.p() != 4 {
        return Err(Error::InvalidDimension(shape.p()));
    }
    let mut sizes = shape.sizes.clone();
    let mut periodic = shape.periodic.clone();
    sizes.remove(drop_axis);
    periodic.remove(drop_axis);
    LatticeShape::new(sizes, periodic)
}

fn project(syn: &Syndrome, drop_axis: usize) -> Vec<Cell> {
    let set: BTreeSet<Cell> = syn
        .violated_z
        .iter()
        .chain(&syn.violated_x)
        .map(|c| {
            let mut v = c.0.clone();
            v.remove(drop_axis);
            Cell::new(v)
        })
        .collect();
    set.into_iter().collect()
}

fn classify(shape: &LatticeShape, cells: &[Cell], patterns: &[[i64; 3]]) -> (usize, BTreeMap<usize, usize>) {
    let index: HashSet<&Cell> = cells.iter().collect();
    let adj: Vec<Vec<usize>> = cells
        .iter()
        .map(|c| {
            patterns
                .iter()
                .filter_map(|d| shape.canonicalize(&c.offset(d)))
                .filter(|n| index.contains(n))
                .map(|n| cells.binary_search(&n).expect("cells are sorted"))
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect()
        })
        .collect();
    let mut degrees = BTreeMap::new();
    for a in &adj {
        *degrees.entry(a.len()).or_default() += 1;
    }
    let mut seen = vec![false; cells.len()];
    let mut components = 0;
    for start in 0..cells.len() {
        if seen[start] {
            continue;
        }
        components += 1;
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for &j in &adj[i] {
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
    }
    (components, degrees)
}

/// Projects a 4D syndrome along `drop_axis` and tests it against explicit patterns.
pub fn project_with(
    shape: &LatticeShape,
    syn: &Syndrome,
    drop_axis: usize,
    patterns: &[[i64; 3]],
) -> Result<TopologyReport> {
    let projected = projected_shape(shape, drop_axis)?;
    let cells = project(syn, drop_axis);
    let (components, degrees) = classify(&projected, &cells, patterns);
    Ok(TopologyReport {
        cells: cells.len(),
        components,
        all_degree_two: !cells.is_empty() && degrees.keys().all(|&d| d == 2),
        degrees,
        orientation: None,
    })
}

/// Loop test using one membrane orientation's patterns; with `plane = None`, the
/// orientation giving the most degree-two cells wins.
pub fn project_and_classify(
    shape: &LatticeShape,
    syn: &Syndrome,
    drop_axis: usize,
    plane: Option<Plane>,
) -> Result<TopologyReport> {
    let candidates: Vec<Plane> = plane.map_or(Plane::ALL.to_vec(), |p| vec![p]);
    let mut best: Option<TopologyReport> = None;
    for p in candidates {
        let mut r = project_with(shape, syn, drop_axis, &adjacency_patterns(p))?;
        r.orientation = Some(p);
        let score = |r: &TopologyReport| r.degrees.get(&2).copied().unwrap_or(0);
        if best.as_ref().map_or(true, |b| score(&r) > score(b)) {
            best = Some(r);
        }
    }
    Ok(best.expect("at least one orientation"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{fragment_loop, membrane_operator, random_offsets, syndrome, MembraneSpec};
    use crate::model::OrthoplexModel;

    fn model(l: usize) -> OrthoplexModel {
        OrthoplexModel::build(LatticeShape::periodic(&[l; 4]).unwrap()).unwrap()
    }

    #[test]
    fn rectangles_are_loops_in_every_plane() {
        let m = model(6);
        for plane in Plane::ALL {
            for (lv, lt) in [(1, 1), (2, 3), (3, 2), (1, 4)] {
                let spec = MembraneSpec::rectangle(plane, 1, 0, lv, 0, lt);
                let syn = syndrome(&m, &membrane_operator(&m, &spec).unwrap()).unwrap();
                let r = project_and_classify(&m.shape, &syn, 3, Some(plane)).unwrap();
                assert_eq!((r.components, r.all_degree_two), (1, true), "{plane:?} {lv} {lt}");
                let auto = project_and_classify(&m.shape, &syn, 3, None).unwrap();
                assert_eq!(auto.orientation, Some(plane));
            }
        }
    }

    #[test]
    fn fragmented_and_disjoint_loops() {
        let m = model(6);
        let spec = MembraneSpec::rectangle(Plane::XPlusY, 1, 0, 1, 0, 1);
        let base = syndrome(&m, &membrane_operator(&m, &spec).unwrap()).unwrap();
        let (_, frag) = fragment_loop(&m, &spec, &random_offsets(&base, 6, 11)).unwrap();
        let r = project_and_classify(&m.shape, &frag, 3, None).unwrap();
        assert_eq!((r.components, r.all_degree_two), (1, true));

        let far = MembraneSpec::rectangle(Plane::XPlusY, 7, 3, 1, 6, 1);
        let other = syndrome(&m, &membrane_operator(&m, &far).unwrap()).unwrap();
        let union = frag.symmetric_difference(&other);
        let r = project_and_classify(&m.shape, &union, 3, None).unwrap();
        assert_eq!((r.components, r.all_degree_two), (2, true));
    }

    #[test]
    fn lone_lineon_is_not_a_loop() {
        let m = model(4);
        let syn = Syndrome {
            violated_x: vec![],
            violated_z: vec![Cell::new(vec![2, 2, 2, 0])],
        };
        let r = project_and_classify(&m.shape, &syn, 3, None).unwrap();
        assert_eq!((r.components, r.all_degree_two), (1, false));
        assert_eq!(r.degrees, BTreeMap::from([(0, 1)]));
    }
}
