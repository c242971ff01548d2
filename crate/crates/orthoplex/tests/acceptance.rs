//! End-to-end acceptance checks, one line per criterion.

use std::process::ExitCode;
use std::time::Instant;

use orthoplex::analysis::{check_string_logical, check_x_support, logical_basis, predicted_k, string_cells, StringKind};
use orthoplex::chain::validate_complex;
use orthoplex::defect::reference_paths;
use orthoplex::dynamics::{
    chairon_residual, fragment_loop, membrane_operator, move_lineon, moved_z_syndrome, octahedron_operator,
    project_and_classify, random_offsets, segment_profile, MembraneSpec, Plane,
};
use orthoplex::{
    build_css, build_dislocation, cross_validate, repetition_complex, standard_hgp_partition, syndrome, tensor_power,
    BitMatrix, Cell, CssCode, LatticeShape, OrthoplexModel, PauliOp,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn periodic(sizes: &[usize]) -> OrthoplexModel {
    OrthoplexModel::build(LatticeShape::periodic(sizes).unwrap()).unwrap()
}

fn cell(v: &[i64]) -> Cell {
    Cell::new(v.to_vec())
}

fn toric(p: usize, l: usize) -> CssCode {
    let reps = vec![repetition_complex(l, true).unwrap(); p];
    build_css(&reps, &standard_hgp_partition(p, 1).unwrap()).unwrap()
}

fn gsd_grid() -> Vec<LatticeShape> {
    let mut shapes = Vec::new();
    for lx in 2..=6 {
        for ly in 2..=6 {
            for lz in 2..=4 {
                shapes.push(LatticeShape::periodic(&[lx, ly, lz]).unwrap());
            }
        }
    }
    shapes
}

fn gsd_law() -> Outcome {
    let shapes = gsd_grid();
    for shape in &shapes {
        let (_, k) = OrthoplexModel::build(shape.clone()).map_err(|e| e.to_string())?.code.params();
        let want = predicted_k(shape).unwrap();
        ensure(k == want, format!("{:?}: k = {k}, expected {want}", shape.sizes))?;
    }
    Ok(format!("{} shapes, k = 4 gcd(Lx, Ly)", shapes.len()))
}

fn non_monotonic() -> Outcome {
    let ks: Vec<usize> = [3, 4, 5].iter().map(|&lx| periodic(&[lx, 4, 4]).code.params().1).collect();
    ensure(ks == [4, 16, 4], format!("k = {ks:?}"))?;
    Ok(format!("k over Lx = 3,4,5 is {ks:?}"))
}

fn toric_regression() -> Outcome {
    for l in 2..=4 {
        for (p, want) in [(2, 2), (3, 3)] {
            let k = toric(p, l).params().1;
            ensure(k == want, format!("p = {p}, L = {l}: k = {k}"))?;
        }
    }
    Ok("k = 2 (2D) and k = 3 (3D) for L = 2..4".into())
}

fn construction_equivalence() -> Outcome {
    for sizes in [&[2, 2, 2][..], &[2, 2, 2, 2]] {
        let cv = cross_validate(&periodic(sizes)).map_err(|e| e.to_string())?;
        ensure(cv.pass, format!("{sizes:?}: {} mismatched rows", cv.mismatches.len()))?;
    }
    Ok("lattice and partition builds agree on (2,2,2), (2,2,2,2)".into())
}

fn test_matrix() -> Vec<LatticeShape> {
    let mut shapes = gsd_grid();
    for sizes in [&[2, 2, 2, 2][..], &[3, 2, 2, 2], &[3, 3], &[4, 4]] {
        shapes.push(LatticeShape::periodic(sizes).unwrap());
    }
    shapes.push(LatticeShape::new(vec![3, 3, 3], vec![true, true, false]).unwrap());
    shapes.push(LatticeShape::open(&[3, 3, 3]).unwrap());
    shapes
}

fn css_and_chain() -> Outcome {
    let shapes = test_matrix();
    for shape in &shapes {
        let model = OrthoplexModel::build(shape.clone()).map_err(|e| e.to_string())?;
        ensure(model.code.is_css(), format!("{:?}: Hx Hz^T != 0", shape.sizes))?;
        let reps: Vec<_> = shape
            .sizes
            .iter()
            .zip(&shape.periodic)
            .map(|(&l, &p)| repetition_complex(l, p).unwrap())
            .collect();
        let report = validate_complex(&tensor_power(&reps).unwrap());
        ensure(report.pass, format!("{:?}: boundary of boundary != 0", shape.sizes))?;
    }
    for l in 2..=4 {
        for p in [2, 3] {
            ensure(toric(p, l).is_css(), format!("toric p = {p}, L = {l}"))?;
        }
    }
    Ok(format!("{} orthoplex builds and 6 toric builds", shapes.len()))
}

fn single_x_and_octahedron() -> Outcome {
    let m = periodic(&[4, 4, 4, 4]);
    let gamma = cell(&[3, 2, 2, 0]);
    let single = syndrome(&m, &PauliOp::x_on(&m, [&gamma]).unwrap()).unwrap();
    let mut want: Vec<Cell> = (0..3).flat_map(|a| [-1, 1].map(|d| gamma.step(a, d))).collect();
    want.sort();
    ensure(single.violated_x.is_empty() && single.violated_z == want, format!("single X: {:?}", single.violated_z))?;

    let center = cell(&[2, 2, 2, 0]);
    let oct = syndrome(&m, &octahedron_operator(&m, &center).unwrap()).unwrap();
    let mut want: Vec<Cell> = (0..3).flat_map(|a| [-2, 2].map(|d| center.step(a, d))).collect();
    want.sort();
    ensure(oct.violated_z == want, format!("octahedron: {:?}", oct.violated_z))?;
    Ok("6 violated B terms at gamma ± ½e_k; octahedron composite 6 at center ± e_k".into())
}

fn rectangle_profile() -> Outcome {
    let m = periodic(&[6, 6, 6, 6]);
    let spec = MembraneSpec::rectangle(Plane::XPlusY, 1, 0, 2, 0, 3);
    let syn = syndrome(&m, &membrane_operator(&m, &spec).unwrap()).unwrap();
    let p = segment_profile(&m, &syn).map_err(|e| e.to_string())?;
    ensure((p.vertical.len(), p.diagonal.len()) == (2, 2), "expected 2 vertical and 2 diagonal segments")?;
    ensure(p.vertical_density == (2, 1), format!("vertical density {:?}", p.vertical_density))?;
    ensure(p.diagonal_density == (1, 1), format!("diagonal density {:?}", p.diagonal_density))?;
    let covered: usize = p.vertical.iter().chain(&p.diagonal).map(|s| s.cells.len()).sum();
    ensure(covered == syn.violated_z.len(), "segments do not cover the syndrome")?;
    Ok(format!(
        "2 + 2 segments, densities 2 and 1, ratio² {}/{}",
        p.density_ratio_squared.0, p.density_ratio_squared.1
    ))
}

fn chairon() -> Outcome {
    let m = periodic(&[6, 6, 6, 6]);
    let a = MembraneSpec::rectangle(Plane::XPlusY, 1, 0, 2, 0, 2);
    let b = MembraneSpec::rectangle(Plane::XMinusY, 1, -4, 2, 0, 2);
    let r = chairon_residual(&m, &a, Some(&b)).map_err(|e| e.to_string())?;
    ensure(r.nonempty, "empty residual")?;
    ensure(
        r.strand_offset_a == Some([-1, -1, 0]) && r.strand_offset_b == Some([1, -1, 0]),
        format!("strand offsets {:?} / {:?}", r.strand_offset_a, r.strand_offset_b),
    )?;
    Ok(format!("residual of {} cells, offsets (-½,-½,0) vs (½,-½,0)", r.residual.len()))
}

fn fragmentation() -> Outcome {
    let m = periodic(&[4, 4, 4, 4]);
    let spec = MembraneSpec::rectangle(Plane::XPlusY, 1, 0, 1, 0, 1);
    let base = syndrome(&m, &membrane_operator(&m, &spec).unwrap()).unwrap();
    for seed in 0..100 {
        let (_, frag) = fragment_loop(&m, &spec, &random_offsets(&base, 4, seed)).map_err(|e| e.to_string())?;
        ensure(frag.len() == base.len(), format!("seed {seed}: {} != {}", frag.len(), base.len()))?;
        let r = project_and_classify(&m.shape, &frag, 3, None).map_err(|e| e.to_string())?;
        ensure(
            r.components == 1 && r.all_degree_two,
            format!("seed {seed}: {} components, degrees {:?}", r.components, r.degrees),
        )?;
    }
    Ok(format!("100 seeds, {} excitations, one degree-2 loop each", base.len()))
}

fn mobility() -> Outcome {
    let m = periodic(&[4, 4, 4]);
    let mut checked = 0;
    for b in &m.z_cells {
        for axis in 0..3 {
            for d in [-1, 1] {
                let op = move_lineon(&m, b, axis, d).map_err(|e| e.to_string())?;
                let after = moved_z_syndrome(&m, std::slice::from_ref(b), &op).unwrap();
                if axis == 2 {
                    let target = m.shape.canonicalize(&b.step(2, 2 * d)).unwrap();
                    ensure(after == [target], format!("{b} along z{d:+}: {after:?}"))?;
                } else {
                    ensure(after.len() > 1, format!("{b} along axis {axis} is clean"))?;
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{} B terms, {checked} moves, clean only along ±z", m.z_cells.len()))
}

fn string_logicals() -> Outcome {
    let mut count = 0;
    for sizes in [&[3, 3, 2][..], &[4, 4, 3], &[3, 4, 2], &[5, 5, 4]] {
        let m = periodic(sizes);
        let origin = cell(&[0, 0, 0]);
        let mut kinds = vec![StringKind::VerticalZ];
        if sizes[0] == sizes[1] {
            kinds.extend([StringKind::DiagonalPlus, StringKind::DiagonalMinus]);
        }
        for kind in kinds {
            let v = check_string_logical(&m, kind, &origin).map_err(|e| e.to_string())?;
            ensure(v.is_logical(), format!("{sizes:?} {kind:?}: {v:?}"))?;
            let support = m.qubit_vector(&string_cells(&m, kind, &origin).unwrap()).unwrap();
            let square = support.xor(&support);
            let (_, outside) = check_x_support(&m, &square).unwrap();
            ensure(!outside, format!("{sizes:?} {kind:?}: square outside rowspace"))?;
            count += 1;
        }
    }
    Ok(format!("{count} strings are logical; their squares are trivial"))
}

fn defect_suite() -> Outcome {
    let small = build_dislocation(&LatticeShape::open(&[6, 6, 6]).unwrap()).map_err(|e| e.to_string())?;
    let report = small.commutation_check();
    ensure(report.pass, format!("{} anticommuting pairs", report.anticommuting.len()))?;
    let s = small.symplectic_matrix();
    let n = s.cols() / 2;
    let swapped = BitMatrix::from_rows(
        2 * n,
        s.row_vectors()
            .iter()
            .map(|r| orthoplex::BitVector::from_indices(2 * n, r.ones().map(|i| (i + n) % (2 * n))))
            .collect(),
    )
    .unwrap();
    ensure(s.mat_mul(&swapped.transpose()).unwrap().is_zero(), "dense symplectic product is nonzero")?;

    let big = build_dislocation(&LatticeShape::open(&[24, 24, 24]).unwrap()).map_err(|e| e.to_string())?;
    let mut swaps = Vec::new();
    for (name, path) in reference_paths() {
        let v = big.braid_planon(&path).map_err(|e| format!("{name}: {e}"))?;
        ensure(big.check_transport(&v), format!("{name}: transport witness does not reproduce the syndrome"))?;
        let want = name == "winding-1";
        ensure(v.swapped == want, format!("{name}: swapped = {}", v.swapped))?;
        ensure(
            want || v.end_type == Some(v.start_type),
            format!("{name}: ends as {:?}, started as {:?}", v.end_type, v.start_type),
        )?;
        swaps.push(format!("{name} {}", if v.swapped { "swap" } else { "no swap" }));
    }
    Ok(format!("{} generators commute on 6³; {}", report.generators, swaps.join(", ")))
}

fn symplectic_pairing() -> Outcome {
    let mut codes: Vec<(String, CssCode)> = test_matrix()
        .into_iter()
        .map(|s| (format!("{:?}", s.sizes), OrthoplexModel::build(s).unwrap().code))
        .collect();
    for l in 2..=4 {
        for p in [2, 3] {
            codes.push((format!("toric p={p} L={l}"), toric(p, l)));
        }
    }
    for (name, code) in &codes {
        let set = logical_basis(code);
        ensure(set.k() == code.params().1, format!("{name}: {} logicals for k = {}", set.k(), code.params().1))?;
        ensure(set.pairing_full_rank(), format!("{name}: pairing matrix is singular"))?;
    }
    Ok(format!("{} codes", codes.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("GSD law", gsd_law),
        ("non-monotonic k", non_monotonic),
        ("toric regression", toric_regression),
        ("construction equivalence", construction_equivalence),
        ("CSS and chain validity", css_and_chain),
        ("single X and octahedron", single_x_and_octahedron),
        ("rectangle membrane profile", rectangle_profile),
        ("chairon residual", chairon),
        ("fragmentation", fragmentation),
        ("mobility dichotomy", mobility),
        ("string logicals", string_logicals),
        ("dislocation defect", defect_suite),
        ("symplectic pairing", symplectic_pairing),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
