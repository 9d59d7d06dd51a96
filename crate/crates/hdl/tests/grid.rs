use faer::{c64, Mat};
use hdl::grid::*;
use hdl_core::symalg::{builtin_generators, parse_operator, potential, Generator, OperatorExpr};

fn max_abs(m: &Mat<c64>) -> f64 {
    let mut best = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            best = best.max(m[(i, j)].norm());
        }
    }
    best
}

fn herm_defect(m: &Mat<c64>) -> f64 {
    max_abs(&(m - m.adjoint())) / max_abs(m).max(f64::MIN_POSITIVE)
}

fn prim(m: usize) -> PrimitiveSet {
    build_primitives(&GridSpec::square(m)).unwrap()
}

#[test]
fn bdag_b_equals_psq() {
    let p = prim(10);
    let d = p.dims();
    let bb = p.bdag().dense(d) * p.b().dense(d);
    let psq = p.psq().dense(d);
    assert!(max_abs(&(bb - &psq)) <= 1e-12 * max_abs(&psq));
    let bdag = p.bdag().dense(d);
    assert!(max_abs(&(bdag - p.b().dense(d).adjoint())) <= 1e-14 * max_abs(&psq).sqrt());
}

#[test]
fn position_operators_are_node_diagonals() {
    let spec = GridSpec::square(8).with_stretch(1.0);
    let p = build_primitives(&spec).unwrap();
    let d = p.dims();
    let inv = p.x2_inv2().dense(d);
    let h2 = spec.l2 / 9.0;
    for i in 0..8 {
        for j in 0..8 {
            let idx = i * 8 + j;
            let expect = 1.0 / ((j + 1) as f64 * h2).powi(2);
            assert!((inv[(idx, idx)].re - expect).abs() < 1e-12 * expect);
        }
    }
    let x1 = p.x1().dense(d);
    assert_eq!(x1[(9, 9)].re, spec.x1_nodes()[1]);
    assert_eq!(x1[(9, 10)], c64::new(0.0, 0.0));
}

#[test]
fn momenta_hermitian_and_psq_positive() {
    let p = prim(12);
    let d = p.dims();
    for op in [p.p1(), p.p2(), p.psq()] {
        assert!(herm_defect(&op.dense(d)) < 1e-13);
    }
    let es = eigh(&p.psq().dense(d)).unwrap();
    assert!(es.values[0] > -1e-10 * es.values.last().unwrap());
}

/// `[X1, P1] g ≈ i g` for a Gaussian; the Fourier derivative converges
/// faster than any power, so the error must fall steeply with `M1`.
#[test]
fn canonical_commutator_on_gaussian() {
    let mut errs = Vec::new();
    for m in [16usize, 32, 64] {
        let spec = GridSpec {
            m1: m,
            m2: 8,
            ..GridSpec::square(m).with_box(9.0, 6.0)
        };
        let p = build_primitives(&spec).unwrap();
        let d = p.dims();
        let x1 = spec.x1_nodes();
        let g = Mat::from_fn(d.scalar(), 1, |r, _| c64::new((-x1[r / 8].powi(2) / 2.0).exp(), 0.0));
        let comm = p.x1().apply(&p.p1().apply(&g, d), d) - p.p1().apply(&p.x1().apply(&g, d), d);
        let err = max_abs(&(comm - Mat::from_fn(g.nrows(), 1, |r, _| g[(r, 0)] * c64::new(0.0, 1.0))));
        errs.push(err);
    }
    assert!(errs[1] < errs[0] / 4.0 && errs[2] < errs[1] / 4.0, "{errs:?}");
    assert!(errs[2] < 1e-10, "{errs:?}");
}

#[test]
fn pinv_inverts_retained_modes() {
    let p = prim(12);
    let d = p.dims();
    let psq = p.psq().dense(d);
    let prod = p.pinv2().dense(d) * &psq;
    // Projector onto retained modes: (U1⊗U2) diag(w > 0) (U1⊗U2)†.
    let es = eigh(&psq).unwrap();
    let top = *es.values.last().unwrap();
    let keep: Vec<usize> = (0..es.len()).filter(|&i| es.values[i] > PINV_CUTOFF * top).collect();
    let u = Mat::from_fn(d.scalar(), keep.len(), |r, c| es.vectors[(r, keep[c])]);
    let restricted = u.adjoint() * &prod * &u;
    let id = Mat::<c64>::identity(keep.len(), keep.len());
    assert!(max_abs(&(restricted - id)) < 1e-8);
    assert_eq!(p.pinv_dropped + keep.len(), d.scalar());
}

#[test]
fn realize_simple_expressions() {
    let p = prim(8);
    let d = p.dims();
    let k = 0.7;
    let v = realize(&potential(), &p, k).dense(d);
    let x1 = p.spec.x1_nodes();
    let x2 = p.spec.x2_nodes();
    for i in 0..8 {
        for j in 0..8 {
            let idx = i * 8 + j;
            let expect = 0.5 * (x1[i] * x1[i] + x2[j] * x2[j] + k / (x2[j] * x2[j]));
            assert!((v[(idx, idx)].re - expect).abs() < 1e-12 * expect);
        }
    }
    assert!(max_abs(&(v.clone() - Mat::from_fn(64, 64, |r, c| if r == c { v[(r, r)] } else { c64::new(0.0, 0.0) }))) == 0.0);

    let l = realize_naive(&OperatorExpr::angular_momentum(), &p, 0.0).dense(d);
    let direct = p.x1().dense(d) * p.p2().dense(d) - p.x2().dense(d) * p.p1().dense(d);
    assert!(max_abs(&(l - direct)) < 1e-12);

    let i = realize(&parse_operator("i").unwrap(), &p, 0.0).dense(d);
    assert!(max_abs(&(i - Mat::from_fn(64, 64, |r, c| if r == c { c64::new(0.0, 1.0) } else { c64::new(0.0, 0.0) }))) == 0.0);
}

#[test]
fn hamiltonian_blocks() {
    let p = prim(10);
    let d = p.dims();
    let k = 1.0;
    let h = build_hamiltonian(k, &p);
    let ul = h.ul.dense(d) - Mat::<c64>::identity(100, 100) - realize(&potential(), &p, k).dense(d);
    assert!(max_abs(&ul) < 1e-13);
    assert!(herm_defect(&h.dense()) < 1e-14);
}

#[test]
fn generator_blocks_hermitian_and_structured() {
    let p = prim(10);
    let d = p.dims();
    let k = 1.0;
    let g = builtin_generators();
    for gen in g.iter() {
        let t = build_t(gen, k, &p).dense();
        assert!(herm_defect(&t) < 1e-8, "{}: {}", gen.name, herm_defect(&t));
    }
    let t3 = build_t(&g.q3, k, &p);
    let expect = realize(&g.q3.q12, &p, k).dense(d) * p.b().dense(d);
    assert!(max_abs(&(t3.ur.dense(d) - &expect)) < 1e-14 * max_abs(&expect));

    let zero = Generator::from_blocks("zero", OperatorExpr::zero(), OperatorExpr::zero(), &potential()).unwrap();
    assert_eq!(max_abs(&build_t(&zero, k, &p).dense()), 0.0);

    let l = build_l(&p);
    assert!(l.ur.is_zero());
    assert!(herm_defect(&l.dense()) < 1e-10);
}

#[test]
fn eigenpairs_and_projectors() {
    let p = prim(12);
    let h = build_hamiltonian(1.0, &p);
    let hd = h.dense();
    let es = eigh(&hd).unwrap();
    let hn = es.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for j in 0..es.len() {
        let v = es.vectors.subcols(j, 1).to_owned();
        let r = &hd * &v - Mat::from_fn(v.nrows(), 1, |i, _| v[(i, 0)] * es.values[j]);
        assert!(r.norm_l2() <= 1e-10 * hn, "pair {j}");
    }
    assert!(es.values.windows(2).all(|w| w[0] <= w[1]));

    let low = es.window_above(1.0, 6);
    let spaces = cluster_levels(&low.values, 1e-3, 4).unwrap();
    let w = low.space_vectors(&spaces[2]);
    let proj = &w * w.adjoint();
    assert!(max_abs(&(&proj * &proj - &proj)) < 1e-10);
    assert!(max_abs(&(proj.adjoint() - &proj)) < 1e-14);
}

#[test]
fn commutator_residual_of_h_with_itself_vanishes() {
    let p = prim(10);
    let h = build_hamiltonian(1.0, &p);
    let low = eigh(&h.dense()).unwrap().window_above(1.0, 6);
    let r = commutator_residual(&h, &h, Some(&low));
    assert!(r.full.unwrap() < 1e-15);
    assert!(r.projected.unwrap() < 1e-12);
}

#[test]
fn grid_multiplicities_follow_integer_part() {
    let lv = solve_dirac_levels(1.0, &GridSpec::square(24), 6, 1e-3).unwrap();
    let found: Vec<usize> = lv.spaces.iter().map(|s| s.multiplicity).collect();
    assert_eq!(found, vec![1, 1, 2, 2, 3, 3]);
    for n in 0..6 {
        assert!(lv.level(n).is_ok());
    }
}

#[test]
fn dirac_levels_match_level_equation() {
    let k = 1.0;
    let lv = solve_dirac_levels(k, &GridSpec::square(24), 4, 1e-3).unwrap();
    for n in 0..4 {
        let e = hdl_core::spectrum::solve_level(n, k, 1e-13).unwrap().e;
        assert!((lv.level(n).unwrap().energy - e).abs() < 1e-5, "N={n}");
    }
}

#[test]
fn nonrelativistic_oracle() {
    let k = 1.0;
    let (values, spaces) = solve_nonrel_levels(k, &GridSpec::square(24), 4, 1e-3).unwrap();
    assert!(values.len() >= 6);
    for (n, s) in spaces.iter().enumerate() {
        let e = hdl_core::spectrum::nonrel_level(n as u32, k);
        assert_eq!(s.multiplicity, n / 2 + 1);
        assert!((s.energy - e).abs() < 1e-3, "N={n}: {} vs {e}", s.energy);
    }
}

/// Projected commutators of the conserved generators fall with refinement;
/// the angular momentum stays at O(0.1) because the barrier breaks rotation.
#[test]
fn conservation_and_negative_control() {
    let k = 1.0;
    let g = builtin_generators();
    let mut t_res = Vec::new();
    let mut l_res = Vec::new();
    for m in [16usize, 24] {
        let lv = solve_dirac_levels(k, &GridSpec::square(m), 4, 1e-3).unwrap();
        let low = lv.low.window_above(1.0, 6);
        let worst = g
            .iter()
            .filter(|x| x.name != "L")
            .map(|x| projected_residual(&build_t(x, k, &lv.prim), &low))
            .fold(0.0, f64::max);
        t_res.push(worst);
        l_res.push(projected_residual(&build_l(&lv.prim), &low));
    }
    assert!(t_res[1] < t_res[0], "{t_res:?}");
    assert!(l_res.iter().all(|&r| r > 0.05), "{l_res:?}");
    assert!(l_res[1] > 0.5 * l_res[0]);
}

/// With a purely radial potential on the full plane, L commutes with H up
/// to discretization error.
#[test]
fn angular_momentum_conserved_without_barrier() {
    let radial = parse_operator("1/2*x1^2 + 1/2*x2^2").unwrap();
    let mut res = Vec::new();
    for m in [16usize, 24] {
        let spec = GridSpec::square(m).with_domain(X2Domain::FullLine);
        let p = build_primitives(&spec).unwrap();
        let h = build_hamiltonian_with_potential(&radial, &p);
        let low = eigh(&h.dense()).unwrap().window_above(1.0, 6);
        res.push(projected_residual(&build_l(&p), &low));
    }
    assert!(res[1] < res[0] && res[1] < 1e-3, "{res:?}");
}

fn build_hamiltonian_with_potential(v: &OperatorExpr, p: &PrimitiveSet) -> DiracOp {
    hdl::grid::dirac::build_hamiltonian_with(v, 0.0, p)
}

#[test]
fn too_large_grids_are_refused() {
    let spec = GridSpec::square(80);
    assert!(matches!(build_primitives(&spec), Err(GridError::TooLarge { .. })));
    assert!(build_primitives(&GridSpec::square(9)).is_err());
}
