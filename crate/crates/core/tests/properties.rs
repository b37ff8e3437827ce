use monoscheme_core::metrics::{max_step_change, oscillates_point_to_point};
use monoscheme_core::stencil::{
    apply_d1_1d, apply_d2_1d, apply_m_1d, apply_m_3d, solve_m_1d, solve_m_3d, BoundaryPolicy3D, GhostRule,
};
use monoscheme_core::{flat_index, unflatten, BoundaryData1D, Field1D, Field3D, Mesh1D, Mesh3D, MeshFunction};
use proptest::prelude::*;

fn values(len: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<f64>> {
    len.prop_flat_map(|n| proptest::collection::vec(-100.0..100.0f64, n))
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn step_change_is_2_lipschitz(pair in (2usize..40).prop_flat_map(|n| (
        proptest::collection::vec(-10.0..10.0f64, n),
        proptest::collection::vec(-10.0..10.0f64, n),
    ))) {
        let (u, w) = pair;
        let dist = monoscheme_core::dist_c(&u, &w);
        prop_assert!((max_step_change(&u) - max_step_change(&w)).abs() <= 2.0 * dist * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn flat_index_round_trips(n in 1usize..12, seed in any::<u64>()) {
        let idx = (seed as usize) % (n * n * n);
        let (i, j, k) = unflatten(idx, n).unwrap();
        prop_assert_eq!(flat_index(i, j, k, n).unwrap(), idx);
    }

    #[test]
    fn solve_m_1d_round_trips(b in values(1..=60), u0 in -5.0..5.0f64, un in -5.0..5.0f64) {
        let mesh = Mesh1D::new(0.0, 1.0, b.len()).unwrap();
        let bc = BoundaryData1D::new(u0, un);
        let rhs = MeshFunction::from_values(mesh, b).unwrap();
        let a = solve_m_1d(&rhs, &bc).unwrap();
        prop_assert!(apply_m_1d(&a, &bc).dist_c(&rhs) <= 1e-8);
    }

    #[test]
    fn m_1d_is_a_contraction(u in values(1..=50), w in values(50..=50)) {
        let w = &w[..u.len()];
        let mesh = Mesh1D::new(0.0, 2.0, u.len()).unwrap();
        let bc = BoundaryData1D::uniform(0.0);
        let a = apply_m_1d(&MeshFunction::from_values(mesh, u.clone()).unwrap(), &bc);
        let b = apply_m_1d(&MeshFunction::from_values(mesh, w.to_vec()).unwrap(), &bc);
        prop_assert!(a.dist_c(&b) <= monoscheme_core::dist_c(&u, w) * (1.0 + 1e-12));
    }

    #[test]
    fn oscillation_is_reversal_invariant(u in values(3..=30)) {
        let mut r = u.clone();
        r.reverse();
        prop_assert_eq!(oscillates_point_to_point(&u).unwrap(), oscillates_point_to_point(&r).unwrap());
    }
}

#[test]
fn solve_m_3d_round_trips() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let policies = [
        BoundaryPolicy3D::uniform(GhostRule::ZeroGradient),
        BoundaryPolicy3D::uniform(GhostRule::ZeroGradient)
            .with_face(monoscheme_core::stencil::Face::XLow, monoscheme_core::stencil::FaceRule::Uniform(GhostRule::Dirichlet(1.0))),
    ];
    for n in [3, 5, 8] {
        let mesh = Mesh3D::new(1.0, n).unwrap();
        for policy in &policies {
            let b = Field3D::from_values(mesh, (0..mesh.cell_count()).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
            let a = solve_m_3d(&b, policy, 1e-10, 500).unwrap();
            assert!(apply_m_3d(&a, policy).unwrap().dist_c(&b) <= 1e-8);
        }
    }
}

#[test]
fn difference_operators_are_exact_on_low_degree() {
    for n in [1, 2, 7, 33] {
        let mesh = Mesh1D::new(-1.0, 2.0, n).unwrap();
        let lin = Field1D::sample(mesh, |x| 3.0 * x - 1.0);
        let d1 = apply_d1_1d(&lin, &BoundaryData1D::new(-4.0, 5.0));
        assert!(d1.values().iter().all(|v| (v - 3.0).abs() < 1e-11));
        let quad = Field1D::sample(mesh, |x| x * x);
        let bc = BoundaryData1D::new(1.0, 4.0);
        let d2 = apply_d2_1d(&quad, &bc);
        assert!(d2.values().iter().all(|v| (v - 2.0).abs() < 1e-8), "{d2:?}");
        let d1q = apply_d1_1d(&quad, &bc);
        for (x, v) in mesh.interior_points().iter().zip(d1q.values()) {
            assert!((v - 2.0 * x).abs() < 1e-11);
        }
    }
}

#[test]
fn m_defect_is_second_order() {
    let smooth = |x: f64| (2.0 * x).sin() + x * x;
    let mut errs = Vec::new();
    let mut hs = Vec::new();
    for n in [15, 31, 63, 127] {
        let mesh = Mesh1D::new(0.0, 1.0, n).unwrap();
        let u = Field1D::sample(mesh, smooth);
        let bc = BoundaryData1D::new(smooth(0.0), smooth(1.0));
        errs.push(apply_m_1d(&u, &bc).dist_c(&u));
        hs.push(mesh.h());
    }
    let p = monoscheme_core::bvp1d::log_log_slope(&hs, &errs);
    assert!(p >= 1.9, "observed order {p}");
}
