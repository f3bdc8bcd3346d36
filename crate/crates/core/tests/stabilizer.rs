mod common;

use common::{named, random_state, rng};
use num_complex::Complex64;
use proptest::prelude::*;
use thauma_core::stabilizer::{
    clifford_generators, enumerate_pure_stabilizer_states, in_w, in_w_plus, HullMembership, HULL_TOL,
};
use thauma_core::{CVector, DimensionSpec, HermitianOperator, PhaseSpace, PureState, StabilizerSet};

fn qutrit_set() -> StabilizerSet {
    enumerate_pure_stabilizer_states(&DimensionSpec::qutrits(1)).unwrap()
}

/// Number of Weyl operators `T_u` with `|⟨ψ|T_u|ψ⟩| = 1`, i.e. the order of
/// the stabilizer group of `ψ` up to phases.
fn stabilizer_group_order(ps: &PhaseSpace, psi: &PureState) -> usize {
    let v = psi.amplitudes();
    (0..ps.num_points())
        .filter(|&i| {
            let tv = ps.weyl_operator(i) * v;
            (v.dotc(&tv).norm() - 1.0).abs() < 1e-8
        })
        .count()
}

#[test]
fn single_qutrit_orbit_matches_weyl_eigenvectors() {
    let set = qutrit_set();
    assert_eq!(set.len(), 12);
    // Brute-force oracle: eigenvectors of every non-identity T_u, deduplicated.
    let ps = PhaseSpace::build(&[3]).unwrap();
    let mut eig: Vec<PureState> = Vec::new();
    for i in 1..ps.num_points() {
        let t = ps.weyl_operator(i);
        let (_, tri) = t.clone().schur().unpack();
        for k in 0..3 {
            let lam = tri[(k, k)];
            let shifted = t - nalgebra::DMatrix::<Complex64>::identity(3, 3) * lam;
            // T_u is normal and its eigenvalues are simple, so the null space is one-dimensional.
            let svd = shifted.svd(false, true);
            let vt = svd.v_t.unwrap();
            let (idx, _) = svd
                .singular_values
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.total_cmp(b.1))
                .unwrap();
            let v: CVector = vt.row(idx).adjoint();
            let s = PureState::new(v).unwrap();
            if !eig.iter().any(|e| e.overlap(&s) > 1.0 - 1e-9) {
                eig.push(s);
            }
        }
    }
    assert_eq!(eig.len(), 12);
    for e in &eig {
        assert!(set.position(e).is_some());
    }
}

#[test]
fn two_qutrit_orbit_has_360_states_each_stabilized_by_nine_weyl_operators() {
    let set = enumerate_pure_stabilizer_states(&DimensionSpec::qutrits(2)).unwrap();
    assert_eq!(set.len(), 360);
    // d^n ∏_{k=1}^{n} (d^k + 1) for d = 3, n = 2
    assert_eq!(set.len(), 9 * 4 * 10);
    let ps = PhaseSpace::build(&[3, 3]).unwrap();
    for s in set.states() {
        assert_eq!(stabilizer_group_order(&ps, s), 9);
    }
    for i in 0..set.len() {
        for j in 0..i {
            assert!(set.states()[i].overlap(&set.states()[j]) < 1.0 - 1e-6);
        }
    }
}

#[test]
fn orbit_is_closed_under_generators() {
    for spec in [DimensionSpec::qutrits(1), DimensionSpec::qutrits(2)] {
        let set = enumerate_pure_stabilizer_states(&spec).unwrap();
        for g in clifford_generators(&spec) {
            for s in set.states() {
                let image = s.apply(&g.matrix).unwrap();
                assert!(set.position(&image).is_some(), "{} leaves the orbit", g.name);
            }
        }
    }
}

#[test]
fn fidelity_examples() {
    let set = qutrit_set();
    for s in set.states() {
        assert!((set.stabilizer_fidelity(s).unwrap() - 1.0).abs() < 1e-12);
    }
    let hplus = thauma_core::named_state("Hplus").unwrap();
    let f = set.stabilizer_fidelity(hplus.as_pure().unwrap()).unwrap();
    assert!(f <= 1.0 / (3.0 - 3f64.sqrt()) + 1e-12, "{f}");
    let strange = thauma_core::named_state("Strange").unwrap();
    let f = set.stabilizer_fidelity(strange.as_pure().unwrap()).unwrap();
    assert!(f <= 0.6 + 1e-12, "{f}");
}

#[test]
fn hull_membership_examples() {
    let set = qutrit_set();
    let uniform = set
        .states()
        .iter()
        .fold(HermitianOperator::zeros(3), |acc, s| &acc + &s.density())
        .scale(1.0 / 12.0);
    assert!(uniform.max_abs_diff(&HermitianOperator::identity(3).scale(1.0 / 3.0)) < 1e-12);
    assert!(set.in_stab_hull(&uniform, HULL_TOL).unwrap().is_member());
    assert!(!set.in_stab_hull(&named("Strange"), HULL_TOL).unwrap().is_member());
}

#[test]
fn random_stabilizer_mixtures_are_reconstructed() {
    let set = qutrit_set();
    let mut r = rng(21);
    use rand::Rng;
    for _ in 0..5 {
        let w: Vec<f64> = (0..set.len()).map(|_| r.random::<f64>().powi(4)).collect();
        let total: f64 = w.iter().sum();
        let rho = set
            .states()
            .iter()
            .zip(&w)
            .fold(HermitianOperator::zeros(3), |acc, (s, x)| &acc + &s.density().scale(x / total));
        match set.in_stab_hull(&rho, HULL_TOL).unwrap() {
            HullMembership::Member { weights } => {
                assert!(weights.iter().all(|&x| x >= 0.0));
                assert!((weights.iter().sum::<f64>() - 1.0).abs() < 1e-9);
                let back = set
                    .states()
                    .iter()
                    .zip(&weights)
                    .fold(HermitianOperator::zeros(3), |acc, (s, &x)| &acc + &s.density().scale(x));
                assert!(back.max_abs_diff(&rho) < 1e-7);
            }
            HullMembership::NonMember { violation, .. } => panic!("mixture rejected by {violation:e}"),
        }
    }
}

#[test]
fn strict_inclusions_stab_w_plus_w() {
    let ps = PhaseSpace::build(&[3]).unwrap();
    let set = qutrit_set();
    for s in set.states() {
        assert!(in_w_plus(&ps, &s.density()).unwrap());
    }
    let tau = named("tau_T");
    assert!(in_w_plus(&ps, &tau).unwrap());
    match set.in_stab_hull(&tau, HULL_TOL).unwrap() {
        HullMembership::NonMember { witness, violation } => {
            assert!(violation > 1e-4);
            for s in set.states() {
                assert!(witness.inner(&s.density()) > -1e-7);
            }
            assert!(witness.inner(&tau) < -1e-4);
        }
        HullMembership::Member { .. } => panic!("tau_T reported inside the stabilizer polytope"),
    }
    let scaled = named("Strange").scale(0.6);
    assert!(in_w(&ps, &scaled).unwrap());
    assert!(!in_w_plus(&ps, &scaled).unwrap());
    assert!(!in_w(&ps, &named("Strange")).unwrap());
    assert!(!in_w_plus(&ps, &named("Strange")).unwrap());
}

#[test]
fn tau_t_has_the_published_wigner_function() {
    let ps = PhaseSpace::build(&[3]).unwrap();
    let w = ps.wigner_rep(&named("tau_T")).unwrap();
    let pi = std::f64::consts::PI;
    let s = (2.0 + (pi / 18.0).sin() / (2.0 * pi / 9.0).cos()) / 9.0;
    assert!((s - 0.247409).abs() < 1e-6);
    let mut got = w.values.clone();
    let mut want = vec![s, 1.0 / 3.0 - s, s, 0.0, s, 0.0, 1.0 / 3.0 - s, 0.0, 1.0 / 3.0 - s];
    got.sort_by(f64::total_cmp);
    want.sort_by(f64::total_cmp);
    for (g, x) in got.iter().zip(&want) {
        assert!((g - x).abs() < 1e-12, "{got:?} vs {want:?}");
    }
}

#[test]
fn json_export_lists_amplitude_pairs() {
    let set = qutrit_set();
    let json = set.to_json();
    let arr = json.as_array().unwrap();
    assert_eq!(arr.len(), 12);
    assert_eq!(arr[0], serde_json::json!([[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]]));
}

#[test]
fn mixed_states_have_no_fidelity_and_wrong_dims_are_rejected() {
    let set = qutrit_set();
    let mut r = rng(22);
    let rho = random_state(&mut r, 9, 2);
    assert!(set.in_stab_hull(&rho, HULL_TOL).is_err());
    assert!(set.stabilizer_fidelity(&PureState::basis(9, 0)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn fidelity_is_at_least_one_over_d(re in prop::collection::vec(-1.0f64..1.0, 3), im in prop::collection::vec(-1.0f64..1.0, 3)) {
        let v = CVector::from_iterator(3, re.iter().zip(&im).map(|(a, b)| Complex64::new(*a, *b)));
        prop_assume!(v.norm() > 1e-3);
        let psi = PureState::new(v).unwrap();
        let f = qutrit_set().stabilizer_fidelity(&psi).unwrap();
        prop_assert!(f >= 1.0 / 3.0 - 1e-12 && f <= 1.0 + 1e-12);
    }
}
