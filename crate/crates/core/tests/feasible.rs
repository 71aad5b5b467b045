use equilib::feasible::{build_profile, continue_branch, select_pivot, BranchStatus, LinkageOffsets};
use equilib::thermo::{activity_quotient, MixtureState, ReactionSystem};

/// For A <-> 2B from (1, 0+) the quotient is `4 xi^2 / (1 - xi^2)`.
fn dissociation_extent(q: f64) -> f64 {
    (q / (4.0 + q)).sqrt()
}

#[test]
fn dissociation_branch_matches_closed_form() {
    let sys = ReactionSystem::simple(&[-1.0, 2.0]).unwrap();
    let xi0 = 0.3;
    let n_ref = [1.0 - xi0, 2.0 * xi0];
    let offsets = LinkageOffsets::from_state(&sys, &n_ref, None).unwrap();
    let q0 = activity_quotient(&sys, &MixtureState::new(300.0, 1e5, n_ref.to_vec())).unwrap();
    let profile = build_profile(&sys, &offsets, q0).unwrap();
    let grid: Vec<f64> = (0..=40).map(|k| k as f64 / 40.0).collect();
    let target = |t: f64| q0 * (1.0 + 3.0 * t);
    let path = continue_branch(&profile, |t| Ok(target(t)), &grid).unwrap();
    assert_eq!(path.status, BranchStatus::Complete);
    for (t, n) in path.t.iter().zip(&path.amounts) {
        let xi = dissociation_extent(target(*t));
        assert!((n[0] - (1.0 - xi)).abs() <= 1e-10, "t={t}");
        assert!((n[1] - 2.0 * xi).abs() <= 1e-10, "t={t}");
    }
}

#[test]
fn realized_quotient_tracks_the_target() {
    let sys = ReactionSystem::simple(&[-2.0, -1.0, 2.0]).unwrap();
    let n_ref = [1.5, 0.8, 0.4];
    let offsets = LinkageOffsets::from_state(&sys, &n_ref, None).unwrap();
    let q0 = activity_quotient(&sys, &MixtureState::new(300.0, 1e5, n_ref.to_vec())).unwrap();
    let profile = build_profile(&sys, &offsets, q0).unwrap();
    let grid: Vec<f64> = (0..=30).map(|k| k as f64 / 30.0).collect();
    let target = |t: f64| q0 * (-0.8 * t).exp();
    let path = continue_branch(&profile, |t| Ok(target(t)), &grid).unwrap();
    for (t, n) in path.t.iter().zip(&path.amounts) {
        assert!(n.iter().all(|x| *x > 0.0));
        let q = activity_quotient(&sys, &MixtureState::new(300.0, 1e5, n.clone())).unwrap();
        assert!((q - target(*t)).abs() <= 1e-10 * target(*t));
    }
}

#[test]
fn every_admissible_root_solves_the_starting_target() {
    let sys = ReactionSystem::simple(&[-1.0, -1.0, 3.0]).unwrap();
    let n_ref = [2.0, 1.0, 0.5];
    let offsets = LinkageOffsets::from_state(&sys, &n_ref, None).unwrap();
    let q0 = activity_quotient(&sys, &MixtureState::new(300.0, 1e5, n_ref.to_vec())).unwrap();
    let profile = build_profile(&sys, &offsets, q0).unwrap();
    assert!(!profile.admissible_roots.is_empty());
    for &x in &profile.admissible_roots {
        let n = profile.amounts_at(x);
        let q = activity_quotient(&sys, &MixtureState::new(300.0, 1e5, n)).unwrap();
        assert!((q - q0).abs() <= 1e-9 * q0);
    }
    assert!(profile.root_table().lines().count() >= 2);
}

#[test]
fn linkage_reproduces_reference_amounts() {
    let sys = ReactionSystem::simple(&[-1.0, 2.0, -3.0]).unwrap();
    let n_ref = [0.7, 1.1, 2.4];
    let pivot = select_pivot(&sys).unwrap();
    let offsets = LinkageOffsets::from_state(&sys, &n_ref, Some(pivot)).unwrap();
    let n = offsets.amounts(n_ref[pivot]);
    for (a, b) in n.iter().zip(&n_ref) {
        assert!((a - b).abs() <= 1e-14);
    }
}
