use hubent_core::bethe::ev_infinite_u;
use hubent_core::observables::entanglement_with;
use hubent_core::scan::{
    detect_features_xy, linspace, scan_filling, scan_uv, scan_v, select_sector_by_mu, slope_jump_at_half_filling,
    FeatureKind, ScanOptions,
};
use hubent_core::ModelParams;
use proptest::prelude::*;

fn opts() -> ScanOptions {
    ScanOptions::default()
}

#[test]
fn uv_grid_peaks_at_origin() {
    let us = linspace(-4.0, 4.0, 5);
    let vs = linspace(-2.0, 2.0, 5);
    let g = scan_uv(6, &us, &vs, &opts()).unwrap();
    assert_eq!(g.ev_matrix.len(), 5);
    assert!(g.ev_matrix.iter().all(|row| row.len() == 5));
    assert!(g.ev_matrix.iter().flatten().all(|e| (0.0..=2.0).contains(e)));
    let centre = g.ev_matrix[2][2];
    assert!(g.ev_matrix[2].iter().all(|&e| e <= centre));
    assert!(g.ev_matrix.iter().all(|row| row[2] <= centre));
    for i in 0..2 {
        assert!((g.ev_matrix[i][2] - g.ev_matrix[4 - i][2]).abs() < 1e-8);
    }
}

#[test]
fn grid_matches_point_calls_and_repeats_exactly() {
    let us = [-2.0, 0.5, 3.0];
    let vs = [-1.0, 0.0, 1.5];
    let g = scan_uv(4, &us, &vs, &opts()).unwrap();
    for (i, &u) in us.iter().enumerate() {
        for (j, &v) in vs.iter().enumerate() {
            let p = entanglement_with(&ModelParams::new(4, u, v), 2, 2, opts().solver).unwrap();
            assert_eq!(g.ev_matrix[i][j].to_bits(), p.ev.to_bits());
        }
    }
    assert_eq!(g, scan_uv(4, &us, &vs, &opts()).unwrap());
}

#[test]
fn negative_u_v_sweep_saturates() {
    let vs = linspace(-8.0, 8.0, 17);
    let (curve, report) = scan_v(8, -4.0, &vs, &opts()).unwrap();
    assert!(curve.failures().next().is_none());
    let max = report
        .of_kind(FeatureKind::Maximum)
        .map(|f| f.location)
        .collect::<Vec<_>>();
    assert!(max.contains(&0.0), "maxima at {max:?}");
    let first = curve.ev_values[0];
    let last = *curve.ev_values.last().unwrap();
    assert!(first > 1.0 && first < 1.1);
    assert!(last > 1.0 && last < 1.1);
}

#[test]
fn filling_sweep_hard_core() {
    let (curve, _) = scan_filling(6, 1e6, 0.0, &opts()).unwrap();
    assert_eq!(curve.len(), 11);
    for (i, (&n, &e)) in curve.axis_values.iter().zip(&curve.ev_values).enumerate() {
        if (i + 1) % 2 == 0 {
            assert!((e - ev_infinite_u(n)).abs() < 1e-4, "n={n}");
        }
    }
    let (n_best, e_best) = curve.argmax().unwrap();
    assert!((n_best - 2.0 / 3.0).abs() < 1e-12);
    assert!((e_best - 3f64.log2()).abs() < 1e-4);
}

#[test]
fn filling_sweep_free_and_mirror() {
    let (free, _) = scan_filling(6, 0.0, 0.0, &opts()).unwrap();
    let (n, e) = free.argmax().unwrap();
    assert_eq!(n, 1.0);
    assert!((e - 2.0).abs() < 1e-8);
    for u in [0.0, 2.5, -3.0] {
        let (c, _) = scan_filling(6, u, 0.0, &opts()).unwrap();
        let k = c.len();
        for i in 0..k {
            assert!((c.ev_values[i] - c.ev_values[k - 1 - i]).abs() < 1e-8, "U={u} i={i}");
        }
    }
}

#[test]
fn slope_jump_free_point_is_smallest() {
    let o = opts();
    let free = slope_jump_at_half_filling(10, 0.0, &o).unwrap();
    let one = slope_jump_at_half_filling(10, 1.0, &o).unwrap();
    assert!(free.free_point && !one.free_point);
    assert!(free.jump().abs() < one.jump().abs());
    for s in [free, one] {
        assert!((s.slope_plus + s.slope_minus).abs() < 1e-8);
        assert!(s.eq6_rhs.is_finite());
    }
}

#[test]
fn mu_selects_expected_fillings() {
    let o = opts();
    assert_eq!(select_sector_by_mu(4, 0.0, 0.0, 1e3, &o).unwrap().particles, 8);
    assert_eq!(select_sector_by_mu(4, 0.0, 0.0, -1e3, &o).unwrap().particles, 0);
    for u in [1.0, 4.0, 8.0] {
        let s = select_sector_by_mu(4, u, 0.0, u / 2.0, &o).unwrap();
        assert_eq!(s.particles, 4, "U={u}");
        assert!(s.tied_with.is_empty());
        assert_eq!(s.sector_energies.len(), 9);
    }
}

#[test]
fn mu_reports_plateau_edges() {
    let o = opts();
    let base = select_sector_by_mu(4, 4.0, 0.0, 2.0, &o).unwrap();
    let e = &base.sector_energies;
    assert_eq!(base.particles, 4);
    // Upper edge of the half-filling plateau: the next sector on the lower
    // convex hull of E0(N). Small rings need not be convex in N.
    let (next, edge) = (5..e.len())
        .map(|n| (n, (e[n] - e[4]) / (n - 4) as f64))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    let s = select_sector_by_mu(4, 4.0, 0.0, edge, &o).unwrap();
    let mut both = s.tied_with.clone();
    both.push(s.particles);
    both.sort();
    assert_eq!(both, vec![4, next]);
    assert_eq!(select_sector_by_mu(4, 4.0, 0.0, edge - 1e-3, &o).unwrap().particles, 4);
    assert_eq!(
        select_sector_by_mu(4, 4.0, 0.0, edge + 1e-3, &o).unwrap().particles,
        next
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn features_lie_inside_axis(ys in proptest::collection::vec(-1.0f64..1.0, 5..40)) {
        let xs = linspace(-1.0, 2.0, ys.len());
        let r = detect_features_xy(&xs, &ys, 10.0);
        for f in &r.features {
            prop_assert!(f.location > -1.0 && f.location < 2.0);
            prop_assert_eq!(xs[f.index], f.location);
        }
    }
}
