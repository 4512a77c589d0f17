//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero when any criterion fails.

use std::f64::consts::PI;
use std::time::Instant;

use hubent_core::bethe::{
    double_occupancy, ev_half_filling, ev_infinite_u, gs_energy_per_site, series_strong_w, series_weak_ev,
    series_weak_ev_from_w, QuadratureSpec,
};
use hubent_core::observables::{entanglement_with, sector_for};
use hubent_core::scan::{linspace, scan_filling, scan_v, slope_jump_at_half_filling, ScanOptions};
use hubent_core::{lowest_eigenpairs, Hamiltonian, ModelParams, Result, SectorBasis, SolverConfig};
use nalgebra::SymmetricEigen;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion = fn() -> Result<Outcome>;

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn ev(sites: usize, u: f64, v: f64) -> Result<f64> {
    let half = sites / 2;
    Ok(entanglement_with(&ModelParams::new(sites, u, v), half, half, SolverConfig::default())?.ev)
}

fn ac01_free_point() -> Result<Outcome> {
    let start = Instant::now();
    let e = ev(10, 0.0, 0.0)?;
    let secs = start.elapsed().as_secs_f64();
    let err = (e - 2.0).abs();
    outcome(
        err <= 1e-6 && secs < 60.0,
        format!("E_v(U=0,L=10)={e:.12} |err|={err:.1e} (tol 1e-6) in {secs:.1}s (limit 60s)"),
    )
}

fn ac02_evenness() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for sites in [6, 10] {
        for u in [1.0, 2.0, 4.0, 8.0] {
            worst = worst.max((ev(sites, u, 0.0)? - ev(sites, -u, 0.0)?).abs());
        }
    }
    outcome(
        worst <= 1e-8,
        format!("max |E_v(U)-E_v(-U)| over U in {{1,2,4,8}}, L in {{6,10}} = {worst:.2e} (tol 1e-8)"),
    )
}

fn ac03_ed_vs_bethe() -> Result<Outcome> {
    let exact = ev_half_filling(4.0, &QuadratureSpec::default())?;
    let trend: Vec<f64> = [6, 8, 10].iter().map(|&l| ev(l, 4.0, 0.0)).collect::<Result<_>>()?;
    let diff = (trend[2] - exact).abs();
    outcome(
        diff <= 0.02,
        format!(
            "E_v(U=4): L=6 {:.6}, L=8 {:.6}, L=10 {:.6}, L=inf {:.6}; |L=10 - inf|={diff:.4} (tol 0.02)",
            trend[0], trend[1], trend[2], exact
        ),
    )
}

fn ac04_oracle_sanity() -> Result<Outcome> {
    let q = QuadratureSpec::default();
    let de = (gs_energy_per_site(0.0, &q)? + 4.0 / PI).abs();
    let dw = (double_occupancy(0.0, &q)? - 0.25).abs();
    outcome(
        de <= 1e-8 && dw <= 1e-8,
        format!("|e(0)+4/pi|={de:.1e}, |w(0)-1/4|={dw:.1e} (tol 1e-8)"),
    )
}

fn ac05_strong_series() -> Result<Outcome> {
    let q = QuadratureSpec::default();
    let d16 = (double_occupancy(16.0, &q)? - series_strong_w(16.0).value).abs();
    let d24 = (double_occupancy(24.0, &q)? - series_strong_w(24.0).value).abs();
    outcome(
        d16 <= 1e-5 && d24 <= 1e-6,
        format!("|w-series|: U=16 {d16:.2e} (tol 1e-5), U=24 {d24:.2e} (tol 1e-6)"),
    )
}

fn ac06_weak_ev_series() -> Result<Outcome> {
    let q = QuadratureSpec::default();
    let mut pass = true;
    let mut parts = Vec::new();
    for u in [0.1, 0.2] {
        let exact = ev_half_filling(u, &q)?;
        let d = (exact - series_weak_ev(u).value).abs();
        let alt = (exact - series_weak_ev_from_w(u).value).abs();
        pass &= d <= 1e-4;
        parts.push(format!("U={u}: |E_v-series|={d:.3e} (w-consistent form {alt:.1e})"));
    }
    outcome(pass, format!("{} (tol 1e-4)", parts.join(", ")))
}

fn ac07_infinite_u_filling() -> Result<Outcome> {
    let (curve, _) = scan_filling(6, 1e6, 0.0, &ScanOptions::default())?;
    let mut worst: f64 = 0.0;
    for (k, (&n, &e)) in curve.axis_values.iter().zip(&curve.ev_values).enumerate() {
        if (k + 1) % 2 == 0 {
            worst = worst.max((e - ev_infinite_u(n)).abs());
        }
    }
    let (n_max, e_max) = curve.argmax().expect("non-empty curve");
    let at_two_thirds = (n_max - 2.0 / 3.0).abs() < 1e-12;
    let peak_err = (e_max - 3f64.log2()).abs();
    outcome(
        worst <= 1e-4 && at_two_thirds && peak_err <= 1e-4,
        format!("max even-N |ED-closed form|={worst:.1e}; argmax n={n_max:.6} E_v={e_max:.6} |E_v-log2 3|={peak_err:.1e} (tol 1e-4)"),
    )
}

fn ac08_mirror() -> Result<Outcome> {
    let params = ModelParams::new(6, 4.0, 0.0);
    let mut worst: f64 = 0.0;
    for n in 0..=12usize {
        let (a, b) = (sector_for(n), sector_for(12 - n));
        let lo = entanglement_with(&params, a.0, a.1, SolverConfig::default())?.ev;
        let hi = entanglement_with(&params, b.0, b.1, SolverConfig::default())?.ev;
        worst = worst.max((lo - hi).abs());
    }
    outcome(
        worst <= 1e-8,
        format!("max |E_v(N)-E_v(12-N)| at L=6, U=4 = {worst:.2e} (tol 1e-8)"),
    )
}

fn ac09_slope_jump() -> Result<Outcome> {
    let opts = ScanOptions::default();
    let mut anti: f64 = 0.0;
    let mut jumps = Vec::new();
    let mut second = Vec::new();
    for u in [1.0, 2.0, 4.0] {
        let s = slope_jump_at_half_filling(10, u, &opts)?;
        anti = anti.max((s.slope_plus + s.slope_minus).abs());
        jumps.push((u, s.jump()));
        second.push(format!("{:+.4}", s.jump_second_order()));
    }
    let increasing = jumps.windows(2).all(|w| w[1].1.abs() > w[0].1.abs());
    let listing: Vec<String> = jumps.iter().map(|(u, j)| format!("U={u}: {j:+.6}")).collect();
    outcome(
        anti <= 1e-8 && increasing,
        format!(
            "max |slope_plus+slope_minus|={anti:.1e} (tol 1e-8); jumps {}; |jump| strictly increasing: {increasing}; \
             diagnostic second-order jumps [{}]",
            listing.join(", "),
            second.join(", ")
        ),
    )
}

fn ac10_boundary_feature() -> Result<Outcome> {
    let opts = ScanOptions::default();
    let (_, pos) = scan_v(8, 4.0, &linspace(0.0, 4.0, 41), &opts)?;
    let dominant = pos.dominant().map(|f| f.location);
    let pos_ok = dominant.is_some_and(|x| (x - 2.0).abs() <= 0.5);
    let (_, neg) = scan_v(8, 4.0, &linspace(-4.0, 0.0, 41), &opts)?;
    let neg_locs: Vec<String> = neg
        .features
        .iter()
        .map(|f| format!("{:.2}({:?})", f.location, f.kind))
        .collect();
    let neg_ok = neg.features.iter().any(|f| (f.location + 2.0).abs() <= 0.5);
    outcome(
        pos_ok && neg_ok,
        format!(
            "V in [0,4]: dominant feature at {} (window 2.0+-0.5); V in [-4,0]: features [{}] (window -2.0+-0.5)",
            dominant.map_or("none".into(), |x| format!("{x:.2}")),
            neg_locs.join(", ")
        ),
    )
}

fn ac11_saturation() -> Result<Outcome> {
    let (curve, _) = scan_v(8, -4.0, &linspace(-8.0, 8.0, 33), &ScanOptions::default())?;
    let e = &curve.ev_values;
    let n = e.len();
    let left = [e[2], e[1], e[0]];
    let right = [e[n - 3], e[n - 2], e[n - 1]];
    let toward_one = |t: &[f64; 3]| t[0] > t[1] && t[1] > t[2] && t[2] > 1.0;
    let pass = e[0] <= 1.1 && e[n - 1] <= 1.1 && toward_one(&left) && toward_one(&right);
    outcome(
        pass,
        format!(
            "E_v(V=-8)={:.6}, E_v(V=8)={:.6} (bound 1.1); |V|=7,7.5,8: [{:.6}, {:.6}, {:.6}] / [{:.6}, {:.6}, {:.6}]",
            e[0],
            e[n - 1],
            left[0],
            left[1],
            left[2],
            right[0],
            right[1],
            right[2]
        ),
    )
}

fn ac12_solver_oracle() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    let mut tried = 0;
    while tried < 10 {
        let sites = rng.random_range(3..=6);
        let nu = rng.random_range(0..=sites);
        let nd = rng.random_range(0..=sites);
        let basis = SectorBasis::new(sites, nu, nd)?;
        if basis.dim() < 3 || basis.dim() > 400 {
            continue;
        }
        let params = ModelParams::new(sites, rng.random_range(-4.0..=4.0), rng.random_range(-4.0..=4.0));
        let h = Hamiltonian::new(params, &basis)?;
        let matvec = |x: &[f64], out: &mut [f64]| h.apply_into(x, out);
        let lanczos = lowest_eigenpairs(basis.dim(), &matvec, 3, SolverConfig::default())?;
        let mut dense: Vec<f64> = SymmetricEigen::new(h.to_dense()).eigenvalues.iter().copied().collect();
        dense.sort_by(f64::total_cmp);
        for (got, want) in lanczos.eigenvalues.iter().zip(&dense).take(3) {
            worst = worst.max((got - want).abs());
        }
        tried += 1;
    }
    outcome(
        worst <= 1e-10,
        format!("10 random sectors (dim <= 400): max |Lanczos-dense| over lowest 3 = {worst:.1e} (tol 1e-10)"),
    )
}

fn main() {
    let criteria: [(&str, Criterion); 12] = [
        ("free point", ac01_free_point),
        ("evenness in U", ac02_evenness),
        ("ED vs Bethe at U=4", ac03_ed_vs_bethe),
        ("oracle sanity", ac04_oracle_sanity),
        ("strong-coupling w series", ac05_strong_series),
        ("weak-coupling E_v series", ac06_weak_ev_series),
        ("infinite-U filling curve", ac07_infinite_u_filling),
        ("mirror symmetry", ac08_mirror),
        ("slope jump at half filling", ac09_slope_jump),
        ("boundary features in V", ac10_boundary_feature),
        ("saturation at large |V|", ac11_saturation),
        ("solver vs dense oracle", ac12_solver_oracle),
    ];
    let mut passed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(o) => {
                passed += usize::from(o.pass);
                let tag = if o.pass { "PASS" } else { "FAIL" };
                println!("AC{:02} {tag} {name}: {} [{secs:.1}s]", i + 1, o.detail);
            }
            Err(e) => println!("AC{:02} FAIL {name}: error: {e} [{secs:.1}s]", i + 1),
        }
    }
    println!("acceptance: {passed}/{} criteria passed", criteria.len());
    if passed != criteria.len() {
        std::process::exit(1);
    }
}
