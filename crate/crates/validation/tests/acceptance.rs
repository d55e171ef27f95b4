//! One test per acceptance criterion; each prints a PASS/FAIL line.

use std::f64::consts::{PI, TAU};
use std::io::Write;
use std::time::{Duration, Instant};

use polariton_ring::experiments::{
    concurrence_at, count_interior_peaks, distance_to_odd_pi, fwhm, linspace, optimize_concurrence,
    phase_plan, run_sweep, thermal_map, validate_effective, FreeParam, OptimizeSettings,
    SweepResult, PHASE_POINTS,
};
use polariton_ring::linalg::{herm_eig, kron, ComplexMatrix, DensityMatrix, HilbertSpace, C64};
use polariton_ring::models::{presets, ModelSpec};
use polariton_ring::observables::{concurrence, trace_distance};
use polariton_ring::steadystate::{relax, steady_state_on, RESIDUAL_TOL};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Writes past the test harness's output capture so passing criteria
/// show up too.
fn report(id: &str, ok: bool, detail: &str) -> bool {
    let line = format!("\ncriterion {id}: {} ({detail})\n", if ok { "PASS" } else { "FAIL" });
    let _ = std::io::stdout().lock().write_all(line.as_bytes());
    ok
}

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap()
}

const CELL: f64 = TAU / (PHASE_POINTS - 1) as f64;

/// Grid points within 1e-9 of the sweep maximum, as (φ₁, φ₃, C, p_ground).
fn maxima(res: &SweepResult) -> Vec<[f64; 4]> {
    let c = res.header.iter().position(|h| h.starts_with("concurrence")).unwrap();
    let g = res.column_index("population_0_0").unwrap();
    let best = res.rows.iter().map(|r| r[c]).fold(f64::NEG_INFINITY, f64::max);
    res.rows
        .iter()
        .filter(|r| r[c] >= best - 1e-9)
        .map(|r| [r[0], r[1], r[c], r[g]])
        .collect()
}

fn on_odd_pi_line(m: &[[f64; 4]]) -> bool {
    m.iter().all(|p| distance_to_odd_pi(p[0] - p[1]) <= CELL + 1e-12)
}

#[test]
fn criterion_1_pair_phase_sweep() {
    let start = Instant::now();
    let res = pool(1).install(|| run_sweep(&phase_plan(presets::entangling_pair(0.0, 0.0), presets::PAIR_ENTANGLED_SITES, PHASE_POINTS))).unwrap();
    let elapsed = start.elapsed();
    let m = maxima(&res);
    let best = m[0][2];
    let ok = (best - 0.470).abs() <= 0.01 && on_odd_pi_line(&m) && elapsed < Duration::from_secs(60);
    let detail = format!(
        "max C = {best:.4} at phi1 - phi3 = {:.4}, {} maxima, {:.1} s single-threaded",
        m[0][0] - m[0][1],
        m.len(),
        elapsed.as_secs_f64()
    );
    assert!(report("1", ok, &detail), "{detail}");
}

#[test]
fn criterion_2_ring_phase_sweep_with_refinement() {
    let start = Instant::now();
    let baseline = run_sweep(&phase_plan(presets::ring3(0.0, 0.0, 0.0), presets::RING_ENTANGLED_SITES, PHASE_POINTS)).unwrap();
    let base_max = maxima(&baseline)[0][2];

    let bound = presets::RING_Y_BOUND;
    let settings = OptimizeSettings {
        free: vec![
            FreeParam::new(&["x[1].re"], -2.0, 2.0).unwrap(),
            FreeParam::new(&["x[1].im"], -2.0, 2.0).unwrap(),
            FreeParam::new(&["y[0]"], -bound, bound).unwrap(),
            FreeParam::new(&["y[1]"], -bound, bound).unwrap(),
            FreeParam::new(&["y[2]"], -bound, bound).unwrap(),
        ],
        sites: presets::RING_ENTANGLED_SITES,
        budget: 2000,
    };
    let seed = presets::ring3(PI, 0.0, 0.0);
    let opt = optimize_concurrence(&seed, &settings).unwrap();
    let refined = polariton_ring::experiments::apply_params(&seed, &settings.free, &opt.best_params).unwrap();
    let res = run_sweep(&phase_plan(refined, presets::RING_ENTANGLED_SITES, PHASE_POINTS)).unwrap();
    let elapsed = start.elapsed();
    let m = maxima(&res);
    let (best, ground) = (m[0][2], m[0][3]);
    let ok = (0.39..=0.44).contains(&best)
        && on_odd_pi_line(&m)
        && m.iter().all(|p| p[3] >= 0.95)
        && elapsed < Duration::from_secs(300);
    let detail = format!(
        "resonant max C = {base_max:.4}; refined params {:?} -> max C = {best:.4} at phi1 - phi3 = {:.4}, \
         site-1 ground population {ground:.4}, {} evaluations, {:.1} s",
        opt.best_params.iter().map(|v| (v * 1e4).round() / 1e4).collect::<Vec<_>>(),
        m[0][0] - m[0][1],
        opt.evaluations,
        elapsed.as_secs_f64()
    );
    assert!(report("2", ok, &detail), "{detail}");
}

fn phase_c(model: &ModelSpec, sites: [usize; 2], phi1: f64, phi3: f64) -> f64 {
    let free = [FreeParam::new(&["x[0].arg"], 0.0, 0.0).unwrap(), FreeParam::new(&["x[2].arg"], 0.0, 0.0).unwrap()];
    concurrence_at(model, &free, sites, &[phi1, phi3]).unwrap()
}

fn cross_section_fwhm(model: &ModelSpec, sites: [usize; 2]) -> f64 {
    let phis = linspace(0.0, TAU, 401);
    let c: Vec<f64> = phis.iter().map(|&p| phase_c(model, sites, p, 0.0)).collect();
    fwhm(&phis, &c)
}

#[test]
fn criterion_3_phase_coherence() {
    let ring = presets::entangling_ring(0.0, 0.0);
    let pair = presets::entangling_pair(0.0, 0.0);
    let mut period_err: f64 = 0.0;
    let (rs, ps) = (presets::RING_ENTANGLED_SITES, presets::PAIR_ENTANGLED_SITES);
    for (model, sites) in [(&ring, rs), (&pair, ps)] {
        for &(a, b) in &[(0.3, 1.1), (PI, 0.0), (2.0, 5.5), (4.4, 0.7)] {
            let c = phase_c(model, sites, a, b);
            period_err = period_err.max((phase_c(model, sites, a + TAU, b) - c).abs());
            period_err = period_err.max((phase_c(model, sites, a, b + TAU) - c).abs());
        }
    }
    let ring_max = maxima(&run_sweep(&phase_plan(ring.clone(), rs, PHASE_POINTS)).unwrap());
    let pair_max = maxima(&run_sweep(&phase_plan(pair.clone(), ps, PHASE_POINTS)).unwrap());
    let (w_ring, w_pair) = (cross_section_fwhm(&ring, rs), cross_section_fwhm(&pair, ps));
    let ok = period_err <= 1e-10 && on_odd_pi_line(&ring_max) && on_odd_pi_line(&pair_max) && w_pair > w_ring;
    let detail = format!(
        "periodicity error {period_err:.1e}; maxima on odd-pi line: ring {} pair {}; FWHM ring {w_ring:.3} < pair {w_pair:.3}",
        on_odd_pi_line(&ring_max),
        on_odd_pi_line(&pair_max)
    );
    assert!(report("3", ok, &detail), "{detail}");
}

#[test]
fn criterion_4_thermalization_map() {
    let start = Instant::now();
    let xs = linspace(0.0, 10.0, 101);
    let ts = [0.01, 0.05, 0.1];
    let map = thermal_map(&xs, &ts, presets::THERMAL_Y, presets::THERMAL_Z).unwrap();
    let elapsed = start.elapsed();
    let nx = xs.len();
    let block = |k: usize, col: usize| -> Vec<f64> { map.rows[k * nx..(k + 1) * nx].iter().map(|r| r[col]).collect() };

    let d0 = (0..ts.len()).map(|k| block(k, 2)[0]).fold(0.0, f64::max);
    let monotone = (0..ts.len()).all(|k| block(k, 2).windows(2).all(|w| w[1] >= w[0] - 1e-6));
    let peaks: Vec<usize> = (0..ts.len()).map(|k| count_interior_peaks(&block(k, 3))).collect();
    let mut spread: f64 = 0.0;
    for i in 0..nx {
        let col: Vec<f64> = (0..ts.len()).map(|k| block(k, 2)[i]).collect();
        let (lo, hi) = col.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        spread = spread.max(hi - lo);
    }
    let dd = block(0, 3);
    let peak_x: Vec<String> = (1..nx - 1)
        .filter(|&i| {
            let s = polariton_ring::experiments::smooth3(&dd);
            s[i] > s[i - 1] && s[i] > s[i + 1]
        })
        .map(|i| format!("{:.1}", xs[i]))
        .collect();

    let a = d0 <= 0.05;
    let c = peaks.iter().all(|&p| p == 2);
    let d = spread <= 0.02;
    let time = elapsed < Duration::from_secs(120);
    report("4a", a, &format!("max d(x=0) = {d0:.2e}"));
    report("4b", monotone, "d nondecreasing in x within 1e-6");
    report("4c", c, &format!("interior peaks of |dd/dx| per T = {peaks:?}, at x = {peak_x:?} for T = 0.01"));
    report("4d", d, &format!("max spread over T = {spread:.2e}"));
    let ok = a && monotone && c && d && time;
    let detail = format!("{:.1} s", elapsed.as_secs_f64());
    assert!(report("4", ok, &detail), "thermal map criteria failed: peaks {peaks:?}");
}

#[test]
fn criterion_5_effective_model_validation() {
    let start = Instant::now();
    let d1 = validate_effective(&presets::validation_micro(0.05, 0.5, 3)).unwrap();
    let d2 = validate_effective(&presets::validation_micro(0.025, 0.5, 3)).unwrap();
    let elapsed = start.elapsed();
    let ok = d1 <= 0.05 && d1 / d2 >= 2.0 && elapsed < Duration::from_secs(300);
    let detail = format!(
        "distance {d1:.3e} at J/kappa = 0.05, {d2:.3e} at 0.025, ratio {:.2}, {:.1} s",
        d1 / d2,
        elapsed.as_secs_f64()
    );
    assert!(report("5", ok, &detail), "{detail}");
}

fn random_density(rng: &mut ChaCha8Rng, d: usize) -> ComplexMatrix {
    let rank = rng.gen_range(1..=d);
    let a = ComplexMatrix::from_vec(
        d,
        rank,
        (0..d * rank).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect(),
    )
    .unwrap();
    let m = &a * &a.adjoint();
    let tr = m.trace().re;
    m.scale_real(1.0 / tr).hermitian_part()
}

fn random_unitary(rng: &mut ChaCha8Rng, d: usize) -> ComplexMatrix {
    let h = random_density(rng, d).scale_real(10.0);
    let eig = herm_eig(&h).unwrap();
    let mut phases = ComplexMatrix::zeros(d, d);
    for (i, &l) in eig.values.iter().enumerate() {
        phases[(i, i)] = C64::from_polar(1.0, l + rng.gen_range(0.0..TAU));
    }
    &(&eig.vectors * &phases) * &eig.vectors.adjoint()
}

fn bundled_checks() -> (bool, String) {
    let mut worst_trace: f64 = 0.0;
    let mut worst_herm: f64 = 0.0;
    let mut worst_residual_ratio: f64 = 0.0;
    let mut worst_min_eig: f64 = 0.0;
    let mut worst_agreement: f64 = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (name, spec) in presets::bundled() {
        let model = spec.build().unwrap();
        let l = model.liouvillian().unwrap();
        worst_trace = worst_trace.max(l.trace_preservation_error() / l.matrix().max_abs().max(1.0));
        let probes: Vec<ComplexMatrix> = (0..5).map(|_| random_density(&mut rng, model.dim())).collect();
        worst_herm = worst_herm.max(l.hermiticity_preservation_error(&probes) / l.norm());
        let rep = steady_state_on(&l, &model.space).unwrap();
        assert!(rep.unique, "{name}: steady state not unique");
        worst_residual_ratio = worst_residual_ratio.max(rep.residual / (RESIDUAL_TOL * l.norm()));
        worst_min_eig = worst_min_eig.min(rep.min_eigenvalue);
        let ground = DensityMatrix::basis(model.space.clone(), 0).unwrap();
        let late = relax(&l, &ground).unwrap();
        let dist = trace_distance(&late, &rep.rho).unwrap();
        println!("  {name}: dim {}, residual {:.1e}, linear vs RK4 distance {dist:.1e}", model.dim(), rep.residual);
        worst_agreement = worst_agreement.max(dist);
    }
    let ok = worst_trace <= 1e-10
        && worst_herm <= 1e-12
        && worst_residual_ratio <= 1.0
        && worst_min_eig >= -1e-8
        && worst_agreement <= 1e-6;
    (
        ok,
        format!(
            "bundled models: trace err {worst_trace:.1e}, hermiticity err {worst_herm:.1e}, residual/tol {worst_residual_ratio:.1e}, \
             min eig {worst_min_eig:.1e}, solver agreement {worst_agreement:.1e}"
        ),
    )
}

fn concurrence_checks() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let space = HilbertSpace::qubits(2);
    let mut worst_bound: f64 = 0.0;
    let mut worst_invariance: f64 = 0.0;
    for _ in 0..1000 {
        let rho = DensityMatrix::new(space.clone(), random_density(&mut rng, 4)).unwrap();
        let c = concurrence(&rho).unwrap();
        worst_bound = worst_bound.max(-c).max(c - 1.0);
        let u = kron(&random_unitary(&mut rng, 2), &random_unitary(&mut rng, 2));
        let rotated = (&(&u * rho.matrix()) * &u.adjoint()).hermitian_part();
        let c2 = concurrence(&DensityMatrix::new(space.clone(), rotated).unwrap()).unwrap();
        worst_invariance = worst_invariance.max((c2 - c).abs());
    }
    (
        worst_bound <= 0.0 && worst_invariance <= 1e-8,
        format!("1000 random states: bound violation {worst_bound:.1e}, local-unitary change {worst_invariance:.1e}"),
    )
}

fn metric_checks() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let space = HilbertSpace::new(vec![4]).unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let mut draw = || DensityMatrix::new(space.clone(), random_density(&mut rng, 4)).unwrap();
        let (a, b, c) = (draw(), draw(), draw());
        let ab = trace_distance(&a, &b).unwrap();
        let ba = trace_distance(&b, &a).unwrap();
        let bc = trace_distance(&b, &c).unwrap();
        let ac = trace_distance(&a, &c).unwrap();
        let aa = trace_distance(&a, &a).unwrap();
        worst = worst
            .max((ab - ba).abs())
            .max(aa)
            .max(ac - ab - bc)
            .max(-ab)
            .max(ab - 1.0);
    }
    (worst <= 1e-12, format!("200 random triples: worst axiom violation {worst:.1e}"))
}

fn determinism_checks() -> (bool, String) {
    let plan = phase_plan(presets::entangling_ring(0.0, 0.0), presets::RING_ENTANGLED_SITES, 9);
    let csvs: Vec<String> = [1, 2, 4, 8].iter().map(|&w| pool(w).install(|| run_sweep(&plan)).unwrap().to_csv()).collect();
    let again = pool(3).install(|| run_sweep(&plan)).unwrap().to_csv();
    let ok = csvs.iter().all(|c| *c == csvs[0]) && again == csvs[0];
    (ok, "sweep CSV bit-identical across 1, 2, 3, 4, 8 workers".into())
}

#[test]
fn criterion_6_property_suites() {
    let parts = [bundled_checks(), concurrence_checks(), metric_checks(), determinism_checks()];
    for (ok, detail) in &parts {
        report("6 part", *ok, detail);
    }
    let ok = parts.iter().all(|p| p.0);
    assert!(report("6", ok, "all property suites"), "property suite failure");
}
