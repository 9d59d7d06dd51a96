//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
//!
//! Oracles are computed here independently of the library where possible:
//! Cardano for the k = 0 ground state, Newton on the k = 0 level equation,
//! the closed-form nonrelativistic spectrum and a direct count of
//! `n1 + 2 n2 = N` for degeneracies.

use std::time::{Duration, Instant};

use faer::Mat;
use hdl::converge::{decreasing_with_slack, fit_order};
use hdl::grid::{
    build_hamiltonian, build_l, build_primitives, build_t, cluster_levels, eigh, nonrel_low_values, projected_residual,
    EigenSystem, GridLevels, GridSpec, DEFAULT_CLUSTER_TOL,
};
use hdl::higgs::{analyze_level, HiggsConfig, HiggsOps, HiggsThresholds, Residuals};
use hdl_core::spectrum::{degeneracy, solve_level};
use hdl_core::symalg::{builtin_generators, potential, verify_conditions, Condition};

const ROOT_TOL: f64 = 1e-13;
const ORDER_TARGET: f64 = 2.0;
const ORDER_BAND: f64 = 0.5;
/// Below this a relative residual is at round-off and its trend carries no
/// information.
const ROUNDOFF_FLOOR: f64 = 1e-10;
/// Eigenpairs kept above `E = 1` on every grid; covers levels 0..=5 plus a
/// complement for leakage.
const WINDOW: usize = 20;

struct Tally {
    failed: Vec<String>,
}

impl Tally {
    fn line(&mut self, id: &str, pass: bool, text: String) {
        println!("{} {id:<3} {text}", if pass { "PASS" } else { "FAIL" });
        if !pass {
            self.failed.push(id.to_string());
        }
    }
}

struct Solved {
    k: f64,
    m: usize,
    levels: GridLevels,
    clustered: bool,
    elapsed: Duration,
}

/// Diagonalizes `H` on an `m × m` grid, keeping the lowest electron-like
/// eigenpairs. Clustering is attempted but not required, so coarse grids
/// still yield eigenvalues for refinement studies.
fn solve(k: f64, m: usize) -> Solved {
    let t0 = Instant::now();
    let spec = GridSpec::square(m);
    let prim = build_primitives(&spec).unwrap();
    let h = build_hamiltonian(k, &prim);
    let low = eigh(&h.dense()).unwrap().window_above(1.0, WINDOW);
    let (spaces, clustered) = match cluster_levels(&low.values, DEFAULT_CLUSTER_TOL, 6) {
        Ok(s) => (s, true),
        Err(_) => (Vec::new(), false),
    };
    let elapsed = t0.elapsed();
    Solved {
        k,
        m,
        levels: GridLevels { k, spec, prim, h, low, spaces },
        clustered,
        elapsed,
    }
}

fn head(low: &EigenSystem, n: usize) -> EigenSystem {
    EigenSystem {
        values: low.values[..n].to_vec(),
        vectors: Mat::from_fn(low.vectors.nrows(), n, |i, j| low.vectors[(i, j)]),
    }
}

/// `(N, E)` for each eigenvalue of levels `0..levels`, repeated by degeneracy.
fn expected_by_state(levels: u32, energy: impl Fn(u32) -> f64) -> Vec<(u32, f64)> {
    (0..levels)
        .flat_map(|n| std::iter::repeat_n((n, energy(n)), degeneracy(n) as usize))
        .collect()
}

fn max_error(values: &[f64], expected: &[(u32, f64)]) -> f64 {
    assert!(values.len() >= expected.len());
    values.iter().zip(expected).map(|(v, (_, e))| (v - e).abs()).fold(0.0, f64::max)
}

fn order_ok(p: Option<f64>) -> bool {
    p.is_some_and(|p| (p - ORDER_TARGET).abs() <= ORDER_BAND)
}

fn fmt_order(p: Option<f64>) -> String {
    p.map_or("n/a".into(), |p| format!("{p:.2}"))
}

fn sci(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.2e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn k0_oracle(n: u32) -> f64 {
    let target = f64::from(n) + 2.0;
    let mut e = 3.0f64;
    for _ in 0..100 {
        let s = ((e + 1.0) / 2.0).sqrt();
        let g = s * (e - 1.0) - target;
        let dg = s + (e - 1.0) / (4.0 * s);
        e -= g / dg;
    }
    e
}

fn criterion_1(t: &mut Tally) {
    let t0 = Instant::now();
    let v = potential();
    let g = builtin_generators();
    let mut all_zero = true;
    let mut notes = Vec::new();
    for gen in [&g.d1, &g.d2, &g.q3] {
        let r = verify_conditions(gen, &v).unwrap();
        let zero = Condition::ALL.iter().all(|&c| {
            let o = r.outcome(c);
            o.passed && o.residual.is_zero()
        });
        all_zero &= zero;
        notes.push(format!("{} {}", gen.name, r.verdict()));
    }
    let l = verify_conditions(&g.l, &v).unwrap();
    let elapsed = t0.elapsed();
    t.line(
        "1a",
        all_zero && elapsed < Duration::from_secs(10),
        format!("D1, D2, Q3 conserve with zero residual, symbolic k: {} ({elapsed:.2?})", notes.join(", ")),
    );
    let iii = l.outcome(Condition::III);
    t.line(
        "1b",
        !iii.passed && !iii.residual.is_zero(),
        format!(
            "L fails condition (iii): verdict {}, (iii) residual {}, (ii) residual {}",
            l.verdict(),
            iii.residual,
            l.outcome(Condition::II).residual
        ),
    );
}

fn criterion_2(t: &mut Tally) {
    let t0 = Instant::now();
    let e0 = solve_level(0, 0.0, ROOT_TOL).unwrap().e;
    let e3 = solve_level(0, 0.757387, ROOT_TOL).unwrap().e;
    let elapsed = t0.elapsed();
    // Real root of u³ - u - 1 = 0; the level is E = 2u² - 1.
    let r = (23.0f64 / 27.0).sqrt();
    let u = ((1.0 + r) / 2.0).cbrt() + ((1.0 - r) / 2.0).cbrt();
    let oracle = 2.0 * u * u - 1.0;
    t.line(
        "2a",
        (e0 - 2.509755).abs() <= 1e-5 && (e0 - oracle).abs() <= 1e-10 && elapsed < Duration::from_secs(1),
        format!("E(0, k=0) = {e0:.9} vs 2.509755 ± 1e-5, cubic oracle {oracle:.12}"),
    );
    t.line(
        "2b",
        (e3 - 3.0).abs() <= 1e-4 && elapsed < Duration::from_secs(1),
        format!("E(0, k=0.757387) = {e3:.7} vs 3.000000 ± 1e-4 ({elapsed:.2?})"),
    );
}

fn criterion_3_analytic(t: &mut Tally) {
    let mut ok = true;
    for n in 0..=12u32 {
        let count = (0..=n).filter(|n1| (n - n1) % 2 == 0).count() as u32;
        ok &= degeneracy(n) == count && count == n / 2 + 1;
    }
    t.line("3a", ok, "analytic degeneracy equals the count of n1 + 2 n2 = N for N <= 12".into());
}

fn criterion_3_grid(t: &mut Tally, s: &Solved, id: &str) {
    let found: Vec<usize> = s.levels.spaces.iter().map(|x| x.multiplicity).collect();
    let expected: Vec<usize> = (0..6).map(|n| degeneracy(n) as usize).collect();
    t.line(
        id,
        s.clustered && found == expected && s.elapsed < Duration::from_secs(300),
        format!(
            "k={} M={} multiplicities {found:?} vs {expected:?}, cluster tol {DEFAULT_CLUSTER_TOL:e} ({:.1?})",
            s.k, s.m, s.elapsed
        ),
    );
}

fn criterion_4(t: &mut Tally) {
    let k = 1.0;
    let grids = [16usize, 24, 32, 48];
    let expected = expected_by_state(6, |n| f64::from(n) + 1.5 + (k + 0.25f64).sqrt());
    let errors: Vec<f64> = grids
        .iter()
        .map(|&m| max_error(&nonrel_low_values(k, &GridSpec::square(m), expected.len()).unwrap(), &expected))
        .collect();
    let p = fit_order(&grids, &errors);
    t.line(
        "4a",
        errors[3] <= 1e-3,
        format!("nonrelativistic levels N=0..5 at M=48, k=1: max error {:.2e} <= 1e-3", errors[3]),
    );
    t.line(
        "4b",
        order_ok(p),
        format!("nonrelativistic order {} in 2 ± 0.5, errors {} over M={grids:?}", fmt_order(p), sci(&errors)),
    );
}

fn criterion_5(t: &mut Tally, k1: &[&Solved]) {
    let expected = expected_by_state(4, |n| solve_level(n, 1.0, ROOT_TOL).unwrap().e);
    let grids: Vec<usize> = k1.iter().map(|s| s.m).collect();
    let errors: Vec<f64> = k1.iter().map(|s| max_error(&s.levels.low.values, &expected)).collect();
    let p = fit_order(&grids, &errors);
    t.line(
        "5a",
        *errors.last().unwrap() <= 1e-3,
        format!("Dirac levels N=0..3 at M=48, k=1: max error {:.2e} <= 1e-3", errors.last().unwrap()),
    );
    t.line(
        "5b",
        order_ok(p),
        format!("Dirac order {} in 2 ± 0.5, errors {} over M={grids:?}", fmt_order(p), sci(&errors)),
    );
}

fn criterion_6(t: &mut Tally, k1: &[&Solved]) {
    let g = builtin_generators();
    let mut t_ok = true;
    let mut t_notes = Vec::new();
    for gen in [&g.d1, &g.d2, &g.q3] {
        let r: Vec<f64> = k1
            .iter()
            .map(|s| projected_residual(&build_t(gen, s.k, &s.levels.prim), &head(&s.levels.low, 6)))
            .collect();
        t_ok &= decreasing_with_slack(&r, 0.1, ROUNDOFF_FLOOR);
        t_notes.push(format!("{} {}", gen.name, sci(&r)));
    }
    let grids: Vec<usize> = k1.iter().map(|s| s.m).collect();
    t.line(
        "6a",
        t_ok,
        format!("projected [T,H] decreasing (10% slack) over M={grids:?}: {}", t_notes.join(", ")),
    );
    let l: Vec<f64> = k1
        .iter()
        .map(|s| projected_residual(&build_l(&s.levels.prim), &head(&s.levels.low, 6)))
        .collect();
    let l_ok = l.iter().all(|&r| r >= 0.5 * l[0] && r <= 2.0 * l[0]);
    t.line("6b", l_ok, format!("projected [L,H] within factor 2 of coarsest: {}", sci(&l)));
}

fn higgs_reports(s: &Solved) -> Result<Vec<Residuals>, String> {
    if !s.clustered {
        return Err(format!("k={} M={}: levels not resolved", s.k, s.m));
    }
    let ops = HiggsOps::build(s.k, &s.levels.prim);
    let thresholds = HiggsThresholds::default();
    let mut out = Vec::new();
    for n in 0..=5 {
        let r = analyze_level(&s.levels, &ops, n, &HiggsConfig::default()).map_err(|e| e.to_string())?;
        let v = thresholds.violations(&r);
        if !v.is_empty() {
            return Err(format!("k={} M={}: {}", s.k, s.m, v.join("; ")));
        }
        out.push(r.residuals);
    }
    Ok(out)
}

fn fields(r: &Residuals) -> [(&'static str, f64); 4] {
    [("ladder", r.ladder), ("cubic", r.cubic), ("casimir", r.casimir), ("weights", r.weights)]
}

fn criterion_7(t: &mut Tally, coarse: &Solved, fine: &Solved) {
    let k = coarse.k;
    let rc = higgs_reports(coarse);
    let worst = |rs: &[Residuals]| {
        rs.iter()
            .map(|r| fields(r).iter().map(|f| f.1).fold(0.0, f64::max))
            .fold(0.0, f64::max)
    };
    let id_a = if k == 1.0 { "7a" } else { "7c" };
    let id_b = if k == 1.0 { "7b" } else { "7d" };
    match &rc {
        Ok(rs) => t.line(
            id_a,
            true,
            format!("Higgs relations N<=5, k={k}, M={}: all thresholds met, worst residual {:.2e}", coarse.m, worst(rs)),
        ),
        Err(e) => t.line(id_a, false, format!("Higgs relations N<=5, k={k}: {e}")),
    }
    let rf = higgs_reports(fine);
    match (&rc, &rf) {
        (Ok(a), Ok(b)) => {
            let mut grew = Vec::new();
            for (n, (x, y)) in a.iter().zip(b).enumerate() {
                for ((name, cx), (_, fy)) in fields(x).iter().zip(fields(y)) {
                    if !(fy < *cx || fy <= ROUNDOFF_FLOOR) {
                        grew.push(format!("N={n} {name} {cx:.2e} -> {fy:.2e}"));
                    }
                }
            }
            t.line(
                id_b,
                grew.is_empty(),
                if grew.is_empty() {
                    format!("Higgs residuals fall from M={} to M={}, k={k}, worst {:.2e}", coarse.m, fine.m, worst(b))
                } else {
                    format!("Higgs residuals not falling, k={k}: {}", grew.join(", "))
                },
            );
        }
        (_, Err(e)) | (Err(e), _) => t.line(id_b, false, format!("Higgs refinement, k={k}: {e}")),
    }
}

fn criterion_8(t: &mut Tally) {
    let mut worst = 0.0f64;
    for n in 0..=6 {
        let e = solve_level(n, 1e-6, ROOT_TOL).unwrap().e;
        worst = worst.max((e - k0_oracle(n)).abs());
    }
    t.line("8", worst < 1e-4, format!("E(N, k=1e-6) vs k=0 equation, N<=6: max diff {worst:.2e} < 1e-4"));
}

fn main() {
    let start = Instant::now();
    let mut t = Tally { failed: Vec::new() };
    criterion_1(&mut t);
    criterion_2(&mut t);
    criterion_3_analytic(&mut t);
    criterion_8(&mut t);
    criterion_4(&mut t);

    let k1: Vec<Solved> = [16, 24, 32].iter().map(|&m| solve(1.0, m)).collect();
    criterion_3_grid(&mut t, &k1[2], "3b");
    criterion_6(&mut t, &k1.iter().collect::<Vec<_>>());
    let k1_48 = solve(1.0, 48);
    let mut all: Vec<&Solved> = k1.iter().collect();
    all.push(&k1_48);
    criterion_5(&mut t, &all);
    criterion_7(&mut t, &k1[2], &k1_48);
    drop(k1_48);
    drop(k1);

    let half = solve(0.5, 32);
    criterion_3_grid(&mut t, &half, "3c");
    let half_48 = solve(0.5, 48);
    criterion_7(&mut t, &half, &half_48);
    drop((half, half_48));

    let two = solve(2.0, 32);
    criterion_3_grid(&mut t, &two, "3d");

    println!("acceptance finished in {:.1?}", start.elapsed());
    if !t.failed.is_empty() {
        println!("failing: {}", t.failed.join(", "));
        std::process::exit(1);
    }
}
