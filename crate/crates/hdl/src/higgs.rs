//! Higgs-algebra checks on the degenerate eigenspaces of the grid Hamiltonian.
//!
//! On a level of energy `E` the constant `G = 2(E + 1)` normalizes the
//! ladder operators `D± = T1 ± i√G T2` and the weight operator
//! `D3 = T3 / (4√G)`. Every check compares matrices restricted to the
//! cluster's eigenbasis, so results are invariant under the arbitrary
//! phases of the eigenvectors.

use faer::{c64, Mat};
use hdl_core::spectrum::{higgs_scalars, s_pm_value, solve_level, HiggsScalars, Sign, SpectrumError};
use hdl_core::symalg::builtin_generators;
use serde::Serialize;

use crate::grid::{build_t, eigh, DiracOp, EigenSpace, EigenSystem, GridError, GridLevels, PrimitiveSet};

pub const DEFAULT_LEAKAGE_TOL: f64 = 5e-2;
pub const ROOT_TOL: f64 = 1e-13;

#[derive(Debug, thiserror::Error)]
pub enum HiggsError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error("eigenspace leakage {value:.3e} exceeds {tol:.1e} at N={n}; refine the grid")]
    Leakage { n: u32, value: f64, tol: f64 },
    #[error("ladder mismatch at N={n}: observed {observed:?}, predicted {predicted:?}")]
    LadderMismatch { n: u32, observed: Vec<f64>, predicted: Vec<f64> },
}

/// `T1`, `T2`, `T3` realized on one grid.
#[derive(Clone, Debug)]
pub struct HiggsOps {
    pub t1: DiracOp,
    pub t2: DiracOp,
    pub t3: DiracOp,
}

impl HiggsOps {
    pub fn build(k: f64, prim: &PrimitiveSet) -> Self {
        let g = builtin_generators();
        HiggsOps {
            t1: build_t(&g.d1, k, prim),
            t2: build_t(&g.d2, k, prim),
            t3: build_t(&g.q3, k, prim),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HiggsConfig {
    pub leakage_tol: f64,
    /// Maximum allowed deviation of the weight spacing from 1 before the
    /// level is rejected as not forming a ladder.
    pub spacing_tol: f64,
    /// Replaces `√G` by 1 in `D±`; a deliberately wrong normalization.
    pub unit_normalization: bool,
}

impl Default for HiggsConfig {
    fn default() -> Self {
        HiggsConfig {
            leakage_tol: DEFAULT_LEAKAGE_TOL,
            spacing_tol: 0.25,
            unit_normalization: false,
        }
    }
}

/// `D±`, `D3` restricted to one eigenspace.
#[derive(Clone, Debug)]
pub struct HiggsFrame {
    pub n: u32,
    pub k: f64,
    pub e_analytic: f64,
    pub e_grid: f64,
    pub d: usize,
    pub scalars: HiggsScalars,
    pub d3r: Mat<c64>,
    pub dpr: Mat<c64>,
    pub dmr: Mat<c64>,
    /// Largest of the `D+`, `D−`, `D3` leakages, each relative to its scale.
    pub leakage: f64,
    /// Natural size of `D±` matrix elements on this level.
    pub ladder_scale: f64,
    /// Natural size of `D3` on this level.
    pub weight_scale: f64,
}

/// `√(|C| + |c3|/2 μ⁴ + |c1| μ² + |c0|(2μ + 1))` with `μ` one above the
/// largest weight magnitude.
pub fn ladder_scale(s: &HiggsScalars) -> f64 {
    let mu = weight_scale(s);
    (s.casimir.abs() + s.c3.abs() / 2.0 * mu.powi(4) + s.c1.abs() * mu * mu + s.c0.abs() * (2.0 * mu + 1.0)).sqrt()
}

pub fn weight_scale(s: &HiggsScalars) -> f64 {
    s.m_bar.abs().max(s.m_under_2.abs()).max(s.m_under_6.abs()) + 1.0
}

fn scaled(a: &Mat<c64>, s: c64) -> Mat<c64> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * s)
}

fn identity(d: usize) -> Mat<c64> {
    Mat::identity(d, d)
}

/// Largest singular value magnitude of a (nearly) Hermitian matrix.
fn herm_norm(a: &Mat<c64>) -> f64 {
    match eigh(a) {
        Ok(es) => es.values.iter().fold(0.0f64, |m, v| m.max(v.abs())),
        Err(_) => a.norm_l2(),
    }
}

/// Restricts `D±`, `D3` to `space` and measures how much of each leaks
/// into the other low-lying eigenvectors.
pub fn build_frame(
    space: &EigenSpace,
    low: &EigenSystem,
    ops: &HiggsOps,
    n: u32,
    k: f64,
    cfg: &HiggsConfig,
) -> Result<HiggsFrame, HiggsError> {
    let e = solve_level(n, k, ROOT_TOL)?.e;
    let scalars = higgs_scalars(e, k)?;
    let root_g = if cfg.unit_normalization { 1.0 } else { scalars.g.sqrt() };

    let w = low.space_vectors(space);
    let other = low.complement_vectors(space, low.len());
    let sandwich = |op: &DiracOp| {
        let ow = op.apply(&w);
        (w.adjoint() * &ow, other.adjoint() * &ow)
    };
    let (r1, o1) = sandwich(&ops.t1);
    let (r2, o2) = sandwich(&ops.t2);
    let (r3, o3) = sandwich(&ops.t3);

    let plus = c64::new(0.0, root_g);
    let combine = |a: &Mat<c64>, b: &Mat<c64>, s: c64| a + scaled(b, s);
    let dpr = combine(&r1, &r2, plus);
    let dmr = combine(&r1, &r2, -plus);
    let d3r = scaled(&r3, c64::new(0.25 / scalars.g.sqrt(), 0.0));

    let lscale = ladder_scale(&scalars);
    let wscale = weight_scale(&scalars);
    let leak_p = combine(&o1, &o2, plus).norm_l2() / lscale;
    let leak_m = combine(&o1, &o2, -plus).norm_l2() / lscale;
    let leak_3 = o3.norm_l2() / (4.0 * scalars.g.sqrt() * wscale);
    let leakage = leak_p.max(leak_m).max(leak_3);
    if leakage > cfg.leakage_tol {
        return Err(HiggsError::Leakage {
            n,
            value: leakage,
            tol: cfg.leakage_tol,
        });
    }
    Ok(HiggsFrame {
        n,
        k,
        e_analytic: e,
        e_grid: space.energy,
        d: space.multiplicity,
        scalars,
        d3r,
        dpr,
        dmr,
        leakage,
        ladder_scale: lscale,
        weight_scale: wscale,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LadderResidual {
    pub plus: f64,
    pub minus: f64,
}

impl LadderResidual {
    pub fn max(&self) -> f64 {
        self.plus.max(self.minus)
    }
}

/// `‖[D3, D±] ∓ D±‖ / max(‖D±‖, ε)`; zero on one-dimensional levels.
pub fn check_ladder(f: &HiggsFrame) -> LadderResidual {
    if f.d == 1 {
        return LadderResidual { plus: 0.0, minus: 0.0 };
    }
    let eps = 1e-12 * f.ladder_scale;
    let one = |dr: &Mat<c64>, s: f64| {
        let comm = &f.d3r * dr - dr * &f.d3r;
        let r = comm - scaled(dr, c64::new(s, 0.0));
        r.norm_l2() / dr.norm_l2().max(eps)
    };
    LadderResidual {
        plus: one(&f.dpr, 1.0),
        minus: one(&f.dmr, -1.0),
    }
}

/// `[D+, D−] − (c3 D3³ + c1 D3 + c0)`, relative to the size of the
/// right-hand side.
pub fn check_cubic(f: &HiggsFrame) -> f64 {
    let s = &f.scalars;
    let d3 = &f.d3r;
    let d3_3 = d3 * d3 * d3;
    let lhs = &f.dpr * &f.dmr - &f.dmr * &f.dpr;
    let rhs = scaled(&d3_3, c64::new(s.c3, 0.0)) + scaled(d3, c64::new(s.c1, 0.0)) + scaled(&identity(f.d), c64::new(s.c0, 0.0));
    let nd = herm_norm(d3);
    let scale = s.c3.abs() * nd.powi(3) + s.c1.abs() * nd + s.c0.abs();
    (lhs - rhs).norm_l2() / scale
}

/// `{D+, D−} + (c3/2) D3⁴ + (c1 + c3/2) D3² + 2 c0 D3`.
pub fn casimir_matrix(f: &HiggsFrame) -> Mat<c64> {
    let s = &f.scalars;
    let d3 = &f.d3r;
    let d3_2 = d3 * d3;
    let d3_4 = &d3_2 * &d3_2;
    &f.dpr * &f.dmr
        + &f.dmr * &f.dpr
        + scaled(&d3_4, c64::new(s.c3 / 2.0, 0.0))
        + scaled(&d3_2, c64::new(s.c1 + s.c3 / 2.0, 0.0))
        + scaled(d3, c64::new(2.0 * s.c0, 0.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CasimirResidual {
    /// `‖C_mat − C‖ / |C|`
    pub residual: f64,
    /// `‖[C_mat, D3]‖ / (|C| ‖D3‖)`
    pub d3_commutator: f64,
}

pub fn check_casimir(f: &HiggsFrame) -> CasimirResidual {
    let c = f.scalars.casimir;
    let cm = casimir_matrix(f);
    let diff = &cm - scaled(&identity(f.d), c64::new(c, 0.0));
    let comm = &cm * &f.d3r - &f.d3r * &cm;
    CasimirResidual {
        residual: diff.norm_l2() / c.abs(),
        d3_commutator: comm.norm_l2() / (c.abs() * f.d3r.norm_l2().max(f64::MIN_POSITIVE)),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightReport {
    /// Ascending eigenvalues of `D3` on the level.
    pub observed: Vec<f64>,
    /// `m̲, m̲ + 1, …, m̄` for the matched branch.
    pub predicted: Vec<f64>,
    /// Branch whose lowest weight best matches the bottom eigenvalue.
    pub lambda: u8,
    /// Largest `|Δm − 1|` between neighbouring weights.
    pub spacing_error: f64,
    pub top_error: f64,
    pub bottom_error: f64,
    /// `‖D+ v_top‖ / scale`
    pub annihilation_top: f64,
    /// `‖D− v_bottom‖ / scale`
    pub annihilation_bottom: f64,
    /// Largest `|2⟨v|D∓D±|v⟩ − S±(m)| / scale²` over the ladder.
    pub s_pm_error: f64,
}

impl WeightReport {
    /// Largest of the individual deviations.
    pub fn residual(&self) -> f64 {
        [
            self.spacing_error,
            self.top_error,
            self.bottom_error,
            self.annihilation_top,
            self.annihilation_bottom,
            self.s_pm_error,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

fn quad(v: &Mat<c64>, j: usize, a: &Mat<c64>) -> f64 {
    let vj = v.subcols(j, 1).to_owned();
    (vj.adjoint() * a * &vj)[(0, 0)].re
}

pub fn check_weights(f: &HiggsFrame, cfg: &HiggsConfig) -> Result<WeightReport, HiggsError> {
    let s = &f.scalars;
    let es = eigh(&f.d3r)?;
    let observed = es.values.clone();
    let d = observed.len();
    let bottom = observed[0];
    let lambda = if (bottom - s.m_under_2).abs() <= (bottom - s.m_under_6).abs() {
        2
    } else {
        6
    };
    let m_under = s.m_under(lambda);
    let predicted: Vec<f64> = (0..d).map(|j| m_under + j as f64).collect();
    let spacing_error = observed.windows(2).map(|p| (p[1] - p[0] - 1.0).abs()).fold(0.0, f64::max);
    if spacing_error > cfg.spacing_tol || d != (f.n / 2 + 1) as usize {
        return Err(HiggsError::LadderMismatch {
            n: f.n,
            observed,
            predicted,
        });
    }

    let v = &es.vectors;
    let top = v.subcols(d - 1, 1).to_owned();
    let bot = v.subcols(0, 1).to_owned();
    let annihilation_top = (&f.dpr * &top).norm_l2() / f.ladder_scale;
    let annihilation_bottom = (&f.dmr * &bot).norm_l2() / f.ladder_scale;

    let mp = &f.dmr * &f.dpr;
    let pm = &f.dpr * &f.dmr;
    let scale2 = f.ladder_scale * f.ladder_scale;
    let mut s_pm_error = 0.0f64;
    for (j, &m) in predicted.iter().enumerate() {
        let up = (2.0 * quad(v, j, &mp) - s_pm_value(m, s, Sign::Plus)).abs();
        let down = (2.0 * quad(v, j, &pm) - s_pm_value(m, s, Sign::Minus)).abs();
        s_pm_error = s_pm_error.max(up / scale2).max(down / scale2);
    }

    Ok(WeightReport {
        top_error: (observed[d - 1] - s.m_bar).abs(),
        bottom_error: (bottom - m_under).abs(),
        observed,
        predicted,
        lambda,
        spacing_error,
        annihilation_top,
        annihilation_bottom,
        s_pm_error,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Residuals {
    pub ladder: f64,
    pub cubic: f64,
    pub casimir: f64,
    pub weights: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelReport {
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "E_analytic")]
    pub e_analytic: f64,
    #[serde(rename = "E_grid")]
    pub e_grid: f64,
    pub d: usize,
    pub residuals: Residuals,
    pub leakage: f64,
    pub weight_detail: WeightReport,
}

/// Runs every check on level `n` of an already diagonalized grid.
pub fn analyze_level(levels: &GridLevels, ops: &HiggsOps, n: u32, cfg: &HiggsConfig) -> Result<LevelReport, HiggsError> {
    let space = levels.level(n)?;
    let frame = build_frame(space, &levels.low, ops, n, levels.k, cfg)?;
    let weights = check_weights(&frame, cfg)?;
    Ok(LevelReport {
        n,
        e_analytic: frame.e_analytic,
        e_grid: frame.e_grid,
        d: frame.d,
        residuals: Residuals {
            ladder: check_ladder(&frame).max(),
            cubic: check_cubic(&frame),
            casimir: check_casimir(&frame).residual,
            weights: weights.residual(),
        },
        leakage: frame.leakage,
        weight_detail: weights,
    })
}

/// Pass thresholds applied to a [`LevelReport`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HiggsThresholds {
    pub ladder: f64,
    pub cubic: f64,
    pub casimir: f64,
    pub spacing: f64,
    pub extremes: f64,
    pub annihilation: f64,
}

impl Default for HiggsThresholds {
    fn default() -> Self {
        HiggsThresholds {
            ladder: 1e-2,
            cubic: 5e-2,
            casimir: 5e-2,
            spacing: 1e-3,
            extremes: 1e-2,
            annihilation: 1e-2,
        }
    }
}

impl HiggsThresholds {
    /// Names of the checks the report fails.
    pub fn violations(&self, r: &LevelReport) -> Vec<String> {
        let w = &r.weight_detail;
        let mut out = Vec::new();
        let mut check = |name: &str, value: f64, tol: f64| {
            if !(value < tol) {
                out.push(format!("N={} {name} {value:.3e} >= {tol:.1e}", r.n));
            }
        };
        check("ladder [D3,D±]=±D±", r.residuals.ladder, self.ladder);
        check("cubic [D+,D-]", r.residuals.cubic, self.cubic);
        check("Casimir", r.residuals.casimir, self.casimir);
        check("weight spacing", w.spacing_error, self.spacing);
        check("highest weight", w.top_error, self.extremes);
        check("lowest weight", w.bottom_error, self.extremes);
        check("D+ annihilates top", w.annihilation_top, self.annihilation);
        check("D- annihilates bottom", w.annihilation_bottom, self.annihilation);
        out
    }
}
