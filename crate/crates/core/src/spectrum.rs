//! Closed-form spectrum: level equation, degeneracies, Higgs structure
//! constants and weights.

use libm::{floor, sqrt};

#[derive(Clone, Copy, Debug, PartialEq, thiserror::Error)]
pub enum SpectrumError {
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("no bracket found below E = {0}")]
    NoBracket(f64),
    #[error("multiple sign changes ({0}) in the bracket")]
    MultipleSignChanges(usize),
}

/// Left side minus right side of the level equation,
/// `√((E+1)/2)(E−1) − (N + 3/2) − √(¼ + k(E+1)/2)`.
pub fn spectral_fn(e: f64, n: u32, k: f64) -> Result<f64, SpectrumError> {
    if !(e > -1.0) {
        return Err(SpectrumError::Domain("E must exceed -1"));
    }
    let barrier = 0.25 + k * (e + 1.0) / 2.0;
    if !(barrier >= 0.0) {
        return Err(SpectrumError::Domain("1/4 + k(E+1)/2 is negative"));
    }
    Ok(sqrt((e + 1.0) / 2.0) * (e - 1.0) - (f64::from(n) + 1.5) - sqrt(barrier))
}

/// Degeneracy `⌊N/2⌋ + 1`.
pub fn degeneracy(n: u32) -> u32 {
    n / 2 + 1
}

/// Weight-formula branch: `λ = 2` for even `N`, `λ = 6` for odd `N`.
///
/// Fixed by requiring `m̄ − m̲ = ⌊N/2⌋` at the solved roots and by matching
/// the spectra of the restricted `D3` on numerical eigenspaces.
pub fn branch_lambda(n: u32) -> u8 {
    if n.is_multiple_of(2) {
        2
    } else {
        6
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyLevel {
    /// Total quantum number `N`.
    pub n_total: u32,
    pub e: f64,
    pub d: u32,
    pub lambda: u8,
    /// `n` with `N = 2n` or `2n + 1`.
    pub n: u32,
}

const BRACKET_LIMIT: f64 = 1.0e8;
const SCAN_STEPS: usize = 2000;

/// Root of the level equation for quantum number `n` by bracket doubling
/// from `[1, 2]` followed by bisection to width `tol`.
pub fn solve_level(n: u32, k: f64, tol: f64) -> Result<EnergyLevel, SpectrumError> {
    if !(tol > 0.0) {
        return Err(SpectrumError::Domain("tolerance must be positive"));
    }
    if !(k >= 0.0) {
        return Err(SpectrumError::Domain("k must be non-negative"));
    }
    let f = |e: f64| spectral_fn(e, n, k);
    let mut lo = 1.0;
    let mut hi = 2.0;
    while f(hi)? < 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > BRACKET_LIMIT {
            return Err(SpectrumError::NoBracket(BRACKET_LIMIT));
        }
    }

    let mut changes = 0;
    let mut prev = f(1.0)?;
    for i in 1..=SCAN_STEPS {
        let e = 1.0 + (hi - 1.0) * i as f64 / SCAN_STEPS as f64;
        let cur = f(e)?;
        if (prev < 0.0) != (cur < 0.0) {
            changes += 1;
        }
        prev = cur;
    }
    if changes != 1 {
        return Err(SpectrumError::MultipleSignChanges(changes));
    }

    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if f(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(EnergyLevel {
        n_total: n,
        e: 0.5 * (lo + hi),
        d: degeneracy(n),
        lambda: branch_lambda(n),
        n: n / 2,
    })
}

/// Nonrelativistic level `N + 3/2 + √(k + ¼)`.
pub fn nonrel_level(n: u32, k: f64) -> f64 {
    f64::from(n) + 1.5 + sqrt(k + 0.25)
}

/// Structure constants, Casimir value and weights of the Higgs algebra at
/// fixed energy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HiggsScalars {
    pub e: f64,
    pub k: f64,
    /// `2(E + 1)`
    pub g: f64,
    /// `(E² − 1)² − G`
    pub f: f64,
    pub c3: f64,
    pub c1: f64,
    pub c0: f64,
    /// `2F(F − 8G) − 2kG²(F + 4G)`, the value annihilated by `D±` at the
    /// extreme weights.
    pub casimir: f64,
    /// `2F(F − 8G) − 2k²G(F + 4G)`; agrees with `casimir` only at `k = 0`
    /// (and `k = G`), kept for comparison.
    pub casimir_as_printed: f64,
    pub m_bar: f64,
    /// Lowest weight for `λ = 2`.
    pub m_under_2: f64,
    /// Lowest weight for `λ = 6`.
    pub m_under_6: f64,
}

impl HiggsScalars {
    pub fn m_under(&self, lambda: u8) -> f64 {
        if lambda == 6 {
            self.m_under_6
        } else {
            self.m_under_2
        }
    }

    /// `m̄ − m̲` for the given branch.
    pub fn weight_span(&self, lambda: u8) -> f64 {
        self.m_bar - self.m_under(lambda)
    }
}

pub fn higgs_scalars(e: f64, k: f64) -> Result<HiggsScalars, SpectrumError> {
    if !(e > 1.0) {
        return Err(SpectrumError::Domain("E must exceed 1"));
    }
    if !(k >= 0.0) {
        return Err(SpectrumError::Domain("k must be non-negative"));
    }
    let g = 2.0 * (e + 1.0);
    let e2m1 = e * e - 1.0;
    let f = e2m1 * e2m1 - g;
    let c3 = -1024.0 * g * g;
    let c1 = 64.0 * (f - 2.0 * g) * g + 32.0 * k * g * g * g;
    let c0 = 8.0 * k * g * g * sqrt((f + g) * g);
    let casimir = 2.0 * f * (f - 8.0 * g) - 2.0 * k * g * g * (f + 4.0 * g);
    let casimir_as_printed = 2.0 * f * (f - 8.0 * g) - 2.0 * k * k * g * (f + 4.0 * g);
    let s = sqrt(2.0 * (e + 1.0)) * (e - 1.0);
    let m_bar = (-4.0 - sqrt(4.0 + 8.0 * k * (e + 1.0)) + s) / 8.0;
    Ok(HiggsScalars {
        e,
        k,
        g,
        f,
        c3,
        c1,
        c0,
        casimir,
        casimir_as_printed,
        m_bar,
        m_under_2: (2.0 - s) / 8.0,
        m_under_6: (6.0 - s) / 8.0,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// `C − [c3/2 m²(m±1)² + c1 m(m±1) + c0(2m±1)]`, which equals twice the
/// squared norm of `D±` applied to the weight-`m` state.
pub fn s_pm_value(m: f64, scal: &HiggsScalars, sign: Sign) -> f64 {
    let s = sign.value();
    let mm = m * (m + s);
    scal.casimir - (scal.c3 / 2.0 * mm * mm + scal.c1 * mm + scal.c0 * (2.0 * m + s))
}

/// `true` when `x` is within `tol` of an integer.
pub fn near_integer(x: f64, tol: f64) -> bool {
    (x - floor(x + 0.5)).abs() <= tol
}
