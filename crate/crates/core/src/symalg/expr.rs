//! Normal-ordered elements of the Weyl algebra in two degrees of freedom,
//! localized at `x2` and at a left factor of `p⁻²`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::{self, Write as _};
use core::ops::{Add, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::coeff::{gaussian, Coeff, Gaussian, Rational};
use super::error::SymError;

/// Exponent tuple of the monomial `p⁻²ˢ · x1ᵃ x2ᶜ · p1ᵇ p2ᵈ`.
///
/// The derived ordering is lexicographic on `(s, a, c, b, d)` and fixes the
/// canonical term order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Exponents {
    pub s: u32,
    pub a: u32,
    pub c: i32,
    pub b: u32,
    pub d: u32,
}

impl Exponents {
    pub const fn new(s: u32, a: u32, c: i32, b: u32, d: u32) -> Self {
        Self { s, a, c, b, d }
    }

    pub fn is_scalar(&self) -> bool {
        *self == Self::default()
    }

    /// Degree counting `|c|` for the `x2` exponent and `2s` for `p⁻²ˢ`.
    pub fn total_degree(&self) -> u32 {
        2 * self.s + self.a + self.c.unsigned_abs() + self.b + self.d
    }
}

/// A single stored term, as handed out by [`OperatorExpr::monomials`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylMonomial {
    pub exps: Exponents,
    pub coeff: Coeff,
}

/// Canonical sum of normal-ordered monomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct OperatorExpr {
    terms: BTreeMap<Exponents, Coeff>,
}

impl OperatorExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(Gaussian::one())
    }

    pub fn scalar(g: Gaussian) -> Self {
        Self::monomial(Exponents::default(), Coeff::constant(g))
    }

    pub fn monomial(exps: Exponents, coeff: Coeff) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exps, coeff);
        }
        Self { terms }
    }

    pub fn x1() -> Self {
        Self::unit(Exponents::new(0, 1, 0, 0, 0))
    }

    pub fn x2() -> Self {
        Self::x2_pow(1)
    }

    pub fn x2_pow(c: i32) -> Self {
        Self::unit(Exponents::new(0, 0, c, 0, 0))
    }

    pub fn p1() -> Self {
        Self::unit(Exponents::new(0, 0, 0, 1, 0))
    }

    pub fn p2() -> Self {
        Self::unit(Exponents::new(0, 0, 0, 0, 1))
    }

    /// The formal inverse `p⁻²` of `p1² + p2²`.
    pub fn pinv2() -> Self {
        Self::unit(Exponents::new(1, 0, 0, 0, 0))
    }

    /// The formal parameter `k`.
    pub fn k() -> Self {
        Self::monomial(Exponents::default(), Coeff::k_term(1, Gaussian::one()))
    }

    /// `p² = p1² + p2²`.
    pub fn p_squared() -> Self {
        &Self::unit(Exponents::new(0, 0, 0, 2, 0)) + &Self::unit(Exponents::new(0, 0, 0, 0, 2))
    }

    /// `l = x1 p2 − x2 p1`.
    pub fn angular_momentum() -> Self {
        &Self::unit(Exponents::new(0, 1, 0, 0, 1)) - &Self::unit(Exponents::new(0, 0, 1, 1, 0))
    }

    fn unit(exps: Exponents) -> Self {
        Self::monomial(exps, Coeff::one())
    }

    pub fn is_zero_canonical(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&Exponents, &Coeff)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> Vec<WeylMonomial> {
        self.terms
            .iter()
            .map(|(e, c)| WeylMonomial {
                exps: *e,
                coeff: c.clone(),
            })
            .collect()
    }

    pub fn coeff_of(&self, exps: &Exponents) -> Option<&Coeff> {
        self.terms.get(exps)
    }

    pub fn max_s(&self) -> u32 {
        self.terms.keys().map(|e| e.s).max().unwrap_or(0)
    }

    /// True when no monomial carries momentum or `p⁻²`.
    pub fn is_position_only(&self) -> bool {
        self.terms.keys().all(|e| e.s == 0 && e.b == 0 && e.d == 0)
    }

    /// True when no monomial carries a position factor.
    pub fn is_pure_momentum(&self) -> bool {
        self.terms.keys().all(|e| e.a == 0 && e.c == 0)
    }

    /// True when every term is a multiple of the identity (possibly `k`-dependent).
    pub fn is_scalar(&self) -> bool {
        self.terms.keys().all(Exponents::is_scalar)
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        let mut out = Self::zero();
        for (e, v) in &self.terms {
            out.add_term(*e, &(v * c));
        }
        out
    }

    pub fn scale_gaussian(&self, g: &Gaussian) -> Self {
        self.scale(&Coeff::constant(*g))
    }

    pub fn substitute_k(&self, k: &Rational) -> Self {
        let mut out = Self::zero();
        for (e, v) in &self.terms {
            out.add_term(*e, &v.substitute(k));
        }
        out
    }

    /// Splits into `Σ_s p⁻²ˢ R_s`, returning each `R_s` (with `s` cleared).
    pub fn split_by_s(&self) -> BTreeMap<u32, OperatorExpr> {
        let mut out: BTreeMap<u32, OperatorExpr> = BTreeMap::new();
        for (e, v) in &self.terms {
            let mut stripped = *e;
            stripped.s = 0;
            out.entry(e.s).or_default().add_term(stripped, v);
        }
        out
    }

    /// Left-multiplies by `p⁻²ˢ` (every term must currently have `s = 0` for
    /// the result to mean `p⁻²ˢ · self`; otherwise powers accumulate).
    pub fn with_pinv_power(&self, s: u32) -> Self {
        let mut out = Self::zero();
        for (e, v) in &self.terms {
            let mut shifted = *e;
            shifted.s += s;
            out.add_term(shifted, v);
        }
        out
    }

    fn add_term(&mut self, exps: Exponents, c: &Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(existing) => {
                let sum = &*existing + c;
                if sum.is_zero() {
                    self.terms.remove(&exps);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(exps, c.clone());
            }
        }
    }

    /// Normal-ordered product `self · rhs`.
    ///
    /// Defined when `rhs` carries no `p⁻²` factor, or when the left factor of
    /// each product is free of position operators.
    pub fn mul(&self, rhs: &Self) -> Result<Self, SymError> {
        let mut out = Self::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                if eb.s > 0 && (ea.a != 0 || ea.c != 0) {
                    return Err(SymError::OrderingViolation);
                }
                let base = ca * cb;
                mul_monomials(ea, eb, &base, &mut out);
            }
        }
        Ok(out)
    }

    /// `self · self · … · self` (`n` factors); `n = 0` gives the identity.
    pub fn pow(&self, n: u32) -> Result<Self, SymError> {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// `[self, rhs] = self·rhs − rhs·self`.
    pub fn commutator(&self, rhs: &Self) -> Result<Self, SymError> {
        Ok(&self.mul(rhs)? - &rhs.mul(self)?)
    }

    /// Hermitian adjoint: factors reversed, coefficients conjugated, result
    /// renormal-ordered.
    ///
    /// For a part `p⁻²ˢ R` the adjoint `R† p⁻²ˢ` is brought back to canonical
    /// form, which requires `[R, p²] = 0`.
    pub fn adjoint(&self) -> Result<Self, SymError> {
        let p2 = Self::p_squared();
        let mut out = Self::zero();
        for (s, part) in self.split_by_s() {
            let mut dag = Self::zero();
            for (e, v) in &part.terms {
                let moms = Self::unit(Exponents::new(0, 0, 0, e.b, e.d));
                let pos = Self::unit(Exponents::new(0, e.a, e.c, 0, 0));
                let reordered = moms.mul(&pos)?;
                dag = &dag + &reordered.scale(&v.conj());
            }
            if s > 0 && !dag.commutator(&p2)?.is_zero_canonical() {
                return Err(SymError::NonCommutingResidue);
            }
            out = &out + &dag.with_pinv_power(s);
        }
        Ok(out)
    }

    /// Exact zero test.
    ///
    /// With `p⁻²` parts present the canonical form is not unique
    /// (`p⁻²p1² + p⁻²p2² − 1` vanishes), so denominators are cleared by
    /// left-multiplying with the highest power of `p²` first.
    pub fn is_zero(&self) -> bool {
        let smax = self.max_s();
        if smax == 0 {
            return self.is_zero_canonical();
        }
        let p2 = Self::p_squared();
        let mut cleared = Self::zero();
        for (s, part) in self.split_by_s() {
            let lift = p2
                .pow(smax - s)
                .and_then(|f| f.mul(&part))
                .expect("pure momentum factor on the left always multiplies");
            cleared = &cleared + &lift;
        }
        cleared.is_zero_canonical()
    }

    /// `self · p²` with `p⁻²` factors cancelled exactly.
    pub fn absorb_p2_right(&self) -> Result<Self, SymError> {
        let p2 = Self::p_squared();
        let mut out = Self::zero();
        for (s, part) in self.split_by_s() {
            if s == 0 {
                out = &out + &part.mul(&p2)?;
            } else {
                if !part.commutator(&p2)?.is_zero_canonical() {
                    return Err(SymError::NonCommutingResidue);
                }
                out = &out + &part.with_pinv_power(s - 1);
            }
        }
        Ok(out)
    }
}

fn binomial(n: u32, k: u32) -> i128 {
    let mut acc: i128 = 1;
    for j in 0..k {
        acc = acc * i128::from(n - j) / i128::from(j + 1);
    }
    acc
}

fn falling(a: i64, j: u32) -> i128 {
    let mut acc: i128 = 1;
    for t in 0..j {
        acc *= i128::from(a - i64::from(t));
    }
    acc
}

/// `(-i)^j`.
fn minus_i_pow(j: u32) -> Gaussian {
    match j % 4 {
        0 => gaussian(1, 0),
        1 => gaussian(0, -1),
        2 => gaussian(-1, 0),
        _ => gaussian(0, 1),
    }
}

/// Moves `p1^{b1} p2^{d1}` of the left monomial past the position part of
/// the right one using `p^b x^a = Σ_j C(b,j) (−i)^j (a)_j x^{a−j} p^{b−j}`,
/// which also holds for negative `a`.
fn mul_monomials(ea: &Exponents, eb: &Exponents, base: &Coeff, out: &mut OperatorExpr) {
    let s = ea.s + eb.s;
    let a2 = i64::from(eb.a);
    let c2 = i64::from(eb.c);
    for j in 0..=ea.b.min(eb.a) {
        let fj = falling(a2, j);
        if fj == 0 {
            continue;
        }
        let wj = Gaussian::from(Rational::from_integer(binomial(ea.b, j) * fj)) * minus_i_pow(j);
        for m in 0..=ea.d {
            let fm = falling(c2, m);
            if fm == 0 {
                continue;
            }
            let wm = Gaussian::from(Rational::from_integer(binomial(ea.d, m) * fm)) * minus_i_pow(m);
            let exps = Exponents {
                s,
                a: ea.a + eb.a - j,
                c: ea.c + eb.c - m as i32,
                b: ea.b - j + eb.b,
                d: ea.d - m + eb.d,
            };
            out.add_term(exps, &base.scale(&(wj * wm)));
        }
    }
}

impl Add for &OperatorExpr {
    type Output = OperatorExpr;
    fn add(self, rhs: &OperatorExpr) -> OperatorExpr {
        let mut out = self.clone();
        for (e, v) in &rhs.terms {
            out.add_term(*e, v);
        }
        out
    }
}

impl Sub for &OperatorExpr {
    type Output = OperatorExpr;
    fn sub(self, rhs: &OperatorExpr) -> OperatorExpr {
        let mut out = self.clone();
        for (e, v) in &rhs.terms {
            out.add_term(*e, &-v);
        }
        out
    }
}

impl Neg for &OperatorExpr {
    type Output = OperatorExpr;
    fn neg(self) -> OperatorExpr {
        let mut out = OperatorExpr::zero();
        for (e, v) in &self.terms {
            out.add_term(*e, &-v);
        }
        out
    }
}

fn write_rational(out: &mut String, r: &Rational) {
    if r.is_integer() {
        let _ = write!(out, "{}", r.numer());
    } else {
        let _ = write!(out, "{}/{}", r.numer(), r.denom());
    }
}

/// Coefficient text and whether a leading minus belongs outside it.
fn gaussian_text(g: &Gaussian) -> (bool, String, bool) {
    let mut s = String::new();
    if g.im.is_zero() {
        let neg = g.re.is_negative();
        let mag = g.re.abs();
        let unit = mag.is_one();
        write_rational(&mut s, &mag);
        (neg, s, unit)
    } else if g.re.is_zero() {
        let neg = g.im.is_negative();
        let mag = g.im.abs();
        if !mag.is_one() {
            write_rational(&mut s, &mag);
            s.push('*');
        }
        s.push('i');
        (neg, s, false)
    } else {
        s.push('(');
        if g.re.is_negative() {
            s.push('-');
        }
        write_rational(&mut s, &g.re.abs());
        s.push_str(if g.im.is_negative() { " - " } else { " + " });
        let mag = g.im.abs();
        if !mag.is_one() {
            write_rational(&mut s, &mag);
            s.push('*');
        }
        s.push_str("i)");
        (false, s, false)
    }
}

fn factor_text(kpow: u32, e: &Exponents) -> Vec<String> {
    let mut f = Vec::new();
    let mut push = |name: &str, p: i64| match p {
        0 => {}
        1 => f.push(String::from(name)),
        _ => {
            let mut s = String::from(name);
            let _ = write!(s, "^{p}");
            f.push(s);
        }
    };
    push("k", i64::from(kpow));
    push("pinv2", i64::from(e.s));
    push("x1", i64::from(e.a));
    push("x2", i64::from(e.c));
    push("p1", i64::from(e.b));
    push("p2", i64::from(e.d));
    f
}

/// Prints in the parser's grammar; `parse(print(e)) == e`.
impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            for (kpow, g) in c.terms() {
                let (neg, ctext, unit) = gaussian_text(g);
                let factors = factor_text(*kpow, e);
                let mut body = String::new();
                if !(unit && !factors.is_empty()) {
                    body.push_str(&ctext);
                }
                for fac in &factors {
                    if !body.is_empty() {
                        body.push('*');
                    }
                    body.push_str(fac);
                }
                match (first, neg) {
                    (true, true) => f.write_str("-")?,
                    (true, false) => {}
                    (false, true) => f.write_str(" - ")?,
                    (false, false) => f.write_str(" + ")?,
                }
                f.write_str(&body)?;
                first = false;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symalg::coeff::ratio;
    use alloc::string::ToString;

    #[test]
    fn canonical_commutation_relations() {
        let i1 = OperatorExpr::scalar(gaussian(0, 1));
        assert_eq!(OperatorExpr::x1().commutator(&OperatorExpr::p1()).unwrap(), i1);
        assert_eq!(OperatorExpr::x2().commutator(&OperatorExpr::p2()).unwrap(), i1);
        assert!(OperatorExpr::x1().commutator(&OperatorExpr::p2()).unwrap().is_zero());
        assert!(OperatorExpr::p1().commutator(&OperatorExpr::p2()).unwrap().is_zero());
    }

    #[test]
    fn negative_power_reorder() {
        // p2 · x2⁻¹ = x2⁻¹ p2 + i x2⁻²
        let lhs = OperatorExpr::p2().mul(&OperatorExpr::x2_pow(-1)).unwrap();
        let rhs = &OperatorExpr::monomial(Exponents::new(0, 0, -1, 0, 1), Coeff::one())
            + &OperatorExpr::x2_pow(-2).scale_gaussian(&gaussian(0, 1));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn adjoint_of_x1_p1() {
        let x1p1 = OperatorExpr::x1().mul(&OperatorExpr::p1()).unwrap();
        let expected = &x1p1 - &OperatorExpr::scalar(gaussian(0, 1));
        assert_eq!(x1p1.adjoint().unwrap(), expected);
    }

    #[test]
    fn hidden_zero_is_detected() {
        let e = &OperatorExpr::pinv2().mul(&OperatorExpr::p_squared()).unwrap() - &OperatorExpr::one();
        assert!(!e.is_zero_canonical());
        assert!(e.is_zero());
    }

    #[test]
    fn ordering_violation_reported() {
        let err = OperatorExpr::x1().mul(&OperatorExpr::pinv2()).unwrap_err();
        assert_eq!(err, SymError::OrderingViolation);
        assert!(OperatorExpr::p1().mul(&OperatorExpr::pinv2()).is_ok());
    }

    #[test]
    fn printing_is_stable() {
        let v = &(&OperatorExpr::x1().pow(2).unwrap() + &OperatorExpr::x2().pow(2).unwrap())
            + &OperatorExpr::k().mul(&OperatorExpr::x2_pow(-2)).unwrap();
        let v = v.scale_gaussian(&ratio(1, 2));
        assert_eq!(v.to_string(), "1/2*k*x2^-2 + 1/2*x2^2 + 1/2*x1^2");
        let c = OperatorExpr::x1().scale_gaussian(&gaussian(-1, 2));
        assert_eq!(c.to_string(), "(-1 + 2*i)*x1");
        assert_eq!(OperatorExpr::zero().to_string(), "0");
        assert_eq!(OperatorExpr::p1().scale_gaussian(&gaussian(0, -1)).to_string(), "-i*p1");
    }
}
