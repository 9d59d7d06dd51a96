//! Coefficients: polynomials in the formal parameter `k` over the Gaussian rationals.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_rational::Ratio;
use num_traits::{One, Zero};

/// Exact rational number.
pub type Rational = Ratio<i128>;

/// Exact Gaussian rational `a + b i`.
pub type Gaussian = Complex<Rational>;

/// Builds the Gaussian rational `re + im i` from integers.
pub fn gaussian(re: i128, im: i128) -> Gaussian {
    Complex::new(Rational::from_integer(re), Rational::from_integer(im))
}

/// Builds a real Gaussian rational `num / den`.
pub fn ratio(num: i128, den: i128) -> Gaussian {
    Complex::new(Rational::new(num, den), Rational::zero())
}

/// The imaginary unit.
pub fn imag_unit() -> Gaussian {
    gaussian(0, 1)
}

/// Polynomial in `k` with Gaussian rational coefficients.
///
/// Terms are kept sorted by ascending power with no zero entries, so
/// structural equality is mathematical equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Coeff {
    terms: Vec<(u32, Gaussian)>,
}

impl Coeff {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Gaussian::one())
    }

    pub fn constant(g: Gaussian) -> Self {
        Self::k_term(0, g)
    }

    /// `g * k^power`.
    pub fn k_term(power: u32, g: Gaussian) -> Self {
        if g.is_zero() {
            Self::zero()
        } else {
            Self {
                terms: alloc::vec![(power, g)],
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(power, coefficient)` pairs in ascending power.
    pub fn terms(&self) -> &[(u32, Gaussian)] {
        &self.terms
    }

    /// Highest power of `k` present, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.last().map(|t| t.0)
    }

    /// Returns the constant term when no `k` dependence is present.
    pub fn as_constant(&self) -> Option<Gaussian> {
        match self.terms.as_slice() {
            [] => Some(Gaussian::zero()),
            [(0, g)] => Some(*g),
            _ => None,
        }
    }

    pub fn scale(&self, g: &Gaussian) -> Self {
        if g.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(p, c)| (*p, c * g)).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(p, c)| (*p, c.conj())).collect(),
        }
    }

    /// Substitutes a rational value for `k`.
    pub fn substitute(&self, k: &Rational) -> Self {
        let mut acc = Gaussian::zero();
        for (p, c) in &self.terms {
            let kp = pow_rational(k, *p);
            acc += c * Complex::new(kp, Rational::zero());
        }
        Self::constant(acc)
    }

    /// Numerical value at `k`, returned as `(re, im)`.
    pub fn eval(&self, k: f64) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (p, c) in &self.terms {
            let kp = libm::pow(k, f64::from(*p));
            re += rational_to_f64(&c.re) * kp;
            im += rational_to_f64(&c.im) * kp;
        }
        (re, im)
    }

    fn merge(mut a: Vec<(u32, Gaussian)>, b: &[(u32, Gaussian)], sign: bool) -> Self {
        for (p, c) in b {
            let c = if sign { -*c } else { *c };
            match a.binary_search_by_key(p, |t| t.0) {
                Ok(idx) => {
                    a[idx].1 += c;
                    if a[idx].1.is_zero() {
                        a.remove(idx);
                    }
                }
                Err(idx) => {
                    if !c.is_zero() {
                        a.insert(idx, (*p, c));
                    }
                }
            }
        }
        Self { terms: a }
    }
}

/// Converts an exact rational to the nearest representable double.
pub fn rational_to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn pow_rational(r: &Rational, p: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..p {
        acc *= r;
    }
    acc
}

impl Add for &Coeff {
    type Output = Coeff;
    fn add(self, rhs: &Coeff) -> Coeff {
        Coeff::merge(self.terms.clone(), &rhs.terms, false)
    }
}

impl Sub for &Coeff {
    type Output = Coeff;
    fn sub(self, rhs: &Coeff) -> Coeff {
        Coeff::merge(self.terms.clone(), &rhs.terms, true)
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff {
            terms: self.terms.iter().map(|(p, c)| (*p, -*c)).collect(),
        }
    }
}

impl Mul for &Coeff {
    type Output = Coeff;
    fn mul(self, rhs: &Coeff) -> Coeff {
        let mut out = Coeff::zero();
        for (pa, ca) in &self.terms {
            let partial: Vec<(u32, Gaussian)> =
                rhs.terms.iter().map(|(pb, cb)| (pa + pb, ca * cb)).collect();
            out = Coeff::merge(out.terms, &partial, false);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_cancels_to_zero() {
        let a = &Coeff::k_term(1, ratio(1, 2)) + &Coeff::one();
        let b = &a - &a;
        assert!(b.is_zero());
        let sq = &a * &a;
        assert_eq!(sq.terms().len(), 3);
        assert_eq!(sq.terms()[2], (2, ratio(1, 4)));
    }

    #[test]
    fn substitution_and_eval_agree() {
        let c = &Coeff::k_term(2, gaussian(3, 1)) + &Coeff::constant(ratio(-1, 3));
        let s = c.substitute(&Rational::new(3, 2)).as_constant().unwrap();
        let (re, im) = c.eval(1.5);
        assert!((re - rational_to_f64(&s.re)).abs() < 1e-12);
        assert!((im - rational_to_f64(&s.im)).abs() < 1e-12);
    }
}
