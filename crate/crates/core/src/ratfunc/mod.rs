//! Exact rational functions over the invariants `x = p²` and `y = p·σ`.
//!
//! Coefficients are arbitrary-precision rationals; evaluation is the only
//! floating-point operation. Real coefficients make every function satisfy
//! `f(x̄, ȳ) = conj f(x, y)`.

mod parse;
mod poly1;
mod poly2;

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};

pub use parse::{parse_expr, Params};
pub use poly1::Poly1;
pub use poly2::{Monomial, Poly2};

pub type Rational = BigRational;

/// Default relative tolerance for pole detection during evaluation.
pub const POLE_TOL: f64 = 1e-12;

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Arithmetic operation accepted by [`combine`] and [`combine1`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Bivariate rational function `N(x, y) / D(x, y)`.
///
/// The denominator is kept monic under graded-lex order. Common polynomial
/// factors are cancelled when one side divides the other exactly; a general
/// multivariate gcd is not attempted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunc2 {
    num: Poly2,
    den: Poly2,
}

impl RationalFunc2 {
    pub fn new(num: Poly2, den: Poly2) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly2, den: Poly2) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (num, den) = if let Some(q) = num.exact_div(&den) {
            (q, Poly2::one())
        } else if let Some(q) = den.exact_div(&num) {
            (Poly2::one(), q)
        } else {
            (num, den)
        };
        let lead = den.leading().map(|(_, c)| c.clone()).unwrap();
        let inv = Rational::one() / lead;
        Self {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn zero() -> Self {
        Self {
            num: Poly2::zero(),
            den: Poly2::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Poly2::constant(c))
    }

    pub fn from_poly(p: Poly2) -> Self {
        Self {
            num: p,
            den: Poly2::one(),
        }
    }

    pub fn x() -> Self {
        Self::from_poly(Poly2::x())
    }

    pub fn y() -> Self {
        Self::from_poly(Poly2::y())
    }

    pub fn numerator(&self) -> &Poly2 {
        &self.num
    }

    pub fn denominator(&self) -> &Poly2 {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True if the function depends on neither `x` nor `y`.
    pub fn as_constant(&self) -> Option<Rational> {
        Some(self.num.as_constant()? / self.den.as_constant()?)
    }

    pub fn evaluate(&self, x: Complex64, y: Complex64) -> Result<Complex64> {
        self.evaluate_with_tol(x, y, POLE_TOL)
    }

    pub fn evaluate_with_tol(&self, x: Complex64, y: Complex64, tol: f64) -> Result<Complex64> {
        let (d, scale) = self.den.eval_with_scale(x, y);
        if d.norm() <= tol * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::Pole {
                x: x.to_string(),
                y: y.to_string(),
            });
        }
        Ok(self.num.eval(x, y) / d)
    }

    /// Real evaluation; coefficients are real so the result is real.
    pub fn evaluate_real(&self, x: f64, y: f64) -> Result<f64> {
        Ok(self
            .evaluate(Complex64::new(x, 0.0), Complex64::new(y, 0.0))?
            .re)
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return Self::reduce(self.num.add(&other.num), self.den.clone());
        }
        Self::reduce(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::reduce(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(
            self.num.mul(&other.den),
            self.den.mul(&other.num),
        ))
    }

    pub fn pow(&self, e: u32) -> Self {
        Self::reduce(self.num.pow(e), self.den.pow(e))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::reduce(self.num.scale(c), self.den.clone())
    }

    /// Substitutes `x → p²`, `y → σ p` and reduces exactly.
    ///
    /// Fails only when the denominator vanishes identically on the ray
    /// (e.g. `1/y` at `σ = 0`).
    pub fn restrict_to_ray(&self, sigma: &Rational) -> Result<RationalFunc1> {
        let restrict = |poly: &Poly2| {
            poly.terms().fold(Poly1::zero(), |acc, ((a, b), c)| {
                let coeff = c * num_traits::pow(sigma.clone(), *b as usize);
                acc.add(&Poly1::monomial(coeff, (2 * a + b) as usize))
            })
        };
        RationalFunc1::new(restrict(&self.num), restrict(&self.den))
    }
}

impl fmt::Display for RationalFunc2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.den.as_constant() {
            Some(d) if d.is_one() => write!(f, "{}", self.num),
            _ => write!(f, "({})/({})", self.num, self.den),
        }
    }
}

/// `combine(a, b, op)` on bivariate functions. Only division can fail.
pub fn combine(a: &RationalFunc2, b: &RationalFunc2, op: BinOp) -> Result<RationalFunc2> {
    Ok(match op {
        BinOp::Add => a.add(b),
        BinOp::Sub => a.sub(b),
        BinOp::Mul => a.mul(b),
        BinOp::Div => a.div(b)?,
    })
}

/// Univariate rational function in the momentum magnitude `p`, reduced to
/// lowest terms with a monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunc1 {
    num: Poly1,
    den: Poly1,
}

impl RationalFunc1 {
    pub fn new(num: Poly1, den: Poly1) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::from_poly(Poly1::zero()));
        }
        let g = num.gcd(&den);
        let num = num.div_rem(&g).0;
        let den = den.div_rem(&g).0;
        let inv = Rational::one() / den.leading().unwrap();
        Ok(Self {
            num: num.scale(&inv),
            den: den.scale(&inv),
        })
    }

    pub fn from_poly(p: Poly1) -> Self {
        Self {
            num: p,
            den: Poly1::one(),
        }
    }

    pub fn numerator(&self) -> &Poly1 {
        &self.num
    }

    pub fn denominator(&self) -> &Poly1 {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn evaluate(&self, p: Complex64) -> Result<Complex64> {
        let d = self.den.eval(p);
        let scale: f64 = self
            .den
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| {
                num_traits::ToPrimitive::to_f64(&c.abs()).unwrap_or(0.0) * p.norm().powi(k as i32)
            })
            .sum();
        if d.norm() <= POLE_TOL * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::Pole {
                x: p.to_string(),
                y: String::from("-"),
            });
        }
        Ok(self.num.eval(p) / d)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
        .unwrap()
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(
            self.num.mul(&other.den).sub(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
        .unwrap()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den)).unwrap()
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }
}

impl fmt::Display for RationalFunc1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// `combine(a, b, op)` on univariate (ray-restricted) functions.
pub fn combine1(a: &RationalFunc1, b: &RationalFunc1, op: BinOp) -> Result<RationalFunc1> {
    Ok(match op {
        BinOp::Add => a.add(b),
        BinOp::Sub => a.sub(b),
        BinOp::Mul => a.mul(b),
        BinOp::Div => a.div(b)?,
    })
}

/// Converts an `f64` to the exact rational it represents.
pub fn rational_from_f64(v: f64) -> Option<Rational> {
    Rational::from_float(v)
}

/// Sign of a rational as `-1`, `0` or `1`.
pub fn signum(r: &Rational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}
