use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rational;

/// Exponent pair `(deg_x, deg_y)`.
pub type Monomial = (u32, u32);

fn grlex_key(m: &Monomial) -> (u32, u32) {
    (m.0 + m.1, m.0)
}

/// Sparse bivariate polynomial in `x` and `y` with exact rational coefficients.
///
/// Zero coefficients are never stored, so the zero polynomial is the empty map.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly2 {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, (0, 0))
    }

    pub fn monomial(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn x() -> Self {
        Self::monomial(Rational::one(), (1, 0))
    }

    pub fn y() -> Self {
        Self::monomial(Rational::one(), (0, 1))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Returns the constant value if the polynomial has no `x` or `y` dependence.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.0 + m.1).max()
    }

    /// Leading term under graded-lexicographic order with `x > y`.
    pub fn leading(&self) -> Option<(Monomial, &Rational)> {
        self.terms
            .iter()
            .max_by_key(|(m, _)| grlex_key(m))
            .map(|(m, c)| (*m, c))
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term((ma.0 + mb.0, ma.1 + mb.1), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact quotient `self / divisor` if the division leaves no remainder.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        let (dm, dc) = divisor.leading()?;
        let dc = dc.clone();
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some((rm, rc)) = rem.leading() {
            if rm.0 < dm.0 || rm.1 < dm.1 {
                return None;
            }
            let qm = (rm.0 - dm.0, rm.1 - dm.1);
            let qc = rc / &dc;
            let step = Self::monomial(qc.clone(), qm);
            rem = rem.sub(&divisor.mul(&step));
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Evaluates at complex `(x, y)`; also returns the sum of term magnitudes,
    /// used as the scale for pole detection.
    pub fn eval_with_scale(&self, x: Complex64, y: Complex64) -> (Complex64, f64) {
        let mut value = Complex64::zero();
        let mut scale = 0.0;
        for ((a, b), c) in &self.terms {
            let c = c.to_f64().unwrap_or(f64::NAN);
            let term = x.powu(*a) * y.powu(*b) * c;
            scale += term.norm();
            value += term;
        }
        (value, scale)
    }

    pub fn eval(&self, x: Complex64, y: Complex64) -> Complex64 {
        self.eval_with_scale(x, y).0
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: Monomial) -> fmt::Result {
    let mut first = true;
    for (name, e) in [("x", m.0), ("y", m.1)] {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        if e == 1 {
            f.write_str(name)?;
        } else {
            write!(f, "{name}^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut ordered: Vec<_> = self.terms.iter().collect();
        ordered.sort_by_key(|(m, _)| std::cmp::Reverse(grlex_key(m)));
        for (i, (m, c)) in ordered.into_iter().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if *m == (0, 0) {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write_monomial(f, *m)?;
            } else {
                write!(f, "{mag}*")?;
                write_monomial(f, *m)?;
            }
        }
        Ok(())
    }
}
