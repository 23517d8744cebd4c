//! Exact arithmetic in `ℚ(√c)`, enough to place and integrate across
//! quadratic-irrational breakpoints.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::UniPoly;
use crate::scalar::{int, Rational};

/// `a + b √c` with `c` squarefree. Canonical form: when `b = 0` the radicand
/// is stored as `1`, so rationals have a single representation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadSurd {
    a: Rational,
    b: Rational,
    c: u64,
}

/// A breakpoint of a piecewise polynomial: rational or a quadratic surd.
pub type BreakpointValue = QuadSurd;

fn squarefree_part(mut c: u64) -> (u64, u64) {
    // c = k² · s with s squarefree; returns (k, s).
    let mut k = 1;
    let mut s = 1;
    let mut p = 2;
    while p * p <= c {
        let mut e = 0;
        while c.is_multiple_of(p) {
            c /= p;
            e += 1;
        }
        for _ in 0..e / 2 {
            k *= p;
        }
        if e % 2 == 1 {
            s *= p;
        }
        p += 1;
    }
    (k, s * c)
}

impl QuadSurd {
    /// `a + b √c` for any positive `c`; square factors are pulled out.
    pub fn new(a: Rational, b: Rational, c: u64) -> Result<Self> {
        if c == 0 {
            return Ok(Self::rational(a));
        }
        let (k, s) = squarefree_part(c);
        let b = b * int(k as i64);
        if s == 1 {
            return Ok(Self::rational(a + b));
        }
        if b.is_zero() {
            return Ok(Self::rational(a));
        }
        Ok(QuadSurd { a, b, c: s })
    }

    /// `(a + b √c) / q` from integers.
    pub fn from_integers(a: i64, b: i64, c: u64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidInput("zero denominator in surd".into()));
        }
        Self::new(Rational::new(a.into(), q.into()), Rational::new(b.into(), q.into()), c)
    }

    pub fn rational(a: Rational) -> Self {
        QuadSurd {
            a,
            b: Rational::zero(),
            c: 1,
        }
    }

    pub fn zero() -> Self {
        Self::rational(Rational::zero())
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn surd_part(&self) -> &Rational {
        &self.b
    }

    pub fn radicand(&self) -> u64 {
        self.c
    }

    /// Integers `(a, b, c, q)` with value `(a + b √c) / q`, `q > 0` minimal.
    pub fn to_integers(&self) -> (BigInt, BigInt, u64, BigInt) {
        let q = self.a.denom().lcm(self.b.denom());
        let a = self.a.numer() * (&q / self.a.denom());
        let b = self.b.numer() * (&q / self.b.denom());
        (a, b, self.c, q)
    }

    fn common_radicand(&self, other: &QuadSurd) -> Result<u64> {
        match (self.is_rational(), other.is_rational()) {
            (true, _) => Ok(other.c),
            (_, true) => Ok(self.c),
            _ if self.c == other.c => Ok(self.c),
            _ => Err(Error::InvalidInput(format!(
                "values in different quadratic fields (√{} and √{})",
                self.c, other.c
            ))),
        }
    }

    fn make(a: Rational, b: Rational, c: u64) -> Self {
        if b.is_zero() {
            Self::rational(a)
        } else {
            QuadSurd { a, b, c }
        }
    }

    pub fn add(&self, other: &QuadSurd) -> Result<QuadSurd> {
        let c = self.common_radicand(other)?;
        Ok(Self::make(&self.a + &other.a, &self.b + &other.b, c))
    }

    pub fn sub(&self, other: &QuadSurd) -> Result<QuadSurd> {
        let c = self.common_radicand(other)?;
        Ok(Self::make(&self.a - &other.a, &self.b - &other.b, c))
    }

    pub fn mul(&self, other: &QuadSurd) -> Result<QuadSurd> {
        let c = self.common_radicand(other)?;
        let rc = int(c as i64);
        Ok(Self::make(
            &self.a * &other.a + &self.b * &other.b * rc,
            &self.a * &other.b + &self.b * &other.a,
            c,
        ))
    }

    pub fn scale(&self, r: &Rational) -> QuadSurd {
        Self::make(&self.a * r, &self.b * r, self.c)
    }

    pub fn add_rational(&self, r: &Rational) -> QuadSurd {
        Self::make(&self.a + r, self.b.clone(), self.c)
    }

    /// Sign of `x + y √c`.
    fn sign_of(x: &Rational, y: &Rational, c: u64) -> Ordering {
        let zero = Rational::zero();
        let sx = x.cmp(&zero);
        let sy = y.cmp(&zero);
        match (sx, sy) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (a, b) if a == b => a,
            _ => {
                // Opposite signs: compare x² with c y².
                let lhs = x * x;
                let rhs = y * y * int(c as i64);
                match lhs.cmp(&rhs) {
                    Ordering::Greater => sx,
                    Ordering::Less => sy,
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn signum(&self) -> Ordering {
        Self::sign_of(&self.a, &self.b, self.c)
    }

    /// Exact comparison; errors only for surds in different quadratic fields.
    pub fn try_cmp(&self, other: &QuadSurd) -> Result<Ordering> {
        Ok(self.sub(other)?.signum())
    }

    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        Self::sign_of(&(&self.a - r), &self.b, self.c)
    }

    pub fn to_f64(&self) -> f64 {
        crate::scalar::to_f64(&self.a) + crate::scalar::to_f64(&self.b) * (self.c as f64).sqrt()
    }

    /// Evaluates `p` at this value, exactly in `ℚ(√c)`.
    pub fn eval_poly(&self, p: &UniPoly) -> QuadSurd {
        let mut acc = QuadSurd::zero();
        for coeff in p.coeffs().iter().rev() {
            acc = acc.mul(self).expect("same field").add_rational(coeff);
        }
        acc
    }

    /// `∫_lo^hi p(x) dx` with surd endpoints in a common field.
    pub fn integrate(p: &UniPoly, lo: &QuadSurd, hi: &QuadSurd) -> Result<QuadSurd> {
        lo.common_radicand(hi)?;
        let anti = p.antiderivative();
        hi.eval_poly(&anti).sub(&lo.eval_poly(&anti))
    }
}

impl PartialOrd for QuadSurd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.try_cmp(other).ok()
    }
}

impl From<Rational> for QuadSurd {
    fn from(r: Rational) -> Self {
        QuadSurd::rational(r)
    }
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.a);
        }
        let (a, b, c, q) = self.to_integers();
        let sign = if b.is_negative() { "-" } else { "+" };
        let mag = b.abs();
        let rad = if mag.is_one() {
            format!("√{c}")
        } else {
            format!("{mag}√{c}")
        };
        let body = if a.is_zero() {
            format!("{}{rad}", if b.is_negative() { "-" } else { "" })
        } else {
            format!("{a} {sign} {rad}")
        };
        if q.is_one() {
            write!(f, "{body}")
        } else {
            write!(f, "({body})/{q}")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn breakpoint() -> QuadSurd {
        QuadSurd::from_integers(6, 1, 3, 33).unwrap()
    }

    #[test]
    fn canonical_forms() {
        assert!(QuadSurd::new(int(1), int(0), 3).unwrap().is_rational());
        assert_eq!(QuadSurd::new(int(1), int(1), 4).unwrap(), QuadSurd::rational(int(3)));
        let s = QuadSurd::new(int(0), int(1), 12).unwrap();
        assert_eq!((s.surd_part().clone(), s.radicand()), (int(2), 3));
        assert_eq!(breakpoint().to_string(), "(6 + √3)/33");
        let (a, b, c, q) = breakpoint().to_integers();
        assert_eq!((a, b, c, q), (BigInt::from(6), BigInt::from(1), 3, BigInt::from(33)));
    }

    #[test]
    fn ordering_against_rationals() {
        let s = breakpoint();
        // (6 + √3)/33 ≈ 0.2343
        assert_eq!(s.cmp_rational(&rat(23, 100)), Ordering::Greater);
        assert_eq!(s.cmp_rational(&rat(24, 100)), Ordering::Less);
        let t = QuadSurd::from_integers(6, -1, 3, 33).unwrap();
        assert!(t < s);
        assert!(QuadSurd::from_integers(0, 1, 2, 1)
            .unwrap()
            .partial_cmp(&s.clone())
            .is_none());
    }

    #[test]
    fn cutkosky_piece_vanishes_at_breakpoint() {
        let p = UniPoly::from_i64(&[18, -216, 594]);
        assert_eq!(breakpoint().eval_poly(&p), QuadSurd::zero());
    }

    #[test]
    fn exact_integral_in_quadratic_field() {
        let p = UniPoly::from_i64(&[18, -216, 594]);
        let lo = breakpoint();
        let hi = lo.add_rational(&int(1));
        let v = QuadSurd::integrate(&p, &lo, &hi).unwrap();
        assert_eq!(v, QuadSurd::from_integers(198, 18, 3, 1).unwrap());
    }
}
