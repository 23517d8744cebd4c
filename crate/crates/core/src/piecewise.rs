//! Piecewise polynomials on `[0, ∞)` with explicit values at breakpoints.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::UniPoly;
use crate::scalar::{factorial, Rational};
use crate::surd::{BreakpointValue, QuadSurd};

/// `pieces[0]` lives on `[0, b_0)`, `pieces[i]` on `(b_{i-1}, b_i)` and the
/// last piece on `(b_last, ∞)`; `point_values[i]` is the value at `b_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewisePolynomial {
    pub breakpoints: Vec<BreakpointValue>,
    pub pieces: Vec<UniPoly>,
    pub point_values: Vec<QuadSurd>,
    /// Dimension `d` used for normalization; the scale factor is `d!`.
    pub dim: u32,
}

/// Behaviour of a piecewise polynomial at one breakpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BreakpointCheck {
    pub at: BreakpointValue,
    pub left: QuadSurd,
    pub right: QuadSurd,
    pub value: QuadSurd,
}

impl BreakpointCheck {
    pub fn is_continuous(&self) -> bool {
        self.left == self.right && self.right == self.value
    }

    /// The two one-sided limits agree (the point value may still differ).
    pub fn limits_agree(&self) -> bool {
        self.left == self.right
    }
}

impl PiecewisePolynomial {
    /// Builds a piecewise polynomial whose point values are the right-hand
    /// limits; callers override them with [`Self::set_point_value`].
    pub fn new(breakpoints: Vec<BreakpointValue>, pieces: Vec<UniPoly>, dim: u32) -> Result<Self> {
        if pieces.len() != breakpoints.len() + 1 {
            return Err(Error::InvalidInput(format!(
                "{} breakpoints need {} pieces, got {}",
                breakpoints.len(),
                breakpoints.len() + 1,
                pieces.len()
            )));
        }
        for w in breakpoints.windows(2) {
            if w[0].try_cmp(&w[1])? != Ordering::Less {
                return Err(Error::InvalidInput("breakpoints must increase".into()));
            }
        }
        if let Some(b) = breakpoints.first() {
            if b.cmp_rational(&Rational::zero()) == Ordering::Less {
                return Err(Error::InvalidInput("breakpoints must be nonnegative".into()));
            }
        }
        let point_values = breakpoints
            .iter()
            .enumerate()
            .map(|(i, b)| b.eval_poly(&pieces[i + 1]))
            .collect();
        Ok(PiecewisePolynomial {
            breakpoints,
            pieces,
            point_values,
            dim,
        })
    }

    pub fn zero(dim: u32) -> Self {
        PiecewisePolynomial {
            breakpoints: Vec::new(),
            pieces: vec![UniPoly::zero()],
            point_values: Vec::new(),
            dim,
        }
    }

    pub fn scale_factor(&self) -> BigInt {
        factorial(self.dim)
    }

    pub fn set_point_value(&mut self, i: usize, v: QuadSurd) {
        self.point_values[i] = v;
    }

    /// Index of the piece containing `x`, or `Err(i)` when `x = b_i`.
    fn locate(&self, cmp_to: impl Fn(&BreakpointValue) -> Ordering) -> std::result::Result<usize, usize> {
        for (i, b) in self.breakpoints.iter().enumerate() {
            match cmp_to(b) {
                Ordering::Less => return Ok(i),
                Ordering::Equal => return Err(i),
                Ordering::Greater => {}
            }
        }
        Ok(self.breakpoints.len())
    }

    /// Exact value at a rational point.
    pub fn eval(&self, x: &Rational) -> QuadSurd {
        match self.locate(|b| b.cmp_rational(x).reverse()) {
            Ok(i) => QuadSurd::rational(self.pieces[i].eval(x)),
            Err(i) => self.point_values[i].clone(),
        }
    }

    /// Exact value at a rational point when every breakpoint value is rational.
    pub fn eval_rational(&self, x: &Rational) -> Result<Rational> {
        self.eval(x)
            .as_rational()
            .cloned()
            .ok_or_else(|| Error::InvalidInput("value is irrational".into()))
    }

    /// The polynomial on the open interval containing `x` (right piece at a breakpoint).
    pub fn piece_at(&self, x: &Rational) -> &UniPoly {
        match self.locate(|b| b.cmp_rational(x).reverse()) {
            Ok(i) => &self.pieces[i],
            Err(i) => &self.pieces[i + 1],
        }
    }

    pub fn breakpoint_checks(&self) -> Vec<BreakpointCheck> {
        self.breakpoints
            .iter()
            .enumerate()
            .map(|(i, b)| BreakpointCheck {
                at: b.clone(),
                left: b.eval_poly(&self.pieces[i]),
                right: b.eval_poly(&self.pieces[i + 1]),
                value: self.point_values[i].clone(),
            })
            .collect()
    }

    /// `∫_lo^hi f`, exact; point values do not matter.
    pub fn integrate(&self, lo: &BreakpointValue, hi: &BreakpointValue) -> Result<QuadSurd> {
        if lo.try_cmp(hi)? == Ordering::Greater {
            return QuadSurd::zero().sub(&self.integrate(hi, lo)?);
        }
        let mut acc = QuadSurd::zero();
        let mut edges: Vec<BreakpointValue> = vec![lo.clone()];
        for b in &self.breakpoints {
            if b.try_cmp(lo)? == Ordering::Greater && b.try_cmp(hi)? == Ordering::Less {
                edges.push(b.clone());
            }
        }
        edges.push(hi.clone());
        for w in edges.windows(2) {
            // Any interior point of (w0, w1) identifies the piece.
            let idx = self.piece_index_after(&w[0])?;
            acc = acc.add(&QuadSurd::integrate(&self.pieces[idx], &w[0], &w[1])?)?;
        }
        Ok(acc)
    }

    /// Index of the piece just to the right of `x`.
    fn piece_index_after(&self, x: &BreakpointValue) -> Result<usize> {
        for (i, b) in self.breakpoints.iter().enumerate() {
            if b.try_cmp(x)? == Ordering::Greater {
                return Ok(i);
            }
        }
        Ok(self.breakpoints.len())
    }

    /// `self - other` over the merged breakpoints, then simplified.
    pub fn sub(&self, other: &PiecewisePolynomial) -> Result<PiecewisePolynomial> {
        let mut merged: Vec<BreakpointValue> = self.breakpoints.clone();
        for b in &other.breakpoints {
            if !merged.contains(b) {
                merged.push(b.clone());
            }
        }
        let mut err = None;
        merged.sort_by(|a, b| {
            a.try_cmp(b).unwrap_or_else(|e| {
                err = Some(e);
                Ordering::Equal
            })
        });
        if let Some(e) = err {
            return Err(e);
        }
        let mut pieces = Vec::with_capacity(merged.len() + 1);
        for i in 0..=merged.len() {
            let left = if i == 0 { None } else { Some(&merged[i - 1]) };
            let (a, b) = match left {
                None => (0, 0),
                Some(l) => (self.piece_index_after(l)?, other.piece_index_after(l)?),
            };
            pieces.push(self.pieces[a].sub(&other.pieces[b]));
        }
        let mut point_values = Vec::with_capacity(merged.len());
        for b in &merged {
            point_values.push(self.value_at(b)?.sub(&other.value_at(b)?)?);
        }
        let mut out = PiecewisePolynomial {
            breakpoints: merged,
            pieces,
            point_values,
            dim: self.dim,
        };
        out.simplify();
        Ok(out)
    }

    /// Value at a (possibly irrational) point.
    pub fn value_at(&self, x: &BreakpointValue) -> Result<QuadSurd> {
        for (i, b) in self.breakpoints.iter().enumerate() {
            match x.try_cmp(b)? {
                Ordering::Less => return Ok(x.eval_poly(&self.pieces[i])),
                Ordering::Equal => return Ok(self.point_values[i].clone()),
                Ordering::Greater => {}
            }
        }
        Ok(x.eval_poly(self.pieces.last().expect("at least one piece")))
    }

    /// Drops breakpoints where the function is given by one polynomial on
    /// both sides and takes the matching value.
    pub fn simplify(&mut self) {
        let mut i = 0;
        while i < self.breakpoints.len() {
            let same = self.pieces[i] == self.pieces[i + 1]
                && self.point_values[i] == self.breakpoints[i].eval_poly(&self.pieces[i]);
            if same {
                self.breakpoints.remove(i);
                self.point_values.remove(i);
                self.pieces.remove(i + 1);
            } else {
                i += 1;
            }
        }
    }

    /// Smallest point from which the function vanishes identically, if the
    /// last piece is zero.
    pub fn support_end(&self) -> Option<BreakpointValue> {
        if !self.pieces.last()?.is_zero() {
            return None;
        }
        let mut end = self.breakpoints.len();
        while end > 0 && self.pieces[end - 1].is_zero() && self.point_values[end - 1] == QuadSurd::zero() {
            end -= 1;
        }
        Some(if end == 0 {
            QuadSurd::zero()
        } else {
            self.breakpoints[end - 1].clone()
        })
    }

    /// Values at `0, step, 2·step, …, ≤ to`.
    pub fn samples(&self, step: &Rational, to: &Rational) -> Result<Vec<(Rational, QuadSurd)>> {
        if *step <= Rational::zero() {
            return Err(Error::InvalidInput("sample step must be positive".into()));
        }
        let mut out = Vec::new();
        let mut x = Rational::zero();
        while x <= *to {
            out.push((x.clone(), self.eval(&x)));
            x += step;
        }
        Ok(out)
    }

    /// The intervals `[start, end]` (end `None` = ∞) paired with their pieces.
    pub fn intervals(&self) -> Vec<(BreakpointValue, Option<BreakpointValue>, &UniPoly)> {
        let mut out = Vec::new();
        for (i, p) in self.pieces.iter().enumerate() {
            let start = if i == 0 {
                QuadSurd::zero()
            } else {
                self.breakpoints[i - 1].clone()
            };
            out.push((start, self.breakpoints.get(i).cloned(), p));
        }
        out
    }

    /// Human-readable summary, one interval per line.
    pub fn pretty(&self) -> String {
        let mut lines = Vec::new();
        for (start, end, p) in self.intervals() {
            let end = end.map_or("inf".to_string(), |e| e.to_string());
            lines.push(format!("[{start}, {end}]: {}", p.pretty("x")));
        }
        for (b, v) in self.breakpoints.iter().zip(&self.point_values) {
            lines.push(format!("f({b}) = {v}"));
        }
        lines.join("\n")
    }
}
