use std::cmp::Ordering;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// A monomial `x^a` stored as its exponent vector, with the total degree cached.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exponents: Vec<u32>,
    degree: u32,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        let degree = exponents.iter().sum();
        Monomial { exponents, degree }
    }

    /// The unit monomial `1` in `nvars` variables.
    pub fn one(nvars: usize) -> Self {
        Monomial::new(vec![0; nvars])
    }

    /// The variable `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial::new(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    fn check_same(&self, other: &Monomial) -> Result<()> {
        if self.nvars() != other.nvars() {
            return Err(Error::Dimension {
                expected: self.nvars(),
                found: other.nvars(),
            });
        }
        Ok(())
    }

    /// `self | other`.
    pub fn divides(&self, other: &Monomial) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.divides_unchecked(other))
    }

    pub(crate) fn divides_unchecked(&self, other: &Monomial) -> bool {
        self.degree <= other.degree && self.exponents.iter().zip(&other.exponents).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &Monomial) -> Result<Monomial> {
        self.check_same(other)?;
        Ok(self.lcm_unchecked(other))
    }

    pub(crate) fn lcm_unchecked(&self, other: &Monomial) -> Monomial {
        Monomial::new(
            self.exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Monomial) -> Result<Monomial> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Monomial) -> Monomial {
        Monomial::new(
            self.exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// `self / gcd(self, other)`: componentwise `max(a - b, 0)`.
    pub fn quotient_by_gcd(&self, other: &Monomial) -> Monomial {
        Monomial::new(
            self.exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a.saturating_sub(*b))
                .collect(),
        )
    }

    pub fn pow(&self, n: u32) -> Monomial {
        Monomial::new(self.exponents.iter().map(|e| e * n).collect())
    }

    /// The monomial with the `i`-th variable set to 1.
    pub fn drop_var(&self, i: usize) -> Monomial {
        let mut e = self.exponents.clone();
        e[i] = 0;
        Monomial::new(e)
    }

    /// Variables that occur with positive exponent.
    pub fn support(&self) -> Vec<usize> {
        self.exponents
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(i, _)| i)
            .collect()
    }

    /// Parses the `VAR^e*VAR^e` syntax; `1` is the unit monomial.
    pub fn parse(text: &str, vars: &[String]) -> Result<Monomial> {
        let src = text.trim();
        let err = |column: usize, message: String| Error::Parse {
            line: 1,
            column,
            message: format!("in monomial {text:?}: {message}"),
        };
        if src.is_empty() {
            return Err(err(1, "empty monomial".into()));
        }
        let mut exps = vec![0u32; vars.len()];
        if src == "1" {
            return Ok(Monomial::new(exps));
        }
        let mut offset = text.len() - text.trim_start().len();
        for factor in src.split('*') {
            let column = offset + 1;
            offset += factor.len() + 1;
            let factor = factor.trim();
            if factor.is_empty() {
                return Err(err(column, "empty factor".into()));
            }
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => {
                    let e: u32 = e
                        .trim()
                        .parse()
                        .map_err(|_| err(column, format!("bad exponent in {factor:?}")))?;
                    (n.trim(), e)
                }
                None => (factor, 1),
            };
            if name == "1" {
                continue;
            }
            let idx = vars
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| err(column, format!("unknown variable {name:?}")))?;
            exps[idx] += exp;
        }
        Ok(Monomial::new(exps))
    }

    pub fn format(&self, vars: &[String]) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        let mut out = String::new();
        for (i, &e) in self.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !out.is_empty() {
                out.push('*');
            }
            let name = vars.get(i).cloned().unwrap_or_else(|| format!("x{}", i + 1));
            out.push_str(&name);
            if e > 1 {
                let _ = write!(out, "^{e}");
            }
        }
        out
    }
}

/// Canonical order: ascending degree, then descending exponent vector
/// (so `X^2 < X*Y < Y^2` in two variables).
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| other.exponents.cmp(&self.exponents))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Componentwise exponent test.
pub fn monomial_divides(a: &Monomial, b: &Monomial) -> Result<bool> {
    a.divides(b)
}

pub fn monomial_lcm(a: &Monomial, b: &Monomial) -> Result<Monomial> {
    a.lcm(b)
}

/// All monomials of total degree `deg` in `nvars` variables.
pub fn monomials_of_degree(nvars: usize, deg: u32) -> Vec<Monomial> {
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(Monomial::new(cur.clone()));
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if deg == 0 {
            out.push(Monomial::new(vec![]));
        }
        return out;
    }
    rec(0, deg, &mut vec![0; nvars], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xyz() -> Vec<String> {
        vec!["X".into(), "Y".into(), "Z".into()]
    }

    fn m(s: &str) -> Monomial {
        Monomial::parse(s, &xyz()).unwrap()
    }

    #[test]
    fn divisibility() {
        assert!(monomial_divides(&m("X*Y"), &m("X^2*Y")).unwrap());
        assert!(!monomial_divides(&m("X^2"), &m("X*Y^3")).unwrap());
        assert!(monomial_divides(&m("1"), &m("X*Y^3*Z")).unwrap());
        let two = Monomial::one(2);
        assert_eq!(
            monomial_divides(&two, &m("X")),
            Err(Error::Dimension { expected: 2, found: 3 })
        );
    }

    #[test]
    fn lcm_cases() {
        assert_eq!(monomial_lcm(&m("X^2*Y"), &m("X*Z")).unwrap(), m("X^2*Y*Z"));
        assert_eq!(monomial_lcm(&m("X*Y^3"), &m("X*Y^3")).unwrap(), m("X*Y^3"));
        assert_eq!(monomial_lcm(&m("X*Y^3"), &m("1")).unwrap(), m("X*Y^3"));
        assert!(monomial_lcm(&Monomial::one(1), &m("X")).is_err());
    }

    #[test]
    fn parse_and_format() {
        let a = m("X^2*Y^3");
        assert_eq!(a.exponents(), &[2, 3, 0]);
        assert_eq!(a.degree(), 5);
        assert_eq!(a.format(&xyz()), "X^2*Y^3");
        assert_eq!(m("Y*X*X").format(&xyz()), "X^2*Y");
        assert!(m("1").is_one());
        assert!(Monomial::parse("W", &xyz()).is_err());
        assert!(Monomial::parse("X^a", &xyz()).is_err());
        assert!(Monomial::parse("X**Y", &xyz()).is_err());
    }

    #[test]
    fn canonical_order() {
        let mut v = [m("Y^2"), m("X*Y"), m("Z"), m("X^2")];
        v.sort();
        let names: Vec<_> = v.iter().map(|x| x.format(&xyz())).collect();
        assert_eq!(names, ["Z", "X^2", "X*Y", "Y^2"]);
    }

    #[test]
    fn degree_enumeration_counts() {
        assert_eq!(monomials_of_degree(3, 4).len(), 15);
        assert_eq!(monomials_of_degree(1, 7).len(), 1);
        assert_eq!(monomials_of_degree(4, 0).len(), 1);
    }
}
