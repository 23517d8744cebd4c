//! The two-row vector partition function: brute-force counts, chambers,
//! periods and cone membership.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{binomial, lcm_i64, rat, Rational};

/// Columns `r × (1, 0)` followed by `(d_i, e_i)` with `e_i > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VPMatrix {
    pub r: u32,
    pub columns: Vec<(u32, u32)>,
}

/// A distinct slope `d/e` with the columns that realize it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeClass {
    pub slope: Rational,
    /// Primitive integer ray `(d, e)` in the slope direction.
    pub ray: (i64, i64),
    pub columns: Vec<(u32, u32)>,
}

impl VPMatrix {
    pub fn new(r: u32, columns: Vec<(u32, u32)>) -> Result<Self> {
        if columns.iter().any(|&(_, e)| e == 0) {
            return Err(Error::InvalidInput(
                "columns must have a positive second entry; use r for (1,0) columns".into(),
            ));
        }
        Ok(VPMatrix { r, columns })
    }

    /// Distinct slopes in increasing order.
    pub fn slope_classes(&self) -> Vec<SlopeClass> {
        let mut classes: Vec<SlopeClass> = Vec::new();
        let mut sorted = self.columns.clone();
        sorted.sort_by_key(|&(d, e)| rat(d as i64, e as i64));
        for (d, e) in sorted {
            let s = rat(d as i64, e as i64);
            match classes.last_mut() {
                Some(c) if c.slope == s => c.columns.push((d, e)),
                _ => classes.push(SlopeClass {
                    ray: primitive(d as i64, e as i64),
                    slope: s,
                    columns: vec![(d, e)],
                }),
            }
        }
        classes
    }

    /// All columns as integer vectors, `(1, 0)` first when `r ≥ 1`, without repeats.
    pub fn distinct_vectors(&self) -> Vec<(i64, i64)> {
        let mut v: Vec<(i64, i64)> = Vec::new();
        if self.r > 0 {
            v.push((1, 0));
        }
        for &(d, e) in &self.columns {
            let c = (d as i64, e as i64);
            if !v.contains(&c) {
                v.push(c);
            }
        }
        v
    }
}

fn primitive(a: i64, b: i64) -> (i64, i64) {
    let g = a.gcd(&b);
    if g == 0 {
        (a, b)
    } else {
        (a / g, b / g)
    }
}

/// `φ_M(m, n)`: the number of nonnegative integer solutions of
/// `M λ = (m, n)`, summing the `(1, 0)` columns by stars and bars.
pub fn phi_brute(m_mat: &VPMatrix, m: i64, n: i64) -> BigInt {
    phi_brute_raw(m_mat.r, &m_mat.columns, m, n)
}

pub fn phi_brute_raw(r: u32, columns: &[(u32, u32)], m: i64, n: i64) -> BigInt {
    fn rec(r: u32, cols: &[(u32, u32)], m: i64, n: i64) -> BigInt {
        match cols.split_first() {
            None => {
                if n != 0 || m < 0 {
                    BigInt::zero()
                } else if r == 0 {
                    if m == 0 {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                } else {
                    binomial(m + r as i64 - 1, r as i64 - 1)
                }
            }
            // The last column's multiplicity is forced by the second row.
            Some((&(d, e), [])) => {
                let (d, e) = (d as i64, e as i64);
                if n % e != 0 {
                    return BigInt::zero();
                }
                rec(r, &[], m - (n / e) * d, 0)
            }
            Some((&(d, e), rest)) => {
                let mut acc = BigInt::zero();
                let (d, e) = (d as i64, e as i64);
                let mut lam = 0;
                while lam * e <= n && m - lam * d >= 0 {
                    acc += rec(r, rest, m - lam * d, n - lam * e);
                    lam += 1;
                }
                acc
            }
        }
    }
    if m < 0 || n < 0 {
        return BigInt::zero();
    }
    rec(r, columns, m, n)
}

/// The cone between two consecutive slope rays; the upper ray of the last
/// chamber is `(1, 0)` (slope `∞`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chamber {
    pub index: usize,
    pub lower: (i64, i64),
    pub upper: (i64, i64),
    pub lower_slope: Rational,
    /// `None` means `∞`.
    pub upper_slope: Option<Rational>,
}

impl Chamber {
    pub fn is_last(&self) -> bool {
        self.upper_slope.is_none()
    }

    /// `(m, n)` lies in the closed cone spanned by the two rays.
    pub fn contains_int(&self, m: i64, n: i64) -> bool {
        let (a, b) = self.lower;
        let (c, d) = self.upper;
        // Left of the upper ray and right of the lower ray.
        n >= 0 && m * b - n * a >= 0 && m * d - n * c <= 0
    }

    pub fn contains(&self, m: &Rational, n: &Rational) -> bool {
        let (a, b) = self.lower;
        let (c, d) = self.upper;
        let (a, b, c, d) = (rat(a, 1), rat(b, 1), rat(c, 1), rat(d, 1));
        *n >= Rational::zero() && m * &b - n * &a >= Rational::zero() && m * &d - n * &c <= Rational::zero()
    }

    /// Writes `(m, n) = α·lower + β·upper`.
    pub fn ray_coordinates(&self, m: &Rational, n: &Rational) -> (Rational, Rational) {
        let (a, b) = self.lower;
        let (c, d) = self.upper;
        let det = rat(a * d - b * c, 1);
        let alpha = (m * rat(d, 1) - n * rat(c, 1)) / &det;
        let beta = (n * rat(a, 1) - m * rat(b, 1)) / &det;
        (alpha, beta)
    }
}

/// A chamber translated by a nonnegative offset inside it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedCone {
    pub chamber: Chamber,
    pub offset: (Rational, Rational),
}

impl RestrictedCone {
    pub fn contains(&self, m: &Rational, n: &Rational) -> bool {
        self.chamber.contains(&(m - &self.offset.0), &(n - &self.offset.1))
    }

    pub fn contains_int(&self, m: i64, n: i64) -> bool {
        self.contains(&rat(m, 1), &rat(n, 1))
    }
}

/// Anything with a membership test on rational points.
pub trait PlanarCone {
    fn contains_point(&self, m: &Rational, n: &Rational) -> bool;
}

impl PlanarCone for Chamber {
    fn contains_point(&self, m: &Rational, n: &Rational) -> bool {
        self.contains(m, n)
    }
}

impl PlanarCone for RestrictedCone {
    fn contains_point(&self, m: &Rational, n: &Rational) -> bool {
        self.contains(m, n)
    }
}

pub fn cone_contains(c: &impl PlanarCone, point: (&Rational, &Rational)) -> bool {
    c.contains_point(point.0, point.1)
}

/// Maximal cones of the chamber complex, ordered by slope. The last chamber
/// `[d_l/e_l, ∞)` exists only when there is at least one `(1, 0)` column.
pub fn chambers(m: &VPMatrix) -> Result<Vec<Chamber>> {
    let classes = m.slope_classes();
    if classes.is_empty() {
        return Err(Error::InvalidInput("matrix needs at least one non-(1,0) column".into()));
    }
    let mut out = Vec::new();
    for (j, w) in classes.windows(2).enumerate() {
        out.push(Chamber {
            index: j,
            lower: w[0].ray,
            upper: w[1].ray,
            lower_slope: w[0].slope.clone(),
            upper_slope: Some(w[1].slope.clone()),
        });
    }
    if m.r > 0 {
        let last = classes.last().expect("nonempty");
        out.push(Chamber {
            index: out.len(),
            lower: last.ray,
            upper: (1, 0),
            lower_slope: last.slope.clone(),
            upper_slope: None,
        });
    }
    Ok(out)
}

/// Exponent of `ℤ² / M_σ ℤ²` for a nonsingular pair: `|det| / gcd(entries)`.
fn pair_exponent(a: (i64, i64), b: (i64, i64)) -> i64 {
    let det = (a.0 * b.1 - a.1 * b.0).abs();
    let g = a.0.gcd(&a.1).gcd(&b.0).gcd(&b.1);
    det / g
}

/// A common period `h` of all residue structures: the lcm of the exponents of
/// `ℤ²/M_σℤ²` over nonsingular column pairs `σ`.
pub fn period(m: &VPMatrix) -> Result<u64> {
    let cols = m.distinct_vectors();
    let mut h = 1i64;
    let mut any = false;
    for (i, a) in cols.iter().enumerate() {
        for b in &cols[i + 1..] {
            if a.0 * b.1 - a.1 * b.0 != 0 {
                any = true;
                h = lcm_i64(h, pair_exponent(*a, *b));
            }
        }
    }
    if !any {
        return Err(Error::RankDeficient(format!(
            "no two independent columns among {cols:?}"
        )));
    }
    Ok(h as u64)
}

/// A full-rank sublattice of `ℤ²` in Hermite normal form, with basis
/// `(a, 0)` and `(b, c)`, `0 ≤ b < a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl Lattice2 {
    pub fn full() -> Self {
        Lattice2 { a: 1, b: 0, c: 1 }
    }

    pub fn index(&self) -> usize {
        (self.a * self.c) as usize
    }

    pub fn contains(&self, x: i64, y: i64) -> bool {
        if y.rem_euclid(self.c) != 0 {
            return false;
        }
        (x - (y / self.c) * self.b).rem_euclid(self.a) == 0
    }

    /// Index of the coset of `(x, y)` in `[0, index)`.
    pub fn coset_of(&self, x: i64, y: i64) -> usize {
        let q = y.div_euclid(self.c);
        let ry = y.rem_euclid(self.c);
        let rx = (x - q * self.b).rem_euclid(self.a);
        (ry * self.a + rx) as usize
    }

    /// Smallest nonnegative representative of coset `k`.
    pub fn representative(&self, k: usize) -> (i64, i64) {
        let k = k as i64;
        (k % self.a, k / self.a)
    }

    /// The lattice `{x : pred(x)}` given that it contains `h ℤ²`.
    fn from_membership(h: i64, pred: impl Fn(i64, i64) -> bool) -> Self {
        let a = (1..=h).find(|&x| pred(x, 0)).expect("h·e_1 is in the lattice");
        for c in 1..=h {
            if let Some(b) = (0..a).find(|&x| pred(x, c)) {
                return Lattice2 { a, b, c };
            }
        }
        unreachable!("h·e_2 is in the lattice")
    }

    /// The lattice spanned by two independent integer vectors.
    pub fn spanned_by(u: (i64, i64), w: (i64, i64)) -> Self {
        let det = u.0 * w.1 - u.1 * w.0;
        assert!(det != 0, "spanning vectors must be independent");
        Self::from_membership(det.abs(), |x, y| in_span(u, w, x, y))
    }

    pub fn intersect(&self, other: &Lattice2) -> Self {
        let h = lcm_i64(self.index() as i64, other.index() as i64);
        Self::from_membership(h, |x, y| self.contains(x, y) && other.contains(x, y))
    }
}

fn in_span(u: (i64, i64), w: (i64, i64), x: i64, y: i64) -> bool {
    let det = u.0 * w.1 - u.1 * w.0;
    // Cramer: (x, y) = α u + β w with α, β integers.
    (x * w.1 - y * w.0) % det == 0 && (u.0 * y - u.1 * x) % det == 0
}

/// Lattice modulo which the partition function is a polynomial on each
/// coset inside `chamber`: the intersection of `M_τ ℤ²` over column pairs
/// `τ` whose cone contains the chamber.
pub fn chamber_lattice(m: &VPMatrix, chamber: &Chamber) -> Lattice2 {
    let cols = m.distinct_vectors();
    let slope_le = |v: &(i64, i64), s: &Rational| v.1 > 0 && rat(v.0, v.1) <= *s;
    let lows: Vec<&(i64, i64)> = cols.iter().filter(|v| slope_le(v, &chamber.lower_slope)).collect();
    let highs: Vec<&(i64, i64)> = cols
        .iter()
        .filter(|v| match &chamber.upper_slope {
            None => v.1 == 0,
            Some(s) => v.1 == 0 || rat(v.0, v.1) >= *s,
        })
        .collect();
    let mut lattice = Lattice2::full();
    for a in &lows {
        for b in &highs {
            lattice = lattice.intersect(&Lattice2::spanned_by(**a, **b));
        }
    }
    lattice
}
