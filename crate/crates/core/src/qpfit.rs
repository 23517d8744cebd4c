//! Exact quasi-polynomial fitting of a bigraded counting function on the
//! chambers of its generator slopes, validated on holdout points.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hilbert::LengthOracle;
use crate::linalg::{solve, IncrementalBasis};
use crate::poly::{monomial_basis, BiPoly, UniPoly};
use crate::scalar::{factorial, from_bigint, int, Rational};
use crate::vpf::{phi_brute, Chamber, Lattice2, RestrictedCone, VPMatrix};

/// An integer-valued function on `ℕ²` that the fitters sample.
pub trait BiOracle: Sync {
    fn value(&self, m: i64, n: i64) -> Result<BigInt>;

    /// Hint that values with these second coordinates are about to be requested.
    fn prepare(&self, _ns: &[i64]) -> Result<()> {
        Ok(())
    }
}

impl BiOracle for LengthOracle {
    fn value(&self, m: i64, n: i64) -> Result<BigInt> {
        self.length(m, n)
    }

    fn prepare(&self, ns: &[i64]) -> Result<()> {
        self.prefetch(ns.iter().filter(|&&n| n >= 0).map(|&n| n as u32))
    }
}

impl BiOracle for VPMatrix {
    fn value(&self, m: i64, n: i64) -> Result<BigInt> {
        Ok(phi_brute(self, m, n))
    }
}

/// Wraps a closure as an oracle.
pub struct FnOracle<F>(pub F);

impl<F: Fn(i64, i64) -> Result<BigInt> + Sync> BiOracle for FnOracle<F> {
    fn value(&self, m: i64, n: i64) -> Result<BigInt> {
        (self.0)(m, n)
    }
}

/// One polynomial per coset of a lattice `L ⊇ hℤ²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiPolynomial2 {
    pub period: u64,
    pub lattice: Lattice2,
    /// Indexed by [`Lattice2::coset_of`].
    pub polys: Vec<BiPoly>,
    pub degree_bound: u32,
}

impl QuasiPolynomial2 {
    pub fn poly_at(&self, m: i64, n: i64) -> &BiPoly {
        &self.polys[self.lattice.coset_of(m, n)]
    }

    pub fn eval(&self, m: i64, n: i64) -> Rational {
        self.poly_at(m, n).eval_int(m, n)
    }

    /// The polynomial for each residue pair in `[0, h)²`.
    pub fn residue_table(&self) -> BTreeMap<(u64, u64), BiPoly> {
        let h = self.period as i64;
        let mut out = BTreeMap::new();
        for a in 0..h {
            for b in 0..h {
                out.insert((a as u64, b as u64), self.poly_at(a, b).clone());
            }
        }
        out
    }

    /// Number of distinct polynomials among the cosets.
    pub fn distinct_count(&self) -> usize {
        let mut seen: Vec<&BiPoly> = Vec::new();
        for p in &self.polys {
            if !seen.contains(&p) {
                seen.push(p);
            }
        }
        seen.len()
    }

    pub fn is_polynomial(&self) -> bool {
        self.distinct_count() == 1
    }
}

#[derive(Debug, Clone)]
pub struct FitOptions {
    /// Total degree bound `D` of every coset polynomial.
    pub degree: u32,
    /// Dimension `d`: the top part is the homogeneous component of degree
    /// `d - 1`, and the density piece is `d! · top(x, 1)`.
    pub density_dim: u32,
    /// Offsets `k · (u + w)` for `k = 0..=offset_kmax`, with `u`, `w` the rays.
    pub offset_kmax: u32,
    /// Require the top part to agree on every coset.
    pub require_common_top: bool,
}

impl FitOptions {
    pub fn for_density(d: u32) -> Self {
        FitOptions {
            degree: d.saturating_sub(1),
            density_dim: d,
            offset_kmax: 8,
            require_common_top: true,
        }
    }

    pub fn for_partition_function(m: &VPMatrix) -> Self {
        let degree = (m.r as usize + m.columns.len()).saturating_sub(2) as u32;
        FitOptions {
            degree,
            density_dim: degree + 1,
            offset_kmax: 8,
            require_common_top: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ChamberFit {
    pub chamber: Chamber,
    pub offset: (Rational, Rational),
    pub offset_step: u32,
    pub qp: QuasiPolynomial2,
    pub top: BiPoly,
    pub density_piece: UniPoly,
    pub holdout_verified: usize,
    /// Smallest and largest `n` sampled.
    pub n_range: (i64, i64),
}

impl ChamberFit {
    pub fn restricted_cone(&self) -> RestrictedCone {
        RestrictedCone {
            chamber: self.chamber.clone(),
            offset: self.offset.clone(),
        }
    }
}

/// Integer geometry of a translated chamber: points `o + α u + β w`.
struct ConeFrame {
    u: (i64, i64),
    w: (i64, i64),
    o: (i64, i64),
    det: i64,
}

impl ConeFrame {
    fn new(chamber: &Chamber, k: i64) -> Self {
        let (u, w) = (chamber.lower, chamber.upper);
        ConeFrame {
            u,
            w,
            o: (k * (u.0 + w.0), k * (u.1 + w.1)),
            det: u.0 * w.1 - u.1 * w.0,
        }
    }

    /// `(α |det|, β |det|)` of a point, exact.
    fn scaled_coords(&self, m: i64, n: i64) -> (i64, i64) {
        let (x, y) = (m - self.o.0, n - self.o.1);
        let s = self.det.signum();
        (s * (x * self.w.1 - y * self.w.0), s * (self.u.0 * y - self.u.1 * x))
    }

    /// Points of one coset with `depth = α + β ∈ [lo, hi]` (depths scaled by `|det|`).
    fn coset_points(&self, lattice: &Lattice2, coset: usize, lo: i64, hi: i64) -> Vec<(i64, i64, i64)> {
        let ad = self.det.abs();
        let t = (hi + ad - 1) / ad + 1;
        let verts = [
            self.o,
            (self.o.0 + t * self.u.0, self.o.1 + t * self.u.1),
            (self.o.0 + t * self.w.0, self.o.1 + t * self.w.1),
        ];
        let (m_lo, m_hi) = (
            verts.iter().map(|v| v.0).min().unwrap(),
            verts.iter().map(|v| v.0).max().unwrap(),
        );
        let (n_lo, n_hi) = (
            verts.iter().map(|v| v.1).min().unwrap(),
            verts.iter().map(|v| v.1).max().unwrap(),
        );
        let mut out = Vec::new();
        for n in n_lo.max(0)..=n_hi {
            for m in m_lo.max(0)..=m_hi {
                if lattice.coset_of(m, n) != coset {
                    continue;
                }
                let (a, b) = self.scaled_coords(m, n);
                if a < 0 || b < 0 {
                    continue;
                }
                let depth = a + b;
                if depth >= lo && depth <= hi {
                    out.push((depth, n, m));
                }
            }
        }
        out.sort_unstable();
        out
    }
}

fn basis_row(basis: &[(u32, u32)], m: i64, n: i64) -> Vec<Rational> {
    basis.iter().map(|&(i, j)| int(m.pow(i) * n.pow(j))).collect()
}

/// Sample plan for one coset: points used for interpolation and for validation.
struct CosetPlan {
    fit: Vec<(i64, i64)>,
    holdout: Vec<(i64, i64)>,
}

fn plan_coset(frame: &ConeFrame, lattice: &Lattice2, coset: usize, basis: &[(u32, u32)]) -> Option<CosetPlan> {
    let need = basis.len();
    let ad = frame.det.abs();
    let mut hi = ad * (2 + ((2 * need * lattice.index()) as f64 / ad as f64).sqrt().ceil() as i64);
    for _ in 0..8 {
        let cands = frame.coset_points(lattice, coset, 0, hi);
        let mut rank = IncrementalBasis::new();
        let mut fit = Vec::new();
        let mut rest = Vec::new();
        let mut fit_depth = 0;
        for &(depth, n, m) in &cands {
            if fit.len() < need && rank.try_add(basis_row(basis, m, n)) {
                fit.push((m, n));
                fit_depth = depth;
            } else {
                rest.push((depth, m, n));
            }
        }
        if fit.len() == need {
            // Every other point up to the fitting depth, plus a band at twice
            // the depth (the far holdout).
            let mut holdout: Vec<(i64, i64)> = rest
                .iter()
                .filter(|(d, _, _)| *d <= fit_depth)
                .map(|&(_, m, n)| (m, n))
                .collect();
            let near_extra = need.saturating_sub(holdout.len());
            holdout.extend(
                rest.iter()
                    .filter(|(d, _, _)| *d > fit_depth)
                    .take(near_extra)
                    .map(|&(_, m, n)| (m, n)),
            );
            let far_lo = 2 * fit_depth.max(ad);
            let mut far = frame.coset_points(
                lattice,
                coset,
                far_lo,
                far_lo + 2 * ad * (lattice.index() as i64).max(1),
            );
            if far.len() < need {
                far = frame.coset_points(
                    lattice,
                    coset,
                    far_lo,
                    2 * far_lo + ad * (need as i64 + lattice.index() as i64),
                );
            }
            let step = (far.len() / need.max(1)).max(1);
            holdout.extend(far.iter().step_by(step).take(need).map(|&(_, n, m)| (m, n)));
            return Some(CosetPlan { fit, holdout });
        }
        hi *= 2;
    }
    None
}

struct CosetOutcome {
    poly: BiPoly,
    failures: Vec<String>,
    checked: usize,
}

fn fit_coset(oracle: &dyn BiOracle, plan: &CosetPlan, basis: &[(u32, u32)]) -> Result<CosetOutcome> {
    let rows: Vec<Vec<Rational>> = plan.fit.iter().map(|&(m, n)| basis_row(basis, m, n)).collect();
    let rhs: Vec<Rational> = plan
        .fit
        .iter()
        .map(|&(m, n)| oracle.value(m, n).map(from_bigint))
        .collect::<Result<_>>()?;
    let coeffs = solve(rows, rhs).expect("fitting points were chosen unisolvent");
    let poly = BiPoly::from_terms(basis.iter().copied().zip(coeffs));
    let mut failures = Vec::new();
    for &(m, n) in &plan.holdout {
        let want = from_bigint(oracle.value(m, n)?);
        let got = poly.eval_int(m, n);
        if want != got {
            failures.push(format!("({m},{n}): oracle {want}, fit {got}"));
        }
    }
    Ok(CosetOutcome {
        poly,
        failures,
        checked: plan.holdout.len(),
    })
}

/// Fits the counting function on `chamber` coset by coset, searching the
/// offset schedule for the first translate on which every coset polynomial
/// also predicts its holdout points exactly.
pub fn fit_chamber(
    oracle: &dyn BiOracle,
    chamber: &Chamber,
    lattice: &Lattice2,
    period: u64,
    opts: &FitOptions,
) -> Result<ChamberFit> {
    let basis = monomial_basis(opts.degree);
    let mut last_failures: Vec<String> = Vec::new();
    for k in 0..=opts.offset_kmax {
        let frame = ConeFrame::new(chamber, k as i64);
        let plans: Vec<CosetPlan> = (0..lattice.index())
            .map(|c| {
                plan_coset(&frame, lattice, c, &basis).ok_or_else(|| Error::FitFailure {
                    context: format!("chamber {}", chamber.index),
                    diagnostics: format!("no unisolvent sample found in coset {c}"),
                })
            })
            .collect::<Result<_>>()?;
        let mut ns: Vec<i64> = plans
            .iter()
            .flat_map(|p| p.fit.iter().chain(&p.holdout).map(|&(_, n)| n))
            .collect();
        ns.sort_unstable();
        ns.dedup();
        oracle.prepare(&ns)?;
        let outcomes: Vec<CosetOutcome> = plans
            .par_iter()
            .map(|p| fit_coset(oracle, p, &basis))
            .collect::<Result<_>>()?;
        let failures: Vec<String> = outcomes.iter().flat_map(|o| o.failures.iter().cloned()).collect();
        if !failures.is_empty() {
            last_failures = failures;
            continue;
        }
        let checked = outcomes.iter().map(|o| o.checked).sum();
        let polys: Vec<BiPoly> = outcomes.into_iter().map(|o| o.poly).collect();
        let top_deg = opts.density_dim.saturating_sub(1);
        let tops: Vec<BiPoly> = polys.iter().map(|p| p.homogeneous_part(top_deg)).collect();
        if opts.require_common_top {
            if let Some(p) = polys.iter().find(|p| p.total_degree().is_some_and(|t| t > top_deg)) {
                return Err(Error::Structural(format!(
                    "chamber {}: fitted polynomial {} exceeds degree {top_deg}",
                    chamber.index,
                    p.pretty()
                )));
            }
            if tops.iter().any(|t| *t != tops[0]) {
                let shown: Vec<String> = tops.iter().map(BiPoly::pretty).collect();
                return Err(Error::Structural(format!(
                    "chamber {}: top homogeneous part depends on the residue class: {}",
                    chamber.index,
                    shown.join(" | ")
                )));
            }
        }
        let top = tops[0].clone();
        let density_piece = top.dehomogenize().scale(&from_bigint(factorial(opts.density_dim)));
        let n_range = (*ns.first().unwrap_or(&0), *ns.last().unwrap_or(&0));
        return Ok(ChamberFit {
            chamber: chamber.clone(),
            offset: (int(frame.o.0), int(frame.o.1)),
            offset_step: k,
            qp: QuasiPolynomial2 {
                period,
                lattice: lattice.clone(),
                polys,
                degree_bound: opts.degree,
            },
            top,
            density_piece,
            holdout_verified: checked,
            n_range,
        });
    }
    last_failures.truncate(12);
    Err(Error::FitFailure {
        context: format!(
            "chamber {} [{}, {}]",
            chamber.index,
            chamber.lower_slope,
            chamber
                .upper_slope
                .as_ref()
                .map_or("inf".to_string(), |s| s.to_string())
        ),
        diagnostics: format!(
            "no offset up to k={} validated; residuals at the last offset: {}",
            opts.offset_kmax,
            last_failures.join("; ")
        ),
    })
}

/// Quasi-polynomial fit of `n ↦ oracle(p n, q n)`.
#[derive(Debug, Clone)]
pub struct DiagonalFit {
    pub p: i64,
    pub q: i64,
    pub period: u64,
    /// First `n` of the validated range.
    pub start: i64,
    /// Polynomial in `n` per class `n mod period`.
    pub class_polys: Vec<UniPoly>,
    pub degree: u32,
    /// Common coefficient of `n^degree`.
    pub leading: Rational,
    /// `leading · degree!`.
    pub multiplicity: Rational,
}

fn divisors(h: u64) -> Vec<u64> {
    (1..=h).filter(|d| h.is_multiple_of(*d)).collect()
}

/// Fits `n ↦ oracle(pn, qn)` as a quasi-polynomial of degree `≤ degree`.
/// Periods are tried among the divisors of `h`, then `2h, 3h, 4h`; starting
/// points `1 + 2kP` for `k = 0..=offset_kmax`.
pub fn diagonal_fit(
    oracle: &dyn BiOracle,
    p: i64,
    q: i64,
    degree: u32,
    h: u64,
    offset_kmax: u32,
) -> Result<DiagonalFit> {
    if p < 0 || q <= 0 {
        return Err(Error::InvalidInput(format!("diagonal ({p},{q}) needs p ≥ 0, q ≥ 1")));
    }
    let g = p.gcd(&q).max(1);
    let (p, q) = (p / g, q / g);
    let mut periods = divisors(h.max(1));
    periods.extend([2 * h, 3 * h, 4 * h]);
    let nfit = degree as i64 + 1;
    let mut last = String::new();
    for &pp in &periods {
        let pi = pp as i64;
        for k in 0..=offset_kmax as i64 {
            let start = 1 + 2 * k * pi;
            let mut plans = Vec::new();
            for c in 0..pi {
                let first = start + (c - start).rem_euclid(pi);
                let fit: Vec<i64> = (0..nfit).map(|i| first + i * pi).collect();
                let top = *fit.last().unwrap();
                let mut hold: Vec<i64> = (nfit..nfit + 2).map(|i| first + i * pi).collect();
                let far = 2 * top + (first - 2 * top).rem_euclid(pi);
                hold.extend([far, far + pi]);
                plans.push((fit, hold));
            }
            let ns: Vec<i64> = plans
                .iter()
                .flat_map(|(f, hld)| f.iter().chain(hld).map(|n| q * n))
                .collect();
            oracle.prepare(&ns)?;
            let fitted: Vec<(UniPoly, Vec<String>)> = plans
                .par_iter()
                .map(|(fit, hold)| {
                    let rows: Vec<Vec<Rational>> = fit
                        .iter()
                        .map(|&n| (0..nfit).map(|i| int(n.pow(i as u32))).collect())
                        .collect();
                    let rhs: Vec<Rational> = fit
                        .iter()
                        .map(|&n| oracle.value(p * n, q * n).map(from_bigint))
                        .collect::<Result<_>>()?;
                    let poly = UniPoly::new(solve(rows, rhs).expect("distinct nodes"));
                    let mut bad = Vec::new();
                    for &n in hold {
                        let want = from_bigint(oracle.value(p * n, q * n)?);
                        if poly.eval(&int(n)) != want {
                            bad.push(format!("n={n}"));
                        }
                    }
                    Ok((poly, bad))
                })
                .collect::<Result<_>>()?;
            if let Some((_, bad)) = fitted.iter().find(|(_, b)| !b.is_empty()) {
                last = format!("period {pp}, start {start}: mismatch at {}", bad.join(","));
                continue;
            }
            let class_polys: Vec<UniPoly> = fitted.into_iter().map(|(p, _)| p).collect();
            let leads: Vec<Rational> = class_polys.iter().map(|c| c.coeff(degree as usize)).collect();
            if leads.iter().any(|l| *l != leads[0]) {
                let shown: Vec<String> = leads.iter().map(|l| l.to_string()).collect();
                return Err(Error::Structural(format!(
                    "diagonal ({p},{q}): leading coefficient depends on the class: {}",
                    shown.join(", ")
                )));
            }
            let leading = leads[0].clone();
            let multiplicity = &leading * from_bigint(factorial(degree));
            return Ok(DiagonalFit {
                p,
                q,
                period: pp,
                start,
                class_polys,
                degree,
                leading,
                multiplicity,
            });
        }
    }
    Err(Error::FitFailure {
        context: format!("diagonal ({p},{q})"),
        diagnostics: last,
    })
}

impl DiagonalFit {
    /// Density value `f(p/q) = d · e / q^{d-1}` with `d = degree + 1`.
    pub fn density_value(&self) -> Rational {
        let d = self.degree as i64 + 1;
        let qpow = num_traits::pow(int(self.q), self.degree as usize);
        if qpow.is_zero() {
            return Rational::zero();
        }
        int(d) * &self.multiplicity / qpow
    }
}
