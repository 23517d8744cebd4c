//! Density functions of the ordinary and saturated power filtrations, the
//! ε-density, and the invariants read off from them.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::calc::{
    detect_saturation_stabilization, ideal_power, ideal_product, integral_closure, saturate_maximal, FiltrationSpec,
    Stabilization,
};
use crate::error::{Error, Result};
use crate::hilbert::{quotient_length, LengthOracle};
use crate::ideal::MonomialIdeal;
use crate::piecewise::PiecewisePolynomial;
use crate::poly::UniPoly;
use crate::qpfit::{diagonal_fit, fit_chamber, BiOracle, FitOptions};
use crate::ring::RingDescriptor;
use crate::scalar::{factorial, from_bigint, int, is_integer, rat, to_f64, Rational};
use crate::surd::QuadSurd;
use crate::vpf::{chamber_lattice, chambers, period, VPMatrix};

/// Tuning knobs shared by every density computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityOptions {
    /// Window for saturation-stabilization detection.
    pub n_max: u32,
    /// Saturated generators are harvested up to `n = c · k_max`.
    pub k_max: u32,
    /// Override of the fit degree (default `d - 1`).
    pub degree: Option<u32>,
    pub offset_kmax: u32,
    /// Grid used by the sampled checks.
    pub sample_step: Rational,
}

impl Default for DensityOptions {
    fn default() -> Self {
        DensityOptions {
            n_max: 48,
            k_max: 4,
            degree: None,
            offset_kmax: 8,
            sample_step: rat(1, 20),
        }
    }
}

/// Outcome of one structural check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        }
    }
}

/// How one chamber piece was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChamberRecord {
    pub lower_slope: Rational,
    pub upper_slope: Option<Rational>,
    pub lattice_index: usize,
    pub distinct_cosets: usize,
    pub offset_step: u32,
    pub offset: (Rational, Rational),
    pub n_range: (i64, i64),
    pub holdout_verified: usize,
}

/// How one breakpoint value was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointRecord {
    pub at: Rational,
    pub period: u64,
    pub start: i64,
    /// Multiplicity of the diagonal subalgebra along the primitive direction.
    pub multiplicity: Rational,
}

/// A density function together with the data it was assembled from.
#[derive(Debug, Clone)]
pub struct DensityComputation {
    pub density: PiecewisePolynomial,
    pub r: u32,
    pub columns: Vec<(u32, u32)>,
    pub period: u64,
    pub chambers: Vec<ChamberRecord>,
    pub points: Vec<PointRecord>,
    pub checks: Vec<Check>,
}

/// Saturated density plus the filtration record it rests on.
#[derive(Debug, Clone)]
pub struct SaturatedComputation {
    pub inner: DensityComputation,
    pub spec: FiltrationSpec,
    pub harvest_window: u32,
    /// No stabilization was found: the pieces rest on the sampled window only.
    pub unverified: bool,
}

impl SaturatedComputation {
    pub fn stabilization(&self) -> Option<Stabilization> {
        self.spec.stabilization
    }
}

fn dimension(ring: &RingDescriptor) -> u32 {
    ring.krull_dim() as u32
}

fn check_input(ring: &RingDescriptor, i: &MonomialIdeal) -> Result<()> {
    ring.check(i)?;
    if i.is_zero() || i.is_unit() {
        return Err(Error::InvalidInput("the ideal must be nonzero and proper".into()));
    }
    Ok(())
}

fn fit_options(d: u32, opts: &DensityOptions) -> FitOptions {
    let mut f = FitOptions::for_density(d);
    if let Some(deg) = opts.degree {
        f.degree = deg;
    }
    f.offset_kmax = opts.offset_kmax;
    f
}

fn slope_parts(s: &Rational) -> Result<(i64, i64)> {
    match (s.numer().to_i64(), s.denom().to_i64()) {
        (Some(p), Some(q)) => Ok((p, q)),
        _ => Err(Error::InvalidInput(format!("slope {s} out of range"))),
    }
}

/// Fits every chamber, evaluates the breakpoints on their diagonals and
/// assembles the piecewise density.
fn assemble(oracle: &dyn BiOracle, matrix: &VPMatrix, d: u32, opts: &DensityOptions) -> Result<DensityComputation> {
    let chs = chambers(matrix)?;
    let h = period(matrix)?;
    let fopts = fit_options(d, opts);
    let fits = chs
        .par_iter()
        .map(|c| fit_chamber(oracle, c, &chamber_lattice(matrix, c), h, &fopts))
        .collect::<Result<Vec<_>>>()?;

    // A zero slope (unit members) contributes no breakpoint.
    let mut breakpoints: Vec<Rational> = Vec::new();
    let mut pieces: Vec<UniPoly> = Vec::new();
    for (k, fit) in fits.iter().enumerate() {
        let s = &fit.chamber.lower_slope;
        if k == 0 {
            if s.is_zero() {
                pieces.push(fit.density_piece.clone());
                continue;
            }
            pieces.push(UniPoly::zero());
        }
        breakpoints.push(s.clone());
        pieces.push(fit.density_piece.clone());
    }

    let points = breakpoints
        .par_iter()
        .map(|b| {
            let (p, q) = slope_parts(b)?;
            let fit = diagonal_fit(oracle, p, q, d.saturating_sub(1), h, opts.offset_kmax)?;
            Ok(PointRecord {
                at: b.clone(),
                period: fit.period,
                start: fit.start,
                multiplicity: fit.multiplicity.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let bps: Vec<QuadSurd> = breakpoints.iter().cloned().map(QuadSurd::rational).collect();
    let mut density = PiecewisePolynomial::new(bps, pieces, d)?;
    for (k, pt) in points.iter().enumerate() {
        let value = int(d as i64) * &pt.multiplicity
            / num_traits::pow(int(slope_parts(&pt.at)?.1), d.saturating_sub(1) as usize);
        density.set_point_value(k, QuadSurd::rational(value));
    }

    let chambers = fits
        .iter()
        .map(|f| ChamberRecord {
            lower_slope: f.chamber.lower_slope.clone(),
            upper_slope: f.chamber.upper_slope.clone(),
            lattice_index: f.qp.lattice.index(),
            distinct_cosets: f.qp.distinct_count(),
            offset_step: f.offset_step,
            offset: f.offset.clone(),
            n_range: f.n_range,
            holdout_verified: f.holdout_verified,
        })
        .collect();
    Ok(DensityComputation {
        density,
        r: matrix.r,
        columns: matrix.columns.clone(),
        period: h,
        chambers,
        points,
        checks: Vec::new(),
    })
}

fn continuity_checks(density: &PiecewisePolynomial, from: usize) -> Vec<Check> {
    density
        .breakpoint_checks()
        .into_iter()
        .enumerate()
        .skip(from)
        .map(|(_, c)| {
            let ok = c.is_continuous();
            Check::new(
                &format!("continuity at {}", c.at),
                ok,
                format!("left {}, right {}, value {}", c.left, c.right, c.value),
            )
        })
        .collect()
}

fn fail_on(checks: &[Check], what: &str) -> Result<()> {
    if let Some(c) = checks.iter().find(|c| !c.passed) {
        return Err(Error::Structural(format!("{what}: {} failed ({})", c.name, c.detail)));
    }
    Ok(())
}

/// The density of the ordinary powers `{Iⁿ}` together with its provenance.
pub fn ordinary_computation(
    ring: &RingDescriptor,
    i: &MonomialIdeal,
    opts: &DensityOptions,
) -> Result<DensityComputation> {
    check_input(ring, i)?;
    let d = dimension(ring);
    let columns: Vec<(u32, u32)> = i.generators().iter().map(|g| (g.degree(), 1)).collect();
    let matrix = VPMatrix::new(ring.var_count() as u32, columns)?;
    let oracle = LengthOracle::new(ring, FiltrationSpec::ordinary(i.clone()))?;
    let mut out = assemble(&oracle, &matrix, d, opts)?;
    let mut checks = continuity_checks(&out.density, 1);
    if ring.is_polynomial() {
        fail_on(&checks, "ordinary density")?;
    } else {
        // Jumps in a non-domain are reported, not rejected.
        for c in &mut checks {
            c.name = format!("{} (informational)", c.name);
        }
    }
    out.checks = checks;
    Ok(out)
}

/// `f` for the ordinary powers of `i`.
pub fn ordinary_density(
    ring: &RingDescriptor,
    i: &MonomialIdeal,
    opts: &DensityOptions,
) -> Result<PiecewisePolynomial> {
    Ok(ordinary_computation(ring, i, opts)?.density)
}

fn extend_members(spec: &mut FiltrationSpec, upto: u32) {
    while spec.members.len() <= upto as usize {
        let n = spec.members.len() as u32;
        spec.members.push(saturate_maximal(&ideal_power(&spec.base, n)));
    }
}

/// Bidegrees `(deg g, n)` of algebra generators of `⊕ Iₙ tⁿ` for `n ≤ upto`:
/// generators of `Iₙ` not in any product `I_a · I_{n-a}`, one entry per generator.
pub fn harvest_bidegrees(members: &[MonomialIdeal], upto: u32) -> Result<Vec<(u32, u32)>> {
    let upto = upto.min(members.len().saturating_sub(1) as u32);
    let found: Vec<Vec<(u32, u32)>> = (1..=upto)
        .into_par_iter()
        .map(|n| {
            let mut products = Vec::new();
            for a in 1..=n / 2 {
                products.push(ideal_product(&members[a as usize], &members[(n - a) as usize])?);
            }
            let mut out: Vec<(u32, u32)> = members[n as usize]
                .generators()
                .iter()
                .filter(|g| !products.iter().any(|p| p.contains(g)))
                .map(|g| (g.degree(), n))
                .collect();
            out.sort_unstable();
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

fn harvest_window(spec: &FiltrationSpec, opts: &DensityOptions) -> u32 {
    match spec.stabilization {
        Some(s) => s.c * opts.k_max.max(2),
        None => opts.n_max.min(4 * opts.k_max.max(2)),
    }
}

/// The saturated filtration record and the generator bidegrees of its Rees algebra.
pub fn detect_and_harvest(i: &MonomialIdeal, opts: &DensityOptions) -> Result<(FiltrationSpec, Vec<(u32, u32)>)> {
    let mut spec = detect_saturation_stabilization(i, opts.n_max.max(2))?;
    let window = harvest_window(&spec, opts);
    extend_members(&mut spec, window);
    let columns = harvest_bidegrees(&spec.members, window)?;
    Ok((spec, columns))
}

/// The density of the saturated powers `{(Iⁿ)~}` with its provenance.
pub fn saturated_computation(
    ring: &RingDescriptor,
    i: &MonomialIdeal,
    opts: &DensityOptions,
) -> Result<SaturatedComputation> {
    check_input(ring, i)?;
    if !ring.is_polynomial() {
        return Err(Error::InvalidInput(
            "saturated densities need a polynomial ambient ring".into(),
        ));
    }
    let d = dimension(ring);
    let mut spec = detect_saturation_stabilization(i, opts.n_max.max(2))?;
    let unverified = spec.stabilization.is_none();
    let base_window = harvest_window(&spec, opts);
    let mut last_err = None;
    for window in [base_window, 2 * base_window] {
        extend_members(&mut spec, window);
        let columns = harvest_bidegrees(&spec.members, window)?;
        let matrix = VPMatrix::new(ring.var_count() as u32, columns)?;
        let oracle = LengthOracle::new(ring, spec.clone())?;
        match assemble(&oracle, &matrix, d, opts) {
            Ok(mut inner) => {
                let mut checks = continuity_checks(&inner.density, 0);
                fail_on(&checks, "saturated density")?;
                checks.extend(smoothness_checks(&inner.density));
                if unverified {
                    checks.push(Check::new(
                        "stabilization",
                        false,
                        format!("none found up to n = {}; pieces rest on the sampled window", opts.n_max),
                    ));
                }
                inner.checks = checks;
                return Ok(SaturatedComputation {
                    inner,
                    spec,
                    harvest_window: window,
                    unverified,
                });
            }
            Err(e @ (Error::FitFailure { .. } | Error::Structural(_))) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.expect("at least one attempt"))
}

/// One-sided derivatives agree at every breakpoint beyond the first.
fn smoothness_checks(f: &PiecewisePolynomial) -> Vec<Check> {
    f.breakpoints
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, b)| {
            let left = b.eval_poly(&f.pieces[k].derivative());
            let right = b.eval_poly(&f.pieces[k + 1].derivative());
            Check::new(
                &format!("C1 at {b}"),
                left == right,
                format!("left derivative {left}, right derivative {right}"),
            )
        })
        .collect()
}

/// `f` for the saturated powers of `i`.
pub fn saturated_density(
    ring: &RingDescriptor,
    i: &MonomialIdeal,
    opts: &DensityOptions,
) -> Result<PiecewisePolynomial> {
    Ok(saturated_computation(ring, i, opts)?.inner.density)
}

/// `f_ε = f_sat - f_ord` and its integral.
#[derive(Debug, Clone)]
pub struct EpsilonComputation {
    pub density: PiecewisePolynomial,
    pub value: Rational,
    pub checks: Vec<Check>,
}

/// Combines already computed densities into the ε-density.
pub fn epsilon_from(
    saturated: &PiecewisePolynomial,
    ordinary: &PiecewisePolynomial,
    alpha: &Rational,
    opts: &DensityOptions,
) -> Result<EpsilonComputation> {
    let eps = saturated.sub(ordinary)?;
    let last = ordinary
        .breakpoints
        .last()
        .and_then(|b| b.as_rational().cloned())
        .ok_or_else(|| Error::Structural("ordinary density has no breakpoint".into()))?;
    if !eps.pieces.last().is_some_and(UniPoly::is_zero) {
        return Err(Error::Structural(format!(
            "saturated and ordinary tails differ: {}",
            eps.pieces.last().map(|p| p.pretty("x")).unwrap_or_default()
        )));
    }
    let mut checks = Vec::new();
    let grid = eps.samples(&opts.sample_step, &(&last + int(2)))?;
    if let Some((x, v)) = grid.iter().find(|(_, v)| v.signum() == Ordering::Less) {
        return Err(Error::Structural(format!("ε-density is negative at {x}: {v}")));
    }
    checks.push(Check::new("nonnegative", true, format!("{} samples", grid.len())));
    let outside = grid
        .iter()
        .find(|(x, v)| (x <= alpha || *x > last) && v.signum() != Ordering::Equal);
    if let Some((x, v)) = outside {
        return Err(Error::Structural(format!(
            "ε-density is nonzero at {x} = {v}, outside ({alpha}, {last}]"
        )));
    }
    checks.push(Check::new("support", true, format!("inside ({alpha}, {last}]")));
    let integral = eps.integrate(&QuadSurd::zero(), &QuadSurd::rational(last))?;
    let value = integral
        .as_rational()
        .cloned()
        .ok_or_else(|| Error::Structural(format!("ε = {integral} is irrational")))?;
    Ok(EpsilonComputation {
        density: eps,
        value,
        checks,
    })
}

pub fn epsilon_density(ring: &RingDescriptor, i: &MonomialIdeal, opts: &DensityOptions) -> Result<EpsilonComputation> {
    let (sat, ord) = rayon::join(
        || saturated_computation(ring, i, opts),
        || ordinary_computation(ring, i, opts),
    );
    let (sat, ord) = (sat?, ord?);
    let alpha = alpha_from(&sat.spec)?;
    epsilon_from(&sat.inner.density, &ord.density, &alpha.value, opts)
}

pub fn epsilon_value(ring: &RingDescriptor, i: &MonomialIdeal, opts: &DensityOptions) -> Result<Rational> {
    Ok(epsilon_density(ring, i, opts)?.value)
}

/// `ℓ((Iⁿ)~ / Iⁿ) · d! / n^d`, computed directly from the two ideals.
pub fn epsilon_sequence(ring: &RingDescriptor, i: &MonomialIdeal, ns: &[u32]) -> Result<Vec<(u32, Rational)>> {
    check_input(ring, i)?;
    if !ring.is_polynomial() {
        return Err(Error::InvalidInput("needs a polynomial ambient ring".into()));
    }
    let d = ring.var_count() as u32;
    ns.par_iter()
        .map(|&n| {
            let power = ideal_power(i, n);
            let sat = saturate_maximal(&power);
            let len = quotient_length(&sat, &power)?;
            let value = from_bigint(len * factorial(d)) / num_traits::pow(int(n as i64), d as usize);
            Ok((n, value))
        })
        .collect()
}

/// A rational invariant that may only be known approximately.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invariant {
    pub value: Rational,
    pub exact: bool,
    /// Range of `n` the value was read from.
    pub window: (u32, u32),
}

fn alpha_from(spec: &FiltrationSpec) -> Result<Invariant> {
    let top = spec.members.len() as u32 - 1;
    let fekete = (1..=top)
        .map(|n| Ok(rat(spec.members[n as usize].mindeg()? as i64, n as i64)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .min()
        .expect("at least one member");
    match spec.stabilization {
        Some(s) => {
            let value = rat(spec.members[s.c as usize].mindeg()? as i64, s.c as i64);
            if fekete != value {
                return Err(Error::Structural(format!(
                    "α = {value} from stabilization but inf mindeg/n = {fekete}"
                )));
            }
            Ok(Invariant {
                value,
                exact: true,
                window: (1, top),
            })
        }
        None => Ok(Invariant {
            value: fekete,
            exact: false,
            window: (1, top),
        }),
    }
}

fn beta_from(spec: &FiltrationSpec) -> Result<Invariant> {
    let top = spec.members.len() as u32 - 1;
    let maxdeg = |n: u32| -> Result<i64> { Ok(spec.members[n as usize].maxdeg()? as i64) };
    let estimate = Invariant {
        value: rat(maxdeg(top)?, top as i64),
        exact: false,
        window: (1, top),
    };
    let Some(s) = spec.stabilization else {
        return Ok(estimate);
    };
    // Fit an+b per class n mod c on [lo, mid], validate on (mid, top].
    let c = s.c;
    let mid = top / 2;
    let lo = (mid / 2).max(c);
    let mut slope: Option<Rational> = None;
    for class in 0..c {
        let fit: Vec<u32> = (lo..=mid).filter(|n| n % c == class).collect();
        if fit.len() < 2 {
            return Ok(estimate);
        }
        let (n0, n1) = (fit[0], *fit.last().unwrap());
        let (y0, y1) = (maxdeg(n0)?, maxdeg(n1)?);
        let a = rat(y1 - y0, (n1 - n0) as i64);
        let b = int(y0) - &a * int(n0 as i64);
        let all_fit = (n0..=top)
            .filter(|n| n % c == class)
            .map(|n| Ok(&a * int(n as i64) + &b == int(maxdeg(n)?)))
            .collect::<Result<Vec<bool>>>()?;
        if all_fit.contains(&false) || slope.as_ref().is_some_and(|s| *s != a) {
            return Ok(estimate);
        }
        slope = Some(a);
    }
    Ok(Invariant {
        value: slope.expect("c ≥ 1"),
        exact: true,
        window: (lo, top),
    })
}

/// `α = lim mindeg((Iⁿ)~)/n`.
pub fn alpha_invariant(ring: &RingDescriptor, i: &MonomialIdeal, opts: &DensityOptions) -> Result<Invariant> {
    check_input(ring, i)?;
    alpha_from(&detect_saturation_stabilization(i, opts.n_max.max(2))?)
}

/// `β = lim maxdeg((Iⁿ)~)/n`; exact only when the linear tail validates on
/// a window twice as deep as the one it was read from.
pub fn beta_invariant(ring: &RingDescriptor, i: &MonomialIdeal, opts: &DensityOptions) -> Result<Invariant> {
    check_input(ring, i)?;
    beta_from(&detect_saturation_stabilization(i, opts.n_max.max(2))?)
}

/// Multiplicity of the diagonal subalgebra `⊕ (I^{qn})_{pn}`, read from an
/// ordinary density computed with the same ideal.
pub fn diagonal_multiplicity_from(ordinary: &PiecewisePolynomial, p: i64, q: i64) -> Result<Rational> {
    if p < 1 || q < 1 {
        return Err(Error::InvalidInput(format!("diagonal ({p},{q}) needs p, q ≥ 1")));
    }
    let d = ordinary.dim;
    let value = ordinary.eval_rational(&rat(p, q))?;
    Ok(num_traits::pow(int(q), d.saturating_sub(1) as usize) * value / int(d as i64))
}

pub fn diagonal_multiplicity(
    ring: &RingDescriptor,
    i: &MonomialIdeal,
    p: i64,
    q: i64,
    opts: &DensityOptions,
) -> Result<Rational> {
    diagonal_multiplicity_from(&ordinary_density(ring, i, opts)?, p, q)
}

/// Intersection numbers `(H^{d-1-i} · E^i)` and mixed multiplicities
/// `e_i(A[It])`, both indexed by `i = 0..d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedMultiplicities {
    pub intersection_numbers: Vec<BigInt>,
    pub mixed: Vec<BigInt>,
}

/// Solves the last-chamber piece for the intersection numbers.
pub fn mixed_from_last_piece(piece: &UniPoly, d: u32) -> Result<MixedMultiplicities> {
    if d == 0 {
        return Err(Error::InvalidInput("dimension 0 has no mixed multiplicities".into()));
    }
    if piece.degree().is_some_and(|deg| deg + 1 > d as usize) {
        return Err(Error::Structural(format!(
            "last piece {} has degree ≥ d",
            piece.pretty("x")
        )));
    }
    let dfact = from_bigint(factorial(d));
    let mut numbers = Vec::with_capacity(d as usize);
    for i in 0..d {
        let k = d - 1 - i;
        let coeff = piece.coeff(k as usize);
        let scale = &dfact / from_bigint(factorial(k) * factorial(i));
        let sign = if i % 2 == 0 { int(1) } else { int(-1) };
        let n = coeff / (scale * sign);
        if !is_integer(&n) {
            return Err(Error::Structural(format!(
                "intersection number (H^{k}·E^{i}) = {n} is not an integer"
            )));
        }
        numbers.push(n.to_integer());
    }
    let mixed = (0..d as usize)
        .map(|i| {
            let v = numbers[d as usize - 1 - i].clone();
            if (d as usize - 1 - i).is_multiple_of(2) {
                v
            } else {
                -v
            }
        })
        .collect();
    Ok(MixedMultiplicities {
        intersection_numbers: numbers,
        mixed,
    })
}

pub fn mixed_multiplicities(
    ring: &RingDescriptor,
    i: &MonomialIdeal,
    opts: &DensityOptions,
) -> Result<MixedMultiplicities> {
    let f = ordinary_density(ring, i, opts)?;
    mixed_from_last_piece(f.pieces.last().expect("nonempty"), f.dim)
}

/// Comparison of the densities of `I` and of its integral closure.
#[derive(Debug, Clone)]
pub struct ClosureReport {
    pub closure: MonomialIdeal,
    pub ordinary_equal: bool,
    /// `None` when the saturated densities were not computable.
    pub saturated_equal: Option<bool>,
    pub details: Vec<String>,
}

impl ClosureReport {
    pub fn passed(&self) -> bool {
        self.ordinary_equal && self.saturated_equal != Some(false)
    }
}

/// Equal as functions away from breakpoints: every piece of the difference vanishes.
pub fn agree_off_breakpoints(f: &PiecewisePolynomial, g: &PiecewisePolynomial) -> Result<bool> {
    Ok(f.sub(g)?.pieces.iter().all(UniPoly::is_zero))
}

pub fn closure_invariance_check(
    ring: &RingDescriptor,
    i: &MonomialIdeal,
    opts: &DensityOptions,
) -> Result<ClosureReport> {
    check_input(ring, i)?;
    if !ring.is_polynomial() {
        return Err(Error::InvalidInput("needs a polynomial ambient ring".into()));
    }
    let j = integral_closure(i)?;
    let mut details = Vec::new();
    let (fi, fj) = rayon::join(|| ordinary_density(ring, i, opts), || ordinary_density(ring, &j, opts));
    let (fi, fj) = (fi?, fj?);
    let ordinary_equal = agree_off_breakpoints(&fi, &fj)?;
    if !ordinary_equal {
        details.push(format!(
            "ordinary densities differ:\n{}\nvs\n{}",
            fi.pretty(),
            fj.pretty()
        ));
    }
    let (si, sj) = rayon::join(
        || saturated_density(ring, i, opts),
        || saturated_density(ring, &j, opts),
    );
    let saturated_equal = match (si, sj) {
        (Ok(si), Ok(sj)) => {
            let eq = agree_off_breakpoints(&si, &sj)?;
            if !eq {
                details.push(format!(
                    "saturated densities differ:\n{}\nvs\n{}",
                    si.pretty(),
                    sj.pretty()
                ));
            }
            Some(eq)
        }
        (Err(e), _) | (_, Err(e)) => {
            details.push(format!("saturated densities unavailable: {e}"));
            None
        }
    };
    Ok(ClosureReport {
        closure: j,
        ordinary_equal,
        saturated_equal,
        details,
    })
}

/// Closed-form saturated densities used as fixtures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Fixture {
    /// `0` on `[0, s]`, `3(x² - s²)` beyond.
    Nagata(Rational),
    /// `0` on `[0, (6+√3)/33]`, `18(33x² - 12x + 1)` beyond.
    Cutkosky,
}

pub fn reference_fixture(which: &Fixture) -> Result<PiecewisePolynomial> {
    match which {
        Fixture::Nagata(s) => {
            if *s < int(4) {
                return Err(Error::InvalidInput(format!("nagata fixture needs s ≥ 4, got {s}")));
            }
            let piece = UniPoly::new(vec![-int(3) * s * s, int(0), int(3)]);
            PiecewisePolynomial::new(vec![QuadSurd::rational(s.clone())], vec![UniPoly::zero(), piece], 3)
        }
        Fixture::Cutkosky => {
            let b = QuadSurd::from_integers(6, 1, 3, 33)?;
            let piece = UniPoly::from_i64(&[18, -216, 594]);
            PiecewisePolynomial::new(vec![b], vec![UniPoly::zero(), piece], 3)
        }
    }
}

/// Everything computable about one ideal.
#[derive(Debug, Clone)]
pub struct DensityReport {
    pub dim: u32,
    pub ordinary: DensityComputation,
    pub saturated: Option<SaturatedComputation>,
    pub epsilon: Option<EpsilonComputation>,
    pub alpha: Option<Invariant>,
    pub beta: Option<Invariant>,
    pub mixed: MixedMultiplicities,
    /// Diagonal multiplicities at the breakpoints of the ordinary density.
    pub diagonal: Vec<(Rational, Rational)>,
    pub checks: Vec<Check>,
}

/// Log-concavity bound `f(y)^{1/(d-1)} ≥ f(x)^{1/(d-1)} + (y-x)(d e₀)^{1/(d-1)}`
/// for `α < x < y` on the grid; exact for `d ≤ 3`.
pub fn log_concavity_check(f: &PiecewisePolynomial, alpha: &Rational, to: &Rational, step: &Rational) -> Result<Check> {
    let d = f.dim;
    if d < 2 {
        return Ok(Check::new("log-concavity", true, "vacuous for d < 2"));
    }
    let k = int(d as i64); // d · e₀ with e₀ = 1
    let grid: Vec<(Rational, Rational)> = f
        .samples(step, to)?
        .into_iter()
        .filter(|(x, _)| x > alpha)
        .map(|(x, v)| {
            Ok((
                x,
                v.as_rational()
                    .cloned()
                    .ok_or_else(|| Error::InvalidInput("irrational sample".into()))?,
            ))
        })
        .collect::<Result<_>>()?;
    for (a, (x, fx)) in grid.iter().enumerate() {
        for (y, fy) in &grid[a + 1..] {
            let t = y - x;
            let ok = match d {
                2 => *fy >= fx + &t * &k,
                3 => {
                    let l = fy - fx - &t * &t * &k;
                    l >= Rational::zero() && &l * &l >= int(4) * &t * &t * fx * &k
                }
                _ => {
                    let e = 1.0 / (d as f64 - 1.0);
                    let lhs = to_f64(fy).powf(e);
                    let rhs = to_f64(fx).powf(e) + to_f64(&t) * to_f64(&k).powf(e);
                    lhs >= rhs - 1e-9 * rhs.abs().max(1.0)
                }
            };
            if !ok {
                return Ok(Check::new(
                    "log-concavity",
                    false,
                    format!("fails for x = {x}, y = {y}"),
                ));
            }
        }
    }
    Ok(Check::new("log-concavity", true, format!("{} grid points", grid.len())))
}

fn report_checks(
    ord: &DensityComputation,
    sat: &SaturatedComputation,
    alpha: &Invariant,
    beta: &Invariant,
    eps: &EpsilonComputation,
    opts: &DensityOptions,
) -> Result<Vec<Check>> {
    let f_ord = &ord.density;
    let f_sat = &sat.inner.density;
    let d1 = f_ord.breakpoints[0].as_rational().cloned().expect("rational");
    let dl = f_ord
        .breakpoints
        .last()
        .and_then(|b| b.as_rational().cloned())
        .expect("rational");
    let to = &dl + int(2);
    let mut checks = Vec::new();
    let samples_sat = f_sat.samples(&opts.sample_step, &to)?;
    let samples_ord = f_ord.samples(&opts.sample_step, &to)?;
    let dominated = samples_sat
        .iter()
        .zip(&samples_ord)
        .find(|((_, s), (_, o))| s.try_cmp(o).map(|c| c == Ordering::Less).unwrap_or(true));
    checks.push(Check::new(
        "dominance",
        dominated.is_none(),
        dominated.map_or("f_sat ≥ f_ord on the grid".to_string(), |((x, _), _)| {
            format!("fails at {x}")
        }),
    ));
    let increasing: Vec<&(Rational, QuadSurd)> = samples_sat.iter().filter(|(x, _)| *x > alpha.value).collect();
    let bad = increasing
        .windows(2)
        .find(|w| w[0].1.try_cmp(&w[1].1).map(|c| c != Ordering::Less).unwrap_or(true));
    checks.push(Check::new(
        "strictly increasing",
        bad.is_none(),
        bad.map_or(format!("on the grid beyond α = {}", alpha.value), |w| {
            format!("fails at {}", w[0].0)
        }),
    ));
    checks.push(log_concavity_check(f_sat, &alpha.value, &to, &opts.sample_step)?);
    let tail = f_sat.pieces.last() == f_ord.pieces.last();
    checks.push(Check::new("tail agreement", tail, "last pieces of f_sat and f_ord"));
    checks.push(Check::new(
        "α ≤ d₁",
        alpha.value <= d1,
        format!("α = {}, d₁ = {d1}", alpha.value),
    ));
    checks.push(Check::new(
        "β ≤ d_l",
        beta.value <= dl,
        format!("β = {}, d_l = {dl}", beta.value),
    ));
    let degs = &sat.spec.base;
    if degs.generator_degrees().len() == 1 && eps.value.is_positive() && alpha.exact {
        let bound = num_traits::pow(&dl - &alpha.value, f_ord.dim as usize);
        checks.push(Check::new(
            "equal-degree bound",
            eps.value >= bound,
            format!("ε = {} ≥ (d_l - α)^d = {bound}", eps.value),
        ));
    }
    Ok(checks)
}

pub fn density_report(ring: &RingDescriptor, i: &MonomialIdeal, opts: &DensityOptions) -> Result<DensityReport> {
    check_input(ring, i)?;
    let want_sat = ring.is_polynomial();
    let (ord, sat) = rayon::join(
        || ordinary_computation(ring, i, opts),
        || want_sat.then(|| saturated_computation(ring, i, opts)),
    );
    let ord = ord?;
    let sat = sat.transpose()?;
    let mixed = mixed_from_last_piece(ord.density.pieces.last().expect("nonempty"), ord.density.dim)?;
    let diagonal = ord
        .density
        .breakpoints
        .iter()
        .filter_map(|b| b.as_rational().cloned())
        .map(|b| {
            let e = diagonal_multiplicity_from(
                &ord.density,
                b.numer().to_i64().unwrap_or(0),
                b.denom().to_i64().unwrap_or(1),
            )?;
            Ok((b, e))
        })
        .collect::<Result<Vec<_>>>()?;
    let (mut alpha, mut beta, mut epsilon, mut checks) = (None, None, None, Vec::new());
    if let Some(sat) = &sat {
        let a = alpha_from(&sat.spec)?;
        let b = beta_from(&sat.spec)?;
        let e = epsilon_from(&sat.inner.density, &ord.density, &a.value, opts)?;
        checks = report_checks(&ord, sat, &a, &b, &e, opts)?;
        alpha = Some(a);
        beta = Some(b);
        epsilon = Some(e);
    }
    Ok(DensityReport {
        dim: ord.density.dim,
        ordinary: ord,
        saturated: sat,
        epsilon,
        alpha,
        beta,
        mixed,
        diagonal,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::Monomial;
    use num_traits::One;

    fn xyz() -> Vec<String> {
        vec!["X".into(), "Y".into(), "Z".into()]
    }

    fn ideal(vars: &[String], gens: &[&str]) -> MonomialIdeal {
        MonomialIdeal::from_generators(
            vars.len(),
            gens.iter().map(|g| Monomial::parse(g, vars).unwrap()).collect(),
        )
        .unwrap()
    }

    fn poly_ring() -> RingDescriptor {
        RingDescriptor::with_vars(xyz(), None).unwrap()
    }

    fn pieces(f: &PiecewisePolynomial) -> Vec<String> {
        f.pieces.iter().map(|p| p.pretty("x")).collect()
    }

    fn opts() -> DensityOptions {
        DensityOptions {
            n_max: 12,
            ..DensityOptions::default()
        }
    }

    #[test]
    fn ordinary_density_of_three_pure_powers() {
        let f = ordinary_density(&poly_ring(), &ideal(&xyz(), &["X", "Y^2", "Z^3"]), &opts()).unwrap();
        assert_eq!(pieces(&f), ["0", "9x^2 - 18x + 9", "18x - 27", "3x^2"]);
        assert_eq!(f.eval(&int(1)), QuadSurd::zero());
        assert!(f.breakpoint_checks().iter().skip(1).all(|c| c.is_continuous()));
    }

    #[test]
    fn jump_at_the_first_breakpoint() {
        for d in 2..=3usize {
            let ring = RingDescriptor::polynomial(d).unwrap();
            let vars = ring.vars().to_vec();
            let gens: Vec<String> = vars.iter().map(|v| format!("{v}^2")).collect();
            let gens: Vec<&str> = gens.iter().map(String::as_str).collect();
            let f = ordinary_density(&ring, &ideal(&vars, &gens), &opts()).unwrap();
            assert_eq!(f.breakpoints, vec![QuadSurd::rational(int(2))]);
            assert_eq!(f.eval(&int(2)), QuadSurd::rational(int(d as i64)));
            assert!(f.pieces[0].is_zero());
            assert_eq!(f.pieces[1], UniPoly::monomial(int(d as i64), d - 1));
        }
    }

    #[test]
    fn step_function_in_a_one_dimensional_quotient() {
        let q = ideal(&xyz(), &["X*Y", "Y*Z", "Z*X"]);
        let ring = RingDescriptor::with_vars(xyz(), Some(q)).unwrap();
        let comp = ordinary_computation(&ring, &ideal(&xyz(), &["X", "Y^2", "Z^3"]), &opts()).unwrap();
        let f = &comp.density;
        assert_eq!(pieces(f), ["0", "1", "2", "3"]);
        let values: Vec<Rational> = (1..=3).map(|x| f.eval_rational(&int(x)).unwrap()).collect();
        assert_eq!(values, [int(1), int(2), int(3)]);
        assert!(comp.checks.iter().all(|c| !c.passed));
    }

    #[test]
    fn saturated_density_with_one_stabilization_step() {
        let i = ideal(&xyz(), &["X^2*Y^3", "X^3*Y^2", "X*Y^2*Z^4", "X*Y^3*Z^3"]);
        let comp = saturated_computation(&poly_ring(), &i, &opts()).unwrap();
        assert_eq!(comp.stabilization().unwrap().c, 1);
        assert_eq!(
            pieces(&comp.inner.density),
            ["0", "(9/2)x^2 - 36x + 72", "3x^2 - 18x + 18"]
        );
        assert!(comp.inner.checks.iter().all(|c| c.passed), "{:?}", comp.inner.checks);
        assert_eq!(alpha_from(&comp.spec).unwrap().value, int(4));
    }

    #[test]
    fn edge_ideal_epsilon_and_invariants() {
        let i = ideal(&xyz(), &["X*Y", "Y*Z", "Z*X"]);
        let report = density_report(&poly_ring(), &i, &opts()).unwrap();
        let sat = report.saturated.as_ref().unwrap();
        assert_eq!(pieces(&sat.inner.density), ["0", "12x^2 - 36x + 27", "3x^2 - 9"]);
        let eps = report.epsilon.as_ref().unwrap();
        assert_eq!(eps.value, rat(1, 2));
        assert_eq!(pieces(&eps.density), ["0", "12x^2 - 36x + 27", "0"]);
        assert_eq!(report.alpha.as_ref().unwrap().value, rat(3, 2));
        let beta = report.beta.as_ref().unwrap();
        assert_eq!((beta.value.clone(), beta.exact), (int(2), true));
        let want: Vec<BigInt> = [1, 0, -3].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(report.mixed.intersection_numbers, want);
        assert!(report.checks.iter().all(|c| c.passed), "{:?}", report.checks);
    }

    #[test]
    fn primary_ideal_has_full_saturated_density() {
        let ring = RingDescriptor::polynomial(2).unwrap();
        let i = ideal(ring.vars(), &["x1^2", "x2^2"]);
        let sat = saturated_density(&ring, &i, &opts()).unwrap();
        assert!(sat.breakpoints.is_empty());
        assert_eq!(sat.pieces[0], UniPoly::from_i64(&[0, 2]));
        // ε of a primary ideal is its multiplicity, here 4.
        let eps = epsilon_value(&ring, &i, &opts()).unwrap();
        assert_eq!(eps, int(4));
    }

    #[test]
    fn principal_ideal_invariants() {
        let ring = RingDescriptor::polynomial(2).unwrap();
        let i = ideal(ring.vars(), &["x1"]);
        assert_eq!(alpha_invariant(&ring, &i, &opts()).unwrap().value, int(1));
        let b = beta_invariant(&ring, &i, &opts()).unwrap();
        assert_eq!((b.value, b.exact), (int(1), true));
    }

    #[test]
    fn diagonal_multiplicities() {
        let i = ideal(&xyz(), &["X", "Y^2", "Z^3"]);
        let f = ordinary_density(&poly_ring(), &i, &opts()).unwrap();
        assert_eq!(diagonal_multiplicity_from(&f, 5, 2).unwrap(), int(24));
        assert_eq!(diagonal_multiplicity_from(&f, 1, 2).unwrap(), int(0));
        assert!(diagonal_multiplicity_from(&f, 0, 2).is_err());
    }

    #[test]
    fn mixed_multiplicities_from_last_piece() {
        let m = mixed_from_last_piece(&UniPoly::from_i64(&[0, 0, 3]), 3).unwrap();
        let want: Vec<BigInt> = [1, 0, 0].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(m.intersection_numbers, want);
        assert_eq!(m.mixed[2], BigInt::one());
        assert!(mixed_from_last_piece(&UniPoly::from_i64(&[1, 0, 1]), 3).is_err());
    }

    #[test]
    fn closure_invariance_on_pure_squares() {
        let ring = RingDescriptor::polynomial(2).unwrap();
        let i = ideal(ring.vars(), &["x1^2", "x2^2"]);
        let r = closure_invariance_check(&ring, &i, &opts()).unwrap();
        assert_eq!(r.closure.len(), 3);
        assert!(r.passed(), "{:?}", r.details);
    }

    #[test]
    fn fixtures() {
        let n = reference_fixture(&Fixture::Nagata(int(4))).unwrap();
        assert_eq!(n.eval(&int(5)), QuadSurd::rational(int(27)));
        assert!(n.breakpoint_checks()[0].is_continuous());
        assert!(reference_fixture(&Fixture::Nagata(int(3))).is_err());
        let c = reference_fixture(&Fixture::Cutkosky).unwrap();
        assert_eq!(c.breakpoints[0].to_string(), "(6 + √3)/33");
        assert!(c.breakpoint_checks()[0].is_continuous());
    }
}
