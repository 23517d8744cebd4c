//! JSON input parsing and the JSON/CSV output schema.
//!
//! Rationals are written as `"p/q"` strings, quadratic surds as
//! `{"a", "b", "c", "q"}` with value `(a + b√c)/q`. Object keys are sorted,
//! so identical results serialize to identical bytes.

use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::density::{
    ChamberRecord, Check, ClosureReport, DensityComputation, DensityReport, EpsilonComputation, Invariant,
    MixedMultiplicities, PointRecord, SaturatedComputation,
};
use crate::error::{Error, Result};
use crate::ideal::MonomialIdeal;
use crate::monomial::Monomial;
use crate::piecewise::PiecewisePolynomial;
use crate::poly::UniPoly;
use crate::ring::RingDescriptor;
use crate::scalar::{format_rational, to_decimal_string, Rational};
use crate::surd::QuadSurd;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct IdealInput {
    vars: Vec<String>,
    gens: Vec<String>,
    #[serde(default)]
    quotient: Option<Vec<String>>,
}

fn parse_monomials(texts: &[String], vars: &[String]) -> Result<Vec<Monomial>> {
    texts.iter().map(|t| Monomial::parse(t, vars)).collect()
}

/// Parses `{"vars": [...], "gens": [...], "quotient": [...]?}`.
pub fn parse_ideal(text: &str) -> Result<(RingDescriptor, MonomialIdeal)> {
    let input: IdealInput = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if input.gens.is_empty() {
        return Err(Error::InvalidInput("gens must not be empty".into()));
    }
    let n = input.vars.len();
    let quotient = match &input.quotient {
        Some(q) if !q.is_empty() => Some(MonomialIdeal::from_generators(n, parse_monomials(q, &input.vars)?)?),
        _ => None,
    };
    let ring = RingDescriptor::with_vars(input.vars.clone(), quotient)?;
    let ideal = MonomialIdeal::from_generators(n, parse_monomials(&input.gens, &input.vars)?)?;
    Ok((ring, ideal))
}

/// Inverse of [`parse_ideal`].
pub fn ideal_to_json(ring: &RingDescriptor, i: &MonomialIdeal) -> Value {
    let mut obj = Map::new();
    obj.insert("vars".into(), json!(ring.vars()));
    obj.insert("gens".into(), json!(i.generator_strings(ring.vars())));
    if let Some(q) = ring.quotient() {
        obj.insert("quotient".into(), json!(q.generator_strings(ring.vars())));
    }
    Value::Object(obj)
}

pub fn rational_json(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

/// A value that may be irrational.
pub fn surd_json(s: &QuadSurd) -> Value {
    match s.as_rational() {
        Some(r) => json!({"type": "rat", "value": format_rational(r)}),
        None => {
            let (a, b, c, q) = s.to_integers();
            json!({"type": "surd", "a": a.to_string(), "b": b.to_string(), "c": c, "q": q.to_string()})
        }
    }
}

pub fn poly_json(p: &UniPoly) -> Value {
    Value::Array(p.coeffs().iter().map(rational_json).collect())
}

pub fn piecewise_json(f: &PiecewisePolynomial) -> Value {
    let pieces: Vec<Value> = f
        .intervals()
        .into_iter()
        .map(|(start, end, p)| {
            json!({
                "interval": [surd_json(&start), end.as_ref().map_or(Value::Null, surd_json)],
                "coeffs": poly_json(p),
                "pretty": p.pretty("x"),
            })
        })
        .collect();
    json!({
        "dim": f.dim,
        "scale": f.scale_factor().to_string(),
        "breakpoints": f.breakpoints.iter().map(surd_json).collect::<Vec<_>>(),
        "pieces": pieces,
        "point_values": f.point_values.iter().map(surd_json).collect::<Vec<_>>(),
    })
}

pub fn checks_json(checks: &[Check]) -> Value {
    Value::Array(
        checks
            .iter()
            .map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail}))
            .collect(),
    )
}

fn chamber_json(c: &ChamberRecord) -> Value {
    json!({
        "lower_slope": rational_json(&c.lower_slope),
        "upper_slope": c.upper_slope.as_ref().map_or(Value::Null, rational_json),
        "lattice_index": c.lattice_index,
        "distinct_cosets": c.distinct_cosets,
        "offset_step": c.offset_step,
        "offset": [rational_json(&c.offset.0), rational_json(&c.offset.1)],
        "n_range": [c.n_range.0, c.n_range.1],
        "holdout_verified": c.holdout_verified,
    })
}

fn point_json(p: &PointRecord) -> Value {
    json!({
        "at": rational_json(&p.at),
        "period": p.period,
        "start": p.start,
        "diagonal_multiplicity": rational_json(&p.multiplicity),
    })
}

pub fn computation_provenance(c: &DensityComputation) -> Value {
    json!({
        "r": c.r,
        "columns": c.columns.iter().map(|&(a, b)| json!([a, b])).collect::<Vec<_>>(),
        "period": c.period,
        "chambers": c.chambers.iter().map(chamber_json).collect::<Vec<_>>(),
        "point_fits": c.points.iter().map(point_json).collect::<Vec<_>>(),
    })
}

pub fn computation_json(c: &DensityComputation) -> Value {
    json!({
        "density": piecewise_json(&c.density),
        "checks": checks_json(&c.checks),
        "provenance": computation_provenance(c),
    })
}

pub fn saturated_json(s: &SaturatedComputation) -> Value {
    let mut v = computation_json(&s.inner);
    let prov = v["provenance"].as_object_mut().expect("object");
    prov.insert(
        "stabilization".into(),
        s.stabilization().map_or(
            Value::Null,
            |st| json!({"c": st.c, "verified_up_to": st.verified_up_to}),
        ),
    );
    prov.insert("members_computed".into(), json!(s.spec.members.len() - 1));
    prov.insert("harvest_window".into(), json!(s.harvest_window));
    prov.insert("unverified".into(), json!(s.unverified));
    v
}

pub fn invariant_json(i: &Invariant) -> Value {
    json!({
        "value": rational_json(&i.value),
        "exact": i.exact,
        "window": [i.window.0, i.window.1],
    })
}

pub fn epsilon_json(e: &EpsilonComputation) -> Value {
    json!({
        "epsilon": rational_json(&e.value),
        "f_epsilon": piecewise_json(&e.density),
        "checks": checks_json(&e.checks),
    })
}

pub fn mixed_json(m: &MixedMultiplicities) -> Value {
    json!({
        "mixed": m.mixed.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        "intersection_numbers": m.intersection_numbers.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
    })
}

pub fn report_json(r: &DensityReport) -> Value {
    let opt = |v: Option<Value>| v.unwrap_or(Value::Null);
    let mut provenance = Map::new();
    provenance.insert("ordinary".into(), computation_provenance(&r.ordinary));
    if let Some(s) = &r.saturated {
        provenance.insert("saturated".into(), saturated_json(s)["provenance"].clone());
    }
    let mut checks: Vec<Check> = r.ordinary.checks.clone();
    if let Some(s) = &r.saturated {
        checks.extend(s.inner.checks.iter().cloned());
    }
    if let Some(e) = &r.epsilon {
        checks.extend(e.checks.iter().cloned());
    }
    checks.extend(r.checks.iter().cloned());
    let mixed = mixed_json(&r.mixed);
    json!({
        "dim": r.dim,
        "f_ordinary": piecewise_json(&r.ordinary.density),
        "f_saturated": opt(r.saturated.as_ref().map(|s| piecewise_json(&s.inner.density))),
        "f_epsilon": opt(r.epsilon.as_ref().map(|e| piecewise_json(&e.density))),
        "epsilon": opt(r.epsilon.as_ref().map(|e| rational_json(&e.value))),
        "alpha": opt(r.alpha.as_ref().map(invariant_json)),
        "beta": opt(r.beta.as_ref().map(invariant_json)),
        "mixed": mixed["mixed"].clone(),
        "intersection_numbers": mixed["intersection_numbers"].clone(),
        "diagonal": r.diagonal.iter().map(|(x, e)| json!({"at": rational_json(x), "multiplicity": rational_json(e)})).collect::<Vec<_>>(),
        "checks": checks_json(&checks),
        "provenance": Value::Object(provenance),
    })
}

pub fn closure_json(ring: &RingDescriptor, c: &ClosureReport) -> Value {
    json!({
        "closure": c.closure.generator_strings(ring.vars()),
        "ordinary_equal": c.ordinary_equal,
        "saturated_equal": c.saturated_equal,
        "passed": c.passed(),
        "details": c.details,
    })
}

pub fn error_json(e: &Error) -> Value {
    let kind = match e {
        Error::Dimension { .. } => "dimension",
        Error::ZeroIdeal { .. } => "zero_ideal",
        Error::ColonByZero => "colon_by_zero",
        Error::Parse { .. } => "parse",
        Error::InvalidInput(_) => "invalid_input",
        Error::RankDeficient(_) => "rank_deficient",
        Error::FitFailure { .. } => "fit_failure",
        Error::UnverifiedRegion { .. } => "unverified_region",
        Error::Structural(_) => "structural",
    };
    let mut v = json!({"error": kind, "message": e.to_string()});
    match e {
        Error::Parse { line, column, .. } => {
            v["line"] = json!(line);
            v["column"] = json!(column);
        }
        Error::UnverifiedRegion { n, verified_up_to } => {
            v["n"] = json!(n);
            v["verified_up_to"] = json!(verified_up_to);
        }
        Error::FitFailure { context, diagnostics } => {
            v["context"] = json!(context);
            v["diagnostics"] = json!(diagnostics);
        }
        _ => {}
    }
    v
}

/// `x,f_exact,f_approx12` rows; the decimal column is approximate.
pub fn samples_csv(samples: &[(Rational, QuadSurd)]) -> String {
    let mut out = String::from("x,f_exact,f_approx12\n");
    for (x, v) in samples {
        let approx = match v.as_rational() {
            Some(r) => to_decimal_string(r, 12),
            None => format!("{:.12e}", v.to_f64()),
        };
        out.push_str(&format!("{},{},{}\n", format_rational(x), v, approx));
    }
    out
}

/// Pretty JSON with a trailing newline.
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}
