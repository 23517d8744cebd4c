//! Ideal arithmetic on monomial ideals and saturation-filtration stabilization.

use crate::error::{Error, Result};
use crate::ideal::MonomialIdeal;
use crate::monomial::Monomial;

pub fn ideal_sum(i: &MonomialIdeal, j: &MonomialIdeal) -> Result<MonomialIdeal> {
    i.check_same(j)?;
    let gens = i.generators().iter().chain(j.generators()).cloned().collect();
    Ok(MonomialIdeal::from_generators_unchecked(i.nvars(), gens))
}

pub fn ideal_product(i: &MonomialIdeal, j: &MonomialIdeal) -> Result<MonomialIdeal> {
    i.check_same(j)?;
    Ok(product_unchecked(i, j))
}

fn product_unchecked(i: &MonomialIdeal, j: &MonomialIdeal) -> MonomialIdeal {
    let mut gens = Vec::with_capacity(i.len() * j.len());
    for g in i.generators() {
        for h in j.generators() {
            gens.push(g.mul_unchecked(h));
        }
    }
    MonomialIdeal::from_generators_unchecked(i.nvars(), gens)
}

/// `I^n` by repeated squaring; `I^0 = (1)`.
pub fn ideal_power(i: &MonomialIdeal, n: u32) -> MonomialIdeal {
    let mut result = MonomialIdeal::unit(i.nvars());
    let mut base = i.clone();
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            result = product_unchecked(&result, &base);
        }
        e >>= 1;
        if e > 0 {
            base = product_unchecked(&base, &base);
        }
    }
    result
}

pub fn ideal_intersect(i: &MonomialIdeal, j: &MonomialIdeal) -> Result<MonomialIdeal> {
    i.check_same(j)?;
    Ok(intersect_unchecked(i, j))
}

fn intersect_unchecked(i: &MonomialIdeal, j: &MonomialIdeal) -> MonomialIdeal {
    if i.is_unit() {
        return j.clone();
    }
    if j.is_unit() {
        return i.clone();
    }
    let mut gens = Vec::with_capacity(i.len() * j.len());
    for g in i.generators() {
        for h in j.generators() {
            gens.push(g.lcm_unchecked(h));
        }
    }
    MonomialIdeal::from_generators_unchecked(i.nvars(), gens)
}

/// `(I : h)` for a single monomial `h`.
pub fn colon_monomial(i: &MonomialIdeal, h: &Monomial) -> MonomialIdeal {
    let gens = i.generators().iter().map(|g| g.quotient_by_gcd(h)).collect();
    MonomialIdeal::from_generators_unchecked(i.nvars(), gens)
}

/// `(I : J) = ∩_{h ∈ gens(J)} (I : h)`.
pub fn ideal_colon(i: &MonomialIdeal, j: &MonomialIdeal) -> Result<MonomialIdeal> {
    i.check_same(j)?;
    if j.is_zero() {
        return Err(Error::ColonByZero);
    }
    let mut acc = MonomialIdeal::unit(i.nvars());
    for h in j.generators() {
        acc = intersect_unchecked(&acc, &colon_monomial(i, h));
    }
    Ok(acc)
}

/// `(I : J^∞)` by iterating the colon to a fixpoint.
pub fn saturate(i: &MonomialIdeal, j: &MonomialIdeal) -> Result<MonomialIdeal> {
    let mut k = i.clone();
    loop {
        let next = ideal_colon(&k, j)?;
        if next == k {
            return Ok(k);
        }
        k = next;
    }
}

/// `(I : 𝔪^∞)` computed as `∩_i (I : x_i^∞)`, where `(I : x_i^∞)` just sets
/// `x_i = 1` in every generator. Agrees with [`saturate`] against the maximal
/// ideal, and is much faster on large powers.
pub fn saturate_maximal(i: &MonomialIdeal) -> MonomialIdeal {
    if i.is_zero() || i.is_unit() {
        return i.clone();
    }
    let nvars = i.nvars();
    let mut parts: Vec<MonomialIdeal> = (0..nvars)
        .map(|v| {
            MonomialIdeal::from_generators_unchecked(nvars, i.generators().iter().map(|g| g.drop_var(v)).collect())
        })
        .collect();
    // Intersect small ideals first to keep intermediate candidate sets small.
    parts.sort_by_key(MonomialIdeal::len);
    let mut acc = MonomialIdeal::unit(nvars);
    for p in &parts {
        acc = intersect_unchecked(&acc, p);
    }
    acc
}

/// Minimal generators of the integral closure: the monomials whose exponent
/// vectors lie in the Newton polyhedron `conv(gens) + ℝ^v_{≥0}`.
///
/// A minimal generator `a` of the closure satisfies `a_i ≤ max_g g_i` for every
/// `i` (lowering a coordinate above that bound stays inside the polyhedron),
/// so the box `Π [0, max_g g_i]` holds all candidates.
pub fn integral_closure(i: &MonomialIdeal) -> Result<MonomialIdeal> {
    if i.is_zero() {
        return Err(Error::ZeroIdeal { op: "integral_closure" });
    }
    if i.is_unit() || i.len() == 1 {
        return Ok(i.clone());
    }
    let nvars = i.nvars();
    let bounds: Vec<u32> = (0..nvars)
        .map(|v| i.generators().iter().map(|g| g.exponents()[v]).max().unwrap_or(0))
        .collect();
    let newton = NewtonPolyhedron::new(i);
    let mut found = Vec::new();
    let mut point = vec![0u32; nvars];
    loop {
        let m = Monomial::new(point.clone());
        if i.contains(&m) || newton.contains(point.as_slice()) {
            found.push(m);
        }
        // Odometer increment over the box.
        let mut k = 0;
        loop {
            if k == nvars {
                return Ok(MonomialIdeal::from_generators_unchecked(nvars, found));
            }
            if point[k] < bounds[k] {
                point[k] += 1;
                break;
            }
            point[k] = 0;
            k += 1;
        }
    }
}

/// Exact membership in `conv(gens) + ℝ^v_{≥0}`.
///
/// Feasibility of `Σ λ_k g_k + s = a, Σ λ_k = 1, λ, s ≥ 0` is decided by
/// enumerating bases of the constraint matrix and solving each by Cramer's
/// rule in integer arithmetic: the system is feasible iff some basic solution
/// is nonnegative.
pub struct NewtonPolyhedron {
    nvars: usize,
    /// Columns of the `(v+1) × (s+v)` constraint matrix.
    columns: Vec<Vec<i128>>,
}

impl NewtonPolyhedron {
    pub fn new(i: &MonomialIdeal) -> Self {
        let nvars = i.nvars();
        let mut columns: Vec<Vec<i128>> = i
            .generators()
            .iter()
            .map(|g| {
                let mut c: Vec<i128> = g.exponents().iter().map(|&e| e as i128).collect();
                c.push(1);
                c
            })
            .collect();
        for v in 0..nvars {
            let mut c = vec![0i128; nvars + 1];
            c[v] = 1;
            columns.push(c);
        }
        NewtonPolyhedron { nvars, columns }
    }

    pub fn contains(&self, point: &[u32]) -> bool {
        let rows = self.nvars + 1;
        let mut rhs: Vec<i128> = point.iter().map(|&e| e as i128).collect();
        rhs.push(1);
        let ncols = self.columns.len();
        let mut subset: Vec<usize> = (0..rows).collect();
        if rows > ncols {
            return false;
        }
        loop {
            if self.basic_solution_nonnegative(&subset, &rhs) {
                return true;
            }
            // Next combination in lexicographic order.
            let mut k = rows;
            loop {
                if k == 0 {
                    return false;
                }
                k -= 1;
                if subset[k] < ncols - rows + k {
                    subset[k] += 1;
                    for t in k + 1..rows {
                        subset[t] = subset[t - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    fn basic_solution_nonnegative(&self, subset: &[usize], rhs: &[i128]) -> bool {
        let n = subset.len();
        let matrix = |replace: Option<usize>| -> Vec<Vec<i128>> {
            (0..n)
                .map(|r| {
                    (0..n)
                        .map(|c| {
                            if Some(c) == replace {
                                rhs[r]
                            } else {
                                self.columns[subset[c]][r]
                            }
                        })
                        .collect()
                })
                .collect()
        };
        let det = bareiss_det(matrix(None));
        if det == 0 {
            return false;
        }
        (0..n).all(|c| {
            let dc = bareiss_det(matrix(Some(c)));
            dc == 0 || (dc > 0) == (det > 0)
        })
    }
}

/// Determinant by fraction-free Gaussian elimination.
fn bareiss_det(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    if n == 0 {
        return 1;
    }
    sign * a[n - 1][n - 1]
}

/// Which family of ideals indexes the filtration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FiltrationKind {
    OrdinaryPowers,
    SaturatedPowers,
}

/// `I_{n+c} = I_n · I_c` was checked for `c ≤ n ≤ verified_up_to`;
/// `verified_up_to = None` means it holds for all `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stabilization {
    pub c: u32,
    pub verified_up_to: Option<u32>,
}

/// A filtration `{I_n}` together with whatever is known about its
/// finite generation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiltrationSpec {
    pub kind: FiltrationKind,
    pub base: MonomialIdeal,
    pub stabilization: Option<Stabilization>,
    /// Members `I_0, I_1, …` computed while detecting stabilization.
    pub members: Vec<MonomialIdeal>,
}

impl FiltrationSpec {
    pub fn ordinary(base: MonomialIdeal) -> Self {
        FiltrationSpec {
            kind: FiltrationKind::OrdinaryPowers,
            members: vec![MonomialIdeal::unit(base.nvars()), base.clone()],
            base,
            stabilization: Some(Stabilization {
                c: 1,
                verified_up_to: None,
            }),
        }
    }

    /// Largest `n` for which stabilization was checked (`u32::MAX` when proved).
    pub fn verified_up_to(&self) -> Option<u32> {
        self.stabilization.map(|s| s.verified_up_to.unwrap_or(u32::MAX))
    }
}

/// Finds the smallest `c ≤ n_max` with `Ĩ^{n+c} = Ĩ^n · Ĩ^c` for every
/// `c ≤ n ≤ n_max`, where `Ĩ^n` is the saturation of `I^n`. When no such `c`
/// exists the returned spec has no stabilization record.
pub fn detect_saturation_stabilization(i: &MonomialIdeal, n_max: u32) -> Result<FiltrationSpec> {
    if n_max < 2 {
        return Err(Error::InvalidInput("n_max must be at least 2".into()));
    }
    let mut members = vec![MonomialIdeal::unit(i.nvars())];
    let mut power = MonomialIdeal::unit(i.nvars());
    let mut extend_to = |members: &mut Vec<MonomialIdeal>, n: u32| {
        while members.len() <= n as usize {
            power = product_unchecked(&power, i);
            members.push(saturate_maximal(&power));
        }
    };
    for c in 1..=n_max {
        extend_to(&mut members, n_max + c);
        let ok = (c..=n_max).all(|n| {
            let lhs = &members[(n + c) as usize];
            // `Ĩ^n · Ĩ^c ⊆ Ĩ^{n+c}` always holds, so compare generator-wise.
            let rhs = product_unchecked(&members[n as usize], &members[c as usize]);
            *lhs == rhs
        });
        if ok {
            return Ok(FiltrationSpec {
                kind: FiltrationKind::SaturatedPowers,
                base: i.clone(),
                stabilization: Some(Stabilization {
                    c,
                    verified_up_to: Some(n_max),
                }),
                members,
            });
        }
    }
    Ok(FiltrationSpec {
        kind: FiltrationKind::SaturatedPowers,
        base: i.clone(),
        stabilization: None,
        members,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::monomials_of_degree;
    use proptest::prelude::*;

    fn xyz() -> Vec<String> {
        vec!["X".into(), "Y".into(), "Z".into()]
    }

    fn ideal(gens: &[&str]) -> MonomialIdeal {
        let v = xyz();
        MonomialIdeal::from_generators(3, gens.iter().map(|g| Monomial::parse(g, &v).unwrap()).collect()).unwrap()
    }

    fn names(i: &MonomialIdeal) -> Vec<String> {
        i.generator_strings(&xyz())
    }

    fn maximal() -> MonomialIdeal {
        MonomialIdeal::maximal(3)
    }

    fn four_generator_ideal() -> MonomialIdeal {
        ideal(&["X^2*Y^3", "X^3*Y^2", "X*Y^2*Z^4", "X*Y^3*Z^3"])
    }

    #[test]
    fn sums() {
        assert_eq!(names(&ideal_sum(&ideal(&["X"]), &ideal(&["Y"])).unwrap()), ["X", "Y"]);
        let i = four_generator_ideal();
        assert_eq!(ideal_sum(&i, &i).unwrap(), i);
        assert!(ideal_sum(&i, &MonomialIdeal::unit(3)).unwrap().is_unit());
    }

    #[test]
    fn products_and_powers() {
        let xy = ideal(&["X", "Y"]);
        assert_eq!(names(&ideal_power(&xy, 2)), ["X^2", "X*Y", "Y^2"]);
        assert!(ideal_power(&four_generator_ideal(), 0).is_unit());
        let edge = ideal(&["X*Y", "Y*Z", "Z*X"]);
        let sq = ideal_power(&edge, 2);
        let expected = ideal(&["X^2*Y^2", "X*Y^2*Z", "X^2*Y*Z", "X*Y*Z^2", "Y^2*Z^2", "X^2*Z^2"]);
        assert_eq!(sq, expected);
        // Definitional check: m ∈ I² iff m is divisible by a product of two generators.
        let pairs: Vec<Monomial> = edge
            .generators()
            .iter()
            .flat_map(|a| edge.generators().iter().map(move |b| a.mul_unchecked(b)))
            .collect();
        for d in 0..=5 {
            for m in monomials_of_degree(3, d) {
                assert_eq!(sq.contains(&m), pairs.iter().any(|p| p.divides_unchecked(&m)));
            }
        }
    }

    #[test]
    fn intersections() {
        assert_eq!(
            names(&ideal_intersect(&ideal(&["X"]), &ideal(&["Y"])).unwrap()),
            ["X*Y"]
        );
        let parts = [
            ideal(&["X"]),
            ideal(&["Y^2"]),
            ideal(&["X^2", "Z^3"]),
            ideal(&["X^3", "Y^3", "Z^4"]),
        ];
        let mut acc = MonomialIdeal::unit(3);
        for p in &parts {
            acc = ideal_intersect(&acc, p).unwrap();
        }
        assert_eq!(acc, four_generator_ideal());
        let i = four_generator_ideal();
        assert_eq!(ideal_intersect(&i, &MonomialIdeal::unit(3)).unwrap(), i);
    }

    #[test]
    fn colons() {
        assert_eq!(
            names(&ideal_colon(&ideal(&["X^2", "X*Y"]), &ideal(&["X"])).unwrap()),
            ["X", "Y"]
        );
        let i = four_generator_ideal();
        assert_eq!(ideal_colon(&i, &MonomialIdeal::unit(3)).unwrap(), i);
        let c = ideal_colon(&ideal(&["X^2*Y^2"]), &ideal(&["X*Y"])).unwrap();
        assert_eq!(names(&c), ["X*Y"]);
        // Definitional: m ∈ (I:J) iff m·XY ∈ I.
        let xy = ideal(&["X*Y"]).generators()[0].clone();
        for d in 0..=3 {
            for m in monomials_of_degree(3, d) {
                assert_eq!(c.contains(&m), ideal(&["X^2*Y^2"]).contains(&m.mul_unchecked(&xy)));
            }
        }
        assert_eq!(ideal_colon(&i, &MonomialIdeal::zero(3)), Err(Error::ColonByZero));
    }

    #[test]
    fn saturation_examples() {
        let sat = saturate(&four_generator_ideal(), &maximal()).unwrap();
        assert_eq!(names(&sat), ["X^2*Y^2", "X*Y^2*Z^3"]);
        assert_eq!(saturate_maximal(&four_generator_ideal()), sat);

        let edge = ideal(&["X*Y", "Y*Z", "Z*X"]);
        let sat2 = saturate(&ideal_power(&edge, 2), &maximal()).unwrap();
        assert_eq!(sat2, ideal(&["X^2*Y^2", "Y^2*Z^2", "Z^2*X^2", "X*Y*Z"]));
        assert_eq!(saturate_maximal(&ideal_power(&edge, 2)), sat2);

        let primary = ideal(&["X", "Y^2", "Z^3"]);
        assert!(saturate(&primary, &maximal()).unwrap().is_unit());
        assert!(saturate_maximal(&primary).is_unit());
    }

    #[test]
    fn closures() {
        let v = vec!["X".to_string(), "Y".to_string()];
        let sq = MonomialIdeal::from_generators(
            2,
            vec![Monomial::parse("X^2", &v).unwrap(), Monomial::parse("Y^2", &v).unwrap()],
        )
        .unwrap();
        let cl = integral_closure(&sq).unwrap();
        assert_eq!(cl.generator_strings(&v), ["X^2", "X*Y", "Y^2"]);
        // XY is integral: (XY)^2 ∈ (X^2, Y^2)^2.
        let xy = Monomial::parse("X*Y", &v).unwrap();
        assert!(ideal_power(&sq, 2).contains(&xy.pow(2)));

        assert_eq!(integral_closure(&ideal(&["X"])).unwrap(), ideal(&["X"]));
        let edge = ideal(&["X*Y", "Y*Z", "Z*X"]);
        assert_eq!(integral_closure(&edge).unwrap(), edge);
        assert!(integral_closure(&MonomialIdeal::zero(3)).is_err());
    }

    #[test]
    fn stabilization_examples() {
        let f = detect_saturation_stabilization(&four_generator_ideal(), 8).unwrap();
        assert_eq!(f.stabilization.unwrap().c, 1);
        let f = detect_saturation_stabilization(&ideal(&["X*Y", "Y*Z", "Z*X"]), 8).unwrap();
        assert_eq!(f.stabilization.unwrap().c, 2);
        let f = detect_saturation_stabilization(&ideal(&["X", "Y^2", "Z^3"]), 4).unwrap();
        assert_eq!(f.stabilization.unwrap().c, 1);
        assert!(f.members[3].is_unit());
    }

    #[test]
    fn mindeg_examples() {
        assert_eq!(four_generator_ideal().mindeg().unwrap(), 5);
        assert_eq!(four_generator_ideal().maxdeg().unwrap(), 7);
        assert_eq!(saturate_maximal(&four_generator_ideal()).mindeg().unwrap(), 4);
    }

    fn arb_ideal() -> impl Strategy<Value = MonomialIdeal> {
        prop::collection::vec(prop::collection::vec(0u32..4, 3), 1..5)
            .prop_map(|raw| MonomialIdeal::from_generators(3, raw.into_iter().map(Monomial::new).collect()).unwrap())
    }

    /// Definitional saturation: m ∈ Ĩ iff 𝔪^k·m ⊆ I for large k, i.e. iff
    /// x_i^k·m ∈ I for each variable, with k bounded by the generator degrees.
    fn in_saturation(i: &MonomialIdeal, m: &Monomial) -> bool {
        let k = i.maxdeg().unwrap_or(0);
        (0..3).all(|v| {
            let mut e = m.exponents().to_vec();
            e[v] += k;
            i.contains(&Monomial::new(e))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn power_is_additive(i in arb_ideal(), a in 0u32..4, b in 0u32..4) {
            let lhs = ideal_power(&i, a + b);
            let rhs = ideal_product(&ideal_power(&i, a), &ideal_power(&i, b)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn saturation_properties(i in arb_ideal()) {
            let s = saturate(&i, &maximal()).unwrap();
            prop_assert!(i.is_subset_of(&s));
            prop_assert_eq!(&saturate(&s, &maximal()).unwrap(), &s);
            prop_assert_eq!(&saturate_maximal(&i), &s);
            let witness = (0..=50).any(|k| {
                ideal_product(&ideal_power(&maximal(), k), &s).unwrap().is_subset_of(&i)
            });
            prop_assert!(witness);
        }

        #[test]
        fn mindeg_adds_under_products(i in arb_ideal(), j in arb_ideal()) {
            let p = ideal_product(&i, &j).unwrap();
            prop_assert_eq!(p.mindeg().unwrap(), i.mindeg().unwrap() + j.mindeg().unwrap());
        }

        #[test]
        fn membership_matches_definitions(i in arb_ideal(), j in arb_ideal()) {
            let sum = ideal_sum(&i, &j).unwrap();
            let prod = ideal_product(&i, &j).unwrap();
            let inter = ideal_intersect(&i, &j).unwrap();
            let colon = ideal_colon(&i, &j).unwrap();
            let sat = saturate(&i, &maximal()).unwrap();
            for d in 0..=8 {
                for m in monomials_of_degree(3, d) {
                    prop_assert_eq!(sum.contains(&m), i.contains(&m) || j.contains(&m));
                    let in_prod = i.generators().iter().any(|g| j.generators().iter()
                        .any(|h| g.mul_unchecked(h).divides_unchecked(&m)));
                    prop_assert_eq!(prod.contains(&m), in_prod);
                    prop_assert_eq!(inter.contains(&m), i.contains(&m) && j.contains(&m));
                    let in_colon = j.generators().iter().all(|h| i.contains(&m.mul_unchecked(h)));
                    prop_assert_eq!(colon.contains(&m), in_colon);
                    prop_assert_eq!(sat.contains(&m), in_saturation(&i, &m));
                }
            }
        }

        #[test]
        fn closure_is_idempotent_and_contains(i in arb_ideal()) {
            let c = integral_closure(&i).unwrap();
            prop_assert!(i.is_subset_of(&c));
            prop_assert_eq!(&integral_closure(&c).unwrap(), &c);
            // Supporting-hyperplane oracle: with exponents below 4 every facet
            // normal of the Newton polyhedron has entries at most 18, so the
            // weights in [0, 20]^3 decide membership exactly.
            let weights: Vec<[i64; 3]> = (0..=20i64)
                .flat_map(|a| (0..=20i64).flat_map(move |b| (0..=20i64).map(move |c| [a, b, c])))
                .collect();
            let dot = |w: &[i64; 3], m: &Monomial| -> i64 {
                w.iter().zip(m.exponents()).map(|(a, &e)| a * e as i64).sum()
            };
            let in_polyhedron = |m: &Monomial| {
                weights.iter().all(|w| {
                    let floor = i.generators().iter().map(|h| dot(w, h)).min().unwrap();
                    dot(w, m) >= floor
                })
            };
            for d in 0..=9 {
                for m in monomials_of_degree(3, d) {
                    prop_assert_eq!(c.contains(&m), in_polyhedron(&m), "{:?}", m);
                }
            }
        }

        #[test]
        fn sum_is_idempotent(i in arb_ideal()) {
            prop_assert_eq!(ideal_sum(&i, &i).unwrap(), i);
        }
    }
}
