use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::ring::RingDescriptor;

/// A monomial ideal held by its minimal generators in canonical order.
///
/// The empty generator list is the zero ideal; the single generator `1` is
/// the unit ideal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialIdeal {
    nvars: usize,
    generators: Vec<Monomial>,
}

impl MonomialIdeal {
    /// Builds the canonical ideal generated by `gens`.
    pub fn from_generators(nvars: usize, gens: Vec<Monomial>) -> Result<Self> {
        if let Some(bad) = gens.iter().find(|g| g.nvars() != nvars) {
            return Err(Error::Dimension {
                expected: nvars,
                found: bad.nvars(),
            });
        }
        Ok(Self::from_generators_unchecked(nvars, gens))
    }

    pub(crate) fn from_generators_unchecked(nvars: usize, mut gens: Vec<Monomial>) -> Self {
        gens.sort_unstable();
        gens.dedup();
        let mut kept: Vec<Monomial> = Vec::with_capacity(gens.len());
        // `gens` is sorted by degree, and distinct monomials of equal degree never
        // divide each other, so only strictly smaller kept degrees can divide.
        let mut lower_end = 0;
        let mut current_degree = None;
        for g in gens {
            if current_degree != Some(g.degree()) {
                current_degree = Some(g.degree());
                lower_end = kept.len();
            }
            if !kept[..lower_end].iter().any(|h| h.divides_unchecked(&g)) {
                kept.push(g);
            }
        }
        MonomialIdeal {
            nvars,
            generators: kept,
        }
    }

    pub fn zero(nvars: usize) -> Self {
        MonomialIdeal {
            nvars,
            generators: Vec::new(),
        }
    }

    pub fn unit(nvars: usize) -> Self {
        MonomialIdeal {
            nvars,
            generators: vec![Monomial::one(nvars)],
        }
    }

    /// The homogeneous maximal ideal `(x_1, ..., x_v)`.
    pub fn maximal(nvars: usize) -> Self {
        Self::from_generators_unchecked(nvars, (0..nvars).map(|i| Monomial::var(nvars, i)).collect())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.generators.len() == 1 && self.generators[0].is_one()
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.generators.iter().any(|g| g.divides_unchecked(m))
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &MonomialIdeal) -> bool {
        self.generators.iter().all(|g| other.contains(g))
    }

    pub(crate) fn check_same(&self, other: &MonomialIdeal) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::Dimension {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        Ok(())
    }

    /// Minimum degree of a minimal generator.
    pub fn mindeg(&self) -> Result<u32> {
        self.generators
            .first()
            .map(Monomial::degree)
            .ok_or(Error::ZeroIdeal { op: "mindeg" })
    }

    /// Maximum degree of a minimal generator.
    pub fn maxdeg(&self) -> Result<u32> {
        self.generators
            .last()
            .map(Monomial::degree)
            .ok_or(Error::ZeroIdeal { op: "maxdeg" })
    }

    /// Distinct generator degrees, ascending.
    pub fn generator_degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.generators.iter().map(Monomial::degree).collect();
        d.dedup();
        d
    }

    /// The radical: generated by the supports of the generators.
    pub fn radical(&self) -> MonomialIdeal {
        let gens = self
            .generators
            .iter()
            .map(|g| Monomial::new(g.exponents().iter().map(|&e| e.min(1)).collect()))
            .collect();
        Self::from_generators_unchecked(self.nvars, gens)
    }

    pub fn format(&self, vars: &[String]) -> String {
        let parts: Vec<String> = self.generators.iter().map(|g| g.format(vars)).collect();
        format!("({})", parts.join(", "))
    }

    pub fn generator_strings(&self, vars: &[String]) -> Vec<String> {
        self.generators.iter().map(|g| g.format(vars)).collect()
    }
}

/// Canonical ideal generated by the divisibility-minimal elements of `gens`.
pub fn minimalize(gens: Vec<Monomial>, ring: &RingDescriptor) -> Result<MonomialIdeal> {
    MonomialIdeal::from_generators(ring.var_count(), gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::monomials_of_degree;
    use proptest::prelude::*;

    fn vars() -> Vec<String> {
        vec!["X".into(), "Y".into(), "Z".into()]
    }

    fn ideal(gens: &[&str]) -> MonomialIdeal {
        let v = vars();
        let ms = gens.iter().map(|g| Monomial::parse(g, &v).unwrap()).collect();
        MonomialIdeal::from_generators(3, ms).unwrap()
    }

    #[test]
    fn minimalize_drops_multiples() {
        let ring = RingDescriptor::polynomial(3).unwrap();
        let v = vars();
        let gens = ["X^2", "X^2*Y", "Y^3"]
            .iter()
            .map(|g| Monomial::parse(g, &v).unwrap())
            .collect();
        let i = minimalize(gens, &ring).unwrap();
        assert_eq!(i.generator_strings(&v), ["X^2", "Y^3"]);
    }

    #[test]
    fn edge_ideal_is_already_minimal() {
        let i = ideal(&["X*Y", "Y*Z", "Z*X"]);
        assert_eq!(i.generator_strings(&vars()), ["X*Y", "X*Z", "Y*Z"]);
    }

    #[test]
    fn empty_is_zero_ideal() {
        let ring = RingDescriptor::polynomial(3).unwrap();
        let i = minimalize(vec![], &ring).unwrap();
        assert!(i.is_zero());
        assert_eq!(i.mindeg(), Err(Error::ZeroIdeal { op: "mindeg" }));
        assert!(MonomialIdeal::unit(3).is_unit());
        assert_eq!(MonomialIdeal::unit(3).mindeg().unwrap(), 0);
    }

    #[test]
    fn mindeg_maxdeg_of_four_generator_ideal() {
        let i = ideal(&["X^2*Y^3", "X^3*Y^2", "X*Y^2*Z^4", "X*Y^3*Z^3"]);
        assert_eq!(i.mindeg().unwrap(), 5);
        assert_eq!(i.maxdeg().unwrap(), 7);
    }

    fn arb_gens() -> impl Strategy<Value = Vec<Vec<u32>>> {
        prop::collection::vec(prop::collection::vec(0u32..4, 3), 0..7)
    }

    proptest! {
        #[test]
        fn minimalize_is_idempotent(raw in arb_gens()) {
            let gens: Vec<Monomial> = raw.into_iter().map(Monomial::new).collect();
            let once = MonomialIdeal::from_generators(3, gens).unwrap();
            let twice = MonomialIdeal::from_generators(3, once.generators().to_vec()).unwrap();
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn equal_ideals_have_equal_representations(a in arb_gens(), b in arb_gens()) {
            let ia = MonomialIdeal::from_generators(3, a.into_iter().map(Monomial::new).collect()).unwrap();
            let ib = MonomialIdeal::from_generators(3, b.into_iter().map(Monomial::new).collect()).unwrap();
            let bound = ia.maxdeg().unwrap_or(0).max(ib.maxdeg().unwrap_or(0)) + 1;
            let same_members = (0..=bound).all(|d| {
                monomials_of_degree(3, d).iter().all(|m| ia.contains(m) == ib.contains(m))
            });
            prop_assert_eq!(same_members, ia == ib);
        }
    }
}
