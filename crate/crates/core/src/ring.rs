use crate::error::{Error, Result};
use crate::ideal::MonomialIdeal;

/// The ambient ring: `k[x_1..x_v]`, or its quotient by a monomial ideal `J`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingDescriptor {
    vars: Vec<String>,
    quotient: Option<MonomialIdeal>,
    krull_dim: usize,
}

impl RingDescriptor {
    /// Polynomial ring with default variable names `x1..xv`.
    pub fn polynomial(var_count: usize) -> Result<Self> {
        Self::with_vars((1..=var_count).map(|i| format!("x{i}")).collect(), None)
    }

    /// Builds a ring from variable names and an optional defining ideal.
    /// A zero defining ideal is the same as no quotient.
    pub fn with_vars(vars: Vec<String>, quotient: Option<MonomialIdeal>) -> Result<Self> {
        if vars.is_empty() {
            return Err(Error::InvalidInput("a ring needs at least one variable".into()));
        }
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::InvalidInput(format!("duplicate variable {v:?}")));
            }
        }
        let quotient = quotient.filter(|j| !j.is_zero());
        let krull_dim = match &quotient {
            None => vars.len(),
            Some(j) => {
                if j.nvars() != vars.len() {
                    return Err(Error::Dimension {
                        expected: vars.len(),
                        found: j.nvars(),
                    });
                }
                if j.is_unit() {
                    return Err(Error::InvalidInput(
                        "quotient by the unit ideal is the zero ring".into(),
                    ));
                }
                vars.len() - min_vertex_cover(&j.radical())
            }
        };
        Ok(RingDescriptor {
            vars,
            quotient,
            krull_dim,
        })
    }

    pub fn var_count(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn quotient(&self) -> Option<&MonomialIdeal> {
        self.quotient.as_ref()
    }

    pub fn is_polynomial(&self) -> bool {
        self.quotient.is_none()
    }

    pub fn krull_dim(&self) -> usize {
        self.krull_dim
    }

    /// Rejects ideals that live in a different number of variables.
    pub fn check(&self, i: &MonomialIdeal) -> Result<()> {
        if i.nvars() != self.var_count() {
            return Err(Error::Dimension {
                expected: self.var_count(),
                found: i.nvars(),
            });
        }
        Ok(())
    }
}

/// Smallest set of variables meeting the support of every generator of a
/// squarefree monomial ideal. Exhaustive over subsets by size.
fn min_vertex_cover(radical: &MonomialIdeal) -> usize {
    let nvars = radical.nvars();
    let edges: Vec<u64> = radical
        .generators()
        .iter()
        .map(|g| g.support().iter().fold(0u64, |acc, &i| acc | (1 << i)))
        .collect();
    let covers = |mask: u64| edges.iter().all(|e| e & mask != 0);
    let mut best = nvars;
    // Subsets in increasing popcount would need a combination walk; a full
    // scan is fine for the small variable counts this library targets.
    for mask in 0u64..(1u64 << nvars) {
        let size = mask.count_ones() as usize;
        if size < best && covers(mask) {
            best = size;
        }
    }
    best
}
