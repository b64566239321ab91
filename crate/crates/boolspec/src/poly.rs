//! Sparse multilinear polynomials over `{-1,+1}` variables.
//!
//! A polynomial is a finite sum `sum_S w_S * chi_S` over subsets `S` of its
//! declared variable set; on sign-valued inputs every polynomial is
//! multilinear. Variables are global 0-based ids (< 64) and subsets are
//! bitmasks, exactly as in [`crate::boolfn`]. These polynomials are what the
//! LP layer produces as witnesses and what the degree-reduction pipeline
//! manipulates.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::boolfn::{BooleanTable, FourierSpectrum};
use crate::{Error, Result};

/// Coefficients with absolute value at or below this threshold are removed
/// whenever terms are merged. Keeps cancellation noise out of degrees and
/// norms.
pub const PRUNE_EPS: f64 = 1e-12;

const MAX_VAR_ID: u32 = 63;

/// A partial assignment of sign values to variables, stored as two masks:
/// `bound` marks assigned variables, `neg` marks those assigned `-1`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PartialAssignment {
    bound: u64,
    neg: u64,
}

impl PartialAssignment {
    /// The empty assignment.
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds an assignment from `(variable, sign)` pairs. Signs must be
    /// `+1`/`-1` and variables distinct.
    pub fn from_pairs(pairs: &[(u32, i8)]) -> Result<Self> {
        let mut a = Self::empty();
        for &(var, sign) in pairs {
            a.bind(var, sign)?;
        }
        Ok(a)
    }

    /// The full assignment on variables `0..n` encoded by a point index
    /// (bit set means `-1`, per the crate conventions).
    pub fn from_index(n: u32, index: u64) -> Result<Self> {
        if n > MAX_VAR_ID + 1 {
            return Err(Error::InvalidInput(format!("{n} variables exceed 64")));
        }
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        Ok(Self {
            bound: mask,
            neg: index & mask,
        })
    }

    /// Binds one more variable; the variable must be unbound so far.
    pub fn bind(&mut self, var: u32, sign: i8) -> Result<()> {
        if var > MAX_VAR_ID {
            return Err(Error::InvalidInput(format!(
                "variable id {var} exceeds the supported maximum of {MAX_VAR_ID}"
            )));
        }
        if sign != 1 && sign != -1 {
            return Err(Error::InvalidInput(format!(
                "assignment value {sign} for variable {var} is not +1 or -1"
            )));
        }
        if self.bound >> var & 1 == 1 {
            return Err(Error::InvalidInput(format!(
                "variable {var} is already bound"
            )));
        }
        self.bound |= 1 << var;
        if sign == -1 {
            self.neg |= 1 << var;
        }
        Ok(())
    }

    /// The sign bound to `var`, or `None` if unbound.
    pub fn value(&self, var: u32) -> Option<i8> {
        if var > MAX_VAR_ID || self.bound >> var & 1 == 0 {
            None
        } else if self.neg >> var & 1 == 1 {
            Some(-1)
        } else {
            Some(1)
        }
    }

    /// Mask of bound variables.
    pub fn bound_mask(&self) -> u64 {
        self.bound
    }

    /// Mask of variables bound to `-1`.
    pub fn negative_mask(&self) -> u64 {
        self.neg
    }

    /// Number of bound variables.
    pub fn len(&self) -> u32 {
        self.bound.count_ones()
    }

    /// Whether no variable is bound.
    pub fn is_empty(&self) -> bool {
        self.bound == 0
    }

    /// Sign contributed by a monomial's bound part: the product of the
    /// assigned values over `subset & bound`.
    #[inline]
    fn sign_on(&self, subset: u64) -> f64 {
        if (subset & self.neg).count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// A sparse multilinear polynomial over a declared set of variables.
///
/// Invariants: every monomial mask is a subset of `vars`, and no stored
/// coefficient has absolute value at or below [`PRUNE_EPS`].
#[derive(Debug, Clone, PartialEq)]
pub struct MultilinearPolynomial {
    vars: u64,
    coeffs: BTreeMap<u64, f64>,
}

impl MultilinearPolynomial {
    /// The zero polynomial on the given variable set (mask form).
    pub fn zero(vars: u64) -> Self {
        Self {
            vars,
            coeffs: BTreeMap::new(),
        }
    }

    /// Builds a polynomial from `(subset mask, coefficient)` terms, merging
    /// duplicates and pruning negligible coefficients. Every mask must be a
    /// subset of `vars`.
    pub fn from_terms(vars: u64, terms: impl IntoIterator<Item = (u64, f64)>) -> Result<Self> {
        let mut coeffs: BTreeMap<u64, f64> = BTreeMap::new();
        for (subset, c) in terms {
            if subset & !vars != 0 {
                return Err(Error::InvalidInput(format!(
                    "monomial {subset:#x} uses variables outside the declared set {vars:#x}"
                )));
            }
            if !c.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "coefficient of monomial {subset:#x} is not finite"
                )));
            }
            *coeffs.entry(subset).or_insert(0.0) += c;
        }
        coeffs.retain(|_, c| c.abs() > PRUNE_EPS);
        Ok(Self { vars, coeffs })
    }

    /// The polynomial whose monomials are exactly the Fourier expansion of a
    /// spectrum, on variables `0..n`.
    pub fn from_spectrum(spec: &FourierSpectrum) -> Self {
        let n = spec.n();
        let vars = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let coeffs = spec
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| c.abs() > PRUNE_EPS)
            .map(|(s, &c)| (s as u64, c))
            .collect();
        Self { vars, coeffs }
    }

    /// Mask of declared variables.
    pub fn vars(&self) -> u64 {
        self.vars
    }

    /// Declared variable ids, ascending.
    pub fn var_ids(&self) -> Vec<u32> {
        mask_to_ids(self.vars)
    }

    /// Iterates `(subset mask, coefficient)` in ascending mask order.
    pub fn terms(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.coeffs.iter().map(|(&s, &c)| (s, c))
    }

    /// Number of stored monomials.
    pub fn term_count(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of one monomial (zero if absent).
    pub fn coeff(&self, subset: u64) -> f64 {
        self.coeffs.get(&subset).copied().unwrap_or(0.0)
    }

    /// Degree: the largest monomial size, or 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.coeffs
            .keys()
            .map(|s| s.count_ones())
            .max()
            .unwrap_or(0)
    }

    /// Sum of absolute coefficients.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.abs()).sum()
    }

    /// Evaluates at a full assignment of the declared variables.
    pub fn eval(&self, assignment: &PartialAssignment) -> Result<f64> {
        let unbound = self.vars & !assignment.bound_mask();
        if unbound != 0 {
            return Err(Error::InvalidInput(format!(
                "evaluation requires all variables bound; {:?} are not",
                mask_to_ids(unbound)
            )));
        }
        Ok(self
            .coeffs
            .iter()
            .map(|(&s, &c)| c * assignment.sign_on(s))
            .sum())
    }

    /// Substitutes the assigned variables, producing a polynomial on the
    /// remaining ones. The assignment may only bind declared variables.
    pub fn restrict(&self, assignment: &PartialAssignment) -> Result<Self> {
        let stray = assignment.bound_mask() & !self.vars;
        if stray != 0 {
            return Err(Error::InvalidInput(format!(
                "restriction binds variables {:?} outside the declared set",
                mask_to_ids(stray)
            )));
        }
        let bound = assignment.bound_mask();
        Self::from_terms(
            self.vars & !bound,
            self.coeffs
                .iter()
                .map(|(&s, &c)| (s & !bound, c * assignment.sign_on(s))),
        )
    }

    /// Averages over independent uniform signs for the variables in `over`
    /// (a sub-mask of the declared set): every monomial touching `over` has
    /// expectation zero and is removed; the rest survive unchanged.
    pub fn expect_uniform(&self, over: u64) -> Result<Self> {
        if over & !self.vars != 0 {
            return Err(Error::InvalidInput(format!(
                "expectation over variables {:?} outside the declared set",
                mask_to_ids(over & !self.vars)
            )));
        }
        Self::from_terms(
            self.vars & !over,
            self.coeffs
                .iter()
                .filter(|(&s, _)| s & over == 0)
                .map(|(&s, &c)| (s, c)),
        )
    }

    /// Removes every monomial matched by the predicate, returning the
    /// remaining polynomial and the total absolute coefficient mass removed.
    pub fn drop_monomials(&self, mut drop: impl FnMut(u64) -> bool) -> (Self, f64) {
        let mut kept = BTreeMap::new();
        let mut dropped = 0.0;
        for (&s, &c) in &self.coeffs {
            if drop(s) {
                dropped += c.abs();
            } else {
                kept.insert(s, c);
            }
        }
        (
            Self {
                vars: self.vars,
                coeffs: kept,
            },
            dropped,
        )
    }

    /// Renames variables through an injective map that must cover every
    /// declared variable.
    pub fn remap_vars(&self, map: &BTreeMap<u32, u32>) -> Result<Self> {
        let mut image = 0u64;
        for &v in &self.var_ids() {
            let &w = map.get(&v).ok_or_else(|| {
                Error::InvalidInput(format!("renaming map lacks an entry for variable {v}"))
            })?;
            if w > MAX_VAR_ID {
                return Err(Error::InvalidInput(format!(
                    "renamed variable id {w} exceeds the supported maximum of {MAX_VAR_ID}"
                )));
            }
            if image >> w & 1 == 1 {
                return Err(Error::InvalidInput(format!(
                    "renaming map is not injective at target id {w}"
                )));
            }
            image |= 1 << w;
        }
        let remap_mask = |s: u64| -> u64 {
            let mut out = 0u64;
            for v in mask_to_ids(s) {
                out |= 1 << map[&v];
            }
            out
        };
        Self::from_terms(image, self.coeffs.iter().map(|(&s, &c)| (remap_mask(s), c)))
    }

    /// Largest pointwise deviation `|P(x) - f(x)|` over the points where `f`
    /// is defined. The polynomial's variables must lie within `0..f.n()`.
    ///
    /// Evaluation is done densely with one inverse transform over the whole
    /// cube, so the cost is `O(n * 2^n)` independent of the promise size.
    pub fn sup_error(&self, f: &impl BooleanTable) -> Result<f64> {
        let n = f.n();
        let cube = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
        if self.vars & !cube != 0 {
            return Err(Error::InvalidInput(format!(
                "polynomial uses variables {:?} beyond the function's {n}",
                mask_to_ids(self.vars & !cube)
            )));
        }
        let mut dense = vec![0.0f64; 1usize << n];
        for (&s, &c) in &self.coeffs {
            dense[s as usize] = c;
        }
        let values = crate::boolfn::wht_inverse(&FourierSpectrum::new(n, dense)?);
        let mut worst = 0.0f64;
        for idx in 0..1u64 << n {
            if let Some(v) = f.value_at(idx) {
                worst = worst.max((values[idx as usize] - v as f64).abs());
            }
        }
        Ok(worst)
    }

    /// Serializes to the canonical JSON byte form (compact, trailing newline).
    pub fn to_json(&self) -> String {
        let file = PolynomialFile {
            vars: self.var_ids(),
            terms: self
                .terms()
                .map(|(s, c)| TermFile {
                    subset: mask_to_ids(s),
                    coeff: c,
                })
                .collect(),
        };
        let mut s = serde_json::to_string(&file).expect("polynomial serializes");
        s.push('\n');
        s
    }

    /// Parses the JSON form produced by [`Self::to_json`].
    pub fn from_json(text: &str) -> Result<Self> {
        let file: PolynomialFile = serde_json::from_str(text)
            .map_err(|e| Error::InvalidInput(format!("malformed polynomial file: {e}")))?;
        let vars = ids_to_mask(&file.vars)?;
        Self::from_terms(
            vars,
            file.terms
                .iter()
                .map(|t| Ok((ids_to_mask(&t.subset)?, t.coeff)))
                .collect::<Result<Vec<_>>>()?,
        )
    }
}

/// On-disk form of a polynomial: sorted variable ids plus a list of terms,
/// each a sorted id list with its coefficient.
#[derive(Debug, Serialize, Deserialize)]
struct PolynomialFile {
    vars: Vec<u32>,
    terms: Vec<TermFile>,
}

#[derive(Debug, Serialize, Deserialize)]
struct TermFile {
    subset: Vec<u32>,
    coeff: f64,
}

/// Expands a mask into ascending variable ids.
pub fn mask_to_ids(mut mask: u64) -> Vec<u32> {
    let mut ids = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        let v = mask.trailing_zeros();
        ids.push(v);
        mask &= mask - 1;
    }
    ids
}

/// Collects variable ids into a mask, rejecting ids of 64 or more and
/// duplicates.
pub fn ids_to_mask(ids: &[u32]) -> Result<u64> {
    let mut mask = 0u64;
    for &v in ids {
        if v > MAX_VAR_ID {
            return Err(Error::InvalidInput(format!(
                "variable id {v} exceeds the supported maximum of {MAX_VAR_ID}"
            )));
        }
        if mask >> v & 1 == 1 {
            return Err(Error::InvalidInput(format!("variable id {v} repeats")));
        }
        mask |= 1 << v;
    }
    Ok(mask)
}
