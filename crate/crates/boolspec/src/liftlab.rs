//! Random restrictions for addressed block compositions, and the
//! degree-reduction argument built on them.
//!
//! For a composed function whose blocks each carry address variables and
//! target variables, the natural restriction distribution fixes every
//! block's address to a uniformly random promise pattern and leaves all
//! targets free. Under such a restriction each block selects exactly one
//! target, and a monomial over target variables stays meaningful
//! ("relevant") exactly when every target it touches is the selected one in
//! its block.
//!
//! This module enumerates that distribution exactly (probabilities are kept
//! as rationals, so agreement checks are equality checks, not tolerance
//! checks), computes relevance probabilities both in closed form and by
//! enumeration, and runs the pipeline that turns a low-mass approximator of
//! the composed function into a low-degree approximator of the outer
//! function: restrict to the best sample, drop the relevant high-degree
//! monomials (paying their mass), average out the unselected targets, and
//! rename the selected targets to the outer variables.
//!
//! The headline check ties this together: the LP-computed approximate
//! spectral norm of the composed promise function must clear a floor that
//! grows with the outer approximate degree and the codeword length, and the
//! pipeline must actually deliver the degree reduction the argument
//! promises.

use std::collections::BTreeMap;

use num_rational::Rational64;
use serde::Serialize;

use crate::approxlp::{LpConfig, approx_degree, approx_spectral_norm};
use crate::boolfn::TruthTable;
use crate::constructions::{AddressingFunction, BlockLayout, compose, hadamard_addressing, parity_hadamard};
use crate::poly::{MultilinearPolynomial, PartialAssignment, ids_to_mask};
use crate::{Error, Result};

/// Numeric slack granted to pipeline error comparisons on top of the exact
/// bound, covering floating-point accumulation only.
pub const PIPELINE_TOL: f64 = 1e-6;

/// Hard cap on the number of restriction samples enumerated at once.
const MAX_SUPPORT: u128 = 1_000_000;

/// One restriction: every block's address fixed to a promise pattern.
#[derive(Debug, Clone)]
pub struct RestrictionSample {
    /// Binds exactly the address variables of every block.
    pub assignment: PartialAssignment,
    /// The selected target variable of each block (global ids, one per
    /// block, in block order).
    pub selected: Vec<u32>,
    /// Probability of this sample under the product measure.
    pub probability: Rational64,
}

impl RestrictionSample {
    /// Mask of the selected target variables.
    pub fn selected_mask(&self) -> u64 {
        ids_to_mask(&self.selected).expect("selected ids are valid variable ids")
    }
}

fn check_layout_matches(addr: &AddressingFunction, layout: &BlockLayout) -> Result<()> {
    if layout.address_bits() != addr.address_bits() || layout.target_count() != addr.target_count()
    {
        return Err(Error::InvalidInput(format!(
            "layout blocks have {} address bits and {} targets but the addressing function has {} and {}",
            layout.address_bits(),
            layout.target_count(),
            addr.address_bits(),
            addr.target_count()
        )));
    }
    Ok(())
}

fn ratio_to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Enumerates the full support of the restriction distribution: one sample
/// per choice of promise address in every block, in mixed-radix order with
/// block 0 as the least significant digit. Probabilities are exact and sum
/// to one.
pub fn mu_support(addr: &AddressingFunction, layout: &BlockLayout) -> Result<Vec<RestrictionSample>> {
    check_layout_matches(addr, layout)?;
    let promise: Vec<u64> = addr.promise_addresses().collect();
    let base = promise.len() as u128;
    let blocks = layout.blocks();
    let total = base
        .checked_pow(blocks)
        .filter(|&t| t <= MAX_SUPPORT)
        .ok_or_else(|| {
            Error::ResourceLimit(format!(
                "restriction support {base}^{blocks} exceeds the enumeration cap of {MAX_SUPPORT}"
            ))
        })?;
    let per_block = Rational64::new(1, promise.len() as i64);
    let mut samples = Vec::with_capacity(total as usize);
    for i in 0..total as u64 {
        let mut assignment = PartialAssignment::empty();
        let mut selected = Vec::with_capacity(blocks as usize);
        let mut probability = Rational64::new(1, 1);
        let mut digits = i;
        for b in 0..blocks {
            let a = promise[(digits % promise.len() as u64) as usize];
            digits /= promise.len() as u64;
            for j in 0..layout.address_bits() {
                let sign = if a >> j & 1 == 1 { -1 } else { 1 };
                assignment.bind(layout.address_var(b, j), sign)?;
            }
            let t = addr
                .select(a)
                .expect("promise addresses select a target by definition");
            selected.push(layout.target_var(b, t));
            probability *= per_block;
        }
        samples.push(RestrictionSample {
            assignment,
            selected,
            probability,
        });
    }
    Ok(samples)
}

/// Probability that a uniformly random promise address selects target `t`.
pub fn selection_probability(addr: &AddressingFunction, t: u32) -> Result<Rational64> {
    if t >= addr.target_count() {
        return Err(Error::InvalidInput(format!(
            "target {t} out of range for {} targets",
            addr.target_count()
        )));
    }
    let hits = addr.promise_addresses().filter(|&a| addr.select(a) == Some(t)).count();
    Ok(Rational64::new(hits as i64, addr.promise_size() as i64))
}

/// Probability that the target-variable monomial `s` is relevant under a
/// random restriction: every target it touches must be the selected one in
/// its block. Touching two targets of one block makes the probability zero;
/// touching an address variable is an error.
pub fn relevance_probability(
    s: u64,
    addr: &AddressingFunction,
    layout: &BlockLayout,
) -> Result<Rational64> {
    check_layout_matches(addr, layout)?;
    if s & !layout.all_target_mask() != 0 {
        return Err(Error::InvalidInput(format!(
            "monomial {s:#x} touches non-target variables"
        )));
    }
    let mut p = Rational64::new(1, 1);
    for b in 0..layout.blocks() {
        let in_block = s & layout.target_mask(b);
        match in_block.count_ones() {
            0 => {}
            1 => {
                let t = in_block.trailing_zeros() - layout.target_var(b, 0);
                p *= selection_probability(addr, t)?;
            }
            _ => return Ok(Rational64::new(0, 1)),
        }
    }
    Ok(p)
}

/// The same probability, by brute-force enumeration of the support. Used to
/// cross-check [`relevance_probability`]; the two must agree exactly.
pub fn relevance_frequency_by_enumeration(
    s: u64,
    addr: &AddressingFunction,
    layout: &BlockLayout,
) -> Result<Rational64> {
    if s & !layout.all_target_mask() != 0 {
        return Err(Error::InvalidInput(format!(
            "monomial {s:#x} touches non-target variables"
        )));
    }
    let mut p = Rational64::new(0, 1);
    for sample in mu_support(addr, layout)? {
        if s & !sample.selected_mask() == 0 {
            p += sample.probability;
        }
    }
    Ok(p)
}

/// Expected relevant high-degree mass of a polynomial under the restriction
/// distribution, with its closed-form upper bound.
#[derive(Debug, Clone, Serialize)]
pub struct RelevantMassReport {
    /// Monomials of target-degree below this threshold are ignored.
    pub min_degree: u32,
    /// Exact expectation (up to float accumulation) of the surviving
    /// relevant mass of degree at least `min_degree`, computed by
    /// enumerating every restriction.
    pub expectation: f64,
    /// Term-by-term bound: each monomial contributes its absolute
    /// coefficient times its relevance probability. The expectation never
    /// exceeds this (coefficients that merge under restriction can only
    /// cancel).
    pub analytic_bound: f64,
}

/// Computes the expected `l1` mass, over random restrictions, of the
/// relevant monomials of degree at least `min_degree` in the restricted
/// polynomial, together with the closed-form bound used by the
/// degree-reduction argument.
pub fn expected_relevant_mass(
    p: &MultilinearPolynomial,
    addr: &AddressingFunction,
    layout: &BlockLayout,
    min_degree: u32,
) -> Result<RelevantMassReport> {
    check_layout_matches(addr, layout)?;
    let full = (1u64 << layout.n_vars()) - 1;
    if p.vars() & !full != 0 {
        return Err(Error::InvalidInput(
            "polynomial uses variables outside the block layout".into(),
        ));
    }
    if layout.all_address_mask() & !p.vars() != 0 {
        return Err(Error::InvalidInput(
            "polynomial must declare every address variable so restrictions apply".into(),
        ));
    }
    let mut expectation = 0.0;
    for sample in mu_support(addr, layout)? {
        let restricted = p.restrict(&sample.assignment)?;
        let selected = sample.selected_mask();
        let mass: f64 = restricted
            .terms()
            .filter(|&(t, _)| t & !selected == 0 && t.count_ones() >= min_degree)
            .map(|(_, c)| c.abs())
            .sum();
        expectation += ratio_to_f64(sample.probability) * mass;
    }
    let mut analytic_bound = 0.0;
    for (s, w) in p.terms() {
        let t = s & layout.all_target_mask();
        if t.count_ones() < min_degree {
            continue;
        }
        analytic_bound += w.abs() * ratio_to_f64(relevance_probability(t, addr, layout)?);
    }
    Ok(RelevantMassReport {
        min_degree,
        expectation,
        analytic_bound,
    })
}

/// Outcome of one run of the degree-reduction pipeline.
#[derive(Debug, Clone, Serialize)]
pub struct PipelineReport {
    /// Index (in [`mu_support`] order) of the restriction that was applied:
    /// the one dropping the least mass.
    pub sample_index: usize,
    /// Selected target variable of each block under that restriction.
    pub selected: Vec<u32>,
    /// Mass of the relevant monomials of degree at least the threshold that
    /// were dropped.
    pub dropped_mass: f64,
    /// Degree of the final polynomial over the outer variables; always
    /// below the threshold by construction.
    pub final_degree: u32,
    /// Measured worst-case deviation of the final polynomial from the outer
    /// function.
    pub final_sup_error: f64,
    /// The deviation the argument guarantees: input error plus dropped mass
    /// plus numeric slack.
    pub error_bound: f64,
}

/// Turns an approximator of the composed function into a low-degree
/// approximator of the outer function.
///
/// `witness` must be within `eps_in` of the composed promise function built
/// from `outer` and `addr` (checked). The pipeline restricts by the
/// least-damaging sample, drops the relevant monomials of degree at least
/// `degree_threshold` (recording their mass), averages out the unselected
/// targets, and renames block `b`'s selected target to outer variable `b`.
/// The result has degree below the threshold and deviates from `outer` by
/// at most `eps_in` plus the dropped mass.
pub fn degree_reduction_pipeline(
    witness: &MultilinearPolynomial,
    outer: &TruthTable,
    addr: &AddressingFunction,
    layout: &BlockLayout,
    degree_threshold: u32,
    eps_in: f64,
) -> Result<PipelineReport> {
    check_layout_matches(addr, layout)?;
    if layout.blocks() != outer.n() {
        return Err(Error::InvalidInput(format!(
            "outer function has {} variables but the layout has {} blocks",
            outer.n(),
            layout.blocks()
        )));
    }
    if !(0.0..1.0).contains(&eps_in) || degree_threshold == 0 {
        return Err(Error::InvalidInput(
            "need an error in [0, 1) and a positive degree threshold".into(),
        ));
    }
    let (promise, _) = compose(outer, addr)?;
    let pre_error = witness.sup_error(&promise)?;
    if pre_error > eps_in + PIPELINE_TOL {
        return Err(Error::InvalidInput(format!(
            "witness deviates from the composed promise by {pre_error}, above the claimed {eps_in}"
        )));
    }

    // Pick the restriction dropping the least relevant high-degree mass;
    // ties resolve to the earliest sample.
    let mut best: Option<(usize, RestrictionSample, MultilinearPolynomial, f64)> = None;
    for (i, sample) in mu_support(addr, layout)?.into_iter().enumerate() {
        let restricted = witness.restrict(&sample.assignment)?;
        let selected = sample.selected_mask();
        let (kept, dropped) = restricted
            .drop_monomials(|t| t & !selected == 0 && t.count_ones() >= degree_threshold);
        if best.as_ref().map_or(true, |&(_, _, _, d)| dropped < d) {
            best = Some((i, sample, kept, dropped));
        }
    }
    let (sample_index, sample, kept, dropped_mass) =
        best.expect("the restriction support is never empty");

    let selected = sample.selected_mask();
    let averaged = kept.expect_uniform(layout.all_target_mask() & !selected)?;
    let rename: BTreeMap<u32, u32> = sample
        .selected
        .iter()
        .enumerate()
        .map(|(b, &v)| (v, b as u32))
        .collect();
    let final_poly = averaged.remap_vars(&rename)?;
    let final_degree = final_poly.degree();
    debug_assert!(final_degree < degree_threshold);
    let final_sup_error = final_poly.sup_error(outer)?;
    Ok(PipelineReport {
        sample_index,
        selected: sample.selected,
        dropped_mass,
        final_degree,
        final_sup_error,
        error_bound: eps_in + dropped_mass + PIPELINE_TOL,
    })
}

/// Full report of the composition lower-bound check for one `(ell, k)`
/// instance.
#[derive(Debug, Clone, Serialize)]
pub struct LiftReport {
    /// Codeword length (address bits and targets per block).
    pub ell: u32,
    /// Twice the outer parity arity (the composed function has `k/2`
    /// blocks and `k * ell` variables).
    pub k: u32,
    /// Approximate degree of the outer parity at error 0.99, computed by
    /// LP; the pipeline targets degrees below this.
    pub degree_threshold: u32,
    /// `log2` of the LP-computed approximate spectral norm (error 1/3) of
    /// the composed promise function.
    pub lp_log2_norm: f64,
    /// The floor the argument proves: `degree_threshold / 10 * log2(ell)`.
    pub proof_floor: f64,
    /// Whether the LP value clears the floor (up to tolerance).
    pub bound_holds: bool,
    /// Expected relevant mass of the LP witness versus its analytic bound.
    pub mass: RelevantMassReport,
    /// Pipeline run on the LP witness at the degree threshold.
    pub pipeline: PipelineReport,
}

/// Checks the composition lower bound on the parity-of-addressed-blocks
/// family: the approximate spectral norm of the promise function must be at
/// least `2^(D/10 * log2 ell)` where `D` is the outer approximate degree at
/// error 0.99, and the degree-reduction pipeline on the LP witness must
/// produce a below-threshold-degree approximator of the outer parity with
/// the accounted error.
pub fn lift_bound_check(ell: u32, k: u32, cfg: &LpConfig) -> Result<LiftReport> {
    let built = parity_hadamard(ell, k)?;
    let outer = TruthTable::parity(k / 2)?;
    let degree_threshold = approx_degree(&outer, 0.99, cfg)?.degree;
    let spectral = approx_spectral_norm(&built.promise, 1.0 / 3.0, cfg)?;
    let lp_log2_norm = spectral.value.log2();
    let proof_floor = f64::from(degree_threshold) / 10.0 * f64::from(ell).log2();
    let bound_holds = lp_log2_norm >= proof_floor - cfg.obj_tol;
    let addr = hadamard_addressing(ell)?;
    let mass = expected_relevant_mass(&spectral.witness, &addr, &built.layout, degree_threshold)?;
    let pipeline = degree_reduction_pipeline(
        &spectral.witness,
        &outer,
        &addr,
        &built.layout,
        degree_threshold,
        1.0 / 3.0,
    )?;
    Ok(LiftReport {
        ell,
        k,
        degree_threshold,
        lp_log2_norm,
        proof_floor,
        bound_holds,
        mass,
        pipeline,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::indexing_addressing;

    fn layout(blocks: u32) -> BlockLayout {
        BlockLayout::new(blocks, 2, 2).unwrap()
    }

    #[test]
    fn support_enumerates_the_product_measure() {
        let addr = hadamard_addressing(2).unwrap();
        let lay = layout(2);
        let samples = mu_support(&addr, &lay).unwrap();
        assert_eq!(samples.len(), 4);
        let total: Rational64 = samples.iter().map(|s| s.probability).sum();
        assert_eq!(total, Rational64::new(1, 1));
        for s in &samples {
            assert_eq!(s.probability, Rational64::new(1, 4));
            // Addresses of both blocks are bound, targets are not.
            assert_eq!(s.assignment.bound_mask(), 0b11_0011);
        }
        // Block 0 is the least significant digit; the codeword addresses of
        // length 2 are (+,+) selecting target 0 and (+,-) selecting target 1.
        assert_eq!(samples[0].selected, vec![2, 6]);
        assert_eq!(samples[1].selected, vec![3, 6]);
        assert_eq!(samples[2].selected, vec![2, 7]);
        assert_eq!(samples[3].selected, vec![3, 7]);
        assert_eq!(samples[0].assignment.negative_mask(), 0);
        assert_eq!(samples[1].assignment.negative_mask(), 0b10);
        assert_eq!(samples[2].assignment.negative_mask(), 0b10_0000);
    }

    #[test]
    fn selection_probabilities_are_uniform_for_codeword_addressing() {
        for ell in [2u32, 4] {
            let addr = hadamard_addressing(ell).unwrap();
            let mut total = Rational64::new(0, 1);
            for t in 0..ell {
                let p = selection_probability(&addr, t).unwrap();
                assert_eq!(p, Rational64::new(1, ell as i64));
                total += p;
            }
            assert_eq!(total, Rational64::new(1, 1));
        }
        let addr = indexing_addressing(2).unwrap();
        for t in 0..4 {
            assert_eq!(
                selection_probability(&addr, t).unwrap(),
                Rational64::new(1, 4)
            );
        }
        assert!(selection_probability(&addr, 4).is_err());
    }

    #[test]
    fn relevance_probability_closed_forms() {
        let addr = hadamard_addressing(2).unwrap();
        let lay = layout(2);
        // Variables: block 0 has addresses {0,1}, targets {2,3}; block 1 has
        // addresses {4,5}, targets {6,7}.
        let one = |s| relevance_probability(s, &addr, &lay).unwrap();
        assert_eq!(one(0), Rational64::new(1, 1));
        assert_eq!(one(1 << 2), Rational64::new(1, 2));
        assert_eq!(one(1 << 2 | 1 << 3), Rational64::new(0, 1));
        assert_eq!(one(1 << 2 | 1 << 6), Rational64::new(1, 4));
        assert!(relevance_probability(1, &addr, &lay).is_err());
    }

    #[test]
    fn closed_form_matches_enumeration_exactly() {
        let addr = hadamard_addressing(2).unwrap();
        for blocks in 1..=3u32 {
            let lay = layout(blocks);
            // Walk every submask of the target variables.
            let targets = lay.all_target_mask();
            let mut s = targets;
            loop {
                assert_eq!(
                    relevance_probability(s, &addr, &lay).unwrap(),
                    relevance_frequency_by_enumeration(s, &addr, &lay).unwrap(),
                    "mask {s:#x} with {blocks} blocks"
                );
                if s == 0 {
                    break;
                }
                s = (s - 1) & targets;
            }
        }
    }

    #[test]
    fn expected_mass_respects_its_analytic_bound() {
        let addr = hadamard_addressing(2).unwrap();
        let lay = layout(1);
        // One block: addresses {0,1}, targets {2,3}. Include an
        // address-touching monomial to exercise sign folding.
        let p = MultilinearPolynomial::from_terms(
            0b1111,
            [(1u64 << 2, 0.5), (1 << 2 | 1 << 3, 0.25), (1 | 1 << 2, 0.125)],
        )
        .unwrap();
        let rep = expected_relevant_mass(&p, &addr, &lay, 1).unwrap();
        assert!(rep.expectation <= rep.analytic_bound + 1e-9);
        // Both codeword addresses leave bit 0 positive, so the monomials
        // merge constructively: 1/2 * (0.5 + 0.125) on the selected-target
        // sample, zero on the other.
        assert!((rep.expectation - 0.3125).abs() < 1e-12);
        assert!((rep.analytic_bound - 0.3125).abs() < 1e-12);
    }

    #[test]
    fn cancellation_keeps_expectation_below_the_bound() {
        let addr = hadamard_addressing(2).unwrap();
        let lay = layout(1);
        // Opposite signs on monomials that merge under restriction: the
        // expectation sees the cancellation, the bound does not.
        let p = MultilinearPolynomial::from_terms(
            0b1111,
            [(1u64 << 2, 0.5), (1 | 1 << 2, -0.5)],
        )
        .unwrap();
        let rep = expected_relevant_mass(&p, &addr, &lay, 1).unwrap();
        assert!(rep.expectation < 1e-12);
        assert!((rep.analytic_bound - 0.5).abs() < 1e-12);
    }

    #[test]
    fn pipeline_reduces_degree_and_keeps_the_error_budget() {
        let report = lift_bound_check(2, 2, &LpConfig::default()).unwrap();
        assert_eq!(report.degree_threshold, 1);
        assert!((report.proof_floor - 0.1).abs() < 1e-12);
        assert!(
            (report.lp_log2_norm - (4.0f64 / 3.0).log2()).abs() < 1e-6,
            "norm {}",
            report.lp_log2_norm
        );
        assert!(report.bound_holds);
        assert_eq!(report.pipeline.final_degree, 0);
        assert!(report.pipeline.final_sup_error <= report.pipeline.error_bound);
        assert!(report.mass.expectation <= report.mass.analytic_bound + 1e-9);
    }

    #[test]
    fn frozen_proof_floors_hold_across_the_small_grid() {
        for (ell, k, floor) in [(2u32, 2u32, 0.1), (4, 2, 0.2), (2, 4, 0.2)] {
            let report = lift_bound_check(ell, k, &LpConfig::default()).unwrap();
            assert!(
                (report.proof_floor - floor).abs() < 1e-12,
                "({ell}, {k}) floor {}",
                report.proof_floor
            );
            assert!(
                report.bound_holds,
                "({ell}, {k}): norm 2^{} vs floor {}",
                report.lp_log2_norm, report.proof_floor
            );
            assert!(report.pipeline.final_degree < report.degree_threshold);
            assert!(report.pipeline.final_sup_error <= report.pipeline.error_bound);
        }
    }

    #[test]
    fn pipeline_rejects_a_witness_that_misses_the_promise() {
        let addr = hadamard_addressing(2).unwrap();
        let lay = layout(1);
        let outer = TruthTable::parity(1).unwrap();
        let witness = MultilinearPolynomial::zero(0b1111);
        let err = degree_reduction_pipeline(&witness, &outer, &addr, &lay, 1, 1.0 / 3.0);
        assert!(matches!(err, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn mismatched_layout_is_rejected() {
        let addr = indexing_addressing(1).unwrap(); // 1 address bit, 2 targets
        let lay = layout(1); // 2 address bits, 2 targets
        assert!(mu_support(&addr, &lay).is_err());
        assert!(relevance_probability(0, &addr, &lay).is_err());
    }
}
