//! Exact simulation of the query algorithm for the composed
//! parity-of-Hadamard-addressed-blocks function.
//!
//! The algorithm runs one Bernstein–Vazirani instance per block to guess
//! each block's codeword message, checks the guesses against the actual
//! address variables with a verified Grover search for a disagreement, and
//! if none is reported outputs the parity of the selected target variables.
//!
//! Nothing here samples: every measurement is expanded into its exact
//! outcome distribution and every branch is followed with its probability,
//! so reported success probabilities are exact up to f64 rounding. Query
//! counts are worst-case over the algorithm's internal randomness and are
//! therefore deterministic.

use num_complex::Complex64;

use crate::boolfn::BooleanTable;
use crate::constructions::{hadamard_encode, parity_hadamard, BlockLayout, ComposedParityHadamard};
use crate::{Error, Result};

/// Tolerance for the unit-norm invariant of state vectors.
const NORM_EPS: f64 = 1e-9;

/// A pure state on a register of dimension `d`: `d` complex amplitudes with
/// unit Euclidean norm.
#[derive(Debug, Clone)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The uniform superposition on a register of the given dimension.
    pub fn uniform(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("state dimension must be positive".into()));
        }
        let a = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(Self {
            amps: vec![a; dim],
        })
    }

    /// Wraps explicit amplitudes, enforcing the unit-norm invariant.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidInput("state dimension must be positive".into()));
        }
        let state = Self { amps };
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_EPS {
            return Err(Error::InvalidInput(format!(
                "state vector has norm {norm}, expected 1"
            )));
        }
        Ok(state)
    }

    /// Register dimension.
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    /// The amplitudes.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Euclidean norm (1 up to rounding, by invariant).
    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// The exact measurement distribution in the computational basis.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Applies a sign-phase oracle: amplitude `i` is multiplied by
    /// `signs[i]`. The sign string length must match the dimension.
    pub fn apply_phase_oracle(&mut self, signs: &[i8]) -> Result<()> {
        if signs.len() != self.amps.len() {
            return Err(Error::InvalidInput(format!(
                "oracle over {} positions applied to a register of dimension {}",
                signs.len(),
                self.amps.len()
            )));
        }
        for (a, &s) in self.amps.iter_mut().zip(signs) {
            match s {
                1 => {}
                -1 => *a = -*a,
                other => {
                    return Err(Error::InvalidInput(format!(
                        "oracle sign {other} is not +1 or -1"
                    )))
                }
            }
        }
        Ok(())
    }

    /// Applies the normalized Hadamard transform over the whole register.
    /// The dimension must be a power of two.
    pub fn hadamard_transform(&mut self) -> Result<()> {
        if !self.amps.len().is_power_of_two() {
            return Err(Error::InvalidInput(format!(
                "Hadamard transform needs a power-of-two dimension, got {}",
                self.amps.len()
            )));
        }
        let mut h = 1;
        while h < self.amps.len() {
            for chunk in self.amps.chunks_mut(2 * h) {
                for i in 0..h {
                    let u = chunk[i];
                    let v = chunk[i + h];
                    chunk[i] = u + v;
                    chunk[i + h] = u - v;
                }
            }
            h *= 2;
        }
        let scale = 1.0 / (self.amps.len() as f64).sqrt();
        for a in &mut self.amps {
            *a *= scale;
        }
        Ok(())
    }

    /// Applies the inversion-about-the-mean diffusion operator.
    pub fn diffuse(&mut self) {
        let mean = self.amps.iter().sum::<Complex64>() / self.amps.len() as f64;
        for a in &mut self.amps {
            *a = 2.0 * mean - *a;
        }
    }
}

/// Outcome of one Bernstein–Vazirani run on a block's address string.
#[derive(Debug, Clone)]
pub struct BvOutcome {
    /// Exact measurement distribution over the message space; entry `z` is
    /// the probability of observing message index `z`.
    pub dist: Vec<f64>,
    /// Oracle queries spent (always 1).
    pub oracle_queries: u64,
}

/// Runs Bernstein–Vazirani against a sign string of power-of-two length
/// `ell`: prepare the uniform superposition on the `ell`-dimensional message
/// register, apply the string as a phase oracle (one query), transform, and
/// measure.
///
/// When the string is the Hadamard codeword of a message `z`, the
/// distribution is a point mass on `z`. In general the probability of
/// observing `z` is the squared normalized correlation of the string with
/// the codeword of `z`.
pub fn bernstein_vazirani(address: &[i8]) -> Result<BvOutcome> {
    if address.len() < 2 || !address.len().is_power_of_two() {
        return Err(Error::InvalidInput(format!(
            "address string length {} is not a power of two at least 2",
            address.len()
        )));
    }
    let mut state = StateVector::uniform(address.len())?;
    state.apply_phase_oracle(address)?;
    state.hadamard_transform()?;
    Ok(BvOutcome {
        dist: state.probabilities(),
        oracle_queries: 1,
    })
}

/// The deterministic stage plan for a verified Grover search over a space of
/// size `n`: guessed marked counts double from 1 up to `n`, each stage
/// running `floor(pi/4 * sqrt(n / guess))` iterations, and the whole sweep is
/// repeated `repeats` times so that the worst-case success probability over
/// the true number of disagreements is at least 2/3.
#[derive(Debug, Clone)]
pub struct GroverSchedule {
    n: usize,
    /// `(guessed marked count, iterations)` per stage.
    stages: Vec<(usize, u32)>,
    repeats: u32,
    /// Worst-case success probability over all true marked counts >= 1,
    /// after repetitions.
    floor: f64,
}

impl GroverSchedule {
    /// Plans the schedule for a search space of size `n`.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("search space must be nonempty".into()));
        }
        let mut stages = Vec::new();
        let mut guess = 1usize;
        while guess < n {
            stages.push((guess, grover_iterations(n, guess)));
            guess *= 2;
        }
        stages.push((n, grover_iterations(n, n)));

        // Worst-case single-sweep success over the true number of marked
        // items; by symmetry of the operators the probability depends only on
        // the count, so a canonical marked set suffices.
        let mut sweep_floor = 1.0f64;
        for marked in 1..=n {
            sweep_floor = sweep_floor.min(sweep_success(n, &stages, marked));
        }
        // Repeat the sweep until even the worst case clears 2/3.
        let mut repeats = 1u32;
        let mut floor = sweep_floor;
        while floor < 2.0 / 3.0 {
            repeats += 1;
            floor = 1.0 - (1.0 - sweep_floor).powi(repeats as i32);
            if repeats > 64 {
                return Err(Error::Internal(format!(
                    "verified search cannot reach a 2/3 floor on {n} items"
                )));
            }
        }
        Ok(Self {
            n,
            stages,
            repeats,
            floor,
        })
    }

    /// Search-space size.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The planned `(guessed marked count, iterations)` stages of one sweep.
    pub fn stages(&self) -> &[(usize, u32)] {
        &self.stages
    }

    /// Number of sweep repetitions.
    pub fn repeats(&self) -> u32 {
        self.repeats
    }

    /// Guaranteed success floor over all nonzero disagreement counts.
    pub fn floor(&self) -> f64 {
        self.floor
    }

    /// Worst-case oracle queries: two per iteration (compute and uncompute),
    /// across all stages and repetitions.
    pub fn worst_oracle_queries(&self) -> u64 {
        self.repeats as u64
            * self
                .stages
                .iter()
                .map(|&(_, iters)| 2 * iters as u64)
                .sum::<u64>()
    }

    /// Worst-case classical reads: each stage verifies one measured
    /// candidate by reading both strings at that position.
    pub fn worst_classical_reads(&self) -> u64 {
        self.repeats as u64 * 2 * self.stages.len() as u64
    }
}

fn grover_iterations(n: usize, guess: usize) -> u32 {
    (std::f64::consts::FRAC_PI_4 * (n as f64 / guess as f64).sqrt()).floor() as u32
}

/// Exact success probability of one sweep against the canonical marked set
/// `{0, .., marked-1}`, by state-vector simulation of every stage.
fn sweep_success(n: usize, stages: &[(usize, u32)], marked: usize) -> f64 {
    let mut fail = 1.0f64;
    for &(_, iters) in stages {
        fail *= 1.0 - stage_success(n, iters, marked);
    }
    1.0 - fail
}

/// Exact probability that one Grover stage of `iters` iterations measures a
/// marked item, for the canonical marked set of the given size.
fn stage_success(n: usize, iters: u32, marked: usize) -> f64 {
    let mut state = StateVector::uniform(n).expect("nonempty search space");
    for _ in 0..iters {
        for (i, a) in state.amps.iter_mut().enumerate() {
            if i < marked {
                *a = -*a;
            }
        }
        state.diffuse();
    }
    state.probabilities()[..marked].iter().sum()
}

/// Outcome of the verified search for a disagreement between two strings.
#[derive(Debug, Clone, Copy)]
pub struct VerifiedSearchOutcome {
    /// Exact probability that a (verified, hence real) disagreement is
    /// reported. Zero whenever the strings are equal.
    pub report_unequal: f64,
    /// Worst-case oracle queries.
    pub oracle_queries: u64,
    /// Worst-case classical reads for verification.
    pub classical_reads: u64,
}

/// Runs the verified Grover search for a position where `u` and `w`
/// disagree, under the given schedule.
///
/// Each stage flips the phase of disagreeing positions (implemented as one
/// query to each string's phase oracle per iteration), measures, and
/// classically verifies the measured position by reading `u` and `w` there.
/// Verification makes the error one-sided: on equal strings no stage can
/// ever report a disagreement, structurally.
pub fn grover_verified_unequal(
    u: &[i8],
    w: &[i8],
    schedule: &GroverSchedule,
) -> Result<VerifiedSearchOutcome> {
    if u.len() != schedule.n() || w.len() != schedule.n() {
        return Err(Error::InvalidInput(format!(
            "schedule for {} positions applied to strings of lengths {} and {}",
            schedule.n(),
            u.len(),
            w.len()
        )));
    }
    for (i, v) in u.iter().chain(w.iter()).enumerate() {
        if *v != 1 && *v != -1 {
            return Err(Error::InvalidInput(format!(
                "string entry {i} is {v}, expected +1 or -1"
            )));
        }
    }
    let n = schedule.n();
    // Positions where the strings disagree; the phase of u then the phase of
    // w leaves exactly these positions flipped.
    let marked: Vec<usize> = (0..n).filter(|&i| u[i] != w[i]).collect();

    let report_unequal = if marked.is_empty() {
        // Every measured candidate is verified equal; a disagreement is
        // never reported.
        0.0
    } else {
        let mut sweep_fail = 1.0f64;
        for &(_, iters) in schedule.stages() {
            let mut state = StateVector::uniform(n)?;
            for _ in 0..iters {
                state.apply_phase_oracle(u)?;
                state.apply_phase_oracle(w)?;
                state.diffuse();
            }
            let probs = state.probabilities();
            // Verification converts exactly the truly-marked measurements
            // into "unequal" reports.
            let hit: f64 = marked.iter().map(|&i| probs[i]).sum();
            sweep_fail *= 1.0 - hit;
        }
        1.0 - sweep_fail.powi(schedule.repeats() as i32)
    };
    Ok(VerifiedSearchOutcome {
        report_unequal,
        oracle_queries: schedule.worst_oracle_queries(),
        classical_reads: schedule.worst_classical_reads(),
    })
}

/// Worst-case query counts of one full run, broken down by phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QueryBreakdown {
    /// One oracle query per block for Bernstein–Vazirani.
    pub bv_oracle: u64,
    /// Oracle queries of the verified search.
    pub search_oracle: u64,
    /// Classical reads spent verifying search candidates.
    pub search_reads: u64,
    /// Classical reads of the selected target variables.
    pub output_reads: u64,
}

impl QueryBreakdown {
    /// Total queries of all kinds.
    pub fn total(&self) -> u64 {
        self.bv_oracle + self.search_oracle + self.search_reads + self.output_reads
    }
}

/// Exact outcome of the algorithm on one input.
#[derive(Debug, Clone)]
pub struct RunReport {
    /// The input point index.
    pub input: u64,
    /// The completed function's value there.
    pub true_value: i8,
    /// Whether the input satisfies the promise.
    pub on_promise: bool,
    /// Exact probability of outputting `+1`.
    pub p_plus: f64,
    /// Exact probability of outputting `-1`.
    pub p_minus: f64,
    /// Exact probability that the output equals the true value.
    pub success: f64,
    /// Worst-case query counts.
    pub queries: QueryBreakdown,
}

/// Exact simulator for the query algorithm on a fixed
/// parity-of-Hadamard-addressed-blocks instance.
#[derive(Debug, Clone)]
pub struct Simulator {
    built: ComposedParityHadamard,
    /// Codeword table: entry `z` is the length-`ell` codeword of message `z`.
    codewords: Vec<Vec<i8>>,
    schedule: GroverSchedule,
    /// Probability that the search reports a disagreement, memoized by the
    /// number of disagreeing positions (the operators involved are symmetric
    /// under permutations of positions, so the count determines it).
    unequal_by_count: Vec<f64>,
}

impl Simulator {
    /// Builds the simulator for codeword length `ell` and `k` targets per
    /// block (`k/2` blocks).
    pub fn new(ell: u32, k: u32) -> Result<Self> {
        let built = parity_hadamard(ell, k)?;
        let blocks = built.layout.blocks();
        let mut codewords = Vec::with_capacity(ell as usize);
        for z in 0..ell as u64 {
            let message: Vec<i8> = (0..ell.trailing_zeros())
                .map(|i| if z >> i & 1 == 1 { -1 } else { 1 })
                .collect();
            codewords.push(hadamard_encode(&message)?);
        }
        let search_space = (blocks * ell) as usize;
        let schedule = GroverSchedule::new(search_space)?;
        // Precompute the verified-search report probability for every
        // possible disagreement count via canonical string pairs.
        let mut unequal_by_count = Vec::with_capacity(search_space + 1);
        let u = vec![1i8; search_space];
        for t in 0..=search_space {
            let mut w = u.clone();
            for x in w.iter_mut().take(t) {
                *x = -1;
            }
            unequal_by_count.push(grover_verified_unequal(&u, &w, &schedule)?.report_unequal);
        }
        Ok(Self {
            built,
            codewords,
            schedule,
            unequal_by_count,
        })
    }

    /// The instance under simulation.
    pub fn instance(&self) -> &ComposedParityHadamard {
        &self.built
    }

    /// The verified-search schedule in use.
    pub fn schedule(&self) -> &GroverSchedule {
        &self.schedule
    }

    /// The layout of the instance.
    pub fn layout(&self) -> &BlockLayout {
        &self.built.layout
    }

    /// Worst-case query breakdown, identical for every input.
    pub fn query_breakdown(&self) -> QueryBreakdown {
        let blocks = self.built.layout.blocks() as u64;
        QueryBreakdown {
            bv_oracle: blocks,
            search_oracle: self.schedule.worst_oracle_queries(),
            search_reads: self.schedule.worst_classical_reads(),
            output_reads: blocks,
        }
    }

    /// Runs the algorithm on one input, expanding every measurement branch
    /// exactly.
    ///
    /// Per branch: the per-block Bernstein–Vazirani outcomes fix the guessed
    /// messages; the verified search compares the concatenated guessed
    /// codewords with the actual address variables; a reported disagreement
    /// makes the algorithm output `-1`, otherwise it outputs the parity of
    /// the selected targets.
    pub fn run(&self, input: u64) -> Result<RunReport> {
        let layout = &self.built.layout;
        let n = layout.n_vars();
        if input >> n != 0 {
            return Err(Error::InvalidInput(format!(
                "input index {input} has more than {n} bits"
            )));
        }
        let blocks = layout.blocks() as usize;
        let ell = self.built.ell as usize;

        // One Bernstein-Vazirani distribution per block.
        let mut bv_dists = Vec::with_capacity(blocks);
        for b in 0..blocks as u32 {
            let a = layout.address_chunk(input, b);
            let address: Vec<i8> = (0..ell)
                .map(|j| if a >> j & 1 == 1 { -1 } else { 1 })
                .collect();
            bv_dists.push(bernstein_vazirani(&address)?.dist);
        }

        // Walk the branch tree: a branch is one guessed message per block.
        let mut p_minus = 0.0f64;
        let mut p_plus = 0.0f64;
        let mut guesses = vec![0usize; blocks];
        loop {
            let mut prob = 1.0f64;
            for b in 0..blocks {
                prob *= bv_dists[b][guesses[b]];
            }
            if prob > 0.0 {
                // Count disagreements between guessed codewords and the
                // actual address strings.
                let mut disagreements = 0usize;
                for (b, &guess) in guesses.iter().enumerate() {
                    let a = layout.address_chunk(input, b as u32);
                    let codeword = &self.codewords[guess];
                    for (j, &cj) in codeword.iter().enumerate() {
                        let actual = if a >> j & 1 == 1 { -1i8 } else { 1 };
                        if actual != cj {
                            disagreements += 1;
                        }
                    }
                }
                let p_unequal = self.unequal_by_count[disagreements];
                // Parity of the selected targets, one per block.
                let mut parity = 1i8;
                for (b, &guess) in guesses.iter().enumerate() {
                    if layout.target_chunk(input, b as u32) >> guess & 1 == 1 {
                        parity = -parity;
                    }
                }
                p_minus += prob * p_unequal;
                if parity == -1 {
                    p_minus += prob * (1.0 - p_unequal);
                } else {
                    p_plus += prob * (1.0 - p_unequal);
                }
            }
            // Advance the mixed-radix branch counter.
            let mut b = 0;
            loop {
                if b == blocks {
                    break;
                }
                guesses[b] += 1;
                if guesses[b] < ell {
                    break;
                }
                guesses[b] = 0;
                b += 1;
            }
            if b == blocks {
                break;
            }
        }

        let true_value = self.built.total.value(input);
        let success = if true_value == -1 { p_minus } else { p_plus };
        Ok(RunReport {
            input,
            true_value,
            on_promise: self.built.promise.value_at(input).is_some(),
            p_plus,
            p_minus,
            success,
            queries: self.query_breakdown(),
        })
    }

    /// Runs the algorithm on every input and aggregates the success floor on
    /// and off the promise.
    pub fn run_exhaustive(&self) -> Result<ExhaustiveReport> {
        let n = self.built.layout.n_vars();
        let mut min_on = f64::INFINITY;
        let mut min_off = f64::INFINITY;
        let mut promise_count = 0u64;
        for input in 0..1u64 << n {
            let report = self.run(input)?;
            if report.on_promise {
                promise_count += 1;
                min_on = min_on.min(report.success);
            } else {
                min_off = min_off.min(report.success);
            }
        }
        Ok(ExhaustiveReport {
            n_vars: n,
            promise_count,
            min_success_promise: min_on,
            min_success_nonpromise: if min_off.is_finite() { min_off } else { 1.0 },
            queries: self.query_breakdown(),
        })
    }
}

/// Aggregate of [`Simulator::run`] over every input.
#[derive(Debug, Clone, Copy)]
pub struct ExhaustiveReport {
    /// Total variables of the instance.
    pub n_vars: u32,
    /// Number of promise inputs.
    pub promise_count: u64,
    /// Worst success probability over promise inputs.
    pub min_success_promise: f64,
    /// Worst success probability over non-promise inputs (1 if none exist).
    pub min_success_nonpromise: f64,
    /// Worst-case query counts (input-independent).
    pub queries: QueryBreakdown,
}
