//! Dense two-phase primal simplex with variable bounds.
//!
//! The solver minimizes `c . x` subject to linear rows (`<=`, `=`, `>=`) and
//! per-variable bounds `l <= x <= u` with finite lower bounds (upper bounds
//! may be infinite). It keeps a full dense tableau, which is the right shape
//! for the LPs built in this crate: thousands of rows whose coefficients are
//! almost all `+-1` and never sparse.
//!
//! Phase 1 drives artificial variables out of an all-slack/artificial basis;
//! phase 2 optimizes the real objective. Pricing is Dantzig's rule (most
//! violated reduced cost); ratio-test ties are broken lexicographically
//! against the basis-inverse columns, which rules out cycling and keeps
//! degenerate plateaus short, with the hard pivot cap as the final
//! backstop. Moves that merely carry a variable from one finite bound to
//! the other are handled without a basis change.
//!
//! Everything is deterministic: fixed scan orders, index tie-breaking, no
//! randomness.

use crate::{Error, Result};

/// Direction of a linear row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `coeffs . x <= rhs`
    Le,
    /// `coeffs . x = rhs`
    Eq,
    /// `coeffs . x >= rhs`
    Ge,
}

/// One linear row.
#[derive(Debug, Clone)]
pub struct LpRow {
    /// Dense coefficients, one per structural variable.
    pub coeffs: Vec<f64>,
    /// Row direction.
    pub relation: Relation,
    /// Right-hand side.
    pub rhs: f64,
}

/// A linear program in minimization form.
#[derive(Debug, Clone)]
pub struct LpProblem {
    /// Objective coefficients (minimized), one per structural variable.
    pub objective: Vec<f64>,
    /// Per-variable `(lower, upper)` bounds. Lower bounds must be finite;
    /// `f64::INFINITY` is allowed as an upper bound.
    pub bounds: Vec<(f64, f64)>,
    /// The rows.
    pub rows: Vec<LpRow>,
}

impl LpProblem {
    /// A problem on `n` variables with default bounds `[0, +inf)`, a zero
    /// objective and no rows.
    pub fn new(n: usize) -> Self {
        Self {
            objective: vec![0.0; n],
            bounds: vec![(0.0, f64::INFINITY); n],
            rows: Vec::new(),
        }
    }

    /// Number of structural variables.
    pub fn n_vars(&self) -> usize {
        self.objective.len()
    }

    /// Appends a row.
    pub fn add_row(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        self.rows.push(LpRow {
            coeffs,
            relation,
            rhs,
        });
    }

    fn validate(&self) -> Result<()> {
        let n = self.n_vars();
        if self.bounds.len() != n {
            return Err(Error::InvalidInput(format!(
                "{} bounds for {n} variables",
                self.bounds.len()
            )));
        }
        for (j, &(l, u)) in self.bounds.iter().enumerate() {
            if !l.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "variable {j} has a non-finite lower bound; only finite lower bounds are supported"
                )));
            }
            if u.is_nan() || u < l {
                return Err(Error::InvalidInput(format!(
                    "variable {j} has an empty bound interval [{l}, {u}]"
                )));
            }
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.coeffs.len() != n {
                return Err(Error::InvalidInput(format!(
                    "row {i} has {} coefficients for {n} variables",
                    row.coeffs.len()
                )));
            }
            if row.coeffs.iter().any(|c| !c.is_finite()) || !row.rhs.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "row {i} has non-finite entries"
                )));
            }
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput(
                "objective has non-finite entries".into(),
            ));
        }
        Ok(())
    }
}

/// Solver verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    /// An optimal basic solution was found.
    Optimal,
    /// No point satisfies all rows and bounds.
    Infeasible,
    /// The objective decreases without bound.
    Unbounded,
    /// The pivot budget ran out first.
    IterationLimit,
}

/// Solver output. When `status` is [`LpStatus::Optimal`] the violations are
/// small (they are recomputed from the original problem data at the returned
/// point, not read off the tableau).
#[derive(Debug, Clone)]
pub struct LpSolution {
    /// Verdict.
    pub status: LpStatus,
    /// Objective value `c . x` at the returned point.
    pub objective: f64,
    /// The returned point (meaningful only for `Optimal`).
    pub x: Vec<f64>,
    /// Largest violation of any row or bound at `x`.
    pub max_primal_violation: f64,
    /// Largest optimality violation among nonbasic reduced costs.
    pub max_dual_violation: f64,
    /// Pivots performed across both phases (bound flips included).
    pub pivots: u64,
    /// How many of the pivots were bound flips (no basis change).
    pub bound_flips: u64,
}

/// All numeric knobs of the LP layer, in one place.
#[derive(Debug, Clone, Copy)]
pub struct LpConfig {
    /// Minimum magnitude of a pivot element (1e-9).
    pub pivot_tol: f64,
    /// Feasibility tolerance: phase-1 residual and violation checks (1e-7).
    pub feas_tol: f64,
    /// Optimality tolerance on reduced costs (1e-7).
    pub dual_tol: f64,
    /// Tolerance when comparing objective values, e.g. deciding that a
    /// best-achievable error meets a target (1e-6).
    pub obj_tol: f64,
    /// Total pivot budget across both phases.
    pub max_pivots: u64,
    /// Largest Boolean-function arity admitted to LP-based analyses (the
    /// LP then has about `2^(n+1)` columns).
    pub guard_n: u32,
}

impl Default for LpConfig {
    fn default() -> Self {
        Self {
            pivot_tol: 1e-9,
            feas_tol: 1e-7,
            dual_tol: 1e-7,
            obj_tol: 1e-6,
            max_pivots: 1_000_000,
            guard_n: 14,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VarState {
    AtLower,
    AtUpper,
    Basic,
}

/// Pivots between scheduled refactorizations. Incremental tableau updates
/// drift by roughly machine epsilon over the pivot magnitude per step, so
/// a periodic rebuild from the original data keeps long degenerate runs
/// numerically sound; one refactorization costs on the order of the row
/// count times one pivot.
const COST_REFRESH_INTERVAL: u64 = 1024;

/// Result of the ratio test.
enum RatioOutcome {
    /// No finite step: the objective ray is unbounded.
    Unbounded,
    /// The entering variable reaches its other bound first.
    BoundFlip { delta: f64 },
    /// A basic variable reaches a bound first and leaves.
    Leave {
        row: usize,
        to_upper: bool,
        delta: f64,
    },
}

struct Tableau {
    m: usize,
    cols: usize,
    /// Row-major `m x cols` tableau `B^-1 A`.
    t: Vec<f64>,
    /// Current values of the basic variables (shifted space).
    xb: Vec<f64>,
    /// Basic variable of each row.
    basis: Vec<usize>,
    /// State of every column.
    state: Vec<VarState>,
    /// Shifted upper bounds (lower bounds are all zero after shifting).
    upper: Vec<f64>,
    /// Reduced costs for the current phase.
    d: Vec<f64>,
    /// Column costs of the current phase, kept for periodic recomputation
    /// of the reduced costs (they are updated incrementally and drift).
    cost: Vec<f64>,
    /// Original constraint matrix in the same shifted, sign-normalized
    /// orientation as the starting tableau (row-major `m x cols`), kept for
    /// refactorization.
    a0: Vec<f64>,
    /// Original right-hand side in the same orientation, kept for
    /// refactorization.
    b0: Vec<f64>,
    /// Pivot count at which the reduced costs are next rebuilt from
    /// scratch.
    next_refresh: u64,
    /// First artificial column (== number of structural + slack columns).
    first_artificial: usize,
    /// Per-row tie-break column for the lexicographic ratio test: the
    /// column whose original constraint coefficients were the given sign at
    /// this row and zero elsewhere (the row's artificial, or its slack).
    /// The tableau images of these columns are the signed columns of the
    /// basis inverse, which is exactly the data the lexicographic rule
    /// orders by. Empty when the caller cannot supply such columns; ties
    /// then fall back to the largest pivot magnitude.
    trackers: Vec<(usize, f64)>,
    /// Tracked objective of the current phase.
    obj: f64,
    pivots: u64,
    bound_flips: u64,
}

impl Tableau {
    #[inline]
    fn entry(&self, i: usize, j: usize) -> f64 {
        self.t[i * self.cols + j]
    }

    /// Dantzig pricing (most violated reduced cost) over the non-artificial
    /// columns. Returns the entering column and its direction (+1 from
    /// lower, -1 from upper).
    fn price(&self, cfg: &LpConfig) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64, f64)> = None; // (col, sigma, score)
        for j in 0..self.first_artificial {
            let (sigma, score) = match self.state[j] {
                VarState::AtLower => (1.0, -self.d[j]),
                VarState::AtUpper => (-1.0, self.d[j]),
                VarState::Basic => continue,
            };
            if score <= cfg.dual_tol {
                continue;
            }
            // Pinned variables (empty range) cannot move.
            if self.upper[j] <= 0.0 {
                continue;
            }
            match best {
                Some((_, _, s)) if s >= score => {}
                _ => best = Some((j, sigma, score)),
            }
        }
        best.map(|(j, sigma, _)| (j, sigma))
    }

    /// Step length along column `q` in direction `sigma` until a basic
    /// variable hits a bound, with the entering variable's own bound as a
    /// cap.
    fn ratio_test(&self, q: usize, sigma: f64, cfg: &LpConfig) -> RatioOutcome {
        let flip_delta = self.upper[q]; // possibly infinite
        let mut row_min = f64::INFINITY;
        for i in 0..self.m {
            let coef = sigma * self.entry(i, q);
            let ratio = if coef > cfg.pivot_tol {
                // Basic variable decreases toward 0.
                self.xb[i].max(0.0) / coef
            } else if coef < -cfg.pivot_tol {
                // Basic variable increases toward its upper bound.
                let ub = self.upper[self.basis[i]];
                if !ub.is_finite() {
                    continue;
                }
                (ub - self.xb[i]).max(0.0) / -coef
            } else {
                continue;
            };
            if ratio < row_min {
                row_min = ratio;
            }
        }
        if row_min >= flip_delta {
            // The entering variable's own bound binds first (ties prefer the
            // cheap flip). An infinite flip bound with no binding row is a
            // ray.
            return if flip_delta.is_finite() {
                RatioOutcome::BoundFlip { delta: flip_delta }
            } else {
                RatioOutcome::Unbounded
            };
        }
        // Collect the rows tied (within rounding) at the best step, then
        // break the tie lexicographically: compare the tied rows' tracker
        // entries (signed basis-inverse columns) divided by the pivot
        // coefficient, in fixed row order, and take the smallest. This is
        // the classical perturbation argument made exact — every pivot
        // strictly decreases the lexicographically-augmented basic values,
        // so no basis ever repeats, degenerate plateaus included. Without
        // trackers, ties fall back to the largest pivot magnitude.
        let tie = row_min + 1e-9 * (1.0 + row_min);
        let mut candidates: Vec<(usize, bool, f64, f64)> = Vec::new(); // (row, to_upper, ratio, coef)
        for i in 0..self.m {
            let coef = sigma * self.entry(i, q);
            let (ratio, to_upper) = if coef > cfg.pivot_tol {
                (self.xb[i].max(0.0) / coef, false)
            } else if coef < -cfg.pivot_tol {
                let ub = self.upper[self.basis[i]];
                if !ub.is_finite() {
                    continue;
                }
                ((ub - self.xb[i]).max(0.0) / -coef, true)
            } else {
                continue;
            };
            if ratio <= tie {
                candidates.push((i, to_upper, ratio, coef));
            }
        }
        let &(row, to_upper, delta, _) = match candidates.as_slice() {
            [] => unreachable!("a binding row exists when row_min < flip"),
            [only] => only,
            _ if self.trackers.is_empty() => candidates
                .iter()
                .max_by(|a, b| a.3.abs().total_cmp(&b.3.abs()))
                .expect("candidates are nonempty"),
            _ => self.lexicographic_min(&candidates),
        };
        RatioOutcome::Leave {
            row,
            to_upper,
            delta: delta.max(0.0),
        }
    }

    /// The candidate whose tie-break key (tracker entries over the pivot
    /// coefficient, in fixed row order) is lexicographically smallest. Rows
    /// of the basis inverse are linearly independent, so two candidates
    /// never share a whole key and the winner is unique.
    fn lexicographic_min<'c>(
        &self,
        candidates: &'c [(usize, bool, f64, f64)],
    ) -> &'c (usize, bool, f64, f64) {
        let mut best = &candidates[0];
        for c in &candidates[1..] {
            for &(col, sign) in &self.trackers {
                let bv = sign * self.entry(best.0, col) / best.3;
                let cv = sign * self.entry(c.0, col) / c.3;
                if cv < bv {
                    best = c;
                    break;
                }
                if cv > bv {
                    break;
                }
            }
        }
        best
    }

    /// Moves entering column `q` by `delta` in direction `sigma`, updating
    /// the basic values and the tracked objective.
    fn apply_move(&mut self, q: usize, sigma: f64, delta: f64) {
        if delta != 0.0 {
            for i in 0..self.m {
                let coef = self.entry(i, q);
                if coef != 0.0 {
                    self.xb[i] -= sigma * delta * coef;
                }
            }
            self.obj += self.d[q] * sigma * delta;
        }
    }

    /// Full pivot: entering `q` replaces the basic variable of `row`.
    fn pivot(&mut self, row: usize, q: usize, sigma: f64, delta: f64, leave_to_upper: bool) {
        let entering_value = match self.state[q] {
            VarState::AtLower => sigma * delta,
            VarState::AtUpper => self.upper[q] + sigma * delta,
            VarState::Basic => unreachable!("entering column is nonbasic"),
        };
        self.apply_move(q, sigma, delta);
        let leaving = self.basis[row];
        self.state[leaving] = if leave_to_upper {
            VarState::AtUpper
        } else {
            VarState::AtLower
        };
        self.state[q] = VarState::Basic;
        self.basis[row] = q;
        self.xb[row] = entering_value;

        // Eliminate column q from every other row and from the reduced costs.
        let cols = self.cols;
        let piv = self.t[row * cols + q];
        debug_assert!(piv != 0.0);
        let inv = 1.0 / piv;
        {
            let r = &mut self.t[row * cols..(row + 1) * cols];
            for v in r.iter_mut() {
                *v *= inv;
            }
            r[q] = 1.0; // cancel rounding on the pivot itself
        }
        for i in 0..self.m {
            if i == row {
                continue;
            }
            let factor = self.t[i * cols + q];
            if factor == 0.0 {
                continue;
            }
            let (src, dst) = if row < i {
                let (head, tail) = self.t.split_at_mut(i * cols);
                (&head[row * cols..row * cols + cols], &mut tail[..cols])
            } else {
                let (head, tail) = self.t.split_at_mut(row * cols);
                (&tail[..cols], &mut head[i * cols..i * cols + cols])
            };
            for (d, s) in dst.iter_mut().zip(src.iter()) {
                *d -= factor * s;
            }
            dst[q] = 0.0; // exact zero instead of rounding residue
        }
        let dq = self.d[q];
        if dq != 0.0 {
            let src = &self.t[row * cols..(row + 1) * cols];
            for (d, s) in self.d.iter_mut().zip(src.iter()) {
                *d -= dq * s;
            }
        }
        self.d[q] = 0.0;
        self.pivots += 1;
    }

    /// Bound flip: entering `q` jumps to its other bound without a basis
    /// change.
    fn bound_flip(&mut self, q: usize, sigma: f64, delta: f64) {
        self.apply_move(q, sigma, delta);
        self.state[q] = match self.state[q] {
            VarState::AtLower => VarState::AtUpper,
            VarState::AtUpper => VarState::AtLower,
            VarState::Basic => unreachable!("flipping column is nonbasic"),
        };
        self.pivots += 1;
    }

    /// Runs simplex iterations on the current phase until optimality (`None`)
    /// or a terminal condition.
    fn iterate(&mut self, cfg: &LpConfig) -> Option<LpStatus> {
        // Whether the tableau has been refactorized since the last pivot;
        // a verdict derived from factorization-grade data is final, while
        // one derived from drifted increments is re-checked once.
        let mut fresh = false;
        loop {
            if self.pivots >= cfg.max_pivots {
                return Some(LpStatus::IterationLimit);
            }
            if self.pivots >= self.next_refresh {
                fresh = self.refactorize();
            }
            let Some((q, sigma)) = self.price(cfg) else {
                // Nothing prices as improving: optimal, if the numbers can
                // be trusted. Rebuild once and re-price, so both the verdict
                // and the solution handed to the caller rest on recomputed
                // data.
                if fresh || !self.refactorize() {
                    return None;
                }
                fresh = true;
                continue;
            };
            match self.ratio_test(q, sigma, cfg) {
                RatioOutcome::Unbounded => {
                    // An improving column with no binding row is a genuine
                    // ray only when the tableau is sound; drift can decay a
                    // column's entries below the pivot tolerance and
                    // fabricate one. Rebuild once and re-derive the verdict.
                    if fresh || !self.refactorize() {
                        return Some(LpStatus::Unbounded);
                    }
                    fresh = true;
                }
                RatioOutcome::BoundFlip { delta } => {
                    fresh = false;
                    self.bound_flips += 1;
                    self.bound_flip(q, sigma, delta);
                }
                RatioOutcome::Leave {
                    row,
                    to_upper,
                    delta,
                } => {
                    fresh = false;
                    self.pivot(row, q, sigma, delta, to_upper);
                }
            }
        }
    }

    /// Recomputes reduced costs and the tracked objective for the given
    /// column costs.
    fn load_costs(&mut self, cost: &[f64]) {
        self.cost.copy_from_slice(cost);
        self.next_refresh = self.pivots + COST_REFRESH_INTERVAL;
        self.d.copy_from_slice(cost);
        for i in 0..self.m {
            let cb = cost[self.basis[i]];
            if cb != 0.0 {
                let row = &self.t[i * self.cols..(i + 1) * self.cols];
                for (d, r) in self.d.iter_mut().zip(row.iter()) {
                    *d -= cb * r;
                }
            }
        }
        // Basic columns have zero reduced cost by construction; enforce it
        // exactly to keep pricing honest.
        for &b in &self.basis {
            self.d[b] = 0.0;
        }
        self.obj = 0.0;
        for j in 0..self.cols {
            if self.state[j] == VarState::AtUpper {
                self.obj += cost[j] * self.upper[j];
            }
        }
        for i in 0..self.m {
            self.obj += cost[self.basis[i]] * self.xb[i];
        }
    }

    /// Rebuilds the reduced costs and tracked objective from the stored
    /// phase costs, discarding accumulated incremental-update error.
    fn refresh_costs(&mut self) {
        let cost = self.cost.clone();
        self.load_costs(&cost);
    }

    /// Rebuilds the tableau from first principles: inverts the current
    /// basis matrix out of the stored original columns, recomputes the
    /// tableau as that inverse applied to the original matrix, and rebuilds
    /// the basic values, reduced costs and objective. Incremental pivot
    /// updates drift — a tiny pivot element amplifies rounding error by its
    /// reciprocal — and this resets the run to factorization-grade
    /// accuracy. Returns `false`, leaving the state untouched, when the
    /// original data is unavailable or the basis matrix is numerically
    /// singular.
    fn refactorize(&mut self) -> bool {
        self.next_refresh = self.pivots + COST_REFRESH_INTERVAL;
        if self.a0.is_empty() {
            return false;
        }
        let m = self.m;
        let cols = self.cols;
        // Gauss-Jordan with partial pivoting on [B | I] to get the basis
        // inverse.
        let w = 2 * m;
        let mut work = vec![0.0; m * w];
        for i in 0..m {
            for (k, &bcol) in self.basis.iter().enumerate() {
                work[i * w + k] = self.a0[i * cols + bcol];
            }
            work[i * w + m + i] = 1.0;
        }
        for col in 0..m {
            let mut piv_row = col;
            let mut piv_val = work[col * w + col].abs();
            for r in col + 1..m {
                let v = work[r * w + col].abs();
                if v > piv_val {
                    piv_val = v;
                    piv_row = r;
                }
            }
            if piv_val <= 1e-12 {
                return false;
            }
            if piv_row != col {
                for j in 0..w {
                    work.swap(col * w + j, piv_row * w + j);
                }
            }
            let inv = 1.0 / work[col * w + col];
            for v in &mut work[col * w..(col + 1) * w] {
                *v *= inv;
            }
            work[col * w + col] = 1.0;
            for r in 0..m {
                if r == col {
                    continue;
                }
                let factor = work[r * w + col];
                if factor == 0.0 {
                    continue;
                }
                let (src, dst) = if col < r {
                    let (head, tail) = work.split_at_mut(r * w);
                    (&head[col * w..col * w + w], &mut tail[..w])
                } else {
                    let (head, tail) = work.split_at_mut(col * w);
                    (&tail[..w], &mut head[r * w..r * w + w])
                };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    *d -= factor * s;
                }
                dst[col] = 0.0;
            }
        }
        let binv = |i: usize, k: usize| work[i * w + m + k];
        // t = Binv * a0, with the basic columns snapped to exact units.
        let mut t = vec![0.0; m * cols];
        for i in 0..m {
            let dst = &mut t[i * cols..(i + 1) * cols];
            for k in 0..m {
                let factor = binv(i, k);
                if factor != 0.0 {
                    let src = &self.a0[k * cols..(k + 1) * cols];
                    for (d, s) in dst.iter_mut().zip(src.iter()) {
                        *d += factor * s;
                    }
                }
            }
        }
        for (k, &bcol) in self.basis.iter().enumerate() {
            for i in 0..m {
                t[i * cols + bcol] = if i == k { 1.0 } else { 0.0 };
            }
        }
        self.t = t;
        // xb = Binv * b0 minus the nonbasic columns parked at their upper
        // bounds.
        let mut xb = vec![0.0; m];
        for (i, v) in xb.iter_mut().enumerate() {
            for k in 0..m {
                *v += binv(i, k) * self.b0[k];
            }
        }
        for j in 0..cols {
            if self.state[j] == VarState::AtUpper {
                let u = self.upper[j];
                if u != 0.0 {
                    for (i, v) in xb.iter_mut().enumerate() {
                        *v -= u * self.entry(i, j);
                    }
                }
            }
        }
        self.xb = xb;
        self.refresh_costs();
        true
    }
}

/// Solves the problem. Structural errors (wrong lengths, non-finite input,
/// infinite lower bounds) are reported as `Err`; infeasibility, unboundedness
/// and an exhausted pivot budget are reported through [`LpSolution::status`].
pub fn solve(problem: &LpProblem, cfg: &LpConfig) -> Result<LpSolution> {
    problem.validate()?;
    let n = problem.n_vars();
    let m = problem.rows.len();

    // Shift every variable by its (finite) lower bound so working bounds are
    // [0, upper - lower], and normalize Ge rows to Le by negation; a row is
    // negated once more if its shifted rhs is negative, so every starting
    // basic value is nonnegative.
    let lower: Vec<f64> = problem.bounds.iter().map(|&(l, _)| l).collect();
    let n_slack = problem
        .rows
        .iter()
        .filter(|r| r.relation != Relation::Eq)
        .count();

    let mut row_data: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut rhs: Vec<f64> = Vec::with_capacity(m);
    let mut slack_sign: Vec<f64> = Vec::with_capacity(m); // 0.0 for Eq rows
    let mut next_slack = n;
    let mut slack_col: Vec<Option<usize>> = Vec::with_capacity(m);
    for row in &problem.rows {
        let ge = row.relation == Relation::Ge;
        let mut sign = if ge { -1.0 } else { 1.0 };
        let shifted: f64 = sign * row.rhs
            - row
                .coeffs
                .iter()
                .zip(&lower)
                .map(|(c, l)| sign * c * l)
                .sum::<f64>();
        let mut b = shifted;
        // Second negation when the shifted rhs is negative.
        if b < 0.0 {
            sign = -sign;
            b = -b;
        }
        row_data.push(row.coeffs.iter().map(|&c| sign * c).collect());
        rhs.push(b);
        if row.relation == Relation::Eq {
            slack_sign.push(0.0);
            slack_col.push(None);
        } else {
            // The slack was defined with +1 for the Le orientation; it keeps
            // the row's accumulated sign.
            slack_sign.push(if ge { -sign } else { sign });
            slack_col.push(Some(next_slack));
            next_slack += 1;
        }
    }

    // Starting basis: the row's slack when it is feasible there (sign +1 and
    // rhs within its range, i.e. sign +1 since slacks are unbounded above),
    // otherwise a fresh artificial. The starting basic column of each row
    // doubles as its lexicographic tracker: every one is a +1 unit column
    // of the original constraint matrix.
    let first_artificial = n + n_slack;
    let mut basis = Vec::with_capacity(m);
    let mut trackers = Vec::with_capacity(m);
    let mut n_art = 0usize;
    for i in 0..m {
        match (slack_col[i], slack_sign[i] > 0.0) {
            (Some(s), true) => basis.push(s),
            _ => {
                basis.push(first_artificial + n_art);
                n_art += 1;
            }
        }
        trackers.push((basis[i], 1.0));
    }
    let cols = first_artificial + n_art;

    // Assemble the dense tableau. The starting basis matrix is the identity
    // (unit slack or artificial columns), so the tableau starts as the
    // constraint matrix itself.
    let mut t = vec![0.0; m * cols];
    {
        let mut art_seen = 0usize;
        for i in 0..m {
            t[i * cols..i * cols + n].copy_from_slice(&row_data[i]);
            if let Some(s) = slack_col[i] {
                t[i * cols + s] = slack_sign[i];
            }
            if basis[i] >= first_artificial {
                t[i * cols + first_artificial + art_seen] = 1.0;
                art_seen += 1;
            }
        }
    }
    drop(row_data);

    let mut upper = Vec::with_capacity(cols);
    upper.extend(problem.bounds.iter().map(|&(l, u)| u - l));
    upper.extend(std::iter::repeat(f64::INFINITY).take(n_slack + n_art));
    let mut state = vec![VarState::AtLower; cols];
    for &b in &basis {
        state[b] = VarState::Basic;
    }

    let mut tab = Tableau {
        m,
        cols,
        a0: t.clone(),
        t,
        xb: rhs.clone(),
        basis,
        state,
        upper,
        d: vec![0.0; cols],
        cost: vec![0.0; cols],
        b0: rhs,
        next_refresh: COST_REFRESH_INTERVAL,
        first_artificial,
        trackers,
        obj: 0.0,
        pivots: 0,
        bound_flips: 0,
    };

    // Phase 1: minimize the sum of artificials, if any are present.
    if n_art > 0 {
        let mut cost1 = vec![0.0; cols];
        for c in cost1.iter_mut().skip(first_artificial) {
            *c = 1.0;
        }
        tab.load_costs(&cost1);
        if let Some(stopped) = tab.iterate(cfg) {
            // Phase 1 is bounded below by zero, so a ray here is impossible;
            // only the pivot budget can stop it.
            return Ok(extract(problem, &lower, &tab, stopped));
        }
        let residual: f64 = (0..tab.m)
            .filter(|&i| tab.basis[i] >= tab.first_artificial)
            .map(|i| tab.xb[i].max(0.0))
            .sum();
        if residual > cfg.feas_tol {
            return Ok(extract(problem, &lower, &tab, LpStatus::Infeasible));
        }
        // Pivot lingering artificials (basic at ~zero) out of the basis where
        // possible; rows admitting no pivot are redundant and keep their
        // artificial pinned at zero harmlessly.
        for i in 0..tab.m {
            if tab.basis[i] < tab.first_artificial {
                continue;
            }
            let mut best: Option<(usize, f64)> = None;
            for j in 0..tab.first_artificial {
                if tab.state[j] == VarState::Basic {
                    continue;
                }
                let mag = tab.entry(i, j).abs();
                if mag > cfg.pivot_tol && best.map_or(true, |(_, b)| mag > b) {
                    best = Some((j, mag));
                }
            }
            if let Some((j, _)) = best {
                let sigma = if tab.state[j] == VarState::AtUpper {
                    -1.0
                } else {
                    1.0
                };
                tab.pivot(i, j, sigma, 0.0, false);
            }
        }
        // Artificial columns are retained through phase 2: they are never
        // priced, and their tableau entries are the basis-inverse columns
        // the lexicographic ratio test orders by.
    }

    // Phase 2: the real objective.
    Ok(finish_phase2(problem, &lower, tab, cfg))
}

/// Loads the real objective into a primal-feasible tableau, iterates to
/// termination, and extracts the solution.
fn finish_phase2(
    problem: &LpProblem,
    lower: &[f64],
    mut tab: Tableau,
    cfg: &LpConfig,
) -> LpSolution {
    let n = problem.n_vars();
    let mut cost = vec![0.0; tab.cols];
    cost[..n].copy_from_slice(&problem.objective);
    tab.load_costs(&cost);
    let status = match tab.iterate(cfg) {
        None => LpStatus::Optimal,
        Some(s) => s,
    };
    extract(problem, lower, &tab, status)
}

/// A caller-supplied primal-feasible starting basis for [`solve_prepared`]:
/// the full simplex tableau of that basis (`B^-1 A`, row-major `m` by
/// `n_vars`), the basic values `B^-1 b`, and the basic column of each row.
/// Every non-basic column is taken to sit at its lower bound. `trackers`
/// optionally names, per row, a column of the constraint matrix that is the
/// given sign times the unit vector of that row; when a full set is
/// supplied the ratio test breaks ties lexicographically instead of by
/// pivot magnitude.
pub(crate) struct PreparedBasis {
    pub tableau: Vec<f64>,
    pub basic_values: Vec<f64>,
    pub basis: Vec<usize>,
    pub trackers: Vec<(usize, f64)>,
}

/// Solves a problem whose feasible starting basis is already known,
/// entering phase 2 directly on the supplied tableau. The problem must be
/// in the standardized shape the tableau assumes: every row an equality
/// and every lower bound zero. The start must be primal feasible; a wrong
/// tableau is not trusted blindly, since the reported violations are
/// recomputed from the original problem data.
pub(crate) fn solve_prepared(
    problem: &LpProblem,
    start: PreparedBasis,
    cfg: &LpConfig,
) -> Result<LpSolution> {
    problem.validate()?;
    let n = problem.n_vars();
    let m = problem.rows.len();
    if problem.rows.iter().any(|r| r.relation != Relation::Eq)
        || problem.bounds.iter().any(|&(l, _)| l != 0.0)
    {
        return Err(Error::Internal(
            "prepared starts need all-equality rows and zero lower bounds".into(),
        ));
    }
    if start.tableau.len() != m * n || start.basic_values.len() != m || start.basis.len() != m {
        return Err(Error::Internal(
            "prepared start shape does not match the problem".into(),
        ));
    }
    if !start.trackers.is_empty()
        && (start.trackers.len() != m || start.trackers.iter().any(|&(c, _)| c >= n))
    {
        return Err(Error::Internal(
            "prepared trackers must name one in-range column per row".into(),
        ));
    }
    let mut state = vec![VarState::AtLower; n];
    for (i, &b) in start.basis.iter().enumerate() {
        if b >= n || state[b] == VarState::Basic {
            return Err(Error::Internal(
                "prepared basis is out of range or repeats a column".into(),
            ));
        }
        state[b] = VarState::Basic;
        let v = start.basic_values[i];
        if v < -cfg.feas_tol || v > problem.bounds[b].1 + cfg.feas_tol {
            return Err(Error::Internal(
                "prepared basis is not primal feasible".into(),
            ));
        }
    }
    let lower = vec![0.0; n];
    let upper: Vec<f64> = problem.bounds.iter().map(|&(_, u)| u).collect();
    // All rows are equalities with no added columns, so the problem data
    // itself is the original matrix for refactorization.
    let mut a0 = vec![0.0; m * n];
    let mut b0 = vec![0.0; m];
    for (i, row) in problem.rows.iter().enumerate() {
        a0[i * n..(i + 1) * n].copy_from_slice(&row.coeffs);
        b0[i] = row.rhs;
    }
    let tab = Tableau {
        m,
        cols: n,
        t: start.tableau,
        xb: start.basic_values,
        basis: start.basis,
        state,
        upper,
        d: vec![0.0; n],
        cost: vec![0.0; n],
        a0,
        b0,
        next_refresh: COST_REFRESH_INTERVAL,
        first_artificial: n,
        trackers: Vec::new(),
        obj: 0.0,
        pivots: 0,
        bound_flips: 0,
    };
    Ok(finish_phase2(problem, &lower, tab, cfg))
}

/// Builds the solution report from the final tableau, recomputing the
/// objective and all violations from the original problem data.
fn extract(problem: &LpProblem, lower: &[f64], tab: &Tableau, status: LpStatus) -> LpSolution {
    let n = problem.n_vars();
    let mut pos = vec![usize::MAX; tab.cols];
    for (i, &b) in tab.basis.iter().enumerate() {
        pos[b] = i;
    }
    let mut x = vec![0.0; n];
    for j in 0..n {
        let shifted = match tab.state[j] {
            VarState::AtLower => 0.0,
            VarState::AtUpper => tab.upper[j],
            VarState::Basic => tab.xb[pos[j]],
        };
        x[j] = lower[j] + shifted;
    }
    let objective: f64 = problem.objective.iter().zip(&x).map(|(c, v)| c * v).sum();

    let mut primal = 0.0f64;
    for (j, &(l, u)) in problem.bounds.iter().enumerate() {
        primal = primal.max(l - x[j]).max(x[j] - u);
    }
    for row in &problem.rows {
        let ax: f64 = row.coeffs.iter().zip(&x).map(|(c, v)| c * v).sum();
        let viol = match row.relation {
            Relation::Le => ax - row.rhs,
            Relation::Ge => row.rhs - ax,
            Relation::Eq => (ax - row.rhs).abs(),
        };
        primal = primal.max(viol);
    }
    primal = primal.max(0.0);

    let mut dual = 0.0f64;
    if status == LpStatus::Optimal {
        for j in 0..tab.first_artificial.min(tab.cols) {
            let v = match tab.state[j] {
                VarState::AtLower => -tab.d[j],
                VarState::AtUpper => tab.d[j],
                VarState::Basic => continue,
            };
            if tab.upper[j] > 0.0 {
                dual = dual.max(v);
            }
        }
    }

    LpSolution {
        status,
        objective,
        x,
        max_primal_violation: primal,
        max_dual_violation: dual,
        pivots: tab.pivots,
        bound_flips: tab.bound_flips,
    }
}
