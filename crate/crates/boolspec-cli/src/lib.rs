//! Implementation of the `boolspec` command-line tool.
//!
//! Each subcommand is a library function that returns the text it prints
//! (reports as JSON, sweeps as CSV), so outputs are testable byte-for-byte
//! without spawning processes. File outputs are written beneath a caller
//! supplied directory with fixed names, which keeps invocations
//! reproducible: identical inputs produce identical bytes everywhere.
//!
//! Error handling follows the crate it fronts: user mistakes (bad paths,
//! malformed files, out-of-family inputs) are [`Error::InvalidInput`],
//! size guards are [`Error::ResourceLimit`], and broken internal invariants
//! are [`Error::Internal`]. The binary maps those onto exit codes 2, 3 and
//! 4 respectively.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use boolspec::approxlp::{
    LpConfig, approx_degree, approx_spectral_norm, cs_bound_log2,
};
use boolspec::boolfn::{BooleanTable, FunctionFile, LoadedFunction, TruthTable};
use boolspec::constructions::{BlockLayout, parity_hadamard};
use boolspec::liftlab::lift_bound_check;
use boolspec::poly::MultilinearPolynomial;
use boolspec::qsim::{QueryBreakdown, Simulator};
use boolspec::{Error, Result};

/// Fixed CSV header of the sweep table.
pub const SWEEP_HEADER: &str = "l,k,n_bits,promise_count,sim_total_queries,min_succ_promise,min_succ_nonpromise,adeg_F,log2_specnorm_F,proof_floor,cs_upper_bound";

/// Default sweep grid.
pub const DEFAULT_GRID: &str = "2x2,2x4,4x2,4x4";

/// Tunables shared by the LP-backed subcommands.
#[derive(Debug, Clone, Copy)]
pub struct LpOptions {
    /// Objective comparison tolerance (`--tol`).
    pub tol: f64,
    /// Largest function arity admitted to LP analyses (`--guard-n`).
    pub guard_n: u32,
}

impl Default for LpOptions {
    fn default() -> Self {
        let cfg = LpConfig::default();
        Self {
            tol: cfg.obj_tol,
            guard_n: cfg.guard_n,
        }
    }
}

impl LpOptions {
    /// Expands into a full solver configuration.
    pub fn config(&self) -> LpConfig {
        LpConfig {
            obj_tol: self.tol,
            guard_n: self.guard_n,
            ..LpConfig::default()
        }
    }
}

fn write_text(dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, text)
        .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)
        .map_err(|e| Error::InvalidInput(format!("cannot create {}: {e}", dir.display())))
}

fn to_json_line(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Embeds a polynomial into a report as structured JSON.
fn poly_value(p: &MultilinearPolynomial) -> serde_json::Value {
    serde_json::from_str(&p.to_json()).expect("polynomial JSON parses back")
}

/// Generates the addressed-parity family instance `(ell, k)`: the total
/// function, its promise version, and the variable layout, written as
/// `function.json`, `promise.json` and `layout.json` under `out`. Returns
/// the printed summary.
pub fn cmd_gen(ell: u32, k: u32, out: &Path) -> Result<String> {
    let built = parity_hadamard(ell, k)?;
    ensure_dir(out)?;
    let function = write_text(
        out,
        "function.json",
        &FunctionFile::from_total(&built.total).to_json(),
    )?;
    let promise = write_text(
        out,
        "promise.json",
        &FunctionFile::from_partial(&built.promise).to_json(),
    )?;
    let layout = write_text(out, "layout.json", &built.layout.to_json())?;

    #[derive(Serialize)]
    struct GenSummary {
        ell: u32,
        k: u32,
        n: u32,
        promise_count: u64,
        function: String,
        promise: String,
        layout: String,
    }
    Ok(to_json_line(&GenSummary {
        ell,
        k,
        n: built.layout.n_vars(),
        promise_count: built.promise.defined_count(),
        function: function.display().to_string(),
        promise: promise.display().to_string(),
        layout: layout.display().to_string(),
    }))
}

#[derive(Serialize)]
struct FourierStats {
    spectral_norm: f64,
    min_entropy: f64,
    influence: f64,
}

#[derive(Serialize)]
struct DegreeSection {
    epsilon: f64,
    degree: u32,
    profile: Vec<(u32, f64)>,
    witness: serde_json::Value,
}

#[derive(Serialize)]
struct NormSection {
    epsilon: f64,
    value: f64,
    witness: serde_json::Value,
}

#[derive(Serialize)]
struct AnalyzeReport {
    n: u32,
    kind: String,
    defined_count: u64,
    /// Exact-spectrum statistics; present only for total functions.
    fourier: Option<FourierStats>,
    approx_degree: DegreeSection,
    approx_spectral_norm: NormSection,
}

/// Analyzes a function file: exact spectrum statistics (total functions),
/// LP approximate degree with its error profile, and LP approximate
/// spectral norm, each with an explicit witness. With `out` set, writes
/// `report.json`, `degree_witness.json` and `norm_witness.json`.
pub fn cmd_analyze(
    input: &Path,
    eps: f64,
    eps_degree: f64,
    opts: &LpOptions,
    out: Option<&Path>,
) -> Result<String> {
    let file = FunctionFile::from_json(&read_text(input)?)?;
    let loaded = file.decode()?;
    let cfg = opts.config();
    let promise = loaded.as_partial();

    let fourier = match &loaded {
        LoadedFunction::Total(t) => {
            let spectrum = t.spectrum();
            Some(FourierStats {
                spectral_norm: spectrum.spectral_norm(),
                min_entropy: spectrum.min_entropy()?,
                influence: spectrum.influence(),
            })
        }
        LoadedFunction::Partial(_) => None,
    };
    let degree = approx_degree(&promise, eps_degree, &cfg)?;
    let norm = approx_spectral_norm(&promise, eps, &cfg)?;

    let report = AnalyzeReport {
        n: loaded.n(),
        kind: file.kind.clone(),
        defined_count: promise.defined_count(),
        fourier,
        approx_degree: DegreeSection {
            epsilon: eps_degree,
            degree: degree.degree,
            profile: degree.profile.clone(),
            witness: poly_value(&degree.witness),
        },
        approx_spectral_norm: NormSection {
            epsilon: eps,
            value: norm.value,
            witness: poly_value(&norm.witness),
        },
    };
    let text = to_json_line(&report);
    if let Some(dir) = out {
        ensure_dir(dir)?;
        write_text(dir, "report.json", &text)?;
        write_text(dir, "degree_witness.json", &degree.witness.to_json())?;
        write_text(dir, "norm_witness.json", &norm.witness.to_json())?;
    }
    Ok(text)
}

/// Query counts in the report shape: oracle calls split by algorithm phase
/// plus classical reads, with the grand total.
#[derive(Serialize)]
struct QueriesSection {
    bv: u64,
    grover: u64,
    classical: u64,
    total: u64,
}

impl From<QueryBreakdown> for QueriesSection {
    fn from(q: QueryBreakdown) -> Self {
        Self {
            bv: q.bv_oracle,
            grover: q.search_oracle,
            classical: q.search_reads + q.output_reads,
            total: q.total(),
        }
    }
}

#[derive(Serialize)]
struct OutputDist {
    plus: f64,
    minus: f64,
}

#[derive(Serialize)]
struct SingleRunReport {
    input: String,
    true_value: i8,
    on_promise: bool,
    output_dist: OutputDist,
    success_prob: f64,
    queries: QueriesSection,
}

#[derive(Serialize)]
struct ExhaustiveRunReport {
    n: u32,
    promise_count: u64,
    min_success_promise: f64,
    min_success_nonpromise: f64,
    queries: QueriesSection,
}

/// Parses an assignment like `+-++` (character `i` is the sign of variable
/// `i`) into a point index.
fn parse_point(signs: &str, n: u32) -> Result<u64> {
    if signs.len() != n as usize {
        return Err(Error::InvalidInput(format!(
            "input has {} characters for {n} variables",
            signs.len()
        )));
    }
    let mut index = 0u64;
    for (i, ch) in signs.chars().enumerate() {
        match ch {
            '+' => {}
            '-' => index |= 1 << i,
            other => {
                return Err(Error::InvalidInput(format!(
                    "input character {i} is '{other}', expected '+' or '-'"
                )))
            }
        }
    }
    Ok(index)
}

fn render_point(index: u64, n: u32) -> String {
    (0..n)
        .map(|i| if index >> i & 1 == 1 { '-' } else { '+' })
        .collect()
}

/// Rebuilds the simulator for the family instance a function/layout pair
/// describes, verifying the files actually are that instance.
fn simulator_for(loaded: &LoadedFunction, layout: &BlockLayout) -> Result<Simulator> {
    let ell = layout.address_bits();
    if layout.target_count() != ell {
        return Err(Error::InvalidInput(format!(
            "layout has {} address bits but {} targets; the simulated family needs them equal",
            ell,
            layout.target_count()
        )));
    }
    let k = 2 * layout.blocks();
    let sim = Simulator::new(ell, k)?;
    let matches = match loaded {
        LoadedFunction::Total(t) => t.values() == sim.instance().total.values(),
        LoadedFunction::Partial(p) => p.values() == sim.instance().promise.values(),
    };
    if !matches {
        return Err(Error::InvalidInput(format!(
            "function file does not match the addressed-parity instance (ell, k) = ({ell}, {k})"
        )));
    }
    Ok(sim)
}

/// Simulates the quantum query algorithm on the family instance described
/// by `function`/`layout`: exhaustively over all inputs, or on the single
/// point `input` (a `+`/`-` string). With `out` set, also writes
/// `report.json`.
pub fn cmd_simulate(
    function: &Path,
    layout: &Path,
    input: Option<&str>,
    out: Option<&Path>,
) -> Result<String> {
    let loaded = FunctionFile::from_json(&read_text(function)?)?.decode()?;
    let layout = BlockLayout::from_json(&read_text(layout)?)?;
    if layout.n_vars() != loaded.n() {
        return Err(Error::InvalidInput(format!(
            "layout describes {} variables but the function has {}",
            layout.n_vars(),
            loaded.n()
        )));
    }
    let sim = simulator_for(&loaded, &layout)?;
    let text = match input {
        Some(signs) => {
            let point = parse_point(signs, loaded.n())?;
            let run = sim.run(point)?;
            to_json_line(&SingleRunReport {
                input: render_point(run.input, loaded.n()),
                true_value: run.true_value,
                on_promise: run.on_promise,
                output_dist: OutputDist {
                    plus: run.p_plus,
                    minus: run.p_minus,
                },
                success_prob: run.success,
                queries: sim.query_breakdown().into(),
            })
        }
        None => {
            let ex = sim.run_exhaustive()?;
            to_json_line(&ExhaustiveRunReport {
                n: ex.n_vars,
                promise_count: ex.promise_count,
                min_success_promise: ex.min_success_promise,
                min_success_nonpromise: ex.min_success_nonpromise,
                queries: ex.queries.into(),
            })
        }
    };
    if let Some(dir) = out {
        ensure_dir(dir)?;
        write_text(dir, "report.json", &text)?;
    }
    Ok(text)
}

/// Runs the composition lower-bound check for `(ell, k)` and reports it.
/// With `out` set, also writes `report.json`.
pub fn cmd_liftcheck(ell: u32, k: u32, opts: &LpOptions, out: Option<&Path>) -> Result<String> {
    let report = lift_bound_check(ell, k, &opts.config())?;
    let text = to_json_line(&report);
    if let Some(dir) = out {
        ensure_dir(dir)?;
        write_text(dir, "report.json", &text)?;
    }
    Ok(text)
}

/// Parses a grid spec like `2x2,2x4` into `(ell, k)` pairs.
pub fn parse_grid(spec: &str) -> Result<Vec<(u32, u32)>> {
    let mut grid = Vec::new();
    for cell in spec.split(',') {
        let (l, k) = cell.split_once('x').ok_or_else(|| {
            Error::InvalidInput(format!("grid cell {cell:?} is not of the form LxK"))
        })?;
        let parse = |s: &str| {
            s.trim()
                .parse::<u32>()
                .map_err(|_| Error::InvalidInput(format!("grid cell {cell:?} is not numeric")))
        };
        grid.push((parse(l)?, parse(k)?));
    }
    Ok(grid)
}

/// One sweep cell. LP-derived columns are empty when the instance exceeds
/// the LP guard; everything else is always present.
fn sweep_row(ell: u32, k: u32, opts: &LpOptions) -> Result<String> {
    let cfg = opts.config();
    let built = parity_hadamard(ell, k)?;
    let n_bits = built.layout.n_vars();
    let sim = Simulator::new(ell, k)?;
    let ex = sim.run_exhaustive()?;

    // The floor needs only the outer parity's degree, so it survives the
    // guard even when the composed function is too large for its own LPs.
    let outer = TruthTable::parity(k / 2)?;
    let outer_degree = approx_degree(&outer, 0.99, &cfg)?.degree;
    let proof_floor = f64::from(outer_degree) / 10.0 * f64::from(ell).log2();

    let (adeg, log2_norm, cs_bound) = if n_bits <= cfg.guard_n {
        let degree = approx_degree(&built.total, 1.0 / 3.0, &cfg)?.degree;
        let norm = approx_spectral_norm(&built.total, 1.0 / 3.0, &cfg)?.value;
        (
            degree.to_string(),
            norm.log2().to_string(),
            cs_bound_log2(n_bits, degree).to_string(),
        )
    } else {
        (String::new(), String::new(), String::new())
    };

    Ok(format!(
        "{ell},{k},{n_bits},{},{},{},{},{adeg},{log2_norm},{proof_floor},{cs_bound}",
        ex.promise_count,
        ex.queries.total(),
        ex.min_success_promise,
        ex.min_success_nonpromise,
    ))
}

/// Sweeps the grid into the fixed-header CSV. Rows appear in grid order.
/// The spectral columns are computed at error 1/3 (the analysis the table
/// summarizes is pinned there; use `analyze` for other targets). With `out`
/// set, the CSV is also written to that file path.
pub fn cmd_sweep(grid: &[(u32, u32)], opts: &LpOptions, out: Option<&Path>) -> Result<String> {
    let mut csv = String::from(SWEEP_HEADER);
    csv.push('\n');
    for &(ell, k) in grid {
        csv.push_str(&sweep_row(ell, k, opts)?);
        csv.push('\n');
    }
    if let Some(path) = out {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            ensure_dir(parent)?;
        }
        fs::write(path, &csv)
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(csv)
}

/// Exit code for an error, per the documented contract: 2 for invalid
/// input or undefined quantities, 3 for resource guards, 4 for internal
/// invariant violations.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) | Error::UndefinedQuantity(_) => 2,
        Error::ResourceLimit(_) => 3,
        Error::Internal(_) => 4,
    }
}
