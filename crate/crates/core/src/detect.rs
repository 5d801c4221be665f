//! Equivalent-mutant detection.
//!
//! For increasing nesting depths the program and its mutant are converted to
//! constraints, joined, and handed to the solver. A solution whose loop flags
//! are all false is a distinguishing input (checked by running both programs);
//! a solution with a raised flag only says the depth was too small for that
//! input, so the input is blocked and the search continues. When no solution
//! remains at the maximal depth the mutant is reported equivalent — a claim
//! bounded by that depth and the integer domain.

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constraint::{encode, join_programs, ConstraintSystem, SolveOutcome, Solver};
use crate::domain::{DomainConfig, DomainError};
use crate::lang::{run, Program, Value, VariableEnvironment, DEFAULT_MAX_STEPS};
use crate::mutation::Mutant;
use crate::ssa::{rename_for_mutant, to_ssa, SsaProgram};
use crate::unroll::eliminate_loops;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectorConfig {
    pub nd_initial: u32,
    pub nd_max: u32,
    pub domain: DomainConfig,
    pub max_blocking_rounds: usize,
    /// Step budget of the interpreter when validating witnesses.
    pub max_steps: u64,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        DetectorConfig {
            nd_initial: 2,
            nd_max: 5,
            domain: DomainConfig::default(),
            max_blocking_rounds: 1024,
            max_steps: DEFAULT_MAX_STEPS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("need 1 <= nd_initial ({0}) <= nd_max ({1})")]
    Depth(u32, u32),
    #[error(transparent)]
    Domain(#[from] DomainError),
}

impl DetectorConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.nd_initial < 1 || self.nd_initial > self.nd_max {
            return Err(ConfigError::Depth(self.nd_initial, self.nd_max));
        }
        self.domain.validate()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnknownReason {
    Timeout,
    BlockingRoundsExhausted,
}

/// An input on which program and mutant both terminate normally with different outputs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub input: VariableEnvironment,
    pub output_p: VariableEnvironment,
    pub output_m: VariableEnvironment,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// No distinguishing input needing at most this many iterations per loop entry.
    Equivalent(u32),
    NotEquivalent(Witness),
    Unknown(UnknownReason),
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Equivalent(_) => "equivalent",
            Verdict::NotEquivalent(_) => "not_equivalent",
            Verdict::Unknown(UnknownReason::Timeout) => "unknown_timeout",
            Verdict::Unknown(UnknownReason::BlockingRoundsExhausted) => "unknown_rounds",
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::NotEquivalent(w) => Some(w),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Detection {
    pub verdict: Verdict,
    /// Deepest nesting depth that was attempted.
    pub nd_reached: u32,
    pub elapsed: Duration,
    pub solver_calls: usize,
    pub blocked_inputs: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DetectError {
    #[error("invalid configuration: {0}")]
    Config(#[from] ConfigError),
    #[error("conversion failed: {0}")]
    Conversion(String),
    /// The solver proposed a witness the interpreter refutes: an encoding bug.
    #[error("witness {input} failed validation: {detail}")]
    WitnessValidationFailure { input: VariableEnvironment, detail: String },
    #[error("detection panicked: {0}")]
    Panicked(String),
}

fn ssa_at(p: &Program, nd: u32) -> Result<SsaProgram, DetectError> {
    let lfp = eliminate_loops(p, nd).map_err(|e| DetectError::Conversion(e.to_string()))?;
    to_ssa(&lfp).map_err(|e| DetectError::Conversion(e.to_string()))
}

/// Loop elimination, SSA conversion and encoding in one step.
pub fn convert(p: &Program, nd: u32, domain: &DomainConfig) -> Result<ConstraintSystem, DetectError> {
    Ok(encode(&ssa_at(p, nd)?, domain))
}

/// Per-depth SSA forms of one program, shared by all of its mutants.
#[derive(Debug, Default)]
pub struct ConversionCache {
    by_nd: Mutex<HashMap<u32, Arc<SsaProgram>>>,
}

impl ConversionCache {
    pub fn get(&self, p: &Program, nd: u32) -> Result<Arc<SsaProgram>, DetectError> {
        if let Some(s) = self.by_nd.lock().expect("cache lock").get(&nd) {
            return Ok(s.clone());
        }
        let s = Arc::new(ssa_at(p, nd)?);
        self.by_nd.lock().expect("cache lock").insert(nd, s.clone());
        Ok(s)
    }
}

/// Receives every joint system right after it is built.
pub type Observer<'a> = &'a (dyn Fn(u32, &ConstraintSystem) + Sync);

/// Decides whether `m` is equivalent to `p`.
pub fn detect(p: &Program, m: &Mutant, cfg: &DetectorConfig) -> Result<Detection, DetectError> {
    detect_programs(p, &m.program, cfg, &ConversionCache::default(), None)
}

/// [`detect`] on a bare mutant program, with a shared cache for `p` and an
/// optional observer of the systems handed to the solver.
pub fn detect_programs(
    p: &Program,
    m: &Program,
    cfg: &DetectorConfig,
    cache: &ConversionCache,
    observer: Option<Observer<'_>>,
) -> Result<Detection, DetectError> {
    cfg.validate()?;
    let start = Instant::now();
    let deadline = start.checked_add(cfg.domain.solver_timeout);
    let mut solver_calls = 0;
    let mut blocked_inputs = 0;
    let done = |verdict, nd, calls, blocked| Detection {
        verdict,
        nd_reached: nd,
        elapsed: start.elapsed(),
        solver_calls: calls,
        blocked_inputs: blocked,
    };

    let mut nd = cfg.nd_initial;
    loop {
        let ps = cache.get(p, nd)?;
        let ms = rename_for_mutant(&ssa_at(m, nd)?);
        let joint = join_programs(&ps, &ms, &cfg.domain).map_err(|e| DetectError::Conversion(e.to_string()))?;
        if let Some(obs) = observer {
            obs(nd, &joint);
        }
        // Blocking constraints live only in this solver: a higher depth starts clean.
        let mut solver = Solver::new(&joint);
        let mut rounds = 0;
        loop {
            solver_calls += 1;
            match solver.next_solution(deadline) {
                SolveOutcome::Timeout => {
                    return Ok(done(Verdict::Unknown(UnknownReason::Timeout), nd, solver_calls, blocked_inputs));
                }
                SolveOutcome::Unsat if nd >= cfg.nd_max => {
                    return Ok(done(Verdict::Equivalent(nd), nd, solver_calls, blocked_inputs));
                }
                SolveOutcome::Unsat => break,
                SolveOutcome::Solution(sol) => {
                    let raised = joint.flag_vars.iter().any(|f| sol.get(f) != Some(Value::Bool(false)));
                    let projection = joint.input_projection(&sol.assignment);
                    if !raised {
                        let witness = validate_witness(p, m, &ps, &ms, &sol.assignment, cfg)?;
                        return Ok(done(Verdict::NotEquivalent(witness), nd, solver_calls, blocked_inputs));
                    }
                    rounds += 1;
                    if rounds > cfg.max_blocking_rounds {
                        return Ok(done(
                            Verdict::Unknown(UnknownReason::BlockingRoundsExhausted),
                            nd,
                            solver_calls,
                            blocked_inputs,
                        ));
                    }
                    blocked_inputs += 1;
                    solver.block(projection);
                }
            }
        }
        nd += 1;
    }
}

/// Runs both programs on the solution's inputs and cross-checks the outputs.
fn validate_witness(
    p: &Program,
    m: &Program,
    ps: &SsaProgram,
    ms: &SsaProgram,
    assignment: &VariableEnvironment,
    cfg: &DetectorConfig,
) -> Result<Witness, DetectError> {
    let input: VariableEnvironment =
        ps.input_versions.iter().filter_map(|(base, v)| Some((base.clone(), assignment.get(v)?))).collect();
    let fail = |detail: String| DetectError::WitnessValidationFailure { input: input.clone(), detail };
    let out_p = run(p, &input, &cfg.domain, cfg.max_steps).map_err(|e| fail(format!("program: {e}")))?.outputs;
    let out_m = run(m, &input, &cfg.domain, cfg.max_steps).map_err(|e| fail(format!("mutant: {e}")))?.outputs;
    if out_p == out_m {
        return Err(fail(format!("both produce {out_p}")));
    }
    for (side, s, out) in [("program", ps, &out_p), ("mutant", ms, &out_m)] {
        for (base, var) in s.output_versions() {
            if assignment.get(var) != out.get(base) {
                return Err(fail(format!("{side} output `{base}` disagrees with the solver")));
            }
        }
    }
    Ok(Witness { input, output_p: out_p, output_m: out_m })
}

/// Receives every joint system built during a batch, with its mutant's id.
pub type BatchObserver<'a> = &'a (dyn Fn(&str, u32, &ConstraintSystem) + Sync);

/// Detection for many mutants of `p`, run on up to `jobs` threads. Results
/// keep the input order; one failing mutant never affects the others.
pub fn batch_detect(
    p: &Program,
    mutants: &[Mutant],
    cfg: &DetectorConfig,
    jobs: usize,
    observer: Option<BatchObserver<'_>>,
) -> Vec<(String, Result<Detection, DetectError>)> {
    let cache = ConversionCache::default();
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Result<Detection, DetectError>>>> = Mutex::new(vec![None; mutants.len()]);
    let worker = || loop {
        let i = next.fetch_add(1, Ordering::Relaxed);
        let Some(m) = mutants.get(i) else { break };
        let obs_for = |nd: u32, cs: &ConstraintSystem| {
            if let Some(o) = observer {
                o(&m.id, nd, cs);
            }
        };
        let scoped: Option<Observer<'_>> = observer.map(|_| &obs_for as Observer<'_>);
        let r = catch_unwind(AssertUnwindSafe(|| detect_programs(p, &m.program, cfg, &cache, scoped))).unwrap_or_else(
            |e| {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                Err(DetectError::Panicked(msg))
            },
        );
        results.lock().expect("results lock")[i] = Some(r);
    };
    let jobs = jobs.clamp(1, mutants.len().max(1));
    if jobs == 1 {
        worker();
    } else {
        std::thread::scope(|s| {
            for _ in 0..jobs {
                s.spawn(worker);
            }
        });
    }
    let results = results.into_inner().expect("results lock");
    mutants
        .iter()
        .zip(results)
        .map(|(m, r)| (m.id.clone(), r.unwrap_or_else(|| Err(DetectError::Panicked("not run".into())))))
        .collect()
}
