//! Mutation scores and per-program run reports.

use std::fmt::{self, Write as _};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::detect::{batch_detect, BatchObserver, DetectError, DetectorConfig, Verdict, Witness};
use crate::lang::{classify_test, count_loc, interpret, parse, FrontendError, Program, TestCase, TestOutcome};
use crate::mutation::{generate_mutants, Mutant, OperatorClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error(
    "mutation score needs equivalent ({equivalent}) <= total ({total}) and killed ({killed}) <= total - equivalent"
)]
pub struct PreconditionViolation {
    pub killed: usize,
    pub total: usize,
    pub equivalent: usize,
}

/// `killed / (total - equivalent)`; 1 when every mutant is equivalent.
pub fn mutation_score(killed: usize, total: usize, equivalent: usize) -> Result<f64, PreconditionViolation> {
    if equivalent > total || killed > total - equivalent {
        return Err(PreconditionViolation { killed, total, equivalent });
    }
    if total == equivalent {
        return Ok(1.0);
    }
    Ok(killed as f64 / (total - equivalent) as f64)
}

/// A suite file is a JSON list of `{input: {..}, expected: {..}}` objects.
pub fn parse_suite(json: &str) -> Result<Vec<TestCase>, serde_json::Error> {
    serde_json::from_str(json)
}

/// A test kills a mutant when it passes on the program while the mutant
/// terminates normally with different outputs. Tests that already fail on the
/// program say nothing; a mutant that faults is not distinguished by its
/// outputs, which matches what the detector searches for.
pub fn kills(p: &Program, m: &Program, tc: &TestCase, cfg: &DetectorConfig) -> bool {
    classify_test(p, tc, &cfg.domain, cfg.max_steps) == TestOutcome::Passing
        && interpret(m, &tc.input, &cfg.domain, cfg.max_steps).is_ok()
        && classify_test(m, tc, &cfg.domain, cfg.max_steps) == TestOutcome::Failing
}

/// The test a witness turns into: its input with the program's outputs as expectation.
pub fn witness_test(w: &Witness) -> TestCase {
    TestCase::new(w.input.clone(), w.output_p.clone())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MutantReport {
    pub id: String,
    pub operator_class: OperatorClass,
    pub location: String,
    pub line: u32,
    pub original: String,
    pub mutated: String,
    /// `equivalent`, `not_equivalent`, `unknown_timeout`, `unknown_rounds` or `error`.
    pub verdict: String,
    pub nd_reached: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Killed by the supplied suite (absent without one).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub killed: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    pub killed: usize,
    pub total: usize,
    pub equivalent: usize,
    pub score: f64,
    /// Every mutant was equivalent, so the score of 1 is vacuous.
    pub vacuous: bool,
}

impl ScoreReport {
    fn new(killed: usize, total: usize, equivalent: usize) -> Result<Self, PreconditionViolation> {
        Ok(ScoreReport {
            killed,
            total,
            equivalent,
            score: mutation_score(killed, total, equivalent)?,
            vacuous: total == equivalent,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub nd_initial: u32,
    pub nd_max: u32,
    pub int_min: i64,
    pub int_max: i64,
    pub timeout_secs: f64,
    pub max_blocking_rounds: usize,
    pub operators: Vec<OperatorClass>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub program: String,
    pub loc: usize,
    pub no_mut: usize,
    pub det_eqmut: usize,
    pub not_eq: usize,
    /// Timeouts, exhausted blocking rounds and per-mutant errors.
    pub unknown: usize,
    /// How many of `unknown` are errors rather than inconclusive searches.
    pub errors: usize,
    pub witness_failures: usize,
    /// Mutants killed by the suite although reported equivalent. The claim
    /// is bounded by nesting depth, so a long-running test can do this.
    pub contradictions: Vec<String>,
    /// Score of the supplied suite.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub score: Option<ScoreReport>,
    /// Score once every witness has been added to the suite.
    pub score_with_witnesses: ScoreReport,
    pub config: ConfigEcho,
    pub mutants: Vec<MutantReport>,
}

impl RunReport {
    pub fn equivalent_fraction(&self) -> f64 {
        if self.no_mut == 0 {
            0.0
        } else {
            self.det_eqmut as f64 / self.no_mut as f64
        }
    }
}

#[derive(Debug, Clone)]
pub struct PipelineOptions {
    pub detector: DetectorConfig,
    pub operators: Vec<OperatorClass>,
    pub suite: Option<Vec<TestCase>>,
    pub jobs: usize,
    /// Record per-mutant wall-clock times.
    pub timing: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            detector: DetectorConfig::default(),
            operators: OperatorClass::DEFAULT.to_vec(),
            suite: None,
            jobs: 1,
            timing: true,
        }
    }
}

fn ms(d: Duration) -> u64 {
    d.as_millis().try_into().unwrap_or(u64::MAX)
}

/// Parses `source`, generates its mutants, classifies them and scores the suite.
pub fn run_pipeline(
    name: &str,
    source: &str,
    opts: &PipelineOptions,
    observer: Option<BatchObserver<'_>>,
) -> Result<RunReport, FrontendError> {
    let p = parse(source)?;
    let mutants = generate_mutants(&p, &opts.operators);
    let results = batch_detect(&p, &mutants, &opts.detector, opts.jobs, observer);
    let mut report = assemble(name, count_loc(source), &p, &mutants, results, opts);
    if report.program.is_empty() {
        report.program = p.name.clone();
    }
    Ok(report)
}

/// Builds the report from detection results, which must follow `mutants`' order.
pub fn assemble(
    name: &str,
    loc: usize,
    p: &Program,
    mutants: &[Mutant],
    results: Vec<(String, Result<crate::detect::Detection, DetectError>)>,
    opts: &PipelineOptions,
) -> RunReport {
    let cfg = &opts.detector;
    let mut rows = Vec::with_capacity(mutants.len());
    let (mut det_eqmut, mut not_eq, mut unknown, mut errors, mut witness_failures) = (0, 0, 0, 0, 0);
    for (m, (id, result)) in mutants.iter().zip(results) {
        debug_assert_eq!(m.id, id);
        let rec = m.record();
        let mut row = MutantReport {
            id,
            operator_class: rec.operator_class,
            location: rec.location,
            line: rec.line,
            original: rec.original,
            mutated: rec.mutated,
            verdict: "error".to_string(),
            nd_reached: 0,
            witness: None,
            wall_ms: None,
            error: None,
            killed: None,
        };
        match result {
            Ok(d) => {
                match &d.verdict {
                    Verdict::Equivalent(_) => det_eqmut += 1,
                    Verdict::NotEquivalent(_) => not_eq += 1,
                    Verdict::Unknown(_) => unknown += 1,
                }
                row.verdict = d.verdict.label().to_string();
                row.nd_reached = d.nd_reached;
                row.wall_ms = opts.timing.then(|| ms(d.elapsed));
                row.witness = d.verdict.witness().cloned();
            }
            Err(e) => {
                unknown += 1;
                errors += 1;
                if matches!(e, DetectError::WitnessValidationFailure { .. }) {
                    witness_failures += 1;
                }
                row.error = Some(e.to_string());
            }
        }
        rows.push(row);
    }

    let killed_by = |suite: &[TestCase], m: &Mutant| suite.iter().any(|tc| kills(p, &m.program, tc, cfg));
    let mut contradictions = Vec::new();
    let mut score_of = |suite: &[TestCase], rows: &mut [MutantReport], record: bool| {
        let mut killed = 0;
        let mut equivalent = 0;
        for (m, row) in mutants.iter().zip(rows.iter_mut()) {
            let k = killed_by(suite, m);
            let eq = row.verdict == "equivalent";
            if record {
                row.killed = Some(k);
                if k && eq {
                    contradictions.push(m.id.clone());
                }
            }
            // A kill outweighs a bounded equivalence claim.
            match (k, eq) {
                (true, _) => killed += 1,
                (false, true) => equivalent += 1,
                _ => {}
            }
        }
        ScoreReport::new(killed, mutants.len(), equivalent).expect("kills and equivalences are disjoint")
    };
    let score = opts.suite.as_deref().map(|s| score_of(s, &mut rows, true));
    let mut extended = opts.suite.clone().unwrap_or_default();
    extended.extend(rows.iter().filter_map(|r| r.witness.as_ref()).map(witness_test));
    let score_with_witnesses = score_of(&extended, &mut rows, false);

    RunReport {
        program: name.to_string(),
        loc,
        no_mut: mutants.len(),
        det_eqmut,
        not_eq,
        unknown,
        errors,
        witness_failures,
        contradictions,
        score,
        score_with_witnesses,
        config: ConfigEcho {
            nd_initial: cfg.nd_initial,
            nd_max: cfg.nd_max,
            int_min: cfg.domain.int_min,
            int_max: cfg.domain.int_max,
            timeout_secs: cfg.domain.solver_timeout.as_secs_f64(),
            max_blocking_rounds: cfg.max_blocking_rounds,
            operators: opts.operators.clone(),
        },
        mutants: rows,
    }
}

#[derive(Serialize)]
struct Reports<'a> {
    reports: &'a [RunReport],
}

/// `{"reports": [...]}`, pretty-printed.
pub fn reports_to_json(reports: &[RunReport]) -> String {
    serde_json::to_string_pretty(&Reports { reports }).expect("reports serialize")
}

/// Columns: Class, LOC, No_Mut, Det_EqMut, Not_Eq, Unknown, Eq%, and the two scores.
pub struct Table<'a>(pub &'a [RunReport]);

impl fmt::Display for Table<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.0.iter().map(|r| r.program.len()).chain([5]).max().unwrap_or(5);
        let score = |s: Option<&ScoreReport>| s.map_or("-".to_string(), |s| format!("{:.3}", s.score));
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<width$}  {:>5}  {:>6}  {:>9}  {:>6}  {:>7}  {:>6}  {:>6}  {:>6}",
            "Class", "LOC", "No_Mut", "Det_EqMut", "Not_Eq", "Unknown", "Eq%", "Score", "Score+W"
        );
        for r in self.0 {
            let _ = writeln!(
                out,
                "{:<width$}  {:>5}  {:>6}  {:>9}  {:>6}  {:>7}  {:>5.1}%  {:>6}  {:>6}",
                r.program,
                r.loc,
                r.no_mut,
                r.det_eqmut,
                r.not_eq,
                r.unknown,
                100.0 * r.equivalent_fraction(),
                score(r.score.as_ref()),
                score(Some(&r.score_with_witnesses)),
            );
        }
        f.write_str(&out)
    }
}
