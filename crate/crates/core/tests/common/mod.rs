//! Independent oracles: exhaustive enumeration over small input domains.
#![allow(dead_code)]

use std::fs;
use std::path::Path;

use mutdiff::lang::{parse, run, Program, Type, Value, VariableEnvironment};
use mutdiff::DomainConfig;

pub const MAX_STEPS: u64 = 100_000;

pub struct CorpusProgram {
    pub name: String,
    pub source: String,
    pub program: Program,
}

pub fn corpus() -> Vec<CorpusProgram> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let mut paths: Vec<_> = fs::read_dir(&dir)
        .expect("corpus directory")
        .map(|e| e.expect("corpus entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "mlang"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|path| {
            let source = fs::read_to_string(&path).expect("corpus file");
            let program = parse(&source).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            let name = path.file_stem().unwrap().to_string_lossy().into_owned();
            CorpusProgram { name, source, program }
        })
        .collect()
}

/// Every input assignment of `p` over `domain`.
pub fn all_inputs(p: &Program, domain: &DomainConfig) -> Vec<VariableEnvironment> {
    let mut out = vec![VariableEnvironment::new()];
    for param in &p.inputs {
        let values: Vec<Value> = match param.ty {
            Type::Int => (domain.int_min..=domain.int_max).map(Value::Int).collect(),
            Type::Bool => vec![Value::Bool(false), Value::Bool(true)],
        };
        out = out
            .into_iter()
            .flat_map(|env| {
                values.iter().map(move |v| {
                    let mut e = env.clone();
                    e.insert(param.name.clone(), *v);
                    e
                })
            })
            .collect();
    }
    out
}

/// A distinguishing input together with the loop iterations it needs: the
/// largest per-entry count over both runs.
#[derive(Debug, Clone)]
pub struct Distinction {
    pub input: VariableEnvironment,
    pub need: u64,
}

/// All inputs on which both programs terminate normally with different outputs.
pub fn distinguishing(p: &Program, m: &Program, domain: &DomainConfig) -> Vec<Distinction> {
    all_inputs(p, domain)
        .into_iter()
        .filter_map(|input| {
            let a = run(p, &input, domain, MAX_STEPS).ok()?;
            let b = run(m, &input, domain, MAX_STEPS).ok()?;
            (a.outputs != b.outputs).then(|| Distinction { need: a.max_iterations().max(b.max_iterations()), input })
        })
        .collect()
}

/// The distinguishing input needing the fewest iterations, if any.
pub fn shallowest(p: &Program, m: &Program, domain: &DomainConfig) -> Option<Distinction> {
    distinguishing(p, m, domain).into_iter().min_by_key(|d| d.need)
}

pub fn squash(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}
