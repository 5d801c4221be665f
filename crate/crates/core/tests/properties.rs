//! Randomized properties over generated programs. Loops are counter-driven
//! so every generated program terminates; faults (division by zero, leaving
//! the domain) are allowed and must be handled consistently by every stage.

mod common;

use std::collections::HashSet;
use std::time::Duration;

use proptest::prelude::*;
use proptest::sample::{select, Index};

use common::{all_inputs, distinguishing, MAX_STEPS};
use mutdiff::constraint::{encode, join_programs, solve, Constraint, SolveOutcome, Solver};
use mutdiff::detect::{detect, DetectorConfig, Verdict};
use mutdiff::lang::{interpret, parse, pretty_print, run, BinOp, Expr, Program, Stmt, StmtKind, Value};
use mutdiff::mutation::{generate_mutants, Mutant, OperatorClass};
use mutdiff::ssa::{eval_ssa, rename_for_mutant, to_ssa, validate, SsaProgram};
use mutdiff::unroll::eliminate_loops;
use mutdiff::DomainConfig;

const CASES: u32 = 1000;

fn small() -> DomainConfig {
    DomainConfig::range(-8, 7).unwrap()
}

fn int_expr() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        select(vec!["a", "b", "x", "y", "r"]).prop_map(String::from),
        (-3i64..=3).prop_map(|c| c.to_string()),
    ];
    leaf.prop_recursive(2, 8, 2, |inner| {
        prop_oneof![
            4 => (inner.clone(), select(vec!["+", "-", "*", "/", "%"]), inner.clone())
                .prop_map(|(l, op, r)| format!("({l} {op} {r})")),
            1 => inner.prop_map(|e| format!("-({e})")),
        ]
    })
}

fn bool_expr() -> impl Strategy<Value = String> {
    let cmp = (int_expr(), select(vec!["<", "<=", ">", ">=", "==", "!="]), int_expr())
        .prop_map(|(l, op, r)| format!("{l} {op} {r}"));
    let leaf = prop_oneof![4 => cmp, 1 => Just("f".to_string())];
    leaf.prop_recursive(1, 4, 2, |inner| {
        prop_oneof![
            (inner.clone(), select(vec!["and", "or"]), inner.clone())
                .prop_map(|(l, op, r)| format!("({l}) {op} ({r})")),
            inner.prop_map(|e| format!("not ({e})")),
        ]
    })
}

/// Lines of a non-empty block. `loops` counts enclosing loops, which own the
/// counters `c0` and `c1`; generated statements never assign them.
fn block(depth: u32, loops: usize) -> BoxedStrategy<Vec<String>> {
    prop::collection::vec(stmt(depth, loops), 1..=3).prop_map(|v| v.concat()).boxed()
}

fn stmt(depth: u32, loops: usize) -> BoxedStrategy<Vec<String>> {
    let assign = (select(vec!["x", "y", "r"]), int_expr()).prop_map(|(t, e)| vec![format!("{t} = {e};")]);
    let flag = bool_expr().prop_map(|e| vec![format!("f = {e};")]);
    if depth == 0 {
        return prop_oneof![3 => assign, 1 => flag].boxed();
    }
    let branch = (bool_expr(), block(depth - 1, loops), block(depth - 1, loops)).prop_map(|(c, t, e)| {
        let mut v = vec![format!("if ({c}) {{")];
        v.extend(t);
        v.push("} else {".to_string());
        v.extend(e);
        v.push("}".to_string());
        v
    });
    if loops >= 2 {
        return prop_oneof![3 => assign, 1 => flag, 1 => branch].boxed();
    }
    let counter = format!("c{loops}");
    let bound = prop_oneof![select(vec!["a", "b"]).prop_map(String::from), (0i64..=3).prop_map(|c| c.to_string())];
    let looped = (bound, block(depth - 1, loops + 1)).prop_map(move |(bound, body)| {
        let mut v = vec![format!("{counter} = 0;"), format!("while ({counter} < {bound}) {{")];
        v.extend(body);
        v.push(format!("{counter} = {counter} + 1;"));
        v.push("}".to_string());
        v
    });
    prop_oneof![3 => assign, 1 => flag, 1 => branch, 1 => looped].boxed()
}

fn program_source() -> impl Strategy<Value = String> {
    block(2, 0).prop_map(|body| {
        let mut src = String::from(
            "program g(input int a, input int b, output int r) {\n  int x = 0;\n  int y = 0;\n  bool f = false;\n  int c0 = 0;\n  int c1 = 0;\n  r = 0;\n",
        );
        for line in body {
            src.push_str("  ");
            src.push_str(&line);
            src.push('\n');
        }
        src.push_str("}\n");
        src
    })
}

fn program() -> impl Strategy<Value = Program> {
    program_source().prop_map(|s| parse(&s).unwrap_or_else(|e| panic!("generator produced invalid program: {e}\n{s}")))
}

fn ssa(p: &Program, nd: u32) -> SsaProgram {
    to_ssa(&eliminate_loops(p, nd).unwrap()).unwrap()
}

fn pick_mutant(p: &Program, idx: &Index) -> Option<Mutant> {
    let ms = generate_mutants(p, &OperatorClass::DEFAULT);
    (!ms.is_empty()).then(|| ms[idx.index(ms.len())].clone())
}

fn input(a: i64, b: i64) -> mutdiff::lang::VariableEnvironment {
    mutdiff::env! { a: a, b: b }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: CASES, ..ProptestConfig::default() })]

    #[test]
    fn printing_round_trips(p in program()) {
        let text = pretty_print(&p);
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(pretty_print(&back), text);
    }

    #[test]
    fn unrolling_is_faithful_up_to_depth(p in program(), nd in 1u32..=4, a in -8i64..=7, b in -8i64..=7) {
        let dom = small();
        let lfp = eliminate_loops(&p, nd).unwrap();
        let i = input(a, b);
        let original = run(&p, &i, &dom, MAX_STEPS);
        let unrolled = run(&lfp.program, &i, &dom, MAX_STEPS);
        let raised = |e: &mutdiff::lang::Execution| lfp.loop_flags.iter().any(|f| e.env.get(f) == Some(Value::Bool(true)));
        match (&original, &unrolled) {
            (Ok(o), Ok(u)) if o.max_iterations() <= u64::from(nd) => {
                prop_assert_eq!(&o.outputs, &u.outputs);
                prop_assert!(!raised(u));
            }
            (Ok(o), Err(e)) => prop_assert!(o.max_iterations() > u64::from(nd), "unrolled run failed: {}", e),
            (Ok(_), Ok(u)) => prop_assert!(raised(u)),
            // A faulting run faults at the same point in any sufficiently deep unrolling.
            (Err(_), Ok(u)) => prop_assert!(raised(u)),
            (Err(_), Err(_)) => {}
        }
    }

    #[test]
    fn ssa_assigns_each_name_once(p in program(), nd in 1u32..=3) {
        let s = ssa(&p, nd);
        validate(&s).map_err(TestCaseError::fail)?;
        let mut seen = HashSet::new();
        for a in &s.assignments {
            prop_assert!(seen.insert(a.target.clone()), "{} assigned twice", a.target);
            prop_assert!(!s.input_versions.values().any(|v| v == &a.target));
        }
    }

    #[test]
    fn ssa_evaluation_matches_interpreter(p in program(), nd in 1u32..=3, a in -8i64..=7, b in -8i64..=7) {
        let dom = small();
        let lfp = eliminate_loops(&p, nd).unwrap();
        let s = to_ssa(&lfp).unwrap();
        let i = input(a, b);
        match (run(&lfp.program, &i, &dom, MAX_STEPS), eval_ssa(&s, &i, &dom)) {
            (Ok(u), Ok(env)) => {
                prop_assert_eq!(s.outputs_of(&env), u.outputs);
                prop_assert_eq!(s.flags_of(&env), u.env.restrict(|n| lfp.loop_flags.iter().any(|f| f == n)));
            }
            (Err(_), Err(_)) => {}
            (l, r) => prop_assert!(false, "interpreter {:?} vs SSA {:?}", l.map(|e| e.outputs), r.map(|_| ())),
        }
    }

    #[test]
    fn encoding_is_functional(p in program(), nd in 1u32..=2, a in -8i64..=7, b in -8i64..=7) {
        let dom = small();
        let s = ssa(&p, nd);
        let mut cs = encode(&s, &dom);
        for (var, v) in [("a_0", a), ("b_0", b)] {
            cs.add(Constraint::Require { expr: Expr::binary(BinOp::Eq, Expr::var(var), Expr::Int(v)) });
        }
        let mut solver = Solver::new(&cs);
        match (eval_ssa(&s, &input(a, b), &dom), solver.next_solution(None)) {
            (Ok(env), SolveOutcome::Solution(sol)) => {
                for (base, var) in s.output_versions() {
                    prop_assert_eq!(sol.get(var), env.get(var), "output {}", base);
                }
                solver.block(cs.input_projection(&sol.assignment));
                prop_assert_eq!(solver.next_solution(None), SolveOutcome::Unsat);
            }
            (Err(_), SolveOutcome::Unsat) => {}
            (l, r) => prop_assert!(false, "eval {:?} vs solver {:?}", l.map(|_| ()), r),
        }
    }

    #[test]
    fn solver_agrees_with_enumeration(p in program(), idx in any::<Index>(), nd in 1u32..=2) {
        let Some(m) = pick_mutant(&p, &idx) else { return Ok(()) };
        let dom = small();
        let ps = ssa(&p, nd);
        let ms = rename_for_mutant(&ssa(&m.program, nd));
        let joint = join_programs(&ps, &ms, &dom).unwrap();
        let brute = all_inputs(&p, &dom).iter().any(|i| match (eval_ssa(&ps, i, &dom), eval_ssa(&ms, i, &dom)) {
            (Ok(x), Ok(y)) => ps.outputs_of(&x) != ms.outputs_of(&y),
            _ => false,
        });
        match solve(&joint, None) {
            SolveOutcome::Solution(sol) => {
                prop_assert!(brute, "{}: solver found {:?}", m.id, joint.input_projection(&sol.assignment));
                let i = ps.input_versions.iter().map(|(k, v)| (k.clone(), sol.get(v).unwrap())).collect();
                let (x, y) = (eval_ssa(&ps, &i, &dom).unwrap(), eval_ssa(&ms, &i, &dom).unwrap());
                prop_assert_ne!(ps.outputs_of(&x), ms.outputs_of(&y));
            }
            SolveOutcome::Unsat => prop_assert!(!brute, "{}: solver missed a solution", m.id),
            SolveOutcome::Timeout => prop_assert!(false, "no deadline was set"),
        }
    }

    #[test]
    fn renaming_commutes_with_conversion(p in program(), nd in 1u32..=2) {
        let renamed_after = rename_for_mutant(&ssa(&p, nd));
        let renamed_before = ssa(&rename_program(&p), nd);
        // `x_k_M` on one side is `x_M_k` on the other; loop flags keep their names.
        let canon_after = |n: &str| n.strip_suffix("_M").unwrap_or(n).to_string();
        let canon_before = |n: &str| {
            match n.rsplit_once('_') {
                Some((stem, k)) if stem.ends_with("_M") && k.chars().all(|c| c.is_ascii_digit()) => {
                    format!("{}_{k}", &stem[..stem.len() - 2])
                }
                _ => n.to_string(),
            }
        };
        let lines = |s: &SsaProgram, canon: &dyn Fn(&str) -> String| -> Vec<String> {
            s.assignments.iter().map(|a| {
                let mut a = a.clone();
                a.target = canon(&a.target);
                a.base = String::new();
                a.active = a.active.map(|e| e.map_vars(&|v| canon(v)));
                a.rhs = match a.rhs {
                    mutdiff::ssa::SsaRhs::Expr(e) => mutdiff::ssa::SsaRhs::Expr(e.map_vars(&|v| canon(v))),
                    mutdiff::ssa::SsaRhs::Phi { guard, then_value, else_value } => mutdiff::ssa::SsaRhs::Phi {
                        guard: guard.map_vars(&|v| canon(v)),
                        then_value: canon(&then_value),
                        else_value: canon(&else_value),
                    },
                };
                format!("{a:?}")
            }).collect()
        };
        prop_assert_eq!(lines(&renamed_after, &canon_after), lines(&renamed_before, &canon_before));
    }

    #[test]
    fn mutants_are_single_well_typed_changes(p in program()) {
        let ms = generate_mutants(&p, &OperatorClass::DEFAULT);
        let mut seen = HashSet::new();
        for (k, m) in ms.iter().enumerate() {
            prop_assert_eq!(&m.id, &format!("g-{:03}", k + 1));
            prop_assert!(m.program != p);
            // The recovered site may differ (in `-(-y)` either negation can go),
            // but it must describe the same single change.
            let again = Mutant::from_programs(m.id.clone(), &p, &m.program).unwrap();
            prop_assert_eq!(&again.program, &m.program);
            prop_assert!(seen.insert(pretty_print(&m.program)), "duplicate mutant {}", m.id);
            prop_assert_eq!(&parse(&pretty_print(&m.program)).unwrap(), &m.program);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    /// Detection halts within its budget, and its verdicts agree with
    /// enumeration wherever they make a claim.
    #[test]
    fn detection_terminates_and_is_bounded_sound(p in program(), idx in any::<Index>()) {
        let Some(m) = pick_mutant(&p, &idx) else { return Ok(()) };
        let dom = DomainConfig::range(-4, 3).unwrap().with_timeout(Duration::from_secs(5)).unwrap();
        let cfg = DetectorConfig { nd_initial: 1, nd_max: 3, domain: dom, ..DetectorConfig::default() };
        let d = detect(&p, &m, &cfg).unwrap();
        prop_assert!(d.elapsed < Duration::from_secs(6));
        let shallow = distinguishing(&p, &m.program, &dom).into_iter().filter(|x| x.need <= 3).count();
        match &d.verdict {
            Verdict::NotEquivalent(w) => {
                prop_assert_ne!(interpret(&p, &w.input, &dom, MAX_STEPS).unwrap(), interpret(&m.program, &w.input, &dom, MAX_STEPS).unwrap());
            }
            Verdict::Equivalent(nd) => {
                prop_assert_eq!(*nd, 3);
                prop_assert_eq!(shallow, 0, "{} has shallow distinguishing inputs", m.id);
            }
            Verdict::Unknown(r) => prop_assert!(false, "{}: unknown ({:?})", m.id, r),
        }
    }
}

/// Every variable `v` of `p` becomes `v_M`.
fn rename_program(p: &Program) -> Program {
    fn stmts(body: &[Stmt]) -> Vec<Stmt> {
        body.iter().map(stmt).collect()
    }
    fn stmt(s: &Stmt) -> Stmt {
        let m = |e: &Expr| e.map_vars(&|v| format!("{v}_M"));
        let kind = match &s.kind {
            StmtKind::Decl { name, ty, init } => StmtKind::Decl { name: format!("{name}_M"), ty: *ty, init: m(init) },
            StmtKind::Assign { target, value } => StmtKind::Assign { target: format!("{target}_M"), value: m(value) },
            StmtKind::If { cond, then_branch, else_branch } => {
                StmtKind::If { cond: m(cond), then_branch: stmts(then_branch), else_branch: stmts(else_branch) }
            }
            StmtKind::While { cond, body } => StmtKind::While { cond: m(cond), body: stmts(body) },
        };
        Stmt { pos: s.pos, kind }
    }
    let mut q = p.clone();
    for param in q.inputs.iter_mut().chain(q.outputs.iter_mut()) {
        param.name = format!("{}_M", param.name);
    }
    q.body = stmts(&p.body);
    q
}
