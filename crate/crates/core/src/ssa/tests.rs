use super::*;
use crate::env;
use crate::lang::{parse, run};
use crate::unroll::eliminate_loops;

const MULT: &str = "program mult(input int a, input int b, output int res) {
  int i = 0;
  int res = 0;
  while (i < a) {
    res = res + b;
    i = i + 1;
  }
}
";

fn ssa(src: &str, nd: u32) -> SsaProgram {
    let s = to_ssa(&eliminate_loops(&parse(src).unwrap(), nd).unwrap()).unwrap();
    validate(&s).unwrap();
    s
}

fn lines(s: &SsaProgram) -> Vec<String> {
    s.assignments.iter().map(|a| a.to_string()).collect()
}

#[test]
fn mult_depth_one_is_golden() {
    let s = ssa(MULT, 1);
    assert_eq!(
        lines(&s),
        [
            "bool loop_4_1 = false;",
            "int i_1 = 0;",
            "int res_1 = 0;",
            "res_2 = res_1 + b_0;",
            "i_2 = i_1 + 1;",
            "res_3 = Phi((i_1 < a_0), res_2, res_1);",
            "i_3 = Phi((i_1 < a_0), i_2, i_1);",
            "loop_4_2 = true;",
            "loop_4_3 = Phi(((i_1 < a_0) and (i_2 < a_0)), loop_4_2, loop_4_1);",
        ]
    );
    assert_eq!(s.final_versions["res"], "res_3");
    assert_eq!(s.final_versions["loop_4"], "loop_4_3");
    assert_eq!(s.input_versions["a"], "a_0");
}

#[test]
fn two_sided_conditional() {
    let s = ssa("program t(input int x, output int y) { if (x > 4) { y = 0; } else { y = 1; } }", 1);
    assert_eq!(lines(&s), ["y_1 = 0;", "y_2 = 1;", "y_3 = Phi((x_0 > 4), y_1, y_2);"]);
}

#[test]
fn straight_line_has_no_phi() {
    let s = ssa("program t(input int a, output int res) { res = a; }", 1);
    assert_eq!(lines(&s), ["res_1 = a_0;"]);
}

#[test]
fn mult_evaluation() {
    let s = ssa(MULT, 1);
    let d = DomainConfig::default();
    let v = eval_ssa(&s, &env! { a_0: 1, b_0: 5 }, &d).unwrap();
    assert_eq!(v.get("res_3"), Some(Value::Int(5)));
    assert_eq!(v.get("loop_4_3"), Some(Value::Bool(false)));
    let v = eval_ssa(&s, &env! { a: 0, b: 9 }, &d).unwrap();
    assert_eq!(s.outputs_of(&v), env! { res: 0 });
    let v = eval_ssa(&s, &env! { a: 2, b: 3 }, &d).unwrap();
    assert_eq!(s.flags_of(&v), env! { loop_4: true });
}

#[test]
fn renaming_suffixes_every_variable() {
    let s = rename_for_mutant(&ssa(MULT, 1));
    assert_eq!(s.assignments[5].to_string(), "res_3_M = Phi((i_1_M < a_0_M), res_2_M, res_1_M);");
    assert_eq!(s.final_versions["res"], "res_3_M");
    validate(&s).unwrap();
    let twice = rename_for_mutant(&s);
    assert_eq!(twice.final_versions["res"], "res_3_M_M");
    let empty = ssa("program t(input int a, output int r) { r = a; }", 1);
    let empty = SsaProgram { assignments: Vec::new(), ..empty };
    assert!(rename_for_mutant(&empty).assignments.is_empty());
}

#[test]
fn untaken_division_does_not_fault() {
    let s = ssa("program t(input int a, output int r) { r = 0; if (a != 0) { r = 10 / a; } }", 1);
    let d = DomainConfig::default();
    let v = eval_ssa(&s, &env! { a: 0 }, &d).unwrap();
    assert_eq!(s.outputs_of(&v), env! { r: 0 });
    let v = eval_ssa(&s, &env! { a: 3 }, &d).unwrap();
    assert_eq!(s.outputs_of(&v), env! { r: 3 });
}

/// Exhaustive agreement with the interpreter over a small grid.
fn agrees(src: &str, nd: u32, lo: i64, hi: i64) {
    let p = parse(src).unwrap();
    let lfp = eliminate_loops(&p, nd).unwrap();
    let s = to_ssa(&lfp).unwrap();
    validate(&s).unwrap();
    let d = DomainConfig::range(-16, 15).unwrap();
    let names: Vec<String> = p.inputs.iter().map(|p| p.name.clone()).collect();
    let mut grid = vec![VariableEnvironment::new()];
    for n in &names {
        grid = grid
            .into_iter()
            .flat_map(|e| {
                (lo..=hi).map(move |v| {
                    let mut e = e.clone();
                    e.insert(n.clone(), v);
                    e
                })
            })
            .collect();
    }
    for input in grid {
        let expected = run(&lfp.program, &input, &d, 100_000);
        let got = eval_ssa(&s, &input, &d);
        match (expected, got) {
            (Ok(exec), Ok(values)) => {
                assert_eq!(s.outputs_of(&values), exec.outputs, "{input}");
                for (flag, v) in s.flags_of(&values).iter() {
                    assert_eq!(exec.env.get(flag), Some(v), "{input}");
                }
            }
            (Err(_), Err(_)) => {}
            (e, g) => panic!("{input}: interpreter {e:?}, ssa {g:?}"),
        }
    }
}

#[test]
fn nested_and_else_branches_agree_with_interpreter() {
    agrees(
        "program t(input int a, input int b, output int r) {
           r = 0;
           if (a > 0) {
             r = a;
             if (b > a) { r = r + b; int t = r * 2; r = t - 1; } else { r = r - b; }
             r = r + 1;
           } else {
             if (b < 0) { r = 7; }
             r = r + 2;
           }
         }",
        1,
        -4,
        4,
    );
}

#[test]
fn outputs_defined_only_in_branches() {
    agrees(
        "program t(input int a, output int r, output bool pos) {
           if (a > 0) { int r = a; pos = true; } else { r = 0 - a; pos = false; }
         }",
        1,
        -5,
        5,
    );
    agrees(
        "program t(input int a, output int r) {
           int k = 1;
           if (a > 0) { if (a > 2) { r = 1; } else { r = 2; } k = k + 1; } else { r = 3; }
           r = r + k;
         }",
        1,
        -4,
        4,
    );
}

#[test]
fn loops_agree_with_interpreter() {
    agrees(MULT, 2, 0, 4);
    agrees(
        "program gcd(input int a, input int b, output int g) {
           int x = a; int y = b;
           while (y != 0) { int t = x % y; x = y; y = t; }
           g = x;
         }",
        3,
        -3,
        6,
    );
    agrees(
        "program t(input int a, output int r) {
           r = 0; int i = 0;
           while (i < a) { int j = 0; while (j < i) { r = r + 1; j = j + 1; } i = i + 1; }
         }",
        2,
        0,
        4,
    );
}

#[test]
fn division_fault_on_taken_path_matches() {
    agrees("program t(input int a, output int r) { if (a < 2) { r = 8 / a; } else { r = a * a; } }", 1, -5, 5);
}
