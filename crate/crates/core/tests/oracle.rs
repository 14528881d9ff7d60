//! Re-checks emitted certificates with a self-contained evaluator that reads
//! only the JSON strings: its own term parser, its own modular arithmetic and
//! its own random parameters.

use std::collections::HashMap;

use cremona::certificate::{to_doc, InputDoc};
use cremona::chain::run_chain;
use cremona::config::RunConfig;
use cremona::PrimeField;
use serde_json::Value;

const P: u128 = (1 << 61) - 1;

fn md(a: u128) -> u128 {
    a % P
}

fn pw(mut b: u128, mut e: u32) -> u128 {
    let mut acc = 1;
    b = md(b);
    while e > 0 {
        if e & 1 == 1 {
            acc = md(acc * b);
        }
        b = md(b * b);
        e >>= 1;
    }
    acc
}

fn coeff(text: &str) -> u128 {
    let (neg, digits) = match text.strip_prefix('-') {
        Some(d) => (true, d),
        None => (false, text),
    };
    let v = md(digits.parse::<u128>().expect("integer coefficient"));
    if neg {
        md(P - v)
    } else {
        v
    }
}

/// Evaluates a printed polynomial such as `3*x0^2*x1 - x2^3`.
fn eval(poly: &str, env: &HashMap<String, u128>) -> u128 {
    let poly = poly.trim();
    if poly == "0" {
        return 0;
    }
    let mut total = 0u128;
    let spaced = poly.replace(" - ", " + -");
    for term in spaced.split(" + ") {
        let (sign, body) = match term.strip_prefix('-') {
            Some(b) => (P - 1, b),
            None => (1, term),
        };
        let mut t = sign;
        for factor in body.split('*') {
            if factor.chars().next().unwrap().is_ascii_digit() {
                t = md(t * coeff(factor));
            } else {
                let (name, exp) = match factor.split_once('^') {
                    Some((n, e)) => (n, e.parse().unwrap()),
                    None => (factor, 1),
                };
                t = md(t * pw(env[name], exp));
            }
        }
        total = md(total + t);
    }
    total
}

fn eval_all(polys: &[Value], vars: &[String], point: &[u128]) -> Vec<u128> {
    let env: HashMap<String, u128> = vars.iter().cloned().zip(point.iter().copied()).collect();
    polys.iter().map(|p| eval(p.as_str().unwrap(), &env)).collect()
}

fn proportional(a: &[u128], b: &[u128]) -> bool {
    (0..a.len()).all(|i| (0..a.len()).all(|j| md(a[i] * b[j]) == md(a[j] * b[i])))
}

struct SplitMix(u64);

impl SplitMix {
    fn next(&mut self) -> u128 {
        self.0 = self.0.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        md(u128::from(z ^ (z >> 31)))
    }
}

fn apply_perm(v: &[u128], perm: &[Value]) -> Vec<u128> {
    perm.iter().map(|j| v[j.as_u64().unwrap() as usize]).collect()
}

fn unapply_perm(v: &[u128], perm: &[Value]) -> Vec<u128> {
    let mut out = vec![0; v.len()];
    for (i, j) in perm.iter().enumerate() {
        out[j.as_u64().unwrap() as usize] = v[i];
    }
    out
}

/// Independent end-to-end check of a certificate; returns the number of
/// parameter points checked in each direction.
fn check(cert: &Value, trials: usize, seed: u64) -> usize {
    let params: Vec<String> = cert["param_vars"].as_array().unwrap().iter().map(|v| v.as_str().unwrap().into()).collect();
    let n = cert["n"].as_u64().unwrap() as usize;
    let xs: Vec<String> = (0..=n).map(|i| format!("x{i}")).collect();
    let l = cert["L"].as_array().unwrap();
    let g = cert["G"].as_array().unwrap();
    let steps = cert["steps"].as_array().unwrap();
    let (lp, gp) = (cert["l_permutation"].as_array().unwrap(), cert["g_permutation"].as_array().unwrap());
    let mut rng = SplitMix(seed);
    let mut done = 0;
    while done < trials {
        let s: Vec<u128> = params.iter().map(|_| rng.next()).collect();
        // forward: L -> G
        let mut x = apply_perm(&eval_all(l, &params, &s), lp);
        for st in steps {
            x = eval_all(st["forward"].as_array().unwrap(), &xs, &x);
        }
        let y = unapply_perm(&x, gp);
        let gs = eval_all(g, &params, &s);
        if y.iter().all(|&v| v == 0) {
            continue;
        }
        assert!(proportional(&y, &gs), "forward chain disagrees with G");
        // backward: G -> L
        let mut z = apply_perm(&gs, gp);
        for st in steps.iter().rev() {
            z = eval_all(st["backward"].as_array().unwrap(), &xs, &z);
        }
        let back = unapply_perm(&z, lp);
        assert!(proportional(&back, &eval_all(l, &params, &s)), "backward chain disagrees with L");
        // each step carries A_i samples to A_(i+1) samples
        let mut a: Vec<u128> = apply_perm(&eval_all(l, &params, &s), lp);
        let g0 = apply_perm(&gs, gp)[0];
        a.iter_mut().for_each(|v| *v = md(*v * g0));
        for st in steps {
            let img = eval_all(st["forward"].as_array().unwrap(), &xs, &a);
            let next = eval_all(st["A_next"].as_array().unwrap(), &params, &s);
            assert!(proportional(&img, &next), "step {} conjugation", st["i"]);
            a = next;
        }
        done += 1;
    }
    done
}

fn certificate(doc: &InputDoc, seed: u64) -> Value {
    let f = PrimeField::default();
    let (l, g) = doc.systems(&f).unwrap();
    let cert = run_chain(&f, l, g.unwrap(), &RunConfig::with_seed(seed)).map_err(|a| a.error).unwrap();
    serde_json::from_str(&to_doc(&f, &cert, &doc.vars().unwrap()).to_json()).unwrap()
}

fn input(vars: &[&str], l: &[&str], g: &[&str]) -> InputDoc {
    InputDoc {
        field: None,
        r: Some(vars.len() - 1),
        n: Some(l.len() - 1),
        param_vars: Some(vars.iter().map(|s| s.to_string()).collect()),
        l: l.iter().map(|s| s.to_string()).collect(),
        g: Some(g.iter().map(|s| s.to_string()).collect()),
        note: None,
    }
}

#[test]
fn evaluator_self_check() {
    let env: HashMap<String, u128> = [("x0".to_string(), 2), ("x1".to_string(), 3)].into();
    assert_eq!(eval("3*x0^2*x1 - x1^3", &env), md(36 + P - 27));
    assert_eq!(eval("-x0 + 5", &env), 3);
    assert_eq!(eval("0", &env), 0);
}

#[test]
fn twisted_cubic_certificate() {
    let doc = input(&["s", "t"], &["s^3", "s^2*t", "s*t^2", "t^3"], &["s", "t"]);
    let cert = certificate(&doc, 42);
    let steps = cert["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 3);
    // A_1 starts with L0 G0 = s^4 and L0 G1 = s^3 t
    let a1 = steps[0]["A_next"].as_array().unwrap();
    assert_eq!(a1[0], "s^4");
    assert_eq!(a1[1], "s^3*t");
    let last = steps[2]["A_next"].as_array().unwrap();
    assert_eq!(last.iter().map(|v| v.as_str().unwrap()).collect::<Vec<_>>(), ["s^4", "s^3*t", "0", "0"]);
    assert_eq!(check(&cert, 100, 1), 100);
}

#[test]
fn veronese_certificate() {
    let doc = input(&["s", "t", "u"], &["s^2", "t^2", "u^2", "s*t", "s*u"], &["s", "t", "u"]);
    let cert = certificate(&doc, 42);
    assert_eq!(cert["steps"].as_array().unwrap().len(), 4);
    assert_eq!(check(&cert, 100, 2), 100);
}

#[test]
fn leading_zero_certificate() {
    let doc = input(&["s", "t"], &["0", "s^2", "s*t + t^2", "t^2", "s^2 - t^2"], &["0", "t", "s"]);
    let cert = certificate(&doc, 9);
    assert_eq!(cert["l_permutation"], serde_json::json!([1, 0, 2, 3, 4]));
    assert_eq!(check(&cert, 50, 3), 50);
}
