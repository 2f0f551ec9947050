//! Shrinking of generated programs.
//!
//! Every candidate stays well-scoped: goals are only removed or replaced by
//! their own sub-goals when no binder is lost, and terms are only replaced by
//! constants or their own sub-terms.

use crate::gen::{GGoal, GProgram, GTerm};

/// One-step simplifications of `p`, roughly largest first.
pub fn shrink(p: &GProgram) -> Vec<GProgram> {
    let mut out = Vec::new();

    // drop an unused relation
    for (i, r) in p.rels.iter().enumerate() {
        if !mentions(p, &r.name) {
            let mut q = p.clone();
            q.rels.remove(i);
            out.push(q);
        }
    }

    for (i, gs) in seqs(p).into_iter().enumerate() {
        for alt in shrink_seq(gs) {
            let mut q = p.clone();
            *seqs_mut(&mut q).remove(i) = alt;
            out.push(q);
        }
    }
    out
}

fn mentions(p: &GProgram, name: &str) -> bool {
    fn goal(g: &GGoal, name: &str) -> bool {
        match g {
            GGoal::Call(r, _) => r == name,
            GGoal::Conde(cs) => cs.iter().flatten().any(|g| goal(g, name)),
            GGoal::Fresh(_, body) => body.iter().any(|g| goal(g, name)),
            _ => false,
        }
    }
    p.rels
        .iter()
        .filter(|r| r.name != name)
        .flat_map(|r| &r.body)
        .chain(&p.query)
        .any(|g| goal(g, name))
}

fn seqs(p: &GProgram) -> Vec<&Vec<GGoal>> {
    p.rels.iter().map(|r| &r.body).chain([&p.query]).collect()
}

fn seqs_mut(p: &mut GProgram) -> Vec<&mut Vec<GGoal>> {
    p.rels
        .iter_mut()
        .map(|r| &mut r.body)
        .chain([&mut p.query])
        .collect()
}

fn shrink_seq(gs: &[GGoal]) -> Vec<Vec<GGoal>> {
    let mut out = Vec::new();
    if gs.len() > 1 {
        for i in 0..gs.len() {
            let mut v = gs.to_vec();
            v.remove(i);
            out.push(v);
        }
    }
    for (i, g) in gs.iter().enumerate() {
        for alt in shrink_goal(g) {
            let mut v = gs.to_vec();
            v.splice(i..=i, alt);
            out.push(v);
        }
    }
    out
}

/// Replacements for one goal, each a goal sequence spliced in its place.
fn shrink_goal(g: &GGoal) -> Vec<Vec<GGoal>> {
    let mut out = Vec::new();
    match g {
        GGoal::Succeed => {}
        GGoal::Unify(a, b) => {
            out.push(vec![GGoal::Succeed]);
            for a2 in shrink_term(a) {
                out.push(vec![GGoal::Unify(a2, b.clone())]);
            }
            for b2 in shrink_term(b) {
                out.push(vec![GGoal::Unify(a.clone(), b2)]);
            }
        }
        GGoal::Call(r, args) => {
            out.push(vec![GGoal::Succeed]);
            for (i, a) in args.iter().enumerate() {
                for a2 in shrink_term(a) {
                    let mut v = args.clone();
                    v[i] = a2;
                    out.push(vec![GGoal::Call(r.clone(), v)]);
                }
            }
        }
        GGoal::Conde(clauses) => {
            // inline one clause
            for c in clauses {
                out.push(c.clone());
            }
            if clauses.len() > 1 {
                for i in 0..clauses.len() {
                    let mut v = clauses.clone();
                    v.remove(i);
                    out.push(vec![GGoal::Conde(v)]);
                }
            }
            for (i, c) in clauses.iter().enumerate() {
                for alt in shrink_seq(c) {
                    let mut v = clauses.clone();
                    v[i] = alt;
                    out.push(vec![GGoal::Conde(v)]);
                }
            }
        }
        GGoal::Fresh(vars, body) => {
            for alt in shrink_seq(body) {
                out.push(vec![GGoal::Fresh(vars.clone(), alt)]);
            }
        }
    }
    out
}

fn shrink_term(t: &GTerm) -> Vec<GTerm> {
    match t {
        GTerm::Pair(h, tl) => vec![GTerm::Nil, (**h).clone(), (**tl).clone()],
        GTerm::Var(_) | GTerm::Int(_) => vec![GTerm::Nil],
        GTerm::Sym(s) if s != "c0" => vec![GTerm::Sym("c0".into())],
        GTerm::Sym(_) | GTerm::Nil => vec![],
    }
}

/// Greedy shrinking: repeatedly takes the first candidate for which `fails`
/// still holds, until none does.
pub fn minimize(p: &GProgram, mut fails: impl FnMut(&GProgram) -> bool) -> GProgram {
    let mut cur = p.clone();
    'outer: loop {
        for cand in shrink(&cur) {
            if fails(&cand) {
                cur = cand;
                continue 'outer;
            }
        }
        return cur;
    }
}
