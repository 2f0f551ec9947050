//! Seeded random generation of well-formed source programs.
//!
//! Programs are built as a small generator AST, printed to concrete syntax
//! and sent through the real frontend, so every generated program is exactly
//! something a user could have typed.

use std::fmt::{self, Write as _};

use mkstep_core::{compile, Lowered};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Relative weights of goal constructors. A zero weight disables the form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Weights {
    pub unify: u32,
    pub call: u32,
    pub conde: u32,
    pub fresh: u32,
    pub succeed: u32,
}

impl Default for Weights {
    fn default() -> Self {
        Weights {
            unify: 5,
            call: 4,
            conde: 4,
            fresh: 2,
            succeed: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenConfig {
    pub seed: u64,
    /// Nesting depth of compound goals (`conde`, `fresh`).
    pub max_depth: u32,
    pub max_relations: usize,
    pub max_arity: usize,
    pub weights: Weights,
    /// Allow self-recursive relations. Recursion is always structural on a
    /// list first argument, and outside callers pass ground lists, so runs
    /// stay finite.
    pub recursion: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 0,
            max_depth: 3,
            max_relations: 4,
            max_arity: 3,
            weights: Weights::default(),
            recursion: false,
        }
    }
}

impl GenConfig {
    pub fn with_seed(seed: u64) -> Self {
        GenConfig {
            seed,
            ..GenConfig::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GTerm {
    Var(String),
    Sym(String),
    Int(i64),
    Nil,
    Pair(Box<GTerm>, Box<GTerm>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GGoal {
    Succeed,
    Unify(GTerm, GTerm),
    Call(String, Vec<GTerm>),
    Conde(Vec<Vec<GGoal>>),
    Fresh(Vec<String>, Vec<GGoal>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GRel {
    pub name: String,
    pub params: Vec<String>,
    pub body: Vec<GGoal>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GProgram {
    pub rels: Vec<GRel>,
    pub query_vars: Vec<String>,
    pub query: Vec<GGoal>,
}

/// A generated program in both source and lowered form.
#[derive(Clone, Debug)]
pub struct Generated {
    pub ast: GProgram,
    pub source: String,
    pub lowered: Lowered,
}

impl GProgram {
    /// Compiles through the real frontend. Panics if the printed program is
    /// rejected, since that is a generator bug.
    pub fn build(self) -> Generated {
        let source = self.to_string();
        let lowered = compile(&source)
            .unwrap_or_else(|d| panic!("generated program rejected: {d:?}\n{source}"));
        Generated {
            ast: self,
            source,
            lowered,
        }
    }

    /// Goal and term node count, used to check that shrinking makes progress.
    pub fn size(&self) -> usize {
        fn term(t: &GTerm) -> usize {
            match t {
                GTerm::Pair(h, tl) => 1 + term(h) + term(tl),
                _ => 1,
            }
        }
        fn goal(g: &GGoal) -> usize {
            1 + match g {
                GGoal::Succeed => 0,
                GGoal::Unify(a, b) => term(a) + term(b),
                GGoal::Call(_, args) => args.iter().map(term).sum(),
                GGoal::Conde(cs) => cs.iter().flatten().map(goal).sum(),
                GGoal::Fresh(_, body) => body.iter().map(goal).sum(),
            }
        }
        self.rels
            .iter()
            .flat_map(|r| &r.body)
            .chain(&self.query)
            .map(goal)
            .sum()
    }
}

pub fn gen_program(cfg: &GenConfig) -> Generated {
    gen_ast(cfg).build()
}

pub fn gen_ast(cfg: &GenConfig) -> GProgram {
    let mut g = Gen {
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        cfg,
        next_var: 0,
        sigs: Vec::new(),
    };
    let n_rels = g.rng.random_range(cfg.max_relations.min(1)..=cfg.max_relations);
    let mut rels = Vec::with_capacity(n_rels);
    for i in 0..n_rels {
        let recursive = cfg.recursion && g.rng.random_bool(0.5);
        let rel = if recursive {
            g.recursive_rel(i)
        } else {
            g.plain_rel(i)
        };
        g.sigs.push(Sig {
            name: rel.name.clone(),
            arity: rel.params.len(),
            recursive,
        });
        rels.push(rel);
    }
    let n_vars = g.rng.random_range(1..=2);
    let query_vars: Vec<String> = (0..n_vars).map(|_| g.var_name()).collect();
    let query = g.body(&query_vars, cfg.max_depth);
    GProgram {
        rels,
        query_vars,
        query,
    }
}

struct Sig {
    name: String,
    arity: usize,
    recursive: bool,
}

struct Gen<'a> {
    rng: ChaCha8Rng,
    cfg: &'a GenConfig,
    next_var: usize,
    sigs: Vec<Sig>,
}

const SYMBOLS: &[&str] = &["c0", "c1", "c2"];

impl Gen<'_> {
    fn var_name(&mut self) -> String {
        self.next_var += 1;
        format!("x{}", self.next_var - 1)
    }

    fn plain_rel(&mut self, i: usize) -> GRel {
        let arity = self.rng.random_range(0..=self.cfg.max_arity);
        let params: Vec<String> = (0..arity).map(|k| format!("p{k}")).collect();
        let body = self.body(&params, self.cfg.max_depth.saturating_sub(1));
        GRel {
            name: format!("r{i}"),
            params,
            body,
        }
    }

    /// `(conde [(== '() l) base…] [(fresh (h t) (== `(,h . ,t) l) … (ri t …))])`
    fn recursive_rel(&mut self, i: usize) -> GRel {
        let name = format!("r{i}");
        let arity = self.rng.random_range(1..=self.cfg.max_arity.max(1));
        let params: Vec<String> = (0..arity).map(|k| format!("p{k}")).collect();
        let depth = self.cfg.max_depth.saturating_sub(2);

        let mut base = vec![GGoal::Unify(GTerm::Nil, GTerm::Var(params[0].clone()))];
        if self.rng.random_bool(0.6) {
            base.push(self.goal(&params, depth));
        }

        let (h, t) = (self.var_name(), self.var_name());
        let mut scope = params.clone();
        scope.extend([h.clone(), t.clone()]);
        let mut step = vec![GGoal::Unify(
            GTerm::Pair(Box::new(GTerm::Var(h.clone())), Box::new(GTerm::Var(t.clone()))),
            GTerm::Var(params[0].clone()),
        )];
        if self.rng.random_bool(0.5) {
            step.push(self.goal(&scope, depth));
        }
        let mut args = vec![GTerm::Var(t.clone())];
        for _ in 1..arity {
            args.push(self.term(&scope, 1));
        }
        step.push(GGoal::Call(name.clone(), args));
        if self.rng.random_bool(0.3) {
            step.push(self.goal(&scope, depth));
        }

        GRel {
            name,
            params,
            body: vec![GGoal::Conde(vec![base, vec![GGoal::Fresh(vec![h, t], step)]])],
        }
    }

    fn body(&mut self, scope: &[String], depth: u32) -> Vec<GGoal> {
        let n = self.rng.random_range(1..=2);
        (0..n).map(|_| self.goal(scope, depth)).collect()
    }

    fn goal(&mut self, scope: &[String], depth: u32) -> GGoal {
        let w = self.cfg.weights;
        let compound = depth > 0;
        let callable = !self.sigs.is_empty();
        let choices = [
            (0, w.unify),
            (1, if callable { w.call } else { 0 }),
            (2, if compound { w.conde } else { 0 }),
            (3, if compound { w.fresh } else { 0 }),
            (4, w.succeed),
        ];
        let total: u32 = choices.iter().map(|c| c.1).sum();
        let which = if total == 0 {
            4
        } else {
            let mut pick = self.rng.random_range(0..total);
            choices
                .iter()
                .find(|(_, wt)| {
                    if pick < *wt {
                        true
                    } else {
                        pick -= wt;
                        false
                    }
                })
                .map_or(4, |c| c.0)
        };
        match which {
            0 => self.unify(scope),
            1 => self.call(scope),
            2 => {
                let n = self.rng.random_range(2..=3);
                GGoal::Conde(
                    (0..n)
                        .map(|_| self.body(scope, depth - 1))
                        .collect(),
                )
            }
            3 => {
                let n = self.rng.random_range(1..=2);
                let vars: Vec<String> = (0..n).map(|_| self.var_name()).collect();
                let mut inner = scope.to_vec();
                inner.extend(vars.iter().cloned());
                let body = self.body(&inner, depth - 1);
                GGoal::Fresh(vars, body)
            }
            _ => GGoal::Succeed,
        }
    }

    /// Mostly `var ≡ small term`, which succeeds often enough to keep runs
    /// interesting; otherwise two arbitrary terms.
    fn unify(&mut self, scope: &[String]) -> GGoal {
        if !scope.is_empty() && self.rng.random_bool(0.7) {
            let v = GTerm::Var(scope.choose(&mut self.rng).unwrap().clone());
            let t = self.term(scope, 1);
            if self.rng.random_bool(0.5) {
                GGoal::Unify(v, t)
            } else {
                GGoal::Unify(t, v)
            }
        } else {
            GGoal::Unify(self.term(scope, 2), self.term(scope, 2))
        }
    }

    fn call(&mut self, scope: &[String]) -> GGoal {
        let k = self.rng.random_range(0..self.sigs.len());
        let (name, arity, recursive) = {
            let s = &self.sigs[k];
            (s.name.clone(), s.arity, s.recursive)
        };
        let mut args = Vec::with_capacity(arity);
        for i in 0..arity {
            if i == 0 && recursive {
                args.push(self.ground_list());
            } else {
                args.push(self.term(scope, 2));
            }
        }
        GGoal::Call(name, args)
    }

    fn ground_list(&mut self) -> GTerm {
        let n = self.rng.random_range(0..=3);
        (0..n).fold(GTerm::Nil, |acc, _| {
            let head = self.atom();
            GTerm::Pair(Box::new(head), Box::new(acc))
        })
    }

    fn atom(&mut self) -> GTerm {
        match self.rng.random_range(0..8) {
            0 => GTerm::Int(self.rng.random_range(0..2)),
            1 => GTerm::Nil,
            _ => GTerm::Sym(SYMBOLS.choose(&mut self.rng).unwrap().to_string()),
        }
    }

    fn term(&mut self, scope: &[String], depth: u32) -> GTerm {
        let roll = self.rng.random_range(0..10);
        if roll < 3 && !scope.is_empty() {
            GTerm::Var(scope.choose(&mut self.rng).unwrap().clone())
        } else if roll < 7 || depth == 0 {
            self.atom()
        } else {
            GTerm::Pair(
                Box::new(self.term(scope, depth - 1)),
                Box::new(self.term(scope, depth - 1)),
            )
        }
    }
}

impl GTerm {
    fn is_ground(&self) -> bool {
        match self {
            GTerm::Var(_) => false,
            GTerm::Pair(h, t) => h.is_ground() && t.is_ground(),
            _ => true,
        }
    }

    /// Datum text inside `quote`/`quasiquote`.
    fn datum(&self, out: &mut String) {
        match self {
            GTerm::Var(v) => {
                let _ = write!(out, ",{v}");
            }
            GTerm::Sym(s) => out.push_str(s),
            GTerm::Int(n) => {
                let _ = write!(out, "{n}");
            }
            GTerm::Nil => out.push_str("()"),
            GTerm::Pair(h, t) => {
                out.push('(');
                h.datum(out);
                let mut rest: &GTerm = t;
                loop {
                    match rest {
                        GTerm::Pair(h, t) => {
                            out.push(' ');
                            h.datum(out);
                            rest = t;
                        }
                        GTerm::Nil => break,
                        other => {
                            out.push_str(" . ");
                            other.datum(out);
                            break;
                        }
                    }
                }
                out.push(')');
            }
        }
    }
}

impl fmt::Display for GTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        match self {
            GTerm::Var(v) => s.push_str(v),
            GTerm::Int(n) => {
                let _ = write!(s, "{n}");
            }
            t if t.is_ground() => {
                s.push('\'');
                t.datum(&mut s);
            }
            t => {
                s.push('`');
                t.datum(&mut s);
            }
        }
        f.write_str(&s)
    }
}

fn goals(f: &mut fmt::Formatter<'_>, gs: &[GGoal]) -> fmt::Result {
    for g in gs {
        write!(f, " {g}")?;
    }
    Ok(())
}

impl fmt::Display for GGoal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GGoal::Succeed => f.write_str("succeed"),
            GGoal::Unify(a, b) => write!(f, "(== {a} {b})"),
            GGoal::Call(r, args) => {
                write!(f, "({r}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
            GGoal::Conde(clauses) => {
                f.write_str("(conde")?;
                for c in clauses {
                    f.write_str(" [")?;
                    for (i, g) in c.iter().enumerate() {
                        if i > 0 {
                            f.write_str(" ")?;
                        }
                        write!(f, "{g}")?;
                    }
                    f.write_str("]")?;
                }
                f.write_str(")")
            }
            GGoal::Fresh(vars, body) => {
                write!(f, "(fresh ({})", vars.join(" "))?;
                goals(f, body)?;
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for GProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rels {
            write!(f, "(defrel ({}", r.name)?;
            for p in &r.params {
                write!(f, " {p}")?;
            }
            f.write_str(")")?;
            goals(f, &r.body)?;
            f.write_str(")\n")?;
        }
        write!(f, "(run* ({})", self.query_vars.join(" "))?;
        goals(f, &self.query)?;
        f.write_str(")\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_program() {
        for seed in 0..20 {
            let cfg = GenConfig {
                recursion: seed % 2 == 0,
                ..GenConfig::with_seed(seed)
            };
            assert_eq!(gen_ast(&cfg), gen_ast(&cfg));
            assert_eq!(gen_program(&cfg).source, gen_program(&cfg).source);
        }
    }

    #[test]
    fn unify_only_depth_one() {
        let cfg = GenConfig {
            max_depth: 1,
            max_relations: 0,
            weights: Weights {
                unify: 1,
                call: 0,
                conde: 0,
                fresh: 0,
                succeed: 0,
            },
            ..GenConfig::with_seed(3)
        };
        let g = gen_program(&cfg);
        assert!(g.ast.rels.is_empty());
        assert!(g.ast.query.iter().all(|g| matches!(g, GGoal::Unify(..))));
        assert!(g.source.starts_with("(run* ("));
    }

    #[test]
    fn recursive_shape() {
        let found = (0..50).any(|seed| {
            let cfg = GenConfig {
                recursion: true,
                ..GenConfig::with_seed(seed)
            };
            let g = gen_program(&cfg);
            g.source.contains("(conde [(== '() p0)")
        });
        assert!(found);
    }
}
