use std::collections::HashMap;

use super::ast::*;
use super::diag::{sort_diagnostics, DiagCode, Diagnostic, Span};
use crate::term::Sym;

/// Static well-formedness: relation names and arities, variable binding,
/// duplicate definitions and duplicate binders. Empty result means the
/// program may be lowered.
pub fn check(p: &SurfaceProgram) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let mut arities: HashMap<&str, (usize, Span)> = HashMap::new();
    for d in &p.defs {
        if let Some((_, first)) = arities.get(&*d.name.name) {
            diags.push(Diagnostic::error(
                DiagCode::DuplicateRelation,
                d.name.span,
                format!(
                    "relation `{}` is already defined at {}:{}",
                    d.name.name, first.start.line, first.start.col
                ),
            ));
        } else {
            arities.insert(&d.name.name, (d.params.len(), d.name.span));
        }
    }

    let mut cx = Checker {
        arities: &arities,
        scope: Vec::new(),
        diags: &mut diags,
    };
    for d in &p.defs {
        cx.bind(&d.params);
        cx.goals(&d.body);
        cx.scope.clear();
    }
    cx.bind(&p.query.vars);
    cx.goals(&p.query.body);

    sort_diagnostics(&mut diags);
    diags
}

struct Checker<'a> {
    arities: &'a HashMap<&'a str, (usize, Span)>,
    scope: Vec<Sym>,
    diags: &'a mut Vec<Diagnostic>,
}

impl Checker<'_> {
    fn bind(&mut self, names: &[Ident]) {
        for (i, n) in names.iter().enumerate() {
            if names[..i].iter().any(|m| m.name == n.name) {
                self.diags.push(Diagnostic::error(
                    DiagCode::DuplicateParameter,
                    n.span,
                    format!("`{}` is bound twice in the same binder", n.name),
                ));
            }
            self.scope.push(n.name.clone());
        }
    }

    fn goals(&mut self, gs: &[SGoal]) {
        for g in gs {
            self.goal(g);
        }
    }

    fn goal(&mut self, g: &SGoal) {
        match &g.kind {
            SGoalKind::Succeed => {}
            SGoalKind::Unify(a, b) => {
                self.term(a);
                self.term(b);
            }
            SGoalKind::Conde(clauses) => {
                for c in clauses {
                    self.goals(&c.goals);
                }
            }
            SGoalKind::Fresh(vars, body) => {
                let mark = self.scope.len();
                self.bind(vars);
                self.goals(body);
                self.scope.truncate(mark);
            }
            SGoalKind::Call(name, args) => {
                match self.arities.get(&*name.name) {
                    None => self.diags.push(Diagnostic::error(
                        DiagCode::UnboundRelation,
                        name.span,
                        format!("no relation named `{}`", name.name),
                    )),
                    Some((arity, _)) if *arity != args.len() => {
                        self.diags.push(Diagnostic::error(
                            DiagCode::ArityMismatch,
                            g.span,
                            format!(
                                "`{}` takes {} argument{}, given {}",
                                name.name,
                                arity,
                                if *arity == 1 { "" } else { "s" },
                                args.len()
                            ),
                        ))
                    }
                    Some(_) => {}
                }
                for a in args {
                    self.term(a);
                }
            }
        }
    }

    fn term(&mut self, t: &STerm) {
        match &t.kind {
            STermKind::Var(v) => {
                if !self.scope.contains(v) {
                    self.diags.push(Diagnostic::error(
                        DiagCode::UnboundVariable,
                        t.span,
                        format!("unbound variable `{v}`"),
                    ));
                }
            }
            STermKind::Const(_) => {}
            STermKind::Pair(h, tl) => {
                self.term(h);
                self.term(tl);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse::parse, reader::read};

    fn codes(src: &str) -> Vec<DiagCode> {
        let p = parse(&read(src).unwrap()).unwrap();
        check(&p).into_iter().map(|d| d.code).collect()
    }

    #[test]
    fn animals_is_clean() {
        assert!(codes(
            "(defrel (same x y) (== x y))
             (run* (q) (conde [(conde [(same q 'turtle)] [(same q 'cat)] [(== q 'dog)])]
                              [(same q 'fish)]))"
        )
        .is_empty());
    }

    #[test]
    fn violations() {
        assert_eq!(
            codes("(defrel (same x y) (== x y)) (run* (q) (same q))"),
            [DiagCode::ArityMismatch]
        );
        assert_eq!(codes("(run* (q) (== r 'a))"), [DiagCode::UnboundVariable]);
        assert_eq!(codes("(run* (q) (nope q))"), [DiagCode::UnboundRelation]);
        assert_eq!(
            codes("(defrel (f x x) succeed) (defrel (f) succeed) (run* (q) (f 1 2))"),
            [DiagCode::DuplicateParameter, DiagCode::DuplicateRelation]
        );
        assert_eq!(
            codes("(run* (q) (fresh (a a) succeed))"),
            [DiagCode::DuplicateParameter]
        );
    }

    #[test]
    fn scoping() {
        // fresh scope ends with its form; relation bodies see only params
        assert_eq!(
            codes("(run* (q) (fresh (x) (== x 1)) (== x q))"),
            [DiagCode::UnboundVariable]
        );
        assert_eq!(
            codes("(defrel (f a) (== a q)) (run* (q) (f q))"),
            [DiagCode::UnboundVariable]
        );
        assert!(codes("(run* (q) (fresh (q) (fresh (q) (== q 1))))").is_empty());
        // forward references between relations are fine
        assert!(codes("(defrel (f a) (g a)) (defrel (g b) (== b 1)) (run* (q) (f q))").is_empty());
    }

    #[test]
    fn sorted_by_span() {
        let p = parse(&read("(run* (q) (== z 1) (nope) (== y 2))").unwrap()).unwrap();
        let d = check(&p);
        assert_eq!(d.len(), 3);
        assert!(d.windows(2).all(|w| w[0].span <= w[1].span));
        assert_eq!(check(&p), d);
    }
}
