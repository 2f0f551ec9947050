//! Search trees and their pretty-printer.

use std::fmt;
use std::sync::Arc;

use crate::goal::{Code, Goal};
use crate::state::State;

pub type Tree = Arc<SearchTree>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchTree {
    Empty,
    Leaf(Arc<Goal>, State),
    /// `S ← S`, left child active.
    DisjL(Tree, Tree),
    /// `S → S`, right child active.
    DisjR(Tree, Tree),
    /// `S + S`, answer stream cell; left is always an answer leaf.
    Plus(Tree, Tree),
    /// `S × G`
    Conj(Tree, Arc<Goal>),
    Delay(Tree),
    Go(Tree),
}

impl SearchTree {
    pub fn leaf(goal: Arc<Goal>, state: State) -> Tree {
        Arc::new(SearchTree::Leaf(goal, state))
    }

    pub fn empty() -> Tree {
        Arc::new(SearchTree::Empty)
    }

    /// `(⊤ σ)`
    pub fn is_answer(&self) -> bool {
        matches!(self, SearchTree::Leaf(g, _) if g.is_top())
    }

    pub fn answer_state(&self) -> Option<&State> {
        match self {
            SearchTree::Leaf(g, st) if g.is_top() => Some(st),
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, SearchTree::Empty)
    }

    pub fn is_delay(&self) -> bool {
        matches!(self, SearchTree::Delay(_))
    }

    pub fn children(&self) -> Vec<&Tree> {
        match self {
            SearchTree::Empty | SearchTree::Leaf(..) => vec![],
            SearchTree::DisjL(a, b) | SearchTree::DisjR(a, b) | SearchTree::Plus(a, b) => {
                vec![a, b]
            }
            SearchTree::Conj(t, _) | SearchTree::Delay(t) | SearchTree::Go(t) => vec![t],
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            SearchTree::Empty => "empty",
            SearchTree::Leaf(..) => "leaf",
            SearchTree::DisjL(..) => "disj_left",
            SearchTree::DisjR(..) => "disj_right",
            SearchTree::Plus(..) => "plus",
            SearchTree::Conj(..) => "conj",
            SearchTree::Delay(_) => "delay",
            SearchTree::Go(_) => "go",
        }
    }

    /// Visits every leaf state, left to right.
    pub fn for_each_state<'a>(&'a self, f: &mut impl FnMut(&'a State)) {
        match self {
            SearchTree::Leaf(_, st) => f(st),
            _ => {
                for c in self.children() {
                    c.for_each_state(f);
                }
            }
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }
}

/// `(θ, i)` with θ as `∅` or `(#(0) ↦ 'cat, …)`.
pub struct StateText<'a>(pub &'a State);

impl fmt::Display for StateText<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let st = self.0;
        if st.subst.is_empty() {
            f.write_str("(∅")?;
        } else {
            f.write_str("((")?;
            for (i, (v, t)) in st.subst.bindings().into_iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "#({v}) ↦ {}", Code(t))?;
            }
            f.write_str(")")?;
        }
        write!(f, ", {})", st.counter)
    }
}

/// Single-line tree rendering in core notation.
impl fmt::Display for SearchTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchTree::Empty => f.write_str("empty"),
            SearchTree::Leaf(g, st) => write!(f, "{g} {}", StateText(st)),
            SearchTree::DisjL(a, b) => write!(f, "({a} ← {b})"),
            SearchTree::DisjR(a, b) => write!(f, "({a} → {b})"),
            SearchTree::Plus(a, b) => write!(f, "({a} + {b})"),
            SearchTree::Conj(t, g) => write!(f, "({t} × {g})"),
            SearchTree::Delay(t) => write!(f, "delay({t})"),
            SearchTree::Go(t) => write!(f, "go({t})"),
        }
    }
}
