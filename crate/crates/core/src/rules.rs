use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

macro_rules! rules {
    ($($name:ident),* $(,)?) => {
        /// Reduction rule names, displayed verbatim in traces and the UI.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum RuleId {
            $($name),*
        }

        impl RuleId {
            pub const ALL: &'static [RuleId] = &[$(RuleId::$name),*];

            pub fn name(self) -> &'static str {
                match self {
                    $(RuleId::$name => stringify!($name)),*
                }
            }
        }

        impl FromStr for RuleId {
            type Err = UnknownName;

            fn from_str(s: &str) -> Result<Self, UnknownName> {
                match s {
                    $(stringify!($name) => Ok(RuleId::$name),)*
                    _ => Err(UnknownName(s.to_string())),
                }
            }
        }
    };
}

rules! {
    DistrDisj,
    DistrConj,
    LeftAnsConj,
    RightAnsConj,
    AssocRightLeft,
    AssocRightRight,
    AssocLeftLeft,
    AssocLeftRight,
    SuccConj,
    PruneConj,
    PruneLeft,
    PruneRight,
    SubstFresh,
    Delay,
    Proceed,
    UnifySucc,
    UnifyFail,
    DelayConj,
    DelayLeft,
    DelayRight,
    InvokeDelay,
    PromoteLeft,
    PromoteRight,
    Expand,
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown name `{0}`")]
pub struct UnknownName(pub String);

/// Rules used by the interleaving semantics but not by depth-first search.
const DELAY_MACHINERY: &[RuleId] = &[
    RuleId::Delay,
    RuleId::Proceed,
    RuleId::DelayConj,
    RuleId::DelayLeft,
    RuleId::DelayRight,
    RuleId::InvokeDelay,
];

/// A set of enabled reduction rules.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct RuleSet {
    bits: u32,
}

impl RuleSet {
    pub const fn empty() -> Self {
        RuleSet { bits: 0 }
    }

    /// miniKanren's interleaving search: every rule except `Expand`.
    pub fn interleaving() -> Self {
        RuleId::ALL
            .iter()
            .fold(RuleSet::empty(), |s, r| s.with(*r))
            .without(RuleId::Expand)
    }

    /// Depth-first search: no delay points; relation calls expand in place.
    pub fn dfs() -> Self {
        DELAY_MACHINERY
            .iter()
            .fold(RuleSet::interleaving(), |s, r| s.without(*r))
            .with(RuleId::Expand)
    }

    pub fn from_name(name: &str) -> Result<Self, UnknownName> {
        match name {
            "interleaving" | "minikanren" | "microkanren" => Ok(RuleSet::interleaving()),
            "dfs" | "prolog-dfs" | "prolog" => Ok(RuleSet::dfs()),
            _ => Err(UnknownName(name.to_string())),
        }
    }

    /// Canonical name for the two built-in sets.
    pub fn name(&self) -> Option<&'static str> {
        if *self == RuleSet::interleaving() {
            Some("interleaving")
        } else if *self == RuleSet::dfs() {
            Some("dfs")
        } else {
            None
        }
    }

    pub const fn with(self, r: RuleId) -> Self {
        RuleSet {
            bits: self.bits | (1 << r as u32),
        }
    }

    pub const fn without(self, r: RuleId) -> Self {
        RuleSet {
            bits: self.bits & !(1 << r as u32),
        }
    }

    pub const fn has(&self, r: RuleId) -> bool {
        self.bits & (1 << r as u32) != 0
    }

    pub fn iter(&self) -> impl Iterator<Item = RuleId> + '_ {
        RuleId::ALL.iter().copied().filter(|r| self.has(*r))
    }
}

impl fmt::Debug for RuleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.name() {
            Some(n) => write!(f, "RuleSet({n})"),
            None => f.debug_set().entries(self.iter()).finish(),
        }
    }
}

pub const RULESET_NAMES: &[&str] = &["interleaving", "dfs"];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_roundtrip() {
        assert_eq!(RuleId::ALL.len(), 24);
        for r in RuleId::ALL {
            assert_eq!(r.name().parse::<RuleId>().unwrap(), *r);
        }
    }

    #[test]
    fn builtin_sets() {
        let i = RuleSet::interleaving();
        let d = RuleSet::dfs();
        assert!(i.has(RuleId::Delay) && !i.has(RuleId::Expand));
        assert!(d.has(RuleId::Expand) && !d.has(RuleId::InvokeDelay));
        assert_eq!(d.iter().count(), 24 - 1 - DELAY_MACHINERY.len() + 1);
        assert_eq!(RuleSet::from_name("prolog-dfs").unwrap(), d);
        assert_eq!(RuleSet::from_name("interleaving").unwrap().name(), Some("interleaving"));
        assert!(RuleSet::from_name("bfs").is_err());
    }
}
