//! The `mkstep` command line.

use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use mkstep_core::syntax::ast::RunCount;
use mkstep_core::{compile, Halt, RuleSet, SourceMap};

use crate::snapshot::Snapshot;
use crate::store::SessionStore;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DIAGNOSTICS: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "mkstep", version, about = "Step miniKanren programs one reduction at a time")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report static errors.
    Check { file: PathBuf },
    /// Run a program and print its answers.
    Run {
        file: PathBuf,
        #[arg(long, default_value = "interleaving")]
        rules: String,
        #[arg(long, default_value_t = 100_000)]
        max_steps: usize,
        /// Stop after this many answers (defaults to the program's `run n`).
        #[arg(long)]
        answers: Option<usize>,
        #[arg(long, value_enum, default_value_t = TraceMode::None)]
        trace: TraceMode,
        /// With `--trace rules`, print the tree after each step.
        #[arg(long)]
        tree: bool,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value_t = 1800)]
        session_ttl: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TraceMode {
    None,
    Rules,
    FullJson,
}

/// Runs `check` or `run`; `serve` is handled by [`serve`].
pub fn execute(cmd: &Command, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let (file, display) = match cmd {
        Command::Check { file } | Command::Run { file, .. } => (file, file.display()),
        Command::Serve { .. } => {
            let _ = writeln!(err, "serve is not a batch command");
            return EXIT_INTERNAL;
        }
    };
    let source = match std::fs::read_to_string(file) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "{display}: {e}");
            return EXIT_DIAGNOSTICS;
        }
    };
    let lowered = match compile(&source) {
        Ok(l) => l,
        Err(diags) => {
            for d in diags {
                let _ = writeln!(err, "{display}:{d}");
            }
            return EXIT_DIAGNOSTICS;
        }
    };
    let Command::Run {
        rules,
        max_steps,
        answers,
        trace,
        tree,
        ..
    } = cmd
    else {
        let _ = writeln!(out, "{display}: ok");
        return EXIT_OK;
    };
    let set = match RuleSet::from_name(rules) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            return EXIT_DIAGNOSTICS;
        }
    };
    let quota = answers.or(match lowered.count {
        RunCount::All => None,
        RunCount::Bounded(n) => Some(n as usize),
    });

    let mut map = lowered.source_map.clone();
    let mut cur = lowered.program.clone();
    let mut step = 0u64;
    let emit = |out: &mut dyn Write, snap: &Snapshot, map: &SourceMap| {
        let _ = writeln!(out, "{}", snap.json(&source, map));
    };
    if *trace == TraceMode::FullJson {
        match Snapshot::new(0, None, cur.clone(), Default::default(), &set) {
            Ok(s) => emit(out, &s, &map),
            Err(e) => return internal(err, e),
        }
    }
    let halt = loop {
        if cur.is_terminal() {
            break Halt::Terminal;
        }
        if quota.is_some_and(|n| cur.answers().len() >= n) {
            break Halt::Answers;
        }
        if step as usize >= *max_steps {
            break Halt::Budget;
        }
        let s = match cur.step(&set) {
            Ok(Some(s)) => s,
            Ok(None) => break Halt::Terminal,
            Err(e) => return internal(err, e),
        };
        step += 1;
        for m in &s.events.minted {
            map.record_state(mkstep_core::lower::StateOrigin {
                uid: m.uid,
                rule: Some(s.rule),
                step,
                parent: Some(m.parent),
            });
        }
        match trace {
            TraceMode::None => {}
            TraceMode::Rules => {
                let _ = writeln!(out, "step {step}: {}", s.rule);
                if *tree {
                    let _ = writeln!(out, "  {}", s.program.tree);
                }
            }
            TraceMode::FullJson => {
                match Snapshot::new(step, Some(s.rule), s.program.clone(), s.events.clone(), &set) {
                    Ok(snap) => emit(out, &snap, &map),
                    Err(e) => return internal(err, e),
                }
            }
        }
        cur = s.program;
    };

    if *trace != TraceMode::FullJson {
        for a in cur.reified_answers() {
            let _ = writeln!(out, "{a}");
        }
    }
    if halt == Halt::Budget {
        let _ = writeln!(err, "step budget of {max_steps} exhausted");
        return EXIT_BUDGET;
    }
    EXIT_OK
}

fn internal(err: &mut dyn Write, e: impl std::fmt::Display) -> i32 {
    let _ = writeln!(err, "internal error: {e}");
    EXIT_INTERNAL
}

pub async fn serve(port: u16, session_ttl: u64) -> std::io::Result<()> {
    let store = Arc::new(SessionStore::new(Duration::from_secs(session_ttl)));
    let app = crate::api::router(store);
    let listener = tokio::net::TcpListener::bind(("0.0.0.0", port)).await?;
    eprintln!("listening on {}", listener.local_addr()?);
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
