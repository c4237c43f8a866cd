//! Command line front end for the `monogen` library.
//!
//! [`run`] takes an argument vector and two sinks and returns the exit code:
//! 0 on success, 1 when a verification fails and 2 on parse or validation
//! errors.

pub mod args;
pub mod commands;
pub mod output;
pub mod scene;

use std::io::Write;

use clap::Parser;
use monogen::exec::Execution;
use monogen::function::Mode;
use monogen::Error;

use crate::args::{Cli, Command, ExecArg, Global, ModeArg, OutArg};
use crate::commands::{dispatch, Ctx};
use crate::output::emit;
use crate::scene::{resolve_signature, SceneFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

fn parse(argv: impl IntoIterator<Item = String>, out: &mut dyn Write, err: &mut dyn Write) -> Result<Cli, i32> {
    Cli::try_parse_from(argv).map_err(|e| {
        if e.use_stderr() {
            let _ = write!(err, "{}", e.render());
            EXIT_INVALID
        } else {
            let _ = write!(out, "{}", e.render());
            EXIT_OK
        }
    })
}

/// Task flags win over command-line flags.
fn overlay(task: &Global, outer: &Global) -> Global {
    Global {
        signature: task.signature.clone().or_else(|| outer.signature.clone()),
        seed: task.seed.or(outer.seed),
        mode: task.mode.or(outer.mode),
        out: task.out.or(outer.out),
        scene: None,
        exec: task.exec.or(outer.exec),
    }
}

fn execute(global: &Global, scene: &SceneFile, cmd: &Command, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let ctx = match resolve_signature(global.signature.as_deref(), scene) {
        Ok(sig) => Ctx {
            sig,
            scene,
            seed: global.seed.or(scene.seed).unwrap_or(0),
            mode: match global.mode.unwrap_or(ModeArg::Exact) {
                ModeArg::Exact => Mode::Exact,
                ModeArg::Float => Mode::Float,
            },
            exec: match global.exec {
                Some(ExecArg::Sequential) => Execution::Sequential,
                Some(ExecArg::Parallel) | None => Execution::Parallel,
            },
        },
        Err(e) => return diagnose(err, &e),
    };
    let format = global.out.unwrap_or(OutArg::Text);
    match dispatch(&ctx, cmd) {
        Ok(outcome) => {
            for r in &outcome.records {
                let _ = emit(out, format, r);
            }
            if outcome.failed {
                EXIT_FAILED
            } else {
                EXIT_OK
            }
        }
        Err(e) => diagnose(err, &e),
    }
}

fn diagnose(err: &mut dyn Write, e: &Error) -> i32 {
    let _ = writeln!(err, "error: {e}");
    EXIT_INVALID
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run(argv: impl IntoIterator<Item = String>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match parse(argv, out, err) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let scene = match &cli.global.scene {
        Some(path) => match SceneFile::load(path) {
            Ok(s) => s,
            Err(e) => return diagnose(err, &e),
        },
        None => SceneFile::default(),
    };
    match resolve_signature(cli.global.signature.as_deref(), &scene).and_then(|sig| scene.validate(sig)) {
        Ok(()) => {}
        Err(e) => return diagnose(err, &e),
    }
    if !matches!(cli.command, Command::Run) {
        return execute(&cli.global, &scene, &cli.command, out, err);
    }
    if cli.global.scene.is_none() {
        return diagnose(err, &Error::InvalidParameter("run needs --scene FILE".into()));
    }
    // every task runs even after a failure; the worst exit code wins
    let mut code = EXIT_OK;
    for task in &scene.tasks {
        let argv = std::iter::once("monogen".to_string()).chain(task.iter().cloned());
        let task_code = match parse(argv, out, err) {
            Ok(t) if t.global.scene.is_some() => {
                diagnose(err, &Error::InvalidParameter("scene tasks cannot load another scene".into()))
            }
            Ok(t) => execute(&overlay(&t.global, &cli.global), &scene, &t.command, out, err),
            Err(c) => c,
        };
        code = code.max(task_code);
    }
    code
}
