//! Command-line verbs. Exit codes: 0 success, 2 verification mismatch, 1 usage or IO error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::net::SocketAddr;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use g2048_core::harness::{default_max_turns, run_match};
use g2048_core::oracle::{reachable_max, DEFAULT_CAP};
use g2048_core::{favourable_prefix, max_tile, replay_transcript, verify_claims, AdversaryMode, BoardShape};

use crate::render::render;
use crate::wire::{self, OracleJson, ReportJson};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "g2048", about = "Generalised 2048: matches, oracle, transcripts and the game service")]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Play one match per seed and check the maxima against cell_count + 1 and the oracle.
    Verify {
        #[arg(long)]
        shape: String,
        #[arg(long, default_value = "cooperative")]
        mode: String,
        /// `a..b` (inclusive), `a..=b`, or a single seed.
        #[arg(long, default_value = "0..19")]
        seeds: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact maximum exponent by exhaustive search (at most 6 cells).
    Oracle {
        #[arg(long)]
        shape: String,
        #[arg(long, default_value = "cooperative")]
        mode: String,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Play a single match and write its transcript.
    Match {
        #[arg(long)]
        shape: String,
        #[arg(long, default_value = "paper")]
        mode: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        max_turns: Option<usize>,
        #[arg(long)]
        transcript: PathBuf,
    },
    /// Replay a transcript, checking every step.
    Replay {
        #[arg(long)]
        transcript: PathBuf,
    },
    /// Print the board after event K (0-based; default the last).
    Render {
        #[arg(long)]
        transcript: PathBuf,
        #[arg(long)]
        turn: Option<usize>,
    },
    /// Start the game service.
    Serve {
        #[arg(long, default_value_t = 8048)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Directory for per-session JSONL transcripts.
        #[arg(long)]
        persist: Option<PathBuf>,
    },
}

/// Parses `a..b` and `a..=b` as inclusive ranges, or a single seed.
pub fn parse_seeds(s: &str) -> Result<Vec<u64>, String> {
    let num = |t: &str| t.trim().parse::<u64>().map_err(|_| format!("bad seed {t:?}"));
    let (a, b) = if let Some((a, b)) = s.split_once("..=") {
        (num(a)?, num(b)?)
    } else if let Some((a, b)) = s.split_once("..") {
        (num(a)?, num(b)?)
    } else {
        let v = num(s)?;
        (v, v)
    };
    if b < a {
        return Err(format!("empty seed range {s:?}"));
    }
    Ok((a..=b).collect())
}

fn shape(s: &str) -> Result<BoardShape, String> {
    BoardShape::parse(s).map_err(|e| format!("bad shape {s:?}: {e}"))
}

fn mode(s: &str) -> Result<AdversaryMode, String> {
    AdversaryMode::parse(s).ok_or_else(|| format!("unknown mode {s:?}"))
}

fn write_out(path: &Option<PathBuf>, text: &str, out: &mut dyn Write) -> Result<(), String> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => writeln!(out, "{text}").map_err(|e| e.to_string()),
    }
}

fn load(path: &PathBuf) -> Result<g2048_core::Transcript, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    wire::read_transcript(&text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Runs one command, writing human output to `out`; returns the exit code.
pub fn execute(cmd: Cmd, out: &mut dyn Write) -> Result<i32, String> {
    match cmd {
        Cmd::Verify { shape: s, mode: m, seeds, out: path } => {
            let (s, m, seeds) = (shape(&s)?, mode(&m)?, parse_seeds(&seeds)?);
            let r = verify_claims(&s, m, &seeds);
            let a = &r.aggregate;
            let _ = writeln!(
                out,
                "{s} {}: {} games, final exponent min {} median {} max {}, bound {}",
                r.mode_label, a.games, a.min, a.median, a.max, r.bound
            );
            if let Some(o) = &r.oracle {
                let _ = writeln!(out, "oracle: {} ({} states)", o.max_exponent, o.states_visited);
            }
            for c in &r.claims {
                let mark = if c.holds { "ok" } else if c.gating { "MISMATCH" } else { "note" };
                let _ = writeln!(out, "  {mark:8} {}: {}", c.name, c.detail);
            }
            let json = serde_json::to_string_pretty(&ReportJson::from_report(&r)).expect("serialisable");
            if path.is_some() {
                write_out(&path, &json, out)?;
            }
            Ok(if r.mismatch() { EXIT_MISMATCH } else { EXIT_OK })
        }
        Cmd::Oracle { shape: s, mode: m, cap, out: path } => {
            let (s, m) = (shape(&s)?, mode(&m)?);
            let r = reachable_max(&s, m, cap).map_err(|e| e.to_string())?;
            let json = serde_json::to_string_pretty(&OracleJson::from_result(&r)).expect("serialisable");
            write_out(&path, &json, out)?;
            Ok(if r.max_exponent as usize > s.cell_count() + 1 { EXIT_MISMATCH } else { EXIT_OK })
        }
        Cmd::Match { shape: s, mode: m, seed, max_turns, transcript } => {
            let (s, m) = (shape(&s)?, mode(&m)?);
            let cap = max_turns.unwrap_or_else(|| default_max_turns(&s));
            if cap == 0 {
                return Err("max-turns must be at least 1".into());
            }
            let t = run_match(&s, m, seed, cap);
            fs::write(&transcript, wire::write_transcript(&t)).map_err(|e| format!("{}: {e}", transcript.display()))?;
            let end = t.final_board();
            let _ = writeln!(
                out,
                "{} events, outcome {}, max exponent {}, favourable prefix {}",
                t.events.len(),
                t.outcome.map(|o| o.as_str()).unwrap_or("none"),
                max_tile(&end).unwrap_or(0),
                favourable_prefix(&end)
            );
            Ok(EXIT_OK)
        }
        Cmd::Replay { transcript } => {
            let t = load(&transcript)?;
            match replay_transcript(&t) {
                Ok(st) => {
                    let _ = writeln!(
                        out,
                        "ok: {} events, max exponent {}",
                        t.events.len(),
                        max_tile(&st.board).unwrap_or(0)
                    );
                    let _ = write!(out, "{}", render(&st.board));
                    Ok(EXIT_OK)
                }
                Err(e) => {
                    let _ = writeln!(out, "replay failed: {e}");
                    Ok(EXIT_MISMATCH)
                }
            }
        }
        Cmd::Render { transcript, turn } => {
            let t = load(&transcript)?;
            let b = match turn {
                None => t.final_board(),
                Some(k) => t
                    .events
                    .get(k)
                    .map(|e| e.board_after.clone())
                    .ok_or_else(|| format!("turn {k} out of range, transcript has {} events", t.events.len()))?,
            };
            let _ = write!(out, "{}", render(&b));
            Ok(EXIT_OK)
        }
        Cmd::Serve { port, host, persist } => {
            let addr: SocketAddr = format!("{host}:{port}").parse().map_err(|e| format!("bad address: {e}"))?;
            if let Some(dir) = &persist {
                fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
            }
            let rt = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
            let _ = writeln!(out, "listening on http://{addr}");
            let _ = out.flush();
            rt.block_on(crate::service::serve(addr, persist)).map_err(|e| e.to_string())?;
            Ok(EXIT_OK)
        }
    }
}

/// Parses arguments and runs; usage errors map to exit code 1.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            if e.use_stderr() {
                let _ = write!(err, "{e}");
            } else {
                let _ = write!(out, "{e}");
            }
            return code;
        }
    };
    match execute(cli.cmd, out) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}
