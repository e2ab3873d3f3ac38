//! Acceptance run: one line per criterion, non-zero exit if any fails.
//!
//! Tolerances are wall-clock limits and are pinned below.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use g2048::cli::{self, EXIT_MISMATCH, EXIT_OK};
use g2048::wire::{read_transcript, write_transcript, ReportJson};
use g2048_core::harness::{default_max_turns, run_match_with};
use g2048_core::moves::compact_line;
use g2048_core::oracle::{reachable_max, replay, unreachability_check};
use g2048_core::{
    apply_move, favourable_prefix, max_tile, prev_tile, replay_transcript, run_match, snake_index, snake_rank,
    verify_claims, AdversaryMode, Board, BoardShape, Engine, Move, Position,
};

const ORACLE_LIMIT: Duration = Duration::from_secs(5);
const SNAKE_LIMIT: Duration = Duration::from_secs(30);
const PREFIX_TURNS: usize = 200;
const BOUND_MATCHES: usize = 200;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn sh(d: &[usize]) -> BoardShape {
    BoardShape::new(d).unwrap()
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn oracle_two_by_two() -> Outcome {
    let t = Instant::now();
    let s = sh(&[2, 2]);
    let r = reachable_max(&s, AdversaryMode::Cooperative, u64::MAX).map_err(|e| e.to_string())?;
    let took = t.elapsed();
    check(r.max_exponent == 5, || format!("max exponent {}", r.max_exponent))?;
    let end = replay(&r.witness, &s).map_err(|e| format!("witness does not replay: {e}"))?;
    check(max_tile(&end) == Some(5), || "witness ends without a 32".into())?;
    check(took < ORACLE_LIMIT, || format!("took {took:?}"))?;
    Ok(format!("max exponent 5, witness of {} actions, {} states, {took:.2?}", r.witness.len(), r.states_visited))
}

fn sixty_four_unreachable() -> Outcome {
    let t = Instant::now();
    let unreachable = unreachability_check(&sh(&[2, 2]), 6, AdversaryMode::Cooperative).map_err(|e| e.to_string())?;
    let took = t.elapsed();
    check(unreachable, || "64 reported reachable".into())?;
    check(took < ORACLE_LIMIT, || format!("took {took:?}"))?;
    Ok(format!("64 unreachable on 2x2, {took:.2?}"))
}

const SMALL: [&[usize]; 9] = [&[1, 1], &[1, 2], &[1, 3], &[2, 2], &[1, 4], &[1, 5], &[2, 3], &[1, 6], &[3, 2]];

fn ceiling_formula() -> Outcome {
    let mut notes = Vec::new();
    for d in [&[1usize, 1][..], &[1, 2], &[2, 2]] {
        let s = sh(d);
        let seeds: Vec<u64> = (0..20).collect();
        let r = verify_claims(&s, AdversaryMode::Cooperative, &seeds);
        let bound = (s.cell_count() + 1) as u8;
        check(r.bound == bound, || format!("{s}: bound column {}", r.bound))?;
        if d == [2, 2] {
            check(r.aggregate.max == bound && r.aggregate.min == bound, || {
                format!("{s}: observed {}..{}", r.aggregate.min, r.aggregate.max)
            })?;
        }
        // exit code 2 exactly when the oracle disagrees with the formula, and the witness is reported
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let out = dir.path().join("report.json");
        let argv = ["g2048", "verify", "--shape", &s.to_string(), "--mode", "cooperative", "--seeds", "0..19"];
        let mut argv: Vec<String> = argv.iter().map(|a| a.to_string()).collect();
        argv.extend(["--out".to_string(), out.display().to_string()]);
        let code = cli::run(argv, &mut Vec::new(), &mut Vec::new());
        let rep: ReportJson =
            serde_json::from_str(&std::fs::read_to_string(&out).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let formula = rep.claims.iter().find(|c| c.name == "formula").ok_or("no formula claim")?;
        let want = if formula.holds { EXIT_OK } else { EXIT_MISMATCH };
        check(code == want, || format!("{s}: exit {code}, formula holds {}", formula.holds))?;
        let o = rep.oracle.as_ref().ok_or("no oracle in report")?;
        check(!o.witness.is_empty(), || format!("{s}: report without witness"))?;
        notes.push(format!("{s} observed max {} (bound {bound})", r.aggregate.max));
    }
    // oracle self-consistency on every shape within the guard
    for d in SMALL {
        let s = sh(d);
        let v = |m| reachable_max(&s, m, u64::MAX).map(|r| r.max_exponent).map_err(|e| e.to_string());
        let (adv, pap, coop) = (v(AdversaryMode::Adversarial)?, v(AdversaryMode::Paper)?, v(AdversaryMode::Cooperative)?);
        check(adv <= pap && pap <= coop, || format!("{s}: ordering {adv} {pap} {coop}"))?;
        check(coop as usize <= s.cell_count() + 1, || format!("{s}: {coop} above the bound"))?;
    }
    Ok(notes.join(", "))
}

fn prefix_construction() -> Outcome {
    let s = sh(&[2, 2]);
    let mut engine = Engine::new(&s, AdversaryMode::Cooperative);
    let mut worst = 0;
    for seed in 0..20u64 {
        let t = run_match_with(&mut engine, seed, PREFIX_TURNS);
        let mut prev = 0;
        let mut reached = None;
        for e in &t.events {
            if e.actor != g2048_core::Actor::Computer {
                continue;
            }
            let l = favourable_prefix(&e.board_after);
            check(l >= prev, || format!("seed {seed}: prefix fell from {prev} to {l} at event {}", e.turn))?;
            prev = l;
            if l == 4 && reached.is_none() {
                reached = Some(e.turn + 1);
            }
        }
        let turns = reached.ok_or_else(|| format!("seed {seed}: prefix 4 never reached"))?;
        worst = worst.max(turns);
    }
    Ok(format!("seeds 0..19 reach prefix 4 by event {worst}, never decreasing"))
}

fn sample_game_replay() -> Outcome {
    let text = include_str!("fixtures/sample_game_2x2.jsonl");
    let t = read_transcript(text).map_err(|e| e.to_string())?;
    let st = replay_transcript(&t).map_err(|e| e.to_string())?;
    let at = |c: &[usize]| st.board.get(&Position::new(c));
    let got = [at(&[0, 0]), at(&[0, 1]), at(&[1, 1]), at(&[1, 0])];
    check(got == [Some(5), Some(4), Some(3), Some(2)], || format!("final board {got:?}"))?;
    Ok(format!("{} events replay legally; final 32 at (0,0), 16, 8, 4", t.events.len()))
}

// Independent reference: the boustrophedon built layer by layer.
fn reference_order(dims: &[usize]) -> Vec<Vec<usize>> {
    match dims.len() {
        1 => (0..dims[0]).map(|i| vec![i]).collect(),
        2 => {
            let mut out = Vec::new();
            for q in 0..dims[0] {
                for r in 0..dims[1] {
                    let j = if q % 2 == 0 { r } else { dims[1] - 1 - r };
                    out.push(vec![q, j]);
                }
            }
            out
        }
        d => {
            let inner = reference_order(&dims[..d - 1]);
            let mut out = Vec::new();
            for k in 0..dims[d - 1] {
                let layer: Box<dyn Iterator<Item = &Vec<usize>>> =
                    if k % 2 == 0 { Box::new(inner.iter()) } else { Box::new(inner.iter().rev()) };
                for p in layer {
                    let mut q = p.clone();
                    q.push(k);
                    out.push(q);
                }
            }
            out
        }
    }
}

// Target-cell closed form for two dimensions: (q, n2^(q mod 2) - 1 + (-1)^(q mod 2) r).
fn closed_form(m: usize, n2: usize) -> Vec<usize> {
    let (q, r) = (m / n2, m % n2);
    let odd = q % 2;
    let j = n2.pow(odd as u32) as isize - 1 + if odd == 1 { -(r as isize) } else { r as isize };
    vec![q, j as usize]
}

fn snake() -> Outcome {
    let t = Instant::now();
    let mut shapes = Vec::new();
    for a in 1..=20 {
        for b in 1..=20 {
            shapes.push(vec![a, b]);
        }
    }
    for n in 1..=10 {
        shapes.push(vec![n, n, n]);
    }
    shapes.push(vec![2, 2, 2, 2]);
    let mut cells = 0;
    for d in &shapes {
        let s = sh(d);
        let n = s.cell_count();
        let reference = reference_order(d);
        let mut seen = HashSet::with_capacity(n);
        let mut last: Option<Position> = None;
        for m in 0..n {
            let p = snake_index(m, &s).map_err(|e| e.to_string())?;
            check(p.0 == reference[m], || format!("{s}: S_{m} = {:?}, recursion gives {:?}", p.0, reference[m]))?;
            if d.len() == 2 {
                check(p.0 == closed_form(m, d[1]), || format!("{s}: closed form differs at {m}"))?;
            }
            check(snake_rank(&p, &s) == Ok(m), || format!("{s}: rank of S_{m}"))?;
            check(seen.insert(p.clone()), || format!("{s}: S_{m} repeats"))?;
            if let Some(q) = &last {
                check(p.manhattan(q) == 1, || format!("{s}: S_{} and S_{m} not adjacent", m - 1))?;
                check(prev_tile(&p, &s).as_ref() == Ok(q), || format!("{s}: prev(S_{m}) != S_{}", m - 1))?;
            }
            last = Some(p);
        }
        check(seen.len() == n, || format!("{s}: covers {} of {n}", seen.len()))?;
        cells += n;
    }
    let took = t.elapsed();
    check(took < SNAKE_LIMIT, || format!("took {took:?}"))?;
    Ok(format!("{} shapes, {cells} cells, {took:.2?}", shapes.len()))
}

fn reference_compact(line: &[u8]) -> Vec<u8> {
    let tiles: Vec<u8> = line.iter().copied().filter(|&e| e != 0).collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < tiles.len() {
        if i + 1 < tiles.len() && tiles[i] == tiles[i + 1] {
            out.push(tiles[i] + 1);
            i += 2;
        } else {
            out.push(tiles[i]);
            i += 1;
        }
    }
    out.resize(line.len(), 0);
    out
}

fn move_oracle() -> Outcome {
    let mut checked = 0;
    for n in 1..=4usize {
        // the fiber lies along every axis of a 3-D board in turn
        for axis in 0..3 {
            let mut dims = vec![1, 1, 1];
            dims[axis] = n;
            let s = sh(&dims);
            for code in 0..4usize.pow(n as u32) {
                let line: Vec<u8> = (0..n).map(|k| ((code / 4usize.pow(k as u32)) % 4) as u8).collect();
                let b = Board::from_raw(&s, line.clone()).map_err(|e| e.to_string())?;
                for sign in [-1i8, 1] {
                    let want = if sign < 0 {
                        reference_compact(&line)
                    } else {
                        let rev: Vec<u8> = line.iter().rev().copied().collect();
                        let mut w = reference_compact(&rev);
                        w.reverse();
                        w
                    };
                    let out = apply_move(&b, Move::new(axis, sign));
                    check(out.board_after.raw() == &want[..], || format!("axis {axis} sign {sign} line {line:?}"))?;
                    check(out.changed == (want != line), || format!("changed flag on {line:?}"))?;
                    let mut raw = line.clone();
                    let mut merged = Vec::new();
                    if sign < 0 {
                        compact_line(&mut raw, &mut merged);
                        check(raw == want, || format!("compact_line on {line:?}"))?;
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} fiber/direction cases, 256 length-4 fibers per direction"))
}

fn determinism() -> Outcome {
    let mut runs = 0;
    for d in [&[2usize, 2][..], &[3, 3], &[4, 4], &[2, 2, 2]] {
        let s = sh(d);
        for seed in 0..5 {
            let a = write_transcript(&run_match(&s, AdversaryMode::Paper, seed, default_max_turns(&s)));
            let b = write_transcript(&run_match(&s, AdversaryMode::Paper, seed, default_max_turns(&s)));
            check(a == b, || format!("{s} seed {seed}: transcripts differ"))?;
            runs += 1;
        }
    }
    Ok(format!("{runs} paper-mode transcript pairs byte-identical"))
}

fn bound_safety() -> Outcome {
    let shapes = [sh(&[2, 2]), sh(&[2, 3]), sh(&[3, 3]), sh(&[2, 2, 2])];
    let per = BOUND_MATCHES.div_ceil(shapes.len() * AdversaryMode::ALL.len()) as u64;
    let mut matches = 0;
    let mut highest = Vec::new();
    for s in &shapes {
        let bound = s.cell_count() + 1;
        let mut top = 0;
        for mode in AdversaryMode::ALL {
            let mut engine = Engine::new(s, mode);
            for seed in 0..per {
                let t = run_match_with(&mut engine, seed, default_max_turns(s));
                for e in &t.events {
                    let m = max_tile(&e.board_after).unwrap_or(0) as usize;
                    check(m <= bound, || format!("{s} {mode} seed {seed}: exponent {m} at event {}", e.turn))?;
                    top = top.max(m);
                }
                matches += 1;
            }
        }
        highest.push(format!("{s} {top}/{bound}"));
    }
    check(matches >= BOUND_MATCHES, || format!("only {matches} matches"))?;
    Ok(format!("{matches} matches, highest/bound: {}", highest.join(", ")))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("2x2 cooperative oracle = 5", oracle_two_by_two),
        ("ceiling check (64 unreachable on 2x2)", sixty_four_unreachable),
        ("cell_count + 1 formula at desk scale", ceiling_formula),
        ("2x2 prefix reaches 4, monotone", prefix_construction),
        ("2x2 sample game replay", sample_game_replay),
        ("snake / prev coherence", snake),
        ("move mechanics vs 1-D reference", move_oracle),
        ("determinism of paper-mode matches", determinism),
        ("bound safety over 200 matches", bound_safety),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let res = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match res {
            Ok(msg) => println!("PASS {} {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {} {name}: {msg}", i + 1);
            }
        }
    }
    println!("{} of {} acceptance criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
