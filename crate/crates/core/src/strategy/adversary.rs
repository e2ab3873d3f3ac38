//! Computer placement strategies.
//!
//! `paper` follows the three-step placement rule: anchor on the largest tile
//! (smallest snake rank on ties); with a tile of value 4 or more, drop a 4 in
//! the anchor's rectilinear neighbourhood, otherwise a 2 in its diagonal
//! neighbourhood, or else a 2 next to another 2. Candidates are restricted to
//! the half of the board opposite the last move when that leaves any, and
//! the smallest snake rank wins.
//!
//! `cooperative` searches the placement tree against the player policy on
//! small boards and `adversarial` minimises the exhaustive minimax value.
//! Beyond [`SEARCH_GUARD_CELLS`] both use one-ply greedy rules.
//! `random` draws uniformly from the `{2, 4} x empty cell` menu.

use alloc::vec::Vec;

use hashbrown::HashMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::board::{prefix_raw, Board};
use crate::layout::Layout;
use crate::moves::Move;
use crate::oracle::Solver;
use crate::shape::BoardShape;
use crate::strategy::player::{PlayerPolicy, PlayerPolicyState};
use crate::strategy::{
    Action, AdversaryMode, Placement, StrategyDecision, StrategyError, Tag, SEARCH_GUARD_CELLS,
};

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Opening placement: a 4 at a seeded-uniform cell.
pub fn adversary_open(shape: &BoardShape, seed: u64) -> Placement {
    let n = shape.cell_count();
    let idx = rng_for(seed, 0).random_range(0..n);
    Placement { pos: shape.position(idx), exp: 2 }
}

/// One response in `mode`, using a fresh search context.
///
/// Random mode draws from stream 1; [`Adversary::respond`] takes an explicit turn.
pub fn adversary_respond(
    b: &Board,
    last_player_move: Move,
    mode: AdversaryMode,
    seed: u64,
) -> Result<Placement, StrategyError> {
    let mut adv = Adversary::new(b.shape(), mode);
    let mut st = PlayerPolicyState::new();
    st.observe(b);
    let d = adv.respond(b, Some(last_player_move), seed, 1, &st)?;
    match d.action {
        Action::Place(p) => Ok(p),
        Action::Move(_) => unreachable!("adversary only places"),
    }
}

/// Paper-mode placement on raw cells as `(linear index, exponent, tag)`.
pub(crate) fn paper_placement(lay: &Layout, cells: &[u8], last: Option<Move>) -> Option<(usize, u8, Tag)> {
    let t = &lay.snake;
    let empties: Vec<usize> = t.order().iter().copied().filter(|&i| cells[i] == 0).collect();
    if empties.is_empty() {
        return None;
    }
    let anchor = t.order().iter().copied().filter(|&i| cells[i] != 0).fold(None::<usize>, |acc, i| match acc {
        Some(a) if cells[a] >= cells[i] => Some(a),
        _ => Some(i),
    });
    let Some(anchor) = anchor else {
        return Some((empties[0], 2, Tag::Fallback));
    };
    let big = cells[anchor] >= 2;

    let (cands, exp, tag): (Vec<usize>, u8, Tag) = if big {
        (empties.iter().copied().filter(|&i| lay.is_rect(anchor, i)).collect(), 2, Tag::Step2)
    } else {
        let diag: Vec<usize> =
            empties.iter().copied().filter(|&i| i != anchor && !lay.is_rect(anchor, i)).collect();
        if !diag.is_empty() {
            (diag, 1, Tag::Step2)
        } else {
            let near_two: Vec<usize> =
                empties.iter().copied().filter(|&i| lay.rect[i].iter().any(|&j| cells[j] == 1)).collect();
            (near_two, 1, Tag::Step3)
        }
    };
    if cands.is_empty() {
        return Some((empties[0], if big { 2 } else { 1 }, Tag::Fallback));
    }
    let filtered: Vec<usize> = match last {
        Some(mv) => {
            let n = lay.shape.dims()[mv.axis];
            cands
                .iter()
                .copied()
                .filter(|&i| {
                    let c = lay.coords[i][mv.axis];
                    if mv.sign < 0 {
                        2 * c + 1 >= n
                    } else {
                        2 * c < n
                    }
                })
                .collect()
        }
        None => Vec::new(),
    };
    let pool = if filtered.is_empty() { &cands } else { &filtered };
    // candidates were collected in snake order
    Some((pool[0], exp, tag))
}

/// Count of equal tile pairs that one slide could merge.
pub(crate) fn mergeable_pairs(lay: &Layout, cells: &[u8]) -> usize {
    let mut n = 0;
    for axis in 0..lay.shape.d() {
        for f in lay.plan.fibers(Move::new(axis, -1)) {
            let mut prev = 0u8;
            for &i in f {
                let e = cells[i];
                if e != 0 {
                    if e == prev {
                        n += 1;
                        prev = 0;
                    } else {
                        prev = e;
                    }
                }
            }
        }
    }
    n
}

/// (largest exponent, final prefix, prefix never dropped, minus event count); larger is better.
type Objective = (u8, u8, bool, i32);

/// Stateful computer player; holds search caches for one shape and mode.
#[derive(Debug)]
pub struct Adversary {
    layout: Layout,
    mode: AdversaryMode,
    policy: PlayerPolicy,
    coop_comp: HashMap<u64, (Objective, usize, u8)>,
    coop_player: HashMap<u64, Objective>,
    solver: Option<Solver>,
}

impl Adversary {
    pub fn new(shape: &BoardShape, mode: AdversaryMode) -> Self {
        let layout = Layout::new(shape);
        let policy = PlayerPolicy::from_layout(&layout);
        Adversary {
            layout,
            mode,
            policy,
            coop_comp: HashMap::new(),
            coop_player: HashMap::new(),
            solver: None,
        }
    }

    pub fn mode(&self) -> AdversaryMode {
        self.mode
    }

    pub fn shape(&self) -> &BoardShape {
        &self.layout.shape
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn policy(&self) -> &PlayerPolicy {
        &self.policy
    }

    /// Output label, e.g. `cooperative-greedy`.
    pub fn label(&self) -> &'static str {
        self.mode.label(&self.layout.shape)
    }

    pub fn open(&self, seed: u64) -> StrategyDecision {
        StrategyDecision { action: Action::Place(adversary_open(&self.layout.shape, seed)), tag: Tag::Step1 }
    }

    /// Placement after the player's move `last`. `turn` selects the random stream.
    pub fn respond(
        &mut self,
        b: &Board,
        last: Option<Move>,
        seed: u64,
        turn: u64,
        st: &PlayerPolicyState,
    ) -> Result<StrategyDecision, StrategyError> {
        if b.shape() != &self.layout.shape {
            return Err(StrategyError::ShapeMismatch);
        }
        let cells = b.raw();
        if cells.iter().all(|&e| e != 0) {
            return Err(StrategyError::NoEmptyCell);
        }
        let small = self.layout.cells() <= SEARCH_GUARD_CELLS;
        let (idx, exp, tag) = match self.mode {
            AdversaryMode::Paper => paper_placement(&self.layout, cells, last).expect("has empty cell"),
            AdversaryMode::Random => {
                let empties: Vec<usize> = b.empty_indices().collect();
                let k = rng_for(seed, turn.max(1)).random_range(0..empties.len() * 2);
                (empties[k / 2], (k % 2) as u8 + 1, Tag::Fallback)
            }
            AdversaryMode::Cooperative if small => {
                let prev = prefix_raw(cells, &self.layout.snake) as u8;
                let (_, i, e) = self.coop_computer(cells, st.current_m, prev);
                (i, e, Tag::Fallback)
            }
            AdversaryMode::Cooperative => {
                let (i, e) = self.greedy(cells, true, st.current_m);
                (i, e, Tag::Fallback)
            }
            AdversaryMode::Adversarial if small => {
                let (i, e) = self.minimax_placement(cells);
                (i, e, Tag::Fallback)
            }
            AdversaryMode::Adversarial => {
                let (i, e) = self.greedy(cells, false, st.current_m);
                (i, e, Tag::Fallback)
            }
        };
        Ok(StrategyDecision {
            action: Action::Place(Placement { pos: self.layout.shape.position(idx), exp }),
            tag,
        })
    }

    /// Whether the policy's reply to `cells` keeps the favourable prefix.
    fn reply_keeps_prefix(&self, cells: &[u8], cm: usize) -> bool {
        let t = &self.layout.snake;
        let cm = self.policy.advance(cells, cm);
        let Some((mv, _)) = self.policy.decide_raw(cells, cm) else { return false };
        let mut after = cells.to_vec();
        let mut merged = Vec::new();
        self.layout.plan.apply_raw(&mut after, mv, &mut merged);
        prefix_raw(&after, t) >= prefix_raw(cells, t)
    }

    fn greedy(&self, cells: &[u8], cooperative: bool, cm: usize) -> (usize, u8) {
        let t = &self.layout.snake;
        let mut best: Option<((bool, bool, usize, u8, usize), usize, u8)> = None;
        let mut buf = cells.to_vec();
        for &i in t.order() {
            if cells[i] != 0 {
                continue;
            }
            for e in [1u8, 2] {
                buf[i] = e;
                let pairs = mergeable_pairs(&self.layout, &buf);
                let rank = t.rank(i);
                // larger key wins
                let key = if cooperative {
                    (self.reply_keeps_prefix(&buf, cm), buf[t.cell(0)] != 0, pairs, (e == 1) as u8, rank)
                } else {
                    (true, true, usize::MAX - pairs, (e == 2) as u8, usize::MAX - rank)
                };
                if best.as_ref().is_none_or(|(k, _, _)| key > *k) {
                    best = Some((key, i, e));
                }
            }
            buf[i] = 0;
        }
        let (_, i, e) = best.expect("has empty cell");
        (i, e)
    }

    fn minimax_placement(&mut self, cells: &[u8]) -> (usize, u8) {
        let layout = &self.layout;
        let solver = self
            .solver
            .get_or_insert_with(|| Solver::new(&layout.shape, AdversaryMode::Adversarial));
        let mut buf = cells.to_vec();
        let mut best: Option<(u8, usize, u8)> = None;
        for &i in layout.snake.order() {
            if cells[i] != 0 {
                continue;
            }
            for e in [1u8, 2] {
                buf[i] = e;
                let v = solver.player_value(&buf);
                if best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, i, e));
                }
            }
            buf[i] = 0;
        }
        let (_, i, e) = best.expect("has empty cell");
        (i, e)
    }

    fn key(&self, cells: &[u8], cm: usize, prev: u8) -> u64 {
        self.layout.pack(cells) | ((cm as u64) << 40) | (u64::from(prev) << 48)
    }

    /// `prev` is the prefix the player saw before its last move.
    fn coop_computer(&mut self, cells: &[u8], cm: usize, prev: u8) -> (Objective, usize, u8) {
        let k = self.key(cells, cm, prev);
        if let Some(&v) = self.coop_comp.get(&k) {
            return v;
        }
        let order: Vec<usize> = self.layout.snake.order().to_vec();
        let mut buf = cells.to_vec();
        let mut best: Option<(Objective, usize, u8)> = None;
        for i in order {
            if cells[i] != 0 {
                continue;
            }
            for e in [2u8, 1] {
                buf[i] = e;
                let v = self.coop_player_value(&buf, cm, prev);
                if best.is_none_or(|(bv, _, _)| v > bv) {
                    best = Some((v, i, e));
                }
            }
            buf[i] = 0;
        }
        let best = best.expect("has empty cell");
        self.coop_comp.insert(k, best);
        best
    }

    fn coop_player_value(&mut self, cells: &[u8], cm: usize, prev: u8) -> Objective {
        let k = self.key(cells, cm, prev) | (1 << 63);
        if let Some(&v) = self.coop_player.get(&k) {
            return v;
        }
        let n = self.layout.cells();
        let top = cells.iter().copied().max().unwrap_or(0);
        let prefix = prefix_raw(cells, &self.layout.snake) as u8;
        let cm2 = self.policy.advance(cells, cm);
        let mono = prefix >= prev;
        let v = if top as usize == n + 1 && prefix as usize == n {
            (top, prefix, mono, 0)
        } else {
            match self.policy.decide_raw(cells, cm2) {
                None => (top, prefix, mono, 0),
                Some((mv, _)) => {
                    let mut after = cells.to_vec();
                    let mut merged = Vec::new();
                    self.layout.plan.apply_raw(&mut after, mv, &mut merged);
                    let (sub, _, _) = self.coop_computer(&after, cm2, prefix);
                    (sub.0.max(top), sub.1, sub.2 && mono, sub.3 - 2)
                }
            }
        };
        self.coop_player.insert(k, v);
        v
    }
}
