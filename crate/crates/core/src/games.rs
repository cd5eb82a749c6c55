//! The bisimulation game between two pointed models and the class game in
//! which Verifier first picks one model from each class.
//!
//! Each round Spoiler moves along an edge on either side and Verifier answers
//! on the other side. Spoiler wins when the current pair disagrees on a
//! proposition or Verifier cannot answer; Verifier wins when Spoiler cannot
//! move or the round bound is reached.
//!
//! Winners are computed from Spoiler's rank table, independently of the
//! partition refinement in the bisimulation module.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::kripke::{ModelClass, PointedModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Winner {
    Verifier,
    Spoiler,
}

impl Winner {
    pub fn as_str(self) -> &'static str {
        match self {
            Winner::Verifier => "verifier",
            Winner::Spoiler => "spoiler",
        }
    }
}

impl fmt::Display for Winner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Number of rounds to play.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rounds {
    Bounded(usize),
    Unbounded,
}

impl Rounds {
    fn remaining_after(self, elapsed: usize) -> Option<usize> {
        match self {
            Rounds::Bounded(k) => Some(k - elapsed),
            Rounds::Unbounded => None,
        }
    }
}

impl fmt::Display for Rounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rounds::Bounded(k) => write!(f, "{k}"),
            Rounds::Unbounded => f.write_str("unbounded"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("move {0} is not allowed while models are being chosen")]
    NotChoosing(String),
    #[error("models have already been chosen")]
    AlreadyChosen,
    #[error("model index {index} is out of range for {side} class of {len}")]
    NoSuchModel { side: &'static str, index: usize, len: usize },
    #[error("it is Verifier's turn to answer on the {0} side")]
    VerifierToMove(&'static str),
    #[error("it is Spoiler's turn")]
    SpoilerToMove,
    #[error("state {target} is not a successor of {from} on the {side} side")]
    NotASuccessor {
        side: &'static str,
        from: usize,
        target: usize,
    },
}

/// The current pair, a pending Spoiler move awaiting Verifier's answer, and
/// rounds elapsed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Board {
    pub left: usize,
    pub right: usize,
    pub pending: Option<(Side, usize)>,
    pub elapsed: usize,
}

/// A model-comparison game in progress.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelGame {
    pub left: PointedModel,
    pub right: PointedModel,
    pub bound: Rounds,
    pub board: Board,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GamePosition {
    /// Verifier is about to choose one model from each class.
    ClassChoice {
        c1: ModelClass,
        c2: ModelClass,
        bound: Rounds,
    },
    ModelGame(ModelGame),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    ChooseModels(usize, usize),
    SpoilerStep(Side, usize),
    VerifierStep(usize),
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::ChooseModels(i, j) => write!(f, "choose {i} {j}"),
            Move::SpoilerStep(side, s) => write!(f, "spoiler {} {s}", side.as_str()),
            Move::VerifierStep(s) => write!(f, "verifier {s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Continue(GamePosition),
    Over(Winner),
}

impl ModelGame {
    /// Starts a game at the two points; the opening position may already be
    /// decided.
    pub fn start(left: &PointedModel, right: &PointedModel, bound: Rounds) -> Outcome {
        let alphabet = left.model().alphabet().union(right.model().alphabet());
        let game = ModelGame {
            left: left.with_alphabet(&alphabet),
            right: right.with_alphabet(&alphabet),
            bound,
            board: Board {
                left: left.point(),
                right: right.point(),
                pending: None,
                elapsed: 0,
            },
        };
        game.enter()
    }

    fn successors(&self, side: Side, s: usize) -> &[usize] {
        match side {
            Side::Left => self.left.model().successors(s),
            Side::Right => self.right.model().successors(s),
        }
    }

    fn current(&self, side: Side) -> usize {
        match side {
            Side::Left => self.board.left,
            Side::Right => self.board.right,
        }
    }

    /// Settles a freshly reached pair position if the game is already over.
    fn enter(self) -> Outcome {
        let b = self.board;
        if self.left.model().valuation(b.left) != self.right.model().valuation(b.right) {
            return Outcome::Over(Winner::Spoiler);
        }
        if self.bound == Rounds::Bounded(b.elapsed) {
            return Outcome::Over(Winner::Verifier);
        }
        if self.successors(Side::Left, b.left).is_empty() && self.successors(Side::Right, b.right).is_empty() {
            return Outcome::Over(Winner::Verifier);
        }
        Outcome::Continue(GamePosition::ModelGame(self))
    }

    pub fn legal_moves(&self) -> Vec<Move> {
        match self.board.pending {
            None => [Side::Left, Side::Right]
                .into_iter()
                .flat_map(|side| {
                    self.successors(side, self.current(side))
                        .iter()
                        .map(move |&t| Move::SpoilerStep(side, t))
                })
                .collect(),
            Some((side, _)) => {
                let answer = side.other();
                self.successors(answer, self.current(answer))
                    .iter()
                    .map(|&t| Move::VerifierStep(t))
                    .collect()
            }
        }
    }

    pub fn step(&self, mv: Move) -> Result<Outcome, GameError> {
        match (self.board.pending, mv) {
            (_, Move::ChooseModels(..)) => Err(GameError::AlreadyChosen),
            (Some((side, _)), Move::SpoilerStep(..)) => Err(GameError::VerifierToMove(side.other().as_str())),
            (None, Move::VerifierStep(_)) => Err(GameError::SpoilerToMove),
            (None, Move::SpoilerStep(side, target)) => {
                let from = self.current(side);
                if !self.successors(side, from).contains(&target) {
                    return Err(GameError::NotASuccessor {
                        side: side.as_str(),
                        from,
                        target,
                    });
                }
                let answer = side.other();
                if self.successors(answer, self.current(answer)).is_empty() {
                    return Ok(Outcome::Over(Winner::Spoiler));
                }
                let mut next = self.clone();
                next.board.pending = Some((side, target));
                Ok(Outcome::Continue(GamePosition::ModelGame(next)))
            }
            (Some((side, moved)), Move::VerifierStep(target)) => {
                let answer = side.other();
                let from = self.current(answer);
                if !self.successors(answer, from).contains(&target) {
                    return Err(GameError::NotASuccessor {
                        side: answer.as_str(),
                        from,
                        target,
                    });
                }
                let (left, right) = match side {
                    Side::Left => (moved, target),
                    Side::Right => (target, moved),
                };
                let mut next = self.clone();
                next.board = Board {
                    left,
                    right,
                    pending: None,
                    elapsed: self.board.elapsed + 1,
                };
                Ok(next.enter())
            }
        }
    }

    /// The player whose turn it is.
    pub fn to_move(&self) -> Winner {
        match self.board.pending {
            None => Winner::Spoiler,
            Some(_) => Winner::Verifier,
        }
    }
}

impl GamePosition {
    pub fn class_game(c1: &ModelClass, c2: &ModelClass, bound: Rounds) -> Outcome {
        if c1.is_empty() || c2.is_empty() {
            return Outcome::Over(Winner::Spoiler);
        }
        Outcome::Continue(GamePosition::ClassChoice {
            c1: c1.clone(),
            c2: c2.clone(),
            bound,
        })
    }

    pub fn legal_moves(&self) -> Vec<Move> {
        match self {
            GamePosition::ClassChoice { c1, c2, .. } => (0..c1.len())
                .flat_map(|i| (0..c2.len()).map(move |j| Move::ChooseModels(i, j)))
                .collect(),
            GamePosition::ModelGame(g) => g.legal_moves(),
        }
    }
}

/// Applies `mv` at `g`.
pub fn step(g: &GamePosition, mv: Move) -> Result<Outcome, GameError> {
    match g {
        GamePosition::ModelGame(game) => game.step(mv),
        GamePosition::ClassChoice { c1, c2, bound } => match mv {
            Move::ChooseModels(i, j) => {
                if i >= c1.len() {
                    return Err(GameError::NoSuchModel {
                        side: "first",
                        index: i,
                        len: c1.len(),
                    });
                }
                if j >= c2.len() {
                    return Err(GameError::NoSuchModel {
                        side: "second",
                        index: j,
                        len: c2.len(),
                    });
                }
                Ok(ModelGame::start(&c1.members[i], &c2.members[j], *bound))
            }
            other => Err(GameError::NotChoosing(other.to_string())),
        },
    }
}

/// `rank[s][t]`: least number of rounds in which Spoiler forces a win from
/// the pair `(s, t)`, or `None` if Verifier survives forever.
#[derive(Debug, Clone)]
pub struct RankTable {
    rank: Vec<Vec<Option<usize>>>,
}

impl RankTable {
    pub fn new(left: &PointedModel, right: &PointedModel) -> Self {
        let alphabet = left.model().alphabet().union(right.model().alphabet());
        let (l, r) = (left.with_alphabet(&alphabet), right.with_alphabet(&alphabet));
        let (ml, mr) = (l.model(), r.model());
        let mut rank: Vec<Vec<Option<usize>>> = (0..ml.len())
            .map(|s| {
                (0..mr.len())
                    .map(|t| (ml.valuation(s) != mr.valuation(t)).then_some(0))
                    .collect()
            })
            .collect();
        let mut j = 0;
        loop {
            let won = |rank: &Vec<Vec<Option<usize>>>, s: usize, t: usize| rank[s][t].is_some_and(|x| x <= j);
            let mut fresh = Vec::new();
            for s in 0..ml.len() {
                for t in 0..mr.len() {
                    if rank[s][t].is_some() {
                        continue;
                    }
                    let left_attack = ml
                        .successors(s)
                        .iter()
                        .any(|&s2| mr.successors(t).iter().all(|&t2| won(&rank, s2, t2)));
                    let right_attack = mr
                        .successors(t)
                        .iter()
                        .any(|&t2| ml.successors(s).iter().all(|&s2| won(&rank, s2, t2)));
                    if left_attack || right_attack {
                        fresh.push((s, t));
                    }
                }
            }
            if fresh.is_empty() {
                break;
            }
            j += 1;
            for (s, t) in fresh {
                rank[s][t] = Some(j);
            }
        }
        RankTable { rank }
    }

    pub fn rank(&self, s: usize, t: usize) -> Option<usize> {
        self.rank[s][t]
    }

    /// Spoiler wins from `(s, t)` with `remaining` rounds left.
    pub fn spoiler_wins(&self, s: usize, t: usize, remaining: Option<usize>) -> bool {
        match (self.rank[s][t], remaining) {
            (None, _) => false,
            (Some(_), None) => true,
            (Some(r), Some(k)) => r <= k,
        }
    }
}

/// Winner of the game on the two points.
pub fn game_winner(p1: &PointedModel, p2: &PointedModel, rounds: Rounds) -> Winner {
    let table = RankTable::new(p1, p2);
    let remaining = rounds.remaining_after(0);
    if table.spoiler_wins(p1.point(), p2.point(), remaining) {
        Winner::Spoiler
    } else {
        Winner::Verifier
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassGameResult {
    pub winner: Winner,
    /// Verifier's winning choice of models, when there is one.
    pub opening: Option<(usize, usize)>,
}

/// The class game with unbounded model games.
pub fn class_game_winner(c1: &ModelClass, c2: &ModelClass) -> ClassGameResult {
    class_game_winner_bounded(c1, c2, Rounds::Unbounded)
}

pub fn class_game_winner_bounded(c1: &ModelClass, c2: &ModelClass, rounds: Rounds) -> ClassGameResult {
    for (i, a) in c1.iter().enumerate() {
        for (j, b) in c2.iter().enumerate() {
            if game_winner(a, b, rounds) == Winner::Verifier {
                return ClassGameResult {
                    winner: Winner::Verifier,
                    opening: Some((i, j)),
                };
            }
        }
    }
    ClassGameResult {
        winner: Winner::Spoiler,
        opening: None,
    }
}

/// A position of a model game as seen by a strategy: rounds remaining
/// replaces rounds elapsed so that unbounded games stay finite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StrategyKey {
    pub left: usize,
    pub right: usize,
    pub pending: Option<(usize, usize)>,
    pub remaining: Option<usize>,
}

impl StrategyKey {
    pub fn of(game: &ModelGame) -> Self {
        let b = game.board;
        StrategyKey {
            left: b.left,
            right: b.right,
            pending: b.pending.map(|(side, s)| (side as usize, s)),
            remaining: game.bound.remaining_after(b.elapsed),
        }
    }
}

/// The winner's moves at every position reachable when the winner follows
/// them and the opponent plays anything.
#[derive(Debug, Clone)]
pub struct Strategy {
    pub winner: Winner,
    pub moves: HashMap<StrategyKey, Move>,
}

impl Strategy {
    pub fn recommend(&self, game: &ModelGame) -> Option<Move> {
        self.moves.get(&StrategyKey::of(game)).copied()
    }
}

/// Extracts a winning strategy for whoever wins the game on the two points.
/// A winning Spoiler always moves to positions of strictly smaller rank, so
/// wins within the rank of the opening pair.
pub fn extract_strategy(p1: &PointedModel, p2: &PointedModel, rounds: Rounds) -> Strategy {
    let table = RankTable::new(p1, p2);
    let winner = game_winner(p1, p2, rounds);
    let mut moves = HashMap::new();
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    if let Outcome::Continue(GamePosition::ModelGame(g)) = ModelGame::start(p1, p2, rounds) {
        queue.push_back(g);
    }
    while let Some(g) = queue.pop_front() {
        let key = StrategyKey::of(&g);
        if !seen.insert(key) {
            continue;
        }
        let candidates = g.legal_moves();
        let followed = if g.to_move() == winner {
            let mv = choose(&table, &g, &candidates, winner);
            moves.insert(key, mv);
            vec![mv]
        } else {
            candidates
        };
        for mv in followed {
            if let Ok(Outcome::Continue(GamePosition::ModelGame(next))) = g.step(mv) {
                queue.push_back(next);
            }
        }
    }
    Strategy { winner, moves }
}

fn choose(table: &RankTable, g: &ModelGame, candidates: &[Move], winner: Winner) -> Move {
    let remaining = g.bound.remaining_after(g.board.elapsed);
    let after = remaining.map(|k| k - 1);
    match winner {
        Winner::Spoiler => {
            let rank = table.rank(g.board.left, g.board.right).expect("Spoiler is winning here");
            // Every answer must land on a pair of smaller rank.
            *candidates
                .iter()
                .find(|mv| {
                    let Move::SpoilerStep(side, target) = **mv else { return false };
                    let answer = side.other();
                    g.successors(answer, g.current(answer)).iter().all(|&reply| {
                        let (s, t) = match side {
                            Side::Left => (target, reply),
                            Side::Right => (reply, target),
                        };
                        table.rank(s, t).is_some_and(|r| r < rank)
                    })
                })
                .expect("a winning Spoiler has a rank-decreasing move")
        }
        Winner::Verifier => {
            let (side, moved) = g.board.pending.expect("Verifier answers a pending move");
            *candidates
                .iter()
                .find(|mv| {
                    let Move::VerifierStep(reply) = **mv else { return false };
                    let (s, t) = match side {
                        Side::Left => (moved, reply),
                        Side::Right => (reply, moved),
                    };
                    !table.spoiler_wins(s, t, after)
                })
                .expect("a winning Verifier has a safe answer")
        }
    }
}
