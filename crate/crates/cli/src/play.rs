//! Interactive play over a line protocol. The user plays one role, the
//! program plays the other (following a winning strategy when it has one).
//!
//! Commands: `move <side> <state>`, `move <state>` (Verifier answers on the
//! only possible side), `choose <i> <j>`, `show`, `moves`, `quit`.

use std::io::{BufRead, Write};

use serde_json::{json, Value};

use classbisim_core::games::{
    class_game_winner_bounded, extract_strategy, step, GamePosition, ModelGame, Move, Outcome, Rounds, Side,
    Strategy, Winner,
};
use classbisim_core::kripke::{ModelClass, PointedModel};

use crate::report::Report;
use crate::{Failure, Role};

pub enum Start {
    Models(PointedModel, PointedModel),
    Classes(ModelClass, ModelClass),
}

struct Session<'a> {
    out: &'a mut dyn Write,
    report: Report,
    user: Winner,
    rounds: Rounds,
    strategy: Option<Strategy>,
}

pub fn session(
    start: Start,
    rounds: Rounds,
    role: Role,
    lines: &mut dyn BufRead,
    out: &mut dyn Write,
    report: Report,
) -> Result<(), Failure> {
    let user = match role {
        Role::Spoiler => Winner::Spoiler,
        Role::Verifier => Winner::Verifier,
    };
    let mut s = Session {
        out,
        report,
        user,
        rounds,
        strategy: None,
    };
    let mut state = match start {
        Start::Models(a, b) => ModelGame::start(&a, &b, rounds),
        Start::Classes(c1, c2) => GamePosition::class_game(&c1, &c2, rounds),
    };
    let mut announce = true;
    loop {
        let pos = match &state {
            Outcome::Over(w) => return s.emit(json!({"event": "over", "winner": w.as_str()})),
            Outcome::Continue(pos) => pos.clone(),
        };
        if announce {
            s.emit(position_json(&pos))?;
        }
        announce = true;
        if to_move(&pos) != s.user {
            let mv = s.program_move(&pos);
            s.emit(json!({"event": "move", "player": to_move(&pos).as_str(), "move": move_text(&pos, mv)}))?;
            state = step(&pos, mv).map_err(|e| Failure::Internal(format!("program move rejected: {e}")))?;
            continue;
        }
        let mut line = String::new();
        let read = lines
            .read_line(&mut line)
            .map_err(|e| Failure::Input(format!("reading standard input: {e}")))?;
        if read == 0 {
            return Ok(());
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            [] => announce = false,
            ["quit"] => return s.emit(json!({"event": "quit"})),
            ["show"] => {}
            ["moves"] => {
                let moves: Vec<String> = pos.legal_moves().into_iter().map(|m| move_text(&pos, m)).collect();
                s.emit(json!({"event": "moves", "moves": moves}))?;
                announce = false;
            }
            _ => match parse_move(&pos, &words).and_then(|mv| step(&pos, mv).map_err(|e| e.to_string())) {
                Ok(next) => state = next,
                Err(message) => {
                    s.emit(json!({"event": "error", "message": message}))?;
                    announce = false;
                }
            },
        }
    }
}

impl Session<'_> {
    fn emit(&mut self, v: Value) -> Result<(), Failure> {
        self.report.emit(self.out, &v)
    }

    fn program_move(&mut self, pos: &GamePosition) -> Move {
        match pos {
            GamePosition::ClassChoice { c1, c2, bound } => {
                let r = class_game_winner_bounded(c1, c2, *bound);
                let (i, j) = r.opening.unwrap_or((0, 0));
                Move::ChooseModels(i, j)
            }
            GamePosition::ModelGame(g) => {
                if self.strategy.is_none() {
                    let (a, b) = (
                        PointedModel::new(g.left.model().clone(), g.left.point()),
                        PointedModel::new(g.right.model().clone(), g.right.point()),
                    );
                    self.strategy = Some(extract_strategy(&a, &b, self.rounds));
                }
                let strategy = self.strategy.as_ref().unwrap();
                strategy
                    .recommend(g)
                    .filter(|_| strategy.winner != self.user)
                    .unwrap_or_else(|| g.legal_moves()[0])
            }
        }
    }
}

fn to_move(pos: &GamePosition) -> Winner {
    match pos {
        GamePosition::ClassChoice { .. } => Winner::Verifier,
        GamePosition::ModelGame(g) => g.to_move(),
    }
}

fn side_model(g: &ModelGame, side: Side) -> &PointedModel {
    match side {
        Side::Left => &g.left,
        Side::Right => &g.right,
    }
}

fn position_json(pos: &GamePosition) -> Value {
    match pos {
        GamePosition::ClassChoice { c1, c2, bound } => json!({
            "event": "position",
            "phase": "class-choice",
            "c1": c1.len(),
            "c2": c2.len(),
            "rounds": bound.to_string(),
            "to_move": "verifier",
        }),
        GamePosition::ModelGame(g) => {
            let b = g.board;
            json!({
                "event": "position",
                "phase": "model-game",
                "left": g.left.model().state_name(b.left),
                "right": g.right.model().state_name(b.right),
                "pending": b.pending.map(|(side, s)| json!({
                    "side": side.as_str(),
                    "state": side_model(g, side).model().state_name(s),
                })),
                "elapsed": b.elapsed,
                "rounds": g.bound.to_string(),
                "to_move": g.to_move().as_str(),
            })
        }
    }
}

/// A move in protocol syntax.
fn move_text(pos: &GamePosition, mv: Move) -> String {
    match (pos, mv) {
        (_, Move::ChooseModels(i, j)) => format!("choose {i} {j}"),
        (GamePosition::ModelGame(g), Move::SpoilerStep(side, s)) => {
            format!("move {} {}", side.as_str(), side_model(g, side).model().state_name(s))
        }
        (GamePosition::ModelGame(g), Move::VerifierStep(s)) => {
            let side = g.board.pending.map_or(Side::Left, |(side, _)| side.other());
            format!("move {} {}", side.as_str(), side_model(g, side).model().state_name(s))
        }
        (GamePosition::ClassChoice { .. }, other) => other.to_string(),
    }
}

fn parse_side(word: &str) -> Result<Side, String> {
    match word {
        "left" => Ok(Side::Left),
        "right" => Ok(Side::Right),
        other => Err(format!("unknown side `{other}`, expected left or right")),
    }
}

fn parse_move(pos: &GamePosition, words: &[&str]) -> Result<Move, String> {
    match (pos, words) {
        (_, ["choose", i, j]) => {
            let index = |w: &str| w.parse::<usize>().map_err(|_| format!("`{w}` is not a model index"));
            Ok(Move::ChooseModels(index(i)?, index(j)?))
        }
        (GamePosition::ClassChoice { .. }, ["move", ..]) => Err("models must be chosen first".into()),
        (GamePosition::ModelGame(g), ["move", rest @ ..]) => {
            let (side, name) = match (g.board.pending, rest) {
                (Some((moved, _)), [name]) => (moved.other(), *name),
                (_, [side, name]) => (parse_side(side)?, *name),
                (None, [_]) => return Err("Spoiler moves need a side: move <left|right> <state>".into()),
                _ => return Err("usage: move <side> <state>".into()),
            };
            let state = side_model(g, side)
                .model()
                .state_index(name)
                .ok_or_else(|| format!("no state `{name}` on the {} side", side.as_str()))?;
            match g.board.pending {
                None => Ok(Move::SpoilerStep(side, state)),
                Some((moved, _)) if side == moved.other() => Ok(Move::VerifierStep(state)),
                Some((moved, _)) => Err(format!("Verifier must answer on the {} side", moved.other().as_str())),
            }
        }
        _ => Err(format!("unknown command `{}`", words.join(" "))),
    }
}
