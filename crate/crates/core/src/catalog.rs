//! Small named models used throughout the tests, benchmarks and docs.

use crate::kripke::{KripkeModel, ModelClass, PointedModel};
use crate::syntax::Alphabet;

/// A single state `a` with a self-loop and empty valuation.
pub fn loop_model() -> PointedModel {
    let m = KripkeModel::from_indexed(Alphabet::empty(), vec!["a".into()], vec![vec![0]], vec![vec![]]);
    PointedModel::new(m, 0).named("loop")
}

/// Two states `a <-> b`, empty valuation; bisimilar to [`loop_model`].
pub fn two_cycle() -> PointedModel {
    let m = KripkeModel::from_indexed(
        Alphabet::empty(),
        vec!["a".into(), "b".into()],
        vec![vec![1], vec![0]],
        vec![vec![], vec![]],
    );
    PointedModel::new(m, 0).named("loop2")
}

/// The walk `s0 -> s1 -> ... -> sn` pointed at `s0` (so `n + 1` states).
pub fn chain(n: usize) -> PointedModel {
    let names = (0..=n).map(|i| format!("s{i}")).collect();
    let succ = (0..=n).map(|i| if i < n { vec![i + 1] } else { vec![] }).collect();
    let val = vec![vec![]; n + 1];
    let m = KripkeModel::from_indexed(Alphabet::empty(), names, succ, val);
    PointedModel::new(m, 0).named(format!("chain_{n}"))
}

/// `{chain_1, ..., chain_n}`.
pub fn walks(n: usize) -> ModelClass {
    ModelClass::labelled("walks", (1..=n).map(chain).collect())
}

/// A single state with the given propositions true and no successors.
pub fn dead_end(props: &[&str]) -> PointedModel {
    let alphabet = Alphabet::new(props.iter().copied()).expect("valid propositions");
    let val = (0..alphabet.len()).collect();
    let m = KripkeModel::from_indexed(alphabet, vec!["x".into()], vec![vec![]], vec![val]);
    PointedModel::new(m, 0)
}

/// The singleton class `{m}`.
pub fn singleton(m: PointedModel) -> ModelClass {
    ModelClass::new(vec![m])
}
