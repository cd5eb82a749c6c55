//! Deterministic workloads shared by the benchmarks.

use classbisim_core::kripke::{KripkeModel, ModelClass, PointedModel};
use classbisim_core::syntax::Alphabet;

/// A cycle of `n` states where `p` holds on every `period`-th one, plus a
/// chord from each state to the one `skip` steps ahead.
pub fn ring(n: usize, period: usize, skip: usize) -> PointedModel {
    let names = (0..n).map(|i| format!("r{i}")).collect();
    let succ = (0..n)
        .map(|i| {
            let mut out = vec![(i + 1) % n, (i + skip) % n];
            out.sort_unstable();
            out.dedup();
            out
        })
        .collect();
    let val = (0..n).map(|i| if i % period == 0 { vec![0] } else { vec![] }).collect();
    PointedModel::new(KripkeModel::from_indexed(Alphabet::new(["p"]).unwrap(), names, succ, val), 0)
}

/// Rings of every length in `lengths`, all with the same period and chord.
pub fn rings(lengths: impl IntoIterator<Item = usize>, period: usize, skip: usize) -> ModelClass {
    ModelClass::new(lengths.into_iter().map(|n| ring(n, period, skip)).collect())
}
