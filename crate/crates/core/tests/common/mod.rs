#![allow(dead_code)]

use classbisim_core::kripke::{generated_submodel, KripkeModel, ModelClass, PointedModel};
use classbisim_core::syntax::Alphabet;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A pointed model over `{p}` with at most `MAX_STATES` states, as bit masks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Code {
    pub n: usize,
    pub point: usize,
    pub edges: u32,
    pub val: u32,
}

impl Code {
    fn edge(&self, s: usize, t: usize) -> bool {
        self.edges & (1 << (s * self.n + t)) != 0
    }

    fn permuted(&self, perm: &[usize]) -> Code {
        let n = self.n;
        let mut edges = 0;
        let mut val = 0;
        for s in 0..n {
            if self.val & (1 << s) != 0 {
                val |= 1 << perm[s];
            }
            for t in 0..n {
                if self.edge(s, t) {
                    edges |= 1 << (perm[s] * n + perm[t]);
                }
            }
        }
        Code {
            n,
            point: perm[self.point],
            edges,
            val,
        }
    }

    pub fn canonical(&self) -> Code {
        permutations(self.n).iter().map(|p| self.permuted(p)).min().unwrap()
    }

    pub fn model(&self) -> PointedModel {
        let n = self.n;
        let names = (0..n).map(|i| format!("s{i}")).collect();
        let succ = (0..n).map(|s| (0..n).filter(|&t| self.edge(s, t)).collect()).collect();
        let val = (0..n)
            .map(|s| if self.val & (1 << s) != 0 { vec![0] } else { vec![] })
            .collect();
        PointedModel::new(KripkeModel::from_indexed(p_alphabet(), names, succ, val), self.point)
    }

    pub fn of(p: &PointedModel) -> Code {
        let m = p.model();
        let n = m.len();
        let mut edges = 0;
        let mut val = 0;
        for (s, t) in m.edges() {
            edges |= 1 << (s * n + t);
        }
        for s in 0..n {
            if !m.valuation(s).is_empty() {
                val |= 1 << s;
            }
        }
        Code {
            n,
            point: p.point(),
            edges,
            val,
        }
    }
}

pub fn p_alphabet() -> Alphabet {
    Alphabet::new(["p"]).unwrap()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Every pointed model over `{p}` with at most `max_states` states, one per
/// isomorphism class, in a fixed order.
pub fn all_models(max_states: usize) -> Vec<Code> {
    let mut seen = std::collections::BTreeSet::new();
    for n in 1..=max_states {
        for edges in 0..(1u32 << (n * n)) {
            for val in 0..(1u32 << n) {
                for point in 0..n {
                    seen.insert(Code { n, point, edges, val }.canonical());
                }
            }
        }
    }
    seen.into_iter().collect()
}

/// Canonical code of the part of the model reachable from its point.
pub fn generated_code(c: &Code) -> Code {
    Code::of(&generated_submodel(&c.model())).canonical()
}

pub fn random_model(rng: &mut ChaCha8Rng, max_states: usize, props: usize) -> PointedModel {
    let n = rng.gen_range(1..=max_states);
    let density = rng.gen_range(0.1..0.6);
    let names = (0..n).map(|i| format!("s{i}")).collect();
    let succ = (0..n)
        .map(|_| (0..n).filter(|_| rng.gen_bool(density)).collect())
        .collect();
    let val = (0..n)
        .map(|_| (0..props).filter(|_| rng.gen_bool(0.5)).collect())
        .collect();
    let alphabet = Alphabet::new((0..props).map(|i| ["p", "q", "r"][i])).unwrap();
    let point = rng.gen_range(0..n);
    PointedModel::new(KripkeModel::from_indexed(alphabet, names, succ, val), point)
}

/// A class of up to `max_members` random models. Members are sometimes
/// copied from `pool` so that bisimilar cross pairs occur regularly.
pub fn random_class(
    rng: &mut ChaCha8Rng,
    min_members: usize,
    max_members: usize,
    max_states: usize,
    pool: &[PointedModel],
) -> ModelClass {
    let k = rng.gen_range(min_members..=max_members);
    let members = (0..k)
        .map(|_| {
            if !pool.is_empty() && rng.gen_bool(0.3) {
                pool[rng.gen_range(0..pool.len())].clone()
            } else {
                random_model(rng, max_states, 1)
            }
        })
        .collect();
    ModelClass::new(members)
}
