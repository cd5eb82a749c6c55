//! Bisimilarity by partition refinement, its finite-depth approximants, and
//! formula synthesis from the refinement levels.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::error::ResourceError;
use crate::kripke::{KripkeModel, PointedModel, UnionModel};
use crate::syntax::Formula;

pub const DEFAULT_CHARACTERISTIC_CAP: usize = 1_000_000;

/// Disjoint blocks covering the states of a model. Blocks are numbered in
/// order of their smallest state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    block_of: Vec<usize>,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Normalizes arbitrary labels into a partition.
    pub fn from_labels<K: std::hash::Hash + Eq>(labels: impl IntoIterator<Item = K>) -> Self {
        let mut ids: HashMap<K, usize> = HashMap::new();
        let mut block_of = Vec::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (s, k) in labels.into_iter().enumerate() {
            let next = ids.len();
            let b = *ids.entry(k).or_insert(next);
            if b == blocks.len() {
                blocks.push(Vec::new());
            }
            blocks[b].push(s);
            block_of.push(b);
        }
        Self { block_of, blocks }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_of(&self, s: usize) -> usize {
        self.block_of[s]
    }

    pub fn same_block(&self, a: usize, b: usize) -> bool {
        self.block_of[a] == self.block_of[b]
    }

    /// Every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        self.blocks
            .iter()
            .all(|b| b.iter().all(|&s| other.block_of[s] == other.block_of[b[0]]))
    }

    /// The induced equivalence relation as a list of ordered pairs.
    pub fn relation(&self) -> Vec<(usize, usize)> {
        self.blocks
            .iter()
            .flat_map(|b| b.iter().flat_map(move |&s| b.iter().map(move |&t| (s, t))))
            .collect()
    }
}

/// One refinement round: split blocks by the set of blocks their successors
/// reach.
fn refine_once(m: &KripkeModel, current: &Partition) -> Partition {
    Partition::from_labels((0..m.len()).map(|s| {
        let mut succ_blocks: Vec<usize> = m.successors(s).iter().map(|&t| current.block_of(t)).collect();
        succ_blocks.sort_unstable();
        succ_blocks.dedup();
        (current.block_of(s), succ_blocks)
    }))
}

/// The approximant partitions `~0, ~1, ...` of a model up to the level where
/// refinement stabilizes; the last level is the coarsest bisimulation.
#[derive(Debug, Clone)]
pub struct Approximants {
    levels: Vec<Partition>,
}

impl Approximants {
    pub fn new(m: &KripkeModel) -> Self {
        let mut levels = vec![Partition::from_labels((0..m.len()).map(|s| m.valuation(s).to_vec()))];
        loop {
            let next = refine_once(m, levels.last().unwrap());
            // Refinement only splits, so an unchanged count means a fixpoint.
            if next.block_count() == levels.last().unwrap().block_count() {
                break;
            }
            levels.push(next);
        }
        Self { levels }
    }

    /// Partition for `~k`; levels beyond stabilization equal the last one.
    pub fn level(&self, k: usize) -> &Partition {
        &self.levels[k.min(self.levels.len() - 1)]
    }

    pub fn stable(&self) -> &Partition {
        self.levels.last().unwrap()
    }

    /// First level equal to the coarsest bisimulation.
    pub fn stabilization_level(&self) -> usize {
        self.levels.len() - 1
    }

    /// Least `k` with `s` and `t` in different `~k` blocks, or `None` if they
    /// are bisimilar.
    pub fn separation_level(&self, s: usize, t: usize) -> Option<usize> {
        self.levels.iter().position(|p| !p.same_block(s, t))
    }
}

/// The coarsest partition whose induced relation is a bisimulation.
pub fn coarsest_bisim(m: &KripkeModel) -> Partition {
    Approximants::new(m).stable().clone()
}

pub fn bisimilar(p1: &PointedModel, p2: &PointedModel) -> bool {
    let u = UnionModel::of([p1, p2]);
    coarsest_bisim(&u.model).same_block(u.points[0], u.points[1])
}

pub fn k_bisimilar(p1: &PointedModel, p2: &PointedModel, k: usize) -> bool {
    let u = UnionModel::of([p1, p2]);
    Approximants::new(&u.model).level(k).same_block(u.points[0], u.points[1])
}

/// Builds formulas that tell apart non-bisimilar states of one model.
///
/// For states separated first at level `k` the formula has modal depth
/// exactly `k`: a literal at level 0, otherwise `<> /\ psi` for a successor
/// of the first state that no successor of the second matches at level
/// `k - 1`, or `[] \/ psi` for the symmetric case. Among the candidates the
/// least by (size, printed form) is kept.
pub struct Distinguisher<'a> {
    model: &'a KripkeModel,
    approx: Approximants,
    memo: HashMap<(usize, usize), Formula>,
}

impl<'a> Distinguisher<'a> {
    pub fn new(model: &'a KripkeModel) -> Self {
        Self {
            model,
            approx: Approximants::new(model),
            memo: HashMap::new(),
        }
    }

    pub fn approximants(&self) -> &Approximants {
        &self.approx
    }

    /// A formula true at `s` and false at `t`, or `None` if they are
    /// bisimilar.
    pub fn separate(&mut self, s: usize, t: usize) -> Option<Formula> {
        let level = self.approx.separation_level(s, t)?;
        Some(self.separate_at(s, t, level))
    }

    fn separate_at(&mut self, s: usize, t: usize, level: usize) -> Formula {
        if let Some(f) = self.memo.get(&(s, t)) {
            return f.clone();
        }
        let m = self.model;
        let mut candidates: Vec<Formula> = Vec::new();
        if level == 0 {
            let (vs, vt) = (m.valuation(s), m.valuation(t));
            let props = m.alphabet().props();
            for p in vs.iter().filter(|p| !vt.contains(p)) {
                candidates.push(Formula::atom(props[*p].clone()));
            }
            for p in vt.iter().filter(|p| !vs.contains(p)) {
                candidates.push(Formula::not(Formula::atom(props[*p].clone())));
            }
        } else {
            let below = level - 1;
            let unmatched = |this: &Self, x: usize, others: &[usize]| {
                others.iter().all(|&y| !this.approx.level(below).same_block(x, y))
            };
            for &s2 in m.successors(s) {
                if unmatched(self, s2, m.successors(t)) {
                    let conj: Vec<Formula> = m
                        .successors(t)
                        .iter()
                        .map(|&t2| self.separate_below(s2, t2))
                        .collect();
                    candidates.push(Formula::dia(Formula::and_dedup(conj)));
                }
            }
            for &t2 in m.successors(t) {
                if unmatched(self, t2, m.successors(s)) {
                    let disj: Vec<Formula> = m
                        .successors(s)
                        .iter()
                        .map(|&s2| self.separate_below(s2, t2))
                        .collect();
                    candidates.push(Formula::boxed(Formula::or_dedup(disj)));
                }
            }
        }
        let best = candidates
            .into_iter()
            .min_by(least_by_size_then_text)
            .expect("states in different blocks always have a distinguishing move");
        self.memo.insert((s, t), best.clone());
        best
    }

    fn separate_below(&mut self, s: usize, t: usize) -> Formula {
        let level = self
            .approx
            .separation_level(s, t)
            .expect("caller only asks for pairs separated below the current level");
        self.separate_at(s, t, level)
    }

    /// Pairs of states in the same stable block, restricted to `left` x `right`.
    pub fn bisimilar_pairs(&self, left: &[usize], right: &[usize]) -> Vec<(usize, usize)> {
        let stable = self.approx.stable();
        left.iter()
            .flat_map(|&s| right.iter().map(move |&t| (s, t)))
            .filter(|&(s, t)| stable.same_block(s, t))
            .collect()
    }
}

fn least_by_size_then_text(a: &Formula, b: &Formula) -> Ordering {
    a.cmp_size_then_text(b)
}

/// Outcome of comparing two pointed models.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DistinguishResult {
    /// `formula` is true at the first model and false at the second;
    /// `depth` is the least `k` at which they are not `k`-bisimilar.
    Distinguished { formula: Formula, depth: usize },
    /// The models are bisimilar; `witness` lists the related pairs of
    /// reachable states by name.
    Bisimilar { witness: Vec<(String, String)> },
}

pub fn distinguishing_formula(p1: &PointedModel, p2: &PointedModel) -> DistinguishResult {
    let u = UnionModel::of([p1, p2]);
    let mut d = Distinguisher::new(&u.model);
    let (s, t) = (u.points[0], u.points[1]);
    match d.separate(s, t) {
        Some(formula) => {
            let depth = formula.modal_depth();
            debug_assert_eq!(Some(depth), d.approximants().separation_level(s, t));
            DistinguishResult::Distinguished { formula, depth }
        }
        None => {
            let left: Vec<usize> = p1.model().reachable_from(p1.point()).iter().map(|&x| x + u.offsets[0]).collect();
            let right: Vec<usize> = p2.model().reachable_from(p2.point()).iter().map(|&x| x + u.offsets[1]).collect();
            let witness = d
                .bisimilar_pairs(&left, &right)
                .into_iter()
                .map(|(a, b)| {
                    (
                        p1.model().state_name(a - u.offsets[0]).to_string(),
                        p2.model().state_name(b - u.offsets[1]).to_string(),
                    )
                })
                .collect();
            DistinguishResult::Bisimilar { witness }
        }
    }
}

/// Characteristic formula of depth `d` with the default size cap.
pub fn characteristic_formula(p: &PointedModel, d: usize) -> Result<Formula, ResourceError> {
    characteristic_formula_capped(p, d, DEFAULT_CHARACTERISTIC_CAP)
}

/// A formula of modal depth at most `d` that holds exactly at the pointed
/// models (over the same alphabet) that are `d`-bisimilar to `p`.
///
/// `chi_0(s)` is the conjunction of the literals of `s`; `chi_{j+1}(s)` adds
/// `<> chi_j(s')` for every successor and `[] \/ chi_j(s')` over all of them.
pub fn characteristic_formula_capped(p: &PointedModel, d: usize, cap: usize) -> Result<Formula, ResourceError> {
    let m = p.model();
    let props = m.alphabet().props();
    let literal_count = props.len();
    // Positive literals cost one node, negated ones two.
    let literals_size = |s: usize| 2 * literal_count - m.valuation(s).len();
    let conj_size = |parts: &[usize], count: usize| match count {
        0 => 1,
        1 => parts.iter().sum(),
        _ => 1 + parts.iter().sum::<usize>(),
    };

    let mut table = Interner::default();
    let mut current: Vec<usize> = (0..m.len())
        .map(|s| {
            let size = conj_size(&[literals_size(s)], literal_count);
            table.intern(
                CharNode {
                    literals: m.valuation(s).to_vec(),
                    successors: None,
                },
                size,
            )
        })
        .collect();

    for _ in 0..d {
        let mut next = Vec::with_capacity(m.len());
        for s in 0..m.len() {
            let mut children: Vec<usize> = Vec::new();
            for &t in m.successors(s) {
                if !children.contains(&current[t]) {
                    children.push(current[t]);
                }
            }
            let disj_size = match children.len() {
                0 => 1,
                1 => table.sizes[children[0]],
                _ => 1 + children.iter().map(|&c| table.sizes[c]).sum::<usize>(),
            };
            let mut parts = vec![literals_size(s)];
            parts.extend(children.iter().map(|&c| 1 + table.sizes[c]));
            parts.push(1 + disj_size);
            let size = conj_size(&parts, literal_count + children.len() + 1);
            if size > cap {
                return Err(ResourceError::new("characteristic formula", cap));
            }
            let node = CharNode {
                literals: m.valuation(s).to_vec(),
                successors: Some(children),
            };
            next.push(table.intern(node, size));
        }
        current = next;
    }

    let root = current[p.point()];
    let f = table.build(root, props, &mut HashMap::new());
    debug_assert_eq!(f.size(), table.sizes[root]);
    Ok(f)
}

/// Hash-consed characteristic-formula node: equal nodes denote identical
/// formulas, so exact sizes are known before anything is built.
#[derive(Clone, PartialEq, Eq, Hash)]
struct CharNode {
    literals: Vec<usize>,
    successors: Option<Vec<usize>>,
}

#[derive(Default)]
struct Interner {
    nodes: Vec<CharNode>,
    sizes: Vec<usize>,
    ids: HashMap<CharNode, usize>,
}

impl Interner {
    fn intern(&mut self, node: CharNode, size: usize) -> usize {
        if let Some(&id) = self.ids.get(&node) {
            return id;
        }
        self.nodes.push(node.clone());
        self.sizes.push(size);
        self.ids.insert(node, self.nodes.len() - 1);
        self.nodes.len() - 1
    }

    fn build(&self, id: usize, props: &[String], built: &mut HashMap<usize, Formula>) -> Formula {
        if let Some(f) = built.get(&id) {
            return f.clone();
        }
        let node = &self.nodes[id];
        let mut conj: Vec<Formula> = props
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let a = Formula::atom(p.clone());
                if node.literals.contains(&i) {
                    a
                } else {
                    Formula::not(a)
                }
            })
            .collect();
        if let Some(children) = &node.successors {
            for &c in children {
                conj.push(Formula::dia(self.build(c, props, built)));
            }
            let disj = children.iter().map(|&c| self.build(c, props, built)).collect();
            conj.push(Formula::boxed(Formula::or(disj)));
        }
        let f = Formula::and(conj);
        built.insert(id, f.clone());
        f
    }
}
