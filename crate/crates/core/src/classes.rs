//! Class-level comparisons: lifting bisimilarity to classes, separating
//! classes with a constructed formula, class equivalence, definability inside
//! a finite universe, and depth-fragment comparison.
//!
//! Every operation works on one disjoint union of all the members involved,
//! so a single refinement run answers all the pairwise questions.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::bisim::{characteristic_formula_capped, Approximants, Distinguisher, Partition, DEFAULT_CHARACTERISTIC_CAP};
use crate::error::ResourceError;
use crate::kripke::{ModelClass, UnionModel};
use crate::semantics::{truth_set, Polarity};
use crate::syntax::Formula;

/// The model relation that class lifts are built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BaseRelation {
    #[default]
    Bisimilar,
    /// Indistinguishability up to modal depth `k`.
    KBisimilar(usize),
}

/// Both classes embedded in one union model.
struct Joint {
    union: UnionModel,
    approx: Approximants,
    split: usize,
}

impl Joint {
    fn new(c1: &ModelClass, c2: &ModelClass) -> Self {
        let union = UnionModel::of(c1.iter().chain(c2.iter()));
        let approx = Approximants::new(&union.model);
        Self {
            union,
            approx,
            split: c1.len(),
        }
    }

    fn left(&self) -> std::ops::Range<usize> {
        0..self.split
    }

    fn right(&self) -> std::ops::Range<usize> {
        self.split..self.union.points.len()
    }

    fn partition(&self, rel: BaseRelation) -> &Partition {
        match rel {
            BaseRelation::Bisimilar => self.approx.stable(),
            BaseRelation::KBisimilar(k) => self.approx.level(k),
        }
    }

    fn related(&self, rel: BaseRelation, i: usize, j: usize) -> bool {
        self.partition(rel).same_block(self.union.points[i], self.union.points[j])
    }

    /// First cross pair `(i, j)` (indices into c1, c2) related by `rel`.
    fn first_cross_pair(&self, rel: BaseRelation) -> Option<(usize, usize)> {
        self.left()
            .flat_map(|i| self.right().map(move |j| (i, j)))
            .find(|&(i, j)| self.related(rel, i, j))
            .map(|(i, j)| (i, j - self.split))
    }
}

/// Some member of `c1` is bisimilar to some member of `c2`.
pub fn lift_exists(c1: &ModelClass, c2: &ModelClass) -> bool {
    lift_exists_with(c1, c2, BaseRelation::Bisimilar)
}

pub fn lift_exists_with(c1: &ModelClass, c2: &ModelClass, rel: BaseRelation) -> bool {
    Joint::new(c1, c2).first_cross_pair(rel).is_some()
}

/// Every member of each class has a bisimilar partner in the other.
pub fn lift_forall(c1: &ModelClass, c2: &ModelClass) -> bool {
    lift_forall_with(c1, c2, BaseRelation::Bisimilar)
}

pub fn lift_forall_with(c1: &ModelClass, c2: &ModelClass, rel: BaseRelation) -> bool {
    let joint = Joint::new(c1, c2);
    unmatched_member(&joint, rel).is_none()
}

/// A member without a partner on the other side: `(side, index)` where side
/// 0 means c1.
fn unmatched_member(joint: &Joint, rel: BaseRelation) -> Option<(usize, usize)> {
    for i in joint.left() {
        if !joint.right().any(|j| joint.related(rel, i, j)) {
            return Some((0, i));
        }
    }
    for j in joint.right() {
        if !joint.left().any(|i| joint.related(rel, i, j)) {
            return Some((1, j - joint.split));
        }
    }
    None
}

/// Outcome of trying to separate two classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeparationResult {
    /// `formula` is true on every member of c1 and false on every member of
    /// c2 (`polarity` is always forward).
    Separator {
        formula: Formula,
        polarity: Polarity,
        depth: usize,
    },
    /// Member `left` of c1 is bisimilar to member `right` of c2, so no modal
    /// formula separates the classes.
    Witness { left: usize, right: usize },
}

impl SeparationResult {
    pub fn formula(&self) -> Option<&Formula> {
        match self {
            SeparationResult::Separator { formula, .. } => Some(formula),
            SeparationResult::Witness { .. } => None,
        }
    }

    pub fn is_separator(&self) -> bool {
        matches!(self, SeparationResult::Separator { .. })
    }
}

/// Builds `\/_{M1 in c1} /\_{M2 in c2} psi(M1, M2)` where each `psi` is true
/// on its first model and false on its second. `psi` is computed once per
/// pair of bisimulation blocks. Callers guarantee no cross pair is bisimilar.
fn assemble_separator(joint: &Joint, left: &[usize], right: &[usize]) -> Formula {
    let mut distinguisher = Distinguisher::new(&joint.union.model);
    let stable = joint.approx.stable().clone();
    let mut per_block: HashMap<(usize, usize), Formula> = HashMap::new();
    let mut disjuncts = Vec::with_capacity(left.len());
    for &i in left {
        let s = joint.union.points[i];
        let mut conjuncts = Vec::with_capacity(right.len());
        for &j in right {
            let t = joint.union.points[j];
            let key = (stable.block_of(s), stable.block_of(t));
            let psi = per_block
                .entry(key)
                .or_insert_with(|| distinguisher.separate(s, t).expect("cross pairs are not bisimilar"))
                .clone();
            conjuncts.push(psi);
        }
        disjuncts.push(Formula::and_dedup(conjuncts));
    }
    Formula::or_dedup(disjuncts)
}

/// Decides whether some modal formula separates `c1` from `c2`, returning
/// either a forward separator or a bisimilar cross pair.
pub fn class_separation(c1: &ModelClass, c2: &ModelClass) -> SeparationResult {
    let joint = Joint::new(c1, c2);
    separation_in(&joint)
}

fn separation_in(joint: &Joint) -> SeparationResult {
    if let Some((left, right)) = joint.first_cross_pair(BaseRelation::Bisimilar) {
        return SeparationResult::Witness { left, right };
    }
    let left: Vec<usize> = joint.left().collect();
    let right: Vec<usize> = joint.right().collect();
    // Empty c1 gives the empty disjunction (false); empty c2 gives true.
    let formula = assemble_separator(joint, &left, &right);
    let depth = formula.modal_depth();
    SeparationResult::Separator {
        formula,
        polarity: Polarity::Forward,
        depth,
    }
}

/// No formula separates the classes.
pub fn asymp(c1: &ModelClass, c2: &ModelClass) -> bool {
    !class_separation(c1, c2).is_separator()
}

/// Which class a witness formula is valid on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassSide {
    First,
    Second,
}

/// A formula valid on one class that fails on member `fails_on` of the other.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceWitness {
    pub formula: Formula,
    pub valid_on: ClassSide,
    pub fails_on: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassEquivalence {
    pub equivalent: bool,
    pub witness: Option<EquivalenceWitness>,
}

/// Class equivalence: both classes validate the same formulas. On finite
/// classes this coincides with the forall-lift of bisimilarity.
pub fn class_equiv(c1: &ModelClass, c2: &ModelClass) -> ClassEquivalence {
    let joint = Joint::new(c1, c2);
    match unmatched_member(&joint, BaseRelation::Bisimilar) {
        None => ClassEquivalence {
            equivalent: true,
            witness: None,
        },
        Some((side, idx)) => {
            // \/ over the other class of psi(member, unmatched) is valid there
            // and false at the unmatched member.
            let (others, lonely, valid_on): (Vec<usize>, usize, ClassSide) = if side == 0 {
                (joint.right().collect(), idx, ClassSide::Second)
            } else {
                (joint.left().collect(), idx + joint.split, ClassSide::First)
            };
            let formula = assemble_separator(&joint, &others, &[lonely]);
            ClassEquivalence {
                equivalent: false,
                witness: Some(EquivalenceWitness {
                    formula,
                    valid_on,
                    fails_on: idx,
                }),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("subset index {index} is out of range for a universe of {len} models")]
pub struct InvalidSubset {
    pub index: usize,
    pub len: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Definability {
    /// `formula` holds exactly at the members in the subset.
    Definable { formula: Formula, depth: usize },
    /// Member `inside` (in the subset) is bisimilar to member `outside`
    /// (not in it); both are indices into the universe.
    Undefinable { inside: usize, outside: usize },
}

/// Whether the members of `universe` at `subset` form a modally definable
/// subclass.
pub fn definable(universe: &ModelClass, subset: &[usize]) -> Result<Definability, InvalidSubset> {
    let chosen: BTreeSet<usize> = subset.iter().copied().collect();
    if let Some(&index) = chosen.iter().find(|&&i| i >= universe.len()) {
        return Err(InvalidSubset {
            index,
            len: universe.len(),
        });
    }
    let inside: Vec<usize> = chosen.iter().copied().collect();
    let outside: Vec<usize> = (0..universe.len()).filter(|i| !chosen.contains(i)).collect();
    Ok(
        match class_separation(&universe.select(&inside), &universe.select(&outside)) {
            SeparationResult::Separator { formula, depth, .. } => Definability::Definable { formula, depth },
            SeparationResult::Witness { left, right } => Definability::Undefinable {
                inside: inside[left],
                outside: outside[right],
            },
        },
    )
}

/// Relative strength of two fragments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Equal,
    FirstStrictlyLess,
    SecondStrictlyLess,
    Incomparable,
}

impl Order {
    fn from_inclusions(first_le_second: bool, second_le_first: bool) -> Order {
        match (first_le_second, second_le_first) {
            (true, true) => Order::Equal,
            (true, false) => Order::FirstStrictlyLess,
            (false, true) => Order::SecondStrictlyLess,
            (false, false) => Order::Incomparable,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Order::Equal => "equal",
            Order::FirstStrictlyLess => "first-strictly-less",
            Order::SecondStrictlyLess => "second-strictly-less",
            Order::Incomparable => "incomparable",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FragmentComparison {
    pub distinguishing: Order,
    pub expressive: Order,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FragmentError {
    #[error(transparent)]
    Resource(#[from] ResourceError),
    #[error("distinguishing order {distinguishing:?} differs from expressive order {expressive:?}")]
    Mismatch { distinguishing: Order, expressive: Order },
}

/// Compares the depth-`d1` and depth-`d2` fragments over `universe`.
///
/// The distinguishing verdict compares the `~d1` and `~d2` partitions of the
/// members. The expressive verdict is computed separately, from the truth
/// sets of depth-bounded characteristic formulas: the subsets a fragment
/// defines are the unions of those sets. The two verdicts must agree.
pub fn compare_fragments(universe: &ModelClass, d1: usize, d2: usize) -> Result<FragmentComparison, FragmentError> {
    compare_fragments_capped(universe, d1, d2, DEFAULT_CHARACTERISTIC_CAP)
}

/// As [`compare_fragments`], with `cap` bounding each characteristic formula.
pub fn compare_fragments_capped(
    universe: &ModelClass,
    d1: usize,
    d2: usize,
    cap: usize,
) -> Result<FragmentComparison, FragmentError> {
    let u = UnionModel::of(universe.iter());
    let approx = Approximants::new(&u.model);
    let member_partition = |d: usize| Partition::from_labels(u.points.iter().map(|&p| approx.level(d).block_of(p)));
    let (p1, p2) = (member_partition(d1), member_partition(d2));
    let distinguishing = Order::from_inclusions(p2.refines(&p1), p1.refines(&p2));

    let g1 = definable_generators(&u, d1, cap)?;
    let g2 = definable_generators(&u, d2, cap)?;
    let expressive = Order::from_inclusions(
        g1.iter().all(|g| is_union_of(g, &g2)),
        g2.iter().all(|g| is_union_of(g, &g1)),
    );
    if distinguishing != expressive {
        return Err(FragmentError::Mismatch {
            distinguishing,
            expressive,
        });
    }
    Ok(FragmentComparison {
        distinguishing,
        expressive,
    })
}

/// Truth sets (over members) of each member's depth-`d` characteristic
/// formula. Every depth-`d` definable subset is a union of these.
fn definable_generators(u: &UnionModel, d: usize, cap: usize) -> Result<Vec<Vec<bool>>, ResourceError> {
    let mut out: Vec<Vec<bool>> = Vec::new();
    for i in 0..u.points.len() {
        let chi = characteristic_formula_capped(&u.pointed(i), d, cap)?;
        let truth = truth_set(&u.model, &chi).expect("characteristic formulas use the model's alphabet");
        let on_members: Vec<bool> = u.points.iter().map(|&p| truth[p]).collect();
        if !out.contains(&on_members) {
            out.push(on_members);
        }
    }
    Ok(out)
}

fn is_union_of(target: &[bool], generators: &[Vec<bool>]) -> bool {
    let mut covered = vec![false; target.len()];
    for g in generators {
        if g.iter().zip(target).all(|(&x, &t)| !x || t) {
            for (c, &x) in covered.iter_mut().zip(g) {
                *c |= x;
            }
        }
    }
    covered == target
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{chain, dead_end, loop_model, singleton, two_cycle, walks};
    use crate::semantics::{class_models, eval, sep_check};
    use crate::syntax::parse_formula;

    fn class(ms: Vec<crate::kripke::PointedModel>) -> ModelClass {
        ModelClass::new(ms)
    }

    #[test]
    fn lift_examples() {
        let l = singleton(loop_model());
        let lc = class(vec![loop_model(), chain(1)]);
        assert!(lift_exists(&l, &lc));
        assert!(!lift_exists(&walks(3), &l));
        assert_eq!(lift_exists(&singleton(chain(2)), &l), false);
        assert!(lift_exists(&singleton(two_cycle()), &l));

        assert!(lift_forall(&l, &class(vec![loop_model(), two_cycle()])));
        assert!(!lift_forall(&l, &lc));
        assert!(lift_forall(&lc, &lc));
    }

    #[test]
    fn k_bisimilarity_hook() {
        let l = singleton(loop_model());
        assert!(lift_exists_with(&walks(3), &l, BaseRelation::KBisimilar(3)));
        assert!(!lift_exists_with(&walks(3), &l, BaseRelation::KBisimilar(4)));
        assert!(lift_forall_with(&singleton(chain(2)), &l, BaseRelation::KBisimilar(2)));
    }

    #[test]
    fn walks_against_loop() {
        let l = singleton(loop_model());
        match class_separation(&walks(3), &l) {
            SeparationResult::Separator { formula, polarity, depth } => {
                assert_eq!(depth, 4);
                assert_eq!(polarity, Polarity::Forward);
                assert_eq!(sep_check(&walks(3), &l, &formula).unwrap(), Some(Polarity::Forward));
            }
            other => panic!("{other:?}"),
        }
        match class_separation(&singleton(chain(1)), &l) {
            SeparationResult::Separator { formula, depth, .. } => {
                assert_eq!(depth, 2);
                assert_eq!(formula, parse_formula("<> [] false").unwrap());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn overlap_is_inseparable() {
        let r = class_separation(&singleton(loop_model()), &class(vec![loop_model(), chain(1)]));
        assert_eq!(r, SeparationResult::Witness { left: 0, right: 0 });
        assert!(asymp(&singleton(loop_model()), &class(vec![loop_model(), chain(1)])));
        assert!(!asymp(&singleton(chain(1)), &singleton(loop_model())));
    }

    #[test]
    fn empty_class_conventions() {
        let l = singleton(loop_model());
        assert_eq!(
            class_separation(&ModelClass::empty(), &l).formula(),
            Some(&Formula::Bot)
        );
        assert_eq!(
            class_separation(&l, &ModelClass::empty()).formula(),
            Some(&Formula::Top)
        );
        assert!(!asymp(&ModelClass::empty(), &l));
        assert!(class_equiv(&ModelClass::empty(), &ModelClass::empty()).equivalent);
    }

    #[test]
    fn equivalence_examples() {
        let l = singleton(loop_model());
        assert!(class_equiv(&l, &class(vec![loop_model(), two_cycle()])).equivalent);

        let lc = class(vec![loop_model(), chain(1)]);
        let r = class_equiv(&l, &lc);
        assert!(!r.equivalent);
        let w = r.witness.unwrap();
        assert_eq!(w.formula, parse_formula("<><> true").unwrap());
        assert_eq!(w.valid_on, ClassSide::First);
        assert_eq!(w.fails_on, 1);
        assert!(class_models(&l, &w.formula).unwrap());
        assert!(!class_models(&lc, &w.formula).unwrap());

        // The unmatched member may sit in the first class as well.
        let r = class_equiv(&lc, &l);
        let w = r.witness.unwrap();
        assert_eq!(w.valid_on, ClassSide::Second);
        assert_eq!(w.fails_on, 1);
    }

    #[test]
    fn definability_examples() {
        let u = class(vec![loop_model(), chain(1), chain(2)]);
        match definable(&u, &[1]).unwrap() {
            Definability::Definable { formula, .. } => {
                let truth: Vec<bool> = u.iter().map(|m| eval(m, &formula).unwrap()).collect();
                assert_eq!(truth, [false, true, false]);
                // agrees with !<><> true on this universe
                let reference = parse_formula("!<><> true").unwrap();
                for m in &u {
                    assert_eq!(eval(m, &formula).unwrap(), eval(m, &reference).unwrap());
                }
            }
            other => panic!("{other:?}"),
        }
        let u2 = class(vec![loop_model(), two_cycle()]);
        assert_eq!(
            definable(&u2, &[0]).unwrap(),
            Definability::Undefinable { inside: 0, outside: 1 }
        );
        assert_eq!(
            definable(&u, &[0, 1, 2]).unwrap(),
            Definability::Definable { formula: Formula::Top, depth: 0 }
        );
        assert_eq!(definable(&u, &[7]).unwrap_err(), InvalidSubset { index: 7, len: 3 });
    }

    #[test]
    fn fragment_examples() {
        let u = class(vec![loop_model(), chain(1), chain(2)]);
        let c = compare_fragments(&u, 1, 2).unwrap();
        assert_eq!(c.distinguishing, Order::FirstStrictlyLess);
        assert_eq!(c.expressive, Order::FirstStrictlyLess);
        assert_eq!(compare_fragments(&u, 2, 2).unwrap().distinguishing, Order::Equal);
        assert_eq!(compare_fragments(&u, 3, 1).unwrap().expressive, Order::SecondStrictlyLess);

        let distinct = class(vec![dead_end(&["p"]), dead_end(&[]), dead_end(&["q"])]);
        let c = compare_fragments(&distinct, 0, 5).unwrap();
        assert_eq!(c.distinguishing, Order::Equal);
        assert_eq!(c.expressive, Order::Equal);
    }
}
