//! Brute-force reference procedures.
//!
//! `oracle_separable` searches formulas directly and uses nothing from the
//! bisimulation or class modules. It enumerates a bank of formulas level by
//! level (modal depth `0, 1, ..`), and within a level by increasing size.
//! Two formulas with the same truth vector over the relevant states are
//! interchangeable as subformulas, so the bank keeps one smallest
//! representative per vector and top connective. A level is complete once no
//! combination of stored entries can reach the current size.
//!
//! `oracle_bisim_check` tests the back-and-forth clauses of a relation one
//! pair at a time.

use std::collections::{HashMap, HashSet, VecDeque};
use std::hash::Hash;

use crate::error::ResourceError;
use crate::kripke::{KripkeModel, ModelClass};
use crate::semantics::{sep_check, Polarity};
use crate::syntax::{Alphabet, Formula};

/// Default ceiling on the number of stored bank entries.
pub const DEFAULT_ORACLE_CAP: usize = 1_000_000;

/// A separator found by exhaustive search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleSeparator {
    pub formula: Formula,
    pub depth: usize,
    pub polarity: Polarity,
}

/// Searches for a formula of depth at most `max_depth` (and size at most
/// `max_size`, if given) that separates the classes in either direction.
///
/// The result has the least depth, then the least size, among all
/// separators; ties go to the smallest printed form among the bank's
/// representatives. `None` means no separator exists within the bounds.
pub fn oracle_separable(
    c1: &ModelClass,
    c2: &ModelClass,
    max_depth: usize,
    max_size: Option<usize>,
) -> Result<Option<OracleSeparator>, ResourceError> {
    oracle_separable_capped(c1, c2, max_depth, max_size, DEFAULT_ORACLE_CAP)
}

pub fn oracle_separable_capped(
    c1: &ModelClass,
    c2: &ModelClass,
    max_depth: usize,
    max_size: Option<usize>,
    cap: usize,
) -> Result<Option<OracleSeparator>, ResourceError> {
    let universe = Universe::new(c1, c2);
    let found = if universe.len() <= 64 {
        let u = SmallUniverse::from(&universe);
        Search::new(&u, max_depth, max_size, cap).run()?
    } else {
        let u = WideUniverse::from(&universe);
        Search::new(&u, max_depth, max_size, cap).run()?
    };
    Ok(found.map(|formula| {
        let polarity = sep_check(c1, c2, &formula)
            .expect("oracle formulas use the merged alphabet")
            .expect("oracle candidates separate");
        OracleSeparator {
            depth: formula.modal_depth(),
            formula,
            polarity,
        }
    }))
}

/// Checks the three bisimulation clauses at every pair of `r`.
pub fn oracle_bisim_check(m: &KripkeModel, r: &[(usize, usize)]) -> bool {
    let rel: HashSet<(usize, usize)> = r.iter().copied().collect();
    r.iter().all(|&(s, t)| {
        s < m.len()
            && t < m.len()
            && m.valuation(s) == m.valuation(t)
            && m.successors(s)
                .iter()
                .all(|&s2| m.successors(t).iter().any(|&t2| rel.contains(&(s2, t2))))
            && m.successors(t)
                .iter()
                .all(|&t2| m.successors(s).iter().any(|&s2| rel.contains(&(s2, t2))))
    })
}

/// The states reachable from some member's point, renumbered from zero.
struct Universe {
    alphabet: Alphabet,
    succ: Vec<Vec<usize>>,
    /// `atoms[p]`: states where proposition `p` of the merged alphabet holds.
    atoms: Vec<Vec<usize>>,
    left: Vec<usize>,
    right: Vec<usize>,
}

impl Universe {
    fn new(c1: &ModelClass, c2: &ModelClass) -> Self {
        let alphabet = c1.alphabet().union(&c2.alphabet());
        let mut succ: Vec<Vec<usize>> = Vec::new();
        let mut atoms = vec![Vec::new(); alphabet.len()];
        let mut points = Vec::new();
        for p in c1.iter().chain(c2.iter()) {
            let m = p.model();
            let mut local: HashMap<usize, usize> = HashMap::new();
            let mut queue = VecDeque::from([p.point()]);
            local.insert(p.point(), succ.len());
            succ.push(Vec::new());
            while let Some(s) = queue.pop_front() {
                let id = local[&s];
                for &prop in m.valuation(s) {
                    let merged = alphabet.index_of(&m.alphabet().props()[prop]).unwrap();
                    atoms[merged].push(id);
                }
                let mut next = Vec::with_capacity(m.successors(s).len());
                for &t in m.successors(s) {
                    let tid = *local.entry(t).or_insert_with(|| {
                        succ.push(Vec::new());
                        queue.push_back(t);
                        succ.len() - 1
                    });
                    next.push(tid);
                }
                succ[id] = next;
            }
            points.push(local[&p.point()]);
        }
        let right = points.split_off(c1.len());
        Universe {
            alphabet,
            succ,
            atoms,
            left: points,
            right,
        }
    }

    fn len(&self) -> usize {
        self.succ.len()
    }
}

/// Truth vectors over the universe.
trait Bits: Clone + Eq + Hash {
    fn and(&self, other: &Self) -> Self;
    fn or(&self, other: &Self) -> Self;
    fn subset_of(&self, other: &Self) -> bool;
    fn disjoint(&self, other: &Self) -> bool;
}

impl Bits for u64 {
    #[inline]
    fn and(&self, other: &Self) -> Self {
        self & other
    }
    #[inline]
    fn or(&self, other: &Self) -> Self {
        self | other
    }
    #[inline]
    fn subset_of(&self, other: &Self) -> bool {
        self & !other == 0
    }
    #[inline]
    fn disjoint(&self, other: &Self) -> bool {
        self & other == 0
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Wide(Box<[u64]>);

impl Bits for Wide {
    fn and(&self, other: &Self) -> Self {
        Wide(self.0.iter().zip(other.0.iter()).map(|(a, b)| a & b).collect())
    }
    fn or(&self, other: &Self) -> Self {
        Wide(self.0.iter().zip(other.0.iter()).map(|(a, b)| a | b).collect())
    }
    fn subset_of(&self, other: &Self) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a & !b == 0)
    }
    fn disjoint(&self, other: &Self) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a & b == 0)
    }
}

/// Operations the search needs from a concrete vector representation.
trait Space {
    type B: Bits;
    fn full(&self) -> Self::B;
    fn empty(&self) -> Self::B;
    fn complement(&self, v: &Self::B) -> Self::B;
    fn dia(&self, v: &Self::B) -> Self::B;
    fn boxed(&self, v: &Self::B) -> Self::B;
    fn atoms(&self) -> &[Self::B];
    fn left(&self) -> &Self::B;
    fn right(&self) -> &Self::B;
    fn alphabet(&self) -> &Alphabet;
    /// A dense index for `v`, when the universe is small enough to tabulate.
    fn dense(&self, v: &Self::B) -> Option<usize>;
    fn dense_len(&self) -> Option<usize>;
}

struct SmallUniverse {
    n: usize,
    full: u64,
    succ: Vec<u64>,
    atoms: Vec<u64>,
    left: u64,
    right: u64,
    alphabet: Alphabet,
}

impl From<&Universe> for SmallUniverse {
    fn from(u: &Universe) -> Self {
        let mask = |xs: &[usize]| xs.iter().fold(0u64, |acc, &s| acc | (1 << s));
        let n = u.len();
        SmallUniverse {
            n,
            full: if n == 64 { u64::MAX } else { (1u64 << n) - 1 },
            succ: u.succ.iter().map(|ts| mask(ts)).collect(),
            atoms: u.atoms.iter().map(|xs| mask(xs)).collect(),
            left: mask(&u.left),
            right: mask(&u.right),
            alphabet: u.alphabet.clone(),
        }
    }
}

const DENSE_LIMIT: usize = 16;

impl Space for SmallUniverse {
    type B = u64;
    fn full(&self) -> u64 {
        self.full
    }
    fn empty(&self) -> u64 {
        0
    }
    fn complement(&self, v: &u64) -> u64 {
        !v & self.full
    }
    fn dia(&self, v: &u64) -> u64 {
        let mut out = 0;
        for (s, &ts) in self.succ.iter().enumerate() {
            if ts & v != 0 {
                out |= 1 << s;
            }
        }
        out
    }
    fn boxed(&self, v: &u64) -> u64 {
        let mut out = 0;
        for (s, &ts) in self.succ.iter().enumerate() {
            if ts & !v == 0 {
                out |= 1 << s;
            }
        }
        out
    }
    fn atoms(&self) -> &[u64] {
        &self.atoms
    }
    fn left(&self) -> &u64 {
        &self.left
    }
    fn right(&self) -> &u64 {
        &self.right
    }
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }
    fn dense(&self, v: &u64) -> Option<usize> {
        (self.n <= DENSE_LIMIT).then_some(*v as usize)
    }
    fn dense_len(&self) -> Option<usize> {
        (self.n <= DENSE_LIMIT).then_some(1 << self.n)
    }
}

struct WideUniverse {
    n: usize,
    succ: Vec<Wide>,
    atoms: Vec<Wide>,
    left: Wide,
    right: Wide,
    alphabet: Alphabet,
}

impl WideUniverse {
    fn words(&self) -> usize {
        self.n.div_ceil(64)
    }

    fn mask(n: usize, xs: &[usize]) -> Wide {
        let mut w = vec![0u64; n.div_ceil(64)];
        for &s in xs {
            w[s / 64] |= 1 << (s % 64);
        }
        Wide(w.into_boxed_slice())
    }

    fn from_states(&self, f: impl Fn(usize) -> bool) -> Wide {
        let mut w = vec![0u64; self.words()];
        for s in 0..self.n {
            if f(s) {
                w[s / 64] |= 1 << (s % 64);
            }
        }
        Wide(w.into_boxed_slice())
    }
}

impl From<&Universe> for WideUniverse {
    fn from(u: &Universe) -> Self {
        let n = u.len();
        WideUniverse {
            n,
            succ: u.succ.iter().map(|ts| Self::mask(n, ts)).collect(),
            atoms: u.atoms.iter().map(|xs| Self::mask(n, xs)).collect(),
            left: Self::mask(n, &u.left),
            right: Self::mask(n, &u.right),
            alphabet: u.alphabet.clone(),
        }
    }
}

impl Space for WideUniverse {
    type B = Wide;
    fn full(&self) -> Wide {
        self.from_states(|_| true)
    }
    fn empty(&self) -> Wide {
        self.from_states(|_| false)
    }
    fn complement(&self, v: &Wide) -> Wide {
        self.from_states(|s| v.0[s / 64] & (1 << (s % 64)) == 0)
    }
    fn dia(&self, v: &Wide) -> Wide {
        self.from_states(|s| !self.succ[s].disjoint(v))
    }
    fn boxed(&self, v: &Wide) -> Wide {
        self.from_states(|s| self.succ[s].subset_of(v))
    }
    fn atoms(&self) -> &[Wide] {
        &self.atoms
    }
    fn left(&self) -> &Wide {
        &self.left
    }
    fn right(&self) -> &Wide {
        &self.right
    }
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }
    fn dense(&self, _: &Wide) -> Option<usize> {
        None
    }
    fn dense_len(&self) -> Option<usize> {
        None
    }
}

/// Top connective of a bank entry. Conjunctions and disjunctions are n-ary,
/// so a conjunction is extended by appending a non-conjunction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Kind {
    And = 0,
    Or = 1,
    Other = 2,
}

#[derive(Debug, Clone, Copy)]
enum Build {
    Top,
    Bot,
    Atom(usize),
    Not(u32),
    /// Children index the previous level.
    Dia(u32),
    Box(u32),
    /// `left` may itself be a junction of the same kind.
    And(u32, u32),
    Or(u32, u32),
}

struct Entry<B> {
    bits: B,
    size: usize,
    kind: Kind,
    build: Build,
}

enum Table<B> {
    Dense(Vec<[u32; 3]>),
    Sparse(HashMap<(B, Kind), u32>),
}

const NONE: u32 = u32::MAX;

struct Level<B> {
    entries: Vec<Entry<B>>,
    /// Entry ids of each size, split by kind.
    by_size: Vec<[Vec<u32>; 3]>,
    table: Table<B>,
}

impl<B: Bits> Level<B> {
    fn new<S: Space<B = B>>(space: &S) -> Self {
        Level {
            entries: Vec::new(),
            by_size: Vec::new(),
            table: match space.dense_len() {
                Some(n) => Table::Dense(vec![[NONE; 3]; n]),
                None => Table::Sparse(HashMap::new()),
            },
        }
    }

    fn lookup<S: Space<B = B>>(&self, space: &S, bits: &B, kind: Kind) -> Option<u32> {
        match &self.table {
            Table::Dense(t) => {
                let id = t[space.dense(bits).unwrap()][kind as usize];
                (id != NONE).then_some(id)
            }
            Table::Sparse(t) => t.get(&(bits.clone(), kind)).copied(),
        }
    }

    /// Stores the entry unless its vector and kind are already present.
    fn insert<S: Space<B = B>>(&mut self, space: &S, entry: Entry<B>) -> bool {
        if self.lookup(space, &entry.bits, entry.kind).is_some() {
            return false;
        }
        let id = self.entries.len() as u32;
        match &mut self.table {
            Table::Dense(t) => t[space.dense(&entry.bits).unwrap()][entry.kind as usize] = id,
            Table::Sparse(t) => {
                t.insert((entry.bits.clone(), entry.kind), id);
            }
        }
        while self.by_size.len() <= entry.size {
            self.by_size.push(Default::default());
        }
        self.by_size[entry.size][entry.kind as usize].push(id);
        self.entries.push(entry);
        true
    }

    fn ids(&self, size: usize, kind: Kind) -> &[u32] {
        self.by_size.get(size).map_or(&[], |k| &k[kind as usize])
    }

    fn max_size(&self) -> usize {
        self.entries.iter().map(|e| e.size).max().unwrap_or(0)
    }

    /// Same vectors, kinds and sizes.
    fn same_as<S: Space<B = B>>(&self, space: &S, other: &Level<B>) -> bool {
        self.entries.len() == other.entries.len()
            && self.entries.iter().all(|e| {
                other
                    .lookup(space, &e.bits, e.kind)
                    .is_some_and(|id| other.entries[id as usize].size == e.size)
            })
    }
}

struct Search<'a, S: Space> {
    space: &'a S,
    max_depth: usize,
    max_size: Option<usize>,
    cap: usize,
    stored: usize,
}

impl<'a, S: Space> Search<'a, S> {
    fn new(space: &'a S, max_depth: usize, max_size: Option<usize>, cap: usize) -> Self {
        Search {
            space,
            max_depth,
            max_size,
            cap,
            stored: 0,
        }
    }

    fn run(mut self) -> Result<Option<Formula>, ResourceError> {
        let mut levels: Vec<Level<S::B>> = Vec::new();
        for d in 0..=self.max_depth {
            let mut level = Level::new(self.space);
            let found = self.fill(&mut level, levels.last())?;
            levels.push(level);
            if let Some(id) = found {
                return Ok(Some(self.pick(&levels, id)));
            }
            if d > 0 && levels[d].same_as(self.space, &levels[d - 1]) {
                return Ok(None);
            }
        }
        Ok(None)
    }

    fn separates(&self, v: &S::B) -> bool {
        let (l, r) = (self.space.left(), self.space.right());
        (l.subset_of(v) && r.disjoint(v)) || (r.subset_of(v) && l.disjoint(v))
    }

    fn push(&mut self, level: &mut Level<S::B>, entry: Entry<S::B>) -> Result<(), ResourceError> {
        if level.insert(self.space, entry) {
            self.stored += 1;
            if self.stored > self.cap {
                return Err(ResourceError::new("oracle formula bank", self.cap));
            }
        }
        Ok(())
    }

    /// Builds one level size by size. Returns the first entry id of the
    /// first size layer that contains a separator.
    fn fill(&mut self, level: &mut Level<S::B>, prev: Option<&Level<S::B>>) -> Result<Option<u32>, ResourceError> {
        let prev_max = prev.map_or(0, Level::max_size);
        let mut size = 1;
        loop {
            if self.max_size.is_some_and(|m| size > m) {
                return Ok(None);
            }
            let saturation = (2 * level.max_size() + 1).max(prev_max + 1);
            if size > 1 && size > saturation {
                return Ok(None);
            }
            let first_new = level.entries.len();
            self.layer(level, prev, size)?;
            if (first_new..level.entries.len()).any(|i| self.separates(&level.entries[i].bits)) {
                return Ok(Some(first_new as u32));
            }
            size += 1;
        }
    }

    fn layer(&mut self, level: &mut Level<S::B>, prev: Option<&Level<S::B>>, size: usize) -> Result<(), ResourceError> {
        let sp = self.space;
        let entry = |bits, kind, build| Entry { bits, size, kind, build };
        if size == 1 {
            self.push(level, entry(sp.empty(), Kind::Other, Build::Bot))?;
            self.push(level, entry(sp.full(), Kind::Other, Build::Top))?;
            for (i, a) in sp.atoms().iter().enumerate() {
                self.push(level, entry(a.clone(), Kind::Other, Build::Atom(i)))?;
            }
            return Ok(());
        }
        if let Some(prev) = prev {
            for kind in [Kind::And, Kind::Or, Kind::Other] {
                for &id in prev.ids(size - 1, kind) {
                    let v = &prev.entries[id as usize].bits;
                    self.push(level, entry(sp.dia(v), Kind::Other, Build::Dia(id)))?;
                    self.push(level, entry(sp.boxed(v), Kind::Other, Build::Box(id)))?;
                }
            }
        }
        for kind in [Kind::And, Kind::Or, Kind::Other] {
            let ids = level.ids(size - 1, kind).to_vec();
            for id in ids {
                let v = sp.complement(&level.entries[id as usize].bits);
                self.push(level, entry(v, Kind::Other, Build::Not(id)))?;
            }
        }
        for (kind, other) in [(Kind::And, Kind::Or), (Kind::Or, Kind::And)] {
            let combine = |a: &S::B, b: &S::B| if kind == Kind::And { a.and(b) } else { a.or(b) };
            let make = |l, r| if kind == Kind::And { Build::And(l, r) } else { Build::Or(l, r) };
            let mut fresh = Vec::new();
            // Extend an existing junction of this kind by one more child.
            for a in 1..size {
                for &l in level.ids(a, kind) {
                    for rk in [other, Kind::Other] {
                        for &r in level.ids(size - a, rk) {
                            let v = combine(&level.entries[l as usize].bits, &level.entries[r as usize].bits);
                            fresh.push(entry(v, kind, make(l, r)));
                        }
                    }
                }
            }
            // Binary junction of two non-junctions of this kind.
            for a in 1..size - 1 {
                let b = size - 1 - a;
                if a > b {
                    break;
                }
                for lk in [other, Kind::Other] {
                    for rk in [other, Kind::Other] {
                        for &l in level.ids(a, lk) {
                            for &r in level.ids(b, rk) {
                                if a == b && lk == rk && r < l {
                                    continue;
                                }
                                let v = combine(&level.entries[l as usize].bits, &level.entries[r as usize].bits);
                                fresh.push(entry(v, kind, make(l, r)));
                            }
                        }
                    }
                }
            }
            for e in fresh {
                self.push(level, e)?;
            }
        }
        Ok(())
    }

    /// Among the separators of the final layer, the one with the smallest
    /// printed canonical form.
    fn pick(&self, levels: &[Level<S::B>], first: u32) -> Formula {
        let d = levels.len() - 1;
        (first as usize..levels[d].entries.len())
            .filter(|&i| self.separates(&levels[d].entries[i].bits))
            .map(|i| self.formula(levels, d, i as u32).canonicalize())
            .map(|f| (f.to_string(), f))
            .min_by(|a, b| a.0.cmp(&b.0))
            .map(|(_, f)| f)
            .expect("the layer holds a separator")
    }

    /// Rebuilds entry `id` of level `d`.
    fn formula(&self, levels: &[Level<S::B>], d: usize, id: u32) -> Formula {
        match levels[d].entries[id as usize].build {
            Build::Top => Formula::Top,
            Build::Bot => Formula::Bot,
            Build::Atom(i) => Formula::atom(self.space.alphabet().props()[i].clone()),
            Build::Not(c) => Formula::not(self.formula(levels, d, c)),
            Build::Dia(c) => Formula::dia(self.formula(levels, d - 1, c)),
            Build::Box(c) => Formula::boxed(self.formula(levels, d - 1, c)),
            Build::And(l, r) => match self.formula(levels, d, l) {
                Formula::And(mut cs) => {
                    cs.push(self.formula(levels, d, r));
                    Formula::And(cs)
                }
                left => Formula::and(vec![left, self.formula(levels, d, r)]),
            },
            Build::Or(l, r) => match self.formula(levels, d, l) {
                Formula::Or(mut cs) => {
                    cs.push(self.formula(levels, d, r));
                    Formula::Or(cs)
                }
                left => Formula::or(vec![left, self.formula(levels, d, r)]),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{chain, loop_model, singleton, two_cycle, walks};
    use crate::kripke::{disjoint_union, PointedModel};
    use crate::semantics::eval;
    use crate::syntax::enumerate_formulas;
    use proptest::prelude::*;

    #[test]
    fn chain_against_loop() {
        let r = oracle_separable(&singleton(chain(1)), &singleton(loop_model()), 2, Some(6))
            .unwrap()
            .unwrap();
        assert_eq!(r.depth, 2);
        assert_eq!(r.formula.to_string(), "<> <> true");
        assert_eq!(r.polarity, Polarity::Reverse);
    }

    #[test]
    fn walks_need_depth_four() {
        let l = singleton(loop_model());
        assert_eq!(oracle_separable(&walks(3), &l, 3, None).unwrap(), None);
        let r = oracle_separable(&walks(3), &l, 4, None).unwrap().unwrap();
        assert_eq!(r.depth, 4);
    }

    #[test]
    fn a_class_never_separates_from_itself() {
        for c in [walks(3), singleton(loop_model()), singleton(two_cycle())] {
            assert_eq!(oracle_separable(&c, &c, 6, None).unwrap(), None);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let err = oracle_separable_capped(&walks(3), &singleton(loop_model()), 3, None, 10).unwrap_err();
        assert_eq!(err.what, "oracle formula bank");
    }

    #[test]
    fn clause_checks() {
        let u = disjoint_union(&ModelClass::new(vec![loop_model(), two_cycle()]));
        let all: Vec<(usize, usize)> = (0..3).flat_map(|s| (0..3).map(move |t| (s, t))).collect();
        assert!(oracle_bisim_check(&u, &all));

        let c2 = chain(2);
        assert!(!oracle_bisim_check(c2.model(), &[(0, 1)]));
        assert!(oracle_bisim_check(c2.model(), &[(0, 0), (1, 1), (2, 2)]));
        assert!(oracle_bisim_check(c2.model(), &[]));
    }

    fn small_model() -> impl Strategy<Value = PointedModel> {
        (1usize..=3)
            .prop_flat_map(|n| {
                (
                    Just(n),
                    proptest::collection::vec(any::<bool>(), n * n),
                    proptest::collection::vec(any::<bool>(), n),
                    0..n,
                )
            })
            .prop_map(|(n, edges, val, point)| {
                let names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
                let succ = (0..n).map(|s| (0..n).filter(|&t| edges[s * n + t]).collect()).collect();
                let val = val.iter().map(|&b| if b { vec![0] } else { vec![] }).collect();
                let m = KripkeModel::from_indexed(Alphabet::new(["p"]).unwrap(), names, succ, val);
                PointedModel::new(m, point)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        // The bank agrees with plain enumeration on the least (depth, size)
        // of a separator.
        #[test]
        fn bank_matches_enumeration(a in small_model(), b in small_model()) {
            let (c1, c2) = (singleton(a.clone()), singleton(b.clone()));
            let formulas = enumerate_formulas(&Alphabet::new(["p"]).unwrap(), 2, 5).unwrap();
            let expected = formulas
                .iter()
                .find(|f| eval(&a, f).unwrap() != eval(&b, f).unwrap())
                .map(|f| (f.modal_depth(), f.size()));
            let found = oracle_separable(&c1, &c2, 2, Some(5)).unwrap();
            prop_assert_eq!(found.as_ref().map(|r| (r.depth, r.formula.size())), expected);
            if let Some(r) = found {
                prop_assert!(sep_check(&c1, &c2, &r.formula).unwrap().is_some());
            }
        }
    }
}
