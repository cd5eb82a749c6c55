//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use classbisim_core::bisim::{bisimilar, distinguishing_formula, k_bisimilar, DistinguishResult};
use classbisim_core::catalog::{chain, loop_model, singleton, walks};
use classbisim_core::classes::{
    class_equiv, class_separation, compare_fragments, definable, lift_exists, lift_forall, ClassSide,
    Definability, Order, SeparationResult,
};
use classbisim_core::games::{
    class_game_winner, extract_strategy, game_winner, GamePosition, ModelGame, Outcome, Rounds, Strategy,
    StrategyKey, Winner,
};
use classbisim_core::kripke::{
    generated_submodel, load_class, save_class, Format, KripkeModel, ModelClass, PointedModel, UnionModel,
};
use classbisim_core::oracle::{oracle_bisim_check, oracle_separable};
use classbisim_core::semantics::{class_models, eval, sep_check, Polarity};
use classbisim_core::syntax::{enumerate_formulas, parse_formula, Alphabet, Formula};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Collects mismatches for one criterion; only the first few are kept.
#[derive(Default)]
struct Tally {
    checked: usize,
    failed: usize,
    examples: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.examples.len() < 3 {
                self.examples.push(what());
            }
        }
    }

    fn verdict(self, summary: String) -> Result<String, String> {
        if self.failed == 0 {
            Ok(format!("{summary}; {} checks", self.checked))
        } else {
            Err(format!(
                "{summary}; {} of {} checks failed, e.g. {}",
                self.failed,
                self.checked,
                self.examples.join(" | ")
            ))
        }
    }
}

fn run(results: &mut Vec<bool>, id: usize, name: &str, f: impl FnOnce() -> Result<String, String>) {
    run_after(results, id, name, Duration::ZERO, f)
}

/// Like `run`, counting `earlier` work done up front for this criterion.
fn run_after(
    results: &mut Vec<bool>,
    id: usize,
    name: &str,
    earlier: Duration,
    f: impl FnOnce() -> Result<String, String>,
) {
    let start = Instant::now();
    let outcome = f();
    let secs = (earlier + start.elapsed()).as_secs_f64();
    match &outcome {
        Ok(detail) => println!("PASS [{id}] {name}: {detail} ({secs:.1}s)"),
        Err(detail) => println!("FAIL [{id}] {name}: {detail} ({secs:.1}s)"),
    }
    results.push(outcome.is_ok());
}

fn single(p: &PointedModel) -> ModelClass {
    ModelClass::new(vec![p.clone()])
}

/// A copy of `p` with its states shuffled, or its generated submodel.
fn bisimilar_variant(p: &PointedModel, rng: &mut ChaCha8Rng) -> PointedModel {
    if rng.gen_bool(0.3) {
        return generated_submodel(p);
    }
    let m = p.model();
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut names = vec![String::new(); n];
    let mut succ = vec![Vec::new(); n];
    let mut val = vec![Vec::new(); n];
    for s in 0..n {
        names[perm[s]] = format!("v{}", perm[s]);
        succ[perm[s]] = m.successors(s).iter().map(|&t| perm[t]).collect();
        val[perm[s]] = m.valuation(s).to_vec();
    }
    PointedModel::new(
        KripkeModel::from_indexed(m.alphabet().clone(), names, succ, val),
        perm[p.point()],
    )
}

/// Random class pairs with at most 4 members of at most 4 states each.
/// Roughly half of the second classes reuse (variants of) first-class
/// members.
fn class_corpus(seed: u64, count: usize) -> Vec<(ModelClass, ModelClass)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let min = if i % 50 == 0 { 0 } else { 1 };
        let c1 = common::random_class(&mut rng, min, 4, 4, &[]);
        let pool: Vec<PointedModel> = if rng.gen_bool(0.5) {
            c1.iter().map(|p| bisimilar_variant(p, &mut rng)).collect()
        } else {
            Vec::new()
        };
        let min = if i % 50 == 25 { 0 } else { 1 };
        let c2 = common::random_class(&mut rng, min, 4, 4, &pool);
        out.push((c1, c2));
    }
    out
}

/// A universe of up to `max` members, some of them bisimilar copies.
fn universe(rng: &mut ChaCha8Rng, max: usize) -> ModelClass {
    let k = rng.gen_range(1..=max);
    let mut members: Vec<PointedModel> = Vec::with_capacity(k);
    while members.len() < k {
        if !members.is_empty() && rng.gen_bool(0.35) {
            let base = members[rng.gen_range(0..members.len())].clone();
            members.push(bisimilar_variant(&base, rng));
        } else {
            members.push(common::random_model(rng, 4, 1));
        }
    }
    ModelClass::new(members)
}

/// Every opponent line against `strategy`. Returns the most rounds any line
/// took, or `None` if some line is lost or leaves the strategy's domain.
fn play_out(strategy: &Strategy, pos: Outcome, path: &mut Vec<StrategyKey>) -> Option<usize> {
    let g = match pos {
        Outcome::Over(w) => return (w == strategy.winner).then_some(path.len().div_ceil(2)),
        Outcome::Continue(GamePosition::ModelGame(g)) => g,
        Outcome::Continue(GamePosition::ClassChoice { .. }) => return None,
    };
    let key = StrategyKey::of(&g);
    if path.contains(&key) {
        return (strategy.winner == Winner::Verifier).then_some(path.len().div_ceil(2));
    }
    path.push(key);
    let lines = if g.to_move() == strategy.winner {
        vec![strategy.recommend(&g)?]
    } else {
        g.legal_moves()
    };
    let mut longest = Some(0);
    for mv in lines {
        let r = g.step(mv).ok().and_then(|next| play_out(strategy, next, path));
        longest = longest.zip(r).map(|(a, b)| a.max(b));
    }
    path.pop();
    longest
}

fn criterion_1() -> Result<String, String> {
    let start = Instant::now();
    let mut t = Tally::default();
    let l = singleton(loop_model());
    for n in 1..=6 {
        match class_separation(&walks(n), &l) {
            SeparationResult::Separator { formula, depth, .. } => {
                t.check(depth == n + 1, || format!("N={n}: depth {depth}"));
                t.check(formula.modal_depth() == n + 1, || format!("N={n}: formula depth"));
                t.check(
                    sep_check(&walks(n), &l, &formula) == Ok(Some(Polarity::Forward)),
                    || format!("N={n}: separator fails sep_check"),
                );
            }
            SeparationResult::Witness { .. } => t.check(false, || format!("N={n}: no separator")),
        }
        t.check(k_bisimilar(&chain(n), &loop_model(), n), || format!("chain_{n} not {n}-bisimilar to loop"));
        t.check(!k_bisimilar(&chain(n), &loop_model(), n + 1), || format!("chain_{n} {}-bisimilar to loop", n + 1));
        if n <= 3 {
            let r = oracle_separable(&walks(n), &l, n, None);
            t.check(r == Ok(None), || format!("N={n}: oracle found {r:?} within depth {n}"));
        }
    }
    let elapsed = start.elapsed();
    t.check(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"));
    t.verdict("N=1..6 separated at depth N+1, oracle finds no depth-N separator for N<=3".into())
}

/// Per-pair facts shared by the exhaustive criteria.
struct PairFacts {
    i: u32,
    j: u32,
    bisimilar: bool,
    /// Least depth of a separator found by the oracle.
    oracle_depth: Option<u8>,
}

fn exhaustive_pairs(models: &[PointedModel]) -> Result<Vec<PairFacts>, String> {
    let mut out = Vec::with_capacity(models.len() * (models.len() + 1) / 2);
    for i in 0..models.len() {
        let ci = single(&models[i]);
        for j in i..models.len() {
            let r = oracle_separable(&ci, &single(&models[j]), 9, None)
                .map_err(|e| format!("oracle on pair ({i},{j}): {e}"))?;
            out.push(PairFacts {
                i: i as u32,
                j: j as u32,
                bisimilar: bisimilar(&models[i], &models[j]),
                oracle_depth: r.map(|s| s.depth as u8),
            });
        }
    }
    Ok(out)
}

fn criterion_2(models: &[PointedModel], pairs: &[PairFacts], oracle_time: Duration) -> Result<String, String> {
    let mut t = Tally::default();
    for p in pairs {
        t.check(p.bisimilar == p.oracle_depth.is_none(), || {
            format!("pair ({},{}): bisimilar={} oracle={:?}", p.i, p.j, p.bisimilar, p.oracle_depth)
        });
    }
    t.check(oracle_time < Duration::from_secs(600), || format!("took {oracle_time:?}"));
    let bisim = pairs.iter().filter(|p| p.bisimilar).count();
    t.verdict(format!(
        "{} models, {} pairs ({bisim} bisimilar), oracle depth 9 unbounded size in {:.1}s",
        models.len(),
        pairs.len(),
        oracle_time.as_secs_f64()
    ))
}

fn criterion_6(models: &[PointedModel], pairs: &[PairFacts]) -> Result<String, String> {
    let mut t = Tally::default();
    for p in pairs {
        let (a, b) = (&models[p.i as usize], &models[p.j as usize]);
        match distinguishing_formula(a, b) {
            DistinguishResult::Distinguished { formula, depth } => {
                let least = (0..=depth + 1).find(|&k| !k_bisimilar(a, b, k));
                t.check(least == Some(depth), || format!("({},{}): depth {depth}, least k {least:?}", p.i, p.j));
                t.check(p.oracle_depth == Some(depth as u8), || {
                    format!("({},{}): depth {depth}, oracle {:?}", p.i, p.j, p.oracle_depth)
                });
                t.check(
                    eval(a, &formula) == Ok(true) && eval(b, &formula) == Ok(false),
                    || format!("({},{}): {formula} does not distinguish", p.i, p.j),
                );
            }
            DistinguishResult::Bisimilar { witness } => {
                t.check(p.oracle_depth.is_none(), || format!("({},{}): oracle separates", p.i, p.j));
                let u = UnionModel::of([a, b]);
                let rel: Vec<(usize, usize)> = witness
                    .iter()
                    .map(|(x, y)| {
                        (
                            a.model().state_index(x).unwrap() + u.offsets[0],
                            b.model().state_index(y).unwrap() + u.offsets[1],
                        )
                    })
                    .collect();
                t.check(
                    rel.contains(&(u.points[0], u.points[1])) && oracle_bisim_check(&u.model, &rel),
                    || format!("({},{}): witness is not a bisimulation", p.i, p.j),
                );
            }
        }
    }
    t.verdict(format!("{} pairs against the oracle's minimal depth", pairs.len()))
}

fn criterion_8(models: &[PointedModel], pairs: &[PairFacts]) -> Result<String, String> {
    let mut t = Tally::default();
    let mut spoiler_strategies = 0;
    for p in pairs {
        let (a, b) = (&models[p.i as usize], &models[p.j as usize]);
        for k in 0..=5 {
            let w = game_winner(a, b, Rounds::Bounded(k));
            t.check((w == Winner::Verifier) == k_bisimilar(a, b, k), || {
                format!("({},{}) k={k}: {w}", p.i, p.j)
            });
        }
        let w = game_winner(a, b, Rounds::Unbounded);
        t.check((w == Winner::Verifier) == p.bisimilar, || format!("({},{}) unbounded: {w}", p.i, p.j));

        let s = extract_strategy(a, b, Rounds::Unbounded);
        let longest = play_out(&s, ModelGame::start(a, b, Rounds::Unbounded), &mut Vec::new());
        t.check(longest.is_some(), || format!("({},{}): {} strategy loses", p.i, p.j, s.winner));
        if let (Winner::Spoiler, Some(rounds)) = (s.winner, longest) {
            spoiler_strategies += 1;
            let min = p.oracle_depth.map(usize::from);
            t.check(Some(rounds) <= min, || format!("({},{}): won in {rounds}, minimal depth {min:?}", p.i, p.j));
        }
    }

    let corpus = class_corpus(0xC1A55, 300);
    let mut verifier_openings = 0;
    for (c1, c2) in &corpus {
        let r = class_game_winner(c1, c2);
        t.check((r.winner == Winner::Verifier) == lift_exists(c1, c2), || format!("class game {:?}", r));
        if let Some((i, j)) = r.opening {
            verifier_openings += 1;
            t.check(bisimilar(&c1.members[i], &c2.members[j]), || format!("opening ({i},{j}) not bisimilar"));
        }
    }
    t.verdict(format!(
        "{} model pairs, {spoiler_strategies} Spoiler strategies played out; {} class pairs ({verifier_openings} Verifier wins)",
        pairs.len(),
        corpus.len()
    ))
}

fn criterion_3(corpus: &[(ModelClass, ModelClass)]) -> Result<String, String> {
    let mut t = Tally::default();
    let mut separated = 0;
    for (n, (c1, c2)) in corpus.iter().enumerate() {
        let exists = lift_exists(c1, c2);
        match class_separation(c1, c2) {
            SeparationResult::Separator { formula, polarity, .. } => {
                separated += 1;
                t.check(!exists, || format!("#{n}: separator although a cross pair is bisimilar"));
                t.check(polarity == Polarity::Forward, || format!("#{n}: polarity"));
                t.check(sep_check(c1, c2, &formula) == Ok(Some(Polarity::Forward)), || {
                    format!("#{n}: {formula} fails sep_check")
                });
            }
            SeparationResult::Witness { left, right } => {
                t.check(exists, || format!("#{n}: witness although no cross pair is bisimilar"));
                t.check(bisimilar(&c1.members[left], &c2.members[right]), || format!("#{n}: witness ({left},{right})"));
            }
        }
        let eq = class_equiv(c1, c2);
        t.check(eq.equivalent == lift_forall(c1, c2), || format!("#{n}: class_equiv disagrees with lift_forall"));
        if let Some(w) = eq.witness {
            let (valid, other) = match w.valid_on {
                ClassSide::First => (c1, c2),
                ClassSide::Second => (c2, c1),
            };
            t.check(
                class_models(valid, &w.formula) == Ok(true) && eval(&other.members[w.fails_on], &w.formula) == Ok(false),
                || format!("#{n}: equivalence witness {} is wrong", w.formula),
            );
        }
    }
    t.verdict(format!("{} class pairs, {separated} separable", corpus.len()))
}

fn criterion_4(corpus: &[(ModelClass, ModelClass)]) -> Result<String, String> {
    let mut t = Tally::default();
    let mut applicable = 0;
    for (n, (c1, c2)) in corpus.iter().enumerate() {
        let mut max_pair = 0;
        let mut all_separable = true;
        for a in c1 {
            for b in c2 {
                match distinguishing_formula(a, b) {
                    DistinguishResult::Distinguished { depth, .. } => max_pair = max_pair.max(depth),
                    DistinguishResult::Bisimilar { .. } => all_separable = false,
                }
            }
        }
        if !all_separable {
            continue;
        }
        applicable += 1;
        match class_separation(c1, c2) {
            SeparationResult::Separator { formula, depth, .. } => {
                t.check(sep_check(c1, c2, &formula) == Ok(Some(Polarity::Forward)), || {
                    format!("#{n}: {formula} fails sep_check")
                });
                t.check(depth <= max_pair && formula.modal_depth() == depth, || {
                    format!("#{n}: depth {depth} exceeds pairwise maximum {max_pair}")
                });
            }
            SeparationResult::Witness { .. } => t.check(false, || format!("#{n}: no separator")),
        }
    }
    t.verdict(format!("{applicable} of {} class pairs with all cross pairs separable", corpus.len()))
}

fn criterion_5() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xDEF1);
    let mut t = Tally::default();
    let mut definable_count = 0;
    let mut subsets = 0;
    for n in 0..200 {
        let u = universe(&mut rng, 6);
        let k = u.len();
        let bis: Vec<Vec<bool>> = (0..k)
            .map(|i| (0..k).map(|j| bisimilar(&u.members[i], &u.members[j])).collect())
            .collect();
        for mask in 0u32..(1 << k) {
            subsets += 1;
            let s: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).collect();
            let closed = (0..k).all(|i| (0..k).all(|j| !bis[i][j] || (mask >> i & 1) == (mask >> j & 1)));
            match definable(&u, &s) {
                Ok(Definability::Definable { formula, .. }) => {
                    definable_count += 1;
                    t.check(closed, || format!("#{n} {s:?}: defined although not a union of blocks"));
                    let correct = (0..k).all(|i| eval(&u.members[i], &formula) == Ok(mask & (1 << i) != 0));
                    t.check(correct, || format!("#{n} {s:?}: {formula} evaluates wrongly"));
                }
                Ok(Definability::Undefinable { inside, outside }) => {
                    t.check(!closed, || format!("#{n} {s:?}: undefinable although a union of blocks"));
                    t.check(
                        mask & (1 << inside) != 0 && mask & (1 << outside) == 0 && bis[inside][outside],
                        || format!("#{n} {s:?}: bad witness ({inside},{outside})"),
                    );
                }
                Err(e) => t.check(false, || format!("#{n}: {e}")),
            }
        }
    }
    t.verdict(format!("200 universes, {subsets} subsets, {definable_count} definable"))
}

fn criterion_7() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xF4A6);
    let mut t = Tally::default();
    let mut seen: HashMap<&'static str, usize> = HashMap::new();
    for n in 0..100 {
        let u = universe(&mut rng, 6);
        for d2 in 0..=4 {
            for d1 in 0..d2 {
                match compare_fragments(&u, d1, d2) {
                    Ok(c) => {
                        *seen.entry(c.distinguishing.as_str()).or_default() += 1;
                        t.check(c.distinguishing == c.expressive, || format!("#{n} ({d1},{d2}): {c:?}"));
                        t.check(c.distinguishing != Order::SecondStrictlyLess, || {
                            format!("#{n} ({d1},{d2}): second strictly less")
                        });
                        t.check(c.distinguishing != Order::Incomparable, || format!("#{n} ({d1},{d2}): incomparable"));
                    }
                    Err(e) => t.check(false, || format!("#{n} ({d1},{d2}): {e}")),
                }
            }
        }
    }
    let mut orders: Vec<_> = seen.into_iter().collect();
    orders.sort();
    t.verdict(format!("100 universes x 10 depth pairs, verdicts {orders:?}"))
}

/// Everything the library reports on one class pair, as text.
fn transcript(c1: &ModelClass, c2: &ModelClass) -> String {
    let mut out = String::new();
    out += &format!("{:?}\n", class_separation(c1, c2));
    out += &format!("{:?}\n", class_equiv(c1, c2));
    out += &format!("{:?}\n", class_game_winner(c1, c2));
    for a in c1 {
        for b in c2 {
            out += &format!("{:?}\n", distinguishing_formula(a, b));
        }
    }
    let u = ModelClass::new(c1.iter().chain(c2.iter()).cloned().collect());
    out += &format!("{:?}\n", compare_fragments(&u, 1, 2));
    out += &format!("{:?}\n", definable(&u, &[0]));
    out += &save_class(&u, Format::Json);
    out += &save_class(&u, Format::Dsl);
    out
}

fn criterion_9(models: &[PointedModel], corpus: &[(ModelClass, ModelClass)]) -> Result<String, String> {
    let mut t = Tally::default();
    for (n, (c1, c2)) in corpus.iter().take(100).enumerate() {
        let first = transcript(c1, c2);
        let second = transcript(c1, c2);
        t.check(first == second, || format!("#{n}: transcripts differ"));
        let o1 = oracle_separable(c1, c2, 3, Some(7));
        let o2 = oracle_separable(c1, c2, 3, Some(7));
        t.check(o1 == o2, || format!("#{n}: oracle differs"));
    }

    // Formulas: everything enumerable at small bounds plus every formula the
    // corpus produced.
    let mut formulas = enumerate_formulas(&Alphabet::new(["p", "q"]).unwrap(), 2, 6).map_err(|e| e.to_string())?;
    for (c1, c2) in corpus {
        if let Some(f) = class_separation(c1, c2).formula() {
            formulas.push(f.clone());
        }
        if let Some(w) = class_equiv(c1, c2).witness {
            formulas.push(w.formula);
        }
    }
    for f in &formulas {
        let text = f.to_string();
        let back: Result<Formula, _> = parse_formula(&text);
        t.check(back.as_ref() == Ok(f), || format!("{text} re-parses as {back:?}"));
    }

    // Models and classes in both file formats.
    let mut classes: Vec<ModelClass> = models.chunks(7).map(|c| ModelClass::labelled("chunk", c.to_vec())).collect();
    for (c1, c2) in corpus {
        classes.push(c1.clone());
        classes.push(c2.clone());
    }
    classes.push(walks(6));
    for c in &classes {
        for format in [Format::Json, Format::Dsl] {
            let text = save_class(c, format);
            let back = load_class(&text, format);
            let same = match &back {
                Ok(b) => b.members.iter().zip(&c.members).all(|(x, y)| x.model() == y.model() && x.point() == y.point())
                    && b.len() == c.len()
                    && save_class(b, format) == text,
                Err(_) => false,
            };
            t.check(same, || format!("{format:?} round trip: {back:?}"));
        }
    }
    t.verdict(format!(
        "100 repeated transcripts, {} formulas, {} classes in two formats",
        formulas.len(),
        classes.len()
    ))
}

fn main() -> ExitCode {
    let mut results = Vec::new();
    run(&mut results, 1, "walks-vs-loop depth law", criterion_1);

    let models: Vec<PointedModel> = common::all_models(3).iter().map(common::Code::model).collect();
    let start = Instant::now();
    let pairs = exhaustive_pairs(&models);
    let oracle_time = start.elapsed();
    match &pairs {
        Ok(pairs) => {
            run_after(&mut results, 2, "finite Hennessy-Milner", oracle_time, || {
                criterion_2(&models, pairs, oracle_time)
            });
        }
        Err(e) => {
            let e = e.clone();
            run_after(&mut results, 2, "finite Hennessy-Milner", oracle_time, || Err(e));
        }
    }

    let corpus = class_corpus(0x7E08, 600);
    run(&mut results, 3, "class separation and equivalence", || criterion_3(&corpus));
    run(&mut results, 4, "collapsed separator", || criterion_4(&corpus));
    run(&mut results, 5, "definability", criterion_5);

    let empty = Vec::new();
    let pairs = pairs.as_ref().unwrap_or(&empty);
    run(&mut results, 6, "synthesis minimality", || {
        if pairs.is_empty() {
            return Err("exhaustive pair set unavailable".into());
        }
        criterion_6(&models, pairs)
    });
    run(&mut results, 7, "fragment lattice", criterion_7);
    run(&mut results, 8, "game adequacy", || {
        if pairs.is_empty() {
            return Err("exhaustive pair set unavailable".into());
        }
        criterion_8(&models, pairs)
    });
    run(&mut results, 9, "determinism and round trips", || criterion_9(&models, &corpus));

    let passed = results.iter().filter(|&&ok| ok).count();
    println!("{passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
