use super::{Alphabet, Formula};
use crate::error::ResourceError;

pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;

struct Item {
    formula: Formula,
    text: String,
    depth: usize,
}

/// A conjunction or disjunction under construction. Children are sorted by
/// printed form, so it only extends by a child printed after its last one.
struct Junction {
    children: Vec<usize>,
    size: usize,
    depth: usize,
}

/// Every canonical formula over `alphabet` with modal depth at most
/// `max_depth` and at most `max_size` nodes, ordered by (depth, size,
/// printed form). Uses [`DEFAULT_ENUMERATION_CAP`].
pub fn enumerate_formulas(
    alphabet: &Alphabet,
    max_depth: usize,
    max_size: usize,
) -> Result<Vec<Formula>, ResourceError> {
    enumerate_formulas_capped(alphabet, max_depth, max_size, DEFAULT_ENUMERATION_CAP)
}

/// As [`enumerate_formulas`] with an explicit ceiling on the number of
/// formulas produced.
///
/// Canonical here means the output of [`Formula::canonicalize`]: conjunction
/// children are distinct non-conjunctions in printed order (dually for
/// disjunctions). Any formula within the bounds canonicalizes to one of the
/// results, so the sequence is complete up to semantic equivalence.
pub fn enumerate_formulas_capped(
    alphabet: &Alphabet,
    max_depth: usize,
    max_size: usize,
    cap: usize,
) -> Result<Vec<Formula>, ResourceError> {
    // items[s] holds every canonical formula of size s.
    let mut items: Vec<Vec<Item>> = (0..=max_size).map(|_| Vec::new()).collect();
    // Partial conjunctions/disjunctions by total size, as indices into a flat
    // arena `flat` of non-And / non-Or items.
    let mut ands: Vec<Vec<Junction>> = (0..=max_size).map(|_| Vec::new()).collect();
    let mut ors: Vec<Vec<Junction>> = (0..=max_size).map(|_| Vec::new()).collect();
    let mut flat: Vec<(usize, usize)> = Vec::new(); // (size, index into items[size])
    let mut total = 0usize;

    let mut push = |items: &mut Vec<Vec<Item>>, size: usize, formula: Formula| -> Result<(), ResourceError> {
        total += 1;
        if total > cap {
            return Err(ResourceError::new("formula enumeration", cap));
        }
        let depth = formula.modal_depth();
        let text = formula.to_string();
        items[size].push(Item { formula, text, depth });
        Ok(())
    };

    if max_size >= 1 {
        push(&mut items, 1, Formula::Top)?;
        push(&mut items, 1, Formula::Bot)?;
        for a in alphabet.props() {
            push(&mut items, 1, Formula::atom(a.clone()))?;
        }
    }

    for size in 2..=max_size {
        // Unary connectives over formulas one node smaller.
        let smaller: Vec<(Formula, usize)> = items[size - 1]
            .iter()
            .map(|it| (it.formula.clone(), it.depth))
            .collect();
        for (f, depth) in &smaller {
            push(&mut items, size, Formula::not(f.clone()))?;
            if *depth < max_depth {
                push(&mut items, size, Formula::dia(f.clone()))?;
                push(&mut items, size, Formula::boxed(f.clone()))?;
            }
        }

        // Binary seeds: the root node plus two children.
        for (junctions, is_and) in [(&mut ands, true), (&mut ors, false)] {
            let mut fresh = Vec::new();
            for left_size in 1..size - 1 {
                let right_size = size - 1 - left_size;
                for (li, left) in items[left_size].iter().enumerate() {
                    if is_same_junction(&left.formula, is_and) {
                        continue;
                    }
                    for (ri, right) in items[right_size].iter().enumerate() {
                        if is_same_junction(&right.formula, is_and) || right.text <= left.text {
                            continue;
                        }
                        fresh.push(((left_size, li), (right_size, ri), left.depth.max(right.depth)));
                    }
                }
            }
            // Extensions of smaller junctions by one more child.
            let mut extended = Vec::new();
            for base_size in 3..size {
                let child_size = size - base_size;
                for j in &junctions[base_size] {
                    let (ls, li) = flat[*j.children.last().unwrap()];
                    let last_text = &items[ls][li].text;
                    for (ci, child) in items[child_size].iter().enumerate() {
                        if is_same_junction(&child.formula, is_and) || child.text <= *last_text {
                            continue;
                        }
                        extended.push((j.children.clone(), (child_size, ci), j.depth.max(child.depth)));
                    }
                }
            }
            let mut built = Vec::new();
            for (l, r, depth) in fresh {
                flat.push(l);
                flat.push(r);
                built.push(Junction {
                    children: vec![flat.len() - 2, flat.len() - 1],
                    size,
                    depth,
                });
            }
            for (mut children, c, depth) in extended {
                flat.push(c);
                children.push(flat.len() - 1);
                built.push(Junction { children, size, depth });
            }
            junctions[size] = built;
        }

        for is_and in [true, false] {
            let built = if is_and { &ands[size] } else { &ors[size] };
            let formulas: Vec<Formula> = built
                .iter()
                .map(|j| {
                    debug_assert_eq!(j.size, size);
                    let children = j
                        .children
                        .iter()
                        .map(|&k| {
                            let (s, i) = flat[k];
                            items[s][i].formula.clone()
                        })
                        .collect();
                    if is_and {
                        Formula::And(children)
                    } else {
                        Formula::Or(children)
                    }
                })
                .collect();
            for f in formulas {
                push(&mut items, size, f)?;
            }
        }
    }

    let mut all: Vec<(usize, usize, String, Formula)> = items
        .into_iter()
        .enumerate()
        .flat_map(|(size, layer)| layer.into_iter().map(move |it| (it.depth, size, it.text, it.formula)))
        .collect();
    all.sort_by(|a, b| (a.0, a.1, &a.2).cmp(&(b.0, b.1, &b.2)));
    Ok(all.into_iter().map(|(_, _, _, f)| f).collect())
}

fn is_same_junction(f: &Formula, is_and: bool) -> bool {
    matches!((f, is_and), (Formula::And(_), true) | (Formula::Or(_), false))
}
