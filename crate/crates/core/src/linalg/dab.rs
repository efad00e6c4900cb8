//! Doubling a transition matrix along a breakable pair.

use crate::error::{Error, Result};
use crate::extend::{break_pairs, BreakPair};
use crate::linalg::{LinForm, SymbolicMatrix};
use crate::tree::{ShelfTree, State};

/// `π̂`: the state with `a` and `b` exchanged in the pair's shelf.
pub fn swap_pair(s: &State, pair: BreakPair) -> State {
    let mut out = s.clone();
    for l in out.shelves[pair.shelf].iter_mut() {
        if *l == pair.a {
            *l = pair.b;
        } else if *l == pair.b {
            *l = pair.a;
        }
    }
    out
}

/// Replaces every `x_E` entry at `(π, π̃)` by a 2×2 block over
/// `(π, π̂) × (π̃, π̃^)`. Rows and columns interleave each state with its swap.
pub fn dab_double(m: &SymbolicMatrix, t: &ShelfTree, pair: BreakPair) -> Result<SymbolicMatrix> {
    let p = t.shelf_poset(pair.shelf);
    if !break_pairs(p).contains(&(pair.a, pair.b)) {
        let node = t.node(t.shelves()[pair.shelf]).id.clone();
        return Err(Error::PairNotBreakable(pair.a, pair.b, node));
    }
    let states: Vec<State> = m.states.iter().flat_map(|s| [s.clone(), swap_pair(s, pair)]).collect();
    let mut out = SymbolicMatrix::zeros(states);
    for i in 0..m.dim() {
        for j in 0..m.dim() {
            for (e, c) in m.entry(i, j).terms() {
                let k = e.labels().iter().copied().find(|l| p.contains(*l));
                let cells: [(usize, usize, LinForm); 2] = match k {
                    Some(k) if p.lt(k, pair.a) => [
                        (2 * i, 2 * j + 1, LinForm::term(e.clone(), c)),
                        (2 * i + 1, 2 * j, LinForm::term(e.clone(), c)),
                    ],
                    Some(k) if k == pair.a => [
                        (2 * i, 2 * j + 1, LinForm::term(e.clone(), c)),
                        (2 * i + 1, 2 * j, LinForm::term(e.without(pair.a).with(pair.b), c)),
                    ],
                    Some(k) if k == pair.b => [
                        (2 * i, 2 * j, LinForm::term(e.clone(), c)),
                        (2 * i + 1, 2 * j + 1, LinForm::term(e.without(pair.b).with(pair.a), c)),
                    ],
                    _ => [
                        (2 * i, 2 * j, LinForm::term(e.clone(), c)),
                        (2 * i + 1, 2 * j + 1, LinForm::term(e.clone(), c)),
                    ],
                };
                for (r, c, f) in cells {
                    out.entries[r][c] += &f;
                }
            }
        }
    }
    Ok(out)
}
