//! One PASS/FAIL line per acceptance criterion, written straight to stderr so
//! it shows up even when the harness captures test output.

mod common;

use std::collections::BTreeMap;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use shelfwalk::extend::{extend_spectrum, ladder_spectrum, ladder_stages, BreakPair};
use shelfwalk::forest::forest_spectrum;
use shelfwalk::linalg::{parse_linform, LinForm, Weights};
use shelfwalk::monoid::{characters, doab_spectrum, full_monoid, is_r_trivial, j_order, shelf_monoid, DEFAULT_CAP};
use shelfwalk::oracle::{cross_check_dab, verify_spectrum};
use shelfwalk::shuffle::{apply_move, hat_promotion, pop_shuffle, OrderedSetPartition};
use shelfwalk::spectrum::{Spectrum, SpectrumEntry};
use shelfwalk::tree::{LeafSet, TreeSpec};
use shelfwalk::{Poset, ShelfTree};

const SMALL: Duration = Duration::from_secs(1);
const MONOID_EXAMPLE: Duration = Duration::from_secs(5);
const FOREST_CORPUS: Duration = Duration::from_secs(10 * 60);
const LADDER_CORPUS: Duration = Duration::from_secs(15 * 60);

/// Criteria run one at a time so each time limit measures only its own work.
static SERIAL: Mutex<()> = Mutex::new(());

/// Runs `body`, prints the verdict line and fails the test on FAIL.
fn criterion(id: u32, what: &str, limit: Option<Duration>, body: impl FnOnce() -> Result<String, String>) {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(body)).unwrap_or_else(|p| {
        Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
    });
    let elapsed = start.elapsed();
    let outcome = match (outcome, limit) {
        (Ok(_), Some(l)) if elapsed > l => Err(format!("took {elapsed:.2?}, limit {l:?}")),
        (o, _) => o,
    };
    let line = match &outcome {
        Ok(note) => format!("criterion {id} PASS  {what} [{elapsed:.2?}] {note}"),
        Err(why) => format!("criterion {id} FAIL  {what} [{elapsed:.2?}] {why}"),
    };
    let _ = writeln!(std::io::stderr(), "{line}");
    assert!(outcome.is_ok(), "{line}");
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn forms(list: &[&str]) -> BTreeMap<LinForm, u64> {
    list.iter().map(|f| (parse_linform(f).unwrap(), 1)).collect()
}

#[test]
fn c1_moves_on_worked_states() {
    criterion(1, "promotion, pop shuffle and tree moves on the worked states", Some(SMALL), || {
        let got = hat_promotion(&common::bowtie(), &[2, 1, 3, 4, 5], 2).map_err(|e| e.to_string())?;
        ensure(got == [1, 2, 3, 5, 4], format!("hat promotion gave {got:?}"))?;

        let b = OrderedSetPartition::new(vec![vec![2, 3], vec![4], vec![1]]).unwrap();
        let got = pop_shuffle(&b, &[3, 1, 4, 2]).map_err(|e| e.to_string())?;
        ensure(got == [3, 2, 4, 1], format!("pop shuffle gave {got:?}"))?;

        let t = common::forest_pair();
        let s = t.parse_state("132|4|56").unwrap();
        for (set, want) in [("1,4", "312|4|56"), ("1", "312|4|65")] {
            let image = t.format_state(&apply_move(&t, &s, &LeafSet::from_key(set).unwrap()).unwrap());
            ensure(image == want, format!("move {{{set}}} gave {image}"))?;
        }
        Ok(String::new())
    });
}

#[test]
fn c2_forest_worked_example() {
    criterion(2, "forest spectrum of the two-shelf example", Some(SMALL), || {
        let s = forest_spectrum(&common::forest_pair(), false).map_err(|e| e.to_string())?;
        let expected = forms(&[
            "x14 + x24 + x34 + x∅",
            "x14 + x24 + x34 + x1 + x2 + x3 + x4 + x∅",
            "x24 + x∅",
            "x24 + x2 + x4 + x∅",
            "x∅",
            "x4 + x∅",
        ]);
        ensure(s.entries.len() == 6, format!("{} entries", s.entries.len()))?;
        ensure(s.multiset() == expected, format!("got {:?}", s.multiset()))?;
        ensure(s.total_multiplicity() == 6, "multiplicities do not sum to 6")?;
        Ok(String::new())
    });
}

#[test]
fn c3_monoid_worked_example() {
    criterion(3, "monoid spectrum, J-classes and characters of the ladder example", Some(MONOID_EXAMPLE), || {
        let s = doab_spectrum(&common::vee_pair(), true).map_err(|e| e.to_string())?;
        let got: Vec<(LinForm, u64)> = s.entries.iter().map(|e| (e.eigenvalue.clone(), e.multiplicity)).collect();
        let expected: Vec<(LinForm, u64)> = [
            ("x14 + x∅", 0),
            ("x14 + x1 + x4 + x∅", 0),
            ("-x14 + x∅", 1),
            ("-x1 - x14 + x4 + x∅", 1),
            ("x14 + x24 + x34 + x∅", 1),
            ("x1 + x2 + x3 + x4 + x14 + x24 + x34 + x∅", 1),
        ]
        .iter()
        .map(|(f, m)| (parse_linform(f).unwrap(), *m))
        .collect();
        ensure(got == expected, format!("got {got:?}"))?;

        // shelf 5 monoid: generators ∂̂∅, ∂̂1, ∂̂2, ∂̂3; shelf 6 is trivial
        let p5 = Poset::new(&[1, 2, 3], &[(1, 2), (1, 3)]).unwrap();
        let m = shelf_monoid(&p5, DEFAULT_CAP).map_err(|e| e.to_string())?;
        let g = m.generators().to_vec();
        let j = j_order(&m);
        let members: Vec<Vec<usize>> = j.classes.iter().map(|c| c.members.clone()).collect();
        ensure(members == vec![vec![g[0], g[1]], vec![g[2], g[3]]], format!("J-classes {members:?}"))?;
        ensure(j.classes[0].idempotent == Some(g[0]) && j.classes[1].idempotent == Some(g[2]), "identities")?;
        let h = j.classes[0].group.as_ref().ok_or("no group for J")?;
        let h2 = j.classes[1].group.as_ref().ok_or("no group for J'")?;
        ensure(h.elements == vec![g[0], g[1]] && h2.elements == vec![g[2]], "maximal subgroups")?;
        let table = |grp| -> Result<Vec<Vec<i64>>, String> {
            let chars = characters(grp).map_err(|e| e.to_string())?;
            Ok(chars.iter().map(|c| (0..grp.order()).map(|x| c.sign(x).unwrap()).collect()).collect())
        };
        ensure(table(h)? == vec![vec![1, 1], vec![1, -1]], "character table of H_J")?;
        ensure(table(h2)? == vec![vec![1]], "character table of H_J'")?;
        ensure(shelf_monoid(&Poset::new(&[4], &[]).unwrap(), DEFAULT_CAP).unwrap().len() == 1, "shelf 6")?;
        Ok(String::new())
    });
}

#[test]
fn c4_split_worked_example() {
    criterion(4, "breaking 2 ≺ 3 splits both eigenvalues; ladder agrees with monoid", Some(SMALL), || {
        let l1 = "x14 + x24 + x34 + x∅";
        let l2 = "x14 + x24 + x34 + x1 + x2 + x3 + x4 + x∅";
        let before = Spectrum::new(
            [l1, l2]
                .iter()
                .map(|f| SpectrumEntry { eigenvalue: parse_linform(f).unwrap(), multiplicity: 1, label: f.to_string() })
                .collect(),
            2,
        );
        let after = extend_spectrum(&before, &common::chain_pair(), BreakPair { shelf: 0, a: 2, b: 3 })
            .map_err(|e| e.to_string())?;
        let expected = forms(&[l1, "-x14 + x∅", l2, "x4 + x∅ - x1 - x14"]);
        ensure(after.multiset() == expected, format!("got {:?}", after.multiset()))?;

        let ladder = ladder_spectrum(&common::vee_pair()).map_err(|e| e.to_string())?;
        let doab = doab_spectrum(&common::vee_pair(), false).map_err(|e| e.to_string())?;
        ensure(ladder.multiset() == doab.multiset(), "ladder and monoid spectra differ")?;
        ensure(ladder.multiset() == expected, "ladder spectrum")?;
        Ok(String::new())
    });
}

#[test]
fn c5_forest_corpus_oracle() {
    criterion(5, "characteristic polynomial identity over the forest corpus", Some(FOREST_CORPUS), || {
        let corpus = common::forest_corpus();
        let mut failures = Vec::new();
        for (name, t) in &corpus {
            let spec = forest_spectrum(t, false).map_err(|e| format!("{name}: {e}"))?;
            let report = verify_spectrum(t, &spec, &Weights::standard(&t.admissible_sets())).map_err(|e| e.to_string())?;
            if !report.passed() || report.weights.len() != 3 {
                failures.push(name.clone());
            }
        }
        ensure(failures.is_empty(), format!("{} failures, first {:?}", failures.len(), failures.first()))?;
        Ok(format!("{} instances", corpus.len()))
    });
}

#[test]
fn c6_ladder_corpus_oracle() {
    criterion(6, "characteristic polynomial identity and doubling over the ladder corpus", Some(LADDER_CORPUS), || {
        let corpus = common::ladder_corpus();
        let mut failures = Vec::new();
        let mut breaks = 0;
        for (name, t) in &corpus {
            let stages = ladder_stages(t).map_err(|e| format!("{name}: {e}"))?;
            let spec = &stages.last().expect("at least the start stage").spectrum;
            let report = verify_spectrum(t, spec, &Weights::standard(&t.admissible_sets())).map_err(|e| e.to_string())?;
            if !report.passed() {
                failures.push(name.clone());
            }
            for st in &stages {
                if let Some(pair) = st.next_break {
                    breaks += 1;
                    if !cross_check_dab(&st.tree, pair).map_err(|e| e.to_string())? {
                        failures.push(format!("{name} dab({},{})", pair.a, pair.b));
                    }
                }
            }
        }
        ensure(failures.is_empty(), format!("{} failures, first {:?}", failures.len(), failures.first()))?;
        Ok(format!("{} instances, {breaks} breaks", corpus.len()))
    });
}

fn abelian(t: &ShelfTree) -> Result<bool, String> {
    let m = full_monoid(t, DEFAULT_CAP).map_err(|e| e.to_string())?;
    let j = j_order(&m);
    Ok(j.classes.iter().filter_map(|c| c.group.as_ref()).all(|g| {
        (0..g.order()).all(|a| (0..g.order()).all(|b| g.table[a][b] == g.table[b][a]))
    }))
}

fn well_formed(s: &Spectrum, n: u128) -> bool {
    s.max_abs_coeff() <= 1 && s.total_multiplicity() as u128 == n
}

#[test]
fn c7_structure() {
    criterion(7, "R-triviality, abelian subgroups, ±1 coefficients, multiplicities sum to N", None, || {
        ensure(!is_r_trivial(&full_monoid(&common::vee_pair(), DEFAULT_CAP).unwrap()), "ladder example is R-trivial")?;
        let mut bad = Vec::new();
        for (name, t) in common::forest_corpus() {
            let m = full_monoid(&t, DEFAULT_CAP).map_err(|e| format!("{name}: {e}"))?;
            if !is_r_trivial(&m) || !well_formed(&forest_spectrum(&t, false).unwrap(), t.state_count()) {
                bad.push(name);
            }
        }
        for (name, t) in common::ladder_corpus() {
            if !abelian(&t)? || !well_formed(&ladder_spectrum(&t).unwrap(), t.state_count()) {
                bad.push(name);
            }
        }
        ensure(bad.is_empty(), format!("{} failures, first {:?}", bad.len(), bad.first()))?;
        Ok(String::new())
    });
}

#[test]
fn c8_negative_controls() {
    criterion(8, "flipped coefficient, unequal depth and bad labelling are rejected", None, || {
        let t = common::forest_pair();
        let mut s = forest_spectrum(&t, false).unwrap();
        let e = s.entries.iter_mut().find(|e| e.eigenvalue.coeff(&LeafSet::new([4])) != 0).unwrap();
        let mut flipped = LinForm::zero();
        for (set, c) in e.eigenvalue.terms() {
            flipped.add_term(set.clone(), if set == &LeafSet::new([4]) { -c } else { c });
        }
        e.eigenvalue = flipped;
        let report = verify_spectrum(&t, &s, &Weights::standard(&t.admissible_sets())).unwrap();
        ensure(!report.passed(), "flipped spectrum verified")?;
        ensure(
            report.checks.iter().filter(|c| !c.passed).all(|c| c.residual.as_deref().is_some_and(|r| !r.is_empty() && r != "0")),
            "failing check without a residual",
        )?;

        let spec = TreeSpec {
            root: "r".into(),
            children: [("r", vec!["a", "u"]), ("u", vec!["b"]), ("a", vec![]), ("b", vec![])]
                .into_iter()
                .map(|(k, v)| (k.to_string(), v.into_iter().map(String::from).collect()))
                .collect(),
        };
        let posets: BTreeMap<String, Poset> =
            [("a".to_string(), Poset::new(&[1], &[]).unwrap()), ("b".to_string(), Poset::new(&[2], &[]).unwrap())]
                .into_iter()
                .collect();
        let err = ShelfTree::new(&spec, &posets).unwrap_err();
        ensure(err.kind() == "UnequalDepth", format!("unequal depth gave {}", err.kind()))?;

        let err = Poset::new(&[1, 2], &[(2, 1)]).unwrap_err();
        ensure(err.kind() == "LabelingError", format!("bad labelling gave {}", err.kind()))?;
        Ok(String::new())
    });
}

/// Not a numbered criterion: the monoid method must reproduce the ladder
/// multiset on every shared instance.
#[test]
fn monoid_method_matches_ladder_on_corpus() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let mut bad = Vec::new();
    for (name, t) in common::ladder_corpus() {
        let doab = doab_spectrum(&t, false).unwrap_or_else(|e| panic!("{name}: {e}"));
        let ladder = ladder_spectrum(&t).unwrap();
        if doab.multiset() != ladder.multiset() || doab.total_multiplicity() as u128 != t.state_count() {
            bad.push(name);
        }
    }
    assert!(bad.is_empty(), "{} mismatches, first {:?}", bad.len(), bad.first());
}
