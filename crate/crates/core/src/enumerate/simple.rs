//! Enumeration of simple closed geodesics up to a length bound.
//!
//! Two layers: an exhaustive scan over cyclic words up to a word-length
//! budget, and, on the built-in models, an orbit layer that walks the
//! mapping-class action from the scanned curves (the Dehn twist along the
//! two-sided curve on the one-holed Klein bottle, the Farey tree of the
//! embedded one-holed torus on the three-crosscap surface). Every candidate
//! is tested geometrically. The result is certified when the scan with the
//! budget raised by 2 finds nothing the first pass missed and every
//! simplicity test is certified.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use super::intersect::SimplicityTester;
use crate::counting::CountSeries;
use crate::error::{Error, Result};
use crate::surface::{n3_torus, n3_torus_word, HolonomyRep, ModelName};
use crate::word::{word_classes, Word};

/// Word-ball radius of the simplicity tests.
pub const TEST_RADIUS: usize = 2;

/// Relative tolerance for merging equal lengths when the generators satisfy
/// a relation (different words may then name the same curve).
pub const LENGTH_MERGE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SidedFilter {
    OneSided,
    TwoSided,
    All,
}

impl SidedFilter {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "one" | "one-sided" | "1" | "-" => Ok(SidedFilter::OneSided),
            "two" | "two-sided" | "2" | "+" => Ok(SidedFilter::TwoSided),
            "all" | "any" | "both" => Ok(SidedFilter::All),
            _ => Err(Error::InvalidWord(s.to_string())),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SidedFilter::OneSided => "one-sided",
            SidedFilter::TwoSided => "two-sided",
            SidedFilter::All => "all",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurveRecord {
    #[serde(serialize_with = "as_string")]
    pub word: Word,
    pub one_sided: bool,
    pub length: f64,
    pub self_intersections: usize,
    /// The simplicity test agreed at radius + 2.
    pub certified: bool,
}

fn as_string<S: serde::Serializer>(w: &Word, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&w.to_string())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimpleCurves {
    /// Sorted by length.
    pub records: Vec<CurveRecord>,
    pub l_max: f64,
    pub budget: usize,
    /// The scan at `budget + 2` added nothing new below `l_max`.
    pub saturated: bool,
    /// Curves whose simplicity test did not stabilise.
    pub uncertified_tests: usize,
    pub method: String,
}

impl SimpleCurves {
    pub fn certified(&self) -> bool {
        self.saturated && self.uncertified_tests == 0
    }

    pub fn lengths(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.length).collect()
    }

    pub fn series(&self, label: &str) -> Result<CountSeries> {
        CountSeries::new(self.lengths(), label, self.certified())
    }
}

/// Generator substitution `label ↦ word`.
type Substitution = Vec<(char, Word)>;

enum Walk {
    None,
    Moves(Vec<Substitution>),
    Farey,
}

struct Chart {
    rep: HolonomyRep,
    walk: Walk,
    /// Rewrites a chart word in the generators of the input representation.
    to_input: fn(&Word) -> Word,
}

fn identity_word(w: &Word) -> Word {
    w.clone()
}

fn subst(pairs: &[(char, &str)]) -> Substitution {
    pairs
        .iter()
        .map(|&(c, s)| (c, Word::parse(s).expect("literal word")))
        .collect()
}

/// The Dehn twist along `ab` on the one-holed Klein bottle and its inverse.
pub fn n21_twist_moves() -> [Vec<(char, Word)>; 2] {
    [
        subst(&[('a', "aab"), ('b', "BAb")]),
        subst(&[('a', "aBA"), ('b', "abb")]),
    ]
}

fn chart_for(rep: &HolonomyRep, one_sided: bool) -> Result<Chart> {
    Ok(match (rep.model, one_sided) {
        (Some(ModelName::N21), _) => Chart {
            rep: rep.clone(),
            walk: Walk::Moves(n21_twist_moves().to_vec()),
            to_input: identity_word,
        },
        (Some(ModelName::N3), false) => Chart {
            rep: n3_torus(rep)?,
            walk: Walk::Farey,
            to_input: n3_torus_word,
        },
        _ => Chart {
            rep: rep.clone(),
            walk: Walk::None,
            to_input: identity_word,
        },
    })
}

fn apply(s: &Substitution, w: &Word) -> Word {
    w.substitute(&|c| s.iter().find(|(d, _)| *d == c).map(|(_, v)| v.clone()))
        .canonical()
}

struct Found {
    length: f64,
    certified: bool,
}

struct Searcher<'a> {
    chart: &'a Chart,
    tester: SimplicityTester<'a>,
    one_sided: bool,
    l_max: f64,
}

impl Searcher<'_> {
    /// `Some` when the class matches sidedness, is short enough, is not
    /// peripheral and tests simple.
    fn check(&self, w: &Word) -> Result<Option<Found>> {
        let rep = &self.chart.rep;
        if rep.is_one_sided(w)? != self.one_sided || rep.is_peripheral(w) {
            return Ok(None);
        }
        let length = match rep.length(w) {
            Ok(l) => l,
            // parabolic or elliptic images are not closed geodesics
            Err(_) => return Ok(None),
        };
        if length > self.l_max {
            return Ok(None);
        }
        let (simple, certified) = self.tester.test(w)?;
        Ok(simple.then_some(Found { length, certified }))
    }

    fn scan(&self, words: &[Word]) -> Result<BTreeMap<Word, Found>> {
        let found: Vec<Option<(Word, Found)>> = words
            .par_iter()
            .map(|w| Ok(self.check(w)?.map(|f| (w.clone(), f))))
            .collect::<Result<_>>()?;
        Ok(found.into_iter().flatten().collect())
    }

    fn walk(&self, seeds: &BTreeMap<Word, Found>, out: &mut BTreeMap<Word, Found>) -> Result<()> {
        match &self.chart.walk {
            Walk::None => Ok(()),
            Walk::Moves(moves) => {
                let mut queue: VecDeque<Word> = seeds.keys().cloned().collect();
                while let Some(w) = queue.pop_front() {
                    for m in moves {
                        let v = apply(m, &w);
                        if out.contains_key(&v) || seeds.contains_key(&v) {
                            continue;
                        }
                        if let Some(f) = self.check(&v)? {
                            out.insert(v.clone(), f);
                            queue.push_back(v);
                        }
                    }
                }
                Ok(())
            }
            Walk::Farey => {
                // all slopes: the tree under (x, y) and the one under (x, y⁻¹)
                let labels = self.chart.rep.labels();
                let x = Word::parse(&labels[0].to_string())?;
                let y = Word::parse(&labels[1].to_string())?;
                for w in [x.clone(), y.clone()] {
                    if let Some(f) = self.check(&w)? {
                        out.insert(w.canonical(), f);
                    }
                }
                let mut stack = vec![(x.clone(), y.clone()), (x, y.inverse())];
                while let Some((u, v)) = stack.pop() {
                    let uv = u.concat(&v);
                    // lengths grow down the tree, so a long child ends the branch
                    let l = self.chart.rep.length(&uv)?;
                    if l > self.l_max {
                        continue;
                    }
                    let key = uv.canonical();
                    if let Entry::Vacant(slot) = out.entry(key) {
                        if let Some(f) = self.check(slot.key())? {
                            slot.insert(f);
                        }
                    }
                    stack.push((u, uv.clone()));
                    stack.push((uv, v));
                }
                Ok(())
            }
        }
    }
}

fn merge_by_length(mut v: Vec<CurveRecord>) -> Vec<CurveRecord> {
    v.sort_by(|a, b| a.length.total_cmp(&b.length).then(a.word.len().cmp(&b.word.len())));
    let mut out: Vec<CurveRecord> = Vec::with_capacity(v.len());
    for r in v {
        match out.last() {
            Some(p) if (p.length - r.length).abs() <= LENGTH_MERGE_TOL * r.length.max(1.0) => {}
            _ => out.push(r),
        }
    }
    out
}

struct Part {
    records: Vec<CurveRecord>,
    saturated: bool,
    uncertified: usize,
    method: &'static str,
}

fn enumerate_part(rep: &HolonomyRep, one_sided: bool, l_max: f64, budget: usize) -> Result<Part> {
    let mut chart = chart_for(rep, one_sided)?;
    chart.rep = chart.rep.balanced();
    let searcher = Searcher {
        chart: &chart,
        tester: SimplicityTester::new(&chart.rep, TEST_RADIUS)?,
        one_sided,
        l_max,
    };
    let words = word_classes(&chart.rep.labels(), budget + 2);
    let cut = words.partition_point(|w| w.len() <= budget);
    let first = searcher.scan(&words[..cut])?;
    let extra = searcher.scan(&words[cut..])?;
    let mut walked = BTreeMap::new();
    searcher.walk(&first, &mut walked)?;
    let known: BTreeSet<&Word> = first.keys().chain(walked.keys()).collect();
    let saturated = if chart.rep.free {
        extra.keys().all(|w| known.contains(w))
    } else {
        // words are not unique names; compare lengths instead
        let lengths: Vec<f64> = first.values().chain(walked.values()).map(|f| f.length).collect();
        extra.values().all(|f| {
            lengths
                .iter()
                .any(|l| (l - f.length).abs() <= LENGTH_MERGE_TOL * l.max(1.0))
        })
    };
    let mut all = first;
    all.extend(walked);
    all.extend(extra);
    let mut uncertified = 0;
    let mut records: Vec<CurveRecord> = all
        .into_iter()
        .map(|(w, f)| {
            if !f.certified {
                uncertified += 1;
            }
            CurveRecord {
                word: (chart.to_input)(&w).canonical(),
                one_sided,
                length: f.length,
                self_intersections: 0,
                certified: f.certified,
            }
        })
        .collect();
    if !chart.rep.free {
        records = merge_by_length(records);
    }
    let method = match chart.walk {
        Walk::None => "scan",
        Walk::Moves(_) => "scan+twist-orbit",
        Walk::Farey => "scan+torus-farey",
    };
    Ok(Part {
        records,
        saturated,
        uncertified,
        method,
    })
}

/// All simple closed geodesics of the given sidedness with length `≤ l_max`,
/// peripheral curves excluded.
pub fn enumerate_simple(rep: &HolonomyRep, sided: SidedFilter, l_max: f64, budget: usize) -> Result<SimpleCurves> {
    if budget == 0 {
        return Err(Error::ZeroBudget);
    }
    if !(l_max > 0.0) {
        return Err(Error::InvalidLengths);
    }
    let sides: &[bool] = match sided {
        SidedFilter::OneSided => &[true],
        SidedFilter::TwoSided => &[false],
        SidedFilter::All => &[true, false],
    };
    let mut records = Vec::new();
    let mut saturated = true;
    let mut uncertified = 0;
    let mut methods = Vec::new();
    for &s in sides {
        let p = enumerate_part(rep, s, l_max, budget)?;
        records.extend(p.records);
        saturated &= p.saturated;
        uncertified += p.uncertified;
        methods.push(p.method);
    }
    records.sort_by(|a, b| a.length.total_cmp(&b.length).then_with(|| a.word.cmp(&b.word)));
    methods.dedup();
    Ok(SimpleCurves {
        records,
        l_max,
        budget,
        saturated,
        uncertified_tests: uncertified,
        method: methods.join(","),
    })
}
