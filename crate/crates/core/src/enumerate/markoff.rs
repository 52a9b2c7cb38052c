//! Markoff-type equations `Σ xᵢ² = k·∏ xᵢ` over positive integers: Vieta
//! moves, bounded orbits and an exhaustive cross-check.
//!
//! Defaults are `x² + y² + z² = 3xyz` with seed `(1, 1, 1)` and
//! `x² + y² + z² + w² = xyzw` with seed `(2, 2, 2, 2)`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest bound accepted by [`markoff_bruteforce`].
pub const BRUTEFORCE_LIMIT: u64 = 10_000;

/// A tuple sorted in nondecreasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkoffTuple(Vec<BigUint>);

impl MarkoffTuple {
    pub fn new(mut coords: Vec<BigUint>) -> Self {
        coords.sort();
        Self(coords)
    }

    pub fn from_u64(coords: &[u64]) -> Self {
        Self::new(coords.iter().map(|&c| BigUint::from(c)).collect())
    }

    pub fn coords(&self) -> &[BigUint] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn max_coord(&self) -> &BigUint {
        self.0.last().expect("nonempty tuple")
    }

    /// Number of distinct orderings of the coordinates.
    pub fn orderings(&self) -> u64 {
        let fact = |k: usize| (1..=k as u64).product::<u64>();
        let mut n = fact(self.0.len());
        for run in self.0.chunk_by(|a, b| a == b) {
            n /= fact(run.len());
        }
        n
    }

    /// Default length dictionary `2·arccosh(max / 2)`, clamped at 0 for
    /// `max < 2`.
    pub fn length(&self) -> f64 {
        let m = self.max_coord().to_f64().unwrap_or(f64::INFINITY);
        2.0 * (m / 2.0).max(1.0).acosh()
    }
}

impl fmt::Display for MarkoffTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for MarkoffTuple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        // decimal strings keep arbitrary precision in JSON
        let v: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        v.serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkoffConfig {
    pub arity: usize,
    pub coefficient: u64,
    pub seeds: Vec<MarkoffTuple>,
}

impl MarkoffConfig {
    pub fn triples() -> Self {
        Self {
            arity: 3,
            coefficient: 3,
            seeds: vec![MarkoffTuple::from_u64(&[1, 1, 1])],
        }
    }

    pub fn quadruples() -> Self {
        Self {
            arity: 4,
            coefficient: 1,
            seeds: vec![MarkoffTuple::from_u64(&[2, 2, 2, 2])],
        }
    }

    pub fn for_arity(arity: usize) -> Result<Self> {
        match arity {
            3 => Ok(Self::triples()),
            4 => Ok(Self::quadruples()),
            n => Err(Error::UnsupportedArity(n)),
        }
    }

    /// Exact check of `Σ xᵢ² = k·∏ xᵢ`.
    pub fn satisfies(&self, t: &MarkoffTuple) -> bool {
        if t.arity() != self.arity {
            return false;
        }
        let sq: BigUint = t.0.iter().map(|c| c * c).sum();
        let prod: BigUint = t.0.iter().product();
        sq == prod * self.coefficient
    }
}

/// Replaces coordinate `i` (of the sorted tuple) by `k·∏_{j≠i} x_j − x_i`
/// and re-sorts.
pub fn vieta_move(cfg: &MarkoffConfig, t: &MarkoffTuple, i: usize) -> Result<MarkoffTuple> {
    if t.arity() != cfg.arity {
        return Err(Error::UnsupportedArity(t.arity()));
    }
    if i >= t.arity() {
        return Err(Error::InvalidLengths);
    }
    if t.0.iter().any(|c| c.is_zero()) {
        return Err(Error::LeftPositiveCone);
    }
    let others: BigUint =
        t.0.iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, c)| c)
            .product();
    let v = BigInt::from(others * cfg.coefficient) - BigInt::from(t.0[i].clone());
    if !v.is_positive() {
        return Err(Error::LeftPositiveCone);
    }
    let mut c = t.0.clone();
    c[i] = v.to_biguint().expect("positive");
    Ok(MarkoffTuple::new(c))
}

/// Every tuple reachable from the seeds by Vieta moves whose coordinates
/// stay `≤ bound`.
///
/// Pruning is exact: away from the root each tuple has a unique move that
/// lowers its maximum, so every tuple below the bound is reached through
/// tuples below the bound.
pub fn markoff_orbit(cfg: &MarkoffConfig, bound: u64) -> Result<BTreeSet<MarkoffTuple>> {
    if cfg.seeds.is_empty() {
        return Err(Error::NoSeeds);
    }
    for s in &cfg.seeds {
        if !cfg.satisfies(s) {
            return Err(Error::NotOnSurface);
        }
    }
    let b = BigUint::from(bound);
    if cfg.seeds.iter().all(|s| *s.max_coord() > b) {
        return Err(Error::BoundBelowSeeds(bound));
    }
    let mut seen: BTreeSet<MarkoffTuple> = BTreeSet::new();
    let mut queue: VecDeque<MarkoffTuple> = VecDeque::new();
    for s in &cfg.seeds {
        if *s.max_coord() <= b && seen.insert(s.clone()) {
            queue.push_back(s.clone());
        }
    }
    while let Some(t) = queue.pop_front() {
        for i in 0..cfg.arity {
            // equal coordinates give the same image
            if i > 0 && t.0[i] == t.0[i - 1] {
                continue;
            }
            let u = match vieta_move(cfg, &t, i) {
                Ok(u) => u,
                Err(Error::LeftPositiveCone) => continue,
                Err(e) => return Err(e),
            };
            if *u.max_coord() <= b && !seen.contains(&u) {
                seen.insert(u.clone());
                queue.push_back(u);
            }
        }
    }
    Ok(seen)
}

/// All sorted positive solutions with every coordinate `≤ bound`, by direct
/// search: fix all but the largest coordinate and solve the quadratic in it.
pub fn markoff_bruteforce(cfg: &MarkoffConfig, bound: u64) -> Result<BTreeSet<MarkoffTuple>> {
    if bound > BRUTEFORCE_LIMIT {
        return Err(Error::BoundTooLarge(bound, BRUTEFORCE_LIMIT));
    }
    if cfg.arity < 2 {
        return Err(Error::UnsupportedArity(cfg.arity));
    }
    let mut out = BTreeSet::new();
    if bound == 0 {
        return Ok(out);
    }
    let mut prefix = Vec::with_capacity(cfg.arity - 1);
    scan_prefix(cfg, bound, &mut prefix, &mut out);
    Ok(out)
}

fn scan_prefix(cfg: &MarkoffConfig, bound: u64, prefix: &mut Vec<u64>, out: &mut BTreeSet<MarkoffTuple>) {
    let m = cfg.arity - 1;
    if prefix.len() == m {
        solve_last(cfg, bound, prefix, out);
        return;
    }
    let k = cfg.coefficient as u128;
    let lo = prefix.last().copied().unwrap_or(1);
    let partial: u128 = prefix.iter().map(|&c| c as u128).product::<u128>() * k;
    let remaining = (m - prefix.len()) as u32;
    for c in lo..=bound {
        // Either both roots are ≤ bound, forcing k·∏prefix ≤ 2·bound, or the
        // smaller root is the maximum, forcing k·∏(prefix minus its largest
        // entry) ≤ 2m. Both conditions only get harder as c grows.
        let with_c = partial * c as u128;
        let both_small = with_c.saturating_mul((c as u128).saturating_pow(remaining - 1)) <= 2 * bound as u128;
        let small_root = if remaining >= 2 {
            with_c <= 2 * m as u128
        } else {
            partial <= 2 * m as u128
        };
        if !both_small && !small_root {
            break;
        }
        prefix.push(c);
        scan_prefix(cfg, bound, prefix, out);
        prefix.pop();
    }
}

fn solve_last(cfg: &MarkoffConfig, bound: u64, prefix: &[u64], out: &mut BTreeSet<MarkoffTuple>) {
    // w² − (k∏p)·w + Σp² = 0
    let p = BigUint::from(cfg.coefficient) * prefix.iter().map(|&c| BigUint::from(c)).product::<BigUint>();
    let s: BigUint = prefix.iter().map(|&c| BigUint::from(c) * BigUint::from(c)).sum();
    let four_s = &s * 4u32;
    let p2 = &p * &p;
    if p2 < four_s {
        return;
    }
    let disc = p2 - four_s;
    let r = disc.sqrt();
    if &r * &r != disc {
        return;
    }
    let two = BigUint::from(2u32);
    let last = BigUint::from(*prefix.last().unwrap_or(&1));
    let b = BigUint::from(bound);
    let mut roots = vec![&p + &r];
    if p >= r {
        roots.push(&p - &r);
    }
    for twice in roots {
        if (&twice % &two) != BigUint::zero() {
            continue;
        }
        let w = twice / &two;
        if w.is_zero() || w < last || w > b {
            continue;
        }
        let mut c: Vec<BigUint> = prefix.iter().map(|&x| BigUint::from(x)).collect();
        c.push(w);
        out.insert(MarkoffTuple::new(c));
    }
}

/// Counts tuples by the default length dictionary.
pub fn tuple_lengths(tuples: &BTreeSet<MarkoffTuple>) -> Vec<f64> {
    tuples.iter().map(MarkoffTuple::length).collect()
}

/// As [`tuple_lengths`], each sorted tuple repeated once per distinct
/// ordering. Ordered solutions are the nodes of the Vieta tree, one new
/// curve per node, and are what the growth exponent refers to.
pub fn ordered_tuple_lengths(tuples: &BTreeSet<MarkoffTuple>) -> Vec<f64> {
    tuples
        .iter()
        .flat_map(|t| std::iter::repeat_n(t.length(), t.orderings() as usize))
        .collect()
}

/// Least-squares affine map `ℓ_geo ≈ slope·ℓ_tuple + intercept` between the
/// sorted tuple lengths and sorted geodesic lengths, matched by rank over the
/// common prefix. A diagnostic for choosing the length dictionary.
pub fn calibrate_lengths(tuple_lengths: &[f64], geodesic_lengths: &[f64]) -> Option<(f64, f64)> {
    let mut a = tuple_lengths.to_vec();
    let mut b = geodesic_lengths.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let n = a.len().min(b.len());
    if n < 2 {
        return None;
    }
    let (slope, intercept, _) = crate::counting::least_squares(&a[..n], &b[..n]);
    Some((slope, intercept))
}

/// `true` when the tuple is one of the configured seeds or has every
/// coordinate at least 1; used by tests.
pub fn is_positive(t: &MarkoffTuple) -> bool {
    t.0.iter().all(|c| *c >= BigUint::one())
}
