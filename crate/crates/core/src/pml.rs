//! Symbolic models of projective measured laminations on the small
//! nonorientable surfaces: the circle `PML(N_{2,1})` with its dihedral action,
//! the splitting `λ = λ⁻ + λ⁺`, the weight vector `w⁻`, ball combinatorics,
//! and tangency of balls on `N_{1,3}` through the Markoff-quadruple tree.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use serde::Serialize;

use crate::enumerate::markoff::{MarkoffConfig, MarkoffTuple};
use crate::error::{Error, Result};

/// Label of the one-sided curve `γ_n` on `N_{2,1}`.
pub fn n21_label(n: i64) -> String {
    format!("g{n}")
}

/// Label of the two-sided curve `γ∞` on `N_{2,1}`.
pub const N21_GAMMA_INF: &str = "ginf";

fn parse_n21_label(s: &str) -> Option<i64> {
    s.strip_prefix('g')?.parse().ok()
}

/// A point of `PML(N_{2,1})`: `γ∞` or `[u·γ_n + v·γ_{n+1}]` with `u, v ≥ 0`
/// not both zero. Stored unnormalised so the dihedral action is exact;
/// `γ_{n+1}` is stored as `(n+1, v, 0)`, never as `(n, 0, v)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum PmlN21Point {
    GammaInf,
    Arc { n: i64, u: f64, v: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum N21Generator {
    Twist,
    Reflect,
}

impl PmlN21Point {
    /// `[t·γ_n + (1−t)·γ_{n+1}]` for `t ∈ [0, 1]`.
    pub fn arc(n: i64, t: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidLamination(format!("arc parameter {t} outside [0, 1]")));
        }
        Ok(Self::Arc { n, u: t, v: 1.0 - t }.normalized())
    }

    /// The one-sided curve `γ_n`.
    pub fn gamma(n: i64) -> Self {
        Self::Arc { n, u: 1.0, v: 0.0 }
    }

    fn normalized(self) -> Self {
        match self {
            Self::Arc { n, u: 0.0, v } => Self::Arc { n: n + 1, u: v, v: 0.0 },
            p => p,
        }
    }

    /// `t = u/(u+v)`, or `None` at `γ∞`.
    pub fn t(&self) -> Option<f64> {
        match *self {
            Self::GammaInf => None,
            Self::Arc { u, v, .. } => Some(u / (u + v)),
        }
    }

    /// Index `n` when the point is a single curve `γ_n`.
    pub fn curve_index(&self) -> Option<i64> {
        match *self {
            Self::Arc { n, v: 0.0, .. } => Some(n),
            _ => None,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == N21_GAMMA_INF {
            return Ok(Self::GammaInf);
        }
        if let Some(n) = parse_n21_label(s) {
            return Ok(Self::gamma(n));
        }
        let bad = || Error::InvalidLamination(format!("cannot parse point '{s}' (use inf, g<n> or <n>:<t>)"));
        let (n, t) = s.split_once(':').ok_or_else(bad)?;
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let t: f64 = t.trim().parse().map_err(|_| bad())?;
        Self::arc(n, t)
    }
}

impl fmt::Display for PmlN21Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::GammaInf => write!(f, "{N21_GAMMA_INF}"),
            Self::Arc { n, .. } if self.curve_index().is_some() => write!(f, "{}", n21_label(*n)),
            Self::Arc { n, .. } => write!(f, "{n}:{}", self.t().unwrap_or(f64::NAN)),
        }
    }
}

/// Twist: `(n, t) ↦ (n+1, t)`. Reflect: `(n, t) ↦ (−n−1, 1−t)`. Both fix
/// `γ∞`.
pub fn n21_act(g: N21Generator, p: PmlN21Point) -> PmlN21Point {
    match p {
        PmlN21Point::GammaInf => p,
        PmlN21Point::Arc { n, u, v } => match g {
            N21Generator::Twist => PmlN21Point::Arc { n: n + 1, u, v },
            N21Generator::Reflect => PmlN21Point::Arc { n: -n - 1, u: v, v: u }.normalized(),
        },
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ClosureKind {
    /// The orbit is finite and closed.
    Finite,
    /// `{γ_n : n ∈ Z} ∪ {γ∞}`.
    OneSidedCurves,
    /// The orbit of an interior arc point, accumulating only at `γ∞`.
    ArcOrbit,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitClosure {
    pub kind: ClosureKind,
    /// Orbit points reached by group elements `twist^m` and
    /// `twist^m ∘ reflect` with `|m| ≤ depth`, sorted.
    pub orbit: Vec<PmlN21Point>,
    pub accumulation: Vec<PmlN21Point>,
    pub depth: u64,
}

fn point_key(p: &PmlN21Point) -> (i64, u64) {
    match *p {
        PmlN21Point::GammaInf => (i64::MAX, 0),
        PmlN21Point::Arc { n, .. } => (n, p.t().unwrap_or(0.0).to_bits()),
    }
}

pub fn n21_orbit_closure(p: PmlN21Point, depth: u64) -> Result<OrbitClosure> {
    if depth == 0 {
        return Err(Error::ZeroBudget);
    }
    if p == PmlN21Point::GammaInf {
        return Ok(OrbitClosure {
            kind: ClosureKind::Finite,
            orbit: vec![p],
            accumulation: vec![],
            depth,
        });
    }
    let d = depth as i64;
    let mut pts: BTreeMap<(i64, u64), PmlN21Point> = BTreeMap::new();
    for base in [p, n21_act(N21Generator::Reflect, p)] {
        for m in -d..=d {
            let q = shift(base, m);
            pts.insert(point_key(&q), q);
        }
    }
    let kind = if p.curve_index().is_some() {
        ClosureKind::OneSidedCurves
    } else {
        ClosureKind::ArcOrbit
    };
    Ok(OrbitClosure {
        kind,
        orbit: pts.into_values().collect(),
        accumulation: vec![PmlN21Point::GammaInf],
        depth,
    })
}

/// `twist^m`.
fn shift(p: PmlN21Point, m: i64) -> PmlN21Point {
    match p {
        PmlN21Point::GammaInf => p,
        PmlN21Point::Arc { n, u, v } => PmlN21Point::Arc { n: n + m, u, v },
    }
}

/// Finite sum of weighted one-sided curves plus an opaque two-sided part.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymbolicLamination {
    pub atoms: BTreeMap<String, f64>,
    pub plus_part: Option<(String, f64)>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Multicurve {
    pub components: BTreeMap<String, f64>,
}

impl Multicurve {
    pub fn new(components: impl IntoIterator<Item = (String, f64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (c, w) in components {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidLamination(format!("weight {w} on {c}")));
            }
            if map.insert(c.clone(), w).is_some() {
                return Err(Error::InvalidLamination(format!("repeated component {c}")));
            }
        }
        Ok(Self { components: map })
    }

    pub fn single(label: &str, weight: f64) -> Result<Self> {
        Self::new([(label.to_string(), weight)])
    }

    pub fn support(&self) -> BTreeSet<String> {
        self.components.keys().cloned().collect()
    }
}

impl SymbolicLamination {
    pub fn new(atoms: BTreeMap<String, f64>, plus_part: Option<(String, f64)>) -> Result<Self> {
        for (c, w) in atoms.iter().chain(plus_part.as_ref().map(|(c, w)| (c, w))) {
            if !(*w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidLamination(format!("weight {w} on {c}")));
            }
        }
        Ok(Self { atoms, plus_part })
    }

    /// As [`SymbolicLamination::new`], also checking that the atoms are
    /// pairwise disjoint.
    pub fn with_oracle(
        atoms: BTreeMap<String, f64>,
        plus_part: Option<(String, f64)>,
        oracle: &dyn IntersectionOracle,
    ) -> Result<Self> {
        let keys: Vec<&String> = atoms.keys().collect();
        for (i, a) in keys.iter().enumerate() {
            for b in &keys[i + 1..] {
                if oracle.intersection(a, b)? > 0 {
                    return Err(Error::InvalidLamination(format!("{a} and {b} intersect")));
                }
            }
        }
        Self::new(atoms, plus_part)
    }

    /// Relabels one-sided atoms.
    pub fn relabel(&self, f: &dyn Fn(&str) -> String) -> Self {
        Self {
            atoms: self.atoms.iter().map(|(c, w)| (f(c), *w)).collect(),
            plus_part: self.plus_part.clone(),
        }
    }
}

/// `λ ↦ (λ⁻, λ⁺)`.
pub fn decompose(l: &SymbolicLamination) -> (Multicurve, Option<(String, f64)>) {
    (
        Multicurve {
            components: l.atoms.clone(),
        },
        l.plus_part.clone(),
    )
}

/// Inverse of [`decompose`].
pub fn recombine(minus: &Multicurve, plus: Option<(String, f64)>) -> SymbolicLamination {
    SymbolicLamination {
        atoms: minus.components.clone(),
        plus_part: plus,
    }
}

/// Atom weights in nonincreasing order, zero-padded to length `genus`.
pub fn w_minus(l: &SymbolicLamination, genus: usize) -> Result<Vec<f64>> {
    if l.atoms.len() > genus {
        return Err(Error::TooManyOneSided {
            atoms: l.atoms.len(),
            genus,
        });
    }
    let mut w: Vec<f64> = l.atoms.values().copied().collect();
    w.sort_by(|a, b| b.total_cmp(a));
    w.resize(genus, 0.0);
    Ok(w)
}

/// Geometric intersection numbers between labelled curves.
pub trait IntersectionOracle {
    /// `i(a, b)`; errors when the pair is unknown.
    fn intersection(&self, a: &str, b: &str) -> Result<u64>;
}

/// Oracle backed by an explicit table of unordered pairs.
#[derive(Clone, Debug, Default)]
pub struct TableOracle {
    table: BTreeMap<(String, String), u64>,
}

impl TableOracle {
    pub fn insert(&mut self, a: &str, b: &str, i: u64) {
        let key = if a <= b {
            (a.into(), b.into())
        } else {
            (b.into(), a.into())
        };
        self.table.insert(key, i);
    }
}

impl IntersectionOracle for TableOracle {
    fn intersection(&self, a: &str, b: &str) -> Result<u64> {
        if a == b {
            return Ok(0);
        }
        let key = if a <= b {
            (a.to_string(), b.to_string())
        } else {
            (b.to_string(), a.to_string())
        };
        self.table
            .get(&key)
            .copied()
            .ok_or_else(|| Error::OracleIncomplete(key.0.clone(), key.1.clone()))
    }
}

/// One-sided curves of `N_{2,1}`: `γ_n` and `γ_m` are disjoint exactly when
/// `|n − m| ≤ 1`, the pairs spanning the arcs of the circle. The count
/// `|n − m| − 1` is used as the positive value.
#[derive(Clone, Copy, Debug, Default)]
pub struct N21Oracle;

impl IntersectionOracle for N21Oracle {
    fn intersection(&self, a: &str, b: &str) -> Result<u64> {
        let n = parse_n21_label(a).ok_or_else(|| Error::UnknownCurve(a.into()))?;
        let m = parse_n21_label(b).ok_or_else(|| Error::UnknownCurve(b.into()))?;
        Ok((n - m).unsigned_abs().saturating_sub(1))
    }
}

/// A ball `B(γ)` is determined by the support of `γ`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Ball {
    pub support: BTreeSet<String>,
}

impl Ball {
    pub fn of(m: &Multicurve) -> Self {
        Self { support: m.support() }
    }
}

/// `B(γ) ∩ B(δ)`: empty if some component of `γ` crosses some component of
/// `δ`, otherwise `B(γ + δ)`.
pub fn ball_intersect(a: &Ball, b: &Ball, oracle: &dyn IntersectionOracle) -> Result<Option<Ball>> {
    let mut disjoint = true;
    // query every pair so a missing entry is always reported
    for x in &a.support {
        for y in &b.support {
            if x != y && oracle.intersection(x, y)? > 0 {
                disjoint = false;
            }
        }
    }
    Ok(disjoint.then(|| Ball {
        support: a.support.union(&b.support).cloned().collect(),
    }))
}

/// [`ball_intersect`] on multicurves.
pub fn ball_intersect_multicurves(
    g: &Multicurve,
    d: &Multicurve,
    oracle: &dyn IntersectionOracle,
) -> Result<Option<Ball>> {
    ball_intersect(&Ball::of(g), &Ball::of(d), oracle)
}

/// Position of a lamination of `N_3` relative to the circle `PML(T)`, where
/// `T` is the one-holed torus complementary to the distinguished one-sided
/// geodesic `γ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum N3Side {
    /// No one-sided leaf: contained in `T`.
    TorusCircle,
    /// `[γ + λ]` with `λ ⊂ T`.
    GammaDisk,
    /// `i(γ, ·) > 0`: carries a one-sided leaf other than `γ`.
    CrossingDisk,
}

pub fn n3_side(l: &SymbolicLamination, gamma: &str) -> N3Side {
    if l.atoms.keys().any(|c| c != gamma) {
        N3Side::CrossingDisk
    } else if l.atoms.contains_key(gamma) {
        N3Side::GammaDisk
    } else {
        N3Side::TorusCircle
    }
}

/// The Markoff-quadruple tree with curve identities: each node is a
/// quadruple of curve ids, and a Vieta move on slot `j` replaces that curve by
/// a new one while the other three persist.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct N13Orbit {
    pub nodes: Vec<[usize; 4]>,
    /// Coordinate value carried by each curve.
    #[serde(serialize_with = "values_as_strings")]
    pub values: Vec<BigUint>,
    pub depth: usize,
}

fn values_as_strings<S: serde::Serializer>(v: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::Serialize as _;
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().serialize(s)
}

impl N13Orbit {
    /// Tree of depth `depth` from the configured (single) seed.
    pub fn build(cfg: &MarkoffConfig, depth: usize) -> Result<Self> {
        if cfg.arity != 4 {
            return Err(Error::UnsupportedArity(cfg.arity));
        }
        let seed = cfg.seeds.first().ok_or(Error::NoSeeds)?;
        if !cfg.satisfies(seed) {
            return Err(Error::NotOnSurface);
        }
        let k = BigUint::from(cfg.coefficient);
        let mut values: Vec<BigUint> = seed.coords().to_vec();
        let mut nodes = vec![[0, 1, 2, 3]];
        // (node, slot that created it)
        let mut frontier: Vec<(usize, Option<usize>)> = vec![(0, None)];
        for _ in 0..depth {
            let mut next = Vec::new();
            for &(idx, came_from) in &frontier {
                let node = nodes[idx];
                for j in 0..4 {
                    if Some(j) == came_from {
                        continue;
                    }
                    let others: BigUint = (0..4).filter(|&i| i != j).map(|i| &values[node[i]]).product();
                    let v = &k * others - &values[node[j]];
                    values.push(v);
                    let mut child = node;
                    child[j] = values.len() - 1;
                    nodes.push(child);
                    next.push((nodes.len() - 1, Some(j)));
                }
            }
            frontier = next;
        }
        Ok(Self { nodes, values, depth })
    }

    pub fn curve_count(&self) -> usize {
        self.values.len()
    }

    /// The sorted tuple at a node.
    pub fn tuple(&self, node: usize) -> MarkoffTuple {
        MarkoffTuple::new(self.nodes[node].iter().map(|&c| self.values[c].clone()).collect())
    }

    /// Curve occupying `slot` of `node`.
    pub fn slot(&self, node: usize, slot: usize) -> Result<usize> {
        self.nodes
            .get(node)
            .and_then(|n| n.get(slot))
            .copied()
            .ok_or_else(|| Error::UnknownCurve(format!("node {node} slot {slot}")))
    }

    /// Edges `{γ, δ}` of the co-membership graph.
    pub fn tangency_edges(&self) -> BTreeSet<(usize, usize)> {
        let mut e = BTreeSet::new();
        for n in &self.nodes {
            for i in 0..4 {
                for j in i + 1..4 {
                    e.insert((n[i].min(n[j]), n[i].max(n[j])));
                }
            }
        }
        e
    }

    pub fn tangency_graph_connected(&self) -> bool {
        let n = self.curve_count();
        let mut adj = vec![Vec::new(); n];
        for (a, b) in self.tangency_edges() {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Balls of two curves are tangent iff the curves sit together in some
/// quadruple. A curve is never tangent to itself.
pub fn n13_tangency(a: usize, b: usize, orbit: &N13Orbit) -> Result<bool> {
    for c in [a, b] {
        if c >= orbit.curve_count() {
            return Err(Error::UnknownCurve(format!("curve {c}")));
        }
    }
    if a == b {
        return Ok(false);
    }
    Ok(orbit.nodes.iter().any(|n| n.contains(&a) && n.contains(&b)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n21_action_examples() {
        use N21Generator::*;
        assert_eq!(n21_act(Twist, PmlN21Point::gamma(0)), PmlN21Point::gamma(1));
        assert_eq!(
            n21_act(Twist, PmlN21Point::arc(0, 1.0).unwrap()),
            PmlN21Point::arc(1, 1.0).unwrap()
        );
        assert_eq!(n21_act(Twist, PmlN21Point::GammaInf), PmlN21Point::GammaInf);
        let p = PmlN21Point::arc(3, 0.3).unwrap();
        assert_eq!(n21_act(Reflect, n21_act(Reflect, p)), p);
        // reflect sends γ_n to γ_{−n}
        assert_eq!(n21_act(Reflect, PmlN21Point::gamma(2)), PmlN21Point::gamma(-2));
        assert_eq!(PmlN21Point::arc(0, 0.0).unwrap(), PmlN21Point::gamma(1));
    }

    #[test]
    fn parse_points() {
        assert_eq!(PmlN21Point::parse("inf").unwrap(), PmlN21Point::GammaInf);
        assert_eq!(PmlN21Point::parse("g-3").unwrap(), PmlN21Point::gamma(-3));
        assert_eq!(PmlN21Point::parse("0:0.3").unwrap(), PmlN21Point::arc(0, 0.3).unwrap());
        assert!(PmlN21Point::parse("0:1.5").is_err());
        assert!(PmlN21Point::parse("x").is_err());
    }

    #[test]
    fn closures() {
        let c = n21_orbit_closure(PmlN21Point::gamma(0), 5).unwrap();
        assert_eq!(c.kind, ClosureKind::OneSidedCurves);
        assert_eq!(c.accumulation, vec![PmlN21Point::GammaInf]);
        assert!(c.orbit.iter().all(|p| p.curve_index().is_some()));
        assert_eq!(c.orbit.len(), 11);
        let c = n21_orbit_closure(PmlN21Point::GammaInf, 5).unwrap();
        assert_eq!(c.kind, ClosureKind::Finite);
        assert_eq!(c.orbit, vec![PmlN21Point::GammaInf]);
        let c = n21_orbit_closure(PmlN21Point::arc(0, 0.3).unwrap(), 1000).unwrap();
        assert_eq!(c.kind, ClosureKind::ArcOrbit);
        assert!(!c.orbit.contains(&PmlN21Point::GammaInf));
        assert!(c.orbit.iter().all(|p| p.curve_index().is_none()));
        assert!(n21_orbit_closure(PmlN21Point::gamma(0), 0).is_err());
    }

    #[test]
    fn decomposition_and_weights() {
        let atoms: BTreeMap<String, f64> = [("g1".to_string(), 2.0)].into_iter().collect();
        let l = SymbolicLamination::new(atoms.clone(), Some(("plus".into(), 1.0))).unwrap();
        let (m, p) = decompose(&l);
        assert_eq!(m.components, atoms);
        assert_eq!(recombine(&m, p), l);
        let l = SymbolicLamination::new(BTreeMap::new(), Some(("plus".into(), 1.0))).unwrap();
        assert!(decompose(&l).0.components.is_empty());
        let atoms: BTreeMap<String, f64> = [("a".to_string(), 1.0), ("b".to_string(), 3.0)].into_iter().collect();
        let l = SymbolicLamination::new(atoms, None).unwrap();
        assert_eq!(decompose(&l).1, None);
        assert_eq!(w_minus(&l, 3).unwrap(), vec![3.0, 1.0, 0.0]);
        assert_eq!(
            w_minus(&l, 1).unwrap_err(),
            Error::TooManyOneSided { atoms: 2, genus: 1 }
        );
        let empty = SymbolicLamination::new(BTreeMap::new(), None).unwrap();
        assert_eq!(w_minus(&empty, 2).unwrap(), vec![0.0, 0.0]);
        assert!(SymbolicLamination::new([("a".to_string(), -1.0)].into_iter().collect(), None).is_err());
    }

    #[test]
    fn oracle_checks_disjointness() {
        let atoms: BTreeMap<String, f64> = [(n21_label(0), 1.0), (n21_label(1), 2.0)].into_iter().collect();
        assert!(SymbolicLamination::with_oracle(atoms, None, &N21Oracle).is_ok());
        let atoms: BTreeMap<String, f64> = [(n21_label(0), 1.0), (n21_label(2), 2.0)].into_iter().collect();
        assert!(SymbolicLamination::with_oracle(atoms, None, &N21Oracle).is_err());
    }

    #[test]
    fn balls() {
        let g0 = Multicurve::single("g0", 1.0).unwrap();
        let g1 = Multicurve::single("g1", 2.0).unwrap();
        let g5 = Multicurve::single("g5", 1.0).unwrap();
        let b = ball_intersect_multicurves(&g0, &g1, &N21Oracle).unwrap().unwrap();
        assert_eq!(b.support.len(), 2);
        assert_eq!(ball_intersect_multicurves(&g0, &g5, &N21Oracle).unwrap(), None);
        assert_eq!(
            ball_intersect_multicurves(&g0, &g0, &N21Oracle).unwrap(),
            Some(Ball::of(&g0))
        );
        let mut t = TableOracle::default();
        t.insert("a", "b", 0);
        let a = Multicurve::single("a", 1.0).unwrap();
        let c = Multicurve::single("c", 1.0).unwrap();
        assert_eq!(
            ball_intersect_multicurves(&a, &c, &t).unwrap_err(),
            Error::OracleIncomplete("a".into(), "c".into())
        );
    }

    #[test]
    fn n3_sides() {
        let l = |a: &[&str]| {
            SymbolicLamination::new(
                a.iter().map(|s| (s.to_string(), 1.0)).collect(),
                Some(("t".into(), 1.0)),
            )
            .unwrap()
        };
        assert_eq!(n3_side(&l(&[]), "abc"), N3Side::TorusCircle);
        assert_eq!(n3_side(&l(&["abc"]), "abc"), N3Side::GammaDisk);
        assert_eq!(n3_side(&l(&["a"]), "abc"), N3Side::CrossingDisk);
    }

    #[test]
    fn n13_tree() {
        let o = N13Orbit::build(&MarkoffConfig::quadruples(), 3).unwrap();
        let cfg = MarkoffConfig::quadruples();
        assert!((0..o.nodes.len()).all(|i| cfg.satisfies(&o.tuple(i))));
        let root = o.nodes[0];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(n13_tangency(root[i], root[j], &o).unwrap(), i != j);
            }
        }
        assert!(o.tangency_graph_connected());
        assert!(n13_tangency(0, 10_000, &o).is_err());
        // slot 0 replaced below node 1 and, separately, below node 2: the
        // two new curves live in disjoint subtrees
        let a = o.nodes[1][0];
        let b = o.nodes[8][0];
        assert!(a > 3 && b > 3 && a != b);
        assert!(!n13_tangency(a, b, &o).unwrap());
    }
}
