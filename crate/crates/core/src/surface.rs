//! Hyperbolic structures on small nonorientable surfaces, built from pairs of
//! pants and crosscaps.
//!
//! Sign convention for a pair of pants with generators `x`, `y`: all three of
//! `tr x`, `tr y` and `tr xy` are negative. With this choice the three boundary
//! axes are pairwise disjoint and `(xy)⁻¹` is the third boundary.

use std::fmt;

use crate::error::{Error, Result};
use crate::hypgeo::{BoundaryPoint, Isometry, Translation};
use crate::word::{word_classes, Word};

/// Residual allowed on relation words.
pub const RELATION_TOL: f64 = 1e-8;

/// Allowed mismatch between a capped boundary and twice the core length.
pub const CAP_LENGTH_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceDescriptor {
    pub orientable: bool,
    /// Genus (number of crosscaps when nonorientable).
    pub genus: usize,
    /// Number of punctures plus boundary components.
    pub r: usize,
    pub boundary_lengths: Vec<f64>,
}

impl SurfaceDescriptor {
    pub fn nonorientable(genus: usize, boundary_lengths: Vec<f64>) -> Self {
        Self {
            orientable: false,
            genus,
            r: boundary_lengths.len(),
            boundary_lengths,
        }
    }

    pub fn orientable(genus: usize, boundary_lengths: Vec<f64>) -> Self {
        Self {
            orientable: true,
            genus,
            r: boundary_lengths.len(),
            boundary_lengths,
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        let (g, r) = (self.genus as i64, self.r as i64);
        if self.orientable {
            2 - 2 * g - r
        } else {
            2 - g - r
        }
    }

    /// Dimension of the space of measured laminations.
    pub fn dim_ml(&self) -> i64 {
        let (g, r) = (self.genus as i64, self.r as i64);
        if self.orientable {
            6 * g - 6 + 2 * r
        } else {
            3 * g - 6 + 2 * r
        }
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.euler_characteristic() < 0
    }
}

/// Fenchel–Nielsen data of a builtin model.
#[derive(Clone, Debug, PartialEq)]
pub struct FnData {
    /// `(label, length, twist)` of the interior two-sided pants curves.
    pub pants_curves: Vec<(String, f64, f64)>,
    /// `(label, core length)` of the crosscaps.
    pub crosscap_cores: Vec<(char, f64)>,
    /// Human-readable gluing description.
    pub gluing: String,
}

/// A named boundary curve and its expected length.
#[derive(Clone, Debug, PartialEq)]
pub struct Peripheral {
    pub name: String,
    pub word: Word,
    pub length: f64,
}

/// Holonomy of a surface group: generator images plus the words that must
/// evaluate to the identity.
#[derive(Clone, Debug)]
pub struct HolonomyRep {
    generators: Vec<(char, Isometry)>,
    pub relation_words: Vec<Word>,
    pub peripheral: Vec<Peripheral>,
    pub surface: SurfaceDescriptor,
    pub fn_data: Option<FnData>,
    /// True when the generators form a free basis of the fundamental group.
    pub free: bool,
    /// Set for the built-in models; enables their orbit enumeration.
    pub model: Option<ModelName>,
}

impl HolonomyRep {
    pub fn new(
        generators: Vec<(char, Isometry)>,
        relation_words: Vec<Word>,
        surface: SurfaceDescriptor,
    ) -> Result<Self> {
        for (i, (c, _)) in generators.iter().enumerate() {
            if !c.is_ascii_lowercase() {
                return Err(Error::UnknownGenerator(*c));
            }
            if generators[..i].iter().any(|(d, _)| d == c) {
                return Err(Error::DuplicateGenerator(*c));
            }
        }
        let free = relation_words.is_empty();
        Ok(Self {
            generators,
            relation_words,
            peripheral: Vec::new(),
            surface,
            fn_data: None,
            free,
            model: None,
        })
    }

    pub fn labels(&self) -> Vec<char> {
        self.generators.iter().map(|(c, _)| *c).collect()
    }

    pub fn generators(&self) -> &[(char, Isometry)] {
        &self.generators
    }

    pub fn generator(&self, label: char) -> Result<Isometry> {
        self.generators
            .iter()
            .find(|(c, _)| *c == label)
            .map(|(_, m)| *m)
            .ok_or(Error::UnknownGenerator(label))
    }

    /// Labels whose holonomy reverses orientation.
    pub fn one_sided_labels(&self) -> Vec<char> {
        self.generators
            .iter()
            .filter(|(_, m)| m.reverses_orientation())
            .map(|(c, _)| *c)
            .collect()
    }

    pub fn holonomy(&self, w: &Word) -> Result<Isometry> {
        holonomy_of_word(self, w)
    }

    pub fn length(&self, w: &Word) -> Result<f64> {
        curve_length(self, w)
    }

    /// True when the word's holonomy reverses orientation.
    pub fn is_one_sided(&self, w: &Word) -> Result<bool> {
        let labels = self.one_sided_labels();
        for l in w.letters() {
            self.generator(l.label)?;
        }
        Ok(w.count_labels(&labels) % 2 == 1)
    }

    /// True when the word is conjugate (up to inversion) to a boundary curve
    /// or a power of one.
    pub fn is_peripheral(&self, w: &Word) -> bool {
        let c = w.canonical();
        self.peripheral.iter().any(|p| {
            let pc = p.word.canonical();
            !pc.is_empty() && c.len().is_multiple_of(pc.len()) && {
                let k = c.len() / pc.len();
                pc.pow(k).canonical() == c
            }
        })
    }

    /// Largest relation residual (distance of the relation holonomy to ±I).
    pub fn relation_residual(&self) -> Result<f64> {
        let mut worst = 0.0f64;
        for r in &self.relation_words {
            worst = worst.max(self.holonomy(r)?.identity_residual());
        }
        Ok(worst)
    }

    /// Largest deviation of a boundary curve length from its expected value.
    pub fn peripheral_residual(&self) -> Result<f64> {
        let mut worst = 0.0f64;
        for p in &self.peripheral {
            worst = worst.max((self.length(&p.word)? - p.length).abs());
        }
        Ok(worst)
    }

    /// Same representation with generators listed in a different order.
    pub fn permuted(&self, order: &[usize]) -> HolonomyRep {
        let mut out = self.clone();
        out.generators = order.iter().map(|&i| self.generators[i]).collect();
        out
    }

    /// Conjugates every generator by `h`.
    pub fn conjugated(&self, h: &Isometry) -> HolonomyRep {
        let mut out = self.clone();
        for g in &mut out.generators {
            g.1 = h.conjugate(&g.1);
        }
        out
    }

    /// Sum of `‖g‖²` (Frobenius) over the generators: `2·Σ cosh d(i, g·i)`.
    pub fn spread(&self) -> f64 {
        self.generators
            .iter()
            .map(|(_, g)| g.entries().iter().map(|e| e * e).sum::<f64>())
            .sum()
    }

    /// Conjugate moving the point that minimises the generator displacement
    /// sum to `i`. Long products are then computed with the smallest entries,
    /// which keeps fixed points of long words accurate.
    pub fn balanced(&self) -> HolonomyRep {
        let mut h = Isometry::identity();
        let mut best = self.spread();
        let mut step = 1.0;
        while step > 1e-7 {
            let mut improved = false;
            for m in [
                Isometry::axial_translation(step),
                Isometry::axial_translation(-step),
                Isometry::horizontal(step),
                Isometry::horizontal(-step),
            ] {
                let cand = h.compose(&m);
                let f = self.conjugated(&cand.inverse()).spread();
                if f < best {
                    best = f;
                    h = cand;
                    improved = true;
                    break;
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        self.conjugated(&h.inverse())
    }

    fn with_generator(&self, label: char, m: Isometry) -> Result<HolonomyRep> {
        if self.generators.iter().any(|(c, _)| *c == label) {
            return Err(Error::DuplicateGenerator(label));
        }
        if !label.is_ascii_lowercase() {
            return Err(Error::UnknownGenerator(label));
        }
        let mut out = self.clone();
        out.generators.push((label, m));
        out.model = None;
        Ok(out)
    }
}

impl fmt::Display for HolonomyRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (c, m) in &self.generators {
            let [a, b, cc, d] = m.entries();
            writeln!(f, "{c}: [[{a:.12}, {b:.12}], [{cc:.12}, {d:.12}]]")?;
        }
        Ok(())
    }
}

/// Pants group with boundary lengths `l1`, `l2`, `l3` on `x`, `y`, `(xy)⁻¹`.
pub fn build_pants(l1: f64, l2: f64, l3: f64) -> Result<HolonomyRep> {
    for l in [l1, l2, l3] {
        if !(l > 0.0) || !l.is_finite() {
            return Err(Error::InvalidPantsLength(l));
        }
    }
    let (x, y, _) = pants_matrices(l1, l2, l3);
    let mut rep = HolonomyRep::new(
        vec![('x', x), ('y', y)],
        Vec::new(),
        SurfaceDescriptor::orientable(0, vec![l1, l2, l3]),
    )?;
    rep.peripheral = vec![
        Peripheral {
            name: "x".into(),
            word: Word::parse("x")?,
            length: l1,
        },
        Peripheral {
            name: "y".into(),
            word: Word::parse("y")?,
            length: l2,
        },
        Peripheral {
            name: "(xy)^-1".into(),
            word: Word::parse("YX")?,
            length: l3,
        },
    ];
    Ok(rep)
}

/// `(X, Y, (XY)⁻¹)` for the given boundary lengths.
fn pants_matrices(l1: f64, l2: f64, l3: f64) -> (Isometry, Isometry, Isometry) {
    let lam = (0.5 * l1).exp();
    let ty = 2.0 * (0.5 * l2).cosh();
    let tz = 2.0 * (0.5 * l3).cosh();
    // Y = [[a, 1], [a·d − 1, d]] with a + d = −ty and λa + d/λ = tz, which
    // makes tr(XY) = −tz for X = −diag(λ, 1/λ).
    let a = (tz + ty / lam) / (lam - lam.recip());
    let d = -ty - a;
    let xm = Isometry::new(-lam, 0.0, 0.0, -lam.recip()).expect("diagonal");
    let ym = Isometry::new(a, 1.0, a * d - 1.0, d).expect("unimodular");
    let zm = xm.compose(&ym).inverse();
    (xm, ym, zm)
}

/// Glide reflection `g` with `g² = ±b`, sharing the axis of `b`.
pub fn glide_root(b: &Isometry) -> Result<Isometry> {
    if b.reverses_orientation() {
        return Err(Error::CapNonGeodesic);
    }
    match b.translation_length()? {
        Translation::Hyperbolic(_) => {}
        _ => return Err(Error::CapNonGeodesic),
    }
    let (rep, att) = b.axis_endpoints()?;
    let [mut a, _, _, mut d] = b.entries();
    if a + d < 0.0 {
        a = -a;
        d = -d;
    }
    let tr = a + d;
    // eigenvalue μ > 1 belongs to the attracting fixed point
    let mu = 0.5 * (tr + ((tr - 2.0) * (tr + 2.0)).sqrt());
    let col = |p: BoundaryPoint| match p {
        BoundaryPoint::Finite(x) => (x, 1.0),
        BoundaryPoint::Infinity => (1.0, 0.0),
    };
    let (p11, p21) = col(att);
    let (p12, p22) = col(rep);
    let frame = Isometry::new(p11, p12, p21, p22)?;
    let s = mu.sqrt();
    let core = Isometry::new(s, 0.0, 0.0, -s.recip())?;
    Ok(frame.compose(&core).compose(&frame.inverse()))
}

/// Hyperbolic translation by `t` along the axis of a hyperbolic `b`, in the
/// direction of `b`.
pub fn translation_along(b: &Isometry, t: f64) -> Result<Isometry> {
    let (rep, att) = b.axis_endpoints()?;
    let col = |p: BoundaryPoint| match p {
        BoundaryPoint::Finite(x) => (x, 1.0),
        BoundaryPoint::Infinity => (1.0, 0.0),
    };
    let (p11, p21) = col(att);
    let (p12, p22) = col(rep);
    let frame = Isometry::new(p11, p12, p21, p22)?;
    Ok(frame.conjugate(&Isometry::axial_translation(t)))
}

/// Adds a crosscap on the boundary `boundary_word`: a new glide generator
/// `label` with `label² = ±B` and core length `core_length`.
pub fn attach_crosscap(rep: &HolonomyRep, boundary_word: &Word, core_length: f64, label: char) -> Result<HolonomyRep> {
    let b = rep.holonomy(boundary_word)?;
    if b.reverses_orientation() {
        return Err(Error::CapNonGeodesic);
    }
    let lb = match b.translation_length()? {
        Translation::Hyperbolic(l) => l,
        _ => return Err(Error::CapNonGeodesic),
    };
    if (lb - 2.0 * core_length).abs() > CAP_LENGTH_TOL {
        return Err(Error::CoreLengthMismatch {
            boundary: lb,
            core: core_length,
        });
    }
    let g = glide_root(&b)?;
    let mut out = rep.with_generator(label, g)?;
    let gen = Word::parse(&label.to_string())?;
    out.relation_words.push(gen.pow(2).concat(&boundary_word.inverse()));
    out.peripheral
        .retain(|p| p.word.canonical() != boundary_word.canonical());
    out.free = false;
    out.surface = SurfaceDescriptor {
        orientable: false,
        genus: if rep.surface.orientable {
            2 * rep.surface.genus + 1
        } else {
            rep.surface.genus + 1
        },
        r: rep.surface.r.saturating_sub(1),
        boundary_lengths: out.peripheral.iter().map(|p| p.length).collect(),
    };
    Ok(out)
}

/// Product of generator images in word order; the empty word is the identity.
pub fn holonomy_of_word(rep: &HolonomyRep, w: &Word) -> Result<Isometry> {
    let mut acc = Isometry::identity();
    for l in w.letters() {
        let g = rep.generator(l.label)?;
        let g = if l.inverse { g.inverse() } else { g };
        acc = acc.compose(&g);
    }
    Ok(acc)
}

/// Length of the closed geodesic in the free homotopy class of `w`.
pub fn curve_length(rep: &HolonomyRep, w: &Word) -> Result<f64> {
    holonomy_of_word(rep, w)?.length()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelName {
    N12,
    N21,
    N3,
    N13,
}

impl ModelName {
    pub const ALL: [ModelName; 4] = [ModelName::N12, ModelName::N21, ModelName::N3, ModelName::N13];

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().replace('_', "").as_str() {
            "N12" => Ok(ModelName::N12),
            "N21" => Ok(ModelName::N21),
            "N3" => Ok(ModelName::N3),
            "N13" => Ok(ModelName::N13),
            _ => Err(Error::UnknownModel(s.to_string())),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ModelName::N12 => "N12",
            ModelName::N21 => "N21",
            ModelName::N3 => "N3",
            ModelName::N13 => "N13",
        }
    }

    /// Number of parameters expected by [`builtin_model`].
    pub fn arity(self) -> usize {
        match self {
            ModelName::N12 => 3,
            ModelName::N21 => 3,
            ModelName::N3 => 3,
            ModelName::N13 => 6,
        }
    }

    /// Parameter names, in order.
    pub fn parameter_names(self) -> &'static [&'static str] {
        match self {
            ModelName::N12 => &["boundary1", "boundary2", "core"],
            ModelName::N21 => &["core_a", "core_b", "boundary"],
            ModelName::N3 => &["core_a", "core_b", "core_c"],
            ModelName::N13 => &["boundary1", "boundary2", "boundary3", "delta", "twist", "core"],
        }
    }

    /// Default parameters. For N13 this is a symmetric convention (equal
    /// boundary lengths, zero twist), not a distinguished metric.
    pub fn default_parameters(self) -> Vec<f64> {
        match self {
            ModelName::N12 => vec![2.0, 2.0, 1.0],
            ModelName::N21 => vec![2.0, 2.0, 1.0],
            ModelName::N3 => vec![1.0, 1.0, 1.0],
            ModelName::N13 => vec![2.0, 2.0, 2.0, 2.0, 0.0, 1.0],
        }
    }
}

impl fmt::Display for ModelName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn positive(xs: &[f64]) -> Result<()> {
    for &x in xs {
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::InvalidPantsLength(x));
        }
    }
    Ok(())
}

/// Builds one of the benchmark surfaces.
///
/// Parameters (all lengths):
/// - `N12`: `[β1, β2, ℓ]`: two boundary lengths and a crosscap core; free
///   basis `{a, b}` of one-sided curves, boundaries `b·a⁻¹` and `b·a`.
/// - `N21`: `[ℓa, ℓb, L]`: two crosscap cores and the boundary length;
///   free basis `{a, b}`, boundary `a²b²`.
/// - `N3`: `[ℓa, ℓb, ℓc]`: three crosscap cores on pants `(2ℓa, 2ℓb, 2ℓc)`;
///   relation `a²b²c²`.
/// - `N13`: `[β1, β2, β3, ℓδ, τ, ℓc]`: boundary lengths, the interior pants
///   curve δ with its twist, and the crosscap core; free basis `{x, y, c}`.
pub fn builtin_model(name: ModelName, params: &[f64]) -> Result<HolonomyRep> {
    let mut rep = build_model(name, params)?;
    rep.model = Some(name);
    Ok(rep)
}

fn build_model(name: ModelName, params: &[f64]) -> Result<HolonomyRep> {
    if params.len() != name.arity() {
        return Err(Error::ParameterMismatch {
            model: name.as_str(),
            expected: name.arity(),
            got: params.len(),
        });
    }
    let w = |s: &str| Word::parse(s).expect("literal word");
    match name {
        ModelName::N3 => {
            positive(params)?;
            let (la, lb, lc) = (params[0], params[1], params[2]);
            let (x, y, z) = pants_matrices(2.0 * la, 2.0 * lb, 2.0 * lc);
            let gens = vec![('a', glide_root(&x)?), ('b', glide_root(&y)?), ('c', glide_root(&z)?)];
            let mut rep = HolonomyRep::new(gens, vec![w("aabbcc")], SurfaceDescriptor::nonorientable(3, vec![]))?;
            rep.fn_data = Some(FnData {
                pants_curves: vec![],
                crosscap_cores: vec![('a', la), ('b', lb), ('c', lc)],
                gluing: "pants (2la, 2lb, 2lc) with a crosscap on each boundary".into(),
            });
            Ok(rep)
        }
        ModelName::N21 => {
            positive(params)?;
            let (la, lb, big) = (params[0], params[1], params[2]);
            let (x, y, _) = pants_matrices(2.0 * la, 2.0 * lb, big);
            let gens = vec![('a', glide_root(&x)?), ('b', glide_root(&y)?)];
            let mut rep = HolonomyRep::new(gens, vec![], SurfaceDescriptor::nonorientable(2, vec![big]))?;
            rep.peripheral = vec![Peripheral {
                name: "boundary".into(),
                word: w("aabb"),
                length: big,
            }];
            rep.fn_data = Some(FnData {
                pants_curves: vec![],
                crosscap_cores: vec![('a', la), ('b', lb)],
                gluing: "pants (2la, 2lb, L) with crosscaps on the first two boundaries".into(),
            });
            Ok(rep)
        }
        ModelName::N12 => {
            positive(params)?;
            let (b1, b2, l) = (params[0], params[1], params[2]);
            let (x, y, _) = pants_matrices(b1, 2.0 * l, b2);
            let a = glide_root(&y)?;
            let b = x.compose(&a);
            let mut rep = HolonomyRep::new(
                vec![('a', a), ('b', b)],
                vec![],
                SurfaceDescriptor::nonorientable(1, vec![b1, b2]),
            )?;
            rep.peripheral = vec![
                Peripheral {
                    name: "boundary1".into(),
                    word: w("bA"),
                    length: b1,
                },
                Peripheral {
                    name: "boundary2".into(),
                    word: w("ba"),
                    length: b2,
                },
            ];
            rep.fn_data = Some(FnData {
                pants_curves: vec![],
                crosscap_cores: vec![('a', l)],
                gluing: "pants (b1, 2l, b2) with a crosscap on the second boundary".into(),
            });
            Ok(rep)
        }
        ModelName::N13 => {
            let (b1, b2, b3, ld, tau, lc) = (params[0], params[1], params[2], params[3], params[4], params[5]);
            positive(&[b1, b2, b3, ld, lc])?;
            if !tau.is_finite() {
                return Err(Error::InvalidPantsLength(tau));
            }
            let (x1, y1, d1) = pants_matrices(b1, b2, ld);
            let (x2, y2, _) = pants_matrices(ld, b3, 2.0 * lc);
            // carry x2 onto d1⁻¹, then twist along that axis
            let target = d1.inverse();
            let (r, a) = match target.axis_endpoints()? {
                (BoundaryPoint::Finite(r), BoundaryPoint::Finite(a)) => (r, a),
                _ => return Err(Error::NoAxis("at infinity")),
            };
            // x2 = −diag(λ, 1/λ): repelling 0, attracting ∞
            let c0 = if a > r {
                Isometry::new(a, r, 1.0, 1.0)?
            } else {
                Isometry::new(a, -r, 1.0, -1.0)?
            };
            let twist = translation_along(&target, tau)?;
            let conj = twist.compose(&c0);
            let x2c = conj.conjugate(&x2);
            let y2c = conj.conjugate(&y2);
            debug_assert!(x2c.projective_distance(&target) < 1e-6);
            // cap (x2 y2)⁻¹ = (x1 y1 y2)⁻¹
            let cap = x1.compose(&y1).compose(&y2c).inverse();
            let c = glide_root(&cap)?;
            let mut rep = HolonomyRep::new(
                vec![('x', x1), ('y', y1), ('c', c)],
                vec![],
                SurfaceDescriptor::nonorientable(1, vec![b1, b2, b3]),
            )?;
            rep.peripheral = vec![
                Peripheral {
                    name: "boundary1".into(),
                    word: w("x"),
                    length: b1,
                },
                Peripheral {
                    name: "boundary2".into(),
                    word: w("y"),
                    length: b2,
                },
                Peripheral {
                    name: "boundary3".into(),
                    word: w("YXCC"),
                    length: b3,
                },
            ];
            rep.fn_data = Some(FnData {
                pants_curves: vec![("delta".into(), ld, tau)],
                crosscap_cores: vec![('c', lc)],
                gluing: "pants (b1, b2, ld) glued along ld to pants (ld, b3, 2lc), crosscap on 2lc".into(),
            });
            Ok(rep)
        }
    }
}

/// The one-holed torus inside the three-crosscap model: the complement of
/// the one-sided geodesic `abc`, with free basis `x = ab`, `y = bc` and
/// boundary `xyXY = (abc)²` up to conjugacy. Every two-sided simple closed
/// geodesic of the closed surface lies in it.
pub fn n3_torus(rep: &HolonomyRep) -> Result<HolonomyRep> {
    let w = |s: &str| Word::parse(s).expect("literal word");
    let x = rep.holonomy(&w("ab"))?;
    let y = rep.holonomy(&w("bc"))?;
    let boundary = 2.0 * rep.length(&w("abc"))?;
    let mut t = HolonomyRep::new(
        vec![('x', x), ('y', y)],
        vec![],
        SurfaceDescriptor::orientable(1, vec![boundary]),
    )?;
    t.peripheral = vec![Peripheral {
        name: "boundary".into(),
        word: w("xyXY"),
        length: boundary,
    }];
    Ok(t)
}

/// Rewrites a word in the torus basis as a word in `a, b, c`.
pub fn n3_torus_word(w: &Word) -> Word {
    w.substitute(&|c| match c {
        'x' => Some(Word::parse("ab").expect("literal")),
        'y' => Some(Word::parse("bc").expect("literal")),
        _ => None,
    })
}

/// Shortest one-sided geodesic found among primitive classes up to a word
/// budget.
#[derive(Clone, Debug, PartialEq)]
pub struct SysMinus {
    pub length: f64,
    pub word: Word,
    pub budget: usize,
    /// Minimum at budget + 2.
    pub refined_length: f64,
    /// True when raising the budget by 2 leaves the minimum unchanged.
    pub certified: bool,
}

fn shortest_one_sided(rep: &HolonomyRep, budget: usize) -> Result<Option<(f64, Word)>> {
    let one = rep.one_sided_labels();
    if one.is_empty() {
        return Ok(None);
    }
    let mut best: Option<(f64, Word)> = None;
    for w in word_classes(&rep.labels(), budget) {
        if w.count_labels(&one) % 2 == 0 {
            continue;
        }
        if let Ok(l) = rep.length(&w) {
            if best.as_ref().is_none_or(|(b, _)| l < *b) {
                best = Some((l, w));
            }
        }
    }
    Ok(best)
}

/// Length of the shortest one-sided closed geodesic, with a saturation
/// certificate.
pub fn sys_minus(rep: &HolonomyRep, word_budget: usize) -> Result<SysMinus> {
    if word_budget == 0 {
        return Err(Error::ZeroBudget);
    }
    let (l, w) = shortest_one_sided(rep, word_budget)?.ok_or(Error::AppearsOrientable)?;
    let (l2, _) = shortest_one_sided(rep, word_budget + 2)?.ok_or(Error::AppearsOrientable)?;
    Ok(SysMinus {
        length: l,
        word: w,
        budget: word_budget,
        refined_length: l2,
        certified: (l - l2).abs() <= 1e-12 * l.max(1.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypgeo::axes_cross;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn descriptor_dimensions() {
        assert_eq!(SurfaceDescriptor::nonorientable(2, vec![1.0]).dim_ml(), 2);
        assert_eq!(SurfaceDescriptor::nonorientable(3, vec![]).dim_ml(), 3);
        assert_eq!(SurfaceDescriptor::nonorientable(1, vec![1.0, 1.0]).dim_ml(), 1);
        assert_eq!(SurfaceDescriptor::nonorientable(1, vec![1.0; 3]).dim_ml(), 3);
        assert_eq!(SurfaceDescriptor::orientable(1, vec![1.0]).dim_ml(), 2);
        assert!(!SurfaceDescriptor::nonorientable(1, vec![1.0]).is_hyperbolic());
    }

    #[test]
    fn pants_traces() {
        let p = build_pants(1.0, 1.0, 1.0).unwrap();
        let x = p.generator('x').unwrap();
        assert!((x.trace().abs() - 2.255_252_1).abs() < 1e-6);
        assert!((x.trace().abs() - 2.0 * 0.5f64.cosh()).abs() < 1e-9);
        let p = build_pants(2.0, 2.0, 2.0).unwrap();
        let xy = p.holonomy(&w("xy")).unwrap();
        assert!((xy.trace().abs() - 3.086_161_3).abs() < 1e-6);
        assert_eq!(build_pants(0.0, 1.0, 1.0).unwrap_err(), Error::InvalidPantsLength(0.0));
    }

    #[test]
    fn pants_boundaries_are_disjoint() {
        for (l1, l2, l3) in [(1.0, 1.0, 1.0), (0.3, 2.0, 5.0), (4.0, 0.5, 0.5)] {
            let p = build_pants(l1, l2, l3).unwrap();
            let axes: Vec<_> = ["x", "y", "YX"]
                .iter()
                .map(|s| p.holonomy(&w(s)).unwrap().axis_endpoints().unwrap())
                .collect();
            for i in 0..3 {
                for j in i + 1..3 {
                    assert!(!axes_cross(axes[i], axes[j]), "{l1} {l2} {l3}: {i} {j}");
                }
            }
            assert!(p.peripheral_residual().unwrap() < 1e-9);
        }
    }

    #[test]
    fn crosscap_root() {
        let p = build_pants(2.0, 3.0, 4.0).unwrap();
        let capped = attach_crosscap(&p, &w("x"), 1.0, 'a').unwrap();
        let a = capped.generator('a').unwrap();
        assert!(a.reverses_orientation());
        assert!((capped.length(&w("a")).unwrap() - 1.0).abs() < 1e-12);
        assert!(a.square().projective_distance(&p.generator('x').unwrap()) < 1e-8);
        assert!(capped.relation_residual().unwrap() < 1e-8);
        assert_eq!(
            attach_crosscap(&p, &w("x"), 1.5, 'a').unwrap_err(),
            Error::CoreLengthMismatch {
                boundary: p.length(&w("x")).unwrap(),
                core: 1.5
            }
        );
        let para = HolonomyRep::new(
            vec![('p', Isometry::horizontal(1.0))],
            vec![],
            SurfaceDescriptor::orientable(0, vec![]),
        )
        .unwrap();
        assert_eq!(
            attach_crosscap(&para, &w("p"), 1.0, 'a').unwrap_err(),
            Error::CapNonGeodesic
        );
        assert_eq!(
            attach_crosscap(&p, &w("x"), 1.0, 'y').unwrap_err(),
            Error::DuplicateGenerator('y')
        );
    }

    #[test]
    fn three_caps_give_n3() {
        let p = build_pants(2.0, 2.0, 2.0).unwrap();
        let p = attach_crosscap(&p, &w("x"), 1.0, 'a').unwrap();
        let p = attach_crosscap(&p, &w("y"), 1.0, 'b').unwrap();
        let p = attach_crosscap(&p, &w("YX"), 1.0, 'c').unwrap();
        assert_eq!(p.surface.genus, 3);
        assert_eq!(p.surface.r, 0);
        let r = p.holonomy(&w("aabbcc")).unwrap();
        assert!(r.identity_residual() < 1e-8);
        let n3 = builtin_model(ModelName::N3, &[1.0, 1.0, 1.0]).unwrap();
        assert!(n3.relation_residual().unwrap() < 1e-8);
    }

    #[test]
    fn holonomy_and_lengths() {
        let n3 = builtin_model(ModelName::N3, &[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(n3.holonomy(&Word::empty()).unwrap(), Isometry::identity());
        assert_eq!(n3.holonomy(&w("a")).unwrap(), n3.generator('a').unwrap());
        let ab = n3.generator('a').unwrap().compose(&n3.generator('b').unwrap());
        assert!(n3.holonomy(&w("ab")).unwrap().projective_distance(&ab) < 1e-15);
        assert!((n3.length(&w("a")).unwrap() - 1.0).abs() < 1e-12);
        assert!((n3.length(&w("aa")).unwrap() - 2.0).abs() < 1e-12);
        let l = n3.length(&w("abC")).unwrap();
        let lc = n3.length(&w("babCB")).unwrap();
        assert!((l - lc).abs() < 1e-9);
        assert_eq!(n3.holonomy(&w("z")).unwrap_err(), Error::UnknownGenerator('z'));
    }

    #[test]
    fn builtin_models() {
        for name in ModelName::ALL {
            let rep = builtin_model(name, &name.default_parameters()).unwrap();
            assert!(rep.relation_residual().unwrap() < RELATION_TOL, "{name}");
            assert!(rep.peripheral_residual().unwrap() < 1e-6, "{name}");
            assert!(rep.surface.is_hyperbolic());
        }
        let n21 = builtin_model(ModelName::N21, &[1.0, 1.5, 3.0]).unwrap();
        assert!((n21.length(&w("aabb")).unwrap() - 3.0).abs() < 1e-6);
        let n12 = builtin_model(ModelName::N12, &[2.0, 2.0, 1.0]).unwrap();
        assert_eq!(n12.one_sided_labels(), vec!['a', 'b']);
        assert_eq!(
            builtin_model(ModelName::N3, &[1.0]).unwrap_err(),
            Error::ParameterMismatch {
                model: "N3",
                expected: 3,
                got: 1
            }
        );
    }

    #[test]
    fn n13_twist_changes_geometry() {
        let m0 = builtin_model(ModelName::N13, &[2.0, 2.0, 2.0, 2.0, 0.0, 1.0]).unwrap();
        let m1 = builtin_model(ModelName::N13, &[2.0, 2.0, 2.0, 2.0, 0.7, 1.0]).unwrap();
        // the glued curve keeps its length, a crossing curve does not
        let d = w("xy");
        assert!((m0.length(&d).unwrap() - 2.0).abs() < 1e-9);
        assert!((m1.length(&d).unwrap() - 2.0).abs() < 1e-9);
        let cross = w("yc");
        assert!((m0.length(&cross).unwrap() - m1.length(&cross).unwrap()).abs() > 1e-3);
        assert!((m0.length(&w("c")).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn n13_pants_lie_on_opposite_sides() {
        let m = builtin_model(ModelName::N13, &[2.0, 2.0, 2.0, 2.0, 0.3, 1.0]).unwrap();
        let axes: Vec<_> = ["x", "y", "YXCC", "cc", "xy"]
            .iter()
            .map(|s| m.holonomy(&w(s)).unwrap().axis_endpoints().unwrap())
            .collect();
        for i in 0..axes.len() {
            for j in i + 1..axes.len() {
                assert!(!axes_cross(axes[i], axes[j]), "{i} {j}");
            }
        }
    }

    #[test]
    fn sys_minus_examples() {
        let n3 = builtin_model(ModelName::N3, &[1.0, 1.0, 1.0]).unwrap();
        let s = sys_minus(&n3, 1).unwrap();
        assert!(s.length <= 1.0 + 1e-12);
        let n21 = builtin_model(ModelName::N21, &[0.8, 1.3, 1.0]).unwrap();
        let s = sys_minus(&n21, 1).unwrap();
        assert!((s.length - 0.8).abs() < 1e-12);
        let pants = build_pants(1.0, 1.0, 1.0).unwrap();
        assert_eq!(sys_minus(&pants, 2).unwrap_err(), Error::AppearsOrientable);
        assert_eq!(sys_minus(&n3, 0).unwrap_err(), Error::ZeroBudget);
    }
}
