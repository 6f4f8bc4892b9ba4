//! Floer lasagna fillings stored combinatorially: a surface is a list of w and
//! z pieces with Euler characteristics and the boundary segments they claim,
//! plus dividing arcs and the boundary circles they end on.
//!
//! Gluing convention. Pieces meet along dividing arcs and, across an interior
//! circle, along boundary segments. Each open arc and each glued segment
//! lowers χ by one and each point where two arcs meet on an interior circle
//! raises it by one. A circle has as many such points as segments, so only
//! the open arcs remain: χ(Σ) = Σ χ(pieces) − #open arcs. Closed dividing
//! circles contribute nothing. Within Σ_w alone the glued segments do count,
//! giving χ(Σ_w) = Σ χ(w pieces) − #interior w segments.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::obstruction::{alexander_shift, maslov_shift, CobordismGradingData, ObstructionError};
use crate::tqft::{self, Combination, ComponentId, QuasiStab, ReducedTensor, TqftError};

pub const SEED_ENV: &str = "FLOER_LASAGNA_SEED";
const DEFAULT_SEED: u64 = 0x001a_5a9a;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LasagnaError {
    #[error("input in ball {ball} is not homogeneous")]
    InhomogeneousInput { ball: usize },
    #[error("grading drift: (M, 2A, class) {before:?} became {after:?}")]
    GradingDrift { before: (i64, i64, Vec<i64>), after: (i64, i64, Vec<i64>) },
    #[error("not computable: {0}")]
    NotComputable(String),
    #[error("invalid filling: {}", .0.join("; "))]
    Invalid(Vec<String>),
    #[error("move does not fit the filling: {0}")]
    MoveMismatch(String),
    #[error("schema: {0}")]
    Schema(String),
    #[error(transparent)]
    Tqft(#[from] TqftError),
    #[error(transparent)]
    Obstruction(#[from] ObstructionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PieceKind {
    W,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Outer,
    Input(usize),
    /// A circle the surface has been glued along; no longer on the boundary.
    Interior,
}

/// A boundary circle. Segment `k` is the stretch between consecutive arc
/// endpoints containing `basepoints[k]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryCircle {
    pub id: usize,
    pub component: ComponentId,
    pub side: Side,
    pub basepoints: Vec<PieceKind>,
}

impl BoundaryCircle {
    pub fn w_count(&self) -> usize {
        self.basepoints.iter().filter(|&&k| k == PieceKind::W).count()
    }

    pub fn z_count(&self) -> usize {
        self.basepoints.len() - self.w_count()
    }

    fn alternating(pairs: usize) -> Vec<PieceKind> {
        (0..2 * pairs).map(|i| if i % 2 == 0 { PieceKind::W } else { PieceKind::Z }).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piece {
    pub kind: PieceKind,
    /// χ of the piece on its own.
    pub euler: i64,
    /// Claimed (circle id, segment index) pairs.
    #[serde(default)]
    pub segments: Vec<(usize, usize)>,
    /// Basepoint twist annotation of a cable disk.
    #[serde(default)]
    pub twist: i64,
}

/// A dividing arc; `endpoints: None` is a closed dividing circle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arc {
    pub id: usize,
    pub endpoints: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DecoratedSurface {
    pub pieces: Vec<Piece>,
    pub arcs: Vec<Arc>,
    pub boundaries: Vec<BoundaryCircle>,
    /// Declared χ(Σ), checked against the gluing formula when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler: Option<i64>,
}

impl DecoratedSurface {
    fn interior_segments(&self, kind: PieceKind) -> i64 {
        self.boundaries
            .iter()
            .filter(|c| c.side == Side::Interior)
            .map(|c| c.basepoints.iter().filter(|&&k| k == kind).count() as i64)
            .sum()
    }

    fn kind_euler(&self, kind: PieceKind) -> i64 {
        self.pieces.iter().filter(|p| p.kind == kind).map(|p| p.euler).sum::<i64>() - self.interior_segments(kind)
    }

    pub fn chi_w(&self) -> i64 {
        self.kind_euler(PieceKind::W)
    }

    pub fn chi_z(&self) -> i64 {
        self.kind_euler(PieceKind::Z)
    }

    /// χ(Σ) from the pieces via the gluing convention.
    pub fn reconstructed_euler(&self) -> i64 {
        let open_arcs = self.arcs.iter().filter(|a| a.endpoints.is_some()).count() as i64;
        self.pieces.iter().map(|p| p.euler).sum::<i64>() - open_arcs
    }

    fn circles_on(&self, side: Side) -> impl Iterator<Item = &BoundaryCircle> {
        self.boundaries.iter().filter(move |c| c.side == side)
    }

    pub fn w_count(&self, side: Side) -> usize {
        self.circles_on(side).map(BoundaryCircle::w_count).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputLink {
    /// An unlink whose components are the circles on this ball.
    Unlink { marked: ComponentId },
    Other(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputElement {
    /// A homogeneous element known only by its Maslov and total doubled Alexander grading.
    Graded { maslov: i64, alex2: i64 },
    Tensor(Combination),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Input {
    pub ball: usize,
    pub link: InputLink,
    pub element: InputElement,
}

/// An elementary unlink cobordism applied between the input ball and the
/// outer boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum CollarOp {
    Birth { component: ComponentId },
    Death { component: ComponentId },
    Merge { a: ComponentId, b: ComponentId },
    Split { a: ComponentId, new: ComponentId },
    Stab { kind: QuasiStab, component: ComponentId },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LasagnaFilling {
    pub inputs: Vec<Input>,
    pub surface: DecoratedSurface,
    /// Algebraic cable count `k+ - k-` per 2-handle; empty for the 4-ball.
    #[serde(default)]
    pub class: Vec<i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub collar: Vec<CollarOp>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<String>,
    /// Accepted but outside the constructions that appear in practice.
    pub flags: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl LasagnaFilling {
    pub fn from_json(text: &str) -> Result<Self, LasagnaError> {
        serde_json::from_str(text).map_err(|e| LasagnaError::Schema(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("filling serializes")
    }

    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::default();
        let s = &self.surface;
        let mut circles = BTreeMap::new();
        for c in &s.boundaries {
            if circles.insert(c.id, c).is_some() {
                r.violations.push(format!("circle {} declared twice", c.id));
            }
            let n = c.basepoints.len();
            if n == 0 || n % 2 != 0 {
                r.violations.push(format!("circle {} needs a positive even number of basepoints", c.id));
            } else if (0..n).any(|k| c.basepoints[k] == c.basepoints[(k + 1) % n]) {
                r.violations.push(format!("basepoints on circle {} do not alternate", c.id));
            }
        }

        let mut claims: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (pi, p) in s.pieces.iter().enumerate() {
            for &(cid, k) in &p.segments {
                let Some(c) = circles.get(&cid) else {
                    r.violations.push(format!("piece {pi} claims unknown circle {cid}"));
                    continue;
                };
                match c.basepoints.get(k) {
                    None => r.violations.push(format!("piece {pi} claims missing segment {k} of circle {cid}")),
                    Some(&b) if b != p.kind => r.violations.push(format!(
                        "{b:?} basepoint on segment {k} of circle {cid} lies in a {:?} piece",
                        p.kind
                    )),
                    Some(_) => *claims.entry((cid, k)).or_default() += 1,
                }
            }
            if p.twist != 0 {
                r.flags.push(format!("piece {pi} carries twist {}", p.twist));
            }
        }
        for c in &s.boundaries {
            let want = if c.side == Side::Interior { 2 } else { 1 };
            for k in 0..c.basepoints.len() {
                let got = claims.get(&(c.id, k)).copied().unwrap_or(0);
                if got != want {
                    r.violations.push(format!("segment {k} of circle {} claimed {got} times, expected {want}", c.id));
                }
            }
        }

        let mut ends: BTreeMap<usize, usize> = BTreeMap::new();
        for a in &s.arcs {
            match a.endpoints {
                Some((x, y)) => {
                    for e in [x, y] {
                        if circles.contains_key(&e) {
                            *ends.entry(e).or_default() += 1;
                        } else {
                            r.violations.push(format!("arc {} ends on unknown circle {e}", a.id));
                        }
                    }
                }
                None => r.flags.push(format!("arc {} is a closed dividing circle", a.id)),
            }
        }
        for c in &s.boundaries {
            let want = c.basepoints.len() * if c.side == Side::Interior { 2 } else { 1 };
            let got = ends.get(&c.id).copied().unwrap_or(0);
            if got != want {
                r.violations.push(format!("circle {} has {got} arc endpoints, expected {want}", c.id));
            }
        }
        if let Some(e) = s.euler {
            let rec = s.reconstructed_euler();
            if e != rec {
                r.violations.push(format!("declared χ(Σ) = {e} but the pieces glue to {rec}"));
            }
        }

        let mut balls = BTreeSet::new();
        for inp in &self.inputs {
            if !balls.insert(inp.ball) {
                r.violations.push(format!("ball {} has two inputs", inp.ball));
            }
            let on_ball: Vec<&BoundaryCircle> = s.circles_on(Side::Input(inp.ball)).collect();
            if let Err(e) = check_input(inp, &on_ball) {
                r.violations.push(e);
            }
        }
        for c in &s.boundaries {
            if let Side::Input(b) = c.side {
                if !balls.contains(&b) {
                    r.violations.push(format!("circle {} lies on ball {b} which has no input", c.id));
                }
            }
        }
        r
    }

    fn input_gradings(&self) -> Result<(i64, i64), LasagnaError> {
        let mut m = 0;
        let mut a = 0;
        for inp in &self.inputs {
            let (dm, da) = element_grading(&inp.element).ok_or(LasagnaError::InhomogeneousInput { ball: inp.ball })?;
            m += dm;
            a += da;
        }
        Ok((m, a))
    }

    /// χ(Σ_w) plus the Maslov gradings of the inputs.
    pub fn maslov(&self) -> Result<i64, LasagnaError> {
        Ok(self.surface.chi_w() + self.input_gradings()?.0)
    }

    /// Doubled Alexander grading: χ(Σ_w) − χ(Σ_z) plus the inputs' doubled gradings.
    pub fn alexander(&self) -> Result<i64, LasagnaError> {
        Ok(self.surface.chi_w() - self.surface.chi_z() + self.input_gradings()?.1)
    }

    pub fn gradings(&self) -> Result<(i64, i64, Vec<i64>), LasagnaError> {
        Ok((self.maslov()?, self.alexander()?, self.class.clone()))
    }

    fn fresh_circle_id(&self) -> usize {
        self.surface.boundaries.iter().map(|c| c.id + 1).max().unwrap_or(0)
    }

    fn fresh_arc_id(&self) -> usize {
        self.surface.arcs.iter().map(|a| a.id + 1).max().unwrap_or(0)
    }
}

fn element_grading(e: &InputElement) -> Option<(i64, i64)> {
    match e {
        InputElement::Graded { maslov, alex2 } => Some((*maslov, *alex2)),
        InputElement::Tensor(c) => {
            let mut gs = c.terms().map(|t| {
                let g = t.collapsed_grading();
                (g.maslov, g.alex[0])
            });
            let first = gs.next().unwrap_or((0, 0));
            gs.all(|g| g == first).then_some(first)
        }
    }
}

fn check_input(inp: &Input, circles: &[&BoundaryCircle]) -> Result<(), String> {
    let b = inp.ball;
    if let InputElement::Tensor(c) = &inp.element {
        if element_grading(&inp.element).is_none() {
            return Err(format!("input on ball {b} is not homogeneous"));
        }
        let InputLink::Unlink { marked } = inp.link else {
            return Err(format!("ball {b}: tensor elements need an unlink input"));
        };
        let comps: BTreeSet<ComponentId> = circles.iter().map(|c| c.component).collect();
        if comps.len() != circles.len() {
            return Err(format!("ball {b}: unlink components must be distinct circles"));
        }
        for t in c.terms() {
            let rebuilt = ReducedTensor::new(t.marked(), t.word().clone(), t.extra().to_vec())
                .map_err(|e| format!("ball {b}: {e}"))?;
            if &rebuilt != t {
                return Err(format!("ball {b}: tensor {t} is malformed"));
            }
            if t.marked() != marked {
                return Err(format!("ball {b}: tensor {t} marks {} instead of {marked}", t.marked()));
            }
            if t.components().iter().copied().collect::<BTreeSet<_>>() != comps {
                return Err(format!("ball {b}: tensor {t} does not live on the ball's components"));
            }
            for c in circles {
                let extra = t.extra().iter().filter(|(d, _)| *d == c.component).count();
                if extra + 1 != c.w_count() {
                    return Err(format!(
                        "ball {b}: component {} has {} basepoint pairs but {t} carries {extra} extra factors",
                        c.component,
                        c.w_count()
                    ));
                }
            }
        }
    }
    Ok(())
}

fn product_cylinder(s: &mut DecoratedSurface, component: ComponentId, pairs: usize, ball: usize) {
    let inner = s.boundaries.iter().map(|c| c.id + 1).max().unwrap_or(0);
    let outer = inner + 1;
    let arc0 = s.arcs.iter().map(|a| a.id + 1).max().unwrap_or(0);
    let basepoints = BoundaryCircle::alternating(pairs);
    for (id, side) in [(inner, Side::Input(ball)), (outer, Side::Outer)] {
        s.boundaries.push(BoundaryCircle { id, component, side, basepoints: basepoints.clone() });
    }
    for (k, &kind) in basepoints.iter().enumerate() {
        s.pieces.push(Piece { kind, euler: 1, segments: vec![(inner, k), (outer, k)], twist: 0 });
        s.arcs.push(Arc { id: arc0 + k, endpoints: Some((inner, outer)) });
    }
}

/// The product filling `L x I` over an unlink with the given basepoint pairs
/// per component, with input element `v`.
pub fn identity_filling(v: &Combination, pairs: &[(ComponentId, usize)], marked: ComponentId) -> LasagnaFilling {
    let mut surface = DecoratedSurface::default();
    for &(c, p) in pairs {
        product_cylinder(&mut surface, c, p, 0);
    }
    surface.euler = Some(0);
    LasagnaFilling {
        inputs: vec![Input { ball: 0, link: InputLink::Unlink { marked }, element: InputElement::Tensor(v.clone()) }],
        surface,
        class: Vec::new(),
        collar: Vec::new(),
    }
}

/// The model filling for a 2-handlebody: the input ball carries the cable
/// link and each cable copy is capped by a disk with one diametric arc.
pub fn model_filling(k_plus: &[usize], k_minus: &[usize], v: InputElement) -> LasagnaFilling {
    assert_eq!(k_plus.len(), k_minus.len(), "one count pair per handle");
    let mut surface = DecoratedSurface::default();
    let copies: usize = k_plus.iter().chain(k_minus).sum();
    for i in 0..copies {
        surface.boundaries.push(BoundaryCircle {
            id: i,
            component: i as ComponentId,
            side: Side::Input(0),
            basepoints: BoundaryCircle::alternating(1),
        });
        surface.arcs.push(Arc { id: i, endpoints: Some((i, i)) });
        surface.pieces.push(Piece { kind: PieceKind::W, euler: 1, segments: vec![(i, 0)], twist: 0 });
        surface.pieces.push(Piece { kind: PieceKind::Z, euler: 1, segments: vec![(i, 1)], twist: 0 });
    }
    surface.euler = Some(copies as i64);
    LasagnaFilling {
        inputs: vec![Input { ball: 0, link: InputLink::Other("cable".into()), element: v }],
        surface,
        class: k_plus.iter().zip(k_minus).map(|(&p, &m)| p as i64 - m as i64).collect(),
        collar: Vec::new(),
    }
}

/// Identity filling whose z strip on the first component contains a closed
/// w disk bounded by a closed dividing circle.
pub fn closed_disk_filling(v: &Combination, pairs: &[(ComponentId, usize)], marked: ComponentId) -> LasagnaFilling {
    let mut f = identity_filling(v, pairs, marked);
    let s = &mut f.surface;
    let z = s.pieces.iter().position(|p| p.kind == PieceKind::Z).expect("at least one z strip");
    s.pieces[z].euler -= 1;
    s.pieces.push(Piece { kind: PieceKind::W, euler: 1, segments: Vec::new(), twist: 0 });
    let id = f.fresh_arc_id();
    f.surface.arcs.push(Arc { id, endpoints: None });
    f
}

/// Identity filling with elementary unlink cobordisms applied in its collar.
/// The product surface is kept, so only basepoint-neutral sequences are sensible.
pub fn collar_filling(
    v: &Combination,
    pairs: &[(ComponentId, usize)],
    marked: ComponentId,
    ops: Vec<CollarOp>,
) -> LasagnaFilling {
    let mut f = identity_filling(v, pairs, marked);
    f.surface.euler = None;
    f.collar = ops;
    f
}

/// Value of a 4-ball filling in the homology of its outer link.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct B4Value {
    pub element: Combination,
    /// Maslov and doubled Alexander grading in the outer link's homology.
    pub grading: (i64, i64),
}

/// Evaluates a 4-ball filling whose single input is an unlink element.
pub fn b4_evaluate(f: &LasagnaFilling) -> Result<B4Value, LasagnaError> {
    let report = f.validate();
    if !report.is_ok() {
        return Err(LasagnaError::Invalid(report.violations));
    }
    if !f.class.is_empty() {
        return Err(LasagnaError::NotComputable("filling lives in a 4-manifold with handles".into()));
    }
    let [inp] = f.inputs.as_slice() else {
        return Err(LasagnaError::NotComputable(format!("{} input balls, expected one", f.inputs.len())));
    };
    let (InputLink::Unlink { .. }, InputElement::Tensor(v)) = (&inp.link, &inp.element) else {
        return Err(LasagnaError::NotComputable("input link is not an unlink".into()));
    };
    let w_out = f.surface.w_count(Side::Outer) as i64;
    // Cobordism shift for B^4 minus one ball: ΔM = χ(Σ_w) − |w_out|.
    let grading = (f.maslov()? - w_out, f.alexander()?);
    if f.surface.pieces.iter().any(|p| p.kind == PieceKind::W && p.segments.is_empty() && p.euler == 1) {
        return Ok(B4Value { element: Combination::zero(), grading });
    }
    let mut x = v.clone();
    for op in &f.collar {
        x = match *op {
            CollarOp::Birth { component } => tqft::birth(&x, component)?,
            CollarOp::Death { component } => tqft::death(&x, component)?,
            CollarOp::Merge { a, b } => tqft::merge(&x, a, b)?,
            CollarOp::Split { a, new } => tqft::split(&x, a, new)?,
            CollarOp::Stab { kind, component } => tqft::quasi_stab(&x, kind, component)?,
        };
    }
    if f.collar.is_empty() {
        if let Some(g) = element_grading(&InputElement::Tensor(x.clone())).filter(|_| !x.is_zero()) {
            if g != grading {
                return Err(LasagnaError::GradingDrift {
                    before: (g.0, g.1, Vec::new()),
                    after: (grading.0, grading.1, Vec::new()),
                });
            }
        }
    }
    let grading = element_grading(&InputElement::Tensor(x.clone())).filter(|_| !x.is_zero()).unwrap_or(grading);
    Ok(B4Value { element: x, grading })
}

/// Undoes the absorption of a collar around `ball`: the ball shrinks, the
/// collar's surface becomes part of Σ, and the input element is replaced by
/// one of the grading it had before the collar map was applied.
pub fn expose_collar(f: &LasagnaFilling, ball: usize, mv: &CobordismGradingData) -> Result<LasagnaFilling, LasagnaError> {
    let is_product = mv.c1_sq == 0 && mv.chi_w4 == 0 && mv.sigma_w4 == 0 && mv.spheres_in == 1 && mv.spheres_out == 1;
    if !is_product {
        return Err(LasagnaError::MoveMismatch("collar must be a product S^3 x I".into()));
    }
    let inp = f.inputs.iter().position(|i| i.ball == ball).ok_or(LasagnaError::MoveMismatch(format!("no ball {ball}")))?;
    let w2 = f.surface.w_count(Side::Input(ball)) as i64;
    if mv.w2_count != w2 {
        return Err(LasagnaError::MoveMismatch(format!("collar ends on {} w points, ball has {w2}", mv.w2_count)));
    }
    let (m, a) = element_grading(&f.inputs[inp].element).ok_or(LasagnaError::InhomogeneousInput { ball })?;
    let dm = maslov_shift(mv)?;
    let da = alexander_shift(mv);

    let mut g = f.clone();
    let inner = g.fresh_circle_id();
    let mut arc_id = g.fresh_arc_id();
    let mut endpoints = Vec::new();
    let mut w_segments = Vec::new();
    let mut z_segments = Vec::new();
    for c in g.surface.boundaries.iter_mut().filter(|c| c.side == Side::Input(ball)) {
        c.side = Side::Interior;
        for (k, &kind) in c.basepoints.iter().enumerate() {
            endpoints.push(c.id);
            if kind == PieceKind::W { &mut w_segments } else { &mut z_segments }.push((c.id, k));
        }
    }
    if mv.w1_count > 0 {
        let basepoints = BoundaryCircle::alternating(mv.w1_count as usize);
        for (k, &kind) in basepoints.iter().enumerate() {
            endpoints.push(inner);
            if kind == PieceKind::W { &mut w_segments } else { &mut z_segments }.push((inner, k));
        }
        g.surface.boundaries.push(BoundaryCircle { id: inner, component: 0, side: Side::Input(ball), basepoints });
    }
    for pair in endpoints.chunks(2) {
        g.surface.arcs.push(Arc { id: arc_id, endpoints: Some((pair[0], pair[1])) });
        arc_id += 1;
    }
    g.surface.pieces.push(Piece { kind: PieceKind::W, euler: mv.chi_w, segments: w_segments, twist: 0 });
    g.surface.pieces.push(Piece { kind: PieceKind::Z, euler: mv.chi_z, segments: z_segments, twist: 0 });
    g.surface.euler = None;
    g.inputs[inp] = Input {
        ball,
        link: InputLink::Other("collar-exposed".into()),
        element: InputElement::Graded { maslov: m - dm, alex2: a - da },
    };
    Ok(g)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MoveAudit {
    pub before: (i64, i64, Vec<i64>),
    pub after: (i64, i64, Vec<i64>),
}

/// Checks that moving a collar between the surface and an input ball leaves
/// (M, A, class) unchanged.
pub fn equivalence_move_audit(
    f: &LasagnaFilling,
    ball: usize,
    mv: &CobordismGradingData,
) -> Result<MoveAudit, LasagnaError> {
    let before = f.gradings()?;
    let g = expose_collar(f, ball, mv)?;
    let report = g.validate();
    if !report.is_ok() {
        return Err(LasagnaError::Invalid(report.violations));
    }
    let after = g.gradings()?;
    if before != after {
        return Err(LasagnaError::GradingDrift { before, after });
    }
    Ok(MoveAudit { before, after })
}

pub fn seed_from_env() -> u64 {
    std::env::var(SEED_ENV).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_SEED)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditSummary {
    pub seed: u64,
    pub moves: usize,
    pub passed: usize,
    pub failures: Vec<String>,
}

impl AuditSummary {
    pub fn all_passed(&self) -> bool {
        self.passed == self.moves
    }
}

/// A random filling: a model filling or an identity filling over an unlink.
pub fn random_filling(rng: &mut impl Rng) -> LasagnaFilling {
    if rng.gen_bool(0.5) {
        let handles = rng.gen_range(1..=2);
        let kp: Vec<usize> = (0..handles).map(|_| rng.gen_range(0..=3)).collect();
        let km: Vec<usize> = (0..handles).map(|_| rng.gen_range(0..=3)).collect();
        let v = InputElement::Graded { maslov: rng.gen_range(-4..=4), alex2: rng.gen_range(-3..=3) };
        model_filling(&kp, &km, v)
    } else {
        let n = rng.gen_range(1..=3u32);
        let pairs: Vec<(ComponentId, usize)> = (0..n).map(|c| (c, rng.gen_range(1..=2))).collect();
        let extras: Vec<(ComponentId, usize)> = pairs.iter().map(|&(c, p)| (c, p - 1)).collect();
        let comps: Vec<ComponentId> = (0..n).collect();
        let basis = ReducedTensor::basis(&comps, 0, &extras).expect("valid unlink");
        let t = basis[rng.gen_range(0..basis.len())].clone();
        identity_filling(&t.into(), &pairs, 0)
    }
}

/// A random product collar ending on `w2` basepoint pairs.
pub fn random_move(rng: &mut impl Rng, w2: i64) -> CobordismGradingData {
    CobordismGradingData::product(rng.gen_range(-2..=3), rng.gen_range(-2..=3), rng.gen_range(0..=3), w2)
}

/// Runs `moves` random equivalence-move audits from `seed`.
pub fn randomized_audit(seed: u64, moves: usize) -> AuditSummary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases: Vec<(LasagnaFilling, CobordismGradingData)> = (0..moves)
        .map(|_| {
            let f = random_filling(&mut rng);
            let w2 = f.surface.w_count(Side::Input(0)) as i64;
            let mv = random_move(&mut rng, w2);
            (f, mv)
        })
        .collect();
    let failures: Vec<String> = cases
        .par_iter()
        .enumerate()
        .filter_map(|(i, (f, mv))| equivalence_move_audit(f, 0, mv).err().map(|e| format!("move {i}: {e}")))
        .collect();
    AuditSummary { seed, moves, passed: moves - failures.len(), failures }
}
