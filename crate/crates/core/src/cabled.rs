//! Cabled link Floer homology of the 0-framed unknot with empty boundary link.
//!
//! Level `(k+, k-)` carries the unlink on `k = k+ + k-` cable copies, shifted
//! up in Maslov grading by `k`. Levels are glued by braid, pair-of-pants and
//! basepoint relations; the answer is the quotient of the truncated direct
//! sum, computed one `(alpha, M)` block at a time.
//!
//! Component ids: positive copy `j` (1-based) is `2(j-1)`, negative copy `j`
//! is `2(j-1)+1`, so adding a new pair of copies never renames old ones.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::f2::{quotient_dim, F2Vector};
use crate::graded::{GradedModule, MultiGrading};
use crate::tqft::{self, braid_action, split, Combination, ComponentId, Family, MarkedBraid, ReducedTensor, VSymbol};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CabledError {
    #[error("relation of kind {kind:?} at level {level:?} mixes gradings: {detail}")]
    GradingViolation { kind: RelationKind, level: CableLevel, detail: String },
    #[error("truncation list is empty")]
    EmptyTruncations,
    #[error("truncations must be positive and strictly increasing: {0:?}")]
    BadTruncations(Vec<usize>),
    #[error(transparent)]
    Tqft(#[from] tqft::TqftError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CableLevel {
    pub k_plus: usize,
    pub k_minus: usize,
}

impl CableLevel {
    pub fn new(k_plus: usize, k_minus: usize) -> Self {
        CableLevel { k_plus, k_minus }
    }

    pub fn total(self) -> usize {
        self.k_plus + self.k_minus
    }

    pub fn alpha(self) -> i64 {
        self.k_plus as i64 - self.k_minus as i64
    }

    pub fn positive_id(j: usize) -> ComponentId {
        2 * (j as ComponentId - 1)
    }

    pub fn negative_id(j: usize) -> ComponentId {
        2 * (j as ComponentId - 1) + 1
    }

    /// Marked copy: positive copy 1 when `alpha >= 0`, else negative copy 1.
    /// Fixed per alpha sector so pair-of-pants never needs re-marking.
    pub fn marked(self) -> Option<ComponentId> {
        match (self.total(), self.alpha() >= 0) {
            (0, _) => None,
            (_, true) => Some(Self::positive_id(1)),
            (_, false) => Some(Self::negative_id(1)),
        }
    }

    pub fn components(self) -> Vec<ComponentId> {
        let mut c: Vec<ComponentId> = (1..=self.k_plus)
            .map(Self::positive_id)
            .chain((1..=self.k_minus).map(Self::negative_id))
            .collect();
        c.sort_unstable();
        c
    }

    /// Strands of the braid group `B_{k-, k+}`: positive family then negative family.
    pub fn strands(self) -> Vec<(ComponentId, Family)> {
        (1..=self.k_plus)
            .map(|j| (Self::positive_id(j), Family::Positive))
            .chain((1..=self.k_minus).map(|j| (Self::negative_id(j), Family::Negative)))
            .collect()
    }

    pub fn basis(self) -> Vec<Option<ReducedTensor>> {
        match self.marked() {
            None => vec![None],
            Some(m) => ReducedTensor::basis(&self.components(), m, &[])
                .expect("level components are distinct")
                .into_iter()
                .map(Some)
                .collect(),
        }
    }
}

/// The unlink homology of a level with its Maslov shift, one collapsed Alexander slot.
pub fn level_module(l: CableLevel) -> GradedModule {
    let mut m = GradedModule::new(1);
    for t in l.basis() {
        let (label, g) = match &t {
            None => ("∅".to_string(), 0),
            Some(t) => (t.to_string(), t.maslov() + l.total() as i64),
        };
        m.push(label, MultiGrading::new(g, vec![0])).expect("distinct labels");
    }
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RelationKind {
    Braid,
    PantsB,
    PantsT,
    Basepoint,
    /// Relations injected from outside the cabled construction.
    Vanishing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CabledConfig {
    /// Connects the empty level to level (1,1) through the pair of pants.
    pub bridge_zero_level: bool,
    pub marked_braid: MarkedBraid,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Relation {
    pub kind: RelationKind,
    pub vector: F2Vector,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct RelationCounts {
    pub emitted: BTreeMap<String, usize>,
    /// Relations dropped because one endpoint lies beyond the truncation.
    pub excluded: usize,
    /// Relations that reduce to `0 ~ 0` (identity braid moves, basepoint moves).
    pub vacuous: usize,
}

#[derive(Debug, Clone)]
pub struct CabledPresentation {
    truncation: usize,
    config: CabledConfig,
    levels: Vec<CableLevel>,
    basis: Vec<(CableLevel, Option<ReducedTensor>)>,
    index: HashMap<(CableLevel, Option<ReducedTensor>), usize>,
    relations: Vec<Relation>,
    counts: RelationCounts,
}

impl CabledPresentation {
    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn config(&self) -> CabledConfig {
        self.config
    }

    pub fn levels(&self) -> &[CableLevel] {
        &self.levels
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn counts(&self) -> &RelationCounts {
        &self.counts
    }

    pub fn level_modules(&self) -> Vec<GradedModule> {
        self.levels.iter().map(|&l| level_module(l)).collect()
    }

    /// Shifted Maslov grading and alpha of a global basis element.
    pub fn grading_of(&self, i: usize) -> (i64, i64) {
        let (l, t) = &self.basis[i];
        (l.alpha(), t.as_ref().map_or(0, |t| t.maslov() + l.total() as i64))
    }

    pub fn index_of(&self, level: CableLevel, t: Option<&ReducedTensor>) -> Option<usize> {
        self.index.get(&(level, t.cloned())).copied()
    }

    /// Adds `v ~ 0` for every basis element, as forced by a vanishing pair-of-pants map.
    pub fn inject_vanishing_everywhere(&mut self) {
        for i in 0..self.basis.len() {
            self.relations.push(Relation { kind: RelationKind::Vanishing, vector: F2Vector::unit(i) });
        }
        *self.counts.emitted.entry(format!("{:?}", RelationKind::Vanishing)).or_insert(0) += self.basis.len();
    }

    fn vector(&self, level: CableLevel, c: &Combination) -> F2Vector {
        F2Vector::from_indices(c.terms().map(|t| self.index[&(level, Some(t.clone()))]))
    }
}

/// `F_P(v ⊗ s)`: adjoin an unknot carrying `s`, then split it into a new
/// positive and a new negative copy.
fn pants_image(level: CableLevel, v: &Option<ReducedTensor>, s: VSymbol) -> Result<Combination, CabledError> {
    let new_pos = CableLevel::positive_id(level.k_plus + 1);
    let new_neg = CableLevel::negative_id(level.k_minus + 1);
    let with_u = match v {
        Some(t) => {
            let word = t.word().iter().map(|(&c, &x)| (c, x)).chain([(new_pos, s)]);
            ReducedTensor::new(t.marked(), word, t.extra().to_vec())?
        }
        // The whole link is the unknot itself, which becomes the marked copy.
        None => ReducedTensor::marked_unknot(new_pos),
    };
    Ok(split(&with_u.into(), new_pos, new_neg)?)
}

/// Builds the presentation truncated at `k+ + k- <= n`.
pub fn enumerate_relations(n: usize, config: CabledConfig) -> Result<CabledPresentation, CabledError> {
    let mut levels = Vec::new();
    for k in 0..=n {
        for kp in (0..=k).rev() {
            levels.push(CableLevel::new(kp, k - kp));
        }
    }
    let mut basis = Vec::new();
    let mut index = HashMap::new();
    for &l in &levels {
        for t in l.basis() {
            index.insert((l, t.clone()), basis.len());
            basis.push((l, t));
        }
    }
    let mut p = CabledPresentation {
        truncation: n,
        config,
        levels: levels.clone(),
        basis,
        index,
        relations: Vec::new(),
        counts: RelationCounts::default(),
    };

    type LevelOut = (Vec<Relation>, usize, usize);
    let per_level: Vec<Result<LevelOut, CabledError>> =
        levels.par_iter().map(|&l| level_relations(&p, l)).collect();
    for r in per_level {
        let (rels, excluded, vacuous) = r?;
        p.counts.excluded += excluded;
        p.counts.vacuous += vacuous;
        for rel in rels {
            *p.counts.emitted.entry(format!("{:?}", rel.kind)).or_insert(0) += 1;
            p.relations.push(rel);
        }
    }
    Ok(p)
}

fn level_relations(p: &CabledPresentation, l: CableLevel) -> Result<(Vec<Relation>, usize, usize), CabledError> {
    let mut out = Vec::new();
    let (mut excluded, mut vacuous) = (0, 0);
    let target = CableLevel::new(l.k_plus + 1, l.k_minus + 1);
    let in_range = target.total() <= p.truncation;
    let strands = l.strands();
    for v in l.basis() {
        let me = p.index[&(l, v.clone())];
        let Some(t) = &v else {
            if p.config.bridge_zero_level {
                if in_range {
                    let img = pants_image(l, &v, VSymbol::T)?;
                    out.push(checked(p, RelationKind::PantsT, l, p.vector(target, &img))?);
                } else {
                    excluded += 1;
                }
            }
            continue;
        };
        let x: Combination = t.clone().into();
        for i in 0..strands.len().saturating_sub(1) {
            if strands[i].1 != strands[i + 1].1 {
                continue;
            }
            let img = braid_action(&x, i, &strands, p.config.marked_braid)?;
            let rel = F2Vector::unit(me).add(&p.vector(l, &img));
            if rel.is_zero() {
                vacuous += 1;
            } else {
                out.push(checked(p, RelationKind::Braid, l, rel)?);
            }
        }
        // Basepoint moving acts as the identity on unlinks.
        vacuous += t.components().len();
        if !in_range {
            excluded += 2;
            continue;
        }
        let img_b = pants_image(l, &v, VSymbol::B)?;
        out.push(checked(p, RelationKind::PantsB, l, F2Vector::unit(me).add(&p.vector(target, &img_b)))?);
        let img_t = pants_image(l, &v, VSymbol::T)?;
        let rel_t = p.vector(target, &img_t);
        if !rel_t.is_zero() {
            out.push(checked(p, RelationKind::PantsT, l, rel_t)?);
        }
    }
    Ok((out, excluded, vacuous))
}

fn checked(p: &CabledPresentation, kind: RelationKind, level: CableLevel, v: F2Vector) -> Result<Relation, CabledError> {
    let mut gr = v.support().iter().map(|&i| p.grading_of(i));
    if let Some(first) = gr.next() {
        if let Some(bad) = gr.find(|g| *g != first) {
            return Err(CabledError::GradingViolation {
                kind,
                level,
                detail: format!("(alpha, M) {first:?} vs {bad:?}"),
            });
        }
    }
    Ok(Relation { kind, vector: v })
}

/// Quotient dimension for every `(alpha, M)` block with nonzero ambient dimension.
pub fn truncated_quotient(p: &CabledPresentation) -> BTreeMap<(i64, i64), usize> {
    let mut blocks: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
    let local: Vec<usize> = (0..p.basis.len())
        .map(|i| {
            let b = blocks.entry(p.grading_of(i)).or_default();
            b.push(i);
            b.len() - 1
        })
        .collect();
    let mut rels: BTreeMap<(i64, i64), Vec<F2Vector>> = BTreeMap::new();
    for r in &p.relations {
        if let Some(&first) = r.vector.support().first() {
            rels.entry(p.grading_of(first)).or_default().push(r.vector.remap(|i| local[i]));
        }
    }
    let keys: Vec<(i64, i64)> = blocks.keys().copied().collect();
    keys.into_par_iter()
        .map(|k| {
            let empty = Vec::new();
            (k, quotient_dim(blocks[&k].len(), rels.get(&k).unwrap_or(&empty)))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

/// Shape of the profile of one alpha sector across truncations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaProfile {
    pub alpha: i64,
    pub truncations: Vec<usize>,
    /// Maslov grading -> quotient dimension at each truncation.
    pub dims: BTreeMap<i64, Vec<usize>>,
    /// Gradings whose dimension agrees at the last two truncations.
    pub stable: BTreeMap<i64, usize>,
    pub top_grading: Option<i64>,
    pub bottom_grading: Option<i64>,
    /// The top nonzero grading is the same at the last two truncations.
    pub bounded_above: bool,
    /// The bottom nonzero grading is the same at the last two truncations.
    pub bounded_below: bool,
    /// Nonzero stable dimensions are all 1 and their gradings are consecutive.
    pub one_dimensional_consecutive: bool,
    /// Every grading within `window` of the top is stable.
    pub top_window_stable: bool,
    pub bottom_window_stable: bool,
    pub flags: Vec<String>,
}

impl AlphaProfile {
    /// The shape asserted for the cabled unknot: one copy of F2 in each
    /// grading going down from a fixed top, with no growth at the top.
    pub fn matches_bounded_above_profile(&self) -> bool {
        self.bounded_above && self.top_window_stable && self.one_dimensional_consecutive
    }

    /// The same shape reflected: fixed bottom, one copy in each grading upward.
    pub fn matches_bounded_below_profile(&self) -> bool {
        self.bounded_below && self.bottom_window_stable && self.one_dimensional_consecutive
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StabilizationReport {
    pub config: CabledConfig,
    pub truncations: Vec<usize>,
    pub window: i64,
    pub profiles: Vec<AlphaProfile>,
}

impl StabilizationReport {
    pub fn profile(&self, alpha: i64) -> Option<&AlphaProfile> {
        self.profiles.iter().find(|p| p.alpha == alpha)
    }
}

/// Computes quotient dimensions for each truncation and summarizes each alpha
/// sector. `window` is how far from the top and bottom stability is demanded.
pub fn stabilization_report(
    n_list: &[usize],
    config: CabledConfig,
    alphas: Option<&[i64]>,
    window: i64,
) -> Result<StabilizationReport, CabledError> {
    if n_list.is_empty() {
        return Err(CabledError::EmptyTruncations);
    }
    if n_list[0] == 0 || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CabledError::BadTruncations(n_list.to_vec()));
    }
    let quotients: Vec<BTreeMap<(i64, i64), usize>> = n_list
        .iter()
        .map(|&n| enumerate_relations(n, config).map(|p| truncated_quotient(&p)))
        .collect::<Result<_, _>>()?;
    let nmax = *n_list.last().unwrap() as i64;
    let alpha_list: Vec<i64> = match alphas {
        Some(a) => a.to_vec(),
        None => (-nmax..=nmax).collect(),
    };
    let profiles = alpha_list
        .into_iter()
        .map(|alpha| profile_for(alpha, n_list, &quotients, window))
        .collect();
    Ok(StabilizationReport { config, truncations: n_list.to_vec(), window, profiles })
}

fn nonzero_range(q: &BTreeMap<(i64, i64), usize>, alpha: i64) -> Option<(i64, i64)> {
    let ms: Vec<i64> = q.iter().filter(|((a, _), &d)| *a == alpha && d > 0).map(|((_, m), _)| *m).collect();
    Some((*ms.iter().min()?, *ms.iter().max()?))
}

fn profile_for(alpha: i64, n_list: &[usize], quotients: &[BTreeMap<(i64, i64), usize>], window: i64) -> AlphaProfile {
    let mut dims: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for q in quotients {
        for &(_, m) in q.keys().filter(|(a, _)| *a == alpha) {
            dims.entry(m).or_insert_with(|| vec![0; quotients.len()]);
        }
    }
    for (i, q) in quotients.iter().enumerate() {
        for (m, row) in dims.iter_mut() {
            row[i] = q.get(&(alpha, *m)).copied().unwrap_or(0);
        }
    }
    let last = quotients.len() - 1;
    let stable: BTreeMap<i64, usize> = if last == 0 {
        BTreeMap::new()
    } else {
        dims.iter().filter(|(_, r)| r[last] == r[last - 1]).map(|(&m, r)| (m, r[last])).collect()
    };
    let mut flags = Vec::new();
    for (m, r) in &dims {
        let up = r.windows(2).all(|w| w[0] <= w[1]);
        let down = r.windows(2).all(|w| w[0] >= w[1]);
        if !up && !down {
            flags.push(format!("NonMonotonicInstability at M={m}: {r:?}"));
        }
    }
    let cur = nonzero_range(&quotients[last], alpha);
    let prev = if last > 0 { nonzero_range(&quotients[last - 1], alpha) } else { None };
    let (bounded_above, bounded_below) = match (cur, prev) {
        (Some(c), Some(p)) => (c.1 == p.1, c.0 == p.0),
        _ => (false, false),
    };
    let window_stable = |center: Option<i64>, dir: i64| {
        last > 0
            && center.is_some_and(|c| (0..=window).all(|d| dims.get(&(c + dir * d)).is_none_or(|r| r[last] == r[last - 1])))
    };
    let nonzero: Vec<(i64, usize)> = stable.iter().filter(|(_, &d)| d > 0).map(|(&m, &d)| (m, d)).collect();
    let one_dimensional_consecutive = !nonzero.is_empty()
        && nonzero.iter().all(|&(_, d)| d == 1)
        && nonzero.windows(2).all(|w| w[1].0 == w[0].0 + 1);
    let top_window_stable = window_stable(cur.map(|c| c.1), -1);
    let bottom_window_stable = window_stable(cur.map(|c| c.0), 1);
    AlphaProfile {
        alpha,
        truncations: n_list.to_vec(),
        dims,
        stable,
        top_grading: cur.map(|c| c.1),
        bottom_grading: cur.map(|c| c.0),
        bounded_above,
        bounded_below,
        one_dimensional_consecutive,
        top_window_stable,
        bottom_window_stable,
        flags,
    }
}

/// JSON form of one sector: `{"alpha", "truncations", "dims", "stable", ...}`.
pub fn profile_json(p: &AlphaProfile) -> serde_json::Value {
    let dims: serde_json::Map<String, serde_json::Value> =
        p.dims.iter().map(|(m, r)| (m.to_string(), serde_json::json!(r))).collect();
    let stable: serde_json::Map<String, serde_json::Value> =
        p.stable.iter().map(|(m, d)| (m.to_string(), serde_json::json!(d))).collect();
    serde_json::json!({
        "alpha": p.alpha,
        "truncations": p.truncations,
        "dims": dims,
        "stable": stable,
        "top_grading": p.top_grading,
        "bottom_grading": p.bottom_grading,
        "bounded_above": p.bounded_above,
        "bounded_below": p.bounded_below,
        "one_dimensional_consecutive": p.one_dimensional_consecutive,
        "flags": p.flags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // Hand-derived oracle for the identity braid convention. Braid coinvariants
    // reduce a level to classes by B-counts; pants_T identifies classes with
    // equal total B-count b one level up; pants_B sends b to b + 2 at equal
    // Maslov grading k - b. Every grading between 1 and the top level's k is
    // therefore hit once, and the empty level adds one class at M = 0.
    fn oracle(alpha: i64, m: i64, n: usize, bridge: bool) -> usize {
        let a = alpha.unsigned_abs() as usize;
        if a > n {
            return 0;
        }
        let top = (a + 2 * ((n - a) / 2)) as i64;
        let base = usize::from(1 <= m && m <= top);
        if alpha != 0 {
            return base;
        }
        match m {
            0 => 1,
            1 if bridge && n >= 2 => 0,
            _ => base,
        }
    }

    #[test]
    fn level_modules() {
        assert_eq!(level_module(CableLevel::new(1, 0)).maslov_dims(), BTreeMap::from([(1, 1)]));
        assert_eq!(level_module(CableLevel::new(1, 1)).maslov_dims(), BTreeMap::from([(1, 1), (2, 1)]));
        for kp in 0..4 {
            for km in 0..4 {
                let k = kp + km;
                if k > 0 {
                    assert_eq!(level_module(CableLevel::new(kp, km)).dim(), 1 << (k - 1));
                }
            }
        }
    }

    #[test]
    fn no_braid_relations_at_level_one_one() {
        let p = enumerate_relations(1, CabledConfig::default()).unwrap();
        assert!(p.relations().is_empty());
        let q = truncated_quotient(&p);
        assert_eq!(q[&(1, 1)], 1);
        let p2 = enumerate_relations(2, CabledConfig::default()).unwrap();
        assert_eq!(p2.counts().emitted.get("Braid"), None);
    }

    #[test]
    fn pants_b_from_level_one_zero() {
        let p = enumerate_relations(3, CabledConfig::default()).unwrap();
        let src = p.index_of(CableLevel::new(1, 0), Some(&ReducedTensor::marked_unknot(0))).unwrap();
        let dst_t = ReducedTensor::new(0, [(1, VSymbol::B), (2, VSymbol::B)], vec![]).unwrap();
        let dst = p.index_of(CableLevel::new(2, 1), Some(&dst_t)).unwrap();
        let want = F2Vector::from_indices([src, dst]);
        assert!(p.relations().iter().any(|r| r.kind == RelationKind::PantsB && r.vector == want));
    }

    #[test]
    fn quotient_matches_hand_oracle() {
        for bridge in [false, true] {
            let cfg = CabledConfig { bridge_zero_level: bridge, ..Default::default() };
            for n in 1..=6 {
                let q = truncated_quotient(&enumerate_relations(n, cfg).unwrap());
                for (&(a, m), &d) in &q {
                    assert_eq!(d, oracle(a, m, n, bridge), "alpha={a} M={m} N={n} bridge={bridge}");
                }
                let total: usize = (-(n as i64)..=n as i64)
                    .flat_map(|a| (-1..=n as i64 + 1).map(move |m| (a, m)))
                    .map(|(a, m)| oracle(a, m, n, bridge))
                    .sum();
                assert_eq!(q.values().sum::<usize>(), total);
            }
        }
    }

    #[test]
    fn zero_marked_braid_kills_positive_alpha_sector() {
        let cfg = CabledConfig { marked_braid: MarkedBraid::Zero, ..Default::default() };
        let q = truncated_quotient(&enumerate_relations(5, cfg).unwrap());
        assert!(q.iter().filter(|((a, _), _)| *a >= 1).all(|(_, &d)| d == 0));
    }

    #[test]
    fn relation_order_does_not_matter() {
        let mut p = enumerate_relations(5, CabledConfig::default()).unwrap();
        let before = truncated_quotient(&p);
        p.relations.reverse();
        assert_eq!(truncated_quotient(&p), before);
    }

    #[test]
    fn report_contract() {
        assert_eq!(
            stabilization_report(&[], CabledConfig::default(), None, 3).unwrap_err(),
            CabledError::EmptyTruncations
        );
        assert!(matches!(
            stabilization_report(&[4, 4], CabledConfig::default(), None, 3),
            Err(CabledError::BadTruncations(_))
        ));
        let r = stabilization_report(&[4, 6], CabledConfig::default(), Some(&[2, -2]), 3).unwrap();
        assert_eq!(r.profiles.len(), 2);
        assert_eq!(r.profile(2).unwrap().dims, r.profile(-2).unwrap().dims);
        assert!(r.profiles.iter().all(|p| p.flags.is_empty()));
    }

    #[test]
    fn vanishing_injection_zeroes_everything() {
        let mut p = enumerate_relations(4, CabledConfig::default()).unwrap();
        p.inject_vanishing_everywhere();
        assert!(truncated_quotient(&p).values().all(|&d| d == 0));
    }
}
