//! Closed-form link Floer homology of unlinks with a marked component, and
//! the elementary cobordism maps between them.
//!
//! A basis element assigns `T` or `B` to every non-marked component, plus a
//! stack of `θ`/`ξ` factors per component for each extra basepoint pair. The
//! maps agree with X-reduced Khovanov homology of unlinks, where `T` plays
//! the unit `1` and `B` plays `X`, reduced at the marked component.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graded::{GradedModule, MultiGrading};

pub type ComponentId = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TqftError {
    #[error("component {0} already present")]
    DuplicateComponent(ComponentId),
    #[error("component {0} not present")]
    UnknownComponent(ComponentId),
    #[error("component {0} is the marked component")]
    MarkedComponent(ComponentId),
    #[error("component {0} carries extra basepoint factors")]
    HasExtraFactors(ComponentId),
    #[error("no extra basepoint factor on component {0} to destabilize")]
    MissingExtra(ComponentId),
    #[error("strands {0} and {1} are not adjacent strands of one cable family")]
    BadTransposition(usize, usize),
    #[error("invalid component pair ({0}, {1})")]
    InvalidPair(ComponentId, ComponentId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum VSymbol {
    T,
    B,
}

impl VSymbol {
    pub fn maslov(self) -> i64 {
        match self {
            VSymbol::T => 0,
            VSymbol::B => -1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum WSymbol {
    Theta,
    Xi,
}

impl WSymbol {
    pub fn maslov(self) -> i64 {
        match self {
            WSymbol::Theta => 0,
            WSymbol::Xi => -1,
        }
    }

    /// Doubled Alexander grading on the carrying component.
    pub fn alex2(self) -> i64 {
        match self {
            WSymbol::Theta => 1,
            WSymbol::Xi => -1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ReducedTensor {
    components: Vec<ComponentId>,
    marked: ComponentId,
    word: BTreeMap<ComponentId, VSymbol>,
    extra: Vec<(ComponentId, WSymbol)>,
}

impl ReducedTensor {
    /// The generator of a single marked unknot.
    pub fn marked_unknot(marked: ComponentId) -> Self {
        ReducedTensor { components: vec![marked], marked, word: BTreeMap::new(), extra: Vec::new() }
    }

    pub fn new(
        marked: ComponentId,
        word: impl IntoIterator<Item = (ComponentId, VSymbol)>,
        extra: Vec<(ComponentId, WSymbol)>,
    ) -> Result<Self, TqftError> {
        let word: BTreeMap<ComponentId, VSymbol> = word.into_iter().collect();
        if word.contains_key(&marked) {
            return Err(TqftError::MarkedComponent(marked));
        }
        let mut components: Vec<ComponentId> = word.keys().copied().collect();
        components.push(marked);
        components.sort_unstable();
        if let Some(&(c, _)) = extra.iter().find(|(c, _)| components.binary_search(c).is_err()) {
            return Err(TqftError::UnknownComponent(c));
        }
        Ok(ReducedTensor { components, marked, word, extra })
    }

    pub fn components(&self) -> &[ComponentId] {
        &self.components
    }

    pub fn marked(&self) -> ComponentId {
        self.marked
    }

    pub fn word(&self) -> &BTreeMap<ComponentId, VSymbol> {
        &self.word
    }

    pub fn extra(&self) -> &[(ComponentId, WSymbol)] {
        &self.extra
    }

    pub fn symbol(&self, c: ComponentId) -> Option<VSymbol> {
        self.word.get(&c).copied()
    }

    pub fn has(&self, c: ComponentId) -> bool {
        self.components.binary_search(&c).is_ok()
    }

    pub fn maslov(&self) -> i64 {
        self.word.values().map(|s| s.maslov()).sum::<i64>() + self.extra.iter().map(|(_, w)| w.maslov()).sum::<i64>()
    }

    /// Doubled Alexander grading of component `c`.
    pub fn alexander(&self, c: ComponentId) -> i64 {
        self.extra.iter().filter(|(d, _)| *d == c).map(|(_, w)| w.alex2()).sum()
    }

    /// Grading with one Alexander slot per entry of `slots`.
    pub fn grading(&self, slots: &[ComponentId]) -> MultiGrading {
        MultiGrading::new(self.maslov(), slots.iter().map(|&c| self.alexander(c)).collect())
    }

    /// Grading with a single slot summing every component.
    pub fn collapsed_grading(&self) -> MultiGrading {
        MultiGrading::new(self.maslov(), vec![self.extra.iter().map(|(_, w)| w.alex2()).sum()])
    }

    fn insert_component(&mut self, c: ComponentId) -> Result<(), TqftError> {
        match self.components.binary_search(&c) {
            Ok(_) => Err(TqftError::DuplicateComponent(c)),
            Err(pos) => {
                self.components.insert(pos, c);
                Ok(())
            }
        }
    }

    fn remove_component(&mut self, c: ComponentId) {
        if let Ok(pos) = self.components.binary_search(&c) {
            self.components.remove(pos);
        }
        self.word.remove(&c);
    }

    fn require(&self, c: ComponentId) -> Result<(), TqftError> {
        if self.has(c) {
            Ok(())
        } else {
            Err(TqftError::UnknownComponent(c))
        }
    }

    fn with_symbol(&self, c: ComponentId, s: VSymbol) -> Self {
        let mut t = self.clone();
        t.word.insert(c, s);
        t
    }

    /// Every basis element on the given components, marked component and
    /// extra pair counts.
    pub fn basis(
        components: &[ComponentId],
        marked: ComponentId,
        extras: &[(ComponentId, usize)],
    ) -> Result<Vec<ReducedTensor>, TqftError> {
        let mut seen = BTreeSet::new();
        for &c in components {
            if !seen.insert(c) {
                return Err(TqftError::DuplicateComponent(c));
            }
        }
        if !seen.contains(&marked) {
            return Err(TqftError::UnknownComponent(marked));
        }
        let unmarked: Vec<ComponentId> = components.iter().copied().filter(|&c| c != marked).collect();
        let slots: Vec<ComponentId> = extras.iter().flat_map(|&(c, k)| std::iter::repeat_n(c, k)).collect();
        let mut out = Vec::new();
        for wmask in 0u64..(1 << unmarked.len()) {
            for emask in 0u64..(1 << slots.len()) {
                let word = unmarked
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| (c, if wmask >> i & 1 == 0 { VSymbol::T } else { VSymbol::B }));
                let extra = slots
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| (c, if emask >> i & 1 == 0 { WSymbol::Theta } else { WSymbol::Xi }))
                    .collect();
                out.push(ReducedTensor::new(marked, word, extra)?);
            }
        }
        Ok(out)
    }

    /// Graded module of the unlink, with Alexander slots ordered as `components`.
    pub fn graded_module(
        components: &[ComponentId],
        marked: ComponentId,
        extras: &[(ComponentId, usize)],
    ) -> Result<GradedModule, TqftError> {
        let basis = Self::basis(components, marked, extras)?;
        let mut m = GradedModule::new(components.len());
        for t in basis {
            m.push(t.to_string(), t.grading(components)).expect("labels are unique");
        }
        Ok(m)
    }
}

impl fmt::Display for ReducedTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[*{}", self.marked)?;
        for (c, s) in &self.word {
            write!(f, " {c}:{s:?}")?;
        }
        for (c, w) in &self.extra {
            let s = match w {
                WSymbol::Theta => "θ",
                WSymbol::Xi => "ξ",
            };
            write!(f, " {c}:{s}")?;
        }
        f.write_str("]")
    }
}

/// An F2 linear combination of basis tensors.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Combination(BTreeSet<ReducedTensor>);

impl Combination {
    pub fn zero() -> Self {
        Combination(BTreeSet::new())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &ReducedTensor> {
        self.0.iter()
    }

    pub fn toggle(&mut self, t: ReducedTensor) {
        if !self.0.remove(&t) {
            self.0.insert(t);
        }
    }

    pub fn add(&self, other: &Combination) -> Combination {
        let mut out = self.clone();
        for t in &other.0 {
            out.toggle(t.clone());
        }
        out
    }

    /// Maslov grading if every term shares it.
    pub fn homogeneous_maslov(&self) -> Option<i64> {
        let mut it = self.0.iter().map(ReducedTensor::maslov);
        let first = it.next()?;
        it.all(|m| m == first).then_some(first)
    }
}

impl From<ReducedTensor> for Combination {
    fn from(t: ReducedTensor) -> Self {
        Combination(BTreeSet::from([t]))
    }
}

impl FromIterator<ReducedTensor> for Combination {
    fn from_iter<I: IntoIterator<Item = ReducedTensor>>(iter: I) -> Self {
        let mut c = Combination::zero();
        for t in iter {
            c.toggle(t);
        }
        c
    }
}

fn linear(
    x: &Combination,
    f: impl Fn(&ReducedTensor) -> Result<Combination, TqftError>,
) -> Result<Combination, TqftError> {
    let mut out = Combination::zero();
    for t in x.terms() {
        for s in f(t)?.0 {
            out.toggle(s);
        }
    }
    Ok(out)
}

/// Adds an unknotted component carrying `T`.
pub fn birth(x: &Combination, new: ComponentId) -> Result<Combination, TqftError> {
    linear(x, |t| {
        let mut s = t.clone();
        s.insert_component(new)?;
        s.word.insert(new, VSymbol::T);
        Ok(s.into())
    })
}

/// Caps off a non-marked component: `B` is deleted, `T` goes to zero.
pub fn death(x: &Combination, c: ComponentId) -> Result<Combination, TqftError> {
    linear(x, |t| {
        t.require(c)?;
        if c == t.marked {
            return Err(TqftError::MarkedComponent(c));
        }
        if t.extra.iter().any(|(d, _)| *d == c) {
            return Err(TqftError::HasExtraFactors(c));
        }
        Ok(match t.word[&c] {
            VSymbol::T => Combination::zero(),
            VSymbol::B => {
                let mut s = t.clone();
                s.remove_component(c);
                s.into()
            }
        })
    })
}

/// Merges components `a` and `b`. The marked component survives a merge with
/// it; otherwise `a` survives.
pub fn merge(x: &Combination, a: ComponentId, b: ComponentId) -> Result<Combination, TqftError> {
    if a == b {
        return Err(TqftError::InvalidPair(a, b));
    }
    linear(x, |t| {
        t.require(a)?;
        t.require(b)?;
        let (keep, gone) = if b == t.marked { (b, a) } else { (a, b) };
        let mut s = t.clone();
        let absorbed = s.word[&gone];
        s.remove_component(gone);
        for e in s.extra.iter_mut() {
            if e.0 == gone {
                e.0 = keep;
            }
        }
        if keep == t.marked {
            return Ok(match absorbed {
                VSymbol::T => s.into(),
                VSymbol::B => Combination::zero(),
            });
        }
        Ok(match (t.word[&keep], absorbed) {
            (VSymbol::B, VSymbol::B) => Combination::zero(),
            (VSymbol::T, VSymbol::T) => s.with_symbol(keep, VSymbol::T).into(),
            _ => s.with_symbol(keep, VSymbol::B).into(),
        })
    })
}

/// Splits component `a`, creating `new`.
pub fn split(x: &Combination, a: ComponentId, new: ComponentId) -> Result<Combination, TqftError> {
    linear(x, |t| {
        t.require(a)?;
        let mut s = t.clone();
        s.insert_component(new)?;
        if a == t.marked {
            return Ok(s.with_symbol(new, VSymbol::B).into());
        }
        Ok(match t.word[&a] {
            VSymbol::B => s.with_symbol(new, VSymbol::B).into(),
            VSymbol::T => [
                s.with_symbol(a, VSymbol::T).with_symbol(new, VSymbol::B),
                s.with_symbol(a, VSymbol::B).with_symbol(new, VSymbol::T),
            ]
            .into_iter()
            .collect(),
        })
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Positive,
    Negative,
}

/// How a braid generator through the marked strand acts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum MarkedBraid {
    #[default]
    Identity,
    Zero,
}

/// Applies the generator exchanging strands `i` and `i + 1`.
pub fn braid_action(
    x: &Combination,
    i: usize,
    strands: &[(ComponentId, Family)],
    mode: MarkedBraid,
) -> Result<Combination, TqftError> {
    let (Some(&(ca, fa)), Some(&(cb, fb))) = (strands.get(i), strands.get(i + 1)) else {
        return Err(TqftError::BadTransposition(i, i + 1));
    };
    if fa != fb {
        return Err(TqftError::BadTransposition(i, i + 1));
    }
    linear(x, |t| {
        t.require(ca)?;
        t.require(cb)?;
        if ca == t.marked || cb == t.marked {
            return Ok(match mode {
                MarkedBraid::Identity => t.clone().into(),
                MarkedBraid::Zero => Combination::zero(),
            });
        }
        let mut s = t.with_symbol(ca, t.word[&cb]).with_symbol(cb, t.word[&ca]);
        for e in s.extra.iter_mut() {
            if e.0 == ca {
                e.0 = cb;
            } else if e.0 == cb {
                e.0 = ca;
            }
        }
        Ok(s.into())
    })
}

/// Moving a basepoint `twists` times around a component of an unlink.
pub fn basepoint_move(x: &Combination, c: ComponentId, _twists: i64) -> Result<Combination, TqftError> {
    linear(x, |t| {
        t.require(c)?;
        Ok(t.clone().into())
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QuasiStab {
    SPlus,
    SMinus,
    TPlus,
    TMinus,
}

impl QuasiStab {
    pub const ALL: [QuasiStab; 4] = [QuasiStab::SPlus, QuasiStab::SMinus, QuasiStab::TPlus, QuasiStab::TMinus];

    /// (ΔM, doubled ΔA on the component) on every element not sent to zero.
    pub fn shift(self) -> (i64, i64) {
        match self {
            QuasiStab::SPlus => (0, 1),
            QuasiStab::TPlus => (-1, -1),
            QuasiStab::SMinus => (1, 1),
            QuasiStab::TMinus => (0, -1),
        }
    }
}

/// Quasi-stabilization adds a basepoint pair on `c`; destabilization removes
/// the most recently added one.
pub fn quasi_stab(x: &Combination, kind: QuasiStab, c: ComponentId) -> Result<Combination, TqftError> {
    linear(x, |t| {
        t.require(c)?;
        let mut s = t.clone();
        match kind {
            QuasiStab::SPlus => s.extra.push((c, WSymbol::Theta)),
            QuasiStab::TPlus => s.extra.push((c, WSymbol::Xi)),
            QuasiStab::SMinus | QuasiStab::TMinus => {
                let pos = s.extra.iter().rposition(|(d, _)| *d == c).ok_or(TqftError::MissingExtra(c))?;
                let (_, w) = s.extra.remove(pos);
                let survives = matches!(
                    (kind, w),
                    (QuasiStab::SMinus, WSymbol::Xi) | (QuasiStab::TMinus, WSymbol::Theta)
                );
                if !survives {
                    return Ok(Combination::zero());
                }
            }
        }
        Ok(s.into())
    })
}
