//! Planar forests `G^a_{n,k}`: a ordered roots, n ordered internal vertices
//! each carrying k + 1 ordered children, and tails filling every free slot.
//!
//! Every root has a single child slot. An internal vertex v_i may only hang
//! below a root or below some v_j with j > i, so forests are grown by
//! attaching v_n first and v_1 last. When v_i is placed there are
//! a + (n - i)k free tails to choose from, which gives
//! `|G^a_{n,k}| = a(a + k)…(a + (n-1)k) = (a)_{n,k}`.

use std::collections::HashSet;
use std::fmt::{self, Write as _};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ForestFamily {
    pub a: u32,
    pub n: u32,
    pub k: u32,
}

impl ForestFamily {
    pub fn new(a: u32, n: u32, k: u32) -> Result<Self> {
        if a == 0 || k == 0 {
            return Err(Error::domain(format!(
                "forest families need a, k ≥ 1, got a = {a}, k = {k}"
            )));
        }
        Ok(ForestFamily { a, n, k })
    }

    pub fn tails(&self) -> u64 {
        u64::from(self.a) + u64::from(self.n) * u64::from(self.k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VertexRef {
    Root(u32),
    Internal(u32),
}

impl fmt::Display for VertexRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexRef::Root(i) => write!(f, "r{i}"),
            VertexRef::Internal(i) => write!(f, "v{i}"),
        }
    }
}

/// Where an internal vertex hangs: its parent and its 1-based position in
/// the parent's child order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Attachment {
    pub parent: VertexRef,
    pub slot: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PlanarForest {
    roots: u32,
    k: u32,
    /// `internal[i - 1]` places v_i.
    internal: Vec<Attachment>,
}

impl PlanarForest {
    pub fn new(roots: u32, k: u32, internal: Vec<Attachment>) -> Result<Self> {
        let forest = PlanarForest { roots, k, internal };
        forest.validate()?;
        Ok(forest)
    }

    pub fn roots(&self) -> u32 {
        self.roots
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn internal(&self) -> &[Attachment] {
        &self.internal
    }

    /// The parent map N; roots are their own parent.
    pub fn parent(&self, v: VertexRef) -> Option<VertexRef> {
        match v {
            VertexRef::Root(i) if (1..=self.roots).contains(&i) => Some(v),
            VertexRef::Internal(i) if i >= 1 && (i as usize) <= self.internal.len() => {
                Some(self.internal[i as usize - 1].parent)
            }
            _ => None,
        }
    }

    fn slots_of(&self, v: VertexRef) -> u32 {
        match v {
            VertexRef::Root(_) => 1,
            VertexRef::Internal(_) => self.k + 1,
        }
    }

    /// Checks the structural invariants of a planar forest.
    pub fn validate(&self) -> Result<()> {
        if self.roots == 0 || self.k == 0 {
            return Err(Error::InvariantViolation(
                "need at least one root and k ≥ 1".into(),
            ));
        }
        let n = self.internal.len() as u32;
        let mut occupied = HashSet::new();
        for (idx, att) in self.internal.iter().enumerate() {
            let i = idx as u32 + 1;
            match att.parent {
                VertexRef::Root(r) if r == 0 || r > self.roots => {
                    return Err(Error::InvariantViolation(format!(
                        "v{i} hangs below missing root r{r}"
                    )));
                }
                VertexRef::Internal(j) if j > n => {
                    return Err(Error::InvariantViolation(format!(
                        "v{i} hangs below missing v{j}"
                    )));
                }
                VertexRef::Internal(j) if j <= i => {
                    // also rules out cycles: parent indices strictly increase
                    return Err(Error::InvariantViolation(format!(
                        "N(v{i}) = v{j} breaks the index order"
                    )));
                }
                _ => {}
            }
            if att.slot == 0 || att.slot > self.slots_of(att.parent) {
                return Err(Error::InvariantViolation(format!(
                    "v{i} uses slot {} of {}, which has {} slots",
                    att.slot,
                    att.parent,
                    self.slots_of(att.parent)
                )));
            }
            if !occupied.insert(*att) {
                return Err(Error::InvariantViolation(format!(
                    "slot {} of {} is used twice",
                    att.slot, att.parent
                )));
            }
        }
        Ok(())
    }

    /// Checks membership in `family`.
    pub fn validate_in(&self, family: &ForestFamily) -> Result<()> {
        self.validate()?;
        if self.roots != family.a || self.internal.len() as u32 != family.n || self.k != family.k {
            return Err(Error::InvariantViolation(format!(
                "forest has a = {}, n = {}, k = {}, family is a = {}, n = {}, k = {}",
                self.roots,
                self.internal.len(),
                self.k,
                family.a,
                family.n,
                family.k
            )));
        }
        Ok(())
    }

    /// Number of free slots. Each internal vertex adds k + 1 slots and fills one.
    pub fn tail_count(&self) -> Result<u64> {
        self.validate()?;
        let n = self.internal.len() as u64;
        Ok(u64::from(self.roots) + n * u64::from(self.k + 1) - n)
    }

    /// Free tails in scan order: roots by index, then internal vertices by
    /// index, then child position.
    pub fn tails(&self) -> Vec<Attachment> {
        let occupied: HashSet<Attachment> = self.internal.iter().copied().collect();
        let roots = (1..=self.roots).map(VertexRef::Root);
        let inner = (1..=self.internal.len() as u32).map(VertexRef::Internal);
        roots
            .chain(inner)
            .flat_map(|v| (1..=self.slots_of(v)).map(move |slot| Attachment { parent: v, slot }))
            .filter(|t| !occupied.contains(t))
            .collect()
    }

    /// Line-oriented canonical form; two forests are equal iff these match.
    pub fn to_canonical(&self) -> String {
        let mut out = String::new();
        for r in 1..=self.roots {
            writeln!(out, "root {r}").unwrap();
        }
        for (idx, att) in self.internal.iter().enumerate() {
            writeln!(
                out,
                "node {} parent={} slot={}",
                idx + 1,
                att.parent,
                att.slot
            )
            .unwrap();
        }
        let tails = u64::from(self.roots) + self.internal.len() as u64 * u64::from(self.k);
        writeln!(out, "tails={tails}").unwrap();
        out
    }
}

/// `(a)_{n,k}` in exact integer arithmetic.
pub fn count(family: &ForestFamily) -> BigUint {
    (0..family.n)
        .map(|i| BigUint::from(family.a) + BigUint::from(i) * BigUint::from(family.k))
        .product()
}

/// Lazily enumerates `G^a_{n,k}`, refusing families with more than `cap` members.
pub fn enumerate(family: &ForestFamily, cap: u64) -> Result<ForestIter> {
    let total = count(family);
    if total > BigUint::from(cap) {
        return Err(Error::CapExceeded { count: total, cap });
    }
    Ok(ForestIter {
        family: *family,
        choices: vec![0; family.n as usize],
        remaining: total.to_u64().expect("bounded by cap"),
    })
}

/// Odometer over attachment choices. Step j (attaching v_{n-j}) picks one
/// of a + jk tails; the last step turns fastest.
#[derive(Debug, Clone)]
pub struct ForestIter {
    family: ForestFamily,
    choices: Vec<u64>,
    remaining: u64,
}

impl ForestIter {
    fn build(&self) -> PlanarForest {
        let ForestFamily { a, n, k } = self.family;
        // unplaced vertices sit in slot 0 of a missing root, which never
        // collides with a real tail
        let unplaced = Attachment {
            parent: VertexRef::Root(0),
            slot: 0,
        };
        let mut forest = PlanarForest {
            roots: a,
            k,
            internal: vec![unplaced; n as usize],
        };
        for (step, &choice) in self.choices.iter().enumerate() {
            let label = n - step as u32;
            let att = forest
                .tails()
                .into_iter()
                .filter(|t| match t.parent {
                    VertexRef::Internal(j) => j > label,
                    VertexRef::Root(_) => true,
                })
                .nth(choice as usize)
                .expect("choice within the number of free tails");
            forest.internal[label as usize - 1] = att;
        }
        forest
    }

    fn advance(&mut self) {
        let ForestFamily { a, k, .. } = self.family;
        for step in (0..self.choices.len()).rev() {
            let width = u64::from(a) + step as u64 * u64::from(k);
            self.choices[step] += 1;
            if self.choices[step] < width {
                return;
            }
            self.choices[step] = 0;
        }
    }
}

impl Iterator for ForestIter {
    type Item = PlanarForest;

    fn next(&mut self) -> Option<PlanarForest> {
        if self.remaining == 0 {
            return None;
        }
        let forest = self.build();
        self.remaining -= 1;
        self.advance();
        Some(forest)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = self.remaining as usize;
        (r, Some(r))
    }
}

impl ExactSizeIterator for ForestIter {}

/// `∏_j |G^{a_j}_{n,k_j}| / ∏_i |G^{b_i}_{n,s_i}|` as an exact rational.
pub fn derivative_ratio(a: &[u32], k: &[u32], b: &[u32], s: &[u32], n: u32) -> Result<BigRational> {
    if a.len() != k.len() || b.len() != s.len() {
        return Err(Error::domain("parameter lengths differ"));
    }
    let product = |xs: &[u32], steps: &[u32]| -> Result<BigInt> {
        let mut acc = BigUint::one();
        for (&x, &step) in xs.iter().zip(steps) {
            acc *= count(&ForestFamily::new(x, n, step)?);
        }
        Ok(BigInt::from(acc))
    };
    let num = product(a, k)?;
    let den = product(b, s)?;
    debug_assert!(!den.is_zero());
    Ok(BigRational::new(num, den))
}
