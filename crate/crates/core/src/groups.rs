//! Exact arithmetic for the finitely generated groups used as test beds.
//!
//! Every provider keeps elements in a canonical form so that equality of
//! elements is equality of representations, which is what makes balls
//! hashable. Supported providers:
//!
//! * free groups of finite rank (freely reduced words),
//! * free abelian groups `Z^d` (integer vectors),
//! * finite cyclic groups `Z_n` (residues),
//! * free products of providers (alternating nonidentity syllables),
//! * direct products of providers (tuples).
//!
//! Generators are addressed by their index in the symmetric generating list
//! `S`. Each generator records the index of its inverse; order-2 generators
//! are their own inverse and appear only once.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Declarative description of a provider, as it appears in experiment configs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupSpec {
    Free { rank: usize },
    Abelian { rank: usize },
    Cyclic { order: u64 },
    FreeProduct { factors: Vec<GroupSpec> },
    DirectProduct { factors: Vec<GroupSpec> },
}

/// Canonical representative of a group element.
///
/// Free-group letters are signed: `+(i+1)` is the `i`-th free generator and
/// `-(i+1)` its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Word(Vec<i32>),
    Vector(Vec<i64>),
    Residue(u64),
    Syllables(Vec<(usize, GroupElement)>),
    Tuple(Vec<GroupElement>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub element: GroupElement,
    /// Index of the inverse generator in `S` (equal to the own index for
    /// involutions).
    pub inverse: usize,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Free { rank: usize },
    Abelian { rank: usize },
    Cyclic { order: u64 },
    FreeProduct(Vec<Group>),
    DirectProduct(Vec<Group>),
}

/// An immutable group provider.
#[derive(Debug, Clone, PartialEq)]
pub struct Group {
    spec: GroupSpec,
    kind: Kind,
    generators: Vec<Generator>,
}

fn letter_name(index: usize, inverse: bool) -> String {
    let base = if index < 26 {
        char::from(b'a' + index as u8).to_string()
    } else {
        format!("x{index}_")
    };
    if inverse {
        base.to_uppercase()
    } else {
        base
    }
}

impl Group {
    pub fn from_spec(spec: &GroupSpec) -> Result<Self> {
        let kind = match spec {
            GroupSpec::Free { rank } => {
                if *rank == 0 {
                    return Err(Error::InvalidGroup("free group needs rank >= 1".into()));
                }
                Kind::Free { rank: *rank }
            }
            GroupSpec::Abelian { rank } => {
                if *rank == 0 {
                    return Err(Error::InvalidGroup("abelian group needs rank >= 1".into()));
                }
                Kind::Abelian { rank: *rank }
            }
            GroupSpec::Cyclic { order } => {
                if *order < 2 {
                    return Err(Error::InvalidGroup("cyclic group needs order >= 2".into()));
                }
                Kind::Cyclic { order: *order }
            }
            GroupSpec::FreeProduct { factors } | GroupSpec::DirectProduct { factors } => {
                if factors.len() < 2 {
                    return Err(Error::InvalidGroup(
                        "products need at least two factors".into(),
                    ));
                }
                let groups = factors
                    .iter()
                    .map(Group::from_spec)
                    .collect::<Result<Vec<_>>>()?;
                if matches!(spec, GroupSpec::FreeProduct { .. }) {
                    Kind::FreeProduct(groups)
                } else {
                    Kind::DirectProduct(groups)
                }
            }
        };
        let generators = Self::build_generators(&kind);
        Ok(Group {
            spec: spec.clone(),
            kind,
            generators,
        })
    }

    pub fn free(rank: usize) -> Result<Self> {
        Self::from_spec(&GroupSpec::Free { rank })
    }

    pub fn abelian(rank: usize) -> Result<Self> {
        Self::from_spec(&GroupSpec::Abelian { rank })
    }

    pub fn cyclic(order: u64) -> Result<Self> {
        Self::from_spec(&GroupSpec::Cyclic { order })
    }

    pub fn free_product(factors: Vec<GroupSpec>) -> Result<Self> {
        Self::from_spec(&GroupSpec::FreeProduct { factors })
    }

    pub fn direct_product(factors: Vec<GroupSpec>) -> Result<Self> {
        Self::from_spec(&GroupSpec::DirectProduct { factors })
    }

    fn build_generators(kind: &Kind) -> Vec<Generator> {
        match kind {
            Kind::Free { rank } => (0..*rank)
                .flat_map(|i| {
                    let letter = i as i32 + 1;
                    [
                        Generator {
                            element: GroupElement::Word(vec![letter]),
                            inverse: 2 * i + 1,
                            name: letter_name(i, false),
                        },
                        Generator {
                            element: GroupElement::Word(vec![-letter]),
                            inverse: 2 * i,
                            name: letter_name(i, true),
                        },
                    ]
                })
                .collect(),
            Kind::Abelian { rank } => (0..*rank)
                .flat_map(|i| {
                    let mut plus = vec![0; *rank];
                    plus[i] = 1;
                    let mut minus = vec![0; *rank];
                    minus[i] = -1;
                    [
                        Generator {
                            element: GroupElement::Vector(plus),
                            inverse: 2 * i + 1,
                            name: format!("+e{}", i + 1),
                        },
                        Generator {
                            element: GroupElement::Vector(minus),
                            inverse: 2 * i,
                            name: format!("-e{}", i + 1),
                        },
                    ]
                })
                .collect(),
            Kind::Cyclic { order } => {
                if *order == 2 {
                    vec![Generator {
                        element: GroupElement::Residue(1),
                        inverse: 0,
                        name: "t".into(),
                    }]
                } else {
                    vec![
                        Generator {
                            element: GroupElement::Residue(1),
                            inverse: 1,
                            name: "t".into(),
                        },
                        Generator {
                            element: GroupElement::Residue(order - 1),
                            inverse: 0,
                            name: format!("t^{}", order - 1),
                        },
                    ]
                }
            }
            Kind::FreeProduct(factors) => {
                let mut out = Vec::new();
                for (j, factor) in factors.iter().enumerate() {
                    let offset = out.len();
                    for g in &factor.generators {
                        out.push(Generator {
                            element: GroupElement::Syllables(vec![(j, g.element.clone())]),
                            inverse: offset + g.inverse,
                            name: format!("{}.{}", j, g.name),
                        });
                    }
                }
                out
            }
            Kind::DirectProduct(factors) => {
                let identities: Vec<_> = factors.iter().map(Group::identity).collect();
                let mut out = Vec::new();
                for (j, factor) in factors.iter().enumerate() {
                    let offset = out.len();
                    for g in &factor.generators {
                        let mut slots = identities.clone();
                        slots[j] = g.element.clone();
                        out.push(Generator {
                            element: GroupElement::Tuple(slots),
                            inverse: offset + g.inverse,
                            name: format!("{}.{}", j, g.name),
                        });
                    }
                }
                out
            }
        }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    /// The symmetric generating list `S`.
    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    /// `#S`, counting involutions once.
    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn inverse_generator(&self, s: usize) -> usize {
        self.generators[s].inverse
    }

    pub fn generator(&self, s: usize) -> Result<&GroupElement> {
        self.generators
            .get(s)
            .map(|g| &g.element)
            .ok_or(Error::InvalidGenerator {
                index: s,
                available: self.generators.len(),
            })
    }

    pub fn is_infinite(&self) -> bool {
        match &self.kind {
            Kind::Free { .. } | Kind::Abelian { .. } => true,
            Kind::Cyclic { .. } => false,
            // A free product of two nontrivial groups is always infinite.
            Kind::FreeProduct(_) => true,
            Kind::DirectProduct(factors) => factors.iter().any(Group::is_infinite),
        }
    }

    pub fn identity(&self) -> GroupElement {
        match &self.kind {
            Kind::Free { .. } => GroupElement::Word(Vec::new()),
            Kind::Abelian { rank } => GroupElement::Vector(vec![0; *rank]),
            Kind::Cyclic { .. } => GroupElement::Residue(0),
            Kind::FreeProduct(_) => GroupElement::Syllables(Vec::new()),
            Kind::DirectProduct(factors) => {
                GroupElement::Tuple(factors.iter().map(Group::identity).collect())
            }
        }
    }

    pub fn is_identity(&self, x: &GroupElement) -> bool {
        *x == self.identity()
    }

    /// Verifies that `x` is a canonical element of this provider.
    pub fn check(&self, x: &GroupElement) -> Result<()> {
        let ok = match (&self.kind, x) {
            (Kind::Free { rank }, GroupElement::Word(w)) => {
                let r = *rank as i32;
                w.iter().all(|&l| l != 0 && l.abs() <= r)
                    && w.windows(2).all(|pair| pair[0] != -pair[1])
            }
            (Kind::Abelian { rank }, GroupElement::Vector(v)) => v.len() == *rank,
            (Kind::Cyclic { order }, GroupElement::Residue(k)) => k < order,
            (Kind::FreeProduct(factors), GroupElement::Syllables(syl)) => {
                let alternating = syl.windows(2).all(|pair| pair[0].0 != pair[1].0);
                alternating
                    && syl.iter().all(|(j, e)| {
                        factors
                            .get(*j)
                            .is_some_and(|f| f.check(e).is_ok() && !f.is_identity(e))
                    })
            }
            (Kind::DirectProduct(factors), GroupElement::Tuple(slots)) => {
                slots.len() == factors.len()
                    && factors.iter().zip(slots).all(|(f, e)| f.check(e).is_ok())
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::ProviderMismatch)
        }
    }

    /// Canonical form of the product of the generators named by `word`.
    pub fn normal_form(&self, word: &[usize]) -> Result<GroupElement> {
        let mut acc = self.identity();
        for &s in word {
            let g = self.generator(s)?.clone();
            acc = self.multiply_unchecked(&acc, &g);
        }
        Ok(acc)
    }

    pub fn multiply(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.multiply_unchecked(x, y))
    }

    /// Multiplication without re-validating the operands; both must already be
    /// canonical for this provider.
    pub fn multiply_unchecked(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        match (&self.kind, x, y) {
            (Kind::Free { .. }, GroupElement::Word(a), GroupElement::Word(b)) => {
                let mut w = a.clone();
                for &l in b {
                    if w.last() == Some(&-l) {
                        w.pop();
                    } else {
                        w.push(l);
                    }
                }
                GroupElement::Word(w)
            }
            (Kind::Abelian { .. }, GroupElement::Vector(a), GroupElement::Vector(b)) => {
                GroupElement::Vector(a.iter().zip(b).map(|(u, v)| u + v).collect())
            }
            (Kind::Cyclic { order }, GroupElement::Residue(a), GroupElement::Residue(b)) => {
                GroupElement::Residue((a + b) % order)
            }
            (
                Kind::FreeProduct(factors),
                GroupElement::Syllables(a),
                GroupElement::Syllables(b),
            ) => {
                let mut syl = a.clone();
                for (j, e) in b {
                    match syl.last_mut() {
                        Some((last_j, last_e)) if last_j == j => {
                            let merged = factors[*j].multiply_unchecked(last_e, e);
                            if factors[*j].is_identity(&merged) {
                                syl.pop();
                            } else {
                                *last_e = merged;
                            }
                        }
                        _ => syl.push((*j, e.clone())),
                    }
                }
                GroupElement::Syllables(syl)
            }
            (Kind::DirectProduct(factors), GroupElement::Tuple(a), GroupElement::Tuple(b)) => {
                GroupElement::Tuple(
                    factors
                        .iter()
                        .zip(a.iter().zip(b))
                        .map(|(f, (u, v))| f.multiply_unchecked(u, v))
                        .collect(),
                )
            }
            _ => panic!("multiply_unchecked called with elements of another provider"),
        }
    }

    pub fn invert(&self, x: &GroupElement) -> Result<GroupElement> {
        self.check(x)?;
        Ok(self.invert_unchecked(x))
    }

    pub fn invert_unchecked(&self, x: &GroupElement) -> GroupElement {
        match (&self.kind, x) {
            (Kind::Free { .. }, GroupElement::Word(w)) => {
                GroupElement::Word(w.iter().rev().map(|l| -l).collect())
            }
            (Kind::Abelian { .. }, GroupElement::Vector(v)) => {
                GroupElement::Vector(v.iter().map(|c| -c).collect())
            }
            (Kind::Cyclic { order }, GroupElement::Residue(k)) => {
                GroupElement::Residue((order - k) % order)
            }
            (Kind::FreeProduct(factors), GroupElement::Syllables(syl)) => GroupElement::Syllables(
                syl.iter()
                    .rev()
                    .map(|(j, e)| (*j, factors[*j].invert_unchecked(e)))
                    .collect(),
            ),
            (Kind::DirectProduct(factors), GroupElement::Tuple(slots)) => GroupElement::Tuple(
                factors
                    .iter()
                    .zip(slots)
                    .map(|(f, e)| f.invert_unchecked(e))
                    .collect(),
            ),
            _ => panic!("invert_unchecked called with an element of another provider"),
        }
    }

    /// Word length `|x|` with respect to `S`, from the closed form each
    /// provider admits: reduced length for free groups, the L1 norm for `Z^d`,
    /// `min(k, n - k)` for `Z_n`, and the sum over syllables or slots for
    /// free and direct products.
    pub fn word_length(&self, x: &GroupElement) -> Result<u64> {
        self.check(x)?;
        Ok(self.word_length_unchecked(x))
    }

    pub fn word_length_unchecked(&self, x: &GroupElement) -> u64 {
        match (&self.kind, x) {
            (Kind::Free { .. }, GroupElement::Word(w)) => w.len() as u64,
            (Kind::Abelian { .. }, GroupElement::Vector(v)) => {
                v.iter().map(|c| c.unsigned_abs()).sum()
            }
            (Kind::Cyclic { order }, GroupElement::Residue(k)) => (*k).min(order - k),
            (Kind::FreeProduct(factors), GroupElement::Syllables(syl)) => syl
                .iter()
                .map(|(j, e)| factors[*j].word_length_unchecked(e))
                .sum(),
            (Kind::DirectProduct(factors), GroupElement::Tuple(slots)) => factors
                .iter()
                .zip(slots)
                .map(|(f, e)| f.word_length_unchecked(e))
                .sum(),
            _ => panic!("word_length_unchecked called with an element of another provider"),
        }
    }

    /// Human-readable rendering of a canonical element; `1` is the identity.
    pub fn format(&self, x: &GroupElement) -> String {
        let mut out = String::new();
        self.write_element(&mut out, x);
        if out.is_empty() {
            out.push('1');
        }
        out
    }

    fn write_element(&self, out: &mut String, x: &GroupElement) {
        match (&self.kind, x) {
            (Kind::Free { .. }, GroupElement::Word(w)) => {
                for l in w {
                    out.push_str(&letter_name(l.unsigned_abs() as usize - 1, *l < 0));
                }
            }
            (Kind::Abelian { .. }, GroupElement::Vector(v)) => {
                out.push('(');
                for (i, c) in v.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    let _ = write!(out, "{c}");
                }
                out.push(')');
            }
            (Kind::Cyclic { .. }, GroupElement::Residue(k)) => {
                if *k == 1 {
                    out.push('t');
                } else if *k > 1 {
                    let _ = write!(out, "t^{k}");
                }
            }
            (Kind::FreeProduct(factors), GroupElement::Syllables(syl)) => {
                for (j, e) in syl {
                    let _ = write!(out, "[{j}:{}]", factors[*j].format(e));
                }
            }
            (Kind::DirectProduct(factors), GroupElement::Tuple(slots)) => {
                out.push('<');
                for (i, (f, e)) in factors.iter().zip(slots).enumerate() {
                    if i > 0 {
                        out.push(';');
                    }
                    out.push_str(&f.format(e));
                }
                out.push('>');
            }
            _ => out.push('?'),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Free { rank } => write!(f, "F{rank}"),
            GroupSpec::Abelian { rank } => write!(f, "Z^{rank}"),
            GroupSpec::Cyclic { order } => write!(f, "Z{order}"),
            GroupSpec::FreeProduct { factors } => {
                let parts: Vec<_> = factors.iter().map(ToString::to_string).collect();
                write!(f, "({})", parts.join(" * "))
            }
            GroupSpec::DirectProduct { factors } => {
                let parts: Vec<_> = factors.iter().map(ToString::to_string).collect();
                write!(f, "({})", parts.join(" x "))
            }
        }
    }
}
