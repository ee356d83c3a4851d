//! The bridge between pattern downsets and polymorphism clones.
//!
//! A set of crosses is encoded as the downset generated by its patterns.
//! Comparing encodings yields sound inclusion certificates for the
//! opposite inclusion of polymorphism clones, equal encodings predict
//! equal bounded clones, and scanning a pattern box against a bounded
//! clone approximates the map from clones back to pattern downsets. The
//! module also builds the explicit operation chain separating the clones
//! of ever-longer crosses over one fixed unary relation, and a catalogue
//! pairing every box downset with the bounded clone of a realizing cross
//! set.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::downsets::{enumerate_box_downsets, BoundedBox, Downset};
use crate::patterns::PatternVector;
use crate::polymorph::{
    find_violation, pol_bounded, preserves, BoundedClone, OperationTable, PreservationViolation,
};
use crate::relations::{Cross, ExtensionalRelation, Language};
use crate::{Budget, Error};

/// Expands every cross in the list.
pub fn expand_all(
    language: &Language,
    crosses: &[Cross],
    budget: &Budget,
) -> Result<Vec<ExtensionalRelation>, Error> {
    crosses.iter().map(|c| c.expand(language, budget)).collect()
}

/// The downset generated by the patterns of the given crosses.
pub fn encode(language: &Language, crosses: &[Cross]) -> Result<Downset, Error> {
    let mut patterns = Vec::with_capacity(crosses.len());
    for cross in crosses {
        patterns.push(cross.pattern(language)?);
    }
    Ok(Downset::generate(language.len(), patterns))
}

/// Verdict of the pattern-based inclusion test.
///
/// `Certified` soundly asserts that every polymorphism of the second
/// relation set is a polymorphism of the first. `Inconclusive` makes no
/// claim in either direction; the pattern condition is sufficient, not
/// necessary.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum InclusionCertificate {
    Certified,
    Inconclusive,
}

impl fmt::Display for InclusionCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InclusionCertificate::Certified => write!(f, "certified"),
            InclusionCertificate::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// Compares the encodings of two cross sets over one language.
///
/// When the first encoding is contained in the second, every relation of
/// the first set arises from a relation of the second by duplicating and
/// merging coordinates, so the polymorphisms of the second set all
/// preserve the first set as well.
pub fn pattern_certificate(
    language: &Language,
    first: &[Cross],
    second: &[Cross],
) -> Result<InclusionCertificate, Error> {
    let lower = encode(language, first)?;
    let upper = encode(language, second)?;
    Ok(if lower.leq(&upper) {
        InclusionCertificate::Certified
    } else {
        InclusionCertificate::Inconclusive
    })
}

/// Result of checking that equal encodings force equal bounded clones.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum KernelOutcome {
    /// The encodings differ, so nothing is predicted.
    EncodingsDiffer,
    /// Equal encodings and equal bounded clones, as predicted.
    Pass,
    /// Equal encodings but a separating operation exists. This falsifies
    /// the implementation, not the theory; tests treat it as a failure.
    Fail { separating: OperationTable },
}

/// Checks the prediction that cross sets with equal encodings have equal
/// polymorphism clones, up to the arity bound.
pub fn kernel_check(
    language: &Language,
    first: &[Cross],
    second: &[Cross],
    max_arity: usize,
    budget: &Budget,
) -> Result<KernelOutcome, Error> {
    if encode(language, first)? != encode(language, second)? {
        return Ok(KernelOutcome::EncodingsDiffer);
    }
    let domain = language.domain();
    let lower = pol_bounded(domain, &expand_all(language, first, budget)?, max_arity, budget)?;
    let upper = pol_bounded(domain, &expand_all(language, second, budget)?, max_arity, budget)?;
    match first_clone_difference(&lower, &upper) {
        None => Ok(KernelOutcome::Pass),
        Some(separating) => Ok(KernelOutcome::Fail { separating }),
    }
}

fn first_clone_difference(a: &BoundedClone, b: &BoundedClone) -> Option<OperationTable> {
    for arity in 1..=a.max_arity() {
        let only_in_a = a.arity_ops(arity).iter().find(|f| !b.contains(f));
        let only_in_b = b.arity_ops(arity).iter().find(|f| !a.contains(f));
        let least = match (only_in_a, only_in_b) {
            (Some(f), Some(g)) => Some(if f <= g { f } else { g }),
            (Some(f), None) => Some(f),
            (None, Some(g)) => Some(g),
            (None, None) => None,
        };
        if let Some(f) = least {
            return Some(f.clone());
        }
    }
    None
}

/// The canonical cross housing a pattern: each unary relation repeated
/// per its count, in language order.
///
/// Returns `None` for patterns no cross has: the zero pattern (crosses
/// are nonempty disjunctions) and patterns mixing the full unary relation
/// with anything else (such crosses collapse to the concentrated full
/// pattern).
///
/// # Panics
///
/// Panics if the pattern dimension is not the language size.
pub fn cross_from_pattern(language: &Language, pattern: &PatternVector) -> Option<Cross> {
    assert_eq!(
        pattern.dimension(),
        language.len(),
        "pattern dimension mismatch"
    );
    if pattern.is_zero() {
        return None;
    }
    if let Some(full) = language.index_of_full() {
        if pattern.count(full) > 0 && pattern.support().len() > 1 {
            return None;
        }
    }
    let mut params = Vec::with_capacity(pattern.total());
    for index in 0..pattern.dimension() {
        for _ in 0..pattern.count(index) {
            params.push(index);
        }
    }
    let cross = Cross::new(language, params).expect("indices are in range");
    debug_assert_eq!(
        cross.pattern(language).expect("pattern is realizable"),
        *pattern
    );
    Some(cross)
}

/// Scans the pattern box and keeps every pattern whose canonical cross is
/// preserved by all bounded polymorphisms of the given cross set.
///
/// This truncates the exact clone-to-downset map twice: patterns beyond
/// the box are not inspected, and only polymorphisms up to `max_arity`
/// must agree. The result over-approximates the untruncated value on the
/// box; raising `max_arity` can only shrink it.
pub fn psi_bounded(
    language: &Language,
    crosses: &[Cross],
    pattern_bound: usize,
    max_arity: usize,
    budget: &Budget,
) -> Result<Downset, Error> {
    let dimension = language.len();
    let bx = BoundedBox::new(dimension, pattern_bound);
    budget.check("pattern box", bx.element_count(), budget.max_downsets)?;
    let relations = expand_all(language, crosses, budget)?;
    let clone = pol_bounded(language.domain(), &relations, max_arity, budget)?;
    let mut kept = Vec::new();
    for pattern in bx.elements() {
        let Some(cross) = cross_from_pattern(language, &pattern) else {
            continue;
        };
        let expanded = cross.expand(language, budget)?;
        if clone.iter().all(|f| preserves(f, &expanded)) {
            kept.push(pattern);
        }
    }
    Ok(Downset::generate(dimension, kept))
}

/// One level of the separating operation chain over a fixed unary
/// relation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainWitness {
    /// Index of the unary relation the chain is built over.
    pub gamma: usize,
    /// The level m; the operation is m-ary.
    pub level: usize,
    /// Least domain element outside the unary relation.
    pub zero: usize,
    /// Least domain element inside the unary relation.
    pub one: usize,
    /// Returns `zero` when at least m−1 arguments equal `zero`, else
    /// `one`.
    pub table: OperationTable,
}

fn chain_elements(language: &Language, gamma: usize) -> Result<(usize, usize), Error> {
    if gamma >= language.len() {
        return Err(Error::UnknownGamma {
            index: gamma,
            count: language.len(),
        });
    }
    let set = language.gamma(gamma);
    let domain = language.domain();
    if set.is_empty() || set.is_full(domain) {
        return Err(Error::TrivialGamma { index: gamma });
    }
    let zero = domain
        .elements()
        .find(|&a| !set.contains(a))
        .expect("a proper subset misses some element");
    let one = set.iter().next().expect("a nonempty subset has an element");
    Ok((zero, one))
}

/// Builds the level-m chain operation for a unary relation that is
/// neither empty nor the whole domain.
pub fn build_chain_witness(
    language: &Language,
    gamma: usize,
    level: usize,
    budget: &Budget,
) -> Result<ChainWitness, Error> {
    let (zero, one) = chain_elements(language, gamma)?;
    if level < 2 {
        return Err(Error::ChainTooShort { level });
    }
    let domain = language.domain();
    let entries = budget.check(
        "chain table",
        domain.tuple_count(level),
        budget.max_relation_tuples,
    )? as usize;
    let values = (0..entries)
        .map(|index| {
            let args = domain.tuple_at(level, index);
            let zeros = args.iter().filter(|&&a| a == zero).count();
            if zeros >= level - 1 {
                zero
            } else {
                one
            }
        })
        .collect();
    Ok(ChainWitness {
        gamma,
        level,
        zero,
        one,
        table: OperationTable::new(domain, level, values),
    })
}

/// A verified strict separation: the level-m operation preserves the
/// cross of m−1 copies of the unary relation but breaks the cross of m
/// copies.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainSeparation {
    pub level: usize,
    pub witness: ChainWitness,
    pub violation: PreservationViolation,
}

/// Report of a verified chain: one separation per level from 2 up to the
/// requested maximum.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainReport {
    pub gamma: usize,
    pub zero: usize,
    pub one: usize,
    pub separations: Vec<ChainSeparation>,
}

fn checked_pow(base: usize, exponent: usize) -> Option<u128> {
    let mut out = 1u128;
    for _ in 0..exponent {
        out = out.checked_mul(base as u128)?;
    }
    Some(out)
}

/// Verifies the descending chain over one unary relation up to
/// `max_level`.
///
/// For each level m in 2…max_level the chain operation is checked to
/// preserve the (m−1)-fold cross and to break the m-fold cross, with the
/// explicit violating selection recorded. Each separation certifies that
/// the two neighbouring crosses have different polymorphism clones.
///
/// # Panics
///
/// Panics if a chain operation fails a check it is guaranteed to satisfy;
/// that would be an implementation bug, not bad input.
pub fn verify_chain(
    language: &Language,
    gamma: usize,
    max_level: usize,
    budget: &Budget,
) -> Result<ChainReport, Error> {
    let (zero, one) = chain_elements(language, gamma)?;
    if max_level < 2 {
        return Err(Error::ChainTooShort { level: max_level });
    }
    let mut separations = Vec::with_capacity(max_level - 1);
    for level in 2..=max_level {
        let witness = build_chain_witness(language, gamma, level, budget)?;
        let lower = Cross::new(language, vec![gamma; level - 1])?.expand(language, budget)?;
        let upper = Cross::new(language, vec![gamma; level])?.expand(language, budget)?;
        budget.check(
            "preservation scan",
            checked_pow(lower.len(), level),
            budget.max_selections,
        )?;
        budget.check(
            "preservation scan",
            checked_pow(upper.len(), level),
            budget.max_selections,
        )?;
        assert!(
            preserves(&witness.table, &lower),
            "chain operation must preserve the previous level"
        );
        let violation = find_violation(&witness.table, &upper)
            .expect("chain operation must break its own level");
        separations.push(ChainSeparation {
            level,
            witness,
            violation,
        });
    }
    Ok(ChainReport {
        gamma,
        zero,
        one,
        separations,
    })
}

/// One catalogue row: a box downset realized by a cross set together with
/// that set's bounded polymorphism clone.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CatalogueEntry {
    pub downset: Downset,
    pub crosses: Vec<Cross>,
    pub clone: BoundedClone,
}

/// Survey of every downset of a pattern box.
///
/// Downsets whose generators are not all patterns of actual crosses
/// cannot be realized by any cross set and are skipped; `box_downsets`
/// counts all of them, `entries` holds the realized ones in enumeration
/// order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Catalogue {
    pub box_downsets: usize,
    pub entries: Vec<CatalogueEntry>,
    pub skipped: usize,
}

impl Catalogue {
    /// Number of distinct bounded clones among the entries.
    pub fn distinct_signatures(&self) -> usize {
        self.entries
            .iter()
            .map(|entry| &entry.clone)
            .collect::<BTreeSet<_>>()
            .len()
    }
}

/// Enumerates all downsets of the box `{0…pattern_bound}^Γ`, realizes
/// each one generator-by-generator as a cross set, and computes the
/// bounded polymorphism clone of that set.
///
/// The clone of one cross depends only on its pattern, so per-pattern
/// clones are computed once and entry clones are intersections of cached
/// results.
pub fn catalogue(
    language: &Language,
    pattern_bound: usize,
    max_arity: usize,
    budget: &Budget,
) -> Result<Catalogue, Error> {
    let bx = BoundedBox::new(language.len(), pattern_bound);
    let all = enumerate_box_downsets(bx, budget)?;
    let box_downsets = all.len();
    let domain = language.domain();
    let everything = pol_bounded(domain, &[], max_arity, budget)?;
    let mut cache: BTreeMap<PatternVector, BoundedClone> = BTreeMap::new();
    let mut entries = Vec::new();
    let mut skipped = 0usize;
    for downset in all {
        let mut realized = Vec::with_capacity(downset.generator_count());
        for generator in downset.generators() {
            match cross_from_pattern(language, generator) {
                Some(cross) => realized.push((generator.clone(), cross)),
                None => {
                    realized.clear();
                    break;
                }
            }
        }
        if realized.len() != downset.generator_count() {
            skipped += 1;
            continue;
        }
        let mut clone = everything.clone();
        for (generator, cross) in &realized {
            if !cache.contains_key(generator) {
                let expanded = cross.expand(language, budget)?;
                let one = pol_bounded(domain, &[expanded], max_arity, budget)?;
                cache.insert(generator.clone(), one);
            }
            clone = clone.intersect(&cache[generator]);
        }
        entries.push(CatalogueEntry {
            downset,
            crosses: realized.into_iter().map(|(_, cross)| cross).collect(),
            clone,
        });
    }
    Ok(Catalogue {
        box_downsets,
        entries,
        skipped,
    })
}
