//! Finite domains, languages of unary relations, and cross relations.
//!
//! A cross over a language Γ is the n-ary relation that holds on a tuple
//! exactly when at least one coordinate lies in its parameter: given
//! parameters γ₁, …, γₙ drawn from Γ, the cross contains x whenever some
//! xᵢ ∈ γᵢ. These are precisely the relations definable by a nonempty
//! disjunction of unary membership atoms, one per coordinate.
//!
//! A proper cross (not the full relation) determines its parameters
//! uniquely, which makes reconstruction from an extensional relation
//! well defined: the complement must be a box B₁ × … × Bₙ, and the
//! parameters are the complements of its sides.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::patterns::PatternVector;
use crate::{Budget, Error};

/// A finite domain `{0, …, size-1}` with at most 64 elements.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Domain {
    size: usize,
}

impl Domain {
    pub fn new(size: usize) -> Result<Self, Error> {
        if size == 0 {
            return Err(Error::EmptyDomain);
        }
        if size > 64 {
            return Err(Error::DomainTooLarge { size });
        }
        Ok(Domain { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        0..self.size
    }

    /// Number of `arity`-tuples over the domain, if it fits in `u128`.
    pub fn tuple_count(&self, arity: usize) -> Option<u128> {
        let mut total = 1u128;
        for _ in 0..arity {
            total = total.checked_mul(self.size as u128)?;
        }
        Some(total)
    }

    /// Encodes a tuple as a base-`size` number, last coordinate fastest.
    ///
    /// # Panics
    ///
    /// Panics if an entry is outside the domain.
    pub fn tuple_index(&self, tuple: &[usize]) -> usize {
        let mut index = 0usize;
        for &x in tuple {
            assert!(x < self.size, "element {x} outside domain of size {}", self.size);
            index = index * self.size + x;
        }
        index
    }

    /// Decodes [`Domain::tuple_index`]: the `index`-th tuple of the given
    /// arity in lexicographic order.
    pub fn tuple_at(&self, arity: usize, index: usize) -> Vec<usize> {
        let mut tuple = vec![0; arity];
        let mut rest = index;
        for slot in tuple.iter_mut().rev() {
            *slot = rest % self.size;
            rest /= self.size;
        }
        debug_assert_eq!(rest, 0, "tuple index out of range");
        tuple
    }
}

/// A subset of a domain, stored as a bit mask.
///
/// The domain is not stored; operations that depend on it take it as an
/// argument.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ElemSet {
    bits: u64,
}

impl ElemSet {
    pub fn empty() -> Self {
        ElemSet { bits: 0 }
    }

    pub fn full(domain: Domain) -> Self {
        if domain.size() == 64 {
            ElemSet { bits: u64::MAX }
        } else {
            ElemSet {
                bits: (1u64 << domain.size()) - 1,
            }
        }
    }

    pub fn from_elements<I>(domain: Domain, elements: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut bits = 0u64;
        for e in elements {
            if e >= domain.size() {
                return Err(Error::ElementOutOfRange {
                    element: e,
                    size: domain.size(),
                });
            }
            bits |= 1 << e;
        }
        Ok(ElemSet { bits })
    }

    pub fn contains(&self, element: usize) -> bool {
        element < 64 && self.bits & (1 << element) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_full(&self, domain: Domain) -> bool {
        *self == ElemSet::full(domain)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn complement(&self, domain: Domain) -> ElemSet {
        ElemSet {
            bits: !self.bits & ElemSet::full(domain).bits,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..64).filter(|&e| self.contains(e))
    }
}

/// An ordered list of named unary relations over a common domain.
///
/// Names are unique and extensions are pairwise distinct, so both a name
/// and an extension identify at most one index.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Language {
    domain: Domain,
    names: Vec<String>,
    gammas: Vec<ElemSet>,
}

impl Language {
    pub fn new<I>(domain: Domain, gammas: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = (String, ElemSet)>,
    {
        let mut names = Vec::new();
        let mut sets = Vec::new();
        for (name, set) in gammas {
            if names.contains(&name) {
                return Err(Error::DuplicateGammaName);
            }
            if let Some(first) = sets.iter().position(|&s| s == set) {
                return Err(Error::DuplicateGammaExtension {
                    first,
                    second: sets.len(),
                });
            }
            names.push(name);
            sets.push(set);
        }
        if sets.len() > crate::patterns::MAX_DIMENSION {
            return Err(Error::TooManyGammas { count: sets.len() });
        }
        Ok(Language {
            domain,
            names,
            gammas: sets,
        })
    }

    /// Builds a language with generated names `g0, g1, …`.
    pub fn from_sets(domain: Domain, sets: &[ElemSet]) -> Result<Self, Error> {
        let named = sets.iter().enumerate().map(|(i, &s)| {
            let mut name = String::from("g");
            let mut digits = Vec::new();
            let mut n = i;
            loop {
                digits.push(b'0' + (n % 10) as u8);
                n /= 10;
                if n == 0 {
                    break;
                }
            }
            for d in digits.iter().rev() {
                name.push(*d as char);
            }
            (name, s)
        });
        Language::new(domain, named)
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Number of unary relations.
    pub fn len(&self) -> usize {
        self.gammas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gammas.is_empty()
    }

    pub fn gamma(&self, index: usize) -> ElemSet {
        self.gammas[index]
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of_name(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn index_of_set(&self, set: ElemSet) -> Option<usize> {
        self.gammas.iter().position(|&g| g == set)
    }

    /// Index of the full unary relation, if the language contains it.
    pub fn index_of_full(&self) -> Option<usize> {
        self.index_of_set(ElemSet::full(self.domain))
    }
}

/// A cross relation, stored as the list of language indices of its
/// parameters. The arity is the number of parameters.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Cross {
    params: Vec<usize>,
}

impl Cross {
    pub fn new(language: &Language, params: Vec<usize>) -> Result<Self, Error> {
        if params.is_empty() {
            return Err(Error::EmptyParameterList);
        }
        for &p in &params {
            if p >= language.len() {
                return Err(Error::UnknownGamma {
                    index: p,
                    count: language.len(),
                });
            }
        }
        Ok(Cross { params })
    }

    pub fn arity(&self) -> usize {
        self.params.len()
    }

    pub fn params(&self) -> &[usize] {
        &self.params
    }

    /// Membership test without expanding the relation.
    ///
    /// # Panics
    ///
    /// Panics if the tuple has the wrong length or an entry outside the
    /// domain.
    pub fn contains(&self, language: &Language, tuple: &[usize]) -> bool {
        assert_eq!(tuple.len(), self.arity(), "tuple length mismatch");
        for &x in tuple {
            assert!(x < language.domain().size(), "element outside domain");
        }
        self.params
            .iter()
            .zip(tuple)
            .any(|(&p, &x)| language.gamma(p).contains(x))
    }

    /// The relation is full exactly when some parameter is the whole
    /// domain.
    pub fn is_full(&self, language: &Language) -> bool {
        self.params
            .iter()
            .any(|&p| language.gamma(p).is_full(language.domain()))
    }

    /// The relation is empty exactly when every parameter is empty.
    pub fn is_empty(&self, language: &Language) -> bool {
        self.params.iter().all(|&p| language.gamma(p).is_empty())
    }

    /// Materializes the relation as a sorted tuple set.
    ///
    /// Walks all `|A|^n` tuples, so the universe must fit the relation
    /// tuple budget.
    pub fn expand(
        &self,
        language: &Language,
        budget: &Budget,
    ) -> Result<ExtensionalRelation, Error> {
        let domain = language.domain();
        let total = budget.check(
            "relation expansion",
            domain.tuple_count(self.arity()),
            budget.max_relation_tuples,
        )? as usize;
        let mut tuples = BTreeSet::new();
        for index in 0..total {
            let tuple = domain.tuple_at(self.arity(), index);
            if self.contains(language, &tuple) {
                tuples.insert(tuple);
            }
        }
        ExtensionalRelation::from_sorted(domain, self.arity(), tuples)
    }

    /// The pattern of the relation: how often each unary relation occurs
    /// among the canonical parameters.
    ///
    /// For a proper cross the canonical parameters are the stored ones; for
    /// the full relation they are n copies of the full unary relation,
    /// which the language is then guaranteed to contain because some stored
    /// parameter already is it.
    pub fn pattern(&self, language: &Language) -> Result<PatternVector, Error> {
        let mut counts = vec![0usize; language.len()];
        if self.is_full(language) {
            let full = language
                .index_of_full()
                .ok_or(Error::FullCrossOutsideLanguage)?;
            counts[full] = self.arity();
        } else {
            for &p in &self.params {
                counts[p] += 1;
            }
        }
        Ok(PatternVector::new(counts))
    }
}

/// A relation given extensionally: a sorted, deduplicated set of tuples of
/// a fixed arity over a fixed domain.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct ExtensionalRelation {
    domain: Domain,
    arity: usize,
    tuples: BTreeSet<Vec<usize>>,
}

impl ExtensionalRelation {
    pub fn new<I>(domain: Domain, arity: usize, tuples: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = Vec<usize>>,
    {
        if arity == 0 {
            return Err(Error::ZeroArity);
        }
        let mut set = BTreeSet::new();
        for tuple in tuples {
            if tuple.len() != arity {
                return Err(Error::TupleLengthMismatch {
                    expected: arity,
                    found: tuple.len(),
                });
            }
            for &x in &tuple {
                if x >= domain.size() {
                    return Err(Error::ElementOutOfRange {
                        element: x,
                        size: domain.size(),
                    });
                }
            }
            set.insert(tuple);
        }
        Ok(ExtensionalRelation {
            domain,
            arity,
            tuples: set,
        })
    }

    fn from_sorted(
        domain: Domain,
        arity: usize,
        tuples: BTreeSet<Vec<usize>>,
    ) -> Result<Self, Error> {
        if arity == 0 {
            return Err(Error::ZeroArity);
        }
        Ok(ExtensionalRelation {
            domain,
            arity,
            tuples,
        })
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    /// Whether the relation is the full tuple universe.
    pub fn is_full(&self) -> bool {
        self.domain.tuple_count(self.arity) == Some(self.tuples.len() as u128)
    }

    pub fn contains(&self, tuple: &[usize]) -> bool {
        self.tuples.contains(tuple)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.tuples.iter()
    }
}

/// Recovers the canonical cross parameters of an extensional relation, if
/// it is a cross over the language.
///
/// For a proper relation the complement must be a box B₁ × … × Bₙ; the
/// candidate parameters are the complements A∖Bᵢ and they are unique. The
/// box test runs on per-coordinate occurrence counts, so the cost is
/// `O(|R|·n)` regardless of how large the complement is. The full relation
/// is a cross exactly when the language contains the full unary relation,
/// with canonical parameters (A, …, A).
///
/// Returns `None` when the relation is not a cross over the language.
///
/// # Panics
///
/// Panics if the relation's domain differs from the language's.
pub fn reconstruct_parameters(
    language: &Language,
    relation: &ExtensionalRelation,
) -> Result<Option<Vec<usize>>, Error> {
    assert_eq!(
        language.domain(),
        relation.domain(),
        "language and relation domains differ"
    );
    let domain = language.domain();
    let n = relation.arity();
    let total = domain.tuple_count(n).ok_or(Error::BudgetExceeded {
        what: "relation universe",
        needed: None,
        limit: u128::MAX,
    })?;
    if relation.len() as u128 == total {
        return Ok(language.index_of_full().map(|full| vec![full; n]));
    }

    // Occurrences of each element in each coordinate across the relation.
    // A coordinate value appears in the complement exactly when its count
    // falls short of |A|^(n-1).
    let per_slice = total / domain.size() as u128;
    let mut occurrences = vec![vec![0u128; domain.size()]; n];
    for tuple in relation.iter() {
        for (i, &x) in tuple.iter().enumerate() {
            occurrences[i][x] += 1;
        }
    }

    let mut params = Vec::with_capacity(n);
    let mut box_size = 1u128;
    for counts in &occurrences {
        let side = ElemSet::from_elements(
            domain,
            domain.elements().filter(|&a| counts[a] < per_slice),
        )?;
        match box_size.checked_mul(side.len() as u128) {
            Some(s) => box_size = s,
            None => return Ok(None),
        }
        match language.index_of_set(side.complement(domain)) {
            Some(index) => params.push(index),
            None => return Ok(None),
        }
    }
    if box_size != total - relation.len() as u128 {
        return Ok(None);
    }
    Ok(Some(params))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn domain(size: usize) -> Domain {
        Domain::new(size).unwrap()
    }

    fn set(domain: Domain, elements: &[usize]) -> ElemSet {
        ElemSet::from_elements(domain, elements.iter().copied()).unwrap()
    }

    fn language(size: usize, sets: &[&[usize]]) -> Language {
        let d = domain(size);
        let sets: Vec<ElemSet> = sets.iter().map(|s| set(d, s)).collect();
        Language::from_sets(d, &sets).unwrap()
    }

    fn tuples(relation: &ExtensionalRelation) -> Vec<Vec<usize>> {
        relation.iter().cloned().collect()
    }

    #[test]
    fn domain_rejects_empty_and_oversized() {
        assert_eq!(Domain::new(0), Err(Error::EmptyDomain));
        assert_eq!(Domain::new(65), Err(Error::DomainTooLarge { size: 65 }));
        assert!(Domain::new(64).is_ok());
    }

    #[test]
    fn tuple_index_roundtrip_uses_last_coordinate_fastest() {
        let d = domain(3);
        assert_eq!(d.tuple_index(&[0, 1]), 1);
        assert_eq!(d.tuple_index(&[1, 0]), 3);
        for index in 0..9 {
            assert_eq!(d.tuple_index(&d.tuple_at(2, index)), index);
        }
    }

    #[test]
    fn language_rejects_duplicate_extensions() {
        let d = domain(2);
        let result = Language::from_sets(d, &[set(d, &[1]), set(d, &[1])]);
        assert_eq!(
            result,
            Err(Error::DuplicateGammaExtension { first: 0, second: 1 })
        );
    }

    #[test]
    fn language_rejects_duplicate_names() {
        let d = domain(2);
        let result = Language::new(
            d,
            [
                (String::from("g"), set(d, &[1])),
                (String::from("g"), set(d, &[0])),
            ],
        );
        assert_eq!(result, Err(Error::DuplicateGammaName));
    }

    #[test]
    fn elemset_rejects_out_of_range_elements() {
        let d = domain(2);
        assert_eq!(
            ElemSet::from_elements(d, [2]),
            Err(Error::ElementOutOfRange { element: 2, size: 2 })
        );
    }

    #[test]
    fn cross_needs_parameters_from_the_language() {
        let lang = language(2, &[&[1]]);
        assert_eq!(Cross::new(&lang, vec![]), Err(Error::EmptyParameterList));
        assert_eq!(
            Cross::new(&lang, vec![1]),
            Err(Error::UnknownGamma { index: 1, count: 1 })
        );
    }

    #[test]
    fn no_cross_exists_over_the_empty_language() {
        let lang = language(2, &[]);
        assert_eq!(Cross::new(&lang, vec![0]), Err(Error::UnknownGamma { index: 0, count: 0 }));
    }

    #[test]
    fn expand_lists_tuples_with_some_coordinate_in_its_parameter() {
        let lang = language(2, &[&[1]]);
        let rho = Cross::new(&lang, vec![0, 0]).unwrap();
        let expanded = rho.expand(&lang, &Budget::default()).unwrap();
        assert_eq!(
            tuples(&expanded),
            vec![vec![0, 1], vec![1, 0], vec![1, 1]]
        );
    }

    #[test]
    fn membership_agrees_with_expansion() {
        let lang = language(3, &[&[1], &[0, 2]]);
        let rho = Cross::new(&lang, vec![0, 1]).unwrap();
        let expanded = rho.expand(&lang, &Budget::default()).unwrap();
        let d = lang.domain();
        for index in 0..9 {
            let tuple = d.tuple_at(2, index);
            assert_eq!(rho.contains(&lang, &tuple), expanded.contains(&tuple));
        }
    }

    #[test]
    fn fullness_and_emptiness_are_parameter_tests() {
        let lang = language(2, &[&[1], &[0, 1], &[]]);
        assert!(Cross::new(&lang, vec![0, 1]).unwrap().is_full(&lang));
        assert!(!Cross::new(&lang, vec![0, 0]).unwrap().is_full(&lang));
        assert!(Cross::new(&lang, vec![2, 2]).unwrap().is_empty(&lang));
        assert!(!Cross::new(&lang, vec![2, 0]).unwrap().is_empty(&lang));
    }

    #[test]
    fn empty_parameters_expand_to_the_empty_relation() {
        let lang = language(2, &[&[]]);
        let rho = Cross::new(&lang, vec![0]).unwrap();
        let expanded = rho.expand(&lang, &Budget::default()).unwrap();
        assert!(expanded.is_empty());
    }

    #[test]
    fn expansion_respects_the_tuple_budget() {
        let lang = language(2, &[&[1]]);
        let rho = Cross::new(&lang, vec![0; 21]).unwrap();
        let result = rho.expand(&lang, &Budget::default());
        assert_eq!(
            result,
            Err(Error::BudgetExceeded {
                what: "relation expansion",
                needed: Some(1 << 21),
                limit: 1 << 20,
            })
        );
    }

    #[test]
    fn pattern_counts_parameter_occurrences() {
        let lang = language(2, &[&[1], &[0]]);
        let rho = Cross::new(&lang, vec![0, 0, 1]).unwrap();
        assert_eq!(
            rho.pattern(&lang).unwrap(),
            PatternVector::new(vec![2, 1])
        );
    }

    #[test]
    fn pattern_of_a_full_cross_counts_only_the_full_relation() {
        let lang = language(2, &[&[1], &[0, 1]]);
        let rho = Cross::new(&lang, vec![0, 1]).unwrap();
        assert_eq!(
            rho.pattern(&lang).unwrap(),
            PatternVector::new(vec![0, 2])
        );
    }

    #[test]
    fn extensional_relation_validates_tuples() {
        let d = domain(2);
        assert_eq!(
            ExtensionalRelation::new(d, 0, []),
            Err(Error::ZeroArity)
        );
        assert_eq!(
            ExtensionalRelation::new(d, 2, [vec![0]]),
            Err(Error::TupleLengthMismatch { expected: 2, found: 1 })
        );
        assert_eq!(
            ExtensionalRelation::new(d, 1, [vec![2]]),
            Err(Error::ElementOutOfRange { element: 2, size: 2 })
        );
    }

    #[test]
    fn reconstruct_recovers_the_unique_parameters() {
        let lang = language(2, &[&[1]]);
        let rho = ExtensionalRelation::new(
            lang.domain(),
            2,
            [vec![0, 1], vec![1, 0], vec![1, 1]],
        )
        .unwrap();
        assert_eq!(
            reconstruct_parameters(&lang, &rho).unwrap(),
            Some(vec![0, 0])
        );
    }

    #[test]
    fn reconstruct_rejects_relations_whose_complement_is_not_a_box() {
        // The equality relation on a two-element domain.
        let lang = language(2, &[&[1], &[0], &[0, 1], &[]]);
        let diagonal =
            ExtensionalRelation::new(lang.domain(), 2, [vec![0, 0], vec![1, 1]]).unwrap();
        assert_eq!(reconstruct_parameters(&lang, &diagonal).unwrap(), None);
    }

    #[test]
    fn reconstruct_rejects_boxes_with_sides_outside_the_language() {
        // Complement is {0}×{0,1}, so the parameters would be ({1}, ∅) but
        // the language lacks the empty set.
        let lang = language(2, &[&[1], &[0]]);
        let rho = ExtensionalRelation::new(
            lang.domain(),
            2,
            [vec![1, 0], vec![1, 1]],
        )
        .unwrap();
        assert_eq!(reconstruct_parameters(&lang, &rho).unwrap(), None);
    }

    #[test]
    fn reconstruct_full_relation_needs_the_full_unary_relation() {
        let with_full = language(2, &[&[0, 1]]);
        let without_full = language(2, &[&[1], &[0]]);
        let all = ExtensionalRelation::new(
            domain(2),
            2,
            [vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]],
        )
        .unwrap();
        assert_eq!(
            reconstruct_parameters(&with_full, &all).unwrap(),
            Some(vec![0, 0])
        );
        assert_eq!(reconstruct_parameters(&without_full, &all).unwrap(), None);
    }

    #[test]
    fn reconstruct_empty_relation_needs_the_empty_unary_relation() {
        let with_empty = language(2, &[&[1], &[]]);
        let without_empty = language(2, &[&[1]]);
        let none = ExtensionalRelation::new(domain(2), 2, []).unwrap();
        assert_eq!(
            reconstruct_parameters(&with_empty, &none).unwrap(),
            Some(vec![1, 1])
        );
        assert_eq!(reconstruct_parameters(&without_empty, &none).unwrap(), None);
    }

    #[test]
    fn reconstruct_roundtrips_an_expanded_cross() {
        let lang = language(3, &[&[1], &[0, 2], &[2]]);
        let rho = Cross::new(&lang, vec![0, 1, 2]).unwrap();
        let expanded = rho.expand(&lang, &Budget::default()).unwrap();
        assert_eq!(
            reconstruct_parameters(&lang, &expanded).unwrap(),
            Some(vec![0, 1, 2])
        );
    }
}
