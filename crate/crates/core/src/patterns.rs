//! Pattern vectors, their supports, and the support-preserving order.
//!
//! A pattern vector assigns a natural number to every coordinate of a fixed
//! index set (in practice: to every unary relation of a language). Two
//! orders matter here. The componentwise order `leq` is the usual product
//! order. The support-preserving order `below` additionally demands that
//! both vectors are nonzero in exactly the same coordinates; it is the
//! order whose downsets the rest of the crate manipulates.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Maximum number of coordinates of a pattern vector.
///
/// Supports are stored as 64-bit masks, so higher dimensions are not
/// representable.
pub const MAX_DIMENSION: usize = 64;

/// A vector of natural numbers indexed by `0..dimension`.
///
/// The derived `Ord` is lexicographic and exists only so vectors can be
/// sorted and stored canonically. The componentwise comparison is
/// [`PatternVector::leq`], the support-preserving one is
/// [`PatternVector::below`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PatternVector {
    counts: Vec<usize>,
}

impl PatternVector {
    /// Wraps a count vector.
    ///
    /// # Panics
    ///
    /// Panics if the vector has more than [`MAX_DIMENSION`] coordinates.
    pub fn new(counts: Vec<usize>) -> Self {
        assert!(
            counts.len() <= MAX_DIMENSION,
            "pattern dimension {} exceeds the maximum of {}",
            counts.len(),
            MAX_DIMENSION
        );
        PatternVector { counts }
    }

    /// The all-zero vector of the given dimension.
    pub fn zero(dimension: usize) -> Self {
        PatternVector::new(vec![0; dimension])
    }

    pub fn dimension(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn count(&self, coordinate: usize) -> usize {
        self.counts[coordinate]
    }

    pub fn is_zero(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    /// Sum of all counts. For the pattern of a cross this is its arity.
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// The set of coordinates with a nonzero count.
    pub fn support(&self) -> Support {
        let mut bits = 0u64;
        for (i, &c) in self.counts.iter().enumerate() {
            if c > 0 {
                bits |= 1 << i;
            }
        }
        Support { bits }
    }

    /// Componentwise comparison: `self[i] <= other[i]` everywhere.
    ///
    /// # Panics
    ///
    /// Panics if the dimensions differ.
    pub fn leq(&self, other: &PatternVector) -> bool {
        assert_eq!(
            self.dimension(),
            other.dimension(),
            "pattern dimension mismatch"
        );
        self.counts.iter().zip(&other.counts).all(|(a, b)| a <= b)
    }

    /// Support-preserving comparison: componentwise `<=` with equal
    /// supports.
    ///
    /// Equivalently `self.leq(other)` with the support of `other` contained
    /// in the support of `self`; the componentwise comparison already forces
    /// the reverse containment.
    ///
    /// # Panics
    ///
    /// Panics if the dimensions differ.
    pub fn below(&self, other: &PatternVector) -> bool {
        self.leq(other) && self.support() == other.support()
    }
}

impl fmt::Display for PatternVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for PatternVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A set of coordinates, stored as a bit mask.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Support {
    bits: u64,
}

impl Support {
    pub fn empty() -> Self {
        Support { bits: 0 }
    }

    /// The full support `{0, …, dimension-1}`.
    ///
    /// # Panics
    ///
    /// Panics if `dimension` exceeds [`MAX_DIMENSION`].
    pub fn full(dimension: usize) -> Self {
        assert!(dimension <= MAX_DIMENSION);
        if dimension == 64 {
            Support { bits: u64::MAX }
        } else {
            Support {
                bits: (1u64 << dimension) - 1,
            }
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut bits = 0u64;
        for i in indices {
            assert!(i < MAX_DIMENSION, "support index {i} out of range");
            bits |= 1 << i;
        }
        Support { bits }
    }

    pub fn contains(&self, coordinate: usize) -> bool {
        coordinate < MAX_DIMENSION && self.bits & (1 << coordinate) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_subset_of(&self, other: &Support) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..MAX_DIMENSION).filter(|&i| self.contains(i))
    }
}

/// Finds the lexicographically first pair `(i, j)` with `i < j` and
/// `seq[i]` componentwise below `seq[j]`.
///
/// Every infinite sequence of pattern vectors of a fixed dimension contains
/// such a pair; at desk scale the guarantee already kicks in once a sequence
/// is longer than the number of distinct vectors it can draw from.
///
/// # Panics
///
/// Panics if the vectors do not all have the same dimension.
pub fn find_dominating_pair(seq: &[PatternVector]) -> Option<(usize, usize)> {
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i].leq(&seq[j]) {
                return Some((i, j));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pv(counts: &[usize]) -> PatternVector {
        PatternVector::new(counts.to_vec())
    }

    #[test]
    fn support_collects_nonzero_coordinates() {
        assert_eq!(pv(&[2, 0, 1]).support(), Support::from_indices([0, 2]));
        assert_eq!(pv(&[0, 0]).support(), Support::empty());
        assert_eq!(pv(&[]).support(), Support::empty());
    }

    #[test]
    fn leq_is_componentwise() {
        assert!(pv(&[1, 0]).leq(&pv(&[2, 0])));
        assert!(pv(&[0, 1]).leq(&pv(&[1, 1])));
        assert!(!pv(&[2, 0]).leq(&pv(&[1, 1])));
    }

    #[test]
    fn below_requires_equal_support() {
        assert!(pv(&[1, 0]).below(&pv(&[2, 0])));
        assert!(!pv(&[0, 1]).below(&pv(&[1, 1])));
        assert!(!pv(&[0, 0]).below(&pv(&[1, 0])));
        assert!(pv(&[0, 0]).below(&pv(&[0, 0])));
    }

    #[test]
    fn below_on_empty_dimension_is_reflexive() {
        assert!(pv(&[]).below(&pv(&[])));
    }

    #[test]
    #[should_panic(expected = "dimension mismatch")]
    fn leq_rejects_mixed_dimensions() {
        pv(&[1]).leq(&pv(&[1, 0]));
    }

    #[test]
    fn dominating_pair_is_lexicographically_first() {
        let seq = [pv(&[2, 0]), pv(&[0, 2]), pv(&[1, 1]), pv(&[2, 1])];
        assert_eq!(find_dominating_pair(&seq), Some((0, 3)));
    }

    #[test]
    fn dominating_pair_absent_in_antichain() {
        let seq = [pv(&[2, 0]), pv(&[0, 2])];
        assert_eq!(find_dominating_pair(&seq), None);
        assert_eq!(find_dominating_pair(&[]), None);
    }

    #[test]
    fn dominating_pair_accepts_equal_vectors() {
        let seq = [pv(&[1, 1]), pv(&[1, 1])];
        assert_eq!(find_dominating_pair(&seq), Some((0, 1)));
    }

    #[test]
    fn display_renders_parenthesized_counts() {
        assert_eq!(pv(&[2, 1]).to_string(), "(2,1)");
        assert_eq!(pv(&[]).to_string(), "()");
    }

    fn arb_vector() -> impl Strategy<Value = PatternVector> {
        proptest::collection::vec(0usize..4, 3).prop_map(PatternVector::new)
    }

    proptest! {
        #[test]
        fn below_is_reflexive(x in arb_vector()) {
            prop_assert!(x.below(&x));
        }

        #[test]
        fn below_is_antisymmetric(x in arb_vector(), y in arb_vector()) {
            if x.below(&y) && y.below(&x) {
                prop_assert_eq!(x, y);
            }
        }

        #[test]
        fn below_is_transitive(x in arb_vector(), y in arb_vector(), z in arb_vector()) {
            if x.below(&y) && y.below(&z) {
                prop_assert!(x.below(&z));
            }
        }

        #[test]
        fn below_implies_leq(x in arb_vector(), y in arb_vector()) {
            if x.below(&y) {
                prop_assert!(x.leq(&y));
            }
        }

        #[test]
        fn below_matches_dual_support_containment(x in arb_vector(), y in arb_vector()) {
            let dual = x.leq(&y) && y.support().is_subset_of(&x.support());
            prop_assert_eq!(x.below(&y), dual);
        }

        #[test]
        fn long_sequences_over_a_finite_box_always_dominate(
            seq in proptest::collection::vec(
                proptest::collection::vec(0usize..3, 3).prop_map(PatternVector::new),
                30,
            )
        ) {
            // 30 vectors drawn from the 27-element box must repeat, and a
            // repeat is already a dominating pair.
            prop_assert!(find_dominating_pair(&seq).is_some());
        }
    }
}
