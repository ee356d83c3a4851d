//! Operation tables, preservation, and bounded polymorphism clones.
//!
//! An operation is stored as its full value table, indexed by reading the
//! argument tuple as a base-|A| number with the last coordinate fastest.
//! An operation f of arity k preserves a relation R when applying f
//! componentwise to any k tuples of R lands back in R. The polymorphisms
//! of a relation set up to a bounded arity are computed by enumerating
//! every table and filtering, which is exact on the small domains this
//! crate targets.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::relations::{Domain, ExtensionalRelation};
use crate::{Budget, Error};

/// A finitary operation on a domain, given by its value table.
///
/// `values[i]` is the result on the arguments whose base-|A| encoding is
/// `i` (see [`Domain::tuple_index`]). The derived `Ord` compares tables
/// lexicographically, which matches the enumeration order of
/// [`all_operations`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OperationTable {
    domain: Domain,
    arity: usize,
    values: Vec<usize>,
}

impl OperationTable {
    /// Wraps a value table.
    ///
    /// # Panics
    ///
    /// Panics if the table does not have `|A|^arity` entries or contains a
    /// value outside the domain.
    pub fn new(domain: Domain, arity: usize, values: Vec<usize>) -> Self {
        let expected = domain
            .tuple_count(arity)
            .filter(|&c| c <= usize::MAX as u128)
            .expect("table size overflow") as usize;
        assert_eq!(values.len(), expected, "wrong table length");
        assert!(
            values.iter().all(|&v| v < domain.size()),
            "table value outside domain"
        );
        OperationTable {
            domain,
            arity,
            values,
        }
    }

    /// The i-th projection of the given arity: returns its i-th argument.
    pub fn projection(domain: Domain, arity: usize, coordinate: usize) -> Self {
        assert!(coordinate < arity, "projection coordinate out of range");
        let total = domain.tuple_count(arity).expect("table size overflow") as usize;
        let values = (0..total)
            .map(|index| domain.tuple_at(arity, index)[coordinate])
            .collect();
        OperationTable::new(domain, arity, values)
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// Evaluates the operation.
    ///
    /// # Panics
    ///
    /// Panics if the argument tuple has the wrong length or entries
    /// outside the domain.
    pub fn apply(&self, args: &[usize]) -> usize {
        assert_eq!(args.len(), self.arity, "wrong number of arguments");
        self.values[self.domain.tuple_index(args)]
    }

    pub fn is_projection(&self) -> bool {
        (0..self.arity).any(|coordinate| {
            (0..self.values.len())
                .all(|index| self.values[index] == self.domain.tuple_at(self.arity, index)[coordinate])
        })
    }

    /// Composes `self` with one inner operation per argument. All inner
    /// operations must share a domain and arity; the result has the
    /// inner arity.
    ///
    /// # Panics
    ///
    /// Panics on arity or domain mismatches.
    pub fn compose(&self, inner: &[OperationTable]) -> OperationTable {
        assert_eq!(inner.len(), self.arity, "need one inner operation per argument");
        assert!(!inner.is_empty(), "composition needs at least one inner operation");
        let inner_arity = inner[0].arity;
        for g in inner {
            assert_eq!(g.domain, self.domain, "inner operation domain mismatch");
            assert_eq!(g.arity, inner_arity, "inner operations must share an arity");
        }
        let total = self
            .domain
            .tuple_count(inner_arity)
            .expect("table size overflow") as usize;
        let values = (0..total)
            .map(|index| {
                let intermediate: Vec<usize> =
                    inner.iter().map(|g| g.values[index]).collect();
                self.values[self.domain.tuple_index(&intermediate)]
            })
            .collect();
        OperationTable::new(self.domain, inner_arity, values)
    }
}

impl fmt::Display for OperationTable {
    /// Renders as `arity:digits`, one digit per table entry.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        assert!(
            self.domain.size() <= 10,
            "digit rendering needs a domain of at most 10 elements"
        );
        write!(f, "{}:", self.arity)?;
        for &v in &self.values {
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for OperationTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Iterator over every operation table of a fixed arity, in lexicographic
/// table order.
pub struct OperationIter {
    domain: Domain,
    arity: usize,
    next: Option<Vec<usize>>,
}

impl Iterator for OperationIter {
    type Item = OperationTable;

    fn next(&mut self) -> Option<OperationTable> {
        let current = self.next.take()?;
        let mut following = current.clone();
        let mut exhausted = true;
        for slot in following.iter_mut().rev() {
            if *slot + 1 < self.domain.size() {
                *slot += 1;
                exhausted = false;
                break;
            }
            *slot = 0;
        }
        if !exhausted {
            self.next = Some(following);
        }
        Some(OperationTable::new(self.domain, self.arity, current))
    }
}

/// Enumerates all `|A|^(|A|^k)` operation tables of arity `k`.
///
/// The predicted number of tables is checked against the budget before
/// anything is produced.
pub fn all_operations(
    domain: Domain,
    arity: usize,
    budget: &Budget,
) -> Result<OperationIter, Error> {
    let entries = domain.tuple_count(arity);
    let tables = entries.and_then(|e| {
        if e > u32::MAX as u128 {
            return None;
        }
        let mut total = 1u128;
        for _ in 0..e {
            total = total.checked_mul(domain.size() as u128)?;
        }
        Some(total)
    });
    budget.check("operation table", tables, budget.max_operation_tables)?;
    let entries = entries.expect("checked above") as usize;
    Ok(OperationIter {
        domain,
        arity,
        next: Some(vec![0; entries]),
    })
}

/// A failed preservation check: `k` tuples of the relation whose
/// componentwise image is outside it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PreservationViolation {
    pub selection: Vec<Vec<usize>>,
    pub image: Vec<usize>,
}

/// Finds the first violating tuple selection, scanning selections in
/// lexicographic order over the sorted relation.
///
/// Returns `None` when the operation preserves the relation. The empty
/// relation is preserved by everything.
///
/// # Panics
///
/// Panics if the operation and relation domains differ.
pub fn find_violation(
    f: &OperationTable,
    relation: &ExtensionalRelation,
) -> Option<PreservationViolation> {
    assert_eq!(
        f.domain(),
        relation.domain(),
        "operation and relation domains differ"
    );
    if relation.is_empty() {
        return None;
    }
    let domain = f.domain();
    let size = domain.size();
    let k = f.arity();
    let m = relation.arity();
    let tuples: Vec<&Vec<usize>> = relation.iter().collect();

    // Membership of the image is tested against a bit set over all tuple
    // indices when that fits comfortably in memory.
    let universe = domain.tuple_count(m).filter(|&u| u <= 1 << 24);
    let bitset = universe.map(|u| {
        let mut bits = vec![0u64; (u as usize).div_ceil(64)];
        for t in &tuples {
            let index = domain.tuple_index(t);
            bits[index / 64] |= 1 << (index % 64);
        }
        bits
    });

    let mut selection = vec![0usize; k];
    let mut image = vec![0usize; m];
    loop {
        let mut image_index = 0usize;
        for (j, slot) in image.iter_mut().enumerate() {
            let mut arg_index = 0usize;
            for &s in &selection {
                arg_index = arg_index * size + tuples[s][j];
            }
            let v = f.values()[arg_index];
            *slot = v;
            image_index = image_index * size + v;
        }
        let present = match &bitset {
            Some(bits) => bits[image_index / 64] & (1 << (image_index % 64)) != 0,
            None => relation.contains(&image),
        };
        if !present {
            return Some(PreservationViolation {
                selection: selection.iter().map(|&s| tuples[s].clone()).collect(),
                image,
            });
        }
        let mut pos = k;
        loop {
            if pos == 0 {
                return None;
            }
            if selection[pos - 1] + 1 < tuples.len() {
                selection[pos - 1] += 1;
                break;
            }
            selection[pos - 1] = 0;
            pos -= 1;
        }
    }
}

/// Whether the operation preserves the relation.
pub fn preserves(f: &OperationTable, relation: &ExtensionalRelation) -> bool {
    find_violation(f, relation).is_none()
}

/// All polymorphisms of a relation set up to a bounded arity, stored per
/// arity in enumeration order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct BoundedClone {
    domain: Domain,
    max_arity: usize,
    ops: Vec<Vec<OperationTable>>,
}

impl BoundedClone {
    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    /// The operations of one arity, sorted in table order.
    ///
    /// # Panics
    ///
    /// Panics if the arity is zero or beyond the bound.
    pub fn arity_ops(&self, arity: usize) -> &[OperationTable] {
        assert!(arity >= 1 && arity <= self.max_arity, "arity out of range");
        &self.ops[arity - 1]
    }

    pub fn count(&self, arity: usize) -> usize {
        self.arity_ops(arity).len()
    }

    pub fn total_count(&self) -> usize {
        self.ops.iter().map(Vec::len).sum()
    }

    pub fn contains(&self, f: &OperationTable) -> bool {
        if f.arity() == 0 || f.arity() > self.max_arity {
            return false;
        }
        self.ops[f.arity() - 1].binary_search(f).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = &OperationTable> {
        self.ops.iter().flatten()
    }

    /// Containment per arity.
    ///
    /// # Panics
    ///
    /// Panics if domains or arity bounds differ.
    pub fn is_subset_of(&self, other: &BoundedClone) -> bool {
        assert_eq!(self.domain, other.domain, "clone domains differ");
        assert_eq!(self.max_arity, other.max_arity, "clone arity bounds differ");
        self.ops.iter().zip(&other.ops).all(|(mine, theirs)| {
            mine.iter().all(|f| theirs.binary_search(f).is_ok())
        })
    }

    /// Arity-wise intersection. Intersecting the polymorphisms of two
    /// relation sets gives the polymorphisms of their union.
    ///
    /// # Panics
    ///
    /// Panics if domains or arity bounds differ.
    pub fn intersect(&self, other: &BoundedClone) -> BoundedClone {
        assert_eq!(self.domain, other.domain, "clone domains differ");
        assert_eq!(self.max_arity, other.max_arity, "clone arity bounds differ");
        let ops = self
            .ops
            .iter()
            .zip(&other.ops)
            .map(|(mine, theirs)| {
                mine.iter()
                    .filter(|f| theirs.binary_search(f).is_ok())
                    .cloned()
                    .collect()
            })
            .collect();
        BoundedClone {
            domain: self.domain,
            max_arity: self.max_arity,
            ops,
        }
    }
}

fn check_selection_budget(
    relations: &[ExtensionalRelation],
    max_arity: usize,
    budget: &Budget,
) -> Result<(), Error> {
    for r in relations {
        let mut selections = Some(1u128);
        for _ in 0..max_arity {
            selections = selections.and_then(|s| s.checked_mul(r.len() as u128));
        }
        budget.check("preservation scan", selections, budget.max_selections)?;
    }
    Ok(())
}

/// Computes the polymorphisms of the relation set up to the given arity
/// by enumerating and filtering every table.
///
/// An empty relation set yields every operation.
///
/// # Panics
///
/// Panics if a relation's domain differs from `domain`, or if `max_arity`
/// is zero.
pub fn pol_bounded(
    domain: Domain,
    relations: &[ExtensionalRelation],
    max_arity: usize,
    budget: &Budget,
) -> Result<BoundedClone, Error> {
    assert!(max_arity >= 1, "arity bound must be at least one");
    for r in relations {
        assert_eq!(r.domain(), domain, "relation domain mismatch");
    }
    check_selection_budget(relations, max_arity, budget)?;
    let mut ops = Vec::with_capacity(max_arity);
    for arity in 1..=max_arity {
        let keep: Vec<OperationTable> = all_operations(domain, arity, budget)?
            .filter(|f| relations.iter().all(|r| preserves(f, r)))
            .collect();
        ops.push(keep);
    }
    Ok(BoundedClone {
        domain,
        max_arity,
        ops,
    })
}

/// Searches for an operation of arity at most `max_arity` that preserves
/// every relation in `first` but breaks some relation in `second`. Such an
/// operation refutes the inclusion Pol(first) ⊆ Pol(second).
///
/// Returns the first counterexample in enumeration order, or `None` when
/// the bounded search is exhausted.
///
/// # Panics
///
/// Panics if a relation's domain differs from `domain`, or if `max_arity`
/// is zero.
pub fn clone_leq_bounded(
    domain: Domain,
    first: &[ExtensionalRelation],
    second: &[ExtensionalRelation],
    max_arity: usize,
    budget: &Budget,
) -> Result<Option<OperationTable>, Error> {
    assert!(max_arity >= 1, "arity bound must be at least one");
    for r in first.iter().chain(second) {
        assert_eq!(r.domain(), domain, "relation domain mismatch");
    }
    check_selection_budget(first, max_arity, budget)?;
    check_selection_budget(second, max_arity, budget)?;
    for arity in 1..=max_arity {
        for f in all_operations(domain, arity, budget)? {
            if first.iter().all(|r| preserves(&f, r))
                && second.iter().any(|r| !preserves(&f, r))
            {
                return Ok(Some(f));
            }
        }
    }
    Ok(None)
}
