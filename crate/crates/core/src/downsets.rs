//! Downsets of pattern vectors under the support-preserving order.
//!
//! A downset is stored by its canonical antichain of maximal generators;
//! membership, inclusion, and enumeration all reduce to generator
//! comparisons. Boxes `{0…B}^d` are the finite stage on which downsets are
//! enumerated and counted.
//!
//! Under the support-preserving order a box splits into one component per
//! support set: vectors with support S form a grid `{1…B}^S` and vectors
//! with different supports are incomparable. Counting downsets therefore
//! multiplies grid ideal counts over all supports, while enumeration works
//! on the whole box poset directly. The two routes are independent and are
//! cross-checked in the tests, together with a subset-filter oracle.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::patterns::{PatternVector, Support, MAX_DIMENSION};
use crate::{Budget, Error};

/// A finitely generated downset of the support-preserving order on
/// d-dimensional pattern vectors.
///
/// The stored generators form the canonical antichain: no generator is
/// below another. The derived `Ord` sorts downsets by their generator
/// lists and exists for canonical output orders.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Downset {
    dimension: usize,
    generators: BTreeSet<PatternVector>,
}

impl Downset {
    /// The empty downset.
    pub fn empty(dimension: usize) -> Self {
        Downset {
            dimension,
            generators: BTreeSet::new(),
        }
    }

    /// The downset generated by the given vectors, brought to canonical
    /// form by dropping every generator below another.
    ///
    /// # Panics
    ///
    /// Panics if a generator does not have the stated dimension.
    pub fn generate<I>(dimension: usize, generators: I) -> Self
    where
        I: IntoIterator<Item = PatternVector>,
    {
        let raw: BTreeSet<PatternVector> = generators.into_iter().collect();
        for g in &raw {
            assert_eq!(g.dimension(), dimension, "generator dimension mismatch");
        }
        let generators = raw
            .iter()
            .filter(|g| !raw.iter().any(|h| *g != h && g.below(h)))
            .cloned()
            .collect();
        Downset {
            dimension,
            generators,
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn generators(&self) -> impl Iterator<Item = &PatternVector> {
        self.generators.iter()
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Membership: below some generator.
    ///
    /// # Panics
    ///
    /// Panics if the vector has the wrong dimension.
    pub fn contains(&self, x: &PatternVector) -> bool {
        assert_eq!(x.dimension(), self.dimension, "dimension mismatch");
        self.generators.iter().any(|g| x.below(g))
    }

    /// Inclusion: every generator of `self` lies below a generator of
    /// `other`.
    ///
    /// # Panics
    ///
    /// Panics if the dimensions differ.
    pub fn leq(&self, other: &Downset) -> bool {
        assert_eq!(self.dimension, other.dimension, "dimension mismatch");
        self.generators.iter().all(|g| other.contains(g))
    }

    /// All elements. Principal downsets are finite here: below a generator
    /// g sit exactly the vectors matching g's support with counts between
    /// 1 and g on it.
    pub fn elements(&self) -> BTreeSet<PatternVector> {
        let mut out = BTreeSet::new();
        for g in &self.generators {
            let support: Vec<usize> = g.support().iter().collect();
            let mut current = vec![0usize; self.dimension];
            for &i in &support {
                current[i] = 1;
            }
            loop {
                out.insert(PatternVector::new(current.clone()));
                // Odometer over the support coordinates, last one fastest.
                let mut pos = support.len();
                loop {
                    if pos == 0 {
                        break;
                    }
                    let i = support[pos - 1];
                    if current[i] < g.count(i) {
                        current[i] += 1;
                        break;
                    }
                    current[i] = 1;
                    pos -= 1;
                }
                if pos == 0 {
                    break;
                }
            }
        }
        out
    }
}

impl fmt::Display for Downset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Downset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The box `{0…bound}^dimension` of pattern vectors.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BoundedBox {
    dimension: usize,
    bound: usize,
}

impl BoundedBox {
    /// # Panics
    ///
    /// Panics if the dimension exceeds [`MAX_DIMENSION`].
    pub fn new(dimension: usize, bound: usize) -> Self {
        assert!(dimension <= MAX_DIMENSION, "box dimension too large");
        BoundedBox { dimension, bound }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn contains(&self, x: &PatternVector) -> bool {
        x.dimension() == self.dimension && x.counts().iter().all(|&c| c <= self.bound)
    }

    /// `(bound+1)^dimension`, if it fits in `u128`.
    pub fn element_count(&self) -> Option<u128> {
        let mut total = 1u128;
        for _ in 0..self.dimension {
            total = total.checked_mul(self.bound as u128 + 1)?;
        }
        Some(total)
    }

    /// All box elements in lexicographic order.
    ///
    /// # Panics
    ///
    /// Panics if the box has more than 2^20 elements.
    pub fn elements(&self) -> Vec<PatternVector> {
        let total = self
            .element_count()
            .filter(|&t| t <= 1 << 20)
            .expect("box too large to materialize") as usize;
        let mut out = Vec::with_capacity(total);
        let mut current = vec![0usize; self.dimension];
        for _ in 0..total {
            out.push(PatternVector::new(current.clone()));
            for slot in current.iter_mut().rev() {
                if *slot < self.bound {
                    *slot += 1;
                    break;
                }
                *slot = 0;
            }
        }
        out
    }
}

/// Enumerates every downset of the box under the support-preserving order,
/// in sorted canonical order.
///
/// Ideals are grown by repeatedly splitting on a minimal remaining element
/// x: every ideal either avoids x (then also everything above it) or
/// contains all of x's principal downset. Each recursion leaf is one
/// ideal, so the work is proportional to the number of downsets, which is
/// predicted first and checked against the budget.
pub fn enumerate_box_downsets(bx: BoundedBox, budget: &Budget) -> Result<Vec<Downset>, Error> {
    let total = budget.check("box element", bx.element_count(), 64)? as usize;
    let predicted = count_box_downsets(bx, budget)?;
    budget.check("box downset enumeration", Some(predicted), budget.max_downsets)?;

    let elements = bx.elements();
    let mut down = vec![0u64; total];
    let mut up = vec![0u64; total];
    for i in 0..total {
        for j in 0..total {
            if elements[j].below(&elements[i]) {
                down[i] |= 1 << j;
                up[j] |= 1 << i;
            }
        }
    }

    let mut masks = Vec::with_capacity(predicted as usize);
    let full = if total == 64 {
        u64::MAX
    } else {
        (1u64 << total) - 1
    };
    collect_ideals(full, 0, &down, &up, &mut masks);

    let mut out: Vec<Downset> = masks
        .into_iter()
        .map(|mask| {
            let generators = (0..total)
                .filter(|&i| mask & (1 << i) != 0 && mask & up[i] == 1 << i)
                .map(|i| elements[i].clone());
            Downset::generate(bx.dimension(), generators)
        })
        .collect();
    out.sort();
    out
        .windows(2)
        .for_each(|w| debug_assert!(w[0] != w[1], "duplicate downset"));
    Ok(out)
}

fn collect_ideals(alive: u64, acc: u64, down: &[u64], up: &[u64], out: &mut Vec<u64>) {
    if alive == 0 {
        out.push(acc);
        return;
    }
    let x = alive.trailing_zeros() as usize;
    collect_ideals(alive & !up[x], acc, down, up, out);
    collect_ideals(alive & !down[x], acc | (down[x] & alive), down, up, out);
}

/// Counts the downsets of the box under the support-preserving order.
///
/// Splits the box by support: vectors of support S form a grid `{1…B}^S`
/// and are incomparable to every other support, so the total is the
/// product of grid ideal counts over all supports. Grids of equal size
/// have equal counts, so only one count per support size is computed. The
/// budget caps each grid recursion and the final product.
pub fn count_box_downsets(bx: BoundedBox, budget: &Budget) -> Result<u128, Error> {
    let d = bx.dimension();
    let mut total = 1u128;
    for size in 0..=d {
        let per_grid = count_grid_ideals(size, bx.bound(), budget)?;
        for _ in 0..binomial(d, size) {
            if per_grid == 1 {
                break;
            }
            total = budget.check(
                "downset count",
                total.checked_mul(per_grid),
                u128::MAX,
            )?;
        }
    }
    Ok(total)
}

fn binomial(n: usize, k: usize) -> u128 {
    let mut result = 1u128;
    for i in 0..k {
        result = result * (n - i) as u128 / (i + 1) as u128;
    }
    result
}

/// Ideal count of the grid `({1…bound}^size, ≤)`.
fn count_grid_ideals(size: usize, bound: usize, budget: &Budget) -> Result<u128, Error> {
    if size == 0 {
        // One element, the empty vector: two ideals.
        return Ok(2);
    }
    if bound == 0 {
        // Empty grid: only the empty ideal.
        return Ok(1);
    }
    let mut total = 1u128;
    for _ in 0..size {
        total = budget.check("grid element", total.checked_mul(bound as u128), 128)?;
    }
    let total = total as usize;

    // Enumerate grid points as base-`bound` digit vectors.
    let mut down = vec![0u128; total];
    let mut up = vec![0u128; total];
    let digits = |mut index: usize| -> Vec<usize> {
        let mut v = vec![0usize; size];
        for slot in v.iter_mut().rev() {
            *slot = index % bound;
            index /= bound;
        }
        v
    };
    let points: Vec<Vec<usize>> = (0..total).map(digits).collect();
    for i in 0..total {
        for j in 0..total {
            if points[j].iter().zip(&points[i]).all(|(a, b)| a <= b) {
                down[i] |= 1 << j;
                up[j] |= 1 << i;
            }
        }
    }
    let full = if total == 128 {
        u128::MAX
    } else {
        (1u128 << total) - 1
    };
    let mut count = 0u128;
    count_ideals(full, &down, &up, &mut count, budget.max_downsets)?;
    Ok(count)
}

fn count_ideals(
    alive: u128,
    down: &[u128],
    up: &[u128],
    count: &mut u128,
    cap: u128,
) -> Result<(), Error> {
    if alive == 0 {
        *count += 1;
        if *count > cap {
            return Err(Error::BudgetExceeded {
                what: "downset count recursion",
                needed: Some(*count),
                limit: cap,
            });
        }
        return Ok(());
    }
    let x = alive.trailing_zeros() as usize;
    count_ideals(alive & !up[x], down, up, count, cap)?;
    count_ideals(alive & !down[x], down, up, count, cap)
}

/// The two-layer split of a box downset: its full-support elements and,
/// for every coordinate, the elements whose support avoids that
/// coordinate. The parts overlap and their union restores the input.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DeltaDecomposition {
    /// Elements whose support is all of `{0…d-1}`.
    pub full_support: BTreeSet<PatternVector>,
    /// For each coordinate i, the elements with no occurrence of i.
    pub avoiding: Vec<BTreeSet<PatternVector>>,
}

impl DeltaDecomposition {
    /// Union of all parts.
    pub fn reassemble(&self) -> BTreeSet<PatternVector> {
        let mut out = self.full_support.clone();
        for part in &self.avoiding {
            out.extend(part.iter().cloned());
        }
        out
    }
}

/// Splits a downset of the box into its full-support part and its
/// coordinate-avoiding parts.
///
/// The input is given as an explicit element set and must be a downward
/// closed subset of the box; otherwise `NotADownset` is reported. Each
/// returned part is itself downward closed in its induced subposet.
pub fn decompose_delta(
    x: &BTreeSet<PatternVector>,
    bx: BoundedBox,
) -> Result<DeltaDecomposition, Error> {
    let d = bx.dimension();
    for v in x {
        if !bx.contains(v) {
            return Err(Error::NotADownset);
        }
    }
    for v in x {
        let principal = Downset::generate(d, [v.clone()]);
        for below in principal.elements() {
            if !x.contains(&below) {
                return Err(Error::NotADownset);
            }
        }
    }

    let full = Support::full(d);
    let full_support = x.iter().filter(|v| v.support() == full).cloned().collect();
    let avoiding = (0..d)
        .map(|i| {
            x.iter()
                .filter(|v| !v.support().contains(i))
                .cloned()
                .collect()
        })
        .collect();
    Ok(DeltaDecomposition {
        full_support,
        avoiding,
    })
}
