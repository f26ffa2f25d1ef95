use std::cmp::Ordering;
use std::fmt;

use super::GaError;

/// Largest supported algebra dimension (one bit per basis vector).
pub const MAX_DIMENSION: usize = 64;

/// A basis blade `σ_{i j ...}` encoded as a bitmask over basis-vector indices.
///
/// Bit `i` set means `σ_i` is a factor. Factors are always kept in ascending
/// index order, so the mask alone identifies the blade. The empty mask is the
/// scalar unit.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Blade(u64);

impl Blade {
    pub const SCALAR: Blade = Blade(0);

    pub const fn from_mask(mask: u64) -> Self {
        Blade(mask)
    }

    /// Single basis vector `σ_index`.
    pub fn vector(index: usize) -> Result<Self, GaError> {
        if index >= MAX_DIMENSION {
            return Err(GaError::IndexOutOfRange {
                index,
                dimension: MAX_DIMENSION,
            });
        }
        Ok(Blade(1 << index))
    }

    /// Builds a blade from distinct indices. The order of `indices` does not
    /// matter; the blade is stored canonically (callers who need the sign of a
    /// permuted product should multiply vectors instead).
    pub fn from_indices(indices: &[usize]) -> Result<Self, GaError> {
        let mut mask = 0u64;
        for &index in indices {
            let bit = Blade::vector(index)?.0;
            if mask & bit != 0 {
                return Err(GaError::RepeatedIndex(index));
            }
            mask |= bit;
        }
        Ok(Blade(mask))
    }

    /// The bivector `σ_a σ_b` with `a < b`.
    pub fn plane(a: usize, b: usize) -> Result<Self, GaError> {
        if a == b {
            return Err(GaError::RepeatedIndex(a));
        }
        Blade::from_indices(&[a, b])
    }

    pub const fn mask(self) -> u64 {
        self.0
    }

    pub const fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_scalar(self) -> bool {
        self.0 == 0
    }

    /// Smallest dimension able to hold this blade.
    pub const fn min_dimension(self) -> usize {
        (u64::BITS - self.0.leading_zeros()) as usize
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let index = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(index)
        })
    }

    /// Sign picked up when reordering the concatenated factor list of
    /// `self` followed by `other` into canonical order. Counts, for every
    /// factor of `other`, how many factors of `self` have a larger index.
    pub fn reorder_sign(self, other: Blade) -> f64 {
        let mut a = self.0 >> 1;
        let mut swaps = 0u32;
        while a != 0 {
            swaps += (a & other.0).count_ones();
            a >>= 1;
        }
        if swaps & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Euclidean blade product: repeated factors square to +1.
    pub fn product(self, other: Blade) -> (f64, Blade) {
        (self.reorder_sign(other), Blade(self.0 ^ other.0))
    }

    /// Sign `(-1)^{k(k-1)/2}` applied by reversion to a grade-k blade.
    pub fn reverse_sign(self) -> f64 {
        let k = self.grade();
        if (k * k.saturating_sub(1) / 2).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }
}

impl Ord for Blade {
    // grade first, then index lists lexicographically: 1, σ1, σ2, σ12, σ16, σ25 ...
    fn cmp(&self, other: &Self) -> Ordering {
        self.grade()
            .cmp(&other.grade())
            .then_with(|| self.indices().cmp(other.indices()))
    }
}

impl PartialOrd for Blade {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_scalar() {
            return f.write_str("1");
        }
        f.write_str("σ")?;
        if self.indices().all(|i| i < 10) {
            for i in self.indices() {
                write!(f, "{i}")?;
            }
        } else {
            for i in self.indices() {
                write!(f, "({i})")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indices_roundtrip() {
        let b = Blade::from_indices(&[5, 1, 2]).unwrap();
        assert_eq!(b.indices().collect::<Vec<_>>(), vec![1, 2, 5]);
        assert_eq!(b.grade(), 3);
        assert_eq!(b.min_dimension(), 6);
    }

    #[test]
    fn repeated_index_rejected() {
        assert!(matches!(
            Blade::from_indices(&[3, 3]),
            Err(GaError::RepeatedIndex(3))
        ));
        assert!(Blade::vector(64).is_err());
    }

    #[test]
    fn anticommuting_vectors() {
        let s1 = Blade::vector(1).unwrap();
        let s2 = Blade::vector(2).unwrap();
        assert_eq!(s1.product(s2), (1.0, Blade::plane(1, 2).unwrap()));
        assert_eq!(s2.product(s1), (-1.0, Blade::plane(1, 2).unwrap()));
        assert_eq!(s1.product(s1), (1.0, Blade::SCALAR));
    }

    #[test]
    fn display_matches_index_notation() {
        assert_eq!(Blade::plane(1, 2).unwrap().to_string(), "σ12");
        assert_eq!(Blade::plane(9, 10).unwrap().to_string(), "σ(9)(10)");
        assert_eq!(Blade::SCALAR.to_string(), "1");
    }

    #[test]
    fn ordering_by_grade_then_indices() {
        let mut v = [
            Blade::plane(2, 5).unwrap(),
            Blade::plane(1, 6).unwrap(),
            Blade::vector(3).unwrap(),
            Blade::SCALAR,
            Blade::plane(1, 2).unwrap(),
        ];
        v.sort();
        let names: Vec<_> = v.iter().map(|b| b.to_string()).collect();
        assert_eq!(names, ["1", "σ3", "σ12", "σ16", "σ25"]);
    }
}
