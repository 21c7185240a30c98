//! The fixed enumeration `0, -1, 1, -2, 2, ...` of the integers.

/// Bijection between integers and their position in the zigzag order
/// `0, -1, 1, -2, 2, -3, 3, ...`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CanonicalOrder;

impl CanonicalOrder {
    /// Position of `x` in the order: `rank(0) = 0`, `rank(-k) = 2k - 1`, `rank(k) = 2k`.
    pub fn rank(x: i64) -> u64 {
        if x >= 0 {
            2 * x as u64
        } else {
            2 * x.unsigned_abs() - 1
        }
    }

    /// Inverse of [`CanonicalOrder::rank`].
    pub fn at(rank: u64) -> i64 {
        if rank.is_multiple_of(2) {
            (rank / 2) as i64
        } else {
            -(rank.div_ceil(2) as i64)
        }
    }

    /// Iterator over the whole order, starting at `0`.
    pub fn iter() -> impl Iterator<Item = i64> {
        (0u64..).map(Self::at)
    }

    /// Compare two integers by canonical rank.
    pub fn cmp(a: i64, b: i64) -> std::cmp::Ordering {
        Self::rank(a).cmp(&Self::rank(b))
    }
}

/// The element following `x` in the canonical order.
pub fn successor(x: i64) -> i64 {
    CanonicalOrder::at(CanonicalOrder::rank(x) + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_elements() {
        let got: Vec<i64> = CanonicalOrder::iter().take(9).collect();
        assert_eq!(got, vec![0, -1, 1, -2, 2, -3, 3, -4, 4]);
    }

    #[test]
    fn rank_formula() {
        assert_eq!(CanonicalOrder::rank(0), 0);
        for k in 1..50i64 {
            assert_eq!(CanonicalOrder::rank(-k), 2 * k as u64 - 1);
            assert_eq!(CanonicalOrder::rank(k), 2 * k as u64);
        }
    }

    #[test]
    fn bijection() {
        for r in 0..1000u64 {
            assert_eq!(CanonicalOrder::rank(CanonicalOrder::at(r)), r);
        }
        for x in -500..500 {
            assert_eq!(CanonicalOrder::at(CanonicalOrder::rank(x)), x);
        }
    }

    #[test]
    fn successor_matches_order() {
        assert_eq!(successor(-3), 3);
        assert_eq!(successor(2), -3);
        assert_eq!(successor(0), -1);
    }
}
