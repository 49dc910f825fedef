use std::fmt;

use crate::error::{Error, Result};

/// Largest number of points a [`PointSet`] (and therefore a space) can hold.
pub const MAX_POINTS: usize = 64;

/// A subset of the points `0..len` of a finite space, stored as a single word.
///
/// Points are 0-indexed internally; every textual form (`Display`, JSON,
/// [`PointSet::labels`]) uses 1-based labels.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointSet {
    bits: u64,
    len: u8,
}

fn mask(len: usize) -> u64 {
    if len == 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

impl PointSet {
    pub fn empty(len: usize) -> Self {
        assert!(
            len <= MAX_POINTS,
            "point sets hold at most {MAX_POINTS} points"
        );
        PointSet {
            bits: 0,
            len: len as u8,
        }
    }

    pub fn full(len: usize) -> Self {
        assert!(
            len <= MAX_POINTS,
            "point sets hold at most {MAX_POINTS} points"
        );
        PointSet {
            bits: mask(len),
            len: len as u8,
        }
    }

    /// Builds a set from raw bits; bits at or above `len` are dropped.
    pub fn from_bits(len: usize, bits: u64) -> Self {
        assert!(
            len <= MAX_POINTS,
            "point sets hold at most {MAX_POINTS} points"
        );
        PointSet {
            bits: bits & mask(len),
            len: len as u8,
        }
    }

    /// Builds a set from 0-based point indices.
    pub fn from_points<I: IntoIterator<Item = usize>>(len: usize, points: I) -> Result<Self> {
        let mut set = PointSet::empty(len);
        for p in points {
            if p >= len {
                return Err(Error::Range {
                    what: "point index",
                    value: p,
                    valid: format!("0..{len}"),
                });
            }
            set.bits |= 1 << p;
        }
        Ok(set)
    }

    /// Builds a set from 1-based point labels, the convention used in all I/O.
    pub fn from_labels<I: IntoIterator<Item = usize>>(len: usize, labels: I) -> Result<Self> {
        let mut set = PointSet::empty(len);
        for l in labels {
            if l == 0 || l > len {
                return Err(Error::Range {
                    what: "point label",
                    value: l,
                    valid: format!("1..={len}"),
                });
            }
            set.bits |= 1 << (l - 1);
        }
        Ok(set)
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn len(self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn count(self) -> usize {
        self.bits.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn contains(self, point: usize) -> bool {
        point < self.len() && self.bits >> point & 1 == 1
    }

    #[inline]
    pub fn is_subset(self, other: PointSet) -> bool {
        self.bits & !other.bits == 0
    }

    #[inline]
    pub fn complement(self) -> PointSet {
        PointSet {
            bits: !self.bits & mask(self.len()),
            len: self.len,
        }
    }

    #[inline]
    pub fn intersection(self, other: PointSet) -> PointSet {
        debug_assert_eq!(self.len, other.len);
        PointSet {
            bits: self.bits & other.bits,
            len: self.len,
        }
    }

    #[inline]
    pub fn union(self, other: PointSet) -> PointSet {
        debug_assert_eq!(self.len, other.len);
        PointSet {
            bits: self.bits | other.bits,
            len: self.len,
        }
    }

    /// Places `other` after `self`, as in a topological sum of the two spaces.
    pub fn concat(self, other: PointSet) -> PointSet {
        let len = self.len() + other.len();
        assert!(
            len <= MAX_POINTS,
            "point sets hold at most {MAX_POINTS} points"
        );
        PointSet {
            bits: self.bits | other.bits << self.len(),
            len: len as u8,
        }
    }

    /// 0-based members in increasing order.
    pub fn points(self) -> impl Iterator<Item = usize> {
        let mut bits = self.bits;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let p = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(p)
            }
        })
    }

    /// 1-based labels in increasing order.
    pub fn labels(self) -> Vec<usize> {
        self.points().map(|p| p + 1).collect()
    }

    pub(crate) fn check_len(self, expected: usize) -> Result<()> {
        if self.len() != expected {
            return Err(Error::Dimension {
                expected,
                found: self.len(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (n, l) in self.labels().into_iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PointSet({}/{})", self, self.len)
    }
}

/// All subsets of `len` points ordered by increasing popcount, then by
/// numeric value. This is the sweep order used by every exhaustive search.
pub fn subsets_by_popcount(len: usize) -> Vec<PointSet> {
    assert!(len <= 24, "refusing to list 2^{len} subsets");
    let mut all: Vec<u64> = (0..1u64 << len).collect();
    all.sort_by_key(|b| (b.count_ones(), *b));
    all.into_iter()
        .map(|b| PointSet::from_bits(len, b))
        .collect()
}

/// Every `n`-tuple of subsets of `len` points, lexicographic with the first
/// generator most significant and each slot in [`subsets_by_popcount`] order.
pub struct Assignments {
    subsets: Vec<PointSet>,
    digits: Vec<usize>,
    done: bool,
}

impl Assignments {
    pub fn new(len: usize, n: usize) -> Self {
        Assignments {
            subsets: subsets_by_popcount(len),
            digits: vec![0; n],
            done: false,
        }
    }

    pub fn total(len: usize, n: usize) -> u128 {
        1u128 << (len * n)
    }
}

impl Iterator for Assignments {
    type Item = Vec<PointSet>;

    fn next(&mut self) -> Option<Vec<PointSet>> {
        if self.done {
            return None;
        }
        let out = self.digits.iter().map(|&d| self.subsets[d]).collect();
        let base = self.subsets.len();
        let mut pos = self.digits.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.digits[pos] += 1;
            if self.digits[pos] < base {
                break;
            }
            self.digits[pos] = 0;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_are_one_based() {
        let s = PointSet::from_labels(5, [1, 3]).unwrap();
        assert_eq!(s.bits(), 0b101);
        assert_eq!(s.labels(), vec![1, 3]);
        assert_eq!(s.to_string(), "{1,3}");
    }

    #[test]
    fn out_of_range_labels_are_rejected() {
        assert!(PointSet::from_labels(3, [0]).is_err());
        assert!(PointSet::from_labels(3, [4]).is_err());
        assert!(PointSet::from_points(3, [3]).is_err());
    }

    #[test]
    fn complement_stays_inside_the_space() {
        let s = PointSet::from_labels(3, [2]).unwrap();
        assert_eq!(s.complement().labels(), vec![1, 3]);
        assert_eq!(PointSet::full(64).complement(), PointSet::empty(64));
    }

    #[test]
    fn concat_shifts_the_second_operand() {
        let a = PointSet::from_labels(2, [1]).unwrap();
        let b = PointSet::from_labels(3, [2, 3]).unwrap();
        assert_eq!(a.concat(b).labels(), vec![1, 4, 5]);
    }

    #[test]
    fn popcount_order() {
        let subsets = subsets_by_popcount(3);
        let bits: Vec<u64> = subsets.iter().map(|s| s.bits()).collect();
        assert_eq!(bits, vec![0, 1, 2, 4, 3, 5, 6, 7]);
    }

    #[test]
    fn assignments_cover_all_tuples_in_order() {
        let all: Vec<Vec<PointSet>> = Assignments::new(2, 2).collect();
        assert_eq!(all.len() as u128, Assignments::total(2, 2));
        assert_eq!(all[0], vec![PointSet::empty(2), PointSet::empty(2)]);
        assert_eq!(all[1][1].bits(), 1);
        assert_eq!(all[4][0].bits(), 1);
        assert_eq!(all.last().unwrap()[0], PointSet::full(2));
    }
}
