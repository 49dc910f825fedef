//! Finite topological spaces realized as specialization preorders.
//!
//! A space on `n` points is a reflexive, transitive boolean matrix `spec`
//! where `spec[x][y]` holds iff `x` lies in the closure of `{y}`. The closure
//! of a set is the image of the set under this relation, and every finite
//! topology arises this way.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pointset::{PointSet, MAX_POINTS};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TopSpace {
    points: usize,
    /// `cols[y]` is the set `{x : spec[x][y]}`, i.e. the closure of `{y}`.
    cols: Vec<u64>,
}

impl TopSpace {
    /// Builds a space from a row-major `spec` matrix without checking the
    /// preorder axioms. Use [`validate_space`] (or [`TopSpace::new`]) to
    /// check them.
    pub fn from_matrix_unchecked(rows: &[Vec<bool>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Input("a space needs at least one point".into()));
        }
        if n > MAX_POINTS {
            return Err(Error::Cap {
                what: "point_count",
                requested: n,
                cap: MAX_POINTS,
            });
        }
        let mut cols = vec![0u64; n];
        for (x, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    found: row.len(),
                });
            }
            for (y, &b) in row.iter().enumerate() {
                if b {
                    cols[y] |= 1 << x;
                }
            }
        }
        Ok(TopSpace { points: n, cols })
    }

    /// Builds a space and rejects matrices that fail [`validate_space`].
    pub fn new(rows: &[Vec<bool>]) -> Result<Self> {
        let space = Self::from_matrix_unchecked(rows)?;
        let report = validate_space(&space, &ValidationConfig::default());
        if !report.is_valid() {
            return Err(Error::InvalidSpace(Box::new(report)));
        }
        Ok(space)
    }

    pub(crate) fn from_cols(points: usize, cols: Vec<u64>) -> Self {
        debug_assert_eq!(cols.len(), points);
        TopSpace { points, cols }
    }

    /// Every set closed; `spec` is the identity matrix.
    pub fn discrete(points: usize) -> Self {
        assert!((1..=MAX_POINTS).contains(&points));
        TopSpace {
            points,
            cols: (0..points).map(|y| 1u64 << y).collect(),
        }
    }

    /// Only the empty set and the whole space are closed.
    pub fn indiscrete(points: usize) -> Self {
        assert!((1..=MAX_POINTS).contains(&points));
        let full = PointSet::full(points).bits();
        TopSpace {
            points,
            cols: vec![full; points],
        }
    }

    #[inline]
    pub fn point_count(&self) -> usize {
        self.points
    }

    /// `spec[x][y]`, 0-based.
    #[inline]
    pub fn spec(&self, x: usize, y: usize) -> bool {
        self.cols[y] >> x & 1 == 1
    }

    pub fn rows(&self) -> Vec<Vec<bool>> {
        (0..self.points)
            .map(|x| (0..self.points).map(|y| self.spec(x, y)).collect())
            .collect()
    }

    pub fn empty_set(&self) -> PointSet {
        PointSet::empty(self.points)
    }

    pub fn full_set(&self) -> PointSet {
        PointSet::full(self.points)
    }

    pub fn set_from_labels<I: IntoIterator<Item = usize>>(&self, labels: I) -> Result<PointSet> {
        PointSet::from_labels(self.points, labels)
    }

    #[inline]
    pub(crate) fn close_bits(&self, bits: u64) -> u64 {
        let mut out = 0;
        let mut rest = bits;
        while rest != 0 {
            let y = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            out |= self.cols[y];
        }
        out
    }

    #[inline]
    pub(crate) fn close(&self, a: PointSet) -> PointSet {
        PointSet::from_bits(self.points, self.close_bits(a.bits()))
    }

    #[inline]
    pub(crate) fn open(&self, a: PointSet) -> PointSet {
        self.close(a.complement()).complement()
    }

    pub fn closure(&self, a: PointSet) -> Result<PointSet> {
        a.check_len(self.points)?;
        Ok(self.close(a))
    }

    /// Interior, computed as the complement of the closure of the complement.
    pub fn interior(&self, a: PointSet) -> Result<PointSet> {
        a.check_len(self.points)?;
        Ok(self.open(a))
    }

    pub fn complement(&self, a: PointSet) -> Result<PointSet> {
        a.check_len(self.points)?;
        Ok(a.complement())
    }

    pub fn meet(&self, a: PointSet, b: PointSet) -> Result<PointSet> {
        a.check_len(self.points)?;
        b.check_len(self.points)?;
        Ok(a.intersection(b))
    }

    pub fn join(&self, a: PointSet, b: PointSet) -> Result<PointSet> {
        a.check_len(self.points)?;
        b.check_len(self.points)?;
        Ok(a.union(b))
    }

    /// Topological sum: `other`'s points follow `self`'s, with no relations
    /// between the two parts.
    pub fn disjoint_sum(&self, other: &TopSpace) -> TopSpace {
        let points = self.points + other.points;
        assert!(points <= MAX_POINTS, "sum exceeds {MAX_POINTS} points");
        let mut cols = self.cols.clone();
        cols.extend(other.cols.iter().map(|c| c << self.points));
        TopSpace { points, cols }
    }

    /// Relabels points: point `x` of `self` becomes point `perm[x]`.
    pub fn permuted(&self, perm: &[usize]) -> TopSpace {
        assert_eq!(perm.len(), self.points);
        let mut cols = vec![0u64; self.points];
        for y in 0..self.points {
            for x in PointSet::from_bits(self.points, self.cols[y]).points() {
                cols[perm[y]] |= 1 << perm[x];
            }
        }
        TopSpace {
            points: self.points,
            cols,
        }
    }

    pub fn to_json(&self) -> SpaceFile {
        SpaceFile {
            points: self.points,
            closure: self.rows(),
        }
    }

    /// Parses the JSON space format and rejects spaces that fail validation.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: SpaceFile = serde_json::from_str(text)?;
        file.into_space()
    }
}

impl fmt::Debug for TopSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TopSpace({} points", self.points)?;
        for y in 0..self.points {
            write!(
                f,
                ", k{{{}}}={}",
                y + 1,
                PointSet::from_bits(self.points, self.cols[y])
            )?;
        }
        f.write_str(")")
    }
}

/// On-disk form of a space: `{"points": N, "closure": [[bool, ...], ...]}`
/// with `closure` the row-major `spec` matrix.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SpaceFile {
    pub points: usize,
    pub closure: Vec<Vec<bool>>,
}

impl SpaceFile {
    pub fn into_space(self) -> Result<TopSpace> {
        if self.closure.len() != self.points {
            return Err(Error::Dimension {
                expected: self.points,
                found: self.closure.len(),
            });
        }
        TopSpace::new(&self.closure)
    }
}

/// The prefix topology on `{1..n}`: `spec[x][y]` iff `x >= y`, so the closure
/// of a nonempty set `A` is `{min A, ..., n}`.
pub fn prefix_space(points: usize) -> Result<TopSpace> {
    if points == 0 || points > MAX_POINTS {
        return Err(Error::Range {
            what: "point_count",
            value: points,
            valid: format!("1..={MAX_POINTS}"),
        });
    }
    let full = PointSet::full(points).bits();
    let cols = (0..points).map(|y| full & !((1u64 << y) - 1)).collect();
    Ok(TopSpace { points, cols })
}

#[derive(Clone, Debug)]
pub struct ValidationConfig {
    /// Spaces with at most this many points have the closure axioms checked
    /// on every subset and every pair of subsets.
    pub exhaustive_bound: usize,
    /// Number of random subset pairs checked above the exhaustive bound.
    pub samples: usize,
    pub seed: u64,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        ValidationConfig {
            exhaustive_bound: 12,
            samples: 4096,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Reflexivity { point: usize },
    Transitivity { x: usize, y: usize, z: usize },
    EmptyNotFixed { closure: PointSet },
    NotIdempotent { set: PointSet },
    NotExtensive { set: PointSet },
    NotAdditive { a: PointSet, b: PointSet },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Reflexivity { point } => {
                write!(f, "reflexivity: spec[{0}][{0}] is false", point + 1)
            }
            Violation::Transitivity { x, y, z } => write!(
                f,
                "transitivity: spec[{}][{}] and spec[{}][{}] hold but spec[{}][{}] does not",
                x + 1,
                y + 1,
                y + 1,
                z + 1,
                x + 1,
                z + 1
            ),
            Violation::EmptyNotFixed { closure } => {
                write!(f, "k(empty) = {closure}, expected the empty set")
            }
            Violation::NotIdempotent { set } => write!(f, "kk{set} != k{set}"),
            Violation::NotExtensive { set } => write!(f, "{set} is not contained in k{set}"),
            Violation::NotAdditive { a, b } => write!(f, "k({a} u {b}) != k{a} u k{b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub point_count: usize,
    pub exhaustive: bool,
    pub pairs_checked: u64,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(
                f,
                "valid ({} points, {} subset pairs checked{})",
                self.point_count,
                self.pairs_checked,
                if self.exhaustive {
                    ", exhaustive"
                } else {
                    ", sampled"
                }
            );
        }
        write!(f, "{} violation(s):", self.violations.len())?;
        for v in &self.violations {
            write!(f, " [{v}]")?;
        }
        Ok(())
    }
}

// Per-kind cap on recorded counterexamples.
const MAX_REPORTED: usize = 8;

struct Collector {
    violations: Vec<Violation>,
    counts: [usize; 6],
}

impl Collector {
    fn push(&mut self, v: Violation) {
        let kind = match v {
            Violation::Reflexivity { .. } => 0,
            Violation::Transitivity { .. } => 1,
            Violation::EmptyNotFixed { .. } => 2,
            Violation::NotIdempotent { .. } => 3,
            Violation::NotExtensive { .. } => 4,
            Violation::NotAdditive { .. } => 5,
        };
        if self.counts[kind] < MAX_REPORTED {
            self.violations.push(v);
        }
        self.counts[kind] += 1;
    }

    fn full(&self, kind: usize) -> bool {
        self.counts[kind] >= MAX_REPORTED
    }
}

/// Checks the preorder laws on the matrix and the four closure axioms on the
/// induced operator. Never fails: problems are returned as violations.
pub fn validate_space(space: &TopSpace, config: &ValidationConfig) -> ValidationReport {
    let n = space.points;
    let mut out = Collector {
        violations: Vec::new(),
        counts: [0; 6],
    };

    for x in 0..n {
        if !space.spec(x, x) {
            out.push(Violation::Reflexivity { point: x });
        }
    }
    'trans: for x in 0..n {
        for y in 0..n {
            if !space.spec(x, y) {
                continue;
            }
            for z in 0..n {
                if space.spec(y, z) && !space.spec(x, z) {
                    out.push(Violation::Transitivity { x, y, z });
                    if out.full(1) {
                        break 'trans;
                    }
                }
            }
        }
    }

    let k = |a: PointSet| space.close(a);
    let empty = space.empty_set();
    if !k(empty).is_empty() {
        out.push(Violation::EmptyNotFixed { closure: k(empty) });
    }

    let check_single = |a: PointSet, out: &mut Collector| {
        let ka = k(a);
        if k(ka) != ka && !out.full(3) {
            out.push(Violation::NotIdempotent { set: a });
        }
        if !a.is_subset(ka) && !out.full(4) {
            out.push(Violation::NotExtensive { set: a });
        }
    };
    let check_pair = |a: PointSet, b: PointSet, out: &mut Collector| {
        if k(a.union(b)) != k(a).union(k(b)) && !out.full(5) {
            out.push(Violation::NotAdditive { a, b });
        }
    };

    let exhaustive = n <= config.exhaustive_bound;
    let mut pairs_checked = 0u64;
    if exhaustive {
        let total = 1u64 << n;
        let closures: Vec<u64> = (0..total).map(|b| space.close_bits(b)).collect();
        for a in 0..total {
            check_single(PointSet::from_bits(n, a), &mut out);
        }
        for a in 0..total {
            for b in a..total {
                if closures[(a | b) as usize] != closures[a as usize] | closures[b as usize]
                    && !out.full(5)
                {
                    out.push(Violation::NotAdditive {
                        a: PointSet::from_bits(n, a),
                        b: PointSet::from_bits(n, b),
                    });
                }
            }
            pairs_checked += total - a;
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        for _ in 0..config.samples {
            let a = PointSet::from_bits(n, rng.gen());
            let b = PointSet::from_bits(n, rng.gen());
            check_single(a, &mut out);
            check_pair(a, b, &mut out);
            pairs_checked += 1;
        }
    }

    ValidationReport {
        point_count: n,
        exhaustive,
        pairs_checked,
        violations: out.violations,
    }
}
