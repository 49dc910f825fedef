//! Families of sets generated from initial sets under a subset of the five
//! operations, and the searches built on them.
//!
//! [`saturate`] finalizes sets in increasing order of their witness term
//! (size, then node kind, then children). A candidate's key depends only on
//! already-finalized children and is strictly larger than theirs, so the
//! first time a set is popped its key is the least term producing it.
//! Because finalization order equals term order, children can be compared by
//! their family index.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enumerate::spaces_up_to_iso;
use crate::equality::{check_sweep, ASSIGNMENT_BITS_CAP};
use crate::error::{Error, Result};
use crate::pointset::{Assignments, PointSet, MAX_POINTS};
use crate::term::Term;
use crate::topology::{prefix_space, TopSpace};

/// Default ceiling on family size.
pub const DEFAULT_CAP: usize = 10_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpSet {
    pub use_k: bool,
    pub use_i: bool,
    pub use_c: bool,
    pub use_meet: bool,
    pub use_join: bool,
}

impl OpSet {
    pub const IDENTITY: OpSet = OpSet {
        use_k: false,
        use_i: false,
        use_c: false,
        use_meet: false,
        use_join: false,
    };

    pub fn union(self, other: OpSet) -> OpSet {
        OpSet {
            use_k: self.use_k || other.use_k,
            use_i: self.use_i || other.use_i,
            use_c: self.use_c || other.use_c,
            use_meet: self.use_meet || other.use_meet,
            use_join: self.use_join || other.use_join,
        }
    }

    pub fn is_subset(self, other: OpSet) -> bool {
        self.union(other) == other
    }

    pub fn has_binary(self) -> bool {
        self.use_meet || self.use_join
    }

    /// Flag string over `k`, `i`, `c`, `^`, `v`; `I` for the identity alone.
    pub fn flags(self) -> String {
        let mut s = String::new();
        for (on, ch) in [
            (self.use_k, 'k'),
            (self.use_i, 'i'),
            (self.use_c, 'c'),
            (self.use_meet, '^'),
            (self.use_join, 'v'),
        ] {
            if on {
                s.push(ch);
            }
        }
        if s.is_empty() {
            s.push('I');
        }
        s
    }

    /// Every subset of the five operations.
    pub fn all() -> impl Iterator<Item = OpSet> {
        (0u8..32).map(|b| OpSet {
            use_k: b & 1 != 0,
            use_i: b & 2 != 0,
            use_c: b & 4 != 0,
            use_meet: b & 8 != 0,
            use_join: b & 16 != 0,
        })
    }
}

impl fmt::Display for OpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.flags())
    }
}

impl FromStr for OpSet {
    type Err = Error;

    fn from_str(text: &str) -> Result<OpSet> {
        let mut ops = OpSet::IDENTITY;
        for (pos, ch) in text.chars().enumerate() {
            let slot = match ch {
                'k' => &mut ops.use_k,
                'i' => &mut ops.use_i,
                'c' => &mut ops.use_c,
                '^' => &mut ops.use_meet,
                'v' => &mut ops.use_join,
                'I' | ',' | ' ' => continue,
                other => {
                    return Err(Error::Parse {
                        position: pos,
                        message: format!("unknown operation `{other}` (use k, i, c, ^, v)"),
                    })
                }
            };
            if *slot {
                return Err(Error::Parse {
                    position: pos,
                    message: format!("operation `{ch}` given twice"),
                });
            }
            *slot = true;
        }
        Ok(ops)
    }
}

const KIND_GEN: u128 = 0;
const KIND_K: u128 = 1;
const KIND_I: u128 = 2;
const KIND_C: u128 = 3;
const KIND_MEET: u128 = 4;
const KIND_JOIN: u128 = 5;

#[inline]
fn make_key(size: u64, kind: u128, a: u64, b: u64) -> u128 {
    (size as u128) << 96 | kind << 88 | (a as u128) << 44 | b as u128
}

#[inline]
fn key_size(key: u128) -> u64 {
    (key >> 96) as u64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Witness {
    Gen(usize),
    K(usize),
    I(usize),
    C(usize),
    Meet(usize, usize),
    Join(usize, usize),
}

impl Witness {
    fn from_key(key: u128) -> Witness {
        let kind = key >> 88 & 0xff;
        let a = (key >> 44 & ((1 << 44) - 1)) as usize;
        let b = (key & ((1 << 44) - 1)) as usize;
        match kind {
            KIND_GEN => Witness::Gen(a),
            KIND_K => Witness::K(a),
            KIND_I => Witness::I(a),
            KIND_C => Witness::C(a),
            KIND_MEET => Witness::Meet(a, b),
            _ => Witness::Join(a, b),
        }
    }
}

const FINAL: u128 = 0;
const UNSEEN: u128 = u128::MAX;

enum SetTable {
    Dense(Vec<u128>),
    Sparse(HashMap<u64, u128>),
}

impl SetTable {
    fn new(points: usize) -> SetTable {
        if points <= 16 {
            SetTable::Dense(vec![UNSEEN; 1 << points])
        } else {
            SetTable::Sparse(HashMap::new())
        }
    }

    #[inline]
    fn get(&self, bits: u64) -> u128 {
        match self {
            SetTable::Dense(v) => v[bits as usize],
            SetTable::Sparse(m) => m.get(&bits).copied().unwrap_or(UNSEEN),
        }
    }

    #[inline]
    fn set(&mut self, bits: u64, value: u128) {
        match self {
            SetTable::Dense(v) => v[bits as usize] = value,
            SetTable::Sparse(m) => {
                m.insert(bits, value);
            }
        }
    }
}

/// A deduplicated family of sets, each with its least witness term.
#[derive(Clone, Debug)]
pub struct Family {
    point_count: usize,
    ops: OpSet,
    sets: Vec<PointSet>,
    witnesses: Vec<Witness>,
    truncated: bool,
}

impl Family {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn ops(&self) -> OpSet {
        self.ops
    }

    /// True when the cap stopped generation before the family was closed.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// Sets in witness order.
    pub fn sets(&self) -> &[PointSet] {
        &self.sets
    }

    pub fn contains(&self, set: PointSet) -> bool {
        self.sets.contains(&set)
    }

    pub fn witness(&self, index: usize) -> Term {
        match self.witnesses[index] {
            Witness::Gen(j) => Term::gen(j),
            Witness::K(a) => self.witness(a).k(),
            Witness::I(a) => self.witness(a).i(),
            Witness::C(a) => self.witness(a).c(),
            Witness::Meet(a, b) => self.witness(a).meet(self.witness(b)),
            Witness::Join(a, b) => self.witness(a).join(self.witness(b)),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (PointSet, Term)> + '_ {
        (0..self.len()).map(|n| (self.sets[n], self.witness(n)))
    }

    pub fn to_file(&self, space: &TopSpace, space_ref: Option<String>) -> FamilyFile {
        FamilyFile {
            metadata: FamilyMetadata {
                space: space_ref.unwrap_or_else(|| "inline".into()),
                points: self.point_count,
                closure: space.rows(),
                opset: self.ops.flags(),
                truncated: self.truncated,
                count: self.len(),
            },
            family: self
                .entries()
                .map(|(set, term)| FamilyEntry {
                    set: set.labels(),
                    witness: term.to_string(),
                })
                .collect(),
        }
    }
}

/// JSON form of a family.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FamilyFile {
    pub metadata: FamilyMetadata,
    pub family: Vec<FamilyEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FamilyMetadata {
    pub space: String,
    pub points: usize,
    pub closure: Vec<Vec<bool>>,
    pub opset: String,
    pub truncated: bool,
    pub count: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FamilyEntry {
    pub set: Vec<usize>,
    pub witness: String,
}

/// Closes `initial` under `ops`, stopping once `cap` sets are present.
pub fn saturate(space: &TopSpace, initial: &[PointSet], ops: OpSet, cap: usize) -> Result<Family> {
    if initial.is_empty() {
        return Err(Error::Input("at least one initial set is required".into()));
    }
    if cap == 0 {
        return Err(Error::Range {
            what: "cap",
            value: 0,
            valid: ">= 1".into(),
        });
    }
    for a in initial {
        a.check_len(space.point_count())?;
    }
    Ok(saturate_unchecked(space, initial, ops, cap))
}

pub(crate) fn saturate_unchecked(
    space: &TopSpace,
    initial: &[PointSet],
    ops: OpSet,
    cap: usize,
) -> Family {
    let n = space.point_count();
    let mut table = SetTable::new(n);
    let mut heap: BinaryHeap<Reverse<(u128, u64)>> = BinaryHeap::new();
    let mut sets: Vec<PointSet> = Vec::new();
    let mut sizes: Vec<u64> = Vec::new();
    let mut witnesses = Vec::new();
    let mut truncated = false;

    let relax = |table: &mut SetTable,
                 heap: &mut BinaryHeap<Reverse<(u128, u64)>>,
                 bits: u64,
                 key: u128| {
        let current = table.get(bits);
        if current != FINAL && key < current {
            table.set(bits, key);
            heap.push(Reverse((key, bits)));
        }
    };

    for (j, a) in initial.iter().enumerate() {
        relax(
            &mut table,
            &mut heap,
            a.bits(),
            make_key(1, KIND_GEN, j as u64 + 1, 0),
        );
    }

    while let Some(Reverse((key, bits))) = heap.pop() {
        if table.get(bits) != key {
            continue;
        }
        if sets.len() == cap {
            truncated = true;
            break;
        }
        table.set(bits, FINAL);
        let idx = sets.len() as u64;
        let set = PointSet::from_bits(n, bits);
        let size = key_size(key);
        sets.push(set);
        sizes.push(size);
        witnesses.push(Witness::from_key(key));

        if ops.use_k {
            relax(
                &mut table,
                &mut heap,
                space.close(set).bits(),
                make_key(size + 1, KIND_K, idx, 0),
            );
        }
        if ops.use_i {
            relax(
                &mut table,
                &mut heap,
                space.open(set).bits(),
                make_key(size + 1, KIND_I, idx, 0),
            );
        }
        if ops.use_c {
            relax(
                &mut table,
                &mut heap,
                set.complement().bits(),
                make_key(size + 1, KIND_C, idx, 0),
            );
        }
        if ops.has_binary() {
            for (j, other) in sets.iter().enumerate() {
                let total = size + sizes[j] + 1;
                if ops.use_meet {
                    let key = make_key(total, KIND_MEET, j as u64, idx);
                    relax(&mut table, &mut heap, bits & other.bits(), key);
                }
                if ops.use_join {
                    let key = make_key(total, KIND_JOIN, j as u64, idx);
                    relax(&mut table, &mut heap, bits | other.bits(), key);
                }
            }
        }
    }

    Family {
        point_count: n,
        ops,
        sets,
        witnesses,
        truncated,
    }
}

/// Best family size found by a search, with the first witness reaching it.
#[derive(Clone, Debug)]
pub struct MaxResult {
    pub count: usize,
    pub space: TopSpace,
    pub assignment: Vec<PointSet>,
    /// True when every space and assignment in range was examined; false
    /// when the search stopped early on reaching its target.
    pub exhaustive: bool,
    pub spaces_checked: usize,
}

const CHUNK: usize = 64;

/// Sweeps every space with `1..=max_points` points (one per homeomorphism
/// class) and every assignment of `n_generators` sets, returning the largest
/// family size and the first (space, assignment) reaching it.
///
/// With `stop_at`, the sweep ends as soon as a family of that size is found;
/// the answer is the same whenever `stop_at` is an upper bound.
pub fn max_over_spaces(
    ops: OpSet,
    n_generators: usize,
    max_points: usize,
    cap: usize,
    stop_at: Option<usize>,
) -> Result<MaxResult> {
    if n_generators == 0 {
        return Err(Error::Range {
            what: "n_generators",
            value: 0,
            valid: ">= 1".into(),
        });
    }
    check_sweep(max_points, n_generators)?;
    let target = stop_at.unwrap_or(usize::MAX);
    let mut best: Option<MaxResult> = None;
    let mut checked = 0;
    for m in 1..=max_points {
        let spaces = spaces_up_to_iso(m)?;
        for chunk in spaces.chunks(CHUNK) {
            let results: Vec<(usize, Vec<PointSet>)> = chunk
                .par_iter()
                .map(|space| best_assignment(space, ops, n_generators, cap, target))
                .collect();
            checked += chunk.len();
            for (space, (count, assignment)) in chunk.iter().zip(results) {
                if best.as_ref().is_none_or(|b| count > b.count) {
                    best = Some(MaxResult {
                        count,
                        space: space.clone(),
                        assignment,
                        exhaustive: true,
                        spaces_checked: 0,
                    });
                }
            }
            if best.as_ref().is_some_and(|b| b.count >= target) {
                let mut b = best.take().expect("set above");
                b.exhaustive = false;
                b.spaces_checked = checked;
                return Ok(b);
            }
        }
    }
    let mut b = best.expect("at least one space");
    b.spaces_checked = checked;
    Ok(b)
}

fn best_assignment(
    space: &TopSpace,
    ops: OpSet,
    n: usize,
    cap: usize,
    target: usize,
) -> (usize, Vec<PointSet>) {
    let mut best = (0, Vec::new());
    for assignment in Assignments::new(space.point_count(), n) {
        let count = saturate_unchecked(space, &assignment, ops, cap).len();
        if count > best.0 {
            best = (count, assignment);
            if count >= target {
                break;
            }
        }
    }
    best
}

/// Best family size over every assignment of `n_generators` sets on one
/// given space.
pub fn max_on_space(
    space: &TopSpace,
    ops: OpSet,
    n_generators: usize,
    cap: usize,
) -> Result<MaxResult> {
    if n_generators == 0 {
        return Err(Error::Range {
            what: "n_generators",
            value: 0,
            valid: ">= 1".into(),
        });
    }
    let bits = space.point_count() * n_generators;
    if bits > ASSIGNMENT_BITS_CAP {
        return Err(Error::Cap {
            what: "points * generators",
            requested: bits,
            cap: ASSIGNMENT_BITS_CAP,
        });
    }
    let (count, assignment) = best_assignment(space, ops, n_generators, cap, usize::MAX);
    Ok(MaxResult {
        count,
        space: space.clone(),
        assignment,
        exhaustive: true,
        spaces_checked: 1,
    })
}

/// A witness assembled as a topological sum of small components.
#[derive(Clone, Debug)]
pub struct SumWitness {
    pub count: usize,
    pub space: TopSpace,
    pub assignment: Vec<PointSet>,
    pub components: Vec<(TopSpace, Vec<PointSet>)>,
}

/// Greedy search over topological sums.
///
/// Operations act componentwise on a sum, so two operations differ on a sum
/// iff they differ on some component. Each round appends the small
/// (space, assignment) pair that most enlarges the family, until `target` is
/// reached, no candidate helps, or `max_rounds` pass.
pub fn sum_search(
    ops: OpSet,
    n_generators: usize,
    component_points: usize,
    target: usize,
    max_rounds: usize,
    cap: usize,
) -> Result<SumWitness> {
    if n_generators == 0 {
        return Err(Error::Range {
            what: "n_generators",
            value: 0,
            valid: ">= 1".into(),
        });
    }
    check_sweep(component_points, n_generators)?;
    let mut candidates: Vec<(&'static TopSpace, Vec<PointSet>)> = Vec::new();
    for m in 1..=component_points {
        for space in spaces_up_to_iso(m)? {
            for assignment in Assignments::new(m, n_generators) {
                candidates.push((space, assignment));
            }
        }
    }

    let mut current: Option<SumWitness> = None;
    for _ in 0..max_rounds {
        let base_points = current.as_ref().map_or(0, |c| c.space.point_count());
        let base_count = current.as_ref().map_or(0, |c| c.count);
        let scored: Vec<usize> = candidates
            .par_iter()
            .map(|(space, assignment)| {
                if base_points + space.point_count() > MAX_POINTS {
                    return 0;
                }
                let (s, a) = extend(current.as_ref(), space, assignment);
                saturate_unchecked(&s, &a, ops, cap).len()
            })
            .collect();
        let (pick, &count) = scored
            .iter()
            .enumerate()
            .max_by_key(|&(n, c)| (*c, Reverse(n)))
            .expect("candidate list is nonempty");
        if count <= base_count {
            break;
        }
        let (space, assignment) = &candidates[pick];
        let (s, a) = extend(current.as_ref(), space, assignment);
        let mut components = current.map(|c| c.components).unwrap_or_default();
        components.push(((*space).clone(), assignment.clone()));
        current = Some(SumWitness {
            count,
            space: s,
            assignment: a,
            components,
        });
        if count >= target {
            break;
        }
    }
    current.ok_or_else(|| Error::Internal("sum search made no progress".into()))
}

fn extend(
    current: Option<&SumWitness>,
    space: &TopSpace,
    assignment: &[PointSet],
) -> (TopSpace, Vec<PointSet>) {
    match current {
        None => (space.clone(), assignment.to_vec()),
        Some(c) => (
            c.space.disjoint_sum(space),
            c.assignment
                .iter()
                .zip(assignment)
                .map(|(a, b)| a.concat(*b))
                .collect(),
        ),
    }
}

fn check_demo_range(n: usize, steps: usize) -> Result<()> {
    if !(4..=MAX_POINTS).contains(&n) {
        return Err(Error::Range {
            what: "N",
            value: n,
            valid: format!("4..={MAX_POINTS}"),
        });
    }
    let max_steps = (n - 2) / 2;
    if steps > max_steps {
        return Err(Error::Range {
            what: "steps",
            value: steps,
            valid: format!("0..={max_steps} for N = {n}"),
        });
    }
    Ok(())
}

/// Even labels of `{1..n}` that are at least `from`.
pub fn evens_from(n: usize, from: usize) -> PointSet {
    PointSet::from_labels(n, (from.max(2)..=n).filter(|l| l % 2 == 0)).expect("labels in range")
}

pub fn evens(n: usize) -> PointSet {
    evens_from(n, 2)
}

pub fn odds(n: usize) -> PointSet {
    evens(n).complement()
}

/// Closed form shared by both demonstrations: the evens from `2j + 2` on.
pub fn demo_closed_form(n: usize, j: usize) -> PointSet {
    evens_from(n, 2 * j + 2)
}

/// The operation `I ^ k(k ^ c)` applied to one argument.
pub fn phi_term() -> Term {
    let g = Term::gen(1);
    g.clone().meet(g.clone().k().meet(g.c()).k())
}

/// One step of the two-generator recursion, `g1 ^ k(k g1 ^ g2)`.
pub fn ej_step_term() -> Term {
    let g = Term::gen(1);
    g.clone().meet(g.k().meet(Term::gen(2)).k())
}

/// Iterates the operation of [`phi_term`] on the evens of the prefix space
/// on `n` points, returning its first `steps` powers.
pub fn phi_iterate(n: usize, steps: usize) -> Result<Vec<PointSet>> {
    check_demo_range(n, steps)?;
    let space = prefix_space(n)?;
    let phi = phi_term();
    let mut current = evens(n);
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        current = phi.eval(&space, &[current])?;
        out.push(current);
    }
    Ok(out)
}

/// `E_j = E_{j-1} ^ k(k E_{j-1} ^ O)` on the prefix space, from the evens
/// `E_0` and odds `O`.
pub fn ej_sequence(n: usize, steps: usize) -> Result<Vec<PointSet>> {
    check_demo_range(n, steps)?;
    let space = prefix_space(n)?;
    let step = ej_step_term();
    let odd = odds(n);
    let mut current = evens(n);
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        current = step.eval(&space, &[current, odd])?;
        out.push(current);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthRow {
    pub points: usize,
    pub count: usize,
    pub truncated: bool,
}

#[derive(Clone, Debug)]
pub struct GrowthReport {
    pub ops: OpSet,
    pub n_generators: usize,
    pub rows: Vec<GrowthRow>,
    /// Whether `ops` can express the prefix-space construction.
    pub construction_expressible: bool,
}

impl GrowthReport {
    pub fn strictly_increasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[0].count < w[1].count)
    }

    /// Growth across all sizes with an expressible construction. This is
    /// evidence of an infinite free algebra, never a proof.
    pub fn is_evidence(&self) -> bool {
        self.construction_expressible && self.rows.len() >= 2 && self.strictly_increasing()
    }

    pub fn sizes_label(&self) -> String {
        self.rows
            .iter()
            .map(|r| r.points.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for GrowthReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ops {} with {} generator(s) on prefix spaces:",
            self.ops, self.n_generators
        )?;
        for r in &self.rows {
            write!(
                f,
                " N={} -> {}{}",
                r.points,
                r.count,
                if r.truncated { " (truncated)" } else { "" }
            )?;
        }
        if self.is_evidence() {
            f.write_str(" [growth evidence, not a proof]")
        } else {
            f.write_str(" [no growth evidence]")
        }
    }
}

fn construction_expressible(ops: OpSet, n: usize) -> bool {
    let one = ops.use_c && (ops.use_k || ops.use_i) && ops.has_binary();
    match n {
        1 => one,
        _ => one || (ops.use_k && ops.use_meet) || (ops.use_i && ops.use_join),
    }
}

/// Saturates the evens (and, for two generators, the odds) on prefix spaces
/// of the given sizes and reports the family sizes.
pub fn growth_probe(
    ops: OpSet,
    n_generators: usize,
    sizes: &[usize],
    cap: usize,
) -> Result<GrowthReport> {
    if !(1..=2).contains(&n_generators) {
        return Err(Error::Range {
            what: "n_generators",
            value: n_generators,
            valid: "1..=2".into(),
        });
    }
    let mut rows = Vec::with_capacity(sizes.len());
    for &n in sizes {
        if n < 2 {
            return Err(Error::Range {
                what: "N",
                value: n,
                valid: format!("2..={MAX_POINTS}"),
            });
        }
        let space = prefix_space(n)?;
        let initial: Vec<PointSet> = match n_generators {
            1 => vec![evens(n)],
            _ => vec![evens(n), odds(n)],
        };
        let family = saturate(&space, &initial, ops, cap)?;
        rows.push(GrowthRow {
            points: n,
            count: family.len(),
            truncated: family.truncated(),
        });
    }
    Ok(GrowthReport {
        ops,
        n_generators,
        rows,
        construction_expressible: construction_expressible(ops, n_generators),
    })
}
