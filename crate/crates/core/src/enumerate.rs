//! Enumeration of all topologies on a small labeled point set.
//!
//! Preorders are grown one point at a time. When point `m` joins a preorder
//! on `0..m`, it picks the set `U` of old points above it and the set `L` of
//! old points below it; the extension stays transitive exactly when `U` is
//! up-closed, `L` is down-closed and every point of `L` lies below every
//! point of `U`.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::topology::TopSpace;

/// Largest point count [`enumerate_spaces`] accepts. Seven points already
/// means 9,535,241 labeled topologies (4,535 up to homeomorphism).
pub const ENUMERATION_CAP: usize = 7;

/// `succ[x]` holds the points `y` with `spec[x][y]`.
#[derive(Clone)]
struct Frame {
    succ: [u64; ENUMERATION_CAP],
    m: usize,
    children: Vec<(u64, u64)>,
    next: usize,
}

impl Frame {
    fn new(succ: [u64; ENUMERATION_CAP], m: usize, target: usize) -> Frame {
        let children = if m < target {
            extensions(&succ, m)
        } else {
            Vec::new()
        };
        Frame {
            succ,
            m,
            children,
            next: 0,
        }
    }
}

fn extensions(succ: &[u64; ENUMERATION_CAP], m: usize) -> Vec<(u64, u64)> {
    let mut pred = [0u64; ENUMERATION_CAP];
    for (x, &row) in succ.iter().enumerate().take(m) {
        for (y, p) in pred.iter_mut().enumerate().take(m) {
            if row >> y & 1 == 1 {
                *p |= 1 << x;
            }
        }
    }
    let closed = |s: u64, rel: &[u64]| (0..m).all(|y| s >> y & 1 == 0 || rel[y] & !s == 0);
    let ups: Vec<u64> = (0..1u64 << m).filter(|&s| closed(s, &succ[..])).collect();
    let downs: Vec<u64> = (0..1u64 << m).filter(|&s| closed(s, &pred[..])).collect();
    let mut out = Vec::new();
    for &u in &ups {
        let below_all: u64 = (0..m)
            .filter(|&x| u & !succ[x] == 0)
            .fold(0, |acc, x| acc | 1 << x);
        for &l in &downs {
            if l & !below_all == 0 {
                out.push((u, l));
            }
        }
    }
    out
}

fn to_space(succ: &[u64; ENUMERATION_CAP], n: usize) -> TopSpace {
    let mut cols = vec![0u64; n];
    for (x, s) in succ.iter().enumerate().take(n) {
        for (y, col) in cols.iter_mut().enumerate() {
            if s >> y & 1 == 1 {
                *col |= 1 << x;
            }
        }
    }
    TopSpace::from_cols(n, cols)
}

/// Streams every reflexive-transitive matrix on `n` labeled points.
pub struct LabeledSpaces {
    n: usize,
    stack: Vec<Frame>,
}

impl Iterator for LabeledSpaces {
    type Item = TopSpace;

    fn next(&mut self) -> Option<TopSpace> {
        loop {
            let top = self.stack.last_mut()?;
            if top.m == self.n {
                let space = to_space(&top.succ, self.n);
                self.stack.pop();
                return Some(space);
            }
            if top.next == top.children.len() {
                self.stack.pop();
                continue;
            }
            let (up, down) = top.children[top.next];
            top.next += 1;
            let m = top.m;
            let mut succ = top.succ;
            for (x, s) in succ.iter_mut().enumerate().take(m) {
                if down >> x & 1 == 1 {
                    *s |= 1 << m;
                }
            }
            succ[m] = up | 1 << m;
            self.stack.push(Frame::new(succ, m + 1, self.n));
        }
    }
}

fn check_cap(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Range {
            what: "point_count",
            value: n,
            valid: format!("1..={ENUMERATION_CAP}"),
        });
    }
    if n > ENUMERATION_CAP {
        return Err(Error::Cap {
            what: "point_count for enumeration",
            requested: n,
            cap: ENUMERATION_CAP,
        });
    }
    Ok(())
}

pub fn labeled_spaces(n: usize) -> Result<LabeledSpaces> {
    check_cap(n)?;
    Ok(LabeledSpaces {
        n,
        stack: vec![Frame::new([0; ENUMERATION_CAP], 0, n)],
    })
}

/// Per-point invariant: (out-degree, in-degree, size of the point's
/// equivalence class). Isomorphisms must preserve it.
fn point_invariants(space: &TopSpace) -> Vec<u32> {
    let n = space.point_count();
    (0..n)
        .map(|x| {
            let (mut out, mut inn, mut class) = (0u32, 0u32, 0u32);
            for y in 0..n {
                let xy = space.spec(x, y);
                let yx = space.spec(y, x);
                out += xy as u32;
                inn += yx as u32;
                class += (xy && yx) as u32;
            }
            out << 16 | inn << 8 | class
        })
        .collect()
}

/// Bucket key: the sorted multiset of point invariants, each refined by the
/// multiset of invariants of the point's successors.
fn fingerprint(space: &TopSpace, inv: &[u32]) -> Vec<u64> {
    let n = space.point_count();
    let mut refined: Vec<u64> = (0..n)
        .map(|x| {
            let mut succ: Vec<u32> = (0..n)
                .filter(|&y| space.spec(x, y))
                .map(|y| inv[y])
                .collect();
            succ.sort_unstable();
            let h = succ.iter().fold(0xcbf2_9ce4_8422_2325u64, |h, &v| {
                (h ^ v as u64).wrapping_mul(0x1000_0000_01b3)
            });
            (inv[x] as u64) << 40 ^ (h & 0xff_ffff_ffff)
        })
        .collect();
    refined.sort_unstable();
    refined
}

/// Exact isomorphism test by backtracking over invariant-preserving maps.
pub fn isomorphic(a: &TopSpace, b: &TopSpace) -> bool {
    let n = a.point_count();
    if n != b.point_count() {
        return false;
    }
    let ia = point_invariants(a);
    let ib = point_invariants(b);
    let mut sa = ia.clone();
    let mut sb = ib.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return false;
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        x: usize,
        a: &TopSpace,
        b: &TopSpace,
        ia: &[u32],
        ib: &[u32],
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        let n = a.point_count();
        if x == n {
            return true;
        }
        for y in 0..n {
            if used[y] || ia[x] != ib[y] {
                continue;
            }
            let consistent = (0..x)
                .all(|p| a.spec(x, p) == b.spec(y, map[p]) && a.spec(p, x) == b.spec(map[p], y));
            if !consistent {
                continue;
            }
            map[x] = y;
            used[y] = true;
            if go(x + 1, a, b, ia, ib, map, used) {
                return true;
            }
            used[y] = false;
        }
        map[x] = usize::MAX;
        false
    }
    go(0, a, b, &ia, &ib, &mut map, &mut used)
}

/// Keeps the first member of every isomorphism class seen in a stream.
#[derive(Default)]
pub struct IsoDedup {
    buckets: HashMap<Vec<u64>, Vec<usize>>,
    reps: Vec<TopSpace>,
}

impl IsoDedup {
    /// Returns true if `space` starts a new class.
    pub fn insert(&mut self, space: TopSpace) -> bool {
        let key = fingerprint(&space, &point_invariants(&space));
        let bucket = self.buckets.entry(key).or_default();
        if bucket.iter().any(|&r| isomorphic(&self.reps[r], &space)) {
            return false;
        }
        bucket.push(self.reps.len());
        self.reps.push(space);
        true
    }

    pub fn into_reps(self) -> Vec<TopSpace> {
        self.reps
    }
}

/// Every topology on `n` points; with `dedup`, one representative per
/// homeomorphism class (the first one met in labeled order among labelings
/// whose point invariants are non-decreasing; every class has one).
pub fn enumerate_spaces(n: usize, dedup: bool) -> Result<Box<dyn Iterator<Item = TopSpace>>> {
    check_cap(n)?;
    if dedup {
        Ok(Box::new(spaces_up_to_iso(n)?.iter().cloned()))
    } else {
        Ok(Box::new(labeled_spaces(n)?))
    }
}

/// Cached class representatives for `n` points.
pub fn spaces_up_to_iso(n: usize) -> Result<&'static [TopSpace]> {
    check_cap(n)?;
    static CACHE: [OnceLock<Vec<TopSpace>>; ENUMERATION_CAP] =
        [const { OnceLock::new() }; ENUMERATION_CAP];
    Ok(CACHE[n - 1].get_or_init(|| {
        let mut dedup = IsoDedup::default();
        for space in labeled_spaces(n).expect("cap checked") {
            if point_invariants(&space).is_sorted() {
                dedup.insert(space);
            }
        }
        dedup.into_reps()
    }))
}

/// Class representatives for every size `1..=max_points`, smallest first.
pub fn spaces_up_to(max_points: usize) -> Result<Vec<&'static TopSpace>> {
    check_cap(max_points.max(1))?;
    let mut out = Vec::new();
    for n in 1..=max_points {
        out.extend(spaces_up_to_iso(n)?.iter());
    }
    Ok(out)
}
