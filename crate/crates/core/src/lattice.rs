//! Lattices generated from an operation poset: hereditary subsets, meets of
//! up-sets, and the distributive lattice of joins.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::poset::{signature, signatures, OperationPoset};
use crate::term::Term;

/// Refuse to list more down-sets (or antichains) than this.
pub const DOWNSET_CAP: usize = 1 << 20;

/// Down-closed subsets of a base poset, as bit masks over its elements,
/// ordered by size and then by mask value. The empty set is included.
#[derive(Clone, Debug)]
pub struct DownSetLattice {
    base_len: usize,
    elements: Vec<u64>,
}

impl DownSetLattice {
    pub fn base_len(&self) -> usize {
        self.base_len
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn total(&self) -> usize {
        self.elements.len()
    }

    pub fn nonempty(&self) -> Vec<u64> {
        self.elements.iter().copied().filter(|&m| m != 0).collect()
    }

    pub fn nonempty_count(&self) -> usize {
        self.total() - 1
    }

    /// Inclusion order on the nonempty down-sets, in [`Self::nonempty`] order.
    pub fn nonempty_order(&self) -> Vec<Vec<bool>> {
        inclusion(&self.nonempty())
    }

    /// Down-sets other than the whole base, empty one included.
    pub fn proper(&self) -> Vec<u64> {
        let full = if self.base_len == 64 {
            u64::MAX
        } else {
            (1u64 << self.base_len) - 1
        };
        self.elements
            .iter()
            .copied()
            .filter(|&m| m != full)
            .collect()
    }

    /// Inclusion order on [`Self::proper`]. A meet of elements of the base
    /// corresponds to the down-set of base elements not above it, so this
    /// is the order of the meet semilattice the base generates.
    pub fn proper_order(&self) -> Vec<Vec<bool>> {
        inclusion(&self.proper())
    }
}

fn inclusion(masks: &[u64]) -> Vec<Vec<bool>> {
    masks
        .iter()
        .map(|&a| masks.iter().map(|&b| a & !b == 0).collect())
        .collect()
}

/// Elements of `poset` in an order where everything below `x` comes first.
fn linear_extension(leq: &[Vec<bool>]) -> Vec<usize> {
    let n = leq.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| (0..n).filter(|&y| leq[y][x]).count());
    order
}

fn bit(x: usize) -> u64 {
    1u64 << x
}

/// Masks of all down-closed (or, with `up`, up-closed) subsets.
fn closed_subsets(leq: &[Vec<bool>], up: bool) -> Result<Vec<u64>> {
    let n = leq.len();
    if n > 64 {
        return Err(Error::Cap {
            what: "poset size",
            requested: n,
            cap: 64,
        });
    }
    let below = |x: usize| -> u64 {
        (0..n)
            .filter(|&y| y != x && if up { leq[x][y] } else { leq[y][x] })
            .fold(0, |m, y| m | bit(y))
    };
    let mut order = linear_extension(leq);
    if up {
        order.reverse();
    }
    let needs: Vec<u64> = order.iter().map(|&x| below(x)).collect();
    let mut out = Vec::new();
    let mut stack = vec![(0usize, 0u64)];
    while let Some((pos, mask)) = stack.pop() {
        if pos == n {
            out.push(mask);
            if out.len() > DOWNSET_CAP {
                return Err(Error::Cap {
                    what: "closed subsets",
                    requested: out.len(),
                    cap: DOWNSET_CAP,
                });
            }
            continue;
        }
        stack.push((pos + 1, mask));
        // every element needed below order[pos] comes earlier in the order
        if needs[pos] & !mask == 0 {
            stack.push((pos + 1, mask | bit(order[pos])));
        }
    }
    out.sort_by_key(|m| (m.count_ones(), *m));
    Ok(out)
}

pub fn hereditary_subsets(base: &OperationPoset) -> Result<DownSetLattice> {
    Ok(DownSetLattice {
        base_len: base.len(),
        elements: closed_subsets(base.leq_matrix(), false)?,
    })
}

fn minimal(mask: u64, leq: &[Vec<bool>]) -> Vec<usize> {
    let members: Vec<usize> = (0..leq.len()).filter(|&x| mask & bit(x) != 0).collect();
    members
        .iter()
        .copied()
        .filter(|&x| !members.iter().any(|&y| y != x && leq[y][x]))
        .collect()
}

fn fold_sorted(mut parts: Vec<Term>, join: bool) -> Term {
    parts.sort();
    let mut it = parts.into_iter();
    let first = it.next().expect("nonempty");
    it.fold(first, |acc, t| if join { acc.join(t) } else { acc.meet(t) })
}

/// One meet per nonempty up-set of `base`: the meet of its minimal
/// elements, factors in term order. For a poset these are exactly the
/// elements of the meet semilattice it generates.
pub fn meet_semilattice_terms(base: &OperationPoset) -> Result<Vec<Term>> {
    let ups = closed_subsets(base.leq_matrix(), true)?;
    Ok(ups
        .into_iter()
        .filter(|&m| m != 0)
        .map(|m| {
            let parts = minimal(m, base.leq_matrix())
                .into_iter()
                .map(|x| base.elements()[x].clone())
                .collect();
            fold_sorted(parts, false)
        })
        .collect())
}

/// The distributive lattice generated by a meet-closed set of terms, with
/// one representative per element.
#[derive(Clone, Debug)]
pub struct LatticeClosure {
    elements: Vec<Term>,
    sigs: Vec<Vec<u64>>,
    index: HashMap<Vec<u64>, usize>,
    warnings: Vec<String>,
    max_points: usize,
}

impl LatticeClosure {
    pub fn elements(&self) -> &[Term] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Distinct joins that agreed on every tested space.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn max_points(&self) -> usize {
        self.max_points
    }

    /// Index of the element equal to `term` at the closure's bound.
    pub fn find(&self, term: &Term) -> Result<Option<usize>> {
        Ok(self.index.get(&signature(term, self.max_points)?).copied())
    }

    /// True if the meet and join of every pair of elements is again an
    /// element, by evaluation.
    pub fn closed_under_meet_and_join(&self) -> bool {
        let n = self.sigs.len();
        (0..n).all(|a| {
            (0..n).all(|b| {
                let (x, y) = (&self.sigs[a], &self.sigs[b]);
                let meet: Vec<u64> = x.iter().zip(y).map(|(p, q)| p & q).collect();
                let join: Vec<u64> = x.iter().zip(y).map(|(p, q)| p | q).collect();
                self.index.contains_key(&meet) && self.index.contains_key(&join)
            })
        })
    }

    /// For every element, the index of `op(element)`, or `None` if some
    /// image falls outside the lattice.
    pub fn image_under(&self, op: impl Fn(Term) -> Term) -> Result<Option<Vec<usize>>> {
        let mut out = Vec::with_capacity(self.len());
        for t in &self.elements {
            match self.find(&op(t.clone()))? {
                Some(j) => out.push(j),
                None => return Ok(None),
            }
        }
        Ok(Some(out))
    }
}

/// Closes `base_terms` under joins. Elements are joins of antichains of the
/// base order, factors in term order, listed by number of factors; two
/// antichains whose joins agree at `max_points` are merged and reported.
pub fn distributive_closure(base_terms: &[Term], max_points: usize) -> Result<LatticeClosure> {
    if base_terms.is_empty() {
        return Err(Error::Input("base must be nonempty".into()));
    }
    let base_sigs = signatures(base_terms, max_points)?;
    let n = base_terms.len();
    let leq: Vec<Vec<bool>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| crate::poset::sig_leq(&base_sigs[a], &base_sigs[b]))
                .collect()
        })
        .collect();
    let base = OperationPoset::from_relation(base_terms.to_vec(), leq).map_err(|_| {
        Error::Input(format!(
            "base terms are not pairwise distinct on spaces with at most {max_points} points"
        ))
    })?;

    // an antichain is the set of maximal elements of a nonempty down-set
    let mut antichains: Vec<Vec<usize>> = closed_subsets(base.leq_matrix(), false)?
        .into_iter()
        .filter(|&m| m != 0)
        .map(|m| {
            let members: Vec<usize> = (0..n).filter(|&x| m & bit(x) != 0).collect();
            members
                .iter()
                .copied()
                .filter(|&x| !members.iter().any(|&y| y != x && base.leq(x, y)))
                .collect()
        })
        .collect();
    antichains.sort_by(|a, b| {
        a.len().cmp(&b.len()).then_with(|| {
            let ta: Vec<&Term> = sorted_terms(a, base_terms);
            let tb: Vec<&Term> = sorted_terms(b, base_terms);
            ta.cmp(&tb)
        })
    });

    let mut closure = LatticeClosure {
        elements: Vec::new(),
        sigs: Vec::new(),
        index: HashMap::new(),
        warnings: Vec::new(),
        max_points,
    };
    for ac in antichains {
        let mut sig = vec![0u64; base_sigs[0].len()];
        for &x in &ac {
            for (s, v) in sig.iter_mut().zip(&base_sigs[x]) {
                *s |= v;
            }
        }
        let term = fold_sorted(ac.iter().map(|&x| base_terms[x].clone()).collect(), true);
        match closure.index.get(&sig) {
            Some(&j) => closure.warnings.push(format!(
                "`{term}` and `{}` agree on every space with at most {max_points} points",
                closure.elements[j]
            )),
            None => {
                closure.index.insert(sig.clone(), closure.elements.len());
                closure.elements.push(term);
                closure.sigs.push(sig);
            }
        }
    }
    Ok(closure)
}

fn sorted_terms<'a>(ac: &[usize], terms: &'a [Term]) -> Vec<&'a Term> {
    let mut v: Vec<&Term> = ac.iter().map(|&x| &terms[x]).collect();
    v.sort();
    v
}
