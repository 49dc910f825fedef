//! Deciding term equality by finite-model refutation.
//!
//! Two terms are compared on every space up to a point bound and every
//! assignment of generator sets. A disagreement is a definite witness of
//! inequality; agreement everywhere is only evidence, reported as
//! [`Verdict::EqualUpTo`].

use std::fmt;

use rayon::prelude::*;

use crate::enumerate::{spaces_up_to_iso, ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::pointset::{Assignments, PointSet};
use crate::term::Term;
use crate::topology::TopSpace;

/// Largest `points * generators` product swept per space.
pub const ASSIGNMENT_BITS_CAP: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Distinguished {
        space: TopSpace,
        assignment: Vec<PointSet>,
        left: PointSet,
        right: PointSet,
    },
    /// Not a proof of equality: no space with at most this many points
    /// separates the terms.
    EqualUpTo(usize),
}

impl Verdict {
    pub fn is_distinguished(&self) -> bool {
        matches!(self, Verdict::Distinguished { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Distinguished {
                space,
                assignment,
                left,
                right,
            } => {
                write!(
                    f,
                    "distinguished on a {}-point space by (",
                    space.point_count()
                )?;
                for (n, a) in assignment.iter().enumerate() {
                    if n > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "g{}={a}", n + 1)?;
                }
                write!(f, "): {left} vs {right}")
            }
            Verdict::EqualUpTo(m) => write!(
                f,
                "equal on every space with at most {m} points (not conclusive beyond that bound)"
            ),
        }
    }
}

pub(crate) fn check_sweep(max_points: usize, generators: usize) -> Result<()> {
    if max_points == 0 {
        return Err(Error::Range {
            what: "max_points",
            value: 0,
            valid: format!("1..={ENUMERATION_CAP}"),
        });
    }
    if max_points > ENUMERATION_CAP {
        return Err(Error::Cap {
            what: "max_points",
            requested: max_points,
            cap: ENUMERATION_CAP,
        });
    }
    if max_points * generators > ASSIGNMENT_BITS_CAP {
        return Err(Error::Cap {
            what: "max_points * generators",
            requested: max_points * generators,
            cap: ASSIGNMENT_BITS_CAP,
        });
    }
    Ok(())
}

/// Compares `s` and `t` on every space with `1..=max_points` points (one per
/// homeomorphism class) and every assignment, returning the first
/// disagreement in sweep order.
pub fn term_equal(s: &Term, t: &Term, max_points: usize) -> Result<Verdict> {
    let gens = s.max_generator().max(t.max_generator()).max(1);
    check_sweep(max_points, gens)?;
    for m in 1..=max_points {
        let spaces = spaces_up_to_iso(m)?;
        // first witness in space order, independent of scheduling
        let found = spaces.par_iter().find_map_first(|space| {
            Assignments::new(m, gens).find_map(|assignment| {
                let left = s.eval_unchecked(space, &assignment);
                let right = t.eval_unchecked(space, &assignment);
                (left != right).then(|| Verdict::Distinguished {
                    space: space.clone(),
                    assignment,
                    left,
                    right,
                })
            })
        });
        if let Some(v) = found {
            return Ok(v);
        }
    }
    Ok(Verdict::EqualUpTo(max_points))
}

/// Checks `s <= t` (pointwise inclusion) on every space up to `max_points`;
/// returns a counterexample if one exists.
pub fn term_leq(s: &Term, t: &Term, max_points: usize) -> Result<Option<Verdict>> {
    let gens = s.max_generator().max(t.max_generator()).max(1);
    check_sweep(max_points, gens)?;
    for m in 1..=max_points {
        let spaces = spaces_up_to_iso(m)?;
        let found = spaces.par_iter().find_map_first(|space| {
            Assignments::new(m, gens).find_map(|assignment| {
                let left = s.eval_unchecked(space, &assignment);
                let right = t.eval_unchecked(space, &assignment);
                (!left.is_subset(right)).then(|| Verdict::Distinguished {
                    space: space.clone(),
                    assignment,
                    left,
                    right,
                })
            })
        });
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Term {
        s.parse().unwrap()
    }

    #[test]
    fn idempotent_closure_is_equal() {
        assert_eq!(
            term_equal(&t("kk g1"), &t("k g1"), 3).unwrap(),
            Verdict::EqualUpTo(3)
        );
    }

    #[test]
    fn closure_and_interior_need_two_points() {
        // on one point every set is clopen
        assert_eq!(
            term_equal(&t("k g1"), &t("i g1"), 1).unwrap(),
            Verdict::EqualUpTo(1)
        );
        match term_equal(&t("k g1"), &t("i g1"), 3).unwrap() {
            Verdict::Distinguished { space, .. } => assert_eq!(space.point_count(), 2),
            v => panic!("{v}"),
        }
    }

    #[test]
    fn closure_of_meet_with_ik() {
        assert_eq!(
            term_equal(&t("k(g1 ^ ik g1)"), &t("kik g1"), 4).unwrap(),
            Verdict::EqualUpTo(4)
        );
    }

    #[test]
    fn witnesses_really_distinguish() {
        let (a, b) = (t("ki g1"), t("ik g1"));
        match term_equal(&a, &b, 4).unwrap() {
            Verdict::Distinguished {
                space,
                assignment,
                left,
                right,
            } => {
                assert_eq!(a.eval(&space, &assignment).unwrap(), left);
                assert_eq!(b.eval(&space, &assignment).unwrap(), right);
                assert_ne!(left, right);
            }
            v => panic!("{v}"),
        }
    }

    #[test]
    fn order_checks() {
        assert!(term_leq(&t("i g1"), &t("g1"), 4).unwrap().is_none());
        assert!(term_leq(&t("g1"), &t("k g1"), 4).unwrap().is_none());
        assert!(term_leq(&t("k g1"), &t("g1"), 4).unwrap().is_some());
    }

    #[test]
    fn caps() {
        assert!(matches!(
            term_equal(&t("g1"), &t("g1"), 8),
            Err(Error::Cap { .. })
        ));
        assert!(term_equal(&t("g1"), &t("g1"), 0).is_err());
        assert!(matches!(
            term_equal(&t("g1 ^ g2 ^ g3"), &t("g1"), 6),
            Err(Error::Cap { .. })
        ));
    }
}
