//! Orders between one-generator operations, certified by evaluation on every
//! small space.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::enumerate::spaces_up_to;
use crate::equality::check_sweep;
use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::term::Term;
use crate::unary::closure_interior_words;

/// Bound used by the hasse command when none is given.
pub const DEFAULT_ORDER_BOUND: usize = 5;

/// Values of a one-generator term on every (space, subset) pair with at most
/// `max_points` points, in sweep order.
pub fn signature(term: &Term, max_points: usize) -> Result<Vec<u64>> {
    if term.max_generator() > 1 {
        return Err(Error::Input(format!(
            "`{term}` uses more than one generator"
        )));
    }
    check_sweep(max_points, 1)?;
    let mut sig = Vec::new();
    for space in spaces_up_to(max_points)? {
        let n = space.point_count();
        for bits in 0..1u64 << n {
            let a = PointSet::from_bits(n, bits);
            sig.push(term.eval_unchecked(space, &[a]).bits());
        }
    }
    Ok(sig)
}

pub(crate) fn signatures(terms: &[Term], max_points: usize) -> Result<Vec<Vec<u64>>> {
    terms.par_iter().map(|t| signature(t, max_points)).collect()
}

pub(crate) fn sig_leq(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// Covering pairs `(lower, upper)` of a partial order given as a matrix.
pub fn transitive_reduction(leq: &[Vec<bool>]) -> Vec<(usize, usize)> {
    let n = leq.len();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a == b || !leq[a][b] {
                continue;
            }
            let between = (0..n).any(|c| c != a && c != b && leq[a][c] && leq[c][b]);
            if !between {
                edges.push((a, b));
            }
        }
    }
    edges
}

#[derive(Clone, Debug)]
pub struct OperationPoset {
    elements: Vec<Term>,
    leq: Vec<Vec<bool>>,
    hasse: Vec<(usize, usize)>,
}

impl OperationPoset {
    /// Builds a poset from an explicit order. The relation must be a
    /// partial order.
    pub fn from_relation(elements: Vec<Term>, leq: Vec<Vec<bool>>) -> Result<Self> {
        let n = elements.len();
        if leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(Error::Input(
                "order matrix does not match the element list".into(),
            ));
        }
        for a in 0..n {
            if !leq[a][a] {
                return Err(Error::Input(format!(
                    "order is not reflexive at `{}`",
                    elements[a]
                )));
            }
            for b in 0..n {
                if a != b && leq[a][b] && leq[b][a] {
                    return Err(Error::Input(format!(
                        "order is not antisymmetric at `{}`, `{}`",
                        elements[a], elements[b]
                    )));
                }
                for c in 0..n {
                    if leq[a][b] && leq[b][c] && !leq[a][c] {
                        return Err(Error::Input("order is not transitive".into()));
                    }
                }
            }
        }
        let hasse = transitive_reduction(&leq);
        Ok(OperationPoset {
            elements,
            leq,
            hasse,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Term] {
        &self.elements
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn leq_matrix(&self) -> &[Vec<bool>] {
        &self.leq
    }

    /// Covering pairs `(lower, upper)`, sorted.
    pub fn hasse(&self) -> &[(usize, usize)] {
        &self.hasse
    }

    pub fn index_of(&self, term: &Term) -> Option<usize> {
        self.elements.iter().position(|t| t == term)
    }
}

/// Orders `terms` by pointwise inclusion on every space with at most
/// `max_points` points and every subset.
pub fn build_order(terms: &[Term], max_points: usize) -> Result<OperationPoset> {
    let sigs = signatures(terms, max_points)?;
    let n = terms.len();
    let mut leq = vec![vec![false; n]; n];
    for a in 0..n {
        for b in 0..n {
            leq[a][b] = sig_leq(&sigs[a], &sigs[b]);
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            if leq[a][b] && leq[b][a] {
                return Err(Error::NotAntisymmetric {
                    first: terms[a].to_string(),
                    second: terms[b].to_string(),
                    bound: max_points,
                });
            }
        }
    }
    let hasse = transitive_reduction(&leq);
    Ok(OperationPoset {
        elements: terms.to_vec(),
        leq,
        hasse,
    })
}

/// The reversed order.
pub fn dual_order(leq: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = leq.len();
    (0..n)
        .map(|a| (0..n).map(|b| leq[b][a]).collect())
        .collect()
}

/// An order-preserving and order-reflecting bijection from `a` to `b`, if
/// one exists.
pub fn order_isomorphism(a: &[Vec<bool>], b: &[Vec<bool>]) -> Option<Vec<usize>> {
    let n = a.len();
    if b.len() != n {
        return None;
    }
    let profile = |m: &[Vec<bool>], x: usize| {
        let down = (0..n).filter(|&y| m[y][x]).count();
        let up = (0..n).filter(|&y| m[x][y]).count();
        (down, up)
    };
    let pa: Vec<_> = (0..n).map(|x| profile(a, x)).collect();
    let pb: Vec<_> = (0..n).map(|x| profile(b, x)).collect();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn go(
        x: usize,
        a: &[Vec<bool>],
        b: &[Vec<bool>],
        pa: &[(usize, usize)],
        pb: &[(usize, usize)],
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if x == a.len() {
            return true;
        }
        for y in 0..b.len() {
            if used[y] || pa[x] != pb[y] {
                continue;
            }
            let fits = (0..x).all(|p| a[p][x] == b[map[p]][y] && a[x][p] == b[y][map[p]]);
            if !fits {
                continue;
            }
            map[x] = y;
            used[y] = true;
            if go(x + 1, a, b, pa, pb, map, used) {
                return true;
            }
            used[y] = false;
        }
        false
    }

    go(0, a, b, &pa, &pb, &mut map, &mut used).then_some(map)
}

/// The seven closure/interior words as one-generator terms.
pub fn unary_terms() -> Vec<Term> {
    closure_interior_words()
        .iter()
        .map(|w| w.to_term(1))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HasseFormat {
    Dot,
    Json,
    Markdown,
}

impl FromStr for HasseFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dot" => Ok(HasseFormat::Dot),
            "json" => Ok(HasseFormat::Json),
            "md" | "markdown" => Ok(HasseFormat::Markdown),
            other => Err(Error::Input(format!(
                "unknown format `{other}` (expected dot, json or md)"
            ))),
        }
    }
}

impl fmt::Display for HasseFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HasseFormat::Dot => "dot",
            HasseFormat::Json => "json",
            HasseFormat::Markdown => "md",
        })
    }
}

#[derive(Serialize)]
struct PosetJson {
    nodes: Vec<String>,
    covers: Vec<[usize; 2]>,
}

fn escape_dot(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Renders the covering relation. Covers are listed lower element first.
pub fn emit_hasse(poset: &OperationPoset, format: HasseFormat) -> String {
    let mut covers = poset.hasse().to_vec();
    covers.sort_unstable();
    match format {
        HasseFormat::Dot => {
            let mut out =
                String::from("digraph hasse {\n  rankdir=BT;\n  node [shape=plaintext];\n");
            for (n, t) in poset.elements().iter().enumerate() {
                out += &format!("  n{n} [label=\"{}\"];\n", escape_dot(&t.to_string()));
            }
            for (a, b) in covers {
                out += &format!("  n{a} -> n{b};\n");
            }
            out += "}\n";
            out
        }
        HasseFormat::Json => {
            let doc = PosetJson {
                nodes: poset.elements().iter().map(|t| t.to_string()).collect(),
                covers: covers.iter().map(|&(a, b)| [a, b]).collect(),
            };
            let mut s = serde_json::to_string_pretty(&doc).expect("plain data serializes");
            s.push('\n');
            s
        }
        HasseFormat::Markdown => {
            let mut out = String::from("| # | term | covered by |\n|---|---|---|\n");
            for (n, t) in poset.elements().iter().enumerate() {
                let ups: Vec<String> = covers
                    .iter()
                    .filter(|&&(a, _)| a == n)
                    .map(|&(_, b)| b.to_string())
                    .collect();
                out += &format!("| {n} | `{t}` | {} |\n", ups.join(", "));
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Term {
        s.parse().unwrap()
    }

    fn edge_names(p: &OperationPoset) -> Vec<(String, String)> {
        let mut v: Vec<_> = p
            .hasse()
            .iter()
            .map(|&(a, b)| (p.elements()[a].to_string(), p.elements()[b].to_string()))
            .collect();
        v.sort();
        v
    }

    #[test]
    fn unary_order_has_eight_covers() {
        let p = build_order(&unary_terms(), 4).unwrap();
        let mut expect: Vec<(String, String)> = [
            ("i", "iki"),
            ("iki", "ki"),
            ("iki", "ik"),
            ("ki", "kik"),
            ("ik", "kik"),
            ("kik", "k"),
            ("i", ""),
            ("", "k"),
        ]
        .iter()
        .map(|(a, b)| {
            (
                format!("{a} g1").trim().to_string(),
                format!("{b} g1").trim().to_string(),
            )
        })
        .collect();
        expect.sort();
        assert_eq!(edge_names(&p), expect);
    }

    #[test]
    fn too_small_a_bound_collapses_the_order() {
        // on one point k = i = identity
        match build_order(&unary_terms(), 1) {
            Err(Error::NotAntisymmetric { bound: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn set_and_complement_are_incomparable() {
        let p = build_order(&[t("g1"), t("c g1")], 3).unwrap();
        assert!(!p.leq(0, 1) && !p.leq(1, 0));
        assert!(p.hasse().is_empty());
    }

    #[test]
    fn two_generator_terms_are_refused() {
        assert!(build_order(&[t("g1 ^ g2")], 3).is_err());
    }

    #[test]
    fn isomorphism_search() {
        let chain = |n: usize| -> Vec<Vec<bool>> {
            (0..n).map(|a| (0..n).map(|b| a <= b).collect()).collect()
        };
        let rev: Vec<Vec<bool>> = (0..3).map(|a| (0..3).map(|b| a >= b).collect()).collect();
        assert_eq!(order_isomorphism(&chain(3), &rev), Some(vec![2, 1, 0]));
        let anti: Vec<Vec<bool>> = (0..3).map(|a| (0..3).map(|b| a == b).collect()).collect();
        assert_eq!(order_isomorphism(&chain(3), &anti), None);
    }

    #[test]
    fn emitters_are_stable() {
        let p = build_order(&unary_terms(), 4).unwrap();
        let dot = emit_hasse(&p, HasseFormat::Dot);
        assert_eq!(dot, emit_hasse(&p, HasseFormat::Dot));
        assert_eq!(dot.matches(" -> ").count(), 8);
        assert_eq!(dot.matches("[label=").count(), 7);
        assert!(dot.contains("rankdir=BT"));
        let json: serde_json::Value =
            serde_json::from_str(&emit_hasse(&p, HasseFormat::Json)).unwrap();
        assert_eq!(json["nodes"].as_array().unwrap().len(), 7);
        assert_eq!(json["covers"].as_array().unwrap().len(), 8);

        let single = build_order(&[t("g1")], 2).unwrap();
        let md = emit_hasse(&single, HasseFormat::Markdown);
        assert_eq!(md.lines().count(), 3);
        assert!(md.contains("| 0 | `g1` |  |"));
    }

    #[test]
    fn format_names() {
        assert_eq!("md".parse::<HasseFormat>().unwrap(), HasseFormat::Markdown);
        assert_eq!("dot".parse::<HasseFormat>().unwrap(), HasseFormat::Dot);
        assert!("svg".parse::<HasseFormat>().is_err());
    }
}
