//! Words over the unary operators `k`, `i`, `c` and their normal forms.
//!
//! A word is written as operators are: `kiE` is the closure of the interior
//! of `E`, so the leftmost letter is applied last. Normal forms contain no
//! `kk`, `ii` or `cc`, carry `c` only as the leftmost letter, and have at
//! most three alternating `k`/`i` letters after it.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::term::Term;
use crate::topology::TopSpace;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Letter {
    K,
    I,
    C,
}

impl Letter {
    pub fn symbol(self) -> char {
        match self {
            Letter::K => 'k',
            Letter::I => 'i',
            Letter::C => 'c',
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct UnaryWord(pub Vec<Letter>);

impl UnaryWord {
    pub fn identity() -> Self {
        UnaryWord(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `self` followed on the right by `letter`, i.e. `letter` applied first.
    pub fn then_apply_first(&self, letter: Letter) -> UnaryWord {
        let mut v = self.0.clone();
        v.push(letter);
        UnaryWord(v)
    }

    pub fn apply(&self, space: &TopSpace, set: PointSet) -> Result<PointSet> {
        set.check_len(space.point_count())?;
        Ok(self.apply_unchecked(space, set))
    }

    pub(crate) fn apply_unchecked(&self, space: &TopSpace, set: PointSet) -> PointSet {
        self.0.iter().rev().fold(set, |s, l| match l {
            Letter::K => space.close(s),
            Letter::I => space.open(s),
            Letter::C => s.complement(),
        })
    }

    /// The word as a term applied to generator `gen`.
    pub fn to_term(&self, gen: usize) -> Term {
        self.0.iter().rev().fold(Term::gen(gen), |t, l| match l {
            Letter::K => t.k(),
            Letter::I => t.i(),
            Letter::C => t.c(),
        })
    }

    /// True if the word has the normal-form shape.
    pub fn is_normal(&self) -> bool {
        let body = match self.0.first() {
            Some(Letter::C) => &self.0[1..],
            _ => &self.0[..],
        };
        body.len() <= 3 && !body.contains(&Letter::C) && body.windows(2).all(|w| w[0] != w[1])
    }
}

impl fmt::Display for UnaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("I");
        }
        for l in &self.0 {
            write!(f, "{}", l.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for UnaryWord {
    type Err = Error;

    /// Letters `k`, `i`, `c`; `I` (or the empty string) is the identity.
    fn from_str(text: &str) -> Result<UnaryWord> {
        let text = text.trim();
        if text == "I" {
            return Ok(UnaryWord::identity());
        }
        text.chars()
            .enumerate()
            .map(|(pos, ch)| match ch {
                'k' => Ok(Letter::K),
                'i' => Ok(Letter::I),
                'c' => Ok(Letter::C),
                other => Err(Error::Parse {
                    position: pos,
                    message: format!("unexpected letter `{other}` in a unary word"),
                }),
            })
            .collect::<Result<Vec<_>>>()
            .map(UnaryWord)
    }
}

use Letter::{C, I, K};

/// The rewrite system, each rule `lhs -> rhs`.
pub const RULES: &[(&[Letter], &[Letter])] = &[
    (&[K, K], &[K]),
    (&[I, I], &[I]),
    (&[C, C], &[]),
    (&[K, C], &[C, I]),
    (&[I, C], &[C, K]),
    (&[I, K, I, K], &[I, K]),
    (&[K, I, K, I], &[K, I]),
];

fn find_redex(word: &[Letter], from_right: bool) -> Option<(usize, usize)> {
    let positions: Box<dyn Iterator<Item = usize>> = if from_right {
        Box::new((0..word.len()).rev())
    } else {
        Box::new(0..word.len())
    };
    for pos in positions {
        for (r, (lhs, _)) in RULES.iter().enumerate() {
            if word[pos..].starts_with(lhs) {
                return Some((pos, r));
            }
        }
    }
    None
}

/// Rewrites to normal form, contracting the leftmost redex first (or the
/// rightmost with `from_right`). Every rule strictly decreases the pair
/// (length, number of letters to the left of each `c`), so this terminates.
pub fn normalize_with_strategy(w: &UnaryWord, from_right: bool) -> UnaryWord {
    let mut word = w.0.clone();
    while let Some((pos, r)) = find_redex(&word, from_right) {
        let (lhs, rhs) = RULES[r];
        word.splice(pos..pos + lhs.len(), rhs.iter().copied());
    }
    UnaryWord(word)
}

pub fn normalize_unary(w: &UnaryWord) -> UnaryWord {
    normalize_with_strategy(w, false)
}

/// Hard ceiling on the number of normal forms; the rule set guarantees 14.
const MONOID_CAP: usize = 100;

/// Normal forms reachable from the identity by appending letters of
/// `alphabet` on the right, in breadth-first discovery order.
pub fn enumerate_unary_monoid(alphabet: &[Letter]) -> Result<Vec<UnaryWord>> {
    if alphabet.is_empty() {
        return Err(Error::Input("alphabet must be nonempty".into()));
    }
    let mut seen = BTreeSet::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::from([UnaryWord::identity()]);
    seen.insert(Vec::new());
    while let Some(w) = queue.pop_front() {
        order.push(w.clone());
        if order.len() > MONOID_CAP {
            return Err(Error::Internal(format!(
                "unary monoid exceeded {MONOID_CAP} normal forms"
            )));
        }
        for &l in alphabet {
            let next = normalize_unary(&w.then_apply_first(l));
            if seen.insert(next.0.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(order)
}

/// The seven members of the monoid generated by `k` and `i`.
pub fn closure_interior_words() -> Vec<UnaryWord> {
    ["I", "i", "ik", "iki", "k", "ki", "kik"]
        .iter()
        .map(|s| s.parse().expect("static word"))
        .collect()
}

/// The fourteen members of the monoid generated by `k` and `c`.
pub fn kuratowski_words() -> Vec<UnaryWord> {
    [
        "I", "i", "ik", "iki", "k", "ki", "kik", "c", "ci", "cik", "ciki", "ck", "cki", "ckik",
    ]
    .iter()
    .map(|s| s.parse().expect("static word"))
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::spaces_up_to;
    use std::collections::HashSet;

    fn w(s: &str) -> UnaryWord {
        s.parse().unwrap()
    }

    fn all_words(max_len: usize) -> Vec<UnaryWord> {
        let mut out = vec![UnaryWord::identity()];
        let mut layer = vec![UnaryWord::identity()];
        for _ in 0..max_len {
            layer = layer
                .iter()
                .flat_map(|x| [K, I, C].map(|l| x.then_apply_first(l)))
                .collect();
            out.extend(layer.iter().cloned());
        }
        out
    }

    #[test]
    fn basic_rules() {
        assert_eq!(normalize_unary(&w("kk")), w("k"));
        assert_eq!(normalize_unary(&w("ikik")), w("ik"));
        assert_eq!(normalize_unary(&w("kiki")), w("ki"));
        assert_eq!(normalize_unary(&w("cc")), UnaryWord::identity());
        assert_eq!(normalize_unary(&w("ckc")), w("i"));
    }

    #[test]
    fn kcik_pushes_c_left() {
        let nf = normalize_unary(&w("kcik"));
        assert!(nf.is_normal());
        // kc = ci, so kcik = ciik = cik
        assert_eq!(nf, w("cik"));
        for space in spaces_up_to(4).unwrap() {
            for bits in 0..1u64 << space.point_count() {
                let a = PointSet::from_bits(space.point_count(), bits);
                assert_eq!(
                    w("kcik").apply(space, a).unwrap(),
                    nf.apply(space, a).unwrap()
                );
            }
        }
    }

    #[test]
    fn normal_forms_have_the_right_shape_and_are_strategy_independent() {
        for word in all_words(7) {
            let left = normalize_with_strategy(&word, false);
            let right = normalize_with_strategy(&word, true);
            assert_eq!(left, right, "{word}");
            assert!(left.is_normal(), "{word} -> {left}");
            assert_eq!(normalize_unary(&left), left);
        }
    }

    #[test]
    fn monoid_sizes() {
        let ki: HashSet<_> = enumerate_unary_monoid(&[K, I])
            .unwrap()
            .into_iter()
            .collect();
        assert_eq!(ki, closure_interior_words().into_iter().collect());
        let kc: HashSet<_> = enumerate_unary_monoid(&[K, C])
            .unwrap()
            .into_iter()
            .collect();
        assert_eq!(kc.len(), 14);
        assert_eq!(kc, kuratowski_words().into_iter().collect());
        let c = enumerate_unary_monoid(&[C]).unwrap();
        assert_eq!(c, vec![UnaryWord::identity(), w("c")]);
        let ic: HashSet<_> = enumerate_unary_monoid(&[I, C])
            .unwrap()
            .into_iter()
            .collect();
        let kic: HashSet<_> = enumerate_unary_monoid(&[K, I, C])
            .unwrap()
            .into_iter()
            .collect();
        assert_eq!(ic, kc);
        assert_eq!(kic, kc);
        assert_eq!(enumerate_unary_monoid(&[K]).unwrap().len(), 2);
        assert!(enumerate_unary_monoid(&[]).is_err());
    }

    #[test]
    fn normalization_is_sound_on_small_spaces() {
        let words = all_words(6);
        for space in spaces_up_to(4).unwrap() {
            for bits in 0..1u64 << space.point_count() {
                let a = PointSet::from_bits(space.point_count(), bits);
                for word in &words {
                    let nf = normalize_unary(word);
                    assert_eq!(
                        word.apply_unchecked(space, a),
                        nf.apply_unchecked(space, a),
                        "{word} vs {nf} on {space:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn word_text_and_terms() {
        assert_eq!(UnaryWord::identity().to_string(), "I");
        assert_eq!(w("kik").to_string(), "kik");
        assert_eq!(w("ki").to_term(1).to_string(), "ki g1");
        assert!("kx".parse::<UnaryWord>().is_err());
    }
}
