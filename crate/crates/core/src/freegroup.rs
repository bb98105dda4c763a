//! Free-group arithmetic over the interned letters.
//!
//! A [`FreeWord`] is a freely reduced word in the letters and their formal
//! inverses; bar letters are ordinary positive letters here. On top of plain
//! reduction, [`reduce_mod_bar`] computes the normal form in the quotient
//! where `y·bar(y)` also cancels — each bar orbit contributes an infinite
//! cyclic factor, or an order-two factor when `bar(y) = y`. That quotient is
//! exactly what certificate verification needs: it makes monoid-level
//! relator identities checkable with formal inverses in play.

use std::fmt;

use crate::presentations::GraphProductPresentation;
use crate::words::{Letter, LetterWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => write!(f, "+"),
            Sign::Minus => write!(f, "-"),
        }
    }
}

/// A letter or its formal inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FreeLetter {
    pub letter: Letter,
    pub inverse: bool,
}

impl FreeLetter {
    pub fn positive(letter: Letter) -> FreeLetter {
        FreeLetter { letter, inverse: false }
    }

    pub fn inverted(self) -> FreeLetter {
        FreeLetter { letter: self.letter, inverse: !self.inverse }
    }
}

/// A freely reduced word in the free group on all letters.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FreeWord(Vec<FreeLetter>);

impl FreeWord {
    pub fn identity() -> FreeWord {
        FreeWord(Vec::new())
    }

    pub fn from_positive(w: &LetterWord) -> FreeWord {
        // Positive words contain no inverse pairs, so they are reduced.
        FreeWord(w.letters().iter().map(|&l| FreeLetter::positive(l)).collect())
    }

    pub fn from_letters<I: IntoIterator<Item = FreeLetter>>(letters: I) -> FreeWord {
        let mut w = FreeWord::identity();
        for l in letters {
            w.push(l);
        }
        w
    }

    pub fn letters(&self) -> &[FreeLetter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Appends one letter, cancelling against the current tail.
    pub fn push(&mut self, l: FreeLetter) {
        if self.0.last() == Some(&l.inverted()) {
            self.0.pop();
        } else {
            self.0.push(l);
        }
    }

    pub fn concat(&self, other: &FreeWord) -> FreeWord {
        let mut out = self.clone();
        for &l in other.letters() {
            out.push(l);
        }
        out
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord(self.0.iter().rev().map(|l| l.inverted()).collect())
    }

    /// `self · w · self^{-1}`.
    pub fn conjugate(&self, w: &FreeWord) -> FreeWord {
        self.concat(w).concat(&self.inverse())
    }

    /// Cyclic rotation by `k`: the word `w[k..]·w[..k]`, together with the
    /// conjugator `c` such that the rotation equals `c · w · c^{-1}`.
    pub fn rotated(&self, k: usize) -> (FreeWord, FreeWord) {
        let prefix = FreeWord::from_letters(self.0[..k].iter().copied());
        let mut rot = FreeWord::identity();
        for &l in &self.0[k..] {
            rot.push(l);
        }
        for &l in &self.0[..k] {
            rot.push(l);
        }
        (rot, prefix.inverse())
    }

    /// Contiguous occurrences of `pattern` (non-empty) in this word.
    pub fn find_occurrences(&self, pattern: &FreeWord) -> Vec<usize> {
        let n = pattern.len();
        if n == 0 || n > self.len() {
            return Vec::new();
        }
        (0..=self.len() - n)
            .filter(|&i| self.0[i..i + n] == pattern.0[..])
            .collect()
    }

    /// Replaces `self[pos..pos+len]` with `replacement`, reducing.
    pub fn replace_at(&self, pos: usize, len: usize, replacement: &FreeWord) -> FreeWord {
        let mut out = FreeWord::from_letters(self.0[..pos].iter().copied());
        for &l in replacement.letters() {
            out.push(l);
        }
        for &l in &self.0[pos + len..] {
            out.push(l);
        }
        out
    }
}

/// One conjugated relator `conjugator · relator^sign · conjugator^{-1}`.
///
/// The index refers to a vertex-local relator list inside a vertex
/// certificate and to the combined relator list inside a product
/// certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugatedRelator {
    pub conjugator: FreeWord,
    pub relator_index: usize,
    pub sign: Sign,
}

/// Normal form modulo the bar relators.
///
/// Each letter maps to the least letter of its bar orbit; orbits with
/// `bar(y) = y` have order two, so their sign is dropped, and adjacent equal
/// occurrences cancel. The result is the normal form in the free product of
/// the orbit subgroups, which is a canonical representative for equality in
/// the free group with all `y·bar(y)` cancellations allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModBarWord(Vec<(Letter, Sign)>);

pub fn reduce_mod_bar(p: &GraphProductPresentation, w: &FreeWord) -> ModBarWord {
    let mut stack: Vec<(Letter, Sign, bool)> = Vec::new();
    for fl in w.letters() {
        let bar = p.bar(fl.letter);
        let involutive = bar == fl.letter;
        let rep = fl.letter.min(bar);
        let sign = if involutive {
            Sign::Plus
        } else {
            let mut s = if fl.inverse { Sign::Minus } else { Sign::Plus };
            if fl.letter != rep {
                s = s.flip();
            }
            s
        };
        match stack.last() {
            Some(&(top, top_sign, top_inv))
                if top == rep && (involutive || top_sign == sign.flip()) && top_inv == involutive =>
            {
                stack.pop();
            }
            _ => stack.push((rep, sign, involutive)),
        }
    }
    ModBarWord(stack.into_iter().map(|(l, s, _)| (l, s)).collect())
}

/// Equality in the free group with `y·bar(y)` cancellations allowed.
pub fn equal_mod_bar(p: &GraphProductPresentation, a: &FreeWord, b: &FreeWord) -> bool {
    reduce_mod_bar(p, a) == reduce_mod_bar(p, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    #[test]
    fn push_cancels_inverse_pairs() {
        let (p, _) = fixtures::f1();
        let a = FreeLetter::positive(p.letter("a").unwrap());
        let w = FreeWord::from_letters([a, a.inverted(), a]);
        assert_eq!(w.letters(), &[a]);
    }

    #[test]
    fn conjugate_and_rotate() {
        let (p, _) = fixtures::f1();
        let a = FreeLetter::positive(p.letter("a").unwrap());
        let b = FreeLetter::positive(p.letter("b").unwrap());
        let w = FreeWord::from_letters([a, b]);
        let (rot, conj) = w.rotated(1);
        assert_eq!(rot, FreeWord::from_letters([b, a]));
        assert_eq!(conj.conjugate(&w), rot);
    }

    #[test]
    fn mod_bar_identifies_inverse_with_bar_partner() {
        // Z on letters x, X with bar(x) = X.
        let (p, _) = fixtures::free_z();
        let x = p.letter("x").unwrap();
        let cap = p.letter("X").unwrap();
        let pos_x = FreeLetter::positive(x);
        let pos_cap = FreeLetter::positive(cap);
        // x · X reduces to nothing mod bar, as does x · x^{-1}.
        assert!(equal_mod_bar(
            &p,
            &FreeWord::from_letters([pos_x, pos_cap]),
            &FreeWord::identity()
        ));
        assert!(equal_mod_bar(
            &p,
            &FreeWord::from_letters([pos_cap]),
            &FreeWord::from_letters([pos_x.inverted()])
        ));
        // But x and X are distinct.
        assert!(!equal_mod_bar(
            &p,
            &FreeWord::from_letters([pos_x]),
            &FreeWord::from_letters([pos_cap])
        ));
    }

    #[test]
    fn mod_bar_makes_involutive_letters_order_two() {
        let (p, _) = fixtures::f1();
        let a = FreeLetter::positive(p.letter("a").unwrap());
        assert!(equal_mod_bar(
            &p,
            &FreeWord::from_letters([a, a]),
            &FreeWord::identity()
        ));
        assert!(equal_mod_bar(
            &p,
            &FreeWord::from_letters([a.inverted()]),
            &FreeWord::from_letters([a])
        ));
        assert!(!equal_mod_bar(&p, &FreeWord::from_letters([a]), &FreeWord::identity()));
    }

    proptest! {
        #[test]
        fn word_times_inverse_is_identity(spec in proptest::collection::vec((0u8..2, proptest::bool::ANY), 0..12)) {
            let (p, _) = fixtures::f1();
            let a = p.letter("a").unwrap();
            let b = p.letter("b").unwrap();
            let w = FreeWord::from_letters(spec.iter().map(|&(which, inv)| FreeLetter {
                letter: if which == 0 { a } else { b },
                inverse: inv,
            }));
            prop_assert!(w.concat(&w.inverse()).is_empty());
            prop_assert!(w.inverse().concat(&w).is_empty());
        }
    }
}
