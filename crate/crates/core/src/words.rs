//! The syllable-word calculus.
//!
//! A letter word is a plain sequence over the union of the vertex alphabets.
//! A syllable `[u]` packages a nonempty word `u` over a single vertex's
//! alphabet; syllable words are sequences of syllables and form the derived
//! alphabet on which the reduction moves act. `alpha` embeds letter words
//! letterwise, `beta` flattens syllable words back, and the norm counts
//! letters across syllable contents.

use thiserror::Error;

use crate::presentations::{GraphProductPresentation, VertexId};

/// Interned letter; an index into the owning presentation's letter table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(pub(crate) u32);

impl Letter {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("syllable content is empty")]
    EmptySyllable,
    #[error("letter does not belong to the alphabet of vertex {vertex}")]
    ForeignLetter { vertex: VertexId },
}

/// A word over the union of the vertex alphabets.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LetterWord(Vec<Letter>);

impl LetterWord {
    pub fn new(letters: Vec<Letter>) -> LetterWord {
        LetterWord(letters)
    }

    pub fn empty() -> LetterWord {
        LetterWord(Vec::new())
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

    pub fn concat(&self, other: &LetterWord) -> LetterWord {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        LetterWord(letters)
    }
}

impl FromIterator<Letter> for LetterWord {
    fn from_iter<T: IntoIterator<Item = Letter>>(iter: T) -> Self {
        LetterWord(iter.into_iter().collect())
    }
}

/// A symbol `[u]` of the derived alphabet: a nonempty word over one vertex's
/// alphabet, tagged with that vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Syllable {
    vertex: VertexId,
    content: LetterWord,
}

impl Syllable {
    /// Builds a syllable, checking nonemptiness and that every letter is
    /// declared at `vertex`.
    pub fn new(
        p: &GraphProductPresentation,
        vertex: VertexId,
        content: LetterWord,
    ) -> Result<Syllable, WordError> {
        if content.is_empty() {
            return Err(WordError::EmptySyllable);
        }
        for &l in content.letters() {
            if p.vertex_of(l) != vertex {
                return Err(WordError::ForeignLetter { vertex });
            }
        }
        Ok(Syllable { vertex, content })
    }

    /// Internal constructor for contents already known to be valid, e.g. the
    /// concatenation of two same-vertex contents.
    pub(crate) fn from_parts(vertex: VertexId, content: LetterWord) -> Syllable {
        debug_assert!(!content.is_empty());
        Syllable { vertex, content }
    }

    pub fn vertex(&self) -> VertexId {
        self.vertex
    }

    pub fn content(&self) -> &LetterWord {
        &self.content
    }

    pub fn content_len(&self) -> usize {
        self.content.len()
    }
}

/// A (possibly empty) sequence of syllables.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SyllableWord(Vec<Syllable>);

impl SyllableWord {
    pub fn new(syllables: Vec<Syllable>) -> SyllableWord {
        SyllableWord(syllables)
    }

    pub fn empty() -> SyllableWord {
        SyllableWord(Vec::new())
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total letter count across syllable contents.
    pub fn norm(&self) -> usize {
        self.0.iter().map(Syllable::content_len).sum()
    }

    pub fn concat(&self, other: &SyllableWord) -> SyllableWord {
        let mut syllables = self.0.clone();
        syllables.extend_from_slice(&other.0);
        SyllableWord(syllables)
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> SyllableWord {
        SyllableWord(self.0[range].to_vec())
    }

    /// Copy of the word with `range` replaced by `replacement`.
    pub fn spliced(&self, range: std::ops::Range<usize>, replacement: &[Syllable]) -> SyllableWord {
        let mut syllables = Vec::with_capacity(self.0.len() - range.len() + replacement.len());
        syllables.extend_from_slice(&self.0[..range.start]);
        syllables.extend_from_slice(replacement);
        syllables.extend_from_slice(&self.0[range.end..]);
        SyllableWord(syllables)
    }

    /// True iff every syllable's vertex is adjacent to `i`. Vacuously true
    /// for the empty word.
    pub fn in_star(&self, p: &GraphProductPresentation, i: VertexId) -> bool {
        self.0.iter().all(|s| p.adjacent(s.vertex(), i))
    }
}

impl FromIterator<Syllable> for SyllableWord {
    fn from_iter<T: IntoIterator<Item = Syllable>>(iter: T) -> Self {
        SyllableWord(iter.into_iter().collect())
    }
}

/// Letterwise embedding: each letter `a` becomes the singleton syllable `[a]`.
pub fn alpha(p: &GraphProductPresentation, w: &LetterWord) -> SyllableWord {
    w.letters()
        .iter()
        .map(|&l| Syllable::from_parts(p.vertex_of(l), LetterWord(vec![l])))
        .collect()
}

/// Concatenation of syllable contents.
pub fn beta(w: &SyllableWord) -> LetterWord {
    let mut letters = Vec::with_capacity(w.norm());
    for s in w.syllables() {
        letters.extend_from_slice(s.content().letters());
    }
    LetterWord(letters)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    fn word(p: &GraphProductPresentation, s: &str) -> LetterWord {
        p.parse_letter_word(&s.chars().map(|c| c.to_string()).collect::<Vec<_>>().join(" "))
            .unwrap()
    }

    #[test]
    fn alpha_is_letterwise() {
        let (p, _) = fixtures::f1();
        let w = word(&p, "abab");
        let img = alpha(&p, &w);
        assert_eq!(img.len(), 4);
        assert_eq!(p.render_word(&img), "[a][b][a][b]");
        assert_eq!(alpha(&p, &LetterWord::empty()), SyllableWord::empty());
        // "aa" maps to two singleton syllables, not one syllable [aa].
        let aa = alpha(&p, &word(&p, "aa"));
        assert_eq!(aa.len(), 2);
        assert_eq!(p.render_word(&aa), "[a][a]");
    }

    #[test]
    fn beta_concatenates_contents() {
        let (p, _) = fixtures::f1();
        let a = p.letter("a").unwrap();
        let b = p.letter("b").unwrap();
        let w = SyllableWord::new(vec![
            Syllable::new(&p, VertexId(1), LetterWord::new(vec![a, a])).unwrap(),
            Syllable::new(&p, VertexId(2), LetterWord::new(vec![b])).unwrap(),
        ]);
        assert_eq!(p.render_letters(&beta(&w)), "a a b");
        assert_eq!(beta(&SyllableWord::empty()), LetterWord::empty());
    }

    #[test]
    fn norm_sums_content_lengths() {
        let (p, _) = fixtures::f1();
        let a = p.letter("a").unwrap();
        let b = p.letter("b").unwrap();
        let w = SyllableWord::new(vec![
            Syllable::new(&p, VertexId(1), LetterWord::new(vec![a, a])).unwrap(),
            Syllable::new(&p, VertexId(2), LetterWord::new(vec![b])).unwrap(),
        ]);
        assert_eq!(w.norm(), 3);
        assert_eq!(SyllableWord::empty().norm(), 0);
        let abab = word(&p, "abab");
        assert_eq!(alpha(&p, &abab).norm(), abab.len());
    }

    #[test]
    fn star_membership() {
        let (p, _) = fixtures::f1();
        let a = p.letter("a").unwrap();
        let b = p.letter("b").unwrap();
        let sb = Syllable::new(&p, VertexId(2), LetterWord::new(vec![b])).unwrap();
        let sa = Syllable::new(&p, VertexId(1), LetterWord::new(vec![a])).unwrap();
        assert!(SyllableWord::new(vec![sb.clone()]).in_star(&p, VertexId(1)));
        assert!(!SyllableWord::new(vec![sa, sb]).in_star(&p, VertexId(1)));
        assert!(SyllableWord::empty().in_star(&p, VertexId(1)));
        assert!(SyllableWord::empty().in_star(&p, VertexId(2)));
    }

    #[test]
    fn star_membership_is_closed_under_concat() {
        let (p, _) = fixtures::f3();
        let b = p.letter("b").unwrap();
        let sb = Syllable::new(&p, VertexId(2), LetterWord::new(vec![b])).unwrap();
        let w1 = SyllableWord::new(vec![sb.clone()]);
        let w2 = SyllableWord::new(vec![sb.clone(), sb]);
        for i in [VertexId(1), VertexId(3)] {
            assert!(w1.in_star(&p, i) && w2.in_star(&p, i));
            assert!(w1.concat(&w2).in_star(&p, i));
        }
    }

    #[test]
    fn syllable_validation() {
        let (p, _) = fixtures::f1();
        let b = p.letter("b").unwrap();
        assert_eq!(
            Syllable::new(&p, VertexId(1), LetterWord::empty()),
            Err(WordError::EmptySyllable)
        );
        assert_eq!(
            Syllable::new(&p, VertexId(1), LetterWord::new(vec![b])),
            Err(WordError::ForeignLetter { vertex: VertexId(1) })
        );
    }

    #[test]
    fn empty_word_renders_as_bracket_pair() {
        let (p, _) = fixtures::f1();
        assert_eq!(p.render_word(&SyllableWord::empty()), "[]");
    }

    /// Exhaustive check that beta inverts alpha on all short letter words of
    /// each fixture.
    #[test]
    fn beta_alpha_identity_exhaustive() {
        for (p, _) in [fixtures::f1(), fixtures::f2(), fixtures::f3()] {
            let letters: Vec<Letter> = p.all_letters().collect();
            let max_len = 8;
            let mut stack = vec![Vec::new()];
            while let Some(current) = stack.pop() {
                let w = LetterWord::new(current.clone());
                assert_eq!(beta(&alpha(&p, &w)), w);
                if current.len() < max_len {
                    for &l in &letters {
                        let mut next = current.clone();
                        next.push(l);
                        stack.push(next);
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn norm_is_additive_under_concat(left in proptest::collection::vec(0usize..4, 0..6),
                                          right in proptest::collection::vec(0usize..4, 0..6)) {
            let (p, _) = fixtures::f1();
            let a = p.letter("a").unwrap();
            let b = p.letter("b").unwrap();
            let build = |spec: &[usize]| -> SyllableWord {
                spec.iter()
                    .map(|&k| {
                        let (v, l, n) = match k {
                            0 => (VertexId(1), a, 1),
                            1 => (VertexId(1), a, 2),
                            2 => (VertexId(2), b, 1),
                            _ => (VertexId(2), b, 3),
                        };
                        Syllable::new(&p, v, LetterWord::new(vec![l; n])).unwrap()
                    })
                    .collect()
            };
            let lw = build(&left);
            let rw = build(&right);
            prop_assert_eq!(lw.concat(&rw).norm(), lw.norm() + rw.norm());
        }
    }
}
