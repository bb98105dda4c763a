//! Independent oracles and enumerators for the acceptance suite. Nothing
//! here touches the reduction engine or the vertex oracles: group elements
//! are evaluated straight from tables and normal forms.

use gp_core::presentations::GraphProductPresentation;
use gp_core::words::{Letter, LetterWord, Syllable, SyllableWord};

/// The Klein four-group as an explicit 4x4 table, built by exhaustively
/// multiplying (a-parity, b-parity) pairs componentwise. Generators map to
/// the two coordinate flips.
pub struct KleinTable {
    table: [[usize; 4]; 4],
    gen_a: Letter,
}

impl KleinTable {
    pub fn new(p: &GraphProductPresentation) -> KleinTable {
        let decode = |e: usize| (e & 1, e >> 1);
        let encode = |x: usize, y: usize| x | (y << 1);
        let mut table = [[0usize; 4]; 4];
        for (i, row) in table.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let (xa, xb) = decode(i);
                let (ya, yb) = decode(j);
                *cell = encode((xa + ya) % 2, (xb + yb) % 2);
            }
        }
        KleinTable { table, gen_a: p.letter("a").unwrap() }
    }

    pub fn eval(&self, w: &LetterWord) -> usize {
        w.letters().iter().fold(0, |acc, &l| {
            let gen = if l == self.gen_a { 1 } else { 2 };
            self.table[acc][gen]
        })
    }

    pub fn is_identity(&self, w: &LetterWord) -> bool {
        self.eval(w) == 0
    }
}

/// Direct-product evaluation: each component folded independently through
/// the 2-element table.
pub fn direct_product_is_identity(p: &GraphProductPresentation, w: &LetterWord) -> bool {
    let a = p.letter("a").unwrap();
    let z2 = [[0usize, 1], [1, 0]];
    let (mut ca, mut cb) = (0usize, 0usize);
    for &l in w.letters() {
        if l == a {
            ca = z2[ca][1];
        } else {
            cb = z2[cb][1];
        }
    }
    ca == 0 && cb == 0
}

/// Free-product normal form over order-two factors: adjacent same-vertex
/// letters cancel in pairs, nothing else interacts. The word is trivial iff
/// the alternating normal form is empty.
pub fn free_product_is_identity(p: &GraphProductPresentation, w: &LetterWord) -> bool {
    let mut stack: Vec<(u32, u8)> = Vec::new();
    for &l in w.letters() {
        let v = p.vertex_of(l).0;
        match stack.last_mut() {
            Some((top, parity)) if *top == v => {
                *parity ^= 1;
                if *parity == 0 {
                    stack.pop();
                }
            }
            _ => stack.push((v, 1)),
        }
    }
    stack.is_empty()
}

/// Deletion-condition oracle for graph products of order-two groups: a word
/// is trivial iff repeatedly removing equal-letter pairs whose intermediate
/// letters all commute with them empties it. Any removal order works.
pub fn racg_is_identity(p: &GraphProductPresentation, w: &LetterWord) -> bool {
    let commute = |x: Letter, y: Letter| x == y || p.adjacent(p.vertex_of(x), p.vertex_of(y));
    let mut letters: Vec<Letter> = w.letters().to_vec();
    'outer: loop {
        for i in 0..letters.len() {
            for j in i + 1..letters.len() {
                if letters[i] != letters[j] {
                    continue;
                }
                if letters[i + 1..j].iter().all(|&m| commute(letters[i], m)) {
                    letters.remove(j);
                    letters.remove(i);
                    continue 'outer;
                }
            }
        }
        return letters.is_empty();
    }
}

/// Every word over `letters` of length at most `max_len`, shortest first.
pub fn all_letter_words(letters: &[Letter], max_len: usize) -> Vec<LetterWord> {
    let mut out = vec![LetterWord::empty()];
    let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &l in letters {
                let mut extended = w.clone();
                extended.push(l);
                out.push(LetterWord::new(extended.clone()));
                next.push(extended);
            }
        }
        layer = next;
    }
    out
}

/// Every syllable word of a single-letter-per-vertex presentation with norm
/// at most `max_norm`.
pub fn all_syllable_words(p: &GraphProductPresentation, max_norm: usize) -> Vec<SyllableWord> {
    let mut out = vec![SyllableWord::empty()];
    let mut frontier = vec![SyllableWord::empty()];
    while let Some(w) = frontier.pop() {
        let remaining = max_norm - w.norm();
        for v in p.vertices() {
            let letter = p.group(v).unwrap().alphabet()[0];
            for n in 1..=remaining {
                let s = Syllable::new(p, v, LetterWord::new(vec![letter; n])).unwrap();
                let next = w.concat(&SyllableWord::new(vec![s]));
                out.push(next.clone());
                if next.norm() < max_norm {
                    frontier.push(next);
                }
            }
        }
    }
    out
}
