//! The reduction engine: the three moves on syllable words, leading-block
//! search, the canonical complete reduction strategy, weight accounting, and
//! the resulting word-problem decision procedure for the product.
//!
//! Moves:
//!
//! 1. `Merge` — replace `P[u][v]Q` by `P[uv]Q` for adjacent same-vertex
//!    syllables; weight 0.
//! 2. `JumpMerge` — replace `P[u]Q[v]T` by `P[uv]QT` when the nonempty span
//!    `Q` lies in the star of the shared vertex; weight `‖Q‖·|v|`.
//! 3. `Delete` — replace `P[u]Q` by `PQ` when `u` maps to the identity of
//!    its vertex group; weight `f(|u|)`.
//!
//! A word with trivial image always decomposes as
//! `P[u_1]Q_1[u_2]…Q_{r-1}[u_r]P'` with star-of-`i` separators and null
//! concatenated content; eliminating that block (merge the chain left to
//! right, then delete) and recursing reduces the word to the empty word,
//! while a word with no such block has non-trivial image. The weight of the
//! produced sequence is bounded by `‖W‖² + g(‖W‖)`.

use std::fmt;

use thiserror::Error;

use crate::isofunctions::{FunctionClass, IsoError};
use crate::oracles::{OracleError, ProductOracles};
use crate::presentations::{GraphProductPresentation, VertexId};
use crate::words::{alpha, LetterWord, Syllable, SyllableWord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("move {mv} not applicable: {reason}")]
    Inapplicable { mv: Move, reason: InapplicableReason },
    #[error("oracle failure: {0}")]
    Oracle(#[from] OracleError),
    #[error("weight arithmetic: {0}")]
    Weight(#[from] IsoError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InapplicableReason {
    OutOfBounds,
    VertexMismatch,
    EmptySpan,
    SpanNotInStar,
    ContentNotNull,
}

impl fmt::Display for InapplicableReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            InapplicableReason::OutOfBounds => "position out of bounds",
            InapplicableReason::VertexMismatch => "vertex mismatch",
            InapplicableReason::EmptySpan => "span between the syllables is empty",
            InapplicableReason::SpanNotInStar => "span not in star",
            InapplicableReason::ContentNotNull => "content not null",
        };
        write!(f, "{s}")
    }
}

/// One reduction move with its position data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Move {
    /// Type 1: merge syllables `p` and `p+1`.
    Merge { p: usize },
    /// Type 2: merge syllables `p < q` across the span strictly between.
    JumpMerge { p: usize, q: usize },
    /// Type 3: delete the null syllable at `p`.
    Delete { p: usize },
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Merge { p } => write!(f, "Merge({p})"),
            Move::JumpMerge { p, q } => write!(f, "JumpMerge({p},{q})"),
            Move::Delete { p } => write!(f, "Delete({p})"),
        }
    }
}

/// One step of a reduction sequence: the word the move was applied to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub word: SyllableWord,
    pub mv: Move,
}

/// A sequence of moves from `start` to `end`; complete sequences end at the
/// empty word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionSequence {
    pub start: SyllableWord,
    pub steps: Vec<Step>,
    pub end: SyllableWord,
}

impl ReductionSequence {
    pub fn is_complete(&self) -> bool {
        self.end.is_empty()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// The decomposition `P [u_1] Q_1 [u_2] … Q_{r-1} [u_r] P'` located by the
/// leading-block search: `positions` are the chain syllable indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeadingBlock {
    pub vertex: VertexId,
    pub positions: Vec<usize>,
}

impl LeadingBlock {
    pub fn chain_len(&self) -> usize {
        self.positions.len()
    }

    /// Concatenated content of the chain syllables.
    pub fn chain_content(&self, w: &SyllableWord) -> LetterWord {
        let mut out = LetterWord::empty();
        for &p in &self.positions {
            out = out.concat(w.syllables()[p].content());
        }
        out
    }

    /// The separator spans `Q_1 … Q_{r-1}`.
    pub fn separators(&self, w: &SyllableWord) -> Vec<SyllableWord> {
        self.positions
            .windows(2)
            .map(|pair| w.slice(pair[0] + 1..pair[1]))
            .collect()
    }

    pub fn prefix(&self, w: &SyllableWord) -> SyllableWord {
        w.slice(0..self.positions[0])
    }

    pub fn suffix(&self, w: &SyllableWord) -> SyllableWord {
        w.slice(self.positions[self.positions.len() - 1] + 1..w.len())
    }
}

fn syllable_at(w: &SyllableWord, p: usize) -> Result<&Syllable, InapplicableReason> {
    w.syllables().get(p).ok_or(InapplicableReason::OutOfBounds)
}

fn check_move(
    w: &SyllableWord,
    m: Move,
    p: &GraphProductPresentation,
    oracles: &ProductOracles,
) -> Result<(), EngineError> {
    let fail = |reason| EngineError::Inapplicable { mv: m, reason };
    match m {
        Move::Merge { p: pos } => {
            let left = syllable_at(w, pos).map_err(&fail)?;
            let right = syllable_at(w, pos + 1).map_err(&fail)?;
            if left.vertex() != right.vertex() {
                return Err(fail(InapplicableReason::VertexMismatch));
            }
        }
        Move::JumpMerge { p: pos, q } => {
            let left = syllable_at(w, pos).map_err(&fail)?;
            let right = syllable_at(w, q).map_err(&fail)?;
            if pos >= q {
                return Err(fail(InapplicableReason::OutOfBounds));
            }
            if left.vertex() != right.vertex() {
                return Err(fail(InapplicableReason::VertexMismatch));
            }
            if q == pos + 1 {
                return Err(fail(InapplicableReason::EmptySpan));
            }
            if !w.slice(pos + 1..q).in_star(p, left.vertex()) {
                return Err(fail(InapplicableReason::SpanNotInStar));
            }
        }
        Move::Delete { p: pos } => {
            let s = syllable_at(w, pos).map_err(&fail)?;
            let oracle = oracles.get(s.vertex())?;
            if !oracle.is_identity(s.content())? {
                return Err(fail(InapplicableReason::ContentNotNull));
            }
        }
    }
    Ok(())
}

/// Applies a move, validating its side conditions.
pub fn apply_move(
    w: &SyllableWord,
    m: Move,
    p: &GraphProductPresentation,
    oracles: &ProductOracles,
) -> Result<SyllableWord, EngineError> {
    check_move(w, m, p, oracles)?;
    Ok(match m {
        Move::Merge { p: pos } => {
            let left = &w.syllables()[pos];
            let right = &w.syllables()[pos + 1];
            let merged =
                Syllable::from_parts(left.vertex(), left.content().concat(right.content()));
            w.spliced(pos..pos + 2, &[merged])
        }
        Move::JumpMerge { p: pos, q } => {
            let left = &w.syllables()[pos];
            let right = &w.syllables()[q];
            let merged =
                Syllable::from_parts(left.vertex(), left.content().concat(right.content()));
            // The span keeps its place to the right of the merged syllable.
            let mut replacement = vec![merged];
            replacement.extend_from_slice(&w.syllables()[pos + 1..q]);
            w.spliced(pos..q + 1, &replacement)
        }
        Move::Delete { p: pos } => w.spliced(pos..pos + 1, &[]),
    })
}

/// Weight of an applicable move: 0, `‖Q‖·|v|`, or `f(|u|)` by kind.
pub fn move_weight(
    m: Move,
    w: &SyllableWord,
    p: &GraphProductPresentation,
    oracles: &ProductOracles,
    f: &FunctionClass,
) -> Result<u64, EngineError> {
    check_move(w, m, p, oracles)?;
    Ok(match m {
        Move::Merge { .. } => 0,
        Move::JumpMerge { p: pos, q } => {
            let span_norm = w.slice(pos + 1..q).norm() as u64;
            let v_len = w.syllables()[q].content_len() as u64;
            span_norm * v_len
        }
        Move::Delete { p: pos } => f.eval(w.syllables()[pos].content_len() as u64)?,
    })
}

/// All applicable moves, ordered by kind, then leftmost position, then `q`.
pub fn enumerate_moves(
    w: &SyllableWord,
    p: &GraphProductPresentation,
    oracles: &ProductOracles,
) -> Result<Vec<Move>, EngineError> {
    let syllables = w.syllables();
    let mut moves = Vec::new();
    for pos in 0..syllables.len().saturating_sub(1) {
        if syllables[pos].vertex() == syllables[pos + 1].vertex() {
            moves.push(Move::Merge { p: pos });
        }
    }
    for pos in 0..syllables.len() {
        let i = syllables[pos].vertex();
        for q in pos + 2..syllables.len() {
            // Spans must stay inside the star; the first violation kills all
            // longer jumps from this position.
            if !p.adjacent(syllables[q - 1].vertex(), i) {
                break;
            }
            if syllables[q].vertex() == i {
                moves.push(Move::JumpMerge { p: pos, q });
            }
        }
    }
    for (pos, s) in syllables.iter().enumerate() {
        if oracles.get(s.vertex())?.is_identity(s.content())? {
            moves.push(Move::Delete { p: pos });
        }
    }
    Ok(moves)
}

/// Scans for a leading block: vertices ascending, chain start positions left
/// to right, chain lengths shortest first. Returns the first contiguous
/// sub-chain of same-vertex syllables, separated by star spans, whose
/// concatenated content is null.
pub fn find_leading_block(
    w: &SyllableWord,
    p: &GraphProductPresentation,
    oracles: &ProductOracles,
) -> Result<Option<LeadingBlock>, EngineError> {
    let syllables = w.syllables();
    for i in p.vertices() {
        let oracle = oracles.get(i)?;
        for start in 0..syllables.len() {
            if syllables[start].vertex() != i {
                continue;
            }
            // Maximal chain from this start: consecutive i-syllables whose
            // separating spans lie in the star of i.
            let mut chain = vec![start];
            let mut cursor = start + 1;
            loop {
                let mut next = None;
                let mut probe = cursor;
                while probe < syllables.len() {
                    let v = syllables[probe].vertex();
                    if v == i {
                        next = Some(probe);
                        break;
                    }
                    if !p.adjacent(v, i) {
                        break;
                    }
                    probe += 1;
                }
                match next {
                    Some(q) => {
                        chain.push(q);
                        cursor = q + 1;
                    }
                    None => break,
                }
            }
            for len in 1..=chain.len() {
                let candidate = LeadingBlock {
                    vertex: i,
                    positions: chain[..len].to_vec(),
                };
                if oracle.is_identity(&candidate.chain_content(w))? {
                    return Ok(Some(candidate));
                }
            }
        }
    }
    Ok(None)
}

/// Canonical complete reduction: repeatedly locate a leading block, merge
/// its chain left to right, delete the merged null syllable, and recurse.
/// Returns `None` exactly when some nonempty intermediate word has no
/// leading block, which certifies that the image of the word is not the
/// identity.
pub fn reduce(
    w: &SyllableWord,
    p: &GraphProductPresentation,
    oracles: &ProductOracles,
) -> Result<Option<ReductionSequence>, EngineError> {
    let start = w.clone();
    let mut current = w.clone();
    let mut steps = Vec::new();
    while !current.is_empty() {
        let block = match find_leading_block(&current, p, oracles)? {
            Some(b) => b,
            None => return Ok(None),
        };
        let head = block.positions[0];
        for (k, &orig_q) in block.positions.iter().enumerate().skip(1) {
            // Each earlier merge removed one syllable left of the target.
            let q = orig_q - (k - 1);
            let mv = if q == head + 1 {
                Move::Merge { p: head }
            } else {
                Move::JumpMerge { p: head, q }
            };
            let next = apply_move(&current, mv, p, oracles)?;
            steps.push(Step { word: current, mv });
            current = next;
        }
        let mv = Move::Delete { p: head };
        let next = apply_move(&current, mv, p, oracles)?;
        steps.push(Step { word: current, mv });
        current = next;
    }
    Ok(Some(ReductionSequence {
        start,
        steps,
        end: current,
    }))
}

/// Sum of the move weights of a sequence.
pub fn weight_of_sequence(
    s: &ReductionSequence,
    p: &GraphProductPresentation,
    oracles: &ProductOracles,
    f: &FunctionClass,
) -> Result<u64, EngineError> {
    let mut total = 0u64;
    for step in &s.steps {
        total += move_weight(step.mv, &step.word, p, oracles, f)?;
    }
    Ok(total)
}

/// Decides whether a letter word maps to the identity of the product.
pub fn is_identity_in_product(
    w: &LetterWord,
    p: &GraphProductPresentation,
    oracles: &ProductOracles,
) -> Result<bool, EngineError> {
    Ok(reduce(&alpha(p, w), p, oracles)?.is_some())
}

/// One line per step: `<word> --<kind>(p[,q]) w=<weight>--> <word>`.
pub fn render_trace(
    s: &ReductionSequence,
    p: &GraphProductPresentation,
    oracles: &ProductOracles,
    f: &FunctionClass,
) -> Result<String, EngineError> {
    let mut out = String::new();
    for (idx, step) in s.steps.iter().enumerate() {
        let weight = move_weight(step.mv, &step.word, p, oracles, f)?;
        let next = if idx + 1 < s.steps.len() {
            s.steps[idx + 1].word.clone()
        } else {
            s.end.clone()
        };
        out.push_str(&format!(
            "{} --{} w={}--> {}\n",
            p.render_word(&step.word),
            step.mv,
            weight,
            p.render_word(&next)
        ));
    }
    Ok(out)
}
