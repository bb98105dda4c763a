//! Dehn-area certificates over the combined presentation.
//!
//! A certificate lists conjugated relators whose free-group product equals a
//! given null word; its length witnesses the area. Reduction sequences
//! convert move by move: merges contribute nothing, a jump-merge contributes
//! one commutator relator per (span letter, moved letter) pair, and a delete
//! contributes the vertex oracle's area certificate re-indexed into the
//! combined relator list and conjugated by the prefix. Verification is pure
//! free-group arithmetic; no oracles are consulted.

use thiserror::Error;

use crate::engine::{apply_move, EngineError, Move, ReductionSequence};
use crate::freegroup::{equal_mod_bar, ConjugatedRelator, FreeLetter, FreeWord, Sign};
use crate::oracles::{OracleError, ProductOracles};
use crate::presentations::{GraphProductPresentation, PresentationError};
use crate::words::{beta, LetterWord, SyllableWord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertificateError {
    #[error("relator index {index} out of range (combined list has {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("sequence does not end at the empty word")]
    IncompleteSequence,
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("certificate parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl From<PresentationError> for CertificateError {
    fn from(e: PresentationError) -> Self {
        CertificateError::Parse {
            line: 0,
            message: e.to_string(),
        }
    }
}

/// Conjugated-relator product equal to `target` in the free group with
/// `y·bar(y)` cancellations; indices refer to the combined relator list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DehnCertificate {
    pub target: LetterWord,
    pub items: Vec<ConjugatedRelator>,
}

impl DehnCertificate {
    /// The free-group product of the items, freely reduced.
    pub fn product(&self, p: &GraphProductPresentation) -> Result<FreeWord, CertificateError> {
        let relators = p.combined_relators();
        let mut acc = FreeWord::identity();
        for item in &self.items {
            let relator = relators.get(item.relator_index).ok_or(
                CertificateError::IndexOutOfRange {
                    index: item.relator_index,
                    len: relators.len(),
                },
            )?;
            let mut r = FreeWord::from_positive(relator);
            if item.sign == Sign::Minus {
                r = r.inverse();
            }
            acc = acc.concat(&item.conjugator.conjugate(&r));
        }
        Ok(acc)
    }
}

/// Certificate items for one move: the product of the items times the image
/// of the moved-to word equals the image of the moved-from word.
pub fn move_certificate(
    w: &SyllableWord,
    m: Move,
    p: &GraphProductPresentation,
    oracles: &ProductOracles,
) -> Result<Vec<ConjugatedRelator>, CertificateError> {
    // Validates applicability up front.
    apply_move(w, m, p, oracles)?;
    match m {
        Move::Merge { .. } => Ok(Vec::new()),
        Move::JumpMerge { p: pos, q } => {
            let span_letters = beta(&w.slice(pos + 1..q));
            let moved = w.syllables()[q].content();
            // The moved letters settle left to right, each crossing the span
            // right to left one swap at a time; every swap is one conjugated
            // commutator whose conjugator is everything left of the swapped
            // pair. Multiplied in this order the items telescope from the
            // merged word back to the original.
            let mut settled = FreeWord::from_positive(&beta(&w.slice(0..pos + 1)));
            let mut items = Vec::new();
            for &v_letter in moved.letters() {
                for si in (0..span_letters.len()).rev() {
                    let s_letter = span_letters.letters()[si];
                    let mut conj = settled.clone();
                    for &s in &span_letters.letters()[..si] {
                        conj.push(FreeLetter::positive(s));
                    }
                    let (index, sign) = commutator_item(p, s_letter, v_letter)?;
                    items.push(ConjugatedRelator {
                        conjugator: conj,
                        relator_index: index,
                        sign,
                    });
                }
                settled.push(FreeLetter::positive(v_letter));
            }
            Ok(items)
        }
        Move::Delete { p: pos } => {
            let s = &w.syllables()[pos];
            let oracle = oracles.get(s.vertex())?;
            let vertex_cert = oracle.area_certificate(s.content())?;
            let offset = p.relator_offset(s.vertex())?;
            let prefix = FreeWord::from_positive(&beta(&w.slice(0..pos)));
            Ok(vertex_cert
                .items
                .into_iter()
                .map(|item| ConjugatedRelator {
                    conjugator: prefix.concat(&item.conjugator),
                    relator_index: offset + item.relator_index,
                    sign: item.sign,
                })
                .collect())
        }
    }
}

/// Relator index and sign with
/// `relator^sign ≈ span·moved·span⁻¹·moved⁻¹` modulo bar cancellation.
/// Commutators are indexed for (lower vertex, higher vertex), so the
/// orientation decides the sign.
fn commutator_item(
    p: &GraphProductPresentation,
    span_letter: crate::words::Letter,
    moved_letter: crate::words::Letter,
) -> Result<(usize, Sign), CertificateError> {
    if let Some(idx) = p.commutator_index(span_letter, moved_letter) {
        return Ok((idx, Sign::Plus));
    }
    if let Some(idx) = p.commutator_index(moved_letter, span_letter) {
        return Ok((idx, Sign::Minus));
    }
    // Unreachable for applicable jump-merges: the span is in the star.
    Err(CertificateError::IndexOutOfRange {
        index: usize::MAX,
        len: p.combined_relators().len(),
    })
}

/// Concatenates the per-move certificates of a complete sequence; the
/// conjugators are absolute prefixes, so the concatenated product telescopes
/// to the image of the start word.
pub fn sequence_certificate(
    s: &ReductionSequence,
    p: &GraphProductPresentation,
    oracles: &ProductOracles,
) -> Result<DehnCertificate, CertificateError> {
    if !s.is_complete() {
        return Err(CertificateError::IncompleteSequence);
    }
    let mut items = Vec::new();
    for step in &s.steps {
        items.extend(move_certificate(&step.word, step.mv, p, oracles)?);
    }
    Ok(DehnCertificate {
        target: beta(&s.start),
        items,
    })
}

/// Pure free-group verification: multiplies the items symbolically and
/// compares with the target up to free equality with `y·bar(y)`
/// cancellations.
pub fn verify_certificate(
    c: &DehnCertificate,
    p: &GraphProductPresentation,
) -> Result<bool, CertificateError> {
    let product = c.product(p)?;
    Ok(equal_mod_bar(
        p,
        &product,
        &FreeWord::from_positive(&c.target),
    ))
}

/// Renders the certificate file: a `target` header line, then one
/// `conj <free-word> rel <index> sign <+|->` line per item. Empty words
/// render as `.` and `'` marks a formal inverse.
pub fn render_certificate(c: &DehnCertificate, p: &GraphProductPresentation) -> String {
    let mut out = String::new();
    let target = if c.target.is_empty() {
        ".".to_string()
    } else {
        p.render_letters(&c.target)
    };
    out.push_str(&format!("target {target}\n"));
    for item in &c.items {
        out.push_str(&format!(
            "conj {} rel {} sign {}\n",
            p.render_free_word(&item.conjugator),
            item.relator_index,
            item.sign
        ));
    }
    out
}

fn parse_free_token(
    p: &GraphProductPresentation,
    token: &str,
    line: usize,
) -> Result<FreeLetter, CertificateError> {
    let (name, inverse) = match token.strip_suffix('\'') {
        Some(base) => (base, true),
        None => (token, false),
    };
    let letter = p.letter(name).ok_or_else(|| CertificateError::Parse {
        line,
        message: format!("unknown letter {name:?}"),
    })?;
    Ok(FreeLetter { letter, inverse })
}

/// Parses the certificate file format produced by [`render_certificate`].
pub fn parse_certificate(
    text: &str,
    p: &GraphProductPresentation,
) -> Result<DehnCertificate, CertificateError> {
    let mut lines = text.lines().enumerate();
    let (first_no, first) = lines.next().ok_or(CertificateError::Parse {
        line: 1,
        message: "empty certificate file".into(),
    })?;
    let mut header = first.split_whitespace();
    if header.next() != Some("target") {
        return Err(CertificateError::Parse {
            line: first_no + 1,
            message: "expected a target header line".into(),
        });
    }
    let target_tokens: Vec<&str> = header.collect();
    let target = if target_tokens == ["."] {
        LetterWord::empty()
    } else {
        target_tokens
            .iter()
            .map(|tok| {
                p.letter(tok).ok_or_else(|| CertificateError::Parse {
                    line: first_no + 1,
                    message: format!("unknown letter {tok:?}"),
                })
            })
            .collect::<Result<LetterWord, _>>()?
    };

    let mut items = Vec::new();
    for (no, line) in lines {
        let line_no = no + 1;
        if line.trim().is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let bad = |message: String| CertificateError::Parse { line: line_no, message };
        if tokens.len() < 6 || tokens[0] != "conj" {
            return Err(bad("expected: conj <free-word> rel <index> sign <+|->".into()));
        }
        let rel_pos = tokens.len() - 4;
        if tokens[rel_pos] != "rel" || tokens[tokens.len() - 2] != "sign" {
            return Err(bad("expected: conj <free-word> rel <index> sign <+|->".into()));
        }
        let conj_tokens = &tokens[1..rel_pos];
        let conjugator = if conj_tokens == ["."] {
            FreeWord::identity()
        } else {
            FreeWord::from_letters(
                conj_tokens
                    .iter()
                    .map(|t| parse_free_token(p, t, line_no))
                    .collect::<Result<Vec<_>, _>>()?,
            )
        };
        let relator_index: usize = tokens[rel_pos + 1]
            .parse()
            .map_err(|_| bad(format!("bad relator index {:?}", tokens[rel_pos + 1])))?;
        let sign = match tokens[tokens.len() - 1] {
            "+" => Sign::Plus,
            "-" => Sign::Minus,
            other => return Err(bad(format!("bad sign {other:?}"))),
        };
        items.push(ConjugatedRelator {
            conjugator,
            relator_index,
            sign,
        });
    }
    Ok(DehnCertificate { target, items })
}
