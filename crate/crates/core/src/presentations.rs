//! Graphs, vertex-group presentations with a bar involution, and the
//! combined presentation of the graph product.
//!
//! Validation normalizes raw input to the standing assumptions: alphabets
//! are pairwise disjoint, every letter has a bar partner in its own
//! alphabet, every relator `y·bar(y)` is present (appended when missing),
//! and the global isoperimetric function is the pointwise maximum of the
//! declared per-vertex classes. Presentations are immutable once built.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::freegroup::FreeWord;
use crate::isofunctions::FunctionClass;
use crate::words::{Letter, LetterWord, SyllableWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("loop edge at vertex {0}")]
    LoopEdge(VertexId),
    #[error("duplicate edge between {0} and {1}")]
    DuplicateEdge(VertexId, VertexId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("vertex {0} declared more than once")]
    DuplicateVertex(VertexId),
    #[error("vertex {0} has more than one group declaration")]
    DuplicateGroup(VertexId),
    #[error("vertex {0} has no group declaration")]
    MissingGroup(VertexId),
    #[error("vertex {0} has an empty alphabet")]
    EmptyAlphabet(VertexId),
    #[error("letter {0:?} declared more than once")]
    AlphabetOverlap(String),
    #[error("letter name {0:?} is not allowed (alphanumeric/underscore, not a format keyword)")]
    InvalidLetterName(String),
    #[error("bad bar involution: {0}")]
    BadBar(String),
    #[error("relator of vertex {vertex} uses text {text:?} outside its alphabet")]
    ForeignLetterInRelator { vertex: VertexId, text: String },
    #[error("empty relator declared for vertex {0}")]
    EmptyRelator(VertexId),
    #[error("bad isoperimetric class for vertex {vertex}: {reason}")]
    BadIsoClass { vertex: VertexId, reason: String },
    #[error("unknown letter {0:?}")]
    UnknownLetter(String),
}

/// Unvalidated presentation, as produced by an input parser or built by hand.
#[derive(Debug, Clone, Default)]
pub struct RawPresentation {
    pub vertices: Vec<u32>,
    pub edges: Vec<(u32, u32)>,
    pub groups: Vec<RawGroup>,
}

#[derive(Debug, Clone)]
pub struct RawGroup {
    pub vertex: u32,
    pub gens: Vec<String>,
    /// Symmetric bar declarations; every generator must be covered.
    pub bar_pairs: Vec<(String, String)>,
    /// Relators as concatenated letter text, tokenized greedily against the
    /// group's alphabet (longest match first).
    pub relators: Vec<String>,
    pub iso: FunctionClass,
}

/// Finite simple graph on the declared vertices.
#[derive(Debug, Clone)]
pub struct Graph {
    vertices: BTreeSet<VertexId>,
    edges: BTreeSet<(VertexId, VertexId)>,
}

impl Graph {
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn edges(&self) -> &BTreeSet<(VertexId, VertexId)> {
        &self.edges
    }
}

/// One vertex group: alphabet, bar involution, relators, declared class.
#[derive(Debug, Clone)]
pub struct VertexPresentation {
    vertex: VertexId,
    alphabet: Vec<Letter>,
    relators: Vec<LetterWord>,
    iso_class: FunctionClass,
}

impl VertexPresentation {
    pub fn vertex(&self) -> VertexId {
        self.vertex
    }

    pub fn alphabet(&self) -> &[Letter] {
        &self.alphabet
    }

    pub fn relators(&self) -> &[LetterWord] {
        &self.relators
    }

    pub fn iso_class(&self) -> &FunctionClass {
        &self.iso_class
    }
}

struct LetterInfo {
    name: String,
    vertex: VertexId,
    bar: Letter,
}

/// The validated graph-product presentation; the single object every
/// computation is parameterized by.
pub struct GraphProductPresentation {
    graph: Graph,
    stars: BTreeMap<VertexId, BTreeSet<VertexId>>,
    letters: Vec<LetterInfo>,
    by_name: HashMap<String, Letter>,
    groups: BTreeMap<VertexId, VertexPresentation>,
    f: FunctionClass,
    combined: Vec<LetterWord>,
    relator_offsets: BTreeMap<VertexId, usize>,
    commutator_index: HashMap<(Letter, Letter), usize>,
}

impl fmt::Debug for GraphProductPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GraphProductPresentation")
            .field("vertices", &self.graph.vertices)
            .field("edges", &self.graph.edges)
            .field("letters", &self.letters.iter().map(|l| &l.name).collect::<Vec<_>>())
            .finish_non_exhaustive()
    }
}

impl Clone for GraphProductPresentation {
    fn clone(&self) -> Self {
        GraphProductPresentation {
            graph: self.graph.clone(),
            stars: self.stars.clone(),
            letters: self
                .letters
                .iter()
                .map(|l| LetterInfo {
                    name: l.name.clone(),
                    vertex: l.vertex,
                    bar: l.bar,
                })
                .collect(),
            by_name: self.by_name.clone(),
            groups: self.groups.clone(),
            f: self.f.clone(),
            combined: self.combined.clone(),
            relator_offsets: self.relator_offsets.clone(),
            commutator_index: self.commutator_index.clone(),
        }
    }
}

const RESERVED_WORDS: &[&str] = &["target", "conj", "rel", "sign"];

fn letter_name_ok(name: &str) -> bool {
    !name.is_empty()
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !RESERVED_WORDS.contains(&name)
}

/// Validates and normalizes a raw presentation.
pub fn validate_presentation(
    raw: &RawPresentation,
) -> Result<GraphProductPresentation, PresentationError> {
    // Graph.
    let mut vertices = BTreeSet::new();
    for &v in &raw.vertices {
        if !vertices.insert(VertexId(v)) {
            return Err(PresentationError::DuplicateVertex(VertexId(v)));
        }
    }
    let mut edges = BTreeSet::new();
    for &(a, b) in &raw.edges {
        let (a, b) = (VertexId(a), VertexId(b));
        if a == b {
            return Err(PresentationError::LoopEdge(a));
        }
        for v in [a, b] {
            if !vertices.contains(&v) {
                return Err(PresentationError::UnknownVertex(v));
            }
        }
        let e = (a.min(b), a.max(b));
        if !edges.insert(e) {
            return Err(PresentationError::DuplicateEdge(e.0, e.1));
        }
    }
    let graph = Graph { vertices, edges };
    let mut stars: BTreeMap<VertexId, BTreeSet<VertexId>> = graph
        .vertices()
        .map(|v| (v, BTreeSet::new()))
        .collect();
    for &(a, b) in graph.edges() {
        stars.get_mut(&a).unwrap().insert(b);
        stars.get_mut(&b).unwrap().insert(a);
    }

    // One group per vertex, keyed and processed in ascending vertex order.
    let mut raw_groups: BTreeMap<VertexId, &RawGroup> = BTreeMap::new();
    for g in &raw.groups {
        let v = VertexId(g.vertex);
        if !graph.vertices.contains(&v) {
            return Err(PresentationError::UnknownVertex(v));
        }
        if raw_groups.insert(v, g).is_some() {
            return Err(PresentationError::DuplicateGroup(v));
        }
    }
    for v in graph.vertices() {
        if !raw_groups.contains_key(&v) {
            return Err(PresentationError::MissingGroup(v));
        }
    }

    // Intern letters: vertices ascending, generators in declaration order.
    let mut letters: Vec<LetterInfo> = Vec::new();
    let mut by_name: HashMap<String, Letter> = HashMap::new();
    for (&v, g) in &raw_groups {
        if g.gens.is_empty() {
            return Err(PresentationError::EmptyAlphabet(v));
        }
        for name in &g.gens {
            if !letter_name_ok(name) {
                return Err(PresentationError::InvalidLetterName(name.clone()));
            }
            let id = Letter(letters.len() as u32);
            if by_name.insert(name.clone(), id).is_some() {
                return Err(PresentationError::AlphabetOverlap(name.clone()));
            }
            letters.push(LetterInfo {
                name: name.clone(),
                vertex: v,
                bar: id, // placeholder until bar declarations are applied
            });
        }
    }

    // Bar involution: every declaration symmetric, every letter covered.
    let mut bar_declared = vec![false; letters.len()];
    for (&v, g) in &raw_groups {
        for (x, y) in &g.bar_pairs {
            let lx = *by_name
                .get(x)
                .ok_or_else(|| PresentationError::UnknownLetter(x.clone()))?;
            let ly = *by_name
                .get(y)
                .ok_or_else(|| PresentationError::UnknownLetter(y.clone()))?;
            if letters[lx.index()].vertex != v || letters[ly.index()].vertex != v {
                return Err(PresentationError::BadBar(format!(
                    "bar pair ({x}, {y}) crosses vertex boundaries"
                )));
            }
            for (l, partner) in [(lx, ly), (ly, lx)] {
                if bar_declared[l.index()] && letters[l.index()].bar != partner {
                    return Err(PresentationError::BadBar(format!(
                        "conflicting bar partners for {:?}",
                        letters[l.index()].name
                    )));
                }
                letters[l.index()].bar = partner;
                bar_declared[l.index()] = true;
            }
        }
    }
    for (idx, declared) in bar_declared.iter().enumerate() {
        if !declared {
            return Err(PresentationError::BadBar(format!(
                "no bar partner declared for {:?}",
                letters[idx].name
            )));
        }
    }

    // Per-vertex relators: tokenize, then append missing y·bar(y) words.
    let mut groups: BTreeMap<VertexId, VertexPresentation> = BTreeMap::new();
    for (&v, g) in &raw_groups {
        match &g.iso {
            FunctionClass::Polynomial(k) if *k == 0 => {
                return Err(PresentationError::BadIsoClass {
                    vertex: v,
                    reason: "polynomial degree must be at least 1".into(),
                })
            }
            FunctionClass::Tabulated(values) => {
                if values.is_empty() {
                    return Err(PresentationError::BadIsoClass {
                        vertex: v,
                        reason: "table must have at least one value".into(),
                    });
                }
                if values.windows(2).any(|w| w[0] > w[1]) {
                    return Err(PresentationError::BadIsoClass {
                        vertex: v,
                        reason: "table must be monotone non-decreasing".into(),
                    });
                }
            }
            _ => {}
        }
        let alphabet: Vec<Letter> = g.gens.iter().map(|n| by_name[n]).collect();
        let mut relators = Vec::new();
        for text in &g.relators {
            if text.is_empty() {
                return Err(PresentationError::EmptyRelator(v));
            }
            relators.push(tokenize_relator(text, &alphabet, &letters, v)?);
        }
        for &y in &alphabet {
            let pair = LetterWord::new(vec![y, letters[y.index()].bar]);
            if !relators.contains(&pair) {
                relators.push(pair);
            }
        }
        groups.insert(
            v,
            VertexPresentation {
                vertex: v,
                alphabet,
                relators,
                iso_class: g.iso.clone(),
            },
        );
    }

    let f = FunctionClass::pointwise_max(groups.values().map(|g| g.iso_class.clone()).collect());

    // Combined relators: all vertex relators (vertices ascending), then one
    // commutator a·b·bar(a)·bar(b) per edge {i,j}, i < j, a over A_i and b
    // over A_j in declaration order. This indexed list is the reference set
    // for every certificate.
    let mut combined = Vec::new();
    let mut relator_offsets = BTreeMap::new();
    for (&v, g) in &groups {
        relator_offsets.insert(v, combined.len());
        combined.extend(g.relators.iter().cloned());
    }
    let mut commutator_index = HashMap::new();
    for &(i, j) in graph.edges() {
        for &a in &groups[&i].alphabet {
            for &b in &groups[&j].alphabet {
                commutator_index.insert((a, b), combined.len());
                combined.push(LetterWord::new(vec![
                    a,
                    b,
                    letters[a.index()].bar,
                    letters[b.index()].bar,
                ]));
            }
        }
    }

    Ok(GraphProductPresentation {
        graph,
        stars,
        letters,
        by_name,
        groups,
        f,
        combined,
        relator_offsets,
        commutator_index,
    })
}

fn tokenize_relator(
    text: &str,
    alphabet: &[Letter],
    letters: &[LetterInfo],
    vertex: VertexId,
) -> Result<LetterWord, PresentationError> {
    // Greedy longest-match against this vertex's alphabet.
    let mut names: Vec<(&str, Letter)> = alphabet
        .iter()
        .map(|&l| (letters[l.index()].name.as_str(), l))
        .collect();
    names.sort_by_key(|(n, _)| std::cmp::Reverse(n.len()));
    let mut rest = text;
    let mut out = Vec::new();
    'outer: while !rest.is_empty() {
        for &(name, l) in &names {
            if let Some(tail) = rest.strip_prefix(name) {
                out.push(l);
                rest = tail;
                continue 'outer;
            }
        }
        return Err(PresentationError::ForeignLetterInRelator {
            vertex,
            text: rest.to_string(),
        });
    }
    Ok(LetterWord::new(out))
}

impl GraphProductPresentation {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.graph.vertices()
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertices.len()
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.graph.vertices.contains(&v)
    }

    /// Vertices adjacent to `i`; never contains `i` itself.
    pub fn star(&self, i: VertexId) -> Result<&BTreeSet<VertexId>, PresentationError> {
        self.stars
            .get(&i)
            .ok_or(PresentationError::UnknownVertex(i))
    }

    pub fn adjacent(&self, a: VertexId, b: VertexId) -> bool {
        self.stars.get(&a).is_some_and(|s| s.contains(&b))
    }

    pub fn group(&self, v: VertexId) -> Result<&VertexPresentation, PresentationError> {
        self.groups
            .get(&v)
            .ok_or(PresentationError::UnknownVertex(v))
    }

    pub fn groups(&self) -> impl Iterator<Item = &VertexPresentation> {
        self.groups.values()
    }

    /// The global isoperimetric function: pointwise maximum of the declared
    /// per-vertex classes.
    pub fn f(&self) -> &FunctionClass {
        &self.f
    }

    pub fn letter(&self, name: &str) -> Option<Letter> {
        self.by_name.get(name).copied()
    }

    pub fn letter_name(&self, l: Letter) -> &str {
        &self.letters[l.index()].name
    }

    pub fn vertex_of(&self, l: Letter) -> VertexId {
        self.letters[l.index()].vertex
    }

    pub fn bar(&self, l: Letter) -> Letter {
        self.letters[l.index()].bar
    }

    pub fn letter_count(&self) -> usize {
        self.letters.len()
    }

    pub fn all_letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.letters.len() as u32).map(Letter)
    }

    /// The union of the vertex relator lists followed by the edge
    /// commutators, in the fixed certificate-reference order.
    pub fn combined_relators(&self) -> &[LetterWord] {
        &self.combined
    }

    /// Index of vertex `v`'s first relator in the combined list.
    pub fn relator_offset(&self, v: VertexId) -> Result<usize, PresentationError> {
        self.relator_offsets
            .get(&v)
            .copied()
            .ok_or(PresentationError::UnknownVertex(v))
    }

    /// Index of the commutator relator for `a` (lower vertex) and `b`
    /// (higher vertex), if that edge exists.
    pub fn commutator_index(&self, a: Letter, b: Letter) -> Option<usize> {
        self.commutator_index.get(&(a, b)).copied()
    }

    /// Parses a space-separated sequence of letter names.
    pub fn parse_letter_word(&self, text: &str) -> Result<LetterWord, PresentationError> {
        text.split_whitespace()
            .map(|tok| {
                self.letter(tok)
                    .ok_or_else(|| PresentationError::UnknownLetter(tok.to_string()))
            })
            .collect()
    }

    /// Space-separated letter names.
    pub fn render_letters(&self, w: &LetterWord) -> String {
        w.letters()
            .iter()
            .map(|&l| self.letter_name(l))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// `[aa][b]` form; the empty word renders as `[]`.
    pub fn render_word(&self, w: &SyllableWord) -> String {
        if w.is_empty() {
            return "[]".to_string();
        }
        let mut out = String::new();
        for s in w.syllables() {
            out.push('[');
            for &l in s.content().letters() {
                out.push_str(self.letter_name(l));
            }
            out.push(']');
        }
        out
    }

    /// Free word with `'` marking formal inverses; the empty word renders
    /// as `.`.
    pub fn render_free_word(&self, w: &FreeWord) -> String {
        if w.is_empty() {
            return ".".to_string();
        }
        w.letters()
            .iter()
            .map(|fl| {
                let mut s = self.letter_name(fl.letter).to_string();
                if fl.inverse {
                    s.push('\'');
                }
                s
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}
