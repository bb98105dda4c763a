//! The two-tier rewriting system on syllable words.
//!
//! Five pair schemas generate the system: adjacent merge, merge across a
//! star word, deletion of a null syllable, content replacement within a
//! vertex group, and the commuting swap across an edge. The first three
//! shorten the syllable count and induce `→`; the last two preserve it and
//! induce `∼`. The product monoid is presented by these pairs, and the
//! system is almost confluent: equivalent words rewrite via `→*` to words
//! joined by `∼*`.
//!
//! The derived alphabet is infinite, so all checking happens inside a
//! [`BoundedUniverse`] capped by total norm and syllable content length.
//! Rewrites that would leave the universe are dropped, which can make
//! boundary words look inequivalent; checks therefore only assert about
//! words within half the norm cap, and counterexamples are reported rather
//! than suppressed. Content-length truncation has no such safe margin: once
//! the content cap admits distinct same-image contents, replacement steps
//! can grow a word past any cap that would let its merges complete, and the
//! reports must be read against the cap (every such pair still has equal
//! images). With content cap 2 over one-letter alphabets no growth exists
//! and the checks are exact within the norm margin.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::OnceLock;

use thiserror::Error;

use crate::oracles::{OracleError, ProductOracles};
use crate::presentations::{GraphProductPresentation, VertexId};
use crate::words::{LetterWord, Syllable, SyllableWord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ThueError {
    #[error("case {case_id} has no in-universe instantiation; the universe is too small")]
    EmptyInstantiation { case_id: u8 },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    /// `|l| > |r|` in syllable count; used left to right only.
    Reducing,
    /// `|l| = |r|`; used in both directions.
    Equal,
}

/// Static description of one of the five schemas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairSchema {
    pub id: u8,
    pub kind: PairKind,
}

pub const SCHEMAS: [PairSchema; 5] = [
    PairSchema { id: 1, kind: PairKind::Reducing },
    PairSchema { id: 2, kind: PairKind::Reducing },
    PairSchema { id: 3, kind: PairKind::Reducing },
    PairSchema { id: 4, kind: PairKind::Equal },
    PairSchema { id: 5, kind: PairKind::Equal },
];

/// A concrete instantiated pair `(l, r)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThuePair {
    pub schema: u8,
    pub lhs: SyllableWord,
    pub rhs: SyllableWord,
}

impl ThuePair {
    pub fn kind(&self) -> PairKind {
        SCHEMAS[(self.schema - 1) as usize].kind
    }
}

/// One vertex-group content admitted by the universe caps.
#[derive(Debug, Clone)]
pub struct ContentInfo {
    pub word: LetterWord,
    pub null: bool,
    /// Contents with equal image share a class id (per vertex).
    pub class_id: usize,
}

struct Adjacency {
    reducing: Vec<Vec<usize>>,
    equal: Vec<Vec<usize>>,
    /// Connected component under `∼` steps only.
    sim_component: Vec<usize>,
    /// Connected component under all steps, both directions.
    full_component: Vec<usize>,
}

/// Finite slice of the rewriting system: every valid syllable word with
/// norm at most `max_norm` whose syllable contents have length at most
/// `max_syll`, together with all pairs instantiated inside it.
pub struct BoundedUniverse {
    presentation: GraphProductPresentation,
    oracles: ProductOracles,
    max_norm: usize,
    max_syll: usize,
    words: Vec<SyllableWord>,
    index: HashMap<SyllableWord, usize>,
    pairs: Vec<ThuePair>,
    contents: BTreeMap<VertexId, Vec<ContentInfo>>,
    adjacency: OnceLock<Adjacency>,
}

impl std::fmt::Debug for BoundedUniverse {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BoundedUniverse")
            .field("max_norm", &self.max_norm)
            .field("max_syll", &self.max_syll)
            .field("words", &self.words.len())
            .field("pairs", &self.pairs.len())
            .finish()
    }
}

impl BoundedUniverse {
    pub fn new(
        p: &GraphProductPresentation,
        oracles: &ProductOracles,
        max_norm: usize,
        max_syll: usize,
    ) -> Result<BoundedUniverse, ThueError> {
        // All admissible contents per vertex, length ascending then
        // lexicographic, classified by image.
        let mut contents: BTreeMap<VertexId, Vec<ContentInfo>> = BTreeMap::new();
        for v in p.vertices() {
            let oracle = oracles.get(v)?;
            let alphabet = p.group(v).map_err(|_| OracleError::MissingOracle(v))?.alphabet().to_vec();
            let mut words: Vec<LetterWord> = Vec::new();
            let mut layer: Vec<LetterWord> = vec![LetterWord::empty()];
            for _ in 0..max_syll {
                let mut next = Vec::new();
                for w in &layer {
                    for &l in &alphabet {
                        let mut letters = w.letters().to_vec();
                        letters.push(l);
                        next.push(LetterWord::new(letters));
                    }
                }
                words.extend(next.iter().cloned());
                layer = next;
            }
            let mut infos: Vec<ContentInfo> = Vec::new();
            for w in words {
                let null = oracle.is_identity(&w)?;
                let mut class_id = infos.len();
                for other in &infos {
                    if oracle.are_equal(&w, &other.word)? {
                        class_id = other.class_id;
                        break;
                    }
                }
                infos.push(ContentInfo { word: w, null, class_id });
            }
            contents.insert(v, infos);
        }

        // Every word over the admitted syllables with norm within the cap.
        let mut words: Vec<SyllableWord> = Vec::new();
        let mut queue: VecDeque<SyllableWord> = VecDeque::new();
        words.push(SyllableWord::empty());
        queue.push_back(SyllableWord::empty());
        while let Some(w) = queue.pop_front() {
            let remaining = max_norm - w.norm();
            for (&v, infos) in &contents {
                for info in infos {
                    if info.word.len() > remaining {
                        continue;
                    }
                    let next = w.concat(&SyllableWord::new(vec![Syllable::from_parts(
                        v,
                        info.word.clone(),
                    )]));
                    words.push(next.clone());
                    if next.norm() < max_norm {
                        queue.push_back(next);
                    }
                }
            }
        }
        words.sort_by(|a, b| {
            (a.norm(), a.len(), a).cmp(&(b.norm(), b.len(), b))
        });
        words.dedup();
        let index: HashMap<SyllableWord, usize> =
            words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();

        let mut universe = BoundedUniverse {
            presentation: p.clone(),
            oracles: oracles.clone(),
            max_norm,
            max_syll,
            words,
            index,
            pairs: Vec::new(),
            contents,
            adjacency: OnceLock::new(),
        };
        universe.pairs = universe.instantiate_all_pairs();
        Ok(universe)
    }

    pub fn presentation(&self) -> &GraphProductPresentation {
        &self.presentation
    }

    pub fn oracles(&self) -> &ProductOracles {
        &self.oracles
    }

    pub fn max_norm(&self) -> usize {
        self.max_norm
    }

    pub fn max_syll(&self) -> usize {
        self.max_syll
    }

    pub fn words(&self) -> &[SyllableWord] {
        &self.words
    }

    pub fn contains(&self, w: &SyllableWord) -> bool {
        self.index.contains_key(w)
    }

    /// All concrete pairs from the five schemas with both sides in the
    /// universe, in schema order.
    pub fn pairs(&self) -> &[ThuePair] {
        &self.pairs
    }

    pub fn contents(&self, v: VertexId) -> &[ContentInfo] {
        &self.contents[&v]
    }

    fn syllable(&self, v: VertexId, content: &LetterWord) -> Syllable {
        Syllable::from_parts(v, content.clone())
    }

    fn instantiate_all_pairs(&self) -> Vec<ThuePair> {
        let p = &self.presentation;
        let mut pairs = Vec::new();
        // Schema 1: ([u][v], [uv]).
        for v in p.vertices() {
            for a in self.contents(v) {
                for b in self.contents(v) {
                    let merged_len = a.word.len() + b.word.len();
                    if merged_len > self.max_syll || merged_len > self.max_norm {
                        continue;
                    }
                    pairs.push(ThuePair {
                        schema: 1,
                        lhs: SyllableWord::new(vec![
                            self.syllable(v, &a.word),
                            self.syllable(v, &b.word),
                        ]),
                        rhs: SyllableWord::new(vec![
                            self.syllable(v, &a.word.concat(&b.word)),
                        ]),
                    });
                }
            }
        }
        // Schema 2: ([u]P[v], [uv]P) with P nonempty and in the star.
        for v in p.vertices() {
            let star_words: Vec<&SyllableWord> = self
                .words
                .iter()
                .filter(|w| !w.is_empty() && w.in_star(p, v))
                .collect();
            for a in self.contents(v) {
                for b in self.contents(v) {
                    let merged_len = a.word.len() + b.word.len();
                    if merged_len > self.max_syll {
                        continue;
                    }
                    for span in &star_words {
                        if merged_len + span.norm() > self.max_norm {
                            continue;
                        }
                        let mut lhs = vec![self.syllable(v, &a.word)];
                        lhs.extend_from_slice(span.syllables());
                        lhs.push(self.syllable(v, &b.word));
                        let mut rhs = vec![self.syllable(v, &a.word.concat(&b.word))];
                        rhs.extend_from_slice(span.syllables());
                        pairs.push(ThuePair {
                            schema: 2,
                            lhs: SyllableWord::new(lhs),
                            rhs: SyllableWord::new(rhs),
                        });
                    }
                }
            }
        }
        // Schema 3: ([u], ε) for null contents.
        for v in p.vertices() {
            for a in self.contents(v) {
                if a.word.len() > self.max_norm {
                    continue;
                }
                if a.null {
                    pairs.push(ThuePair {
                        schema: 3,
                        lhs: SyllableWord::new(vec![self.syllable(v, &a.word)]),
                        rhs: SyllableWord::empty(),
                    });
                }
            }
        }
        // Schema 4: ([u], [v]) for distinct contents with equal image, both
        // orientations.
        for v in p.vertices() {
            let infos = self.contents(v);
            for a in infos {
                for b in infos {
                    if a.word.len() > self.max_norm || b.word.len() > self.max_norm {
                        continue;
                    }
                    if a.word != b.word && a.class_id == b.class_id {
                        pairs.push(ThuePair {
                            schema: 4,
                            lhs: SyllableWord::new(vec![self.syllable(v, &a.word)]),
                            rhs: SyllableWord::new(vec![self.syllable(v, &b.word)]),
                        });
                    }
                }
            }
        }
        // Schema 5: ([u][v], [v][u]) across an edge, both orientations.
        for i in p.vertices() {
            for &j in p.star(i).expect("vertex exists") {
                for a in self.contents(i) {
                    for b in self.contents(j) {
                        if a.word.len() + b.word.len() > self.max_norm {
                            continue;
                        }
                        pairs.push(ThuePair {
                            schema: 5,
                            lhs: SyllableWord::new(vec![
                                self.syllable(i, &a.word),
                                self.syllable(j, &b.word),
                            ]),
                            rhs: SyllableWord::new(vec![
                                self.syllable(j, &b.word),
                                self.syllable(i, &a.word),
                            ]),
                        });
                    }
                }
            }
        }
        pairs
    }

    fn adjacency(&self) -> &Adjacency {
        self.adjacency.get_or_init(|| {
            let n = self.words.len();
            let mut reducing = vec![Vec::new(); n];
            let mut equal = vec![Vec::new(); n];
            for (idx, w) in self.words.iter().enumerate() {
                let (red, eq) = step_successors(w, self);
                reducing[idx] = red.iter().map(|r| self.index[r]).collect();
                equal[idx] = eq.iter().map(|r| self.index[r]).collect();
            }
            let sim_component = components(n, |i| equal[i].iter().copied());
            let full_component = components(n, |i| {
                reducing[i].iter().copied().chain(equal[i].iter().copied())
            });
            Adjacency { reducing, equal, sim_component, full_component }
        })
    }

    fn reducing_closure(&self, start: usize) -> HashSet<usize> {
        let adj = self.adjacency();
        let mut seen = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start);
        queue.push_back(start);
        while let Some(i) = queue.pop_front() {
            for &j in &adj.reducing[i] {
                if seen.insert(j) {
                    queue.push_back(j);
                }
            }
        }
        seen
    }
}

/// Undirected connected components over a successor relation.
fn components<I, F>(n: usize, successors: F) -> Vec<usize>
where
    I: Iterator<Item = usize>,
    F: Fn(usize) -> I,
{
    let mut undirected: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in successors(i) {
            undirected[i].push(j);
            undirected[j].push(i);
        }
    }
    let mut component = vec![usize::MAX; n];
    let mut next_id = 0;
    for start in 0..n {
        if component[start] != usize::MAX {
            continue;
        }
        let mut queue = VecDeque::new();
        component[start] = next_id;
        queue.push_back(start);
        while let Some(i) = queue.pop_front() {
            for &j in &undirected[i] {
                if component[j] == usize::MAX {
                    component[j] = next_id;
                    queue.push_back(j);
                }
            }
        }
        next_id += 1;
    }
    component
}

/// All one-step rewrites of `w` inside the universe, split into reducing
/// (`→`) and equal (`∼`) results; the word itself is never returned.
pub fn step_successors(
    w: &SyllableWord,
    u: &BoundedUniverse,
) -> (BTreeSet<SyllableWord>, BTreeSet<SyllableWord>) {
    let mut reducing = BTreeSet::new();
    let mut equal = BTreeSet::new();
    for pair in u.pairs() {
        let k = pair.lhs.len();
        if k > w.len() {
            continue;
        }
        for start in 0..=w.len() - k {
            if w.syllables()[start..start + k] != pair.lhs.syllables()[..] {
                continue;
            }
            let result = w.spliced(start..start + k, pair.rhs.syllables());
            if &result == w || !u.contains(&result) {
                continue;
            }
            match pair.kind() {
                PairKind::Reducing => reducing.insert(result),
                PairKind::Equal => equal.insert(result),
            };
        }
    }
    (reducing, equal)
}

/// Partition of the universe into connected components of the one-step
/// graph (both relations, both directions). This under-approximates the
/// unbounded equivalence at the boundary.
pub fn equivalence_classes(u: &BoundedUniverse) -> Vec<Vec<SyllableWord>> {
    let adj = u.adjacency();
    let mut buckets: BTreeMap<usize, Vec<SyllableWord>> = BTreeMap::new();
    let mut first_seen: BTreeMap<usize, usize> = BTreeMap::new();
    for (idx, w) in u.words().iter().enumerate() {
        let c = adj.full_component[idx];
        first_seen.entry(c).or_insert(idx);
        buckets.entry(c).or_default().push(w.clone());
    }
    let mut classes: Vec<(usize, Vec<SyllableWord>)> = buckets
        .into_iter()
        .map(|(c, members)| (first_seen[&c], members))
        .collect();
    classes.sort_by_key(|(first, _)| *first);
    classes.into_iter().map(|(_, members)| members).collect()
}

/// Whether `x →* x₁`, `y →* y₁` with `x₁ ∼* y₁`, all inside the universe.
pub fn almost_confluent_pair(x: &SyllableWord, y: &SyllableWord, u: &BoundedUniverse) -> bool {
    let ix = *u.index.get(x).expect("x must be a universe word");
    let iy = *u.index.get(y).expect("y must be a universe word");
    almost_confluent_indices(ix, iy, u)
}

fn almost_confluent_indices(ix: usize, iy: usize, u: &BoundedUniverse) -> bool {
    let adj = u.adjacency();
    let rx = u.reducing_closure(ix);
    let ry = u.reducing_closure(iy);
    let sim_of_rx: HashSet<usize> = rx.iter().map(|&i| adj.sim_component[i]).collect();
    ry.iter().any(|&i| sim_of_rx.contains(&adj.sim_component[i]))
}

/// Outcome of a bulk confluence check: how many pairs were examined and
/// which of them failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfluenceReport {
    pub pairs_checked: usize,
    pub counterexamples: Vec<(SyllableWord, SyllableWord)>,
}

impl ConfluenceReport {
    pub fn is_clean(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Asserts almost confluence for every equivalent pair with norm at most
/// `budget`; the budget should stay within half the universe norm cap so
/// boundary truncation cannot fabricate failures.
pub fn check_almost_confluence(u: &BoundedUniverse, budget: usize) -> ConfluenceReport {
    let adj = u.adjacency();
    let mut by_component: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (idx, w) in u.words().iter().enumerate() {
        if w.norm() <= budget {
            by_component
                .entry(adj.full_component[idx])
                .or_default()
                .push(idx);
        }
    }
    let mut pairs_checked = 0;
    let mut counterexamples = Vec::new();
    for members in by_component.values() {
        for (pos, &ix) in members.iter().enumerate() {
            for &iy in &members[pos + 1..] {
                pairs_checked += 1;
                if !almost_confluent_indices(ix, iy, u) {
                    counterexamples.push((u.words[ix].clone(), u.words[iy].clone()));
                }
            }
        }
    }
    ConfluenceReport { pairs_checked, counterexamples }
}

/// Checks the critical-peak criterion: for every `w` with norm at most
/// `budget` and every pair of one-step successors `x ← w`, `w → y` or
/// `w ∼ y`, the pair `(x, y)` is almost confluent. Emptiness here implies
/// almost confluence of the whole system.
pub fn check_huet_criterion(u: &BoundedUniverse, budget: usize) -> ConfluenceReport {
    let adj = u.adjacency();
    let mut pairs_checked = 0;
    let mut counterexamples = Vec::new();
    for (idx, w) in u.words().iter().enumerate() {
        if w.norm() > budget {
            continue;
        }
        let reducing = &adj.reducing[idx];
        let equal = &adj.equal[idx];
        for &ix in reducing {
            for &iy in reducing.iter().chain(equal.iter()) {
                pairs_checked += 1;
                if !almost_confluent_indices(ix, iy, u) {
                    counterexamples.push((u.words[ix].clone(), u.words[iy].clone()));
                }
            }
        }
    }
    ConfluenceReport { pairs_checked, counterexamples }
}

/// Per-case outcome of [`verify_resolution_cases`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseReport {
    pub case_id: u8,
    pub instances: usize,
    pub failures: Vec<String>,
}

struct CaseContext<'a> {
    u: &'a BoundedUniverse,
    star_words: BTreeMap<VertexId, Vec<SyllableWord>>,
}

impl<'a> CaseContext<'a> {
    fn new(u: &'a BoundedUniverse) -> CaseContext<'a> {
        let p = u.presentation();
        let star_words = p
            .vertices()
            .map(|v| {
                let words: Vec<SyllableWord> = u
                    .words()
                    .iter()
                    .filter(|w| w.in_star(p, v))
                    .cloned()
                    .collect();
                (v, words)
            })
            .collect();
        CaseContext { u, star_words }
    }

    fn p(&self) -> &GraphProductPresentation {
        self.u.presentation()
    }

    /// Schema-1/2 application: merge the same-vertex syllables at `pu < pv`
    /// across the span strictly between them, validating the side
    /// conditions.
    fn merge(&self, w: &SyllableWord, pu: usize, pv: usize) -> Result<SyllableWord, String> {
        let su = &w.syllables()[pu];
        let sv = &w.syllables()[pv];
        if su.vertex() != sv.vertex() {
            return Err(format!("merge at ({pu},{pv}): vertex mismatch"));
        }
        if !w.slice(pu + 1..pv).in_star(self.p(), su.vertex()) {
            return Err(format!("merge at ({pu},{pv}): span not in star"));
        }
        let merged = Syllable::from_parts(su.vertex(), su.content().concat(sv.content()));
        let mut replacement = vec![merged];
        replacement.extend_from_slice(&w.syllables()[pu + 1..pv]);
        Ok(w.spliced(pu..pv + 1, &replacement))
    }

    /// Schema-3 application, validating nullity through the oracle.
    fn delete(&self, w: &SyllableWord, pos: usize) -> Result<SyllableWord, String> {
        let s = &w.syllables()[pos];
        let oracle = self.u.oracles().get(s.vertex()).map_err(|e| e.to_string())?;
        if !oracle.is_identity(s.content()).map_err(|e| e.to_string())? {
            return Err(format!("delete at {pos}: content not null"));
        }
        Ok(w.spliced(pos..pos + 1, &[]))
    }

    /// Schema-4 application, validating image equality through the oracle.
    fn replace(
        &self,
        w: &SyllableWord,
        pos: usize,
        content: &LetterWord,
    ) -> Result<SyllableWord, String> {
        let s = &w.syllables()[pos];
        let oracle = self.u.oracles().get(s.vertex()).map_err(|e| e.to_string())?;
        if !oracle.are_equal(s.content(), content).map_err(|e| e.to_string())? {
            return Err(format!("replace at {pos}: images differ"));
        }
        let replacement = Syllable::from_parts(s.vertex(), content.clone());
        Ok(w.spliced(pos..pos + 1, &[replacement]))
    }

    /// Schema-5 application: swap the adjacent syllables at `pos`, `pos+1`,
    /// validating the edge.
    fn swap(&self, w: &SyllableWord, pos: usize) -> Result<SyllableWord, String> {
        let a = w.syllables()[pos].clone();
        let b = w.syllables()[pos + 1].clone();
        if !self.p().adjacent(a.vertex(), b.vertex()) {
            return Err(format!("swap at {pos}: no edge"));
        }
        Ok(w.spliced(pos..pos + 2, &[b, a]))
    }
}

fn fail(
    report: &mut CaseReport,
    p: &GraphProductPresentation,
    w: &SyllableWord,
    message: String,
) {
    report.failures.push(format!("{}: {}", p.render_word(w), message));
}

/// Reproduces the critical-pair resolution case analysis: each case
/// enumerates every in-universe instantiation of its pattern and asserts the
/// exact resolution path, consulting the oracles for every side condition.
///
/// 1. merge/merge overlap `[u]P[v]Q[w]`;
/// 2. merge vs delete on `[u]P[v]` (null right content, then null left);
/// 3. merge vs content replacement on `[u]P[v]`;
/// 4. delete vs content replacement on a null syllable;
/// 5. delete vs edge swap on `[u][v]`;
/// 6. merge vs edge swap around `[u]P[v]` (overlap on either side).
pub fn verify_resolution_cases(u: &BoundedUniverse) -> Result<Vec<CaseReport>, ThueError> {
    let ctx = CaseContext::new(u);
    let reports = vec![
        case_merge_merge(&ctx),
        case_merge_vs_delete(&ctx),
        case_merge_vs_replace(&ctx),
        case_delete_vs_replace(&ctx),
        case_delete_vs_swap(&ctx),
        case_merge_vs_swap(&ctx),
    ];
    for r in &reports {
        if r.instances == 0 {
            return Err(ThueError::EmptyInstantiation { case_id: r.case_id });
        }
    }
    Ok(reports)
}

fn case_merge_merge(ctx: &CaseContext<'_>) -> CaseReport {
    let mut report = CaseReport { case_id: 1, instances: 0, failures: Vec::new() };
    let u = ctx.u;
    let p = ctx.p();
    for i in p.vertices() {
        for a in u.contents(i) {
            for b in u.contents(i) {
                for c in u.contents(i) {
                    let base = a.word.len() + b.word.len() + c.word.len();
                    if base > u.max_norm() {
                        continue;
                    }
                    for span_p in &ctx.star_words[&i] {
                        for span_q in &ctx.star_words[&i] {
                            if base + span_p.norm() + span_q.norm() > u.max_norm() {
                                continue;
                            }
                            report.instances += 1;
                            let mut syllables = vec![u.syllable(i, &a.word)];
                            syllables.extend_from_slice(span_p.syllables());
                            syllables.push(u.syllable(i, &b.word));
                            syllables.extend_from_slice(span_q.syllables());
                            syllables.push(u.syllable(i, &c.word));
                            let w = SyllableWord::new(syllables);
                            let pu = 0;
                            let pv = 1 + span_p.len();
                            let pw = 2 + span_p.len() + span_q.len();
                            let outcome = (|| -> Result<(), String> {
                                let left1 = ctx.merge(&w, pu, pv)?;
                                let left2 =
                                    ctx.merge(&left1, 0, 1 + span_p.len() + span_q.len())?;
                                let right1 = ctx.merge(&w, pv, pw)?;
                                let right2 = ctx.merge(&right1, 0, 1 + span_p.len())?;
                                if left2 != right2 {
                                    return Err(format!(
                                        "branches diverge: {} vs {}",
                                        p.render_word(&left2),
                                        p.render_word(&right2)
                                    ));
                                }
                                Ok(())
                            })();
                            if let Err(e) = outcome {
                                fail(&mut report, p, &w, e);
                            }
                        }
                    }
                }
            }
        }
    }
    report
}

fn case_merge_vs_delete(ctx: &CaseContext<'_>) -> CaseReport {
    let mut report = CaseReport { case_id: 2, instances: 0, failures: Vec::new() };
    let u = ctx.u;
    let p = ctx.p();
    for i in p.vertices() {
        let oracle = u.oracles().get(i).expect("oracle exists");
        for a in u.contents(i) {
            for b in u.contents(i) {
                let base = a.word.len() + b.word.len();
                for span in &ctx.star_words[&i] {
                    if base + span.norm() > u.max_norm() {
                        continue;
                    }
                    let mut syllables = vec![u.syllable(i, &a.word)];
                    syllables.extend_from_slice(span.syllables());
                    syllables.push(u.syllable(i, &b.word));
                    let w = SyllableWord::new(syllables);
                    let pv = 1 + span.len();
                    let merged = a.word.concat(&b.word);
                    if b.null {
                        // Merge vs deleting the right syllable: the merged
                        // content still has the left image, so one content
                        // replacement rejoins the branches.
                        report.instances += 1;
                        let outcome = (|| -> Result<(), String> {
                            let left = ctx.merge(&w, 0, pv)?;
                            let right = ctx.delete(&w, pv)?;
                            if !oracle.are_equal(&merged, &a.word).map_err(|e| e.to_string())? {
                                return Err("merged image differs from left content".into());
                            }
                            let rejoined = ctx.replace(&left, 0, &a.word)?;
                            if rejoined != right {
                                return Err(format!(
                                    "replacement missed: {} vs {}",
                                    p.render_word(&rejoined),
                                    p.render_word(&right)
                                ));
                            }
                            Ok(())
                        })();
                        if let Err(e) = outcome {
                            fail(&mut report, p, &w, e);
                        }
                    }
                    if a.null {
                        // Merge vs deleting the left syllable: replace the
                        // merged content by the right one, then carry it
                        // across the span with swaps.
                        report.instances += 1;
                        let outcome = (|| -> Result<(), String> {
                            let left = ctx.merge(&w, 0, pv)?;
                            let right = ctx.delete(&w, 0)?;
                            if !oracle.are_equal(&merged, &b.word).map_err(|e| e.to_string())? {
                                return Err("merged image differs from right content".into());
                            }
                            let mut carried = ctx.replace(&left, 0, &b.word)?;
                            for pos in 0..span.len() {
                                carried = ctx.swap(&carried, pos)?;
                            }
                            if carried != right {
                                return Err(format!(
                                    "swaps missed: {} vs {}",
                                    p.render_word(&carried),
                                    p.render_word(&right)
                                ));
                            }
                            Ok(())
                        })();
                        if let Err(e) = outcome {
                            fail(&mut report, p, &w, e);
                        }
                    }
                }
            }
        }
    }
    report
}

fn case_merge_vs_replace(ctx: &CaseContext<'_>) -> CaseReport {
    let mut report = CaseReport { case_id: 3, instances: 0, failures: Vec::new() };
    let u = ctx.u;
    let p = ctx.p();
    for i in p.vertices() {
        for a in u.contents(i) {
            for b in u.contents(i) {
                let base = a.word.len() + b.word.len();
                for span in &ctx.star_words[&i] {
                    if base + span.norm() > u.max_norm() {
                        continue;
                    }
                    let mut syllables = vec![u.syllable(i, &a.word)];
                    syllables.extend_from_slice(span.syllables());
                    syllables.push(u.syllable(i, &b.word));
                    let w = SyllableWord::new(syllables);
                    let pv = 1 + span.len();
                    for other in u.contents(i) {
                        // Replacing the left content.
                        if other.class_id == a.class_id {
                            report.instances += 1;
                            let outcome = (|| -> Result<(), String> {
                                let merged = ctx.merge(&w, 0, pv)?;
                                let replaced = ctx.replace(&w, 0, &other.word)?;
                                let remerged = ctx.merge(&replaced, 0, pv)?;
                                let rejoined = ctx.replace(
                                    &merged,
                                    0,
                                    &other.word.concat(&b.word),
                                )?;
                                if rejoined != remerged {
                                    return Err(format!(
                                        "branches diverge: {} vs {}",
                                        p.render_word(&rejoined),
                                        p.render_word(&remerged)
                                    ));
                                }
                                Ok(())
                            })();
                            if let Err(e) = outcome {
                                fail(&mut report, p, &w, e);
                            }
                        }
                        // Replacing the right content.
                        if other.class_id == b.class_id {
                            report.instances += 1;
                            let outcome = (|| -> Result<(), String> {
                                let merged = ctx.merge(&w, 0, pv)?;
                                let replaced = ctx.replace(&w, pv, &other.word)?;
                                let remerged = ctx.merge(&replaced, 0, pv)?;
                                let rejoined = ctx.replace(
                                    &merged,
                                    0,
                                    &a.word.concat(&other.word),
                                )?;
                                if rejoined != remerged {
                                    return Err(format!(
                                        "branches diverge: {} vs {}",
                                        p.render_word(&rejoined),
                                        p.render_word(&remerged)
                                    ));
                                }
                                Ok(())
                            })();
                            if let Err(e) = outcome {
                                fail(&mut report, p, &w, e);
                            }
                        }
                    }
                }
            }
        }
    }
    report
}

fn case_delete_vs_replace(ctx: &CaseContext<'_>) -> CaseReport {
    let mut report = CaseReport { case_id: 4, instances: 0, failures: Vec::new() };
    let u = ctx.u;
    let p = ctx.p();
    for i in p.vertices() {
        for a in u.contents(i) {
            if !a.null {
                continue;
            }
            for other in u.contents(i) {
                if other.class_id != a.class_id {
                    continue;
                }
                report.instances += 1;
                let w = SyllableWord::new(vec![u.syllable(i, &a.word)]);
                let outcome = (|| -> Result<(), String> {
                    let deleted = ctx.delete(&w, 0)?;
                    let replaced = ctx.replace(&w, 0, &other.word)?;
                    let also_deleted = ctx.delete(&replaced, 0)?;
                    if !deleted.is_empty() || !also_deleted.is_empty() {
                        return Err("branches do not reach the empty word".into());
                    }
                    Ok(())
                })();
                if let Err(e) = outcome {
                    fail(&mut report, p, &w, e);
                }
            }
        }
    }
    report
}

fn case_delete_vs_swap(ctx: &CaseContext<'_>) -> CaseReport {
    let mut report = CaseReport { case_id: 5, instances: 0, failures: Vec::new() };
    let u = ctx.u;
    let p = ctx.p();
    for i in p.vertices() {
        for a in u.contents(i) {
            if !a.null {
                continue;
            }
            for &j in p.star(i).expect("vertex exists") {
                for b in u.contents(j) {
                    if a.word.len() + b.word.len() > u.max_norm() {
                        continue;
                    }
                    report.instances += 1;
                    let w = SyllableWord::new(vec![
                        u.syllable(i, &a.word),
                        u.syllable(j, &b.word),
                    ]);
                    let outcome = (|| -> Result<(), String> {
                        let deleted = ctx.delete(&w, 0)?;
                        let swapped = ctx.swap(&w, 0)?;
                        let deleted_late = ctx.delete(&swapped, 1)?;
                        if deleted != deleted_late {
                            return Err(format!(
                                "branches diverge: {} vs {}",
                                p.render_word(&deleted),
                                p.render_word(&deleted_late)
                            ));
                        }
                        Ok(())
                    })();
                    if let Err(e) = outcome {
                        fail(&mut report, p, &w, e);
                    }
                }
            }
        }
    }
    report
}

fn case_merge_vs_swap(ctx: &CaseContext<'_>) -> CaseReport {
    let mut report = CaseReport { case_id: 6, instances: 0, failures: Vec::new() };
    let u = ctx.u;
    let p = ctx.p();
    for i in p.vertices() {
        for a in u.contents(i) {
            for b in u.contents(i) {
                let base = a.word.len() + b.word.len();
                for span in &ctx.star_words[&i] {
                    for &j in p.star(i).expect("vertex exists") {
                        for c in u.contents(j) {
                            if base + span.norm() + c.word.len() > u.max_norm() {
                                continue;
                            }
                            // Overlap on the right: [u]P[v][w].
                            report.instances += 1;
                            let mut syllables = vec![u.syllable(i, &a.word)];
                            syllables.extend_from_slice(span.syllables());
                            syllables.push(u.syllable(i, &b.word));
                            syllables.push(u.syllable(j, &c.word));
                            let w = SyllableWord::new(syllables);
                            let pv = 1 + span.len();
                            let outcome = (|| -> Result<(), String> {
                                let merged = ctx.merge(&w, 0, pv)?;
                                let swapped = ctx.swap(&w, pv)?;
                                let remerged = ctx.merge(&swapped, 0, pv + 1)?;
                                if merged != remerged {
                                    return Err(format!(
                                        "right overlap diverges: {} vs {}",
                                        p.render_word(&merged),
                                        p.render_word(&remerged)
                                    ));
                                }
                                Ok(())
                            })();
                            if let Err(e) = outcome {
                                fail(&mut report, p, &w, e);
                            }
                            // Overlap on the left: [w][u]P[v].
                            report.instances += 1;
                            let mut syllables = vec![u.syllable(j, &c.word)];
                            syllables.push(u.syllable(i, &a.word));
                            syllables.extend_from_slice(span.syllables());
                            syllables.push(u.syllable(i, &b.word));
                            let w = SyllableWord::new(syllables);
                            let outcome = (|| -> Result<(), String> {
                                let merged = ctx.merge(&w, 1, pv + 1)?;
                                let swapped = ctx.swap(&w, 0)?;
                                let remerged = ctx.merge(&swapped, 0, pv + 1)?;
                                let rejoined = ctx.swap(&merged, 0)?;
                                if rejoined != remerged {
                                    return Err(format!(
                                        "left overlap diverges: {} vs {}",
                                        p.render_word(&rejoined),
                                        p.render_word(&remerged)
                                    ));
                                }
                                Ok(())
                            })();
                            if let Err(e) = outcome {
                                fail(&mut report, p, &w, e);
                            }
                        }
                    }
                }
            }
        }
    }
    report
}
