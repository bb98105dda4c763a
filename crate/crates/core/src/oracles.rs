//! Per-vertex-group services: deciding whether an i-word maps to the
//! identity, comparing two i-words, inverting via the bar involution, and
//! producing brute-force area certificates for null i-words.
//!
//! Three backends cover the desk-scale groups exactly: a finite
//! multiplication table, a free group (bar partners are inverses), and a
//! free abelian group (zero exponent sum per bar orbit). The area search is
//! a breadth-first walk over freely reduced words where one step replaces a
//! subword `l` by `r` for some factorization `relator = l·r^{-1}` taken over
//! all cyclic permutations and inverses of all relators; free reduction is
//! free of charge, so the step count is the exact conjugate count.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::freegroup::{ConjugatedRelator, FreeWord, Sign};
use crate::presentations::{GraphProductPresentation, VertexId};
use crate::words::{Letter, LetterWord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("letter {letter:?} is not in the alphabet of vertex {vertex}")]
    ForeignLetter { vertex: VertexId, letter: String },
    #[error("word is not the identity; no area certificate exists")]
    NotNull,
    #[error("area search exceeded its caps (max word length {max_len}, max states {max_states})")]
    AreaCapExceeded { max_len: usize, max_states: usize },
    #[error("bad finite table: {0}")]
    BadTable(String),
    #[error("backend disagrees with relator {relator_index} of vertex {vertex}")]
    InconsistentBackend { vertex: VertexId, relator_index: usize },
    #[error("no oracle for vertex {0}")]
    MissingOracle(VertexId),
}

/// Caps for the breadth-first area search. The word-length cap is relative
/// to the target word; the state cap is absolute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchCaps {
    pub len_multiplier: usize,
    pub max_states: usize,
}

impl Default for SearchCaps {
    fn default() -> Self {
        SearchCaps { len_multiplier: 3, max_states: 1_000_000 }
    }
}

/// Unvalidated backend description, as read from an input document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BackendSpec {
    Table(TableSpec),
    Free,
    Abelian,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableSpec {
    pub order: usize,
    /// Row-major `order × order` products.
    pub entries: Vec<usize>,
    pub gen_map: Vec<(String, usize)>,
}

/// Validated finite multiplication table with identity at index 0.
#[derive(Debug, Clone)]
pub struct FiniteTable {
    order: usize,
    table: Vec<usize>,
    gen_of: HashMap<Letter, usize>,
}

impl FiniteTable {
    fn product(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    fn inverse_of(&self, a: usize) -> usize {
        (0..self.order).find(|&b| self.product(a, b) == 0).unwrap()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Image of a word under the generator map.
    pub fn eval(&self, letters: &[Letter]) -> Option<usize> {
        let mut acc = 0;
        for l in letters {
            acc = self.product(acc, *self.gen_of.get(l)?);
        }
        Some(acc)
    }
}

#[derive(Debug, Clone)]
enum Backend {
    Table(FiniteTable),
    Free,
    Abelian,
}

/// Rewrite rule for the area search: replacing `lhs` by `rhs` multiplies the
/// ambient word by one conjugate of the indexed relator.
#[derive(Debug, Clone)]
struct AreaRule {
    lhs: FreeWord,
    rhs: FreeWord,
    rotation_conj: FreeWord,
    relator_index: usize,
    sign: Sign,
}

/// Word-problem services for a single vertex group.
#[derive(Debug, Clone)]
pub struct VertexOracle {
    vertex: VertexId,
    alphabet: HashMap<Letter, ()>,
    bar: HashMap<Letter, Letter>,
    relators: Vec<LetterWord>,
    backend: Backend,
    caps: SearchCaps,
    rules: Vec<AreaRule>,
}

impl VertexOracle {
    pub fn new(
        p: &GraphProductPresentation,
        vertex: VertexId,
        spec: &BackendSpec,
        caps: SearchCaps,
    ) -> Result<VertexOracle, OracleError> {
        let group = p
            .group(vertex)
            .map_err(|_| OracleError::MissingOracle(vertex))?;
        let alphabet: HashMap<Letter, ()> = group.alphabet().iter().map(|&l| (l, ())).collect();
        let bar: HashMap<Letter, Letter> =
            group.alphabet().iter().map(|&l| (l, p.bar(l))).collect();
        let backend = match spec {
            BackendSpec::Table(t) => Backend::Table(validate_table(p, vertex, t, &bar)?),
            BackendSpec::Free => Backend::Free,
            BackendSpec::Abelian => Backend::Abelian,
        };
        let relators = group.relators().to_vec();
        let rules = build_rules(&relators);
        let oracle = VertexOracle {
            vertex,
            alphabet,
            bar,
            relators,
            backend,
            caps,
            rules,
        };
        // The declared relators must be null in the backend, or every
        // downstream certificate would be built on a lie.
        for (i, r) in oracle.relators.iter().enumerate() {
            if !oracle.is_identity(r)? {
                return Err(OracleError::InconsistentBackend {
                    vertex,
                    relator_index: i,
                });
            }
        }
        Ok(oracle)
    }

    pub fn vertex(&self) -> VertexId {
        self.vertex
    }

    pub fn relators(&self) -> &[LetterWord] {
        &self.relators
    }

    pub fn caps(&self) -> SearchCaps {
        self.caps
    }

    fn check_letters(&self, u: &LetterWord) -> Result<(), OracleError> {
        for &l in u.letters() {
            if !self.alphabet.contains_key(&l) {
                return Err(OracleError::ForeignLetter {
                    vertex: self.vertex,
                    letter: format!("#{}", l.index()),
                });
            }
        }
        Ok(())
    }

    /// Reverse of `u` with bar applied letterwise; a monoid word for the
    /// group inverse.
    pub fn bar_word(&self, u: &LetterWord) -> Result<LetterWord, OracleError> {
        self.check_letters(u)?;
        Ok(u.letters().iter().rev().map(|l| self.bar[l]).collect())
    }

    /// Whether the word maps to the identity of the vertex group.
    pub fn is_identity(&self, u: &LetterWord) -> Result<bool, OracleError> {
        self.check_letters(u)?;
        Ok(match &self.backend {
            Backend::Table(t) => t.eval(u.letters()).unwrap() == 0,
            Backend::Free => {
                let mut stack: Vec<Letter> = Vec::new();
                for &l in u.letters() {
                    if stack.last() == Some(&self.bar[&l]) {
                        stack.pop();
                    } else {
                        stack.push(l);
                    }
                }
                stack.is_empty()
            }
            Backend::Abelian => {
                let mut sums: BTreeMap<Letter, i64> = BTreeMap::new();
                for &l in u.letters() {
                    let bar = self.bar[&l];
                    if bar == l {
                        continue; // order-two orbit collapses in a torsion-free group
                    }
                    let rep = l.min(bar);
                    *sums.entry(rep).or_insert(0) += if l == rep { 1 } else { -1 };
                }
                sums.values().all(|&s| s == 0)
            }
        })
    }

    /// Whether `u` and `v` map to the same element.
    pub fn are_equal(&self, u: &LetterWord, v: &LetterWord) -> Result<bool, OracleError> {
        self.is_identity(&u.concat(&self.bar_word(v)?))
    }

    /// Minimal-step conjugate-product certificate for a null word, found by
    /// breadth-first search. The product of the items, freely reduced in the
    /// plain free group on this alphabet, equals the target word.
    pub fn area_certificate(&self, u: &LetterWord) -> Result<VertexCertificate, OracleError> {
        if !self.is_identity(u)? {
            return Err(OracleError::NotNull);
        }
        if u.is_empty() {
            return Ok(VertexCertificate { items: Vec::new() });
        }
        let max_len = self.caps.len_multiplier * u.len();
        let max_states = self.caps.max_states;
        let cap_error = OracleError::AreaCapExceeded { max_len, max_states };

        let start = FreeWord::from_positive(u);
        let mut visited: HashSet<FreeWord> = HashSet::new();
        let mut parent: HashMap<FreeWord, (FreeWord, ConjugatedRelator)> = HashMap::new();
        let mut queue: VecDeque<FreeWord> = VecDeque::new();
        visited.insert(start.clone());
        queue.push_back(start.clone());
        let mut states = 1usize;

        while let Some(word) = queue.pop_front() {
            if word.is_empty() {
                // Walk back to the start, collecting one item per step.
                let mut items = Vec::new();
                let mut cur = word;
                while cur != start {
                    let (prev, item) = parent.remove(&cur).unwrap();
                    items.push(item);
                    cur = prev;
                }
                items.reverse();
                return Ok(VertexCertificate { items });
            }
            for rule in &self.rules {
                let positions: Vec<usize> = if rule.lhs.is_empty() {
                    (0..=word.len()).collect()
                } else {
                    word.find_occurrences(&rule.lhs)
                };
                for pos in positions {
                    let next = word.replace_at(pos, rule.lhs.len(), &rule.rhs);
                    if next.len() > max_len || visited.contains(&next) {
                        continue;
                    }
                    states += 1;
                    if states > max_states {
                        return Err(cap_error);
                    }
                    let prefix = FreeWord::from_letters(word.letters()[..pos].iter().copied());
                    let item = ConjugatedRelator {
                        conjugator: prefix.concat(&rule.rotation_conj),
                        relator_index: rule.relator_index,
                        sign: rule.sign,
                    };
                    visited.insert(next.clone());
                    parent.insert(next.clone(), (word.clone(), item));
                    queue.push_back(next);
                }
            }
        }
        Err(cap_error)
    }
}

/// Area certificate over a single vertex's relator list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexCertificate {
    pub items: Vec<ConjugatedRelator>,
}

impl VertexCertificate {
    /// The free-group product of the items, freely reduced.
    pub fn product(&self, relators: &[LetterWord]) -> FreeWord {
        let mut acc = FreeWord::identity();
        for item in &self.items {
            let mut r = FreeWord::from_positive(&relators[item.relator_index]);
            if item.sign == Sign::Minus {
                r = r.inverse();
            }
            acc = acc.concat(&item.conjugator.conjugate(&r));
        }
        acc
    }
}

fn build_rules(relators: &[LetterWord]) -> Vec<AreaRule> {
    let mut rules = Vec::new();
    for (relator_index, r) in relators.iter().enumerate() {
        let positive = FreeWord::from_positive(r);
        for (word, sign) in [(positive.clone(), Sign::Plus), (positive.inverse(), Sign::Minus)] {
            for k in 0..word.len() {
                let (rotated, rotation_conj) = word.rotated(k);
                for split in 0..=rotated.len() {
                    let lhs = FreeWord::from_letters(rotated.letters()[..split].iter().copied());
                    let rhs =
                        FreeWord::from_letters(rotated.letters()[split..].iter().copied()).inverse();
                    rules.push(AreaRule {
                        lhs,
                        rhs,
                        rotation_conj: rotation_conj.clone(),
                        relator_index,
                        sign,
                    });
                }
            }
        }
    }
    rules
}

fn validate_table(
    p: &GraphProductPresentation,
    vertex: VertexId,
    spec: &TableSpec,
    bar: &HashMap<Letter, Letter>,
) -> Result<FiniteTable, OracleError> {
    let m = spec.order;
    if m == 0 {
        return Err(OracleError::BadTable("order must be at least 1".into()));
    }
    if spec.entries.len() != m * m {
        return Err(OracleError::BadTable(format!(
            "expected {} entries, got {}",
            m * m,
            spec.entries.len()
        )));
    }
    if let Some(&bad) = spec.entries.iter().find(|&&e| e >= m) {
        return Err(OracleError::BadTable(format!("entry {bad} out of range")));
    }
    let table = FiniteTable {
        order: m,
        table: spec.entries.clone(),
        gen_of: HashMap::new(),
    };
    for i in 0..m {
        if table.product(0, i) != i || table.product(i, 0) != i {
            return Err(OracleError::BadTable("element 0 is not an identity".into()));
        }
    }
    for i in 0..m {
        let row: HashSet<usize> = (0..m).map(|j| table.product(i, j)).collect();
        let col: HashSet<usize> = (0..m).map(|j| table.product(j, i)).collect();
        if row.len() != m || col.len() != m {
            return Err(OracleError::BadTable(format!(
                "row or column {i} is not a permutation"
            )));
        }
    }
    if m <= 32 {
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    if table.product(table.product(a, b), c) != table.product(a, table.product(b, c)) {
                        return Err(OracleError::BadTable(format!(
                            "not associative at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
    }
    let mut gen_of = HashMap::new();
    for (name, elem) in &spec.gen_map {
        let letter = p
            .letter(name)
            .ok_or_else(|| OracleError::BadTable(format!("unknown letter {name:?} in map")))?;
        if !bar.contains_key(&letter) {
            return Err(OracleError::ForeignLetter {
                vertex,
                letter: name.clone(),
            });
        }
        if *elem >= m {
            return Err(OracleError::BadTable(format!("mapped element {elem} out of range")));
        }
        gen_of.insert(letter, *elem);
    }
    for &l in bar.keys() {
        if !gen_of.contains_key(&l) {
            return Err(OracleError::BadTable(format!(
                "letter {:?} has no table element",
                p.letter_name(l)
            )));
        }
    }
    let table = FiniteTable { gen_of, ..table };
    for (&l, &partner) in bar {
        let g = table.gen_of[&l];
        let h = table.gen_of[&partner];
        if table.inverse_of(g) != h {
            return Err(OracleError::BadTable(format!(
                "bar partner of {:?} is not its table inverse",
                p.letter_name(l)
            )));
        }
    }
    Ok(table)
}

/// One oracle per vertex of a presentation.
#[derive(Debug, Clone)]
pub struct ProductOracles {
    oracles: BTreeMap<VertexId, VertexOracle>,
}

impl ProductOracles {
    pub fn new(
        p: &GraphProductPresentation,
        specs: &BTreeMap<VertexId, BackendSpec>,
        caps: SearchCaps,
    ) -> Result<ProductOracles, OracleError> {
        let mut oracles = BTreeMap::new();
        for v in p.vertices() {
            let spec = specs.get(&v).ok_or(OracleError::MissingOracle(v))?;
            oracles.insert(v, VertexOracle::new(p, v, spec, caps)?);
        }
        Ok(ProductOracles { oracles })
    }

    pub fn get(&self, v: VertexId) -> Result<&VertexOracle, OracleError> {
        self.oracles.get(&v).ok_or(OracleError::MissingOracle(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    fn letters(p: &GraphProductPresentation, name: &str, n: usize) -> LetterWord {
        LetterWord::new(vec![p.letter(name).unwrap(); n])
    }

    #[test]
    fn bar_word_examples() {
        let (p, oracles) = fixtures::f1();
        let o = oracles.get(VertexId(1)).unwrap();
        assert_eq!(o.bar_word(&letters(&p, "a", 2)).unwrap(), letters(&p, "a", 2));
        assert_eq!(o.bar_word(&LetterWord::empty()).unwrap(), LetterWord::empty());

        let (pz, oz) = fixtures::free_z();
        let o = oz.get(VertexId(1)).unwrap();
        let xx = letters(&pz, "x", 2);
        let barred = o.bar_word(&xx).unwrap();
        assert_eq!(pz.render_letters(&barred), "X X");
        assert!(o.is_identity(&xx.concat(&barred)).unwrap());
    }

    #[test]
    fn bar_word_rejects_foreign_letters() {
        let (p, oracles) = fixtures::f1();
        let o = oracles.get(VertexId(1)).unwrap();
        assert!(matches!(
            o.bar_word(&letters(&p, "b", 1)),
            Err(OracleError::ForeignLetter { .. })
        ));
    }

    #[test]
    fn table_identity_examples() {
        let (p, oracles) = fixtures::f1();
        let o = oracles.get(VertexId(1)).unwrap();
        assert!(o.is_identity(&letters(&p, "a", 2)).unwrap());
        assert!(!o.is_identity(&letters(&p, "a", 3)).unwrap());
        assert!(o.is_identity(&LetterWord::empty()).unwrap());
    }

    #[test]
    fn identity_agrees_with_direct_table_fold() {
        // Independent evaluation: fold the generator images through the
        // 2-element table by hand.
        let (p, oracles) = fixtures::f1();
        for vertex in [VertexId(1), VertexId(2)] {
            let o = oracles.get(vertex).unwrap();
            let l = p.group(vertex).unwrap().alphabet()[0];
            for n in 0..=6usize {
                let w = LetterWord::new(vec![l; n]);
                let folded = (0..n).fold(0usize, |acc, _| [1, 0][acc]);
                assert_eq!(o.is_identity(&w).unwrap(), folded == 0, "n={n}");
            }
        }
    }

    #[test]
    fn equality_examples() {
        let (p, oracles) = fixtures::f1();
        let o = oracles.get(VertexId(1)).unwrap();
        assert!(o.are_equal(&letters(&p, "a", 1), &letters(&p, "a", 3)).unwrap());
        assert!(!o.are_equal(&letters(&p, "a", 1), &letters(&p, "a", 2)).unwrap());
        for n in 0..5 {
            let u = letters(&p, "a", n);
            assert!(o.are_equal(&u, &u).unwrap());
        }
    }

    #[test]
    fn free_backend_reduces_against_bar() {
        let (p, oracles) = fixtures::free_z();
        let o = oracles.get(VertexId(1)).unwrap();
        let x = p.letter("x").unwrap();
        let cap = p.letter("X").unwrap();
        assert!(o.is_identity(&LetterWord::new(vec![x, cap])).unwrap());
        assert!(o.is_identity(&LetterWord::new(vec![x, x, cap, cap])).unwrap());
        assert!(!o.is_identity(&LetterWord::new(vec![x, x])).unwrap());
    }

    #[test]
    fn abelian_backend_uses_exponent_sums() {
        let (p, oracles) = fixtures::free_abelian_rank2();
        let o = oracles.get(VertexId(1)).unwrap();
        let x = p.letter("x").unwrap();
        let cap_x = p.letter("X").unwrap();
        let y = p.letter("y").unwrap();
        let cap_y = p.letter("Y").unwrap();
        // x y X Y is null in the abelian group though not freely.
        assert!(o.is_identity(&LetterWord::new(vec![x, y, cap_x, cap_y])).unwrap());
        assert!(!o.is_identity(&LetterWord::new(vec![x, y, cap_y])).unwrap());
    }

    #[test]
    fn area_certificate_examples() {
        let (p, oracles) = fixtures::f1();
        let o = oracles.get(VertexId(1)).unwrap();

        let aa = letters(&p, "a", 2);
        let cert = o.area_certificate(&aa).unwrap();
        assert_eq!(cert.items.len(), 1);
        assert!(cert.items[0].conjugator.is_empty());
        assert_eq!(cert.items[0].relator_index, 0);
        assert_eq!(cert.items[0].sign, Sign::Plus);

        let a4 = letters(&p, "a", 4);
        assert_eq!(o.area_certificate(&a4).unwrap().items.len(), 2);

        assert!(o.area_certificate(&LetterWord::empty()).unwrap().items.is_empty());
    }

    #[test]
    fn area_certificate_rejects_non_null() {
        let (p, oracles) = fixtures::f1();
        let o = oracles.get(VertexId(1)).unwrap();
        assert_eq!(o.area_certificate(&letters(&p, "a", 3)), Err(OracleError::NotNull));
    }

    #[test]
    fn area_cap_is_reported() {
        let (p, raw_specs) = fixtures::f1_specs();
        let caps = SearchCaps { len_multiplier: 3, max_states: 2 };
        let oracles = ProductOracles::new(&p, &raw_specs, caps).unwrap();
        let o = oracles.get(VertexId(1)).unwrap();
        let result = o.area_certificate(&letters(&p, "a", 4));
        assert_eq!(
            result,
            Err(OracleError::AreaCapExceeded { max_len: 12, max_states: 2 })
        );
    }

    /// Every emitted certificate multiplies out, in the plain free group, to
    /// exactly the target word; and the item count never exceeds the square
    /// of the target length (the declared class of all fixtures).
    #[test]
    fn certificates_reduce_to_target_and_respect_declared_class() {
        for (p, oracles) in [fixtures::f1(), fixtures::f3()] {
            for v in p.vertices() {
                let o = oracles.get(v).unwrap();
                let l = p.group(v).unwrap().alphabet()[0];
                for n in 0..=6usize {
                    let u = LetterWord::new(vec![l; n]);
                    if !o.is_identity(&u).unwrap() {
                        continue;
                    }
                    let cert = o.area_certificate(&u).unwrap();
                    assert_eq!(
                        cert.product(o.relators()),
                        FreeWord::from_positive(&u),
                        "vertex {v}, n={n}"
                    );
                    assert!(cert.items.len() as u64 <= (n as u64).pow(2));
                }
            }
        }
    }

    #[test]
    fn bad_tables_are_rejected() {
        let (p, mut specs) = fixtures::f1_specs();
        // Break associativity / identity by making row 0 shift.
        specs.insert(
            VertexId(1),
            BackendSpec::Table(TableSpec {
                order: 2,
                entries: vec![1, 0, 0, 1],
                gen_map: vec![("a".into(), 1)],
            }),
        );
        let err = ProductOracles::new(&p, &specs, SearchCaps::default()).unwrap_err();
        assert!(matches!(err, OracleError::BadTable(_)));

        let (_, mut specs) = fixtures::f1_specs();
        specs.insert(
            VertexId(1),
            BackendSpec::Table(TableSpec {
                order: 2,
                entries: vec![0, 1, 1, 1],
                gen_map: vec![("a".into(), 1)],
            }),
        );
        let err = ProductOracles::new(&p, &specs, SearchCaps::default()).unwrap_err();
        assert!(matches!(err, OracleError::BadTable(_)));
    }

    /// Whatever the backend, a word followed by its bar reversal is null.
    #[test]
    fn word_times_bar_word_is_always_null() {
        let fixtures: Vec<(GraphProductPresentation, ProductOracles)> = vec![
            fixtures::f1(),
            fixtures::free_z(),
            fixtures::free_abelian_rank2(),
        ];
        for (p, oracles) in &fixtures {
            for v in p.vertices() {
                let o = oracles.get(v).unwrap();
                let alphabet = p.group(v).unwrap().alphabet().to_vec();
                let mut words = vec![Vec::new()];
                let mut layer = vec![Vec::new()];
                for _ in 0..3 {
                    let mut next = Vec::new();
                    for w in &layer {
                        for &l in &alphabet {
                            let mut e = w.clone();
                            e.push(l);
                            next.push(e);
                        }
                    }
                    words.extend(next.iter().cloned());
                    layer = next;
                }
                for w in words {
                    let u = LetterWord::new(w);
                    let product = u.concat(&o.bar_word(&u).unwrap());
                    assert!(o.is_identity(&product).unwrap(), "vertex {v}");
                }
            }
        }
    }

    #[test]
    fn non_associative_loops_are_rejected() {
        // An order-5 loop with identity whose rows and columns are
        // permutations but (1·1)·2 ≠ 1·(1·2).
        use crate::isofunctions::FunctionClass;
        use crate::presentations::{validate_presentation, RawGroup, RawPresentation};
        let raw = RawPresentation {
            vertices: vec![1],
            edges: vec![],
            groups: vec![RawGroup {
                vertex: 1,
                gens: vec!["a".into()],
                bar_pairs: vec![("a".into(), "a".into())],
                relators: vec![],
                iso: FunctionClass::Polynomial(2),
            }],
        };
        let p = validate_presentation(&raw).unwrap();
        let entries = vec![
            0, 1, 2, 3, 4, //
            1, 0, 3, 4, 2, //
            2, 3, 4, 0, 1, //
            3, 4, 1, 2, 0, //
            4, 2, 0, 1, 3,
        ];
        let specs: BTreeMap<VertexId, BackendSpec> = [(
            VertexId(1),
            BackendSpec::Table(TableSpec {
                order: 5,
                entries,
                gen_map: vec![("a".into(), 1)],
            }),
        )]
        .into_iter()
        .collect();
        let err = ProductOracles::new(&p, &specs, SearchCaps::default()).unwrap_err();
        assert!(
            matches!(&err, OracleError::BadTable(reason) if reason.contains("associative")),
            "{err:?}"
        );
    }

    #[test]
    fn backend_must_satisfy_the_relators() {
        // Relator aa with bar(a) = A is not null in the free group on a, so
        // declaring a free backend for it is rejected.
        use crate::isofunctions::FunctionClass;
        use crate::presentations::{validate_presentation, RawGroup, RawPresentation};
        let raw = RawPresentation {
            vertices: vec![1],
            edges: vec![],
            groups: vec![RawGroup {
                vertex: 1,
                gens: vec!["a".into(), "A".into()],
                bar_pairs: vec![("a".into(), "A".into())],
                relators: vec!["aa".into()],
                iso: FunctionClass::Polynomial(2),
            }],
        };
        let p = validate_presentation(&raw).unwrap();
        let specs: BTreeMap<VertexId, BackendSpec> =
            [(VertexId(1), BackendSpec::Free)].into_iter().collect();
        let err = ProductOracles::new(&p, &specs, SearchCaps::default()).unwrap_err();
        assert_eq!(
            err,
            OracleError::InconsistentBackend { vertex: VertexId(1), relator_index: 0 }
        );
    }

    proptest! {
        #[test]
        fn bar_word_is_an_involution(spec in proptest::collection::vec(proptest::bool::ANY, 0..10)) {
            let (p, oracles) = fixtures::free_z();
            let o = oracles.get(VertexId(1)).unwrap();
            let x = p.letter("x").unwrap();
            let cap = p.letter("X").unwrap();
            let u = LetterWord::new(spec.iter().map(|&b| if b { x } else { cap }).collect());
            prop_assert_eq!(o.bar_word(&o.bar_word(&u).unwrap()).unwrap(), u);
        }
    }
}
