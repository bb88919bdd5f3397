//! Group-level checks: level transitivity, the first-level fractality
//! criterion, nucleus search, non-contraction certificates and torsion scans.

use std::collections::{HashMap, HashSet, VecDeque};

use rayon::prelude::*;

use crate::decision::{Decider, InfiniteOrderCertificate, OrderResult};
use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::word::{Letter, Word};
use crate::wreath::{Portrait, Vertex};

/// Largest level size the orbit computation will visit.
pub const DEFAULT_ORBIT_BUDGET: u64 = 1 << 26;
/// Largest number of raw words a torsion scan may enumerate.
pub const DEFAULT_SCAN_BUDGET: u64 = 50_000_000;
/// Depth of the portrait fingerprint used to bucket nucleus candidates.
pub const FINGERPRINT_DEPTH: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitReport {
    pub level: usize,
    pub orbit_size: u64,
    pub level_size: u64,
}

impl OrbitReport {
    pub fn transitive(&self) -> bool {
        self.orbit_size == self.level_size
    }
}

/// Orbit of `1^n` under the generators, by breadth-first closure over
/// base-`d` vertex codes.
pub fn level_orbit(pres: &Presentation, n: usize, budget: u64) -> Result<OrbitReport> {
    let d = pres.degree() as u64;
    let level_size = d
        .checked_pow(n as u32)
        .filter(|&s| s <= budget)
        .ok_or_else(|| Error::Budget(format!("level {n} of the {d}-adic tree exceeds {budget} vertices")))?;
    let encode = |v: &Vertex| v.0.iter().fold(0u64, |acc, &x| acc * d + (x as u64 - 1));
    let decode = |mut code: u64| {
        let mut path = vec![0usize; n];
        for slot in path.iter_mut().rev() {
            *slot = (code % d) as usize + 1;
            code /= d;
        }
        path
    };
    let gens: Vec<Word> = (0..pres.generator_count()).map(Word::generator).collect();
    let mut visited = vec![false; level_size as usize];
    let start = 0u64;
    visited[start as usize] = true;
    let mut frontier = vec![start];
    let mut size = 1u64;
    while !frontier.is_empty() {
        let images: Vec<u64> = frontier
            .par_iter()
            .flat_map_iter(|&code| {
                let path = decode(code);
                gens.iter()
                    .map(|g| encode(&pres.act_unchecked(g, &path)))
                    .collect::<Vec<_>>()
            })
            .collect();
        let mut next = Vec::new();
        for c in images {
            if !std::mem::replace(&mut visited[c as usize], true) {
                size += 1;
                next.push(c);
            }
        }
        frontier = next;
    }
    Ok(OrbitReport {
        level: n,
        orbit_size: size,
        level_size,
    })
}

pub fn level_transitive(pres: &Presentation, n: usize) -> Result<bool> {
    Ok(level_orbit(pres, n, DEFAULT_ORBIT_BUDGET)?.transitive())
}

/// First-level criterion: if the group is transitive on level one and the
/// sections at `x` of elements fixing `x` include every generator, the group
/// is fractal and level transitive. `witnesses` pairs a word with the 0-based
/// generator its section at `x` should equal.
pub fn fractality_check(dec: &Decider, witnesses: &[(Word, usize)], x: usize) -> Result<bool> {
    let pres = dec.presentation();
    if witnesses.is_empty() {
        return Err(Error::Precondition("no fractality witnesses".into()));
    }
    if x == 0 || x > pres.degree() {
        return Err(Error::PointOutOfRange {
            point: x,
            degree: pres.degree(),
        });
    }
    if !level_transitive(pres, 1)? {
        return Ok(false);
    }
    let mut covered = vec![false; pres.generator_count()];
    for (w, target) in witnesses {
        if *target >= covered.len() || pres.root_perm(w).apply(x) != x {
            return Ok(false);
        }
        let s = pres.level_one_section(w, x)?;
        if !dec.are_equal(&s, &Word::generator(*target)).is_yes() {
            return Ok(false);
        }
        covered[*target] = true;
    }
    Ok(covered.iter().all(|&c| c))
}

#[derive(Clone, Debug)]
pub enum NucleusOutcome {
    /// A set closed under first-level sections and inversion that absorbs
    /// the deep sections of all pairwise products.
    Contracting(Vec<Word>),
    BoundExceeded {
        /// Elements in the order they were added after initialization.
        evidence: Vec<Word>,
        size: usize,
        /// Added elements that fix a vertex and are their own section there.
        self_sections: Vec<(Word, Vertex)>,
    },
}

struct Candidates<'a, 'p> {
    dec: &'a Decider<'p>,
    words: Vec<Word>,
    buckets: HashMap<Portrait, Vec<usize>>,
    syntactic: HashSet<Word>,
}

impl Candidates<'_, '_> {
    fn contains(&self, w: &Word) -> bool {
        if self.syntactic.contains(w) {
            return true;
        }
        let fp = self.dec.presentation().portrait_unchecked(w, FINGERPRINT_DEPTH);
        self.buckets
            .get(&fp)
            .is_some_and(|b| b.iter().any(|&k| self.dec.are_equal(&self.words[k], w).is_yes()))
    }

    /// Adds `w` with its inverse and closes under first-level sections.
    /// Returns the number of new elements.
    fn insert_closed(&mut self, w: Word) -> usize {
        let pres = self.dec.presentation();
        let mut added = 0;
        let mut queue = VecDeque::from([w]);
        while let Some(u) = queue.pop_front() {
            if self.contains(&u) {
                continue;
            }
            let fp = pres.portrait_unchecked(&u, FINGERPRINT_DEPTH);
            self.buckets.entry(fp).or_default().push(self.words.len());
            self.syntactic.insert(u.clone());
            self.words.push(u.clone());
            added += 1;
            queue.push_back(u.inverse());
            let (sections, _) = pres.split(&u);
            queue.extend(sections);
        }
        added
    }
}

/// Distinct section words of `w` at level `depth`.
fn deep_sections(pres: &Presentation, w: &Word, depth: usize) -> HashSet<Word> {
    let mut level: HashSet<Word> = HashSet::from([w.clone()]);
    for _ in 0..depth {
        let mut next = HashSet::new();
        for s in &level {
            next.extend(pres.split(s).0);
        }
        level = next;
    }
    level
}

/// Semi-decision procedure for contraction.
pub fn nucleus_search(dec: &Decider, max_size: usize, max_depth: usize) -> NucleusOutcome {
    let pres = dec.presentation();
    let mut c = Candidates {
        dec,
        words: Vec::new(),
        buckets: HashMap::new(),
        syntactic: HashSet::new(),
    };
    c.insert_closed(Word::identity());
    for g in 0..pres.generator_count() {
        c.insert_closed(Word::generator(g));
    }
    let initial = c.words.len();
    let mut done = 0; // elements whose pairs with all earlier ones are processed
    let exceeded = |c: &Candidates| c.words.len() > max_size;
    'outer: while !exceeded(&c) {
        let frontier = c.words.len();
        if done == frontier {
            break;
        }
        for b in done..frontier {
            for a in 0..=b {
                for (u, v) in [(a, b), (b, a)] {
                    let product = &c.words[u] * &c.words[v];
                    let mut sections: Vec<Word> = deep_sections(pres, &product, max_depth).into_iter().collect();
                    sections.sort();
                    for s in sections {
                        c.insert_closed(s);
                        if exceeded(&c) {
                            break 'outer;
                        }
                    }
                }
            }
        }
        done = frontier;
    }
    if !exceeded(&c) {
        return NucleusOutcome::Contracting(c.words);
    }
    let evidence: Vec<Word> = c.words[initial..].to_vec();
    let self_sections = evidence
        .iter()
        .take(32)
        .filter_map(|w| match dec.fixed_path_self_section(w, 2) {
            Ok(Some(v)) => Some((w.clone(), v)),
            _ => None,
        })
        .collect();
    NucleusOutcome::BoundExceeded {
        size: c.words.len(),
        evidence,
        self_sections,
    }
}

/// Checks that a set of words is closed under first-level sections and
/// inversion, up to element equality.
pub fn is_closed_set(dec: &Decider, set: &[Word]) -> bool {
    let pres = dec.presentation();
    let member = |w: &Word| set.iter().any(|s| dec.are_equal(s, w).is_yes());
    set.iter()
        .all(|w| member(&w.inverse()) && pres.split(w).0.iter().all(member))
}

#[derive(Clone, Debug)]
pub struct NonContractionCertificate {
    pub element: Word,
    pub self_section_vertex: Vertex,
    pub infinite_order: InfiniteOrderCertificate,
    pub distinct_powers_checked: u64,
}

/// An element that fixes a vertex, is its own section there and has
/// infinite order puts all of its powers in any nucleus, so the group
/// cannot be contracting.
pub fn non_contraction_certificate(
    dec: &Decider,
    w: &Word,
    powers: u64,
    self_section_depth: usize,
) -> Result<Option<NonContractionCertificate>> {
    if powers < 2 {
        return Err(Error::Precondition("power check needs K >= 2".into()));
    }
    if dec.is_identity(w).is_yes() {
        return Ok(None);
    }
    let Some(vertex) = dec.fixed_path_self_section(w, self_section_depth)? else {
        return Ok(None);
    };
    let Some(cert) = dec.infinite_order_certificate(w, dec.default_certificate_depth())? else {
        return Ok(None);
    };
    // w^a = w^b for 1 <= a < b <= K iff w^(b-a) = 1.
    let mut power = w.clone();
    for _ in 1..powers {
        if !dec.is_identity(&power).is_no() {
            return Ok(None);
        }
        power.extend(w);
    }
    Ok(Some(NonContractionCertificate {
        element: w.clone(),
        self_section_vertex: vertex,
        infinite_order: cert,
        distinct_powers_checked: powers,
    }))
}

fn letter_key(l: Letter) -> (u32, bool) {
    (l.generator, !l.inverse)
}

fn rotations(w: &[Letter]) -> impl Iterator<Item = Vec<Letter>> + '_ {
    (0..w.len()).map(move |k| w[k..].iter().chain(&w[..k]).copied().collect())
}

/// True if `w` is cyclically reduced and least (inverse letters first) among
/// the rotations of itself and of its inverse.
pub fn is_conjugacy_representative(w: &Word) -> bool {
    if !w.is_cyclically_reduced() {
        return false;
    }
    let key = |v: &[Letter]| v.iter().map(|&l| letter_key(l)).collect::<Vec<_>>();
    let own = key(w.letters());
    let inv = w.inverse();
    let smallest = rotations(w.letters())
        .chain(rotations(inv.letters()))
        .all(|r| own <= key(&r));
    smallest
}

fn enumerate_reduced(gens: usize, len: usize, prefix: &mut Vec<Letter>, out: &mut Vec<Word>) {
    if prefix.len() == len {
        let w: Word = prefix.iter().copied().collect();
        if is_conjugacy_representative(&w) {
            out.push(w);
        }
        return;
    }
    for g in 0..gens {
        for l in [Letter::neg(g), Letter::pos(g)] {
            if prefix.last().is_some_and(|&p| p == l.invert()) {
                continue;
            }
            prefix.push(l);
            enumerate_reduced(gens, len, prefix, out);
            prefix.pop();
        }
    }
}

/// Nontrivial elements of order at most `max_order` among words of length
/// at most `max_len`, one representative per rotation/inversion class.
pub fn torsion_scan(dec: &Decider, max_len: usize, max_order: u64) -> Result<Vec<(Word, u64)>> {
    torsion_scan_with_budget(dec, max_len, max_order, DEFAULT_SCAN_BUDGET)
}

pub fn torsion_scan_with_budget(
    dec: &Decider,
    max_len: usize,
    max_order: u64,
    budget: u64,
) -> Result<Vec<(Word, u64)>> {
    let g = dec.presentation().generator_count() as u64;
    if max_len == 0 || g == 0 {
        return Ok(Vec::new());
    }
    let space = (2 * g).saturating_mul((2 * g - 1).saturating_pow(max_len as u32 - 1));
    if space > budget {
        return Err(Error::Budget(format!(
            "{space} words of length {max_len} exceed {budget}"
        )));
    }
    let mut words = Vec::new();
    for len in 1..=max_len {
        enumerate_reduced(g as usize, len, &mut Vec::with_capacity(len), &mut words);
    }
    let mut found: Vec<(Word, u64)> = words
        .par_iter()
        .filter_map(|w| match dec.finite_order(w, max_order) {
            Some(OrderResult::Finite(n)) if n > 1 => Some((w.clone(), n)),
            _ => None,
        })
        .collect();
    found.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
    Ok(found)
}
