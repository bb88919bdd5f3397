//! Word problem, bounded order and infinite-order certificates.
//!
//! An automorphism is trivial iff every section has trivial root
//! permutation. [`Decider::is_identity`] explores the section words reachable
//! from a word, deduplicated syntactically. For letter-bounded presentations
//! section length never grows, so the search is finite and decides the word
//! problem; otherwise it gives up past a length bound with
//! [`Verdict::Unknown`]. The reachable set can still be exponential in the
//! word length for non-contracting groups, so callers may also cap it with
//! [`Decider::with_state_budget`].

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::RwLock;

use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::word::Word;
use crate::wreath::Vertex;

/// Section length beyond which non-letter-bounded searches give up.
pub const DEFAULT_WORD_BOUND: usize = 64;

/// Three-valued answer of a semantic check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl Verdict {
    pub fn is_yes(self) -> bool {
        self == Verdict::Yes
    }

    pub fn is_no(self) -> bool {
        self == Verdict::No
    }
}

impl From<bool> for Verdict {
    fn from(b: bool) -> Self {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "true",
            Verdict::No => "false",
            Verdict::Unknown => "unknown",
        })
    }
}

/// Evidence that an element has infinite order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InfiniteOrderCertificate {
    /// `w^period` lies in the first-level stabilizer (`period` is the order of
    /// the root permutation, at least 2) and its section at `point` equals
    /// `w^exponent` with `1 <= exponent < period`. A finite order `n` would be
    /// a multiple of `period` with `n | exponent * n / period`, forcing
    /// `period | exponent`.
    PowerSectionDescent {
        element: Word,
        period: u64,
        point: usize,
        exponent: u64,
    },
    /// `w^power` fixes `point` (`power` is the length of its orbit under the
    /// root permutation) and its section there has infinite order.
    SectionDominance {
        element: Word,
        point: usize,
        power: u64,
        section: Box<InfiniteOrderCertificate>,
    },
}

impl InfiniteOrderCertificate {
    pub fn element(&self) -> &Word {
        match self {
            Self::PowerSectionDescent { element, .. } | Self::SectionDominance { element, .. } => element,
        }
    }

    /// Number of rule applications in the chain.
    pub fn depth(&self) -> usize {
        match self {
            Self::PowerSectionDescent { .. } => 1,
            Self::SectionDominance { section, .. } => 1 + section.depth(),
        }
    }

    pub fn render(&self, p: &Presentation) -> String {
        let mut out = String::new();
        self.render_into(p, 0, &mut out);
        out
    }

    fn render_into(&self, p: &Presentation, indent: usize, out: &mut String) {
        let pad = "  ".repeat(indent);
        match self {
            Self::PowerSectionDescent {
                element,
                period,
                point,
                exponent,
            } => {
                let w = p.show(element);
                out.push_str(&format!(
                    "{pad}PowerSectionDescent: ({w})^{period} has section ({w})^{exponent} at {point}, 1 <= {exponent} < {period}\n"
                ));
            }
            Self::SectionDominance {
                element,
                point,
                power,
                section,
            } => {
                let w = p.show(element);
                out.push_str(&format!(
                    "{pad}SectionDominance: ({w})^{power} fixes {point}; its section {} has infinite order\n",
                    p.show(section.element())
                ));
                section.render_into(p, indent + 1, out);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderResult {
    Finite(u64),
    /// No identity power among the tested exponents up to the bound.
    ExceedsBound(u64),
    InfiniteCertified(InfiniteOrderCertificate),
    /// `w^n = 1` but some smaller candidate exponent was undecided.
    Divides(u64),
}

/// Semantic procedures over one presentation, with a shared identity cache.
pub struct Decider<'p> {
    pres: &'p Presentation,
    word_bound: usize,
    state_budget: Option<usize>,
    cache: RwLock<HashMap<Word, bool>>,
}

impl<'p> Decider<'p> {
    pub fn new(pres: &'p Presentation) -> Self {
        Self::with_word_bound(pres, DEFAULT_WORD_BOUND)
    }

    pub fn with_word_bound(pres: &'p Presentation, word_bound: usize) -> Self {
        Self {
            pres,
            word_bound,
            state_budget: None,
            cache: RwLock::new(HashMap::new()),
        }
    }

    /// Caps the number of distinct section words one identity test may
    /// visit; tests that hit the cap answer `Unknown`.
    pub fn with_state_budget(mut self, budget: usize) -> Self {
        self.state_budget = Some(budget);
        self
    }

    pub fn presentation(&self) -> &'p Presentation {
        self.pres
    }

    fn cached(&self, w: &Word) -> Option<bool> {
        self.cache.read().unwrap().get(w).copied()
    }

    pub fn is_identity(&self, w: &Word) -> Verdict {
        if w.is_empty() {
            return Verdict::Yes;
        }
        if let Some(b) = self.cached(w) {
            return b.into();
        }
        let bounded = self.pres.is_letter_bounded();
        let limit = self.word_bound.max(w.len());
        let mut seen: HashSet<Word> = HashSet::from([w.clone()]);
        let mut queue: VecDeque<Word> = VecDeque::from([w.clone()]);
        let mut truncated = false;
        while let Some(u) = queue.pop_front() {
            match self.cached(&u) {
                Some(true) => continue,
                Some(false) => {
                    self.cache.write().unwrap().insert(w.clone(), false);
                    return Verdict::No;
                }
                None => {}
            }
            let (sections, root) = self.pres.split(&u);
            if !root.is_identity() {
                self.cache.write().unwrap().insert(w.clone(), false);
                return Verdict::No;
            }
            for s in sections {
                if s.is_empty() || seen.contains(&s) {
                    continue;
                }
                if !self.pres.root_perm(&s).is_identity() || self.cached(&s) == Some(false) {
                    self.cache.write().unwrap().insert(w.clone(), false);
                    return Verdict::No;
                }
                if !bounded && s.len() > limit {
                    truncated = true;
                    continue;
                }
                if self.state_budget.is_some_and(|b| seen.len() >= b) {
                    return Verdict::Unknown;
                }
                seen.insert(s.clone());
                queue.push_back(s);
            }
        }
        if truncated {
            return Verdict::Unknown;
        }
        // Everything reachable from a trivial element is trivial.
        let mut cache = self.cache.write().unwrap();
        for s in seen {
            cache.insert(s, true);
        }
        Verdict::Yes
    }

    pub fn are_equal(&self, u: &Word, v: &Word) -> Verdict {
        if u == v {
            return Verdict::Yes;
        }
        if self.pres.root_perm(u) != self.pres.root_perm(v) {
            return Verdict::No;
        }
        self.is_identity(&(u * &v.inverse()))
    }

    pub fn order_bounded(&self, w: &Word, bound: u64) -> Result<OrderResult> {
        if bound == 0 {
            return Err(Error::Precondition("order bound must be at least 1".into()));
        }
        if w.is_empty() {
            return Ok(OrderResult::Finite(1));
        }
        if let Some(r) = self.finite_order(w, bound) {
            return Ok(r);
        }
        Ok(match self.infinite_order_search(w, self.default_certificate_depth()) {
            Some(cert) => OrderResult::InfiniteCertified(cert),
            None => OrderResult::ExceedsBound(bound),
        })
    }

    /// Searches for `w^n = 1` with `n <= bound`, stepping by the order of the
    /// root permutation. `None` means no identity power was found.
    pub fn finite_order(&self, w: &Word, bound: u64) -> Option<OrderResult> {
        if w.is_empty() {
            return Some(OrderResult::Finite(1));
        }
        let step = self.pres.root_perm(w).order();
        let stride = w.pow(step as i64);
        let mut power = stride.clone();
        let mut undecided = false;
        let mut n = step;
        while n <= bound {
            match self.is_identity(&power) {
                Verdict::Yes if undecided => return Some(OrderResult::Divides(n)),
                Verdict::Yes => return Some(OrderResult::Finite(n)),
                Verdict::Unknown => undecided = true,
                Verdict::No => {}
            }
            power.extend(&stride);
            n += step;
        }
        None
    }

    pub fn default_certificate_depth(&self) -> usize {
        2 * self.pres.degree()
    }

    /// Sound search for an infinite-order certificate, trying descent before
    /// section dominance at each level.
    pub fn infinite_order_certificate(&self, w: &Word, depth: usize) -> Result<Option<InfiniteOrderCertificate>> {
        if self.is_identity(w).is_yes() {
            return Err(Error::Precondition("element is the identity".into()));
        }
        Ok(self.infinite_order_search(w, depth))
    }

    fn infinite_order_search(&self, w: &Word, depth: usize) -> Option<InfiniteOrderCertificate> {
        let mut failed = HashMap::new();
        let mut path = Vec::new();
        let cert = self.search(w, depth, &mut path, &mut failed)?;
        // Re-check every equality before handing the certificate out.
        match self.verify_certificate(&cert) {
            Verdict::Yes => Some(cert),
            _ => None,
        }
    }

    fn search(
        &self,
        w: &Word,
        depth: usize,
        path: &mut Vec<Word>,
        failed: &mut HashMap<Word, usize>,
    ) -> Option<InfiniteOrderCertificate> {
        if w.is_empty() || failed.get(w).is_some_and(|&d| d >= depth) {
            return None;
        }
        if let Some(c) = self.descent(w) {
            return Some(c);
        }
        if depth > 0 {
            path.push(w.clone());
            let root = self.pres.root_perm(w);
            for point in 1..=self.pres.degree() {
                let power = root.orbit_len(point) as u64;
                let section = self.pres.section0(&w.pow(power as i64), point - 1);
                if section.is_empty() || section.len() > self.word_bound.max(w.len()) || path.contains(&section) {
                    continue;
                }
                if let Some(sub) = self.search(&section, depth - 1, path, failed) {
                    path.pop();
                    return Some(InfiniteOrderCertificate::SectionDominance {
                        element: w.clone(),
                        point,
                        power,
                        section: Box::new(sub),
                    });
                }
            }
            path.pop();
        }
        failed.insert(w.clone(), depth);
        None
    }

    fn descent(&self, w: &Word) -> Option<InfiniteOrderCertificate> {
        let root = self.pres.root_perm(w);
        let period = root.order();
        if period < 2 {
            return None;
        }
        let (sections, _) = self.pres.split(&w.pow(period as i64));
        let powers: Vec<(Word, _)> = (1..period)
            .map(|j| {
                let wj = w.pow(j as i64);
                let r = self.pres.root_perm(&wj);
                (wj, r)
            })
            .collect();
        for (k, s) in sections.iter().enumerate() {
            if s.is_empty() {
                continue;
            }
            let rs = self.pres.root_perm(s);
            for (j, (wj, rj)) in powers.iter().enumerate() {
                if &rs == rj && self.are_equal(s, wj).is_yes() {
                    return Some(InfiniteOrderCertificate::PowerSectionDescent {
                        element: w.clone(),
                        period,
                        point: k + 1,
                        exponent: j as u64 + 1,
                    });
                }
            }
        }
        None
    }

    /// Independently re-derives every claim in a certificate.
    pub fn verify_certificate(&self, cert: &InfiniteOrderCertificate) -> Verdict {
        match cert {
            InfiniteOrderCertificate::PowerSectionDescent {
                element,
                period,
                point,
                exponent,
            } => {
                let root = self.pres.root_perm(element);
                if root.order() != *period || *period < 2 || *exponent == 0 || exponent >= period {
                    return Verdict::No;
                }
                if *point == 0 || *point > self.pres.degree() {
                    return Verdict::No;
                }
                let s = self.pres.section0(&element.pow(*period as i64), point - 1);
                self.are_equal(&s, &element.pow(*exponent as i64))
            }
            InfiniteOrderCertificate::SectionDominance {
                element,
                point,
                power,
                section,
            } => {
                if *point == 0 || *point > self.pres.degree() {
                    return Verdict::No;
                }
                let wk = element.pow(*power as i64);
                if self.pres.root_perm(&wk).apply(*point) != *point {
                    return Verdict::No;
                }
                let s = self.pres.section0(&wk, point - 1);
                if &s != section.element() {
                    return Verdict::No;
                }
                self.verify_certificate(section)
            }
        }
    }

    /// Shortest (then lexicographically least) nonempty vertex `v` with
    /// `|v| <= max_depth`, `w(v) = v` and `w_v = w`.
    pub fn fixed_path_self_section(&self, w: &Word, max_depth: usize) -> Result<Option<Vertex>> {
        if max_depth == 0 {
            return Err(Error::Precondition("max_depth must be at least 1".into()));
        }
        let target_root = self.pres.root_perm(w);
        let mut frontier: Vec<(Vec<usize>, Word)> = vec![(Vec::new(), w.clone())];
        for _ in 0..max_depth {
            let mut next = Vec::new();
            for (path, s) in &frontier {
                let (sections, root) = self.pres.split(s);
                for (k, section) in sections.into_iter().enumerate() {
                    if root.apply0(k) != k {
                        continue;
                    }
                    let mut child = path.clone();
                    child.push(k + 1);
                    next.push((child, section));
                }
            }
            for (path, s) in &next {
                if self.pres.root_perm(s) == target_root && self.are_equal(s, w).is_yes() {
                    return Ok(Some(Vertex(path.clone())));
                }
            }
            frontier = next;
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::load_presentation;

    fn m(d: usize) -> Presentation {
        crate::mfamily::build_m(d).unwrap()
    }

    #[test]
    fn identity_examples() {
        let p = m(3);
        let dec = Decider::new(&p);
        let w = p.parse("([m1^3,m2]^(m1^2))^3").unwrap();
        assert_eq!(dec.is_identity(&w), Verdict::Yes);
        assert_eq!(dec.is_identity(&p.parse("m1^3").unwrap()), Verdict::No);
        assert_eq!(dec.is_identity(&Word::identity()), Verdict::Yes);
        // cached answers agree
        assert_eq!(dec.is_identity(&w), Verdict::Yes);
    }

    #[test]
    fn equality_examples() {
        let p = m(2);
        let dec = Decider::new(&p);
        let a = p.parse("m1").unwrap();
        let b = p.parse("m2").unwrap();
        assert_eq!(dec.are_equal(&a, &a), Verdict::Yes);
        assert_eq!(dec.are_equal(&a, &b), Verdict::No);

        let p = m(3);
        let dec = Decider::new(&p);
        let w = p.parse("m3^(m1)").unwrap();
        let s = p.level_one_section(&w, 1).unwrap();
        assert_eq!(dec.are_equal(&s, &w), Verdict::Yes);
    }

    #[test]
    fn orders() {
        let p = m(3);
        let dec = Decider::new(&p);
        assert_eq!(
            dec.order_bounded(&p.parse("[m1,m2]").unwrap(), 10).unwrap(),
            OrderResult::Finite(3)
        );
        assert_eq!(
            dec.order_bounded(&Word::identity(), 10).unwrap(),
            OrderResult::Finite(1)
        );
        assert!(dec.order_bounded(&Word::identity(), 0).is_err());

        let p = m(2);
        let dec = Decider::new(&p);
        let m1 = p.parse("m1").unwrap();
        assert_eq!(
            dec.order_bounded(&m1, 100).unwrap(),
            OrderResult::InfiniteCertified(InfiniteOrderCertificate::PowerSectionDescent {
                element: m1.clone(),
                period: 2,
                point: 1,
                exponent: 1,
            })
        );
    }

    #[test]
    fn generator_certificates() {
        for d in 2..=5 {
            let p = m(d);
            let dec = Decider::new(&p);
            for i in 0..d - 1 {
                let w = Word::generator(i);
                match dec.infinite_order_certificate(&w, 2 * d).unwrap() {
                    Some(InfiniteOrderCertificate::PowerSectionDescent { period, exponent, .. }) => {
                        assert_eq!(period, (d - i) as u64);
                        assert_eq!(exponent, 1);
                    }
                    other => panic!("d={d} m{}: {other:?}", i + 1),
                }
            }
            let md = Word::generator(d - 1);
            match dec.infinite_order_certificate(&md, 2 * d).unwrap() {
                Some(InfiniteOrderCertificate::SectionDominance { point, section, .. }) => {
                    assert_eq!(point, 1);
                    assert_eq!(section.element(), &Word::generator(0));
                }
                other => panic!("d={d} m{d}: {other:?}"),
            }
        }
    }

    #[test]
    fn certificate_precondition_and_torsion() {
        let p = m(3);
        let dec = Decider::new(&p);
        assert!(dec.infinite_order_certificate(&Word::identity(), 4).is_err());
        assert_eq!(
            dec.infinite_order_certificate(&p.parse("[m1,m2]").unwrap(), 6).unwrap(),
            None
        );
    }

    #[test]
    fn section_dominance_needs_a_fixed_point() {
        // b = (a, a^-1)(1 2) has order 2 although its sections have infinite order.
        let p = load_presentation("degree 2\ngen a = (1, a) (1 2)\ngen b = (a, a^-1) (1 2)\n").unwrap();
        let dec = Decider::new(&p);
        let b = p.parse("b").unwrap();
        assert_eq!(dec.order_bounded(&b, 10).unwrap(), OrderResult::Finite(2));
        assert_eq!(dec.infinite_order_certificate(&b, 6).unwrap(), None);
        let bad = InfiniteOrderCertificate::SectionDominance {
            element: b.clone(),
            point: 1,
            power: 1,
            section: Box::new(
                dec.infinite_order_certificate(&p.parse("a").unwrap(), 2)
                    .unwrap()
                    .unwrap(),
            ),
        };
        assert_eq!(dec.verify_certificate(&bad), Verdict::No);
    }

    #[test]
    fn self_sections() {
        let p = m(3);
        let dec = Decider::new(&p);
        assert_eq!(
            dec.fixed_path_self_section(&p.parse("m3^(m1)").unwrap(), 4).unwrap(),
            Some(Vertex(vec![1]))
        );
        assert_eq!(dec.fixed_path_self_section(&p.parse("m1").unwrap(), 4).unwrap(), None);
        assert!(dec.fixed_path_self_section(&p.parse("m1").unwrap(), 0).is_err());
        let q = m(2);
        let dec = Decider::new(&q);
        assert_eq!(
            dec.fixed_path_self_section(&q.parse("m2").unwrap(), 4).unwrap(),
            Some(Vertex(vec![2]))
        );
    }

    #[test]
    fn unknown_past_bound() {
        // a = (a*a, 1)(): sections double in length forever.
        let p = load_presentation("degree 2\ngen a = (a*a, 1) ()\n").unwrap();
        let dec = Decider::with_word_bound(&p, 8);
        assert_eq!(dec.is_identity(&p.parse("a").unwrap()), Verdict::Unknown);
        // a nontrivial root is caught before the bound matters
        let q = load_presentation("degree 2\ngen a = (a*a, 1) (1 2)\n").unwrap();
        let dec = Decider::with_word_bound(&q, 8);
        assert_eq!(dec.is_identity(&q.parse("a").unwrap()), Verdict::No);
    }

    #[test]
    fn state_budget() {
        let p = m(3);
        let w = p.parse("([m1^3,m2]^(m1^2))^3").unwrap();
        assert_eq!(Decider::new(&p).with_state_budget(1).is_identity(&w), Verdict::Unknown);
        assert_eq!(
            Decider::new(&p).with_state_budget(1 << 10).is_identity(&w),
            Verdict::Yes
        );
    }
}
