//! Words as tree automorphisms.
//!
//! An element is written `g = (g_1, ..., g_d) s`: first the level-one
//! sections act inside the subtrees, then the root permutation `s` moves the
//! subtrees. Products act left factor first, so
//! `(f g)_i = f_i g_{f(i)}` and `(f g)(i u) = g(f(i u))`.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::presentation::Presentation;
use crate::word::Word;

/// Default ceiling on portrait depth.
pub const DEFAULT_PORTRAIT_LIMIT: usize = 16;

/// A vertex of the tree as a root-to-node path of 1-based letters.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Vertex(pub Vec<usize>);

impl Vertex {
    pub fn root() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_prefix_of(&self, other: &Vertex) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn check(&self, degree: usize) -> Result<()> {
        match self.0.iter().find(|&&x| x == 0 || x > degree) {
            Some(_) => Err(Error::InvalidVertex(format!("{self} (degree {degree})"))),
            None => Ok(()),
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        f.write_str(&parts.join("."))
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl FromStr for Vertex {
    type Err = Error;

    /// Accepts `1.2.3`, compact `123` (single digits), or `root`/empty.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "root" {
            return Ok(Self::root());
        }
        let bad = || Error::InvalidVertex(s.to_string());
        let points = if s.contains('.') {
            s.split('.')
                .map(|p| p.parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(|x| x as usize).ok_or_else(bad))
                .collect::<Result<Vec<_>>>()?
        };
        if points.contains(&0) {
            return Err(bad());
        }
        Ok(Self(points))
    }
}

/// Depth-limited tree of root permutations of iterated sections.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Portrait {
    pub label: Permutation,
    /// Empty at depth 0, otherwise one child per first-level vertex.
    pub children: Vec<Portrait>,
}

impl Portrait {
    pub fn depth(&self) -> usize {
        self.children.first().map_or(0, |c| 1 + c.depth())
    }

    /// True if every label is the identity.
    pub fn is_trivial(&self) -> bool {
        self.label.is_identity() && self.children.iter().all(Portrait::is_trivial)
    }

    /// Label at a vertex, if within depth.
    pub fn label_at(&self, v: &Vertex) -> Option<&Permutation> {
        let mut node = self;
        for &x in &v.0 {
            node = node.children.get(x - 1)?;
        }
        Some(&node.label)
    }
}

impl Presentation {
    fn check_point(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.degree() {
            return Err(Error::PointOutOfRange {
                point: i,
                degree: self.degree(),
            });
        }
        Ok(())
    }

    /// Root permutation of the element: letters composed left-first.
    pub fn root_perm(&self, w: &Word) -> Permutation {
        let mut p = Permutation::identity(self.degree());
        for l in w.letters() {
            let t = &self.table[l.index()];
            p = p.then(if l.inverse { &t.root_inv } else { &t.root });
        }
        p
    }

    /// Section at a 0-based first-level vertex, without range checks.
    pub(crate) fn section0(&self, w: &Word, i: usize) -> Word {
        let mut c = i;
        let mut out = Word::identity();
        for l in w.letters() {
            let t = &self.table[l.index()];
            if l.inverse {
                c = t.root_inv.apply0(c);
                out.extend(&t.inv_sections[c]);
            } else {
                out.extend(&t.sections[c]);
                c = t.root.apply0(c);
            }
        }
        out
    }

    /// All first-level sections and the root permutation in one pass.
    pub(crate) fn split(&self, w: &Word) -> (Vec<Word>, Permutation) {
        let d = self.degree();
        let mut cur: Vec<usize> = (0..d).collect();
        let mut out = vec![Word::identity(); d];
        for l in w.letters() {
            let t = &self.table[l.index()];
            for (c, s) in cur.iter_mut().zip(out.iter_mut()) {
                if l.inverse {
                    *c = t.root_inv.apply0(*c);
                    s.extend(&t.inv_sections[*c]);
                } else {
                    s.extend(&t.sections[*c]);
                    *c = t.root.apply0(*c);
                }
            }
        }
        let images: Vec<usize> = cur.iter().map(|&c| c + 1).collect();
        (
            out,
            Permutation::from_images(&images).expect("tracked points form a permutation"),
        )
    }

    /// Section of `w` at the first-level vertex `i` (1-based).
    pub fn level_one_section(&self, w: &Word, i: usize) -> Result<Word> {
        self.check_point(i)?;
        Ok(self.section0(w, i - 1))
    }

    pub fn section_at(&self, w: &Word, v: &Vertex) -> Result<Word> {
        v.check(self.degree())?;
        let mut s = w.clone();
        for &x in &v.0 {
            s = self.section0(&s, x - 1);
        }
        Ok(s)
    }

    /// Image of a vertex: `g(i u) = s(i) g_i(u)`.
    pub fn act(&self, w: &Word, v: &Vertex) -> Result<Vertex> {
        v.check(self.degree())?;
        Ok(self.act_unchecked(w, &v.0))
    }

    pub(crate) fn act_unchecked(&self, w: &Word, path: &[usize]) -> Vertex {
        let mut out = Vec::with_capacity(path.len());
        let mut s = w.clone();
        for (k, &x) in path.iter().enumerate() {
            if s.is_empty() {
                out.extend_from_slice(&path[k..]);
                break;
            }
            out.push(self.root_perm(&s).apply(x));
            if k + 1 < path.len() {
                s = self.section0(&s, x - 1);
            }
        }
        Vertex(out)
    }

    /// `w = (sections) root`.
    pub fn decompose(&self, w: &Word) -> (Vec<Word>, Permutation) {
        self.split(w)
    }

    pub fn portrait(&self, w: &Word, depth: usize) -> Result<Portrait> {
        self.portrait_with_limit(w, depth, DEFAULT_PORTRAIT_LIMIT)
    }

    pub fn portrait_with_limit(&self, w: &Word, depth: usize, limit: usize) -> Result<Portrait> {
        if depth > limit {
            return Err(Error::DepthLimit { depth, limit });
        }
        Ok(self.portrait_unchecked(w, depth))
    }

    pub(crate) fn portrait_unchecked(&self, w: &Word, depth: usize) -> Portrait {
        if depth == 0 {
            return Portrait {
                label: self.root_perm(w),
                children: Vec::new(),
            };
        }
        let (sections, label) = self.split(w);
        Portrait {
            label,
            children: sections.iter().map(|s| self.portrait_unchecked(s, depth - 1)).collect(),
        }
    }

    /// True iff `w` fixes every vertex of level `n`.
    pub fn stabilizes_level(&self, w: &Word, n: usize) -> bool {
        let mut frontier: HashSet<Word> = HashSet::from([w.clone()]);
        for _ in 0..n {
            let mut next = HashSet::new();
            for s in &frontier {
                let (sections, root) = self.split(s);
                if !root.is_identity() {
                    return false;
                }
                next.extend(sections.into_iter().filter(|s| !s.is_empty()));
            }
            if next.is_empty() {
                return true;
            }
            frontier = next;
        }
        true
    }

    /// Vertices of level `n` in lexicographic order.
    pub fn level(&self, n: usize) -> impl Iterator<Item = Vertex> + '_ {
        let d = self.degree();
        let total = d.checked_pow(n as u32).unwrap_or(usize::MAX);
        (0..total).map(move |mut code| {
            let mut path = vec![0; n];
            for slot in path.iter_mut().rev() {
                *slot = code % d + 1;
                code /= d;
            }
            Vertex(path)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::load_presentation;

    fn m3() -> Presentation {
        load_presentation(
            "degree 3\ngen m1 = (1, 1, m1) (1 2 3)\ngen m2 = (1, m2, 1) (1 2)\ngen m3 = (m1, m2, m3) ()\n",
        )
        .unwrap()
    }

    fn m2() -> Presentation {
        load_presentation("degree 2\ngen m1 = (1, m1) (1 2)\ngen m2 = (m1, m2) ()\n").unwrap()
    }

    #[test]
    fn vertex_syntax() {
        assert_eq!("1.2.3".parse::<Vertex>().unwrap(), Vertex(vec![1, 2, 3]));
        assert_eq!("123".parse::<Vertex>().unwrap(), Vertex(vec![1, 2, 3]));
        assert_eq!("10.1".parse::<Vertex>().unwrap(), Vertex(vec![10, 1]));
        assert_eq!("root".parse::<Vertex>().unwrap(), Vertex::root());
        assert!("1.0".parse::<Vertex>().is_err());
        assert!("1.x".parse::<Vertex>().is_err());
        assert_eq!(Vertex(vec![3, 1]).to_string(), "3.1");
    }

    #[test]
    fn root_perms() {
        let p = m3();
        assert_eq!(p.root_perm(&p.parse("m1").unwrap()).to_string(), "(1 2 3)");
        assert!(p.root_perm(&p.parse("m3").unwrap()).is_identity());
        assert_eq!(p.root_perm(&p.parse("[m1,m2]").unwrap()).to_string(), "(1 2 3)");
    }

    #[test]
    fn sections() {
        let p = m3();
        let m = |s: &str| p.parse(s).unwrap();
        for i in 1..=3 {
            assert_eq!(p.level_one_section(&m("m3"), i).unwrap(), Word::generator(i - 1));
            assert_eq!(p.level_one_section(&m("m1^3"), i).unwrap(), m("m1"));
            assert!(p.level_one_section(&Word::identity(), i).unwrap().is_empty());
        }
        assert!(matches!(
            p.level_one_section(&m("m1"), 4),
            Err(Error::PointOutOfRange { .. })
        ));
        let w = m("m2*m1^-1*m3");
        assert_eq!(p.section_at(&w, &Vertex::root()).unwrap(), w);
        let q = m2();
        assert_eq!(
            q.section_at(&q.parse("m2").unwrap(), &Vertex(vec![2, 2])).unwrap(),
            q.parse("m2").unwrap()
        );
        assert!(p.section_at(&w, &Vertex(vec![4])).is_err());
    }

    #[test]
    fn action() {
        let p = m3();
        let m1 = p.parse("m1").unwrap();
        assert_eq!(p.act(&m1, &Vertex(vec![1])).unwrap(), Vertex(vec![2]));
        // m1(3.1) = 1 . m1(1) = 1.2
        assert_eq!(p.act(&m1, &Vertex(vec![3, 1])).unwrap(), Vertex(vec![1, 2]));
        let v = Vertex(vec![2, 3, 1]);
        assert_eq!(p.act(&Word::identity(), &v).unwrap(), v);
    }

    #[test]
    fn decompositions() {
        let q = m2();
        let c = q.parse("[m1,m2]").unwrap();
        let (s, r) = q.decompose(&c);
        assert!(r.is_identity());
        assert_eq!(
            s,
            vec![q.parse("m1^-1*m2^-1*m1^2").unwrap(), q.parse("m1^-1*m2").unwrap()]
        );

        let p = m3();
        let (s, r) = p.decompose(&p.parse("[m1,m2]").unwrap());
        assert_eq!(r.to_string(), "(1 2 3)");
        assert_eq!(
            s,
            vec![Word::identity(), p.parse("m2^-1").unwrap(), p.parse("m2").unwrap()]
        );

        let (s, r) = p.decompose(&Word::identity());
        assert!(r.is_identity() && s.iter().all(Word::is_empty));
    }

    #[test]
    fn portraits() {
        let p = m3();
        let pm1 = p.portrait(&p.parse("m1").unwrap(), 1).unwrap();
        assert_eq!(pm1.label.to_string(), "(1 2 3)");
        let labels: Vec<String> = pm1.children.iter().map(|c| c.label.to_string()).collect();
        assert_eq!(labels, ["()", "()", "(1 2 3)"]);
        assert!(p.portrait(&p.parse("m3").unwrap(), 1).unwrap().label.is_identity());
        let e = p.portrait(&Word::identity(), 3).unwrap();
        assert!(e.is_trivial());
        assert_eq!(e.depth(), 3);
        assert!(matches!(
            p.portrait(&Word::identity(), 17),
            Err(Error::DepthLimit { .. })
        ));
        assert_eq!(p.portrait(&Word::identity(), 0).unwrap().children.len(), 0);
    }

    #[test]
    fn level_stabilizers() {
        let q = m2();
        assert!(q.stabilizes_level(&q.parse("[m1,m2]").unwrap(), 1));
        assert!(!q.stabilizes_level(&q.parse("m1").unwrap(), 1));
        assert!(q.stabilizes_level(&Word::identity(), 5));
        let w = q.parse("m1^2").unwrap();
        assert!(q.stabilizes_level(&w, 1));
        assert!(!q.stabilizes_level(&w, 2));
        // cross-check with the action on the whole level
        for n in 0..4 {
            let by_action = q.level(n).all(|v| q.act(&w, &v).unwrap() == v);
            assert_eq!(by_action, q.stabilizes_level(&w, n));
        }
    }
}
