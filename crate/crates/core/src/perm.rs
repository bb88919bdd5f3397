//! Permutations of the points `{1, ..., d}`.
//!
//! Composition is left-first throughout the crate: `p.then(&q)` maps `i` to
//! `q(p(i))`. Cycle notation `(a b c)` means `a -> b -> c -> a`.

use std::fmt;

use crate::error::{Error, Result};

/// A bijection of `{1, ..., d}` stored 0-based internally.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u8>,
}

/// Largest supported degree; points are stored as `u8`.
pub const MAX_DEGREE: usize = 255;

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Self {
            images: (0..degree as u8).collect(),
        }
    }

    /// Builds a permutation from 1-based images, `images[i - 1] = p(i)`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let d = images.len();
        if d > MAX_DEGREE {
            return Err(Error::InvalidPermutation(format!("degree {d} exceeds {MAX_DEGREE}")));
        }
        let mut seen = vec![false; d];
        let mut out = Vec::with_capacity(d);
        for &x in images {
            if x == 0 || x > d || seen[x - 1] {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection of 1..{d}"
                )));
            }
            seen[x - 1] = true;
            out.push((x - 1) as u8);
        }
        Ok(Self { images: out })
    }

    /// Product of cycles (1-based points), applied left to right.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        if degree > MAX_DEGREE {
            return Err(Error::InvalidPermutation(format!(
                "degree {degree} exceeds {MAX_DEGREE}"
            )));
        }
        let mut result = Self::identity(degree);
        for cycle in cycles {
            let mut seen = vec![false; degree];
            for &x in cycle {
                if x == 0 || x > degree {
                    return Err(Error::InvalidPermutation(format!("point {x} outside 1..{degree}")));
                }
                if std::mem::replace(&mut seen[x - 1], true) {
                    return Err(Error::InvalidPermutation(format!("point {x} repeated in a cycle")));
                }
            }
            let mut c = Self::identity(degree);
            for (k, &x) in cycle.iter().enumerate() {
                let y = cycle[(k + 1) % cycle.len()];
                c.images[x - 1] = (y - 1) as u8;
            }
            result = result.then(&c);
        }
        Ok(result)
    }

    /// The full cycle `(1 2 ... n)` acting on `{1..degree}`.
    pub fn cycle_prefix(degree: usize, n: usize) -> Self {
        let mut p = Self::identity(degree);
        for i in 0..n {
            p.images[i] = ((i + 1) % n) as u8;
        }
        p
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 1-based point `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1] as usize + 1
    }

    /// 0-based image, used on hot paths.
    #[inline]
    pub(crate) fn apply0(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    /// 1-based images.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// Left-first composition: the result maps `i` to `other(self(i))`.
    pub fn then(&self, other: &Self) -> Self {
        debug_assert_eq!(self.degree(), other.degree());
        Self {
            images: self.images.iter().map(|&x| other.images[x as usize]).collect(),
        }
    }

    /// Checked left-first composition.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self.then(other))
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0u8; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u8;
        }
        Self { images }
    }

    pub fn pow(&self, mut n: i64) -> Self {
        let mut base = if n < 0 { self.inverse() } else { self.clone() };
        n = n.abs();
        let mut acc = Self::identity(self.degree());
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            n >>= 1;
        }
        acc
    }

    /// Disjoint cycles of length at least two, each starting at its least
    /// point, ordered by that point. Points are 1-based.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.images[x] as usize;
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Length of the orbit of the 1-based point `i`.
    pub fn orbit_len(&self, i: usize) -> usize {
        let start = i - 1;
        let mut x = self.images[start] as usize;
        let mut len = 1;
        while x != start {
            x = self.images[x] as usize;
            len += 1;
        }
        len
    }

    /// Least `n >= 1` with `p^n = id`: the lcm of the cycle lengths.
    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| lcm(acc, c.len() as u64))
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in cycles {
            let points: Vec<String> = cycle.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", points.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parses a product of cycles such as `(1 2 3)(4 5)` or `()`.
pub fn parse_cycles(degree: usize, text: &str) -> Result<Permutation> {
    let mut cycles = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .ok_or_else(|| Error::InvalidPermutation(format!("expected '(' in {text:?}")))?;
        let close = body
            .find(')')
            .ok_or_else(|| Error::InvalidPermutation(format!("unclosed cycle in {text:?}")))?;
        let points = body[..close]
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<usize>()
                    .map_err(|_| Error::InvalidPermutation(format!("bad point {s:?} in {text:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        // Cycles in one product must be disjoint.
        if points.iter().any(|p| cycles.iter().any(|c: &Vec<usize>| c.contains(p))) {
            return Err(Error::InvalidPermutation(format!(
                "cycles in {text:?} are not disjoint"
            )));
        }
        if !points.is_empty() {
            cycles.push(points);
        }
        rest = body[close + 1..].trim_start();
    }
    Permutation::from_cycles(degree, &cycles)
}
