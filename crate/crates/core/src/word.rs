//! Freely reduced words over a generator alphabet.

use std::fmt;
use std::ops::Mul;

/// One occurrence of a generator or its inverse.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Letter {
    pub generator: u32,
    pub inverse: bool,
}

impl Letter {
    pub fn pos(generator: usize) -> Self {
        Self {
            generator: generator as u32,
            inverse: false,
        }
    }

    pub fn neg(generator: usize) -> Self {
        Self {
            generator: generator as u32,
            inverse: true,
        }
    }

    pub fn index(self) -> usize {
        self.generator as usize
    }

    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn invert(self) -> Self {
        Self {
            inverse: !self.inverse,
            ..self
        }
    }

    fn cancels(self, other: Self) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }
}

/// A freely reduced word; the empty word is the identity.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<Letter>);

/// Freely reduces an arbitrary letter sequence.
pub fn free_reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
    let mut out: Vec<Letter> = Vec::new();
    for l in letters {
        match out.last() {
            Some(&last) if last.cancels(l) => {
                out.pop();
            }
            _ => out.push(l),
        }
    }
    Word(out)
}

impl Word {
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    pub fn generator(g: usize) -> Self {
        Self(vec![Letter::pos(g)])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Appends one letter, cancelling against the last letter if possible.
    pub fn push(&mut self, l: Letter) {
        match self.0.last() {
            Some(&last) if last.cancels(l) => {
                self.0.pop();
            }
            _ => self.0.push(l),
        }
    }

    /// Appends a reduced word in place.
    pub fn extend(&mut self, other: &Word) {
        for &l in &other.0 {
            self.push(l);
        }
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.iter().rev().map(|l| l.invert()).collect())
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..n.unsigned_abs() {
            out.extend(&base);
        }
        out
    }

    /// `[self, other] = self^-1 other^-1 self other`.
    pub fn commutator(&self, other: &Word) -> Self {
        let mut out = self.inverse();
        out.extend(&other.inverse());
        out.extend(self);
        out.extend(other);
        out
    }

    /// `self^by = by^-1 self by`.
    pub fn conjugate(&self, by: &Word) -> Self {
        let mut out = by.inverse();
        out.extend(self);
        out.extend(by);
        out
    }

    /// Signed occurrence count of each generator.
    pub fn exponents(&self, generators: usize) -> Vec<i64> {
        let mut out = vec![0i64; generators];
        for l in &self.0 {
            out[l.index()] += l.sign();
        }
        out
    }

    /// True if the first and last letters do not cancel.
    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(&a), Some(&b)) if self.0.len() > 1 => !a.cancels(b),
            _ => true,
        }
    }

    pub fn display<'a, S: AsRef<str>>(&'a self, names: &'a [S]) -> WordDisplay<'a, S> {
        WordDisplay { word: self, names }
    }
}

impl Mul<&Word> for &Word {
    type Output = Word;

    fn mul(self, rhs: &Word) -> Word {
        let mut out = self.clone();
        out.extend(rhs);
        out
    }
}

impl Mul for Word {
    type Output = Word;

    fn mul(mut self, rhs: Word) -> Word {
        self.extend(&rhs);
        self
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        free_reduce(iter)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            write!(f, "g{}{}", l.generator, if l.inverse { "^-1" } else { "" })?;
        }
        Ok(())
    }
}

/// Prints a word in the expression grammar, collapsing runs into powers:
/// `m1^-1*m2^-1*m1^2`. The identity prints as `1`.
pub struct WordDisplay<'a, S> {
    word: &'a Word,
    names: &'a [S],
}

impl<S: AsRef<str>> fmt::Display for WordDisplay<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters = self.word.letters();
        if letters.is_empty() {
            return f.write_str("1");
        }
        let mut k = 0;
        let mut first = true;
        while k < letters.len() {
            let l = letters[k];
            let run = letters[k..].iter().take_while(|&&x| x == l).count();
            if !first {
                f.write_str("*")?;
            }
            first = false;
            f.write_str(self.names[l.index()].as_ref())?;
            let exp = run as i64 * l.sign();
            if exp != 1 {
                write!(f, "^{exp}")?;
            }
            k += run;
        }
        Ok(())
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    const A: Letter = Letter {
        generator: 0,
        inverse: false,
    };
    const B: Letter = Letter {
        generator: 1,
        inverse: false,
    };

    #[test]
    fn reduce_examples() {
        assert!(free_reduce([A, A.invert()]).is_empty());
        assert_eq!(free_reduce([A, B, B.invert(), A]).letters(), &[A, A]);
        let w = free_reduce([A, B, A.invert()]);
        assert_eq!(free_reduce(w.letters().iter().copied()), w);
    }

    #[test]
    fn printing() {
        let names = ["m1", "m2"];
        let w = Word::generator(0).commutator(&Word::generator(1));
        assert_eq!(w.display(&names).to_string(), "m1^-1*m2^-1*m1*m2");
        assert_eq!(Word::identity().display(&names).to_string(), "1");
        assert_eq!(Word::generator(0).pow(-3).display(&names).to_string(), "m1^-3");
    }

    #[test]
    fn exponents_of_commutator_vanish() {
        let w = Word::generator(0).commutator(&Word::generator(1));
        assert_eq!(w.exponents(2), vec![0, 0]);
        let v = Word::generator(0).pow(2) * Word::generator(1);
        assert_eq!(v.exponents(2), vec![2, 1]);
    }

    pub(crate) fn raw_letters(gens: u32, max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
        prop::collection::vec(
            (0..gens, any::<bool>()).prop_map(|(generator, inverse)| Letter { generator, inverse }),
            0..max_len,
        )
    }

    proptest! {
        #[test]
        fn reduction_laws(raw in raw_letters(3, 30), other in raw_letters(3, 30)) {
            let w = free_reduce(raw.iter().copied());
            prop_assert!(w.len() <= raw.len());
            prop_assert!(w.letters().windows(2).all(|p| !p[0].cancels(p[1])));
            prop_assert_eq!(free_reduce(w.letters().iter().copied()), w.clone());
            prop_assert!((&w * &w.inverse()).is_empty());
            let v = free_reduce(other);
            prop_assert!((&w * &v).len() <= w.len() + v.len());
        }
    }
}
