//! Word expressions.
//!
//! ```text
//! word := term { '*' term }
//! term := atom { '^' exp }
//! atom := NAME | '1' | '(' word ')' | '[' word ',' word ']'
//! exp  := ['-'] INT | '(' word ')'
//! ```
//!
//! `[u,v]` expands to `u^-1 v^-1 u v` and `u^(v)` to `v^-1 u v`.

use crate::error::{Error, Result};
use crate::word::{Letter, Word};

/// Upper bound on the number of letters an expression may expand to.
pub const MAX_EXPANSION: usize = 1 << 22;

pub fn parse_word<S: AsRef<str>>(text: &str, alphabet: &[S]) -> Result<Word> {
    if alphabet.is_empty() {
        return Err(Error::EmptyAlphabet);
    }
    let mut p = Parser {
        chars: text.char_indices().collect(),
        pos: 0,
        end: text.len(),
        alphabet,
    };
    let w = p.word()?;
    p.skip_ws();
    if let Some(&(at, c)) = p.chars.get(p.pos) {
        return Err(syntax(at, format!("unexpected {c:?}")));
    }
    Ok(w)
}

fn syntax(position: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        position,
        message: message.into(),
    }
}

fn is_name_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

struct Parser<'a, S> {
    chars: Vec<(usize, char)>,
    pos: usize,
    end: usize,
    alphabet: &'a [S],
}

impl<S: AsRef<str>> Parser<'_, S> {
    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|(_, c)| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.end, |&(i, _)| i)
    }

    fn expect(&mut self, want: char) -> Result<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(syntax(self.offset(), format!("expected {want:?}, found {c:?}"))),
            None => Err(syntax(self.end, format!("expected {want:?}, found end of input"))),
        }
    }

    fn word(&mut self) -> Result<Word> {
        let mut w = self.term()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            let t = self.term()?;
            check_len(w.len() + t.len())?;
            w.extend(&t);
        }
        Ok(w)
    }

    fn term(&mut self) -> Result<Word> {
        let mut w = self.atom()?;
        while self.peek() == Some('^') {
            self.pos += 1;
            w = match self.peek() {
                Some('(') => {
                    self.pos += 1;
                    let by = self.word()?;
                    self.expect(')')?;
                    check_len(w.len() + 2 * by.len())?;
                    w.conjugate(&by)
                }
                Some(c) if c == '-' || c.is_ascii_digit() => {
                    let n = self.integer()?;
                    check_len((w.len() as u128).saturating_mul(n.unsigned_abs() as u128))?;
                    w.pow(n)
                }
                Some(c) => return Err(syntax(self.offset(), format!("expected exponent, found {c:?}"))),
                None => return Err(syntax(self.end, "expected exponent, found end of input")),
            };
        }
        Ok(w)
    }

    fn integer(&mut self) -> Result<i64> {
        let start = self.offset();
        let negative = self.peek() == Some('-');
        if negative {
            self.pos += 1;
        }
        let mut digits = String::new();
        while let Some(&(_, c)) = self.chars.get(self.pos) {
            if !c.is_ascii_digit() {
                break;
            }
            digits.push(c);
            self.pos += 1;
        }
        if digits.is_empty() {
            return Err(syntax(self.offset(), "expected digits"));
        }
        let n: i64 = digits
            .parse()
            .map_err(|_| syntax(start, format!("exponent {digits} out of range")))?;
        Ok(if negative { -n } else { n })
    }

    fn atom(&mut self) -> Result<Word> {
        let at = self.offset();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let w = self.word()?;
                self.expect(')')?;
                Ok(w)
            }
            Some('[') => {
                self.pos += 1;
                let u = self.word()?;
                self.expect(',')?;
                let v = self.word()?;
                self.expect(']')?;
                check_len(2 * (u.len() + v.len()))?;
                Ok(u.commutator(&v))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                if n == 1 {
                    Ok(Word::identity())
                } else {
                    Err(syntax(at, format!("integer {n} is not a group element (only 1 is)")))
                }
            }
            Some(c) if is_name_start(c) => {
                let mut name = String::new();
                while let Some(&(_, c)) = self.chars.get(self.pos) {
                    if !is_name_char(c) {
                        break;
                    }
                    name.push(c);
                    self.pos += 1;
                }
                match self.alphabet.iter().position(|n| n.as_ref() == name) {
                    Some(g) => Ok(Word::from_iter([Letter::pos(g)])),
                    None => Err(Error::UnknownGenerator(name)),
                }
            }
            Some(c) => Err(syntax(at, format!("unexpected {c:?}"))),
            None => Err(syntax(self.end, "unexpected end of input")),
        }
    }
}

fn check_len<N: TryInto<usize>>(n: N) -> Result<()> {
    match n.try_into() {
        Ok(n) if n <= MAX_EXPANSION => Ok(()),
        _ => Err(Error::WordTooLong(MAX_EXPANSION)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::free_reduce;
    use proptest::prelude::*;

    const NAMES: [&str; 3] = ["m1", "m2", "m3"];

    fn w(s: &str) -> Word {
        parse_word(s, &NAMES).unwrap()
    }

    fn letters(spec: &[(usize, bool)]) -> Word {
        free_reduce(
            spec.iter()
                .map(|&(g, inv)| if inv { Letter::neg(g) } else { Letter::pos(g) }),
        )
    }

    #[test]
    fn commutator_convention() {
        assert_eq!(w("[m1,m2]"), letters(&[(0, true), (1, true), (0, false), (1, false)]));
    }

    #[test]
    fn powers_and_conjugates() {
        assert_eq!(w("m1^3"), letters(&[(0, false); 3]));
        assert_eq!(
            w("(m2^3)^(m1)"),
            letters(&[(0, true), (1, false), (1, false), (1, false), (0, false)])
        );
        assert_eq!(w("m1^-2"), letters(&[(0, true), (0, true)]));
        assert_eq!(w("m1^0"), Word::identity());
        assert_eq!(w("1"), Word::identity());
        assert_eq!(w(" m1 * m1^-1 "), Word::identity());
        assert_eq!(w("[m1^2, m2]^(m1^2)"), w("m1^-2*[m1^2,m2]*m1^2"));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_word("m4", &NAMES), Err(Error::UnknownGenerator(n)) if n == "m4"));
        assert!(matches!(
            parse_word("m1*", &NAMES),
            Err(Error::Syntax { position: 3, .. })
        ));
        assert!(matches!(
            parse_word("m1 m2", &NAMES),
            Err(Error::Syntax { position: 3, .. })
        ));
        assert!(matches!(parse_word("[m1 m2]", &NAMES), Err(Error::Syntax { .. })));
        assert!(matches!(parse_word("2", &NAMES), Err(Error::Syntax { .. })));
        assert!(matches!(parse_word("m1", &[] as &[&str]), Err(Error::EmptyAlphabet)));
        assert!(matches!(
            parse_word("m1^99999999999", &NAMES),
            Err(Error::WordTooLong(_))
        ));
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(raw in crate::word::tests::raw_letters(3, 40)) {
            let word = free_reduce(raw);
            let text = word.display(&NAMES).to_string();
            prop_assert_eq!(parse_word(&text, &NAMES).unwrap(), word);
        }
    }
}
