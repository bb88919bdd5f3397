//! Wreath recursion tables and the group-definition file format.
//!
//! ```text
//! # comments start with '#'
//! degree 3
//! gen m1 = (1, 1, m1) (1 2 3)
//! gen m2 = (1, m2, 1) (1 2)
//! gen m3 = (m1, m2, m3) ()
//! ```

use std::fmt;

use crate::error::{Error, Result};
use crate::parse::parse_word;
use crate::perm::{parse_cycles, Permutation, MAX_DEGREE};
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    /// Sections at the first-level vertices `1..=d`, stored 0-based.
    pub sections: Vec<Word>,
    pub root: Permutation,
}

/// Per-generator data the section scan reads on every letter.
#[derive(Clone, Debug)]
pub(crate) struct LetterTable {
    pub(crate) root: Permutation,
    pub(crate) root_inv: Permutation,
    pub(crate) sections: Vec<Word>,
    /// `inv_sections[c] = sections[c]^-1`.
    pub(crate) inv_sections: Vec<Word>,
}

/// A self-similar group given by a degree and a wreath recursion table.
#[derive(Clone, Debug)]
pub struct Presentation {
    degree: usize,
    names: Vec<String>,
    generators: Vec<Generator>,
    pub(crate) table: Vec<LetterTable>,
    letter_bounded: bool,
}

impl Presentation {
    /// Validates a table. Section words must already be over this alphabet.
    pub fn new(degree: usize, generators: Vec<Generator>) -> Result<Self> {
        if degree < 2 {
            return Err(Error::DegreeTooSmall(degree));
        }
        if degree > MAX_DEGREE {
            return Err(Error::InvalidPermutation(format!(
                "degree {degree} exceeds {MAX_DEGREE}"
            )));
        }
        let n = generators.len();
        for (k, g) in generators.iter().enumerate() {
            if generators[..k].iter().any(|h| h.name == g.name) {
                return Err(Error::Definition {
                    line: 0,
                    message: format!("duplicate generator {:?}", g.name),
                });
            }
            if g.sections.len() != degree {
                return Err(Error::Definition {
                    line: 0,
                    message: format!(
                        "generator {:?} has {} sections, expected {degree}",
                        g.name,
                        g.sections.len()
                    ),
                });
            }
            if g.root.degree() != degree {
                return Err(Error::DegreeMismatch {
                    left: degree,
                    right: g.root.degree(),
                });
            }
            if let Some(l) = g.sections.iter().flat_map(|s| s.letters()).find(|l| l.index() >= n) {
                return Err(Error::UnknownGenerator(format!("#{}", l.index())));
            }
        }
        let table = generators
            .iter()
            .map(|g| LetterTable {
                root: g.root.clone(),
                root_inv: g.root.inverse(),
                sections: g.sections.clone(),
                inv_sections: g.sections.iter().map(Word::inverse).collect(),
            })
            .collect();
        let letter_bounded = generators.iter().all(|g| g.sections.iter().all(|s| s.len() <= 1));
        Ok(Self {
            degree,
            names: generators.iter().map(|g| g.name.clone()).collect(),
            generators,
            table,
            letter_bounded,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    /// Every section of every generator has length at most one.
    pub fn is_letter_bounded(&self) -> bool {
        self.letter_bounded
    }

    pub fn parse(&self, text: &str) -> Result<Word> {
        parse_word(text, &self.names)
    }

    pub fn show(&self, w: &Word) -> String {
        w.display(&self.names).to_string()
    }

    /// Index of a named generator.
    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Renders the presentation back in the group-definition format.
    pub fn to_definition(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "degree {}", self.degree)?;
        for g in &self.generators {
            let sections: Vec<String> = g.sections.iter().map(|s| self.show(s)).collect();
            writeln!(f, "gen {} = ({}) {}", g.name, sections.join(", "), g.root)?;
        }
        Ok(())
    }
}

/// Parses a group-definition document.
pub fn load_presentation(text: &str) -> Result<Presentation> {
    let mut degree: Option<usize> = None;
    let mut defs: Vec<(usize, String, String)> = Vec::new();

    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Definition { line: line_no, message };
        if let Some(rest) = keyword(line, "degree") {
            if degree.is_some() {
                return Err(err("degree declared twice".into()));
            }
            let d: usize = rest
                .trim()
                .parse()
                .map_err(|_| err(format!("bad degree {:?}", rest.trim())))?;
            if d < 2 {
                return Err(Error::DegreeTooSmall(d));
            }
            degree = Some(d);
        } else if let Some(rest) = keyword(line, "gen") {
            if degree.is_none() {
                return Err(err("generator before degree declaration".into()));
            }
            let (name, body) = rest
                .split_once('=')
                .ok_or_else(|| err("expected 'gen NAME = (sections) permutation'".into()))?;
            let name = name.trim();
            if name.is_empty()
                || !name.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                || !name.chars().all(|c| c.is_alphanumeric() || c == '_')
            {
                return Err(err(format!("bad generator name {name:?}")));
            }
            if defs.iter().any(|(_, n, _)| n == name) {
                return Err(err(format!("duplicate generator {name:?}")));
            }
            defs.push((line_no, name.to_string(), body.trim().to_string()));
        } else {
            return Err(err(format!("unrecognized line {line:?}")));
        }
    }

    let degree = degree.ok_or(Error::Definition {
        line: 0,
        message: "missing degree declaration".into(),
    })?;
    let names: Vec<String> = defs.iter().map(|(_, n, _)| n.clone()).collect();
    let mut generators = Vec::with_capacity(defs.len());
    for (line, name, body) in defs {
        let err = |message: String| Error::Definition { line, message };
        let (tuple, perm_text) =
            split_tuple(&body).ok_or_else(|| err(format!("malformed section tuple in {body:?}")))?;
        let parts = split_top_level(tuple);
        if parts.len() != degree {
            return Err(err(format!("{name} has {} sections, expected {degree}", parts.len())));
        }
        let sections = parts
            .iter()
            .map(|p| match parse_word(p, &names) {
                Err(Error::Syntax { position, message }) => Err(err(format!(
                    "section {p:?} of {name}: syntax error at {position}: {message}"
                ))),
                Err(e) => Err(err(format!("section {p:?} of {name}: {e}"))),
                ok => ok,
            })
            .collect::<Result<Vec<_>>>()?;
        let root = parse_cycles(degree, perm_text).map_err(|e| err(format!("root of {name}: {e}")))?;
        generators.push(Generator { name, sections, root });
    }
    Presentation::new(degree, generators)
}

fn keyword<'a>(line: &'a str, kw: &str) -> Option<&'a str> {
    let rest = line.strip_prefix(kw)?;
    if rest.starts_with(char::is_whitespace) {
        Some(rest)
    } else {
        None
    }
}

/// Splits `"(a, b) (1 2)"` into the tuple body `"a, b"` and the remainder.
fn split_tuple(body: &str) -> Option<(&str, &str)> {
    let inner = body.strip_prefix('(')?;
    let mut depth = 0i32;
    for (i, c) in inner.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ']' => depth -= 1,
            ')' if depth == 0 => return Some((&inner[..i], &inner[i + 1..])),
            ')' => depth -= 1,
            _ => {}
        }
    }
    None
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    let last = s[start..].trim();
    if !(parts.is_empty() && last.is_empty()) {
        parts.push(last);
    }
    parts
}

#[cfg(test)]
mod tests {
    use super::*;

    const M3: &str = "\
# the family member of degree 3
degree 3
gen m1 = (1, 1, m1) (1 2 3)
gen m2 = (1, m2, 1) (1 2)
gen m3 = (m1, m2, m3) ()
";

    #[test]
    fn loads_m3() {
        let p = load_presentation(M3).unwrap();
        assert_eq!(p.degree(), 3);
        assert_eq!(p.generator_count(), 3);
        assert_eq!(p.generators()[0].root.to_string(), "(1 2 3)");
        assert!(p.is_letter_bounded());
        // printing gives back an equivalent document
        let again = load_presentation(&p.to_definition()).unwrap();
        assert_eq!(again.generators(), p.generators());
    }

    #[test]
    fn wrong_section_count() {
        let text = "degree 3\ngen a = (1, a) (1 2)\n";
        assert!(matches!(
            load_presentation(text),
            Err(Error::Definition { line: 2, .. })
        ));
    }

    #[test]
    fn long_sections_are_not_letter_bounded() {
        let text = "degree 2\ngen a = (1, b*a) (1 2)\ngen b = ([a,b], b) ()\n";
        let p = load_presentation(text).unwrap();
        assert!(!p.is_letter_bounded());
        assert_eq!(p.generators()[1].sections[0].len(), 4);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            load_presentation("degree 2\ngen a = (1, c) (1 2)\n"),
            Err(Error::Definition { line: 2, .. })
        ));
        assert!(matches!(
            load_presentation("degree 2\ngen a = (1, a) (1 3)\n"),
            Err(Error::Definition { line: 2, .. })
        ));
        assert!(matches!(load_presentation("degree 1\n"), Err(Error::DegreeTooSmall(1))));
        assert!(load_presentation("gen a = (1, a) (1 2)\ndegree 2\n").is_err());
        assert!(load_presentation("degree 2\ngen a = (1, a) (1 2)\ngen a = (a, 1) ()\n").is_err());
        assert!(load_presentation("degree 2\nfoo\n").is_err());
    }

    #[test]
    fn trivial_presentation() {
        let p = load_presentation("degree 2\n").unwrap();
        assert_eq!(p.generator_count(), 0);
        assert!(p.is_letter_bounded());
    }
}
