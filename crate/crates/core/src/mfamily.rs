//! The groups `M(d)` and machine checks of their displayed identities.
//!
//! For `1 <= i <= d-1`, `m_i` has root permutation `(1 2 ... d+1-i)` and a
//! single nontrivial section `m_i` at coordinate `d+1-i`; `m_d` has trivial
//! root and sections `(m_1, ..., m_d)`.

use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::analysis;
use crate::decision::{Decider, InfiniteOrderCertificate, OrderResult};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::presentation::{Generator, Presentation};
use crate::word::Word;
use crate::wreath::Vertex;

/// Builds `M(d)` with generators named `m1..md`.
pub fn build_m(d: usize) -> Result<Presentation> {
    if d < 2 {
        return Err(Error::DegreeTooSmall(d));
    }
    let mut generators = Vec::with_capacity(d);
    for i in 1..d {
        let cycle_len = d + 1 - i;
        let mut sections = vec![Word::identity(); d];
        sections[cycle_len - 1] = Word::generator(i - 1);
        generators.push(Generator {
            name: format!("m{i}"),
            sections,
            root: Permutation::cycle_prefix(d, cycle_len),
        });
    }
    generators.push(Generator {
        name: format!("m{d}"),
        sections: (0..d).map(Word::generator).collect(),
        root: Permutation::identity(d),
    });
    Presentation::new(d, generators)
}

/// `M(d)` together with word builders for its distinguished elements.
pub struct MFamily {
    d: usize,
    pres: Presentation,
}

/// An element of the first-level stabilizer whose section at the last
/// vertex is a generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractalWitness {
    pub word: Word,
    /// 0-based generator index of the expected last section.
    pub target: usize,
}

impl MFamily {
    pub fn new(d: usize) -> Result<Self> {
        Ok(Self { d, pres: build_m(d)? })
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    /// `m_i` for 1-based `i`.
    pub fn m(&self, i: usize) -> Word {
        assert!((1..=self.d).contains(&i), "generator m{i} outside m1..m{}", self.d);
        Word::generator(i - 1)
    }

    /// `m1^d`, `m_d^(m1^k)` for `k = 1..d-2`, and `m_d`, whose last sections
    /// run through `m1`, `m_{d-k}` and `m_d`.
    pub fn fractal_witnesses(&self) -> Vec<FractalWitness> {
        let d = self.d;
        let mut out = vec![FractalWitness {
            word: self.m(1).pow(d as i64),
            target: 0,
        }];
        for k in 1..=d.saturating_sub(2) {
            out.push(FractalWitness {
                word: self.m(d).conjugate(&self.m(1).pow(k as i64)),
                target: d - k - 1,
            });
        }
        out.push(FractalWitness {
            word: self.m(d),
            target: d - 1,
        });
        out
    }

    fn unit_vector(&self, at: usize, w: Word) -> Vec<Word> {
        let mut v = vec![Word::identity(); self.d];
        v[at - 1] = w;
        v
    }

    /// Checks `w = (expected) ()` coordinatewise by element equality.
    pub fn has_decomposition(&self, dec: &Decider, w: &Word, expected: &[Word], root: &Permutation) -> bool {
        let (sections, r) = self.pres.decompose(w);
        &r == root
            && sections.len() == expected.len()
            && sections.iter().zip(expected).all(|(s, e)| dec.are_equal(s, e).is_yes())
    }

    /// The conjugated commutator `[m_i^(d+1-i), m_j]^(m1^(d-1))` for
    /// `j <= d-1`, or the correction product `x(i)` for `j = d`.
    pub fn branch_word(&self, i: usize, j: usize) -> Result<Word> {
        let d = self.d;
        if !(1 <= i && i < j && j <= d) {
            return Err(Error::Precondition(format!("need 1 <= i < j <= {d}, got ({i}, {j})")));
        }
        let pi = self.m(i).pow((d + 1 - i) as i64);
        if j < d {
            return Ok(pi.commutator(&self.m(j)).conjugate(&self.m(1).pow(d as i64 - 1)));
        }
        let mut x = Word::identity();
        for t in i + 1..d {
            x.extend(&self.m(t).commutator(&pi).conjugate(&self.m(1).pow(t as i64 - 1)));
        }
        x.extend(&self.intermediate_word(i));
        Ok(x)
    }

    /// A word with decomposition `(1, ..., 1, [m_i, m_j])`, verified.
    pub fn branch_witness(&self, dec: &Decider, i: usize, j: usize) -> Result<Word> {
        let w = self.branch_word(i, j)?;
        let target = self.unit_vector(self.d, self.m(i).commutator(&self.m(j)));
        if !self.has_decomposition(dec, &w, &target, &Permutation::identity(self.d)) {
            return Err(Error::Verification(format!(
                "branch witness ({i}, {j}) in M({}) does not decompose as (1, ..., 1, [m{i}, m{j}])",
                self.d
            )));
        }
        Ok(w)
    }

    fn intermediate_word(&self, i: usize) -> Word {
        let pi = self.m(i).pow((self.d + 1 - i) as i64);
        pi.conjugate(&self.m(1).pow(i as i64 - 1)).commutator(&self.m(self.d))
    }

    /// `[(m_i^(d+1-i))^(m1^(i-1)), m_d] = (1, ..., 1, [m_i, m_(i+1)], ..., [m_i, m_d])`, verified.
    pub fn intermediate_commutator_vector(&self, dec: &Decider, i: usize) -> Result<Word> {
        let d = self.d;
        if d < 3 || !(1..d).contains(&i) {
            return Err(Error::Precondition(format!(
                "need d >= 3 and 1 <= i <= d-1, got d={d}, i={i}"
            )));
        }
        let w = self.intermediate_word(i);
        let mut target = vec![Word::identity(); d];
        for (k, t) in target.iter_mut().enumerate().skip(i) {
            *t = self.m(i).commutator(&self.m(k + 1));
        }
        if !self.has_decomposition(dec, &w, &target, &Permutation::identity(d)) {
            return Err(Error::Verification(format!(
                "intermediate commutator vector i={i} in M({d})"
            )));
        }
        Ok(w)
    }

    fn require_d2(&self) -> Result<()> {
        if self.d != 2 {
            return Err(Error::Precondition(format!(
                "the abelianization criterion is only established for d = 2, not d = {}",
                self.d
            )));
        }
        Ok(())
    }

    /// Membership in `M(2)'`: both exponent sums vanish.
    pub fn derived_membership_d2(&self, w: &Word) -> Result<bool> {
        self.require_d2()?;
        Ok(abelianization_exponents(&self.pres, w).iter().all(|&e| e == 0))
    }

    /// For `h = (h1, h2)` in `M(2)'`, checks `h1 h2` in `M(2)'`. Vacuously true
    /// outside the derived subgroup.
    pub fn rho_check_d2(&self, w: &Word) -> Result<bool> {
        self.require_d2()?;
        if !self.pres.stabilizes_level(w, 1) {
            return Err(Error::Precondition("element does not stabilize the first level".into()));
        }
        if !self.derived_membership_d2(w)? {
            return Ok(true);
        }
        let (s, _) = self.pres.decompose(w);
        self.derived_membership_d2(&(&s[0] * &s[1]))
    }

    /// Checks `lhs = (rhs[0], ..., rhs[d-1]) root` for expressions in the
    /// generator names.
    pub fn check_display(&self, dec: &Decider, lhs: &str, rhs: &[&str], root: &Permutation) -> Result<bool> {
        let w = self.pres.parse(lhs)?;
        let expected = rhs.iter().map(|s| self.pres.parse(s)).collect::<Result<Vec<_>>>()?;
        Ok(self.has_decomposition(dec, &w, &expected, root))
    }

    /// The two section displays used for `M(2)/M(2)'`, plus the congruence
    /// `[m1,m2]^(m1) = (m1^-1 m2, m2^-1 m1) mod M' x M'` under the exponent
    /// criterion.
    pub fn lemma_zz_identity_check(&self, dec: &Decider) -> Result<Vec<ReportItem>> {
        self.require_d2()?;
        let id = Permutation::identity(2);
        let mut items = Vec::new();
        for (name, lhs, rhs) in LEMMA_ZZ_DISPLAYS {
            items.push(timed(name, &[lhs], || {
                let ok = self.check_display(dec, lhs, &rhs, &id)?;
                Ok((ok, format!("{lhs} = ({}, {})", rhs[0], rhs[1])))
            }));
        }
        items.push(timed("lemma-zz congruence mod M'xM'", &["[m1,m2]^(m1)"], || {
            let h = self.pres.parse("[m1,m2]^(m1)")?;
            let t = [self.pres.parse("m1^-1*m2")?, self.pres.parse("m2^-1*m1")?];
            let (s, r) = self.pres.decompose(&h);
            // h (t1, t2)^-1 has sections h_i t_i^-1 because h fixes level one.
            let ok = r.is_identity()
                && (0..2).all(|k| self.derived_membership_d2(&(&s[k] * &t[k].inverse())).unwrap_or(false));
            Ok((
                ok,
                "sections of [m1,m2]^(m1) * (m1^-1*m2, m2^-1*m1)^-1 have zero exponents".into(),
            ))
        }));
        Ok(items)
    }
}

/// `(name, element, sections)` of the displays checked for `M(2)/M(2)'`.
pub const LEMMA_ZZ_DISPLAYS: [(&str, &str, [&str; 2]); 2] = [
    ("lemma-zz [m1,m2] display", "[m1,m2]", ["[m1,m2]*m2^-1*m1", "m1^-1*m2"]),
    (
        "lemma-zz [m1,m2]^(m1) display",
        "[m1,m2]^(m1)",
        ["m1^-2*m2*m1", "m1^-1*m2^-1*m1^2"],
    ),
];

/// Signed generator counts; a homomorphism from the free group to `Z^g`.
pub fn abelianization_exponents(pres: &Presentation, w: &Word) -> Vec<i64> {
    w.exponents(pres.generator_count())
}

#[derive(Clone, Debug)]
pub struct ReportItem {
    pub name: String,
    pub passed: bool,
    pub witnesses: Vec<String>,
    pub detail: String,
    pub elapsed: Duration,
}

fn timed<S: AsRef<str>>(name: &str, witnesses: &[S], f: impl FnOnce() -> Result<(bool, String)>) -> ReportItem {
    let start = Instant::now();
    let (passed, detail) = match f() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    ReportItem {
        name: name.to_string(),
        passed,
        witnesses: witnesses.iter().map(|s| s.as_ref().to_string()).collect(),
        detail,
        elapsed: start.elapsed(),
    }
}

#[derive(Clone, Debug)]
pub struct GoldenReport {
    pub title: String,
    pub items: Vec<ReportItem>,
}

impl GoldenReport {
    pub fn new(title: String, mut items: Vec<ReportItem>) -> Self {
        items.sort_by(|a, b| a.name.cmp(&b.name));
        Self { title, items }
    }

    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportItem> {
        self.items.iter().filter(|i| !i.passed)
    }

    pub fn render(&self, timings: bool) -> String {
        let mut out = format!("{}\n", self.title);
        for item in &self.items {
            let mark = if item.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("  [{mark}] {}: {}", item.name, item.detail));
            if timings {
                out.push_str(&format!(" ({:.1} ms)", item.elapsed.as_secs_f64() * 1e3));
            }
            out.push('\n');
        }
        let failed = self.failures().count();
        out.push_str(&format!("{} items, {} failed\n", self.items.len(), failed));
        out
    }
}

impl fmt::Display for GoldenReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

type Check<'a> = Box<dyn Fn() -> ReportItem + Send + Sync + 'a>;

/// Runs every displayed identity applicable to `M(d)`.
pub fn identity_suite(d: usize) -> Result<GoldenReport> {
    let mf = MFamily::new(d)?;
    let p = mf.presentation();
    let dec = Decider::new(p);
    let show = |w: &Word| p.show(w);
    let id = Permutation::identity(d);
    let mut checks: Vec<Check> = Vec::new();

    checks.push(Box::new(|| {
        timed("generator table", &[] as &[&str], || {
            let mut ok = p.generator_count() == d;
            for i in 1..d {
                let g = &p.generators()[i - 1];
                let expected = mf.unit_vector(d + 1 - i, mf.m(i));
                ok &= g.sections == expected && g.root == Permutation::cycle_prefix(d, d + 1 - i);
            }
            let last = &p.generators()[d - 1];
            ok &= last.root.is_identity() && last.sections == (0..d).map(Word::generator).collect::<Vec<_>>();
            Ok((
                ok,
                format!("m_i = (1,..,m_i@{{d+1-i}},..,1)(1..d+1-i), m{d} = (m1,..,m{d})"),
            ))
        })
    }));

    checks.push(Box::new(|| {
        let w = mf.m(1).pow(d as i64);
        timed("diagonal m1^d", &[show(&w)], || {
            let ok = mf.has_decomposition(&dec, &w, &vec![mf.m(1); d], &id);
            Ok((ok, format!("m1^{d} = (m1, ..., m1)")))
        })
    }));

    for fw in mf.fractal_witnesses() {
        let dec = &dec;
        let mf = &mf;
        checks.push(Box::new(move || {
            let target = &p.names()[fw.target];
            timed(&format!("fractal witness -> {target}"), &[show(&fw.word)], || {
                let stab = p.stabilizes_level(&fw.word, 1);
                let last = p.level_one_section(&fw.word, d)?;
                let ok = stab && dec.are_equal(&last, &mf.m(fw.target + 1)).is_yes();
                Ok((ok, format!("{} in St(1) with last section {target}", show(&fw.word))))
            })
        }));
    }

    checks.push(Box::new(|| {
        timed("fractality criterion", &[] as &[&str], || {
            let witnesses: Vec<(Word, usize)> =
                mf.fractal_witnesses().into_iter().map(|w| (w.word, w.target)).collect();
            let ok = analysis::fractality_check(&dec, &witnesses, d)?;
            Ok((
                ok,
                format!("first level transitive and St(x) sections at x={d} cover all generators"),
            ))
        })
    }));

    checks.push(Box::new(|| {
        let c = mf.m(1).commutator(&mf.m(2));
        timed("commutator [m1,m2] decomposition", &[show(&c)], || {
            if d == 2 {
                let ok = mf.check_display(&dec, "[m1,m2]", &["m1^-1*m2^-1*m1^2", "m1^-1*m2"], &id)?;
                Ok((ok, "[m1,m2] = (m1^-1*m2^-1*m1^2, m1^-1*m2)".into()))
            } else {
                let mut expected = vec![Word::identity(); d];
                expected[1] = mf.m(2).inverse();
                expected[d - 1] = mf.m(2);
                let root = Permutation::from_cycles(d, &[vec![1, 2, d]])?;
                let ok = mf.has_decomposition(&dec, &c, &expected, &root);
                Ok((ok, format!("[m1,m2] = (1, m2^-1, 1, ..., 1, m2)(1 2 {d})")))
            }
        })
    }));

    for i in 1..d {
        for j in i + 1..=d {
            let dec = &dec;
            let mf = &mf;
            checks.push(Box::new(move || {
                let w = mf.branch_word(i, j).unwrap_or_default();
                timed(&format!("branch witness ({i},{j})"), &[show(&w)], || {
                    mf.branch_witness(dec, i, j)?;
                    Ok((true, format!("= (1, ..., 1, [m{i},m{j}])")))
                })
            }));
        }
    }

    if d >= 3 {
        for i in 1..d {
            let dec = &dec;
            let mf = &mf;
            checks.push(Box::new(move || {
                timed(
                    &format!("intermediate commutator vector i={i}"),
                    &[show(&mf.intermediate_word(i))],
                    || {
                        mf.intermediate_commutator_vector(dec, i)?;
                        Ok((true, format!("= (1 x{i}, [m{i},m{}], ..., [m{i},m{d}])", i + 1)))
                    },
                )
            }));
        }
        checks.push(Box::new(|| {
            let c = mf.m(1).commutator(&mf.m(2));
            timed("order of [m1,m2]", &[show(&c)], || {
                let cube = dec.is_identity(&c.pow(3)).is_yes();
                let order = dec.order_bounded(&c, 64)?;
                Ok((
                    cube && order == OrderResult::Finite(3),
                    format!("[m1,m2]^3 = 1, order {order:?}"),
                ))
            })
        }));
    }

    for i in 1..=d {
        let dec = &dec;
        let mf = &mf;
        checks.push(Box::new(move || {
            timed(&format!("infinite order m{i}"), &[format!("m{i}")], || {
                let cert = dec.infinite_order_certificate(&mf.m(i), dec.default_certificate_depth())?;
                let ok = match (&cert, i < d) {
                    (
                        Some(InfiniteOrderCertificate::PowerSectionDescent {
                            period, exponent: 1, ..
                        }),
                        true,
                    ) => *period == (d + 1 - i) as u64,
                    (Some(InfiniteOrderCertificate::SectionDominance { .. }), false) => true,
                    _ => false,
                };
                let rule = match &cert {
                    Some(InfiniteOrderCertificate::PowerSectionDescent { .. }) => "descent",
                    Some(InfiniteOrderCertificate::SectionDominance { .. }) => "section dominance",
                    None => "none found",
                };
                Ok((ok, format!("certificate by {rule}")))
            })
        }));
    }

    checks.push(Box::new(|| {
        let w = mf.m(d).conjugate(&mf.m(1));
        timed("non-contraction certificate", &[show(&w)], || {
            let cert = analysis::non_contraction_certificate(&dec, &w, 20, 4)?;
            let Some(cert) = cert else {
                return Ok((false, "no certificate".into()));
            };
            let vertex_ok = d == 2 || cert.self_section_vertex == Vertex(vec![1]);
            // A contracting outcome would contradict the certificate.
            let nucleus = analysis::nucleus_search(&dec, 40, 4);
            let ok = vertex_ok && !matches!(nucleus, analysis::NucleusOutcome::Contracting(_));
            Ok((
                ok,
                format!(
                    "fixes {} with self-section, infinite order, {} powers distinct",
                    cert.self_section_vertex, cert.distinct_powers_checked
                ),
            ))
        })
    }));

    if d == 2 {
        checks.push(Box::new(|| {
            let w = mf.m(1).pow(2).commutator(&mf.m(2));
            timed("rho [m1^2,m2]", &[show(&w)], || {
                let ok = mf.rho_check_d2(&w)?;
                Ok((ok, "h = (1, [m1,m2]) in M' gives h1*h2 in M'".into()))
            })
        }));
    }

    let mut items: Vec<ReportItem> = checks.par_iter().map(|c| c()).collect();
    if d == 2 {
        items.extend(mf.lemma_zz_identity_check(&dec)?);
    }
    Ok(GoldenReport::new(format!("identity suite for M({d})"), items))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_small_members() {
        let p = build_m(3).unwrap();
        assert_eq!(
            p.to_definition(),
            "degree 3\ngen m1 = (1, 1, m1) (1 2 3)\ngen m2 = (1, m2, 1) (1 2)\ngen m3 = (m1, m2, m3) ()\n"
        );
        let p = build_m(2).unwrap();
        assert_eq!(
            p.to_definition(),
            "degree 2\ngen m1 = (1, m1) (1 2)\ngen m2 = (m1, m2) ()\n"
        );
        assert!(matches!(build_m(1), Err(Error::DegreeTooSmall(1))));
        assert!(build_m(6).unwrap().is_letter_bounded());
    }

    #[test]
    fn fractal_witness_sections() {
        let mf = MFamily::new(3).unwrap();
        let p = mf.presentation();
        let w = &mf.fractal_witnesses()[1];
        assert_eq!(p.show(&w.word), "m1^-1*m3*m1");
        let (s, r) = p.decompose(&w.word);
        assert!(r.is_identity());
        assert_eq!(s, vec![w.word.clone(), mf.m(1), mf.m(2)]);
        for d in 2..=6 {
            let mf = MFamily::new(d).unwrap();
            let mut targets: Vec<usize> = mf.fractal_witnesses().iter().map(|w| w.target).collect();
            targets.sort();
            assert_eq!(targets, (0..d).collect::<Vec<_>>());
        }
    }

    #[test]
    fn branch_witness_examples() {
        let mf = MFamily::new(2).unwrap();
        let dec = Decider::new(mf.presentation());
        let w = mf.branch_witness(&dec, 1, 2).unwrap();
        assert_eq!(w, mf.presentation().parse("[m1^2,m2]").unwrap());

        let mf = MFamily::new(3).unwrap();
        let dec = Decider::new(mf.presentation());
        let w = mf.branch_witness(&dec, 1, 2).unwrap();
        assert_eq!(w, mf.presentation().parse("[m1^3,m2]^(m1^2)").unwrap());
        mf.branch_witness(&dec, 2, 3).unwrap();
        assert!(mf.branch_witness(&dec, 2, 2).is_err());
    }

    #[test]
    fn intermediate_vectors() {
        for d in 3..=4 {
            let mf = MFamily::new(d).unwrap();
            let dec = Decider::new(mf.presentation());
            for i in 1..d {
                mf.intermediate_commutator_vector(&dec, i).unwrap();
            }
        }
        let mf = MFamily::new(2).unwrap();
        let dec = Decider::new(mf.presentation());
        assert!(mf.intermediate_commutator_vector(&dec, 1).is_err());
    }

    #[test]
    fn d2_abelianization() {
        let mf = MFamily::new(2).unwrap();
        let p = mf.presentation();
        let w = |s: &str| p.parse(s).unwrap();
        assert_eq!(abelianization_exponents(p, &w("m1^2*m2")), vec![2, 1]);
        assert_eq!(abelianization_exponents(p, &w("m1^-1*m2")), vec![-1, 1]);
        assert!(mf.derived_membership_d2(&w("[m1,m2]^(m2)")).unwrap());
        assert!(!mf.derived_membership_d2(&w("m1^2")).unwrap());
        assert!(mf.derived_membership_d2(&Word::identity()).unwrap());
        assert!(mf.rho_check_d2(&w("[m1^2,m2]")).unwrap());
        assert!(mf.rho_check_d2(&w("m2")).unwrap());
        assert!(mf.rho_check_d2(&w("m1")).is_err());
        let m3 = MFamily::new(3).unwrap();
        assert!(m3.derived_membership_d2(&Word::identity()).is_err());
    }

    #[test]
    fn lemma_displays_and_negative_control() {
        let mf = MFamily::new(2).unwrap();
        let dec = Decider::new(mf.presentation());
        let items = mf.lemma_zz_identity_check(&dec).unwrap();
        assert_eq!(items.len(), 3);
        assert!(items.iter().all(|i| i.passed), "{items:?}");
        let id = Permutation::identity(2);
        // sign of the final m1 flipped
        assert!(!mf
            .check_display(&dec, "[m1,m2]^(m1)", &["m1^-2*m2*m1^-1", "m1^-1*m2^-1*m1^2"], &id)
            .unwrap());
        assert!(!mf
            .check_display(&dec, "[m1,m2]", &["[m1,m2]*m2*m1", "m1^-1*m2"], &id)
            .unwrap());
    }

    #[test]
    fn suite_small_degrees() {
        for d in 2..=3 {
            let report = identity_suite(d).unwrap();
            assert!(report.passed(), "{}", report.render(true));
        }
    }
}
