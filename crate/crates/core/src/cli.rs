//! Command-line front end. [`run`] returns the exit code and both output
//! streams so the binary and the tests share one code path.

use std::fmt::Write as _;
use std::path::Path;

use clap::{Args, Parser, Subcommand};

use crate::analysis::{self, NucleusOutcome};
use crate::decision::{Decider, OrderResult, Verdict};
use crate::error::{Error, Result};
use crate::mfamily::{self, abelianization_exponents, GoldenReport, ReportItem};
use crate::presentation::{load_presentation, Presentation};
use crate::word::Word;
use crate::wreath::{Portrait, Vertex, DEFAULT_PORTRAIT_LIMIT};

pub const DEFAULT_ORDER_BOUND: u64 = 64;
pub const DEFAULT_NUCLEUS_SIZE: usize = 200;
pub const DEFAULT_NUCLEUS_DEPTH: usize = 8;
pub const DEFAULT_PORTRAIT_DEPTH: usize = 4;
pub const DEFAULT_SELF_SECTION_DEPTH: usize = 4;

#[derive(Parser, Debug)]
#[command(
    name = "arbora",
    version,
    about = "Computations in self-similar groups of rooted tree automorphisms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GroupWord {
    /// Group definition file, or m:d for the built-in family member
    group: String,
    /// Word expression, e.g. "[m1,m2]^(m1^2)"
    word: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Inspect a group
    Group {
        #[command(subcommand)]
        action: GroupAction,
    },
    /// Sections at the first-level vertices and the root permutation
    Eval(GroupWord),
    /// Image of a vertex
    Act {
        #[command(flatten)]
        gw: GroupWord,
        vertex: String,
    },
    /// Section at a vertex
    Section {
        #[command(flatten)]
        gw: GroupWord,
        vertex: String,
    },
    /// Portrait of root permutations down to a depth
    Portrait {
        #[command(flatten)]
        gw: GroupWord,
        #[arg(long, default_value_t = DEFAULT_PORTRAIT_DEPTH)]
        depth: usize,
        /// Emit Graphviz DOT
        #[arg(long)]
        dot: bool,
    },
    /// Decide whether a word is the identity
    Identity(GroupWord),
    /// Decide whether two words are equal
    Equal { group: String, left: String, right: String },
    /// Order of an element up to a bound
    Order {
        #[command(flatten)]
        gw: GroupWord,
        #[arg(long, default_value_t = DEFAULT_ORDER_BOUND)]
        bound: u64,
    },
    /// Search for certificates
    Certify {
        #[command(subcommand)]
        what: CertifyCommand,
    },
    /// Orbit of 1...1 on a level
    Orbit {
        group: String,
        #[arg(long)]
        level: usize,
    },
    /// Bounded search for a finite nucleus
    Nucleus {
        group: String,
        #[arg(long, default_value_t = DEFAULT_NUCLEUS_SIZE)]
        max_size: usize,
        #[arg(long, default_value_t = DEFAULT_NUCLEUS_DEPTH)]
        max_depth: usize,
    },
    /// Identity suite for m:d, or a battery of checks for a group file
    Verify {
        group: String,
        /// Include per-item timings (output is then not reproducible)
        #[arg(long)]
        timings: bool,
    },
    /// Finite-order elements among short words
    ScanTorsion {
        group: String,
        #[arg(long)]
        max_len: usize,
        #[arg(long)]
        max_order: u64,
    },
    /// Signed generator counts
    Exponents(GroupWord),
}

#[derive(Subcommand, Debug)]
enum GroupAction {
    /// Print the degree and the generator table
    Show { group: String },
}

#[derive(Subcommand, Debug)]
enum CertifyCommand {
    /// Infinite order by section descent
    InfiniteOrder {
        #[command(flatten)]
        gw: GroupWord,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Non-contraction via a self-replicating element of infinite order
    NonContracting {
        #[command(flatten)]
        gw: GroupWord,
        #[arg(long, default_value_t = 20)]
        powers: u64,
        #[arg(long, default_value_t = DEFAULT_SELF_SECTION_DEPTH)]
        self_depth: usize,
    },
}

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Resolves `m:d` or a path to a group-definition file.
pub fn load_group(source: &str) -> Result<Presentation> {
    if let Some(d) = source.strip_prefix("m:") {
        let d: usize = d
            .parse()
            .map_err(|_| Error::Precondition(format!("bad built-in group {source:?}; expected m:<degree>")))?;
        return mfamily::build_m(d);
    }
    let text = std::fs::read_to_string(Path::new(source))?;
    load_presentation(&text)
}

fn portrait_limit() -> usize {
    std::env::var("ARBORA_MAX_DEPTH")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_PORTRAIT_LIMIT)
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match execute(cli.command) {
        Ok((code, stdout)) => Outcome {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn verdict_code(v: Verdict) -> i32 {
    if v.is_yes() {
        0
    } else {
        1
    }
}

fn execute(command: Command) -> Result<(i32, String)> {
    let mut out = String::new();
    let code = match command {
        Command::Group {
            action: GroupAction::Show { group },
        } => {
            let p = load_group(&group)?;
            out.push_str(&p.to_definition());
            writeln!(out, "# letter-bounded: {}", p.is_letter_bounded()).unwrap();
            0
        }
        Command::Eval(gw) => {
            let p = load_group(&gw.group)?;
            let w = p.parse(&gw.word)?;
            let (sections, root) = p.decompose(&w);
            let shown: Vec<String> = sections.iter().map(|s| p.show(s)).collect();
            writeln!(out, "({}) {root}", shown.join(", ")).unwrap();
            0
        }
        Command::Act { gw, vertex } => {
            let p = load_group(&gw.group)?;
            let w = p.parse(&gw.word)?;
            let v: Vertex = vertex.parse()?;
            writeln!(out, "{}", p.act(&w, &v)?).unwrap();
            0
        }
        Command::Section { gw, vertex } => {
            let p = load_group(&gw.group)?;
            let w = p.parse(&gw.word)?;
            let v: Vertex = vertex.parse()?;
            writeln!(out, "{}", p.show(&p.section_at(&w, &v)?)).unwrap();
            0
        }
        Command::Portrait { gw, depth, dot } => {
            let p = load_group(&gw.group)?;
            let w = p.parse(&gw.word)?;
            let portrait = p.portrait_with_limit(&w, depth, portrait_limit())?;
            if dot {
                out.push_str(&render_portrait_dot(&portrait));
            } else {
                render_portrait_text(&portrait, &mut Vec::new(), &mut out);
            }
            0
        }
        Command::Identity(gw) => {
            let p = load_group(&gw.group)?;
            let w = p.parse(&gw.word)?;
            let v = Decider::new(&p).is_identity(&w);
            writeln!(out, "{v}").unwrap();
            verdict_code(v)
        }
        Command::Equal { group, left, right } => {
            let p = load_group(&group)?;
            let (u, v) = (p.parse(&left)?, p.parse(&right)?);
            let verdict = Decider::new(&p).are_equal(&u, &v);
            writeln!(out, "{verdict}").unwrap();
            verdict_code(verdict)
        }
        Command::Order { gw, bound } => {
            let p = load_group(&gw.group)?;
            let w = p.parse(&gw.word)?;
            let result = Decider::new(&p).order_bounded(&w, bound)?;
            match &result {
                OrderResult::Finite(n) => writeln!(out, "Finite({n})").unwrap(),
                OrderResult::ExceedsBound(n) => writeln!(out, "ExceedsBound({n})").unwrap(),
                OrderResult::Divides(n) => writeln!(out, "Divides({n})").unwrap(),
                OrderResult::InfiniteCertified(cert) => {
                    writeln!(out, "InfiniteCertified").unwrap();
                    out.push_str(&cert.render(&p));
                }
            }
            match result {
                OrderResult::Finite(_) | OrderResult::InfiniteCertified(_) => 0,
                _ => 1,
            }
        }
        Command::Certify {
            what: CertifyCommand::InfiniteOrder { gw, depth },
        } => {
            let p = load_group(&gw.group)?;
            let w = p.parse(&gw.word)?;
            let dec = Decider::new(&p);
            let depth = depth.unwrap_or_else(|| dec.default_certificate_depth());
            match dec.infinite_order_certificate(&w, depth)? {
                Some(cert) => {
                    writeln!(out, "infinite order: certified").unwrap();
                    out.push_str(&cert.render(&p));
                    0
                }
                None => {
                    writeln!(out, "NotFound").unwrap();
                    1
                }
            }
        }
        Command::Certify {
            what: CertifyCommand::NonContracting { gw, powers, self_depth },
        } => {
            let p = load_group(&gw.group)?;
            let w = p.parse(&gw.word)?;
            let dec = Decider::new(&p);
            match analysis::non_contraction_certificate(&dec, &w, powers, self_depth)? {
                Some(cert) => {
                    writeln!(out, "non-contracting: certified").unwrap();
                    writeln!(out, "element: {}", p.show(&cert.element)).unwrap();
                    writeln!(out, "self-section vertex: {}", cert.self_section_vertex).unwrap();
                    writeln!(out, "distinct powers checked: {}", cert.distinct_powers_checked).unwrap();
                    writeln!(out, "infinite order:").unwrap();
                    out.push_str(&cert.infinite_order.render(&p));
                    0
                }
                None => {
                    writeln!(out, "NotFound").unwrap();
                    1
                }
            }
        }
        Command::Orbit { group, level } => {
            let p = load_group(&group)?;
            let r = analysis::level_orbit(&p, level, analysis::DEFAULT_ORBIT_BUDGET)?;
            writeln!(
                out,
                "level {}: orbit size {} of {}{}",
                r.level,
                r.orbit_size,
                r.level_size,
                if r.transitive() { " (transitive)" } else { "" }
            )
            .unwrap();
            if r.transitive() {
                0
            } else {
                1
            }
        }
        Command::Nucleus {
            group,
            max_size,
            max_depth,
        } => {
            if max_size == 0 || max_depth == 0 {
                return Err(Error::Precondition("nucleus bounds must be at least 1".into()));
            }
            let p = load_group(&group)?;
            let dec = Decider::new(&p);
            render_nucleus(
                &p,
                &analysis::nucleus_search(&dec, max_size, max_depth),
                max_size,
                &mut out,
            )
        }
        Command::Verify { group, timings } => {
            let report = if let Some(d) = group.strip_prefix("m:") {
                let d: usize = d
                    .parse()
                    .map_err(|_| Error::Precondition(format!("bad built-in group {group:?}")))?;
                mfamily::identity_suite(d)?
            } else {
                let p = load_group(&group)?;
                generic_battery(&p, &group)
            };
            out.push_str(&report.render(timings));
            if report.passed() {
                0
            } else {
                1
            }
        }
        Command::ScanTorsion {
            group,
            max_len,
            max_order,
        } => {
            let p = load_group(&group)?;
            let dec = Decider::new(&p);
            let found = analysis::torsion_scan(&dec, max_len, max_order)?;
            writeln!(
                out,
                "{} finite-order element(s) up to length {max_len}, order <= {max_order}",
                found.len()
            )
            .unwrap();
            for (w, n) in &found {
                writeln!(out, "{}\torder {n}", p.show(w)).unwrap();
            }
            0
        }
        Command::Exponents(gw) => {
            let p = load_group(&gw.group)?;
            let w = p.parse(&gw.word)?;
            let e: Vec<String> = abelianization_exponents(&p, &w).iter().map(|x| x.to_string()).collect();
            writeln!(out, "({})", e.join(", ")).unwrap();
            0
        }
    };
    Ok((code, out))
}

fn render_nucleus(p: &Presentation, outcome: &NucleusOutcome, max_size: usize, out: &mut String) -> i32 {
    match outcome {
        NucleusOutcome::Contracting(set) => {
            writeln!(out, "Contracting: nucleus candidate of size {}", set.len()).unwrap();
            for w in set {
                writeln!(out, "  {}", p.show(w)).unwrap();
            }
            0
        }
        NucleusOutcome::BoundExceeded {
            evidence,
            size,
            self_sections,
        } => {
            writeln!(out, "BoundExceeded: {size} elements > {max_size}").unwrap();
            writeln!(out, "first added elements:").unwrap();
            for w in evidence.iter().take(10) {
                writeln!(out, "  {}", p.show(w)).unwrap();
            }
            if !self_sections.is_empty() {
                writeln!(out, "self-replicating elements:").unwrap();
                for (w, v) in self_sections.iter().take(10) {
                    writeln!(out, "  {} fixes {v} with itself as section", p.show(w)).unwrap();
                }
            }
            1
        }
    }
}

fn info_item(name: &str, passed: bool, detail: String) -> ReportItem {
    ReportItem {
        name: name.to_string(),
        passed,
        witnesses: Vec::new(),
        detail,
        elapsed: Default::default(),
    }
}

/// Properties of an arbitrary presentation, with consistency checks.
fn generic_battery(p: &Presentation, source: &str) -> GoldenReport {
    let dec = Decider::new(p);
    let mut items = vec![info_item(
        "letter bounded",
        true,
        if p.is_letter_bounded() {
            "word problem decided".to_string()
        } else {
            "no; identity tests may answer unknown".to_string()
        },
    )];

    let mut levels = Vec::new();
    let mut n = 1;
    while (p.degree() as u64).checked_pow(n as u32).is_some_and(|s| s <= 4096) {
        match analysis::level_orbit(p, n, analysis::DEFAULT_ORBIT_BUDGET) {
            Ok(r) => levels.push(r),
            Err(_) => break,
        }
        n += 1;
    }
    let transitive_upto = levels.iter().take_while(|r| r.transitive()).count();
    // Transitivity on a level projects onto every level above it.
    let monotone = levels.iter().skip(transitive_upto).all(|r| !r.transitive());
    items.push(info_item(
        "level transitivity",
        monotone,
        format!("transitive on levels 1..{transitive_upto} of 1..{}", levels.len()),
    ));

    for g in 0..p.generator_count() {
        let w = Word::generator(g);
        let detail = match dec.order_bounded(&w, DEFAULT_ORDER_BOUND) {
            Ok(OrderResult::Finite(n)) => format!("order {n}"),
            Ok(OrderResult::InfiniteCertified(c)) => format!("infinite order ({}-step certificate)", c.depth()),
            Ok(OrderResult::ExceedsBound(b)) => format!("no identity power up to {b}"),
            Ok(OrderResult::Divides(n)) => format!("order divides {n}"),
            Err(e) => format!("error: {e}"),
        };
        items.push(info_item(&format!("order of {}", p.names()[g]), true, detail));
    }

    let outcome = analysis::nucleus_search(&dec, DEFAULT_NUCLEUS_SIZE, DEFAULT_NUCLEUS_DEPTH);
    let (ok, detail) = match &outcome {
        NucleusOutcome::Contracting(set) => (
            analysis::is_closed_set(&dec, set),
            format!("contracting candidate of size {}", set.len()),
        ),
        NucleusOutcome::BoundExceeded { size, .. } => (true, format!("no nucleus within {size} elements")),
    };
    items.push(info_item("nucleus search", ok, detail));
    GoldenReport::new(format!("checker battery for {source}"), items)
}

fn render_portrait_text(portrait: &Portrait, path: &mut Vec<usize>, out: &mut String) {
    let v = Vertex(path.clone());
    writeln!(out, "{}{v}: {}", "  ".repeat(path.len()), portrait.label).unwrap();
    for (k, child) in portrait.children.iter().enumerate() {
        path.push(k + 1);
        render_portrait_text(child, path, out);
        path.pop();
    }
}

/// Graphviz rendering: nodes `v`, `v.1`, `v.1.2`, ... labelled by the root
/// permutation in cycle notation, children left to right.
pub fn render_portrait_dot(portrait: &Portrait) -> String {
    fn walk(node: &Portrait, id: &str, out: &mut String) {
        writeln!(out, "  \"{id}\" [label=\"{}\"];", node.label).unwrap();
        for (k, child) in node.children.iter().enumerate() {
            let child_id = format!("{id}.{}", k + 1);
            walk(child, &child_id, out);
            writeln!(out, "  \"{id}\" -> \"{child_id}\";").unwrap();
        }
    }
    let mut out = String::from("digraph portrait {\n  node [shape=box];\n  ordering=out;\n");
    walk(portrait, "v", &mut out);
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_ok(args: &[&str]) -> Outcome {
        let mut argv = vec!["arbora"];
        argv.extend_from_slice(args);
        run(argv)
    }

    #[test]
    fn dot_rendering() {
        let p = mfamily::build_m(3).unwrap();
        let id = p.portrait(&Word::identity(), 0).unwrap();
        assert_eq!(
            render_portrait_dot(&id),
            "digraph portrait {\n  node [shape=box];\n  ordering=out;\n  \"v\" [label=\"()\"];\n}\n"
        );
        let dot = render_portrait_dot(&p.portrait(&p.parse("m1").unwrap(), 1).unwrap());
        assert!(dot.contains("\"v\" [label=\"(1 2 3)\"]"));
        assert!(dot.contains("\"v.1\" [label=\"()\"]"));
        assert!(dot.contains("\"v.2\" [label=\"()\"]"));
        assert!(dot.contains("\"v.3\" [label=\"(1 2 3)\"]"));
        let dot = render_portrait_dot(&p.portrait(&p.parse("m3").unwrap(), 1).unwrap());
        assert!(dot.contains("\"v\" [label=\"()\"]"));
        assert!(dot.contains("\"v.1\" [label=\"(1 2 3)\"]"));
        assert!(dot.contains("\"v.2\" [label=\"(1 2)\"]"));
        assert!(dot.contains("\"v.3\" [label=\"()\"]"));
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_ok(&["frobnicate"]).code, 2);
        assert_eq!(run_ok(&["eval", "m:3", "m9"]).code, 2);
        assert_eq!(run_ok(&["eval", "m:1", "m1"]).code, 2);
        assert_eq!(run_ok(&["eval", "/nonexistent/group", "a"]).code, 2);
        assert_eq!(run_ok(&["act", "m:3", "m1", "1.4"]).code, 2);
    }
}
