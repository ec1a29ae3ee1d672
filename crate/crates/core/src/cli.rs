//! The `verbal` command line.
//!
//! Data goes to `out`, diagnostics to `err`. Exit codes: 0 success, 1 a
//! check failed, 2 bad usage or input, 3 a size cap was hit.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::catalog::{builtin, builtin_catalog, group_files_in, load_catalog};
use crate::error::{Error, Result};
use crate::eval::Evaluator;
use crate::group::PermGroup;
use crate::parse::{render, RenderMode};
use crate::pcg::{build_with, verify_pcg_with};
use crate::report::{write_json, SeriesRecord, SuiteReport};
use crate::verify::{
    check_symmetry_with, check_theorem_a_with, check_theorem_b_with, check_three_subgroup_with, run_suite,
    CheckReport, Status,
};
use crate::word::{cut_below_level, Section, VertexId, WordTree};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// Words run by `suite` when `--words` is absent.
pub const DEFAULT_WORDS: &[&str] = &["g2", "g3", "g4", "d1", "d2", "[g3,g3]"];

#[derive(Parser, Debug)]
#[command(name = "verbal", version, about = "Outer commutator words in finite permutation groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Inspect a word.
    #[command(subcommand)]
    Word(WordCommand),
    /// Count the values of a word and the order of its verbal subgroup.
    Eval {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        word: String,
        /// Work modulo the j-th term of the derived series.
        #[arg(long, value_name = "J")]
        mod_derived: Option<usize>,
    },
    /// Power-closed generated series.
    #[command(subcommand)]
    Pcg(PcgCommand),
    /// Run one check on one group and word.
    Check {
        kind: CheckArg,
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        word: String,
        /// Bracketing word for the three-subgroup check.
        #[arg(long, default_value = "d1")]
        gamma: String,
        /// Section for the three-subgroup check: `leaves`, `root`, `cut:I`,
        /// or comma-separated pre-order vertex indices.
        #[arg(long, default_value = "leaves")]
        section: String,
        /// Also write the report as JSON.
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
    /// Every check over a catalog and a list of words.
    Suite {
        /// Directory of `.grp` files to use instead of the built-in groups.
        #[arg(long, value_name = "DIR")]
        catalog: Option<PathBuf>,
        /// Keep the built-in groups when `--catalog` is given.
        #[arg(long)]
        with_builtin: bool,
        /// Words separated by `;`.
        #[arg(long, value_name = "LIST")]
        words: Option<String>,
        #[arg(long, value_name = "PATH")]
        json: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum WordCommand {
    /// Height, defect and size.
    Info { expr: String },
    /// Print the word as brackets or as an indented tree.
    Render {
        expr: String,
        #[arg(long, value_enum, default_value = "bracket")]
        mode: ModeArg,
    },
}

#[derive(Subcommand, Debug)]
enum PcgCommand {
    /// Build and verify the series from 1 to the verbal subgroup.
    Build {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        word: String,
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct GroupArg {
    /// A built-in group by name.
    #[arg(long)]
    group: Option<String>,
    /// A group definition file.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Bracket,
    Tree,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CheckArg {
    Symmetry,
    ThreeSubgroup,
    TheoremA,
    TheoremB,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Resource(_) => EXIT_RESOURCE,
        Error::Invariant(_) => EXIT_FAIL,
        _ => EXIT_USAGE,
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Word(WordCommand::Info { expr }) => {
            let w: WordTree = expr.parse()?;
            let m = w.measures();
            writeln!(out, "word {w}")?;
            writeln!(out, "height {}", m.height)?;
            writeln!(out, "defect {}", m.defect)?;
            writeln!(out, "vertices {}", m.vertex_count)?;
            writeln!(out, "indeterminates {}", m.indeterminate_count)?;
            Ok(EXIT_OK)
        }
        Command::Word(WordCommand::Render { expr, mode }) => {
            let w: WordTree = expr.parse()?;
            let mode = match mode {
                ModeArg::Bracket => RenderMode::Bracket,
                ModeArg::Tree => RenderMode::Tree,
            };
            let text = render(&w, mode);
            write!(out, "{text}")?;
            if !text.ends_with('\n') {
                writeln!(out)?;
            }
            Ok(EXIT_OK)
        }
        Command::Eval { group, word, mod_derived } => {
            let g = load_group(&group)?;
            let w: WordTree = word.parse()?;
            let ev = Evaluator::new(g.clone());
            let n = mod_derived.map(|j| g.derived_series().term(j).clone());
            let vs = ev.value_set(&w, n.as_ref())?;
            let verbal = ev.verbal_subgroup(&w, n.as_ref())?;
            let order = match &n {
                Some(n) => verbal.order() / n.order(),
                None => verbal.order(),
            };
            writeln!(out, "group {} (order {})", g.display_name(), g.order())?;
            writeln!(out, "word {w}")?;
            if let (Some(j), Some(n)) = (mod_derived, &n) {
                writeln!(out, "modulus G^({j}) (order {})", n.order())?;
            }
            writeln!(out, "m {}", vs.m())?;
            writeln!(out, "order {order}")?;
            Ok(EXIT_OK)
        }
        Command::Pcg(PcgCommand::Build { group, word, json }) => {
            let g = load_group(&group)?;
            let w: WordTree = word.parse()?;
            let ev = Evaluator::new(g.clone());
            let s = build_with(&ev, &w, None)?;
            let report = verify_pcg_with(&ev, &s)?;
            let rec = SeriesRecord::new(&s, &report);
            writeln!(out, "group {} word {} length {}", rec.group, rec.word, s.len())?;
            writeln!(out, "H0 order {}", rec.base_order)?;
            for (i, st) in rec.steps.iter().enumerate() {
                writeln!(out, "H{} order {} witnesses {}", i + 1, st.order, st.witnesses)?;
            }
            for f in &rec.failures {
                writeln!(err, "failure: {f}")?;
            }
            writeln!(out, "verified {}", if report.ok { "ok" } else { "fail" })?;
            if let Some(p) = json {
                write_json(&p, &rec)?;
            }
            Ok(if report.ok { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Check {
            kind,
            group,
            word,
            gamma,
            section,
            json,
        } => {
            let g = load_group(&group)?;
            let w: WordTree = word.parse()?;
            let ev = Evaluator::new(g);
            let r = match kind {
                CheckArg::Symmetry => check_symmetry_with(&ev, &w),
                CheckArg::ThreeSubgroup => {
                    let gamma: WordTree = gamma.parse()?;
                    let section = parse_section(&w, &section)?;
                    check_three_subgroup_with(&ev, &w, &gamma, &section)
                }
                CheckArg::TheoremA => check_theorem_a_with(&ev, &w),
                CheckArg::TheoremB => check_theorem_b_with(&ev, &w),
            };
            print_check(&r, out)?;
            if let Some(p) = json {
                write_json(&p, &r)?;
            }
            Ok(check_code(std::slice::from_ref(&r)))
        }
        Command::Suite {
            catalog,
            with_builtin,
            words,
            json,
        } => {
            let entries = match &catalog {
                Some(dir) => load_catalog(&group_files_in(dir)?, with_builtin)?,
                None => builtin_catalog()?,
            };
            let words = parse_word_list(words.as_deref())?;
            let groups: Vec<Arc<PermGroup>> = entries.iter().map(|e| e.group.clone()).collect();
            let reports = run_suite(&groups, &words);
            for r in reports.iter().filter(|r| r.status == Status::Fail) {
                writeln!(err, "FAIL {} {} {}: {}", r.subject, r.group, r.word, r.reason.as_deref().unwrap_or(""))?;
            }
            let code = check_code(&reports);
            let report = SuiteReport::new(reports);
            report.write(&json)?;
            let s = report.summary;
            writeln!(out, "checks {} ok {} fail {} skip {}", report.checks.len(), s.ok, s.fail, s.skip)?;
            Ok(code)
        }
    }
}

fn load_group(arg: &GroupArg) -> Result<Arc<PermGroup>> {
    match (&arg.group, &arg.file) {
        (Some(name), _) => Ok(builtin(name)?.group),
        (None, Some(path)) => load_file(path),
        (None, None) => Err(Error::arg("one of --group or --file is required")),
    }
}

fn load_file(path: &Path) -> Result<Arc<PermGroup>> {
    let mut entries = load_catalog(&[path.to_path_buf()], false)?;
    Ok(entries.remove(0).group)
}

/// `;`-separated words, or the defaults.
pub fn parse_word_list(list: Option<&str>) -> Result<Vec<WordTree>> {
    match list {
        None => DEFAULT_WORDS.iter().map(|w| w.parse()).collect(),
        Some(s) => s
            .split(';')
            .map(str::trim)
            .filter(|w| !w.is_empty())
            .map(|w| w.parse())
            .collect(),
    }
}

fn parse_section<'t>(w: &'t WordTree, spec: &str) -> Result<Section<'t>> {
    match spec {
        "leaves" => Ok(Section::leaves(w)),
        "root" => Ok(Section::root(w)),
        _ => {
            if let Some(level) = spec.strip_prefix("cut:") {
                let i = level
                    .parse()
                    .map_err(|_| Error::arg(format!("bad cut level {level:?}")))?;
                return cut_below_level(w, i);
            }
            let ids = spec
                .split(',')
                .map(|v| {
                    v.trim()
                        .parse()
                        .map(VertexId)
                        .map_err(|_| Error::arg(format!("bad vertex index {v:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            Section::new(w, ids)
        }
    }
}

fn print_check(r: &CheckReport, out: &mut dyn Write) -> Result<()> {
    let status = match r.status {
        Status::Ok => "ok",
        Status::Fail => "fail",
        Status::Skip => "skip",
    };
    writeln!(out, "{} {} {}: {status}", r.subject, r.group, r.word)?;
    for (k, v) in &r.quantities {
        writeln!(out, "  {k} {v}")?;
    }
    if let Some(c) = &r.counterexample {
        writeln!(out, "  counterexample {c}")?;
    }
    if let Some(reason) = &r.reason {
        writeln!(out, "  reason {reason}")?;
    }
    Ok(())
}

fn check_code(reports: &[CheckReport]) -> i32 {
    if reports.iter().any(|r| r.status == Status::Fail) {
        EXIT_FAIL
    } else if reports.iter().any(|r| r.resource_limited) {
        EXIT_RESOURCE
    } else {
        EXIT_OK
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["verbal"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn word_info() {
        let (code, out, _) = run_str(&["word", "info", "[g3,g3]"]);
        assert_eq!(code, 0);
        assert!(out.contains("height 3\n"));
        assert!(out.contains("defect 4\n"));
        assert!(out.contains("vertices 11\n"));
        let (_, out, _) = run_str(&["word", "info", "g4"]);
        assert!(out.contains("defect 8\n"));
    }

    #[test]
    fn eval_s3() {
        let (code, out, _) = run_str(&["eval", "--group", "S3", "--word", "g2"]);
        assert_eq!(code, 0);
        assert!(out.contains("m 3\n") && out.contains("order 3\n"), "{out}");
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_str(&["word", "info", "[x1"]).0, 2);
        assert_eq!(run_str(&["eval", "--group", "nope", "--word", "g2"]).0, 2);
        assert_eq!(run_str(&["frobnicate"]).0, 2);
        assert_eq!(run_str(&["--help"]).0, 0);
    }

    #[test]
    fn sections() {
        let w: WordTree = "[x1,x2]".parse().unwrap();
        assert_eq!(parse_section(&w, "leaves").unwrap().len(), 2);
        assert_eq!(parse_section(&w, "root").unwrap().len(), 1);
        assert_eq!(parse_section(&w, "1,2").unwrap().len(), 2);
        assert_eq!(parse_section(&w, "cut:0").unwrap().len(), 1);
        assert!(parse_section(&w, "0,1").is_err());
    }

    #[test]
    fn word_lists() {
        assert_eq!(parse_word_list(None).unwrap().len(), 6);
        assert_eq!(parse_word_list(Some("g2; d1;")).unwrap().len(), 2);
        assert!(parse_word_list(Some("g2;[x")).is_err());
    }
}
