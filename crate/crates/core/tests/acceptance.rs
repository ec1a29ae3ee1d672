//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

#![allow(clippy::int_plus_one)]

use std::process::ExitCode;
use std::sync::{Arc, OnceLock};
use std::time::{Duration, Instant};

use verbal_core::catalog::{builtin, builtin_catalog, CatalogEntry};
use verbal_core::cli::DEFAULT_WORDS;
use verbal_core::eval::{value_set_naive, width, Evaluator};
use verbal_core::group::{ElemId, PermGroup};
use verbal_core::parse::{parse, render, RenderMode};
use verbal_core::pcg::{build_derived, build_with, dietzmann_decompose, verify_pcg_with};
use verbal_core::verify::{check_theorem_a, check_three_subgroup, run_suite, CheckReport, Status};
use verbal_core::word::{all_words_up_to, cut_below_level, is_extension, Section, WordTree};
use verbal_core::Error;

type Outcome = Result<String, String>;

/// Name, check, time limit in seconds.
type Criterion = (&'static str, fn() -> Outcome, u64);

fn w(s: &str) -> WordTree {
    parse(s).unwrap()
}

fn catalog() -> &'static [CatalogEntry] {
    static C: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    C.get_or_init(|| builtin_catalog().unwrap())
}

fn soluble() -> impl Iterator<Item = &'static CatalogEntry> {
    catalog().iter().filter(|e| e.soluble)
}

fn benchmark_words() -> Vec<WordTree> {
    DEFAULT_WORDS.iter().map(|s| w(s)).collect()
}

fn suite() -> &'static [CheckReport] {
    static S: OnceLock<Vec<CheckReport>> = OnceLock::new();
    S.get_or_init(|| {
        let groups: Vec<Arc<PermGroup>> = catalog().iter().map(|e| e.group.clone()).collect();
        run_suite(&groups, &benchmark_words())
    })
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(r: &CheckReport, k: &str) -> Result<u64, String> {
    r.quantities
        .get(k)
        .and_then(|v| v.as_u64())
        .ok_or_else(|| format!("{} {} {}: no numeric {k}", r.subject, r.group, r.word))
}

fn word_measures() -> Outcome {
    ensure(w("g4").defect() == 8, || "defect of g4".into())?;
    ensure(w("[g3,g3]").defect() == 4, || "defect of [g3,g3]".into())?;
    for h in 0..=4 {
        ensure(WordTree::delta(h).unwrap().defect() == 0, || format!("defect of d{h}"))?;
    }
    Ok("defect(g4)=8, defect([g3,g3])=4, defect(d0..d4)=0".into())
}

fn figures() -> Outcome {
    ensure(is_extension(&w("[[g3,g3],[d2,g3]]"), &w("[g4,d2]")), || "extension relation".into())?;
    let t = w("[g4,g4]");
    let cut = cut_below_level(&t, 0).map_err(|e| e.to_string())?;
    let labels: Vec<String> = cut.members().map(|v| t.label(v).unwrap()).collect();
    let levels: Vec<usize> = cut.members().map(|v| t.level_of(v).unwrap()).collect();
    ensure(
        labels == ["[x1,x2]", "x3", "x4", "[x5,x6]", "x7", "x8"] && levels == [1, 1, 2, 1, 1, 2],
        || format!("cut members {labels:?} at levels {levels:?}"),
    )?;
    Ok("extension holds; cut of [g4,g4] below level 0 has 6 members".into())
}

fn oracle() -> Outcome {
    let words = ["x1", "g2", "g3", "g4", "d2"].map(w);
    let mut pairs = 0;
    for e in catalog().iter().filter(|e| e.group.order() <= 12) {
        let ev = Evaluator::new(e.group.clone());
        for word in &words {
            let fast = ev.value_set(word, None).map_err(|e| e.to_string())?;
            let slow = value_set_naive(&e.group, word).map_err(|e| e.to_string())?;
            ensure(fast.values() == slow.values(), || format!("{} {word}", e.name))?;
            pairs += 1;
        }
    }
    let s3 = builtin("S3").unwrap().group;
    let wd = width(&s3, &w("g2"), None).map_err(|e| e.to_string())?;
    ensure(wd == 1, || format!("width(S3, g2) = {wd}"))?;
    Ok(format!("{pairs} group/word pairs agree; width(S3,g2)=1"))
}

fn symmetry() -> Outcome {
    let reports: Vec<_> = suite().iter().filter(|r| r.subject == "symmetry").collect();
    for r in &reports {
        ensure(r.status == Status::Ok, || format!("{} {}: {:?}", r.group, r.word, r.reason))?;
    }
    Ok(format!("{} value sets closed under inversion and conjugation", reports.len()))
}

fn three_subgroup() -> Outcome {
    let mut n = 0;
    for name in ["S4", "S3xS3"] {
        let g = builtin(name).unwrap().group;
        let t1 = w("[x1,x2]");
        let t2 = w("[g4,g4]");
        let t3 = w("g3");
        let (p, q) = t3.children(t3.root()).unwrap().unwrap();
        let cases = [
            (&t1, w("x1"), Section::leaves(&t1)),
            (&t2, w("d1"), cut_below_level(&t2, 0).unwrap()),
            (&t3, w("x1"), Section::new(&t3, [p, q]).unwrap()),
        ];
        for (t, gamma, section) in &cases {
            let r = check_three_subgroup(&g, t, gamma, section);
            ensure(r.ok, || format!("{name} {t}: {:?}", r.reason))?;
            n += 1;
        }
    }
    Ok(format!("{n} inclusions hold"))
}

fn derived() -> Outcome {
    let mut n = 0;
    for e in soluble() {
        let d = e.derived_length.unwrap();
        let ev = Evaluator::new(e.group.clone());
        for i in 0..=2usize {
            let s = build_derived(&e.group, i, None).map_err(|x| format!("{} i={i}: {x}", e.name))?;
            let r = verify_pcg_with(&ev, &s).map_err(|x| x.to_string())?;
            ensure(r.ok, || format!("{} i={i}: {:?}", e.name, r.failures))?;
            let bound = (1usize << d).saturating_sub(1 << i);
            ensure(s.len() <= bound, || format!("{} i={i}: length {} > {bound}", e.name, s.len()))?;
            ensure(s.top() == e.group.derived_series().term(i), || format!("{} i={i}: wrong top", e.name))?;
            n += 1;
        }
    }
    Ok(format!("{n} derived-word series verified within length bounds"))
}

fn theorem_b() -> Outcome {
    let mut n = 0;
    for e in soluble() {
        let ev = Evaluator::new(e.group.clone());
        for word in benchmark_words() {
            let s = match build_with(&ev, &word, None) {
                Ok(s) => s,
                Err(Error::Invariant(m)) => return Err(format!("{} {word}: assertion fired: {m}", e.name)),
                Err(x) => return Err(format!("{} {word}: {x}", e.name)),
            };
            let r = verify_pcg_with(&ev, &s).map_err(|x| x.to_string())?;
            ensure(r.ok, || format!("{} {word}: {:?}", e.name, r.failures))?;
            let verbal = ev.verbal_subgroup(&word, None).map_err(|x| x.to_string())?;
            ensure(*s.top() == verbal, || format!("{} {word}: top differs", e.name))?;
            ensure(
                s.base().is_normal() && s.steps().iter().all(|st| st.subgroup.is_normal()),
                || format!("{} {word}: non-normal term", e.name),
            )?;
            n += 1;
        }
    }
    Ok(format!("{n} series built and verified"))
}

fn soluble_bound() -> Outcome {
    let mut n = 0;
    for r in suite().iter().filter(|r| r.subject == "theorem-a") {
        if r.quantities.get("soluble") != Some(&serde_json::Value::Bool(true)) {
            continue;
        }
        ensure(r.ok, || format!("{} {}: {:?}", r.group, r.word, r.reason))?;
        let (m, order) = (q(r, "m")?, q(r, "verbal_order")?);
        ensure(order as u128 <= 1u128 << (m - 1), || format!("{} {}", r.group, r.word))?;
        n += 1;
    }
    for name in ["Q8", "D4"] {
        let r = check_theorem_a(&builtin(name).unwrap().group, &w("g2"));
        let (m, order) = (q(&r, "m")?, q(&r, "verbal_order")?);
        ensure(r.ok && m == 2 && order == 2, || format!("{name}: m={m} order={order}"))?;
    }
    Ok(format!("{n} soluble runs within 2^(m-1); tight for Q8 and D4"))
}

fn insoluble_bound() -> Outcome {
    let mut out = Vec::new();
    for name in ["A5", "S5"] {
        let g = builtin(name).unwrap().group;
        for word in ["g2", "d2"] {
            let r = check_theorem_a(&g, &w(word));
            ensure(r.ok, || format!("{name} {word}: {:?}", r.reason))?;
            let m = q(&r, "m")?;
            ensure(m >= 3, || format!("{name} {word}: m = {m}"))?;
            let mo = q(&r, "max_delta_value_order")?;
            ensure(mo <= (m - 1) * (m - 2), || format!("{name} {word}: order {mo}"))?;
            out.push(format!("{name}/{word} m={m}"));
        }
    }
    Ok(out.join(", "))
}

fn refinement() -> Outcome {
    let mut n = 0;
    for r in suite().iter().filter(|r| r.subject == "theorem-a") {
        if !r.quantities.contains_key("section_sum") {
            continue;
        }
        let (m, k, sum) = (q(r, "m")?, q(r, "k")?, q(r, "section_sum")?);
        ensure(k == 0 || sum <= m + k - 1, || format!("{} {}: {sum} > {m}+{k}-1", r.group, r.word))?;
        n += 1;
    }
    ensure(n > 0, || "no refinements in the suite".into())?;
    Ok(format!("{n} refinements within m + k - 1"))
}

fn dietzmann() -> Outcome {
    let g = builtin("A4").unwrap().group;
    let xs = Evaluator::new(g.clone())
        .value_set(&w("g2"), None)
        .map_err(|e| e.to_string())?
        .values()
        .to_vec();
    let span = g.subgroup(xs.iter().copied());
    for &y in span.members() {
        let r = dietzmann_decompose(&g, &xs, y).map_err(|e| e.to_string())?;
        let mut p = ElemId::IDENTITY;
        for (&c, &e) in xs.iter().zip(&r) {
            ensure((e as usize) < g.element_order(c), || "exponent above element order".into())?;
            p = g.mul(p, g.power(c, e as i64));
        }
        ensure(p == y, || format!("{} does not re-multiply", g.perm(y)))?;
    }
    Ok(format!("{} elements decomposed over {} commutators", span.order(), xs.len()))
}

fn round_trip() -> Outcome {
    let words = all_words_up_to(3);
    for t in &words {
        let back = parse(&render(t, RenderMode::Bracket)).map_err(|e| e.to_string())?;
        ensure(back == *t, || format!("{t} did not round-trip"))?;
    }
    Ok(format!("{} shapes", words.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("word measures", word_measures, 1),
        ("extension and section figures", figures, 1),
        ("value sets match the brute-force oracle", oracle, 60),
        ("value sets symmetric and conjugation-closed", symmetry, 600),
        ("three-subgroup inclusion", three_subgroup, 60),
        ("derived-word series", derived, 120),
        ("series for benchmark words", theorem_b, 600),
        ("soluble order bound", soluble_bound, 60),
        ("insoluble order and element-order bounds", insoluble_bound, 300),
        ("cyclic refinement accounting", refinement, 60),
        ("Dietzmann decomposition in A4", dietzmann, 30),
        ("parser round trip", round_trip, 10),
    ];
    let mut failed = 0;
    for (i, (name, f, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > Duration::from_secs(*limit) => Err(format!("took {elapsed:.2?}, limit {limit}s")),
            o => o,
        };
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({elapsed:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({elapsed:.2?})", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
