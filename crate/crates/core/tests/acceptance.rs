//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use latticemed::finite::{corpus, free_dl_count, nonconstant_monotone_functions};
use latticemed::suites::{run_suite, SuiteConfig, SuiteReport, Verdict};

type Criterion = fn(&SuiteConfig) -> Result<String, String>;

struct Outcome {
    ok: bool,
    note: String,
}

fn suites(names: &[&str], config: &SuiteConfig) -> Result<Vec<SuiteReport>, String> {
    names
        .iter()
        .map(|n| run_suite(n, config).map_err(|e| format!("{n}: {e}")))
        .collect()
}

fn all_passed(reports: &[SuiteReport]) -> Result<usize, String> {
    for r in reports {
        if let Some(bad) = r.cases.iter().find(|c| !c.verdict.is_ok()) {
            return Err(format!(
                "{} case {} is {} (witness {})",
                r.suite,
                bad.id,
                bad.verdict.as_str(),
                bad.witness.as_ref().map_or("none".into(), |w| w.to_string())
            ));
        }
    }
    Ok(reports.iter().map(SuiteReport::total_checks).sum())
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    if elapsed <= limit {
        Ok(())
    } else {
        Err(format!("took {elapsed:.1?}, limit {limit:?}"))
    }
}

fn ac1(c: &SuiteConfig) -> Result<String, String> {
    let lattices = corpus(5).map_err(|e| e.to_string())?.len();
    if lattices != 1 + 1 + 2 + 5 + 16 + 63 {
        return Err(format!("corpus has {lattices} lattices"));
    }
    let start = Instant::now();
    let checks = all_passed(&suites(&["prop-mk"], c)?)?;
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("{lattices} lattices, {checks} tuples, {:.1?}", start.elapsed()))
}

fn ac2(c: &SuiteConfig) -> Result<String, String> {
    let start = Instant::now();
    let checks = all_passed(&suites(&["symbolic-mk"], c)?)?;
    let v3 = free_dl_count(3).map_err(|e| e.to_string())?;
    let oracle = nonconstant_monotone_functions(3).map_err(|e| e.to_string())?;
    if v3 != 18 || oracle != 18 {
        return Err(format!("free DL on 3 generators: {v3} vs monotone {oracle}"));
    }
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!("{checks} identities, v=3 -> {v3}"))
}

fn ac3(c: &SuiteConfig) -> Result<String, String> {
    let r = run_suite("counterexample-sym-not-toi", c).map_err(|e| e.to_string())?;
    all_passed(std::slice::from_ref(&r))?;
    let case = r.case("named-pair").ok_or("no named-pair case")?;
    let text = |v: &Option<serde_json::Value>| v.as_ref().and_then(|x| x.as_str()).unwrap_or("").to_string();
    let (lhs, rhs) = (text(&case.lhs), text(&case.rhs));
    if case.verdict != Verdict::ExpectedFailConfirmed || lhs != "2" || rhs != "3/2" {
        return Err(format!("got {lhs} vs {rhs}"));
    }
    Ok(format!("T = {lhs}, T(f^g, fvg) = {rhs}"))
}

fn ac4(c: &SuiteConfig) -> Result<String, String> {
    let checks = all_passed(&suites(&["sum", "product"], c)?)?;
    Ok(format!("{checks} exact tuples"))
}

fn ac5(c: &SuiteConfig) -> Result<String, String> {
    let r = run_suite("funcal", c).map_err(|e| e.to_string())?;
    all_passed(std::slice::from_ref(&r))?;
    let cx = r.case("first-coordinate").ok_or("no counterexample case")?;
    if cx.checks > 100 {
        return Err(format!("counterexample needed {} trials", cx.checks));
    }
    Ok(format!("6 builtins x {} tuples, projection fails at trial {}", c.float_trials, cx.checks))
}

fn ac6(c: &SuiteConfig) -> Result<String, String> {
    let checks = all_passed(&suites(&["boxtimes"], c)?)?;
    Ok(format!("{checks} comparisons within {:e}", c.boxtimes_tol))
}

fn ac7(c: &SuiteConfig) -> Result<String, String> {
    let checks = all_passed(&suites(&["ortho-equivalence", "troitsky"], c)?)?;
    Ok(format!("{} random tensors plus fixtures, {checks} checks", c.tensors))
}

fn ac8(c: &SuiteConfig) -> Result<String, String> {
    let reports = suites(&["steady-equivalence"], c)?;
    let checks = all_passed(&reports)?;
    if reports[0].case("binomial-cross-terms").is_none() {
        return Err("binomial identity not run".into());
    }
    Ok(format!("{checks} checks"))
}

fn ac9(c: &SuiteConfig) -> Result<String, String> {
    let r = run_suite("root-power", c).map_err(|e| e.to_string())?;
    let checks = all_passed(std::slice::from_ref(&r))?;
    let odd = r.case("degree-3").map_or(0, |c| c.checks);
    if odd == 0 {
        return Err("no odd-degree cases".into());
    }
    Ok(format!("{checks} cases, {odd} of odd degree"))
}

fn ac10(c: &SuiteConfig) -> Result<String, String> {
    let reports = suites(&["genorthosym", "genorthsteady"], c)?;
    let checks = all_passed(&reports)?;
    Ok(format!("{} maps per lattice, {checks} evaluations", c.maps_per_lattice))
}

fn main() -> ExitCode {
    let config = SuiteConfig::default();
    let criteria: [(&str, &str, Criterion); 10] = [
        ("AC1", "order statistic properties on the poset corpus", ac1),
        ("AC2", "symbolic identities and free distributive lattice counts", ac2),
        ("AC3", "symmetric map that is not TOI: 2 vs 3/2", ac3),
        ("AC4", "sum and product invariance, exact", ac4),
        ("AC5", "functional calculus TOI", ac5),
        ("AC6", "boxtimes identity", ac6),
        ("AC7", "orthosymmetry equivalences", ac7),
        ("AC8", "steadiness equivalences and binomial identity", ac8),
        ("AC9", "root-power identity", ac9),
        ("AC10", "equivalence theorems on corpus lattices", ac10),
    ];
    let start = Instant::now();
    let mut outcomes = Vec::new();
    for (id, title, run) in criteria {
        let t = Instant::now();
        let outcome = match run(&config) {
            Ok(note) => Outcome { ok: true, note },
            Err(note) => Outcome { ok: false, note },
        };
        println!(
            "[{}] {id} {title}: {} ({:.1?})",
            if outcome.ok { "PASS" } else { "FAIL" },
            outcome.note,
            t.elapsed()
        );
        outcomes.push(outcome);
    }
    let total = start.elapsed();
    let in_time = total <= Duration::from_secs(300);
    println!(
        "[{}] total wall-clock {total:.1?} (limit 5 min)",
        if in_time { "PASS" } else { "FAIL" }
    );
    if outcomes.iter().all(|o| o.ok) && in_time {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
