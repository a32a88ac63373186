//! Benchmark harness: suite runs over the registry, performance profiles,
//! and the CSV formats consumed by plotting tools.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::problem::{ProblemRegistry, ProblemTag};
use crate::solver::{solve, Method, SolverConfig};

/// Which problems a suite run covers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Suite {
    Qcqp,
    Others,
    All,
    Named(Vec<String>),
}

/// One (problem, method) outcome of a suite run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub problem: String,
    pub method: Method,
    pub status: String,
    pub objective: f64,
    pub iterations: usize,
    pub time_s: f64,
    pub tag: ProblemTag,
}

impl RunRecord {
    pub fn solved(&self) -> bool {
        self.status == "Converged"
    }
}

/// Runs every (problem, method) pair of the suite sequentially (timings stay
/// clean) and returns records in canonical order: problem name, then method.
pub fn run_suite(
    registry: &ProblemRegistry,
    suite: &Suite,
    methods: &[Method],
    cfg: &SolverConfig,
) -> Result<Vec<RunRecord>> {
    if methods.is_empty() {
        return Err(Error::InvalidArguments("empty method set".into()));
    }
    let names: Vec<String> = match suite {
        Suite::Qcqp => registry
            .names_with_tag(ProblemTag::Qcqp)
            .into_iter()
            .map(String::from)
            .collect(),
        Suite::Others => registry
            .names_with_tag(ProblemTag::Other)
            .into_iter()
            .map(String::from)
            .collect(),
        Suite::All => registry.names().into_iter().map(String::from).collect(),
        Suite::Named(list) => list.clone(),
    };
    // resolve every name before any run starts
    for name in &names {
        registry.get(name)?;
    }

    let mut methods = methods.to_vec();
    methods.sort();
    methods.dedup();

    let mut records = Vec::with_capacity(names.len() * methods.len());
    for name in &names {
        let prob = registry.get(name)?;
        let tag = registry.tag(name)?;
        for &method in &methods {
            let mut run_cfg = cfg.clone();
            run_cfg.method = method;
            let report = solve(prob, &run_cfg);
            records.push(RunRecord {
                problem: name.clone(),
                method,
                status: report.status.kind().to_string(),
                objective: report.objective,
                iterations: report.iterations,
                time_s: report.wall_time_s,
                tag,
            });
        }
    }
    records.sort_by(|a, b| {
        a.problem
            .cmp(&b.problem)
            .then_with(|| a.method.to_string().cmp(&b.method.to_string()))
    });
    Ok(records)
}

/// Metric profiled across solvers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileMetric {
    Iters,
    Time,
}

impl std::str::FromStr for ProfileMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "iters" => Ok(ProfileMetric::Iters),
            "time" => Ok(ProfileMetric::Time),
            other => Err(Error::InvalidArguments(format!(
                "unknown metric {other:?} (expected iters or time)"
            ))),
        }
    }
}

/// One solver's profile: fraction of problems whose metric ratio against the
/// per-problem best is at most tau, as a right-continuous step function on
/// the sorted grid of finite ratios.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileCurve {
    pub method: String,
    pub points: Vec<(f64, f64)>,
}

/// Computes performance profiles. A problem enters when at least one method
/// solved it; a method that failed on an entering problem carries an infinite
/// ratio there, so it never lifts that method's curve.
pub fn performance_profile(
    records: &[RunRecord],
    metric: ProfileMetric,
) -> Result<Vec<ProfileCurve>> {
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut methods: Vec<String> = records.iter().map(|r| r.method.to_string()).collect();
    methods.sort();
    methods.dedup();
    let mut problems: Vec<String> = records.iter().map(|r| r.problem.clone()).collect();
    problems.sort();
    problems.dedup();

    let value = |r: &RunRecord| -> f64 {
        match metric {
            ProfileMetric::Iters => r.iterations as f64,
            ProfileMetric::Time => r.time_s,
        }
    };

    // ratios[problem][method] = metric / best over methods, infinity if unsolved
    let mut ratios: Vec<Vec<f64>> = Vec::new();
    let mut entering = 0usize;
    for p in &problems {
        let row: Vec<Option<f64>> = methods
            .iter()
            .map(|m| {
                records
                    .iter()
                    .find(|r| &r.problem == p && r.method.to_string() == *m && r.solved())
                    .map(value)
            })
            .collect();
        let best = row
            .iter()
            .flatten()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if !best.is_finite() {
            continue; // no method solved it: excluded from the denominator
        }
        entering += 1;
        ratios.push(
            row.iter()
                .map(|v| match v {
                    Some(val) if best > 0.0 => val / best,
                    Some(val) if *val == 0.0 => 1.0, // both zero: tie at the best
                    Some(_) => f64::INFINITY,
                    None => f64::INFINITY,
                })
                .collect(),
        );
    }
    if entering == 0 {
        return Err(Error::EmptyInput);
    }

    let mut grid: Vec<f64> = ratios
        .iter()
        .flatten()
        .copied()
        .filter(|t| t.is_finite())
        .collect();
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup();

    let curves = methods
        .iter()
        .enumerate()
        .map(|(mi, m)| {
            let points = grid
                .iter()
                .map(|&tau| {
                    let count = ratios.iter().filter(|row| row[mi] <= tau).count();
                    (tau, count as f64 / entering as f64)
                })
                .collect();
            ProfileCurve {
                method: m.clone(),
                points,
            }
        })
        .collect();
    Ok(curves)
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

pub const RUN_CSV_HEADER: &str = "problem,method,status,objective,iterations,time_s,tag";
pub const PROFILE_CSV_HEADER: &str = "method,tau,fraction";

/// Formats with 10 significant digits, positional where reasonable,
/// trailing zeros trimmed.
fn fmt_sig10(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.9e}", x);
    let epos = sci.find('e').unwrap();
    let exp: i32 = sci[epos + 1..].parse().unwrap();
    if (-4..13).contains(&exp) {
        let decimals = (9 - exp).max(0) as usize;
        trim_decimals(format!("{:.*}", decimals, x))
    } else {
        let mantissa = trim_decimals(sci[..epos].to_string());
        format!("{mantissa}e{exp}")
    }
}

fn trim_decimals(mut s: String) -> String {
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

/// Serializes run records: exact header, 10-significant-digit floats,
/// deterministic (problem, method) row order.
pub fn run_records_to_csv(records: &[RunRecord]) -> String {
    let mut rows = records.to_vec();
    rows.sort_by(|a, b| {
        a.problem
            .cmp(&b.problem)
            .then_with(|| a.method.to_string().cmp(&b.method.to_string()))
    });
    let mut out = String::from(RUN_CSV_HEADER);
    out.push('\n');
    for r in &rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.problem,
            r.method,
            r.status,
            fmt_sig10(r.objective),
            r.iterations,
            fmt_sig10(r.time_s),
            r.tag
        );
    }
    out
}

pub fn write_run_records(path: &Path, records: &[RunRecord]) -> Result<()> {
    fs::write(path, run_records_to_csv(records)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Parses a run-record CSV produced by [`run_records_to_csv`].
pub fn parse_run_records(text: &str, origin: &str) -> Result<Vec<RunRecord>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == RUN_CSV_HEADER => {}
        got => {
            return Err(Error::Csv {
                path: origin.to_string(),
                line: 1,
                what: format!("expected header {RUN_CSV_HEADER:?}, got {:?}", got.map(|g| g.1)),
            })
        }
    }
    let mut records = Vec::new();
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(Error::Csv {
                path: origin.to_string(),
                line: idx + 1,
                what: format!("expected 7 fields, got {}", fields.len()),
            });
        }
        let bad = |what: String| Error::Csv {
            path: origin.to_string(),
            line: idx + 1,
            what,
        };
        records.push(RunRecord {
            problem: fields[0].to_string(),
            method: fields[1].parse().map_err(|e| bad(format!("{e}")))?,
            status: fields[2].to_string(),
            objective: fields[3]
                .parse()
                .map_err(|e| bad(format!("objective: {e}")))?,
            iterations: fields[4]
                .parse()
                .map_err(|e| bad(format!("iterations: {e}")))?,
            time_s: fields[5].parse().map_err(|e| bad(format!("time_s: {e}")))?,
            tag: fields[6].parse().map_err(|e| bad(format!("{e}")))?,
        });
    }
    Ok(records)
}

pub fn read_run_records(path: &Path) -> Result<Vec<RunRecord>> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_run_records(&text, &path.display().to_string())
}

/// Serializes profile curves with the exact `method,tau,fraction` header,
/// rows ordered by method then tau.
pub fn profile_to_csv(curves: &[ProfileCurve]) -> String {
    let mut curves = curves.to_vec();
    curves.sort_by(|a, b| a.method.cmp(&b.method));
    let mut out = String::from(PROFILE_CSV_HEADER);
    out.push('\n');
    for c in &curves {
        for &(tau, fraction) in &c.points {
            let _ = writeln!(out, "{},{},{}", c.method, fmt_sig10(tau), fmt_sig10(fraction));
        }
    }
    out
}

pub fn write_profile(path: &Path, curves: &[ProfileCurve]) -> Result<()> {
    fs::write(path, profile_to_csv(curves)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(problem: &str, method: Method, solved: bool, iters: usize, time: f64) -> RunRecord {
        RunRecord {
            problem: problem.into(),
            method,
            status: if solved { "Converged" } else { "Unattained" }.into(),
            objective: 1.0,
            iterations: iters,
            time_s: time,
            tag: ProblemTag::Qcqp,
        }
    }

    #[test]
    fn profile_hand_enumerated_two_by_two() {
        // times: P1 (A=1, B=2), P2 (A=4, B=2)
        // ratios: A (1, 2), B (2, 1); both curves 0.5 at tau=1, 1.0 at tau=2
        let records = vec![
            rec("P1", Method::Arc, true, 10, 1.0),
            rec("P1", Method::Line, true, 10, 2.0),
            rec("P2", Method::Arc, true, 10, 4.0),
            rec("P2", Method::Line, true, 10, 2.0),
        ];
        let curves = performance_profile(&records, ProfileMetric::Time).unwrap();
        assert_eq!(curves.len(), 2);
        for c in &curves {
            assert_eq!(c.points, vec![(1.0, 0.5), (2.0, 1.0)]);
        }
    }

    #[test]
    fn profile_single_method_is_identically_one() {
        let records = vec![
            rec("P1", Method::Arc, true, 3, 0.5),
            rec("P2", Method::Arc, true, 9, 1.5),
        ];
        let curves = performance_profile(&records, ProfileMetric::Iters).unwrap();
        assert_eq!(curves.len(), 1);
        for &(tau, fraction) in &curves[0].points {
            assert!(tau >= 1.0);
            assert_eq!(fraction, 1.0);
        }
    }

    #[test]
    fn profile_unsolved_never_lifts_curve() {
        let records = vec![
            rec("P1", Method::Arc, true, 3, 1.0),
            rec("P1", Method::Line, false, 1000, 9.0),
            rec("P2", Method::Arc, true, 5, 1.0),
            rec("P2", Method::Line, true, 5, 1.0),
        ];
        let curves = performance_profile(&records, ProfileMetric::Iters).unwrap();
        let line = curves.iter().find(|c| c.method == "line").unwrap();
        let last = line.points.last().unwrap();
        assert_eq!(last.1, 0.5); // line solved 1 of the 2 entering problems
        // monotone, bounded by one
        for c in &curves {
            for pair in c.points.windows(2) {
                assert!(pair[0].1 <= pair[1].1);
                assert!(pair[1].0 > pair[0].0);
            }
            assert!(c.points.iter().all(|p| p.1 <= 1.0));
        }
    }

    #[test]
    fn profile_empty_input_errors() {
        match performance_profile(&[], ProfileMetric::Time) {
            Err(Error::EmptyInput) => {}
            other => panic!("expected EmptyInput, got {other:?}"),
        }
    }

    #[test]
    fn run_csv_exact_header_and_shape() {
        let records = vec![rec("MARATOS", Method::Arc, true, 3, 0.002)];
        let text = run_records_to_csv(&records);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], RUN_CSV_HEADER);
        assert!(lines[1].starts_with("MARATOS,arc,Converged,1,3,"));
    }

    #[test]
    fn run_csv_round_trip() {
        let records = vec![
            RunRecord {
                problem: "HS63".into(),
                method: Method::ArcSimplified,
                status: "Converged".into(),
                objective: 961.7151721,
                iterations: 9,
                time_s: 0.00123456789,
                tag: ProblemTag::Qcqp,
            },
            rec("HS40", Method::Line, false, 1000, 1.25),
        ];
        let text = run_records_to_csv(&records);
        let parsed = parse_run_records(&text, "test").unwrap();
        assert_eq!(parsed.len(), 2);
        // canonical order sorts HS40 first
        assert_eq!(parsed[0].problem, "HS40");
        let hs63 = &parsed[1];
        assert_eq!(hs63.method, Method::ArcSimplified);
        assert_eq!(hs63.iterations, 9);
        assert!((hs63.objective - 961.7151721).abs() < 1e-6);
        assert!((hs63.time_s - 0.00123456789).abs() < 1e-11);
        // emit of the parse is byte-identical (stable at serialized precision)
        assert_eq!(run_records_to_csv(&parsed), text);
    }

    #[test]
    fn profile_csv_shape() {
        let records = vec![
            rec("P1", Method::Arc, true, 10, 1.0),
            rec("P1", Method::Line, true, 10, 2.0),
            rec("P2", Method::Arc, true, 10, 4.0),
            rec("P2", Method::Line, true, 10, 2.0),
        ];
        let curves = performance_profile(&records, ProfileMetric::Time).unwrap();
        let text = profile_to_csv(&curves);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], PROFILE_CSV_HEADER);
        assert_eq!(lines.len(), 1 + 4); // 2 methods x 2 grid points
        assert_eq!(lines[1], "arc,1,0.5");
    }

    #[test]
    fn unwritable_path_is_io_error() {
        let records = vec![rec("P1", Method::Arc, true, 1, 1.0)];
        let path = Path::new("/nonexistent-dir/out.csv");
        match write_run_records(path, &records) {
            Err(Error::Io { .. }) => {}
            other => panic!("expected Io error, got {other:?}"),
        }
    }

    #[test]
    fn fmt_sig10_cases() {
        assert_eq!(fmt_sig10(0.0), "0");
        assert_eq!(fmt_sig10(1.0), "1");
        assert_eq!(fmt_sig10(-1.0), "-1");
        assert_eq!(fmt_sig10(0.5), "0.5");
        assert_eq!(fmt_sig10(961.7151721), "961.7151721");
        assert_eq!(fmt_sig10(-30.00005), "-30.00005");
        assert_eq!(fmt_sig10(1.23456789012e-7), "1.23456789e-7");
        // exactly ten significant digits survive
        assert_eq!(fmt_sig10(0.00123456789), "0.00123456789");
    }

    #[test]
    fn empty_method_set_rejected() {
        let reg = ProblemRegistry::builtin();
        let cfg = SolverConfig::new(Method::Arc);
        match run_suite(&reg, &Suite::Named(vec!["MARATOS".into()]), &[], &cfg) {
            Err(Error::InvalidArguments(_)) => {}
            other => panic!("expected InvalidArguments, got {other:?}"),
        }
    }

    #[test]
    fn unknown_name_fails_before_any_run() {
        let reg = ProblemRegistry::builtin();
        let cfg = SolverConfig::new(Method::Arc);
        match run_suite(
            &reg,
            &Suite::Named(vec!["NOSUCH".into()]),
            &[Method::Arc],
            &cfg,
        ) {
            Err(Error::UnknownProblem { name, .. }) => assert_eq!(name, "NOSUCH"),
            other => panic!("expected UnknownProblem, got {other:?}"),
        }
    }
}
