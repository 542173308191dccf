use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use systolica::chart::roundtrip_audit;
use systolica::constructors::*;
use systolica::measures::{
    certificate_check, contact_volume, theorem_check_with_grid, Clause, InequalityReport, EQUALITY_REL_TOL, MARGIN_TOL,
};
use systolica::orbits::{
    classify, contractible_systole_with_grid, enumerate_closed_orbits, systole_with_grid, write_orbits_csv, ClosedOrbit,
    SystoleResult,
};
use systolica::revolution::{finsler_corollary_check, shoot_equator, shoot_oscillations, GeodesicKind, RevolutionMetric, RevolutionReport};
use systolica::profile::InvariantCheck;
use systolica::Profile;

use crate::output::{csv_field, emit, json, CliResult, Failure};
use crate::{Family, Format, GlobalOpts, MetricKind};

const JUMP_TOL: f64 = 5e-3;
const ROUNDTRIP_TOL: f64 = 1e-6;
const SHOOT_RTOL: f64 = 1e-11;

fn read_profile(path: &Path) -> CliResult<Profile> {
    Ok(Profile::read(path)?)
}

fn positive(name: &str, value: f64) -> CliResult {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Failure::Input(format!("--{name} must be positive, got {value}")))
    }
}

pub fn construct(opts: &GlobalOpts, family: Family) -> CliResult {
    let profile = match family {
        Family::Zoll { e, period } => zoll_profile(e, period)?,
        Family::Besse { e, scale } => besse_quotient_profile(e, scale)?,
        Family::Eta { e, eta } => eta_family_profile(&EtaFamilyParams::new(e, eta)?)?,
        Family::Ellipsoid { a1, a2 } => ellipsoid_profile(a1, a2)?,
        Family::Random { e } => random_admissible_profile(&RandomProfileParams::new(e, opts.seed)?)?,
    };
    let mut text = profile.to_json()?;
    text.push('\n');
    emit(opts, &text)
}

pub fn metric(opts: &GlobalOpts, kind: MetricKind) -> CliResult {
    let metric = match kind {
        MetricKind::Round => RevolutionMetric::round_sphere(),
        MetricKind::Perturbed { eps } => RevolutionMetric::perturbed_sphere(eps),
        MetricKind::Sine { length, coefficients } => {
            positive("length", length)?;
            RevolutionMetric::normalized_sine_series(length, &coefficients)?
        }
    };
    metric.validate()?;
    let mut text = metric.to_json()?;
    text.push('\n');
    emit(opts, &text)
}

#[derive(Serialize)]
struct ValidationOutput<'a> {
    passed: bool,
    checks: &'a [InvariantCheck],
}

pub fn validate(opts: &GlobalOpts, path: &Path) -> CliResult {
    let profile = read_profile(path)?;
    let report = profile.validate(opts.grid);
    let text = match opts.format {
        Format::Json => json(&ValidationOutput {
            passed: report.all_passed(),
            checks: &report.checks,
        })?,
        Format::Csv => {
            let mut s = String::from("name,kind,passed,worst_margin,at\n");
            for c in &report.checks {
                let kind = serde_json::to_value(c.kind).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default();
                let _ = writeln!(s, "{},{},{},{},{}", c.name, kind, c.passed, c.worst_margin, csv_field(c.at));
            }
            s
        }
    };
    emit(opts, &text)?;
    if report.all_passed() {
        Ok(())
    } else {
        let names: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
        Err(Failure::Violation(format!("failing invariants: {}", names.join(", "))))
    }
}

#[derive(Serialize)]
struct ContractibleReport {
    systole: f64,
    ratio: f64,
    bound: f64,
    equality_flag: bool,
}

#[derive(Serialize)]
struct AnalyzeOutput {
    e: i64,
    k_minus: f64,
    k_plus: f64,
    systole: SystoleResult,
    contractible_systole: SystoleResult,
    volume: f64,
    ratio: f64,
    inequality: Option<InequalityReport>,
    violation: Option<String>,
    contractible: ContractibleReport,
    classification: String,
    orbits: Vec<ClosedOrbit>,
}

pub fn analyze(opts: &GlobalOpts, path: &Path) -> CliResult {
    let profile = read_profile(path)?;
    profile.ensure_valid(opts.grid)?;
    let e = profile.e();
    let sys = systole_with_grid(&profile, opts.grid)?;
    let contr = contractible_systole_with_grid(&profile, opts.grid)?;
    let volume = contact_volume(&profile, opts.tol)?;
    let classification = classify(&profile)?;
    let orbits = enumerate_closed_orbits(&profile, opts.q_max, opts.grid)?;

    let (inequality, violation) = if e >= 1 {
        let clause = Clause::for_euler(e);
        let report = InequalityReport::new(e, sys.value, volume, clause.bound(e), clause);
        let verdict = theorem_check_with_grid(&profile, opts.grid).err().map(|err| err.to_string());
        (Some(report), verdict)
    } else {
        (None, None)
    };
    let contr_ratio = contr.value * contr.value / volume;
    let contr_bound = e.unsigned_abs() as f64;
    let output = AnalyzeOutput {
        e,
        k_minus: profile.k_minus(),
        k_plus: profile.k_plus(),
        ratio: sys.value * sys.value / volume,
        contractible: ContractibleReport {
            systole: contr.value,
            ratio: contr_ratio,
            bound: contr_bound,
            equality_flag: (contr_ratio - contr_bound).abs() <= EQUALITY_REL_TOL * contr_bound,
        },
        systole: sys,
        contractible_systole: contr,
        volume,
        inequality,
        violation: violation.clone(),
        classification: classification.to_string(),
        orbits,
    };
    let text = match opts.format {
        Format::Json => json(&output)?,
        Format::Csv => {
            let mut s = String::from(
                "e,systole,contractible_systole,volume,ratio,bound,margin,equality,branch,contractible_ratio,contractible_equality,classification\n",
            );
            let ineq = output.inequality.as_ref();
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                e,
                output.systole.value,
                output.contractible.systole,
                volume,
                output.ratio,
                csv_field(ineq.map(|r| r.bound)),
                csv_field(ineq.map(|r| r.margin)),
                ineq.map(|r| r.equality_flag.to_string()).unwrap_or_default(),
                ineq.map(|r| r.branch.to_string()).unwrap_or_default(),
                output.contractible.ratio,
                output.contractible.equality_flag,
                output.classification,
            );
            s
        }
    };
    emit(opts, &text)?;
    match violation {
        Some(v) => Err(Failure::Violation(v)),
        None => Ok(()),
    }
}

pub fn orbits(opts: &GlobalOpts, path: &Path) -> CliResult {
    let profile = read_profile(path)?;
    let orbits = enumerate_closed_orbits(&profile, opts.q_max, opts.grid)?;
    let text = match opts.format {
        Format::Json => json(&orbits)?,
        Format::Csv => {
            let mut buf = Vec::new();
            write_orbits_csv(&orbits, &mut buf)?;
            String::from_utf8(buf).map_err(|e| Failure::Violation(e.to_string()))?
        }
    };
    emit(opts, &text)
}

#[derive(Serialize)]
struct SweepRow {
    eta: f64,
    a: f64,
    systole: f64,
    volume: f64,
    ratio: f64,
}

pub fn sweep_eta(opts: &GlobalOpts, e: i64, etas: Vec<f64>) -> CliResult {
    if e <= 2 {
        return Err(Failure::Input(format!("the eta family needs e > 2, got {e}")));
    }
    let etas = if etas.is_empty() {
        [0.1, 0.05, 0.01].iter().map(|x| x / e as f64).collect()
    } else {
        etas
    };
    let params = etas.iter().map(|&eta| EtaFamilyParams::new(e, eta)).collect::<Result<Vec<_>, _>>()?;
    let rows = params
        .par_iter()
        .map(|p| -> CliResult<SweepRow> {
            let profile = eta_family_profile(p)?;
            let sys = systole_with_grid(&profile, opts.grid)?.value;
            let volume = contact_volume(&profile, opts.tol)?;
            Ok(SweepRow {
                eta: p.eta,
                a: p.a(),
                systole: sys,
                volume,
                ratio: sys * sys / volume,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    let text = match opts.format {
        Format::Json => json(&rows)?,
        Format::Csv => {
            let mut s = String::from("eta,a,systole,volume,ratio\n");
            for r in &rows {
                let _ = writeln!(s, "{},{},{},{},{}", r.eta, r.a, r.systole, r.volume, r.ratio);
            }
            s
        }
    };
    emit(opts, &text)?;
    match rows.iter().find(|r| r.ratio >= 0.5) {
        Some(r) => Err(Failure::Violation(format!("ratio {} at eta {} is not below 1/2", r.ratio, r.eta))),
        None => Ok(()),
    }
}

#[derive(Serialize, Clone)]
struct AuditRecord {
    seed: u64,
    report: Option<InequalityReport>,
    certificate_margin: Option<f64>,
    roundtrip_error: Option<f64>,
    jump_error: Option<f64>,
    error: Option<String>,
}

#[derive(Serialize)]
struct BranchSummary {
    e: i64,
    branch: String,
    profiles: u64,
    min_margin: Option<f64>,
    min_margin_seed: Option<u64>,
    min_certificate_margin: Option<f64>,
    roundtrips: usize,
    max_roundtrip_error: Option<f64>,
    max_jump_error: Option<f64>,
    violations: Vec<Violation>,
}

#[derive(Serialize)]
struct Violation {
    seed: u64,
    error: String,
}

#[derive(Serialize)]
struct AuditSummary {
    seed: u64,
    count: u64,
    branches: Vec<BranchSummary>,
}

fn audit_one(e: i64, seed: u64, roundtrip: Option<usize>, grid: usize) -> AuditRecord {
    let mut record = AuditRecord {
        seed,
        report: None,
        certificate_margin: None,
        roundtrip_error: None,
        jump_error: None,
        error: None,
    };
    let run = |record: &mut AuditRecord| -> systolica::Result<()> {
        let profile = random_admissible_profile(&RandomProfileParams::new(e, seed)?)?;
        let cert = certificate_check(&profile, grid);
        record.certificate_margin = cert.as_ref().ok().map(|c| c.worst_margin);
        record.report = Some(theorem_check_with_grid(&profile, grid)?);
        let cert = cert?;
        if !cert.chain_holds {
            return Err(systolica::Error::Validation(format!(
                "volume bound {} below {}",
                cert.reconstructed_bound, cert.inequality_bound
            )));
        }
        if let Some(levels) = roundtrip {
            let rt = roundtrip_audit(&profile, levels)?;
            record.roundtrip_error = Some(rt.max_relative_error.max(rt.reconstruction_error));
            record.jump_error = Some(rt.jump_error);
            if !rt.passed(ROUNDTRIP_TOL, JUMP_TOL) {
                return Err(systolica::Error::Integration(format!(
                    "Reeb round trip off by {} (jump error {})",
                    rt.max_relative_error, rt.jump_error
                )));
            }
        }
        Ok(())
    };
    if let Err(err) = run(&mut record) {
        record.error = Some(err.to_string());
    }
    record
}

fn fold_min(values: impl Iterator<Item = f64>) -> Option<f64> {
    values.fold(None, |acc, v| Some(acc.map_or(v, |a: f64| a.min(v))))
}

fn fold_max(values: impl Iterator<Item = f64>) -> Option<f64> {
    values.fold(None, |acc, v| Some(acc.map_or(v, |a: f64| a.max(v))))
}

pub fn audit(opts: &GlobalOpts, e_list: &[i64], count: u64, roundtrip_every: u64, roundtrip_levels: usize) -> CliResult {
    if let Some(bad) = e_list.iter().find(|&&e| e < 1) {
        return Err(Failure::Input(format!("the audit covers positive Euler numbers only, got {bad}")));
    }
    let mut e_sorted = e_list.to_vec();
    e_sorted.sort_unstable();
    e_sorted.dedup();
    let jobs: Vec<(i64, u64)> = e_sorted.iter().flat_map(|&e| (0..count).map(move |i| (e, i))).collect();
    let records: Vec<(i64, AuditRecord)> = jobs
        .par_iter()
        .map(|&(e, i)| {
            let roundtrip = (roundtrip_every > 0 && i % roundtrip_every == 0).then_some(roundtrip_levels);
            (e, audit_one(e, opts.seed.wrapping_add(i), roundtrip, opts.grid))
        })
        .collect();

    let mut branches = Vec::new();
    for &e in &e_sorted {
        let rows: Vec<&AuditRecord> = records.iter().filter(|(re, _)| *re == e).map(|(_, r)| r).collect();
        let with_report = rows.iter().filter_map(|r| r.report.as_ref().map(|rep| (r.seed, rep.margin)));
        let min = with_report.fold(None, |acc: Option<(u64, f64)>, (s, m)| match acc {
            Some((_, best)) if best <= m => acc,
            _ => Some((s, m)),
        });
        branches.push(BranchSummary {
            e,
            branch: Clause::for_euler(e).to_string(),
            profiles: rows.len() as u64,
            min_margin: min.map(|(_, m)| m),
            min_margin_seed: min.map(|(s, _)| s),
            min_certificate_margin: fold_min(rows.iter().filter_map(|r| r.certificate_margin)),
            roundtrips: rows.iter().filter(|r| r.roundtrip_error.is_some()).count(),
            max_roundtrip_error: fold_max(rows.iter().filter_map(|r| r.roundtrip_error)),
            max_jump_error: fold_max(rows.iter().filter_map(|r| r.jump_error)),
            violations: rows
                .iter()
                .filter_map(|r| r.error.as_ref().map(|err| Violation { seed: r.seed, error: err.clone() }))
                .collect(),
        });
    }
    let summary = AuditSummary {
        seed: opts.seed,
        count,
        branches,
    };
    let text = match opts.format {
        Format::Json => json(&summary)?,
        Format::Csv => {
            let mut s = format!("seed,{},certificate_margin,roundtrip_error,jump_error,error\n", InequalityReport::CSV_HEADER);
            for (e, r) in &records {
                let row = match &r.report {
                    Some(rep) => rep.csv_row(),
                    None => format!("{e},,,,,,,{}", Clause::for_euler(*e)),
                };
                let error = r.error.as_deref().unwrap_or("").replace(['"', ','], ";");
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{}",
                    r.seed,
                    row,
                    csv_field(r.certificate_margin),
                    csv_field(r.roundtrip_error),
                    csv_field(r.jump_error),
                    error
                );
            }
            s
        }
    };
    emit(opts, &text)?;
    let failures: usize = summary.branches.iter().map(|b| b.violations.len()).sum();
    let weak_certificate = summary
        .branches
        .iter()
        .find(|b| b.min_certificate_margin.is_some_and(|m| m < -MARGIN_TOL));
    if failures > 0 {
        Err(Failure::Violation(format!("{failures} profile(s) failed the audit")))
    } else if let Some(b) = weak_certificate {
        Err(Failure::Violation(format!("certificate margin below tolerance for e = {}", b.e)))
    } else {
        Ok(())
    }
}

#[derive(Serialize)]
struct CrossCheck {
    geodesics_checked: usize,
    max_relative_gap: f64,
}

#[derive(Serialize)]
struct RevolutionOutput {
    #[serde(flatten)]
    report: RevolutionReport,
    ode_cross_check: CrossCheck,
}

pub fn revolution(opts: &GlobalOpts, path: &Path) -> CliResult {
    let metric = RevolutionMetric::read(path)?;
    let report = finsler_corollary_check(&metric, opts.q_max)?;
    let mut gap: f64 = 0.0;
    let mut checked = 0;
    for g in &report.geodesics {
        let shot = match g.kind {
            GeodesicKind::Level => shoot_oscillations(&metric, g.c, g.q, SHOOT_RTOL)?.arc_length,
            GeodesicKind::Equator => shoot_equator(&metric, SHOOT_RTOL)?,
            GeodesicKind::Meridian => 2.0 * metric.length(),
        };
        gap = gap.max((shot - g.length).abs() / g.length);
        checked += 1;
    }
    let margin = report.margin;
    let output = RevolutionOutput {
        report,
        ode_cross_check: CrossCheck {
            geodesics_checked: checked,
            max_relative_gap: gap,
        },
    };
    let text = match opts.format {
        Format::Json => json(&output)?,
        Format::Csv => {
            let mut s = String::from("c,p,q,length,kind,plateau\n");
            for g in &output.report.geodesics {
                let _ = writeln!(s, "{},{},{},{},{},{}", g.c, g.p, g.q, g.length, g.kind, g.plateau);
            }
            s
        }
    };
    emit(opts, &text)?;
    if margin < -MARGIN_TOL {
        Err(Failure::Violation(format!(
            "sys² = {} exceeds π·area = {}",
            output.report.systole.powi(2),
            PI * output.report.area
        )))
    } else {
        Ok(())
    }
}
