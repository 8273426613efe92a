use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use thermohaline::dynamics::{integrate, AmplitudeState, ATTRACTOR_TOL};
use thermohaline::harmonics::oracle_agreement;
use thermohaline::params::{regime, sigma_crit, Params, Regime, RegimeReport, SalinitySign};
use thermohaline::reference::{self, DEntry, ThresholdEntry, PRANDTL, TABLE_1, TABLE_2, TABLE_3, TABLE_4};
use thermohaline::spectrum::{eigenvalues, verify_pes};
use thermohaline::transition::{critical_r_star, transition_number, Classification, TransitionReport, NEAR_POLE_WARN};
use thermohaline::Error;

use crate::args::{Format, OutputArgs, ParamArgs, ShellArgs};
use crate::output::{emit, json_document, num, opt_num, Csv};
use crate::Failure;

/// Relative tolerance for table interaction terms.
const TABLE_REL_TOL: f64 = 5e-3;
/// Absolute tolerance for table thresholds.
const TABLE_ABS_TOL: f64 = 1e-2;
/// Largest deviation accepted by the harmonics check.
const HARMONICS_TOL: f64 = 1e-12;

impl ShellArgs {
    fn aspect(&self) -> Result<f64, Failure> {
        match (self.aspect, self.lc) {
            (Some(r), _) => Ok(r),
            (None, Some(lc)) => Ok(reference::preset_aspect(lc).expect("preset range is validated")),
            (None, None) => Err(Error::InvalidParams("one of --r or --lc is required".into()).into()),
        }
    }

    fn salinity(&self) -> Result<SalinitySign, Failure> {
        Ok(SalinitySign::from_value(self.sign)?)
    }

    fn at(&self, rayleigh: f64) -> Result<Params, Failure> {
        Ok(Params::at_criticality(self.pr, self.le, self.aspect()?, rayleigh)?.with_salinity(self.salinity()?))
    }
}

impl ParamArgs {
    fn build(&self) -> Result<Params, Failure> {
        match self.rtilde {
            Some(rt) => Ok(Params::new(self.shell.pr, self.shell.le, self.shell.aspect()?, self.rayleigh, rt)?
                .with_salinity(self.shell.salinity()?)),
            None => self.shell.at(self.rayleigh),
        }
    }
}

fn finish(output: &OutputArgs, text: String) -> Result<(), Failure> {
    emit(&text, output.out.as_deref())?;
    Ok(())
}

fn params_json(p: &Params) -> serde_json::Value {
    json!({
        "pr": p.pr(),
        "le": p.le(),
        "R": p.rayleigh(),
        "rtilde": p.saline_rayleigh(),
        "r": p.aspect(),
        "sign": p.salinity().value(),
        "sigma": p.sigma(),
    })
}

fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::SteadyMultiEquilibria => "steady",
        Regime::Oscillatory => "oscillatory",
        Regime::Degenerate => "degenerate",
    }
}

fn class_name(c: Classification) -> &'static str {
    match c {
        Classification::TypeI => "TypeI",
        Classification::TypeII => "TypeII",
        Classification::Marginal => "Marginal",
    }
}

#[derive(Serialize)]
struct ClassifyDoc<'a> {
    params: serde_json::Value,
    regime: &'a RegimeReport,
    transition: Option<&'a TransitionReport>,
    r_star: Option<f64>,
}

pub fn classify(args: &ParamArgs, output: &OutputArgs) -> Result<(), Failure> {
    let p = args.build()?;
    let reg = regime(&p)?;
    let transition = match reg.regime {
        Regime::SteadyMultiEquilibria => Some(transition_number(&p)?),
        _ => None,
    };
    let r_star = if p.le() < 1.0 {
        critical_r_star(p.le(), p.pr(), p.aspect()).ok().map(|t| t.r_star)
    } else {
        None
    };
    let text = match output.format.unwrap_or(Format::Json) {
        Format::Json => json_document(
            "classify",
            &ClassifyDoc {
                params: params_json(&p),
                regime: &reg,
                transition: transition.as_ref(),
                r_star,
            },
        )?,
        Format::Csv => {
            let mut csv = Csv::new(&["field", "value"]);
            for (k, v) in [
                ("sigma", reg.sigma),
                ("sigma_c", reg.sigma_c),
                ("lc", reg.lc as f64),
                ("K", reg.k),
                ("R0", reg.r0),
                ("R1", reg.r1),
                ("eta", reg.eta),
                ("eta_c", reg.eta_c),
            ] {
                csv.row(&[k.to_string(), num(v)]);
            }
            csv.row(&["regime", regime_name(reg.regime)]);
            csv.row(&["R_star".to_string(), opt_num(r_star)]);
            if let Some(t) = &transition {
                csv.row(&["q".to_string(), num(t.q)]);
                csv.row(&["classification", class_name(t.classification)]);
                for d in &t.d_terms {
                    csv.row(&[format!("D{}", d.label), num(d.value)]);
                }
                csv.row(&["attractor_radius_sq".to_string(), opt_num(t.attractor_radius_sq)]);
                csv.row(&["near_pole", if t.near_pole { "1" } else { "0" }]);
            }
            csv.into_string()
        }
    };
    finish(output, text)
}

pub fn spectrum(args: &ParamArgs, l: u32, n: u32, output: &OutputArgs) -> Result<(), Failure> {
    if l == 0 || n == 0 {
        return Err(Error::InvalidParams("the dispersion cubic needs l >= 1 and n >= 1".into()).into());
    }
    let p = args.build()?;
    let t = eigenvalues(l, n, &p);
    let text = match output.format.unwrap_or(Format::Json) {
        Format::Json => json_document(
            "spectrum",
            &json!({
                "params": params_json(&p),
                "l": l,
                "n": n,
                "cubic": { "b0": t.cubic.b0, "b1": t.cubic.b1, "b2": t.cubic.b2 },
                "betas": t.betas.iter().map(|b| json!({ "re": b.re, "im": b.im })).collect::<Vec<_>>(),
                "min_separation": t.min_separation(),
            }),
        )?,
        Format::Csv => {
            let mut csv = Csv::new(&["k", "re", "im"]);
            for (k, b) in t.betas.iter().enumerate() {
                csv.row(&[(k + 1).to_string(), num(b.re), num(b.im)]);
            }
            csv.into_string()
        }
    };
    finish(output, text)
}

pub fn pes(args: &ParamArgs, lmax: u32, nmax: u32, output: &OutputArgs) -> Result<(), Failure> {
    let p = args.build()?;
    let rep = verify_pes(&p, lmax, nmax)?;
    let text = match output.format.unwrap_or(Format::Json) {
        Format::Json => json_document("pes", &json!({ "params": params_json(&p), "report": rep }))?,
        Format::Csv => {
            let mut csv = Csv::new(&["field", "value"]);
            csv.row(&["sigma".to_string(), num(rep.sigma)]);
            csv.row(&["sigma_c".to_string(), num(rep.sigma_c)]);
            csv.row(&["lc".to_string(), rep.lc.to_string()]);
            csv.row(&["position".to_string(), format!("{:?}", rep.position)]);
            csv.row(&["critical_growth_re".to_string(), num(rep.critical_growth.re)]);
            csv.row(&["critical_growth_im".to_string(), num(rep.critical_growth.im)]);
            csv.row(&["max_noncritical".to_string(), num(rep.max_noncritical)]);
            csv.row(&["pattern_holds".to_string(), u8::from(rep.pattern_holds).to_string()]);
            csv.into_string()
        }
    };
    finish(output, text)?;
    if rep.pattern_holds {
        Ok(())
    } else {
        Err(Failure::Tolerance("exchange-of-stabilities pattern does not hold".into()))
    }
}

#[derive(Serialize)]
struct TableRow {
    table: u8,
    lc: u32,
    le: f64,
    #[serde(rename = "R")]
    rayleigh: Option<f64>,
    quantity: String,
    computed: f64,
    reference: f64,
    error: f64,
    tolerance: f64,
    within: bool,
}

fn d_rows(table: u8, entries: &[DEntry]) -> Result<Vec<TableRow>, Failure> {
    entries
        .iter()
        .map(|e| {
            let aspect = reference::preset_aspect(e.lc).expect("table degrees have presets");
            let p = Params::at_criticality(PRANDTL, e.le, aspect, e.rayleigh)?;
            let t = transition_number(&p)?;
            let computed = t.d_term(e.l).expect("table terms are computed");
            let error = (computed - e.value).abs() / e.value.abs();
            Ok(TableRow {
                table,
                lc: e.lc,
                le: e.le,
                rayleigh: Some(e.rayleigh),
                quantity: format!("D({},1),({},2)", e.lc, e.l),
                computed,
                reference: e.value,
                error,
                tolerance: TABLE_REL_TOL,
                within: error <= TABLE_REL_TOL,
            })
        })
        .collect()
}

fn threshold_rows(table: u8, entries: &[ThresholdEntry]) -> Result<Vec<TableRow>, Failure> {
    let mut rows = Vec::new();
    for e in entries {
        let th = critical_r_star(e.le, PRANDTL, reference::preset_aspect(e.lc).expect("table degrees have presets"))?;
        for (quantity, computed, reference) in [("R*", th.r_star, e.r_star), ("R0", th.r0, e.r0)] {
            let error = (computed - reference).abs();
            rows.push(TableRow {
                table,
                lc: e.lc,
                le: e.le,
                rayleigh: None,
                quantity: quantity.into(),
                computed,
                reference,
                error,
                tolerance: TABLE_ABS_TOL,
                within: error <= TABLE_ABS_TOL,
            });
        }
    }
    Ok(rows)
}

pub fn tables(table: Option<u8>, output: &OutputArgs) -> Result<(), Failure> {
    let mut rows = Vec::new();
    for t in 1..=4u8 {
        if table.is_some_and(|want| want != t) {
            continue;
        }
        rows.extend(match t {
            1 => d_rows(1, &TABLE_1)?,
            2 => d_rows(2, &TABLE_2)?,
            3 => threshold_rows(3, &TABLE_3)?,
            _ => threshold_rows(4, &TABLE_4)?,
        });
    }
    let text = match output.format.unwrap_or(Format::Json) {
        Format::Json => json_document("tables", &json!({ "rows": rows }))?,
        Format::Csv => {
            let mut csv = Csv::new(&[
                "table", "lc", "le", "R", "quantity", "computed", "reference", "error", "tolerance", "within",
            ]);
            for r in &rows {
                csv.row(&[
                    r.table.to_string(),
                    r.lc.to_string(),
                    num(r.le),
                    opt_num(r.rayleigh),
                    r.quantity.clone(),
                    num(r.computed),
                    num(r.reference),
                    num(r.error),
                    num(r.tolerance),
                    u8::from(r.within).to_string(),
                ]);
            }
            csv.into_string()
        }
    };
    finish(output, text)?;
    let outside = rows.iter().filter(|r| !r.within).count();
    if outside == 0 {
        Ok(())
    } else {
        Err(Failure::Tolerance(format!("{outside} of {} table entries outside tolerance", rows.len())))
    }
}

#[derive(Serialize)]
struct SweepRow {
    #[serde(rename = "R")]
    rayleigh: f64,
    q: Option<f64>,
    classification: Option<&'static str>,
    /// `ok`, `near` (within the warning band of R0) or `pole` (refused).
    pole_guard: &'static str,
}

pub fn qsweep(shell: &ShellArgs, rmin: f64, rmax: f64, steps: usize, output: &OutputArgs) -> Result<(), Failure> {
    if !(rmin < rmax) || steps < 2 {
        return Err(Error::InvalidParams("sweep needs rmin < rmax and steps >= 2".into()).into());
    }
    shell.aspect()?;
    shell.salinity()?;
    let grid: Vec<f64> = (0..steps)
        .map(|i| rmin + (rmax - rmin) * i as f64 / (steps - 1) as f64)
        .collect();
    let rows: Vec<Option<SweepRow>> = grid
        .par_iter()
        .map(|&r| -> Result<Option<SweepRow>, Failure> {
            let p = shell.at(r)?;
            if regime(&p)?.regime != Regime::SteadyMultiEquilibria {
                return Ok(None);
            }
            match transition_number(&p) {
                Ok(t) => Ok(Some(SweepRow {
                    rayleigh: r,
                    q: Some(t.q),
                    classification: Some(class_name(t.classification)),
                    pole_guard: if t.near_pole { "near" } else { "ok" },
                })),
                Err(Error::PoleAtR0 { .. }) => Ok(Some(SweepRow {
                    rayleigh: r,
                    q: None,
                    classification: None,
                    pole_guard: "pole",
                })),
                Err(e) => Err(e.into()),
            }
        })
        .collect::<Result<_, _>>()?;
    let rows: Vec<SweepRow> = rows.into_iter().flatten().collect();
    if rows.is_empty() {
        let p = shell.at(rmin)?;
        let reg = regime(&p)?;
        return Err(Error::NotSteadyRegime { k: reg.k }.into());
    }
    let lc = sigma_crit(shell.aspect()?)?.lc;
    let text = match output.format.unwrap_or(Format::Csv) {
        Format::Json => json_document(
            "qsweep",
            &json!({ "lc": lc, "le": shell.le, "pr": shell.pr, "r": shell.aspect()?, "pole_warn_band": NEAR_POLE_WARN, "rows": rows }),
        )?,
        Format::Csv => {
            let mut csv = Csv::new(&["R", "q", "classification", "pole_guard"]);
            for r in &rows {
                csv.row(&[
                    num(r.rayleigh),
                    opt_num(r.q),
                    r.classification.unwrap_or("").to_string(),
                    r.pole_guard.to_string(),
                ]);
            }
            csv.into_string()
        }
    };
    finish(output, text)
}

#[derive(Serialize)]
struct SimulateReport {
    lc: u32,
    sigma: f64,
    beta: f64,
    q: f64,
    classification: &'static str,
    seed: u64,
    dt: f64,
    horizon: f64,
    initial_norm_sq: f64,
    terminal_norm_sq: Option<f64>,
    expected_norm_sq: Option<f64>,
    rel_deviation: Option<f64>,
    diverged_at: Option<f64>,
}

pub struct SimulateOptions {
    pub sigma_offset: f64,
    pub dt: Option<f64>,
    pub horizon: Option<f64>,
    pub seed: u64,
    pub x0_norm_sq: Option<f64>,
    pub stride: usize,
}

pub fn simulate(args: &ParamArgs, opts: &SimulateOptions, output: &OutputArgs) -> Result<(), Failure> {
    let base = args.build()?;
    let crit = sigma_crit(base.aspect())?;
    let p = base.with_sigma(crit.sigma_c * (1.0 + opts.sigma_offset));
    let t = transition_number(&p)?;
    let (beta, q) = (t.critical_growth, t.q);
    let expected = (t.classification == Classification::TypeI && beta > 0.0).then(|| beta / q);
    let x0 = opts.x0_norm_sq.unwrap_or_else(|| 0.1 * (beta / q).abs());
    let rate = beta.abs().max(q.abs() * x0);
    let dt = opts.dt.unwrap_or(if rate > 0.0 { 0.05 / rate } else { 0.1 });
    let horizon = opts.horizon.unwrap_or(if beta > 0.0 { 20.0 / beta } else { 1000.0 });
    let state = AmplitudeState::seeded(t.lc, x0, opts.seed);

    let mut report = SimulateReport {
        lc: t.lc,
        sigma: p.sigma(),
        beta,
        q,
        classification: class_name(t.classification),
        seed: opts.seed,
        dt,
        horizon,
        initial_norm_sq: state.norm_sq(),
        terminal_norm_sq: None,
        expected_norm_sq: expected,
        rel_deviation: None,
        diverged_at: None,
    };

    let trajectory = match integrate(&state, beta, q, dt, horizon, opts.stride) {
        Ok(tr) => tr,
        Err(Error::Diverged { time, .. }) => {
            report.diverged_at = Some(time);
            let text = json_document("simulate", &json!({ "report": report }))?;
            finish(output, text)?;
            return Err(Failure::Divergence(format!("trajectory diverged at t = {time}")));
        }
        Err(e) => return Err(e.into()),
    };
    let terminal = trajectory.last().norm_sq();
    report.terminal_norm_sq = Some(terminal);
    report.rel_deviation = expected.map(|e| (terminal - e).abs() / e);

    let text = match output.format.unwrap_or(Format::Csv) {
        Format::Json => {
            let samples: Vec<_> = trajectory
                .samples
                .iter()
                .map(|s| json!({ "t": s.t, "x": s.x.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(), "norm_sq": s.norm_sq() }))
                .collect();
            json_document("simulate", &json!({ "report": report, "trajectory": samples }))?
        }
        Format::Csv => {
            let lc = t.lc as i32;
            let mut header = vec!["t".to_string()];
            for m in -lc..=lc {
                header.push(format!("x{m}_re"));
                header.push(format!("x{m}_im"));
            }
            header.push("norm_sq".into());
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            let mut csv = Csv::new(&header);
            for s in &trajectory.samples {
                let mut row = vec![num(s.t)];
                for z in &s.x {
                    row.push(num(z.re));
                    row.push(num(z.im));
                }
                row.push(num(s.norm_sq()));
                csv.row(&row);
            }
            eprintln!("{}", serde_json::to_string(&report)?);
            csv.into_string()
        }
    };
    finish(output, text)?;
    match report.rel_deviation {
        Some(dev) if x0 > 0.0 && !(dev <= ATTRACTOR_TOL) => Err(Failure::Tolerance(format!(
            "terminal |x|^2 deviates from beta/q by {dev:.3e} (tolerance {ATTRACTOR_TOL:e})"
        ))),
        _ => Ok(()),
    }
}

pub fn harmonics_check(max_degree: u32, output: &OutputArgs) -> Result<(), Failure> {
    let rep = oracle_agreement(max_degree)?;
    let passed = rep.passed(HARMONICS_TOL);
    let worst = rep
        .worst
        .map(|w| w.iter().map(|i| format!("({},{})", i.l, i.m)).collect::<Vec<_>>().join(" "));
    let text = match output.format.unwrap_or(Format::Json) {
        Format::Json => json_document(
            "harmonics-check",
            &json!({
                "max_degree": rep.max_degree,
                "triples": rep.triples,
                "nonzero": rep.nonzero,
                "max_deviation": rep.max_deviation,
                "worst": worst,
                "selection_rules_exact": rep.selection_rules_exact,
                "tolerance": HARMONICS_TOL,
                "passed": passed,
            }),
        )?,
        Format::Csv => {
            let mut csv = Csv::new(&["max_degree", "triples", "nonzero", "max_deviation", "selection_rules_exact", "passed"]);
            csv.row(&[
                rep.max_degree.to_string(),
                rep.triples.to_string(),
                rep.nonzero.to_string(),
                num(rep.max_deviation),
                u8::from(rep.selection_rules_exact).to_string(),
                u8::from(passed).to_string(),
            ]);
            csv.into_string()
        }
    };
    finish(output, text)?;
    if passed {
        Ok(())
    } else {
        Err(Failure::Tolerance(format!("max deviation {:.3e} exceeds {HARMONICS_TOL:e}", rep.max_deviation)))
    }
}
