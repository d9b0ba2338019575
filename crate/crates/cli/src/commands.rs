use serde::Serialize;

use fock_sharp::explorer::{
    maximize_ratio_free, maximize_ratio_monomial_fixed, monomial_sweep, run_invariant_suite_with_tol,
    SearchConfig, SuiteCounts, DEFAULT_SUP_TOL,
};
use fock_sharp::output::{fmt_f64, to_csv_string, to_json, CsvRow};
use fock_sharp::ratio::gaussian_family_sup;
use fock_sharp::{Error, ExponentPair};

use crate::config::{CliConfig, Command, Format};

/// What a command produced: the document to write, a summary line for
/// stderr, and whether every check held.
pub struct Output {
    pub document: String,
    pub summary: String,
    pub ok: bool,
}

pub fn run(cfg: &CliConfig) -> Result<Output, Error> {
    match cfg.command {
        Command::Constants => constants(cfg),
        Command::MonomialSweep => sweep(cfg),
        Command::GaussianOpt => gaussian_opt(cfg),
        Command::Explore => explore(cfg),
        Command::Verify => verify(cfg),
    }
}

fn exponent(cfg: &CliConfig) -> Result<ExponentPair, Error> {
    ExponentPair::new(cfg.p.expect("validated"))
}

fn render<T: Serialize, R: CsvRow>(cfg: &CliConfig, kind: &str, payload: &T, rows: &[R]) -> Result<String, Error> {
    match cfg.format {
        Format::Json => to_json(kind, payload).map(|s| s + "\n"),
        Format::Csv => to_csv_string(rows),
    }
}

fn gap_summary(label: &str, value: f64, c_p: f64) -> String {
    format!(
        "{label} {value:.12}; gap to sqrt(C_p) {:.6e}; gap to C_p {:.6e}",
        c_p.sqrt() - value,
        c_p - value
    )
}

#[derive(Debug, Clone, Serialize)]
struct ConstantsRow {
    p: f64,
    n: usize,
    c_p: f64,
    c_p_half_n: f64,
    c_p_n: f64,
    p_conj: f64,
}

impl CsvRow for ConstantsRow {
    const HEADER: &'static [&'static str] = &["p", "n", "c_p", "c_p_half_n", "c_p_n", "p_conj"];

    fn fields(&self) -> Vec<String> {
        vec![
            fmt_f64(self.p),
            self.n.to_string(),
            fmt_f64(self.c_p),
            fmt_f64(self.c_p_half_n),
            fmt_f64(self.c_p_n),
            fmt_f64(self.p_conj),
        ]
    }

    fn parse(_: &fock_sharp::output::CsvRecord) -> fock_sharp::Result<Self> {
        Err(Error::Output("constants rows are write-only".into()))
    }
}

fn constants(cfg: &CliConfig) -> Result<Output, Error> {
    let e = exponent(cfg)?;
    let n = cfg.n as f64;
    let row = ConstantsRow {
        p: e.p(),
        n: cfg.n,
        c_p: e.c_p(),
        c_p_half_n: e.c_p().powf(n / 2.0),
        c_p_n: e.c_p().powf(n),
        p_conj: e.conj(),
    };
    Ok(Output {
        document: render(cfg, "constants", &row, std::slice::from_ref(&row))?,
        summary: format!(
            "C_p {:.12}; C_p^(n/2) {:.12}; C_p^n {:.12}; p' {:.12}",
            row.c_p, row.c_p_half_n, row.c_p_n, row.p_conj
        ),
        ok: true,
    })
}

#[derive(Serialize)]
struct SweepPayload<'a> {
    p: f64,
    kmax: u64,
    rows: &'a [fock_sharp::explorer::SweepRow],
}

fn sweep(cfg: &CliConfig) -> Result<Output, Error> {
    let e = exponent(cfg)?;
    let rows = monomial_sweep(&e, cfg.kmax);
    let best = rows.iter().map(|r| r.ratio).fold(f64::NEG_INFINITY, f64::max);
    let payload = SweepPayload {
        p: e.p(),
        kmax: cfg.kmax,
        rows: &rows,
    };
    Ok(Output {
        document: render(cfg, "monomial_sweep", &payload, &rows)?,
        summary: gap_summary("best monomial ratio", best, e.c_p()),
        ok: true,
    })
}

#[derive(Debug, Clone, Serialize)]
struct GaussianRow {
    p: f64,
    alpha: f64,
    sup: f64,
    x: f64,
    y: f64,
    not_attained: bool,
    evaluations: usize,
    gap_to_sqrt_cp: f64,
    gap_to_cp: f64,
}

impl CsvRow for GaussianRow {
    const HEADER: &'static [&'static str] = &[
        "p",
        "alpha",
        "sup",
        "x",
        "y",
        "not_attained",
        "evaluations",
        "gap_to_sqrt_cp",
        "gap_to_cp",
    ];

    fn fields(&self) -> Vec<String> {
        vec![
            fmt_f64(self.p),
            fmt_f64(self.alpha),
            fmt_f64(self.sup),
            fmt_f64(self.x),
            fmt_f64(self.y),
            self.not_attained.to_string(),
            self.evaluations.to_string(),
            fmt_f64(self.gap_to_sqrt_cp),
            fmt_f64(self.gap_to_cp),
        ]
    }

    fn parse(_: &fock_sharp::output::CsvRecord) -> fock_sharp::Result<Self> {
        Err(Error::Output("Gaussian rows are write-only".into()))
    }
}

fn gaussian_opt(cfg: &CliConfig) -> Result<Output, Error> {
    let e = exponent(cfg)?;
    let s = gaussian_family_sup(&e, cfg.alpha, cfg.tol.unwrap_or(1e-8))?;
    let row = GaussianRow {
        p: e.p(),
        alpha: cfg.alpha,
        sup: s.value,
        x: s.x,
        y: s.y,
        not_attained: s.not_attained,
        evaluations: s.evaluations,
        gap_to_sqrt_cp: e.c_p().sqrt() - s.value,
        gap_to_cp: e.c_p() - s.value,
    };
    Ok(Output {
        document: render(cfg, "gaussian_opt", &row, std::slice::from_ref(&row))?,
        summary: gap_summary("Gaussian-family sup", s.value, e.c_p()),
        ok: true,
    })
}

fn explore(cfg: &CliConfig) -> Result<Output, Error> {
    let e = exponent(cfg)?;
    let defaults = SearchConfig::default();
    let search = SearchConfig {
        p: e.p(),
        alpha: cfg.alpha,
        degree: cfg.degree,
        restarts: cfg.restarts,
        seed: cfg.seed,
        tol: cfg.tol.unwrap_or(defaults.tol),
        budget: cfg.budget.unwrap_or(defaults.budget),
        ..defaults
    };
    let report = match cfg.monomial {
        Some(j) => maximize_ratio_monomial_fixed(j, &search)?,
        None => maximize_ratio_free(&search)?,
    };
    let ok = report.best_ratio <= e.c_p() * (1.0 + 1e-9);
    let mut summary = gap_summary("best ratio", report.best_ratio, e.c_p());
    if !report.converged {
        summary.push_str("; budget exhausted (converged=false)");
    }
    if !ok {
        summary.push_str("; PROVEN UPPER BOUND VIOLATED");
    }
    Ok(Output {
        document: render(cfg, "search", &report, &report.trace)?,
        summary,
        ok,
    })
}

fn verify(cfg: &CliConfig) -> Result<Output, Error> {
    let report = run_invariant_suite_with_tol(cfg.seed, &SuiteCounts::default(), cfg.tol.unwrap_or(DEFAULT_SUP_TOL));
    let failed: Vec<&str> = report
        .entries
        .iter()
        .filter(|e| !e.passed)
        .map(|e| e.name.as_str())
        .collect();
    let summary = if failed.is_empty() {
        format!("all {} invariants passed (seed {})", report.entries.len(), cfg.seed)
    } else {
        format!("{} of {} invariants failed: {}", failed.len(), report.entries.len(), failed.join(", "))
    };
    Ok(Output {
        document: render(cfg, "invariant_report", &report, &report.entries)?,
        summary,
        ok: report.all_passed,
    })
}
