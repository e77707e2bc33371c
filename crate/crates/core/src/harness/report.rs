use super::dataset::DatasetRecord;
use super::HarnessError;
use crate::estimators::{Diagnostics, Method};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;

/// Full-precision rendering used in every CSV: 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// One (model, estimator, replicate) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellRecord {
    pub model: String,
    pub method: Method,
    pub replicate: usize,
    pub seed: u64,
    pub stream_id: u64,
    pub log_evidence: Option<f64>,
    pub error: Option<String>,
    #[serde(skip)]
    pub seconds: f64,
    #[serde(skip)]
    pub diagnostics: Option<Diagnostics>,
}

impl CellRecord {
    pub fn failed(&self) -> bool {
        self.log_evidence.is_none()
    }

    pub const CSV_HEADER: [&'static str; 8] = [
        "model",
        "method",
        "replicate",
        "seed",
        "stream_id",
        "status",
        "log_evidence",
        "error",
    ];

    pub fn csv_fields(&self) -> [String; 8] {
        [
            self.model.clone(),
            self.method.to_string(),
            self.replicate.to_string(),
            self.seed.to_string(),
            self.stream_id.to_string(),
            if self.failed() { "failed" } else { "ok" }.to_string(),
            self.log_evidence.map(fmt_f64).unwrap_or_default(),
            self.error.clone().unwrap_or_default(),
        ]
    }
}

/// Replicate summary of a sample of values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    /// Sample standard deviation; absent for a single value.
    pub sd: Option<f64>,
    /// `sd / √count`.
    pub se: Option<f64>,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

/// Linear-interpolation quantile of sorted data (`h = (n − 1)p`).
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

impl Summary {
    pub fn from_values(values: &[f64]) -> Option<Summary> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let sd = (values.len() > 1)
            .then(|| (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt());
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        Some(Summary {
            count: values.len(),
            mean,
            sd,
            se: sd.map(|s| s / n.sqrt()),
            min: sorted[0],
            q1: quantile_sorted(&sorted, 0.25),
            median: quantile_sorted(&sorted, 0.5),
            q3: quantile_sorted(&sorted, 0.75),
            max: sorted[sorted.len() - 1],
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub model: String,
    pub method: Method,
    pub failed: usize,
    pub log_evidence: Option<Summary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BayesFactorRow {
    pub numerator: String,
    pub denominator: String,
    pub method: Method,
    pub replicate: usize,
    pub log_bayes_factor: f64,
    pub bayes_factor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BayesFactorSummary {
    pub numerator: String,
    pub denominator: String,
    pub method: Method,
    pub bayes_factor: Option<Summary>,
    pub log_bayes_factor: Option<Summary>,
}

/// Closed-form log evidence of a model, where one exists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceValue {
    pub model: String,
    pub log_evidence: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeedRow {
    pub method: Method,
    /// Mean over replicates of the time summed across models.
    pub mean_seconds: f64,
    /// Fastest estimator = 1.
    pub relative_speed: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub name: String,
    pub seed: u64,
    pub replicates: usize,
    pub datasets: Vec<DatasetRecord>,
    pub models: Vec<String>,
    pub reference: Vec<ReferenceValue>,
    pub bayes_factor_pairs: Vec<[String; 2]>,
    pub cells: Vec<CellRecord>,
    pub summaries: Vec<MethodSummary>,
    pub bayes_factors: Vec<BayesFactorRow>,
    pub bayes_factor_summaries: Vec<BayesFactorSummary>,
    /// Wall-clock dependent, so kept out of the serialized report.
    #[serde(skip)]
    pub speed: Vec<SpeedRow>,
}

impl RunReport {
    /// Builds every derived table from the cells.
    pub fn assemble(
        name: String,
        seed: u64,
        replicates: usize,
        datasets: Vec<DatasetRecord>,
        models: Vec<String>,
        reference: Vec<ReferenceValue>,
        bayes_factor_pairs: Vec<[String; 2]>,
        cells: Vec<CellRecord>,
    ) -> RunReport {
        let mut methods: Vec<Method> = cells.iter().map(|c| c.method).collect();
        methods.sort();
        methods.dedup();

        let mut summaries = Vec::new();
        for &method in &methods {
            for model in &models {
                let rows: Vec<&CellRecord> = cells
                    .iter()
                    .filter(|c| c.method == method && &c.model == model)
                    .collect();
                let values: Vec<f64> = rows.iter().filter_map(|c| c.log_evidence).collect();
                summaries.push(MethodSummary {
                    model: model.clone(),
                    method,
                    failed: rows.len() - values.len(),
                    log_evidence: Summary::from_values(&values),
                });
            }
        }

        let lookup = |method: Method, model: &str, replicate: usize| {
            cells
                .iter()
                .find(|c| c.method == method && c.model == model && c.replicate == replicate)
                .and_then(|c| c.log_evidence)
        };
        let mut bayes_factors = Vec::new();
        let mut bayes_factor_summaries = Vec::new();
        for [num, den] in &bayes_factor_pairs {
            for &method in &methods {
                let mut reps: Vec<usize> = cells
                    .iter()
                    .filter(|c| c.method == method)
                    .map(|c| c.replicate)
                    .collect();
                reps.sort_unstable();
                reps.dedup();
                let rows: Vec<BayesFactorRow> = reps
                    .into_iter()
                    .filter_map(|r| {
                        let (a, b) = (lookup(method, num, r)?, lookup(method, den, r)?);
                        Some(BayesFactorRow {
                            numerator: num.clone(),
                            denominator: den.clone(),
                            method,
                            replicate: r,
                            log_bayes_factor: a - b,
                            bayes_factor: (a - b).exp(),
                        })
                    })
                    .collect();
                let bf: Vec<f64> = rows.iter().map(|r| r.bayes_factor).collect();
                let lbf: Vec<f64> = rows.iter().map(|r| r.log_bayes_factor).collect();
                bayes_factor_summaries.push(BayesFactorSummary {
                    numerator: num.clone(),
                    denominator: den.clone(),
                    method,
                    bayes_factor: Summary::from_values(&bf),
                    log_bayes_factor: Summary::from_values(&lbf),
                });
                bayes_factors.extend(rows);
            }
        }

        let mut speed: Vec<SpeedRow> = methods
            .iter()
            .filter(|m| **m != Method::Exact)
            .map(|&method| {
                let rows: Vec<&CellRecord> = cells.iter().filter(|c| c.method == method).collect();
                let mut reps: Vec<usize> = rows.iter().map(|c| c.replicate).collect();
                reps.sort_unstable();
                reps.dedup();
                let total: f64 = rows.iter().map(|c| c.seconds).sum();
                SpeedRow {
                    method,
                    mean_seconds: total / reps.len().max(1) as f64,
                    relative_speed: 0.0,
                }
            })
            .collect();
        let fastest = speed
            .iter()
            .map(|s| s.mean_seconds)
            .fold(f64::INFINITY, f64::min)
            .max(f64::MIN_POSITIVE);
        for s in &mut speed {
            s.relative_speed = s.mean_seconds / fastest;
        }

        RunReport {
            name,
            seed,
            replicates,
            datasets,
            models,
            reference,
            bayes_factor_pairs,
            cells,
            summaries,
            bayes_factors,
            bayes_factor_summaries,
            speed,
        }
    }

    pub fn failed_cells(&self) -> usize {
        self.cells.iter().filter(|c| c.failed()).count()
    }

    pub fn reference_log_evidence(&self, model: &str) -> Option<f64> {
        self.reference
            .iter()
            .find(|r| r.model == model)
            .map(|r| r.log_evidence)
    }

    pub fn bayes_factor_summary(
        &self,
        numerator: &str,
        denominator: &str,
        method: Method,
    ) -> Option<&BayesFactorSummary> {
        self.bayes_factor_summaries.iter().find(|s| {
            s.numerator == numerator && s.denominator == denominator && s.method == method
        })
    }

    pub fn summary(&self, model: &str, method: Method) -> Option<&MethodSummary> {
        self.summaries
            .iter()
            .find(|s| s.model == model && s.method == method)
    }

    /// Exact log Bayes factor from the reference values, when both exist.
    pub fn reference_log_bayes_factor(&self, numerator: &str, denominator: &str) -> Option<f64> {
        Some(self.reference_log_evidence(numerator)? - self.reference_log_evidence(denominator)?)
    }

    pub fn summary_csv(&self) -> String {
        let mut out = String::from("model,method,count,failed,mean,sd,se,min,q1,median,q3,max\n");
        for s in &self.summaries {
            let _ = writeln!(
                out,
                "{},{},{}",
                s.model,
                s.method,
                summary_fields(s.log_evidence.as_ref(), s.failed)
            );
        }
        out
    }

    pub fn bayes_factor_csv(&self) -> String {
        let mut out =
            String::from("numerator,denominator,method,replicate,log_bayes_factor,bayes_factor\n");
        for r in &self.bayes_factors {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.numerator,
                r.denominator,
                r.method,
                r.replicate,
                fmt_f64(r.log_bayes_factor),
                fmt_f64(r.bayes_factor)
            );
        }
        out
    }

    pub fn bayes_factor_summary_csv(&self) -> String {
        let mut out = String::from(
            "numerator,denominator,method,quantity,count,failed,mean,sd,se,min,q1,median,q3,max\n",
        );
        for s in &self.bayes_factor_summaries {
            for (q, v) in [
                ("bayes_factor", &s.bayes_factor),
                ("log_bayes_factor", &s.log_bayes_factor),
            ] {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    s.numerator,
                    s.denominator,
                    s.method,
                    q,
                    summary_fields(v.as_ref(), 0)
                );
            }
        }
        out
    }

    pub fn speed_csv(&self) -> String {
        let mut out = String::from("method,mean_seconds,relative_speed\n");
        for s in &self.speed {
            let _ = writeln!(
                out,
                "{},{:.6},{:.3}",
                s.method, s.mean_seconds, s.relative_speed
            );
        }
        out
    }

    pub fn timings_csv(&self) -> String {
        let mut out = String::from("model,method,replicate,seconds\n");
        for c in &self.cells {
            let _ = writeln!(
                out,
                "{},{},{},{:.6}",
                c.model, c.method, c.replicate, c.seconds
            );
        }
        out
    }

    /// One JSON object per cell that produced diagnostics.
    pub fn diagnostics_jsonl(&self) -> String {
        let mut out = String::new();
        for c in &self.cells {
            if let Some(d) = &c.diagnostics {
                let line = serde_json::json!({
                    "model": c.model,
                    "method": c.method,
                    "replicate": c.replicate,
                    "diagnostics": d,
                });
                out.push_str(&line.to_string());
                out.push('\n');
            }
        }
        out
    }

    /// Human-readable table of Bayes factors and log evidences.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "experiment {} (seed {}, R = {})",
            self.name, self.seed, self.replicates
        );
        for r in &self.reference {
            let _ = writeln!(
                out,
                "  exact log evidence {:<12} {:.6}",
                r.model, r.log_evidence
            );
        }
        for [num, den] in &self.bayes_factor_pairs {
            let _ = writeln!(out, "\n  BF[{num}/{den}]");
            if let Some(l) = self.reference_log_bayes_factor(num, den) {
                let _ = writeln!(out, "    {:<16} {:>14.4}", "exact", l.exp());
            }
            for s in self
                .bayes_factor_summaries
                .iter()
                .filter(|s| &s.numerator == num && &s.denominator == den)
            {
                match &s.bayes_factor {
                    Some(b) => {
                        let se =
                            b.se.map(|v| format!("{v:.4}"))
                                .unwrap_or_else(|| "-".into());
                        let _ = writeln!(
                            out,
                            "    {:<16} {:>14.4}  se {:>10}  (n = {})",
                            s.method, b.mean, se, b.count
                        );
                    }
                    None => {
                        let _ = writeln!(out, "    {:<16} {:>14}", s.method, "failed");
                    }
                }
            }
        }
        let _ = writeln!(out, "\n  mean log evidence");
        for s in &self.summaries {
            let mean = s
                .log_evidence
                .as_ref()
                .map(|v| format!("{:.4}", v.mean))
                .unwrap_or_else(|| "-".into());
            let _ = writeln!(
                out,
                "    {:<16} {:<12} {:>14}  failed {}",
                s.method, s.model, mean, s.failed
            );
        }
        if !self.speed.is_empty() {
            let _ = writeln!(out, "\n  relative speed");
            for s in &self.speed {
                let _ = writeln!(
                    out,
                    "    {:<16} {:>10.1}  ({:.3} s)",
                    s.method, s.relative_speed, s.mean_seconds
                );
            }
        }
        out
    }

    pub fn load(path: &Path) -> Result<RunReport, HarnessError> {
        let path = if path.is_dir() {
            path.join(super::REPORT_FILE)
        } else {
            path.to_path_buf()
        };
        let text = std::fs::read_to_string(&path).map_err(|e| HarnessError::io(&path, e))?;
        serde_json::from_str(&text).map_err(|e| HarnessError::parse(&path, e.line(), e.to_string()))
    }
}

fn summary_fields(s: Option<&Summary>, failed: usize) -> String {
    match s {
        None => format!("0,{failed},,,,,,,,"),
        Some(s) => {
            let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
            format!(
                "{},{},{},{},{},{},{},{},{},{}",
                s.count,
                failed,
                fmt_f64(s.mean),
                opt(s.sd),
                opt(s.se),
                fmt_f64(s.min),
                fmt_f64(s.q1),
                fmt_f64(s.median),
                fmt_f64(s.q3),
                fmt_f64(s.max)
            )
        }
    }
}

/// Long-format rows `(method, replicate, quantity, value)` for boxplots of
/// each model's log evidence and each Bayes factor, followed by reference
/// rows (method `exact`, empty replicate) holding closed-form values.
pub fn emit_boxplot_data(report: &RunReport) -> String {
    if report.replicates < 5 {
        log::warn!(
            "boxplots from {} replicates are not informative",
            report.replicates
        );
    }
    let single_pair = report.bayes_factor_pairs.len() == 1;
    let bf_quantity = |num: &str, den: &str| {
        if single_pair {
            "bayes_factor".to_string()
        } else {
            format!("bayes_factor_{num}_{den}")
        }
    };
    let mut out = String::from("method,replicate,quantity,value\n");
    let mut methods: Vec<Method> = report.cells.iter().map(|c| c.method).collect();
    methods.sort();
    methods.dedup();
    for &method in &methods {
        let mut reps: Vec<usize> = report
            .cells
            .iter()
            .filter(|c| c.method == method)
            .map(|c| c.replicate)
            .collect();
        reps.sort_unstable();
        reps.dedup();
        for r in reps {
            for model in &report.models {
                if let Some(v) = report
                    .cells
                    .iter()
                    .find(|c| c.method == method && &c.model == model && c.replicate == r)
                    .and_then(|c| c.log_evidence)
                {
                    let _ = writeln!(out, "{method},{r},log_evidence_{model},{}", fmt_f64(v));
                }
            }
            for b in report
                .bayes_factors
                .iter()
                .filter(|b| b.method == method && b.replicate == r)
            {
                let _ = writeln!(
                    out,
                    "{method},{r},{},{}",
                    bf_quantity(&b.numerator, &b.denominator),
                    fmt_f64(b.bayes_factor)
                );
            }
        }
    }
    for rv in &report.reference {
        let _ = writeln!(
            out,
            "exact,,log_evidence_{},{}",
            rv.model,
            fmt_f64(rv.log_evidence)
        );
    }
    for [num, den] in &report.bayes_factor_pairs {
        if let Some(l) = report.reference_log_bayes_factor(num, den) {
            let _ = writeln!(out, "exact,,{},{}", bf_quantity(num, den), fmt_f64(l.exp()));
        }
    }
    out
}
