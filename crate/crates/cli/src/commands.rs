//! One function per subcommand. Each returns what to print and the exit
//! code, leaving the process handling to `main`.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde_json::{json, Value};
use thiserror::Error;
use upl_core::analysis::{default_peak_cutoffs, route_cutoffs, CutoffVector, Route};
use upl_core::duality::verify_certificate;
use upl_core::format::{
    flow_from_str, flow_to_json, instance_from_str, mechanism_from_str, mechanism_to_json,
    menu_from_str, menu_to_json, prices_from_str, prices_to_json, rat_to_json, table_to_json,
    FormatError,
};
use upl_core::ironing::iron_instance;
use upl_core::lp::{build_revenue_lp, optimal_mechanism};
use upl_core::model::{ic_ir_violations, mechanism_to_menu, revenue};
use upl_core::pricing::{separate_to_upgrade, upgrade_to_separate, SeparateConversion};
use upl_core::rational::int;
use upl_core::Instance;

use crate::pipeline::{analyze, AnalysisReport, AnalyzeOptions};
use crate::render::{
    certificate_json, certificate_text, labels, report_json, report_text, violations_json, Style,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_UNMET: i32 = 3;
pub const EXIT_FAILED: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Format { path: PathBuf, source: FormatError },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        EXIT_ERROR
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Text,
}

/// Text for stdout and stderr plus the exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Output {
    fn new(stdout: String, code: i32) -> Self {
        Self {
            stdout,
            stderr: String::new(),
            code,
        }
    }

    fn json(value: &Value, code: i32) -> Self {
        Self::new(pretty(value), code)
    }
}

pub fn pretty(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    text.push('\n');
    text
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse<T>(path: &Path, f: impl FnOnce(&str) -> Result<T, FormatError>) -> Result<T, CliError> {
    f(&read_text(path)?).map_err(|source| CliError::Format {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_instance(path: &Path) -> Result<Instance, CliError> {
    parse(path, instance_from_str)
}

fn render_report(report: &AnalysisReport, format: OutputFormat, style: Style) -> String {
    match format {
        OutputFormat::Json => pretty(&report_json(report)),
        OutputFormat::Text => report_text(report, style),
    }
}

pub fn cmd_analyze(
    path: &Path,
    options: AnalyzeOptions,
    format: OutputFormat,
    style: Style,
) -> Result<Output, CliError> {
    let report = analyze(&load_instance(path)?, options);
    Ok(Output::new(
        render_report(&report, format, style),
        report.status.exit_code(),
    ))
}

/// Every `*.json` file of `dir`, analysed concurrently and reported in
/// file-name order. The exit code is the most severe outcome: any load
/// error, then any failed certificate, then any unmet conditions.
pub fn cmd_analyze_batch(
    dir: &Path,
    options: AnalyzeOptions,
    format: OutputFormat,
    style: Style,
) -> Result<Output, CliError> {
    let io_err = |source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    };
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io_err)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();

    let results: Vec<Mutex<Option<Result<AnalysisReport, CliError>>>> =
        files.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(files.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                let Some(file) = files.get(idx) else { break };
                let result = load_instance(file).map(|inst| analyze(&inst, options));
                *results[idx].lock().expect("no poisoned slots") = Some(result);
            });
        }
    });

    let mut code = EXIT_OK;
    let mut entries = serde_json::Map::new();
    let mut text = String::new();
    let mut stderr = String::new();
    for (file, slot) in files.iter().zip(results) {
        let name = file
            .file_name()
            .map_or_else(String::new, |n| n.to_string_lossy().into_owned());
        let result = slot
            .into_inner()
            .expect("no poisoned slots")
            .expect("every file analysed");
        let file_code = match &result {
            Ok(report) => report.status.exit_code(),
            Err(e) => e.exit_code(),
        };
        code = worse(code, file_code);
        match (result, format) {
            (Ok(report), OutputFormat::Json) => {
                entries.insert(name, report_json(&report));
            }
            (Ok(report), OutputFormat::Text) => {
                text.push_str(&format!("== {name} ==\n{}", report_text(&report, style)));
            }
            (Err(e), OutputFormat::Json) => {
                entries.insert(name, json!({ "error": e.to_string() }));
            }
            (Err(e), OutputFormat::Text) => {
                stderr.push_str(&format!("{e}\n"));
            }
        }
    }
    let stdout = match format {
        OutputFormat::Json => pretty(&json!({ "reports": entries })),
        OutputFormat::Text => text,
    };
    Ok(Output {
        stdout,
        stderr,
        code,
    })
}

fn severity(code: i32) -> u8 {
    match code {
        EXIT_OK => 0,
        EXIT_UNMET => 1,
        EXIT_FAILED => 2,
        _ => 3,
    }
}

fn worse(a: i32, b: i32) -> i32 {
    if severity(b) > severity(a) {
        b
    } else {
        a
    }
}

/// The LP-optimal mechanism; `dump_lp` puts the program text on stderr.
pub fn cmd_solve(path: &Path, dump_lp: bool) -> Result<Output, CliError> {
    let inst = load_instance(path)?;
    let (value, m) = optimal_mechanism(&inst);
    let mut out = Output::json(
        &json!({ "revenue": rat_to_json(&value), "mechanism": mechanism_to_json(&m) }),
        EXIT_OK,
    );
    if dump_lp {
        out.stderr = build_revenue_lp(&inst).to_string();
    }
    Ok(out)
}

/// Without a flow: IC/IR and the LP gap, verified when both are clean.
/// With a flow: the five certificate conditions.
pub fn cmd_verify(
    instance: &Path,
    mechanism: &Path,
    flow: Option<&Path>,
    format: OutputFormat,
    style: Style,
) -> Result<Output, CliError> {
    let inst = load_instance(instance)?;
    let m = parse(mechanism, mechanism_from_str)?;
    m.check_shape(&inst).map_err(|e| CliError::Format {
        path: mechanism.to_path_buf(),
        source: e.into(),
    })?;
    let flow = match flow {
        Some(p) => Some(parse(p, |text| flow_from_str(inst.n(), text))?),
        None => None,
    };
    let violations = ic_ir_violations(&inst, &m);
    let rev = revenue(&inst, &m);
    let (optimum, _) = optimal_mechanism(&inst);
    let gap = &optimum - &rev;
    let verdict = flow.as_ref().map(|f| verify_certificate(&inst, &m, f));
    let verified = match &verdict {
        Some(v) => v.holds(),
        None => violations.is_empty() && gap == int(0),
    };
    let code = if verified { EXIT_OK } else { EXIT_FAILED };
    let stdout = match format {
        OutputFormat::Json => pretty(&json!({
            "verified": verified,
            "ic_ir": { "holds": violations.is_empty(), "violations": violations_json(&violations) },
            "revenue": rat_to_json(&rev),
            "lp": { "optimum": rat_to_json(&optimum), "gap": rat_to_json(&gap) },
            "certificate": verdict.as_ref().map_or(Value::Null, certificate_json),
        })),
        OutputFormat::Text => {
            let mut out = String::new();
            let ic = if violations.is_empty() {
                "IC/IR: pass".to_string()
            } else {
                format!(
                    "IC/IR: {} violations, first {}",
                    violations.len(),
                    violations[0]
                )
            };
            out.push_str(&format!(
                "{ic}\nrevenue: {rev}\nlp optimum: {optimum}, gap {gap}\n"
            ));
            if let Some(v) = &verdict {
                out.push_str("certificate:\n");
                certificate_text(&mut out, v, style);
            }
            out.push_str(&format!(
                "verified: {}\n",
                if verified { "yes" } else { "no" }
            ));
            out
        }
    };
    Ok(Output::new(stdout, code))
}

/// Cutoffs for `iron` when none are given: the mostly-regular route, then
/// the first nondecreasing selection of pseudo-revenue peaks.
pub fn iron_cutoffs(inst: &Instance) -> Option<CutoffVector> {
    route_cutoffs(inst, Route::MostlyRegular).or_else(|| default_peak_cutoffs(inst))
}

pub fn parse_cutoffs(inst: &Instance, text: &str) -> Result<CutoffVector, CliError> {
    let usage = |msg: String| CliError::Usage(msg);
    let values: Vec<usize> = text
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|e| usage(format!("cutoffs {text:?}: {e}")))?;
    if values.len() != inst.d() || values.iter().any(|&c| c == 0 || c > inst.n()) {
        return Err(usage(format!(
            "expected {} cutoffs between 1 and {}",
            inst.d(),
            inst.n()
        )));
    }
    Ok(CutoffVector::from_labels(&values))
}

pub fn cmd_iron(path: &Path, cutoffs: Option<&str>) -> Result<Output, CliError> {
    let inst = load_instance(path)?;
    let cutoffs = match cutoffs {
        Some(text) => parse_cutoffs(&inst, text)?,
        None => match iron_cutoffs(&inst) {
            Some(c) => c,
            None => {
                return Ok(Output {
                    stdout: String::new(),
                    stderr: "no nondecreasing selection of pseudo-revenue peaks\n".into(),
                    code: EXIT_UNMET,
                })
            }
        },
    };
    let (kappa, flow, trace) = match iron_instance(&inst, &cutoffs) {
        Ok(result) => result,
        Err(e) => {
            return Ok(Output {
                stdout: String::new(),
                stderr: format!("{e}\n"),
                code: EXIT_UNMET,
            })
        }
    };
    let steps: Vec<Value> = trace
        .steps
        .iter()
        .map(|s| {
            let by_item: Vec<Vec<_>> = (0..inst.d())
                .map(|k| s.revenues.iter().map(|row| row[k].clone()).collect())
                .collect();
            json!({
                "type": s.type_index + 1,
                "item": s.item + 1,
                "gamma": rat_to_json(&s.gamma),
                "lambda": flow_to_json(&s.flow)["lambda"],
                "revenues": table_to_json(&by_item),
            })
        })
        .collect();
    let tied: Vec<usize> = (0..inst.n()).filter(|&i| kappa.is_tied(i)).collect();
    let value = json!({
        "cutoffs": cutoffs.labels(),
        "kappa": kappa.labels(),
        "tied": labels(&tied),
        "gamma": trace.to_string(),
        "steps": steps,
        "flow": flow_to_json(&flow),
    });
    Ok(Output::json(&value, EXIT_OK))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    ToSeparate,
    ToUpgrade,
}

pub fn cmd_convert(
    instance: &Path,
    direction: Direction,
    input: &Path,
) -> Result<Output, CliError> {
    let inst = load_instance(instance)?;
    match direction {
        Direction::ToSeparate => {
            let menu = parse(input, |text| menu_from_str(&inst, text))?;
            Ok(match upgrade_to_separate(&inst, &menu) {
                Ok(prices) => Output::json(&prices_to_json(&prices), EXIT_OK),
                Err(e) => Output {
                    stdout: String::new(),
                    stderr: format!("{e}\n"),
                    code: EXIT_UNMET,
                },
            })
        }
        Direction::ToUpgrade => {
            let prices = parse(input, |text| prices_from_str(&inst, text))?;
            Ok(match separate_to_upgrade(&inst, &prices) {
                SeparateConversion::Chain(m) => {
                    let menu = mechanism_to_menu(&inst, &m).expect("chain allocations form a menu");
                    Output::json(
                        &json!({
                            "chain": true,
                            "mechanism": mechanism_to_json(&m),
                            "menu": menu_to_json(&menu),
                            "revenue": rat_to_json(&revenue(&inst, &m)),
                        }),
                        EXIT_OK,
                    )
                }
                SeparateConversion::NotChain { first, second } => Output::json(
                    &json!({ "chain": false, "witness": [first + 1, second + 1] }),
                    EXIT_UNMET,
                ),
            })
        }
    }
}
