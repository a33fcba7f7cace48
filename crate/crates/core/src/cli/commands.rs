use serde_json::{json, Map, Value};

use super::config::{num, Format, RunConfig, UsageError};
use super::Output;
use crate::dynamics;
use crate::error::TcsError;
use crate::observables::{self, minimization_times, solve_mu_for_time, ZeroStatus};
use crate::params::Regime;
use crate::states::Grid;
use crate::verify::{self, ReportOptions};

enum Cell {
    Num(f64),
    Int(usize),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => num(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) if v.is_finite() => json!(v),
            Cell::Int(v) => json!(v),
            Cell::Text(s) => json!(s),
            _ => Value::Null,
        }
    }
}

fn table(config: &RunConfig, command: &str, columns: &[&str], rows: Vec<Vec<Cell>>) -> String {
    let mut out = String::new();
    match config.format {
        Format::Csv => {
            out.push_str(&config.header(command));
            out.push('\n');
            out.push_str(&columns.join(","));
            out.push('\n');
            for row in rows {
                let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
        }
        Format::JsonLines => {
            for row in rows {
                let obj: Map<String, Value> = columns
                    .iter()
                    .map(|c| c.to_string())
                    .zip(row.iter().map(Cell::json))
                    .collect();
                out.push_str(&Value::Object(obj).to_string());
                out.push('\n');
            }
        }
    }
    out
}

fn fail(e: TcsError) -> UsageError {
    UsageError(e.to_string())
}

pub fn trajectory(config: &RunConfig) -> Result<Output, UsageError> {
    let params = config.params().map_err(fail)?;
    let mut rows = Vec::new();
    for t in config.times() {
        let s = dynamics::phase_state(&params, t).map_err(fail)?;
        rows.push(vec![
            Cell::Num(s.t),
            Cell::Num(s.x),
            Cell::Num(s.p),
            Cell::Num(s.w.re),
            Cell::Num(s.w.im),
            Cell::Num(s.z.re),
            Cell::Num(s.z.im),
            Cell::Num(s.sigma),
            Cell::Num(dynamics::mechanical_energy(&params, s.x, s.p, t)),
        ]);
    }
    let columns = ["t", "x", "p", "w_re", "w_im", "z_re", "z_im", "sigma", "E"];
    Ok(Output {
        text: table(config, "trajectory", &columns, rows),
        passed: true,
    })
}

pub fn observables(config: &RunConfig) -> Result<Output, UsageError> {
    let params = config.params().map_err(fail)?;
    let mut rows = Vec::new();
    for t in config.times() {
        let o = match config.state {
            super::StateArg::Fock(n) => observables::expectations_tcs(&params, n, t),
            super::StateArg::Coherent(re, im) => {
                observables::expectations_cs(&params, num_complex::Complex64::new(re, im), t)
            }
        }
        .map_err(fail)?;
        let g = observables::uncertainty_products(&params, 0, t)
            .map_err(fail)?
            .g_value;
        rows.push(vec![
            Cell::Num(t),
            Cell::Num(o.mean_x),
            Cell::Num(o.mean_p),
            Cell::Num(o.var_x),
            Cell::Num(o.var_p),
            Cell::Num(o.product),
            g.map_or(Cell::Empty, Cell::Num),
            Cell::Num(o.mean_e),
        ]);
    }
    let columns = [
        "t", "mean_x", "mean_p", "var_x", "var_p", "product", "g", "mean_E",
    ];
    Ok(Output {
        text: table(config, "observables", &columns, rows),
        passed: true,
    })
}

pub fn wavefunction(config: &RunConfig) -> Result<Output, UsageError> {
    let params = config.params().map_err(fail)?;
    let state = config
        .state
        .spec()
        .build(&params, config.t0)
        .map_err(fail)?;
    let grid = match config.grid_halfwidth {
        Some(h) => {
            let (center, _) = state.position_moments().map_err(fail)?;
            Grid::new(center, h, config.grid_n)
        }
        None => Grid::around(&state, verify::DEFAULT_SIGMAS, config.grid_n),
    }
    .map_err(fail)?;
    let rows = grid
        .points()
        .into_iter()
        .zip(state.evaluate_grid(&grid))
        .map(|(x, v)| {
            vec![
                Cell::Num(x),
                Cell::Num(v.re),
                Cell::Num(v.im),
                Cell::Num(v.norm_sqr()),
            ]
        })
        .collect();
    Ok(Output {
        text: table(config, "wavefunction", &["x", "re", "im", "abs2"], rows),
        passed: true,
    })
}

fn status_name(status: ZeroStatus) -> &'static str {
    match status {
        ZeroStatus::Isolated => "isolated",
        ZeroStatus::Degenerate => "degenerate",
        ZeroStatus::NoSecondZero => "no-second-zero",
    }
}

pub fn minimize(config: &RunConfig) -> Result<Output, UsageError> {
    let params = config.params().map_err(fail)?;
    if params.b().re != 0.0 {
        return Err(fail(TcsError::NonzeroReB(params.b().re)));
    }
    let (Some(theta), Some(mu)) = (params.theta(), params.mu()) else {
        return Err(fail(TcsError::CriticalRegime));
    };
    let omega = params.omega_abs();
    let regime = params.regime();
    let mut rows = Vec::new();
    if let Some(t) = config.solve_mu {
        let row = match solve_mu_for_time(theta, omega, t, regime) {
            Ok(sol) => vec![
                Cell::Int(0),
                Cell::Text("solve-mu".into()),
                Cell::Num(t),
                Cell::Num(sol.mu),
                Cell::Empty,
                Cell::Text(status_name(sol.status).into()),
            ],
            Err(e @ TcsError::NoMuSolution { .. }) => vec![
                Cell::Int(0),
                Cell::Text("solve-mu".into()),
                Cell::Num(t),
                Cell::Empty,
                Cell::Empty,
                Cell::Text(e.to_string().replace(',', ";")),
            ],
            Err(e) => return Err(fail(e)),
        };
        rows.push(row);
    } else {
        let k_max = match regime {
            Regime::Underdamped => {
                ((config.t1 * omega / std::f64::consts::PI).floor().max(0.0)) as usize
            }
            _ => 0,
        };
        let found = minimization_times(theta, mu, omega, regime, k_max).map_err(fail)?;
        let inside = found
            .times
            .into_iter()
            .filter(|t| *t >= config.t0 && *t <= config.t1);
        for (k, t) in inside.enumerate() {
            let g = observables::g_function(theta, mu, omega, t, regime).map_err(fail)?;
            rows.push(vec![
                Cell::Int(k),
                Cell::Text("minimum".into()),
                Cell::Num(t),
                Cell::Num(mu),
                Cell::Num(g),
                Cell::Text(status_name(found.status).into()),
            ]);
        }
    }
    let columns = ["k", "kind", "t", "mu", "g", "status"];
    Ok(Output {
        text: table(config, "minimize", &columns, rows),
        passed: true,
    })
}

pub fn verify(config: &RunConfig) -> Result<Output, UsageError> {
    let opts = ReportOptions {
        corrupt_branch: config.corrupt_branch,
        ..Default::default()
    };
    let mut summary = verify::battery_report(opts);
    for (name, tol) in &config.tol {
        summary.retolerance(name, *tol);
    }
    let text = match config.format {
        Format::JsonLines => summary.to_json_lines(),
        Format::Csv => {
            let rows = summary
                .checks()
                .iter()
                .map(|c| {
                    vec![
                        Cell::Text(c.name.clone()),
                        Cell::Text(if c.passed { "pass" } else { "fail" }.into()),
                        Cell::Num(c.measured),
                        Cell::Text(
                            serde_json::to_value(c.relation)
                                .ok()
                                .and_then(|v| v.as_str().map(String::from))
                                .unwrap_or_default(),
                        ),
                        Cell::Num(c.tolerance),
                        Cell::Text(c.detail.clone().unwrap_or_default().replace(',', ";")),
                    ]
                })
                .collect();
            let columns = [
                "check",
                "result",
                "measured",
                "relation",
                "tolerance",
                "detail",
            ];
            table(config, "verify", &columns, rows)
        }
    };
    Ok(Output {
        text,
        passed: summary.all_passed(),
    })
}
