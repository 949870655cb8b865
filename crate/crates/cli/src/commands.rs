use std::fmt::Write;

use qwalk_core::verify::{self, Suite, VerifyOptions};
use qwalk_core::{
    classical_kernel, compare_majorization, kernel_walk, lorenz_curve_padded, prompt_trajectory, shannon_entropy,
    std_dev, SiteDistribution,
};
use serde::Serialize;

use crate::args::{AnalysisKind, Emit, FigureKind, RunSpec, Scheme};
use crate::error::CliError;
use crate::run::{fmt_float, trajectory, write_output};
use crate::svg::{self, Plot, Series};

#[derive(Serialize)]
struct ConfigRecord {
    scheme: &'static str,
    p: f64,
    c: [f64; 2],
    d: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    m: Option<usize>,
}

#[derive(Serialize)]
struct StepRecord {
    n: usize,
    sites: Vec<i64>,
    probs: Vec<f64>,
}

#[derive(Serialize)]
struct TrajectoryRecord {
    config: ConfigRecord,
    steps: Vec<StepRecord>,
}

fn selected<'a>(
    spec: &'a RunSpec,
    traj: &'a [SiteDistribution],
) -> impl Iterator<Item = (usize, &'a SiteDistribution)> {
    spec.steps.iter().map(move |&n| (n, &traj[n]))
}

pub fn simulate(spec: &RunSpec) -> Result<(), CliError> {
    let config = spec.config()?;
    let traj = trajectory(&config, spec.scheme, spec.m, spec.max_step())?;
    let body = match spec.emit.unwrap_or(Emit::Json) {
        Emit::Json => {
            let record = TrajectoryRecord {
                config: ConfigRecord {
                    scheme: spec.scheme.name(),
                    p: spec.single_p()?,
                    c: [spec.c.re, spec.c.im],
                    d: [spec.d.re, spec.d.im],
                    m: matches!(spec.scheme, Scheme::Kernel | Scheme::Cp).then_some(spec.m),
                },
                steps: selected(spec, &traj)
                    .map(|(n, d)| StepRecord {
                        n,
                        sites: d.sites().collect(),
                        probs: d.probabilities().collect(),
                    })
                    .collect(),
            };
            let mut text = serde_json::to_string(&record).map_err(std::io::Error::from)?;
            text.push('\n');
            text
        }
        Emit::Csv => {
            let mut out = String::from("step,site,probability\n");
            for (n, d) in selected(spec, &traj) {
                for (k, v) in d.iter() {
                    writeln!(out, "{n},{k},{}", fmt_float(v)).unwrap();
                }
            }
            out
        }
        Emit::Svg => {
            let (n, d) = selected(spec, &traj).last().expect("at least one step");
            Plot {
                title: format!("{} walk, step {n}", spec.scheme.name()),
                x_label: "site".into(),
                y_label: "probability".into(),
                series: vec![Series {
                    name: format!("step {n}"),
                    points: d.iter().map(|(k, v)| (k as f64, v)).collect(),
                    values: d.iter().map(|(k, v)| (k.to_string(), fmt_float(v))).collect(),
                }],
            }
            .render()
        }
    };
    write_output(spec.out.as_deref(), &body)
}

struct EntropyRow {
    step: usize,
    classical: f64,
    quantum: f64,
}

fn entropy_rows(spec: &RunSpec, p: f64) -> Result<Vec<EntropyRow>, CliError> {
    let config = spec.config_for(p)?;
    let quantum = trajectory(&config, spec.scheme, spec.m, spec.max_step())?;
    let classical = prompt_trajectory(&config, spec.max_step());
    Ok(spec
        .steps
        .iter()
        .map(|&n| EntropyRow {
            step: n,
            classical: shannon_entropy(&classical[n]),
            quantum: shannon_entropy(&quantum[n]),
        })
        .collect())
}

struct LorenzRows {
    step: usize,
    points: Vec<(f64, f64)>,
}

/// Lorenz curves of the selected steps, zero-padded to a common length.
fn lorenz_rows(spec: &RunSpec) -> Result<Vec<LorenzRows>, CliError> {
    let traj = trajectory(&spec.config()?, spec.scheme, spec.m, spec.max_step())?;
    let slots = selected(spec, &traj).map(|(_, d)| d.support_len()).max().unwrap_or(1);
    Ok(selected(spec, &traj)
        .map(|(n, d)| LorenzRows {
            step: n,
            points: lorenz_curve_padded(d, slots).points().to_vec(),
        })
        .collect())
}

fn require_emit(spec: &RunSpec, want: Emit, command: &str) -> Result<(), CliError> {
    match spec.emit {
        None => Ok(()),
        Some(e) if e == want => Ok(()),
        Some(e) => Err(CliError::Usage(format!("{command} cannot emit {e:?}").to_lowercase())),
    }
}

pub fn analyze(which: AnalysisKind, spec: &RunSpec) -> Result<(), CliError> {
    require_emit(spec, Emit::Csv, "analyze")?;
    let mut out = String::new();
    match which {
        AnalysisKind::Entropy => {
            out.push_str("step,entropy_classical_nats,entropy_quantum_nats\n");
            for row in entropy_rows(spec, spec.single_p()?)? {
                writeln!(
                    out,
                    "{},{},{}",
                    row.step,
                    fmt_float(row.classical),
                    fmt_float(row.quantum)
                )
                .unwrap();
            }
        }
        AnalysisKind::Lorenz => {
            out.push_str("step,n,n_over_N,gamma\n");
            for curve in lorenz_rows(spec)? {
                for (i, (x, g)) in curve.points.iter().enumerate() {
                    writeln!(out, "{},{i},{},{}", curve.step, fmt_float(*x), fmt_float(*g)).unwrap();
                }
            }
        }
        AnalysisKind::Majorize => {
            let traj = trajectory(&spec.config()?, spec.scheme, spec.m, spec.max_step())?;
            out.push_str("step_a,step_b,verdict,crossings\n");
            for pair in spec.steps.windows(2) {
                let verdict = compare_majorization(&traj[pair[0]], &traj[pair[1]]);
                let crossings: Vec<String> = verdict.crossings().iter().map(|c| c.to_string()).collect();
                writeln!(
                    out,
                    "{},{},{},{}",
                    pair[0],
                    pair[1],
                    verdict.label(),
                    crossings.join(";")
                )
                .unwrap();
            }
        }
        AnalysisKind::Sigma => {
            let config = spec.config()?;
            let traj = trajectory(&config, spec.scheme, spec.m, spec.max_step())?;
            let classical = prompt_trajectory(&config, spec.max_step());
            out.push_str("step,scheme,sigma,ratio_to_classical\n");
            for &n in spec.steps.iter().filter(|&&n| n > 0) {
                let sigma = std_dev(&traj[n]);
                let ratio = sigma / std_dev(&classical[n]);
                writeln!(
                    out,
                    "{n},{},{},{}",
                    spec.scheme.name(),
                    fmt_float(sigma),
                    fmt_float(ratio)
                )
                .unwrap();
            }
        }
    }
    write_output(spec.out.as_deref(), &out)
}

pub fn figure(which: FigureKind, spec: &RunSpec) -> Result<(), CliError> {
    require_emit(spec, Emit::Svg, "figure")?;
    let body = match which {
        FigureKind::Lorenz => Plot {
            title: "Lorenz curves".into(),
            x_label: "n / N".into(),
            y_label: "cumulative probability".into(),
            series: lorenz_rows(spec)?
                .into_iter()
                .map(|curve| Series {
                    name: format!("step {}", curve.step),
                    values: curve
                        .points
                        .iter()
                        .map(|&(x, g)| (fmt_float(x), fmt_float(g)))
                        .collect(),
                    points: curve.points,
                })
                .collect(),
        }
        .render(),
        FigureKind::Entropy => entropy_figure(spec)?,
        FigureKind::MemoryDiagram => memory_diagram(spec)?,
    };
    write_output(spec.out.as_deref(), &body)
}

fn entropy_figure(spec: &RunSpec) -> Result<String, CliError> {
    let tables: Vec<Result<Vec<EntropyRow>, CliError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = spec
            .ps
            .iter()
            .map(|&p| scope.spawn(move || entropy_rows(spec, p)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("entropy worker panicked"))
            .collect()
    });
    let tables = tables.into_iter().collect::<Result<Vec<_>, _>>()?;

    let series_of = |name: String, rows: &[EntropyRow], pick: fn(&EntropyRow) -> f64| Series {
        name,
        points: rows.iter().map(|r| (r.step as f64, pick(r))).collect(),
        values: rows.iter().map(|r| (r.step.to_string(), fmt_float(pick(r)))).collect(),
    };
    let mut series: Vec<Series> = spec
        .ps
        .iter()
        .zip(&tables)
        .map(|(p, rows)| series_of(format!("quantum p={p}"), rows, |r| r.quantum))
        .collect();
    series.push(series_of(format!("classical p={}", spec.ps[0]), &tables[0], |r| {
        r.classical
    }));
    Ok(Plot {
        title: "Quantum and classical entropies".into(),
        x_label: "step".into(),
        y_label: "entropy (nats)".into(),
        series,
    }
    .render())
}

/// Two tracks of step nodes: the classical chain on top, the quantum walk
/// below, joined at every step by an arrow carrying their total-variation gap.
fn memory_diagram(spec: &RunSpec) -> Result<String, CliError> {
    let config = spec.config()?;
    let n_max = spec.max_step();
    let p = spec.single_p()?;
    let classical = kernel_walk(&classical_kernel(p)?, n_max, &SiteDistribution::delta(0))?;
    let quantum = trajectory(&config, Scheme::Global, spec.m, n_max)?;

    let (top, bottom) = (200.0, 420.0);
    let left = 80.0;
    let dx = if n_max == 0 {
        0.0
    } else {
        (svg::WIDTH - 2.0 * left) / n_max as f64
    };
    let mut out = String::new();
    svg::header(&mut out, "Pseudo memory effect");
    out.push_str(concat!(
        r#"<defs><marker id="arrow" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="6" markerHeight="6" orient="auto">"#,
        r#"<path d="M0,0 L10,5 L0,10 z"/></marker></defs>"#,
        "\n"
    ));
    writeln!(out, r#"<text x="20" y="{}" font-size="14">CRW</text>"#, top + 5.0).unwrap();
    writeln!(out, r#"<text x="20" y="{}" font-size="14">QRW</text>"#, bottom + 5.0).unwrap();

    for n in 0..=n_max {
        let x = left + dx * n as f64;
        let gap = classical[n].total_variation(&quantum[n]);
        writeln!(
            out,
            r#"<g class="column" data-step="{n}" data-gap="{}">"#,
            fmt_float(gap)
        )
        .unwrap();
        writeln!(
            out,
            r#"<circle cx="{x:.2}" cy="{top}" r="14" fill="white" stroke="black"/>"#
        )
        .unwrap();
        writeln!(
            out,
            r#"<circle cx="{x:.2}" cy="{bottom}" r="14" fill="white" stroke="black"/>"#
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{x:.2}" y="{}" text-anchor="middle">P_C({n})</text>"#,
            top - 24.0
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{x:.2}" y="{}" text-anchor="middle">P_Q({n})</text>"#,
            bottom + 32.0
        )
        .unwrap();
        if n > 0 {
            let x_prev = x - dx;
            for y in [top, bottom] {
                writeln!(
                    out,
                    r#"<line x1="{:.2}" y1="{y}" x2="{:.2}" y2="{y}" stroke="black" marker-end="url(#arrow)"/>"#,
                    x_prev + 14.0,
                    x - 14.0
                )
                .unwrap();
            }
            writeln!(
                out,
                r#"<line class="memory" x1="{x:.2}" y1="{}" x2="{x:.2}" y2="{}" stroke="{}" marker-end="url(#arrow)"/>"#,
                top + 14.0,
                bottom - 14.0,
                if gap > 1e-12 { "#d62728" } else { "#999999" }
            )
            .unwrap();
            writeln!(
                out,
                r##"<text x="{:.2}" y="{}" fill="#d62728">δ({n})</text>"##,
                x + 6.0,
                (top + bottom) / 2.0
            )
            .unwrap();
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn verify(
    suite: Suite,
    max_steps: usize,
    tol: Option<f64>,
    out: Option<&std::path::Path>,
) -> Result<bool, CliError> {
    if max_steps == 0 {
        return Err(CliError::Usage("--max-steps must be at least 1".into()));
    }
    if tol.is_some_and(|t| t.is_nan() || t <= 0.0) {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    let report = verify::run(suite, &VerifyOptions { max_steps, tol });
    let mut text = serde_json::to_string_pretty(&report).map_err(std::io::Error::from)?;
    text.push('\n');
    write_output(out, &text)?;
    Ok(report.passed())
}
