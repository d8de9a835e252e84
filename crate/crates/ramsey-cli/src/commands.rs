//! Command preparation and execution. Preparation parses and validates
//! everything and produces the cache key material; execution runs the
//! engine and renders stdout. The split keeps cache keying honest: a key
//! covers exactly the values execution consumes.

use ramsey_core::arrows::{
    arrow_check_budgeted, build_gadget, empirical_degree_budgeted, extension_type_coloring,
    simultaneous_arrow_check_budgeted, ArrowQuery, ExtensionMode, SizeCaps, DEFAULT_ARROW_BUDGET,
};
use ramsey_core::canonical::canonical_form;
use ramsey_core::classes::{chromatic_number, enumerate_members, is_member, ClassKind, ClassSpec};
use ramsey_core::codec::{write_graph6, write_ocg_json};
use ramsey_core::degrees::{
    aut_degree, elementary_report, enumerate_extensions_monotone, enumerate_extensions_ordered,
    sigma, tau, Quantity,
};
use ramsey_core::{Graph, OrderedColoredGraph};

use crate::inputs::{self, Entry};
use crate::{ClassArg, Cli, CliError, Command, ModeArg, Outcome, OutputArg};

pub struct Prepared {
    pub key_material: String,
    pub job: Job,
}

pub enum Job {
    Count {
        which: CountKind,
        graph: Graph,
        n: usize,
    },
    Member {
        value: OrderedColoredGraph,
        spec: ClassSpec,
    },
    Enum {
        spec: ClassSpec,
        max_size: usize,
    },
    Extensions {
        graph: Graph,
        n: usize,
        mode: ExtensionMode,
    },
    Arrow {
        query: ArrowQuery,
        budget: u64,
    },
    SimArrow {
        host: OrderedColoredGraph,
        target: OrderedColoredGraph,
        patterns: Vec<OrderedColoredGraph>,
        k: usize,
        budget: u64,
    },
    Gadget {
        graph: Graph,
        n: usize,
        mode: ExtensionMode,
    },
    Alpha {
        host: OrderedColoredGraph,
        x: Graph,
        mode: ExtensionMode,
    },
    DegreeSearch {
        x: Graph,
        spec: ClassSpec,
        k: usize,
        caps: SizeCaps,
        budget: u64,
    },
    ReportElementary {
        n: usize,
        max_parts: usize,
        max_part_size: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum CountKind {
    Sigma,
    Tau,
    Autdeg,
    Chrom,
}

fn require<T: Copy>(value: Option<T>, what: &str, command: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::invalid(format!("{command} needs {what}")))
}

fn class_kind(arg: ClassArg) -> ClassKind {
    match arg {
        ClassArg::NColorable => ClassKind::NColorable,
        ClassArg::NColorableOrdered => ClassKind::NColorableOrdered,
        ClassArg::NChromatic => ClassKind::NChromatic,
        ClassArg::NChromaticOrdered => ClassKind::NChromaticOrdered,
        ClassArg::KnFree => ClassKind::KnFree,
        ClassArg::ColoredOrdered => ClassKind::ColoredOrdered,
        ClassArg::MonotoneColoredOrdered => ClassKind::MonotoneColoredOrdered,
    }
}

fn class_name(kind: ClassKind) -> &'static str {
    match kind {
        ClassKind::NColorable => "n-colorable",
        ClassKind::NColorableOrdered => "n-colorable-ordered",
        ClassKind::NChromatic => "n-chromatic",
        ClassKind::NChromaticOrdered => "n-chromatic-ordered",
        ClassKind::KnFree => "kn-free",
        ClassKind::ColoredOrdered => "colored-ordered",
        ClassKind::MonotoneColoredOrdered => "monotone-colored-ordered",
    }
}

fn extension_mode(arg: ModeArg) -> ExtensionMode {
    match arg {
        ModeArg::Ordered => ExtensionMode::OrderedColored,
        ModeArg::Monotone => ExtensionMode::Monotone,
    }
}

fn output_name(output: OutputArg) -> &'static str {
    match output {
        OutputArg::Tsv => "tsv",
        OutputArg::Json => "json",
    }
}

/// Key line for a graph whose answer is labeling-invariant: isomorphic
/// inputs share the line.
fn certificate_line(g: &Graph) -> Result<String, CliError> {
    let cert = canonical_form(g)?.certificate;
    Ok(format!(
        "input-certificate={}:{:x}",
        cert.vertex_count(),
        cert.bits()
    ))
}

pub fn prepare(cli: &Cli) -> Result<Prepared, CliError> {
    let entries = inputs::read_entries(cli.input.as_deref())?;
    let command = cli.command.name();
    let out_line = format!("output={}", output_name(cli.output));
    match cli.command {
        Command::Sigma | Command::Tau => {
            let n = require(cli.n, "--n", command)?;
            let graph = inputs::plain_graph(inputs::single(&entries, command)?, cli.format)?;
            let which = if cli.command == Command::Sigma {
                CountKind::Sigma
            } else {
                CountKind::Tau
            };
            Ok(Prepared {
                key_material: format!(
                    "op={command}\n{}\nn={n}\n{out_line}",
                    certificate_line(&graph)?
                ),
                job: Job::Count { which, graph, n },
            })
        }
        Command::Autdeg | Command::Chrom => {
            let graph = inputs::plain_graph(inputs::single(&entries, command)?, cli.format)?;
            let which = if cli.command == Command::Autdeg {
                CountKind::Autdeg
            } else {
                CountKind::Chrom
            };
            Ok(Prepared {
                key_material: format!("op={command}\n{}\n{out_line}", certificate_line(&graph)?),
                job: Job::Count { which, graph, n: 1 },
            })
        }
        Command::Member => {
            let n = require(cli.n, "--n", command)?;
            let kind = class_kind(require(cli.class, "--class", command)?);
            let spec = ClassSpec::new(kind, n)?;
            let entry = inputs::single(&entries, command)?;
            let value = member_value(entry, cli, kind, n)?;
            Ok(Prepared {
                key_material: format!(
                    "op={command}\nclass={}\nn={n}\ninput={}\n{out_line}",
                    class_name(kind),
                    write_ocg_json(&value)
                ),
                job: Job::Member { value, spec },
            })
        }
        Command::Enum => {
            let n = require(cli.n, "--n", command)?;
            let kind = class_kind(require(cli.class, "--class", command)?);
            let max_size = require(cli.max_size, "--max-size", command)?;
            expect_no_input(&entries, command)?;
            Ok(Prepared {
                key_material: format!(
                    "op={command}\nclass={}\nn={n}\nmax-size={max_size}\n{out_line}",
                    class_name(kind)
                ),
                job: Job::Enum {
                    spec: ClassSpec::new(kind, n)?,
                    max_size,
                },
            })
        }
        Command::Extensions => {
            let n = require(cli.n, "--n", command)?;
            let graph = inputs::plain_graph(inputs::single(&entries, command)?, cli.format)?;
            let mode = extension_mode(cli.mode);
            Ok(Prepared {
                key_material: format!(
                    "op={command}\ninput={}\nn={n}\nmode={:?}\n{out_line}",
                    write_graph6(&graph)?,
                    cli.mode
                ),
                job: Job::Extensions { graph, n, mode },
            })
        }
        Command::Arrow => {
            let k = require(cli.k, "--k", command)?;
            let t = cli.t.unwrap_or(1);
            let n = cli.n.unwrap_or(1);
            let host = inputs::structure(inputs::keyed(&entries, "z")?, cli.format, n)?;
            let target = inputs::structure(inputs::keyed(&entries, "y")?, cli.format, n)?;
            let pattern = inputs::structure(inputs::keyed(&entries, "x")?, cli.format, n)?;
            let budget = cli.budget.unwrap_or(DEFAULT_ARROW_BUDGET);
            Ok(Prepared {
                key_material: format!(
                    "op={command}\nz={}\ny={}\nx={}\nk={k}\nt={t}\nbudget={budget}\n{out_line}",
                    write_ocg_json(&host),
                    write_ocg_json(&target),
                    write_ocg_json(&pattern)
                ),
                job: Job::Arrow {
                    query: ArrowQuery {
                        host,
                        target,
                        pattern,
                        k,
                        t,
                    },
                    budget,
                },
            })
        }
        Command::SimArrow => {
            let k = require(cli.k, "--k", command)?;
            let n = cli.n.unwrap_or(1);
            let host = inputs::structure(inputs::keyed(&entries, "z")?, cli.format, n)?;
            let target = inputs::structure(inputs::keyed(&entries, "y")?, cli.format, n)?;
            let pattern_entries = inputs::keyed_all(&entries, "p");
            if pattern_entries.is_empty() {
                return Err(CliError::invalid("sim-arrow needs at least one p= entry"));
            }
            let patterns = pattern_entries
                .iter()
                .map(|e| inputs::structure(e, cli.format, n))
                .collect::<Result<Vec<_>, _>>()?;
            let budget = cli.budget.unwrap_or(DEFAULT_ARROW_BUDGET);
            let pattern_lines: Vec<String> = patterns
                .iter()
                .map(|p| format!("p={}", write_ocg_json(p)))
                .collect();
            Ok(Prepared {
                key_material: format!(
                    "op={command}\nz={}\ny={}\n{}\nk={k}\nbudget={budget}\n{out_line}",
                    write_ocg_json(&host),
                    write_ocg_json(&target),
                    pattern_lines.join("\n")
                ),
                job: Job::SimArrow {
                    host,
                    target,
                    patterns,
                    k,
                    budget,
                },
            })
        }
        Command::Gadget => {
            let n = require(cli.n, "--n", command)?;
            let graph = inputs::plain_graph(inputs::single(&entries, command)?, cli.format)?;
            Ok(Prepared {
                key_material: format!(
                    "op={command}\ninput={}\nn={n}\nmode={:?}\n{out_line}",
                    write_graph6(&graph)?,
                    cli.mode
                ),
                job: Job::Gadget {
                    graph,
                    n,
                    mode: extension_mode(cli.mode),
                },
            })
        }
        Command::Alpha => {
            let host = inputs::host_structure(inputs::keyed(&entries, "host")?)?;
            if let Some(n) = cli.n {
                if n != host.n() {
                    return Err(CliError::invalid(format!(
                        "--n {} disagrees with the host universe {}",
                        n,
                        host.n()
                    )));
                }
            }
            let x = inputs::plain_graph(inputs::keyed(&entries, "x")?, cli.format)?;
            Ok(Prepared {
                key_material: format!(
                    "op={command}\nhost={}\nx={}\nmode={:?}\n{out_line}",
                    write_ocg_json(&host),
                    write_graph6(&x)?,
                    cli.mode
                ),
                job: Job::Alpha {
                    host,
                    x,
                    mode: extension_mode(cli.mode),
                },
            })
        }
        Command::DegreeSearch => {
            let n = require(cli.n, "--n", command)?;
            let k = require(cli.k, "--k", command)?;
            let kind = class_kind(require(cli.class, "--class", command)?);
            let max_target = require(cli.max_size, "--max-size", command)?;
            let max_host = cli.max_host_size.unwrap_or(max_target + 2);
            let x = inputs::plain_graph(inputs::single(&entries, command)?, cli.format)?;
            let budget = cli.budget.unwrap_or(DEFAULT_ARROW_BUDGET);
            Ok(Prepared {
                key_material: format!(
                    "op={command}\ninput={}\nclass={}\nn={n}\nk={k}\nmax-size={max_target}\n\
                     max-host-size={max_host}\nbudget={budget}\n{out_line}",
                    write_graph6(&x)?,
                    class_name(kind)
                ),
                job: Job::DegreeSearch {
                    x,
                    spec: ClassSpec::new(kind, n)?,
                    k,
                    caps: SizeCaps {
                        max_target,
                        max_host,
                    },
                    budget,
                },
            })
        }
        Command::ReportElementary => {
            let n = require(cli.n, "--n", command)?;
            expect_no_input(&entries, command)?;
            Ok(Prepared {
                key_material: format!(
                    "op={command}\nn={n}\nmax-parts={}\nmax-part-size={}\n{out_line}",
                    cli.max_parts, cli.max_part_size
                ),
                job: Job::ReportElementary {
                    n,
                    max_parts: cli.max_parts,
                    max_part_size: cli.max_part_size,
                },
            })
        }
    }
}

fn expect_no_input(entries: &[Entry], command: &str) -> Result<(), CliError> {
    if entries.is_empty() {
        Ok(())
    } else {
        Err(CliError::invalid(format!("{command} takes no --input")))
    }
}

/// Member inputs: encoded structures pass through; bare graphs are wrapped
/// with the shape the class expects. A colored class then correctly
/// rejects the uncolored wrap.
fn member_value(
    entry: &Entry,
    cli: &Cli,
    kind: ClassKind,
    n: usize,
) -> Result<OrderedColoredGraph, CliError> {
    if cli.format == crate::FormatArg::OcgJson {
        return inputs::host_structure(entry);
    }
    let graph = inputs::plain_graph(entry, cli.format)?;
    Ok(if kind.is_ordered() {
        OrderedColoredGraph::with_order(graph, n)?
    } else {
        OrderedColoredGraph::plain(graph, n)?
    })
}

pub fn execute(job: Job, output: OutputArg) -> Result<Outcome, CliError> {
    match job {
        Job::Count { which, graph, n } => {
            let value = match which {
                CountKind::Sigma => sigma(&graph, n)? as u64,
                CountKind::Tau => tau(&graph, n)? as u64,
                CountKind::Autdeg => aut_degree(&graph)?,
                CountKind::Chrom => chromatic_number(&graph)? as u64,
            };
            Ok(done(match output {
                OutputArg::Tsv => format!("{value}\n"),
                OutputArg::Json => format!("{}\n", serde_json::json!({ "value": value })),
            }))
        }
        Job::Member { value, spec } => {
            let member = is_member(&value, &spec)?;
            Ok(done(match output {
                OutputArg::Tsv => format!("{}\n", if member { "yes" } else { "no" }),
                OutputArg::Json => format!("{}\n", serde_json::json!({ "member": member })),
            }))
        }
        Job::Enum { spec, max_size } => {
            let members = enumerate_members(&spec, max_size)?;
            let encodings = members
                .iter()
                .map(encode_structure)
                .collect::<Result<Vec<_>, _>>()?;
            Ok(done(match output {
                OutputArg::Tsv => {
                    let mut text = String::new();
                    for line in &encodings {
                        text.push_str(line);
                        text.push('\n');
                    }
                    text
                }
                OutputArg::Json => {
                    format!("{}\n", serde_json::json!({ "members": encodings }))
                }
            }))
        }
        Job::Extensions { graph, n, mode } => {
            let catalog = match mode {
                ExtensionMode::OrderedColored => enumerate_extensions_ordered(&graph, n)?,
                ExtensionMode::Monotone => enumerate_extensions_monotone(&graph, n)?,
            };
            let encodings: Vec<String> = catalog.items().iter().map(write_ocg_json).collect();
            Ok(done(match output {
                OutputArg::Tsv => {
                    let mut text = String::new();
                    for line in &encodings {
                        text.push_str(line);
                        text.push('\n');
                    }
                    text
                }
                OutputArg::Json => {
                    format!("{}\n", serde_json::json!({ "items": encodings }))
                }
            }))
        }
        Job::Arrow { query, budget } => {
            let result = arrow_check_budgeted(&query, budget)?;
            Ok(done(match output {
                OutputArg::Tsv => {
                    let mut text = String::new();
                    text.push_str(if result.holds { "holds\n" } else { "fails\n" });
                    if let Some(bad) = &result.bad_coloring {
                        text.push_str("copy\tcolor\n");
                        for (i, c) in bad.colors().iter().enumerate() {
                            text.push_str(&format!("{i}\t{c}\n"));
                        }
                    }
                    text
                }
                OutputArg::Json => {
                    let bad = result.bad_coloring.as_ref().map(|bad| {
                        serde_json::json!({
                            "universe": bad.color_universe(),
                            "colors": bad.colors(),
                        })
                    });
                    format!(
                        "{}\n",
                        serde_json::json!({
                            "holds": result.holds,
                            "colorings_examined": result.colorings_examined,
                            "bad_coloring": bad,
                        })
                    )
                }
            }))
        }
        Job::SimArrow {
            host,
            target,
            patterns,
            k,
            budget,
        } => {
            let holds = simultaneous_arrow_check_budgeted(&host, &target, &patterns, k, budget)?;
            Ok(done(match output {
                OutputArg::Tsv => format!("{}\n", if holds { "holds" } else { "fails" }),
                OutputArg::Json => format!("{}\n", serde_json::json!({ "holds": holds })),
            }))
        }
        Job::Gadget { graph, n, mode } => {
            let gadget = build_gadget(&graph, n, mode)?;
            let encoded = write_ocg_json(&gadget);
            Ok(done(match output {
                OutputArg::Tsv => format!("{encoded}\n"),
                OutputArg::Json => format!("{}\n", serde_json::json!({ "gadget": encoded })),
            }))
        }
        Job::Alpha { host, x, mode } => {
            // Monotone mode requires a monotone host; the engine rejects
            // anything else. Reordering here would silently reindex the
            // copies against a structure the caller never wrote.
            let alpha = extension_type_coloring(&host, &x, mode)?;
            Ok(done(match output {
                OutputArg::Tsv => {
                    let mut text = String::from("copy\ttype\n");
                    for (i, c) in alpha.colors().iter().enumerate() {
                        text.push_str(&format!("{i}\t{c}\n"));
                    }
                    text
                }
                OutputArg::Json => format!(
                    "{}\n",
                    serde_json::json!({
                        "universe": alpha.color_universe(),
                        "types": alpha.colors(),
                    })
                ),
            }))
        }
        Job::DegreeSearch {
            x,
            spec,
            k,
            caps,
            budget,
        } => {
            let report = empirical_degree_budgeted(&x, &spec, k, caps, budget)?;
            let exit = if report.upper.is_none() { 4 } else { 0 };
            let stdout = match output {
                OutputArg::Tsv => report.render_text(),
                OutputArg::Json => {
                    let rows: Vec<serde_json::Value> = report
                        .rows
                        .iter()
                        .map(|r| {
                            serde_json::json!({
                                "t": r.t,
                                "uncovered_targets": r.uncovered_targets,
                            })
                        })
                        .collect();
                    format!(
                        "{}\n",
                        serde_json::json!({
                            "class": class_name(report.class.kind),
                            "n": report.class.n,
                            "k": report.k,
                            "max_target": report.caps.max_target,
                            "max_host": report.caps.max_host,
                            "targets_total": report.targets_total,
                            "rows": rows,
                            "upper": report.upper,
                            "lower": report.lower,
                            "exact": report.exact,
                        })
                    )
                }
            };
            Ok(Outcome { stdout, exit })
        }
        Job::ReportElementary {
            n,
            max_parts,
            max_part_size,
        } => {
            let report = elementary_report(n, max_parts, max_part_size)?;
            Ok(done(match output {
                OutputArg::Tsv => report.to_tsv(),
                OutputArg::Json => {
                    let rows: Vec<serde_json::Value> = report
                        .rows
                        .iter()
                        .map(|r| {
                            serde_json::json!({
                                "quantity": match r.quantity {
                                    Quantity::Sigma => "sigma",
                                    Quantity::Tau => "tau",
                                },
                                "parts": r.parts,
                                "part_size": r.part_size,
                                "vertices": r.vertex_count,
                                "closed_form": r.closed_form,
                                "enumerated": r.enumerated,
                                "discrepancy": r.discrepancy,
                            })
                        })
                        .collect();
                    format!("{}\n", serde_json::json!({ "n": report.n, "rows": rows }))
                }
            }))
        }
    }
}

fn done(stdout: String) -> Outcome {
    Outcome { stdout, exit: 0 }
}

fn encode_structure(m: &OrderedColoredGraph) -> Result<String, CliError> {
    if m.coloring().is_some() {
        Ok(write_ocg_json(m))
    } else {
        Ok(write_graph6(m.graph())?)
    }
}
